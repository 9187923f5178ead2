"""Search bounds and seeds shared by the isomorphism, descent and enumeration code."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, replace

DEFAULT_SEED = 0xD35C


def _env_seed() -> int:
    raw = os.environ.get("DESCENTKIT_SEED")
    if not raw:
        return DEFAULT_SEED
    return int(raw, 0)


@dataclass(frozen=True)
class Config:
    exhaustive_cap: int = 1 << 20     # max |F|^h coefficient tuples scanned exhaustively
    random_trials: int = 1000
    seed: int = DEFAULT_SEED
    retry_bound: int = 16             # alternative generator lifts tried by descend
    enumeration_budget: int = 1 << 16  # candidate tuples examined by enumerate_modules

    def with_(self, **kw) -> "Config":
        return replace(self, **kw)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_env(cls, **kw) -> "Config":
        kw.setdefault("seed", _env_seed())
        return cls(**kw)


DEFAULT = Config()
