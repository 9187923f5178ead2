"""Backend selection for the GF(p) hot loops.

The compiled ``_ckernels`` extension is used when importable; otherwise the
numpy implementation in ``_pykernels`` is used.  ``DESCENTKIT_PURE=1`` forces
the Python path.
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("DESCENTKIT_PURE", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on build
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

# the compiled kernels keep single products below 2**62
COMPILED_PRIME_LIMIT = 1 << 31

rref_modp = _impl.rref_modp
rank_modp = _impl.rank_modp
first_rank_combination = _impl.first_rank_combination


def backend(name: str):
    """Return the kernel module for ``"cython"`` or ``"python"`` explicitly."""
    if name == "python":
        return _pykernels
    from . import _ckernels  # type: ignore[attr-defined]

    return _ckernels
