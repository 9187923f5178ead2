"""JSON reading and writing for algebras, modules and maps.

Scalars are decimal strings.  Paths inside a file (a module's algebra, a
map's source and target) are resolved relative to that file.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path
from typing import Any

import numpy as np

from .algebra import Algebra, AlgebraMap, Grading, GradingSignature
from .errors import ParseError
from .field import Field, FieldDescriptor, make_field
from .module import Module, ModuleMap


def _need(obj: dict, key: str, where: str):
    if key not in obj:
        raise ParseError(f"{where}: missing key {key!r}")
    return obj[key]


def _count(x, what: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool) or x < 0:
        raise ParseError(f"{what} must be a non-negative integer, got {x!r}")
    return x


def _vector(f: Field, raw, n: int, what: str) -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != n:
        raise ParseError(f"{what} must be a list of {n} scalars")
    return f.array([_scalar(f, x) for x in raw])


def _scalar(f: Field, x):
    if isinstance(x, bool):
        raise ParseError(f"bad scalar {x!r}")
    if isinstance(x, (str, int)):
        return f.canon(x)
    raise ParseError(f"bad scalar {x!r}")


def _matrix(f: Field, raw, rows: int, cols: int, what: str) -> np.ndarray:
    """Nested row-major lists, or one flat row-major list."""
    if not isinstance(raw, list):
        raise ParseError(f"{what} must be a list")
    if rows * cols == 0:
        flat = [x for row in raw for x in (row if isinstance(row, list) else [row])]
        if flat:
            raise ParseError(f"{what} must be empty")
        return f.zeros(rows, cols)
    if raw and all(isinstance(r, list) for r in raw):
        if len(raw) != rows or any(len(r) != cols for r in raw):
            raise ParseError(f"{what} must be {rows} x {cols}")
        flat = [x for r in raw for x in r]
    else:
        flat = raw
        if len(flat) != rows * cols:
            raise ParseError(f"{what} must have {rows * cols} entries")
    return f.array([_scalar(f, x) for x in flat]).reshape(rows, cols)


def _grading_from_json(raw, n: int, what: str) -> Grading:
    sig_raw = _need(raw, "signature", what)
    sig = GradingSignature(_count(sig_raw.get("z", 0), "z"), _count(sig_raw.get("n", 0), "n"))
    degs = _need(raw, "degrees", what)
    return Grading(sig, _degrees(degs, n, sig.width, what))


def _degrees(degs, n: int, width: int | None, what: str) -> tuple:
    if not isinstance(degs, list) or len(degs) != n:
        raise ParseError(f"{what}: need {n} degrees")
    out = []
    for d in degs:
        if isinstance(d, int) and not isinstance(d, bool):
            d = [d]
        if not isinstance(d, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in d):
            raise ParseError(f"{what}: bad degree {d!r}")
        if width is not None and len(d) != width:
            raise ParseError(f"{what}: degree {d!r} has the wrong length")
        out.append(tuple(d))
    return tuple(out)


# ------------------------------------------------------------------ algebras


def algebra_from_json(obj: Any, name: str = "") -> Algebra:
    if not isinstance(obj, dict):
        raise ParseError("algebra file must hold an object")
    f = make_field(FieldDescriptor.from_json(_need(obj, "field", "algebra")))
    n = _count(_need(obj, "dim", "algebra"), "dim")
    basis = obj.get("basis") or [f"e{i}" for i in range(n)]
    if not isinstance(basis, list) or len(basis) != n or not all(isinstance(b, str) for b in basis):
        raise ParseError(f"basis must list {n} labels")
    unit = _vector(f, _need(obj, "unit", "algebra"), n, "unit")
    mul = f.zeros(n, n, n)
    for entry in _need(obj, "mul", "algebra"):
        if not isinstance(entry, list) or len(entry) != 4:
            raise ParseError(f"mul entry {entry!r} must be [i, j, k, scalar]")
        i, j, k = (_count(x, "mul index") for x in entry[:3])
        if max(i, j, k) >= n:
            raise ParseError(f"mul index out of range in {entry!r}")
        mul[i, j, k] = f.canon(f.add(mul[i, j, k], _scalar(f, entry[3])))
    aug = None
    if obj.get("augmentation") is not None:
        aug = _vector(f, obj["augmentation"], n, "augmentation")
    grading = None
    if obj.get("grading") is not None:
        grading = _grading_from_json(obj["grading"], n, "algebra grading")
    return Algebra(f, mul, unit, tuple(basis), aug, grading, name=name)


def algebra_to_json(a: Algebra) -> dict:
    f = a.field
    mul = [[int(i), int(j), int(k), f.format(a.mul[i, j, k])] for i, j, k in np.argwhere(a.mul != 0)]
    out: dict[str, Any] = {
        "field": f.desc.to_json(),
        "dim": a.dim,
        "basis": list(a.basis),
        "unit": f.to_strings(a.unit),
        "mul": mul,
    }
    if a.augmentation is not None:
        out["augmentation"] = f.to_strings(a.augmentation)
    if a.grading is not None:
        sig = a.grading.signature
        out["grading"] = {
            "signature": {"z": sig.z_count, "n": sig.n_count},
            "degrees": [list(d) for d in a.grading.degrees],
        }
    return out


def module_from_json(obj: Any, algebra: Algebra) -> Module:
    if not isinstance(obj, dict):
        raise ParseError("module file must hold an object")
    f = algebra.field
    n = _count(_need(obj, "dim", "module"), "dim")
    raw = _need(obj, "action", "module")
    if not isinstance(raw, list) or len(raw) != algebra.dim:
        raise ParseError(f"action must list {algebra.dim} matrices")
    acts = f.zeros(algebra.dim, n, n)
    for i, m in enumerate(raw):
        acts[i] = _matrix(f, m, n, n, f"action[{i}]")
    grading = None
    if obj.get("grading") is not None:
        width = algebra.grading.signature.width if algebra.grading is not None else None
        grading = _degrees(obj["grading"], n, width, "module grading")
    return Module(algebra, acts, grading, name=obj.get("name", ""))


def module_to_json(m: Module, algebra_ref: str) -> dict:
    f = m.field
    out: dict[str, Any] = {
        "algebra": algebra_ref,
        "dim": m.dim,
        "action": [f.to_strings(m.action[i]) for i in range(m.algebra.dim)],
    }
    if m.grading is not None:
        out["grading"] = [list(d) for d in m.grading]
    if m.name:
        out["name"] = m.name
    return out


def map_to_json(matrix: np.ndarray, field: Field, source_ref: str, target_ref: str) -> dict:
    return {"source": source_ref, "target": target_ref, "matrix": field.to_strings(matrix)}


# ------------------------------------------------------------------- files


def read_json(path: str | os.PathLike) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed JSON: {exc}") from None
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from None


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_json(path: str | os.PathLike, obj: Any) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


def digest(obj: Any) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def file_digest(path: str | os.PathLike) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def detect_kind(obj: Any) -> str:
    if isinstance(obj, dict):
        if "mul" in obj:
            return "algebra"
        if "action" in obj:
            return "module"
        if "matrix" in obj and "source" in obj:
            return "map"
    raise ParseError("cannot tell whether this is an algebra, module or map file")


class Loader:
    """Caches algebras by resolved path so shared references load once."""

    def __init__(self):
        self._algebras: dict[Path, Algebra] = {}
        self._modules: dict[Path, Module] = {}

    def algebra(self, path: str | os.PathLike) -> Algebra:
        p = Path(path).resolve()
        if p not in self._algebras:
            obj = read_json(p)
            if detect_kind(obj) != "algebra":
                raise ParseError(f"{path}: not an algebra file")
            self._algebras[p] = algebra_from_json(obj, name=p.stem)
        return self._algebras[p]

    def module(self, path: str | os.PathLike) -> Module:
        p = Path(path).resolve()
        if p not in self._modules:
            obj = read_json(p)
            if detect_kind(obj) != "module":
                raise ParseError(f"{path}: not a module file")
            ref = _need(obj, "algebra", "module")
            alg = self.algebra(p.parent / ref)
            mod = module_from_json(obj, alg)
            mod.name = mod.name or p.stem
            self._modules[p] = mod
        return self._modules[p]

    def algebra_map(self, path: str | os.PathLike) -> AlgebraMap:
        p = Path(path).resolve()
        obj = read_json(p)
        if detect_kind(obj) != "map":
            raise ParseError(f"{path}: not a map file")
        src_p = p.parent / _need(obj, "source", "map")
        tgt_p = p.parent / _need(obj, "target", "map")
        if detect_kind(read_json(src_p)) != "algebra":
            raise ParseError(f"{path}: source is not an algebra; use load_module_map")
        a, b = self.algebra(src_p), self.algebra(tgt_p)
        mat = _matrix(b.field, _need(obj, "matrix", "map"), b.dim, a.dim, "map matrix")
        return AlgebraMap(a, b, mat)

    def module_map(self, path: str | os.PathLike) -> ModuleMap:
        p = Path(path).resolve()
        obj = read_json(p)
        src = self.module(p.parent / _need(obj, "source", "map"))
        tgt = self.module(p.parent / _need(obj, "target", "map"))
        mat = _matrix(src.field, _need(obj, "matrix", "map"), tgt.dim, src.dim, "map matrix")
        return ModuleMap(src, tgt, mat)

    def any(self, path: str | os.PathLike):
        """Load a file of any kind; returns ``(kind, object)``."""
        obj = read_json(path)
        kind = detect_kind(obj)
        if kind == "algebra":
            return kind, self.algebra(path)
        if kind == "module":
            return kind, self.module(path)
        src = Path(path).resolve().parent / _need(obj, "source", "map")
        if detect_kind(read_json(src)) == "algebra":
            return "algebra_map", self.algebra_map(path)
        return "module_map", self.module_map(path)
