"""Exact scalar arithmetic over prime fields GF(p) and the rationals.

Matrices never hold :class:`Scalar` objects.  They are numpy arrays of raw
values: ``int64`` residues for small primes, Python ``int`` residues (object
dtype) for large primes, and :class:`fractions.Fraction` (object dtype) over
the rationals.  :class:`Scalar` is the boxed, field-tagged value used at API
boundaries.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Iterator

import numpy as np
import sympy

from .errors import DivisionByZero, FieldMismatch, NonPrimeModulus, ParseError

# int64 matmul of n x n blocks stays exact while n * p**2 < 2**63
_INT64_PRIME_LIMIT = 1 << 24

# integers below 2**53 are exact in float64
_FLOAT_EXACT = 1 << 53

_SCALAR_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


@dataclass(frozen=True)
class FieldDescriptor:
    kind: str  # "prime" | "rational"
    p: int | None = None

    def to_json(self) -> dict[str, Any]:
        if self.kind == "prime":
            return {"kind": "prime", "p": self.p}
        return {"kind": "rational"}

    @classmethod
    def from_json(cls, obj: Any) -> "FieldDescriptor":
        if not isinstance(obj, dict) or obj.get("kind") not in ("prime", "rational"):
            raise ParseError(f"bad field descriptor: {obj!r}")
        if obj["kind"] == "prime":
            p = obj.get("p")
            if not isinstance(p, int) or isinstance(p, bool):
                raise ParseError(f"prime field needs integer p, got {p!r}")
            return cls("prime", p)
        return cls("rational")


class Field:
    """A handle supplying zero, one, canonical forms and array helpers."""

    def __init__(self, desc: FieldDescriptor):
        if desc.kind == "prime":
            if desc.p is None or desc.p < 2 or not sympy.isprime(desc.p):
                raise NonPrimeModulus(f"{desc.p} is not prime")
        elif desc.kind != "rational":
            raise ValueError(f"unknown field kind {desc.kind!r}")
        self.desc = desc

    # identity -----------------------------------------------------------
    @property
    def kind(self) -> str:
        return self.desc.kind

    @property
    def p(self) -> int | None:
        return self.desc.p

    @property
    def is_finite(self) -> bool:
        return self.desc.kind == "prime"

    @property
    def order(self) -> int | None:
        return self.desc.p

    @cached_property
    def uses_int64(self) -> bool:
        return self.is_finite and self.desc.p < _INT64_PRIME_LIMIT

    @property
    def dtype(self):
        return np.int64 if self.uses_int64 else object

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and other.desc == self.desc

    def __hash__(self) -> int:
        return hash(self.desc)

    def __repr__(self) -> str:
        return f"GF({self.p})" if self.is_finite else "QQ"

    # raw values -------------------------------------------------------------
    @property
    def zero(self):
        return 0 if self.is_finite else Fraction(0)

    @property
    def one(self):
        return 1 if self.is_finite else Fraction(1)

    def canon(self, x: Any):
        """Canonical raw value of an int, Fraction, numpy int or string."""
        if isinstance(x, Scalar):
            if x.field != self:
                raise FieldMismatch(f"{x.field!r} scalar used in {self!r}")
            return x.value
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, (bool, np.bool_)):
            x = int(x)
        if isinstance(x, np.integer):
            x = int(x)
        if self.is_finite:
            p = self.p
            if isinstance(x, Fraction):
                if x.denominator % p == 0:
                    raise DivisionByZero(f"denominator {x.denominator} vanishes mod {p}")
                return x.numerator * pow(x.denominator, -1, p) % p
            return int(x) % p
        return Fraction(x)

    def parse(self, s: str):
        m = _SCALAR_RE.match(s) if isinstance(s, str) else None
        if m is None:
            raise ParseError(f"bad scalar string {s!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ParseError(f"zero denominator in {s!r}")
        return self.canon(Fraction(num, den)) if den != 1 else self.canon(num)

    def format(self, x) -> str:
        x = self.canon(x)
        if self.is_finite:
            return str(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def add(self, a, b):
        return (a + b) % self.p if self.is_finite else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.is_finite else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.is_finite else a * b

    def neg(self, a):
        return (-a) % self.p if self.is_finite else -a

    def inv(self, a):
        a = self.canon(a)
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.is_finite:
            return pow(int(a), -1, self.p)
        return 1 / a

    def elements(self) -> Iterator[int]:
        if not self.is_finite:
            raise ValueError("the rationals are not enumerable here")
        return iter(range(self.p))

    # arrays -----------------------------------------------------------------
    def reduce(self, arr: np.ndarray) -> np.ndarray:
        if self.is_finite:
            return np.mod(arr, self.p)
        return arr

    def array(self, values: Any, shape: tuple[int, ...] | None = None) -> np.ndarray:
        """Canonical field array from nested lists / arrays of raw values or strings."""
        if isinstance(values, np.ndarray) and values.dtype == self.dtype and self.uses_int64:
            out = np.mod(values, self.p)
        else:
            raw = np.asarray(values, dtype=object)
            out = np.empty(raw.shape, dtype=self.dtype)
            flat_in = raw.reshape(-1)
            flat_out = out.reshape(-1)
            for i, v in enumerate(flat_in):
                flat_out[i] = self.canon(v)
        if shape is not None:
            out = out.reshape(shape)
        return out

    def zeros(self, *shape: int) -> np.ndarray:
        if self.dtype is object:
            out = np.empty(shape, dtype=object)
            out.fill(self.zero)
            return out
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = self.one
        return out

    def unit_vector(self, n: int, i: int) -> np.ndarray:
        v = self.zeros(n)
        v[i] = self.one
        return v

    def mm(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Exact matrix product."""
        if (
            self.uses_int64
            and isinstance(a, np.ndarray) and isinstance(b, np.ndarray)
            and a.dtype == np.int64 and b.dtype == np.int64
            and a.ndim == 2 and b.ndim >= 1 and a.size and b.size
            and a.shape[1] * (self.p - 1) ** 2 < _FLOAT_EXACT
        ):
            # residues are reduced, so the float64 (BLAS) product is exact
            out = np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
            return np.mod(out, self.p)
        out = a @ b
        if isinstance(out, np.ndarray):
            if out.dtype != self.dtype:
                out = self.array(out)
            return self.reduce(out)
        return self.canon(out)

    def kron(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = np.kron(a, b)
        if out.dtype != self.dtype:
            out = self.array(out)
        return self.reduce(out)

    def box(self, x) -> "Scalar":
        return Scalar(self.canon(x), self)

    def to_strings(self, arr: np.ndarray) -> Any:
        arr = np.asarray(arr, dtype=object)
        if arr.ndim == 0:
            return self.format(arr.item())
        return [self.to_strings(row) for row in arr]

    def is_zero(self, arr: np.ndarray) -> bool:
        return not np.any(arr != 0)


def make_field(desc: FieldDescriptor | dict | str | int) -> Field:
    """Build a field handle; ``2`` / ``"GF(2)"`` / ``"QQ"`` shorthands accepted."""
    if isinstance(desc, Field):
        return desc
    if isinstance(desc, dict):
        desc = FieldDescriptor.from_json(desc)
    elif isinstance(desc, int) and not isinstance(desc, bool):
        desc = FieldDescriptor("prime", desc)
    elif isinstance(desc, str):
        s = desc.strip().upper()
        if s in ("Q", "QQ", "RATIONAL"):
            desc = FieldDescriptor("rational")
        else:
            m = re.match(r"^(?:GF\()?(\d+)\)?$", s)
            if not m:
                raise ParseError(f"bad field shorthand {desc!r}")
            desc = FieldDescriptor("prime", int(m.group(1)))
    return Field(desc)


GF2 = make_field(2)
QQ = make_field("QQ")


@dataclass(frozen=True)
class Scalar:
    value: Any
    field: Field

    def _check(self, other: "Scalar") -> None:
        if not isinstance(other, Scalar):
            raise TypeError(f"expected Scalar, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")

    def __add__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return Scalar(self.field.add(self.value, other.value), self.field)

    def __sub__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return Scalar(self.field.sub(self.value, other.value), self.field)

    def __mul__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return Scalar(self.field.mul(self.value, other.value), self.field)

    def __neg__(self) -> "Scalar":
        return Scalar(self.field.neg(self.value), self.field)

    def inverse(self) -> "Scalar":
        return Scalar(self.field.inv(self.value), self.field)

    def __truediv__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return self * other.inverse()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Scalar):
            return NotImplemented
        self._check(other)
        return self.value == other.value

    def __hash__(self) -> int:
        return hash((self.value, self.field))

    def __str__(self) -> str:
        return self.field.format(self.value)


def scalar_arith(op: str, a: Scalar, b: Scalar | None = None):
    """Dispatch ``add | mul | neg | inv | eq`` on boxed scalars."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if op == "eq":
        return a == b
    raise ValueError(f"unknown op {op!r}")


def parse_vector(field: Field, values: Iterable[Any]) -> np.ndarray:
    return field.array(list(values))
