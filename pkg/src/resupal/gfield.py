"""
Exact arithmetic in F_p and F_{p^2} for odd primes p.

Elements are handled in two forms:

* as integer *codes* ``a0 + p*a1`` (``0 <= code < q``) stored in numpy
  ``int64`` arrays; all vector and matrix code in the package works on codes
  and looks results up in the tables held by :class:`Field`;
* as :class:`FieldElem`, a small immutable wrapper with operators, used at
  the API surface and in tests.

F_{p^2} is F_p[x]/(x^2 + c1*x + c0).  The default modulus is x^2 + 1 when
p = 3 (mod 4) and otherwise the irreducible monic quadratic whose
coefficient pair (c0, c1) is lexicographically smallest.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DivisionByZero, InvalidField, MixedFields


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def inverse_mod(a: int, p: int) -> int:
    """Inverse of ``a`` modulo ``p`` by the extended Euclidean algorithm."""
    a %= p
    if a == 0:
        raise DivisionByZero(f"0 has no inverse modulo {p}")
    r0, r1 = p, a
    s0, s1 = 0, 1
    while r1:
        quot = r0 // r1
        r0, r1 = r1, r0 - quot * r1
        s0, s1 = s1, s0 - quot * s1
    return s0 % p


def _has_root(p: int, c0: int, c1: int) -> bool:
    return any((t * t + c1 * t + c0) % p == 0 for t in range(p))


def default_modulus(p: int) -> tuple[int, int]:
    if p % 4 == 3:
        return (1, 0)
    for c0 in range(p):
        for c1 in range(p):
            if not _has_root(p, c0, c1):
                return (c0, c1)
    raise InvalidField(f"no irreducible quadratic over F_{p}")  # pragma: no cover


@dataclass(frozen=True)
class FieldSpec:
    """F_p (``degree=1``) or F_{p^2} (``degree=2``).

    ``modulus`` is the pair (c0, c1) of x^2 + c1*x + c0; it is filled in
    with :func:`default_modulus` when omitted for degree 2.
    """

    p: int
    degree: int = 1
    modulus: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        if not is_prime(self.p) or self.p < 3:
            raise InvalidField(f"p must be an odd prime, got {self.p}")
        if self.degree not in (1, 2):
            raise InvalidField(f"degree must be 1 or 2, got {self.degree}")
        if self.degree == 1:
            if self.modulus is not None:
                raise InvalidField("a modulus is only meaningful for degree 2")
            return
        mod = self.modulus or default_modulus(self.p)
        mod = (mod[0] % self.p, mod[1] % self.p)
        if _has_root(self.p, *mod):
            raise InvalidField(
                f"x^2 + {mod[1]}x + {mod[0]} has a root in F_{self.p}"
            )
        object.__setattr__(self, "modulus", mod)

    @property
    def q(self) -> int:
        return self.p**self.degree

    def __str__(self) -> str:
        if self.degree == 1:
            return f"F_{self.p}"
        c0, c1 = self.modulus  # type: ignore[misc]
        return f"F_{self.q}=F_{self.p}[x]/(x^2+{c1}x+{c0})"


class Field:
    """Lookup tables for arithmetic on integer codes of a :class:`FieldSpec`."""

    def __init__(self, spec: FieldSpec) -> None:
        self.spec = spec
        self.p = p = spec.p
        self.q = q = spec.q
        codes = np.arange(q, dtype=np.int64)
        a0, a1 = codes % p, codes // p
        if spec.degree == 1:
            self._add = (codes[:, None] + codes[None, :]) % p
            self._mul = (codes[:, None] * codes[None, :]) % p
        else:
            c0, c1 = spec.modulus  # type: ignore[misc]
            s0 = (a0[:, None] + a0[None, :]) % p
            s1 = (a1[:, None] + a1[None, :]) % p
            self._add = s0 + p * s1
            hi = a1[:, None] * a1[None, :]
            r0 = (a0[:, None] * a0[None, :] - c0 * hi) % p
            r1 = (a0[:, None] * a1[None, :] + a1[:, None] * a0[None, :] - c1 * hi) % p
            self._mul = r0 + p * r1
        self._neg = ((-a0) % p) + p * ((-a1) % p)
        self._inv = np.zeros(q, dtype=np.int64)
        for code in range(1, q):
            self._inv[code] = self._invert(int(code))
        self._frob = np.array([self.power(int(c), p) for c in codes], dtype=np.int64)

    def _invert(self, code: int) -> int:
        p = self.p
        a0, a1 = code % p, code // p
        if self.spec.degree == 1:
            return inverse_mod(a0, p)
        c0, c1 = self.spec.modulus  # type: ignore[misc]
        # a * conj(a) is the norm, which lies in F_p
        norm = (a0 * a0 - c1 * a0 * a1 + c0 * a1 * a1) % p
        ninv = inverse_mod(norm, p)
        b0 = ((a0 - c1 * a1) * ninv) % p
        b1 = (-a1 * ninv) % p
        return int(b0 + p * b1)

    # ---- scalar and elementwise operations on codes

    def add(self, a, b):
        return self._add[a, b]

    def sub(self, a, b):
        return self._add[a, self._neg[b]]

    def neg(self, a):
        return self._neg[a]

    def mul(self, a, b):
        return self._mul[a, b]

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise DivisionByZero("division by zero in " + str(self.spec))
        return self._inv[a]

    def div(self, a, b):
        return self._mul[a, self.inv(b)]

    def frob(self, a):
        return self._frob[a]

    def power(self, code: int, e: int) -> int:
        result, base = 1, int(code)
        if e < 0:
            base, e = int(self.inv(base)), -e
        while e:
            if e & 1:
                result = int(self._mul[result, base])
            base = int(self._mul[base, base])
            e >>= 1
        return result

    def from_int(self, n: int) -> int:
        return int(n) % self.p

    def from_rational(self, value: int | Fraction) -> int:
        value = Fraction(value)
        num = self.from_int(value.numerator)
        den = self.from_int(value.denominator)
        if den == 0:
            raise DivisionByZero(f"denominator {value.denominator} vanishes mod {self.p}")
        return int(self._mul[num, self._inv[den]])

    def from_coeffs(self, coeffs: tuple[int, ...] | list[int]) -> int:
        a0 = int(coeffs[0]) % self.p
        a1 = int(coeffs[1]) % self.p if len(coeffs) > 1 else 0
        if a1 and self.spec.degree == 1:
            raise MixedFields(f"coefficient pair {tuple(coeffs)} needs F_{self.p}^2")
        return a0 + self.p * a1

    def to_coeffs(self, code: int) -> tuple[int, ...]:
        code = int(code)
        if self.spec.degree == 1:
            return (code,)
        return (code % self.p, code // self.p)

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def nonzero(self) -> np.ndarray:
        return np.arange(1, self.q, dtype=np.int64)

    # ---- vectors and matrices of codes

    def zeros(self, *shape: int) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        p = self.p
        if self.spec.degree == 1:
            return (A @ B) % p
        c0, c1 = self.spec.modulus  # type: ignore[misc]
        A0, A1 = A % p, A // p
        B0, B1 = B % p, B // p
        lo = A0 @ B0
        mid = A0 @ B1 + A1 @ B0
        hi = (A1 @ B1) % p
        r0 = (lo - c0 * hi) % p
        r1 = (mid - c1 * hi) % p
        return r0 + p * r1

    def dot(self, u: np.ndarray, v: np.ndarray) -> int:
        return int(self.matmul(np.asarray(u)[None, :], np.asarray(v)[:, None])[0, 0])

    def vsum(self, arrays: np.ndarray, axis: int = 0) -> np.ndarray:
        """Field sum along ``axis``."""
        arrays = np.asarray(arrays, dtype=np.int64)
        if self.spec.degree == 1:
            return arrays.sum(axis=axis) % self.p
        p = self.p
        return (arrays % p).sum(axis=axis) % p + p * ((arrays // p).sum(axis=axis) % p)

    def scale(self, lam: int, v: np.ndarray) -> np.ndarray:
        return self._mul[int(lam), np.asarray(v, dtype=np.int64)]

    def random(self, rng: np.random.Generator, *shape: int) -> np.ndarray:
        return rng.integers(0, self.q, size=shape, dtype=np.int64)


@lru_cache(maxsize=None)
def get_field(spec: FieldSpec) -> Field:
    return Field(spec)


def prime_field(p: int) -> FieldSpec:
    return FieldSpec(p)


# ---- FieldElem: the immutable element wrapper


@dataclass(frozen=True)
class FieldElem:
    spec: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.spec.degree:
            raise InvalidField(
                f"{self.spec} elements need {self.spec.degree} residue(s), got {self.coeffs}"
            )
        if any(not 0 <= c < self.spec.p for c in self.coeffs):
            raise InvalidField(f"residues must lie in [0, {self.spec.p}): {self.coeffs}")

    @classmethod
    def from_code(cls, spec: FieldSpec, code: int) -> FieldElem:
        return cls(spec, get_field(spec).to_coeffs(code))

    @classmethod
    def of(cls, spec: FieldSpec, *values: int) -> FieldElem:
        """``FieldElem.of(F9, 0, 1)`` is x; ``FieldElem.of(F3, 5)`` is 2."""
        padded = [int(v) % spec.p for v in values] + [0] * spec.degree
        return cls(spec, tuple(padded[: spec.degree]))

    @property
    def code(self) -> int:
        return sum(c * self.spec.p**k for k, c in enumerate(self.coeffs))

    def __add__(self, other: FieldElem) -> FieldElem:
        return field_arith(self, other, "add")

    def __sub__(self, other: FieldElem) -> FieldElem:
        return field_arith(self, other, "sub")

    def __mul__(self, other: FieldElem) -> FieldElem:
        return field_arith(self, other, "mul")

    def __truediv__(self, other: FieldElem) -> FieldElem:
        return field_arith(self, other, "div")

    def __neg__(self) -> FieldElem:
        return FieldElem.from_code(self.spec, int(get_field(self.spec).neg(self.code)))

    def __pow__(self, e: int) -> FieldElem:
        return FieldElem.from_code(self.spec, get_field(self.spec).power(self.code, e))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self) -> str:
        if self.spec.degree == 1:
            return str(self.coeffs[0])
        a0, a1 = self.coeffs
        if not a1:
            return str(a0)
        lin = "x" if a1 == 1 else f"{a1}x"
        return lin if not a0 else f"{a0}+{lin}"


_OPS = {"add", "sub", "mul", "div"}


def field_arith(a: FieldElem, b: FieldElem, op: str) -> FieldElem:
    """Exact ``a <op> b`` for ``op`` in add, sub, mul, div."""
    if op not in _OPS:
        raise ValueError(f"unknown field operation {op!r}")
    if a.spec != b.spec:
        raise MixedFields(f"{a.spec} vs {b.spec}")
    F = get_field(a.spec)
    if op == "div" and b.is_zero():
        raise DivisionByZero(f"{a} / 0 in {a.spec}")
    code = getattr(F, op)(a.code, b.code)
    return FieldElem.from_code(a.spec, int(code))


def frobenius(a: FieldElem) -> FieldElem:
    return FieldElem.from_code(a.spec, int(get_field(a.spec).frob(a.code)))


class NoRoot:
    """Returned by :func:`sqrt` when the argument is a non-square."""

    _instance: NoRoot | None = None

    def __new__(cls) -> NoRoot:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NoRoot"

    def __bool__(self) -> bool:
        return False


NO_ROOT = NoRoot()


def sqrt(a: FieldElem) -> FieldElem | NoRoot:
    """Square root with the lexicographically smallest residue tuple."""
    F = get_field(a.spec)
    roots = [c for c in range(F.q) if int(F.mul(c, c)) == a.code]
    if not roots:
        return NO_ROOT
    best = min(roots, key=F.to_coeffs)
    return FieldElem.from_code(a.spec, best)


def lift(a: FieldElem, target: FieldSpec) -> FieldElem:
    """Embed an F_p element into F_{p^2}."""
    if a.spec.p != target.p or a.spec.degree > target.degree:
        raise MixedFields(f"cannot embed {a.spec} into {target}")
    return FieldElem.of(target, *a.coeffs)


def enumerate_field(spec: FieldSpec) -> list[FieldElem]:
    elems = [FieldElem.from_code(spec, c) for c in range(spec.q)]
    return sorted(elems, key=lambda e: e.coeffs)


def iter_field(spec: FieldSpec) -> Iterator[FieldElem]:
    yield from enumerate_field(spec)
