"""
Finite-dimensional Lie superalgebras given by structure constants.

A :class:`SuperAlgebra` stores ``c[i, j] = [e_i, e_j]`` as a dense
``(d, d, d)`` array of field codes with the even basis first: indices
``0..n-1`` are even and ``n..n+m-1`` odd.  Algebras are immutable; every
function here is pure.

Besides the bracket itself the module provides the axiom verifier
(:func:`check_axioms`), graded subspaces for the structural invariants
(center, derived algebra, lower central series) and :class:`GradedMap`, the
parity-preserving linear maps used as automorphisms and isomorphism
witnesses.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Union

import numpy as np

from . import linalg
from .config import Limits
from .errors import DimensionMismatch, LoadError, UnknownName
from .gfield import Field, FieldElem, FieldSpec, get_field
from .report import Report

log = logging.getLogger(__name__)

Scalar = Union[int, Fraction, FieldElem, tuple, list, Mapping]


def to_code(F: Field, value: Scalar) -> int:
    """Convert a user-facing coefficient to a field code.

    Accepts integers, fractions, :class:`FieldElem`, residue pairs
    ``[c0, c1]`` and ``{"num": .., "den": ..}`` mappings.
    """
    if isinstance(value, FieldElem):
        if value.spec != F.spec:
            raise DimensionMismatch(f"coefficient from {value.spec} used in {F.spec}")
        return value.code
    if isinstance(value, Mapping):
        return F.from_rational(Fraction(int(value["num"]), int(value.get("den", 1))))
    if isinstance(value, (tuple, list)):
        return F.from_coeffs(value)
    if isinstance(value, (bool, np.bool_)):
        return int(value)
    return F.from_rational(value if isinstance(value, Fraction) else int(value))


def sign(a: int, b: int) -> int:
    """(-1)^(a*b) for parities a, b."""
    return -1 if (a & b) else 1


@dataclass(frozen=True, eq=False)
class SuperAlgebra:
    field: FieldSpec
    n: int
    m: int
    names: tuple[str, ...]
    c: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        d = self.n + self.m
        arr = np.array(self.c, dtype=np.int64, copy=True)
        if arr.shape != (d, d, d):
            raise DimensionMismatch(f"structure constants must be {(d, d, d)}, got {arr.shape}")
        if len(self.names) != d:
            raise DimensionMismatch(f"{len(self.names)} names for dimension {d}")
        if len(set(self.names)) != d:
            raise LoadError(f"duplicate basis names in {self.names}")
        arr.setflags(write=False)
        object.__setattr__(self, "c", arr)
        object.__setattr__(self, "names", tuple(self.names))

    # ---- basic data

    @property
    def dim(self) -> int:
        return self.n + self.m

    @property
    def sdim(self) -> tuple[int, int]:
        return (self.n, self.m)

    @property
    def F(self) -> Field:
        return get_field(self.field)

    @property
    def p(self) -> int:
        return self.field.p

    def parity(self, i: int) -> int:
        return 0 if i < self.n else 1

    @cached_property
    def parities(self) -> np.ndarray:
        return np.array([self.parity(i) for i in range(self.dim)], dtype=np.int64)

    @cached_property
    def ad_basis(self) -> np.ndarray:
        """``ad_basis[i] @ y == [e_i, y]``."""
        ad = np.transpose(self.c, (0, 2, 1)).copy()
        ad.setflags(write=False)
        return ad

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownName(f"{name!r} is not a basis element of {self.label or self.names}") from None

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def vector(self, coeffs: Mapping[str, Scalar]) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        for name, value in coeffs.items():
            v[self.index(name)] = to_code(self.F, value)
        return v

    def even_part(self, v: np.ndarray) -> np.ndarray:
        out = np.array(v, dtype=np.int64, copy=True)
        out[self.n :] = 0
        return out

    def odd_part(self, v: np.ndarray) -> np.ndarray:
        out = np.array(v, dtype=np.int64, copy=True)
        out[: self.n] = 0
        return out

    def is_even(self, v: np.ndarray) -> bool:
        return not np.any(np.asarray(v)[self.n :])

    def is_odd(self, v: np.ndarray) -> bool:
        return not np.any(np.asarray(v)[: self.n])

    def vector_parity(self, v: np.ndarray) -> int | None:
        """0 or 1 for nonzero homogeneous vectors (0 for the zero vector), else None."""
        if self.is_even(v):
            return 0
        if self.is_odd(v):
            return 1
        return None

    def format(self, v: np.ndarray) -> str:
        terms = []
        for i, code in enumerate(np.asarray(v)):
            if not code:
                continue
            coeff = str(FieldElem.from_code(self.field, int(code)))
            if coeff == "1":
                terms.append(self.names[i])
            elif "+" in coeff:
                terms.append(f"({coeff}){self.names[i]}")
            else:
                terms.append(f"{coeff}{self.names[i]}")
        return " + ".join(terms) if terms else "0"

    # ---- identity

    def key(self) -> str:
        """Canonical string identifying the algebra (used for caching)."""
        return json.dumps(
            {
                "p": self.field.p,
                "degree": self.field.degree,
                "modulus": self.field.modulus,
                "n": self.n,
                "m": self.m,
                "names": list(self.names),
                "c": self.c.reshape(-1).tolist(),
            },
            separators=(",", ":"),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SuperAlgebra):
            return NotImplemented
        return (
            self.field == other.field
            and self.sdim == other.sdim
            and self.names == other.names
            and np.array_equal(self.c, other.c)
        )

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        tag = self.label or "SuperAlgebra"
        return f"<{tag} sdim=({self.n}|{self.m}) over {self.field}>"

    def with_label(self, label: str) -> SuperAlgebra:
        return SuperAlgebra(self.field, self.n, self.m, self.names, self.c, label)

    def over(self, spec: FieldSpec) -> SuperAlgebra:
        """Same structure constants read in another field of the same characteristic."""
        if spec.p != self.field.p:
            raise DimensionMismatch(f"cannot move {self.field} constants to {spec}")
        if spec.degree < self.field.degree and np.any(self.c >= spec.p):
            raise DimensionMismatch("constants do not lie in the prime field")
        return SuperAlgebra(spec, self.n, self.m, self.names, self.c, self.label)

    def brackets(self) -> list[tuple[str, str, np.ndarray]]:
        """Nonzero ``[e_i, e_j]`` with ``i <= j``."""
        out = []
        for i in range(self.dim):
            for j in range(i, self.dim):
                if np.any(self.c[i, j]):
                    out.append((self.names[i], self.names[j], self.c[i, j]))
        return out

    @classmethod
    def from_brackets(
        cls,
        field: FieldSpec,
        even: Iterable[str],
        odd: Iterable[str],
        brackets: Iterable[tuple[str, str, Mapping[str, Scalar]]] = (),
        label: str = "",
    ) -> SuperAlgebra:
        """Build an algebra from its nonzero brackets.

        ``[b, a]`` is filled in by super-antisymmetry; listing both orders with
        inconsistent values raises :class:`LoadError`.  Brackets ``[a, a]`` of
        an even ``a`` are stored as given so :func:`check_axioms` can report
        them.
        """
        even, odd = list(even), list(odd)
        names = tuple(even + odd)
        n, d = len(even), len(even) + len(odd)
        F = get_field(field)
        index = {name: k for k, name in enumerate(names)}
        c = np.zeros((d, d, d), dtype=np.int64)
        given: dict[tuple[int, int], np.ndarray] = {}
        for left, right, value in brackets:
            try:
                i, j = index[left], index[right]
            except KeyError as exc:
                raise UnknownName(f"bracket uses unknown basis element {exc}") from None
            vec = np.zeros(d, dtype=np.int64)
            for name, coeff in value.items():
                if name not in index:
                    raise UnknownName(f"bracket value uses unknown basis element {name!r}")
                vec[index[name]] = F.add(vec[index[name]], to_code(F, coeff))
            if (i, j) in given and not np.array_equal(given[(i, j)], vec):
                raise LoadError(f"[{left},{right}] listed twice with different values")
            given[(i, j)] = vec
        for (i, j), vec in given.items():
            c[i, j] = vec
            if i == j:
                continue
            s = -sign(int(i >= n), int(j >= n))
            mirrored = vec if s == 1 else F.neg(vec)
            if (j, i) in given:
                if not np.array_equal(given[(j, i)], mirrored):
                    raise LoadError(
                        f"[{names[i]},{names[j]}] and [{names[j]},{names[i]}] are inconsistent"
                    )
                continue
            c[j, i] = mirrored
        return cls(field, n, d - n, names, c, label)


def abelian(field: FieldSpec, even: Iterable[str], odd: Iterable[str], label: str = "") -> SuperAlgebra:
    return SuperAlgebra.from_brackets(field, even, odd, (), label)


# ---- bracket and adjoint


def _check_vec(L: SuperAlgebra, v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.int64)
    if v.shape != (L.dim,):
        raise DimensionMismatch(f"vector of shape {v.shape} for an algebra of dimension {L.dim}")
    return v


def bracket(L: SuperAlgebra, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    x, y = _check_vec(L, x), _check_vec(L, y)
    F, d = L.F, L.dim
    outer = F.mul(x[:, None], y[None, :])
    return F.matmul(outer.reshape(1, d * d), L.c.reshape(d * d, d))[0]


def ad(L: SuperAlgebra, x: np.ndarray) -> np.ndarray:
    """Matrix of ``y -> [x, y]``."""
    x = _check_vec(L, x)
    d = L.dim
    return L.F.matmul(x[None, :], L.ad_basis.reshape(d, d * d)).reshape(d, d)


def iterated_bracket(L: SuperAlgebra, xs: Iterable[np.ndarray]) -> np.ndarray:
    """``[x_1, ..., x_k] = [[...[x_1, x_2], x_3], ..., x_k]``."""
    it = iter(xs)
    acc = _check_vec(L, next(it))
    for x in it:
        acc = bracket(L, acc, x)
    return acc


def matrix_power(F: Field, A: np.ndarray, e: int) -> np.ndarray:
    result = np.eye(A.shape[0], dtype=np.int64)
    base = np.asarray(A, dtype=np.int64)
    while e:
        if e & 1:
            result = F.matmul(result, base)
        base = F.matmul(base, base)
        e >>= 1
    return result


# ---- axioms


def homogeneous_vectors(
    L: SuperAlgebra,
    parity: int,
    bound: int,
    samples: int,
    rng: np.random.Generator,
) -> Iterator[np.ndarray]:
    """All vectors of one parity when there are at most ``bound``, else ``samples`` random ones."""
    F = L.F
    offset, k = (0, L.n) if parity == 0 else (L.n, L.m)
    total = F.q**k
    if total <= bound:
        for flat in range(total):
            v = np.zeros(L.dim, dtype=np.int64)
            for t in range(k):
                flat, v[offset + t] = divmod(flat, F.q)
            yield v
        return
    for _ in range(samples):
        v = np.zeros(L.dim, dtype=np.int64)
        v[offset : offset + k] = F.random(rng, k)
        yield v


def check_axioms(
    L: SuperAlgebra,
    limits: Limits | None = None,
    rng: np.random.Generator | None = None,
) -> Report:
    """Grading, super-antisymmetry, super-Jacobi and (p = 3) [x,[x,x]] = 0."""
    limits = limits or Limits()
    rng = rng or limits.rng()
    F, d, c, names = L.F, L.dim, L.c, L.names
    par = L.parities
    report = Report()

    for i in range(d):
        for j in range(d):
            for k in np.nonzero(c[i, j])[0]:
                if (par[i] + par[j]) % 2 != par[k]:
                    report.add(
                        "grading",
                        f"[{names[i]},{names[j]}] has a component on {names[k]}",
                    )

    for i in range(d):
        for j in range(i, d):
            expected = c[i, j] if (par[i] & par[j]) else F.neg(c[i, j])
            if not np.array_equal(c[j, i], expected):
                report.add(
                    "antisymmetry",
                    f"[{names[j]},{names[i]}] != -(-1)^(|{names[i]}||{names[j]}|)[{names[i]},{names[j]}]",
                )

    # nested[x][(y, z)] = [e_x, [e_y, e_z]]
    flat = c.reshape(d * d, d)
    nested = np.stack([F.matmul(flat, c[x]) for x in range(d)]).reshape(d, d, d, d)
    for x in range(d):
        for y in range(d):
            for z in range(d):
                t1 = nested[x, y, z] if not (par[x] & par[z]) else F.neg(nested[x, y, z])
                t2 = nested[y, z, x] if not (par[y] & par[x]) else F.neg(nested[y, z, x])
                t3 = nested[z, x, y] if not (par[z] & par[y]) else F.neg(nested[z, x, y])
                if np.any(F.add(F.add(t1, t2), t3)):
                    report.add(
                        "jacobi",
                        f"super-Jacobi fails on ({names[x]},{names[y]},{names[z]})",
                    )

    if L.p == 3 and L.m:
        for v in homogeneous_vectors(L, 1, 3**6, max(1000, limits.random_samples), rng):
            if np.any(bracket(L, v, bracket(L, v, v))):
                report.add("cubic", f"[x,[x,x]] != 0 for odd x = {L.format(v)}")
                break
    log.debug("check_axioms %r: %d violation(s)", L, len(report))
    return report


# ---- graded subspaces


@dataclass(frozen=True, eq=False)
class GradedSubspace:
    ambient: SuperAlgebra
    even: np.ndarray
    odd: np.ndarray

    @classmethod
    def from_vectors(cls, L: SuperAlgebra, vectors: Iterable[np.ndarray]) -> GradedSubspace:
        """Span of the even and odd components of ``vectors``, in canonical rref."""
        F, d = L.F, L.dim
        rows = [np.asarray(v, dtype=np.int64) for v in vectors]
        ev = [L.even_part(v) for v in rows]
        od = [L.odd_part(v) for v in rows]
        even = linalg.row_basis(F, np.array(ev).reshape(-1, d), d)
        odd = linalg.row_basis(F, np.array(od).reshape(-1, d), d)
        return cls(L, even, odd)

    @classmethod
    def whole(cls, L: SuperAlgebra) -> GradedSubspace:
        return cls.from_vectors(L, np.eye(L.dim, dtype=np.int64))

    @classmethod
    def zero(cls, L: SuperAlgebra) -> GradedSubspace:
        empty = np.zeros((0, L.dim), dtype=np.int64)
        return cls(L, empty, empty)

    @property
    def sdim(self) -> tuple[int, int]:
        return (self.even.shape[0], self.odd.shape[0])

    @property
    def dim(self) -> int:
        return sum(self.sdim)

    def basis(self) -> np.ndarray:
        return np.vstack([self.even, self.odd])

    def contains(self, v: np.ndarray) -> bool:
        L = self.ambient
        return linalg.in_span(L.F, self.even, L.even_part(v)) and linalg.in_span(
            L.F, self.odd, L.odd_part(v)
        )

    def contains_space(self, other: GradedSubspace) -> bool:
        return all(self.contains(v) for v in other.basis())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedSubspace):
            return NotImplemented
        return (
            self.ambient == other.ambient
            and np.array_equal(self.even, other.even)
            and np.array_equal(self.odd, other.odd)
        )

    __hash__ = None  # type: ignore[assignment]

    def describe(self) -> str:
        vecs = [self.ambient.format(v) for v in self.basis()]
        return "⟨" + ", ".join(vecs) + "⟩" if vecs else "0"


def bracket_spaces(L: SuperAlgebra, U: GradedSubspace, V: GradedSubspace) -> GradedSubspace:
    vecs = [bracket(L, u, v) for u in U.basis() for v in V.basis()]
    return GradedSubspace.from_vectors(L, vecs)


def derived_subalgebra(L: SuperAlgebra) -> GradedSubspace:
    d = L.dim
    return GradedSubspace.from_vectors(L, L.c.reshape(d * d, d))


def center(L: SuperAlgebra) -> GradedSubspace:
    F, d, n = L.F, L.dim, L.n
    # rows (j, k), columns i: the k-th coordinate of [e_i, e_j]
    system = np.transpose(L.c, (1, 2, 0)).reshape(d * d, d)
    vectors = []
    for cols in (range(0, n), range(n, d)):
        cols = list(cols)
        if not cols:
            continue
        kernel = linalg.nullspace(F, system[:, cols])
        for row in kernel:
            v = np.zeros(d, dtype=np.int64)
            v[cols] = row
            vectors.append(v)
    return GradedSubspace.from_vectors(L, vectors)


def lower_central_series(L: SuperAlgebra) -> list[GradedSubspace]:
    """``C^0 = L, C^{k+1} = [C^k, L]``, ending with 0 or the first repeated term."""
    series = [GradedSubspace.whole(L)]
    whole = series[0]
    while True:
        nxt = bracket_spaces(L, series[-1], whole)
        if nxt == series[-1]:
            return series
        series.append(nxt)
        if nxt.dim == 0:
            return series


def nilindex(L: SuperAlgebra) -> int | None:
    """Smallest k with C^k = 0, or None when L is not nilpotent."""
    series = lower_central_series(L)
    if series[-1].dim:
        return None
    return len(series) - 1


def is_ideal(L: SuperAlgebra, S: GradedSubspace) -> bool:
    return all(S.contains(bracket(L, v, L.basis_vector(j))) for v in S.basis() for j in range(L.dim))


def conjugate(L: SuperAlgebra, A: np.ndarray, label: str = "") -> SuperAlgebra:
    """The algebra L' on the same basis names making ``A: L -> L'`` an isomorphism."""
    F, d = L.F, L.dim
    A = np.asarray(A, dtype=np.int64)
    Ainv = linalg.inverse(F, A)
    c = np.zeros((d, d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            c[i, j] = F.matmul(A, bracket(L, Ainv[:, i], Ainv[:, j])[:, None])[:, 0]
    return SuperAlgebra(L.field, L.n, L.m, L.names, c, label or L.label)


# ---- graded maps


@dataclass(frozen=True, eq=False)
class GradedMap:
    """Even linear map given by its (n x n) and (m x m) blocks.

    Columns are images: ``even_block[:, j]`` is the image of the j-th even
    basis element.
    """

    source: SuperAlgebra
    target: SuperAlgebra
    even_block: np.ndarray
    odd_block: np.ndarray

    def __post_init__(self) -> None:
        if self.source.sdim != self.target.sdim:
            raise DimensionMismatch(f"{self.source.sdim} vs {self.target.sdim}")
        n, m = self.source.sdim
        eb = np.asarray(self.even_block, dtype=np.int64).reshape(n, n)
        ob = np.asarray(self.odd_block, dtype=np.int64).reshape(m, m)
        object.__setattr__(self, "even_block", eb)
        object.__setattr__(self, "odd_block", ob)

    @classmethod
    def from_matrix(cls, source: SuperAlgebra, target: SuperAlgebra, M: np.ndarray) -> GradedMap:
        n = source.n
        M = np.asarray(M, dtype=np.int64)
        if np.any(M[:n, n:]) or np.any(M[n:, :n]):
            raise DimensionMismatch("matrix does not preserve parity")
        return cls(source, target, M[:n, :n], M[n:, n:])

    @classmethod
    def from_images(
        cls,
        source: SuperAlgebra,
        target: SuperAlgebra,
        images: Mapping[str, Mapping[str, Scalar]],
    ) -> GradedMap:
        """``images[name]`` is the image of a source basis element; missing names map to 0."""
        M = np.zeros((target.dim, source.dim), dtype=np.int64)
        for name, value in images.items():
            M[:, source.index(name)] = target.vector(value)
        return cls.from_matrix(source, target, M)

    @classmethod
    def identity(cls, L: SuperAlgebra, target: SuperAlgebra | None = None) -> GradedMap:
        return cls(L, target or L, np.eye(L.n, dtype=np.int64), np.eye(L.m, dtype=np.int64))

    @cached_property
    def matrix(self) -> np.ndarray:
        n, m = self.source.sdim
        M = np.zeros((n + m, n + m), dtype=np.int64)
        M[:n, :n] = self.even_block
        M[n:, n:] = self.odd_block
        return M

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.source.F.matmul(self.matrix, np.asarray(v, dtype=np.int64)[:, None])[:, 0]

    def is_invertible(self) -> bool:
        F = self.source.F
        return linalg.rank(F, self.even_block) == self.source.n and linalg.rank(
            F, self.odd_block
        ) == self.source.m

    def inverse(self) -> GradedMap:
        F = self.source.F
        eb = linalg.inverse(F, self.even_block) if self.source.n else self.even_block
        ob = linalg.inverse(F, self.odd_block) if self.source.m else self.odd_block
        return GradedMap(self.target, self.source, eb, ob)

    def compose(self, other: GradedMap) -> GradedMap:
        """``self ∘ other``."""
        F = self.source.F
        return GradedMap(
            other.source,
            self.target,
            F.matmul(self.even_block, other.even_block),
            F.matmul(self.odd_block, other.odd_block),
        )

    def to_json(self) -> dict[str, Any]:
        F = self.source.F
        out: dict[str, Any] = {}
        for j, name in enumerate(self.source.names):
            col = self.matrix[:, j]
            out[name] = {
                self.target.names[k]: _json_coeff(F, int(col[k])) for k in np.nonzero(col)[0]
            }
        return out

    def describe(self) -> list[str]:
        return [
            f"{name} -> {self.target.format(self.matrix[:, j])}"
            for j, name in enumerate(self.source.names)
        ]


def _json_coeff(F: Field, code: int) -> Any:
    coeffs = F.to_coeffs(code)
    return coeffs[0] if len(coeffs) == 1 else list(coeffs)


def bracket_morphism_report(f: GradedMap) -> Report:
    """Violations of ``f([e_i, e_j]) = [f(e_i), f(e_j)]`` on basis pairs."""
    S, T = f.source, f.target
    report = Report()
    images = [f.apply(S.basis_vector(i)) for i in range(S.dim)]
    for i in range(S.dim):
        for j in range(i, S.dim):
            lhs = f.apply(S.c[i, j])
            rhs = bracket(T, images[i], images[j])
            if not np.array_equal(lhs, rhs):
                report.add("bracket", f"f([{S.names[i]},{S.names[j]}]) != [f({S.names[i]}),f({S.names[j]})]")
    return report
