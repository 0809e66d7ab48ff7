"""
Automorphisms, orbits, isomorphism search and invariant fingerprints.

The search assigns images of basis elements one column at a time, each column
drawn from the nonzero vectors of the matching parity block that are
independent of the columns already chosen.  Every bracket relation
``A[e_i, e_k] = [A e_i, A e_k]`` (and ``A(e_j^{[p]}) = (A e_j)^{[p]}``) is
checked at the first step where all columns it mentions are known, which
prunes most of GL_n x GL_m before a full matrix is ever assembled.

Non-isomorphism is only ever concluded from a fingerprint mismatch; a failed
search over F_q is reported as :class:`NotFoundOverField`.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import linalg
from .cohomology import (
    Cochain,
    RestrictedCochain2,
    cochain_basis,
    d_ce,
    h_ce_dims,
    omega_extend,
    pullback,
    trivial,
)
from .config import Limits
from .errors import BoundExceeded, DimensionMismatch, NotAutomorphism, NotFoundOverField
from .gfield import Field
from .liesuper import (
    GradedMap,
    SuperAlgebra,
    bracket,
    bracket_morphism_report,
    center,
    derived_subalgebra,
    nilindex,
)
from .report import Report
from .restricted import PMap, RestrictedAlgebra, enumerate_pmaps, is_p_nilpotent, pmap_eval, restricted_morphism_report

log = logging.getLogger(__name__)


def gl_order(q: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= q**k - q**i
    return out


def search_space(L: SuperAlgebra) -> int:
    q = L.F.q
    return gl_order(q, L.n) * gl_order(q, L.m)


# ---- block search


def _block_vectors(L: SuperAlgebra, parity: int) -> list[np.ndarray]:
    F = L.F
    cols = range(L.n) if parity == 0 else range(L.n, L.dim)
    width = len(cols)
    out = []
    for coeffs in itertools.product(range(F.q), repeat=width):
        if not any(coeffs):
            continue
        v = np.zeros(L.dim, dtype=np.int64)
        v[list(cols)] = coeffs
        out.append(v)
    return out


@dataclass
class _Schedule:
    brackets: list[list[tuple[int, int]]]
    pmaps: list[list[int]]


def _schedule(L: SuperAlgebra, P: Optional[PMap]) -> _Schedule:
    d = L.dim
    brackets: list[list[tuple[int, int]]] = [[] for _ in range(d)]
    pmaps: list[list[int]] = [[] for _ in range(d)]
    for i in range(d):
        for k in range(i, d):
            support = [int(s) for s in np.nonzero(L.c[i, k])[0]]
            brackets[max([i, k] + support)].append((i, k))
    if P is not None:
        for j in range(L.n):
            support = [int(s) for s in np.nonzero(P.values[j])[0]]
            pmaps[max([j] + support)].append(j)
    return _Schedule(brackets, pmaps)


def _span_add(F: Field, span: list[np.ndarray], v: np.ndarray) -> list[np.ndarray]:
    return [F.add(s, F.scale(int(lam), v)) for s in span for lam in F.elements()]


def _search(
    L1: SuperAlgebra,
    L2: SuperAlgebra,
    P1: Optional[PMap] = None,
    P2: Optional[PMap] = None,
    limits: Limits | None = None,
    first: bool = False,
) -> list[np.ndarray]:
    limits = limits or Limits()
    if L1.sdim != L2.sdim:
        raise DimensionMismatch(f"superdimensions {L1.sdim} and {L2.sdim} differ")
    if L1.field != L2.field:
        raise DimensionMismatch(f"{L1.field} vs {L2.field}")
    size = search_space(L1)
    if size > limits.enum_bound:
        raise BoundExceeded("graded block maps", size, limits.enum_bound)
    F, d = L1.F, L1.dim
    blocks = {0: _block_vectors(L2, 0), 1: _block_vectors(L2, 1)}
    sched = _schedule(L1, P1)
    A = np.zeros((d, d), dtype=np.int64)
    spans: dict[int, list[np.ndarray]] = {0: [np.zeros(d, dtype=np.int64)], 1: [np.zeros(d, dtype=np.int64)]}
    found: list[np.ndarray] = []
    nodes = 0

    def consistent(step: int) -> bool:
        for i, k in sched.brackets[step]:
            lhs = F.matmul(A, L1.c[i, k][:, None])[:, 0]
            if not np.array_equal(lhs, bracket(L2, A[:, i], A[:, k])):
                return False
        for j in sched.pmaps[step]:
            assert P1 is not None and P2 is not None
            lhs = F.matmul(A, P1.values[j][:, None])[:, 0]
            if not np.array_equal(lhs, pmap_eval(P2, A[:, j])):
                return False
        return True

    def extend(step: int) -> bool:
        nonlocal nodes
        if step == d:
            found.append(A.copy())
            return first
        parity = L1.parity(step)
        span = spans[parity]
        taken = {s.tobytes() for s in span}
        for v in blocks[parity]:
            if v.tobytes() in taken:
                continue
            nodes += 1
            A[:, step] = v
            if consistent(step):
                spans[parity] = _span_add(F, span, v)
                stop = extend(step + 1)
                spans[parity] = span
                if stop:
                    return True
        A[:, step] = 0
        return False

    extend(0)
    log.info("block search %r -> %r: %d node(s), %d map(s)", L1, L2, nodes, len(found))
    return found


# ---- automorphism groups


@dataclass
class AutGroup:
    algebra: SuperAlgebra
    elements: list[GradedMap]
    pmap: Optional[PMap] = None
    complete: bool = True

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[GradedMap]:
        return iter(self.elements)

    def matrices(self) -> np.ndarray:
        return np.stack([g.matrix for g in self.elements])


def enumerate_aut(L: SuperAlgebra, limits: Limits | None = None) -> AutGroup:
    maps = _search(L, L, limits=limits)
    return AutGroup(L, [GradedMap.from_matrix(L, L, A) for A in maps])


def enumerate_aut_p(R: RestrictedAlgebra, limits: Limits | None = None) -> AutGroup:
    L = R.algebra
    maps = _search(L, L, R.pmap, R.pmap, limits=limits)
    return AutGroup(L, [GradedMap.from_matrix(L, L, A) for A in maps], R.pmap)


def isomorphism_search(L1: SuperAlgebra, L2: SuperAlgebra, limits: Limits | None = None) -> GradedMap:
    """A verified bracket isomorphism ``L1 -> L2``; :class:`NotFoundOverField` if none over F_q."""
    maps = _search(L1, L2, limits=limits, first=True)
    if not maps:
        raise NotFoundOverField(f"no isomorphism {L1.label or L1} -> {L2.label or L2} over {L1.field}")
    f = GradedMap.from_matrix(L1, L2, maps[0])
    report = bracket_morphism_report(f)
    assert not report, report.lines()
    return f


def restricted_isomorphism_search(
    R1: RestrictedAlgebra, R2: RestrictedAlgebra, limits: Limits | None = None
) -> GradedMap:
    L1, L2 = R1.algebra, R2.algebra
    maps = _search(L1, L2, R1.pmap, R2.pmap, limits=limits, first=True)
    if not maps:
        raise NotFoundOverField(f"no restricted isomorphism {R1!r} -> {R2!r} over {L1.field}")
    f = GradedMap.from_matrix(L1, L2, maps[0])
    report = restricted_morphism_report(f, R1, R2, limits)
    assert not report, report.lines()
    return f


# ---- actions


Cocycle = Union[Cochain, RestrictedCochain2]


def _gram(c: Cochain) -> np.ndarray:
    """``Φ[a, b] = φ(e_a, e_b)`` for a degree-2 scalar cochain."""
    d = c.algebra.dim
    Phi = np.zeros((d, d), dtype=np.int64)
    for a in range(d):
        for b in range(d):
            Phi[a, b] = c.value((a, b))[0]
    return Phi


def _pullback_coeffs(c: Cochain, mats: np.ndarray) -> np.ndarray:
    """Coefficients of ``A^T Φ A`` for a stack of matrices, shape (len(mats), size)."""
    F = c.algebra.F
    Phi = _gram(c)
    images = F.matmul(F.matmul(np.transpose(mats, (0, 2, 1)), Phi), mats)
    tuples = c.basis.tuples
    rows = np.array([t[0] for t in tuples], dtype=np.int64)
    cols = np.array([t[1] for t in tuples], dtype=np.int64)
    return images[:, rows, cols]


def _pullback2(c: Cochain, A: np.ndarray) -> Cochain:
    return Cochain(c.algebra, c.module, 2, _pullback_coeffs(c, np.asarray(A)[None])[0])


def act_on_cocycle(A: GradedMap, c: Cocycle, check: bool = True) -> Cocycle:
    """``(A·φ)(x, y) = φ(Ax, Ay)`` and ``(A·ω)(x) = ω(Ax)``."""
    L = A.source
    if check:
        report = bracket_morphism_report(A)
        if report or not A.is_invertible() or A.target != L:
            raise NotAutomorphism(f"not an automorphism of {L.label or L}")
    M = A.matrix
    if isinstance(c, RestrictedCochain2):
        phi = act_on_cocycle(A, c.phi, check=False)
        assert isinstance(phi, Cochain)
        omega = np.stack([omega_extend(c.phi, c.omega, M[:, j]) for j in range(L.n)]) if L.n else c.omega
        return RestrictedCochain2(phi, omega)
    if c.degree == 2 and c.module.dim == 1:
        return _pullback2(c, M)
    return pullback(c, M)


# ---- cocycle orbits


@dataclass
class CocycleOrbit:
    parity: int
    representative: Cochain
    size: int


@dataclass
class CocycleOrbitTable:
    algebra: SuperAlgebra
    orbits: list[CocycleOrbit]
    _classes: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray, list[int]]] = field(repr=False, default_factory=dict)
    _index: dict[tuple[int, bytes], int] = field(repr=False, default_factory=dict)

    def class_vector(self, c: Cochain) -> tuple[int, np.ndarray]:
        """Parity and coordinates of the class of a homogeneous cocycle."""
        parity = c.parity()
        if parity is None:
            raise DimensionMismatch("orbits are computed for homogeneous cocycles")
        reps, cob, inv, pivots = self._classes[parity]
        coords = _coordinates(self.algebra.F, c.coeffs, inv, pivots, reps.shape[0])
        return parity, coords

    def orbit_index(self, c: Cochain) -> int:
        parity, coords = self.class_vector(c)
        if not np.any(coords):
            return 0
        return self._index[(parity, coords.tobytes())]


def _coordinates(F: Field, v: np.ndarray, inv: np.ndarray, pivots: list[int], h: int) -> np.ndarray:
    full = F.matmul(np.asarray(v)[None, pivots], inv)[0]
    return np.ascontiguousarray(full[:h])


def cocycle_orbits(
    L: SuperAlgebra,
    limits: Limits | None = None,
    group: AutGroup | None = None,
) -> CocycleOrbitTable:
    """Aut(L)-orbits on the homogeneous classes of H^2(L; K).

    Each orbit is represented by its lexicographically least coordinate
    vector on the class representatives, so the table does not depend on
    the enumeration order.
    """
    limits = limits or Limits()
    F = L.F
    group = group or enumerate_aut(L, limits)
    M = trivial(L)
    basis2 = cochain_basis(L, M, 2)
    D2 = d_ce(L, M, 2)
    D1 = d_ce(L, M, 1)
    table = CocycleOrbitTable(L, [CocycleOrbit(0, Cochain.zero(L, M, 2), 1)])
    mats = group.matrices()
    for parity in (0, 1):
        cols = basis2.columns(parity)
        Z = np.zeros((0, basis2.size), dtype=np.int64)
        if len(cols):
            kernel = linalg.nullspace(F, D2[:, cols])
            Z = np.zeros((kernel.shape[0], basis2.size), dtype=np.int64)
            Z[:, cols] = kernel
        cols1 = cochain_basis(L, M, 1).columns(parity)
        B = linalg.row_basis(F, D1[:, cols1].T, basis2.size) if len(cols1) else np.zeros((0, basis2.size), dtype=np.int64)
        reps = linalg.complement(F, B, Z)
        h = reps.shape[0]
        if F.q**h > limits.enum_bound:
            raise BoundExceeded("cohomology classes", F.q**h, limits.enum_bound)
        W = np.vstack([reps, B]) if B.shape[0] else reps
        if W.shape[0] == 0:
            table._classes[parity] = (reps, B, np.zeros((0, 0), dtype=np.int64), [])
            continue
        _, pivots = linalg.rref(F, W)
        inv = linalg.inverse(F, W[:, pivots])
        table._classes[parity] = (reps, B, inv, pivots)
        if h == 0:
            continue
        # class action matrices: row r of G[g] is the class of A_g·reps[r]
        G = np.zeros((len(mats), h, h), dtype=np.int64)
        for r in range(h):
            images = _pullback_coeffs(Cochain(L, M, 2, reps[r]), mats)
            G[:, r] = F.matmul(images[:, pivots], inv)[:, :h]
        seen: set[bytes] = set()
        for coeffs in itertools.product(range(F.q), repeat=h):
            v = np.array(coeffs, dtype=np.int64)
            if not np.any(v) or v.tobytes() in seen:
                continue
            images = F.matmul(v[None, None, :], G)[:, 0, :]
            orbit = {row.tobytes(): row for row in np.ascontiguousarray(images)}
            orbit[v.tobytes()] = v
            seen.update(orbit)
            canonical = min(orbit.values(), key=lambda row: tuple(int(x) for x in row))
            rep = Cochain(L, M, 2, F.matmul(canonical[None, :], reps)[0])
            index = len(table.orbits)
            table.orbits.append(CocycleOrbit(parity, rep, len(orbit)))
            for key in orbit:
                table._index[(parity, key)] = index
    log.info("%r: %d cocycle orbit(s) under %d automorphism(s)", L, len(table.orbits), len(group))
    return table


# ---- p-map orbits


@dataclass
class PMapOrbit:
    representative: PMap
    size: int
    members: list[PMap]


def conjugate_pmap(A: GradedMap, P: PMap) -> PMap:
    """``P'(x) = A P(A^{-1} x)`` on the even basis."""
    L, F = P.algebra, P.algebra.F
    Ainv = A.inverse().matrix
    M = A.matrix
    values = np.zeros_like(P.values)
    for j in range(L.n):
        values[j] = F.matmul(M, pmap_eval(P, Ainv[:, j])[:, None])[:, 0]
    return PMap(L, values, verified=P.verified)


def pmap_orbits(
    L: SuperAlgebra,
    limits: Limits | None = None,
    nilpotent_only: bool = True,
    group: AutGroup | None = None,
) -> list[PMapOrbit]:
    """Classes of p|2p-maps up to Aut(L), each with its lexicographically least member."""
    limits = limits or Limits()
    maps = enumerate_pmaps(L, limits)
    if nilpotent_only:
        maps = [P for P in maps if is_p_nilpotent(RestrictedAlgebra(L, P), limits)]
    group = group or enumerate_aut(L, limits)
    work = len(maps) * len(group)
    if work > limits.enum_bound:
        raise BoundExceeded("p-map conjugations", work, limits.enum_bound)
    by_key = {P.key(): P for P in maps}
    seen: set[tuple[int, ...]] = set()
    out = []
    for P in sorted(maps, key=lambda P: P.key()):
        if P.key() in seen:
            continue
        orbit = {conjugate_pmap(A, P).key() for A in group}
        orbit.add(P.key())
        seen.update(orbit)
        members = [by_key[k] for k in sorted(orbit) if k in by_key]
        out.append(PMapOrbit(members[0], len(orbit), members))
    log.info("%r: %d p-map(s) in %d class(es)", L, len(maps), len(out))
    return out


# ---- fingerprints


@dataclass(frozen=True)
class Fingerprint:
    sdim: tuple[int, int]
    derived: tuple[int, int]
    center: tuple[int, int]
    nilindex: Optional[int]
    h: tuple[tuple[int, int], ...]

    def to_json(self) -> dict:
        return {
            "sdim": list(self.sdim),
            "derived": list(self.derived),
            "center": list(self.center),
            "nilindex": self.nilindex,
            "h": [list(x) for x in self.h],
        }

    @classmethod
    def from_json(cls, doc: dict) -> Fingerprint:
        return cls(
            tuple(doc["sdim"]),
            tuple(doc["derived"]),
            tuple(doc["center"]),
            doc["nilindex"],
            tuple(tuple(x) for x in doc["h"]),
        )


def fingerprint(L: SuperAlgebra, degrees: Sequence[int] = (1, 2, 3, 4)) -> Fingerprint:
    M = trivial(L)
    return Fingerprint(
        L.sdim,
        derived_subalgebra(L).sdim,
        center(L).sdim,
        nilindex(L),
        tuple(h_ce_dims(L, M, k) for k in degrees),
    )


def fingerprints(build, primes: Sequence[int]) -> dict[int, Fingerprint]:
    """``{p: fingerprint(build(p))}``; ``build`` maps a prime to an algebra."""
    return {p: fingerprint(build(p)) for p in primes}


def compare_fingerprints(L1: SuperAlgebra, L2: SuperAlgebra) -> Report:
    """Differences between fingerprints; any entry proves non-isomorphism."""
    f1, f2 = fingerprint(L1), fingerprint(L2)
    report = Report()
    for name in ("sdim", "derived", "center", "nilindex", "h"):
        a, b = getattr(f1, name), getattr(f2, name)
        if a != b:
            report.add(name, f"{a} != {b}")
    return report
