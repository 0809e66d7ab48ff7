"""
p|2p-structures on Lie superalgebras.

A :class:`PMap` stores ``e_j^{[p]}`` for the even basis; the value on an
arbitrary even vector is obtained by :func:`pmap_eval`, which folds the
components in ascending index order with

    (λ e_j)^{[p]} = λ^p e_j^{[p]},   (u + v)^{[p]} = u^{[p]} + v^{[p]} + s(u, v).

By Jacobson's criterion a choice of basis values extends to a p|2p-map iff
``ad_{e_j^{[p]}} = (ad_{e_j})^p`` for every even basis element, so the
enumeration in :func:`enumerate_pmaps` solves that linear condition one basis
element at a time.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

import numpy as np

from . import linalg
from .config import Limits
from .errors import BoundExceeded, DimensionMismatch, NotRestricted, OddInput
from .liesuper import (
    GradedMap,
    GradedSubspace,
    Scalar,
    SuperAlgebra,
    ad,
    bracket,
    bracket_morphism_report,
    center,
    homogeneous_vectors,
    is_ideal,
    matrix_power,
)
from .report import Report

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PMap:
    algebra: SuperAlgebra
    values: np.ndarray
    verified: bool = False
    label: str = ""

    def __post_init__(self) -> None:
        L = self.algebra
        vals = np.array(self.values, dtype=np.int64).reshape(L.n, L.dim)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def value(self, j: int) -> np.ndarray:
        return self.values[j]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PMap):
            return NotImplemented
        return self.algebra == other.algebra and np.array_equal(self.values, other.values)

    def __hash__(self) -> int:
        return hash((self.algebra, self.values.tobytes()))

    def key(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.values.reshape(-1))

    def is_zero(self) -> bool:
        return not np.any(self.values)

    def describe(self) -> str:
        L = self.algebra
        if not L.n:
            return "(no even part)"
        parts = [f"{L.names[j]}^[p] = {L.format(self.values[j])}" for j in range(L.n)]
        return ", ".join(parts)

    def to_json(self) -> dict[str, dict[str, object]]:
        L, F = self.algebra, self.algebra.F
        out: dict[str, dict[str, object]] = {}
        for j in range(L.n):
            row = self.values[j]
            entries = {}
            for k in np.nonzero(row)[0]:
                coeffs = F.to_coeffs(int(row[k]))
                entries[L.names[k]] = coeffs[0] if len(coeffs) == 1 else list(coeffs)
            out[L.names[j]] = entries
        return out


def zero_pmap(L: SuperAlgebra) -> PMap:
    return PMap(L, np.zeros((L.n, L.dim), dtype=np.int64), verified=True)


def make_pmap(
    L: SuperAlgebra,
    values: Mapping[str, Mapping[str, Scalar]],
    label: str = "",
    verify: bool = True,
    limits: Limits | None = None,
) -> PMap:
    """Build a p-map from ``{even name: image}``; unnamed basis elements map to 0.

    With ``verify`` the axioms are checked and :class:`NotRestricted` is raised
    on failure.
    """
    rows = np.zeros((L.n, L.dim), dtype=np.int64)
    for name, image in values.items():
        j = L.index(name)
        if j >= L.n:
            raise OddInput(f"p-map values are given on the even basis, {name!r} is odd")
        rows[j] = L.vector(image)
    P = PMap(L, rows, verified=False, label=label)
    if not verify:
        return P
    report = check_pmap_axioms(L, P, limits)
    if report:
        raise NotRestricted(f"not a p|2p-map on {L.label or L}: {report.lines()[0]}", report)
    return PMap(L, rows, verified=True, label=label)


def _require_even(L: SuperAlgebra, *vectors: np.ndarray) -> None:
    for v in vectors:
        v = np.asarray(v)
        if v.shape != (L.dim,):
            raise DimensionMismatch(f"vector of shape {v.shape} for dimension {L.dim}")
        if not L.is_even(v):
            raise OddInput(f"{L.format(v)} is not even")


# ---- s_i terms


def s_sum(L: SuperAlgebra, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """``Σ_i s_i(x, y)`` as the sum over bracket words.

    Each word ``x_1..x_p`` with ``x_k ∈ {x, y}``, ``x_{p-1} = y`` and
    ``x_p = x`` contributes ``[x_1,[x_2,[...,[x_{p-1},x_p]...]]] / ♯x``.
    """
    _require_even(L, x, y)
    F, p = L.F, L.p
    ax, ay = ad(L, x), ad(L, y)
    base = F.matmul(ay, np.asarray(x, dtype=np.int64)[:, None])[:, 0]
    total = np.zeros(L.dim, dtype=np.int64)
    if not np.any(base):
        return total
    for word in itertools.product((0, 1), repeat=p - 2):
        v = base
        for letter in reversed(word):
            v = F.matmul(ax if letter else ay, v[:, None])[:, 0]
            if not np.any(v):
                break
        else:
            count = 1 + sum(word)
            total = F.add(total, F.scale(F.inv(count % p), v))
    return total


def s_lambda_coefficients(L: SuperAlgebra, x: np.ndarray, y: np.ndarray) -> list[np.ndarray]:
    """Coefficients of ``λ^0 .. λ^{p-2}`` in ``(ad_{λx+y})^{p-1}(x)``.

    The coefficient of ``λ^{i-1}`` equals ``i·s_i(x, y)``.
    """
    _require_even(L, x, y)
    F, p = L.F, L.p
    ax, ay = ad(L, x), ad(L, y)
    # poly[k] = coefficient of λ^k
    poly = [np.asarray(x, dtype=np.int64)]
    for _ in range(p - 1):
        nxt = [np.zeros(L.dim, dtype=np.int64) for _ in range(len(poly) + 1)]
        for k, v in enumerate(poly):
            if not np.any(v):
                continue
            nxt[k] = F.add(nxt[k], F.matmul(ay, v[:, None])[:, 0])
            nxt[k + 1] = F.add(nxt[k + 1], F.matmul(ax, v[:, None])[:, 0])
        poly = nxt
    return poly[: p - 1]


def s_sum_lambda(L: SuperAlgebra, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Same value as :func:`s_sum`, read off the λ-expansion."""
    F, p = L.F, L.p
    total = np.zeros(L.dim, dtype=np.int64)
    for k, v in enumerate(s_lambda_coefficients(L, x, y)):
        total = F.add(total, F.scale(F.inv((k + 1) % p), v))
    return total


# ---- evaluation


def pmap_eval(P: PMap, x: np.ndarray) -> np.ndarray:
    L = P.algebra
    _require_even(L, x)
    F = L.F
    result = np.zeros(L.dim, dtype=np.int64)
    acc = np.zeros(L.dim, dtype=np.int64)
    for j in range(L.n):
        lam = int(x[j])
        if not lam:
            continue
        term = np.zeros(L.dim, dtype=np.int64)
        term[j] = lam
        result = F.add(result, F.scale(int(F.frob(lam)), P.values[j]))
        if np.any(acc):
            result = F.add(result, s_sum_lambda(L, acc, term))
        acc = F.add(acc, term)
    return result


def pmap2p_eval(P: PMap, y: np.ndarray) -> np.ndarray:
    """``y^{[2p]} = (½[y, y])^{[p]}`` for odd ``y``."""
    L = P.algebra
    y = np.asarray(y, dtype=np.int64)
    if not L.is_odd(y):
        raise OddInput(f"{L.format(y)} is not odd")
    F = L.F
    half = F.scale(F.from_rational(Fraction(1, 2)), bracket(L, y, y))
    return pmap_eval(P, half)


def pmap_iterate(P: PMap, x: np.ndarray, times: int) -> np.ndarray:
    for _ in range(times):
        x = pmap_eval(P, x)
    return x


# ---- verification


def _even_samples(L: SuperAlgebra, limits: Limits, rng: np.random.Generator) -> Iterator[np.ndarray]:
    return homogeneous_vectors(L, 0, limits.exhaustive_bound, limits.random_samples, rng)


def check_pmap_axioms(
    L: SuperAlgebra,
    P: PMap,
    limits: Limits | None = None,
    rng: np.random.Generator | None = None,
) -> Report:
    """Violations of the p|2p-map axioms; an empty report means restricted."""
    limits = limits or Limits()
    rng = rng or limits.rng()
    F, p, n = L.F, L.p, L.n
    report = Report()
    if P.algebra != L:
        report.add("algebra", "p-map belongs to a different algebra")
        return report

    for j in range(n):
        if not L.is_even(P.values[j]):
            report.add("parity", f"{L.names[j]}^[p] = {L.format(P.values[j])} is not even")
    if report:
        return report

    for j in range(n):
        lhs = ad(L, P.values[j])
        rhs = matrix_power(F, ad(L, L.basis_vector(j)), p)
        if not np.array_equal(lhs, rhs):
            bad = [L.names[k] for k in range(L.dim) if not np.array_equal(lhs[:, k], rhs[:, k])]
            report.add(
                "adjoint",
                f"ad_({L.names[j]}^[p]) != (ad_{L.names[j]})^p on {', '.join(bad)}",
            )

    basis = [L.basis_vector(j) for j in range(n)]
    samples = list(_even_samples(L, limits, rng))
    scalars = F.elements()

    for k, x in enumerate(basis + samples[: limits.random_samples]):
        lam = int(scalars[k % F.q])
        lhs = pmap_eval(P, F.scale(lam, x))
        rhs = F.scale(int(F.frob(lam)), pmap_eval(P, x))
        if not np.array_equal(lhs, rhs):
            report.add("semilinear", f"(λx)^[p] != λ^p x^[p] for λ = {lam}, x = {L.format(x)}")
            break

    even_mask = np.arange(L.dim) < n
    pairs = [(a, b) for a in basis for b in basis]
    for _ in range(min(limits.random_samples, 64)):
        pairs.append((F.random(rng, L.dim) * even_mask, F.random(rng, L.dim) * even_mask))
    for x, y in pairs:
        x, y = np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)
        lhs = pmap_eval(P, F.add(x, y))
        rhs = F.add(F.add(pmap_eval(P, x), pmap_eval(P, y)), s_sum_lambda(L, x, y))
        if not np.array_equal(lhs, rhs):
            report.add("sum", f"(x+y)^[p] != x^[p] + y^[p] + s(x,y) for x = {L.format(x)}, y = {L.format(y)}")
            break

    for k in range(n, L.dim):
        y = L.basis_vector(k)
        lhs = ad(L, pmap2p_eval(P, y))
        rhs = matrix_power(F, ad(L, y), 2 * p)
        if not np.array_equal(lhs, rhs):
            report.add("2p", f"ad_({L.names[k]}^[2p]) != (ad_{L.names[k]})^(2p)")
    log.debug("check_pmap_axioms %r: %d violation(s)", L, len(report))
    return report


# ---- enumeration


def inner_solutions(L: SuperAlgebra, j: int) -> Optional[tuple[np.ndarray, np.ndarray]]:
    """``{f ∈ L_ev : ad_f = (ad_{e_j})^p}`` as (particular solution, basis of z(L)_ev)."""
    F, d, n = L.F, L.dim, L.n
    if not 0 <= j < n:
        raise OddInput(f"index {j} is not an even basis index")
    target = matrix_power(F, ad(L, L.basis_vector(j)), L.p).reshape(-1)
    system = np.stack([L.ad_basis[i].reshape(-1) for i in range(n)], axis=1)
    sol = linalg.solve(F, system, target)
    if sol is None:
        return None
    particular = np.zeros(d, dtype=np.int64)
    particular[:n] = sol
    kernel = linalg.nullspace(F, system)
    directions = np.zeros((kernel.shape[0], d), dtype=np.int64)
    directions[:, :n] = kernel
    return particular, directions


def enumerate_pmaps(
    L: SuperAlgebra,
    limits: Limits | None = None,
    verify: bool = True,
) -> list[PMap]:
    """Every p|2p-map on ``L`` over its field, in a fixed order."""
    limits = limits or Limits()
    F, n = L.F, L.n
    per_basis = []
    for j in range(n):
        sols = inner_solutions(L, j)
        if sols is None:
            log.info("%r: no even f with ad_f = ad_%s^p", L, L.names[j])
            return []
        per_basis.append(sols)
    count = 1
    for _, directions in per_basis:
        count *= F.q ** directions.shape[0]
    if count > limits.pmap_bound:
        raise BoundExceeded("p-map candidates", count, limits.pmap_bound)
    log.info("%r: enumerating %d p-map candidate(s)", L, count)

    choices = []
    for particular, directions in per_basis:
        options = []
        for coeffs in itertools.product(range(F.q), repeat=directions.shape[0]):
            v = particular
            if directions.shape[0]:
                v = F.add(v, F.matmul(np.array(coeffs, dtype=np.int64)[None, :], directions)[0])
            options.append(v)
        choices.append(options)

    # the adjoint condition holds by construction; the rest is re-checked on a small sample
    quick = replace(limits, random_samples=min(limits.random_samples, 16), exhaustive_bound=81)
    result = []
    for combo in itertools.product(*choices):
        values = np.array(combo, dtype=np.int64).reshape(n, L.dim)
        P = PMap(L, values)
        if verify:
            report = check_pmap_axioms(L, P, quick)
            if report:
                log.warning("candidate %s fails: %s", P.describe(), report.lines()[0])
                continue
        result.append(PMap(L, values, verified=True))
    return result


def is_p_nilpotent(R: RestrictedAlgebra, limits: Limits | None = None, exhaustive: bool = False) -> bool:
    """``x^{[p]^k} = 0`` for some k, for every even x.

    Past ``limits.exhaustive_bound`` even elements only the basis and random
    samples are followed; ``exhaustive=True`` visits every even element.
    """
    limits = limits or Limits()
    if exhaustive:
        limits = limits.exhaustive()
    L, P = R.algebra, R.pmap
    F = L.F
    if L.n == 0:
        return True
    starts = [L.basis_vector(j) for j in range(L.n)]
    starts += list(_even_samples(L, limits, limits.rng()))
    for x in starts:
        seen: set[bytes] = set()
        v = x
        while np.any(v):
            key = v.tobytes()
            if key in seen:
                log.debug("%s is not p-nilpotent", L.format(x))
                return False
            seen.add(key)
            v = pmap_eval(P, v)
    return True


# ---- restricted algebras


@dataclass(frozen=True, eq=False)
class RestrictedAlgebra:
    algebra: SuperAlgebra
    pmap: PMap
    label: str = ""

    def __post_init__(self) -> None:
        if self.pmap.algebra != self.algebra:
            raise DimensionMismatch("p-map belongs to a different algebra")
        if not self.pmap.verified:
            report = check_pmap_axioms(self.algebra, self.pmap)
            if report:
                raise NotRestricted(f"not a p|2p-map: {report.lines()[0]}", report)
            object.__setattr__(
                self, "pmap", PMap(self.algebra, self.pmap.values, True, self.pmap.label)
            )

    @property
    def field(self):
        return self.algebra.field

    def p_power(self, x: np.ndarray) -> np.ndarray:
        return pmap_eval(self.pmap, x)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RestrictedAlgebra):
            return NotImplemented
        return self.pmap == other.pmap

    def __hash__(self) -> int:
        return hash(self.pmap)

    def __repr__(self) -> str:
        return f"<{self.label or self.algebra.label or 'RestrictedAlgebra'} {self.pmap.describe()}>"


def is_p_ideal(
    R: RestrictedAlgebra,
    S: GradedSubspace,
    limits: Limits | None = None,
    rng: np.random.Generator | None = None,
) -> bool:
    """Graded ideal closed under the p-map."""
    limits = limits or Limits()
    rng = rng or limits.rng()
    L, F = R.algebra, R.algebra.F
    if not is_ideal(L, S):
        return False
    evens = list(S.even)
    k = len(evens)
    if not k:
        return True
    if F.q**k <= limits.exhaustive_bound:
        combos = itertools.product(range(F.q), repeat=k)
    else:
        combos = (tuple(F.random(rng, k)) for _ in range(limits.random_samples))
    basis = np.array(evens, dtype=np.int64)
    for coeffs in combos:
        v = F.matmul(np.array(coeffs, dtype=np.int64)[None, :], basis)[0]
        if not S.contains(R.p_power(v)):
            return False
    return True


@dataclass
class DerivationSpace:
    """Homogeneous restricted derivations (matrices with ``D[:, b] = D(e_b)``)."""

    algebra: SuperAlgebra
    even: list[np.ndarray]
    odd: list[np.ndarray]
    report: Report = field(default_factory=Report)

    @property
    def sdim(self) -> tuple[int, int]:
        return (len(self.even), len(self.odd))


def _derivation_residual(R: RestrictedAlgebra, D: np.ndarray, parity: int) -> np.ndarray:
    L, F, p = R.algebra, R.algebra.F, R.algebra.p
    d, par = L.dim, L.parities
    parts = []
    for i in range(d):
        for j in range(i, d):
            lhs = F.matmul(D, L.c[i, j][:, None])[:, 0]
            t1 = bracket(L, D[:, i], L.basis_vector(j))
            t2 = bracket(L, L.basis_vector(i), D[:, j])
            if par[i] & parity:
                t2 = F.neg(t2)
            parts.append(F.sub(lhs, F.add(t1, t2)))
    for j in range(L.n):
        lhs = F.matmul(D, R.pmap.values[j][:, None])[:, 0]
        rhs = F.matmul(matrix_power(F, ad(L, L.basis_vector(j)), p - 1), D[:, j][:, None])[:, 0]
        parts.append(F.sub(lhs, rhs))
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def restricted_derivations(
    R: RestrictedAlgebra,
    limits: Limits | None = None,
    rng: np.random.Generator | None = None,
) -> DerivationSpace:
    limits = limits or Limits()
    rng = rng or limits.rng()
    L, F = R.algebra, R.algebra.F
    d, n = L.dim, L.n
    out = DerivationSpace(L, [], [])
    for parity in (0, 1):
        slots = [(a, b) for a in range(d) for b in range(d) if (L.parity(a) ^ L.parity(b)) == parity]
        if not slots:
            continue
        columns = []
        for a, b in slots:
            E = np.zeros((d, d), dtype=np.int64)
            E[a, b] = 1
            columns.append(_derivation_residual(R, E, parity))
        system = np.stack(columns, axis=1)
        for row in linalg.nullspace(F, system):
            D = np.zeros((d, d), dtype=np.int64)
            for (a, b), coeff in zip(slots, row):
                D[a, b] = coeff
            (out.even if parity == 0 else out.odd).append(D)

    # x -> D(x^{[p]}) - ad_x^{p-1} D(x) is not additive in x
    samples = list(homogeneous_vectors(L, 0, 0, min(limits.random_samples, 32), rng)) if n else []
    for D in out.even + out.odd:
        for x in samples:
            lhs = F.matmul(D, R.p_power(x)[:, None])[:, 0]
            rhs = F.matmul(matrix_power(F, ad(L, x), L.p - 1), F.matmul(D, x[:, None]))[:, 0]
            if not np.array_equal(lhs, rhs):
                out.report.add("derivation", f"D(x^[p]) != ad_x^(p-1) D(x) at x = {L.format(x)}")
                break
    log.debug("restricted derivations of %r: sdim %s", L, out.sdim)
    return out


def inner_derivation_sdim(L: SuperAlgebra) -> tuple[int, int]:
    """sdim ad(L) = sdim L - sdim z(L)."""
    z = center(L)
    return (L.n - z.sdim[0], L.m - z.sdim[1])


def outer_derivation_sdim(R: RestrictedAlgebra, limits: Limits | None = None) -> tuple[int, int]:
    """sdim of Der_p(L)/ad(L)."""
    der = restricted_derivations(R, limits)
    inner = inner_derivation_sdim(R.algebra)
    return (der.sdim[0] - inner[0], der.sdim[1] - inner[1])


# ---- morphisms


def restricted_morphism_report(
    f: GradedMap,
    R1: RestrictedAlgebra,
    R2: RestrictedAlgebra,
    limits: Limits | None = None,
    rng: np.random.Generator | None = None,
) -> Report:
    limits = limits or Limits()
    rng = rng or limits.rng()
    L1, L2 = R1.algebra, R2.algebra
    if L1.sdim != L2.sdim or f.source.sdim != L1.sdim:
        raise DimensionMismatch(f"{L1.sdim} -> {L2.sdim} with a map on {f.source.sdim}")
    morphism = GradedMap(L1, L2, f.even_block, f.odd_block)
    report = bracket_morphism_report(morphism)
    xs = [L1.basis_vector(j) for j in range(L1.n)]
    xs += list(_even_samples(L1, limits, rng))
    for x in xs:
        lhs = morphism.apply(R1.p_power(x))
        rhs = R2.p_power(morphism.apply(x))
        if not np.array_equal(lhs, rhs):
            report.add("pmap", f"f({L1.format(x)}^[p]) != f({L1.format(x)})^[p]")
            break
    return report


def check_restricted_morphism(
    f: GradedMap,
    R1: RestrictedAlgebra,
    R2: RestrictedAlgebra,
    limits: Limits | None = None,
) -> bool:
    return not restricted_morphism_report(f, R1, R2, limits)
