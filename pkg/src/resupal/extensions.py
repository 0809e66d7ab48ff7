"""
One-dimensional central extensions.

An extension of ``L`` by a scalar cocycle Δ adds a central element ``X`` with

    [x, y]_new = [x, y]_old + Δ(x, y) X

and, for a restricted pair (φ, ω), ``e_j^{[p]}_new = e_j^{[p]} + ω(e_j) X`` and
``X^{[p]} = 0``.  The new element is appended to the end of its parity block
so the even-first basis convention survives the extension.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import linalg
from .cohomology import (
    Cochain,
    RestrictedCochain2,
    apply_d,
    cochain_basis,
    d1_star,
    restricted_cocycle_report,
    trivial,
)
from .config import Limits
from .errors import BaseMismatch, DegreeMismatch, NoCenter, NotACocycle, NotCentral, NotPClosed, NotRestricted
from .liesuper import (
    GradedMap,
    GradedSubspace,
    SuperAlgebra,
    bracket_morphism_report,
    center,
    check_axioms,
)
from .report import Report
from .restricted import PMap, RestrictedAlgebra, check_pmap_axioms, pmap_eval, restricted_morphism_report

log = logging.getLogger(__name__)

Base = Union[SuperAlgebra, RestrictedAlgebra]
CocycleData = Union[Cochain, RestrictedCochain2]


def _algebra(base: Base) -> SuperAlgebra:
    return base.algebra if isinstance(base, RestrictedAlgebra) else base


@dataclass(frozen=True)
class ExtensionSpec:
    base: Base
    cocycle: CocycleData
    name: str = "X"
    parity: Optional[int] = None

    @property
    def algebra(self) -> SuperAlgebra:
        return _algebra(self.base)

    @property
    def restricted(self) -> bool:
        return isinstance(self.base, RestrictedAlgebra)

    def pair(self) -> RestrictedCochain2:
        """The cocycle as a pair (φ, ω); ω is zero for a bare Δ."""
        if isinstance(self.cocycle, RestrictedCochain2):
            return self.cocycle
        L = self.algebra
        return RestrictedCochain2(self.cocycle, np.zeros((L.n, 1), dtype=np.int64))

    @property
    def phi(self) -> Cochain:
        return self.pair().phi

    def new_parity(self) -> int:
        """|X| = |Δ|; a zero cocycle needs an explicit parity and defaults to even."""
        phi = self.phi
        par = phi.parity()
        if par is None:
            raise DegreeMismatch("the cocycle mixes even and odd components")
        if phi.is_zero():
            return 0 if self.parity is None else self.parity
        if self.parity is not None and self.parity != par:
            raise DegreeMismatch(f"a cocycle of parity {par} cannot add an element of parity {self.parity}")
        return par


@dataclass(frozen=True)
class ExtendedBasis:
    names: tuple[str, ...]
    n: int
    m: int
    embed: tuple[int, ...]
    x_index: int


def _extended_basis(L: SuperAlgebra, name: str, parity: int) -> ExtendedBasis:
    if name in L.names:
        raise BaseMismatch(f"basis name {name!r} is already used")
    even, odd = list(L.names[: L.n]), list(L.names[L.n :])
    if parity == 0:
        names = tuple(even + [name] + odd)
        embed = tuple(i if i < L.n else i + 1 for i in range(L.dim))
        return ExtendedBasis(names, L.n + 1, L.m, embed, L.n)
    names = tuple(even + odd + [name])
    return ExtendedBasis(names, L.n, L.m + 1, tuple(range(L.dim)), L.dim)


def _embed(basis: ExtendedBasis, v: np.ndarray) -> np.ndarray:
    out = np.zeros(len(basis.names), dtype=np.int64)
    out[list(basis.embed)] = v
    return out


def _scalar_check(spec: ExtensionSpec) -> None:
    phi = spec.phi
    if phi.module.dim != 1 or phi.module.kind != "trivial" or phi.module.n_even != 1:
        raise DegreeMismatch("central extensions are built from scalar cocycles")
    if phi.algebra != spec.algebra:
        raise BaseMismatch("the cocycle lives on a different algebra")


def cocycle_report(spec: ExtensionSpec, limits: Limits | None = None) -> Report:
    """Why this request does not define an extension; empty when it does."""
    _scalar_check(spec)
    L = spec.algebra
    report = Report()
    if np.any(apply_d(spec.phi).coeffs):
        report.add("cocycle", "d^2_CE Δ != 0")
    if not spec.restricted:
        return report
    R = spec.base
    assert isinstance(R, RestrictedAlgebra)
    pair = spec.pair()
    parity = spec.new_parity()
    if parity == 1 and np.any(pair.omega):
        report.add("parity", "an odd new element needs ω = 0")
    if parity == 0 and spec.phi.parity() != 0:
        report.add("parity", "restricted extensions by an even element need an even φ")
    report.extend(restricted_cocycle_report(R, trivial(L), pair, limits))
    return report


def central_extend(spec: ExtensionSpec, limits: Limits | None = None) -> Base:
    """Build the extension; raises :class:`NotACocycle` with the report on bad input."""
    L = spec.algebra
    F = L.F
    parity = spec.new_parity()
    report = cocycle_report(spec, limits)
    if report:
        raise NotACocycle(f"cannot extend {L.label or L}: {report.lines()[0]}", report)
    basis = _extended_basis(L, spec.name, parity)
    d = len(basis.names)
    c = np.zeros((d, d, d), dtype=np.int64)
    phi = spec.phi
    for i in range(L.dim):
        for j in range(L.dim):
            v = _embed(basis, L.c[i, j])
            v[basis.x_index] = F.add(v[basis.x_index], int(phi.value((i, j))[0]))
            c[basis.embed[i], basis.embed[j]] = v
    label = f"{L.label or 'L'}+{spec.name}"
    E = SuperAlgebra(L.field, basis.n, basis.m, basis.names, c, label)
    axioms = check_axioms(E, limits)
    if axioms:
        raise NotACocycle(f"extension fails {axioms.lines()[0]}", axioms)
    log.info("extended %r by %s (%s)", L, spec.name, "even" if parity == 0 else "odd")
    if not spec.restricted:
        return E
    R = spec.base
    assert isinstance(R, RestrictedAlgebra)
    omega = spec.pair().omega
    values = np.zeros((basis.n, d), dtype=np.int64)
    for j in range(L.n):
        row = _embed(basis, R.pmap.values[j])
        row[basis.x_index] = F.add(row[basis.x_index], int(omega[j, 0]))
        values[basis.embed[j]] = row
    P = PMap(E, values)
    pmap_report = check_pmap_axioms(E, P, limits)
    if pmap_report:
        raise NotACocycle(f"extended p-map fails {pmap_report.lines()[0]}", pmap_report)
    return RestrictedAlgebra(E, PMap(E, values, verified=True), label)


def extensions_equivalent(
    s1: ExtensionSpec, s2: ExtensionSpec, limits: Limits | None = None
) -> tuple[bool, Optional[GradedMap]]:
    """Equivalent iff the pairs differ by ``d^1_* ψ`` with |ψ| = |X|.

    On success the witness ``σ(x + λX) = x + (λ + ψ(x)) X`` is returned after
    it is verified to be an isomorphism that fixes X and the quotient.
    """
    if s1.algebra != s2.algebra or s1.restricted != s2.restricted:
        raise BaseMismatch("extensions of different algebras")
    if s1.restricted and s1.base != s2.base:
        raise BaseMismatch("extensions of different restricted algebras")
    L = s1.algebra
    F = L.F
    if s1.new_parity() != s2.new_parity():
        return False, None
    M = trivial(L)
    diff = s2.pair() - s1.pair()
    basis1 = cochain_basis(L, M, 1)
    # σ is even, so ψ has the parity of X
    cols = basis1.columns(s1.new_parity())
    images = []
    for col in cols:
        coeffs = np.zeros(basis1.size, dtype=np.int64)
        coeffs[col] = 1
        psi = Cochain(L, M, 1, coeffs)
        if isinstance(s1.base, RestrictedAlgebra):
            images.append(d1_star(s1.base, M, psi).vector())
        else:
            images.append(apply_d(psi).coeffs)
    target = diff.vector() if s1.restricted else diff.phi.coeffs
    if images:
        sol = linalg.solve(F, np.stack(images, axis=1), target)
    else:
        sol = np.zeros(0, dtype=np.int64) if not np.any(target) else None
    if sol is None:
        return False, None
    psi_coeffs = np.zeros(basis1.size, dtype=np.int64)
    psi_coeffs[cols] = sol
    psi = Cochain(L, M, 1, psi_coeffs)
    E1, E2 = central_extend(s1, limits), central_extend(s2, limits)
    A1, A2 = _algebra(E1), _algebra(E2)
    basis = _extended_basis(L, s1.name, s1.new_parity())
    sigma = np.eye(A1.dim, dtype=np.int64)
    for i in range(L.dim):
        sigma[basis.x_index, basis.embed[i]] = int(psi.value((i,))[0])
    witness = GradedMap.from_matrix(A1, A2, sigma)
    if isinstance(E1, RestrictedAlgebra):
        assert isinstance(E2, RestrictedAlgebra)
        check = restricted_morphism_report(witness, E1, E2, limits)
    else:
        check = bracket_morphism_report(witness)
    if check:
        raise NotACocycle(f"equivalence witness fails {check.lines()[0]}", check)
    return True, witness


@dataclass(frozen=True)
class Quotient:
    algebra: Base
    projection: np.ndarray
    pivot: int
    generator: np.ndarray


def quotient_by_central(R: Base, ideal: GradedSubspace | np.ndarray, limits: Limits | None = None) -> Quotient:
    """``R / ⟨X⟩`` for a homogeneous central X, dropping the basis element at X's last nonzero coordinate.

    The projection matrix has shape (dim R - 1, dim R).
    """
    L = _algebra(R)
    F = L.F
    if isinstance(ideal, GradedSubspace):
        if ideal.dim != 1:
            raise NotCentral(f"expected a one-dimensional ideal, got sdim {ideal.sdim}")
        X = ideal.basis()[0]
    else:
        X = np.asarray(ideal, dtype=np.int64)
    if not np.any(X) or L.vector_parity(X) is None:
        raise NotCentral(f"{L.format(X)} is not a homogeneous nonzero element")
    if not center(L).contains(X):
        raise NotCentral(f"{L.format(X)} is not central")
    if isinstance(R, RestrictedAlgebra) and L.is_even(X):
        image = pmap_eval(R.pmap, X)
        if not linalg.in_span(F, X[None, :], image):
            raise NotPClosed(f"{L.format(X)}^[p] = {L.format(image)} leaves the ideal")
    pivot = int(np.nonzero(X)[0][-1])
    keep = [k for k in range(L.dim) if k != pivot]
    inv = int(F.inv(int(X[pivot])))
    proj = np.zeros((L.dim - 1, L.dim), dtype=np.int64)
    for row, k in enumerate(keep):
        proj[row, k] = 1
        proj[row, pivot] = F.neg(F.mul(int(X[k]), inv))
    names = tuple(L.names[k] for k in keep)
    n = L.n - (1 if pivot < L.n else 0)
    d = L.dim - 1
    c = np.zeros((d, d, d), dtype=np.int64)
    for a, ka in enumerate(keep):
        for b, kb in enumerate(keep):
            c[a, b] = F.matmul(proj, L.c[ka, kb][:, None])[:, 0]
    H = SuperAlgebra(L.field, n, d - n, names, c, f"{L.label or 'L'}/<{L.format(X)}>")
    if not isinstance(R, RestrictedAlgebra):
        return Quotient(H, proj, pivot, X)
    values = np.zeros((n, d), dtype=np.int64)
    for a, ka in enumerate(keep[:n]):
        values[a] = F.matmul(proj, R.pmap.values[ka][:, None])[:, 0]
    P = PMap(H, values)
    report = check_pmap_axioms(H, P, limits)
    if report:
        raise NotPClosed(f"quotient p-map fails {report.lines()[0]}")
    return Quotient(RestrictedAlgebra(H, PMap(H, values, verified=True), H.label), proj, pivot, X)


@dataclass(frozen=True)
class Decomposition:
    quotient: Base
    cocycle: CocycleData
    parity: int
    extension: Base
    isomorphism: GradedMap

    def spec(self, name: str) -> ExtensionSpec:
        return ExtensionSpec(self.quotient, self.cocycle, name, self.parity)


def _central_generator(R: Base) -> tuple[np.ndarray, int]:
    L = _algebra(R)
    z = center(L)
    if z.dim == 0:
        raise NoCenter(f"{L.label or L} has trivial center")
    if z.even.shape[0]:
        X = z.even[0]
        if isinstance(R, RestrictedAlgebra):
            for _ in range(L.n + 1):
                image = pmap_eval(R.pmap, X)
                if not np.any(image):
                    break
                X = image
            else:
                raise NotRestricted(f"{L.format(z.even[0])} is not p-nilpotent")
        return X, 0
    return z.odd[0], 1


def decompose_as_extension(R: Base, limits: Limits | None = None) -> Decomposition:
    """Write ``R`` as a central extension of ``R / ⟨X⟩`` and verify the round trip."""
    L = _algebra(R)
    F = L.F
    if L.dim < 2:
        raise NoCenter("nothing to split off a one-dimensional algebra")
    X, parity = _central_generator(R)
    q = quotient_by_central(R, X, limits)
    H = _algebra(q.algebra)
    piv_inv = int(F.inv(int(X[q.pivot])))
    keep = [k for k in range(L.dim) if k != q.pivot]

    def x_coord(v: np.ndarray) -> int:
        return int(F.mul(int(v[q.pivot]), piv_inv))

    M = trivial(H)
    basis2 = cochain_basis(H, M, 2)
    coeffs = np.zeros(basis2.size, dtype=np.int64)
    for t in basis2.tuples:
        a, b = t
        coeffs[basis2.position(t, 0)] = x_coord(L.c[keep[a], keep[b]])
    delta = Cochain(H, M, 2, coeffs)
    if isinstance(q.algebra, RestrictedAlgebra):
        assert isinstance(R, RestrictedAlgebra)
        omega = np.zeros((H.n, 1), dtype=np.int64)
        if parity == 0:
            for a in range(H.n):
                omega[a, 0] = x_coord(R.pmap.values[keep[a]])
        cocycle: CocycleData = RestrictedCochain2(delta, omega)
    else:
        cocycle = delta
    name = L.names[q.pivot]
    spec = ExtensionSpec(q.algebra, cocycle, name, parity)
    E = central_extend(spec, limits)
    EA = _algebra(E)
    basis = _extended_basis(H, name, parity)
    f = np.zeros((EA.dim, L.dim), dtype=np.int64)
    for k in range(L.dim):
        col = _embed(basis, q.projection[:, k])
        col[basis.x_index] = x_coord(np.eye(L.dim, dtype=np.int64)[k])
        f[:, k] = col
    iso = GradedMap.from_matrix(L, EA, f)
    if isinstance(E, RestrictedAlgebra):
        assert isinstance(R, RestrictedAlgebra)
        check = restricted_morphism_report(iso, R, E, limits)
    else:
        check = bracket_morphism_report(iso)
    if check or not iso.is_invertible():
        raise NotACocycle(f"decomposition of {L.label or L} does not round-trip", check)
    log.info("decomposed %r over <%s> (%s)", L, L.format(X), "even" if parity == 0 else "odd")
    return Decomposition(q.algebra, cocycle, parity, E, iso)


def coboundary_pair(R: RestrictedAlgebra, psi: Cochain) -> RestrictedCochain2:
    """``d^1_* ψ`` for a scalar 1-cochain."""
    return d1_star(R, trivial(R.algebra), psi)

