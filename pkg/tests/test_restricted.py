from __future__ import annotations

import numpy as np
import pytest

from resupal import restricted
from resupal.catalog import DIM3, DIM4, build_K, catalog_get, catalog_restricted
from resupal.config import Limits
from resupal.equivalence import pmap_orbits
from resupal.errors import BoundExceeded, NotRestricted, OddInput
from resupal.gfield import FieldSpec
from resupal.liesuper import GradedMap, GradedSubspace
from resupal.restricted import (
    PMap,
    RestrictedAlgebra,
    check_pmap_axioms,
    check_restricted_morphism,
    enumerate_pmaps,
    is_p_ideal,
    is_p_nilpotent,
    make_pmap,
    outer_derivation_sdim,
    pmap2p_eval,
    pmap_eval,
    restricted_derivations,
)


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("name", [*DIM3, *DIM4])
def test_listed_pmaps_satisfy_the_axioms(name: str, p: int) -> None:
    entry = catalog_get(name, p)
    assert entry.pmaps
    for P in entry.pmaps:
        assert not check_pmap_axioms(entry.algebra, P), (name, P.label)


def test_pmap_is_semilinear_over_f9() -> None:
    spec = FieldSpec(3, 2)
    R = catalog_restricted("L_{2|1}^1(b)", 3, spec)
    L, F = R.algebra, R.algebra.F
    lam = F.from_coeffs([0, 1])
    x = F.scale(lam, L.basis_vector(0))
    expected = F.scale(int(F.frob(lam)), L.basis_vector(1))
    assert np.array_equal(R.p_power(x), expected)
    # the Frobenius twist is visible: x^p = -x for the generator
    assert int(F.frob(lam)) != lam


@pytest.mark.parametrize("p, half", [(3, 2), (5, 3)])
def test_2p_map_is_half_square_to_the_p(p: int, half: int) -> None:
    L = catalog_get("L_{2|1}^2", p).algebra
    P = make_pmap(L, {"e2": {"e1": 1}})
    y = L.basis_vector(2)
    assert np.array_equal(pmap2p_eval(P, y), L.vector({"e1": half}))
    with pytest.raises(OddInput):
        pmap2p_eval(P, L.basis_vector(0))
    with pytest.raises(OddInput):
        pmap_eval(P, y)


def test_make_pmap_rejects_non_restricted_values() -> None:
    L = catalog_get("L_{3|0}^2", 3).algebra
    with pytest.raises(NotRestricted) as info:
        make_pmap(L, {"e1": {"e1": 1}})
    assert "adjoint" in info.value.report.checks()
    with pytest.raises(OddInput):
        make_pmap(catalog_get("L_{2|1}^1", 3).algebra, {"e3": {"e1": 1}})


def test_restricted_algebra_verifies_unchecked_maps() -> None:
    L = catalog_get("L_{3|0}^2", 3).algebra
    bad = PMap(L, np.array([[1, 0, 0], [0, 0, 0], [0, 0, 0]]))
    with pytest.raises(NotRestricted):
        RestrictedAlgebra(L, bad)
    good = PMap(L, np.array([[0, 0, 1], [0, 0, 0], [0, 0, 0]]))
    assert RestrictedAlgebra(L, good).pmap.verified


def test_is_p_nilpotent() -> None:
    L = catalog_get("L_{2|1}^1", 3).algebra
    assert is_p_nilpotent(catalog_restricted("L_{2|1}^1(b)", 3))
    toral = RestrictedAlgebra(L, make_pmap(L, {"e1": {"e1": 1}}))
    assert not is_p_nilpotent(toral)


def test_is_p_ideal() -> None:
    R = catalog_restricted("L_{2|1}^1(b)", 3)
    L = R.algebra
    assert is_p_ideal(R, GradedSubspace.from_vectors(L, [L.basis_vector(1)]))
    # an ideal of the abelian algebra, but e1^[p] = e2 leaves it
    assert not is_p_ideal(R, GradedSubspace.from_vectors(L, [L.basis_vector(0)]))


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("n", [2, 3])
def test_k_families_are_restricted_exactly_when_m_at_most_p(n: int, p: int) -> None:
    for m in range(1, p + 3):
        maps = enumerate_pmaps(build_K(n, m, p))
        assert bool(maps) == (m <= p), (n, m, p)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_k4_even_members_need_m_below_p(p: int) -> None:
    for m in (2, 4, 6):
        assert bool(enumerate_pmaps(build_K(4, m, p))) == (m < p), (m, p)


def test_k45_only_has_the_zero_map_from_p5() -> None:
    assert enumerate_pmaps(build_K(4, 5, 3)) == []
    maps = enumerate_pmaps(build_K(4, 5, 5))
    assert len(maps) == 1
    assert maps[0].is_zero()


def test_enumeration_bound() -> None:
    L = catalog_get("L_{4|0}^1", 3).algebra
    with pytest.raises(BoundExceeded) as info:
        enumerate_pmaps(L, Limits(pmap_bound=100))
    assert info.value.size == 3**16


def test_nilpotent_pmap_classes_on_l21_2() -> None:
    L = catalog_get("L_{2|1}^2", 3).algebra
    assert len(enumerate_pmaps(L)) == 81
    classes = pmap_orbits(L)
    # zero, e1 -> e2 and e2 -> e1
    assert len(classes) == 3
    assert classes[0].representative.is_zero()
    assert sum(c.size for c in classes) == 9


def test_restricted_derivations_of_an_abelian_algebra() -> None:
    R = catalog_restricted("L_{2|1}^1(a)", 3)
    der = restricted_derivations(R)
    assert der.sdim == (5, 4)
    assert not der.report
    assert outer_derivation_sdim(R) == (5, 4)


def test_scaling_is_a_restricted_morphism() -> None:
    R = catalog_restricted("L_{2|1}^1(b)", 5)
    L = R.algebra
    # e1 -> 2e1 forces e2 -> 2^p e2 = 2e2
    f = GradedMap.from_images(L, L, {"e1": {"e1": 2}, "e2": {"e2": 2}, "e3": {"e3": 1}})
    assert check_restricted_morphism(f, R, R)
    g = GradedMap.from_images(L, L, {"e1": {"e1": 2}, "e2": {"e2": 1}, "e3": {"e3": 1}})
    assert not check_restricted_morphism(g, R, R)


def test_exhaustive_nilpotency_walks_every_even_element(monkeypatch) -> None:
    # 7^4 even elements is past the sampling threshold
    L = catalog_get("L_{4|0}^1", 7).algebra
    R = RestrictedAlgebra(L, PMap(L, np.zeros((4, 4), dtype=np.int64)))
    calls: list[int] = []
    real = restricted.pmap_eval

    def counting(P: PMap, x: np.ndarray) -> np.ndarray:
        calls.append(1)
        return real(P, x)

    monkeypatch.setattr(restricted, "pmap_eval", counting)
    assert is_p_nilpotent(R)
    sampled = len(calls)
    calls.clear()
    assert is_p_nilpotent(R, exhaustive=True)
    assert len(calls) == 4 + 7**4 - 1
    assert sampled < len(calls)
