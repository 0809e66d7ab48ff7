"""Isomorphisms, automorphism groups, orbits and fingerprints."""

from __future__ import annotations

import numpy as np
import pytest

from resupal.catalog import COCYCLE_REPRESENTATIVES, catalog_get
from resupal.cohomology import parse_cochain
from resupal.config import ENV_BOUND, current_limits
from resupal.equivalence import (
    Fingerprint,
    act_on_cocycle,
    cocycle_orbits,
    compare_fingerprints,
    enumerate_aut,
    fingerprint,
    isomorphism_search,
)
from resupal.errors import BoundExceeded, NotAutomorphism, NotFoundOverField
from resupal.liesuper import GradedMap, bracket_morphism_report


def _sdim(text: str) -> tuple[int, int]:
    if text == "0":
        return (0, 0)
    a, b = text.split("|")
    return (int(a), int(b))


# name -> ([L,L], z(L), H^1..H^4 for p >= 5, {k: H^k at p = 3} where it differs)
INVARIANTS: dict[str, tuple[str, str, list[str], dict[int, str]]] = {
    "L_{1|3}^a": ("0", "1|3", ["1|3", "6|3", "7|9", "15|10"], {}),
    "L_{1|3}^b": ("0|1", "0|2", ["1|2", "3|2", "3|4", "5|4"], {3: "3|5", 4: "7|5"}),
    "L_{1|3}^c": ("1|0", "1|1", ["0|3", "5|0", "0|7", "9|0"], {}),
    "L_{1|3}^e": ("0|2", "0|1", ["1|1", "2|1", "2|2", "3|2"], {3: "2|4", 4: "5|4"}),
    "L_{1|3}^f": ("1|0", "1|2", ["0|3", "5|0", "0|7", "9|0"], {}),
    "L_{1|3}^j": ("1|0", "1|0", ["0|3", "5|0", "0|7", "9|0"], {}),
    "L_{2|2}^a": ("0", "2|2", ["2|2", "4|4", "6|6", "8|8"], {}),
    "L_{2|2}^b": ("1|0", "2|0", ["1|2", "2|2", "2|2", "2|2"], {}),
    "L_{2|2}^c": ("1|0", "2|1", ["1|2", "2|2", "2|2", "2|2"], {}),
    "L_{2|2}^e": ("2|0", "2|0", ["0|2", "1|1", "1|1", "1|1"], {}),
    "L_{2|2}^f": ("2|0", "2|0", ["0|2", "1|0", "0", "0"], {}),
    "L_{2|2}^g": ("0|1", "1|1", ["2|1", "2|2", "2|2", "2|2"], {3: "2|3", 4: "3|4"}),
    "L_{2|2}^h": ("1|1", "1|1", ["1|1", "1|1", "1|1", "1|1"], {3: "1|2", 4: "1|2"}),
    "L_{2|2}^i": ("1|0", "2|1", ["1|2", "2|2", "2|2", "2|2"], {}),
    "L_{2|2}^j": ("2|0", "2|0", ["0|2", "1|0", "0", "0"], {}),
    "L_{2|2}^l": ("2|0", "2|0", ["0|2", "1|0", "0", "0"], {}),
    "L_{3|1}^a": ("0", "3|1", ["3|1", "4|3", "4|4", "4|4"], {}),
    "L_{3|1}^b": ("1|0", "1|1", ["2|1", "3|2", "3|3", "3|3"], {}),
    "L_{3|1}^c": ("1|0", "3|0", ["2|1", "1|2", "0|1", "0"], {}),
    "L_{3|1}^d": ("1|0", "1|0", ["2|1", "1|2", "0|1", "0"], {}),
}


def _expected(name: str, p: int) -> tuple[tuple[int, int], tuple[int, int], tuple[tuple[int, int], ...]]:
    derived, center, hs, at_three = INVARIANTS[name]
    h = [at_three.get(k, hs[k - 1]) if p == 3 else hs[k - 1] for k in range(1, 5)]
    return _sdim(derived), _sdim(center), tuple(_sdim(x) for x in h)


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("name", sorted(INVARIANTS))
def test_invariant_tables(name: str, p: int) -> None:
    fp = fingerprint(catalog_get(name, p).algebra)
    derived, center, h = _expected(name, p)
    assert fp.derived == derived
    assert fp.center == center
    assert fp.h == h


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(INVARIANTS))
def test_invariant_tables_at_p11(name: str) -> None:
    fp = fingerprint(catalog_get(name, 11).algebra)
    derived, center, h = _expected(name, 11)
    assert (fp.derived, fp.center, fp.h) == (derived, center, h)


def test_fingerprint_json() -> None:
    fp = fingerprint(catalog_get("L_{2|2}^g", 3).algebra)
    assert Fingerprint.from_json(fp.to_json()) == fp


RELABELLINGS = [
    ("L_{1|3}^a", "L_{1|3}^g"),
    ("L_{1|3}^b", "L_{1|3}^d"),
    ("L_{1|3}^c", "L_{1|3}^i"),
    ("L_{1|3}^f", "L_{1|3}^h"),
    ("L_{2|2}^a", "L_{2|2}^m"),
    ("L_{2|2}^b", "L_{2|2}^d"),
    ("L_{2|2}^e", "L_{2|2}^k"),
    ("L_{2|2}^g", "L_{2|2}^n"),
    ("L_{2|2}^h", "L_{2|2}^p"),
    ("L_{2|2}^i", "L_{2|2}^o"),
    ("L_{3|1}^c", "L_{3|1}^e"),
    ("L_{2|2}^f", "L_{2|2}^l"),
]


@pytest.mark.parametrize("first, second", RELABELLINGS)
def test_working_names_that_coincide(first: str, second: str) -> None:
    L1, L2 = catalog_get(first, 3).algebra, catalog_get(second, 3).algebra
    assert not compare_fingerprints(L1, L2)
    f = isomorphism_search(L1, L2)
    assert f.is_invertible()
    assert not bracket_morphism_report(f)


def test_fingerprints_separate_table_rows() -> None:
    L1, L2 = catalog_get("L_{2|2}^b", 3).algebra, catalog_get("L_{2|2}^c", 3).algebra
    assert "center" in compare_fingerprints(L1, L2).checks()


def test_search_reports_missing_isomorphisms() -> None:
    L1, L2 = catalog_get("L_{1|3}^c", 3).algebra, catalog_get("L_{1|3}^f", 3).algebra
    with pytest.raises(NotFoundOverField):
        isomorphism_search(L1, L2)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_explicit_witness_from_j_to_f(p: int) -> None:
    Lj, Lf = catalog_get("L_{2|2}^j", p).algebra, catalog_get("L_{2|2}^f", p).algebra
    images = {
        "e1": {"X": 2, "e1": -2},
        "X": {"X": 2, "e1": 2},
        "e2": {"e2": 1, "e3": 1},
        "e3": {"e2": 1, "e3": -1},
    }
    f = GradedMap.from_images(Lj, Lf, images)
    assert f.is_invertible()
    assert not bracket_morphism_report(f)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_explicit_witness_from_c_to_i(p: int) -> None:
    Lc, Li = catalog_get("L_{2|2}^c", p).algebra, catalog_get("L_{2|2}^i", p).algebra
    images = {
        "e1": {"X": 1, "e1": 1},
        "X": {"e1": 1},
        "e2": {"e2": 1, "e3": 1},
        "e3": {"e3": 1},
    }
    f = GradedMap.from_images(Lc, Li, images)
    assert f.is_invertible()
    assert not bracket_morphism_report(f)


@pytest.mark.parametrize("p", [3, 5])
def test_automorphisms_of_l21_2(p: int) -> None:
    L = catalog_get("L_{2|1}^2", p).algebra
    group = enumerate_aut(L)
    assert len(group) == (p - 1) * p * (p - 1)
    for A in group.matrices():
        assert A[0, 1] == 0
        assert A[1, 1] == (A[2, 2] * A[2, 2]) % p


def test_acting_with_a_non_automorphism_fails() -> None:
    L = catalog_get("L_{2|1}^2", 3).algebra
    A = GradedMap.from_matrix(L, L, np.diag([1, 2, 1]))
    with pytest.raises(NotAutomorphism):
        act_on_cocycle(A, parse_cochain(L, "Δ13"))


@pytest.mark.parametrize("base", sorted(COCYCLE_REPRESENTATIVES))
def test_listed_cocycles_lie_in_distinct_orbits(base: str) -> None:
    L = catalog_get(base, 3).algebra
    table = cocycle_orbits(L)
    indices = []
    for text in COCYCLE_REPRESENTATIVES[base]:
        c = parse_cochain(L, text)
        indices.append(0 if c.is_zero() else table.orbit_index(c))
    assert len(set(indices)) == len(indices)
    assert table.orbits[0].size == 1


def test_orbit_index_is_invariant_under_automorphisms() -> None:
    L = catalog_get("L_{1|2}^4", 3).algebra
    table = cocycle_orbits(L)
    c = parse_cochain(L, "Δ22+Δ23")
    for A in list(enumerate_aut(L))[:10]:
        image = act_on_cocycle(A, c)
        assert table.orbit_index(image) == table.orbit_index(c)


def test_orbit_enumeration_follows_the_environment_bound(monkeypatch) -> None:
    L = catalog_get("L_{2|1}^2", 3).algebra
    group = enumerate_aut(L)
    # H^2 = 0|1, so the odd part has 3 classes
    monkeypatch.setenv(ENV_BOUND, "2")
    with pytest.raises(BoundExceeded) as info:
        cocycle_orbits(L, current_limits(), group)
    assert info.value.size == 3
    monkeypatch.setenv(ENV_BOUND, "3")
    assert len(cocycle_orbits(L, current_limits(), group).orbits) >= 2
