from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resupal.catalog import build_K, catalog_get
from resupal.errors import DimensionMismatch, LoadError, UnknownName
from resupal.gfield import FieldSpec, get_field
from resupal.liesuper import (
    GradedMap,
    SuperAlgebra,
    abelian,
    bracket,
    bracket_morphism_report,
    center,
    check_axioms,
    conjugate,
    derived_subalgebra,
    iterated_bracket,
    lower_central_series,
    nilindex,
)

F3 = FieldSpec(3)


def _heisenberg_odd() -> SuperAlgebra:
    # L^4_{1|2}: [e3, e3] = e1
    return SuperAlgebra.from_brackets(F3, ["e1"], ["e2", "e3"], [("e3", "e3", {"e1": 1})])


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_bracket_is_super_antisymmetric_on_homogeneous_vectors(data) -> None:
    name = data.draw(st.sampled_from(["L_{1|2}^2", "L_{2|2}^4", "L_{3|1}^4", "L_{2|2}^c"]))
    L = catalog_get(name, 5).algebra
    F = L.F
    px, py = data.draw(st.integers(0, 1)), data.draw(st.integers(0, 1))
    x, y = np.zeros(L.dim, dtype=np.int64), np.zeros(L.dim, dtype=np.int64)
    for v, parity in ((x, px), (y, py)):
        lo, hi = (0, L.n) if parity == 0 else (L.n, L.dim)
        for k in range(lo, hi):
            v[k] = data.draw(st.integers(0, F.q - 1))
    lhs = bracket(L, x, y)
    rhs = bracket(L, y, x)
    expected = rhs if (px and py) else F.neg(rhs)
    assert np.array_equal(lhs, expected)


def test_from_brackets_fills_in_the_mirror() -> None:
    L = _heisenberg_odd()
    assert not check_axioms(L)
    L2 = SuperAlgebra.from_brackets(F3, ["e1"], ["e2", "e3"], [("e2", "e3", {"e1": 1})])
    e2, e3 = L2.basis_vector(1), L2.basis_vector(2)
    # two odd elements: [e3, e2] = [e2, e3]
    assert np.array_equal(bracket(L2, e3, e2), bracket(L2, e2, e3))


def test_inconsistent_mirror_is_a_load_error() -> None:
    with pytest.raises(LoadError):
        SuperAlgebra.from_brackets(
            F3, ["a", "b", "c"], [], [("a", "b", {"c": 1}), ("b", "a", {"c": 1})]
        )
    with pytest.raises(UnknownName):
        SuperAlgebra.from_brackets(F3, ["a"], [], [("a", "z", {"a": 1})])


def test_check_axioms_reports_antisymmetry_for_even_square() -> None:
    L = SuperAlgebra.from_brackets(F3, ["e1", "e2"], [], [("e1", "e1", {"e2": 1})])
    report = check_axioms(L)
    assert "antisymmetry" in report.checks()


def test_check_axioms_reports_grading_and_jacobi() -> None:
    bad_grading = SuperAlgebra.from_brackets(F3, ["e1"], ["e2"], [("e1", "e2", {"e1": 1})])
    assert "grading" in check_axioms(bad_grading).checks()
    # [a,b] = c, [a,c] = a and [b,c] = a violates Jacobi
    bad_jacobi = SuperAlgebra.from_brackets(
        F3,
        ["a", "b", "c"],
        [],
        [("a", "b", {"c": 1}), ("a", "c", {"a": 1}), ("b", "c", {"a": 1})],
    )
    assert "jacobi" in check_axioms(bad_jacobi).checks()


def test_cubic_condition_is_the_only_failure_at_p3() -> None:
    # super-Jacobi holds here but [y1,[y1,y1]] = -y2
    L = SuperAlgebra.from_brackets(
        F3, ["x"], ["y1", "y2"], [("y1", "y1", {"x": 1}), ("x", "y1", {"y2": 1})]
    )
    assert check_axioms(L).checks() == {"cubic"}
    assert not check_axioms(L.over(FieldSpec(5)))


def test_center_and_derived_subalgebra() -> None:
    L = _heisenberg_odd()
    assert derived_subalgebra(L).sdim == (1, 0)
    assert center(L).sdim == (1, 1)
    A = abelian(F3, ["a"], ["b", "c"])
    assert center(A).sdim == (1, 2)
    assert derived_subalgebra(A).sdim == (0, 0)


@pytest.mark.parametrize("m", [1, 3, 5, 7])
def test_nilindex_of_k2m_is_m_plus_one(m: int) -> None:
    assert nilindex(build_K(2, m, 3)) == m + 1


def test_lower_central_series_stabilises_for_non_nilpotent() -> None:
    # [x, y] = y is solvable but not nilpotent
    L = SuperAlgebra.from_brackets(F3, ["x", "y"], [], [("x", "y", {"y": 1})])
    series = lower_central_series(L)
    assert series[-1].sdim == (1, 0)
    assert nilindex(L) is None


def test_iterated_bracket_is_left_normed() -> None:
    L = build_K(2, 3, 5)
    x0, y1 = L.basis_vector(L.index("x0")), L.basis_vector(L.index("y1"))
    y3 = L.basis_vector(L.index("y3"))
    # [y1, x0, x0] = [[y1, x0], x0] = y3
    assert np.array_equal(iterated_bracket(L, [y1, x0, x0]), y3)


def test_graded_map_and_conjugation() -> None:
    L = _heisenberg_odd()
    F = get_field(F3)
    A = np.array([[2, 0, 0], [0, 1, 1], [0, 0, 1]], dtype=np.int64)
    L2 = conjugate(L, A)
    f = GradedMap.from_matrix(L, L2, A)
    assert f.is_invertible()
    assert not bracket_morphism_report(f)
    g = f.inverse()
    assert np.array_equal(F.matmul(f.matrix, g.matrix), np.eye(3, dtype=np.int64))
    with pytest.raises(DimensionMismatch):
        GradedMap.from_matrix(L, L, np.array([[1, 1, 0], [0, 1, 0], [0, 0, 1]]))


def test_vector_format_and_index() -> None:
    L = _heisenberg_odd()
    v = L.vector({"e1": 2, "e3": 1})
    assert L.format(v)
    assert L.vector_parity(v) is None
    assert L.is_odd(L.basis_vector(2))
    with pytest.raises(UnknownName):
        L.index("X")
