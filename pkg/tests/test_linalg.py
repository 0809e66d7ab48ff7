from __future__ import annotations

import numpy as np
import pytest

from resupal import linalg
from resupal.errors import DimensionMismatch, DivisionByZero
from resupal.gfield import FieldSpec, get_field

F3 = get_field(FieldSpec(3))
F9 = get_field(FieldSpec(3, 2))


def test_rref_pivots_and_rank() -> None:
    A = np.array([[1, 2, 0], [2, 1, 0], [0, 0, 1]])
    R, piv = linalg.rref(F3, A)
    # the second row is twice the first mod 3
    assert piv == [0, 2]
    assert linalg.rank(F3, A) == 2
    assert np.array_equal(R[0], [1, 2, 0])


def test_nullspace_is_annihilated() -> None:
    rng = np.random.default_rng(0)
    for F in (F3, F9):
        A = F.random(rng, 3, 6)
        N = linalg.nullspace(F, A)
        assert N.shape[0] == 6 - linalg.rank(F, A)
        assert not np.any(F.matmul(A, N.T))


def test_solve_and_inverse() -> None:
    A = np.array([[1, 1], [0, 2]])
    x = linalg.solve(F3, A, np.array([2, 1]))
    assert x is not None
    assert np.array_equal(F3.matmul(A, x[:, None])[:, 0], [2, 1])
    inv = linalg.inverse(F3, A)
    assert np.array_equal(F3.matmul(A, inv), np.eye(2, dtype=np.int64))
    assert linalg.solve(F3, np.array([[1, 1], [1, 1]]), np.array([0, 1])) is None
    with pytest.raises(DivisionByZero):
        linalg.inverse(F3, np.array([[1, 1], [1, 1]]))
    with pytest.raises(DimensionMismatch):
        linalg.solve(F3, A, np.array([1, 2, 3]))


def test_complement_extends_a_basis() -> None:
    full = np.eye(4, dtype=np.int64)
    sub = np.array([[1, 1, 0, 0]])
    comp = linalg.complement(F3, sub, full)
    assert comp.shape[0] == 3
    assert linalg.rank(F3, np.vstack([sub, comp])) == 4
    assert linalg.complement(F3, full, full).shape == (0, 4)


def test_span_membership_coordinates_and_intersection() -> None:
    basis = np.array([[1, 0, 1], [0, 1, 1]])
    v = F3.add(basis[0], F3.scale(2, basis[1]))
    assert linalg.in_span(F3, basis, v)
    assert not linalg.in_span(F3, basis, np.array([0, 0, 1]))
    c = linalg.coordinates(F3, basis, v)
    assert c is not None and list(c) == [1, 2]
    U = np.array([[1, 0, 0], [0, 1, 0]])
    V = np.array([[0, 1, 0], [0, 0, 1]])
    meet = linalg.intersect(F3, U, V)
    assert meet.shape[0] == 1
    assert np.array_equal(meet[0], [0, 1, 0])
