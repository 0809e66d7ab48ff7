"""Chevalley-Eilenberg and restricted cohomology."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resupal import linalg
from resupal.catalog import catalog_get, catalog_restricted
from resupal.cohomology import (
    Cochain,
    RestrictedCochain2,
    adjoint,
    apply_d,
    b2_res,
    ce_coboundaries,
    ce_cocycles,
    check_module,
    cochain_dim,
    d1_star,
    d_ce,
    delta,
    h1_res_dims,
    h2_res,
    h2_res_plus_even,
    h_ce_dims,
    normal_form,
    parse_cochain,
    restricted_cocycle_report,
    trivial,
    z2_res,
)
from resupal.errors import DegreeMismatch, LoadError

SMALL = ["L_{1|2}^2", "L_{1|2}^3", "L_{1|2}^4", "L_{2|1}^2", "L_{3|0}^2", "L_{0|3}^1"]


@pytest.mark.parametrize("name", SMALL)
@pytest.mark.parametrize("kind", ["trivial", "adjoint"])
def test_differential_squares_to_zero(name: str, kind: str) -> None:
    L = catalog_get(name, 5).algebra
    M = trivial(L) if kind == "trivial" else adjoint(L)
    F = L.F
    for k in range(3):
        assert not np.any(F.matmul(d_ce(L, M, k + 1), d_ce(L, M, k))), k


def test_adjoint_and_trivial_are_modules() -> None:
    R = catalog_restricted("L_{2|1}^2(b)", 3)
    assert not check_module(R, adjoint(R.algebra))
    assert not check_module(R, trivial(R.algebra))


def test_abelian_cohomology_is_the_whole_cochain_space() -> None:
    L = catalog_get("L_{1|2}^1", 3).algebra
    M = trivial(L)
    for k in range(5):
        assert h_ce_dims(L, M, k) == cochain_dim(L, M, k)
    # Δ22, Δ23, Δ33 are even, Δ12 and Δ13 odd
    assert cochain_dim(L, M, 2) == (3, 2)


def test_l21_2_has_one_odd_class_in_degree_two() -> None:
    L = catalog_get("L_{2|1}^2", 3).algebra
    M = trivial(L)
    assert h_ce_dims(L, M, 2) == (0, 1)
    phi = parse_cochain(L, "Δ13")
    assert phi.parity() == 1
    assert apply_d(phi).is_zero()
    Z = ce_cocycles(L, M, 2)
    B = ce_coboundaries(L, M, 2)
    assert B.shape[0] == 0 or not linalg.in_span(L.F, B, phi.coeffs)
    assert linalg.in_span(L.F, Z, phi.coeffs)


def test_normal_form_signs() -> None:
    # two even indices anticommute and cannot repeat
    assert normal_form([1, 0], 2) == (-1, (0, 1))
    assert normal_form([0, 0], 2)[0] == 0
    # two odd indices commute and may repeat
    assert normal_form([1, 0], 0) == (1, (0, 1))
    assert normal_form([1, 1], 0) == (1, (1, 1))
    # an even index passing an odd one still flips the sign
    assert normal_form([2, 0], 1) == (-1, (0, 2))


def test_parse_cochain() -> None:
    L = catalog_get("L_{1|2}^4", 3).algebra
    c = parse_cochain(L, "Δ22 + Δ23")
    assert c == delta(L, 2, 2) + delta(L, 2, 3)
    assert parse_cochain(L, "2*D13") == delta(L, 1, 3, coeff=2)
    assert parse_cochain(L, "-Δ_{2,3}") == -delta(L, 2, 3)
    assert parse_cochain(L, "0").is_zero()
    # an even index cannot repeat
    assert parse_cochain(L, "Δ11").is_zero()
    M = adjoint(L)
    phi = parse_cochain(L, "e2⊗Δ13", M)
    assert str(phi) == "e2⊗Δ13"
    assert str(parse_cochain(L, "Δ22+2Δ23")) == "Δ22 + 2·Δ23"
    with pytest.raises(LoadError):
        parse_cochain(L, "Δ1x")


@pytest.mark.parametrize("p", [3, 5])
def test_worked_example_adjoint_coefficients(p: int) -> None:
    R = catalog_restricted("L_{1|2}^3(a)", p)
    L = R.algebra
    M = adjoint(L)
    assert ce_cocycles(L, M, 2).shape[0] == 8
    assert ce_coboundaries(L, M, 2).shape[0] == 4
    assert h2_res(R, M).dim == 5


def test_worked_example_needs_omega_at_p3() -> None:
    R = catalog_restricted("L_{1|2}^3(a)", 3)
    L = R.algebra
    M = adjoint(L)
    phi4 = parse_cochain(L, "e2⊗Δ13", M)
    bare = RestrictedCochain2(phi4, np.zeros((1, 3), dtype=np.int64))
    assert "ind2" in restricted_cocycle_report(R, M, bare).checks()
    # ω(e1) = γ1 e1 works exactly for γ1 = 1
    for gamma1 in range(3):
        rc = RestrictedCochain2(phi4, np.array([[gamma1, 0, 0]]))
        assert bool(restricted_cocycle_report(R, M, rc)) == (gamma1 != 1)


def test_worked_example_at_p5_needs_no_omega() -> None:
    R = catalog_restricted("L_{1|2}^3(a)", 5)
    M = adjoint(R.algebra)
    phi4 = parse_cochain(R.algebra, "e2⊗Δ13", M)
    assert not restricted_cocycle_report(R, M, RestrictedCochain2(phi4, np.zeros((1, 3))))


@pytest.mark.parametrize("name", ["L_{1|2}^3(a)", "L_{2|1}^2(b)", "L_{3|0}^2(b)", "L_{1|2}^4(a)"])
def test_restricted_coboundaries_are_cocycles(name: str) -> None:
    R = catalog_restricted(name, 3)
    L, F = R.algebra, R.algebra.F
    for M in (trivial(L), adjoint(L)):
        Z = z2_res(R, M)
        B = b2_res(R, M)
        if B.shape[0]:
            assert linalg.rank(F, np.vstack([Z, B])) == linalg.rank(F, Z)
        size = B.shape[1] - L.n * M.dim
        for row in B:
            rc = RestrictedCochain2(Cochain(L, M, 2, row[:size]), row[size:])
            assert not restricted_cocycle_report(R, M, rc)


def test_d1_star_on_a_single_cochain() -> None:
    R = catalog_restricted("L_{2|1}^2(b)", 3)
    L = R.algebra
    M = trivial(L)
    psi = delta(L, 2)
    rc = d1_star(R, M, psi)
    assert rc.phi == apply_d(psi)
    assert not rc.phi.is_zero()
    # ω(e1) = ψ(e1^[p]) = ψ(e2)
    assert rc.omega.tolist() == [[1], [0]]
    with pytest.raises(DegreeMismatch):
        d1_star(R, M, delta(L, 1, 2))


def test_plus_even_is_a_subspace_of_the_full_group() -> None:
    R = catalog_restricted("L_{1|2}^4(a)", 3)
    M = trivial(R.algebra)
    full = h2_res(R, M)
    even = h2_res_plus_even(R, M)
    assert even.dim <= full.dim
    for rc in even.cochains():
        assert rc.phi.parity() == 0


def test_restricted_h1_of_trivial_coefficients() -> None:
    R = catalog_restricted("L_{2|1}^1(a)", 3)
    # abelian with the zero map: every linear form is a restricted 1-cocycle
    assert h1_res_dims(R, trivial(R.algebra)) == (2, 1)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_d1_star_images_are_restricted_cocycles(data) -> None:
    name = data.draw(st.sampled_from(["L_{1|2}^3(a)", "L_{2|1}^2(b)", "L_{3|0}^2(b)", "L_{2|2}^4(b)"]))
    R = catalog_restricted(name, 3)
    L = R.algebra
    M = trivial(L)
    coeffs = [data.draw(st.integers(0, 2)) for _ in range(L.n)]
    psi = delta(L, 1, coeff=coeffs[0])
    for i in range(1, L.n):
        psi = psi + delta(L, i + 1, coeff=coeffs[i])
    rc = d1_star(R, M, psi)
    assert not restricted_cocycle_report(R, M, rc)


@pytest.mark.parametrize("name", ["L_{1|2}^3(a)", "L_{1|2}^4(a)", "L_{2|1}^1(b)", "L_{2|1}^2(b)"])
def test_every_restricted_cocycle_passes_the_verifier(name: str) -> None:
    R = catalog_restricted(name, 5)
    L = R.algebra
    for M in (trivial(L), adjoint(L)):
        Z = z2_res(R, M)
        size = Z.shape[1] - L.n * M.dim
        for row in Z:
            rc = RestrictedCochain2(Cochain(L, M, 2, row[:size]), row[size:])
            assert not restricted_cocycle_report(R, M, rc), (name, M.dim)
