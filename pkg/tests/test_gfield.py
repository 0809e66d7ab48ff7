"""Field arithmetic in F_p and F_{p^2}."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resupal.errors import DivisionByZero, InvalidField, MixedFields
from resupal.gfield import (
    NO_ROOT,
    FieldElem,
    FieldSpec,
    default_modulus,
    enumerate_field,
    frobenius,
    get_field,
    inverse_mod,
    lift,
    sqrt,
)

SPECS = [FieldSpec(3), FieldSpec(5), FieldSpec(7), FieldSpec(3, 2), FieldSpec(5, 2)]


@st.composite
def elems(draw, spec: FieldSpec):
    return FieldElem.from_code(spec, draw(st.integers(0, spec.q - 1)))


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_field_tables_are_commutative_and_distributive(spec: FieldSpec) -> None:
    F = get_field(spec)
    codes = F.elements()
    assert np.array_equal(F._add, F._add.T)
    assert np.array_equal(F._mul, F._mul.T)
    for a in codes:
        left = F.mul(a, F.add(codes[:, None], codes[None, :]))
        right = F.add(F.mul(a, codes)[:, None], F.mul(a, codes)[None, :])
        assert np.array_equal(left, right)


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_field_axioms_hold_for_random_elements(data) -> None:
    spec = data.draw(st.sampled_from(SPECS))
    a, b, c = (data.draw(elems(spec)) for _ in range(3))
    zero, one = FieldElem.of(spec, 0), FieldElem.of(spec, 1)
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + zero == a and a * one == a
    assert a - a == zero
    assert a + (-a) == zero
    if not a.is_zero():
        assert a * (one / a) == one


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_frobenius_is_additive_and_multiplicative(data) -> None:
    spec = data.draw(st.sampled_from(SPECS))
    a, b = data.draw(elems(spec)), data.draw(elems(spec))
    assert frobenius(a + b) == frobenius(a) + frobenius(b)
    assert frobenius(a * b) == frobenius(a) * frobenius(b)
    assert frobenius(frobenius(a)) == a


def test_frobenius_fixes_exactly_the_prime_field() -> None:
    spec = FieldSpec(3, 2)
    fixed = [a for a in enumerate_field(spec) if frobenius(a) == a]
    assert len(fixed) == 3
    x = FieldElem.of(spec, 0, 1)
    assert frobenius(x) != x


def test_default_modulus() -> None:
    assert default_modulus(3) == (1, 0)
    assert default_modulus(7) == (1, 0)
    c0, c1 = default_modulus(5)
    assert all((t * t + c1 * t + c0) % 5 for t in range(5))


def test_x_squared_is_minus_one_in_f9() -> None:
    spec = FieldSpec(3, 2)
    x = FieldElem.of(spec, 0, 1)
    assert x * x == FieldElem.of(spec, -1)


def test_inverse_mod_and_division_by_zero() -> None:
    assert inverse_mod(2, 5) == 3
    assert inverse_mod(6, 7) == 6
    with pytest.raises(DivisionByZero):
        inverse_mod(0, 3)
    spec = FieldSpec(5)
    with pytest.raises(DivisionByZero):
        FieldElem.of(spec, 2) / FieldElem.of(spec, 0)
    with pytest.raises(ZeroDivisionError):
        get_field(spec).inv(0)


def test_from_rational_resolves_halves_per_prime() -> None:
    assert get_field(FieldSpec(3)).from_rational(Fraction(1, 2)) == 2
    assert get_field(FieldSpec(5)).from_rational(Fraction(3, 2)) == 4
    assert get_field(FieldSpec(7)).from_rational(Fraction(-3, 2)) == 2
    with pytest.raises(DivisionByZero):
        get_field(FieldSpec(3)).from_rational(Fraction(1, 3))


def test_invalid_fields_are_rejected() -> None:
    with pytest.raises(InvalidField):
        FieldSpec(2)
    with pytest.raises(InvalidField):
        FieldSpec(9)
    with pytest.raises(InvalidField):
        FieldSpec(3, 3)
    with pytest.raises(InvalidField):
        FieldSpec(5, 2, (1, 0))  # x^2 + 1 = (x - 2)(x + 2) over F_5


def test_mixed_fields_are_rejected() -> None:
    with pytest.raises(MixedFields):
        FieldElem.of(FieldSpec(3), 1) + FieldElem.of(FieldSpec(5), 1)
    with pytest.raises(MixedFields):
        get_field(FieldSpec(3)).from_coeffs([1, 1])


def test_sqrt_and_lift() -> None:
    f5 = FieldSpec(5)
    assert sqrt(FieldElem.of(f5, 4)) == FieldElem.of(f5, 2)
    assert sqrt(FieldElem.of(f5, 2)) is NO_ROOT
    f25 = FieldSpec(5, 2)
    root = sqrt(lift(FieldElem.of(f5, 2), f25))
    assert root is not NO_ROOT
    assert root * root == FieldElem.of(f25, 2)


def test_matmul_matches_elementwise_definition_over_f9() -> None:
    F = get_field(FieldSpec(3, 2))
    rng = np.random.default_rng(1)
    A, B = F.random(rng, 3, 4), F.random(rng, 4, 2)
    C = F.matmul(A, B)
    for i in range(3):
        for j in range(2):
            acc = 0
            for k in range(4):
                acc = int(F.add(acc, F.mul(A[i, k], B[k, j])))
            assert C[i, j] == acc
