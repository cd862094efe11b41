from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from diracl2.algebra.multivector import (
    Multivector,
    ScalarKind,
    bar,
    inner0,
    inversion,
    mul,
    norm0,
    random_exact,
    reversion,
    scalar_part,
    tau,
)
from diracl2.errors import DimensionError, ScalarKindError

EXACT = ScalarKind.EXACT

small = st.fractions(min_value=-9, max_value=9, max_denominator=7)


def exact_mv(n):
    return st.lists(small, min_size=1 << n, max_size=1 << n).map(
        lambda cs: Multivector.from_coeffs(n, cs, EXACT))


@given(exact_mv(2), exact_mv(2), exact_mv(2))
def test_product_is_associative(a, b, c):
    assert mul(mul(a, b), c) == mul(a, mul(b, c))


@given(exact_mv(3), exact_mv(3))
def test_bar_reverses_products(a, b):
    assert bar(mul(a, b)) == mul(bar(b), bar(a))
    assert reversion(mul(a, b)) == mul(reversion(b), reversion(a))
    assert inversion(mul(a, b)) == mul(inversion(a), inversion(b))


@given(exact_mv(3))
def test_bar_is_inversion_after_reversion(a):
    assert bar(a) == inversion(reversion(a))


@given(exact_mv(2), exact_mv(2))
def test_inner_product_is_scalar_part_of_bar_product(a, b):
    assert inner0(a, b) == tau(0, mul(bar(a), b))
    assert inner0(a, b) == inner0(b, a)


@given(small, small)
def test_n1_generator_sandwich_has_no_scalar_part(a0, a1):
    a = Multivector.from_coeffs(1, [a0, a1], EXACT)
    e1 = Multivector.basis(1, "e1", 1, EXACT)
    assert scalar_part(mul(mul(bar(a), e1), a)) == 0


def test_tau_carries_bar_sign():
    mu = Multivector.basis(2, "e12", 3, EXACT)
    assert tau("e12", mu) == -4 * 3
    assert tau(0, Multivector.scalar(2, 1, EXACT)) == 4


def test_norm0_of_unit():
    assert norm0(Multivector.scalar(3, 1.0)) == pytest.approx(np.sqrt(8.0))


def test_exact_products_stay_exact():
    rng = np.random.default_rng(3)
    a = random_exact(3, rng)
    b = random_exact(3, rng).scale(Fraction(1, 3))
    prod = mul(a, b)
    assert prod.kind is EXACT
    assert all(isinstance(c, Fraction) for c in prod.coeffs)


def test_mixing_scalar_kinds_is_an_error():
    a = Multivector.scalar(2, 1, EXACT)
    b = Multivector.scalar(2, 1.0)
    with pytest.raises(ScalarKindError):
        mul(a, b)
    with pytest.raises(ScalarKindError):
        Multivector.from_coeffs(1, [0.5, 1], EXACT)


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        Multivector.scalar(2, 1.0) + Multivector.scalar(3, 1.0)
    with pytest.raises(DimensionError):
        Multivector(2, (0.0, 1.0))


def test_to_dict_labels_nonzero_terms():
    mv = Multivector.from_terms(2, {0: Fraction(1, 2), 3: -2}, EXACT)
    assert mv.to_dict() == {"e0": "1/2", "e12": "-2"}


@given(exact_mv(2))
def test_subtracting_itself_gives_zero(a):
    assert (a - a).is_zero()
    assert not Multivector.scalar(2, 1, EXACT).is_zero()
