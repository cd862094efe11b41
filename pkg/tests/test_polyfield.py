import numpy as np
import pytest

from diracl2.fields.grid import Grid
from diracl2.fields.polyfield import PolyTestField
from diracl2.verify.calculus import run_calculus_suites, verify_product_rule


def test_coordinate_derivatives():
    x1 = PolyTestField.coordinate(2, 1)
    g = Grid.box(2, 4)
    np.testing.assert_allclose(x1.derivative(1).to_field(g).component(0), 1.0)
    assert x1.derivative(0).max_abs() == 0.0
    assert x1.derivative(1, m=2).max_abs() == 0.0


def test_to_field_matches_evaluate():
    rng = np.random.default_rng(5)
    p = PolyTestField.random(1, rng, degree=3)
    g = Grid.box(1, 6)
    np.testing.assert_allclose(p.to_field(g).values, p.evaluate(g.mesh))


def test_product_of_polynomials_evaluates_pointwise():
    rng = np.random.default_rng(6)
    a = PolyTestField.random(2, rng, degree=2)
    b = PolyTestField.random(2, rng, degree=2)
    g = Grid.box(2, 4)
    np.testing.assert_allclose(a.mul(b).to_field(g).values,
                               a.to_field(g).mul(b.to_field(g)).values, rtol=1e-11, atol=1e-11)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_calculus_suites_pass(n):
    reports = run_calculus_suites(n, trials=10, seed=1)
    assert [r.identity for r in reports] == ["conjugation_rule", "product_rule", "laplacian_factorization"]
    for r in reports:
        assert r.passed, r.counterexample
        assert r.trials == 10


def test_product_rule_is_deterministic_across_workers():
    a = verify_product_rule(2, trials=8, seed=3, workers=1)
    b = verify_product_rule(2, trials=8, seed=3, workers=4)
    assert a.to_dict() == b.to_dict()


def test_bar_reverses_polynomial_products():
    rng = np.random.default_rng(8)
    a = PolyTestField.random(2, rng, degree=2)
    b = PolyTestField.random(2, rng, degree=2)
    assert a.mul(b).bar().allclose(b.bar().mul(a.bar()))


def test_padded_factors_multiply_at_their_true_degree():
    rng = np.random.default_rng(9)
    a = PolyTestField.random(3, rng, degree=2)
    b = PolyTestField.random(3, rng, degree=2)
    padded = PolyTestField(3, np.pad(a.coeffs, [(0, 4)] * 4 + [(0, 0)]))
    prod = padded.mul(b)
    assert prod.coeffs.shape == (5, 5, 5, 5, 8)
    assert prod.allclose(a.mul(b))
    g = Grid.box(3, 3)
    np.testing.assert_allclose(prod.to_field(g).values,
                               a.to_field(g).mul(b.to_field(g)).values, rtol=1e-11, atol=1e-11)
