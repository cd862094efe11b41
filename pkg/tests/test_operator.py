import numpy as np
import pytest

from diracl2.fields.field import dual_operator_analytic, make_bump
from diracl2.fields.grid import Grid
from diracl2.fields.weights import AnisoQuadratic, Quadratic0
from diracl2.solver.operator import DiscreteDiracOperator


@pytest.mark.parametrize("n,weight", [(1, Quadratic0(1)), (2, AnisoQuadratic(2)), (2, None)])
def test_adjoint_in_the_weighted_inner_products(n, weight):
    op = DiscreteDiracOperator(Grid.box(n, 9), weight)
    rng = np.random.default_rng(n)
    for _ in range(3):
        u = rng.standard_normal(op.unknown_shape)
        v = rng.standard_normal(op.equation_shape)
        assert op.adjointness_defect(u, v) <= 1e-12


def test_linear_operator_view_is_weighted():
    op = DiscreteDiracOperator(Grid.box(1, 7), Quadratic0(1))
    A = op.as_linear_operator()
    rng = np.random.default_rng(0)
    u = rng.standard_normal(op.unknown_shape)
    v = rng.standard_normal(op.equation_shape)
    assert A.shape == (5 * 5 * 2, 7 * 7 * 2)
    y = op.to_weighted(u)
    np.testing.assert_allclose(op.from_weighted(y), u)
    assert float(y @ y) == pytest.approx(op.inner_unknowns(u, u))
    z = rng.standard_normal(A.shape[0])
    assert float(A.matvec(y) @ z) == pytest.approx(float(y @ A.rmatvec(z)))
    # Euclidean pairing in the view is the weighted pairing of L u with v
    se = np.sqrt(2.0 * op.eq_w)[..., None]
    assert float(A.matvec(y) @ (se * v).ravel()) == pytest.approx(op.inner_equations(op.apply(u), v))


def _dual_error(N, w, component):
    g = Grid.box(2, N)
    op = DiscreteDiracOperator(g, w)
    alpha = make_bump(g, 0.2, component=component)
    discrete = op.apply_adjoint(op.restrict(alpha))
    exact = dual_operator_analytic(alpha, w, "left").values
    return np.max(np.abs(discrete - exact))


def test_discrete_adjoint_approximates_the_left_order_dual():
    w = AnisoQuadratic(2)
    coarse = _dual_error(17, w, "e1")
    fine = _dual_error(33, w, "e1")
    assert fine < coarse / 3.0
