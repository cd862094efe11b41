import numpy as np
import pytest

from diracl2.errors import DimensionError, GridError
from diracl2.fields.grid import Grid
from diracl2.fields.stencils import observed_orders, partial, partial_transpose, second_partial


def test_box_validation():
    with pytest.raises(GridError):
        Grid.box(1, 2)
    with pytest.raises(GridError):
        Grid(1, (5, 5), (0.0, 1.0), (1.0, 1.0))
    with pytest.raises(DimensionError):
        Grid(2, (5, 5), (0.0, 0.0), (1.0, 1.0))


def test_geometry():
    g = Grid.box(1, (5, 9), -1.0, 1.0)
    assert g.ndim == 2
    assert g.components == 2
    assert g.shape == (5, 9)
    assert g.num_nodes == 45
    assert g.spacings == pytest.approx((0.5, 0.25))
    assert g.min_spacing == pytest.approx(0.25)
    assert g.contains([0.0, 0.0])
    assert not g.contains([1.5, 0.0])
    assert g.interior_mask.sum() == 3 * 7


def test_refine_halves_the_spacing():
    g = Grid.box(2, 5)
    fine = g.refine()
    assert fine.extents == (9, 9, 9)
    assert fine.spacings == pytest.approx(tuple(h / 2 for h in g.spacings))
    assert fine.same_as(fine)
    with pytest.raises(GridError):
        g.check_same(fine)


def test_trapezoid_weights_integrate_polynomials_of_degree_one():
    g = Grid.box(1, (7, 11), (0.0, -1.0), (2.0, 3.0))
    w = g.quadrature_weights
    assert g.volume == pytest.approx(8.0)
    assert w.sum() == pytest.approx(g.volume)
    x0, x1 = g.mesh
    assert np.sum(w * (x0 + 2 * x1)) == pytest.approx(2.0 * 4 + 2 * 2.0 * 4)


@pytest.mark.parametrize("N", [5, 12])
def test_first_derivative_exact_on_quadratics(N):
    x = np.linspace(-1.0, 2.0, N)
    h = x[1] - x[0]
    u = 3 * x ** 2 - x + 1
    np.testing.assert_allclose(partial(u, 0, h), 6 * x - 1, atol=1e-10)


def test_second_derivative_exact_on_cubics():
    x = np.linspace(0.0, 1.0, 9)
    h = x[1] - x[0]
    np.testing.assert_allclose(second_partial(x ** 3, 0, h), 6 * x, atol=1e-9)


def test_partial_transpose_is_the_matrix_transpose():
    rng = np.random.default_rng(0)
    u = rng.standard_normal((6, 4))
    v = rng.standard_normal((6, 4))
    h = 0.3
    assert np.sum(partial(u, 0, h) * v) == pytest.approx(np.sum(u * partial_transpose(v, 0, h)))


def test_partial_acts_along_the_requested_axis():
    g = Grid.box(1, 9)
    x0, x1 = g.mesh
    d = partial(x0 * x1, 1, g.spacings[1])
    np.testing.assert_allclose(d, x0, atol=1e-12)


def test_observed_orders():
    hs = [0.1, 0.05, 0.025]
    assert observed_orders(hs, [h ** 2 for h in hs]) == [None, pytest.approx(2.0), pytest.approx(2.0)]
    assert observed_orders(hs, [1.0, 0.0, 1.0])[1:] == [None, None]
