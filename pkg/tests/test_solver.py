import math

import numpy as np
import pytest

from diracl2.errors import NumericError, WeightError
from diracl2.fields.field import CliffordField, bump_battery, make_bump, weighted_norm_sq
from diracl2.fields.grid import Grid
from diracl2.fields.weights import AnisoQuadratic, Quadratic0, ZeroWeight
from diracl2.solver.cg import conjugate_gradient
from diracl2.solver.minnorm import (
    default_max_iter,
    minimality_check,
    necessity_check,
    slab_bound_report,
    slab_constant,
    solve_min_norm,
)
from diracl2.solver.operator import DiscreteDiracOperator

MAX_ITER = 5000


def test_cg_on_a_small_spd_system():
    rng = np.random.default_rng(0)
    M = rng.standard_normal((6, 6))
    A = M @ M.T + 6 * np.eye(6)
    b = rng.standard_normal(6)
    res = conjugate_gradient(lambda x: A @ x, b, lambda x, y: float(x @ y), 1e-12, 100)
    assert res.converged
    np.testing.assert_allclose(A @ res.x, b, atol=1e-9)


def test_zero_rhs_gives_zero_solution():
    g = Grid.box(1, 9)
    u, rep = solve_min_norm(CliffordField.zeros(g), Quadratic0(1))
    assert rep.converged
    assert np.all(u.values == 0.0)
    assert rep.bound_ratio == 0.0


@pytest.fixture(scope="module")
def n1_solve():
    g = Grid.box(1, 33)
    w = Quadratic0(1)
    f = make_bump(g, 0.2)
    op = DiscreteDiracOperator(g, w)
    u, rep = solve_min_norm(f, w, tol=1e-10, max_iter=MAX_ITER, op=op)
    return g, w, f, op, u, rep


def test_n1_solve_converges_and_respects_the_bound(n1_solve):
    g, w, f, op, u, rep = n1_solve
    assert rep.converged
    assert rep.relative_residual <= 2e-10
    assert rep.bound_holds(1e-3, scaled=False)
    assert rep.bound_ratio == pytest.approx(rep.bound_ratio_unscaled / 4.0)
    assert rep.weighted_norm_sq == pytest.approx(weighted_norm_sq(u, w))


def test_n1_solution_is_minimal(n1_solve):
    g, w, f, op, u, rep = n1_solve
    check = minimality_check(op, u, samples=2, seed=0, tol=1e-10, max_iter=MAX_ITER)
    assert check["max_pairing"] < 1e-6


def test_n1_necessity_and_slab(n1_solve):
    g, w, f, op, u, rep = n1_solve
    nec = necessity_check(u, f, w, bump_battery(g, 0.2, 6, seed=1))
    assert nec["holds"]
    assert nec["count"] == 6
    slab = slab_bound_report(u, f, w)
    assert slab["ratio_unscaled"] <= 1.0 + 1e-3
    assert slab["c_ab"] == pytest.approx(math.e / 2)


def test_n2_anisotropic_bound():
    g = Grid.box(2, 13)
    w = AnisoQuadratic(2)
    f = make_bump(g, 0.2, component="e1")
    _, rep = solve_min_norm(f, w, tol=1e-10, max_iter=MAX_ITER)
    assert rep.converged
    assert rep.bound_holds(1e-3)


def test_zero_weight_has_no_bound():
    g = Grid.box(1, 9)
    _, rep = solve_min_norm(make_bump(g, 0.2), ZeroWeight(1), max_iter=MAX_ITER)
    assert rep.bound_ratio is None
    assert rep.bound_error
    assert not rep.bound_holds()


def test_non_convergence_returns_the_iterate():
    g = Grid.box(1, 17)
    u, rep = solve_min_norm(make_bump(g, 0.2), Quadratic0(1), tol=1e-12, max_iter=1)
    assert not rep.converged
    assert rep.iterations == 1
    assert np.all(np.isfinite(u.values))


def test_solver_input_checks():
    g = Grid.box(1, 9)
    with pytest.raises(NumericError):
        solve_min_norm(make_bump(g, 0.2), Quadratic0(1), tol=0.0)
    bad = CliffordField.zeros(g)
    bad.values[4, 4, 0] = np.nan
    with pytest.raises(NumericError):
        solve_min_norm(bad, Quadratic0(1))


def test_slab_helpers():
    assert slab_constant(-1.0, 0.5) == pytest.approx(math.e / 2)
    g = Grid.box(1, 9)
    z = CliffordField.zeros(g)
    with pytest.raises(WeightError):
        slab_bound_report(z, z, AnisoQuadratic(1))
    assert default_max_iter(100) == 100


def test_n1_necessity_over_twenty_test_fields(n1_solve):
    g, w, f, op, u, rep = n1_solve
    nec = necessity_check(u, f, w, bump_battery(g, 0.2, 20, seed=0), slack=1e-2)
    assert nec["count"] == 20
    assert nec["holds"], nec["max_ratio"]
    assert nec["c_prime"] == pytest.approx(rep.weighted_norm_sq)


def test_necessity_rows_do_not_depend_on_workers(n1_solve):
    g, w, f, op, u, rep = n1_solve
    alphas = bump_battery(g, 0.2, 5, seed=4)
    assert necessity_check(u, f, w, alphas, workers=1) == necessity_check(u, f, w, alphas, workers=3)


def test_n3_anisotropic_bound_on_the_desk_grid():
    g = Grid.box(3, 17)
    w = AnisoQuadratic(3)
    f = make_bump(g, 0.2, component="e2")
    _, rep = solve_min_norm(f, w, tol=1e-8)
    assert rep.converged
    assert rep.relative_residual <= 2e-8
    assert rep.bound_holds(1e-3)
