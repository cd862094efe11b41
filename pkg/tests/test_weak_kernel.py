import math

import numpy as np
import pytest

from diracl2.algebra.multivector import norm0
from diracl2.errors import GridError, NumericError
from diracl2.fields.field import CliffordField, make_bump, plain_integral
from diracl2.fields.grid import Grid
from diracl2.fields.weights import Quadratic0
from diracl2.solver.minnorm import solve_min_norm
from diracl2.solver.weak import (
    cauchy_annulus_check,
    cauchy_kernel,
    kernel_weak_check,
    sphere_area,
    weak_defect,
)


def test_sphere_area():
    assert sphere_area(1) == pytest.approx(2 * math.pi)
    assert sphere_area(2) == pytest.approx(4 * math.pi)


def test_kernel_values_on_a_three_point_grid():
    g = Grid.box(1, 3)
    G = cauchy_kernel(g)
    assert np.all(G.values[1, 1] == 0.0)
    assert G.values[2, 1, 0] == pytest.approx(1 / (2 * math.pi))
    assert G.values[1, 2, 1] == pytest.approx(-1 / (2 * math.pi))


def test_kernel_input_checks():
    with pytest.raises(GridError):
        cauchy_kernel(Grid.box(1, 5, 1.0, 2.0))
    with pytest.raises(NumericError):
        cauchy_kernel(Grid.box(1, 5), exclusion_radius=0.0)
    with pytest.raises(NumericError):
        cauchy_annulus_check([Grid.box(1, 33)], 0.5, 0.25)
    with pytest.raises(GridError):
        cauchy_annulus_check([Grid.box(1, 9)], 0.25, 0.75)


def test_kernel_is_monogenic_off_the_origin_at_second_order():
    grids = [Grid.box(1, 33)]
    for _ in range(2):
        grids.append(grids[-1].refine())
    rows = cauchy_annulus_check(grids, 0.25, 0.75)
    assert rows[0]["observed_order"] is None
    assert rows[-1]["max_dbar_norm"] < rows[0]["max_dbar_norm"]
    assert rows[-1]["observed_order"] >= 1.5


def test_kernel_weak_defect_recovers_the_point_value():
    coarse = kernel_weak_check(Grid.box(1, 65), 0.2)
    fine = kernel_weak_check(Grid.box(1, 257), 0.2)
    assert fine["relative_error"] <= coarse["relative_error"]
    assert fine["passes"]


def test_weak_defect_of_a_solve_is_at_solver_tolerance():
    g = Grid.box(1, 33)
    w = Quadratic0(1)
    f = make_bump(g, 0.2, component="e1")
    u, rep = solve_min_norm(f, w, tol=1e-10, max_iter=5000)
    assert rep.converged
    alpha = make_bump(g, 0.2, component=0, scale=0.8)
    scale = 1.0 + norm0(plain_integral(alpha.mul(f)))
    assert norm0(weak_defect(u, f, alpha)) <= 1e-6 * scale


def test_weak_defect_needs_a_compact_test_field():
    g = Grid.box(1, 9)
    z = CliffordField.zeros(g)
    ones = CliffordField.from_components(g, {0: np.ones(g.shape)})
    assert norm0(weak_defect(z, z, make_bump(g, 0.25))) == 0.0
    with pytest.raises(GridError):
        weak_defect(z, z, ones)
