import pytest

from diracl2.errors import GridError
from diracl2.fields.grid import Grid
from diracl2.fields.weights import AnisoQuadratic, Quadratic0
from diracl2.solver.ladder import SWEEP_COLUMNS, box_ladder, build_rhs, refinement_ladder


def test_build_rhs_families():
    g = Grid.box(1, 9)
    assert build_rhs(g, "zero").values.max() == 0.0
    assert build_rhs(g, "bump", "e1").component("e1").max() > 0.0
    with pytest.raises(GridError):
        build_rhs(g, "gauss")


def test_refinement_ladder_rows():
    rows = refinement_ladder(Grid.box(1, 17), Quadratic0(1), levels=2, max_iter=5000)
    assert len(rows) == 2
    for row in rows:
        assert set(SWEEP_COLUMNS) <= set(row)
        assert row["converged"]
        assert row["bound_ratio"] <= 1.0 + 1e-3
        assert row["weak_defect"] < 1e-6
    assert rows[1]["h"] == pytest.approx(rows[0]["h"] / 2)
    assert rows[0]["observed_order"] is None


def test_refinement_ladder_uses_the_commutator_form_when_gradients_do_not_commute():
    rows = refinement_ladder(Grid.box(2, 9), AnisoQuadratic(2), levels=2, component="e1", max_iter=5000)
    assert rows[1]["defect_eq22"] < rows[0]["defect_eq22"]
    assert all(r["converged"] for r in rows)


def test_box_ladder_bound_is_uniform_in_the_radius():
    rows = box_ladder(1, [1.0, 2.0], 8, Quadratic0(1), max_iter=5000)
    assert [r["nodes"] for r in rows] == [17, 33]
    for row in rows:
        assert row["converged"]
        assert row["bound_ratio"] <= 1.0 + 1e-3


def test_box_ladder_rejects_tiny_boxes():
    with pytest.raises(GridError):
        box_ladder(1, [0.5], 8, Quadratic0(1))
