from fractions import Fraction

import numpy as np
import pytest

from diracl2.algebra.multivector import Multivector, ScalarKind, random_exact
from diracl2.errors import DimensionError
from diracl2.verify.exact import (
    diagonal_brute,
    diagonal_closed_form,
    hessian_term_brute,
    hessian_term_parts,
    run_all_suites,
    verify_core_laws,
    verify_cross_term_cases,
    verify_diagonal_terms,
    verify_hessian_nonnegative,
    verify_hessian_decomposition,
    verify_scalar_annihilation,
)
from diracl2.verify.report import HessianStub
from diracl2.verify.sign_cases import CASES

EXACT = ScalarKind.EXACT


def test_diagonal_term_for_a_single_generator():
    a = Multivector.basis(2, "e1", 1, EXACT)
    diag = [Fraction(1), Fraction(1)]
    assert diagonal_brute(a, diag) == -8
    assert diagonal_closed_form(a, diag) == -8


@pytest.mark.parametrize("suite", [
    verify_core_laws,
    verify_scalar_annihilation,
    verify_diagonal_terms,
    verify_hessian_decomposition,
    verify_hessian_nonnegative,
])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_exact_suites_pass(suite, n):
    report = suite(n, trials=20, seed=7)
    assert report.passed, report.counterexample
    assert report.trials >= 20


@pytest.mark.parametrize("n", [2, 3])
def test_cross_terms_pass_with_errata_attached(n):
    report = verify_cross_term_cases(n, trials=20, seed=1)
    assert report.passed, report.counterexample
    assert set(report.notes["triples_per_case"]) == set(CASES)
    for erratum in report.errata:
        assert erratum["case"] in CASES
        assert erratum["printed_value"] % 2 != erratum["derived_exponent"] % 2


def test_cross_terms_need_two_generators():
    with pytest.raises(DimensionError):
        verify_cross_term_cases(1, trials=1)


def test_range_is_checked():
    with pytest.raises(DimensionError):
        verify_core_laws(7, trials=1)
    with pytest.raises(DimensionError):
        run_all_suites(0, trials=1)


def test_hessian_parts_sum_to_brute_force():
    rng = np.random.default_rng(11)
    for _ in range(5):
        a = random_exact(3, rng)
        H = HessianStub.random(3, rng)
        parts = hessian_term_parts(a, H)
        assert parts["axial"] == 0
        assert hessian_term_brute(a, H) == parts["diagonal"] + parts["cross"]


def test_admissible_stub():
    rng = np.random.default_rng(2)
    assert HessianStub.random(3, rng, admissible=True).is_admissible()
    with pytest.raises(ValueError):
        HessianStub.from_rows(1, [[0, 1], [2, 0]])


def test_run_all_suites_skips_cross_terms_for_n1():
    reports = run_all_suites(1, trials=5, seed=0)
    by_name = {r.identity: r for r in reports}
    assert "skipped" in by_name["cross_term_cases"].notes
    assert all(r.passed for r in reports)


def test_reports_do_not_depend_on_worker_count():
    a = [r.to_dict() for r in run_all_suites(2, trials=60, seed=5, workers=1)]
    b = [r.to_dict() for r in run_all_suites(2, trials=60, seed=5, workers=4)]
    assert a == b
