# diracl2/verify/calculus.py
"""
Calculus identities on random polynomial fields with exact derivatives:

    bar(Dbar u) = bar(u) D
    Dbar(u v) = (Dbar u) v + u (Dbar v) + sum_j (e_j u - u e_j) d_j v
    Dbar D u = D Dbar u = lap u
"""

from __future__ import annotations

from typing import List, Optional

import numpy as np

from ..errors import DimensionError
from ..fields.polyfield import PolyTestField
from .exact import log_summary, run_trials
from .report import IdentityReport

CALCULUS_MAX_N = 3
CALCULUS_RTOL = 1e-12
DEGREE = 4


def _check(n: int) -> None:
    if not 1 <= n <= CALCULUS_MAX_N:
        raise DimensionError(f"calculus identities run for 1 <= n <= {CALCULUS_MAX_N}, got n={n}")


def _witness(u: PolyTestField, err: float) -> dict:
    return {"relative_error": err, "max_coefficient": u.max_abs()}


def verify_conjugation(n: int, trials: int = 100, seed: int = 0,
                       workers: Optional[int] = None) -> IdentityReport:
    _check(n)

    def check(t: int, rng: np.random.Generator):
        u = PolyTestField.random(n, rng, DEGREE)
        lhs = u.dirac().bar()
        rhs = u.bar().dirac(side="right", conjugated=True)
        err = lhs.relative_error(rhs)
        return err <= CALCULUS_RTOL, _witness(u, err)

    return log_summary(run_trials("conjugation_rule", n, trials, seed, check, workers))


def product_rule_rhs(u: PolyTestField, v: PolyTestField) -> PolyTestField:
    total = u.dirac().mul(v) + u.mul(v.dirac())
    for j in range(1, u.n + 1):
        comm = u.times_generator(j, "left") - u.times_generator(j, "right")
        total = total + comm.mul(v.derivative(j))
    return total


def verify_product_rule(n: int, trials: int = 100, seed: int = 0,
                        workers: Optional[int] = None) -> IdentityReport:
    """v is restricted to grade <= 1, as in the classical statement."""
    _check(n)

    def check(t: int, rng: np.random.Generator):
        u = PolyTestField.random(n, rng, DEGREE)
        v = PolyTestField.random(n, rng, DEGREE, max_grade=1)
        err = u.mul(v).dirac().relative_error(product_rule_rhs(u, v))
        return err <= CALCULUS_RTOL, _witness(u, err)

    return log_summary(run_trials("product_rule", n, trials, seed, check, workers))


def verify_factorization(n: int, trials: int = 100, seed: int = 0,
                         workers: Optional[int] = None) -> IdentityReport:
    _check(n)

    def check(t: int, rng: np.random.Generator):
        u = PolyTestField.random(n, rng, DEGREE)
        lap = u.laplacian()
        e1 = u.dirac(conjugated=True).dirac().relative_error(lap)
        e2 = u.dirac().dirac(conjugated=True).relative_error(lap)
        err = max(e1, e2)
        return err <= CALCULUS_RTOL, _witness(u, err)

    return log_summary(run_trials("laplacian_factorization", n, trials, seed, check, workers))


def run_calculus_suites(n: int, trials: int = 100, seed: int = 0,
                        workers: Optional[int] = None) -> List[IdentityReport]:
    return [fn(n, trials, seed, workers)
            for fn in (verify_conjugation, verify_product_rule, verify_factorization)]
