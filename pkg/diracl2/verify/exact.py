# diracl2/verify/exact.py
"""
Exact-rational identity suites. Every check compares a brute-force product
(multivector.mul over Fractions) with a closed form; any nonzero residual fails.

Random trials draw from numpy.random.default_rng([seed, trial]) so a trial is
reproducible on its own and independent of how trials are split across workers.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ..algebra.arrays import generator_mask
from ..algebra.blades import Involution, blade_sign, grade, involution_sign
from ..algebra.multivector import (
    Multivector,
    ScalarKind,
    bar,
    inner0,
    inversion,
    mul,
    random_exact,
    reversion,
    scalar_part,
    tau,
)
from ..config import COEFF_BOUND, EXHAUSTIVE_LIMIT, VERIFY_MAX_N
from ..errors import DimensionError
from ..util.logger import get_logger
from ..util.thread_utils import ordered_map
from .report import HessianStub, IdentityReport
from .sign_cases import (
    CASES,
    admissible_triples,
    brute_scalar,
    case_of,
    cross_sign_vector,
    derived_exponent,
    derived_sign,
    describe_triple,
    diagonal_mask,
    first_mismatch,
    general_sign,
    partner,
    printed_exponent,
)

logger = get_logger("diracl2.verify")

EXACT = ScalarKind.EXACT

# trials per worker task
CHUNK = 50

TrialCheck = Callable[[int, np.random.Generator], Tuple[bool, Optional[Dict]]]


def _check_range(n: int, lo: int) -> None:
    if not lo <= n <= VERIFY_MAX_N:
        raise DimensionError(f"identity suite needs {lo} <= n <= {VERIFY_MAX_N}, got n={n}")


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(trial)])


def gen(n: int, i: int) -> Multivector:
    """e_i as an exact multivector (e_0 is the unit)."""
    return Multivector.basis(n, generator_mask(i), 1, EXACT)


def gen_bar(n: int, i: int) -> Multivector:
    return bar(gen(n, i))


def run_trials(identity: str, n: int, trials: int, seed: int, check: TrialCheck,
                workers: Optional[int] = None) -> IdentityReport:
    """Run `check` for trial indices 0..trials-1, chunked across workers, merged in index order."""
    starts = list(range(0, trials, CHUNK))

    def run_chunk(start: int) -> IdentityReport:
        part = IdentityReport(identity, n, seed)
        for t in range(start, min(start + CHUNK, trials)):
            ok, witness = check(t, trial_rng(seed, t))
            if not ok and witness is not None:
                witness = {"seed": seed, "trial": t, **witness}
            part.record(ok, witness)
        return part

    report = IdentityReport(identity, n, seed)
    for part in ordered_map(run_chunk, starts, workers):
        report.merge(part)
    return report


def log_summary(report: IdentityReport) -> IdentityReport:
    if report.passed:
        logger.info("%s n=%d: %d/%d passed", report.identity, report.n, report.passes, report.trials)
    else:
        logger.warning("%s n=%d: %d/%d passed; counterexample %s",
                       report.identity, report.n, report.passes, report.trials, report.counterexample)
    for item in report.errata:
        logger.warning("%s n=%d erratum: %s", report.identity, report.n, item)
    return report


# ---------------------------------------------------------------------------
# core algebra laws
# ---------------------------------------------------------------------------

def _blade_laws(n: int, report: IdentityReport) -> None:
    """Exhaustive checks over basis blades."""
    size = 1 << n
    one = Multivector.scalar(n, 1, EXACT)
    blades = [Multivector.basis(n, m, 1, EXACT) for m in range(size)]
    for m, e in enumerate(blades):
        r = grade(m)
        report.record(mul(e, bar(e)) == one and mul(bar(e), e) == one,
                      {"law": "e_A bar(e_A) = bar(e_A) e_A = 1", "A": m})
        for kind in Involution:
            expect = e.scale(involution_sign(r, kind))
            got = {Involution.INVERSION: inversion, Involution.REVERSION: reversion, Involution.BAR: bar}[kind](e)
            report.record(got == expect, {"law": f"{kind.value} sign", "A": m})
    for i in range(1, n + 1):
        ei = gen(n, i)
        report.record(mul(ei, ei) == -one, {"law": "e_i^2 = -1", "i": i})
        for j in range(i + 1, n + 1):
            ej = gen(n, j)
            report.record(mul(ei, ej) == -mul(ej, ei), {"law": "e_i e_j = -e_j e_i", "i": i, "j": j})
    for a in range(size):
        for b in range(size):
            prod = mul(blades[a], blades[b])
            expect = blades[a ^ b].scale(blade_sign(a, b))
            report.record(prod == expect, {"law": "blade product table", "A": a, "B": b})


def _random_fields(n: int, rng: np.random.Generator, points: int = 3):
    f = [random_exact(n, rng, COEFF_BOUND) for _ in range(points)]
    g = [random_exact(n, rng, COEFF_BOUND) for _ in range(points)]
    w = [Fraction(int(rng.integers(1, COEFF_BOUND + 1)), int(rng.integers(1, COEFF_BOUND + 1))) for _ in range(points)]
    return f, g, w


def _discrete_inner(f, g, w, n: int) -> Multivector:
    total = Multivector.zero(n, EXACT)
    for fk, gk, wk in zip(f, g, w):
        total = total + mul(bar(fk), gk).scale(wk)
    return total


def verify_core_laws(n: int, trials: int = 1000, seed: int = 0,
                     workers: Optional[int] = None) -> IdentityReport:
    """
    Blade laws exhaustively, then seeded random checks of associativity,
    involution (anti)homomorphisms, the inner product and Cauchy-Schwarz.
    """
    _check_range(n, 1)

    def check(t: int, rng: np.random.Generator):
        a = random_exact(n, rng, COEFF_BOUND)
        b = random_exact(n, rng, COEFF_BOUND)
        c = random_exact(n, rng, COEFF_BOUND)
        ab = mul(a, b)
        failures = []
        if mul(ab, c) != mul(a, mul(b, c)):
            failures.append("associativity")
        if bar(ab) != mul(bar(b), bar(a)):
            failures.append("bar anti-homomorphism")
        if reversion(ab) != mul(reversion(b), reversion(a)):
            failures.append("reversion anti-homomorphism")
        if inversion(ab) != mul(inversion(a), inversion(b)):
            failures.append("inversion homomorphism")
        if bar(a) != inversion(reversion(a)):
            failures.append("bar = inversion o reversion")
        if inner0(a, b) != tau(0, mul(bar(a), b)) or inner0(a, b) != inner0(b, a):
            failures.append("inner product")
        f, g, w = _random_fields(n, rng)
        fg = _discrete_inner(f, g, w, n)
        nf = tau(0, _discrete_inner(f, f, w, n))
        ng = tau(0, _discrete_inner(g, g, w, n))
        if inner0(fg, fg) > nf * ng:
            failures.append("Cauchy-Schwarz")
        if not failures:
            return True, None
        return False, {"failed": failures, "a": a, "b": b, "c": c}

    report = IdentityReport("core_laws", n, seed)
    _blade_laws(n, report)
    report.notes["blade_checks"] = report.trials
    report.merge(run_trials("core_laws", n, trials, seed, check, workers))
    return log_summary(report)


# ---------------------------------------------------------------------------
# pointwise Hessian-term algebra
# ---------------------------------------------------------------------------

def verify_scalar_annihilation(n: int, trials: int = 1000, seed: int = 0,
                               workers: Optional[int] = None) -> IdentityReport:
    """[bar(a) e_j a]_0 = 0 and [bar(a) a e_j]_0 = 0 for every j >= 1."""
    _check_range(n, 1)
    gens = [gen(n, j) for j in range(1, n + 1)]

    def check(t: int, rng: np.random.Generator):
        a = random_exact(n, rng, COEFF_BOUND)
        ab = bar(a)
        abar_a = mul(ab, a)
        for j, ej in enumerate(gens, start=1):
            left = scalar_part(mul(mul(ab, ej), a))
            right = scalar_part(mul(abar_a, ej))
            if left != 0 or right != 0:
                return False, {"alpha": a, "j": j, "left": left, "right": right}
        return True, None

    return log_summary(run_trials("scalar_annihilation", n, trials, seed, check, workers))


def diagonal_closed_form(a: Multivector, diag) -> Fraction:
    """-2^{n+1} sum_i c_i sum_{A : |A| + [i in A] odd} a_A^2."""
    n = a.n
    total = Fraction(0)
    for i in range(1, n + 1):
        mask = diagonal_mask(n, i)
        s = sum((a.coeffs[A] ** 2 for A in range(1 << n) if mask[A]), Fraction(0))
        total += diag[i - 1] * s
    return -(1 << (n + 1)) * total


def diagonal_brute(a: Multivector, diag) -> Fraction:
    n = a.n
    ab = bar(a)
    abar_a = mul(ab, a)
    total = Fraction(0)
    for i in range(1, n + 1):
        term = mul(mul(mul(ab, gen(n, i)), a), gen_bar(n, i)) - abar_a
        total += diag[i - 1] * tau(0, term)
    return total


def verify_diagonal_terms(n: int, trials: int = 1000, seed: int = 0,
                          workers: Optional[int] = None) -> IdentityReport:
    """Diagonal Hessian contribution: brute force against the grade-parity closed form."""
    _check_range(n, 1)

    def check(t: int, rng: np.random.Generator):
        a = random_exact(n, rng, COEFF_BOUND)
        diag = [Fraction(int(v)) for v in rng.integers(-COEFF_BOUND, COEFF_BOUND + 1, size=n)]
        lhs = diagonal_brute(a, diag)
        rhs = diagonal_closed_form(a, diag)
        if lhs == rhs:
            return True, None
        return False, {"alpha": a, "diag": diag, "brute": lhs, "closed_form": rhs}

    return log_summary(run_trials("diagonal_terms", n, trials, seed, check, workers))


def cross_case_sum(a: Multivector, p: int, q: int) -> Fraction:
    """tau(0, bar(a) e_p a bar(e_q)) as 2^n sum_A a_A a_{A xor {p,q}} times the derived sign."""
    n = a.n
    partners, signs = cross_sign_vector(n, p, q)
    total = Fraction(0)
    for A in range(1 << n):
        x = a.coeffs[A]
        if x:
            total += int(signs[A]) * x * a.coeffs[int(partners[A])]
    return (1 << n) * total


def cross_brute(a: Multivector, p: int, q: int) -> Fraction:
    n = a.n
    return tau(0, mul(mul(mul(bar(a), gen(n, p)), a), gen_bar(n, q)))


def _printed_errata(n: int) -> List[Dict]:
    out = []
    for case in CASES:
        witness = first_mismatch(n, case)
        if witness is None:
            continue
        A = sum(1 << (k - 1) for k in witness["A"])
        _, printed, text = printed_exponent(A, witness["i"], witness["j"])
        _, derived = derived_exponent(A, witness["i"], witness["j"])
        out.append({
            "case": case,
            "printed_exponent": text,
            "printed_value": printed,
            "derived_exponent": derived,
            "first_mismatch": witness,
        })
    return out


def verify_cross_term_cases(n: int, trials: int = 1000, seed: int = 0,
                            workers: Optional[int] = None) -> IdentityReport:
    """
    Off-diagonal Hessian contribution.

    Exhaustive part: every admissible (A, B, i, j) matches its family's derived
    sign and the closed general form, and every non-admissible pair has zero
    scalar part. Random part: the full bilinear form equals the sum over the
    four families. Disagreements of the printed aggregate exponents with the
    enumeration are attached as errata; they never change pass/fail.
    """
    _check_range(n, 2)
    report = IdentityReport("cross_term_cases", n, seed)
    size = 1 << n
    exhaustive = size * size * n * (n - 1) <= EXHAUSTIVE_LIMIT
    per_case = {c: 0 for c in CASES}

    for A, B, i, j in admissible_triples(n):
        brute = brute_scalar(A, i, B, j)
        ok = brute == derived_sign(A, i, j) == general_sign(A, i, j)
        per_case[case_of(A, i, j)] += 1
        report.record(ok, {"part": "family sign", "case": case_of(A, i, j),
                           "derived_exponent": derived_exponent(A, i, j)[1],
                           "brute": brute, **describe_triple(n, A, B, i, j)})
    if exhaustive:
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue
                for A in range(size):
                    p = partner(A, i, j)
                    for B in range(size):
                        if B != p:
                            report.record(brute_scalar(A, i, B, j) == 0,
                                          {"part": "outside families", **describe_triple(n, A, B, i, j)})
    report.notes["triples_per_case"] = per_case
    report.notes["outside_pairs_enumerated"] = exhaustive

    pairs = [(p, q) for p in range(1, n + 1) for q in range(1, n + 1) if p != q]

    def check(t: int, rng: np.random.Generator):
        a = random_exact(n, rng, COEFF_BOUND)
        for p, q in pairs:
            brute = cross_brute(a, p, q)
            cases = cross_case_sum(a, p, q)
            if brute != cases:
                return False, {"part": "bilinear form", "alpha": a, "p": p, "q": q,
                               "brute": brute, "case_sum": cases}
        return True, None

    report.merge(run_trials("cross_term_cases", n, trials, seed, check, workers))
    report.errata.extend(_printed_errata(n))
    return log_summary(report)


# ---------------------------------------------------------------------------
# assembled Hessian term
# ---------------------------------------------------------------------------

def hessian_term_brute(a: Multivector, H: HessianStub) -> Fraction:
    """tau(0, bar(a) sum_{j>=1} sum_{i>=0} (e_j a bar(e_i) - a e_j bar(e_i)) H_ji)."""
    n = a.n
    ab = bar(a)
    total = Multivector.zero(n, EXACT)
    for j in range(1, n + 1):
        ej = gen(n, j)
        for i in range(n + 1):
            h = H[j, i]
            if h == 0:
                continue
            ei_bar = gen_bar(n, i)
            total = total + (mul(mul(ej, a), ei_bar) - mul(mul(a, ej), ei_bar)).scale(h)
    return tau(0, mul(ab, total))


def hessian_term_parts(a: Multivector, H: HessianStub) -> Dict[str, Fraction]:
    """The diagonal, cross and x_0-row pieces of the Hessian term."""
    n = a.n
    diag = [H[i, i] for i in range(1, n + 1)]
    cross = Fraction(0)
    for p in range(1, n + 1):
        for q in range(1, n + 1):
            if p != q and H[p, q] != 0:
                cross += H[p, q] * cross_case_sum(a, p, q)
    ab = bar(a)
    axial = Fraction(0)
    for j in range(1, n + 1):
        if H[j, 0] != 0:
            ej = gen(n, j)
            axial += H[j, 0] * tau(0, mul(ab, mul(ej, a) - mul(a, ej)))
    return {"diagonal": diagonal_closed_form(a, diag), "cross": cross, "axial": axial}


def verify_hessian_decomposition(n: int, trials: int = 1000, seed: int = 0,
                            workers: Optional[int] = None) -> IdentityReport:
    """Brute-force Hessian term equals diagonal + cross + axial pieces, with the axial piece zero."""
    _check_range(n, 1)

    def check(t: int, rng: np.random.Generator):
        a = random_exact(n, rng, COEFF_BOUND)
        H = HessianStub.random(n, rng, COEFF_BOUND)
        brute = hessian_term_brute(a, H)
        parts = hessian_term_parts(a, H)
        ok = parts["axial"] == 0 and brute == parts["diagonal"] + parts["cross"]
        if ok:
            return True, None
        return False, {"alpha": a, "hessian": [list(row) for row in H.entries], "brute": brute, **parts}

    return log_summary(run_trials("hessian_decomposition", n, trials, seed, check, workers))


def verify_hessian_nonnegative(n: int, trials: int = 1000, seed: int = 0,
                          workers: Optional[int] = None) -> IdentityReport:
    """The pointwise Hessian term is >= 0 for admissible Hessians."""
    _check_range(n, 1)

    def check(t: int, rng: np.random.Generator):
        a = random_exact(n, rng, COEFF_BOUND)
        H = HessianStub.random(n, rng, COEFF_BOUND, admissible=True)
        value = hessian_term_brute(a, H)
        if value >= 0:
            return True, None
        return False, {"alpha": a, "hessian": [list(row) for row in H.entries], "value": value}

    return log_summary(run_trials("hessian_term_nonnegative", n, trials, seed, check, workers))


SUITES = (
    ("core_laws", verify_core_laws, 1),
    ("scalar_annihilation", verify_scalar_annihilation, 1),
    ("diagonal_terms", verify_diagonal_terms, 1),
    ("cross_term_cases", verify_cross_term_cases, 2),
    ("hessian_decomposition", verify_hessian_decomposition, 1),
    ("hessian_term_nonnegative", verify_hessian_nonnegative, 1),
)


def run_all_suites(n: int, trials: int = 1000, seed: int = 0,
                   workers: Optional[int] = None) -> List[IdentityReport]:
    """Every suite that applies to n, in a fixed order."""
    _check_range(n, 1)
    out = []
    for name, fn, min_n in SUITES:
        if n < min_n:
            skipped = IdentityReport(name, n, seed)
            skipped.notes["skipped"] = f"needs n >= {min_n}"
            out.append(skipped)
            continue
        out.append(fn(n, trials, seed, workers))
    return out
