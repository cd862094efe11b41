import pytest

from diracl2.verify.sign_cases import (
    CASES,
    admissible_triples,
    brute_scalar,
    case_of,
    derived_sign,
    first_mismatch,
    general_sign,
    partner,
    printed_sign,
)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_derived_and_general_signs_match_direct_products(n):
    for A, B, i, j in admissible_triples(n):
        brute = brute_scalar(A, i, B, j)
        assert brute in (-1, 1)
        assert derived_sign(A, i, j) == brute
        assert general_sign(A, i, j) == brute


def test_pairs_outside_the_families_vanish():
    n = 3
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            for A in range(1 << n):
                for B in range(1 << n):
                    if B != partner(A, i, j):
                        assert brute_scalar(A, i, B, j) == 0


def test_known_triple():
    # bar(e1) e1 e2 bar(e2) = 1
    assert brute_scalar(0b01, 1, 0b10, 2) == 1
    assert case_of(0b01, 1, 2) == "c1"


@pytest.mark.parametrize("n", [2, 3, 4])
def test_first_mismatch_is_a_real_disagreement(n):
    for case in CASES:
        witness = first_mismatch(n, case)
        if witness is None:
            continue
        A = sum(1 << (k - 1) for k in witness["A"])
        B = sum(1 << (k - 1) for k in witness["B"])
        assert case_of(A, witness["i"], witness["j"]) == case
        assert printed_sign(A, witness["i"], witness["j"]) != brute_scalar(A, witness["i"], B, witness["j"])
