import pytest

from diracl2.algebra.blades import (
    Blade,
    Involution,
    all_blades,
    blade_product,
    blade_sign,
    check_n,
    involution_sign,
    sign_column,
    sign_table,
)
from diracl2.errors import DimensionError


def test_generators_square_to_minus_one():
    for k in range(4):
        assert blade_sign(1 << k, 1 << k) == -1


def test_generators_anticommute():
    assert blade_sign(0b01, 0b10) == 1
    assert blade_sign(0b10, 0b01) == -1


@pytest.mark.parametrize("kind,expected", [
    (Involution.INVERSION, [1, -1, 1, -1]),
    (Involution.REVERSION, [1, 1, -1, -1]),
    (Involution.BAR, [1, -1, -1, 1]),
])
def test_involution_signs_by_grade(kind, expected):
    assert [involution_sign(r, kind) for r in range(4)] == expected


def test_sign_table_matches_pairwise_signs():
    n = 3
    table = sign_table(n)
    for a in range(1 << n):
        for b in range(1 << n):
            assert table[a, b] == blade_sign(a, b)


def test_sign_column_matches_pairwise_signs():
    n = 4
    for b in range(1 << n):
        col = sign_column(b, n)
        assert [int(s) for s in col] == [blade_sign(a, b) for a in range(1 << n)]


def test_parse_and_label():
    b = Blade.parse(3, "e13")
    assert b.mask == 0b101
    assert b.indices() == (1, 3)
    assert b.label() == "e13"
    assert Blade.parse(3, "e0").mask == 0
    assert Blade.generator(3, 2).label() == "e2"


def test_parse_rejects_bad_labels():
    with pytest.raises(DimensionError):
        Blade.parse(2, "e3")
    with pytest.raises(DimensionError):
        Blade.parse(3, "e11")
    with pytest.raises(DimensionError):
        Blade.parse(3, "x1")


def test_blade_product_of_e12_with_itself():
    e12 = Blade.parse(2, "e12")
    sign, out = blade_product(e12, e12)
    assert (sign, out.mask) == (-1, 0)


def test_range_checks():
    with pytest.raises(DimensionError):
        check_n(-1)
    with pytest.raises(DimensionError):
        Blade(2, 0b100)
    with pytest.raises(DimensionError):
        blade_product(Blade(2, 1), Blade(3, 1))
    assert len(all_blades(3)) == 8
