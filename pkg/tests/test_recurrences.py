import pytest

from pathseries.recurrences import (
    b_table,
    c_table,
    capparelli_product,
    displayed_table_check,
    min_degrees_increase,
    rr_product,
    specializations,
    theorem_sum,
    verify_theorem,
)
from pathseries.series import QPolynomial


def _poly(*pairs):
    return QPolynomial.from_terms(pairs)


def test_b_initial_values():
    b1 = b_table(1, 6).polys
    assert b1[:5] == (QPolynomial.one(), _poly((1, 1)), QPolynomial.zero(), _poly((4, 1)), _poly((7, -1)))
    assert b1[5] == _poly((9, 1), (11, 1))
    assert b1[6] == _poly((13, -1), (14, -1), (16, -1))

    b2 = b_table(2, 6).polys
    assert b2[1].is_zero()
    assert b2[2] == _poly((2, 1))
    assert b2[3] == _poly((4, -1))
    assert b2[4] == _poly((6, 1), (7, 1))
    assert b2[6] == _poly(*[(d, 1) for d in range(12, 17)])


def test_short_tables():
    assert b_table(1, 0).polys == (QPolynomial.one(),)
    assert len(c_table(2, 1).polys) == 2
    assert c_table(1, 1).polys[1] == _poly((1, 1), (3, 1))
    with pytest.raises(ValueError):
        b_table(3, 4)
    with pytest.raises(ValueError):
        c_table(1, -1)


def test_displayed_values_against_recurrence():
    assert all(displayed_table_check("b", 1).values())
    assert displayed_table_check("b", 2) == {2: True, 3: True, 4: True, 5: True, 6: False, 7: True}
    assert all(displayed_table_check("c", 1).values())
    assert all(displayed_table_check("c", 2).values())


@pytest.mark.parametrize("i", [1, 2])
def test_b_minimal_degrees_increase(i):
    degrees = [p.min_degree() for p in b_table(i, 20).polys[3:]]
    assert all(a < b for a, b in zip(degrees, degrees[1:]))


def test_table_rows():
    rows = c_table(2, 2).rows()
    assert [r["n"] for r in rows] == [0, 1, 2]
    assert rows[2]["value_at_1"] == "4"
    assert rows[1]["polynomial"] == [[2, "1"], [3, "1"]]
    assert b_table(1, 5).rows()[5]["text"] == "q^9(1 + q^2)"


@pytest.mark.parametrize("i", [1, 2])
def test_specializations(i):
    b = specializations("b", i, 25)
    assert b.passed, b.details
    assert b.identity == f"b{i}_special"
    c = specializations("c", i, 25)
    assert c.passed, c.details
    assert "nonnegative_coefficients" in c.details


def test_fibonacci_values():
    values = [abs(p.eval_at_1()) for p in b_table(1, 9).polys[3:]]
    assert values == [1, 1, 2, 3, 5, 8, 13]


@pytest.mark.parametrize("i,first", [(1, [1, 5, 8, 16]), (2, [2, 4, 10, 14])])
def test_c_min_degrees_strictly_increase(i, first):
    lows = [p.min_degree() for p in c_table(i, 14).polys[1:]]
    assert lows[:4] == first
    assert all(a < b for a, b in zip(lows, lows[1:]))


def test_closing_run_needs_increasing_min_degrees():
    assert min_degrees_increase([31, 34, 38])
    assert min_degrees_increase([None, 30, None, 33])
    assert not min_degrees_increase([33, 31])
    assert not min_degrees_increase([30, None, 30])


@pytest.mark.parametrize("i", [1, 2])
def test_sums_equal_products(i):
    n = 60
    assert theorem_sum("b", i, n) == rr_product(i, n)
    assert theorem_sum("c", i, n) == capparelli_product(i, n)
    assert verify_theorem("b", i, n).identity == f"thm1_i{i}"
    assert verify_theorem("c", i, n).identity == f"thm2_i{i}"


@pytest.mark.slow
@pytest.mark.parametrize("i", [1, 2])
def test_sums_equal_products_at_default_order(i):
    assert verify_theorem("b", i, 200).passed
    assert verify_theorem("c", i, 150).passed
