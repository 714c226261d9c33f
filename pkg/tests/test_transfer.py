import pytest

from pathseries.paths import WEIGHT_3L0
from pathseries.recurrences import b_table
from pathseries.series import poch, poch_inverse
from pathseries.transfer import (
    DISPLAYED_MATRIX,
    build_matrix_M,
    character_oracle,
    coefficient_bridge,
    displayed_matrix,
    f_g_prime,
    k_series,
    prefix_of_index,
    verify_matrix_M,
    verify_qdif,
    verify_qdif2,
    verify_transfer,
)


def test_index_reading():
    assert prefix_of_index(1) == (0, 0)
    assert prefix_of_index(2) == (1, 0)
    assert prefix_of_index(13) == (0, 3)
    assert prefix_of_index(13, "transposed") == (3, 0)


def test_ground_prefix_is_fixed():
    assert f_g_prime((0, 3), (0, 3)) == (0, 0)


def test_matrix_matches_display_under_standard_reading():
    m = build_matrix_M()
    assert m.convention == "standard"
    assert m.cell(1, 1) == (6, 9)
    assert [m.cell(4, c) for c in range(1, 5)] == [(0, 0)] * 4
    assert m.cell(13, 13) == (0, 0)
    assert m.entries == displayed_matrix()
    assert m.to_text().splitlines()[0].split()[0] == "x^6q^9"


def test_displayed_rows_depend_only_on_inner_column_element():
    assert len(DISPLAYED_MATRIX) == 16
    for p in range(16):
        for b1 in range(4):
            values = {f_g_prime((b2, b1), prefix_of_index(p + 1)) for b2 in range(4)}
            assert len(values) == 1


def test_matrix_report():
    report = verify_matrix_M()
    assert report.passed
    assert report.details["convention"] == "standard"


def test_transfer_relation_small():
    report = verify_transfer(12)
    assert report.passed, report.first_mismatch
    assert len(report.details["checks"]) == 16


def test_q_difference_equations_small():
    assert verify_qdif(14).passed
    report = verify_qdif2(14)
    assert report.passed, report.first_mismatch
    assert set(report.details["checks"]) == {
        "qdif2[3L0]",
        "k_recurrence[3L0]",
        "qdif2[2L0+L1]",
        "k_recurrence[2L0+L1]",
    }


@pytest.mark.parametrize("i", [1, 2])
def test_coefficient_bridge_small(i):
    report = coefficient_bridge(i, 14)
    assert report.passed, report.first_mismatch
    assert report.details["weight"] == ("3L0" if i == 2 else "2L0+L1")


def test_bridge_multiplies_by_pochhammer():
    # b_n = (q;q)_n k_n; the displayed relation b_n = k_n/(q;q)_n has the quotient reversed
    trunc = 16
    K = k_series(WEIGHT_3L0, trunc)
    b2 = b_table(2, 2).polys[2].to_series(trunc)
    assert K.coefficient(2) * poch(1, 1, 2, trunc) == b2
    assert K.coefficient(2) == b2 * poch_inverse(1, 1, 2, trunc)
    assert K.coefficient(2) * poch_inverse(1, 1, 2, trunc) != b2


def test_character_oracle_small():
    report = character_oracle(bfs_degree=8, trunc=14)
    assert report.passed, report.first_mismatch
    assert report.details["counts"] == report.details["bfs_counts"]


@pytest.mark.slow
def test_path_identities_at_default_order():
    for report in (verify_transfer(30), verify_qdif(30), verify_qdif2(30), coefficient_bridge(1, 30), coefficient_bridge(2, 30)):
        assert report.passed, (report.identity, report.first_mismatch)


@pytest.mark.slow
def test_character_oracle_at_default_order():
    report = character_oracle(bfs_degree=12, trunc=30)
    assert report.passed, report.first_mismatch
