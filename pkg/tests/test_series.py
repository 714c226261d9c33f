import random

import pytest

from pathseries.errors import InexactDivision, NonUnitConstantTerm
from pathseries.series import (
    QPolynomial,
    QSeries,
    XLaurentSeries,
    divide_by_x_poch,
    poch,
    poch_inverse,
    poly_ops,
    qs_arith,
    qs_inverse,
    xl_substitute,
)

N = 12


def _random_series(rng: random.Random, trunc: int = N, unit: bool = False) -> QSeries:
    coeffs = [rng.randint(-5, 5) for _ in range(trunc)]
    if unit:
        coeffs[0] = rng.choice([1, -1])
    return QSeries(tuple(coeffs))


def test_difference_of_squares():
    a = QSeries.from_terms({0: 1, 1: 1}, N)
    b = QSeries.from_terms({0: 1, 1: -1}, N)
    assert qs_arith(a, b, "mul") == QSeries.from_terms({0: 1, 2: -1}, N)
    assert qs_arith(a, QSeries.zero(N), "add") == a


def test_geometric_series_inverse():
    one_minus_q = QSeries.from_terms({0: 1, 1: -1}, N)
    geo = qs_inverse(one_minus_q)
    assert geo.coeffs == (1,) * N
    assert geo * one_minus_q == QSeries.one(N)
    assert qs_inverse(QSeries.one(N)) == QSeries.one(N)


def test_inverse_needs_unit_constant_term():
    with pytest.raises(NonUnitConstantTerm):
        qs_inverse(QSeries.from_terms({0: 2, 1: 1}, N))
    with pytest.raises(NonUnitConstantTerm):
        qs_inverse(QSeries.from_terms({1: 1}, N))


def test_inverse_of_odd_pochhammer_counts_strict_partitions():
    s = qs_inverse(poch(1, 2, None, N))
    assert s.coeffs[:8] == (1, 1, 1, 2, 2, 3, 4, 5)


def test_poch_values():
    assert poch(1, 1, 2, N) == QSeries.from_terms({0: 1, 1: -1, 2: -1, 3: 1}, N)
    assert poch(1, 1, 0, N) == QSeries.one(N)
    rr = poch_inverse(1, 5, None, N) * poch_inverse(4, 5, None, N)
    assert rr.coeffs[:8] == (1, 1, 1, 1, 2, 2, 3, 3)
    assert qs_inverse(poch(1, 5, None, N) * poch(4, 5, None, N)) == rr


def test_infinite_poch_agrees_with_long_finite_product():
    for a, m in [(1, 1), (2, 5), (3, 12)]:
        n = (N - a) // m + 1
        assert poch(a, m, None, N) == poch(a, m, n, N)
        assert poch(a, m, None, N) == poch(a, m, n + 3, N)


def test_ring_axioms_on_random_triples():
    rng = random.Random(1234)
    for _ in range(1000):
        a, b, c = (_random_series(rng, 8) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert (a + b) - b == a


def test_inverse_round_trips():
    rng = random.Random(99)
    for _ in range(100):
        a = _random_series(rng, unit=True)
        inv = a.inverse()
        assert a * inv == QSeries.one(N)
        assert inv * a == QSeries.one(N)


def test_mixed_truncation_takes_minimum():
    a = QSeries.one(10)
    b = QSeries.one(6)
    assert (a + b).trunc == 6
    assert (a * b).trunc == 6


def test_substitution():
    x = XLaurentSeries.from_monomials([(1, 0, 1)], N)
    assert xl_substitute(x, 2) == XLaurentSeries.from_monomials([(1, 2, 1)], N)

    inv = XLaurentSeries.from_monomials([(-1, 3, 1)], 10)
    moved = xl_substitute(inv, 2)
    assert moved.trunc == 8
    assert moved.coefficient_at(-1, 1) == 1


def test_substitution_composes_and_zero_is_identity():
    rng = random.Random(7)
    f = XLaurentSeries.build({e: _random_series(rng, 20) for e in range(0, 4)})
    assert xl_substitute(f, 0) == f
    assert xl_substitute(xl_substitute(f, 1), 2) == xl_substitute(f, 3)


def test_zero_entries_are_pruned():
    f = XLaurentSeries.from_monomials([(0, 0, 1), (2, 1, 1), (2, 1, -1)], 5)
    assert f.x_support() == (0, 0)


def test_divide_by_x_pochhammer_round_trip():
    n = 10
    one = XLaurentSeries.from_monomials([(0, 0, 1)], n)
    k = divide_by_x_poch(one)
    product = one
    for e in range(1, n):
        product = product * XLaurentSeries.from_monomials([(0, 0, 1), (1, e, 1)], n)
    assert (k * product).agrees_with(one)
    # 1/(1+xq) starts 1 - xq + x^2q^2
    assert k.coefficient_at(1, 1) == -1
    assert k.coefficient_at(2, 2) == 1


def test_json_schema():
    f = XLaurentSeries.from_monomials([(0, 0, 1), (1, 2, -3)], 4)
    assert f.to_json_obj() == {"trunc": 4, "terms": [[0, [[0, "1"]]], [1, [[2, "-3"]]]]}
    assert XLaurentSeries.from_json_obj(f.to_json_obj()) == f


def test_text_rendering():
    assert QSeries.from_terms({0: 1, 1: 1}, 3).to_text() == "1 + q + O(q^3)"
    assert QSeries.from_terms({2: -2}, 4).to_text() == "-2q^2 + O(q^4)"


def test_polynomial_queries():
    b5 = QPolynomial.from_terms([(9, 1), (11, 1)])
    assert poly_ops(b5, None, "eval_at_1") == 2
    assert poly_ops(QPolynomial.monomial(7, -1), None, "min_degree") == 7
    assert QPolynomial.zero().min_degree() is None
    assert b5.factored() == "q^9(1 + q^2)"
    assert QPolynomial.from_terms([(13, -1), (14, -1), (16, -1)]).factored() == "-q^13(1 + q + q^3)"


def test_exact_division():
    num = QPolynomial.from_terms([(2, 1), (3, -1)])
    assert poly_ops(num, QPolynomial.one_minus(1), "divide_exact") == QPolynomial.monomial(2)
    with pytest.raises(InexactDivision):
        QPolynomial.from_terms([(0, 1), (2, 1)]).divide_exact(QPolynomial.one_minus(1))


def test_sign_coherence():
    assert QPolynomial.from_terms([(3, -1), (5, -2)]).is_sign_coherent()
    assert not QPolynomial.from_terms([(3, 1), (5, -2)]).is_sign_coherent()
