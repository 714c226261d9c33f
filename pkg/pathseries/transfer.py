"""Prefix transfer matrix of the B^{1,3} path model and the q-difference equations it implies."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Literal, Tuple

from .crystal import b13, ground_state
from .errors import MatrixMismatch, RepresentativeDependence
from .models import DominantWeight, Mismatch, VerificationReport
from .paths import (
    WEIGHT_2L0_L1,
    WEIGHT_3L0,
    LambdaPath,
    Prefix,
    bfs_paths,
    concatenate,
    degree,
    degree_counts,
    gf_J,
    gf_J_prefixes,
    mod_length,
)
from .recurrences import b_table, rr_product
from .series import QSeries, XLaurentSeries, divide_by_x_poch, poch, poch_inverse

logger = logging.getLogger(__name__)

Convention = Literal["standard", "transposed"]

# (f', g') of x^f' q^g' for each row p and each column block q1 = 0..3, rows in index order 1..16.
DISPLAYED_MATRIX: Tuple[Tuple[Tuple[int, int], ...], ...] = (
    ((6, 9), (5, 7), (4, 5), (3, 3)),
    ((4, 6), (3, 4), (2, 2), (3, 4)),
    ((2, 3), (1, 1), (2, 3), (3, 5)),
    ((0, 0), (1, 2), (2, 4), (3, 6)),
    ((5, 8), (4, 6), (3, 4), (2, 2)),
    ((3, 5), (2, 3), (1, 1), (2, 3)),
    ((1, 2), (0, 0), (1, 2), (2, 4)),
    ((1, 1), (2, 3), (3, 5), (4, 7)),
    ((4, 7), (3, 5), (2, 3), (1, 1)),
    ((2, 4), (1, 2), (0, 0), (1, 2)),
    ((2, 3), (1, 1), (2, 3), (3, 5)),
    ((2, 2), (3, 4), (4, 6), (5, 8)),
    ((3, 6), (2, 4), (1, 2), (0, 0)),
    ((3, 5), (2, 3), (1, 1), (2, 3)),
    ((3, 4), (2, 2), (3, 4), (4, 6)),
    ((3, 3), (4, 5), (5, 7), (6, 9)),
)


@dataclass(frozen=True)
class MonomialMatrix:
    """16x16 matrix of monomials x^f q^g, rows by p and columns by q, 1-based indices."""

    entries: Tuple[Tuple[Tuple[int, int], ...], ...]
    convention: Convention

    def cell(self, row: int, col: int) -> Tuple[int, int]:
        return self.entries[row - 1][col - 1]

    def distinct_cells(self) -> int:
        return len({(r, c // 4, self.entries[r][c]) for r in range(16) for c in range(16)})

    def to_text(self) -> str:
        def mono(f: int, g: int) -> str:
            if f == 0 and g == 0:
                return "1"
            xs = "" if f == 0 else ("x" if f == 1 else f"x^{f}")
            qs = "" if g == 0 else ("q" if g == 1 else f"q^{g}")
            return xs + qs

        width = max(len(mono(*e)) for row in self.entries for e in row)
        return "\n".join(" ".join(mono(*e).rjust(width) for e in row) for row in self.entries)


def prefix_of_index(index: int, convention: Convention = "standard") -> Prefix:
    """Prefix (b2, b1) at position ``index`` (1..16); ``standard`` reads index = 1 + 4*b1 + b2."""
    hi, lo = divmod(index - 1, 4)
    return (lo, hi) if convention == "standard" else (hi, lo)


def displayed_matrix() -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    return tuple(tuple(row[c // 4] for c in range(16)) for row in DISPLAYED_MATRIX)


def _representatives(q: Prefix) -> List[LambdaPath]:
    spec = b13()
    ground = ground_state(spec, WEIGHT_3L0)
    shape = (q[1], q[0])
    plain = LambdaPath.build(ground, shape)
    target = ground.block(3)
    extra = next(
        (a, b) for a in spec.elements for b in spec.elements if (a, b) != target
    )
    return [plain, LambdaPath.build(ground, shape + extra)]


@lru_cache(maxsize=None)
def f_g_prime(q: Prefix, p: Prefix) -> Tuple[int, int]:
    """(f', g') with l(bp) = l(b) + f' and |bp| = |b| + 2 l(b) + g' for every b ending in q."""
    values = set()
    for b in _representatives(q):
        bp = concatenate(b, p)
        lb = mod_length(b)
        values.add((mod_length(bp) - lb, degree(bp) - degree(b) - 2 * lb))
    if len(values) != 1:
        raise RepresentativeDependence(f"q={q}, p={p} gives {sorted(values)} for different representatives")
    return values.pop()


def computed_matrix(convention: Convention) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    return tuple(
        tuple(
            f_g_prime(prefix_of_index(c, convention), prefix_of_index(r, convention)) for c in range(1, 17)
        )
        for r in range(1, 17)
    )


def _differences(computed, displayed) -> List[Tuple[int, int, Tuple[int, int], Tuple[int, int]]]:
    return [
        (r + 1, c + 1, computed[r][c], displayed[r][c])
        for r in range(16)
        for c in range(16)
        if computed[r][c] != displayed[r][c]
    ]


def build_matrix_M() -> MonomialMatrix:
    displayed = displayed_matrix()
    first_diffs = None
    for convention in ("standard", "transposed"):
        computed = computed_matrix(convention)  # type: ignore[arg-type]
        diffs = _differences(computed, displayed)
        if not diffs:
            logger.info("matrix M matches the displayed matrix under the %s index reading", convention)
            return MonomialMatrix(computed, convention)  # type: ignore[arg-type]
        logger.info("%s index reading: %d cells differ", convention, len(diffs))
        if first_diffs is None:
            first_diffs = diffs
    raise MatrixMismatch(first_diffs or [])


def verify_matrix_M() -> VerificationReport:
    try:
        m = build_matrix_M()
    except MatrixMismatch as exc:
        r, c, got, shown = exc.cells[0]
        return VerificationReport(
            identity="matrix_M",
            trunc=1,
            passed=False,
            first_mismatch=Mismatch(xdeg=str(r), qdeg=str(c), lhs=f"x^{got[0]}q^{got[1]}", rhs=f"x^{shown[0]}q^{shown[1]}"),
            details={"differing_cells": len(exc.cells), "mismatch_axes": "row, column"},
        )
    return VerificationReport(
        identity="matrix_M",
        trunc=1,
        passed=True,
        details={"convention": m.convention, "cells": 256, "distinct_cells": m.distinct_cells()},
    )


def _prefixes() -> List[Prefix]:
    spec = b13()
    return [(a, b) for b in spec.elements for a in spec.elements]


def verify_transfer(trunc: int) -> VerificationReport:
    J = gf_J_prefixes(WEIGHT_3L0, trunc)
    shifted = {q: s.substitute(2) for q, s in J.items()}
    parts = []
    for p in _prefixes():
        rhs = XLaurentSeries.zero(trunc)
        for q in _prefixes():
            f, g = f_g_prime(q, p)
            rhs = rhs + shifted[q].times_monomial(f, g)
        parts.append(VerificationReport.from_comparison(f"J_{p[0]}{p[1]}", J[p], rhs))
    report = VerificationReport.combine("transfer16", trunc, parts)
    logger.info("transfer relation mod q^%d: %s", trunc, "pass" if report.passed else "FAIL")
    return report


def _xpoly(*monomials: Tuple[int, int, int], trunc: int) -> XLaurentSeries:
    return XLaurentSeries.from_monomials(monomials, trunc)


def qdif_sides(J: XLaurentSeries) -> Tuple[XLaurentSeries, XLaurentSeries]:
    """Both sides of qJ(x) = (1+xq)(1+q-xq+x^2q^3)J(xq) - (1+xq^2)(1-x^2q^2)J(xq^2)."""
    n = J.trunc
    a = _xpoly((0, 0, 1), (1, 1, 1), trunc=n) * _xpoly((0, 0, 1), (0, 1, 1), (1, 1, -1), (2, 3, 1), trunc=n)
    b = _xpoly((0, 0, 1), (1, 2, 1), trunc=n) * _xpoly((0, 0, 1), (2, 2, -1), trunc=n)
    return J.times_monomial(0, 1), a * J.substitute(1) - b * J.substitute(2)


def qdif2_sides(K: XLaurentSeries) -> Tuple[XLaurentSeries, XLaurentSeries]:
    """Both sides of qK(x) = (1+q-xq+x^2q^3)K(xq) - (1-xq)K(xq^2)."""
    n = K.trunc
    a = _xpoly((0, 0, 1), (0, 1, 1), (1, 1, -1), (2, 3, 1), trunc=n)
    b = _xpoly((0, 0, 1), (1, 1, -1), trunc=n)
    return K.times_monomial(0, 1), a * K.substitute(1) - b * K.substitute(2)


def k_series(weight: DominantWeight, trunc: int) -> XLaurentSeries:
    """K(x,q) = J(x,q) / (-xq;q)_inf."""
    return divide_by_x_poch(gf_J(weight, trunc), 1, 1)


def verify_qdif(trunc: int) -> VerificationReport:
    lhs, rhs = qdif_sides(gf_J(WEIGHT_3L0, trunc))
    return VerificationReport.from_comparison("qdif", lhs, rhs)


def k_recurrence_report(K: XLaurentSeries, n_max: int = 8) -> VerificationReport:
    """q k_n = (q^n+q^{n+1})k_n - q^n k_{n-1} + q^{n+1}k_{n-2} - q^{2n}k_n + q^{2n-1}k_{n-1}."""
    N = K.trunc
    parts = []
    for n in range(n_max + 1):
        k0, k1, k2 = K.coefficient(n), K.coefficient(n - 1), K.coefficient(n - 2)
        lhs = k0.shift(1)
        rhs = k0.shift(n) + k0.shift(n + 1) - k1.shift(n) + k2.shift(n + 1) - k0.shift(2 * n)
        if n >= 1:
            rhs = rhs + k1.shift(2 * n - 1)
        parts.append(VerificationReport.from_comparison(f"k_{n}", lhs, rhs))
    return VerificationReport.combine("k_recurrence", N, parts, n_max=n_max)


def verify_qdif2(trunc: int) -> VerificationReport:
    parts = []
    for weight in (WEIGHT_3L0, WEIGHT_2L0_L1):
        K = k_series(weight, trunc)
        lhs, rhs = qdif2_sides(K)
        parts.append(VerificationReport.from_comparison(f"qdif2[{weight.label}]", lhs, rhs))
        parts.append(k_recurrence_report(K).model_copy(update={"identity": f"k_recurrence[{weight.label}]"}))
    return VerificationReport.combine("qdif2", trunc, parts)


def coefficient_bridge(i: int, trunc: int) -> VerificationReport:
    """b_n^(i) = (q;q)_n [x^n] K(x,q) with K built from 3L0 for i=2 and from 2L0+L1 for i=1."""
    if i not in (1, 2):
        raise ValueError("i must be 1 or 2")
    weight = WEIGHT_3L0 if i == 2 else WEIGHT_2L0_L1
    K = k_series(weight, trunc)
    support = K.x_support() or (0, 0)
    n_max = max(support[1], 0) + 2
    table = b_table(i, n_max)
    parts = []
    for n in range(min(support[0], 0), n_max + 1):
        k_n = K.coefficient(n)
        if n < 0:
            parts.append(VerificationReport.from_comparison(f"k_{n}", k_n, QSeries.zero(trunc)))
            continue
        product = k_n * poch(1, 1, n, trunc)
        parts.append(VerificationReport.from_comparison(f"b_{n}", product, table.polys[n].to_series(trunc)))
    report = VerificationReport.combine(f"bridge_b_i{i}", trunc, parts, weight=weight.label, n_max=n_max)
    return report.model_copy(update={"x_support": K.x_support()})


def character_oracle(bfs_degree: int = 12, trunc: int = 30) -> VerificationReport:
    """Enumerated paths agree with the crystal-operator closure, and J(x,q) has the expected low slices."""
    counts = degree_counts(WEIGHT_3L0, bfs_degree)
    bfs_counts = [len(level) for level in bfs_paths(WEIGHT_3L0, bfs_degree)]
    counts_series = QSeries.from_terms(enumerate(counts), bfs_degree + 1)
    bfs_series = QSeries.from_terms(enumerate(bfs_counts), bfs_degree + 1)
    parts = [VerificationReport.from_comparison("bfs_counts", counts_series, bfs_series)]

    J = gf_J(WEIGHT_3L0, trunc)
    one_over = QSeries.one(trunc).shift(1).div_one_minus(1)
    parts.append(VerificationReport.from_comparison("x1_slice", J.coefficient(1), one_over))

    euler_odd = poch_inverse(1, 2, None, trunc)  # (-q;q)_inf
    for weight, i in ((WEIGHT_3L0, 2), (WEIGHT_2L0_L1, 1)):
        at_one = gf_J(weight, trunc).at_x_one()
        parts.append(
            VerificationReport.from_comparison(f"J(1,q)[{weight.label}]", at_one, euler_odd * rr_product(i, trunc))
        )
    return VerificationReport.combine(
        "character_oracle", trunc, parts, counts=counts, bfs_counts=bfs_counts
    )
