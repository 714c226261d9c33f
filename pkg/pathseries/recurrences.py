"""Polynomial sequences b_n, c_n, their specialisations at q = 1, and the sums they produce."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

from .errors import NonTerminating
from .models import VerificationReport
from .series import QPolynomial, QSeries, poch, poch_inverse

logger = logging.getLogger(__name__)

Family = Literal["b", "c"]

q = QPolynomial.monomial
one_minus = QPolynomial.one_minus

# Displayed initial values, (n, low degree, coefficients of the bracket starting at q^0).
DISPLAYED_B: Dict[int, Dict[int, Tuple[int, int, Tuple[int, ...]]]] = {
    1: {
        2: (0, 0, ()),
        3: (1, 4, (1,)),
        4: (-1, 7, (1,)),
        5: (1, 9, (1, 0, 1)),
        6: (-1, 13, (1, 1, 0, 1)),
        7: (1, 16, (1, 0, 1, 1, 1, 0, 1)),
    },
    2: {
        2: (1, 2, (1,)),
        3: (-1, 4, (1,)),
        4: (1, 6, (1, 1)),
        5: (-1, 9, (1, 1, 1)),
        6: (-1, 12, (1, 1, 1, 1, 1)),
        7: (-1, 16, (1, 1, 2, 1, 1, 1, 1)),
    },
}

DISPLAYED_C: Dict[int, Dict[int, Tuple[int, int, Tuple[int, ...]]]] = {
    1: {
        2: (1, 5, (1, 1, 1, 0, 1)),
        3: (1, 8, (1, 0, 1, 0, 1, 1, 1, 1, 1, 0, 1)),
        4: (1, 16, (1, 1, 1, 1, 2, 1, 1, 1, 2, 1, 1, 1, 1, 0, 1)),
    },
    2: {
        2: (1, 4, (1, 0, 1, 0, 1, 1)),
        3: (1, 10, (1, 1, 1, 1, 1, 1, 0, 1, 1)),
        4: (1, 14, (1, 0, 1, 0, 1, 1, 1, 1, 2, 1, 2, 1, 1, 1, 0, 1, 1)),
    },
}


def displayed_polynomial(sign: int, low: int, bracket: Tuple[int, ...]) -> QPolynomial:
    return QPolynomial({low + k: sign * c for k, c in enumerate(bracket) if c})


@dataclass(frozen=True)
class RecurrenceTable:
    family: Family
    i: int
    polys: Tuple[QPolynomial, ...]

    @property
    def n_max(self) -> int:
        return len(self.polys) - 1

    def rows(self) -> List[Dict[str, Any]]:
        return [
            {
                "n": n,
                "polynomial": p.sparse_pairs(),
                "value_at_1": str(p.eval_at_1()),
                "min_degree": p.min_degree(),
                "text": p.factored(),
            }
            for n, p in enumerate(self.polys)
        ]


def _check_i(i: int) -> None:
    if i not in (1, 2):
        raise ValueError(f"i must be 1 or 2, got {i}")


def _b_step(n: int, b_n: QPolynomial, b_n1: QPolynomial) -> QPolynomial:
    """b_{n+2} = q^{n+2} b_n - q^{n+1} b_{n+1}."""
    return b_n.shift(n + 2) - b_n1.shift(n + 1)


def b_table(i: int, n_max: int) -> RecurrenceTable:
    _check_i(i)
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    polys = [QPolynomial.one(), q(1) if i == 1 else QPolynomial.zero()]
    for n in range(0, n_max - 1):
        polys.append(_b_step(n, polys[n], polys[n + 1]))
    return RecurrenceTable("b", i, tuple(polys[: n_max + 1]))


def _c_step(n: int, c: Dict[int, QPolynomial]) -> QPolynomial:
    """c_{n+2} from c_{n+1}, c_n, c_{n-1}, c_{n-2}; vanishing factors (1-q^0) are kept literal."""
    out = -(c[n + 1] * one_minus(3)).shift(3 * n + 3)
    out = out + (c[n] * (QPolynomial.one() + q(1) + q(3 * n + 2, 2))).shift(3 * n + 4)
    if not c[n - 1].is_zero():
        out = out - (c[n - 1] * one_minus(3) * one_minus(3 * n)).shift(6 * n + 3)
    if not c[n - 2].is_zero():
        out = out - (c[n - 2] * one_minus(3 * n) * one_minus(3 * n - 3)).shift(6 * n + 3)
    return out


def c_table(i: int, n_max: int) -> RecurrenceTable:
    _check_i(i)
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    c: Dict[int, QPolynomial] = {
        -2: QPolynomial.zero(),
        -1: QPolynomial.zero(),
        0: QPolynomial.one(),
        1: q(i) + q(3),
    }
    for n in range(0, n_max - 1):
        c[n + 2] = _c_step(n, c)
    return RecurrenceTable("c", i, tuple(c[n] for n in range(n_max + 1)))


# -- sums and products ----------------------------------------------------


def _iter_family(family: Family, i: int):
    if family == "b":
        a, b = QPolynomial.one(), (q(1) if i == 1 else QPolynomial.zero())
        yield a
        yield b
        n = 0
        while True:
            a, b = b, _b_step(n, a, b)
            yield b
            n += 1
    else:
        c: Dict[int, QPolynomial] = {-2: QPolynomial.zero(), -1: QPolynomial.zero(), 0: QPolynomial.one(), 1: q(i) + q(3)}
        yield c[0]
        yield c[1]
        n = 0
        while True:
            c[n + 2] = _c_step(n, c)
            yield c[n + 2]
            c.pop(n - 2, None)
            n += 1


def min_degrees_increase(lows: Sequence[Optional[int]]) -> bool:
    """True when the min-degrees of the nonzero terms strictly increase; zero polynomials (None) are skipped."""
    present = [low for low in lows if low is not None]
    return all(a < b for a, b in zip(present, present[1:]))


def theorem_sum(family: Family, i: int, trunc: int) -> QSeries:
    """sum_n b_n/(q;q)_n or sum_n c_n/(q^3;q^3)_n modulo q^trunc.

    The sum closes after a run of consecutive terms (2 for b, 4 for c, which looks back four steps)
    that all vanish below q^trunc and whose min-degrees strictly increase along the run.
    """
    _check_i(i)
    step = 1 if family == "b" else 3
    needed = 2 if family == "b" else 4
    limit = 4 * trunc + 16
    total = QSeries.zero(trunc)
    denom = QSeries.one(trunc)  # 1/(q^step;q^step)_n
    run: List[Optional[int]] = []
    for n, poly in enumerate(_iter_family(family, i)):
        if n > 0 and step * n < trunc:
            denom = denom.div_one_minus(step * n)
        low = poly.min_degree()
        if low is None or low >= trunc:
            run = (run + [low])[-needed:]
            if len(run) == needed and min_degrees_increase(run):
                logger.debug("%s^(%d) sum closed after n=%d", family, i, n)
                return total
        else:
            run = []
            total = total + poly.to_series(trunc) * denom
        if n > limit:
            raise NonTerminating(f"{family}^({i})_n still has terms below q^{trunc} at n={n}")
    raise NonTerminating("unreachable")  # pragma: no cover


def rr_product(i: int, trunc: int) -> QSeries:
    """1/(q^i, q^{5-i}; q^5)_inf."""
    _check_i(i)
    return poch_inverse(i, 5, None, trunc) * poch_inverse(5 - i, 5, None, trunc)


def capparelli_product(i: int, trunc: int) -> QSeries:
    _check_i(i)
    if i == 2:
        out = QSeries.one(trunc)
        for a in (2, 3, 9, 10):
            out = out * poch_inverse(a, 12, None, trunc)
        return out
    out = poch(2, 12, None, trunc) * poch(10, 12, None, trunc)
    for a in (1, 3, 5, 7, 9, 11):
        out = out * poch_inverse(a, 12, None, trunc)
    return out


def verify_theorem(family: Family, i: int, trunc: int) -> VerificationReport:
    lhs = theorem_sum(family, i, trunc)
    rhs = rr_product(i, trunc) if family == "b" else capparelli_product(i, trunc)
    ident = f"thm1_i{i}" if family == "b" else f"thm2_i{i}"
    report = VerificationReport.from_comparison(ident, lhs, rhs)
    logger.info("%s mod q^%d: %s", ident, trunc, "pass" if report.passed else "FAIL")
    return report


# -- specialisations ------------------------------------------------------


def fibonacci_start(i: int) -> int:
    """First n with |b_n(1)| = 1 in the Fibonacci run: 3 for i=1, 2 for i=2."""
    return 3 if i == 1 else 2


def specializations(family: Family, i: int, n_max: int) -> VerificationReport:
    _check_i(i)
    ident = f"{family}{i}_special"
    if family == "b":
        table = b_table(i, n_max)
        values = [p.eval_at_1() for p in table.polys]
        start = fibonacci_start(i)
        fib_bad = []
        for n in range(start, n_max + 1):
            if n < start + 2:
                ok = abs(values[n]) == 1
            else:
                ok = abs(values[n]) == abs(values[n - 1]) + abs(values[n - 2])
            if not ok:
                fib_bad.append(n)
        sign_bad = [
            n
            for n in range(3, n_max + 1)
            if not table.polys[n].is_zero()
            and (not table.polys[n].is_sign_coherent() or table.polys[n].sign() != (-1) ** (n + i))
        ]
        passed = not fib_bad and not sign_bad
        details = {"values_at_1": [str(v) for v in values], "fibonacci_failures": fib_bad, "sign_failures": sign_bad}
        first = fib_bad[:1] or sign_bad[:1]
        mismatch = None
        if first:
            n = first[0]
            mismatch = {"xdeg": "0", "qdeg": str(n), "lhs": str(values[n]), "rhs": "fibonacci/sign"}
        return VerificationReport(identity=ident, trunc=n_max, passed=passed, first_mismatch=mismatch, details=details)

    table = c_table(i, n_max)
    bad = [n for n, p in enumerate(table.polys) if p.eval_at_1() != 2**n]
    nonneg = {n: p.has_nonnegative_coefficients() for n, p in enumerate(table.polys)}
    mismatch = None
    if bad:
        n = bad[0]
        mismatch = {"xdeg": "0", "qdeg": str(n), "lhs": str(table.polys[n].eval_at_1()), "rhs": str(2**n)}
    return VerificationReport(
        identity=ident,
        trunc=n_max,
        passed=not bad,
        first_mismatch=mismatch,
        details={
            "power_of_two_failures": bad,
            # conjectural; reported only
            "nonnegative_coefficients": all(nonneg.values()),
            "negative_coefficient_rows": [n for n, ok in nonneg.items() if not ok],
        },
    )


def displayed_table_check(family: Family, i: int) -> Dict[int, bool]:
    """Whether each displayed b_n or c_n equals the recurrence value."""
    shown = (DISPLAYED_B if family == "b" else DISPLAYED_C)[i]
    table = (b_table if family == "b" else c_table)(i, max(shown))
    return {n: table.polys[n] == displayed_polynomial(*entry) for n, entry in shown.items()}
