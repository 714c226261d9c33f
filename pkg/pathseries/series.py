"""Exact truncated series in q, Laurent polynomials in x over them, and q-polynomials.

Every coefficient is a Python int. A ``QSeries`` with ``trunc == N`` is known modulo q^N;
binary operations take the smaller truncation of their operands.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Literal, Mapping

from .errors import InexactDivision, NonUnitConstantTerm

SeriesOp = Literal["add", "sub", "mul"]
PolyOp = Literal["add", "sub", "mul", "eval_at_1", "min_degree", "divide_exact"]


def _check_trunc(trunc: int) -> int:
    if trunc < 1:
        raise ValueError(f"truncation order must be positive, got {trunc}")
    return trunc


def _format_term(coeff: int, monomial: str) -> str:
    if not monomial:
        return str(coeff)
    if coeff == 1:
        return monomial
    if coeff == -1:
        return f"-{monomial}"
    return f"{coeff}{monomial}"


def _q_monomial(deg: int) -> str:
    if deg == 0:
        return ""
    if deg == 1:
        return "q"
    return f"q^{deg}"


def _join_terms(terms: list[tuple[int, str]]) -> str:
    out = ""
    for idx, (coeff, mono) in enumerate(terms):
        text = _format_term(abs(coeff), mono)
        if idx == 0:
            out = text if coeff > 0 else f"-{text}"
        else:
            out += f" {'+' if coeff > 0 else '-'} {text}"
    return out or "0"


@dataclass(frozen=True)
class QSeries:
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_trunc(len(self.coeffs))

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, trunc: int) -> QSeries:
        return cls((0,) * _check_trunc(trunc))

    @classmethod
    def one(cls, trunc: int) -> QSeries:
        return cls.monomial(0, 1, trunc)

    @classmethod
    def monomial(cls, deg: int, coeff: int, trunc: int) -> QSeries:
        out = [0] * _check_trunc(trunc)
        if 0 <= deg < trunc:
            out[deg] = coeff
        elif deg < 0:
            raise ValueError("QSeries has no negative q-degrees")
        return cls(tuple(out))

    @classmethod
    def from_terms(cls, terms: Mapping[int, int] | Iterable[tuple[int, int]], trunc: int) -> QSeries:
        out = [0] * _check_trunc(trunc)
        items = terms.items() if isinstance(terms, Mapping) else terms
        for deg, coeff in items:
            if deg < 0:
                raise ValueError("QSeries has no negative q-degrees")
            if deg < trunc:
                out[deg] += coeff
        return cls(tuple(out))

    # -- basic queries ------------------------------------------------
    @property
    def trunc(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, deg: int) -> int:
        if deg < 0 or deg >= self.trunc:
            raise IndexError(f"q^{deg} is outside the known range 0..{self.trunc - 1}")
        return self.coeffs[deg]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> int | None:
        for deg, c in enumerate(self.coeffs):
            if c:
                return deg
        return None

    def truncate(self, trunc: int) -> QSeries:
        trunc = _check_trunc(min(trunc, self.trunc))
        return self if trunc == self.trunc else QSeries(self.coeffs[:trunc])

    # -- ring operations ----------------------------------------------
    def __add__(self, other: QSeries | int) -> QSeries:
        if isinstance(other, int):
            other = QSeries.monomial(0, other, self.trunc)
        n = min(self.trunc, other.trunc)
        return QSeries(tuple(a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])))

    __radd__ = __add__

    def __neg__(self) -> QSeries:
        return QSeries(tuple(-c for c in self.coeffs))

    def __sub__(self, other: QSeries | int) -> QSeries:
        return self + (-other)

    def __rsub__(self, other: int) -> QSeries:
        return (-self) + other

    def __mul__(self, other: QSeries | int) -> QSeries:
        if isinstance(other, int):
            return QSeries(tuple(other * c for c in self.coeffs))
        n = min(self.trunc, other.trunc)
        out = [0] * n
        b = other.coeffs
        for i, ai in enumerate(self.coeffs[:n]):
            if not ai:
                continue
            for j in range(n - i):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        return QSeries(tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> QSeries:
        a = self.coeffs
        a0 = a[0]
        if a0 not in (1, -1):
            raise NonUnitConstantTerm(f"constant term {a0} is not a unit in Z[[q]]")
        n = self.trunc
        out = [0] * n
        out[0] = a0
        for k in range(1, n):
            acc = 0
            for j in range(1, k + 1):
                aj = a[j]
                if aj:
                    acc += aj * out[k - j]
            out[k] = -a0 * acc
        return QSeries(tuple(out))

    def shift(self, m: int) -> QSeries:
        """Multiply by q^m. A negative m drops the truncation order by |m|."""
        if m >= 0:
            if m >= self.trunc:
                return QSeries.zero(self.trunc)
            return QSeries((0,) * m + self.coeffs[: self.trunc - m])
        if any(self.coeffs[:-m]):
            raise ValueError(f"cannot divide by q^{-m}: series has lower-order terms")
        return QSeries(self.coeffs[-m:])

    def mul_one_minus(self, e: int, sign: int = 1) -> QSeries:
        """Multiply by (1 - sign*q^e) in linear time."""
        out = list(self.coeffs)
        for k in range(self.trunc - 1, e - 1, -1):
            out[k] -= sign * out[k - e]
        return QSeries(tuple(out))

    def div_one_minus(self, e: int, sign: int = 1) -> QSeries:
        """Divide by (1 - sign*q^e), e >= 1, in linear time."""
        if e < 1:
            raise NonUnitConstantTerm("1 - q^0 is not invertible")
        out = list(self.coeffs)
        for k in range(e, self.trunc):
            out[k] += sign * out[k - e]
        return QSeries(tuple(out))

    # -- comparison ---------------------------------------------------
    def first_difference(self, other: QSeries) -> tuple[int, int, int, int] | None:
        """(xdeg, qdeg, lhs, rhs) of the first disagreement below the common truncation."""
        for deg, (a, b) in enumerate(zip(self.coeffs, other.coeffs)):
            if a != b:
                return 0, deg, a, b
        return None

    def agrees_with(self, other: QSeries) -> bool:
        return self.first_difference(other) is None

    # -- output -------------------------------------------------------
    def terms(self) -> list[tuple[int, int]]:
        return [(deg, c) for deg, c in enumerate(self.coeffs) if c]

    def to_text(self) -> str:
        body = _join_terms([(c, _q_monomial(deg)) for deg, c in self.terms()])
        return f"{body} + O(q^{self.trunc})"

    def __str__(self) -> str:
        return self.to_text()

    def to_json_obj(self) -> dict[str, Any]:
        return XLaurentSeries.from_qseries(self).to_json_obj()


@dataclass(frozen=True)
class XLaurentSeries:
    """Finite sum of x^e * QSeries, e possibly negative, sharing one truncation order."""

    terms: dict[int, QSeries] = field(default_factory=dict)
    trunc: int = 1

    @classmethod
    def build(cls, terms: Mapping[int, QSeries], trunc: int | None = None) -> XLaurentSeries:
        if trunc is None:
            if not terms:
                raise ValueError("an empty XLaurentSeries needs an explicit truncation order")
            trunc = min(s.trunc for s in terms.values())
        _check_trunc(trunc)
        kept: dict[int, QSeries] = {}
        for e in sorted(terms):
            s = terms[e]
            if s.trunc < trunc:
                raise ValueError(f"x^{e} entry is known only mod q^{s.trunc} < q^{trunc}")
            s = s.truncate(trunc)
            if not s.is_zero():
                kept[e] = s
        return cls(kept, trunc)

    @classmethod
    def zero(cls, trunc: int) -> XLaurentSeries:
        return cls({}, _check_trunc(trunc))

    @classmethod
    def from_qseries(cls, s: QSeries) -> XLaurentSeries:
        return cls.build({0: s}, s.trunc)

    @classmethod
    def from_monomials(cls, monomials: Iterable[tuple[int, int, int]], trunc: int) -> XLaurentSeries:
        """Build from (xdeg, qdeg, coeff) triples; q-degrees >= trunc are dropped."""
        grouped: dict[int, dict[int, int]] = {}
        for xdeg, qdeg, coeff in monomials:
            row = grouped.setdefault(xdeg, {})
            row[qdeg] = row.get(qdeg, 0) + coeff
        return cls.build({e: QSeries.from_terms(row, trunc) for e, row in grouped.items()}, trunc)

    # -- queries ------------------------------------------------------
    def coefficient(self, xdeg: int) -> QSeries:
        return self.terms.get(xdeg) or QSeries.zero(self.trunc)

    def x_support(self) -> tuple[int, int] | None:
        if not self.terms:
            return None
        return min(self.terms), max(self.terms)

    def has_negative_support(self) -> bool:
        support = self.x_support()
        return support is not None and support[0] < 0

    def at_x_one(self) -> QSeries:
        total = QSeries.zero(self.trunc)
        for s in self.terms.values():
            total = total + s
        return total

    def coefficient_at(self, xdeg: int, qdeg: int) -> int:
        return self.coefficient(xdeg)[qdeg]

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: XLaurentSeries) -> XLaurentSeries:
        trunc = min(self.trunc, other.trunc)
        out: dict[int, QSeries] = {e: s.truncate(trunc) for e, s in self.terms.items()}
        for e, s in other.terms.items():
            out[e] = out[e] + s if e in out else s.truncate(trunc)
        return XLaurentSeries.build(out, trunc)

    def __neg__(self) -> XLaurentSeries:
        return XLaurentSeries({e: -s for e, s in self.terms.items()}, self.trunc)

    def __sub__(self, other: XLaurentSeries) -> XLaurentSeries:
        return self + (-other)

    def __mul__(self, other: XLaurentSeries | QSeries | int) -> XLaurentSeries:
        if isinstance(other, int):
            return XLaurentSeries.build({e: s * other for e, s in self.terms.items()}, self.trunc)
        if isinstance(other, QSeries):
            other = XLaurentSeries.from_qseries(other)
        trunc = min(self.trunc, other.trunc)
        out: dict[int, QSeries] = {}
        for e1, s1 in self.terms.items():
            for e2, s2 in other.terms.items():
                prod = s1.truncate(trunc) * s2.truncate(trunc)
                e = e1 + e2
                out[e] = out[e] + prod if e in out else prod
        return XLaurentSeries.build(out, trunc)

    __rmul__ = __mul__

    def times_monomial(self, xdeg: int, qdeg: int, coeff: int = 1) -> XLaurentSeries:
        """Multiply by coeff * x^xdeg * q^qdeg."""
        trunc = self.trunc + min(0, qdeg)
        out = {e + xdeg: (s * coeff).shift(qdeg) for e, s in self.terms.items()}
        return XLaurentSeries.build(out, _check_trunc(trunc))

    def substitute(self, m: int) -> XLaurentSeries:
        """Return f(x*q^m, q)."""
        if m == 0 or not self.terms:
            return self
        trunc = self.trunc + min(0, min(m * e for e in self.terms))
        if trunc < 1:
            raise ValueError(f"substituting x -> x*q^{m} leaves no known coefficients")
        return XLaurentSeries.build({e: s.shift(m * e) for e, s in self.terms.items()}, trunc)

    def divide_by_linear(self, coeff: int, qdeg: int) -> XLaurentSeries:
        """Divide by (1 + coeff * x * q^qdeg), qdeg >= 1.

        Uses G_n = F_n - coeff * q^qdeg * G_{n-1}; the tail dies out below q^trunc.
        """
        if qdeg < 1:
            raise NonUnitConstantTerm("divisor must have q-valuation at least 1 in its x-term")
        if not self.terms:
            return self
        lo, hi = self.x_support()  # type: ignore[misc]
        out: dict[int, QSeries] = {}
        prev = QSeries.zero(self.trunc)
        n = lo
        while n <= hi or not prev.is_zero():
            cur = self.coefficient(n) - (prev * coeff).shift(qdeg)
            if not cur.is_zero():
                out[n] = cur
            prev = cur
            n += 1
        return XLaurentSeries.build(out, self.trunc)

    # -- comparison ---------------------------------------------------
    def first_difference(self, other: XLaurentSeries) -> tuple[int, int, int, int] | None:
        trunc = min(self.trunc, other.trunc)
        for e in sorted(set(self.terms) | set(other.terms)):
            a = self.coefficient(e).truncate(trunc)
            b = other.coefficient(e).truncate(trunc)
            diff = a.first_difference(b)
            if diff is not None:
                return e, diff[1], diff[2], diff[3]
        return None

    def agrees_with(self, other: XLaurentSeries) -> bool:
        return self.first_difference(other) is None

    # -- output -------------------------------------------------------
    def to_text(self) -> str:
        if not self.terms:
            return f"0 + O(q^{self.trunc})"
        lines = []
        for e, s in self.terms.items():
            lines.append(f"x^{e}: {s.to_text()}")
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.to_text()

    def to_json_obj(self) -> dict[str, Any]:
        return {
            "trunc": self.trunc,
            "terms": [
                [e, [[deg, str(c)] for deg, c in s.terms()]]
                for e, s in sorted(self.terms.items())
            ],
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping[str, Any]) -> XLaurentSeries:
        trunc = int(obj["trunc"])
        terms = {
            int(e): QSeries.from_terms([(int(deg), int(c)) for deg, c in entries], trunc)
            for e, entries in obj["terms"]
        }
        return cls.build(terms, trunc)


@dataclass(frozen=True)
class QPolynomial:
    """Exact sparse polynomial in q with integer coefficients."""

    coeffs: dict[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if any(c == 0 for c in self.coeffs.values()):
            object.__setattr__(self, "coeffs", {d: c for d, c in self.coeffs.items() if c})
        if any(d < 0 for d in self.coeffs):
            raise ValueError("QPolynomial has no negative q-degrees")

    @classmethod
    def zero(cls) -> QPolynomial:
        return cls({})

    @classmethod
    def one(cls) -> QPolynomial:
        return cls({0: 1})

    @classmethod
    def monomial(cls, deg: int, coeff: int = 1) -> QPolynomial:
        return cls({deg: coeff})

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, int]]) -> QPolynomial:
        out: dict[int, int] = {}
        for deg, c in terms:
            out[deg] = out.get(deg, 0) + c
        return cls(out)

    @classmethod
    def one_minus(cls, e: int) -> QPolynomial:
        """1 - q^e; identically zero when e == 0."""
        return cls.one() - cls.monomial(e)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: QPolynomial) -> QPolynomial:
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            out[d] = out.get(d, 0) + c
        return QPolynomial(out)

    def __neg__(self) -> QPolynomial:
        return QPolynomial({d: -c for d, c in self.coeffs.items()})

    def __sub__(self, other: QPolynomial) -> QPolynomial:
        return self + (-other)

    def __mul__(self, other: QPolynomial | int) -> QPolynomial:
        if isinstance(other, int):
            return QPolynomial({d: c * other for d, c in self.coeffs.items()})
        out: dict[int, int] = {}
        for d1, c1 in self.coeffs.items():
            for d2, c2 in other.coeffs.items():
                out[d1 + d2] = out.get(d1 + d2, 0) + c1 * c2
        return QPolynomial(out)

    __rmul__ = __mul__

    def shift(self, m: int) -> QPolynomial:
        return QPolynomial({d + m: c for d, c in self.coeffs.items()})

    # -- queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    def eval_at_1(self) -> int:
        return sum(self.coeffs.values())

    def min_degree(self) -> int | None:
        return min(self.coeffs) if self.coeffs else None

    def degree(self) -> int | None:
        return max(self.coeffs) if self.coeffs else None

    def is_sign_coherent(self) -> bool:
        signs = {c > 0 for c in self.coeffs.values()}
        return len(signs) <= 1

    def sign(self) -> int:
        if not self.coeffs:
            return 0
        return 1 if self.coeffs[min(self.coeffs)] > 0 else -1

    def has_nonnegative_coefficients(self) -> bool:
        return all(c >= 0 for c in self.coeffs.values())

    def divide_exact(self, divisor: QPolynomial) -> QPolynomial:
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = dict(self.coeffs)
        top = divisor.degree()
        lead = divisor.coeffs[top]  # type: ignore[index]
        quotient: dict[int, int] = {}
        while rem and max(rem) >= top:  # type: ignore[operator]
            d = max(rem)
            q, r = divmod(rem[d], lead)
            if r:
                raise InexactDivision(f"leading coefficient {rem[d]} not divisible by {lead}")
            shift = d - top  # type: ignore[operator]
            quotient[shift] = q
            for dd, c in divisor.coeffs.items():
                rem[dd + shift] = rem.get(dd + shift, 0) - q * c
                if rem[dd + shift] == 0:
                    del rem[dd + shift]
        if rem:
            raise InexactDivision(f"nonzero remainder {QPolynomial(rem)} dividing {self} by {divisor}")
        return QPolynomial(quotient)

    def to_series(self, trunc: int) -> QSeries:
        return QSeries.from_terms(self.coeffs, trunc)

    def sparse_pairs(self) -> list[list[Any]]:
        return [[d, str(c)] for d, c in sorted(self.coeffs.items())]

    # -- output -------------------------------------------------------
    def __str__(self) -> str:
        return _join_terms([(c, _q_monomial(d)) for d, c in sorted(self.coeffs.items())])

    def factored(self) -> str:
        """Pull out the lowest monomial and the sign, e.g. -q^13(1 + q + q^3)."""
        if not self.coeffs:
            return "0"
        low = min(self.coeffs)
        sign = self.sign()
        inner = QPolynomial({d - low: c * sign for d, c in self.coeffs.items()})
        prefix = "-" if sign < 0 else ""
        head = _q_monomial(low)
        if len(inner.coeffs) == 1:
            return f"{prefix}{head or '1'}"
        return f"{prefix}{head}({inner})"


# -- spec-level entry points ----------------------------------------------


def qs_arith(a: QSeries, b: QSeries, op: SeriesOp) -> QSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown series operation {op!r}")


def qs_inverse(a: QSeries) -> QSeries:
    return a.inverse()


def poch(base_exponent: int, modulus: int, count: int | None, trunc: int) -> QSeries:
    """prod_{j} (1 - q^{a + j*m}) for j < count, or over all j when count is None."""
    if base_exponent < 1 or modulus < 1:
        raise ValueError("poch needs base exponent >= 1 and modulus >= 1")
    out = QSeries.one(trunc)
    j = 0
    while count is None or j < count:
        e = base_exponent + j * modulus
        if e >= trunc:
            break
        out = out.mul_one_minus(e)
        j += 1
    return out


def poch_inverse(base_exponent: int, modulus: int, count: int | None, trunc: int) -> QSeries:
    """1 / poch(...) computed factor by factor."""
    if base_exponent < 1 or modulus < 1:
        raise ValueError("poch needs base exponent >= 1 and modulus >= 1")
    out = QSeries.one(trunc)
    j = 0
    while count is None or j < count:
        e = base_exponent + j * modulus
        if e >= trunc:
            break
        out = out.div_one_minus(e)
        j += 1
    return out


def xl_substitute(f: XLaurentSeries, m: int) -> XLaurentSeries:
    return f.substitute(m)


def divide_by_x_poch(f: XLaurentSeries, base_exponent: int = 1, sign: int = 1) -> XLaurentSeries:
    """f / prod_{j>=0} (1 + sign * x * q^{a+j}); with sign=1, a=1 this is f / (-xq;q)_inf."""
    out = f
    for e in range(base_exponent, f.trunc):
        out = out.divide_by_linear(sign, e)
    return out


def poly_ops(p: QPolynomial, r: QPolynomial | None, op: PolyOp) -> QPolynomial | int | None:
    if op == "add":
        return p + r  # type: ignore[operator]
    if op == "sub":
        return p - r  # type: ignore[operator]
    if op == "mul":
        return p * r  # type: ignore[operator]
    if op == "eval_at_1":
        return p.eval_at_1()
    if op == "min_degree":
        return p.min_degree()
    if op == "divide_exact":
        return p.divide_exact(r)  # type: ignore[arg-type]
    raise ValueError(f"unknown polynomial operation {op!r}")
