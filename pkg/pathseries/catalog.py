from __future__ import annotations

import importlib
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, Iterable, List, Optional

from .errors import UnknownIdentity, UnknownSeries
from .models import DominantWeight, IdentityCatalogEntry, VerificationReport
from .series import QSeries, XLaurentSeries

logger = logging.getLogger(__name__)


def _entry(id: str, description: str, default_trunc: int, entry_point: str, **kwargs) -> IdentityCatalogEntry:
    return IdentityCatalogEntry(
        id=id, description=description, default_trunc=default_trunc, entry_point=entry_point, kwargs=kwargs
    )


CATALOG: List[IdentityCatalogEntry] = [
    _entry("thm1_i1", "sum b_n/(q;q)_n = 1/(q,q^4;q^5)_inf", 200, "recurrences:verify_theorem", family="b", i=1),
    _entry("thm1_i2", "sum b_n/(q;q)_n = 1/(q^2,q^3;q^5)_inf", 200, "recurrences:verify_theorem", family="b", i=2),
    _entry("thm2_i1", "sum c_n/(q^3;q^3)_n = (q^2,q^10;q^12)_inf/(q,q^3,...,q^11;q^12)_inf", 150, "recurrences:verify_theorem", family="c", i=1),
    _entry("thm2_i2", "sum c_n/(q^3;q^3)_n = 1/(q^2,q^3,q^9,q^10;q^12)_inf", 150, "recurrences:verify_theorem", family="c", i=2),
    _entry("qdif", "scalar q-difference equation for J(x,q), weight 3L0", 30, "transfer:verify_qdif"),
    _entry("qdif2", "q-difference equation for K = J/(-xq;q)_inf and the k_n recurrence", 30, "transfer:verify_qdif2"),
    _entry("qd2_i1", "q-difference equation for F_1(x,q)", 40, "partitions:verify_qd2", i=1),
    _entry("qd2_i2", "q-difference equation for F_2(x,q)", 40, "partitions:verify_qd2", i=2),
    _entry("euler", "strict partitions against 1/(q;q^2)_inf", 80, "partitions:euler_verify"),
    _entry("wakimoto_i1", "residue-1 weighted strict partitions against their product", 60, "partitions:wakimoto_verify", i=1),
    _entry("wakimoto_i2", "residue-2 weighted strict partitions against their product", 60, "partitions:wakimoto_verify", i=2),
    _entry("transfer16", "(J_p) = M (J_q(xq^2)) for all 16 prefixes", 30, "transfer:verify_transfer"),
    _entry("gsystem_i1", "reconstructed G-system for |.|_1", 30, "partitions:verify_G_system", i=1),
    _entry("gsystem_i2", "G-system for |.|_2", 30, "partitions:verify_G_system", i=2),
    _entry("matrix_M", "16x16 prefix matrix against the displayed one", 1, "catalog:matrix_m"),
    _entry("bridge_b_i1", "b_n^(1) = (q;q)_n [x^n]K for weight 2L0+L1", 30, "transfer:coefficient_bridge", i=1),
    _entry("bridge_b_i2", "b_n^(2) = (q;q)_n [x^n]K for weight 3L0", 30, "transfer:coefficient_bridge", i=2),
    _entry("bridge_c_i1", "(q^3;q^3)_n [x^n]F_1 = c_n^(1)", 40, "partitions:c_coefficient_bridge", i=1),
    _entry("bridge_c_i2", "(q^3;q^3)_n [x^n]F_2 = c_n^(2)", 40, "partitions:c_coefficient_bridge", i=2),
    _entry("fib_special", "|b_n(1)| Fibonacci and sign coherence, n <= trunc", 25, "catalog:fib_special"),
    _entry("pow2_special", "c_n(1) = 2^n, n <= trunc; nonnegativity reported", 25, "catalog:pow2_special"),
    _entry("fg_law", "shifts under b -> bp depend only on (q1, p); trunc = samples per pair", 20, "catalog:fg_law"),
    _entry("character_oracle", "path counts vs crystal-operator closure and low slices of J", 30, "transfer:character_oracle"),
]

CATALOG_IDS: List[str] = [e.id for e in CATALOG]
_BY_ID: Dict[str, IdentityCatalogEntry] = {e.id: e for e in CATALOG}


def get_entry(identity: str) -> IdentityCatalogEntry:
    try:
        return _BY_ID[identity]
    except KeyError:
        raise UnknownIdentity(f"unknown identity {identity!r}; see `pathseries catalog`") from None


def _resolve(entry_point: str) -> Callable[..., VerificationReport]:
    module, func = entry_point.split(":")
    return getattr(importlib.import_module(f"pathseries.{module}"), func)


def run_identity(identity: str, trunc: Optional[int] = None) -> VerificationReport:
    entry = get_entry(identity)
    n = trunc if trunc is not None else entry.default_trunc
    report = _resolve(entry.entry_point)(trunc=n, **entry.kwargs)
    if report.identity != identity:
        report = report.model_copy(update={"identity": identity})
    logger.info("%s", report.to_text())
    return report


def run_many(
    identities: Iterable[str], truncations: Optional[Dict[str, int]] = None, threads: int = 1
) -> List[VerificationReport]:
    """Run catalog entries, results in the order given.

    Threads overlap identities that wait on the same cached enumeration; they do not add CPU parallelism.
    """
    ids = list(identities)
    for identity in ids:
        get_entry(identity)
    truncations = truncations or {}
    if threads <= 1:
        return [run_identity(i, truncations.get(i)) for i in ids]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda i: run_identity(i, truncations.get(i)), ids))


# -- small wrappers -------------------------------------------------------


def matrix_m(trunc: int = 1) -> VerificationReport:
    from .transfer import verify_matrix_M

    return verify_matrix_M()


def fib_special(trunc: int = 25) -> VerificationReport:
    from .recurrences import specializations

    parts = [specializations("b", i, trunc) for i in (1, 2)]
    return VerificationReport.combine("fib_special", trunc, parts)


def pow2_special(trunc: int = 25) -> VerificationReport:
    from .recurrences import specializations

    parts = [specializations("c", i, trunc) for i in (1, 2)]
    nonneg = {p.identity: p.details["nonnegative_coefficients"] for p in parts}
    return VerificationReport.combine("pow2_special", trunc, parts, nonnegative_coefficients=nonneg)


def fg_law(trunc: int = 20) -> VerificationReport:
    from .paths import WEIGHT_2L0_L1, WEIGHT_3L0, concatenation_law

    results = {w.label: concatenation_law(w, samples=trunc, seed=0) for w in (WEIGHT_3L0, WEIGHT_2L0_L1)}
    failing = next((r for r in results.values() if not r["holds"]), None)
    return VerificationReport(
        identity="fg_law",
        trunc=trunc,
        passed=failing is None,
        details={k: {kk: str(vv) for kk, vv in v.items()} for k, v in results.items()},
    )


# -- series registry for `expand` -----------------------------------------


def _weight(label: str) -> DominantWeight:
    return DominantWeight.parse(label)


def expand_series(series_id: str, trunc: int) -> XLaurentSeries | QSeries:
    from .partitions import gf_F
    from .paths import gf_FD, gf_J
    from .recurrences import capparelli_product, rr_product
    from .transfer import k_series

    name, _, arg = series_id.partition(":")
    simple: Dict[str, Callable[[], XLaurentSeries | QSeries]] = {
        "J_3L0": lambda: gf_J(_weight("3L0"), trunc),
        "K_3L0": lambda: k_series(_weight("3L0"), trunc),
        "J_2L0L1": lambda: gf_J(_weight("2L0+L1"), trunc),
        "F1": lambda: gf_F(1, trunc),
        "F2": lambda: gf_F(2, trunc),
    }
    if not arg and name in simple:
        return simple[name]()
    if name == "FD" and arg in {"1", "2", "4"}:
        return gf_FD(_weight("3L0"), int(arg), trunc)
    if name == "rr_product" and arg in {"1", "2"}:
        return rr_product(int(arg), trunc)
    if name == "cap_product" and arg in {"1", "2"}:
        return capparelli_product(int(arg), trunc)
    raise UnknownSeries(f"unknown series {series_id!r}")


SERIES_IDS = ["J_3L0", "K_3L0", "J_2L0L1", "F1", "F2", "FD:1", "FD:2", "FD:4", "rr_product:1", "rr_product:2", "cap_product:1", "cap_product:2"]
