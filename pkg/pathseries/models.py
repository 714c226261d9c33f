from __future__ import annotations

import re
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .series import QSeries, XLaurentSeries

_WEIGHT_TERM = re.compile(r"^(\d*)L([01])$")


class DominantWeight(BaseModel):
    """k0*Lambda_0 + k1*Lambda_1."""

    k0: int = Field(ge=0)
    k1: int = Field(ge=0)

    model_config = ConfigDict(frozen=True)

    @classmethod
    def parse(cls, text: str) -> "DominantWeight":
        """Read labels such as ``3L0``, ``2L0+L1`` or ``3L1``."""
        coeffs = [0, 0]
        for term in text.replace(" ", "").split("+"):
            m = _WEIGHT_TERM.match(term)
            if not m:
                raise ValueError(f"cannot read dominant weight {text!r}")
            coeffs[int(m.group(2))] += int(m.group(1) or 1)
        return cls(k0=coeffs[0], k1=coeffs[1])

    @property
    def level(self) -> int:
        return self.k0 + self.k1

    @property
    def label(self) -> str:
        parts = []
        for k, name in ((self.k0, "L0"), (self.k1, "L1")):
            if k:
                parts.append(name if k == 1 else f"{k}{name}")
        return "+".join(parts) or "0"

    def as_vector(self) -> Tuple[int, int]:
        return self.k0, self.k1


class PerfectCrystalSpec(BaseModel):
    """Data of a finite perfect crystal for a rank-2 affine algebra.

    Weights are written in the (Lambda_0, Lambda_1) basis, roots in (Lambda_0, Lambda_1, delta).
    ``energy[a][b]`` is H(a, b) for the pair a (x) b, a being the outer factor.
    """

    name: str
    index_set: List[int]
    elements: List[int]
    f_arrows: Dict[int, Dict[int, int]]
    epsilon: Dict[int, List[int]]
    phi: Dict[int, List[int]]
    classical_weight: List[Tuple[int, int]]
    energy: List[List[int]]
    level: int
    marks: Tuple[int, int] = (1, 1)
    comarks: Tuple[int, int] = (1, 1)
    height_delta: int = 2
    simple_roots: Dict[int, Tuple[int, int, int]]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_crystal_axioms(self) -> "PerfectCrystalSpec":
        n = len(self.elements)
        if self.elements != list(range(n)):
            raise ValueError("elements must be labelled 0..n-1")
        if len(self.energy) != n or any(len(row) != n for row in self.energy):
            raise ValueError("energy table must be square over the elements")
        for i in self.index_set:
            for b in self.elements:
                wt = self.classical_weight[b][i]
                if self.phi[i][b] - self.epsilon[i][b] != wt:
                    raise ValueError(
                        f"phi_{i}({b}) - eps_{i}({b}) != <h_{i}, wt({b})> = {wt}"
                    )
            seen: set[int] = set()
            for src, dst in self.f_arrows[i].items():
                if dst in seen:
                    raise ValueError(f"f_{i} is not injective")
                seen.add(dst)
                if self.phi[i][src] < 1 or self.epsilon[i][dst] < 1:
                    raise ValueError(f"arrow {src} -> {dst} of color {i} contradicts eps/phi")
        lvl = min(sum(c * self.epsilon[i][b] for c, i in zip(self.comarks, self.index_set)) for b in self.elements)
        if lvl != self.level:
            raise ValueError(f"minimal sum of comark-weighted eps is {lvl}, declared level is {self.level}")
        return self

    def f(self, i: int, b: int) -> Optional[int]:
        return self.f_arrows[i].get(b)

    def e(self, i: int, b: int) -> Optional[int]:
        for src, dst in self.f_arrows[i].items():
            if dst == b:
                return src
        return None

    def eps(self, b: int) -> Tuple[int, ...]:
        return tuple(self.epsilon[i][b] for i in self.index_set)

    def ph(self, b: int) -> Tuple[int, ...]:
        return tuple(self.phi[i][b] for i in self.index_set)

    def H(self, a: int, b: int) -> int:
        return self.energy[a][b]


class Mismatch(BaseModel):
    xdeg: str
    qdeg: str
    lhs: str
    rhs: str

    @classmethod
    def from_tuple(cls, diff: Tuple[int, int, int, int]) -> "Mismatch":
        return cls(**{k: str(v) for k, v in zip(("xdeg", "qdeg", "lhs", "rhs"), diff)})


class VerificationReport(BaseModel):
    identity: str
    trunc: int
    passed: bool = Field(alias="pass")
    first_mismatch: Optional[Mismatch] = None
    details: Dict[str, Any] = Field(default_factory=dict)
    x_support: Optional[Tuple[int, int]] = None

    model_config = ConfigDict(populate_by_name=True)

    @classmethod
    def from_comparison(
        cls,
        identity: str,
        lhs: XLaurentSeries | QSeries,
        rhs: XLaurentSeries | QSeries,
        details: Optional[Dict[str, Any]] = None,
    ) -> "VerificationReport":
        if isinstance(lhs, QSeries):
            lhs = XLaurentSeries.from_qseries(lhs)
        if isinstance(rhs, QSeries):
            rhs = XLaurentSeries.from_qseries(rhs)
        diff = lhs.first_difference(rhs)
        return cls(
            identity=identity,
            trunc=min(lhs.trunc, rhs.trunc),
            passed=diff is None,
            first_mismatch=Mismatch.from_tuple(diff) if diff else None,
            details=details or {},
            x_support=lhs.x_support(),
        )

    @classmethod
    def combine(cls, identity: str, trunc: int, parts: List["VerificationReport"], **details: Any) -> "VerificationReport":
        """All parts must pass; the first failing part supplies the mismatch."""
        failing = next((r for r in parts if not r.passed), None)
        merged: Dict[str, Any] = dict(details)
        merged["checks"] = {r.identity: r.passed for r in parts}
        supports = [r.x_support for r in parts if r.x_support is not None]
        return cls(
            identity=identity,
            trunc=trunc,
            passed=failing is None,
            first_mismatch=failing.first_mismatch if failing else None,
            details=merged,
            x_support=(min(s[0] for s in supports), max(s[1] for s in supports)) if supports else None,
        )

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True)

    def to_text(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"{status} {self.identity} mod q^{self.trunc}"
        if self.first_mismatch is not None:
            m = self.first_mismatch
            line += f" first mismatch at x^{m.xdeg} q^{m.qdeg}: {m.lhs} vs {m.rhs}"
        return line


class IdentityCatalogEntry(BaseModel):
    id: str
    description: str
    default_trunc: int = Field(ge=1)
    entry_point: str
    kwargs: Dict[str, Any] = Field(default_factory=dict)

    model_config = ConfigDict(frozen=True)

    @field_validator("entry_point")
    @classmethod
    def _module_colon_function(cls, v: str) -> str:
        if v.count(":") != 1:
            raise ValueError("entry_point must look like 'module:function'")
        return v


class ConfigModel(BaseModel):
    truncations: Dict[str, int] = Field(default_factory=dict)
    threads: int = Field(default=1, ge=1)
    max_window: int = Field(default=64, ge=2)
    log_level: str = "INFO"

    @field_validator("truncations")
    @classmethod
    def _known_ids(cls, v: Dict[str, int]) -> Dict[str, int]:
        from .catalog import CATALOG_IDS

        unknown = sorted(set(v) - set(CATALOG_IDS))
        if unknown:
            raise ValueError(f"unknown catalog ids in truncations: {', '.join(unknown)}")
        bad = [k for k, n in v.items() if n < 1]
        if bad:
            raise ValueError(f"truncation orders must be positive: {', '.join(bad)}")
        return v

    @field_validator("log_level")
    @classmethod
    def _level_name(cls, v: str) -> str:
        v = v.upper()
        if v not in {"DEBUG", "INFO", "WARNING", "ERROR"}:
            raise ValueError(f"unsupported log level {v}")
        return v

    def trunc_for(self, identity: str, default: int) -> int:
        return self.truncations.get(identity, default)
