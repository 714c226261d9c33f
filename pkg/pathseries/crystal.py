"""Perfect crystal B^{1,3} of type A_1^(1) and the tensor-product signature rule.

Words are written outer factor first, so the word ``(b2, b1)`` stands for b2 (x) b1 and a path
``... (x) b2 (x) b1`` truncated to a window of length W is ``(bW, ..., b1)``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal, Optional, Sequence, Tuple

from .errors import NoGroundElement
from .models import DominantWeight, PerfectCrystalSpec

logger = logging.getLogger(__name__)

Direction = Literal["e", "f"]
TAIL = -1


@lru_cache(maxsize=None)
def b13() -> PerfectCrystalSpec:
    s = 3
    elements = list(range(s + 1))
    return PerfectCrystalSpec(
        name="B13",
        index_set=[0, 1],
        elements=elements,
        f_arrows={
            0: {k: k - 1 for k in elements if k > 0},
            1: {k: k + 1 for k in elements if k < s},
        },
        epsilon={0: [s - k for k in elements], 1: list(elements)},
        phi={0: list(elements), 1: [s - k for k in elements]},
        classical_weight=[(2 * k - s, s - 2 * k) for k in elements],
        energy=[[max(a - s, -b) for b in elements] for a in elements],
        level=s,
        marks=(1, 1),
        comarks=(1, 1),
        height_delta=2,
        simple_roots={0: (2, -2, 1), 1: (-2, 2, 0)},
    )


@dataclass(frozen=True)
class GroundState:
    """One period g1..gd of the ground-state path of ``weight``."""

    spec: PerfectCrystalSpec = field(compare=False, repr=False)
    weight: DominantWeight
    elements: Tuple[int, ...]

    @property
    def period(self) -> int:
        return len(self.elements)

    def element(self, k: int) -> int:
        """g_k for k >= 1."""
        return self.elements[(k - 1) % self.period]

    def block(self, start: int) -> Tuple[int, ...]:
        """(g_start, ..., g_{start+d-1})."""
        return tuple(self.element(start + j) for j in range(self.period))


def _solve_phi(spec: PerfectCrystalSpec, target: Tuple[int, ...]) -> int:
    hits = [b for b in spec.elements if spec.ph(b) == target]
    if not hits:
        raise NoGroundElement(f"no element of {spec.name} has phi = {target}")
    if len(hits) > 1:
        raise NoGroundElement(f"phi = {target} is attained by several elements {hits}; crystal is not perfect")
    return hits[0]


def ground_state(spec: PerfectCrystalSpec, weight: DominantWeight) -> GroundState:
    if weight.level != spec.level:
        raise NoGroundElement(f"weight {weight.label} has level {weight.level}, crystal has level {spec.level}")
    lam = weight.as_vector()
    g = [_solve_phi(spec, lam)]
    while spec.eps(g[-1]) != lam:
        if len(g) > len(spec.elements):
            raise NoGroundElement(f"ground-state path of {weight.label} is not periodic")
        g.append(_solve_phi(spec, spec.eps(g[-1])))
    logger.debug("ground state of %s: period %d, %s", weight.label, len(g), g)
    return GroundState(spec=spec, weight=weight, elements=tuple(g))


def _reduced_signature(
    spec: PerfectCrystalSpec, word: Sequence[int], i: int, tail_plus: int = 0
) -> Tuple[list[int], list[int]]:
    """Positions of the uncancelled + and - signs, left to right. Tail signs sit at TAIL."""
    pluses: list[int] = [TAIL] * tail_plus
    minuses: list[int] = []
    for pos, b in enumerate(word):
        for _ in range(spec.epsilon[i][b]):
            if pluses:
                pluses.pop()
            else:
                minuses.append(pos)
        pluses.extend([pos] * spec.phi[i][b])
    return pluses, minuses


def kashiwara_position(
    spec: PerfectCrystalSpec, word: Sequence[int], i: int, direction: Direction, tail_plus: int = 0
) -> Optional[int]:
    """Index in ``word`` where the operator acts, ``TAIL`` for the implicit tail, None if it kills the word."""
    pluses, minuses = _reduced_signature(spec, word, i, tail_plus)
    if direction == "f":
        return pluses[0] if pluses else None
    return minuses[-1] if minuses else None


def apply_at(spec: PerfectCrystalSpec, word: Sequence[int], pos: int, i: int, direction: Direction) -> Tuple[int, ...]:
    b = word[pos]
    new = spec.f(i, b) if direction == "f" else spec.e(i, b)
    if new is None:
        raise ArithmeticError(f"signature rule chose {b} but {direction}_{i} is undefined there")
    return tuple(word[:pos]) + (new,) + tuple(word[pos + 1 :])


def tensor_kashiwara(
    spec: PerfectCrystalSpec, word: Sequence[int], i: int, direction: Direction
) -> Optional[Tuple[int, ...]]:
    pos = kashiwara_position(spec, word, i, direction)
    if pos is None:
        return None
    return apply_at(spec, word, pos, i, direction)


def word_weight(spec: PerfectCrystalSpec, word: Sequence[int]) -> Tuple[int, int]:
    w0 = sum(spec.classical_weight[b][0] for b in word)
    w1 = sum(spec.classical_weight[b][1] for b in word)
    return w0, w1


def energy_rule_violations(spec: PerfectCrystalSpec) -> list[Tuple[int, int, int]]:
    """Pairs (a, b) and colour i on which e_i moves H against the energy-function rule.

    e_0 acting on the outer factor raises H by one and on the inner factor lowers it by one;
    e_i for i != 0 leaves H unchanged.
    """
    bad = []
    for a, b in itertools.product(spec.elements, repeat=2):
        for i in spec.index_set:
            pos = kashiwara_position(spec, (a, b), i, "e")
            if pos is None:
                continue
            a2, b2 = apply_at(spec, (a, b), pos, i, "e")
            change = spec.H(a2, b2) - spec.H(a, b)
            expected = 0 if i != 0 else (1 if pos == 0 else -1)
            if change != expected:
                bad.append((a, b, i))
    return bad


def perfect_level(spec: PerfectCrystalSpec) -> int:
    return min(
        sum(c * spec.epsilon[i][b] for c, i in zip(spec.comarks, spec.index_set)) for b in spec.elements
    )


def energy_pair_bound(spec: PerfectCrystalSpec, ground: GroundState) -> bool:
    """True when any d consecutive energy terms sum to at least one ground period's worth.

    Under this condition every tail sum of H-differences along a path is nonnegative.
    """
    d = ground.period
    for start in range(1, d + 1):
        base = sum(spec.H(ground.element(start + j + 1), ground.element(start + j)) for j in range(d))
        for word in itertools.product(spec.elements, repeat=d + 1):
            # word[j] plays the role of c_{start+j}
            total = sum(spec.H(word[j + 1], word[j]) for j in range(d))
            if total < base:
                logger.info("energy bound fails for %s at %s", ground.weight.label, word)
                return False
    return True


def spec_to_json(spec: PerfectCrystalSpec) -> str:
    return spec.model_dump_json(indent=2)
