"""Kyoto paths: H-length, principal grading, modified length, enumeration and generating functions."""

from __future__ import annotations

import logging
import random
import threading
from concurrent.futures import Future
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .crystal import (
    TAIL,
    Direction,
    GroundState,
    apply_at,
    b13,
    energy_pair_bound,
    ground_state,
    kashiwara_position,
)
from .errors import InvalidDivisor, NonIntegralGrading, UnsupportedWeight, WindowNotStable
from .models import DominantWeight, PerfectCrystalSpec
from .series import XLaurentSeries

logger = logging.getLogger(__name__)

WEIGHT_3L0 = DominantWeight(k0=3, k1=0)
WEIGHT_2L0_L1 = DominantWeight(k0=2, k1=1)
WEIGHT_3L1 = DominantWeight(k0=0, k1=3)
MODIFIED_LENGTH_WEIGHTS = (WEIGHT_3L0, WEIGHT_2L0_L1)
DEFAULT_MAX_WINDOW = 64
_max_window = DEFAULT_MAX_WINDOW

Prefix = Tuple[int, int]  # (b2, b1)


@dataclass(frozen=True)
class LambdaPath:
    ground: GroundState
    deviations: Tuple[int, ...]

    @classmethod
    def build(cls, ground: GroundState, elements: Sequence[int]) -> LambdaPath:
        """``elements`` lists b1, b2, ...; trailing ground entries are dropped."""
        devs = list(elements)
        while devs and devs[-1] == ground.element(len(devs)):
            devs.pop()
        return cls(ground, tuple(devs))

    @classmethod
    def ground_path(cls, ground: GroundState) -> LambdaPath:
        return cls(ground, ())

    @property
    def weight(self) -> DominantWeight:
        return self.ground.weight

    @property
    def spec(self) -> PerfectCrystalSpec:
        return self.ground.spec

    def __len__(self) -> int:
        return len(self.deviations)

    def element(self, k: int) -> int:
        if k <= len(self.deviations):
            return self.deviations[k - 1]
        return self.ground.element(k)

    def window(self, size: int) -> Tuple[int, ...]:
        """(b1, ..., b_size)."""
        return tuple(self.element(k) for k in range(1, size + 1))

    def prefix(self) -> Prefix:
        return self.element(2), self.element(1)

    def __str__(self) -> str:
        inner = " (x) ".join(str(self.element(k)) for k in range(max(len(self), 2), 0, -1))
        return f"... (x) {inner}"


@dataclass(frozen=True)
class PathStats:
    h_length: int
    degree: int
    mod_length: Optional[int]


def _delta_h(path: LambdaPath, k: int) -> int:
    H = path.spec.H
    g = path.ground.element
    return H(path.element(k + 1), path.element(k)) - H(g(k + 1), g(k))


def h_length(path: LambdaPath) -> int:
    return sum(_delta_h(path, k) for k in range(1, len(path) + 1))


def energy_moment(path: LambdaPath) -> int:
    """sum_k k * (H(b_{k+1}, b_k) - H(g_{k+1}, g_k)), the delta-coefficient of lambda - WT(b)."""
    return sum(k * _delta_h(path, k) for k in range(1, len(path) + 1))


def weight_defect(path: LambdaPath) -> Tuple[int, int]:
    """-sum_k (wt(b_k) - wt(g_k)) in the (Lambda_0, Lambda_1) basis."""
    cw = path.spec.classical_weight
    v0 = v1 = 0
    for k, b in enumerate(path.deviations, start=1):
        g = path.ground.element(k)
        v0 -= cw[b][0] - cw[g][0]
        v1 -= cw[b][1] - cw[g][1]
    return v0, v1


def root_coordinates(spec: PerfectCrystalSpec, v: Tuple[int, int], e: int) -> Tuple[int, int]:
    """Solve m*alpha_0 + n*alpha_1 = v0*Lambda_0 + v1*Lambda_1 + e*delta over the integers."""
    a0, a1 = spec.simple_roots[0], spec.simple_roots[1]
    det = a0[0] * a1[2] - a1[0] * a0[2]
    m_num = v[0] * a1[2] - a1[0] * e
    n_num = a0[0] * e - a0[2] * v[0]
    if det == 0 or m_num % det or n_num % det:
        raise NonIntegralGrading(f"weight defect {v}, delta part {e} is not an integral root combination")
    m, n = m_num // det, n_num // det
    if m * a0[1] + n * a1[1] != v[1]:
        raise NonIntegralGrading(f"Lambda_1 coordinate of {v} inconsistent with m={m}, n={n}")
    return m, n


def grading(spec: PerfectCrystalSpec, v: Tuple[int, int], e: int) -> int:
    m, n = root_coordinates(spec, v, e)
    if m < 0 or n < 0:
        raise NonIntegralGrading(f"lambda - WT has negative root coordinates m={m}, n={n}")
    return m + n


def degree(path: LambdaPath) -> int:
    return grading(path.spec, weight_defect(path), energy_moment(path))


def mod_length(path: LambdaPath) -> int:
    if path.weight not in MODIFIED_LENGTH_WEIGHTS:
        raise UnsupportedWeight(f"modified length is defined for 3L0 and 2L0+L1, not {path.weight.label}")
    return 2 * h_length(path) - (path.ground.element(1) - path.element(1))


def path_stats(path: LambdaPath) -> PathStats:
    ml = mod_length(path) if path.weight in MODIFIED_LENGTH_WEIGHTS else None
    return PathStats(h_length=h_length(path), degree=degree(path), mod_length=ml)


# -- enumeration ----------------------------------------------------------


@dataclass(frozen=True)
class _Node:
    devs: Tuple[int, ...]  # b1..bW
    moment: int  # sum over k < W of k * dH_k
    defect: Tuple[int, int]


def _extend(spec: PerfectCrystalSpec, ground: GroundState, node: _Node, block: Tuple[int, ...]) -> _Node:
    H = spec.H
    g = ground.element
    cw = spec.classical_weight
    devs = node.devs + block
    w = len(node.devs)
    moment = node.moment
    # terms k = w .. w+d-1 now lie inside the window (k = w only once w > 0)
    for k in range(max(w, 1), len(devs)):
        moment += k * (H(devs[k], devs[k - 1]) - H(g(k + 1), g(k)))
    v0, v1 = node.defect
    for k, b in enumerate(block, start=w + 1):
        v0 -= cw[b][0] - cw[g(k)][0]
        v1 -= cw[b][1] - cw[g(k)][1]
    return _Node(devs, moment, (v0, v1))


def _closing_moment(spec: PerfectCrystalSpec, ground: GroundState, node: _Node) -> int:
    w = len(node.devs)
    if w == 0:
        return 0
    g = ground.element
    return w * (spec.H(g(w + 1), node.devs[-1]) - spec.H(g(w + 1), g(w)))


def tail_energy_floor(spec: PerfectCrystalSpec, ground: GroundState) -> Dict[Tuple[int, int], int]:
    """Least tail energy sum_{k >= r} dH_k over all paths with b_r = b, keyed by (b, r) for r = 1..d.

    Relaxed like a shortest-path table over (element, position mod d); the ground path gives 0 at (g_r, r).
    """
    d = ground.period
    g = ground.element
    floor: Dict[Tuple[int, int], Optional[int]] = {
        (b, r): (0 if b == g(r) else None) for b in spec.elements for r in range(1, d + 1)
    }
    for _ in range(len(floor) + 1):
        changed = False
        for (b, r), current in list(floor.items()):
            base = spec.H(g(r + 1), g(r))
            for c in spec.elements:
                rest = floor[(c, r % d + 1)]
                if rest is None:
                    continue
                candidate = spec.H(c, b) - base + rest
                if current is None or candidate < current:
                    current = candidate
                    changed = True
            floor[(b, r)] = current
        if not changed:
            return {key: value for key, value in floor.items() if value is not None}
    raise WindowNotStable(f"tail energies for {ground.weight.label} do not settle; the energy has a negative cycle")


def enumerate_paths(
    weight: DominantWeight,
    max_degree: int,
    *,
    spec: Optional[PerfectCrystalSpec] = None,
    max_window: int = DEFAULT_MAX_WINDOW,
) -> Iterator[Tuple[LambdaPath, PathStats]]:
    """Yield every path of degree <= max_degree once, grouped by the length of its deviation window.

    The window grows one ground period at a time. A partial window b1..bW is dropped as soon as
    ``grading_bound`` exceeds ``max_degree``: the inner energy terms plus W times the least tail
    energy any completion can still carry from b_W. Growth stops after two consecutive periods
    contribute no new path.
    """
    if max_degree < 0:
        return
    spec = spec or b13()
    ground = ground_state(spec, weight)
    if not energy_pair_bound(spec, ground):
        raise WindowNotStable(f"energy bound fails for {weight.label}; partial-window pruning is unsound")
    d = ground.period
    blocks = [tuple(bl) for bl in _all_blocks(spec, d)]
    floors = tail_energy_floor(spec, ground)

    root = _Node((), 0, (0, 0))
    yield LambdaPath.ground_path(ground), PathStats(0, 0, 0 if weight in MODIFIED_LENGTH_WEIGHTS else None)
    frontier = [root]
    quiet = 0
    window = 0
    total = 1
    while quiet < 2:
        if window + d > max_window:
            raise WindowNotStable(
                f"paths of degree <= {max_degree} for {weight.label} still appear at window {window}"
            )
        ground_block = ground.block(window + 1)
        tail_position = (window + d - 1) % d + 1
        next_frontier: List[_Node] = []
        found = 0
        for node in frontier:
            for block in blocks:
                child = _extend(spec, ground, node, block)
                bound = grading_bound(spec, child, floors[(block[-1], tail_position)])
                if bound > max_degree:
                    continue
                next_frontier.append(child)
                if block == ground_block:
                    continue
                path = LambdaPath.build(ground, child.devs)
                deg = grading(spec, child.defect, child.moment + _closing_moment(spec, ground, child))
                if deg <= max_degree:
                    found += 1
                    yield path, path_stats(path)
        window += d
        total += found
        logger.debug("window %d: %d new paths, frontier %d", window, found, len(next_frontier))
        frontier = next_frontier
        quiet = quiet + 1 if found == 0 else 0
    logger.info(
        "enumerated %d paths of %s up to degree %d; stable at window %d", total, weight.label, max_degree, window
    )


def grading_bound(spec: PerfectCrystalSpec, node: _Node, tail_floor: int = 0) -> int:
    """Degree read off the inner terms of a partial window, raised by W * ``tail_floor``.

    With ``tail_floor`` at most the tail energy of every completion, no completion has a smaller degree:
    its degree is this bound with W times the excess tail energy added to the moment, plus the degree of
    the tail path shifted down by W, which is nonnegative.
    """
    m, n = root_coordinates(spec, node.defect, node.moment + len(node.devs) * tail_floor)
    return m + n


def _all_blocks(spec: PerfectCrystalSpec, d: int) -> Iterator[Tuple[int, ...]]:
    if d == 0:
        yield ()
        return
    for head in spec.elements:
        for rest in _all_blocks(spec, d - 1):
            yield (head,) + rest


def configure(max_window: int) -> None:
    """Set the window limit used by the cached enumerations."""
    global _max_window
    _max_window = max_window


def paths_up_to(
    weight: DominantWeight, max_degree: int, max_window: Optional[int] = None
) -> Tuple[Tuple[LambdaPath, PathStats], ...]:
    """Paths of degree <= max_degree, reusing any larger enumeration cached or still running.

    Safe to call from worker threads: one enumeration runs per key and concurrent callers wait on it.
    """
    max_window = max_window or _max_window
    key = (weight, max_degree, max_window)
    with _PATH_LOCK:
        for (w, n, mw), value in _PATH_INDEX.items():
            if w == weight and n >= max_degree and mw == max_window:
                return _cut(value, max_degree)
        pending = next(
            (
                future
                for (w, n, mw), future in _IN_FLIGHT.items()
                if w == weight and n >= max_degree and mw == max_window
            ),
            None,
        )
        owner = pending is None
        if owner:
            pending = Future()
            _IN_FLIGHT[key] = pending
    if not owner:
        return _cut(pending.result(), max_degree)
    try:
        value = tuple(enumerate_paths(weight, max_degree, max_window=max_window))
    except BaseException as exc:
        with _PATH_LOCK:
            del _IN_FLIGHT[key]
        pending.set_exception(exc)
        raise
    with _PATH_LOCK:
        _PATH_INDEX[key] = value
        del _IN_FLIGHT[key]
    pending.set_result(value)
    return value


def _cut(value: Tuple[Tuple[LambdaPath, PathStats], ...], max_degree: int) -> Tuple[Tuple[LambdaPath, PathStats], ...]:
    return tuple(item for item in value if item[1].degree <= max_degree)


_PATH_INDEX: Dict[Tuple[DominantWeight, int, int], Tuple[Tuple[LambdaPath, PathStats], ...]] = {}
_IN_FLIGHT: Dict[Tuple[DominantWeight, int, int], Future] = {}
_PATH_LOCK = threading.Lock()


def degree_counts(weight: DominantWeight, max_degree: int) -> List[int]:
    counts = [0] * (max_degree + 1)
    for _, stats in paths_up_to(weight, max_degree):
        counts[stats.degree] += 1
    return counts


# -- crystal operators on paths -------------------------------------------


def _act_on_window(path: LambdaPath, i: int, direction: Direction, size: int) -> Tuple[bool, Optional[LambdaPath]]:
    """(decided, result) for the operator applied through a window of ``size`` factors."""
    spec = path.spec
    word = tuple(reversed(path.window(size)))  # outer factor first
    tail = spec.epsilon[i][path.ground.element(size)]
    pos = kashiwara_position(spec, word, i, direction, tail_plus=tail)
    if pos == TAIL:
        return False, None
    if pos is None:
        return True, None
    new_word = apply_at(spec, word, pos, i, direction)
    return True, LambdaPath.build(path.ground, tuple(reversed(new_word)))


def act_on_path(
    path: LambdaPath, i: int, direction: Direction, max_window: int = DEFAULT_MAX_WINDOW
) -> Optional[LambdaPath]:
    """Apply e_i or f_i to a path; None when the operator kills it.

    The window grows by one period until the action no longer falls on the ground tail, and the
    outcome must then repeat for the next larger window.
    """
    d = path.ground.period
    size = max(d, -(-len(path) // d) * d)
    previous: Optional[Tuple[bool, Optional[LambdaPath]]] = None
    while size <= max_window:
        decided, result = _act_on_window(path, i, direction, size)
        if decided:
            if previous is not None and previous[1] == result:
                return result
            previous = (decided, result)
        size += d
    raise WindowNotStable(f"{direction}_{i} on {path} did not stabilise within {max_window} factors")


def bfs_paths(weight: DominantWeight, max_degree: int, spec: Optional[PerfectCrystalSpec] = None) -> List[List[LambdaPath]]:
    """Paths grouped by degree, generated from the ground path by the lowering operators."""
    spec = spec or b13()
    ground = ground_state(spec, weight)
    levels: List[List[LambdaPath]] = [[LambdaPath.ground_path(ground)]]
    for _ in range(max_degree):
        seen: Dict[LambdaPath, None] = {}
        for path in levels[-1]:
            for i in spec.index_set:
                nxt = act_on_path(path, i, "f")
                if nxt is not None:
                    seen.setdefault(nxt, None)
        levels.append(sorted(seen, key=lambda p: p.deviations))
    return levels


# -- generating functions -------------------------------------------------


def gf_J(weight: DominantWeight, trunc: int) -> XLaurentSeries:
    return XLaurentSeries.from_monomials(
        ((s.mod_length, s.degree, 1) for _, s in _graded(weight, trunc)), trunc
    )


def gf_J_prefixes(weight: DominantWeight, trunc: int) -> Dict[Prefix, XLaurentSeries]:
    spec = b13()
    buckets: Dict[Prefix, list] = {(a, b): [] for a in spec.elements for b in spec.elements}
    for path, s in _graded(weight, trunc):
        buckets[path.prefix()].append((s.mod_length, s.degree, 1))
    return {p: XLaurentSeries.from_monomials(m, trunc) for p, m in buckets.items()}


def gf_J_prefix(weight: DominantWeight, prefix: Prefix, trunc: int) -> XLaurentSeries:
    return gf_J_prefixes(weight, trunc)[prefix]


def gf_FD(weight: DominantWeight, D: int, trunc: int) -> XLaurentSeries:
    spec = b13()
    ground = ground_state(spec, weight)
    span = ground.period * spec.height_delta
    if D < 1 or span % D:
        raise InvalidDivisor(f"D={D} does not divide d*HT(delta)={span}")
    return XLaurentSeries.from_monomials(
        ((D * s.h_length, s.degree, 1) for _, s in paths_up_to(weight, trunc - 1)), trunc
    )


def _graded(weight: DominantWeight, trunc: int) -> Tuple[Tuple[LambdaPath, PathStats], ...]:
    if weight not in MODIFIED_LENGTH_WEIGHTS:
        raise UnsupportedWeight(f"J(x,q) uses the modified length, unavailable for {weight.label}")
    return paths_up_to(weight, trunc - 1)


def x_support_report(series: XLaurentSeries) -> Dict[str, Optional[int]]:
    support = series.x_support()
    return {"min_xdeg": support[0] if support else None, "max_xdeg": support[1] if support else None}


# -- concatenation --------------------------------------------------------


def concatenate(path: LambdaPath, prefix: Sequence[int]) -> LambdaPath:
    """Path ``b p``: the d-element block p = (p_d, ..., p_1) fills positions 1..d, b moves out by d."""
    d = path.ground.period
    if len(prefix) != d:
        raise ValueError(f"prefix must have {d} elements")
    inner = tuple(reversed(tuple(prefix)))
    return LambdaPath.build(path.ground, inner + path.window(len(path)))


def random_path(ground: GroundState, rng: random.Random, max_blocks: int = 4) -> LambdaPath:
    spec = ground.spec
    n = rng.randint(0, max_blocks) * ground.period
    return LambdaPath.build(ground, [rng.choice(spec.elements) for _ in range(n)])


def concatenation_law(weight: DominantWeight, samples: int = 20, seed: int = 0) -> Dict[str, object]:
    """Check that the shifts of H-length, degree and modified length under b -> b p depend only on (q1, p).

    Returns a mapping with ``holds`` and the first violation found, if any.
    """
    spec = b13()
    ground = ground_state(spec, weight)
    rng = random.Random(seed)
    span = ground.period * spec.height_delta
    track_mod = weight in MODIFIED_LENGTH_WEIGHTS
    checked = 0
    for p in _prefixes(spec):
        for q in _prefixes(spec):
            seen: Dict[str, set] = {"h": set(), "g": set(), "mod": set()}
            for _ in range(samples):
                tail = random_path(ground, rng)
                b = LambdaPath.build(ground, (q[1], q[0]) + tail.window(len(tail))[2:])
                bp = concatenate(b, p)
                hb, hbp = h_length(b), h_length(bp)
                seen["h"].add(hbp - hb)
                seen["g"].add(degree(bp) - degree(b) - span * hb)
                if track_mod:
                    seen["mod"].add(degree(bp) - degree(b) - 2 * mod_length(b))
                checked += 1
            for key, values in seen.items():
                if len(values) > 1:
                    return {"holds": False, "prefix": p, "q": q, "quantity": key, "values": sorted(values)}
    return {"holds": True, "checked": checked}


def _prefixes(spec: PerfectCrystalSpec) -> List[Prefix]:
    return [(a, b) for b in spec.elements for a in spec.elements]
