"""Worst-case lhs/rhs ratios and the best-constant estimate for the 1/6 bound."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .bounds import BoundId, evaluate, tolerance
from .invex import DEFAULT_PLAN, InvalidInput, InvexSegment, SamplingPlan, ScalarFn

X_POINTS = 129
RHS_FLOOR = 1e-14
GOLDEN_TOL = 1e-10
TOP_K = 3

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class Inconclusive(RuntimeError):
    """Every sample was excluded (rhs below the floor)."""


def golden_section_max(fn: Callable[[float], float], lo: float, hi: float, tol: float = GOLDEN_TOL):
    """Maximise a unimodal fn on [lo, hi]; returns (x, fn(x)) with the endpoints also considered."""
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = fn(d)
    best = max(((c, fc), (d, fd), (lo, fn(lo)), (hi, fn(hi))), key=lambda p: p[1])
    return best


@dataclass(frozen=True)
class RatioSample:
    x: float
    q: Optional[float]
    ratio: float


@dataclass
class RatioSurface:
    bound_id: BoundId
    samples: List[RatioSample] = field(default_factory=list)
    excluded: List[Tuple[float, Optional[float]]] = field(default_factory=list)

    @property
    def inconclusive(self) -> bool:
        return not self.samples

    @property
    def argmax(self) -> Optional[RatioSample]:
        if not self.samples:
            return None
        return max(self.samples, key=lambda s: s.ratio)

    @property
    def max_ratio(self) -> float:
        best = self.argmax
        return math.nan if best is None else best.ratio

    def sound(self) -> bool:
        return all(s.ratio <= 1.0 + tolerance(1.0) for s in self.samples)


def ratio_sweep(f: ScalarFn, seg: InvexSegment, bound_id: BoundId, x_grid: Optional[Sequence[float]] = None,
                q_grid: Sequence[Optional[float]] = (None,), M: Optional[float] = None, refine: bool = True,
                verify: bool = True, plan: SamplingPlan = DEFAULT_PLAN) -> RatioSurface:
    """lhs/rhs over a grid of x (and q), refined by golden-section search near the top maxima.

    Points with rhs below 1e-14 are excluded instead of producing 0/0.  Midpoint-only
    bounds are sampled at the midpoint alone.
    """
    bound_id = BoundId(bound_id)
    if bound_id.midpoint_only:
        xs = [seg.midpoint]
    else:
        xs = list(seg.grid(X_POINTS) if x_grid is None else x_grid)
    if bound_id.uses_q:
        qs = [q for q in q_grid if q is not None] or [2.0]
    else:
        qs = [None]
    surface = RatioSurface(bound_id)

    def ratio_at(x: float, q: Optional[float]) -> Optional[float]:
        report = evaluate(bound_id, f, seg, x=x, q=q, M=M, verify=verify, plan=plan)
        if report.rhs < RHS_FLOOR:
            return None
        return report.lhs / report.rhs

    for q in qs:
        row = []
        for x in xs:
            r = ratio_at(float(x), q)
            if r is None:
                surface.excluded.append((float(x), q))
            else:
                surface.samples.append(RatioSample(float(x), q, r))
                row.append((float(x), r))
        if not refine or len(xs) < 3 or len(row) < 3:
            continue
        order = sorted(range(len(row)), key=lambda i: (-row[i][1], i))[:TOP_K]
        for i in order:
            lo = row[max(i - 1, 0)][0]
            hi = row[min(i + 1, len(row) - 1)][0]

            def objective(x, q=q):
                r = ratio_at(x, q)
                return -math.inf if r is None else r

            x_best, r_best = golden_section_max(objective, lo, hi)
            if math.isfinite(r_best):
                surface.samples.append(RatioSample(float(x_best), q, r_best))
    return surface


@dataclass(frozen=True)
class BestConstant:
    estimate: float
    member_max: Dict[str, float]
    attaining: Tuple[str, ...]


def best_constant_search(seg: InvexSegment, family: Sequence[ScalarFn], x_grid: Optional[Sequence[float]] = None,
                         verify: bool = True, plan: SamplingPlan = DEFAULT_PLAN) -> BestConstant:
    """(1/6) * max lhs/rhs of the 1/6 bound over the family and grid.

    ``attaining`` lists the members whose maximum ratio is within 1e-12 of the
    overall maximum; it is reported, never asserted.
    """
    if not family:
        raise InvalidInput("best-constant search needs a nonempty family")
    member_max: Dict[str, float] = {}
    for f in family:
        surface = ratio_sweep(f, seg, BoundId.THM22_21, x_grid, verify=verify, plan=plan)
        if not surface.inconclusive:
            member_max[f.label] = surface.max_ratio
    if not member_max:
        raise Inconclusive("every family member has a vanishing bound on the grid")
    top = max(member_max.values())
    attaining = tuple(label for label, r in member_max.items() if abs(r - top) <= 1e-12)
    return BestConstant(top / 6.0, member_max, attaining)


def best_constant_estimate(seg: InvexSegment, family: Sequence[ScalarFn], x_grid: Optional[Sequence[float]] = None,
                           verify: bool = True, plan: SamplingPlan = DEFAULT_PLAN) -> float:
    return best_constant_search(seg, family, x_grid, verify, plan).estimate
