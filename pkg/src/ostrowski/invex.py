"""Eta-maps, invex segments, scalar functions and sampling-based certification.

Everything here lives on subsets of the real line.  Certification is done
by dense grid sampling: a ``refuted`` verdict always carries a re-checkable
witness, while ``certified`` only means no violation was found at the grid
resolution used.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

TOL_CERT = 1e-9
TOL_FD = 1e-5
FD_STEP = 1e-5
EXCLUDED_NUDGE = 1e-12
DEFAULT_BOX = (-5.0, 5.0)


class InvalidInput(ValueError):
    """Raised when an input violates an operation's precondition."""


class HypothesisRefuted(InvalidInput):
    """A certification needed by a bound refuted its hypothesis."""

    def __init__(self, message: str, report: "CertReport"):
        super().__init__(f"{message}: {report.describe()}")
        self.report = report


def _as_array(fn: Callable, x) -> np.ndarray:
    # constant lambdas return scalars; broadcast them to the sample shape
    x = np.asarray(x, dtype=float)
    return np.broadcast_to(np.asarray(fn(x), dtype=float), x.shape)


# ---------------------------------------------------------------------------
# domains
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise InvalidInput(f"interval with lo={self.lo} > hi={self.hi}")
        if math.isinf(self.lo) and self.lo_closed:
            object.__setattr__(self, "lo_closed", False)
        if math.isinf(self.hi) and self.hi_closed:
            object.__setattr__(self, "hi_closed", False)

    def contains(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        left = x >= self.lo if self.lo_closed else x > self.lo
        right = x <= self.hi if self.hi_closed else x < self.hi
        return left & right

    def distance(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.maximum(np.maximum(self.lo - x, x - self.hi), 0.0)


@dataclass(frozen=True)
class DomainDescriptor:
    """Finite union of sorted, disjoint intervals minus finitely many points."""

    intervals: Tuple[Interval, ...]
    excluded: Tuple[float, ...] = ()

    def __post_init__(self):
        if not self.intervals:
            raise InvalidInput("empty domain")
        object.__setattr__(self, "intervals", tuple(self.intervals))
        object.__setattr__(self, "excluded", tuple(sorted(float(e) for e in self.excluded)))
        for left, right in zip(self.intervals, self.intervals[1:]):
            touching = left.hi == right.lo and (left.hi_closed and right.lo_closed)
            if left.hi > right.lo or touching:
                raise InvalidInput("domain intervals must be sorted and pairwise disjoint")
        for e in self.excluded:
            if not any(iv.contains(e) for iv in self.intervals):
                raise InvalidInput(f"excluded point {e} lies outside every interval")

    @classmethod
    def real_line(cls, excluded: Sequence[float] = ()) -> "DomainDescriptor":
        return cls((Interval(-math.inf, math.inf),), tuple(excluded))

    @classmethod
    def closed(cls, lo: float, hi: float) -> "DomainDescriptor":
        return cls((Interval(lo, hi, True, True),))

    @classmethod
    def open(cls, lo: float, hi: float) -> "DomainDescriptor":
        return cls((Interval(lo, hi, False, False),))

    @classmethod
    def union(cls, *intervals: Interval, excluded: Sequence[float] = ()) -> "DomainDescriptor":
        return cls(tuple(intervals), tuple(excluded))

    def contains(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        inside = np.zeros(x.shape, dtype=bool)
        for iv in self.intervals:
            inside |= iv.contains(x)
        for e in self.excluded:
            inside &= x != e
        return inside

    def distance(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.min(np.stack([iv.distance(x) for iv in self.intervals]), axis=0)

    @property
    def bounds(self) -> Tuple[float, float]:
        return self.intervals[0].lo, self.intervals[-1].hi

    def contains_interval(self, lo: float, hi: float) -> bool:
        """True when the closed interval [lo, hi] lies entirely in the domain."""
        for iv in self.intervals:
            if iv.contains(lo) and iv.contains(hi):
                return not any(lo <= e <= hi for e in self.excluded)
        return False

    def __str__(self):
        parts = []
        for iv in self.intervals:
            parts.append(f"{'[' if iv.lo_closed else '('}{iv.lo}, {iv.hi}{']' if iv.hi_closed else ')'}")
        text = " U ".join(parts)
        if self.excluded:
            text += " \\ {" + ", ".join(map(repr, self.excluded)) + "}"
        return text


# ---------------------------------------------------------------------------
# eta-maps, functions, segments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EtaMap:
    """A bifunction eta(x, y) on a 1-D domain.

    ``func`` must accept numpy arrays and broadcast like a ufunc.
    """

    func: Callable[[np.ndarray, np.ndarray], np.ndarray]
    domain: DomainDescriptor
    label: str
    trivial: bool = False

    def __call__(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return np.broadcast_to(np.asarray(self.func(x, y), dtype=float), np.broadcast(x, y).shape)

    def on(self, domain: DomainDescriptor) -> "EtaMap":
        """The same map restricted to (or re-declared on) another domain."""
        return replace(self, domain=domain)


def eval_eta(eta: EtaMap, x: float, y: float) -> float:
    for name, point in (("x", x), ("y", y)):
        if not eta.domain.contains(point):
            raise InvalidInput(f"{name}={point!r} is outside the domain {eta.domain} of eta-map {eta.label!r}")
    value = float(eta(x, y))
    if not math.isfinite(value):
        raise InvalidInput(f"eta-map {eta.label!r} returned {value} at ({x!r}, {y!r})")
    return value


@dataclass(frozen=True)
class ScalarFn:
    """A function with either a closed-form derivative or a finite-difference fallback."""

    f: Callable[[np.ndarray], np.ndarray]
    df: Optional[Callable[[np.ndarray], np.ndarray]] = None
    label: str = "f"
    h: float = FD_STEP

    def __post_init__(self):
        if not self.h > 0:
            raise InvalidInput(f"finite-difference step must be positive, got {self.h}")

    def __call__(self, x):
        out = _as_array(self.f, x)
        return float(out) if out.ndim == 0 else out

    def deriv(self, x):
        if self.df is not None:
            out = _as_array(self.df, x)
        else:
            out = central_difference(self.f, x, self.h)
        return float(out) if np.ndim(out) == 0 else out

    def scaled(self, c: float) -> "ScalarFn":
        f, df = self.f, self.df
        return ScalarFn(
            lambda x: c * _as_array(f, x),
            None if df is None else (lambda x: c * _as_array(df, x)),
            label=f"{c!r}*{self.label}",
            h=self.h,
        )


def central_difference(f: Callable, x, h: float = FD_STEP) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return (_as_array(f, x + h) - _as_array(f, x - h)) / (2.0 * h)


def derivative_power(fn: ScalarFn, q: float = 1.0) -> ScalarFn:
    """The derived target |f'|^q (absolute value first, then the power)."""
    if not q >= 1:
        raise InvalidInput(f"exponent q must be >= 1, got {q}")
    label = f"|{fn.label}'|" if q == 1 else f"|{fn.label}'|^{q!r}"
    return ScalarFn(lambda x: np.abs(_as_array(fn.deriv, x)) ** q, label=label)


def derivative_mismatch(fn: ScalarFn, points, h: float = FD_STEP) -> float:
    """Largest gap between the closed-form derivative and a central difference."""
    if fn.df is None:
        return 0.0
    points = np.asarray(points, dtype=float)
    return float(np.max(np.abs(_as_array(fn.df, points) - central_difference(fn.f, points, h))))


@dataclass(frozen=True)
class InvexSegment:
    """The interval [a, a + eta(b, a)] generated by an eta-map."""

    eta: EtaMap
    a: float
    b: float
    eta_ab: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        value = eval_eta(self.eta, self.b, self.a)
        if not value > 0:
            raise InvalidInput(
                f"eta({self.b!r}, {self.a!r}) = {value!r} under {self.eta.label!r}; need a < a + eta(b, a)"
            )
        object.__setattr__(self, "eta_ab", value)
        if not self.eta.domain.contains_interval(self.a, self.a + value):
            raise InvalidInput(
                f"segment [{self.a!r}, {self.a + value!r}] leaves the domain {self.eta.domain}"
            )

    @property
    def lo(self) -> float:
        return self.a

    @property
    def hi(self) -> float:
        return self.a + self.eta_ab

    @property
    def midpoint(self) -> float:
        return (2.0 * self.a + self.eta_ab) / 2.0

    @property
    def hull(self) -> Tuple[float, float]:
        """Smallest interval holding a, b and the whole segment."""
        return min(self.a, self.b), max(self.b, self.hi)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def point(self, t):
        return self.a + np.asarray(t, dtype=float) * self.eta_ab

    def grid(self, n: int) -> np.ndarray:
        return np.linspace(self.lo, self.hi, n)

    def __str__(self):
        return f"[{self.a!r}, {self.a!r} + eta({self.b!r}, {self.a!r})] = [{self.lo!r}, {self.hi!r}] ({self.eta.label})"


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------


class Verdict(str, enum.Enum):
    CERTIFIED = "certified"
    REFUTED = "refuted"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CertReport:
    check: str
    verdict: Verdict
    samples_used: int
    worst_violation: float
    witness: Optional[Tuple[float, ...]] = None
    skipped: int = 0
    flagged: int = 0

    @property
    def certified(self) -> bool:
        return self.verdict is Verdict.CERTIFIED

    @property
    def refuted(self) -> bool:
        return self.verdict is Verdict.REFUTED

    def describe(self) -> str:
        text = f"{self.check}: {self.verdict.value} ({self.samples_used} samples, worst violation {self.worst_violation:.3g}"
        if self.skipped:
            text += f", {self.skipped} skipped"
        if self.flagged:
            text += f", {self.flagged} nudged off excluded points"
        text += ")"
        if self.witness is not None:
            text += f" witness={self.witness}"
        return text


@dataclass(frozen=True)
class SamplingPlan:
    """Grid resolution for certification sweeps.

    ``box`` bounds the spatial sampling; it defaults to the domain's hull
    clipped to ``DEFAULT_BOX`` for unbounded domains.
    """

    n_space: int = 64
    n_t: int = 32
    box: Optional[Tuple[float, float]] = None
    tol: float = TOL_CERT

    def __post_init__(self):
        if self.n_space < 3 or self.n_t < 3:
            raise InvalidInput("sampling plans need at least 3 points per axis")

    def t_nodes(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n_t)

    def space_nodes(self, domain: DomainDescriptor, region: Optional[Tuple[float, float]] = None):
        """Grid points in the domain; returns (nodes, number nudged off excluded or open points)."""
        lo, hi = region or self.box or domain.bounds
        if region is None and self.box is None:
            lo = DEFAULT_BOX[0] if math.isinf(lo) else lo
            hi = DEFAULT_BOX[1] if math.isinf(hi) else hi
        nodes = np.linspace(lo, hi, self.n_space)
        inside = domain.contains(nodes)
        flagged = 0
        kept = []
        for x, ok in zip(nodes, inside):
            if ok:
                kept.append(x)
                continue
            for nudged in (x + EXCLUDED_NUDGE, x - EXCLUDED_NUDGE):
                if domain.contains(nudged):
                    kept.append(nudged)
                    flagged += 1
                    break
        return np.array(kept, dtype=float), flagged


DEFAULT_PLAN = SamplingPlan()


def _report(check, violation, coords, tol, skipped=0, flagged=0, valid=None) -> CertReport:
    """Reduce a violation array to a report (max violation, first index on ties)."""
    if valid is not None:
        violation = np.where(valid, violation, -np.inf)
        used = int(np.count_nonzero(valid))
    else:
        used = int(violation.size)
    total = used + skipped
    if used == 0 or skipped > 0.5 * total:
        worst = float(max(np.max(violation, initial=-np.inf), 0.0)) if used else 0.0
        return CertReport(check, Verdict.INCONCLUSIVE, used, worst, None, skipped, flagged)
    idx = np.unravel_index(int(np.argmax(violation)), violation.shape)
    worst = max(float(violation[idx]), 0.0)
    if worst > tol:
        witness = tuple(float(np.broadcast_to(c, violation.shape)[idx]) for c in coords)
        return CertReport(check, Verdict.REFUTED, used, worst, witness, skipped, flagged)
    return CertReport(check, Verdict.CERTIFIED, used, worst, None, skipped, flagged)


def _checked_eta(eta: EtaMap, x, y) -> np.ndarray:
    values = eta(x, y)
    bad = ~np.isfinite(values)
    if bad.any():
        i = np.unravel_index(int(np.argmax(bad)), bad.shape)
        xs, ys = np.broadcast_arrays(x, y)
        raise InvalidInput(f"eta-map {eta.label!r} is not finite at ({xs[i]!r}, {ys[i]!r})")
    return values


def check_invex_set(eta: EtaMap, plan: SamplingPlan = DEFAULT_PLAN) -> CertReport:
    """Sample x + t*eta(y, x) for x, y in the domain and t in [0, 1].

    Images landing exactly on an excluded or open-boundary point are nudged by
    1e-12 and counted in ``flagged``; other exits are violations measured
    by their distance to the domain.
    """
    nodes, flagged = plan.space_nodes(eta.domain)
    if nodes.size == 0:
        raise InvalidInput(f"no sample points fall in the domain {eta.domain}")
    X, Y, T = np.meshgrid(nodes, nodes, plan.t_nodes(), indexing="ij")
    image = X + T * _checked_eta(eta, Y, X)
    inside = eta.domain.contains(image)
    nudged_up = eta.domain.contains(image + EXCLUDED_NUDGE)
    nudged_down = eta.domain.contains(image - EXCLUDED_NUDGE)
    rescued = ~inside & (nudged_up | nudged_down)
    violation = np.where(inside | rescued, 0.0, np.maximum(eta.domain.distance(image), EXCLUDED_NUDGE))
    return _report("invex set", violation, (X, Y, T), plan.tol, flagged=flagged + int(rescued.sum()))


def check_condition_c(eta: EtaMap, plan: SamplingPlan = DEFAULT_PLAN) -> CertReport:
    """Sample both Condition C identities and the two-parameter consequence.

    Samples whose intermediate point y + t*eta(x, y) leaves the domain are
    skipped; more than half skipped gives an inconclusive verdict.
    """
    nodes, flagged = plan.space_nodes(eta.domain)
    if nodes.size == 0:
        raise InvalidInput(f"no sample points fall in the domain {eta.domain}")
    ts = plan.t_nodes()
    X, Y, T = np.meshgrid(nodes, nodes, ts, indexing="ij")
    exy = _checked_eta(eta, X, Y)
    Z = Y + T * exy
    ok = eta.domain.contains(Z)
    with np.errstate(invalid="ignore"):
        first = np.abs(eta(Y, Z) + T * exy)
        second = np.abs(eta(X, Z) - (1.0 - T) * exy)
    single = np.where(ok, np.maximum(first, second), 0.0)
    single = np.nan_to_num(single, nan=np.inf)

    # eta(y + t2*eta(x,y), y + t1*eta(x,y)) = (t2 - t1) * eta(x, y)
    e2 = exy[:, :, 0][:, :, None, None]
    base = Y[:, :, 0][:, :, None, None]
    t1 = ts[None, None, :, None]
    t2 = ts[None, None, None, :]
    z1 = base + t1 * e2
    z2 = base + t2 * e2
    ok_pair = eta.domain.contains(z1) & eta.domain.contains(z2)
    with np.errstate(invalid="ignore"):
        pair = np.abs(eta(z2, z1) - (t2 - t1) * e2)
    pair = np.where(ok_pair, np.nan_to_num(pair, nan=np.inf), 0.0)

    n_single, n_pair = single.size, pair.size
    skipped = int((~ok).sum() + (~ok_pair).sum())
    used = n_single + n_pair - skipped
    if used == 0 or skipped > 0.5 * (n_single + n_pair):
        return CertReport("condition C", Verdict.INCONCLUSIVE, used, 0.0, None, skipped, flagged)

    worst_single = float(single.max())
    worst_pair = float(pair.max())
    if worst_single >= worst_pair:
        report = _report("condition C", single, (X, Y, T), plan.tol, valid=ok)
    else:
        X4 = X[:, :, 0][:, :, None, None]
        report = _report("condition C", pair, (X4, base, t1, t2), plan.tol, valid=ok_pair)
    return replace(report, samples_used=used, skipped=skipped, flagged=flagged,
                   verdict=Verdict.REFUTED if max(worst_single, worst_pair) > plan.tol else Verdict.CERTIFIED)


Target = Union[ScalarFn, Callable[[np.ndarray], np.ndarray]]
Region = Union[InvexSegment, Tuple[float, float]]


def _region_bounds(region: Region) -> Tuple[float, float]:
    if isinstance(region, InvexSegment):
        return region.lo, region.hi
    lo, hi = region
    if not lo < hi:
        raise InvalidInput(f"region ({lo}, {hi}) is empty")
    return float(lo), float(hi)


def check_preinvex(g: Target, eta: EtaMap, region: Region, plan: SamplingPlan = DEFAULT_PLAN) -> CertReport:
    """Sample g(x + t*eta(y, x)) <= (1 - t) g(x) + t g(y) over x, y in ``region``.

    ``region`` is either an invex segment or an explicit (lo, hi) pair; the
    caller decides whether preinvexity is wanted on the segment alone or on
    a larger part of the domain.
    """
    fn = g.f if isinstance(g, ScalarFn) else g
    lo, hi = _region_bounds(region)
    nodes, flagged = plan.space_nodes(eta.domain, (lo, hi))
    if nodes.size == 0:
        raise InvalidInput(f"region [{lo}, {hi}] misses the domain of {eta.label!r}")
    X, Y, T = np.meshgrid(nodes, nodes, plan.t_nodes(), indexing="ij")
    image = X + T * _checked_eta(eta, Y, X)
    gi = _as_array(fn, image)
    gx = _as_array(fn, X)
    gy = _as_array(fn, Y)
    for values, points in ((gx, X), (gy, Y), (gi, image)):
        bad = ~np.isfinite(values)
        if bad.any():
            i = np.unravel_index(int(np.argmax(bad)), bad.shape)
            raise InvalidInput(f"target is not finite at {points[i]!r}")
    violation = gi - ((1.0 - T) * gx + T * gy)
    return _report("preinvex", violation, (X, Y, T), plan.tol, flagged=flagged)


# memoised certifications used as bound preconditions


@lru_cache(maxsize=256)
def certify_condition_c(eta: EtaMap, plan: SamplingPlan = DEFAULT_PLAN) -> CertReport:
    return check_condition_c(eta, plan)


@lru_cache(maxsize=4096)
def certify_derivative_preinvex(fn: ScalarFn, seg: InvexSegment, q: float = 1.0,
                                plan: SamplingPlan = DEFAULT_PLAN) -> CertReport:
    """Preinvexity of |f'|^q on the hull of a, b and the segment."""
    return check_preinvex(derivative_power(fn, q), seg.eta, seg.hull if seg.hull[0] < seg.hull[1] else seg, plan)


def require_condition_c(eta: EtaMap, plan: SamplingPlan = DEFAULT_PLAN) -> CertReport:
    report = certify_condition_c(eta, plan)
    if report.refuted:
        raise HypothesisRefuted(f"eta-map {eta.label!r} violates condition C", report)
    return report


def require_derivative_preinvex(fn: ScalarFn, seg: InvexSegment, q: float = 1.0,
                                plan: SamplingPlan = DEFAULT_PLAN) -> CertReport:
    report = certify_derivative_preinvex(fn, seg, q, plan)
    if report.refuted:
        raise HypothesisRefuted(f"|{fn.label}'|^{q} is not preinvex under {seg.eta.label!r}", report)
    return report
