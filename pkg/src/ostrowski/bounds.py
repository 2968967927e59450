"""Closed-form Ostrowski and midpoint bounds, plus the reductions between them.

Notation used throughout: ``eta`` is eta(b, a), the segment is
[a, a + eta], ``u = (x - a) / eta`` and ``v = (a + eta - x) / eta``.
``A``, ``B`` and ``C`` stand for |f'(a)|, |f'(b)| and |f'(a + eta)|.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .invex import (
    DEFAULT_PLAN,
    InvalidInput,
    InvexSegment,
    SamplingPlan,
    ScalarFn,
    _as_array,
    require_condition_c,
    require_derivative_preinvex,
)
from .quadrature import DEFAULT_TOL, KINK_TOL, integrate, mean_value
from .registry import ETA_MAPS, get_function

TOL_ABS = 1e-9
TOL_REL = 1e-9
REDUCTION_TOL = 1e-12
M_GRID = 1025


class BoundId(str, enum.Enum):
    OSTROWSKI_1A = "OSTROWSKI_1A"
    LIPSCHITZ_1B = "LIPSCHITZ_1B"
    KIRMACI_1C = "KIRMACI_1C"
    KIRMACI_1D = "KIRMACI_1D"
    KIRMACI_1E = "KIRMACI_1E"
    KIRMACI_1EE = "KIRMACI_1EE"
    THM22_21 = "THM22_21"
    THM22_2B = "THM22_2B"
    THM23_22 = "THM23_22"
    THM23_COR_M = "THM23_COR_M"
    THM23_COR_S1 = "THM23_COR_S1"
    THM24 = "THM24"
    THM24_COR_S2 = "THM24_COR_S2"
    THM24_REMARK_B = "THM24_REMARK_B"

    @property
    def uses_q(self) -> bool:
        return self not in _Q_FREE

    @property
    def midpoint_only(self) -> bool:
        return self in _MIDPOINT_ONLY

    @property
    def classical(self) -> bool:
        return self in _CLASSICAL

    @property
    def needs_m(self) -> bool:
        return self in (BoundId.OSTROWSKI_1A, BoundId.LIPSCHITZ_1B, BoundId.THM23_COR_M)

    @property
    def min_q(self) -> Tuple[float, bool]:
        """(threshold, strict) for admissible q."""
        if self in (BoundId.THM24, BoundId.THM24_COR_S2, BoundId.THM24_REMARK_B):
            return 1.0, False
        return 1.0, True


_Q_FREE = {BoundId.OSTROWSKI_1A, BoundId.LIPSCHITZ_1B, BoundId.KIRMACI_1C, BoundId.THM22_21, BoundId.THM22_2B}
_MIDPOINT_ONLY = {
    BoundId.LIPSCHITZ_1B, BoundId.KIRMACI_1C, BoundId.KIRMACI_1D, BoundId.KIRMACI_1E,
    BoundId.KIRMACI_1EE, BoundId.THM23_COR_S1, BoundId.THM24_COR_S2,
}
_CLASSICAL = {
    BoundId.OSTROWSKI_1A, BoundId.LIPSCHITZ_1B, BoundId.KIRMACI_1C,
    BoundId.KIRMACI_1D, BoundId.KIRMACI_1E, BoundId.KIRMACI_1EE,
}


def tolerance(rhs: float) -> float:
    return TOL_ABS + TOL_REL * abs(rhs)


@dataclass(frozen=True)
class BoundReport:
    bound_id: BoundId
    lhs: float
    rhs: float
    slack: float
    holds: bool
    details: Dict[str, float] = field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def build(cls, bound_id: BoundId, lhs: float, rhs: float, **details) -> "BoundReport":
        slack = rhs - lhs
        return cls(bound_id, lhs, rhs, slack, slack >= -tolerance(rhs), details)

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs > 0 else math.nan


@dataclass(frozen=True)
class BoundParams:
    """Exponents and derivative bound for the Hölder-type estimates.

    ``p`` is always derived from ``q`` (1/p + 1/q = 1); q = 1 leaves it
    infinite.
    """

    q: float = 1.0
    M: Optional[float] = None

    def __post_init__(self):
        if not self.q >= 1:
            raise InvalidInput(f"q must be >= 1, got {self.q}")
        if self.M is not None and not self.M > 0:
            raise InvalidInput(f"M must be positive, got {self.M}")

    @property
    def p(self) -> float:
        return math.inf if self.q == 1 else self.q / (self.q - 1.0)

    @property
    def holder_factor(self) -> float:
        """(1 / (p + 1)) ** (1 / p)."""
        p = self.p
        return 1.0 if math.isinf(p) else (1.0 / (p + 1.0)) ** (1.0 / p)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _check_x(seg: InvexSegment, x: float) -> Tuple[float, float]:
    if not seg.contains(x):
        raise InvalidInput(f"x={x!r} is outside the segment [{seg.lo!r}, {seg.hi!r}]")
    return (x - seg.a) / seg.eta_ab, (seg.hi - x) / seg.eta_ab


def _check_q(q: float, strict: bool) -> BoundParams:
    if strict and not q > 1:
        raise InvalidInput(f"this bound needs q > 1, got {q}")
    if not q >= 1:
        raise InvalidInput(f"this bound needs q >= 1, got {q}")
    return BoundParams(q)


def _absd(f: ScalarFn, x: float) -> float:
    return abs(float(f.deriv(x)))


def lhs_value(f: ScalarFn, seg: InvexSegment, x: float, tol: float = DEFAULT_TOL) -> float:
    """|f(x) - mean of f over the segment|."""
    _check_x(seg, x)
    return abs(float(f(x)) - mean_value(f, seg, tol))


def thm22_brackets(u: float, v: float) -> Tuple[float, float]:
    """Coefficients of |f'(a)| and |f'(b)| inside the 1/6 bound."""
    return 3 * u**2 - 2 * u**3 + 2 * v**3, 1 - 3 * u**2 + 4 * u**3


def thm22_rhs(eta: float, u: float, v: float, da: float, db: float) -> float:
    ca, cb = thm22_brackets(u, v)
    return eta / 6.0 * (ca * da + cb * db)


def thm23_rhs(eta: float, x_minus_a: float, end_minus_x: float, da: float, dx: float, dc: float, q: float) -> float:
    h = BoundParams(q).holder_factor
    left = x_minus_a**2 / eta * ((da**q + dx**q) / 2.0) ** (1.0 / q)
    right = end_minus_x**2 / eta * ((dc**q + dx**q) / 2.0) ** (1.0 / q)
    return h * (left + right)


def thm24_rhs(eta: float, u: float, v: float, da: float, db: float, q: float) -> float:
    # the printed coefficients, rewritten in u: (x-a)^2 (3 eta - 2x + 2a) / (6 eta^3) = u^2 (3 - 2u) / 6
    r = 1.0 - 1.0 / q
    left = u ** (2 * r) * (u**2 * (3 - 2 * u) / 6.0 * da**q + u**3 / 3.0 * db**q) ** (1.0 / q)
    right = v ** (2 * r) * (v**3 / 3.0 * da**q + (1.0 / 6.0 + u**2 * (2 * u - 3) / 6.0) * db**q) ** (1.0 / q)
    return eta * 0.5**r * (left + right)


def s1_rhs(eta: float, da: float, dc: float, q: float) -> float:
    h = BoundParams(q).holder_factor
    return h * eta / 4.0 * (((3 * da**q + dc**q) / 4.0) ** (1 / q) + ((3 * dc**q + da**q) / 4.0) ** (1 / q))


def s2_rhs(eta: float, da: float, db: float, q: float) -> float:
    return 3 ** (1 - 1 / q) / 8.0 * eta * (da + db)


# ---------------------------------------------------------------------------
# new bounds on invex segments
# ---------------------------------------------------------------------------


def thm22_bound(f: ScalarFn, seg: InvexSegment, x: float) -> BoundReport:
    """The 1/6 bound with |f'(a)| and |f'(b)|.

    Preinvexity of |f'| is the caller's responsibility (see
    ``invex.certify_derivative_preinvex``).
    """
    u, v = _check_x(seg, x)
    da, db = _absd(f, seg.a), _absd(f, seg.b)
    ca, cb = thm22_brackets(u, v)
    rhs = seg.eta_ab / 6.0 * (ca * da + cb * db)
    return BoundReport.build(BoundId.THM22_21, lhs_value(f, seg, x), rhs, x=x, bracket_a=ca, bracket_b=cb)


def thm22_improved_bound(f: ScalarFn, seg: InvexSegment, x: float, verify: bool = True,
                         plan: SamplingPlan = DEFAULT_PLAN) -> BoundReport:
    """The 1/6 bound with |f'(a + eta)| in place of |f'(b)|; needs condition C."""
    u, v = _check_x(seg, x)
    if verify:
        require_condition_c(seg.eta, plan)
    da, dc = _absd(f, seg.a), _absd(f, seg.hi)
    ca, cb = thm22_brackets(u, v)
    rhs = seg.eta_ab / 6.0 * (ca * da + cb * dc)
    return BoundReport.build(BoundId.THM22_2B, lhs_value(f, seg, x), rhs, x=x, bracket_a=ca, bracket_b=cb)


def thm23_bound(f: ScalarFn, seg: InvexSegment, x: float, q: float, verify: bool = True,
                plan: SamplingPlan = DEFAULT_PLAN) -> BoundReport:
    _check_x(seg, x)
    _check_q(q, strict=True)
    if verify:
        require_condition_c(seg.eta, plan)
    da, dx, dc = _absd(f, seg.a), _absd(f, x), _absd(f, seg.hi)
    rhs = thm23_rhs(seg.eta_ab, x - seg.a, seg.hi - x, da, dx, dc, q)
    return BoundReport.build(BoundId.THM23_22, lhs_value(f, seg, x), rhs, x=x, q=q)


def derivative_sup(f: ScalarFn, seg: InvexSegment, n: int = M_GRID) -> Tuple[float, float]:
    """(max |f'|, argmax) over an n-point grid of the segment."""
    xs = seg.grid(n)
    d = np.abs(_as_array(f.deriv, xs))
    i = int(np.argmax(d))
    return float(d[i]), float(xs[i])


def thm23_bounded_derivative_corollary(f: ScalarFn, seg: InvexSegment, x: float, M: float, q: float,
                                       verify: bool = True, plan: SamplingPlan = DEFAULT_PLAN) -> BoundReport:
    _check_x(seg, x)
    params = BoundParams(q, M)
    _check_q(q, strict=True)
    if verify:
        require_condition_c(seg.eta, plan)
        sup, where = derivative_sup(f, seg)
        if sup > M * (1 + 1e-12):
            raise InvalidInput(f"|f'({where!r})| = {sup!r} exceeds M = {M!r}")
    rhs = params.holder_factor * M * ((x - seg.a) ** 2 + (seg.hi - x) ** 2) / seg.eta_ab
    return BoundReport.build(BoundId.THM23_COR_M, lhs_value(f, seg, x), rhs, x=x, q=q, M=M)


def thm23_midpoint_corollary(f: ScalarFn, seg: InvexSegment, q: float, verify: bool = True,
                             plan: SamplingPlan = DEFAULT_PLAN) -> BoundReport:
    _check_q(q, strict=True)
    if verify:
        require_condition_c(seg.eta, plan)
    x = seg.midpoint
    rhs = s1_rhs(seg.eta_ab, _absd(f, seg.a), _absd(f, seg.hi), q)
    return BoundReport.build(BoundId.THM23_COR_S1, lhs_value(f, seg, x), rhs, x=x, q=q)


def thm24_bound(f: ScalarFn, seg: InvexSegment, x: float, q: float, verify: bool = True,
                plan: SamplingPlan = DEFAULT_PLAN) -> BoundReport:
    """Power-mean bound; demands preinvexity of |f'|^q but not condition C."""
    u, v = _check_x(seg, x)
    _check_q(q, strict=False)
    if verify:
        require_derivative_preinvex(f, seg, q, plan)
    rhs = thm24_rhs(seg.eta_ab, u, v, _absd(f, seg.a), _absd(f, seg.b), q)
    return BoundReport.build(BoundId.THM24, lhs_value(f, seg, x), rhs, x=x, q=q)


def thm24_condition_c_variant(f: ScalarFn, seg: InvexSegment, x: float, q: float, verify: bool = True,
                              plan: SamplingPlan = DEFAULT_PLAN) -> BoundReport:
    u, v = _check_x(seg, x)
    _check_q(q, strict=False)
    if verify:
        require_condition_c(seg.eta, plan)
        require_derivative_preinvex(f, seg, q, plan)
    rhs = thm24_rhs(seg.eta_ab, u, v, _absd(f, seg.a), _absd(f, seg.hi), q)
    return BoundReport.build(BoundId.THM24_REMARK_B, lhs_value(f, seg, x), rhs, x=x, q=q)


def thm24_midpoint_corollary(f: ScalarFn, seg: InvexSegment, q: float, verify: bool = True,
                             plan: SamplingPlan = DEFAULT_PLAN) -> BoundReport:
    _check_q(q, strict=False)
    if verify:
        require_derivative_preinvex(f, seg, q, plan)
    x = seg.midpoint
    rhs = s2_rhs(seg.eta_ab, _absd(f, seg.a), _absd(f, seg.b), q)
    return BoundReport.build(BoundId.THM24_COR_S2, lhs_value(f, seg, x), rhs, x=x, q=q)


# ---------------------------------------------------------------------------
# classical bounds on [a, b]
# ---------------------------------------------------------------------------


def classical_bound(f: ScalarFn, a: float, b: float, bound_id: BoundId, x: Optional[float] = None,
                    q: Optional[float] = None, M: Optional[float] = None) -> BoundReport:
    """Evaluate one of the classical inequalities on [a, b].

    Only the Ostrowski bound uses ``x``; every other classical bound is
    stated at the midpoint.  Hypotheses (convexity of |f'|^q, the Lipschitz
    constant) are the caller's to certify.
    """
    bound_id = BoundId(bound_id)
    if not bound_id.classical:
        raise InvalidInput(f"{bound_id.value} is not a classical bound")
    if not a < b:
        raise InvalidInput(f"classical bounds need a < b, got a={a!r}, b={b!r}")
    seg = InvexSegment(ETA_MAPS["trivial"], a, b)
    da, db = _absd(f, a), _absd(f, b)
    width = b - a

    if bound_id.needs_m and M is None:
        raise InvalidInput(f"{bound_id.value} needs the derivative bound M")
    if bound_id is BoundId.OSTROWSKI_1A:
        if x is None:
            raise InvalidInput("OSTROWSKI_1A needs an evaluation point x")
        _check_x(seg, x)
        rhs = M / width * ((x - a) ** 2 + (b - x) ** 2) / 2.0
        return BoundReport.build(bound_id, lhs_value(f, seg, x), rhs, x=x, M=M)

    mid = (a + b) / 2.0
    lhs = lhs_value(f, seg, mid)
    if bound_id is BoundId.LIPSCHITZ_1B:
        return BoundReport.build(bound_id, lhs, M * width / 4.0, x=mid, M=M)
    if bound_id is BoundId.KIRMACI_1C:
        return BoundReport.build(bound_id, lhs, width / 8.0 * (da + db), x=mid)

    if q is None:
        raise InvalidInput(f"{bound_id.value} needs q")
    params = _check_q(q, strict=True)
    p = params.p
    if bound_id is BoundId.KIRMACI_1D:
        rhs = width / 16.0 * (4.0 / (p + 1.0)) ** (1.0 / p) * (
            (3 * da**q + db**q) ** (1.0 / q) + (3 * db**q + da**q) ** (1.0 / q)
        )
    elif bound_id is BoundId.KIRMACI_1E:
        rhs = width / 4.0 * (4.0 / (p + 1.0)) ** (1.0 / p) * (da + db)
    else:
        # Kirmaci's exponent on |f'| plays the role of q here
        rhs = 3 ** (1.0 - 1.0 / q) / 8.0 * width * (da + db)
    return BoundReport.build(bound_id, lhs, rhs, x=mid, q=q)


def evaluate(bound_id: BoundId, f: ScalarFn, seg: InvexSegment, x: Optional[float] = None,
             q: Optional[float] = None, M: Optional[float] = None, verify: bool = True,
             plan: SamplingPlan = DEFAULT_PLAN) -> BoundReport:
    """Dispatch on a bound identifier; classical bounds use [seg.a, seg.b]."""
    bound_id = BoundId(bound_id)
    if bound_id.classical:
        return classical_bound(f, seg.a, seg.b, bound_id, x=x, q=q, M=M)
    if bound_id.uses_q and q is None:
        raise InvalidInput(f"{bound_id.value} needs q")
    if x is None and not bound_id.midpoint_only:
        raise InvalidInput(f"{bound_id.value} needs an evaluation point x")
    if bound_id is BoundId.THM22_21:
        return thm22_bound(f, seg, x)
    if bound_id is BoundId.THM22_2B:
        return thm22_improved_bound(f, seg, x, verify, plan)
    if bound_id is BoundId.THM23_22:
        return thm23_bound(f, seg, x, q, verify, plan)
    if bound_id is BoundId.THM23_COR_M:
        if M is None:
            raise InvalidInput("THM23_COR_M needs the derivative bound M")
        return thm23_bounded_derivative_corollary(f, seg, x, M, q, verify, plan)
    if bound_id is BoundId.THM23_COR_S1:
        return thm23_midpoint_corollary(f, seg, q, verify, plan)
    if bound_id is BoundId.THM24:
        return thm24_bound(f, seg, x, q, verify, plan)
    if bound_id is BoundId.THM24_REMARK_B:
        return thm24_condition_c_variant(f, seg, x, q, verify, plan)
    return thm24_midpoint_corollary(f, seg, q, verify, plan)


# ---------------------------------------------------------------------------
# reductions and helper inequalities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubadditivityReport:
    s: float
    lhs: float
    rhs: float
    slack: float
    holds: bool


def check_subadditivity(pairs: Sequence[Tuple[float, float]], s: float) -> SubadditivityReport:
    """sum (a_k + b_k)^s <= sum a_k^s + sum b_k^s for 0 <= s < 1 (0**0 taken as 1)."""
    if not 0 <= s < 1:
        raise InvalidInput(f"subadditivity needs 0 <= s < 1, got {s}")
    arr = np.asarray(pairs, dtype=float).reshape(-1, 2)
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise InvalidInput("subadditivity needs finite nonnegative entries")
    lhs = math.fsum((arr[:, 0] + arr[:, 1]) ** s)
    rhs = math.fsum(arr[:, 0] ** s) + math.fsum(arr[:, 1] ** s)
    slack = rhs - lhs
    return SubadditivityReport(s, lhs, rhs, slack, slack >= -tolerance(rhs))


def s1_subadditive_rhs(eta: float, da: float, db: float, q: float) -> Tuple[float, float]:
    """Midpoint Hölder bound after splitting each power mean with s = 1/q.

    Returns (after subadditivity, after also bounding 3**(1/q) by 3); the
    second coincides with the KIRMACI_1E bound.
    """
    h = BoundParams(q).holder_factor
    scale = h * eta / 4.0 * 4.0 ** (-1.0 / q)
    return scale * (1.0 + 3.0 ** (1.0 / q)) * (da + db), scale * 4.0 * (da + db)


def s2_chain(eta: float, da: float, db: float, q: float) -> Tuple[float, float, float]:
    """Midpoint power-mean bound, its subadditive split, and the 3^(1-1/q)/8 form."""
    tight = thm24_rhs(eta, 0.5, 0.5, da, db, q)
    split = eta / 8.0 * 3.0 ** (-1.0 / q) * (1.0 + 2.0 ** (1.0 / q)) * (da + db)
    return tight, split, s2_rhs(eta, da, db, q)


class ReductionId(str, enum.Enum):
    THM22_MIDPOINT_1C = "thm22_midpoint_1c"
    THM22_MIDPOINT_M_1B = "thm22_midpoint_m_1b"
    THM24_MIDPOINT_Q1_1C = "thm24_midpoint_q1_1c"
    THM23_MIDPOINT_1D = "thm23_midpoint_1d"
    THM23_SUBADDITIVE_1E = "thm23_subadditive_1e"
    THM24_SUBADDITIVE_1EE = "thm24_subadditive_1ee"


REDUCTION_FUNCTIONS = ("square", "cube", "quartic_plus", (1.0, -2.0, 0.5, 1.0))
REDUCTION_SEGMENTS = ((0.0, 1.0), (1.0, 3.0), (-2.0, -0.5))
REDUCTION_QS = (1.5, 2.0, 3.0)


@dataclass(frozen=True)
class ReductionCase:
    label: str
    specialised: float
    classical: float
    diff: float
    chain: Tuple[float, ...] = ()


@dataclass(frozen=True)
class ReductionReport:
    reduction_id: ReductionId
    cases: List[ReductionCase]
    max_diff: float
    chain_ok: bool
    passed: bool


def _agree(x: float, y: float) -> float:
    return abs(x - y) / max(1.0, abs(y))


def verify_reduction(reduction_id: ReductionId) -> ReductionReport:
    """Specialise a new bound to eta(b, a) = b - a and compare with its classical form.

    Cases run over fixed polynomial fixtures; ``max_diff`` is relative to the
    classical value once it exceeds 1.  For the subadditive reductions the
    chain tight <= split <= classical must also be nondecreasing.
    """
    reduction_id = ReductionId(reduction_id)
    trivial = ETA_MAPS["trivial"]
    cases = []
    chain_ok = True
    for spec in REDUCTION_FUNCTIONS:
        f = get_function(spec)
        for a, b in REDUCTION_SEGMENTS:
            seg = InvexSegment(trivial, a, b)
            mid = seg.midpoint
            da, db = _absd(f, a), _absd(f, b)
            tag = f"{f.label} on [{a}, {b}]"
            if reduction_id is ReductionId.THM22_MIDPOINT_1C:
                new = thm22_bound(f, seg, mid).rhs
                old = classical_bound(f, a, b, BoundId.KIRMACI_1C).rhs
                cases.append(ReductionCase(tag, new, old, _agree(new, old)))
            elif reduction_id is ReductionId.THM22_MIDPOINT_M_1B:
                M, _ = derivative_sup(f, seg)
                new = thm22_rhs(seg.eta_ab, 0.5, 0.5, M, M)
                old = classical_bound(f, a, b, BoundId.LIPSCHITZ_1B, M=M).rhs
                cases.append(ReductionCase(tag, new, old, _agree(new, old)))
            elif reduction_id is ReductionId.THM24_MIDPOINT_Q1_1C:
                new = thm24_bound(f, seg, mid, 1.0, verify=False).rhs
                old = classical_bound(f, a, b, BoundId.KIRMACI_1C).rhs
                cases.append(ReductionCase(tag, new, old, _agree(new, old)))
            else:
                for q in REDUCTION_QS:
                    qtag = f"{tag}, q={q}"
                    if reduction_id is ReductionId.THM23_MIDPOINT_1D:
                        new = thm23_midpoint_corollary(f, seg, q, verify=False).rhs
                        old = classical_bound(f, a, b, BoundId.KIRMACI_1D, q=q).rhs
                        cases.append(ReductionCase(qtag, new, old, _agree(new, old)))
                    elif reduction_id is ReductionId.THM23_SUBADDITIVE_1E:
                        tight = s1_rhs(seg.eta_ab, da, db, q)
                        split, relaxed = s1_subadditive_rhs(seg.eta_ab, da, db, q)
                        old = classical_bound(f, a, b, BoundId.KIRMACI_1E, q=q).rhs
                        chain = (tight, split, relaxed)
                        chain_ok &= all(lo <= hi + tolerance(hi) for lo, hi in zip(chain, chain[1:]))
                        cases.append(ReductionCase(qtag, relaxed, old, _agree(relaxed, old), chain))
                    else:
                        chain = s2_chain(seg.eta_ab, da, db, q)
                        cor = thm24_midpoint_corollary(f, seg, q, verify=False).rhs
                        old = classical_bound(f, a, b, BoundId.KIRMACI_1EE, q=q).rhs
                        chain_ok &= all(lo <= hi + tolerance(hi) for lo, hi in zip(chain, chain[1:]))
                        chain_ok &= _agree(chain[-1], cor) <= REDUCTION_TOL
                        cases.append(ReductionCase(qtag, cor, old, _agree(cor, old), chain))
    max_diff = max(c.diff for c in cases)
    return ReductionReport(reduction_id, cases, max_diff, chain_ok, max_diff <= REDUCTION_TOL and chain_ok)


@dataclass(frozen=True)
class IntegratedMeanCheck:
    name: str
    x: Optional[float]
    lhs: float
    rhs: float
    tol: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.slack >= -self.tol


@dataclass(frozen=True)
class IntegratedMeanReport:
    q: float
    checks: List[IntegratedMeanCheck]

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.checks)

    @property
    def full(self) -> IntegratedMeanCheck:
        return self.checks[0]


def check_integrated_mean_bound(f: ScalarFn, seg: InvexSegment, q: float, xs: Optional[Sequence[float]] = None,
                                verify: bool = True, plan: SamplingPlan = DEFAULT_PLAN) -> IntegratedMeanReport:
    """Mean of |f'|^q over the segment against the endpoint average, plus the partial-range forms.

    The partial checks compare int_a^x |f'|^q / eta with u (|f'(a)|^q + |f'(x)|^q) / 2
    and int_x^{a+eta} |f'|^q / eta with v (|f'(a+eta)|^q + |f'(x)|^q) / 2 at
    each x (33 evenly spaced points by default).  Tolerances are quadrature
    error estimates plus 1e-9.
    """
    if not q >= 1:
        raise InvalidInput(f"q must be >= 1, got {q}")
    if verify:
        require_condition_c(seg.eta, plan)
        require_derivative_preinvex(f, seg, q, plan)
    eta = seg.eta_ab

    def g(t):
        return np.abs(_as_array(f.deriv, t)) ** q

    da, dc = _absd(f, seg.a) ** q, _absd(f, seg.hi) ** q
    full = integrate(g, seg.lo, seg.hi, KINK_TOL * eta, strict=True)
    checks = [IntegratedMeanCheck("mean", None, full.value / eta, (da + dc) / 2.0, full.err_estimate / eta + TOL_ABS)]
    for x in (seg.grid(33) if xs is None else xs):
        u, v = _check_x(seg, x)
        dx = _absd(f, x) ** q
        left = integrate(g, seg.lo, x, KINK_TOL * eta, strict=True)
        right = integrate(g, x, seg.hi, KINK_TOL * eta, strict=True)
        checks.append(IntegratedMeanCheck("left", float(x), left.value / eta, u * (da + dx) / 2.0,
                                          left.err_estimate / eta + TOL_ABS))
        checks.append(IntegratedMeanCheck("right", float(x), right.value / eta, v * (dc + dx) / 2.0,
                                          right.err_estimate / eta + TOL_ABS))
    return IntegratedMeanReport(q, checks)
