"""Built-in suite run by ``--suite paper``: bound sweeps plus the headline numerical checks."""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from typing import Callable, List

from ..bounds import (
    BoundId,
    ReductionId,
    check_integrated_mean_bound,
    check_subadditivity,
    thm22_bound,
    thm22_improved_bound,
    thm24_bound,
    thm24_condition_c_variant,
    verify_reduction,
)
from ..invex import InvexSegment, check_condition_c, check_preinvex, certify_derivative_preinvex
from ..quadrature import identity_residual
from ..registry import ETA_MAPS, FUNCTIONS
from ..sharpness import best_constant_search
from .config import ExperimentConfig

SMOOTH = ["identity", "square", "cube", "quartic_plus", "exp", "tent", "constant"]
ALL_BOUNDS = [b.value for b in BoundId]


def suite_configs() -> List[ExperimentConfig]:
    common = dict(functions=SMOOTH, q_values=[1.0, 1.5, 2.0, 3.0])
    return [
        ExperimentConfig(eta_maps=["trivial"], segments=[(0.0, 1.0), (1.0, 3.0), (-2.0, -0.5)],
                         bounds=["THM22_21", "THM22_2B"], x_resolution=129, name="thm22-trivial", **common),
        ExperimentConfig(eta_maps=["nonzero_reals"], segments=[(1.0, 3.0), (-3.0, -1.0)],
                         bounds=["THM22_21", "THM22_2B"], x_resolution=129, name="thm22-nonzero", **common),
        ExperimentConfig(eta_maps=["sign_split"], segments=[(1.0, -1.0), (0.0, 1.0)],
                         bounds=["THM22_21", "THM24"], x_resolution=129, name="sign-split", **common),
        ExperimentConfig(eta_maps=["trivial"], segments=[(0.0, 1.0), (1.0, 3.0)],
                         bounds=[b for b in ALL_BOUNDS if b not in ("THM22_21", "THM22_2B")],
                         x_resolution=33, name="all-trivial", **common),
        ExperimentConfig(eta_maps=["nonzero_reals"], segments=[(1.0, 3.0)],
                         bounds=["THM23_22", "THM23_COR_M", "THM23_COR_S1", "THM24", "THM24_REMARK_B", "THM24_COR_S2"],
                         x_resolution=33, name="all-nonzero", **common),
    ]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


IDENTITY_FUNCTIONS = ["identity", "square", "cube", "quartic_plus", "exp"]


def _identity_check() -> CheckResult:
    start = time.perf_counter()
    worst = 0.0
    for eta_label, (a, b) in (("trivial", (0.0, 1.0)), ("nonzero_reals", (1.0, 3.0))):
        seg = InvexSegment(ETA_MAPS[eta_label], a, b)
        for name in IDENTITY_FUNCTIONS:
            for x in seg.grid(33):
                worst = max(worst, identity_residual(FUNCTIONS[name], seg, float(x)).residual)
    elapsed = time.perf_counter() - start
    return CheckResult("identity residual", worst <= 1e-8 and elapsed < 5.0,
                       f"max residual {worst:.3g} (<= 1e-8), {elapsed:.2f}s (< 5s)")


def _sharpness_check() -> CheckResult:
    seg = InvexSegment(ETA_MAPS["trivial"], 0.0, 1.0)
    report = thm22_bound(FUNCTIONS["identity"], seg, 1.0)
    ratio = report.lhs / report.rhs
    best = best_constant_search(seg, [FUNCTIONS["identity"], FUNCTIONS["square"], FUNCTIONS["cube"]])
    ok = abs(ratio - 1.0) <= 1e-12 and abs(best.estimate - 1.0 / 6.0) <= 1e-12
    return CheckResult("sharpness of 1/6", ok,
                       f"ratio at x=b {ratio!r}, estimate {best.estimate!r}, attained by {', '.join(best.attaining)}")


def _reduction_check() -> CheckResult:
    reports = [verify_reduction(r) for r in ReductionId]
    worst = max(r.max_diff for r in reports)
    return CheckResult("reduction exactness", all(r.passed for r in reports),
                       f"max relative gap {worst:.3g} over {len(reports)} reductions")


def _dominance_check() -> CheckResult:
    worst = math.inf
    for eta_label, (a, b) in (("trivial", (0.0, 1.0)), ("trivial", (1.0, 3.0)), ("nonzero_reals", (1.0, 3.0)),
                              ("nonzero_reals", (-3.0, -1.0))):
        seg = InvexSegment(ETA_MAPS[eta_label], a, b)
        for name in SMOOTH:
            f = FUNCTIONS[name]
            for x in seg.grid(33):
                worst = min(worst, thm22_bound(f, seg, x).rhs - thm22_improved_bound(f, seg, x).rhs)
                for q in (1.0, 1.5, 2.0, 3.0):
                    if certify_derivative_preinvex(f, seg, q).refuted:
                        continue
                    worst = min(worst, thm24_bound(f, seg, x, q).rhs - thm24_condition_c_variant(f, seg, x, q).rhs)
    return CheckResult("dominance of condition-C variants", worst >= -1e-9, f"min rhs gap {worst:.3g}")


def _condition_c_check() -> CheckResult:
    triv = check_condition_c(ETA_MAPS["trivial"])
    nz = check_condition_c(ETA_MAPS["nonzero_reals"])
    dbl = check_condition_c(ETA_MAPS["doubled"])
    ok = triv.certified and nz.certified and dbl.refuted and dbl.witness is not None
    return CheckResult("condition C checker", ok,
                       f"trivial {triv.verdict.value}, nonzero_reals {nz.verdict.value}, doubled {dbl.verdict.value} at {dbl.witness}")


def _preinvex_check() -> CheckResult:
    neg_abs = check_preinvex(FUNCTIONS["neg_abs"], ETA_MAPS["sign_split"], (-2.0, 2.0))
    neg_sq = check_preinvex(FUNCTIONS["neg_square"], ETA_MAPS["trivial"], (0.0, 1.0))
    ok = neg_abs.certified and neg_sq.refuted and neg_sq.witness is not None
    return CheckResult("preinvexity checker", ok,
                       f"-|x| {neg_abs.verdict.value}, -x^2 {neg_sq.verdict.value} at {neg_sq.witness}")


def _intermediate_check() -> CheckResult:
    ok = True
    for eta_label, (a, b) in (("trivial", (0.0, 1.0)), ("trivial", (1.0, 3.0)), ("nonzero_reals", (1.0, 3.0))):
        seg = InvexSegment(ETA_MAPS[eta_label], a, b)
        for name in SMOOTH:
            for q in (1.0, 1.5, 2.0, 3.0):
                if certify_derivative_preinvex(FUNCTIONS[name], seg, q).refuted:
                    continue
                ok &= check_integrated_mean_bound(FUNCTIONS[name], seg, q).holds
    eq = check_integrated_mean_bound(FUNCTIONS["square"], InvexSegment(ETA_MAPS["trivial"], 0.0, 1.0), 1.0).full
    ok &= abs(eq.slack) <= 1e-9
    rng = random.Random(20240601)
    for s in (0.0, 0.25, 0.5, 0.75, 0.99):
        pairs = [(rng.uniform(0, 10), rng.uniform(0, 10)) for _ in range(1000)]
        ok &= check_subadditivity(pairs, s).holds
    return CheckResult("intermediate inequalities", ok, f"equality-case slack {eq.slack:.3g}")


SUITE_CHECKS: List[Callable[[], CheckResult]] = [
    _identity_check, _sharpness_check, _reduction_check, _dominance_check,
    _condition_c_check, _preinvex_check, _intermediate_check,
]


def suite_checks() -> List[CheckResult]:
    return [check() for check in SUITE_CHECKS]
