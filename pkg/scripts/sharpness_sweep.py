"""Plot-ready lhs/rhs ratio surfaces for every bound over a function family.

    python scripts/sharpness_sweep.py --out results/ratios.csv
"""
import argparse
import csv
import sys
from pathlib import Path

from ostrowski.bounds import BoundId, derivative_sup
from ostrowski.invex import InvexSegment, certify_derivative_preinvex
from ostrowski.registry import ETA_MAPS, FUNCTIONS
from ostrowski.sharpness import best_constant_search, ratio_sweep

FAMILY = ["identity", "square", "cube", "quartic_plus", "exp"]
QS = (1.0, 1.5, 2.0, 3.0)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("results/ratios.csv"))
    parser.add_argument("--a", type=float, default=0.0)
    parser.add_argument("--b", type=float, default=1.0)
    parser.add_argument("--eta", default="trivial", choices=sorted(ETA_MAPS))
    args = parser.parse_args(argv)
    args.out.parent.mkdir(parents=True, exist_ok=True)

    seg = InvexSegment(ETA_MAPS[args.eta], args.a, args.b)
    rows = []
    worst = 0.0
    for name in FAMILY:
        f = FUNCTIONS[name]
        M, _ = derivative_sup(f, seg)
        for bound in BoundId:
            threshold, strict = bound.min_q
            qs = [q for q in QS if (q > threshold if strict else q >= threshold)] if bound.uses_q else [1.0]
            qs = [q for q in qs if certify_derivative_preinvex(f, seg, q).certified]
            if not qs:
                continue
            try:
                surface = ratio_sweep(f, seg, bound, q_grid=qs if bound.uses_q else (None,), M=M, refine=False)
            except ValueError as exc:
                print(f"skip {name} {bound.value}: {exc}", file=sys.stderr)
                continue
            for s in surface.samples:
                rows.append([name, bound.value, repr(s.x), "" if s.q is None else repr(s.q), repr(s.ratio)])
                worst = max(worst, s.ratio)

    rows.sort()
    with args.out.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["function", "bound_id", "x", "q", "ratio"])
        writer.writerows(rows)

    best = best_constant_search(seg, [FUNCTIONS[n] for n in FAMILY])
    print(f"{len(rows)} ratio samples, largest ratio {worst!r}")
    print(f"best constant for the 1/6 bound: {best.estimate!r} (attained by {', '.join(best.attaining)})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
