#!/usr/bin/env python3
"""Lower bound as a function of the k budget, for every polytope in instances/.

Prints one row per (instance, budget) with the lower bound, the volume upper
bound and the wall time, optionally as CSV.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from pathlib import Path

from jetbound import formats
from jetbound.bounds import Weights, multipoint_seshadri_lower, seshadri_lower_bound

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-budget", type=int, default=5)
    ap.add_argument("--weights", default="1", help="comma-separated weights (several points when > 1)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv", action="store_true")
    args = ap.parse_args()
    w = Weights.of(args.weights.split(","))

    rows = []
    for path in sorted(INSTANCES.glob("*.json")):
        spec = formats.load(str(path))
        if spec.kind != "polytope":
            continue
        for budget in range(1, args.max_budget + 1):
            t0 = time.perf_counter()
            if len(w) == 1 and w.values[0] == 1:
                res = seshadri_lower_bound(spec.obj, budget, seed=args.seed)
            else:
                res = multipoint_seshadri_lower(spec.obj, w, budget, seed=args.seed)
            rows.append((path.stem, budget, str(res.lower), str(res.upper), f"{time.perf_counter() - t0:.3f}"))

    header = ("instance", "budget", "lower", "upper", "seconds")
    if args.csv:
        out = csv.writer(sys.stdout)
        out.writerow(header)
        out.writerows(rows)
    else:
        widths = [max(len(str(r[i])) for r in rows + [header]) for i in range(len(header))]
        for r in [header] + rows:
            print("  ".join(str(x).ljust(wd) for x, wd in zip(r, widths)))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
