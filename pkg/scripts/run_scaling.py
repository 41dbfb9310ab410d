#!/usr/bin/env python3
"""Time the minimizer across graph sizes and fit the runtime exponent.

Example:
    python scripts/run_scaling.py --sizes 125,1250,12500,125000 --repeats 3 \
        --out scaling_report.json
"""

import argparse
import json
import sys
from pathlib import Path

from structree import scaling_run


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", default="uniform-random")
    ap.add_argument("--sizes", default="125,395,1250,3950,12500,39500,125000",
                    help="comma-separated vertex counts (ascending)")
    ap.add_argument("--height", type=int, default=2)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--param", type=float, default=None,
                    help="family parameter; default keeps average degree 16")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, default=None, help="write JSON here")
    args = ap.parse_args()

    report = scaling_run(
        family=args.family,
        sizes=[int(s) for s in args.sizes.split(",") if s],
        k=args.height,
        repeats=args.repeats,
        parameter=args.param,
        seed=args.seed,
    )
    payload = {"rows": report.rows, "fit_exponent": report.fit_exponent}
    text = json.dumps(payload, indent=2)
    if args.out:
        args.out.write_text(text)
    print(text)
    for row in report.rows:
        print(f"  m={row['m']:>9,}  total={row['total_ms']:10.1f} ms  "
              f"stage1={row['stage1_ms']:10.1f}  stage2={row['stage2_ms']:9.1f}  "
              f"h_max={row['h_max']}", file=sys.stderr)
    if report.fit_exponent is not None:
        print(f"  log-log fit exponent: {report.fit_exponent:.3f}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
