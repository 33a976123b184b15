#!/usr/bin/env python3
"""Ratio trend experiment: S_ell(x) against x (log x)^eps M(x) tau(|ell|)
across a sweep of x, for an eigenform weight or a closed-form function.

Example:
    python scripts/trend_report.py --weight 12 --ell 1 --epsilon 0.1 \
        --x 1e4,1e5,1e6 --out trend.csv
"""

import argparse
import sys
import time

from shiftsieve import qexpansion, shifted


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--weight", type=int, default=None)
    parser.add_argument("--function", type=str, default=None)
    parser.add_argument("--ell", type=int, default=1)
    parser.add_argument("--epsilon", type=float, default=0.1)
    parser.add_argument("--x", type=str, default="1e4,1e5,1e6")
    parser.add_argument("--out", type=str, default=None)
    args = parser.parse_args()

    xs = sorted(int(float(v)) for v in args.x.split(","))
    limit = xs[-1] + abs(args.ell)
    t0 = time.time()
    if args.weight is not None:
        form = qexpansion.eigenform(args.weight, limit)
        handle = shifted.eigenform_handle(form)
    elif args.function == "one":
        handle = shifted.unit_handle(limit)
    else:
        m = int((args.function or "tau2")[3:])
        handle = shifted.tau_handle(m, limit)
    print(f"# coefficient table ({handle.name}) to {limit}: {time.time()-t0:.1f}s")

    lines = [",".join(shifted.report_csv_header())]
    for x in xs:
        t0 = time.time()
        rep = shifted.theorem2_report(handle, handle, x, args.epsilon, args.ell)
        lines.append(",".join(shifted.report_csv_row(rep)))
        print(
            f"x={x:>9}: S={rep.s_total:.6g}  M(x)={rep.m_of_x:.6g}  "
            f"rhs={rep.rhs:.6g}  ratio={rep.ratio:.6g}  ({time.time()-t0:.1f}s)"
        )
    if args.out:
        with open(args.out, "w", newline="") as handle_out:
            handle_out.write("\n".join(lines) + "\n")
        print(f"# wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
