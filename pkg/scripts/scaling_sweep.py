#!/usr/bin/env python3
"""Sweep the space-time construction over (d, N, eps) and record measured
parameter counts against the a priori bound, plus the N-scaling slope.

Equivalent to `anncalc report --sweep thm1` with an extra slope summary;
the CSV is plot-ready (one row per configuration).
"""

import argparse
import sys

import numpy as np

from anncalc import EulerSpec, identity_net, param_count, spacetime_net
from anncalc.euler import scaling_bounds


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--d", default="1,2")
    parser.add_argument("--N", default="1,2,4,8")
    parser.add_argument("--eps", default="1e-1,1e-2")
    parser.add_argument("--T", type=float, default=1.0)
    parser.add_argument("--size-exp", type=float, default=2.0)
    parser.add_argument("-o", "--output", default=None)
    args = parser.parse_args()

    ds = [int(v) for v in args.d.split(",")]
    Ns = [int(v) for v in args.N.split(",")]
    epss = [float(v) for v in args.eps.split(",")]

    rows = ["d,N,eps,measured_params,param_bound"]
    slopes = []
    for d in ds:
        drift = identity_net(d)
        growth_c = max(1.0, param_count(drift) / float(d) ** args.size_exp)
        for eps in epss:
            counts = []
            for N in Ns:
                spec = EulerSpec(drift, args.T, N, tuple(np.zeros((N, d))), eps, 3.0)
                measured = param_count(spacetime_net(spec))
                bound = scaling_bounds(growth_c, args.size_exp, args.T, d, N, eps)["params"]
                counts.append(measured)
                rows.append(f"{d},{N},{eps!r},{measured},{bound!r}")
            if len(Ns) > 1:
                slope = float(np.polyfit(np.log(Ns), np.log(counts), 1)[0])
                slopes.append((d, eps, slope))
    text = "\n".join(rows) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for d, eps, slope in slopes:
        print(f"# d={d} eps={eps:g}: log-log slope of params in N = {slope:.3f}",
              file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
