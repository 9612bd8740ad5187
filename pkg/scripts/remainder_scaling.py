"""Measure how the algebraic remainder shrinks as a is halved.

Prints |S - algebraic part| for a = a_max, a_max/2, ... and the local exponent
log2(err_i / err_{i+1}).

    python scripts/remainder_scaling.py --p 3 --w 2
    python scripts/remainder_scaling.py --p 5/2 --w 1 --offset 1
"""

import argparse
import math
from fractions import Fraction

from ejasym.expansions import algebraic_part, default_cutoff
from ejasym.oracle import direct_sum
from ejasym.precision import PrecisionCtx


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--p", type=Fraction, required=True)
    ap.add_argument("--w", type=Fraction, required=True)
    ap.add_argument("--a-max", type=Fraction, default=Fraction(1, 100))
    ap.add_argument("--a-min", type=Fraction, default=Fraction(1, 10**4))
    ap.add_argument("--offset", type=int, default=0, help="extra terms beyond the default cutoff")
    ap.add_argument("--digits", type=int, default=40)
    args = ap.parse_args()

    ctx = PrecisionCtx(args.digits)
    N = default_cutoff(args.p, args.w, args.offset)
    print(f"p={args.p} w={args.w} N={N} nominal exponent {N - 0.5}")
    prev = None
    a = args.a_max
    while a >= args.a_min:
        res = algebraic_part(args.p, args.w, a, ctx, offset=args.offset)
        err = abs(direct_sum(args.p, args.w, a, ctx).value - res.algebraic_total)
        slope = "" if prev is None or err == 0 else f"  exponent {math.log2(float(prev / err)):.3f}"
        print(f"a={float(a):.6e}  err={ctx.mp.nstr(err, 6)}  est={ctx.mp.nstr(res.remainder_estimate, 6)}{slope}")
        prev = err
        a /= 2


if __name__ == "__main__":
    main()
