"""Error of the truncated exponential expansion against the truncation index.

For an even p and even w, prints |S - sum_{j<=t} E_0 terms| and the term
size at t, marking our optimal index.  Useful for seeing how flat the minimum
is and why neighbouring indices give comparable errors.

    python scripts/truncation_scan.py --p 4 --w 4 --a 0.05
"""

import argparse

from ejasym.coeffgen import expansion_coefficients
from ejasym.expansions import algebraic_part, least_term_index, term_size, theorem1_exponential
from ejasym.oracle import direct_sum
from ejasym.params import derive
from ejasym.precision import PrecisionCtx
from ejasym.tables import auto_digits


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--p", type=int, required=True)
    ap.add_argument("--w", type=int, required=True)
    ap.add_argument("--a", required=True)
    ap.add_argument("--extra", type=int, default=4, help="indices to show past the least term")
    args = ap.parse_args()

    ctx = PrecisionCtx(auto_digits(args.p, args.w, args.a))
    mp = ctx.mp
    d = derive(args.p, args.w, args.a, ctx)
    script_s = direct_sum(args.p, args.w, args.a, ctx).value - algebraic_part(args.p, args.w, args.a, ctx).algebraic_total
    jl = least_term_index(args.p, args.w, args.a, 0, ctx)
    top = jl + args.extra
    e0 = theorem1_exponential(args.p, args.w, args.a, top + 1, ctx)[0]
    coeffs = expansion_coefficients(d.p, d.w, top + 2).c
    acc = 0
    print(f"|S| = {mp.nstr(abs(script_s), 6)}  least term at j={jl}, optimal truncation {jl - 1}")
    for t in range(top + 1):
        acc += e0.terms[t].value
        mark = "  <- j0" if t == jl - 1 else ""
        print(f"t={t:3d}  |S-E0|={mp.nstr(abs(script_s - acc), 6):>14}  term={mp.nstr(term_size(d, coeffs, 0, t, ctx), 6):>14}{mark}")


if __name__ == "__main__":
    main()
