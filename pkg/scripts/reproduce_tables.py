"""Recompute the reference grids and print them next to the printed values.

    python scripts/reproduce_tables.py --id 2
    python scripts/reproduce_tables.py --id 3 --neighbours
"""

import argparse
import time

from ejasym import tables


def _mark(ok: bool) -> str:
    return "ok" if ok else "XX"


def show_table1():
    ours = tables.table1_values(8)
    for pw, printed in tables.TABLE1.items():
        print(f"p={pw[0]} w={pw[1]}")
        for j, (val, ref) in enumerate(zip(ours[pw], printed), start=1):
            mine = tables.format_xy(tables._frac_to_decimal(val), 7)
            ok = tables.sig_match(tables._frac_to_decimal(val), tables.parse_xy(ref), 7)
            print(f"  j={j}  ours {mine:>14}  ref {ref:>14}  {_mark(ok)}")


def _cmp(label, value, ref, neighbours=None):
    if ref is None:
        return f"{label}: ours {tables.format_xy(value, 4, 2)} ref -"
    line = f"{label}: ours {tables.format_xy(value, 4, 2)} ref {ref} {_mark(value is not None and tables.sig_match(value, tables.parse_xy(ref), 3))}"
    if neighbours:
        alts = ", ".join(f"{t}:{tables.format_xy(v, 4, 2)}" for t, v in sorted(neighbours.items()))
        line += f"  [{alts}]"
    return line


def show_rows(table_id: int, neighbours: bool):
    t0 = time.monotonic()
    rows = tables.table_rows(table_id)
    refs = list(tables.TABLE2.values()) if table_id == 2 else list(tables.TABLE3.values())
    for row, ref in zip(rows, refs):
        print(f"p={row.p} w={row.w} a={row.a} digits={row.digits}")
        if row.error:
            print(f"  {row.error}")
            continue
        print("  " + _cmp("|S|", row.abs_S, ref[0]))
        print("  " + _cmp("|S-E0|", row.abs_S_minus_E0, ref[1], row.S_minus_E0_at if neighbours else None))
        print(f"  j0: ours {row.j0} ref {ref[2]}")
        if table_id == 3:
            e01 = None if row.E1_dropped else row.abs_S_minus_E01
            print("  " + _cmp("|S-E01|", e01, ref[3], row.S_minus_E01_at if neighbours else None))
            print("  " + _cmp("Min|E0|", row.min_E0, ref[4], row.min_E0_at if neighbours else None))
            print("  " + _cmp("E1(j=0)", row.E1_j0, ref[5]))
    print(f"{time.monotonic() - t0:.1f}s")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--id", type=int, choices=(1, 2, 3), required=True)
    ap.add_argument("--neighbours", action="store_true", help="also show values at the adjacent truncation indices")
    args = ap.parse_args()
    if args.id == 1:
        show_table1()
    else:
        show_rows(args.id, args.neighbours)


if __name__ == "__main__":
    main()
