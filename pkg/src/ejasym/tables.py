"""Reference grids and their recomputation.

Reference values are stored as the printed x(y) strings.  Row functions
return the recomputed quantities at our optimal truncation index and at the
two neighbouring indices, since "at or near the least term" leaves the
printed index uncertain by one.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction

from .coeffgen import expansion_coefficients
from .expansions import algebraic_part, least_term_index, term_size, theorem1_exponential
from .errors import BudgetError
from .oracle import direct_sum
from .params import derive
from .precision import PrecisionCtx

# -- reference data -------------------------------------------------------------

TABLE1_COLUMNS = ((4, 2), (4, 4), (6, 2), (6, 4))

TABLE1 = {
    (4, 2): ("1.395833(0)", "3.495009(0)", "1.230179(1)", "5.555372(1)",
             "3.060544(2)", "1.990604(3)", "1.493190(4)", "1.269216(5)"),
    (4, 4): ("3.645833(0)", "1.648980(1)", "9.075366(1)", "5.899040(2)",
             "4.424055(3)", "3.760330(4)", "3.572267(5)", "3.750863(6)"),
    (6, 2): ("1.472222(0)", "3.861497(0)", "1.380091(1)", "6.207979(1)",
             "3.387328(2)", "2.188492(3)", "1.639364(4)", "1.396172(5)"),
    (6, 4): ("3.305556(0)", "1.469946(1)", "8.081628(1)", "5.260968(2)",
             "3.949570(3)", "3.358058(4)", "3.189927(5)", "3.348999(6)"),
}

# (p, w, a) -> (|S|, |S - E_0|, j0)
TABLE2 = {
    (2, 2, "1.00"): ("8.146(-06)", "6.637(-09)", 8),
    (2, 2, "0.75"): ("2.031(-07)", "8.089(-12)", 11),
    (2, 2, "0.50"): ("1.584(-10)", "1.260(-17)", 18),
    (2, 2, "0.20"): ("5.774(-24)", "1.542(-43)", 47),
    (2, 2, "0.10"): ("7.667(-46)", "1.486(-86)", 97),
    (2, 4, "1.00"): ("6.252(-07)", "3.642(-08)", 6),
    (2, 4, "0.75"): ("9.296(-09)", "4.659(-11)", 9),
    (2, 4, "0.50"): ("3.437(-12)", "7.635(-17)", 16),
    (2, 4, "0.20"): ("2.189(-26)", "9.830(-43)", 45),
    (2, 4, "0.10"): ("7.506(-49)", "9.631(-86)", 95),
    (4, 2, "0.200"): ("3.473(-03)", "1.329(-06)", 7),
    (4, 2, "0.100"): ("4.863(-04)", "2.749(-08)", 11),
    (4, 2, "0.050"): ("2.737(-05)", "2.156(-10)", 14),
    (4, 2, "0.010"): ("4.221(-09)", "4.621(-17)", 23),
    (4, 2, "0.001"): ("1.064(-14)", "1.033(-36)", 53),
    (4, 4, "0.200"): ("3.919(-04)", "8.742(-06)", 6),
    (4, 4, "0.100"): ("4.805(-05)", "4.879(-07)", 8),
    (4, 4, "0.050"): ("8.456(-06)", "1.420(-09)", 11),
    (4, 4, "0.010"): ("7.982(-09)", "3.041(-16)", 21),
    (4, 4, "0.001"): ("1.876(-16)", "6.799(-36)", 51),
}

# a -> (|S|, |S - E_0|, j0, |S - E_01| or None, Min|E_0|, E_1(j=0)), p = 6, w = 2
TABLE3 = {
    "1e-1": ("2.935(-02)", "3.780(-05)", 6, None, "9.422(-05)", "5.095(-05)"),
    "5e-2": ("1.617(-03)", "3.037(-05)", 8, "1.200(-05)", "1.729(-05)", "1.191(-05)"),
    "1e-2": ("9.512(-04)", "1.193(-07)", 12, "5.339(-08)", "1.228(-07)", "1.904(-07)"),
    "5e-3": ("1.292(-03)", "1.099(-08)", 13, "8.713(-09)", "9.090(-09)", "2.148(-08)"),
    "1e-3": ("1.604(-04)", "3.452(-11)", 19, "3.483(-12)", "3.757(-12)", "4.053(-11)"),
    "1e-4": ("9.894(-07)", "8.801(-17)", 31, "2.230(-19)", "3.024(-19)", "9.201(-17)"),
    "1e-5": ("6.209(-10)", "1.522(-25)", 51, "1.963(-30)", "1.964(-30)", "1.564(-25)"),
}

# -- x(y) notation ----------------------------------------------------------------


def format_xy(x, sig: int, pad: int = 0) -> str:
    """Round to ``sig`` significant figures and write mantissa(exponent).

    ``pad`` zero-pads the exponent digits: pad=2 gives 8.146(-06), pad=0 gives
    1.395833(0).
    """
    if x is None:
        return "-"
    d = Decimal(str(x)) if not isinstance(x, Decimal) else x
    if d == 0:
        return f"{0:.{sig - 1}f}(0)"
    with localcontext() as lc:
        lc.rounding = ROUND_HALF_EVEN
        text = format(d, f".{sig - 1}e")
    mant, exp = text.split("e")
    e = int(exp)
    sign = "-" if e < 0 else ""
    return f"{mant}({sign}{abs(e):0{pad}d})"


def parse_xy(text: str) -> Decimal | None:
    text = text.strip()
    if text in ("-", ""):
        return None
    mant, rest = text.split("(")
    return Decimal(mant) * Decimal(10) ** int(rest.rstrip(")"))


def sig_match(value, reference, sig: int) -> bool:
    """|value - ref| <= 5 * 10^-sig * |ref| (agreement to ``sig`` figures)."""
    ref = Decimal(reference) if not isinstance(reference, Decimal) else reference
    val = Decimal(str(value))
    return abs(val - ref) <= Decimal(5) * Decimal(10) ** (-sig) * abs(ref)


# -- precision -------------------------------------------------------------------


def auto_digits(p, w, a, floor: int = 30) -> int:
    """Working digits for a table row.

    The optimally truncated error is roughly exp(-2 X); we take
    1.3 |log10 exp(-2X)| + 20 digits.
    """
    d = derive(p, w, a, PrecisionCtx(20))
    expected = 2 * float(abs(d.X)) / math.log(10)
    return max(floor, math.ceil(1.3 * expected) + 20)


# -- rows ---------------------------------------------------------------------------


def _cum(values):
    out, acc = [], 0
    for v in values:
        acc = acc + v
        out.append(acc)
    return out


@dataclass
class Row:
    """Recomputed quantities for one table row; values are Decimal magnitudes."""

    p: int
    w: int
    a: str
    digits: int | None = None
    abs_S: Decimal | None = None
    j0: int | None = None
    abs_S_minus_E0: Decimal | None = None
    # truncation index t -> |S - sum_{j<=t} E_0 terms|
    S_minus_E0_at: dict[int, Decimal] = field(default_factory=dict)
    abs_S_minus_E01: Decimal | None = None
    S_minus_E01_at: dict[int, Decimal] = field(default_factory=dict)
    min_E0: Decimal | None = None
    min_E0_at: dict[int, Decimal] = field(default_factory=dict)
    E1_j0: Decimal | None = None
    E1_dropped: bool = False
    error: str | None = None


def _dec(x, ctx, digits=25) -> Decimal:
    return Decimal(ctx.mp.nstr(x, digits, min_fixed=1, max_fixed=0))


def compute_row(p: int, w: int, a: str, digits: int | None = None) -> Row:
    """|S|, |S - E_0| and (when a second expansion exists) the E_{0,1} columns."""
    digits = digits or auto_digits(p, w, a)
    ctx = PrecisionCtx(digits)
    oracle = direct_sum(p, w, a, ctx).value
    alg = algebraic_part(p, w, a, ctx).algebraic_total
    script_s = oracle - alg
    d = derive(p, w, a, ctx)
    jl = least_term_index(p, w, a, 0, ctx)
    j0 = max(jl - 1, 0)
    top = j0 + 2  # terms 0..j0+1
    parts = theorem1_exponential(p, w, a, top, ctx)
    cum0 = _cum([t.value for t in parts[0].terms])
    at0 = {t: _dec(abs(script_s - cum0[t]), ctx) for t in range(max(j0 - 1, 0), j0 + 2)}
    row = Row(
        p=p, w=w, a=a, digits=digits,
        abs_S=_dec(abs(script_s), ctx),
        j0=j0,
        abs_S_minus_E0=at0[j0],
        S_minus_E0_at=at0,
    )
    coeffs = expansion_coefficients(d.p, d.w, jl + 3).c
    row.min_E0_at = {j: _dec(term_size(d, coeffs, 0, j, ctx), ctx) for j in (jl - 1, jl, jl + 1)}
    row.min_E0 = row.min_E0_at[jl]
    if len(parts) > 1:
        cum1 = _cum([t.value for t in parts[1].terms])
        row.E1_j0 = _dec(parts[1].terms[0].magnitude, ctx)
        row.E1_dropped = parts[1].terms[0].magnitude < term_size(d, coeffs, 0, jl, ctx)
        row.S_minus_E01_at = {
            t: _dec(abs(script_s - cum0[t] - cum1[t]), ctx) for t in range(max(j0 - 1, 0), j0 + 2)
        }
        row.abs_S_minus_E01 = None if row.E1_dropped else row.S_minus_E01_at[j0]
    return row


def _a_from_table3(key: str) -> str:
    return format(Decimal(key), "f")


def table_rows(table_id: int, max_workers: int | None = None) -> list[Row]:
    if table_id == 2:
        jobs = [(p, w, a) for (p, w, a) in TABLE2]
    elif table_id == 3:
        jobs = [(6, 2, _a_from_table3(k)) for k in TABLE3]
    else:
        raise ValueError("rows are defined for tables 2 and 3")
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(lambda job: _guarded_row(*job), jobs))


def _guarded_row(p, w, a) -> Row:
    try:
        return compute_row(p, w, a)
    except BudgetError as exc:
        return Row(p=p, w=w, a=a, error=f"budget: {exc}")


def table1_values(count: int = 8) -> dict[tuple[int, int], list[Fraction]]:
    return {pw: list(expansion_coefficients(*pw, count + 1).c[1:]) for pw in TABLE1_COLUMNS}


# -- rendering --------------------------------------------------------------------

TABLE1_HEADER = ("j", "p4_w2", "p4_w4", "p6_w2", "p6_w4")
TABLE2_HEADER = ("p", "w", "a", "abs_S", "abs_S_minus_E0", "j0")
TABLE3_HEADER = ("a", "abs_S", "abs_S_minus_E0", "j0", "abs_S_minus_E01", "min_E0", "E1_j0")


def _frac_to_decimal(x: Fraction, digits: int = 30) -> Decimal:
    with localcontext() as lc:
        lc.prec = digits
        return Decimal(x.numerator) / Decimal(x.denominator)


def table1_cells(count: int = 8) -> list[tuple[str, ...]]:
    vals = table1_values(count)
    out = []
    for j in range(count):
        out.append((str(j + 1),) + tuple(format_xy(_frac_to_decimal(vals[pw][j]), 7) for pw in TABLE1_COLUMNS))
    return out


BUDGET_CELL = "budget"


def _cell(x) -> str:
    return format_xy(x, 4, 2)


def table2_cells(rows: list[Row]) -> list[tuple[str, ...]]:
    out = []
    for r in rows:
        if r.error:
            out.append((str(r.p), str(r.w), str(r.a), BUDGET_CELL, BUDGET_CELL, "-"))
        else:
            out.append((str(r.p), str(r.w), str(r.a), _cell(r.abs_S), _cell(r.abs_S_minus_E0), str(r.j0)))
    return out


def table3_cells(rows: list[Row]) -> list[tuple[str, ...]]:
    out = []
    for r in rows:
        if r.error:
            out.append((str(r.a),) + (BUDGET_CELL,) * 2 + ("-",) + (BUDGET_CELL,) * 3)
            continue
        out.append(
            (
                str(r.a),
                _cell(r.abs_S),
                _cell(r.abs_S_minus_E0),
                str(r.j0),
                _cell(r.abs_S_minus_E01),
                _cell(r.min_E0),
                _cell(r.E1_j0),
            )
        )
    return out


HEADERS = {1: TABLE1_HEADER, 2: TABLE2_HEADER, 3: TABLE3_HEADER}


def render_csv(header, cells) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(cells)
    return buf.getvalue()


def parse_csv(text: str) -> tuple[tuple[str, ...], list[tuple[str, ...]]]:
    rows = [tuple(r) for r in csv.reader(io.StringIO(text))]
    return rows[0], rows[1:]


def render_markdown(header, cells) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(row) + " |" for row in cells]
    return "\n".join(lines) + "\n"


def rows_from_cells(table_id: int, cells) -> list[Row]:
    """Inverse of table2_cells / table3_cells (values at printed precision)."""
    out = []
    for c in cells:
        if table_id == 2:
            p, w, a, s, s0, j0 = c
            row = Row(p=int(p), w=int(w), a=a)
            values = {"abs_S": s, "abs_S_minus_E0": s0}
        else:
            a, s, s0, j0, s01, m0, e1 = c
            row = Row(p=6, w=2, a=a)
            values = {"abs_S": s, "abs_S_minus_E0": s0, "abs_S_minus_E01": s01, "min_E0": m0, "E1_j0": e1}
        if BUDGET_CELL in values.values():
            row.error = BUDGET_CELL
        else:
            for name, text in values.items():
                setattr(row, name, parse_xy(text))
            row.j0 = int(j0)
        out.append(row)
    return out
