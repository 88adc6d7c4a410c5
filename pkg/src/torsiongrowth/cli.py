"""Command-line front end: parse fields, curves and field elements, run the
torsion and growth computations, reproduce the published example tables, and
emit JSON/CSV/text reports.

Element grammar: integer literals, + - * /, parentheses, `s` for sqrt(D)
(alias `i` when D = -1); whitespace is insignificant.  Rational literals
like 3/2 parse through the division operator.

Exit codes: 0 success, 1 table row mismatch, 2 parse error, 3 singular
curve.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from gmpy2 import mpq

from .curves import SingularCurveError, WeierstrassCurve, curve_from_long
from .fields import (
    QI,
    QSQRT_MINUS3,
    QuadElem,
    QuadField,
    RelQuadElem,
    same_square_class,
)
from .growth import growth_extensions
from .torsion import TorsionGroup, group_from_pair, torsion_over_quad


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


def parse_field(tag: str) -> QuadField:
    if tag == "Qi":
        return QI
    if tag.startswith("Qsqrt"):
        try:
            D = int(tag[5:])
        except ValueError:
            raise ParseError(f"bad field tag {tag!r}", 0) from None
        if D == -1:
            return QI
        if D == -3:
            return QSQRT_MINUS3
        return QuadField(D)
    raise ParseError(f"unknown field tag {tag!r}", 0)


def field_tag(K: QuadField) -> str:
    return "Qi" if K.D == -1 else f"Qsqrt{K.D}"


class _ElementParser:
    def __init__(self, text: str, field: QuadField):
        self.text = text
        self.field = field
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self):
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> QuadElem:
        value = self._expr()
        self._skip_ws()
        if self.pos != len(self.text):
            raise ParseError("trailing input", self.pos)
        return value

    def _expr(self) -> QuadElem:
        value = self._term()
        while True:
            c = self._peek()
            if c == "+":
                self.pos += 1
                value = value + self._term()
            elif c == "-":
                self.pos += 1
                value = value - self._term()
            else:
                return value

    def _term(self) -> QuadElem:
        value = self._factor()
        while True:
            c = self._peek()
            if c == "*":
                self.pos += 1
                value = value * self._factor()
            elif c == "/":
                self.pos += 1
                den = self._factor()
                if den.is_zero():
                    raise ParseError("division by zero", self.pos)
                value = value / den
            else:
                return value

    def _factor(self) -> QuadElem:
        c = self._peek()
        if c == "-":
            self.pos += 1
            return -self._factor()
        if c == "+":
            self.pos += 1
            return self._factor()
        return self._atom()

    def _atom(self) -> QuadElem:
        c = self._peek()
        if c == "(":
            self.pos += 1
            value = self._expr()
            if self._peek() != ")":
                raise ParseError("expected ')'", self.pos)
            self.pos += 1
            return value
        if c == "s":
            self.pos += 1
            return self.field.gen()
        if c == "i":
            if self.field.D != -1:
                raise ParseError("'i' is only available over Qi", self.pos)
            self.pos += 1
            return self.field.gen()
        if c.isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            return self.field.elem(int(self.text[start : self.pos]))
        raise ParseError(f"unexpected character {c!r}", self.pos)


def parse_element(text: str, field: QuadField) -> QuadElem:
    """Exact element of K from the expression grammar."""
    return _ElementParser(text, field).parse()


def _rat_str(q: mpq) -> str:
    return str(q)


def render_element(x: QuadElem) -> str:
    """Expression string; parse_element(render_element(x)) == x."""
    sym = "i" if x.field.D == -1 else "s"
    if x.b == 0:
        return _rat_str(x.a)
    bpart = f"{_rat_str(abs(x.b))}*{sym}" if abs(x.b) != 1 else sym
    bsigned = f"-{bpart}" if x.b < 0 else bpart
    if x.a == 0:
        return bsigned
    sign = "-" if x.b < 0 else "+"
    return f"{_rat_str(x.a)}{sign}{bpart}"


def render_rel_element(x: RelQuadElem) -> str:
    """Coordinates over L = K(sqrt(d)); `w` stands for sqrt(d)."""
    if x.beta.is_zero():
        return render_element(x.alpha)
    return f"({render_element(x.alpha)})+({render_element(x.beta)})*w"


def _render_coord(v) -> str:
    if isinstance(v, RelQuadElem):
        return render_rel_element(v)
    if isinstance(v, QuadElem):
        return render_element(v)
    return _rat_str(v)


def parse_curve(text: str, field: QuadField) -> WeierstrassCurve:
    """Curve from "[a1,a2,a3,a4,a6]" or "[a,b]"; entries are element
    expressions."""
    t = text.strip()
    if t.startswith("[") and t.endswith("]"):
        t = t[1:-1]
    parts = []
    depth = 0
    cur = ""
    for ch in t:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        parts.append(cur)
    if len(parts) not in (2, 5):
        raise ParseError("expected 2 or 5 comma-separated coefficients", 0)
    coeffs = [parse_element(p, field) for p in parts]
    return curve_from_long(field, coeffs)


def parse_group(label: str) -> TorsionGroup:
    """ "C8" or "C2xC8" to invariant factors."""
    parts = label.strip().split("x")
    try:
        if all(p.startswith("C") for p in parts):
            if len(parts) == 1:
                return group_from_pair(1, int(parts[0][1:]))
            if len(parts) == 2:
                return group_from_pair(int(parts[0][1:]), int(parts[1][1:]))
    except (ValueError, IndexError):
        pass
    raise ParseError(f"bad group label {label!r}", 0)


# ---------------------------------------------------------------------------
# Reports.
# ---------------------------------------------------------------------------


def torsion_report(K: QuadField, E: WeierstrassCurve) -> dict:
    T = torsion_over_quad(E)
    return {
        "field": field_tag(K),
        "curve": [render_element(c) for c in E.a_invariants()],
        "torsion": {
            "invariants": list(T.invariants),
            "order": T.order,
            "generators": [
                [_render_coord(P.x), _render_coord(P.y)] for P in T.generators
            ],
        },
        "growths": [],
    }


def growth_report(K: QuadField, E: WeierstrassCurve) -> dict:
    report = torsion_report(K, E)
    records = growth_extensions(E)
    report["growths"] = [
        {
            "d": render_element(rec.d),
            "d_class": render_element(rec.d),
            "group": rec.group.label(),
            "provenance": list(rec.provenance),
        }
        for rec in records
    ]
    return report


def _emit_report(report: dict, fmt: str):
    if fmt == "json":
        print(json.dumps(report, indent=2))
        return
    if fmt == "csv":
        print("field,curve,base_group,d_class,group,provenance")
        curve = " ".join(report["curve"])
        base = _label_from_invariants(report["torsion"]["invariants"])
        for g in report["growths"]:
            prov = ";".join(g["provenance"])
            print(f"{report['field']},[{curve}],{base},{g['d_class']},"
                  f"{g['group']},{prov}")
        return
    base = _label_from_invariants(report["torsion"]["invariants"])
    print(f"field    : {report['field']}")
    print(f"curve    : [{', '.join(report['curve'])}]")
    print(f"E(K)_tor : {base} (order {report['torsion']['order']})")
    for P in report["torsion"]["generators"]:
        print(f"  generator: ({P[0]}, {P[1]})")
    if report["growths"]:
        print("growth   :")
        for g in report["growths"]:
            print(f"  d = {g['d_class']:<24} E(L)_tor = {g['group']:<8} "
                  f"[{', '.join(g['provenance'])}]")
    else:
        print("growth   : none")


def _label_from_invariants(inv) -> str:
    return TorsionGroup((inv[0], inv[1])).label()


# ---------------------------------------------------------------------------
# Table reproduction.
# ---------------------------------------------------------------------------


@dataclass
class RowResult:
    index: int
    ok: bool
    message: str


def _curve_key(field_tag_str: str, model) -> tuple:
    return (field_tag_str, tuple(str(c) for c in model))


def _compute_curve_summary(args) -> tuple:
    """Worker: torsion and growth for one curve; returns rendered data."""
    tag, model = args
    K = parse_field(tag)
    coeffs = [parse_element(str(c), K) for c in model]
    E = curve_from_long(K, coeffs)
    T = torsion_over_quad(E)
    records = growth_extensions(E)
    return (
        _curve_key(tag, model),
        tuple(T.invariants),
        tuple((render_element(r.d), tuple(r.group.invariants)) for r in records),
    )


def check_rows(rows: list[dict], K: QuadField, jobs: int = 1) -> list[RowResult]:
    """Verify every table row: base torsion matches, some growth record has
    d in the row's square class, and that record's group matches exactly."""
    tag = field_tag(K)
    unique = {}
    for row in rows:
        unique.setdefault(_curve_key(tag, row["model"]), (tag, row["model"]))
    work = list(unique.values())
    summaries = {}
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for key, inv, recs in pool.map(_compute_curve_summary, work):
                summaries[key] = (inv, recs)
    else:
        for item in work:
            key, inv, recs = _compute_curve_summary(item)
            summaries[key] = (inv, recs)

    results = []
    for idx, row in enumerate(rows):
        key = _curve_key(tag, row["model"])
        base_inv, recs = summaries[key]
        expect_base = parse_group(row["base_group"]).invariants
        expect_ext = parse_group(row["extended_group"]).invariants
        d_row = parse_element(str(row["d"]), K)
        problems = []
        if base_inv != expect_base:
            problems.append(
                f"E(K)_tor = {_label_from_invariants(base_inv)}, "
                f"expected {row['base_group']}"
            )
        match = None
        for d_str, inv in recs:
            if same_square_class(parse_element(d_str, K), d_row):
                match = (d_str, inv)
                break
        if match is None:
            problems.append(f"no growth record with d ~ {row['d']}")
        elif match[1] != expect_ext:
            problems.append(
                f"d ~ {row['d']} gives {_label_from_invariants(match[1])}, "
                f"expected {row['extended_group']}"
            )
        label = (f"{row['base_group']} | {row['d']} | {row['extended_group']} | "
                 f"{row['model']}")
        if problems:
            results.append(RowResult(idx, False, f"{label} :: " + "; ".join(problems)))
        else:
            results.append(RowResult(idx, True, label))
    return results


def _table_field(rows: list[dict], path: str) -> QuadField:
    # table6 is Q(i), table7 is Q(sqrt(-3)); recognize by an explicit field
    # key if present, else by filename convention
    if rows and isinstance(rows[0], dict) and "field" in rows[0]:
        return parse_field(rows[0]["field"])
    if "6" in path.rsplit("/", 1)[-1]:
        return QI
    return QSQRT_MINUS3


# ---------------------------------------------------------------------------
# Commands.
# ---------------------------------------------------------------------------


def cmd_compute(args) -> int:
    K = parse_field(args.field)
    E = parse_curve(args.curve, K)
    _emit_report(torsion_report(K, E), args.format)
    return 0


def cmd_growth(args) -> int:
    K = parse_field(args.field)
    E = parse_curve(args.curve, K)
    _emit_report(growth_report(K, E), args.format)
    return 0


def cmd_reproduce(args) -> int:
    with open(args.table) as fh:
        rows = json.load(fh)
    K = parse_field(args.field) if args.field else _table_field(rows, args.table)
    results = check_rows(rows, K, jobs=args.jobs)
    failures = 0
    for r in results:
        print(f"{'PASS' if r.ok else 'FAIL'} row {r.index:2d}: {r.message}")
    failures = sum(1 for r in results if not r.ok)
    print(f"{len(results) - failures}/{len(results)} rows verified "
          f"({field_tag(K)})")
    return 1 if failures else 0


def cmd_selftest(args) -> int:
    from . import selftest

    return selftest.run(verbose=True)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="torsion",
        description="Torsion of elliptic curves over quadratic cyclotomic "
                    "fields and its growth in quadratic extensions.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="compute E(K)_tor")
    p.add_argument("--field", required=True, help="Qi | Qsqrt-3 | Qsqrt<D>")
    p.add_argument("--curve", required=True, help='e.g. "[1,0,1,-454,-544]"')
    p.add_argument("--format", default="text", choices=["text", "json"])
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("growth", help="find all quadratic extensions with growth")
    p.add_argument("--field", required=True)
    p.add_argument("--curve", required=True)
    p.add_argument("--format", default="text", choices=["text", "json", "csv"])
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("reproduce", help="verify the rows of a table file")
    p.add_argument("table", help="JSON array of table rows")
    p.add_argument("--field", default=None,
                   help="override the field (default: inferred)")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("selftest", help="run the built-in property checks")
    p.set_defaults(func=cmd_selftest)

    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except SingularCurveError as exc:
        print(f"singular curve: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
