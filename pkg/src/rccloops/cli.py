"""Command-line front end.

Commands: build, verify, classify, table2, conjecture, export.  Field
elements on the command line are integer codes in [0, q) (base-p digit
encoding); pass --poly to supply them as polynomial strings like
"1+2*t" instead.  All output is deterministic: identical invocations
produce identical bytes, for any worker count.

Exit codes: 0 success; 2 reducible quadratic; 3 bad field parameters;
4 malformed table; 5 failed consistency check; 6 classification count
mismatch; 7 closure cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import analysis, isomorphism
from .construct import ReducibleQuadraticError, build_loop, sidecar_json
from .fields import FiniteField, Quadratic, enumerate_irreducible_quadratics
from .loops import (
    ClosureCapError,
    InvalidLoopError,
    MalformedTableError,
    dump_table,
    parse_table,
)

EXIT_OK = 0
EXIT_REDUCIBLE = 2
EXIT_BAD_FIELD = 3
EXIT_MALFORMED = 4
EXIT_CONSISTENCY = 5
EXIT_COUNT_MISMATCH = 6
EXIT_CLOSURE_CAP = 7


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _make_field(args) -> FiniteField:
    try:
        return FiniteField(args.p, args.n)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_BAD_FIELD)


def _parse_coeff(field: FiniteField, text: str, use_poly: bool):
    if use_poly:
        return field.parse_element(text)
    try:
        code = int(text)
    except ValueError:
        print(f"error: element {text!r} is not an integer code", file=sys.stderr)
        raise SystemExit(EXIT_BAD_FIELD)
    if not 0 <= code < field.q:
        print(f"error: element code {code} out of range [0, {field.q})", file=sys.stderr)
        raise SystemExit(EXIT_BAD_FIELD)
    return field.element(code)


def _make_quadratic(field: FiniteField, args) -> Quadratic:
    r = _parse_coeff(field, args.r, args.poly)
    s = _parse_coeff(field, args.s, args.poly)
    return Quadratic(r, s)


def _build_checked(field, f):
    try:
        return build_loop(field, f)
    except ReducibleQuadraticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_REDUCIBLE)


# -- build ----------------------------------------------------------------------


def cmd_build(args) -> int:
    field = _make_field(args)
    f = _make_quadratic(field, args)
    loop = _build_checked(field, f)
    if args.format == "json":
        doc = sidecar_json(loop)
        doc["table"] = (loop.table.table + 1).tolist()
        _emit(_json_text(doc), args.out)
    else:
        _emit(dump_table(loop.table), args.out)
        if args.out:
            with open(args.out + ".json", "w") as fh:
                fh.write(_json_text(sidecar_json(loop)))
    return EXIT_OK


# -- verify ---------------------------------------------------------------------


def _report_text(rep) -> str:
    lines = [
        f"order    {rep.order}",
        f"identity {rep.identity + 1}",
        f"loop     {rep.loop_ok}",
        f"rcc      {rep.rcc}",
        f"rip      {rep.rip}",
        f"simple   {rep.simple}",
    ]
    if rep.subsets is not None:
        lines.append(f"|C|      {len(rep.subsets.commutant)}")
        lines.append(f"|N_l|    {len(rep.subsets.left_nucleus)}")
        lines.append(f"|N_m|    {len(rep.subsets.middle_nucleus)}")
        lines.append(f"|N_r|    {len(rep.subsets.right_nucleus)}")
        lines.append(f"|Z|      {len(rep.subsets.center)}")
        lines.append(
            "normal subloop sizes "
            + ",".join(str(len(s)) for s in rep.normal_subloops)
        )
    for chk in rep.checks:
        status = "pass" if chk.passed else "FAIL"
        suffix = f"  [{chk.witness}]" if chk.witness and not chk.passed else ""
        lines.append(f"check {chk.name}: {status}{suffix}")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    if args.table:
        try:
            with open(args.table) as fh:
                text = fh.read()
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_MALFORMED
        try:
            loop = parse_table(text, check=False)
        except MalformedTableError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_MALFORMED
        sources = [loop]
    else:
        if args.p is None:
            print("error: need --table or -p/-n/-r/-s", file=sys.stderr)
            return EXIT_MALFORMED
        field = _make_field(args)
        if args.all_f:
            sources = [
                _build_checked(field, f)
                for f in enumerate_irreducible_quadratics(field)
            ]
        else:
            if args.r is None or args.s is None:
                print("error: need -r and -s (or --all-f)", file=sys.stderr)
                return EXIT_BAD_FIELD
            sources = [_build_checked(field, _make_quadratic(field, args))]

    reports = [
        analysis.structure_report(src, workers=args.workers) for src in sources
    ]
    if args.format == "json":
        docs = [r.to_dict() for r in reports]
        _emit(_json_text(docs[0] if len(docs) == 1 else docs), args.out)
    else:
        _emit("\n".join(_report_text(r) for r in reports), args.out)
    if not all(r.loop_ok for r in reports):
        return EXIT_MALFORMED
    if not all(r.all_checks_pass for r in reports):
        return EXIT_CONSISTENCY
    return EXIT_OK


# -- classify -------------------------------------------------------------------


def cmd_classify(args) -> int:
    field = _make_field(args)
    oracle = {"auto": None, "on": True, "off": False}[args.oracle]
    report = isomorphism.classification_crosscheck(field, use_oracle=oracle)
    if args.format == "json":
        doc = report.to_dict()
        doc["orbits"] = isomorphism.frobenius_classify(field).to_dict()["orbits"]
        _emit(_json_text(doc), args.out)
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["representative_r", "representative_s", "size", "r_zero", "simple"])
        for orbit in isomorphism.frobenius_classify(field).orbits:
            rep = orbit["representative"]
            writer.writerow(
                [rep["r"], rep["s"], orbit["size"], orbit["r_zero"], orbit["simple"]]
            )
        _emit(buf.getvalue(), args.out)
    else:
        lines = [
            f"q={report.q}: {len(enumerate_irreducible_quadratics(field))} quadratics, "
            f"{report.orbit_count} classes, formula {report.formula_count} "
            f"({'match' if report.counts_match else 'MISMATCH'})"
        ]
        if report.oracle_used:
            lines.append(
                "oracle partition "
                + ("matches orbits" if report.oracle_partition_matches else "MISMATCH")
            )
        lines.append(
            f"simple classes {report.simple_loops}; r=0 classes {report.r_zero_orbits}"
            + (
                f"; simple quotients {report.simple_quotients}"
                if report.simple_quotients is not None
                else ""
            )
        )
        for mm in report.mismatches:
            lines.append(f"mismatch: {mm}")
        _emit("\n".join(lines) + "\n", args.out)
    if not report.counts_match or report.oracle_partition_matches is False:
        return EXIT_COUNT_MISMATCH
    return EXIT_OK


# -- table2 ---------------------------------------------------------------------


def _prime_power(q: int) -> tuple:
    for p in range(2, q + 1):
        if q % p == 0:
            n = 0
            m = q
            while m % p == 0:
                m //= p
                n += 1
            if m == 1:
                return p, n
            break
    raise ValueError(f"{q} is not a prime power")


def cmd_table2(args) -> int:
    try:
        qs = [int(v) for v in args.q.split(",")]
        fields = []
        for q in qs:
            p, n = _prime_power(q)
            fields.append(FiniteField(p, n))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_FIELD
    rows = isomorphism.table2_rows(fields)
    header = ["q", "kind", "order", "quadratics", "classes", "simple"]
    if args.format == "json":
        _emit(_json_text({"schema": 1, "rows": rows}), args.out)
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(header)
        for row in rows:
            writer.writerow([row[k] for k in header])
        _emit(buf.getvalue(), args.out)
    else:
        widths = [4, 10, 6, 11, 8, 7]
        lines = ["".join(h.ljust(w) for h, w in zip(header, widths))]
        for row in rows:
            lines.append(
                "".join(str(row[k]).ljust(w) for k, w in zip(header, widths))
            )
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# -- conjecture -----------------------------------------------------------------


def cmd_conjecture(args) -> int:
    field = _make_field(args)
    f = _make_quadratic(field, args)
    loop = _build_checked(field, f)
    try:
        rep = analysis.check_conjecture43(loop, closure_cap=args.closure_cap)
        cor = analysis.check_cor35(loop, closure_cap=args.closure_cap)
    except ClosureCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CLOSURE_CAP
    doc = {
        "schema": 1,
        "p": field.p,
        "n": field.n,
        "q": field.q,
        "f": {"r": f.r.code, "s": f.s.code},
        "loop_order": loop.order,
        "mlt_order": rep.mlt_order,
        "inn_order": rep.inn_order,
        "gl_order": cor.gl_order,
        "orbit_stabilizer_ok": cor.orbit_stabilizer_ok,
        "mlt_is_full_gl": cor.gl_match,
        "decompose_ok": cor.decompose_ok,
        "inn_matrices_upper_triangular": rep.all_upper_triangular,
        "x_values": list(rep.x_values),
        "conjectured_x_values": list(rep.conjectured_x_values),
        "x_match": rep.x_match,
        "fibers": {str(x): list(ys) for x, ys in rep.fibers.items()},
        "full_fibers": rep.full_fibers,
        "factorization_ok": rep.factorization_ok,
        "intersection_trivial": rep.intersection_trivial,
    }
    if args.format == "json":
        _emit(_json_text(doc), args.out)
    else:
        lines = [
            f"q={field.q} f=(r={f.r.code},s={f.s.code}) order={loop.order}",
            f"|Mlt_rho|={rep.mlt_order} |Inn_rho|={rep.inn_order} |GL(2,q)|={cor.gl_order}"
            f" full_gl={cor.gl_match}",
            f"inn matrices upper triangular: {rep.all_upper_triangular}",
            f"x values {list(rep.x_values)} conjectured {list(rep.conjectured_x_values)}"
            f" match={rep.x_match}",
            f"full fibers: {rep.full_fibers}",
            f"set factorization |R|*|H|=|GL|: {rep.factorization_ok},"
            f" trivial intersection: {rep.intersection_trivial}",
        ]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# -- export ---------------------------------------------------------------------


def cmd_export(args) -> int:
    try:
        with open(args.table) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    try:
        loop = parse_table(text, check=True)
    except (MalformedTableError, InvalidLoopError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    if args.format == "json":
        doc = {
            "schema": 1,
            "order": loop.order,
            "identity": loop.identity + 1,
            "table": (loop.table + 1).tolist(),
        }
        _emit(_json_text(doc), args.out)
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["order", loop.order, "identity", loop.identity + 1])
        for row in loop.table:
            writer.writerow([int(v) + 1 for v in row])
        _emit(buf.getvalue(), args.out)
    else:
        _emit(dump_table(loop), args.out)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------


def _add_field_args(sub, required=True):
    sub.add_argument("-p", type=int, required=required, help="prime characteristic")
    sub.add_argument("-n", type=int, default=1, help="extension degree (default 1)")


def _add_quadratic_args(sub, required=True):
    sub.add_argument("-r", type=str, required=required, help="trace coefficient of f")
    sub.add_argument("-s", type=str, required=required, help="determinant coefficient of f")
    sub.add_argument(
        "--poly",
        action="store_true",
        help="parse -r/-s as polynomial strings instead of integer codes",
    )


def _add_common(sub, formats=("text", "json")):
    sub.add_argument("--format", choices=formats, default="text")
    sub.add_argument("--out", type=str, default=None, help="output path (default stdout)")
    sub.add_argument("--workers", type=int, default=1, help="worker threads for sweeps")
    sub.add_argument(
        "--closure-cap",
        type=int,
        default=1 << 20,
        help="element cap for permutation-group closure",
    )


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rccloops",
        description=(
            "Construct loops of order q^2-1 whose right translations are "
            "2x2 matrices over F_q, verify their structure, and classify "
            "them up to isomorphism."
        ),
    )
    subs = parser.add_subparsers(dest="command", required=True)

    b = subs.add_parser("build", help="build a loop and emit its Cayley table")
    _add_field_args(b)
    _add_quadratic_args(b)
    _add_common(b)
    b.set_defaults(func=cmd_build)

    v = subs.add_parser("verify", help="run all structure checks on a loop")
    v.add_argument("--table", type=str, default=None, help="Cayley table file")
    _add_field_args(v, required=False)
    _add_quadratic_args(v, required=False)
    v.add_argument("--all-f", action="store_true", help="verify all irreducible quadratics")
    _add_common(v)
    v.set_defaults(func=cmd_verify)

    c = subs.add_parser("classify", help="isomorphism classes for one field")
    _add_field_args(c)
    c.add_argument(
        "--oracle",
        choices=("auto", "on", "off"),
        default="auto",
        help="cross-check classes with the brute-force oracle (auto: q <= 5)",
    )
    _add_common(c, formats=("text", "json", "csv"))
    c.set_defaults(func=cmd_classify)

    t = subs.add_parser("table2", help="class/simplicity count table over several q")
    t.add_argument("--q", type=str, required=True, help="comma-separated prime powers")
    _add_common(t, formats=("text", "json", "csv"))
    t.set_defaults(func=cmd_table2)

    j = subs.add_parser(
        "conjecture", help="inner mapping group inventory and factorization checks"
    )
    _add_field_args(j)
    _add_quadratic_args(j)
    _add_common(j)
    j.set_defaults(func=cmd_conjecture)

    e = subs.add_parser("export", help="re-emit a table file in another format")
    e.add_argument("--table", type=str, required=True, help="Cayley table file")
    _add_common(e, formats=("text", "json", "csv"))
    e.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    if getattr(args, "workers", 1) < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return EXIT_BAD_FIELD
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
