"""Command line surface.

Exit codes: 0 success, 2 state cap exceeded, 3 internal cross-method
disagreement, 4 integer-coefficient certification failure, 5 verification
failure.  Output is UTF-8, newline terminated, and deterministic: JSON is
the canonical machine format, csv/table are projections of it.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from . import polyq, report
from .errors import (
    CapExceeded,
    InternalInconsistency,
    NoFit,
    NotAssociated,
    NotPrimePower,
    VerificationFailed,
)
from .flag import DEFAULT_STATE_CAP, DimensionVector, FlagContext
from .gf import field_for_order
from .orbit import (
    count_classes,
    find_zero_one_reps,
    fit_levi_form,
    partition_orbits,
    transfer_reps,
    verify_association,
)

EXIT_OK = 0
EXIT_CAP = 2
EXIT_INCONSISTENT = 3
EXIT_NOT_INTEGER = 4
EXIT_VERIFY = 5


def _dimension_vector(text: str) -> DimensionVector:
    try:
        return DimensionVector.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _q_value(text: str) -> int:
    q = int(text)
    try:
        field_for_order(q)
    except NotPrimePower as exc:
        raise argparse.ArgumentTypeError(str(exc))
    return q


def _q_list(text: str) -> list[int]:
    return [_q_value(part) for part in text.split(",")]


def default_cap() -> int:
    env = os.environ.get("FLAGCLASS_CAP")
    return int(env) if env else DEFAULT_STATE_CAP


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flagclass",
        description="Conjugacy class counts for unipotent radicals of flag stabilizers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--d", type=_dimension_vector, required=True, help="dimension vector, e.g. 2,3,4")
        p.add_argument("--cap", type=int, default=None, help="state cap (default FLAGCLASS_CAP or 2^24)")
        p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
        p.add_argument("--output", choices=("json", "csv", "table"), default="json")

    p = sub.add_parser("count", help="class counts and per-orbit records at one q")
    common(p)
    p.add_argument("--q", type=_q_value, required=True)

    p = sub.add_parser("interpolate", help="interpolate k(U) as a polynomial in q")
    common(p)
    p.add_argument("--q-list", type=_q_list, required=True)
    p.add_argument("--basis", choices=("q", "q-1"), default="q")

    p = sub.add_parser("verify", help="run the invariant suite over a q list")
    common(p)
    p.add_argument("--q-list", type=_q_list, required=True)
    p.add_argument("--assoc", type=_dimension_vector, default=None, help="second vector for association check")

    p = sub.add_parser("reps", help="0/1 orbit representatives, optionally transferred")
    common(p)
    p.add_argument("--q", type=_q_value, required=True)
    p.add_argument("--transfer", type=_q_value, default=None)

    p = sub.add_parser("report", help="write csv, polynomial json and figures to a directory")
    common(p)
    p.add_argument("--q-list", type=_q_list, default=None)
    p.add_argument("--basis", choices=("q", "q-1"), default="q")
    p.add_argument("--out-dir", type=Path, required=True)

    return parser


# -- output helpers -----------------------------------------------------------


def emit(payload: dict, fmt: str, csv_rows=None, csv_fields=None):
    if fmt == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=csv_fields)
        writer.writeheader()
        writer.writerows(csv_rows or [])
        sys.stdout.write(buf.getvalue())
    else:
        for line in _tablelines(payload):
            sys.stdout.write(line + "\n")


def _tablelines(payload, prefix=""):
    lines = []
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, dict):
            lines.append(f"{prefix}{key}:")
            lines.extend(_tablelines(value, prefix + "  "))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{prefix}{key}: [{len(value)} rows]")
        else:
            lines.append(f"{prefix}{key}: {value}")
    return lines


def _context(args, q=None):
    cap = args.cap if args.cap is not None else default_cap()
    field = field_for_order(q if q is not None else args.q)
    return FlagContext(args.d, field, cap)


def _scope_warnings(dv) -> list[str]:
    if not dv.finite_type:
        return [f"flag length t={dv.t} exceeds the finite-type scope t <= 5; per-q results only"]
    return []


# -- commands ---------------------------------------------------------------------


def cmd_count(args) -> int:
    ctx = _context(args)
    counts = count_classes(ctx, threads=args.threads)
    find_zero_one_reps(ctx, counts.partition)
    orders = ctx.group_orders()
    payload = {
        "d": list(args.d.d),
        "q": ctx.q,
        "orders": orders,
        "k_U": counts.k_U,
        "k_PU": counts.k_PU,
        "routes": counts.routes,
        "per_orbit": counts.per_orbit,
        "commuting_pairs": counts.commuting_pairs,
        "records": counts.partition.to_json(),
        "warnings": _scope_warnings(args.d),
    }
    emit(
        payload,
        args.output,
        csv_rows=[report.summary_row(args.d, ctx.q, orders, counts)],
        csv_fields=report.SUMMARY_FIELDS,
    )
    return EXIT_OK


def _counts_over(args, q_list):
    out = {}
    for q in q_list:
        ctx = _context(args, q=q)
        out[q] = (ctx, count_classes(ctx, threads=args.threads))
    return out


def cmd_interpolate(args) -> int:
    runs = _counts_over(args, args.q_list)
    points = [(q, runs[q][1].k_U) for q in sorted(runs)]
    poly = polyq.interpolate(points)
    dim_u = runs[args.q_list[0]][0].dim_u
    payload = {
        "d": list(args.d.d),
        "q_list": sorted(runs),
        "points": [[q, v] for q, v in points],
        "polynomial": polyq.poly_to_json(poly, basis=args.basis),
        "degree": poly.degree,
        "undersampled": len(points) < dim_u + 1,
        "warnings": _scope_warnings(args.d),
    }
    certified = polyq.certify_integer_coefficients(poly)
    csv_rows = [
        {"power": i, "numerator": c.numerator, "denominator": c.denominator}
        for i, c in enumerate(
            poly.coefficients if args.basis == "q" else polyq.rebase_q_minus_1(poly)
        )
    ]
    emit(payload, args.output, csv_rows=csv_rows, csv_fields=["power", "numerator", "denominator"])
    return EXIT_OK if certified else EXIT_NOT_INTEGER


def _verify_checks(args):
    checks = []
    q_list = sorted(set(args.q_list))
    runs = _counts_over(args, q_list)
    finite = args.d.finite_type

    for q in q_list:
        ctx, counts = runs[q]
        checks.append(
            {
                "name": f"count-routes-agree q={q}",
                "status": "pass",
                "evidence": counts.routes,
            }
        )
        checks.append(
            {
                "name": f"partition-covers-space q={q}",
                "status": "pass" if counts.partition.totals == ctx.n_states else "fail",
                "evidence": {"total": counts.partition.totals, "expected": ctx.n_states},
            }
        )
        if args.d.t == 2:
            d1 = args.d.d[0]
            expected = q ** (d1 * (args.d.n - d1))
            checks.append(
                {
                    "name": f"abelian-count q={q}",
                    "status": "pass" if counts.k_U == expected else "fail",
                    "evidence": {"k_U": counts.k_U, "expected": expected},
                }
            )

    orbit_counts = {q: runs[q][1].k_PU for q in q_list}
    if finite:
        values = set(orbit_counts.values())
        checks.append(
            {
                "name": "orbit-count-q-independent",
                "status": "pass" if len(values) == 1 else "fail",
                "evidence": orbit_counts,
            }
        )

    coverage_ok = True
    for q in q_list:
        ctx, counts = runs[q]
        zo = find_zero_one_reps(ctx, counts.partition)
        ok = not zo.missing
        coverage_ok = coverage_ok and ok
        checks.append(
            {
                "name": f"zero-one-coverage q={q}",
                "status": "pass" if ok else ("fail" if finite else "finding"),
                "evidence": {"assigned": zo.assigned, "missing": zo.missing},
            }
        )

    base_q = q_list[0]
    base_ctx, base_counts = runs[base_q]
    if coverage_ok:
        for q in q_list[1:]:
            ctx, counts = runs[q]
            try:
                transfer_reps(base_ctx, ctx, base_counts.partition, counts.partition)
                status, evidence = "pass", {"orbits": counts.k_PU}
            except VerificationFailed as exc:
                status, evidence = "fail", {"error": str(exc)}
            checks.append(
                {"name": f"rep-transfer q={base_q}->{q}", "status": status, "evidence": evidence}
            )

    if len(q_list) >= 3 and coverage_ok:
        patterns = {}
        for i, rec in enumerate(base_counts.partition.records):
            patterns[base_ctx.cross_values(rec.zero_one_rep)] = i
        delta_ok = True
        fit_ok = True
        zero_fit_ok = True
        for pattern in patterns:
            orders_by_q = {}
            deltas = set()
            for q in q_list:
                ctx, counts = runs[q]
                key = 0
                for v in pattern:
                    key = key * q + v
                rec = counts.partition.records[int(counts.partition.labels[key])]
                orders_by_q[q] = rec.c_P_order
                deltas.add(rec.delta_prime)
            if len(deltas) != 1:
                delta_ok = False
            try:
                fit = fit_levi_form(
                    orders_by_q, base_ctx.n, base_ctx.dim_u + base_ctx.n**2
                )
            except (NoFit, ValueError):
                fit_ok = False
                continue
            if not any(v for v in pattern):
                expected = tuple(sorted((b for b in args.d.blocks if b), reverse=True))
                if (expected, base_ctx.dim_u) not in fit.all_fits:
                    zero_fit_ok = False
        checks.append(
            {
                "name": "delta-prime-constant",
                "status": "pass" if delta_ok else "fail",
                "evidence": {"patterns": len(patterns)},
            }
        )
        checks.append(
            {
                "name": "levi-fit-exists",
                "status": "pass" if fit_ok else "fail",
                "evidence": {"patterns": len(patterns)},
            }
        )
        checks.append(
            {
                "name": "levi-fit-zero-orbit",
                "status": "pass" if zero_fit_ok else "fail",
                "evidence": {"expected_multiset": sorted((b for b in args.d.blocks if b), reverse=True)},
            }
        )
    elif len(q_list) < 3:
        checks.append(
            {
                "name": "levi-fit-exists",
                "status": "skipped",
                "evidence": {"reason": "needs at least 3 sampled q values"},
            }
        )

    if args.assoc is not None:
        try:
            rep = verify_association(args.d, args.assoc, q_list, cap=args.cap or default_cap(), threads=args.threads)
            checks.append({"name": "association-k_PU-equal", "status": "pass", "evidence": rep.rows})
        except (NotAssociated, VerificationFailed) as exc:
            checks.append(
                {"name": "association-k_PU-equal", "status": "fail", "evidence": {"error": str(exc)}}
            )
    return checks


def cmd_verify(args) -> int:
    checks = _verify_checks(args)
    all_pass = all(c["status"] in ("pass", "skipped", "finding") for c in checks)
    payload = {
        "d": list(args.d.d),
        "q_list": sorted(set(args.q_list)),
        "checks": checks,
        "all_pass": all_pass,
        "warnings": _scope_warnings(args.d),
    }
    emit(
        payload,
        args.output,
        csv_rows=[{"name": c["name"], "status": c["status"]} for c in checks],
        csv_fields=["name", "status"],
    )
    return EXIT_OK if all_pass else EXIT_VERIFY


def cmd_reps(args) -> int:
    ctx = _context(args)
    part = partition_orbits(ctx, "P")
    zo = find_zero_one_reps(ctx, part)
    payload = {
        "d": list(args.d.d),
        "q": ctx.q,
        "n_orbits": len(part.records),
        "patterns": [
            {
                "orbit": i,
                "rows": rec.zero_one_rep.rows() if rec.zero_one_rep else None,
                "orbit_size": rec.orbit_size,
            }
            for i, rec in enumerate(part.records)
        ],
        "missing": zo.missing,
        "warnings": _scope_warnings(args.d),
    }
    code = EXIT_OK
    if args.transfer is not None:
        ctx2 = _context(args, q=args.transfer)
        try:
            rep = transfer_reps(ctx, ctx2, part)
            payload["transfer"] = {
                "q": args.transfer,
                "ok": True,
                "n_orbits_target": rep.n_orbits_target,
            }
        except VerificationFailed as exc:
            payload["transfer"] = {"q": args.transfer, "ok": False, "error": str(exc)}
            code = EXIT_VERIFY
    emit(
        payload,
        args.output,
        csv_rows=[
            {
                "orbit": p["orbit"],
                "pattern": "".join(str(v) for row in (p["rows"] or []) for v in row),
                "orbit_size": p["orbit_size"],
            }
            for p in payload["patterns"]
        ],
        csv_fields=["orbit", "pattern", "orbit_size"],
    )
    return code


def cmd_report(args) -> int:
    cap = args.cap if args.cap is not None else default_cap()
    probe = FlagContext(args.d, field_for_order(2), cap)
    if args.q_list is None:
        q_list, _ = polyq.default_schedule(probe.dim_u, cap)
    else:
        q_list = args.q_list
    runs = _counts_over(args, sorted(set(q_list)))
    out = args.out_dir
    out.mkdir(parents=True, exist_ok=True)
    written = []

    summary_rows = []
    per_q_sizes = {}
    for q, (ctx, counts) in sorted(runs.items()):
        find_zero_one_reps(ctx, counts.partition)
        summary_rows.append(report.summary_row(args.d, q, ctx.group_orders(), counts))
        per_q_sizes[q] = [rec.orbit_size for rec in counts.partition.records]
        rec_path = out / f"records_q{q}.csv"
        report.write_csv(rec_path, report.RECORD_FIELDS, report.record_rows(ctx, counts.partition))
        written.append(str(rec_path))
    summary_path = out / "summary.csv"
    report.write_csv(summary_path, report.SUMMARY_FIELDS, summary_rows)
    written.append(str(summary_path))

    points = [(q, runs[q][1].k_U) for q in sorted(runs)]
    poly = polyq.interpolate(points)
    poly_path = out / "polynomial.json"
    poly_path.write_text(
        json.dumps(
            {
                "d": list(args.d.d),
                "k_U": polyq.poly_to_json(poly, basis=args.basis),
                "undersampled": len(points) < probe.dim_u + 1,
            },
            sort_keys=True,
        )
        + "\n",
        encoding="utf-8",
    )
    written.append(str(poly_path))

    fig1 = out / "k_vs_q.png"
    report.render_counts_figure(fig1, args.d, points, poly)
    written.append(str(fig1))
    fig2 = out / "orbit_sizes.png"
    report.render_orbit_figure(fig2, args.d, per_q_sizes)
    written.append(str(fig2))

    emit(
        {"out_dir": str(out), "written": written, "warnings": _scope_warnings(args.d)},
        args.output,
        csv_rows=summary_rows,
        csv_fields=report.SUMMARY_FIELDS,
    )
    return EXIT_OK


COMMANDS = {
    "count": cmd_count,
    "interpolate": cmd_interpolate,
    "verify": cmd_verify,
    "reps": cmd_reps,
    "report": cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except CapExceeded as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CAP
    except InternalInconsistency as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INCONSISTENT
    except (VerificationFailed, NotAssociated) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
