"""Command line front end.

Every subcommand prints a JSON document to stdout.  Commands whose
natural output is a table (a trig table, a shot profile, a branch
sweep) switch stdout to CSV with ``--format csv``, or write the CSV to
``--out FILE`` while keeping the JSON summary on stdout.  Exit codes:
0 on success, 1 when a numerical routine fails, 2 for invalid usage or
parameters.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from contextlib import contextmanager

from .branch import BranchTable, branch_sweep
from .config import SolverConfig
from .eigen import eigenvalue
from .errors import NumericsError, SpecError
from .ptrig import get_context, pi_p
from .radial import Annulus, Ball, Nonlinearity, ProblemSpec, shoot
from .solver import find_solutions, rstar


def _fmt(x: float) -> str:
    # 17 significant digits: parsing the text reproduces the double.
    return format(x, ".17g")


def _parse_g(text: str) -> Nonlinearity:
    kind, _, rest = text.partition(":")
    try:
        if kind == "pow":
            return Nonlinearity.pure_power(float(rest))
        if kind == "combo":
            q_str, _, r_str = rest.partition(",")
            return Nonlinearity.power_combo(float(q_str), float(r_str))
    except ValueError as exc:
        raise SpecError(f"cannot parse nonlinearity {text!r}: {exc}") from exc
    raise SpecError(
        f"nonlinearity must look like pow:<q> or combo:<q>,<r>, got {text!r}"
    )


def _spec_from(args, need_g: bool = True) -> ProblemSpec:
    g_text = getattr(args, "g", None)
    g = _parse_g(g_text) if g_text is not None else None
    if need_g and g is None:
        raise SpecError("this command needs a nonlinearity (--g)")
    if getattr(args, "annulus", None) is not None:
        domain: Ball | Annulus = Annulus(args.annulus[0], args.annulus[1])
    else:
        domain = Ball(args.r)
    return ProblemSpec(p=args.p, dim=args.n, domain=domain, g=g)


def _config_from(args) -> SolverConfig:
    kw = {}
    if getattr(args, "tol", None) is not None:
        kw["rel_tol"] = args.tol
        kw["abs_tol"] = args.tol * 1e-2
    if getattr(args, "eps0", None) is not None:
        kw["eps0"] = args.eps0
    if getattr(args, "threads", None) is not None:
        kw["threads"] = args.threads
    if getattr(args, "grid", None) is not None:
        kw["d_grid_size"] = args.grid
    return SolverConfig(**kw)


@contextmanager
def _table_sink(args):
    """Where table output goes: --out file, else stdout."""
    if getattr(args, "out", None) is not None:
        with open(args.out, "w", newline="") as fh:
            yield fh
    else:
        yield sys.stdout


def _emit_json(doc: dict) -> None:
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _write_table(args, header: list[str], rows: list[list[float]], summary: dict):
    """CSV to --out (summary JSON to stdout) or, with --format csv, to stdout."""
    as_csv = args.out is not None or args.format == "csv"
    if as_csv:
        with _table_sink(args) as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for row in rows:
                writer.writerow(
                    [_fmt(x) if isinstance(x, float) else x for x in row]
                )
        if args.out is not None:
            summary = dict(summary, out=args.out)
            _emit_json(summary)
    else:
        _emit_json(dict(summary, header=header, rows=rows))


def cmd_ptrig(args) -> int:
    ctx = get_context(args.p)
    if args.table is None and args.theta is None:
        raise SpecError("ptrig needs --theta or --table")
    if args.table is not None:
        n = args.table
        if n < 2:
            raise SpecError("--table needs at least 2 rows")
        rows = []
        for i in range(n):
            theta = 2.0 * ctx.pi_p * i / (n - 1)
            c, s = ctx.pair(theta)
            rows.append([theta, c, s])
        _write_table(
            args,
            ["theta", "cos_p", "sin_p"],
            rows,
            {"p": args.p, "pi_p": ctx.pi_p, "n": n},
        )
        return 0
    c, s = ctx.pair(args.theta)
    pexp = ctx.exponent
    defect = abs(
        (args.p - 1.0) * abs(s) ** pexp.pprime + abs(c) ** args.p - 1.0
    )
    _emit_json(
        {
            "p": args.p,
            "pi_p": ctx.pi_p,
            "theta": args.theta,
            "cos_p": c,
            "sin_p": s,
            "identity_defect": defect,
        }
    )
    return 0


def cmd_eigen(args) -> int:
    spec = _spec_from(args, need_g=False)
    res = eigenvalue(args.k, spec, _config_from(args))
    _emit_json(
        {
            "p": spec.p,
            "dim": spec.dim,
            "domain": repr(spec.domain),
            "k": res.k,
            "lambda": res.lam,
            "residual": res.residual,
        }
    )
    return 0


def cmd_shoot(args) -> int:
    spec = _spec_from(args)
    cfg = _config_from(args)
    traj, summ = shoot(args.d, spec, cfg)
    rows = [
        [r, u, v, th, rho]
        for r, u, v, th, rho in zip(
            traj.r, traj.u, traj.v, traj.theta, traj.rho_sq
        )
    ]
    summary = {
        "p": spec.p,
        "dim": spec.dim,
        "domain": repr(spec.domain),
        "g": spec.g.label(),
        "d": summ.d,
        "theta_start": summ.theta_start,
        "theta_end": summ.theta_end,
        "u_end": summ.u_end,
        "v_end": summ.v_end,
        "zeros": summ.zeros,
        "zero_radii": list(summ.zero_radii),
        "min_u": summ.min_u,
        "max_u": summ.max_u,
        "n_steps": summ.n_steps,
    }
    _write_table(args, ["r", "u", "v", "theta", "rho_sq"], rows, summary)
    return 0


def _record_doc(rec) -> dict:
    return {
        "d": rec.d,
        "side": rec.side,
        "zeros": rec.zeros,
        "theta_end": rec.theta_end,
        "residual": rec.residual,
        "u_end": rec.summary.u_end,
        "v_end": rec.summary.v_end,
        "min_u": rec.summary.min_u,
        "max_u": rec.summary.max_u,
        "zero_radii": list(rec.summary.zero_radii),
    }


def cmd_solve(args) -> int:
    spec = _spec_from(args)
    cfg = _config_from(args)
    sides = tuple(s.strip() for s in args.sides.split(",") if s.strip())
    records = find_solutions(spec, cfg, max_zeros=args.max_zeros, sides=sides)
    if args.out is not None:
        for i, rec in enumerate(records):
            path = f"{args.out}-{rec.side}-j{rec.zeros}-{i}.csv"
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["r", "u", "v", "theta", "rho_sq"])
                t = rec.trajectory
                for row in zip(t.r, t.u, t.v, t.theta, t.rho_sq):
                    writer.writerow([_fmt(x) for x in row])
    _emit_json(
        {
            "p": spec.p,
            "dim": spec.dim,
            "domain": repr(spec.domain),
            "g": spec.g.label(),
            "sides": list(sides),
            "max_zeros": args.max_zeros,
            "n_solutions": len(records),
            "solutions": [_record_doc(rec) for rec in records],
        }
    )
    return 0


def _branch_svg(table: BranchTable, path: str) -> None:
    """Minimal standalone plot: one polyline per branch family."""
    width, height, margin = 640, 480, 50
    rows = table.rows
    if not rows:
        raise SpecError("branch table is empty; nothing to plot")
    x_lo = min(r.param for r in rows)
    x_hi = max(r.param for r in rows)
    y_lo = min(r.d for r in rows)
    y_hi = max(r.d for r in rows)
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0

    def sx(x):
        return margin + (x - x_lo) / x_span * (width - 2 * margin)

    def sy(y):
        return height - margin - (y - y_lo) / y_span * (height - 2 * margin)

    palette = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}"'
        f' height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="{margin}" y="{margin}" width="{width - 2 * margin}"'
        f' height="{height - 2 * margin}" fill="none" stroke="#888"/>',
        f'<text x="{width / 2:.0f}" y="{height - 12}" text-anchor="middle"'
        f' font-size="13">{table.param_name}</text>',
        f'<text x="14" y="{height / 2:.0f}" font-size="13"'
        f' transform="rotate(-90 14 {height / 2:.0f})"'
        f' text-anchor="middle">d</text>',
    ]
    families = sorted({(r.zeros, r.side) for r in rows})
    for idx, (zeros, side) in enumerate(families):
        color = palette[idx % len(palette)]
        pts = [(r.param, r.d) for r in table.group(zeros, side)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}"'
            f' stroke-width="1.5"/>'
        )
        for x, y in pts:
            parts.append(
                f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2.2"'
                f' fill="{color}"/>'
            )
        parts.append(
            f'<text x="{width - margin + 4}" y="{margin + 14 * (idx + 1)}"'
            f' font-size="11" fill="{color}">j={zeros} {side}</text>'
        )
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts))


def cmd_branch(args) -> int:
    spec = _spec_from(args)
    cfg = _config_from(args)
    sides = tuple(s.strip() for s in args.sides.split(",") if s.strip())
    if args.steps < 2:
        raise SpecError("--steps must be at least 2")
    values = [
        args.start + (args.stop - args.start) * i / (args.steps - 1)
        for i in range(args.steps)
    ]
    table = branch_sweep(
        spec, args.param, values, cfg, max_zeros=args.max_zeros, sides=sides
    )
    if args.svg is not None:
        _branch_svg(table, args.svg)
    rows = [
        [r.param, r.d, r.side, r.zeros, r.theta_end, r.residual, int(r.fold)]
        for r in table.rows
    ]
    summary = {
        "param": table.param_name,
        "n_rows": len(table.rows),
        "metadata": table.metadata,
    }
    if args.svg is not None:
        summary["svg"] = args.svg
    _write_table(
        args,
        [table.param_name, "d", "side", "zeros", "theta_end", "residual", "fold"],
        rows,
        summary,
    )
    return 0


def cmd_rstar(args) -> int:
    spec = _spec_from(args)
    if args.annulus_ratio is not None:
        if not 0.0 < args.annulus_ratio < 1.0:
            raise SpecError("--annulus-ratio must lie in (0, 1)")
        spec = ProblemSpec(
            p=spec.p,
            dim=spec.dim,
            domain=Annulus(args.annulus_ratio * args.r, args.r),
            g=spec.g,
        )
    value = rstar(args.k, spec, _config_from(args), r_cap=args.r_cap)
    _emit_json(
        {
            "p": spec.p,
            "dim": spec.dim,
            "g": spec.g.label(),
            "k": args.k,
            "annulus_ratio": args.annulus_ratio,
            "rstar": value,
        }
    )
    return 0


def _add_common(sp, with_solver=True):
    sp.add_argument("--p", type=float, required=True, help="exponent p > 1")
    sp.add_argument("--n", type=int, default=1, help="space dimension N")
    sp.add_argument("--r", type=float, default=1.0, help="outer radius")
    sp.add_argument(
        "--annulus",
        type=float,
        nargs=2,
        metavar=("R1", "R2"),
        default=None,
        help="solve on the annulus (R1, R2) instead of a ball",
    )
    sp.add_argument(
        "--tol",
        type=float,
        default=None,
        help="integrator relative tolerance (absolute is tol/100)",
    )
    sp.add_argument(
        "--eps0", type=float, default=None, help="startup radius on balls"
    )
    if with_solver:
        sp.add_argument(
            "--threads", type=int, default=None, help="threads for scans"
        )
        sp.add_argument(
            "--grid", type=int, default=None, help="size of the d scan grid"
        )
    sp.add_argument(
        "--format",
        choices=("json", "csv"),
        default="json",
        help="stdout format for table-producing commands",
    )
    sp.add_argument("--out", default=None, help="write table output to this file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="plapshoot",
        description=(
            "Radial Neumann problems for the p-Laplacian: generalized trig"
            " tables, eigenvalues, shooting, solution counts, branch sweeps"
            " and threshold radii."
        ),
    )
    sub = ap.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    sp = sub.add_parser(
        "ptrig",
        help="evaluate or tabulate the generalized trig pair",
        formatter_class=fmt,
    )
    _add_common(sp, with_solver=False)
    sp.add_argument("--theta", type=float, default=None, help="single angle")
    sp.add_argument(
        "--table", type=int, default=None, help="tabulate this many rows"
    )
    sp.set_defaults(func=cmd_ptrig)

    sp = sub.add_parser(
        "eigen", help="k-th radial Neumann eigenvalue", formatter_class=fmt
    )
    _add_common(sp, with_solver=False)
    sp.add_argument("--k", type=int, required=True, help="eigenvalue index")
    sp.set_defaults(func=cmd_eigen)

    sp = sub.add_parser(
        "shoot", help="integrate one shot and report it", formatter_class=fmt
    )
    _add_common(sp)
    sp.add_argument("--g", required=True, help="pow:<q> or combo:<q>,<r>")
    sp.add_argument("--d", type=float, required=True, help="center value")
    sp.set_defaults(func=cmd_shoot)

    sp = sub.add_parser(
        "solve",
        help="find all solutions with up to max-zeros interior zeros",
        formatter_class=fmt,
    )
    _add_common(sp)
    sp.add_argument("--g", required=True, help="pow:<q> or combo:<q>,<r>")
    sp.add_argument(
        "--max-zeros", type=int, default=3, help="largest zero count to search"
    )
    sp.add_argument(
        "--sides",
        default="lower,upper",
        help="comma-separated shot sides to search",
    )
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser(
        "branch",
        help="sweep q or R and tabulate the solution branches",
        formatter_class=fmt,
    )
    _add_common(sp)
    sp.add_argument("--g", required=True, help="pow:<q> or combo:<q>,<r>")
    sp.add_argument(
        "--param", choices=("q", "R"), default="q", help="sweep parameter"
    )
    sp.add_argument("--start", type=float, required=True, help="sweep start")
    sp.add_argument("--stop", type=float, required=True, help="sweep stop")
    sp.add_argument("--steps", type=int, default=11, help="sweep length")
    sp.add_argument(
        "--max-zeros", type=int, default=3, help="largest zero count to track"
    )
    sp.add_argument(
        "--sides",
        default="lower,upper",
        help="comma-separated shot sides to search",
    )
    sp.add_argument("--svg", default=None, help="also draw the table to this SVG")
    sp.set_defaults(func=cmd_branch)

    sp = sub.add_parser(
        "rstar",
        help="smallest outer radius carrying k-zero solutions (p < 2)",
        formatter_class=fmt,
    )
    _add_common(sp)
    sp.add_argument("--g", required=True, help="pow:<q> or combo:<q>,<r>")
    sp.add_argument("--k", type=int, required=True, help="zero count")
    sp.add_argument(
        "--annulus-ratio",
        type=float,
        default=None,
        help="use annuli with this inner/outer ratio instead of balls",
    )
    sp.add_argument(
        "--r-cap", type=float, default=1e4, help="give up beyond this radius"
    )
    sp.set_defaults(func=cmd_rstar)
    return ap


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
