"""Command-line front end: ``nhspec <subcommand> ...``.

Usage errors exit with status 2 and solver failures with status 1;
diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np

from . import tables
from .eigensolver import EigenError
from .lognls import ConvergenceError, LogNlsConfig, WrongStateError, table_preset, solve_state
from .ptspec import ConfinedProblem, InfiniteProblem, hermite_wavefunction, infinite_states, scan_confined
from .quadrature import QuadratureError, WeightSpec, build_monic_chain, composite_rule, gauss_rule

THREADS_ENV = "NHSPEC_THREADS"
FORMATS = ("json", "csv", "plot-text")


class UsageError(ValueError):
    pass


@dataclass
class Output:
    """Everything a command can emit; the chosen format picks one view."""

    data: object
    header: list | None = None
    rows: list | None = None
    plot: list | None = None
    default_format: str = "json"
    failures: list = field(default_factory=list)


# -- formatting -----------------------------------------------------------------

def _cell(v) -> str:
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.6g}"
    return str(v)


def render(out: Output, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(out.data, indent=2) + "\n"
    if fmt == "csv":
        if out.rows is None:
            raise UsageError("this command has no CSV form")
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(out.header)
        for row in out.rows:
            writer.writerow([_cell(v) for v in row])
        return buf.getvalue()
    if fmt == "plot-text":
        if out.plot is None:
            raise UsageError("this command has no plot series")
        return plot_text(out.plot)
    raise UsageError(f"unknown format {fmt!r}")


def plot_text(series) -> str:
    """Whitespace-separated two-column text, one pair per line."""
    return "".join(f"{x!r} {y!r}\n" for x, y in series)


def _complex(z) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


# -- argument helpers ---------------------------------------------------------------

def _float(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "+inf", "infinity"):
        return math.inf
    if t in ("-inf", "-infinity"):
        return -math.inf
    try:
        return float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _interval(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"interval must be a,b (got {text!r})")
    return _float(parts[0]), _float(parts[1])


def _float_list(text: str):
    return [_float(p) for p in text.split(",") if p.strip()]


def _int_list(text: str):
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _range(text: str):
    """a:b:step, inclusive of b up to rounding."""
    try:
        a, b, step = (float(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b:step, got {text!r}") from None
    if step <= 0 or b < a:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    n = int(math.floor((b - a) / step + 1e-9)) + 1
    return [round(a + k * step, 12) for k in range(n)]


def _threads_default() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@contextmanager
def _executor(threads: int):
    if threads <= 1:
        yield None
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            yield pool


# -- commands -----------------------------------------------------------------------

def cmd_quad(args) -> Output:
    a, b = args.interval
    spec = WeightSpec(args.c, a, b)
    chain = build_monic_chain(spec, args.order)
    if args.breakpoints:
        rule = composite_rule(spec, args.breakpoints, args.order)
    else:
        rule = gauss_rule(chain, args.order)
    nodes, weights = rule.nodes, rule.weights
    data = {
        "c": spec.c,
        "interval": [spec.a if math.isfinite(spec.a) else str(spec.a), spec.b if math.isfinite(spec.b) else str(spec.b)],
        "order": args.order,
        "breakpoints": list(args.breakpoints or []),
        "nodes": nodes.tolist(),
        "weights": weights.tolist(),
        "gamma": chain.gamma.tolist(),
        "recurrence_a": chain.recurrence_a.tolist(),
        "recurrence_b": chain.recurrence_b.tolist(),
    }
    rows = list(zip(nodes.tolist(), weights.tolist()))
    return Output(data, ["node", "weight"], rows, rows)


def _lognls_rows_output(state: int, rows) -> Output:
    records = [r.as_dict() for r in rows]
    if state == 2:
        header = ["s", "E", "zero"]
        body = [[r.s, r.E, r.nodes[0] if len(r.nodes) > 0 else math.nan] for r in rows]
    else:
        header = ["s", "E", "zero_1", "zero_2"]
        body = [[r.s, r.E, *(list(r.nodes[:2]) + [math.nan] * (2 - len(r.nodes[:2])))] for r in rows]
    failures = [f"s={r.s}: {r.error}" for r in rows if r.error]
    return Output(records, header, body, [(r.s, r.E) for r in rows], "csv", failures)


def cmd_lognls(args) -> Output:
    if args.table1 or args.table2:
        state = 2 if args.table1 else 3
        with _executor(args.threads) as pool:
            rows = tables.lognls_table(state, executor=pool)
        out = _lognls_rows_output(state, rows)
        if args.emit_plot:
            with open(args.emit_plot, "w") as fh:
                fh.write(plot_text(out.plot))
        return out
    N, c = table_preset(args.state, args.s)
    config = LogNlsConfig(
        args.s,
        args.state,
        args.basis if args.basis is not None else N,
        args.c if args.c is not None else c,
        args.nu,
        args.tol,
        args.max_iter,
    )
    sol = solve_state(config)
    data = sol.as_dict()
    r = np.linspace(1e-3, max(6.0, 3.0 * max(sol.nodes_r, default=1.0)), 600)
    psi = sol.wavefunction(r)[0]
    series = list(zip(r.tolist(), psi.tolist()))
    if args.emit_plot:
        with open(args.emit_plot, "w") as fh:
            fh.write(plot_text(series))
    rows = [[config.s, config.state, sol.E, sol.E_hat, sol.iterations, " ".join(f"{z:.6g}" for z in sol.nodes_r)]]
    return Output(data, ["s", "state", "E", "E_hat", "iterations", "nodes_r"], rows, series)


def _spectrum_rows(cells):
    rows, records = [], []
    for (T, N), cell in cells:
        for j, (lam, cls) in enumerate(zip(cell.eigenvalues, cell.classes)):
            rows.append([T, N, j + 1, float(lam.real), float(lam.imag), cls])
        records.append({
            "T": T,
            "N": N,
            "n_pairs": cell.n_pairs,
            "eigenvalues": [_complex(z) for z in cell.eigenvalues],
            "classes": list(cell.classes),
        })
    return rows, records


def cmd_pt_confined(args) -> Output:
    m_pow = {"x": 1, "x3": 3}[args.potential]
    T_list = args.scan_T or [args.T]
    N_list = args.scan_N or [args.N]
    if None in T_list or None in N_list:
        raise UsageError("give --T/--N or --scan-T/--scan-N")
    for N in N_list:
        ConfinedProblem(T_list[0], N, m_pow)
    with _executor(args.threads) as pool:
        result = scan_confined(m_pow, T_list, N_list, executor=pool)
    cells = [((T, N), result.cell(T, N)) for T in T_list for N in N_list]
    rows, records = _spectrum_rows(cells)
    data = {
        "potential": args.potential,
        "cells": records,
        "flips": [
            {"axis": f.axis, "before": list(f.before), "after": list(f.after), "index": f.index,
             "from": f.from_class, "to": f.to_class}
            for f in result.flips
        ],
    }
    plot = [(r[3], r[4]) for r in rows]
    return Output(data, ["T", "N", "index", "re", "im", "class"], rows, plot)


def _infinite_output(problem: InfiniteProblem, states, emit_plot=None) -> Output:
    records = [{"E": s.E, "Delta": s.Delta} for s in states]
    rows = [[j + 1, s.E, s.Delta] for j, s in enumerate(states)]
    x = np.linspace(-8.0, 8.0, 801)
    series = []
    if states:
        a = states[0].a / np.linalg.norm(states[0].a)
        series = list(zip(x.tolist(), np.abs(hermite_wavefunction(problem, a, x)).tolist()))
    if emit_plot:
        with open(emit_plot, "w") as fh:
            fh.write(plot_text(series))
    return Output(records, ["state", "E", "Delta"], rows, series)


def cmd_pt_infinite(args) -> Output:
    problem = InfiniteProblem(args.m, args.alpha, args.gamma, args.N)
    return _infinite_output(problem, infinite_states(problem, args.states), args.emit_plot)


def _confined_table(columns: dict, key_name: str) -> Output:
    rows, records = [], []
    for key, rep in columns.items():
        for j, (lam, cls) in enumerate(zip(rep.eigenvalues, rep.classes)):
            rows.append([key, j + 1, float(lam.real), float(lam.imag), cls])
        records.append({key_name: key, "n_pairs": rep.n_pairs,
                        "eigenvalues": [_complex(z) for z in rep.eigenvalues], "classes": list(rep.classes)})
    return Output(records, [key_name, "index", "re", "im", "class"], rows, [(r[2], r[3]) for r in rows], "csv")


def cmd_reproduce(args) -> Output:
    k = args.table
    if k in (1, 2):
        state = k + 1
        with _executor(args.threads) as pool:
            rows = tables.lognls_table(state, executor=pool)
        return _lognls_rows_output(state, rows)
    if k == 3:
        return _confined_table(tables.table3(), "T")
    if k == 4:
        return _confined_table(tables.table4(), "N")
    problem = InfiniteProblem(3, 1.0, 0.5, 90)
    return _infinite_output(problem, infinite_states(problem, 10))


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    def add_globals(parser, default):
        parser.add_argument("--format", choices=FORMATS, default=default(None),
                            help="output format (default depends on command)")
        parser.add_argument("--out", default=default(None), help="write output here instead of stdout")
        parser.add_argument("--threads", type=int, default=default(_threads_default()),
                            help=f"worker processes for sweeps (default ${THREADS_ENV} or 1)")

    p = argparse.ArgumentParser(prog="nhspec", description=__doc__.splitlines()[0])
    add_globals(p, lambda v: v)
    # global flags are also accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    add_globals(common, lambda v: argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    def command(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    q = command("quad", help="Gauss rule for exp(-c x^2) on an interval")
    q.add_argument("--c", type=_float, required=True)
    q.add_argument("--interval", type=_interval, required=True, help="a,b with b possibly inf")
    q.add_argument("--order", type=int, required=True)
    q.add_argument("--breakpoints", type=_float_list, default=None)
    q.set_defaults(func=cmd_quad)

    g = command("lognls", help="state of the logarithmic radial equation")
    g.add_argument("--s", type=_float, default=1.0)
    g.add_argument("--state", type=int, default=1)
    g.add_argument("--basis", type=int, default=None, help="basis size N (default: preset)")
    g.add_argument("--c", type=_float, default=None, help="basis scale (default: preset)")
    g.add_argument("--nu", type=_float, default=0.8)
    g.add_argument("--tol", type=_float, default=1e-9)
    g.add_argument("--max-iter", type=int, default=2000)
    g.add_argument("--emit-plot", default=None, help="write (r, psi) or (s, E) series here")
    sweep = g.add_mutually_exclusive_group()
    sweep.add_argument("--table1", action="store_true", help="first excited state over the tabulated s grid")
    sweep.add_argument("--table2", action="store_true", help="second excited state over the tabulated s grid")
    g.set_defaults(func=cmd_lognls)

    c = command("pt-confined", help="-D^2 + i x^m on [-T, T]")
    c.add_argument("--potential", choices=("x", "x3"), default="x")
    c.add_argument("--T", type=_float, default=None)
    c.add_argument("--N", type=int, default=None)
    c.add_argument("--scan-T", type=_range, default=None, help="a:b:step")
    c.add_argument("--scan-N", type=_int_list, default=None, help="comma-separated sizes")
    c.set_defaults(func=cmd_pt_confined)

    i = command("pt-infinite", help="-D^2 + i x^m on the line, Hermite basis")
    i.add_argument("--m", type=int, default=3)
    i.add_argument("--alpha", type=_float, default=1.0)
    i.add_argument("--gamma", type=_float, default=0.5)
    i.add_argument("--N", type=int, default=90)
    i.add_argument("--states", type=int, default=10)
    i.add_argument("--emit-plot", default=None, help="write (x, |psi|) of the lowest state here")
    i.set_defaults(func=cmd_pt_infinite)

    r = command("reproduce", help="regenerate a published table with preset parameters")
    r.add_argument("--table", type=int, choices=(1, 2, 3, 4, 5), required=True)
    r.set_defaults(func=cmd_reproduce)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the message
        return int(exc.code or 0)
    if args.threads < 1:
        print("nhspec: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        out = args.func(args)
        text = render(out, args.format or out.default_format)
    except (ConvergenceError, WrongStateError, QuadratureError, EigenError) as exc:
        print(f"nhspec {args.command}: {exc}", file=sys.stderr)
        return 1
    except (UsageError, ValueError, IndexError) as exc:
        print(f"nhspec {args.command}: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for msg in out.failures:
        print(f"nhspec {args.command}: {msg}", file=sys.stderr)
    return 1 if out.failures else 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
