"""Command-line front end.

Subcommands::

    dqdc weights  --grid cheb --n 6 --order 2 --format csv --out W.csv
    dqdc solve    --problem example-a --n 6 --format json --out a.json
    dqdc compare  --problem example-c --n 6 --out errors.csv
    dqdc burgers  --epsilon 0.1 --n 16 --t-end 0.5 --dt 0.001 --out traj.csv

Exit codes: 0 success, 2 usage, 3 I/O failure, 4 numerical failure.
Each run that parses successfully and writes to a file also writes a
manifest ``<out>.manifest.json`` (or the path given with ``--manifest``).
"""

from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np

from . import problems
from .discretize import GRID_KINDS, Grid2D, dc_operators, dq_operator, fd_operator, make_grid
from .errors import ArgumentError, DivergenceError, DqdcError
from .residual import NewtonConfig

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 2, 3, 4


class UsageError(Exception):
    pass


def fmt(v: float) -> str:
    """17 significant digits, enough for doubles to round-trip."""
    # adding 0.0 turns -0.0 into 0.0
    return format(float(v) + 0.0, ".17g")


def _csv_row(values) -> str:
    return ",".join(v if isinstance(v, str) else fmt(v) for v in values)


# weights -------------------------------------------------------------------


def cmd_weights(args) -> tuple[str, int]:
    if args.two_d:
        nx, ny = args.two_d
        if nx < 2 or ny < 2:
            raise UsageError("--two-d needs at least 2 nodes per direction")
        if args.fd:
            raise UsageError("--fd is one-dimensional only")
        which = args.which or {1: "Ex", 2: "Fx"}.get(args.order)
        if which is None:
            raise UsageError("2-D operators exist for orders 1 and 2 only")
        grid = Grid2D(make_grid(args.grid, nx, *args.interval), make_grid(args.grid, ny, *args.interval))
        op = dc_operators(grid)[which]
        W, n = op.W, grid.n
        header = f"# dqdc weights order={op.order} grid={args.grid} n={n} which={which}"
        payload = {
            "kind": "dc", "which": which, "order": op.order, "grid": args.grid, "n": n,
            "nodes_x": grid.gx.nodes.tolist(), "nodes_y": grid.gy.nodes.tolist(),
        }
    else:
        if args.n is None:
            raise UsageError("--n is required")
        grid = make_grid(args.grid, args.n, *args.interval)
        if args.fd:
            if args.order not in (1, 2):
                raise UsageError("--fd supports orders 1 and 2")
            op = fd_operator(grid, args.order)
        else:
            op = dq_operator(grid, args.order)
        W, n = op.W, grid.n
        header = f"# dqdc weights order={args.order} grid={args.grid} n={n}"
        payload = {
            "kind": op.backend, "order": args.order, "grid": args.grid, "n": n, "nodes": grid.nodes.tolist(),
        }
    if args.format == "json":
        payload["weights"] = W.tolist()
        text = json.dumps(payload, indent=2) + "\n"
    else:
        text = header + "\n" + "".join(_csv_row(row) + "\n" for row in W)
    return text, EXIT_OK


# solve / compare -----------------------------------------------------------


def _config(args) -> NewtonConfig:
    return NewtonConfig(tol=args.tol, max_iter=args.max_iter)


def _formulation(args, mode=None) -> problems.Formulation:
    p = args.problem
    if p == "example-a":
        return problems.example_a(args.n, args.grid, args.backend)
    if p == "example-b":
        return problems.example_b(args.n, args.grid, args.backend)
    if p == "example-c":
        return problems.example_c(args.n, mode or args.mode, args.grid, args.backend)
    if p == "dc-example":
        if args.backend != "dq":
            raise UsageError("dc-example supports the dq backend only")
        return problems.dc_example(args.nx, args.ny, args.grid)
    raise UsageError(f"unknown problem {p!r}")


def _failed_result(f: problems.Formulation, report) -> problems.SolveResult:
    last = report.iterates[-1] if report.iterates else f.u0
    return problems.SolveResult(f.problem, f.grid, f.lift(last), report, None, None, dict(f.params))


def solve_result_csv(res: problems.SolveResult) -> str:
    out = io.StringIO()
    two_d = isinstance(res.grid, Grid2D)
    out.write("x,y,solution,oracle,rel_error\n" if two_d else "x,solution,oracle,rel_error\n")
    coords = res.grid.coords() if two_d else (res.grid.nodes,)
    rel = {}
    if res.errors is not None:
        rel = dict(zip(res.interior_index.tolist(), res.errors.tolist()))
    for j in range(res.solution.size):
        row = [c[j] for c in coords] + [res.solution[j]]
        row.append("" if res.oracle is None else fmt(res.oracle[j]))
        row.append(fmt(rel[j]) if j in rel else "")
        out.write(_csv_row(row) + "\n")
    return out.getvalue()


def cmd_solve(args) -> tuple[str, int]:
    f = _formulation(args)
    code = EXIT_OK
    try:
        res = problems.solve_formulation(f, _config(args))
    except DivergenceError as exc:
        print(f"dqdc: {exc}", file=sys.stderr)
        res = _failed_result(f, exc.report)
        code = EXIT_NUMERIC
    if args.format == "json":
        return json.dumps(res.to_dict(), indent=2) + "\n", code
    return solve_result_csv(res), code


def cmd_compare(args) -> tuple[str, int]:
    if args.problem != "example-c":
        raise UsageError("compare is defined only for example-c (the problem with both formulations)")
    cfg = _config(args)
    conv = problems.solve_formulation(_formulation(args, "conventional"), cfg)
    pres = problems.solve_formulation(_formulation(args, "reduced"), cfg)
    lines = ["node,x,e_u_conventional,e_u_present"]
    for k, j in enumerate(conv.interior_index):
        lines.append(f"{j + 1}," + _csv_row([conv.grid.nodes[j], conv.errors[k], pres.errors[k]]))
    return "\n".join(lines) + "\n", EXIT_OK


# burgers -------------------------------------------------------------------


def cmd_burgers(args) -> tuple[str, int]:
    if not args.epsilon > 0:
        raise UsageError("--epsilon must be positive")
    if not args.dt > 0 or args.t_end < 0:
        raise UsageError("need --dt > 0 and --t-end >= 0")
    if args.n < 3:
        raise UsageError("--n must be at least 3")
    tr = problems.burgers_integrate(
        N=args.n, eps=args.epsilon, t_end=args.t_end, dt=args.dt, mode=args.mode,
        grid_kind=args.grid, ic=args.ic, scheme=args.scheme,
    )
    header = "t," + ",".join(f"x{i + 1}" for i in range(tr.grid.n))
    rows = [_csv_row([t, *state]) for t, state in zip(tr.times, tr.states)]
    return "\n".join([header, *rows]) + "\n", EXIT_OK


# plumbing ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dqdc", description="DQ/DC nonlinear solvers")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_default):
        p.add_argument("--out", default="-", help="output path ('-' for standard output)")
        p.add_argument("--manifest", default=None, help="manifest path (default <out>.manifest.json)")
        if fmt_default:
            p.add_argument("--format", choices=("csv", "json"), default=fmt_default)

    parser.commands = {}
    w = sub.add_parser("weights", help="emit a weighting-coefficient matrix")
    w.add_argument("--grid", choices=GRID_KINDS, default="cheb")
    w.add_argument("--n", type=int)
    w.add_argument("--order", type=int, choices=(1, 2, 3, 4), required=True)
    w.add_argument("--fd", action="store_true", help="finite-difference operator (uniform grid)")
    w.add_argument("--two-d", nargs=2, type=int, metavar=("NX", "NY"))
    w.add_argument("--which", choices=("Ex", "Ey", "Fx", "Fy", "Fxy"))
    w.add_argument("--interval", nargs=2, type=float, default=(0.0, 1.0), metavar=("A", "B"))
    common(w, "csv")
    w.set_defaults(func=cmd_weights)
    parser.commands["weights"] = w

    def newton_flags(p):
        p.add_argument("--n", type=int, default=6)
        p.add_argument("--grid", choices=GRID_KINDS, default="cheb")
        p.add_argument("--backend", choices=("dq", "fd"), default="dq")
        p.add_argument("--tol", type=float, default=1e-10)
        p.add_argument("--max-iter", type=int, default=25)

    s = sub.add_parser("solve", help="solve a worked problem with Newton-Raphson")
    s.add_argument("--problem", choices=problems.PROBLEMS, required=True)
    newton_flags(s)
    s.add_argument("--nx", type=int, default=7)
    s.add_argument("--ny", type=int, default=7)
    s.add_argument("--mode", choices=("conventional", "reduced"), default="conventional")
    common(s, "json")
    s.set_defaults(func=cmd_solve)
    parser.commands["solve"] = s

    c = sub.add_parser("compare", help="per-node errors of the conventional and reduced formulations")
    c.add_argument("--problem", choices=problems.PROBLEMS, required=True)
    newton_flags(c)
    common(c, None)
    c.set_defaults(func=cmd_compare)
    parser.commands["compare"] = c

    b = sub.add_parser("burgers", help="integrate Burgers' equation by the method of lines")
    b.add_argument("--epsilon", type=float, default=0.1)
    b.add_argument("--n", type=int, default=16)
    b.add_argument("--t-end", type=float, default=0.5)
    b.add_argument("--dt", type=float, default=1e-3)
    b.add_argument("--mode", choices=("conventional", "reduced"), default="reduced")
    b.add_argument("--ic", choices=tuple(problems.INITIAL_CONDITIONS), default="sin")
    b.add_argument("--grid", choices=GRID_KINDS, default="cheb")
    b.add_argument("--scheme", choices=problems.SCHEMES, default="gauss4")
    common(b, None)
    b.set_defaults(func=cmd_burgers)
    parser.commands["burgers"] = b
    return parser


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _write_manifest(args, argv, code: int) -> None:
    path = args.manifest or (None if args.out == "-" else args.out + ".manifest.json")
    if path is None:
        return
    spec = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out", "manifest")}
    manifest = {
        "command": args.command,
        "argv": list(argv),
        "spec": json.loads(json.dumps(spec)),
        "outputs": [] if args.out == "-" else [args.out],
        "exitCode": code,
    }
    _write(path, json.dumps(manifest, indent=2) + "\n")


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        text, code = args.func(args)
    except (UsageError, ArgumentError) as exc:
        print(f"dqdc {args.command}: error: {exc}", file=sys.stderr)
        parser.commands[args.command].print_usage(sys.stderr)
        code, text = EXIT_USAGE, None
    except (DqdcError, np.linalg.LinAlgError, ArithmeticError, ValueError) as exc:
        print(f"dqdc {args.command}: numerical failure: {exc}", file=sys.stderr)
        code, text = EXIT_NUMERIC, None
    if text is not None:
        try:
            _write(args.out, text)
        except OSError as exc:
            print(f"dqdc {args.command}: cannot write {args.out}: {exc}", file=sys.stderr)
            code = EXIT_IO
    try:
        _write_manifest(args, argv, code)
    except OSError as exc:
        print(f"dqdc {args.command}: cannot write manifest: {exc}", file=sys.stderr)
        code = EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
