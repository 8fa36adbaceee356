"""Command-line entry point.

    rsm2d solve --potential sho --n-basis 22 --length 11.97 --states 21
    rsm2d optimize --potential qcd --n-values 30 36 42 --out qcd_curve.txt
    rsm2d convergence --potential sho --n-range 8:20 --out conv.txt
    rsm2d grid --potential qcd --n-basis 42 --length 15.53 --state 0 --grid 101 --out psi0.txt

Exit codes: 0 success, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import diagnostics, domain_optimizer
from .discretization import BasisSpec, assemble
from .eigensolver import solve, wavefunction_grid
from .errors import InvalidPotentialError, RSMError
from .potentials import builder_for

log = logging.getLogger("rsm2d")

EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class UsageError(Exception):
    pass


def fmt(v: float) -> str:
    """17 significant digits, always recognisable as a float."""
    if not math.isfinite(v):
        return "null"
    s = f"{v:.17g}"
    if "." not in s and "e" not in s:
        s += ".0"
    return s


def to_json(obj, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON: insertion-ordered keys, floats at 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}"{k}": {to_json(v, indent, _level + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.floating, np.integer)) and not isinstance(v, bool)
               for v in obj):
            return "[" + ", ".join(to_json(v) for v in obj) + "]"
        items = [pad + to_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(float(obj))
    s = str(obj).replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{s}"'


@dataclass
class RunConfig:
    potential: str
    n_basis: int
    length: float | str = "auto"
    states_out: int = 10
    grid_out: int | None = None
    precision_report: bool = False
    alpha: float = 1.0

    def __post_init__(self):
        if self.n_basis < 2:
            raise UsageError("--n-basis must be >= 2")
        if not 1 <= self.states_out <= self.n_basis**2:
            raise UsageError(f"--states must be in [1, {self.n_basis**2}]")
        if self.length != "auto" and not (isinstance(self.length, float) and self.length > 0):
            raise UsageError("--length must be positive")
        if self.grid_out is not None and self.grid_out < 2:
            raise UsageError("--grid must be >= 2")

    def echo(self) -> dict:
        return {
            "potential": self.potential,
            "alpha": self.alpha,
            "n_basis": self.n_basis,
            "length": self.length,
            "states": self.states_out,
            "grid": self.grid_out,
            "precision_report": self.precision_report,
        }


def _builder(args):
    if not args.alpha > 0:
        raise UsageError("--alpha must be positive")
    try:
        return builder_for(args.potential, alpha=args.alpha)
    except InvalidPotentialError as exc:
        raise UsageError(f"unknown or malformed potential {args.potential!r}: {exc}") from None


def _is_sho(name: str) -> bool:
    return name.strip().lower() == "sho"


def _parse_range(text: str) -> list:
    try:
        parts = [int(p) for p in text.split(":")]
    except ValueError:
        raise UsageError(f"bad --n-range {text!r}; use START:STOP[:STEP]") from None
    if len(parts) == 1:
        parts = parts * 2
    if len(parts) == 2:
        parts.append(1)
    if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
        raise UsageError(f"bad --n-range {text!r}; use START:STOP[:STEP]")
    return list(range(parts[0], parts[1] + 1, parts[2]))


def _auto_curve_values(ns) -> list:
    # the default samples when they cover the request (N+1 included), else 5 spread over it
    lo, hi = min(ns), max(ns) + 1
    default = domain_optimizer.DEFAULT_CURVE_N
    if default[0] <= lo and hi <= default[-1]:
        return list(default)
    return sorted({int(round(v)) for v in np.linspace(max(lo, 2), max(hi, lo + 4), 5)})


def _load_or_build_curve(args, builder, ns):
    path = args.curve_file
    if path and os.path.exists(path):
        return domain_optimizer.read_curve(path)
    if getattr(args, "no_auto_curve", False):
        raise UsageError(f"curve file {path!r} not found and --no-auto-curve is set")
    values = _auto_curve_values(ns)
    log.info("building L_hat curve at N=%s", values)
    curve = domain_optimizer.build_curve(values, builder, tuple(args.bracket))
    if path:
        domain_optimizer.write_curve(curve, path)
    return curve


def _write(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _grid_text(xs, ys, psi) -> str:
    lines = ["x y psi"]
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            lines.append(f"{fmt(x)} {fmt(y)} {fmt(psi[i, j])}")
    return "\n".join(lines) + "\n"


def _length_for(args, builder, n_basis):
    if args.length is not None:
        return float(args.length), "explicit", None
    curve = _load_or_build_curve(args, builder, [n_basis])
    return curve(n_basis), "curve", curve


# -- commands ---------------------------------------------------------------

def cmd_solve(args) -> int:
    builder = _builder(args)
    cfg = RunConfig(args.potential, args.n_basis,
                    "auto" if args.length is None else float(args.length),
                    args.states, args.grid, args.precision_report, args.alpha)
    t0 = time.perf_counter()
    length, source, curve = _length_for(args, builder, cfg.n_basis)
    t1 = time.perf_counter()
    op = assemble(BasisSpec.square(cfg.n_basis, length), builder(length, length))
    sol = solve(op)
    t2 = time.perf_counter()

    k = cfg.states_out
    energies = sol.energies[:k]
    sol_next = None
    if cfg.precision_report:
        n1 = cfg.n_basis + 1
        l1 = curve(n1) if curve is not None else length
        sol_next = solve(assemble(BasisSpec.square(n1, l1), builder(l1, l1)))
    t3 = time.perf_counter()

    exact = diagnostics.sho_exact_energies(k) if _is_sho(args.potential) else None
    # cluster on the full spectrum so a level straddling the cut keeps its true size
    full = [c for c in diagnostics.cluster_degeneracies(sol.energies) if c[0] < k]
    size = {i: len(c) for c in full for i in c}
    clusters = [[i for i in c if i < k] for c in full]
    rows = []
    for i in range(k):
        row = {"index": i, "energy": float(energies[i]), "cluster_size": size[i]}
        if exact is not None:
            row["delta_E"] = diagnostics.delta_E(float(energies[i]), float(exact[i]))
        if sol_next is not None:
            row["delta_hat_E"] = diagnostics.delta_hat_E(sol, sol_next, i, check_overlap=False)
        if exact is not None and i == 0 and size[i] == 1:
            row["delta_psi"] = diagnostics.delta_psi(sol, 0, diagnostics.ShoReference(0, 0))
            row["grid_M"] = diagnostics.GRID_M
        rows.append(row)

    doc = {
        "command": "solve",
        "config": cfg.echo(),
        "length": length,
        "length_source": source,
        "basis_dimension": cfg.n_basis**2,
        "energies": [float(e) for e in energies],
        "clusters": clusters,
        "states": rows,
    }
    if cfg.grid_out:
        stem = args.out if args.out not in (None, "-") else "rsm2d"
        files = []
        for i in range(k):
            path = f"{stem}.state{i}.grid.txt"
            _write(_grid_text(*wavefunction_grid(sol, i, cfg.grid_out)), path)
            files.append(path)
        doc["grid_files"] = files
    if args.timing:
        doc["timing"] = {"length_s": t1 - t0, "assemble_solve_s": t2 - t1,
                         "precision_report_s": t3 - t2, "total_s": time.perf_counter() - t0}
    _write(to_json(doc) + "\n", args.out)
    return 0


def cmd_optimize(args) -> int:
    builder = _builder(args)
    if not args.n_values:
        raise UsageError("--n-values needs at least 3 basis sizes")
    try:
        curve = domain_optimizer.build_curve(args.n_values, builder, tuple(args.bracket), args.state)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.out in (None, "-"):
        lines = ["N L_hat E0"] + [f"{n} {fmt(l)} {fmt(e)}" for n, l, e in curve.samples]
        _write("\n".join(lines) + "\n", None)
    else:
        domain_optimizer.write_curve(curve, args.out)
    return 0


def cmd_convergence(args) -> int:
    builder = _builder(args)
    ns = _parse_range(args.n_range)
    curve = _load_or_build_curve(args, builder, ns)
    exact = 2.0 if _is_sho(args.potential) else None
    rows = diagnostics.convergence_study(ns, curve, exact, builder, args.state)
    header = "N delta_E" if exact is not None else "N delta_hat_E"
    _write("\n".join([header] + [f"{n} {fmt(err)}" for n, err in rows]) + "\n", args.out)
    return 0


def cmd_grid(args) -> int:
    builder = _builder(args)
    if args.n_basis < 2:
        raise UsageError("--n-basis must be >= 2")
    if args.grid < 2:
        raise UsageError("--grid must be >= 2")
    if not 0 <= args.state < args.n_basis**2:
        raise UsageError(f"--state must be in [0, {args.n_basis**2 - 1}]")
    length, _, _ = _length_for(args, builder, args.n_basis)
    sol = solve(assemble(BasisSpec.square(args.n_basis, length), builder(length, length)))
    _write(_grid_text(*wavefunction_grid(sol, args.state, args.grid)), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rsm2d", description=__doc__.split("\n")[0] or None,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--potential", required=True,
                       help="sho, qcd, none, or terms like '1*(x)^2*(y)^2; 0.5*(x)^4'")
        p.add_argument("--alpha", type=float, default=1.0, help="coefficient of the qcd potential")
        p.add_argument("--bracket", type=float, nargs=2, metavar=("LO", "HI"),
                       default=list(domain_optimizer.DEFAULT_BRACKET),
                       help="box-length search interval for optimization")
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    def lengths(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--length", type=float, default=None, help="explicit box length L")
        g.add_argument("--auto", action="store_true", help="take L from the L_hat curve (default)")
        p.add_argument("--curve-file", default=None, help="L_hat curve table (read, or written when built)")
        p.add_argument("--no-auto-curve", action="store_true",
                       help="fail instead of building a missing curve")

    p = sub.add_parser("solve", help="solve for the spectrum and report diagnostics")
    common(p)
    lengths(p)
    p.add_argument("--n-basis", type=int, required=True)
    p.add_argument("--states", type=int, default=10, help="number of lowest states to report")
    p.add_argument("--grid", type=int, default=None, metavar="M",
                   help="also export M x M wavefunction grids of the reported states")
    p.add_argument("--precision-report", action="store_true",
                   help="estimate errors from a second solve at N+1")
    p.add_argument("--timing", action="store_true", help="include wall-clock timings")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("optimize", help="optimize the box length for several N")
    common(p)
    p.add_argument("--n-values", type=int, nargs="*", default=None)
    p.add_argument("--state", type=int, default=0, help="state whose energy is minimized")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("convergence", help="error versus N along the L_hat curve")
    common(p)
    p.add_argument("--n-range", required=True, help="START:STOP[:STEP], inclusive")
    p.add_argument("--curve-file", default=None)
    p.add_argument("--state", type=int, default=0)
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("grid", help="export one wavefunction on an M x M grid")
    common(p)
    lengths(p)
    p.add_argument("--n-basis", type=int, required=True)
    p.add_argument("--state", type=int, default=0)
    p.add_argument("--grid", type=int, default=101, metavar="M")
    p.set_defaults(func=cmd_grid)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"rsm2d: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RSMError as exc:
        print(f"rsm2d: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
