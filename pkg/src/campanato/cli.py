"""Command line: ``campanato {norm,osc,decay,classify,commutator,verify}``.

Results go to stdout (or ``--out``); the metadata header, scenario echo and
suite pass/fail lines go to stderr. Exit codes: 0 success, 1 computation
error or failed suite, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import suites
from .commutator import commutator_apply, tail_decay_probe
from .errors import CampanatoError, ConfigError
from .grid import Cube
from .io import curve_csv, curve_svg, fmt, rows_csv, write_text
from .oscillation import MOLLIFIER, osc_many
from .scenario import read_scenario_dict, scenario_from_dict
from .spaces import norm
from .vanishing import _domain, classify, default_far, far_cube_curve, large_cube_curve, small_cube_curve

COMMANDS = ("norm", "osc", "decay", "classify", "commutator", "verify")
MODES = ("small", "large", "far")


def _floats(text: str, name: str) -> list:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"{name} must be a comma-separated list of numbers") from None


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON scenario file; flags below override its entries")
    common.add_argument("--fn", help="catalog function name")
    common.add_argument("--params", help="catalog parameters as a JSON object")
    common.add_argument("--alpha", type=float, help="oscillation order in [0, 1]")
    common.add_argument("--space", action="append", help="space (l1, lp:P, morrey:P:Q, ...); repeatable")
    common.add_argument("--dim", type=int, help="dimension (1 or 2)")
    common.add_argument("--half-width", type=float, help="half width of the sampling box")
    common.add_argument("--resolution", type=int, help="samples per axis")
    common.add_argument("--seed", type=int, help="seed for randomized suites")
    common.add_argument("--out", help="write the result here instead of stdout")
    common.add_argument("--format", choices=("csv", "svg"), default="csv")

    p = argparse.ArgumentParser(prog="campanato", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", metavar="command")
    sub.required = True
    sp = sub.add_parser("norm", parents=[common], help="||f 1_Q||_X for each --space")
    sp.add_argument("--cube", help="lo,hi per axis (default: the sampling box)")
    sp = sub.add_parser("osc", parents=[common], help="oscillation of f on one cube, per --space")
    sp.add_argument("--cube", required=True, help="lo,hi per axis")
    sp = sub.add_parser("decay", parents=[common], help="one decay curve as CSV or SVG")
    sp.add_argument("--mode", choices=MODES, default="small")
    sub.add_parser("classify", parents=[common], help="vanishing flags for each --space")
    sp = sub.add_parser("commutator", parents=[common], help="[b, I_alpha] f on the lattice")
    sp.add_argument("--b", dest="symbol", default="poly", help="catalog name of the symbol b")
    sp.add_argument("--b-params", help="symbol parameters as a JSON object (default: b(x) = x_1)")
    sp.add_argument("--kernel-alpha", type=float, help="fractional order of I_alpha (default 0.5)")
    sp.add_argument("--diagonal-rule", choices=("omit_cell", "symmetric_average"))
    sp.add_argument("--truncation-radius", type=float)
    sp.add_argument("--at", help="print the value at the lattice node nearest to this point")
    sp.add_argument("--radii", help="comma-separated radii: print the tail curve instead")
    sp.add_argument("--p", type=float, default=2.0, help="Morrey exponent for the tail rate")
    sp = sub.add_parser("verify", parents=[common], help="run acceptance suites")
    sp.add_argument("--suite", action="append", choices=tuple(suites.SUITES),
                    help="suite name; repeatable (default: all)")
    return p


def _scenario_dict(args) -> dict:
    d = read_scenario_dict(args.config) if args.config else {}
    fn = dict(d.get("function", {}))
    if args.fn is not None:
        fn = {"name": args.fn}
    if args.params is not None:
        try:
            params = json.loads(args.params)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--params is not valid JSON: {exc}") from None
        fn["params"] = params
    if not fn and args.command != "verify":
        raise ConfigError("name a function with --fn or --config")
    d["function"] = fn or {"name": "loglog"}
    if args.alpha is not None:
        d["alpha"] = args.alpha
    if args.space:
        d["spaces"] = list(args.space)
    grid = dict(d.get("grid", {}))
    for key, val in (("dim", args.dim), ("half_width", args.half_width), ("samples", args.resolution)):
        if val is not None:
            grid[key] = val
    d["grid"] = grid
    if args.seed is not None:
        d["seed"] = args.seed
    if args.command == "commutator":
        ker = dict(d.get("kernel", {}))
        for key, val in (("alpha_frac", args.kernel_alpha), ("diagonal_rule", args.diagonal_rule),
                         ("truncation_radius", args.truncation_radius)):
            if val is not None:
                ker[key] = val
        d["kernel"] = ker
    return d


def _cube(text, dim):
    vals = _floats(text, "--cube")
    if len(vals) != 2 * dim:
        raise ConfigError(f"--cube needs {2 * dim} numbers (lo,hi per axis)")
    return Cube.from_bounds(vals[0::2], vals[1::2])


class _Report:
    def __init__(self, args, scenario, grid):
        self.args, self.scenario, self.grid = args, scenario, grid
        self.meta = {"resolution": f"{grid.n} samples per axis on {grid.box.describe()}"}

    def emit(self, text: str):
        for k, v in self.meta.items():
            print(f"# {k}: {v}", file=sys.stderr)
        print(f"# scenario: {self.scenario.echo()}", file=sys.stderr)
        if self.args.out:
            write_text(text, self.args.out)
        else:
            sys.stdout.write(text)


def _defaults_meta(rep: _Report, family: str, thresholds="not used", truncation="not used"):
    rep.meta.update({"family": family, "thresholds": thresholds, "truncation radius": truncation,
                     "mollifier": MOLLIFIER})


def _values_text(labels, values) -> str:
    if len(values) == 1:
        return fmt(values[0]) + "\n"
    return rows_csv(zip(labels, values), header=("space", "value"))


def _cmd_norm(args, sc, grid, f, rep):
    Q = _cube(args.cube, grid.dim) if args.cube else f.box
    spaces = sc.build_spaces(grid)
    _defaults_meta(rep, f"single cube {Q.describe()}")
    rep.emit(_values_text([X.describe() for X in spaces], [norm(X, f, Q) for X in spaces]))


def _cmd_osc(args, sc, grid, f, rep):
    Q = _cube(args.cube, grid.dim)
    spaces = sc.build_spaces(grid)
    vals = osc_many(f, Q, sc.alpha, spaces)
    _defaults_meta(rep, f"single cube {Q.describe()}")
    rep.emit(_values_text([X.describe() for X in spaces], vals))


def _cmd_decay(args, sc, grid, f, rep):
    spaces = sc.build_spaces(grid)
    if len(spaces) != 1:
        raise ConfigError("decay draws one curve: give exactly one --space")
    X = spaces[0]
    cfg = sc.curve_config(grid.dim)
    D = _domain(f, cfg)
    if args.mode == "small":
        curve = small_cube_curve(f, sc.alpha, X, cfg.small_scales, D, cfg.stride_div)
    elif args.mode == "large":
        curve = large_cube_curve(f, sc.alpha, X, cfg.large_scales, D, cfg.stride_div)
    else:
        Q, shifts = default_far(f, D)
        Q = cfg.far_cube or Q
        curve = far_cube_curve(f, sc.alpha, X, Q, cfg.shifts or shifts, cfg.direction)
    _defaults_meta(rep, curve.family_descriptor)
    rep.meta["space"] = X.describe()
    rep.emit(curve_csv(curve) if args.format == "csv" else curve_svg(curve, f"{args.mode} cubes, {X.describe()}"))


def _cmd_classify(args, sc, grid, f, rep):
    spaces = sc.build_spaces(grid)
    cfg, th = sc.curve_config(grid.dim), sc.threshold_config()
    reports = [classify(f, sc.alpha, X, cfg, th) for X in spaces]
    fam = reports[0].small.family_descriptor + " | far: " + reports[0].far.family_descriptor
    _defaults_meta(rep, fam, f"theta={th.theta:g}, floor_fraction={th.floor_fraction:g}")
    for r in reports:
        print(f"# {r.summary()}", file=sys.stderr)
    rows = [("space", "bounded", "small_vanish", "far_vanish", "large_vanish")]
    rows += [(r.space,) + tuple(str(v).lower() for v in r.flag_vector) for r in reports]
    rep.emit("".join(",".join(_csv_cell(c) for c in row) + "\n" for row in rows))


def _csv_cell(c: str) -> str:
    return f'"{c}"' if "," in c else c


def _cmd_commutator(args, sc, grid, f, rep):
    from .grid import catalog

    try:
        bparams = json.loads(args.b_params) if args.b_params else None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--b-params is not valid JSON: {exc}") from None
    if args.symbol == "poly" and bparams is None:
        bparams = {"coeffs": [0.0, 1.0]}
    b = catalog(args.symbol, bparams, grid)
    cfg = sc.kernel_config()
    cfg.check(grid.dim)
    _defaults_meta(rep, "lattice nodes of the sampling box", truncation=f"{cfg.truncation_radius:g}")
    rep.meta["kernel"] = cfg.describe()
    if args.radii:
        tr = tail_decay_probe(b, f, cfg.alpha_frac, args.p, _floats(args.radii, "--radii"), cfg)
        rep.meta["family"] = tr.curve.family_descriptor
        slope = "undefined" if tr.fitted_slope is None else fmt(tr.fitted_slope)
        rep.meta["fitted slope"] = f"{slope} (reference {tr.expected_slope:g})"
        rep.emit(curve_csv(tr.curve) if args.format == "csv" else curve_svg(tr.curve, "tail"))
        return
    C = commutator_apply(b, f, cfg)
    if args.at:
        pt = _floats(args.at, "--at")
        if len(pt) != grid.dim:
            raise ConfigError(f"--at needs {grid.dim} coordinate(s)")
        rep.emit(fmt(C.values[C.node_index(pt)]) + "\n")
        return
    if args.format == "svg":
        raise ConfigError("the lattice field is CSV only; use --radii for a plottable curve")
    mesh = [m.ravel() for m in C.mesh()]
    head = ("x", "value") if grid.dim == 1 else ("x", "y", "value")
    lines = [",".join(head)] + [",".join(fmt(v) for v in row) for row in zip(*mesh, C.values.ravel())]
    rep.emit("\n".join(lines) + "\n")


def _cmd_verify(args, seed: int):
    names = args.suite or list(suites.SUITES)
    rows, ok = [], True
    for name in names:
        res = suites.run_suite(name, seed)
        rows.extend((f"{name}.{k}", v) for k, v in res.rows)
        for line in res.lines():
            print(line, file=sys.stderr)
        ok &= res.passed
    text = rows_csv(rows, header=("quantity", "value"))
    if args.out:
        write_text(text, args.out)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


def _dispatch(args) -> int:
    d = _scenario_dict(args)
    if args.command == "verify":
        return _cmd_verify(args, int(d.get("seed", 0)))
    sc = scenario_from_dict(d)
    grid = sc.grid_spec()
    f = sc.build_function(grid)
    rep = _Report(args, sc, grid)
    {"norm": _cmd_norm, "osc": _cmd_osc, "decay": _cmd_decay, "classify": _cmd_classify,
     "commutator": _cmd_commutator}[args.command](args, sc, grid, f, rep)
    return 0


# flags whose values may start with a minus sign (negative coordinates)
_SIGNED = ("--cube", "--at", "--radii", "--alpha", "--params", "--b-params")


def _attach_signed(argv) -> list:
    out, it = [], iter(argv)
    for tok in it:
        if tok in _SIGNED:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def run(argv=None) -> int:
    parser = _parser()
    argv = _attach_signed(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        print(f"campanato: error: {exc}", file=sys.stderr)
        return 2
    except (CampanatoError, FloatingPointError) as exc:
        print(f"campanato: computation failed: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
