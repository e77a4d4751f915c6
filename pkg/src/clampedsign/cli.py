"""Command-line front end.

Every subcommand writes CSV or JSON with floats at 17 significant digits
and ``\\n`` line endings, so identical invocations give byte-identical
output.  Exit codes: 0 success, 2 invalid input, 3 numerical failure,
4 a Violated or Diverged outcome under ``--strict``.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from contextlib import contextmanager

import numpy as np

from . import __version__
from .cone import EnergyInnerProduct, project_cone
from .errors import InvalidInput, NumericalFailure
from .fd import (
    assemble_1d,
    clamped_operator,
    green_matrix,
    solve,
)
from .grid import Grid, Profile
from .operators import (
    FourthOrderCoeffs,
    auto_factor,
    compose,
    factor_anti_diffusive,
    theorem_lambda_max,
    trivial_factor,
    weight,
    weight_branch,
)
from .semilinear import (
    SemilinearProblem,
    WillmoreProblem,
    branch_sweep,
    lambda_star_bound,
    lambda_star_bracket,
    willmore_solve,
)
from .sign import Verdict, check_sign_preserving, region_map
from .spectral import principal_eigenpair

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL, EXIT_STRICT = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports usage errors as InvalidInput."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise InvalidInput(f"{self.prog}: {message}")


# -------------------------------------------------------------- formatting


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _json_value(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, (bool, np.bool_, int, np.integer)):
        return fmt(v)
    if isinstance(v, (float, np.floating)):
        return fmt(v) if math.isfinite(v) else "null"
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_json_value(x)}" for k, x in v.items()) + "}"
    return "[" + ", ".join(_json_value(x) for x in v) + "]"


def to_json(obj: dict) -> str:
    return _json_value(obj) + "\n"


def to_csv(header, columns) -> str:
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(fmt(v) if not isinstance(v, str) else v for v in row))
    return "\n".join(lines) + "\n"


@contextmanager
def _sink(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="\n") as fh:
            yield fh


def _emit(text, path=None):
    with _sink(path) as fh:
        fh.write(text)


# -------------------------------------------------------------- inputs


def _grid(args, radial_default=False) -> Grid:
    if args.n < 4:
        raise InvalidInput(f"n must be at least 4, got {args.n}")
    rho = getattr(args, "rho", None)
    dim = getattr(args, "dim", 1)
    if dim < 1:
        raise InvalidInput(f"dim must be at least 1, got {dim}")
    if rho is not None:
        return Grid.annulus(args.n, rho, max(dim, 2) if radial_default else dim)
    return Grid.ball(args.n, dim)


def _read_profile(path: str, g: Grid, column: str) -> Profile:
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except (OSError, ValueError) as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from None
    if data.shape != (g.n, 2):
        raise InvalidInput(f"{path}: expected {g.n} rows of 'x,{column}', got shape {data.shape}")
    if np.max(np.abs(data[:, 0] - g.nodes)) > 1e-9:
        raise InvalidInput(f"{path}: x column does not match the nodes of {g.describe()}")
    return Profile(g, data[:, 1])


def _rhs(source: str, g: Grid, column: str = "f") -> Profile:
    if source.startswith("const:"):
        try:
            value = float(source[len("const:"):])
        except ValueError:
            raise InvalidInput(f"bad constant in {source!r}") from None
        return Profile.constant(g, value)
    return _read_profile(source, g, column)


def _radial_requested(args) -> bool:
    return args.B is not None or args.T is not None or args.dim > 1 or args.rho is not None


def _physical(args):
    B = 1.0 if args.B is None else args.B
    T = 0.0 if args.T is None else args.T
    if not B > 0:
        raise InvalidInput(f"B must be positive, got {B}")
    if not T >= 0:
        raise InvalidInput(f"T must be non-negative, got {T}")
    return B, T


def _operator(args):
    """``B Delta^2 - T Delta`` when any radial flag is given, else the
    interval operator ``u'''' + a u''' + lam u''``."""
    if _radial_requested(args):
        g = _grid(args, radial_default=True)
        B, T = _physical(args)
        return clamped_operator(B, T, g), g
    g = _grid(args)
    coeffs = FourthOrderCoeffs.constant(1.0, args.a, args.lam, 0.0, 0.0, g.n)
    return assemble_1d(coeffs, g), g


# -------------------------------------------------------------- commands


def cmd_compose(args):
    g = _grid(args)
    fp = {"auto": auto_factor, "trivial": lambda a, l, g: trivial_factor(a, l, g.n),
          "anti": factor_anti_diffusive}[args.factor](args.a, args.lam, g)
    c = compose(fp, g)
    _emit(to_csv(["x", "a4", "a3", "a2", "a1", "a0"], [g.nodes, c.a4, c.a3, c.a2, c.a1, c.a0]), args.dump)
    return EXIT_OK


def cmd_factor(args):
    g = _grid(args)
    fp = auto_factor(args.a, args.lam, g)
    c = compose(fp, g)
    target = np.array([1.0, args.a, args.lam, 0.0, 0.0])[None, :]
    out = {
        "branch": "trivial" if args.lam <= 0 else weight_branch(args.a, args.lam),
        "eta": fp.eta,
        "lambda_max": theorem_lambda_max(args.a),
        "max_roundtrip_error": float(np.max(np.abs(c.as_array() - target))),
    }
    if args.lam > 0:
        p, dp, ddp, _ = weight(args.a, args.lam, g.nodes)
        ode = np.abs(ddp + args.a * dp + args.lam * p) / np.maximum(np.abs(p), 1.0)
        out["max_ode_residual"] = float(np.max(ode))
    _emit(to_json(out))
    return EXIT_OK


def cmd_solve1d(args):
    g = _grid(args)
    m = assemble_1d(FourthOrderCoeffs.constant(1.0, args.a, args.lam, 0.0, 0.0, g.n), g)
    u = solve(m, _rhs(args.rhs, g))
    _emit(to_csv(["x", "u"], [g.nodes, u.values]), args.out)
    return EXIT_OK


def cmd_solveradial(args):
    g = _grid(args, radial_default=True)
    B, T = _physical(args)
    u = solve(clamped_operator(B, T, g), _rhs(args.rhs, g))
    _emit(to_csv(["x", "u"], [g.nodes, u.values]), args.out)
    return EXIT_OK


def cmd_green(args):
    m, g = _operator(args)
    G = green_matrix(m, g)
    header = ["x"] + [fmt(x) for x in g.nodes]
    lines = [",".join(header)]
    for x, row in zip(g.nodes, G):
        lines.append(",".join([fmt(x)] + [fmt(v) for v in row]))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_check(args):
    m, g = _operator(args)
    rep = check_sign_preserving(m, g, args.tol)
    _emit(to_json({
        "verdict": str(rep.verdict),
        "min_green_normalized": rep.min_green_normalized,
        "violation_location": None if rep.violation_location is None else list(rep.violation_location),
        "boundary_second_derivatives": list(rep.boundary_second_derivatives),
        "solution_negative": rep.solution_negative,
        "tol": rep.tol,
    }))
    if args.strict and rep.verdict is not Verdict.SIGN_PRESERVING:
        return EXIT_STRICT
    return EXIT_OK


def cmd_regionmap(args):
    if args.n < 4:
        raise InvalidInput(f"n must be at least 4, got {args.n}")
    if args.l_max_frac is not None:
        frac = args.l_max_frac
        lam_range = lambda a: (args.l_min, frac * theorem_lambda_max(a))
    else:
        if args.l_max is None:
            raise InvalidInput("regionmap needs --l-max or --l-max-frac")
        lam_range = (args.l_min, args.l_max)
    cells = region_map((args.a_min, args.a_max), lam_range, args.steps, args.n, args.tol,
                       refine=not args.no_refine)
    _emit(to_csv(
        ["a", "lambda", "min_green", "in_theorem_region", "verdict"],
        [[c.a for c in cells], [c.lam for c in cells], [c.min_green for c in cells],
         [c.in_theorem_region for c in cells], [str(c.verdict) for c in cells]],
    ), args.out)
    violated = any(c.verdict is Verdict.VIOLATED for c in cells)
    return EXIT_STRICT if args.strict and violated else EXIT_OK


def cmd_eigen(args):
    g = _grid(args, radial_default=True)
    B, T = _physical(args)
    e = principal_eigenpair(clamped_operator(B, T, g), g, tol=args.tol)
    if args.phi:
        _emit(to_csv(["x", "phi"], [g.nodes, e.phi1.values]), args.phi)
    _emit(to_json({"mu1": e.mu1, "iterations": e.iterations, "residual": e.residual}))
    return EXIT_OK


def cmd_mems(args):
    g = _grid(args, radial_default=True)
    B, T = _physical(args)
    template = SemilinearProblem(B, T, g)
    if args.find_lambda_star:
        lo, hi = lambda_star_bracket(template, args.lambda_hi0, args.tol_lambda)
        _emit(to_json({"lo": lo, "hi": hi, "bound": lambda_star_bound(template)}))
        return EXIT_OK
    if not args.lam:
        raise InvalidInput("mems needs at least one --lambda or --find-lambda-star")
    pts = branch_sweep(template, args.lam)
    _emit(to_csv(
        ["lambda", "converged", "iterations", "min_u"],
        [[p.lam for p in pts], [p.converged for p in pts], [p.iterations for p in pts],
         [p.min_u for p in pts]],
    ), args.out)
    diverged = not all(p.converged for p in pts)
    return EXIT_STRICT if args.strict and diverged else EXIT_OK


def cmd_willmore(args):
    g = _grid(args)
    B, T = _physical(args)
    p = WillmoreProblem(B, T, args.alpha, _rhs(args.rhs, g))
    u = willmore_solve(p, tol=args.tol)
    _emit(to_csv(["x", "u"], [g.nodes, u.values]), args.out)
    return EXIT_OK


def cmd_moreau(args):
    g = _grid(args)
    B, T = _physical(args)
    u = _read_profile(args.input, g, "u")
    s = project_cone(u, EnergyInnerProduct(B, T, g))
    _emit(to_csv(["x", "u", "v", "w"], [g.nodes, u.values, s.v.values, s.w.values]), args.out)
    summary = to_json({"gap": s.gap})
    if args.out is None:
        sys.stderr.write(summary)  # stdout carries the CSV
    else:
        _emit(summary)
    return EXIT_OK


def cmd_version(args):
    _emit(__version__ + "\n")
    return EXIT_OK


# -------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="clampedsign", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def grid_flags(sp, dim=True, rho=True):
        sp.add_argument("--n", type=int, default=128, help="interior node count (>= 4)")
        if dim:
            sp.add_argument("--dim", type=int, default=1, help="space dimension of the ball")
        if rho:
            sp.add_argument("--rho", type=float, default=None, help="inner radius; selects the annulus")

    def physical(sp):
        sp.add_argument("--B", type=float, default=None, help="bending stiffness (default 1)")
        sp.add_argument("--T", type=float, default=None, help="tension (default 0)")

    def beam(sp):
        sp.add_argument("--a", type=float, default=0.0)
        sp.add_argument("--lambda", dest="lam", type=float, default=0.0)

    sp = sub.add_parser("compose", help="coefficients of a factorized operator")
    beam(sp)
    grid_flags(sp, dim=False, rho=False)
    sp.add_argument("--factor", choices=["auto", "trivial", "anti"], default="auto")
    sp.add_argument("--dump", default=None, help="CSV output path (default stdout)")
    sp.set_defaults(func=cmd_compose)

    sp = sub.add_parser("factor", help="summary of the factorization of u''''+a u'''+lambda u''")
    beam(sp)
    grid_flags(sp, dim=False, rho=False)
    sp.set_defaults(func=cmd_factor)

    sp = sub.add_parser("solve1d", help="solve u''''+a u'''+lambda u'' = f on (-1,1)")
    beam(sp)
    grid_flags(sp, dim=False, rho=False)
    sp.add_argument("--rhs", default="const:-1", help="const:<v> or a CSV file with x,f")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_solve1d)

    sp = sub.add_parser("solveradial", help="solve B Delta^2 U - T Delta U = f for radial U")
    physical(sp)
    grid_flags(sp)
    sp.add_argument("--rhs", default="const:-1")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_solveradial)

    for name, func, text in (("green", cmd_green, "dense discrete Green matrix"),
                             ("check", cmd_check, "decide discrete sign preservation")):
        sp = sub.add_parser(name, help=text)
        beam(sp)
        physical(sp)
        grid_flags(sp)
        if name == "green":
            sp.add_argument("--out", default=None)
        else:
            sp.add_argument("--tol", type=float, default=1e-8)
            sp.add_argument("--strict", action="store_true")
        sp.set_defaults(func=func)

    sp = sub.add_parser("regionmap", help="sign verdicts over an (a, lambda) lattice")
    sp.add_argument("--a-min", type=float, required=True)
    sp.add_argument("--a-max", type=float, required=True)
    sp.add_argument("--l-min", type=float, required=True)
    sp.add_argument("--l-max", type=float, default=None)
    sp.add_argument("--l-max-frac", type=float, default=None,
                    help="upper lambda as this fraction of (a^2+pi^2)/4, per a")
    sp.add_argument("--steps", type=int, default=21)
    sp.add_argument("--n", type=int, default=128)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--no-refine", action="store_true")
    sp.add_argument("--strict", action="store_true")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_regionmap)

    sp = sub.add_parser("eigen", help="principal eigenpair of B Delta^2 - T Delta")
    physical(sp)
    grid_flags(sp)
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.add_argument("--phi", default=None, help="write x,phi CSV here")
    sp.set_defaults(func=cmd_eigen)

    sp = sub.add_parser("mems", help="monotone iteration for B Delta^2 u - T Delta u = -lambda/(1+u)^2")
    physical(sp)
    grid_flags(sp)
    sp.add_argument("--lambda", dest="lam", type=float, action="append", default=[])
    sp.add_argument("--find-lambda-star", action="store_true")
    sp.add_argument("--lambda-hi0", type=float, default=1.0)
    sp.add_argument("--tol-lambda", type=float, default=1e-4)
    sp.add_argument("--strict", action="store_true")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_mems)

    sp = sub.add_parser("willmore", help="Newton solve of the Willmore-type graph equation")
    physical(sp)
    grid_flags(sp, dim=False, rho=False)
    sp.add_argument("--alpha", type=float, default=2.5)
    sp.add_argument("--rhs", default="const:-1e-4")
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_willmore)

    sp = sub.add_parser("moreau", help="split u into non-negative and polar parts")
    physical(sp)
    grid_flags(sp, dim=False, rho=False)
    sp.add_argument("--input", required=True, help="CSV with x,u")
    sp.add_argument("--out", default=None, help="CSV path; the gap JSON then goes to stdout")
    sp.set_defaults(func=cmd_moreau)

    sp = sub.add_parser("version", help="print the package version")
    sp.set_defaults(func=cmd_version)
    return parser


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except InvalidInput as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    except NumericalFailure as exc:
        sys.stderr.write(f"numerical failure: {type(exc).__name__}: {exc}\n")
        return EXIT_NUMERICAL


def main():  # pragma: no cover - console entry point
    sys.exit(run())
