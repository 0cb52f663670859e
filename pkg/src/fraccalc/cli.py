"""Command-line interface: deterministic CSV datasets for every engine and figure.

Exit status: 0 success, 2 usage or domain error, 3 numerical convergence failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from . import closedform, differint, laplace, mittag, physics, specfun
from .errors import ConvergenceError, FracCalcError
from .settings import SETTINGS, load_config

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONVERGENCE = 3

POLE_GUARD = 1e-3
DEFAULT_V0 = (0.0, 10.0, 20.0, 30.0, 39.24, 50.0, 60.0)
UNIT_ALPHAS = tuple(round(0.1 * k, 10) for k in range(11))


def fmt(v) -> str:
    if v is None:
        return ""
    v = float(v)
    if not math.isfinite(v):
        return ""
    return format(v, ".17g")


def parse_floats(text: str) -> list[float]:
    try:
        return [float(p) for p in text.replace(";", ",").split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def parse_interval(text: str) -> tuple[float, float]:
    vals = parse_floats(text)
    if len(vals) != 2 or not vals[0] < vals[1]:
        raise argparse.ArgumentTypeError(f"interval must be 'lo,hi' with lo < hi, got {text!r}")
    return vals[0], vals[1]


def parse_pairs(text: str) -> list[tuple[float, float]]:
    pairs = []
    for chunk in text.split(";"):
        vals = parse_floats(chunk)
        if len(vals) != 2:
            raise argparse.ArgumentTypeError(f"ML parameters must be 'a,b;a,b;...', got {text!r}")
        pairs.append((vals[0], vals[1]))
    return pairs


@dataclass
class SweepSpec:
    """Grid for a differint sweep: x runs over (a, x_max] in n_samples points."""

    alpha_values: Sequence[float]
    x_min: float
    x_max: float
    n_samples: int
    function: str = "identity"
    engine: str = "closed"
    a: float | None = None
    form: str = "rl"
    grid: int | None = None

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise FracCalcError("x_min must be below x_max")
        if self.n_samples < 2:
            raise FracCalcError("need at least 2 samples")
        if self.a is None:
            self.a = self.x_min

    def xs(self) -> np.ndarray:
        return self.x_min + (self.x_max - self.x_min) * np.arange(1, self.n_samples + 1) / self.n_samples


@dataclass
class Table:
    header: list[str]
    rows: list[list[str]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def render(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        w.writerows(self.rows)
        return buf.getvalue()


def _column(name: str, fn: Callable[[float], float], xs: Iterable[float], notes: list[str]) -> list[str]:
    out = []
    failures = 0
    first = ""
    for x in xs:
        try:
            out.append(fmt(fn(float(x))))
        except ConvergenceError:
            # a failed iteration is a numerical fault, not a rejected point: exit 3
            raise
        except FracCalcError as exc:
            out.append("")
            failures += 1
            first = first or str(exc)
    if failures:
        notes.append(f"{name}: {failures} empty cell(s): {first}")
    return out


def _assemble(header, columns) -> Table:
    t = Table(list(header))
    t.rows = [list(r) for r in zip(*columns)]
    return t


# ---------------------------------------------------------------------------
# subcommand builders (pure: return a Table)
# ---------------------------------------------------------------------------


def gamma_table(lo: float = -5.0, hi: float = 5.0, step: float = 0.01) -> Table:
    n = int(round((hi - lo) / step))
    xs = [round(lo + k * step, 12) for k in range(n + 1)]
    keep = [x for x in xs if not (x < POLE_GUARD and abs(x - round(x)) < POLE_GUARD)]
    notes: list[str] = []
    cols = [
        [fmt(x) for x in keep],
        _column("gamma", specfun.gamma, keep, notes),
        _column("reciprocal_gamma", specfun.reciprocal_gamma, keep, notes),
    ]
    t = _assemble(["x", "gamma", "reciprocal_gamma"], cols)
    t.notes = notes
    return t


def ml_table(pairs, lo: float, hi: float, samples: int) -> Table:
    zs = np.linspace(lo, hi, samples)
    notes: list[str] = []
    for a, b in pairs:
        mittag.MLParams(a, b)
    cols = [[fmt(z) for z in zs]]
    header = ["z"]
    for a, b in pairs:
        name = f"E({a:g};{b:g})"
        header.append(name)
        cols.append(_column(name, lambda z, a=a, b=b: mittag.ml((a, b), z), zs, notes))
    t = _assemble(header, cols)
    t.notes = notes
    return t


def _engine_fn(spec: SweepSpec, alpha: float) -> Callable[[float], float]:
    f = differint.catalogue(spec.function)
    a = spec.a
    if spec.engine == "gl":
        n = spec.grid or SETTINGS.gl_points
        return lambda x: differint.gl_differint(f, differint.DifferintOrder(alpha, a, x), n)
    grid = differint.GridSpec(spec.grid) if spec.grid else differint.GridSpec()
    if spec.engine == "rl":
        return lambda x: differint.rl_derivative(f, differint.DifferintOrder(alpha, a, x), grid)
    if spec.engine == "caputo":
        return lambda x: differint.caputo_derivative(f, differint.DifferintOrder(alpha, a, x), grid)
    if spec.engine == "closed":
        rule = closedform.lookup(spec.function, spec.form, alpha, a)
        return lambda x: rule(x)
    raise FracCalcError(f"unknown engine {spec.engine!r}")


def differint_table(spec: SweepSpec) -> Table:
    f = differint.catalogue(spec.function)
    xs = spec.xs()
    notes: list[str] = []
    cols = [[fmt(x) for x in xs], _column("f", f, xs, notes)]
    header = ["x", "f"]
    for alpha in spec.alpha_values:
        name = f"alpha={alpha:g}"
        header.append(name)
        try:
            fn = _engine_fn(spec, alpha)
        except FracCalcError as exc:
            notes.append(f"{name}: {len(xs)} empty cell(s): {exc}")
            cols.append([""] * len(xs))
            continue
        cols.append(_column(name, fn, xs, notes))
    t = _assemble(header, cols)
    t.notes = notes
    return t


def falling_table(alpha: float, m_over_b: float, g: float, v0s, lo: float, hi: float, samples: int) -> Table:
    ts = np.linspace(lo, hi, samples)
    notes: list[str] = []
    cols = [[fmt(t) for t in ts]]
    header = ["t"]
    for v0 in v0s:
        p = physics.FallingBodyParams(m_over_b, g, v0, alpha)
        name = f"v0={v0:g}"
        header.append(name)
        cols.append(_column(name, lambda t, p=p: physics.falling_velocity(p, t), ts, notes))
    t = _assemble(header, cols)
    t.notes = notes
    return t


def tautochrone_table(T: float, g: float, lo: float, hi: float, samples: int, grid: int | None) -> Table:
    spec = physics.TautochroneSpec(T, g, hi)
    gs = differint.GridSpec(grid) if grid else differint.GridSpec()
    ys = lo + (hi - lo) * np.arange(1, samples + 1) / samples
    slope = physics.arclength_slope(spec)
    notes: list[str] = []
    cols = [
        [fmt(y) for y in ys],
        _column("S_closed", lambda y: physics.tautochrone_arclength(spec, y), ys, notes),
        _column("S_quadrature", lambda y: physics.tautochrone_arclength(spec, y, "quadrature", gs), ys, notes),
        _column("descent_phi", lambda y: physics.abel_forward(slope, y, 0.5, gs), ys, notes),
    ]
    t = _assemble(["y", "S_closed", "S_quadrature", "descent_phi"], cols)
    t.notes = notes
    return t


def laplace_table(alphas, svals, functions, grid: int | None) -> Table:
    gs = differint.GridSpec(grid or 128, 1)
    t = Table(["identity", "function", "alpha", "s", "lhs", "rhs", "rel_err"])
    for s in svals:
        q = laplace.LaplaceQuery(s, 40.0, 16 * 20)
        for tag in functions:
            f = differint.catalogue(tag)
            for alpha in alphas:
                for kind, op, rhs_fn in (
                    ("caputo", differint.caputo_derivative, laplace.caputo_transform_rhs),
                    ("rl", differint.rl_derivative, laplace.rl_transform_rhs),
                ):
                    d = np.vectorize(lambda x, op=op, alpha=alpha, f=f: op(f, differint.DifferintOrder(alpha, 0.0, x), gs))
                    lhs = laplace.laplace_numeric(d, q)
                    rhs = rhs_fn(f, alpha, s, q)
                    err = abs(lhs - rhs) / max(abs(rhs), 1e-300)
                    t.rows.append([kind, tag, fmt(alpha), fmt(s), fmt(lhs), fmt(rhs), fmt(err)])
    return t


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------

TWO_PI = 2.0 * math.pi


def figure_specs() -> list[tuple[str, str, str, Callable[[], Table]]]:
    """(file name, figure description, equivalent invocation, builder)."""
    alist = ",".join(f"{a:g}" for a in UNIT_ALPHAS)

    def sweep(function, engine, lo, hi, form="rl", alphas=UNIT_ALPHAS, samples=200):
        return lambda: differint_table(SweepSpec(list(alphas), lo, hi, samples, function, engine, lo, form))

    ml_pairs = [(0.5, 1.0), (1.0, 1.0), (1.5, 1.0), (2.0, 1.0), (1.0, 2.0), (2.0, 2.0)]
    return [
        ("gamma.csv", "Gamma and 1/Gamma on [-5, 5]", "gamma --interval=-5,5 --step 0.01", lambda: gamma_table()),
        (
            "mittag_leffler.csv",
            "Mittag-Leffler E_{alpha,beta} for several (alpha, beta)",
            "ml --params '0.5,1;1,1;1.5,1;2,1;1,2;2,2' --interval=-5,5 --samples 201",
            lambda: ml_table(ml_pairs, -5.0, 5.0, 201),
        ),
        (
            "sin_integer_derivatives.csv",
            "integer derivatives of sin, orders 0..4",
            f"differint --function sin --engine gl --alpha 0,1,2,3,4 --interval 0,{TWO_PI!r} --samples 200",
            sweep("sin", "gl", 0.0, TWO_PI, alphas=(0, 1, 2, 3, 4)),
        ),
        (
            "identity_rl_a1.csv",
            "RL derivative of the identity on (1, x)",
            f"differint --function identity --engine closed --form rl --alpha {alist} --interval 1,3",
            sweep("identity", "closed", 1.0, 3.0, "rl"),
        ),
        (
            "identity_caputo_a1.csv",
            "Caputo derivative of the identity on (1, x)",
            f"differint --function identity --engine closed --form caputo --alpha {alist} --interval 1,3",
            sweep("identity", "closed", 1.0, 3.0, "caputo"),
        ),
        (
            "identity_a0.csv",
            "derivative of the identity on (0, x)",
            f"differint --function identity --engine closed --alpha {alist} --interval 0,2",
            sweep("identity", "closed", 0.0, 2.0),
        ),
        (
            "sqrt.csv",
            "derivative of x^(1/2) on (0, x)",
            f"differint --function sqrt --engine closed --alpha {alist} --interval 0,2",
            sweep("sqrt", "closed", 0.0, 2.0),
        ),
        (
            "square.csv",
            "derivative of x^2 on (0, x)",
            f"differint --function square --engine closed --alpha {alist} --interval 0,2",
            sweep("square", "closed", 0.0, 2.0),
        ),
        (
            "sin_rl.csv",
            "RL derivative of sin on (0, x)",
            f"differint --function sin --engine closed --form rl --alpha {alist} --interval 0,{TWO_PI!r}",
            sweep("sin", "closed", 0.0, TWO_PI, "rl"),
        ),
        (
            "sin_caputo.csv",
            "Caputo derivative of sin on (0, x)",
            f"differint --function sin --engine closed --form caputo --alpha {alist} --interval 0,{TWO_PI!r}",
            sweep("sin", "closed", 0.0, TWO_PI, "caputo"),
        ),
        (
            "falling_body.csv",
            "classical falling body, m/b = 4 s, g = 9.81 m/s^2, seven initial velocities",
            "falling-body --alpha 1 --m-over-b 4 --g 9.81 --v0 0,10,20,30,39.24,50,60 --interval 0,30 --samples 301",
            lambda: falling_table(1.0, 4.0, 9.81, DEFAULT_V0, 0.0, 30.0, 301),
        ),
        (
            "tautochrone.csv",
            "tautochrone arc length S(y) and descent-time round trip, T = 1 s",
            "tautochrone --T 1 --g 9.81 --interval 0,4 --samples 100",
            lambda: tautochrone_table(1.0, 9.81, 0.0, 4.0, 100, None),
        ),
    ]


def write_figures(out_dir: Path) -> list[str]:
    out_dir.mkdir(parents=True, exist_ok=True)
    index = Table(["file", "figure", "invocation"])
    notes: list[str] = []
    for name, desc, invocation, build in figure_specs():
        table = build()
        (out_dir / name).write_text(table.render(), newline="\n")
        notes.extend(f"{name}: {n}" for n in table.notes)
        index.rows.append([name, desc, "fraccalc " + invocation])
    (out_dir / "index.csv").write_text(index.render(), newline="\n")
    return notes


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_output(p):
    p.add_argument("--out", default="-", help="output CSV path (default: standard output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fraccalc", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key = value file overriding tolerances and default grids")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gamma", help="tabulate Gamma and 1/Gamma")
    p.add_argument("--interval", type=parse_interval, default=(-5.0, 5.0))
    p.add_argument("--step", type=float, default=0.01)
    _add_output(p)

    p = sub.add_parser("ml", help="tabulate Mittag-Leffler functions")
    p.add_argument("--params", type=parse_pairs, default=[(1.0, 1.0)], help="'alpha,beta;alpha,beta;...'")
    p.add_argument("--interval", type=parse_interval, default=(-5.0, 5.0))
    p.add_argument("--samples", type=int, default=101)
    _add_output(p)

    p = sub.add_parser("differint", help="sweep a differintegral over x and alpha")
    p.add_argument("--function", default="identity", choices=sorted(differint.FUNCTIONS))
    p.add_argument("--engine", default="closed", choices=["gl", "rl", "caputo", "closed"])
    p.add_argument("--form", default="rl", choices=["rl", "caputo"], help="operator used by the closed engine")
    p.add_argument("--alpha", type=parse_floats, default=[0.5])
    p.add_argument("--interval", type=parse_interval, default=(0.0, 1.0), help="a,x_max; x runs over (a, x_max]")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--grid", type=int, default=None, help="quadrature nodes (rl/caputo) or GL points")
    _add_output(p)

    p = sub.add_parser("laplace-check", help="verify the Caputo and RL Laplace rules numerically")
    p.add_argument("--alpha", type=parse_floats, default=[0.3, 0.5, 0.7])
    p.add_argument("--s", type=parse_floats, default=[1.0, 2.0, 4.0])
    p.add_argument("--functions", default="sin,square,exp_neg")
    p.add_argument("--grid", type=int, default=None)
    _add_output(p)

    p = sub.add_parser("falling-body", help="fractional falling-body velocity")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--m-over-b", type=float, default=4.0)
    p.add_argument("--g", type=float, default=9.81)
    p.add_argument("--v0", type=parse_floats, default=list(DEFAULT_V0))
    p.add_argument("--interval", type=parse_interval, default=(0.0, 30.0))
    p.add_argument("--samples", type=int, default=301)
    _add_output(p)

    p = sub.add_parser("tautochrone", help="tautochrone arc length and descent-time check")
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--g", type=float, default=9.81)
    p.add_argument("--interval", type=parse_interval, default=(0.0, 4.0), help="y runs over (lo, hi]")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--grid", type=int, default=None)
    _add_output(p)

    p = sub.add_parser("figures", help="write every figure dataset plus index.csv")
    p.add_argument("--out-dir", default="figures")
    return parser


def _emit(table: Table, out: str) -> None:
    text = table.render()
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, newline="\n")
    for note in table.notes:
        print(f"note: {note}", file=sys.stderr)


def _run(args) -> int:
    if args.config:
        load_config(args.config)
    cmd = args.command
    if cmd == "figures":
        for note in write_figures(Path(args.out_dir)):
            print(f"note: {note}", file=sys.stderr)
        return EXIT_OK
    if cmd == "gamma":
        if not args.step > 0:
            raise FracCalcError("--step must be > 0")
        table = gamma_table(args.interval[0], args.interval[1], args.step)
    elif cmd == "ml":
        table = ml_table(args.params, *args.interval, args.samples)
    elif cmd == "differint":
        spec = SweepSpec(
            args.alpha, args.interval[0], args.interval[1], args.samples,
            args.function, args.engine, args.interval[0], args.form, args.grid,
        )
        table = differint_table(spec)
    elif cmd == "laplace-check":
        funcs = [s.strip() for s in args.functions.split(",") if s.strip()]
        table = laplace_table(args.alpha, args.s, funcs, args.grid)
    elif cmd == "falling-body":
        table = falling_table(args.alpha, args.m_over_b, args.g, args.v0, *args.interval, args.samples)
    elif cmd == "tautochrone":
        table = tautochrone_table(args.T, args.g, *args.interval, args.samples, args.grid)
    else:  # pragma: no cover - argparse rejects unknown commands
        raise FracCalcError(f"unknown command {cmd}")
    _emit(table, args.out)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (FracCalcError, KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
