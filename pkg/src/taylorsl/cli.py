"""Command-line front end: ``taylorsl levels|table|figure1|sweep|compare``.

Options come from an optional flat ``key = value`` file (``--config``) with
command-line flags layered on top. Exit codes: 0 success, 1 tolerance
failure, 2 invalid configuration, 3 convergence failure.
"""

import argparse
import csv
import io
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from typing import Optional

from . import baselines, models, solver, tables
from .errors import (
    ConvergenceError,
    PartialResultError,
    SingularityError,
    TaylorSLError,
    ValidationError,
)

EXIT_OK, EXIT_TOLERANCE, EXIT_CONFIG, EXIT_CONVERGENCE = 0, 1, 2, 3
PROBLEMS = ("chen-ho", "smooth-well", "jump-well", "custom")
FORMATS = ("csv", "table")


class ConfigError(ValidationError):
    pass


def _floats(text):
    if isinstance(text, (tuple, list)):
        return tuple(float(v) for v in text)
    parts = [p for p in str(text).replace(" ", "").split(",") if p]
    if not parts:
        raise ConfigError(f"empty list {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"not a number list: {text!r}") from None


def _ints(text):
    vals = _floats(text)
    if any(v != int(v) for v in vals):
        raise ConfigError(f"not an integer list: {text!r}")
    return tuple(int(v) for v in vals)


def _bool(text):
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


@dataclass(frozen=True)
class RunConfig:
    """Everything one run needs. ``None`` means "the problem's default"."""

    problem: str = "chen-ho"
    m1: float = 1.0
    m2: Optional[float] = None
    delta: Optional[float] = None
    b: float = 10.0
    x0: Optional[float] = None
    c: float = 0.5
    interval: Optional[tuple] = None
    p: tuple = (0.0,)
    q: tuple = (0.0,)
    r: tuple = (-1.0,)
    bc: tuple = (1.0, 0.0, 0.0, 1.0, 0.0, 0.0)
    n: Optional[int] = None
    segments: Optional[int] = None
    scan_lo: float = 0.0
    scan_hi: float = 100.0
    scan_steps: int = 200
    ceiling: float = 1e6
    tol: float = 1e-10
    count: int = 5
    approx: bool = False
    format: str = "csv"
    output: Optional[str] = None

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ConfigError(f"problem must be one of {', '.join(PROBLEMS)}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {', '.join(FORMATS)}")
        if self.count < 1:
            raise ConfigError("count must be >= 1")
        if len(self.bc) != 6:
            raise ConfigError("bc needs six numbers c1,c2,c3,d1,d2,d3")
        if self.interval is not None and len(self.interval) != 2:
            raise ConfigError("interval needs two numbers a,b")

    @property
    def resolved_delta(self):
        if self.delta is not None:
            return self.delta
        if self.m2 is not None:
            return self.m2 - self.m1
        return 1.0

    @property
    def resolved_m2(self):
        return self.m2 if self.m2 is not None else self.m1 + self.resolved_delta

    def params(self):
        n_def, m_def = (3, 600) if self.problem == "smooth-well" else (10, 10)
        return solver.SolverParams(
            n=self.n if self.n is not None else n_def,
            m=self.segments if self.segments is not None else m_def,
            scan_lo=self.scan_lo,
            scan_hi=self.scan_hi,
            scan_steps=self.scan_steps,
            tol=self.tol,
            ceiling=self.ceiling,
        )

    def build_problem(self):
        if self.problem == "chen-ho":
            return models.chen_ho_problem()
        if self.problem == "smooth-well":
            a, b = self.interval or (0.0, 1.0)
            x0 = self.x0 if self.x0 is not None else 0.5 * (a + b)
            profile = models.Smooth(self.m1, self.resolved_delta, self.b, x0)
            return models.variable_mass_problem(profile, (a, b))
        if self.problem == "custom":
            return models.polynomial_problem(
                self.p, self.q, self.r, self.interval or (0.0, 1.0), solver.RobinBoundary(*self.bc)
            )
        raise ConfigError("jump-well has no shooting problem; it is solved in closed form")

    def jump_spec(self):
        return models.JumpWellSpec(self.m1, self.resolved_m2, self.c)


_CONVERT = {
    "problem": str,
    "m1": float,
    "m2": float,
    "delta": float,
    "b": float,
    "x0": float,
    "c": float,
    "interval": _floats,
    "p": _floats,
    "q": _floats,
    "r": _floats,
    "bc": _floats,
    "n": int,
    "segments": int,
    "scan_lo": float,
    "scan_hi": float,
    "scan_steps": int,
    "ceiling": float,
    "tol": float,
    "count": int,
    "approx": _bool,
    "format": str,
    "output": str,
}
assert set(_CONVERT) == {f.name for f in fields(RunConfig)}


def parse_config_text(text):
    """Flat ``key = value`` pairs; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONVERT:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        out[key] = value
    return out


def make_config(file_values=None, overrides=None, **extra):
    """Merge file values and flag overrides (flags win) into a RunConfig."""
    merged = dict(file_values or {})
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    merged.update(extra)
    kwargs = {}
    for key, value in merged.items():
        if key not in _CONVERT:
            raise ConfigError(f"unknown key {key!r}")
        try:
            kwargs[key] = _CONVERT[key](value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key}: {value!r} ({exc})") from None
    return RunConfig(**kwargs)


# -- output ------------------------------------------------------------------


def _csv_cell(v):
    if isinstance(v, float):
        return repr(float(v))
    return "" if v is None else str(v)


def _table_cell(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return "-" if v is None or v == "" else str(v)


def render(header, rows, fmt):
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_csv_cell(v) for v in row])
        return buf.getvalue()
    cells = [list(map(str, header))] + [[_table_cell(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "".join("  ".join(s.rjust(w) for s, w in zip(r, widths)) + "\n" for r in cells)


def emit(text, path=None):
    if path:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands ----------------------------------------------------------------


def solve_levels(cfg):
    """Lowest ``cfg.count`` eigenvalues of the configured problem."""
    if cfg.problem == "jump-well":
        return models.jump_levels(cfg.jump_spec(), cfg.count)
    results = solver.find_eigenvalues(cfg.build_problem(), cfg.params(), cfg.count)
    return [r.eigenvalue for r in results]


def _symbol(cfg):
    return "lambda" if cfg.problem in ("chen-ho", "custom") else "E"


def cmd_levels(cfg):
    if cfg.approx and cfg.problem not in ("smooth-well", "jump-well"):
        raise ConfigError("--approx applies to the mass wells only")
    status = EXIT_OK
    try:
        levels = solve_levels(cfg)
    except PartialResultError as exc:
        levels = [getattr(r, "eigenvalue", r) for r in exc.found]
        print(f"partial: {exc}", file=sys.stderr)
        status = EXIT_CONVERGENCE
    sym = _symbol(cfg)
    header = ["k", sym]
    rows = []
    for k, e in enumerate(levels, 1):
        row = [k, e]
        if cfg.approx:
            s = models.approx_levels(cfg.resolved_delta, k)
            row += [s, baselines.relative_percent(s, e)]
        rows.append(row)
    if cfg.approx:
        header += [f"{sym}_approx", "eps_pct"]
    if status:
        for k in range(len(levels) + 1, cfg.count + 1):
            rows.append([k] + [None] * (len(header) - 1))
    emit(render(header, rows, cfg.format), cfg.output)
    return status


def cmd_table(number, fmt="table", output=None):
    report = tables.reproduce(number)
    verdicts = [
        [c.id, c.value, c.published, c.tolerance_text, c.status] for c in report.cells
    ]
    vheader = ["cell", "computed", "published", "tolerance", "status"]
    if fmt == "csv":
        text = render(vheader, verdicts, "csv")
    else:
        shown = render(report.header, report.rows, "table")
        text = f"Table {number}: {report.title}\n{shown}\n{render(vheader, verdicts, 'table')}"
    emit(text, output)
    for c in report.failures:
        print(f"FAIL {c.id}: computed {c.value!r}, published {c.published!r}, {c.tolerance_text}",
              file=sys.stderr)
    return EXIT_TOLERANCE if report.failures else EXIT_OK


def cmd_figure1(cfg, deltas=(0.0, 0.1, 1.0, 3.0), k_max=10):
    if k_max < 1:
        raise ConfigError("k_max must be >= 1")
    rows = []
    for d in deltas:
        levels = solve_levels(replace(cfg, problem="smooth-well", delta=d, m2=None, count=k_max))
        for k, e in enumerate(levels, 1):
            rows.append([float(d), k, e, models.approx_levels(d, k)])
    emit(render(["delta", "k", "E_numeric", "E_formula"], rows, cfg.format), cfg.output)
    return EXIT_OK


def _sweep_point(cfg):
    t0 = time.perf_counter()
    try:
        levels = solve_levels(cfg)
        status = "ok"
    except (ConvergenceError, PartialResultError, SingularityError) as exc:
        levels, status = [], f"{type(exc).__name__}"
    return levels, status, time.perf_counter() - t0


def cmd_sweep(cfg, n_values=None, m_values=None, b_values=None, timing=False, jobs=1):
    if b_values:
        if n_values or m_values:
            raise ConfigError("sweep over either n x m or b, not both")
        grid = [replace(cfg, b=b) for b in b_values]
    else:
        p = cfg.params()
        grid = [replace(cfg, n=n, segments=m)
                for n in (n_values or (p.n,)) for m in (m_values or (p.m,))]
    if not grid:
        raise ConfigError("empty sweep grid")
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_sweep_point, grid))
    else:
        results = [_sweep_point(g) for g in grid]
    sym = _symbol(cfg)
    header = ["n", "m", "b"] + [f"{sym}{k}" for k in range(1, cfg.count + 1)] + ["status"]
    if timing:
        header.append("seconds")
    rows = []
    failed = False
    for g, (levels, status, secs) in zip(grid, results):
        p = g.params()
        vals = list(levels) + [None] * (cfg.count - len(levels))
        row = [p.n, p.m, float(g.b)] + vals + [status]
        if timing:
            row.append(round(secs, 3))
        rows.append(row)
        failed |= status != "ok"
    emit(render(header, rows, cfg.format), cfg.output)
    return EXIT_CONVERGENCE if failed else EXIT_OK


def _fd_weight(cfg):
    if cfg.problem == "chen-ho":
        return models.chen_ho_weight, (0.0, 1.0)
    if cfg.problem == "custom":
        if any(cfg.p) or any(cfg.q) or tuple(cfg.bc) != (1.0, 0.0, 0.0, 1.0, 0.0, 0.0):
            return None, None
        r = cfg.r
        return (lambda x: -sum(ci * x**i for i, ci in enumerate(r))), (cfg.interval or (0.0, 1.0))
    return None, None


def cmd_compare(cfg, fd_nodes=1000, rk_steps=100_000):
    if cfg.problem == "jump-well":
        raise ConfigError("compare needs a shooting problem (not jump-well)")
    problem = cfg.build_problem()
    taylor = [r.eigenvalue for r in solver.find_eigenvalues(problem, cfg.params(), cfg.count)]
    oracle = baselines.oracle_eigenvalues(problem, cfg.count, steps=rk_steps)
    weight, interval = _fd_weight(cfg)
    if weight is not None:
        fd = baselines.fd_eigenvalues(weight, *interval, fd_nodes, cfg.count)
    else:
        print("fd: not available for this problem (needs y'' + lam w y = 0, Dirichlet)",
              file=sys.stderr)
        fd = [None] * cfg.count
    rows = []
    for k, (t, f, o) in enumerate(zip(taylor, fd, oracle), 1):
        ft = None if f is None else baselines.relative_percent(f, o)
        rows.append([k, t, f, o, baselines.relative_percent(t, o), ft])
    header = ["k", "taylor", "fd", "oracle", "taylor_eps_pct", "fd_eps_pct"]
    emit(render(header, rows, cfg.format), cfg.output)
    return EXIT_OK


# -- argument parsing --------------------------------------------------------


def _add_run_options(p):
    g = p.add_argument_group("run configuration (overrides --config)")
    g.add_argument("--config", help="flat key = value file")
    g.add_argument("--problem", choices=PROBLEMS)
    for name in ("m1", "m2", "delta", "b", "x0", "c", "tol", "ceiling"):
        g.add_argument(f"--{name}")
    g.add_argument("--interval", help="a,b")
    g.add_argument("--p", help="ascending polynomial coefficients of p(x) (custom)")
    g.add_argument("--q", help="ascending polynomial coefficients of q(x) (custom)")
    g.add_argument("--r", help="ascending polynomial coefficients of r(x) (custom)")
    g.add_argument("--bc", help="c1,c2,c3,d1,d2,d3 (custom)")
    g.add_argument("--n", help="Taylor degree")
    g.add_argument("--segments", help="number of segments m")
    g.add_argument("--scan-lo", dest="scan_lo")
    g.add_argument("--scan-hi", dest="scan_hi")
    g.add_argument("--scan-steps", dest="scan_steps")
    g.add_argument("--count")
    g.add_argument("--format", choices=FORMATS)
    g.add_argument("--output")


def build_parser():
    parser = argparse.ArgumentParser(prog="taylorsl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("levels", help="lowest eigenvalues of one problem")
    _add_run_options(p)
    p.add_argument("--approx", action="store_const", const=True,
                   help="add (k pi)^2/(2+delta) and its deviation")

    p = sub.add_parser("table", help="regenerate a published table and check it")
    p.add_argument("number", type=int, choices=range(1, 11), metavar="{1..10}")
    p.add_argument("--format", choices=FORMATS, default="table")
    p.add_argument("--output")

    p = sub.add_parser("figure1", help="level curves against the delta law")
    _add_run_options(p)
    p.add_argument("--deltas", default="0,0.1,1,3")
    p.add_argument("--k-max", dest="k_max", type=int, default=10)

    p = sub.add_parser("sweep", help="convergence sweep over n x m or over b")
    _add_run_options(p)
    p.add_argument("--n-values", dest="n_values")
    p.add_argument("--m-values", dest="m_values")
    p.add_argument("--b-values", dest="b_values")
    p.add_argument("--timing", action="store_true", help="add a wall-clock column")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("compare", help="taylor vs finite differences vs RK4 oracle")
    _add_run_options(p)
    p.add_argument("--fd-nodes", dest="fd_nodes", type=int, default=1000)
    p.add_argument("--rk-steps", dest="rk_steps", type=int, default=100_000)
    return parser


def _config_from(args, **defaults):
    file_values = {}
    if args.config:
        try:
            with open(args.config) as fh:
                file_values = parse_config_text(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
    overrides = {k: getattr(args, k, None) for k in _CONVERT}
    base = {k: v for k, v in defaults.items() if k not in file_values}
    base.update(file_values)
    return make_config(base, overrides)


def run(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "table":
        return cmd_table(args.number, args.format, args.output)
    if args.command == "levels":
        return cmd_levels(_config_from(args))
    if args.command == "figure1":
        cfg = _config_from(args, problem="smooth-well", segments=200)
        return cmd_figure1(cfg, _floats(args.deltas), args.k_max)
    if args.command == "sweep":
        cfg = _config_from(args)
        grids = {k: getattr(args, k) for k in ("n_values", "m_values", "b_values")}
        ints = {k: _ints(v) for k, v in grids.items() if v and k != "b_values"}
        b_values = _floats(grids["b_values"]) if grids["b_values"] else None
        return cmd_sweep(cfg, ints.get("n_values"), ints.get("m_values"), b_values,
                         args.timing, args.jobs)
    return cmd_compare(_config_from(args), args.fd_nodes, args.rk_steps)


def main(argv=None):
    try:
        return run(argv)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, PartialResultError, SingularityError) as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except TaylorSLError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
