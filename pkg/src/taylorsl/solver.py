"""Segmented Taylor-polynomial shooting for Sturm-Liouville type problems.

The problem is ``y'' = F(x, y, y'; lam)`` on ``[a, b]`` with Robin conditions

    c1*y(a) + c2*y'(a) = c3,      d1*y(b) + d2*y'(b) = d3.

The interval is cut into ``m`` equal segments. On each one the solution of
``y' = z, z' = F`` is replaced by its degree-``n`` Taylor polynomials about
the segment's left end, whose coefficients come from series arithmetic on
``F``. The end values of one segment seed the next. The far-end defect

    R(lam) = d1*y(b) + d2*z(b) - d3

is then an explicit function of ``lam`` whose roots are the eigenvalues.

Right-hand sides are callables ``rhs(x, y, z, lam)`` taking
:class:`~taylorsl.series.TruncatedSeries` for ``x``, ``y`` and ``z`` and
returning the series of ``F``. ``lam`` may be a numpy array, in which case
every series carries a matching batch axis and a whole scan is marched at
once.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import (
    ConvergenceError,
    PartialResultError,
    SingularityError,
    ValidationError,
)
from .quadrature import simpson
from .series import TruncatedSeries, evaluate

# Doubles handle single-segment degree 45 (the largest tabulated); beyond ~50
# coefficient cancellation eats the gain.
MAX_ORDER = 50


@dataclass(frozen=True)
class RobinBoundary:
    c1: float
    c2: float
    c3: float
    d1: float
    d2: float
    d3: float

    def __post_init__(self):
        if self.c1 == 0 and self.c2 == 0:
            raise ValidationError("left boundary has c1 = c2 = 0")
        if self.d1 == 0 and self.d2 == 0:
            raise ValidationError("right boundary has d1 = d2 = 0")

    @classmethod
    def dirichlet(cls):
        return cls(1.0, 0.0, 0.0, 1.0, 0.0, 0.0)


@dataclass(frozen=True)
class SLProblem:
    """Interval, boundary data and right-hand side of ``y'' = F``.

    ``pointwise(x, y, z, lam)`` is an optional float version of ``F`` used by
    the classical-integrator oracle; it must not share code with ``rhs``.
    """

    a: float
    b: float
    boundary: RobinBoundary
    rhs: Callable
    pointwise: Optional[Callable] = None
    name: str = "custom"

    def __post_init__(self):
        if not self.a < self.b:
            raise ValidationError(f"need a < b, got [{self.a}, {self.b}]")

    @property
    def interval(self):
        return (self.a, self.b)


@dataclass(frozen=True)
class SolverParams:
    n: int = 10
    m: int = 10
    scan_lo: float = 0.0
    scan_hi: float = 100.0
    scan_steps: int = 200
    tol: float = 1e-10
    max_iter: int = 200
    normalization: float = 1.0
    ceiling: float = 1e6

    def __post_init__(self):
        if not 1 <= self.n <= MAX_ORDER:
            raise ValidationError(f"n must be in 1..{MAX_ORDER}, got {self.n}")
        if self.m < 1:
            raise ValidationError(f"m must be >= 1, got {self.m}")
        if not self.scan_lo < self.scan_hi:
            raise ValidationError("scan_lo must be below scan_hi")
        if self.scan_steps < 2:
            raise ValidationError("scan_steps must be >= 2")
        if not self.tol > 0:
            raise ValidationError("tol must be positive")
        if self.normalization == 0:
            raise ValidationError("normalization must be nonzero")


@dataclass(frozen=True)
class SegmentedSolution:
    breakpoints: np.ndarray
    segments: tuple

    @property
    def h(self):
        return self.breakpoints[1] - self.breakpoints[0]

    def _locate(self, x):
        x = np.asarray(x, dtype=float)
        m = len(self.segments)
        k = np.clip(np.floor((x - self.breakpoints[0]) / self.h).astype(int), 0, m - 1)
        return x, k

    def _eval(self, x, which):
        x, k = self._locate(x)
        out = np.empty(x.shape)
        for seg in np.unique(k):
            sel = k == seg
            out[sel] = evaluate(self.segments[seg][which], x[sel] - self.breakpoints[seg])
        return out if out.ndim else float(out)

    def __call__(self, x):
        """Piecewise polynomial ``y_n(x)``."""
        return self._eval(x, 0)

    def derivative(self, x):
        """Piecewise polynomial ``z_n(x)``."""
        return self._eval(x, 1)


@dataclass
class EigenvalueResult:
    eigenvalue: float
    residual: float
    bracket: tuple
    iterations: int
    solution: SegmentedSolution = field(repr=False)


def initial_state(boundary, normalization=1.0):
    """Starting ``(y(a), y'(a))`` satisfying the left Robin condition.

    The free part is ``normalization`` times the condition's null direction
    ``(c2, -c1)``, signed so that its first nonzero entry is positive; a
    nonhomogeneous ``c3`` adds the minimum-norm particular solution.
    """
    c1, c2, c3 = boundary.c1, boundary.c2, boundary.c3
    if c1 == 0 and c2 == 0:
        raise ValidationError("degenerate left boundary (c1 = c2 = 0)")
    u, v = c2, -c1
    if u < 0 or (u == 0 and v < 0):
        u, v = -u, -v
    y0, z0 = normalization * u, normalization * v
    if c3 != 0:
        s = c3 / (c1 * c1 + c2 * c2)
        y0, z0 = y0 + s * c1, z0 + s * c2
    return float(y0), float(z0)


def taylor_step(problem, lam, origin, y0, z0, n):
    """Degree-``n`` Taylor series of ``y`` and ``z`` about ``origin``.

    Coefficients are filled one degree at a time: with ``y`` and ``z`` known
    through degree ``j``, ``F`` is known through degree ``j``, which fixes
    ``z`` (its antiderivative) and ``y`` (antiderivative of ``z``) at degree
    ``j + 1``.
    """
    x = TruncatedSeries.variable(n, origin)
    batch = np.broadcast_shapes(np.shape(y0), np.shape(z0), np.shape(lam))
    y = np.zeros((n + 1,) + batch)
    z = np.zeros((n + 1,) + batch)
    y[0] = y0
    z[0] = z0
    for j in range(n):
        try:
            f = problem.rhs(x, TruncatedSeries(y, origin), TruncatedSeries(z, origin), lam)
        except SingularityError as exc:
            if exc.origin is None:
                exc.origin = origin
            raise
        z[j + 1] = f.coeffs[j] / (j + 1)
        y[j + 1] = z[j] / (j + 1)
    return TruncatedSeries(y, origin), TruncatedSeries(z, origin)


def _march(problem, lam, params, keep):
    a, b = problem.interval
    h = (b - a) / params.m
    breakpoints = a + h * np.arange(params.m + 1)
    y, z = initial_state(problem.boundary, params.normalization)
    segments = []
    for k in range(params.m):
        ys, zs = taylor_step(problem, lam, float(breakpoints[k]), y, z, params.n)
        if keep:
            segments.append((ys, zs))
        y, z = evaluate(ys, h), evaluate(zs, h)
    bc = problem.boundary
    residual = bc.d1 * y + bc.d2 * z - bc.d3
    return residual, SegmentedSolution(breakpoints, tuple(segments))


def shoot(problem, lam, params):
    """Far-end defect ``R(lam)`` and the segmented solution behind it."""
    return _march(problem, lam, params, keep=True)


def residuals(problem, lams, params):
    """``R`` at many ``lam`` values, marched as one batch."""
    lams = np.asarray(lams, dtype=float)
    r, _ = _march(problem, lams, params, keep=False)
    return np.broadcast_to(r, lams.shape).copy()


def scan_and_bracket(problem, params, lo=None, hi=None, steps=None):
    """Sign-change brackets of ``R`` on a uniform grid over ``[lo, hi]``."""
    lo = params.scan_lo if lo is None else lo
    hi = params.scan_hi if hi is None else hi
    steps = params.scan_steps if steps is None else steps
    if steps < 2:
        raise ValidationError("scan needs at least 2 steps")
    grid = np.linspace(lo, hi, steps + 1)
    r = residuals(problem, grid, params)
    # grid points that hit a root exactly are skipped; their neighbours bracket it
    keep = r != 0
    g, s = grid[keep], np.sign(r[keep])
    idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
    return [(float(g[i]), float(g[i + 1])) for i in idx]


def refine_root(problem, params, bracket):
    """Eigenvalue inside a sign-change bracket, to within ``params.tol``.

    Secant steps are taken while they stay inside the current bracket and
    keep shrinking it; otherwise the step falls back to bisection.
    """
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise ValidationError(f"bad bracket {bracket}")

    def R(lam):
        return float(shoot(problem, lam, params)[0])

    flo, fhi = R(lo), R(hi)
    if flo * fhi > 0:
        raise ValidationError(f"no sign change on {bracket}: R = {flo:.3g}, {fhi:.3g}")
    tol = params.tol
    x0, f0, x1, f1 = lo, flo, hi, fhi
    root = lo if flo == 0 else hi if fhi == 0 else None
    iterations = 0
    mark = hi - lo
    force_bisect = False
    while root is None and hi - lo > 2 * tol:
        if iterations >= params.max_iter:
            raise ConvergenceError(
                f"no convergence in {params.max_iter} iterations",
                best_estimate=0.5 * (lo + hi),
                bracket=(lo, hi),
            )
        iterations += 1
        x = x1 - f1 * (x1 - x0) / (f1 - f0) if f1 != f0 else lo
        if force_bisect or not lo < x < hi:
            x = 0.5 * (lo + hi)
        elif abs(x - x1) < 0.5 * tol:
            # push a near-converged secant step across the root
            x = x1 + np.copysign(0.5 * tol, x - x1)
        fx = R(x)
        if fx == 0:
            root = x
        elif (fx < 0) == (flo < 0):
            lo, flo = x, fx
        else:
            hi, fhi = x, fx
        x0, f0, x1, f1 = x1, f1, x, fx
        if iterations % 2 == 0:
            # the bracket must at least halve every two steps
            force_bisect = hi - lo > 0.5 * mark
            mark = hi - lo
    if root is None:
        root = 0.5 * (lo + hi)
    residual, solution = shoot(problem, root, params)
    return EigenvalueResult(
        eigenvalue=float(root),
        residual=float(residual),
        bracket=(lo, hi),
        iterations=iterations,
        solution=solution,
    )


def _next_window(lo, hi):
    if hi > 0:
        return hi, 10.0 * hi
    return hi, hi + (hi - lo)


def bracket_eigenvalues(problem, params, count):
    """First ``count`` sign-change brackets, extending the scan by decades.

    Returns fewer than ``count`` brackets only when ``params.ceiling`` is hit.
    """
    brackets = []
    lo, hi = params.scan_lo, params.scan_hi
    while True:
        brackets.extend(scan_and_bracket(problem, params, lo, hi, params.scan_steps))
        if len(brackets) >= count or hi >= params.ceiling:
            return brackets[:count]
        lo, hi = _next_window(lo, hi)
        hi = min(hi, params.ceiling)


def find_eigenvalues(problem, params, count):
    """The ``count`` lowest eigenvalues in the scan range and above it.

    Raises PartialResultError (carrying what was found) if the scan reaches
    ``params.ceiling`` first.
    """
    if count < 1:
        raise ValidationError("count must be >= 1")
    brackets = bracket_eigenvalues(problem, params, count)
    results = [refine_root(problem, params, br) for br in brackets]
    if len(results) < count:
        raise PartialResultError(
            f"only {len(results)} of {count} eigenvalues below {params.ceiling}",
            found=results,
        )
    return results


def dn_error(solution, reference, quad_points, reference_slope=1.0):
    """Integrated squared difference between two eigenfunctions.

    The segmented solution is rescaled to unit slope at the left end and
    ``reference`` is divided by ``reference_slope`` (its own left slope), so
    both follow the ``y = x + ...`` normalization. Simpson's rule is used
    with ``quad_points`` panels per segment.
    """
    if quad_points < 2:
        raise ValidationError("quad_points must be >= 2")
    slope = float(solution.segments[0][1].coeffs[0])
    if slope == 0:
        raise ValidationError("solution has zero slope at the left end")
    total = 0.0
    bp = solution.breakpoints
    for k, (ys, _) in enumerate(solution.segments):
        x0 = bp[k]

        def integrand(x, ys=ys, x0=x0):
            return (np.asarray(reference(x)) / reference_slope - evaluate(ys, x - x0) / slope) ** 2

        total += simpson(integrand, x0, bp[k + 1], quad_points)
    return total
