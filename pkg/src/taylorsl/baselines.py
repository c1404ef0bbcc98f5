"""Independent reference machinery.

* A centered finite-difference discretization of ``y'' + lam w(x) y = 0``
  whose eigenvalues are located by Sturm-sequence bisection on the
  tridiagonal pencil ``A - lam W``.
* A fixed-step classical Runge-Kutta shooting oracle, refined with Brent's
  method, which stands in for closed-form "exact" eigenvalues.
"""

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq

from .errors import ConvergenceError, IndefiniteWeightError, PartialResultError, ValidationError
from .quadrature import simpson
from .series import TruncatedSeries
from .solver import initial_state

__all__ = [
    "TridiagonalSystem",
    "fd_system",
    "fd_eigenvalues",
    "rk_shoot",
    "rk_solution",
    "oracle_eigenfunction",
    "oracle_eigenvalues",
    "simpson",
    "relative_percent",
]


@dataclass(frozen=True)
class TridiagonalSystem:
    """Symmetric pencil ``A - lam W`` with ``A`` tridiagonal, ``W`` diagonal."""

    diag: np.ndarray
    offdiag: np.ndarray
    weight: np.ndarray

    @property
    def size(self):
        return len(self.diag)

    def sturm_count(self, lam):
        """Number of pencil eigenvalues strictly below ``lam``.

        Counts negative pivots of the LDL^T factorization of ``A - lam W``
        (Sylvester inertia; valid because ``W`` is positive definite).
        """
        d = self.diag - lam * self.weight
        e2 = self.offdiag**2
        tiny = np.finfo(float).tiny
        count = 0
        q = d[0]
        # a pivot of -tiny makes the next quotient overflow to -inf, which is
        # the intended limit, so the warning is silenced
        with np.errstate(over="ignore", divide="ignore"):
            for i in range(self.size):
                if i:
                    q = d[i] - e2[i - 1] / q
                if q == 0.0:
                    q = -tiny
                if q < 0.0:
                    count += 1
        return count

    def bounds(self):
        """Gershgorin interval of the scaled matrix ``W^-1/2 A W^-1/2``."""
        s = 1.0 / np.sqrt(self.weight)
        off = np.abs(self.offdiag) * s[:-1] * s[1:]
        radius = np.zeros(self.size)
        radius[:-1] += off
        radius[1:] += off
        centre = self.diag / self.weight
        return float(np.min(centre - radius)), float(np.max(centre + radius))

    def eigenvalue(self, k, rtol=1e-15):
        """The ``k``-th smallest eigenvalue (1-based) by bisection."""
        lo, hi = self.bounds()
        while hi - lo > rtol * max(abs(lo), abs(hi)):
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            if self.sturm_count(mid) >= k:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)


def fd_system(weight, a, b, N):
    """Centered differences on ``N`` equal panels, interior nodes only."""
    if N < 10:
        raise ValidationError("need N >= 10")
    h = (b - a) / N
    x = a + h * np.arange(1, N)
    w = np.asarray([weight(xi) for xi in x], dtype=float)
    if np.any(w <= 0):
        bad = x[np.argmax(w <= 0)]
        raise IndefiniteWeightError(f"weight is not positive at interior node x={bad}")
    diag = np.full(N - 1, 2.0 / h**2)
    off = np.full(N - 2, -1.0 / h**2)
    return TridiagonalSystem(diag, off, w)


def fd_eigenvalues(weight, a, b, N, count):
    """Smallest ``count`` eigenvalues of the discretized ``y'' + lam w y = 0``."""
    system = fd_system(weight, a, b, N)
    if not 1 <= count <= system.size:
        raise ValidationError("count out of range")
    return [system.eigenvalue(k) for k in range(1, count + 1)]


def _pointwise(problem):
    if problem.pointwise is not None:
        return problem.pointwise

    # slow fallback: evaluate the series right-hand side at order zero
    def f(x, y, z, lam):
        one = lambda v: TruncatedSeries.constant(v, 0, x)  # noqa: E731
        return problem.rhs(one(x), one(y), one(z), lam).coeffs[0]

    return f


def _rk4(problem, lam, steps, record):
    if steps < 100:
        raise ValidationError("rk oracle needs steps >= 100")
    F = _pointwise(problem)
    a, b = problem.interval
    h = (b - a) / steps
    y, z = initial_state(problem.boundary, 1.0)
    if np.ndim(lam):
        y = np.full(np.shape(lam), y)
        z = np.full(np.shape(lam), z)
    if record:
        ys, zs = [y], [z]
    hh = 0.5 * h
    for i in range(steps):
        x = a + i * h
        k1y, k1z = z, F(x, y, z, lam)
        k2y = z + hh * k1z
        k2z = F(x + hh, y + hh * k1y, k2y, lam)
        k3y = z + hh * k2z
        k3z = F(x + hh, y + hh * k2y, k3y, lam)
        k4y = z + h * k3z
        k4z = F(x + h, y + h * k3y, k4y, lam)
        y = y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        z = z + h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z)
        if record:
            ys.append(y)
            zs.append(z)
    if record:
        return np.linspace(a, b, steps + 1), np.array(ys), np.array(zs)
    return y, z


def rk_shoot(problem, lam, steps=100_000):
    """Right-boundary defect from classical RK4 with ``steps`` fixed steps.

    ``lam`` may be an array (one trajectory per entry).
    """
    y, z = _rk4(problem, lam, steps, record=False)
    bc = problem.boundary
    return bc.d1 * y + bc.d2 * z - bc.d3


def rk_solution(problem, lam, steps=100_000):
    """Grid, ``y`` and ``y'`` of the RK4 trajectory at one ``lam``."""
    return _rk4(problem, float(lam), steps, record=True)


def oracle_eigenfunction(problem, lam, steps=100_000):
    """Hermite interpolant of the RK4 eigenfunction and its left slope."""
    x, y, z = rk_solution(problem, lam, steps)
    return CubicHermiteSpline(x, y, z), float(z[0])


def oracle_eigenvalues(problem, count, steps=100_000, scan=(0.0, 100.0, 200),
                       scan_steps=4000, ceiling=1e6, rtol=1e-12):
    """Lowest ``count`` eigenvalues from RK4 shooting.

    Sign changes are located on a coarse-step batched scan (extended by
    decades past ``scan``), then every bracket is re-checked and refined
    with ``steps`` RK4 steps.
    """
    lo, hi, n = scan
    brackets = []
    coarse = min(scan_steps, steps)
    while True:
        grid = np.linspace(lo, hi, n + 1)
        r = rk_shoot(problem, grid, coarse)
        keep = r != 0
        g, s = grid[keep], np.sign(r[keep])
        brackets += [(g[i], g[i + 1]) for i in np.nonzero(s[:-1] * s[1:] < 0)[0]]
        if len(brackets) >= count or hi >= ceiling:
            break
        lo, hi = (hi, 10.0 * hi) if hi > 0 else (hi, 2 * hi - lo)
        hi = min(hi, ceiling)
    brackets = brackets[:count]

    def R(lam):
        return float(rk_shoot(problem, lam, steps))

    roots = []
    for blo, bhi in brackets:
        if R(blo) * R(bhi) > 0:
            raise ConvergenceError(
                f"coarse bracket ({blo}, {bhi}) lost its sign change at {steps} steps",
                bracket=(blo, bhi),
            )
        xtol = rtol * max(abs(blo), abs(bhi), 1.0)
        roots.append(brentq(R, blo, bhi, xtol=xtol, rtol=max(rtol, 4 * np.finfo(float).eps)))
    if len(roots) < count:
        raise PartialResultError(f"only {len(roots)} of {count} oracle eigenvalues", found=roots)
    return roots


def relative_percent(value, reference):
    """Modulus of the relative difference, in percent."""
    return 100.0 * abs(value - reference) / abs(reference)
