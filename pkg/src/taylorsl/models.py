"""Problem builders and closed-form results for the variable-mass well.

Units follow hbar = 1. Inside the well the position-dependent-mass
Schrodinger equation (kinetic ordering alpha = 0, beta = -1) reads

    phi''/m - (m'/m**2) phi' + 2 E phi = 0,

which is solved here in the explicit form ``phi'' = (m'/m) phi' - 2 E m phi``
with ``phi = 0`` at both walls.
"""

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateSpecError, NodeAtJunctionError, ValidationError
from .series import TruncatedSeries, derivative, exp_series, mul, reciprocal
from .solver import RobinBoundary, SLProblem

__all__ = [
    "Smooth",
    "Jump",
    "JumpWellSpec",
    "chen_ho_problem",
    "polynomial_problem",
    "chen_ho_weight",
    "mass_value",
    "mass_series",
    "variable_mass_problem",
    "jump_residual",
    "jump_levels",
    "jump_eigenfunction",
    "constant_mass_levels",
    "approx_levels",
    "check_matching_matrix",
]


@dataclass(frozen=True)
class Smooth:
    """Sigmoid mass ``m1 + delta / (1 + exp(-b (x - x0)))``."""

    m1: float = 1.0
    delta: float = 1.0
    b: float = 10.0
    x0: float = 0.5

    def __post_init__(self):
        if self.m1 <= 0:
            raise ValidationError("m1 must be positive")
        if self.m1 + self.delta <= 0:
            raise ValidationError("m1 + delta must be positive")


@dataclass(frozen=True)
class Jump:
    """Step mass ``m1`` left of ``a`` and ``m2`` from ``a`` on (H(0) = 1)."""

    m1: float = 1.0
    m2: float = 2.0
    a: float = 0.5

    def __post_init__(self):
        if self.m1 <= 0 or self.m2 <= 0:
            raise ValidationError("masses must be positive")


@dataclass(frozen=True)
class JumpWellSpec:
    """Infinite well on ``[-c, c]`` with the mass jumping at ``x = 0``."""

    m1: float = 1.0
    m2: float = 2.0
    c: float = 0.5

    def __post_init__(self):
        if self.m1 <= 0 or self.m2 <= 0:
            raise ValidationError("masses must be positive")
        if self.c <= 0:
            raise ValidationError("half-width c must be positive")

    def wavenumbers(self, E):
        return math.sqrt(2 * self.m1 * E), math.sqrt(2 * self.m2 * E)


# -- Chen-Ho benchmark: y'' + lam x^2 y = 0, y(0) = y(1) = 0 -----------------


def _chen_ho_rhs(x, y, z, lam):
    return -(lam * mul(mul(x, x), y))


def _chen_ho_pointwise(x, y, z, lam):
    return -lam * x * x * y


def chen_ho_weight(x):
    return x * x


def chen_ho_problem():
    return SLProblem(
        0.0, 1.0, RobinBoundary.dirichlet(), _chen_ho_rhs, _chen_ho_pointwise, name="chen-ho"
    )


def _poly_series(coeffs, x):
    acc = TruncatedSeries.constant(coeffs[-1], x.order, x.origin)
    for c in reversed(coeffs[:-1]):
        acc = mul(acc, x) + c
    return acc


def polynomial_problem(p=(0.0,), q=(0.0,), r=(-1.0,), interval=(0.0, 1.0), boundary=None):
    """Linear problem ``y'' = p(x) y' + (q(x) + lam r(x)) y``.

    ``p``, ``q`` and ``r`` are polynomial coefficients in ascending powers of
    ``x``. The defaults give ``y'' = -lam y``. Dirichlet ends unless
    ``boundary`` is given.
    """
    p, q, r = (tuple(float(v) for v in c) or (0.0,) for c in (p, q, r))
    boundary = boundary or RobinBoundary.dirichlet()
    cache = {}

    def rhs(x, y, z, lam):
        key = (x.origin, x.order)
        if key not in cache:
            cache[key] = tuple(_poly_series(c, x) for c in (p, q, r))
        ps, qs, rs = cache[key]
        return mul(ps, z) + mul(qs, y) + lam * mul(rs, y)

    def pointwise(x, y, z, lam):
        pv, qv, rv = (np.polynomial.polynomial.polyval(x, c) for c in (p, q, r))
        return pv * z + (qv + lam * rv) * y

    return SLProblem(float(interval[0]), float(interval[1]), boundary, rhs, pointwise)


# -- mass profiles ----------------------------------------------------------


def _sigmoid(t):
    if t >= 0:
        return 1.0 / (1.0 + math.exp(-t))
    e = math.exp(t)
    return e / (1.0 + e)


def mass_value(profile, x):
    if isinstance(profile, Smooth):
        if profile.b == 0:
            return profile.m1 + 0.5 * profile.delta
        t = profile.b * (x - profile.x0)
        if math.isinf(t):
            return profile.m1 + (profile.delta if t > 0 else 0.0)
        return profile.m1 + profile.delta * _sigmoid(t)
    if isinstance(profile, Jump):
        return profile.m2 if x >= profile.a else profile.m1
    raise TypeError(f"unknown mass profile {profile!r}")


def mass_series(profile, origin, n):
    """Taylor series of the sigmoid mass about ``origin`` to order ``n``."""
    if not isinstance(profile, Smooth):
        raise ValidationError("mass_series needs a Smooth profile; jump wells use jump_levels")
    one = TruncatedSeries.one(n, origin)
    u = TruncatedSeries.variable(n, origin) - profile.x0
    u = -profile.b * u
    # keep the exponent non-positive so exp never overflows
    if u.coeffs[0] <= 0:
        s = reciprocal(one + exp_series(u))
    else:
        e = exp_series(-u)
        s = mul(e, reciprocal(one + e))
    return profile.m1 + profile.delta * s


def _sigmoid_well_coefficients(profile, n):
    @functools.lru_cache(maxsize=None)
    def at(origin):
        m = mass_series(profile, origin, n + 1)
        mp = derivative(m)
        m = TruncatedSeries(m.coeffs[: n + 1], origin)
        mp = TruncatedSeries(mp.coeffs[: n + 1], origin)
        return m, mul(mp, reciprocal(m))

    return at


def variable_mass_problem(profile, well=(0.0, 1.0)):
    """Dirichlet well on ``well`` with a sigmoid mass; ``lam`` plays ``E``.

    The mass series is re-expanded at every segment origin (cached per
    origin and order), so low degrees stay usable for steep profiles.
    """
    if not isinstance(profile, Smooth):
        raise ValidationError("variable_mass_problem needs a Smooth profile")
    left, right = map(float, well)
    if right <= left:
        raise ValidationError("well must have positive length")
    tables = {}

    def rhs(x, y, z, E):
        n = x.order
        if n not in tables:
            tables[n] = _sigmoid_well_coefficients(profile, n)
        m, q = tables[n](x.origin)
        return mul(q, z) - (2.0 * E) * mul(m, y)

    def pointwise(x, y, z, E):
        t = profile.b * (x - profile.x0)
        s = _sigmoid(t)
        m = profile.m1 + profile.delta * s
        dm = profile.delta * profile.b * s * (1.0 - s)
        return (dm / m) * z - 2.0 * E * m * y

    return SLProblem(left, right, RobinBoundary.dirichlet(), rhs, pointwise, name="smooth-well")


# -- mass jump well ---------------------------------------------------------


def jump_residual(spec, E):
    """``sqrt(m2) tan(k2 c) + sqrt(m1) tan(k1 c)``, zero at the eigenvalues.

    This is the matching condition for ``phi = sin(k1 (c + x))`` on the left
    and ``B sin(k2 (c - x))`` on the right with ``phi`` continuous and
    ``phi'(0+) = (m2/m1) phi'(0-)``.
    """
    k1, k2 = spec.wavenumbers(E)
    c = spec.c
    return math.sqrt(spec.m2) * math.tan(k2 * c) + math.sqrt(spec.m1) * math.tan(k1 * c)


def _pole(m, c, j):
    return (0.5 * math.pi + j * math.pi) ** 2 / (2.0 * m * c * c)


def _pole_stream(spec):
    """Merged increasing tangent poles of both halves, with coincidences."""
    j1 = j2 = 0
    while True:
        p1, p2 = _pole(spec.m1, spec.c, j1), _pole(spec.m2, spec.c, j2)
        if math.isclose(p1, p2, rel_tol=1e-12):
            yield p1, True
            j1 += 1
            j2 += 1
        elif p1 < p2:
            yield p1, False
            j1 += 1
        else:
            yield p2, False
            j2 += 1


def jump_levels(spec, count, samples=64):
    """First ``count`` positive energies of the mass-jump well.

    The energy axis is cut at every pole of either tangent; sign changes of
    :func:`jump_residual` are searched strictly inside each open piece with
    ``samples`` points and polished by Brent's method. Where poles of both
    halves coincide both sides blow up together and the point is itself a
    level (there ``phi'(0) = 0``), so it is emitted directly.
    """
    if count < 1:
        raise ValidationError("count must be >= 1")
    if spec.m1 == spec.m2:
        raise DegenerateSpecError(
            "m1 == m2 makes the matching equation vacuous; "
            "use constant_mass_levels(m, c, count)"
        )

    def f(E):
        return jump_residual(spec, E)

    levels = []
    lo = 0.0
    for pole, coincident in _pole_stream(spec):
        grid = np.linspace(lo, pole, samples + 2)[1:-1]
        vals = [f(E) for E in grid]
        for e0, e1, v0, v1 in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
            if v0 == 0:
                levels.append(float(e0))
            elif v0 * v1 < 0:
                levels.append(brentq(f, e0, e1, xtol=1e-15, rtol=4 * np.finfo(float).eps))
        if coincident:
            levels.append(pole)
        if len(levels) >= count:
            return levels[:count]
        lo = pole


def constant_mass_levels(m, c, count):
    """``E_k = (k pi)^2 / (2 m (2c)^2)`` for a uniform well of width ``2c``."""
    L = 2.0 * c
    return [(k * math.pi) ** 2 / (2.0 * m * L * L) for k in range(1, count + 1)]


class JumpEigenfunction:
    """``sin(k1 (c + x))`` for ``x < 0`` and ``B sin(k2 (c - x))`` for ``x >= 0``."""

    def __init__(self, spec, E):
        self.spec = spec
        self.E = E
        self.k1, self.k2 = spec.wavenumbers(E)
        c = spec.c
        s2 = math.sin(self.k2 * c)
        if abs(s2) < 1e-12:
            raise NodeAtJunctionError(f"sin(k2 c) = 0 at E = {E}: node at the junction")
        self.A = 1.0
        self.B = math.sin(self.k1 * c) / s2

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        c = self.spec.c
        out = np.where(
            x < 0, self.A * np.sin(self.k1 * (c + x)), self.B * np.sin(self.k2 * (c - x))
        )
        return out if out.ndim else float(out)

    def derivative(self, x, side=None):
        """Slope at ``x``; at ``x = 0`` pick the limit with ``side='-'`` or ``'+'``."""
        c = self.spec.c
        left = (x < 0) if side is None else side == "-"
        if left:
            return self.A * self.k1 * math.cos(self.k1 * (c + x))
        return -self.B * self.k2 * math.cos(self.k2 * (c - x))


def jump_eigenfunction(spec, E):
    return JumpEigenfunction(spec, E)


def approx_levels(delta, k):
    """Empirical level law ``(k pi)^2 / (2 + delta)``."""
    if k < 1:
        raise ValidationError("k must be >= 1")
    if 2 + delta <= 0:
        raise ValidationError("need 2 + delta > 0")
    return (k * math.pi) ** 2 / (2.0 + delta)


def check_matching_matrix(m1, m2, transfer=None, atol=1e-14):
    """Whether ``M1 = T^dagger M2 T`` holds for the transfer matrix ``T``.

    ``M_i = (1 / 2 m_i) [[0, 1], [-1, 0]]``; ``T`` defaults to the
    matching matrix ``diag(1, m2/m1)``.
    """
    if m1 <= 0 or m2 <= 0:
        raise ValidationError("masses must be positive")
    J = np.array([[0.0, 1.0], [-1.0, 0.0]])
    M1, M2 = J / (2 * m1), J / (2 * m2)
    T = np.diag([1.0, m2 / m1]) if transfer is None else np.asarray(transfer, dtype=float)
    return bool(np.max(np.abs(M1 - T.conj().T @ M2 @ T)) <= atol)
