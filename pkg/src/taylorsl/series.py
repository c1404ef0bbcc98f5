"""Truncated power series (Taylor-mode) arithmetic.

A :class:`TruncatedSeries` stores the normalized Taylor coefficients of a
function about a base point ``origin``::

    f(origin + t) = c[0] + c[1]*t + ... + c[n]*t**n + O(t**(n+1))

with ``c[j] = f^(j)(origin) / j!``. All operations keep the order ``n`` fixed
(the set of order-``n`` series about one origin is closed under them), so
coefficients beyond ``n`` are never produced and never needed.

Coefficient arrays may carry trailing batch axes: ``coeffs.shape == (n+1,)``
for a single series or ``(n+1, K)`` for ``K`` series marched side by side
(for example, one per trial eigenvalue). Batch axes broadcast like numpy
arrays; a plain series combines with a batched one as if it were repeated.
"""

from numbers import Number

import numpy as np

from .errors import SeriesMismatchError, SingularityError

__all__ = [
    "TruncatedSeries",
    "add",
    "sub",
    "mul",
    "scale",
    "reciprocal",
    "exp_series",
    "integrate",
    "derivative",
    "evaluate",
]


def _pad(c, ndim):
    # align batch axes to the right of the coefficient axis
    return c.reshape(c.shape + (1,) * (ndim - c.ndim))


def _pair(a, b):
    nd = max(a.ndim, b.ndim)
    return _pad(a, nd), _pad(b, nd)


class TruncatedSeries:
    """Immutable truncated Taylor series of fixed order about ``origin``."""

    __slots__ = ("coeffs", "origin")
    # make ndarray * series dispatch to __rmul__ instead of broadcasting
    __array_ufunc__ = None

    def __init__(self, coeffs, origin=0.0):
        c = np.array(coeffs, dtype=float)
        if c.ndim == 0:
            c = c.reshape(1)
        c.flags.writeable = False
        self.coeffs = c
        self.origin = float(origin)

    @classmethod
    def constant(cls, value, order, origin=0.0):
        value = np.asarray(value, dtype=float)
        c = np.zeros((order + 1,) + value.shape)
        c[0] = value
        return cls(c, origin)

    @classmethod
    def one(cls, order, origin=0.0):
        return cls.constant(1.0, order, origin)

    @classmethod
    def zero(cls, order, origin=0.0):
        return cls.constant(0.0, order, origin)

    @classmethod
    def variable(cls, order, origin=0.0):
        """The identity function ``x`` expanded about ``origin``."""
        c = np.zeros(order + 1)
        c[0] = origin
        if order >= 1:
            c[1] = 1.0
        return cls(c, origin)

    @property
    def order(self):
        return self.coeffs.shape[0] - 1

    @property
    def batch_shape(self):
        return self.coeffs.shape[1:]

    def __getitem__(self, j):
        return self.coeffs[j]

    def __repr__(self):
        return f"TruncatedSeries({self.coeffs.tolist()!r}, origin={self.origin!r})"

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, (Number, np.ndarray)):
            return TruncatedSeries.constant(other, self.order, self.origin)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return sub(self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return sub(other, self)

    def __neg__(self):
        return TruncatedSeries(-self.coeffs, self.origin)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return mul(self, other)
        if isinstance(other, (Number, np.ndarray)):
            return scale(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return mul(self, reciprocal(other))
        if isinstance(other, (Number, np.ndarray)):
            return scale(self, 1.0 / np.asarray(other, dtype=float))
        return NotImplemented

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(other, reciprocal(self))

    def __call__(self, dx):
        return evaluate(self, dx)


def _check(a, b):
    if a.order != b.order:
        raise SeriesMismatchError(f"order mismatch: {a.order} vs {b.order}")
    if a.origin != b.origin:
        raise SeriesMismatchError(f"origin mismatch: {a.origin} vs {b.origin}")


def add(a, b):
    _check(a, b)
    x, y = _pair(a.coeffs, b.coeffs)
    return TruncatedSeries(x + y, a.origin)


def sub(a, b):
    _check(a, b)
    x, y = _pair(a.coeffs, b.coeffs)
    return TruncatedSeries(x - y, a.origin)


def scale(a, s):
    """Multiply by a scalar, or by an array that becomes a batch axis."""
    s = np.asarray(s, dtype=float)
    if s.ndim == 0:
        return TruncatedSeries(a.coeffs * s, a.origin)
    c = _pad(a.coeffs, max(a.coeffs.ndim, 1 + s.ndim))
    return TruncatedSeries(c * s, a.origin)


def mul(a, b):
    """Cauchy product truncated at the common order."""
    _check(a, b)
    n = a.order
    if a.coeffs.ndim == 1 and b.coeffs.ndim == 1:
        return TruncatedSeries(np.convolve(a.coeffs, b.coeffs)[: n + 1], a.origin)
    x, y = _pair(a.coeffs, b.coeffs)
    out = np.zeros((n + 1,) + np.broadcast_shapes(x.shape[1:], y.shape[1:]))
    for i in range(n + 1):
        out[i:] += x[i] * y[: n + 1 - i]
    return TruncatedSeries(out, a.origin)


def reciprocal(a):
    """Series of ``1/a`` by the standard recursive inversion.

    Raises SingularityError when the constant term vanishes.
    """
    c = a.coeffs
    if np.any(c[0] == 0):
        raise SingularityError(
            f"reciprocal of a series with zero constant term at x={a.origin}",
            origin=a.origin,
        )
    r = np.zeros_like(c)
    r[0] = 1.0 / c[0]
    for k in range(1, a.order + 1):
        r[k] = -np.sum(c[1 : k + 1] * r[k - 1 :: -1], axis=0) / c[0]
    return TruncatedSeries(r, a.origin)


def exp_series(a):
    """Series of ``exp(a)``, from e' = a' e solved degree by degree."""
    c = a.coeffs
    e = np.zeros_like(c)
    e[0] = np.exp(c[0])
    if a.order == 0:
        return TruncatedSeries(e, a.origin)
    j = _pad(np.arange(1, a.order + 1, dtype=float), c.ndim)
    da = j * c[1:]  # coefficients of t*a'(t)
    for k in range(1, a.order + 1):
        e[k] = np.sum(da[:k] * e[k - 1 :: -1], axis=0) / k
    return TruncatedSeries(e, a.origin)


def integrate(a, c0):
    """Antiderivative with constant term ``c0``, truncated to ``a.order``."""
    c = a.coeffs
    c0 = np.asarray(c0, dtype=float)
    out = np.zeros((c.shape[0],) + np.broadcast_shapes(c.shape[1:], c0.shape))
    out[0] = c0
    if a.order >= 1:
        c = _pad(c, out.ndim)
        j = _pad(np.arange(1, a.order + 1, dtype=float), out.ndim)
        out[1:] = c[:-1] / j
    return TruncatedSeries(out, a.origin)


def derivative(a):
    """Term-by-term derivative.

    The top coefficient of the result is set to zero: it would need the
    degree ``n+1`` coefficient of ``a``, which a truncated series does not
    carry. Expand to one extra order first when it matters.
    """
    c = a.coeffs
    out = np.zeros_like(c)
    if a.order >= 1:
        j = _pad(np.arange(1, a.order + 1, dtype=float), c.ndim)
        out[:-1] = c[1:] * j
    return TruncatedSeries(out, a.origin)


def evaluate(a, dx):
    """Horner evaluation of the polynomial at ``origin + dx``."""
    c = a.coeffs
    acc = c[-1]
    for j in range(a.order - 1, -1, -1):
        acc = acc * dx + c[j]
    return acc if np.ndim(acc) else float(acc)
