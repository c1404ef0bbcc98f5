"""Composite Simpson quadrature."""

import numpy as np

from .errors import ValidationError


def simpson(f, a, b, panels):
    """Composite Simpson rule on ``panels`` equal panels (exact for cubics).

    ``f`` is called once with the array of nodes and must return an array of
    the same shape.
    """
    if panels < 2 or panels % 2:
        raise ValidationError(f"Simpson needs an even panel count >= 2, got {panels}")
    x = np.linspace(a, b, panels + 1)
    fx = np.asarray(f(x), dtype=float)
    h = (b - a) / panels
    return h / 3.0 * (fx[0] + fx[-1] + 4.0 * fx[1:-1:2].sum() + 2.0 * fx[2:-1:2].sum())
