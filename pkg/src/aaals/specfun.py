"""Real-argument Bessel and Hankel functions for integer orders.

The multipole basis needs ``H_n^(1)(x) = J_n(x) + i Y_n(x)`` for orders
``0..R`` and the disk oracle for orders up to roughly ``k + 30``.  Orders are
restricted to non-negative integers; callers needing negative orders use the
symmetry ``J_{-n} = (-1)^n J_n`` (the basis only ever evaluates ``|r|``).

Evaluation is delegated to scipy.special, which meets the accuracy contract
(relative error ~1e-15 away from the functions' zeros) over the ranges used
here.  Y_n overflows double precision for large n at small x (e.g. n=100,
x=1e-3); such pairs never occur in the solver, where x = k*distance stays
bounded away from 0.
"""

from __future__ import annotations

import numpy as np
import scipy.special as _sp

__all__ = ["bessel_j", "bessel_y", "hankel1"]


def _check_order(n) -> int:
    if not (np.isscalar(n) and float(n) == int(n)):
        raise ValueError(f"order must be an integer, got {n!r}")
    n = int(n)
    if n < 0:
        raise ValueError(
            f"order must be >= 0, got {n}; use J_-n = (-1)^n J_n for negative orders"
        )
    return n


def _check_arg(x, strict: bool):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("argument must be finite")
    if strict:
        if np.any(x <= 0):
            raise ValueError("argument must be > 0")
    elif np.any(x < 0):
        raise ValueError("argument must be >= 0")
    return x


def bessel_j(n, x):
    """Bessel function of the first kind J_n(x) for integer n >= 0, x >= 0."""
    n = _check_order(n)
    xa = _check_arg(x, strict=False)
    out = _sp.jv(n, xa)
    return out if isinstance(x, np.ndarray) else float(out)


def bessel_y(n, x):
    """Bessel function of the second kind Y_n(x) for integer n >= 0, x > 0."""
    n = _check_order(n)
    xa = _check_arg(x, strict=True)
    out = _sp.yv(n, xa)
    return out if isinstance(x, np.ndarray) else float(out)


def hankel1(n, x):
    """Hankel function of the first kind H_n^(1)(x) = J_n(x) + i*Y_n(x), x > 0.

    Composed from :func:`bessel_j` and :func:`bessel_y` so the three functions
    agree bitwise.
    """
    n = _check_order(n)
    xa = _check_arg(x, strict=True)
    out = _sp.jv(n, xa) + 1j * _sp.yv(n, xa)
    return out if isinstance(x, np.ndarray) else complex(out)
