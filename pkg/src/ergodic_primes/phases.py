"""Phase arithmetic on the torus R/Z."""
from __future__ import annotations

import numpy as np

_SPLIT = 134217729.0  # 2**27 + 1, Veltkamp splitter for doubles


def e(x):
    """The additive character e(x) = exp(2 pi i x)."""
    return np.exp(2j * np.pi * np.asarray(x, dtype=float))


def torus_reduce(x):
    """Representative of x mod 1 in [-1/2, 1/2)."""
    x = np.asarray(x, dtype=float)
    return x - np.floor(x + 0.5)


def _split(a):
    c = _SPLIT * a
    hi = c - (c - a)
    return hi, a - hi


def frac_of_product(a, m):
    """Fractional part of a * m in [0, 1), exact up to one final rounding.

    ``a`` is a double and ``m`` an integer array with |m| < 2**53; the
    product is expanded error-free (Dekker) before reduction, so large
    monomials do not destroy the phase.
    """
    a = np.asarray(a, dtype=float)
    mf = np.asarray(m, dtype=np.int64).astype(float)
    p = a * mf
    ah, al = _split(a)
    mh, ml = _split(mf)
    err = ((ah * mh - p) + ah * ml + al * mh) + al * ml
    f = (p - np.floor(p)) + err
    return f - np.floor(f)
