"""Variation, oscillation and jump seminorms of finitely sampled curves and families.

A family is a (points, times) array: row x holds the curve t -> f_t(x).
All suprema over increasing selections are computed exactly by dynamic
programming; the only approximate quantity is the oscillation seminorm of a
family over large time grids, which is a sampled lower bound.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .signals import Signal

EXHAUSTIVE_GRID = 12
_CHUNK_ELEMS = 8_000_000


@dataclass(frozen=True)
class SampledCurve:
    times: np.ndarray
    values: np.ndarray

    def __init__(self, values, times=None):
        values = np.asarray(values, dtype=complex).ravel()
        times = np.arange(len(values), dtype=float) if times is None else np.asarray(times, dtype=float).ravel()
        if len(times) != len(values):
            raise ParameterError("times and values differ in length")
        if np.any(np.diff(times) <= 0):
            raise ParameterError("curve times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.times)

    def value_at(self, s):
        """f at the last curve time <= s (None when s precedes the curve)."""
        i = int(np.searchsorted(self.times, s, side="right")) - 1
        return None if i < 0 else self.values[i]


@dataclass(frozen=True)
class IncreasingSequence:
    points: tuple

    def __init__(self, points):
        pts = tuple(float(x) for x in points)
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ParameterError("sequence must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @property
    def N(self):
        return len(self.points) - 1


def _curve(c):
    return c if isinstance(c, SampledCurve) else SampledCurve(c)


def _gaps(values):
    v = np.asarray(values)
    return np.abs(v[None, :] - v[:, None])


def variation(curve, r=2.0):
    """V^r by DP over endpoints; sums accumulate left to right along each selection."""
    if r < 1:
        raise ParameterError("variation needs r >= 1")
    c = _curve(curve)
    T = len(c)
    if T < 2:
        return 0.0
    D = _gaps(c.values) ** r
    best = np.zeros(T)
    for j in range(1, T):
        best[j] = max(0.0, float(np.max(best[:j] + D[:j, j])))
    return float(best.max() ** (1.0 / r))


def jump_count(curve, lam):
    """N_lambda: longest chain t_0 < ... < t_J with every step of size >= lambda.

    A greedy anchor scan is not optimal here (values 0, 1, 1.5, 0.5 with
    lambda = 1 have two jumps, greedy finds one), so this is an O(T^2) DP.
    """
    if lam <= 0:
        raise ParameterError("lambda must be positive")
    c = _curve(curve)
    T = len(c)
    if T < 2:
        return 0
    ok = _gaps(c.values) >= lam
    best = np.zeros(T, dtype=np.int64)
    for j in range(1, T):
        prev = best[:j][ok[:j, j]]
        if len(prev):
            best[j] = prev.max() + 1
    return int(best.max())


def _bottleneck(values):
    """lambda*_c for each point: the largest lambda with N_lambda >= c, c = 1..T-1.

    ``values`` is (P, T); returns (P, T-1) with -inf where no chain of that
    length exists.  lambda*_c is nonincreasing in c.
    """
    values = np.asarray(values, dtype=complex)
    P, T = values.shape
    out = np.full((P, max(T - 1, 0)), -np.inf)
    if T < 2:
        return out
    G = np.abs(values[:, None, :] - values[:, :, None])
    G[:, ~np.triu(np.ones((T, T), dtype=bool), 1)] = -np.inf
    B = G.max(axis=1)
    for c in range(T - 1):
        out[:, c] = B.max(axis=1)
        if c == T - 2 or not np.isfinite(out[:, c]).any():
            break
        B = np.minimum(B[:, :, None], G).max(axis=1)
    return out


def jump_levels(curve):
    """(lambda*_1, lambda*_2, ...) for a single curve; only positive levels are kept."""
    lv = _bottleneck(_curve(curve).values[None, :])[0]
    return lv[np.isfinite(lv) & (lv > 0)]


def jump_functional(curve):
    """sup over lambda of lambda * N_lambda^{1/2}."""
    lv = jump_levels(curve)
    if len(lv) == 0:
        return 0.0
    return float(np.max(lv * np.sqrt(np.arange(1, len(lv) + 1))))


def oscillation(curve, I, right_closed=False):
    """O_{I,N}: cells [I_j, I_{j+1}) for j = 1..N where I has N + 1 points.

    f(I_j) is read at the last curve time <= I_j; a cell before the curve
    starts contributes 0.  ``right_closed`` switches to cells [I_j, I_{j+1}].
    """
    c = _curve(curve)
    I = I if isinstance(I, IncreasingSequence) else IncreasingSequence(I)
    if len(I.points) < 2:
        raise ParameterError("an oscillation sequence needs at least two points")
    total = []
    for a, b in zip(I.points, I.points[1:]):
        base = c.value_at(a)
        if base is None:
            total.append(0.0)
            continue
        hi = c.times <= b if right_closed else c.times < b
        cell = c.values[(c.times >= a) & hi]
        total.append(float(np.max(np.abs(cell - base)) ** 2) if len(cell) else 0.0)
    return math.sqrt(math.fsum(total))


# ---------------------------------------------------------------------------
# families


def family_matrix(signals):
    """Stack signals f_{t_1}, ..., f_{t_T} into a (points, T) array over their joint support."""
    signals = list(signals)
    if not signals:
        raise ParameterError("empty family")
    keys = sorted(set().union(*(s.support for s in signals)))
    if not keys:
        return np.zeros((1, len(signals)), dtype=complex)
    return np.array([[s[k] for s in signals] for k in keys], dtype=complex).reshape(len(keys), len(signals))


def _as_matrix(family):
    if isinstance(family, np.ndarray):
        M = family.astype(complex)
        if M.ndim == 1:
            M = M[None, :]
    else:
        family = list(family)
        if family and isinstance(family[0], Signal):
            M = family_matrix(family)
        else:
            M = np.asarray(family, dtype=complex)
            if M.ndim == 1:
                M = M[None, :]
    if M.size == 0:
        raise ParameterError("empty family")
    return M


def family_jump_levels(M):
    M = _as_matrix(M)
    P, T = M.shape
    step = max(1, _CHUNK_ELEMS // max(T * T, 1))
    return np.concatenate([_bottleneck(M[i : i + step]) for i in range(0, P, step)])


def jump_seminorm(M, p=2.0):
    """sup_lambda || lambda N_lambda(x)^{1/2} ||_{l^p(x)} exactly.

    N_lambda(x)^{p/2} is a sum of increments g(c) - g(c-1), g(n) = n^{p/2},
    over the levels c with lambda*_c(x) >= lambda; sweeping lambda downwards
    through all levels gives the supremum.
    """
    lv = family_jump_levels(M)
    if lv.shape[1] == 0:
        return 0.0
    c = np.arange(1, lv.shape[1] + 1, dtype=float)
    inc = np.broadcast_to(c ** (p / 2) - (c - 1) ** (p / 2), lv.shape)
    live = np.isfinite(lv) & (lv > 0)
    lam, w = lv[live], inc[live]
    if len(lam) == 0:
        return 0.0
    order = np.argsort(-lam, kind="stable")
    S = np.cumsum(w[order])
    return float(np.max(lam[order] * S ** (1.0 / p)))


def _osc_rows(M, idx, p):
    """|| O_{I}(x) ||_p for the time-index sequence idx (cells [idx_j, idx_{j+1}))."""
    sq = np.zeros(M.shape[0])
    for a, b in zip(idx, idx[1:]):
        sq += np.max(np.abs(M[:, a:b] - M[:, a : a + 1]), axis=1) ** 2
    o = np.sqrt(sq)
    return float(np.sum(o**p) ** (1.0 / p))


@dataclass(frozen=True)
class OscillationBound:
    value: float
    exact: bool
    sequences: int


def oscillation_seminorm(M, p=2.0, samples=2000, rng=None) -> OscillationBound:
    """sup over I in the time grid of || O_I ||_p; exhaustive up to 12 grid points."""
    M = _as_matrix(M)
    T = M.shape[1]
    best, count = 0.0, 0
    if T < 2:
        return OscillationBound(0.0, True, 0)
    if T <= EXHAUSTIVE_GRID:
        for n in range(2, T + 1):
            for idx in itertools.combinations(range(T), n):
                best = max(best, _osc_rows(M, idx, p))
                count += 1
        return OscillationBound(best, True, count)
    rng = np.random.default_rng(0) if rng is None else rng
    for _ in range(samples):
        n = int(rng.integers(2, T + 1))
        idx = np.sort(rng.choice(T, size=n, replace=False))
        best = max(best, _osc_rows(M, idx, p))
    # single long cells and the full grid are cheap and often extremal
    for a in range(T - 1):
        best = max(best, _osc_rows(M, (a, T - 1), p))
    best = max(best, _osc_rows(M, tuple(range(T)), p))
    return OscillationBound(best, False, samples + T)


def seminorm_S_p(family, p=2.0, mode="jump", samples=2000, rng=None):
    """The two-mode seminorm S^p of a family over its time grid."""
    if not 1 < p < math.inf:
        raise ParameterError("p must lie in (1, inf)")
    M = _as_matrix(family)
    if mode == "jump":
        return jump_seminorm(M, p)
    if mode == "oscillation":
        return oscillation_seminorm(M, p, samples, rng).value
    raise ParameterError(f"unknown seminorm mode {mode!r}")


# ---------------------------------------------------------------------------
# Rademacher-Menshov


def dyadic_blocks(k, m):
    """Dyadic intervals [j 2^i, (j+1) 2^i) inside [k, 2^m], grouped by i."""
    if m < 0 or not 0 <= k < 2**m:
        raise ParameterError("need 0 <= k < 2^m")
    out = []
    for i in range(m + 1):
        w = 1 << i
        j0 = -(-k // w)
        out.append([(j * w, (j + 1) * w) for j in range(j0, (1 << (m - i)))])
    return out


def rademacher_menshov_check(family, p=2.0, k=0, m=None, mode="jump"):
    """(lhs, rhs) with lhs = S^p(f_n : k <= n <= 2^m) and rhs the dyadic square-function norm.

    ``family`` holds f_0, ..., f_{2^m} (2^m + 1 members, since the range is
    closed); the inequality to check is lhs <= sqrt(2) * rhs.
    """
    M = _as_matrix(family)
    n = M.shape[1]
    if m is None:
        m = int(round(math.log2(n - 1))) if n > 1 else -1
    if n != 2**m + 1:
        raise ParameterError(f"family of {n} members does not cover 0..2^{m}")
    blocks = dyadic_blocks(k, m)
    sub = M[:, k:]
    if mode == "jump":
        lhs = jump_seminorm(sub, p)
    elif mode == "oscillation":
        lhs = oscillation_seminorm(sub, p).value
    else:
        raise ParameterError(f"unknown seminorm mode {mode!r}")
    acc = np.zeros(M.shape[0])
    for level in blocks:
        if level:
            sq = sum(np.abs(M[:, b] - M[:, a]) ** 2 for a, b in level)
            acc += np.sqrt(sq)
    rhs = float(np.sum(acc**p) ** (1.0 / p))
    return lhs, rhs
