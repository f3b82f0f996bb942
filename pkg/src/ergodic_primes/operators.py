"""Averaging, Cotlar and twisted operators on Z^d, kernels, and Fourier multipliers.

Operators act on the integer shift model: ``(A_t f)(x)`` averages
``f(x - P(n, p))`` over the weighted mixed lattice inside Omega_t.  The
Fourier convention is ``F f(xi) = sum_x f(x) e(x . xi)`` and
``T[m] f(x) = int e(-xi . x) m(xi) F f(xi) d xi``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import EmptyAverageError, KernelDomainError, ParameterError, PeriodTooSmallError
from .lattice import LatticeConfig, Region, as_polynomial_map, monomials, weighted_points
from .phases import e, frac_of_product
from .quadrature import polar_integrate
from .signals import Signal, accumulate

_CHUNK = 4_000_000


# ---------------------------------------------------------------------------
# kernels


@dataclass(frozen=True, eq=False)
class CZKernel:
    """A Calderon-Zygmund kernel on R^k minus the origin, with claimed constants."""

    func: Callable = field(repr=False)
    k: int
    size_const: float
    lipschitz_const: float
    name: str = "kernel"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            x = x[None, :]
        if np.any(np.all(x == 0, axis=-1)):
            raise KernelDomainError(f"{self.name} is not defined at the origin")
        return np.asarray(self.func(x))


def riesz_constant(k):
    """Gamma((k+1)/2) / pi^((k+1)/2), the classical Riesz transform normalisation."""
    return math.gamma((k + 1) / 2) / math.pi ** ((k + 1) / 2)


def riesz_kernel(k, j=0, normalized=True):
    """K(x) = c * x_j / |x|^{k+1}.

    With ``normalized`` the classical constant ``riesz_constant(k)`` is used;
    otherwise c = 1 (so k = 1 gives 1/x).  The Lipschitz claim is the
    supremum 2 (2^k - 1) c, attained at y = -x/2 along e_j.
    """
    if not 0 <= j < k:
        raise ParameterError("coordinate index out of range")
    c = riesz_constant(k) if normalized else 1.0

    def func(x):
        r = np.sqrt(np.sum(x * x, axis=-1))
        return c * x[..., j] / r ** (k + 1)

    tag = "riesz" if normalized else "raw-riesz"
    return CZKernel(func, k, c, 2 * (2**k - 1) * c, f"{tag}(k={k},j={j})")


def spherical_kernel(k, omega0, size_const, lipschitz_const, name="spherical"):
    """K(x) = omega0(x/|x|) / |x|^k for a user-supplied spherical part."""

    def func(x):
        r = np.sqrt(np.sum(x * x, axis=-1))
        return np.asarray(omega0(x / r[..., None])) / r**k

    return CZKernel(func, k, size_const, lipschitz_const, name)


@dataclass(frozen=True)
class KernelReport:
    size_stat: float
    lipschitz_stat: float
    cancellation: tuple
    size_ok: bool
    lipschitz_ok: bool
    cancellation_ok: bool

    @property
    def passed(self):
        return self.size_ok and self.lipschitz_ok and self.cancellation_ok


def _random_points(rng, k, n, rmin=1e-3, rmax=1e3):
    d = rng.normal(size=(n, k))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    r = np.exp(rng.uniform(math.log(rmin), math.log(rmax), size=(n, 1)))
    return d * r


def validate_kernel(
    kernel: CZKernel,
    k,
    region: Region,
    samples=20000,
    seed=0,
    pairs=((0.5, 2.0), (0.5, 4.0), (1.0, 2.0), (1.0, 4.0)),
    tol=1e-6,
    rel=1e-9,
):
    """Sampled size and Lipschitz statistics plus annular cancellation integrals."""
    rng = np.random.default_rng(seed)
    x = _random_points(rng, k, samples)
    nx = np.linalg.norm(x, axis=1)
    size_stat = float(np.max(np.abs(kernel(x)) * nx**k))

    d = rng.normal(size=(samples, k))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    y = d * (0.5 * nx * rng.uniform(0, 1, size=samples) ** (1.0 / k))[:, None]
    ny = np.linalg.norm(y, axis=1)
    ok = ny > 0
    diff = np.abs(kernel(x[ok]) - kernel(x[ok] + y[ok]))
    lip_stat = float(np.max(diff * nx[ok] ** (k + 1) / ny[ok]))

    canc = []
    for r, R in pairs:
        val = polar_integrate(region, kernel, R, inner=r, atol=tol * 1e-3)
        canc.append((r, R, abs(val)))
    return KernelReport(
        size_stat,
        lip_stat,
        tuple(canc),
        size_stat <= kernel.size_const * (1 + rel),
        lip_stat <= kernel.lipschitz_const * (1 + rel),
        all(v <= tol for _, _, v in canc),
    )


# ---------------------------------------------------------------------------
# real twist polynomials


@dataclass(frozen=True)
class RealPolynomial:
    """R(x) = sum c_gamma x^gamma with real coefficients; the constant term is dropped."""

    k: int
    terms: tuple
    max_degree: int = 32

    def __post_init__(self):
        for g, _ in self.terms:
            if len(g) != self.k:
                raise ParameterError(f"multi-index {g} has wrong length")
        if self.terms and max(sum(g) for g, _ in self.terms) > self.max_degree:
            raise ParameterError("twist polynomial degree exceeds the configured maximum")

    @classmethod
    def from_dict(cls, k, coeffs, max_degree=32):
        terms = tuple(sorted((tuple(g), float(c)) for g, c in coeffs.items() if sum(g) > 0 and c != 0))
        return cls(k, terms, max_degree)

    @classmethod
    def univariate(cls, coeffs):
        """coeffs[i] multiplies x^i (coeffs[0] is ignored)."""
        return cls.from_dict(1, {(i,): c for i, c in enumerate(coeffs)})

    def phase(self, points):
        """R(points) mod 1 in [0, 1), each monomial term reduced exactly."""
        points = np.asarray(points, dtype=np.int64)
        acc = np.zeros(len(points))
        if not self.terms:
            return acc
        mons = monomials(points, [g for g, _ in self.terms])
        for j, (_, c) in enumerate(self.terms):
            acc += frac_of_product(c, mons[:, j])
        return acc - np.floor(acc)


# ---------------------------------------------------------------------------
# operators


def _shifts_and_weights(cfg: LatticeConfig, region: Region, t, pmap):
    pts, w = weighted_points(cfg, region, t)
    pmap = as_polynomial_map(cfg.gamma if pmap is None else pmap)
    if pmap.k != cfg.k:
        raise ParameterError("polynomial map has the wrong number of variables")
    return pts, w, pmap


def convolve(f: Signal, shifts, weights):
    """sum_s weights[s] * f(x - shifts[s]) as a sparse signal."""
    shifts = np.asarray(shifts, dtype=np.int64)
    weights = np.asarray(weights, dtype=complex)
    if f.dim != shifts.shape[1]:
        raise ParameterError(f"signal lives in Z^{f.dim}, operator in Z^{shifts.shape[1]}")
    coords, vals = f.arrays()
    if len(coords) == 0 or len(shifts) == 0:
        return Signal.zero(f.dim)
    step = max(1, _CHUNK // len(shifts))
    out_c, out_v = [], []
    for i in range(0, len(coords), step):
        c = coords[i : i + step]
        v = vals[i : i + step]
        out_c.append((c[:, None, :] + shifts[None, :, :]).reshape(-1, f.dim))
        out_v.append((v[:, None] * weights[None, :]).ravel())
    return accumulate(np.concatenate(out_c), np.concatenate(out_v), f.dim)


def average_A(f: Signal, t, cfg: LatticeConfig, region: Region, pmap=None) -> Signal:
    pts, w, pmap = _shifts_and_weights(cfg, region, t, pmap)
    theta = math.fsum(w.tolist())
    if theta == 0:
        raise EmptyAverageError(f"Chebyshev normaliser vanishes at t={t}")
    return convolve(f, pmap(pts), w / theta)


def cotlar_H(f: Signal, t, kernel: CZKernel, cfg: LatticeConfig, region: Region, pmap=None) -> Signal:
    """Truncated singular average; the origin lattice point is left out."""
    pts, w, pmap = _shifts_and_weights(cfg, region, t, pmap)
    keep = np.any(pts != 0, axis=1)
    pts, w = pts[keep], w[keep]
    if len(pts) == 0:
        return Signal.zero(f.dim)
    return convolve(f, pmap(pts), w * kernel(pts.astype(float)))


def twisted_average(f: Signal, t, R: RealPolynomial, cfg: LatticeConfig, region: Region, pmap=None) -> Signal:
    pts, w, pmap = _shifts_and_weights(cfg, region, t, pmap)
    theta = math.fsum(w.tolist())
    if theta == 0:
        raise EmptyAverageError(f"Chebyshev normaliser vanishes at t={t}")
    if R.k != cfg.k:
        raise ParameterError("twist polynomial has the wrong number of variables")
    return convolve(f, pmap(pts), w / theta * e(R.phase(pts)))


def cotlar_l1_bound(t, kernel: CZKernel, cfg: LatticeConfig, region: Region):
    """sum |K| * weight over the nonzero lattice points of Omega_t."""
    pts, w = weighted_points(cfg, region, t)
    keep = np.any(pts != 0, axis=1)
    if not keep.any():
        return 0.0
    return math.fsum((np.abs(kernel(pts[keep].astype(float))) * w[keep]).tolist())


# ---------------------------------------------------------------------------
# Fourier multipliers


def auto_periods(f: Signal, radius):
    """Per-axis smallest power of two exceeding 2 * (diameter + radius)."""
    lo, hi = f.bounding_box()
    radius = np.broadcast_to(np.asarray(radius, dtype=np.int64), (f.dim,))
    need = 2 * ((hi - lo) + radius)
    return tuple(1 << int(max(n, 1)).bit_length() for n in need.tolist())


def frequency_grid(periods):
    """Grid frequencies j / P (j in [0, P)) as an array of shape periods + (d,)."""
    axes = [np.arange(P) / P for P in periods]
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)


def apply_multiplier(f: Signal, m, period=None, radius=None, tol=1e-9, cutoff=1e-13) -> Signal:
    """T[m] f on a cyclic grid large enough not to wrap.

    ``m`` is either an object with ``on_grid(periods)`` returning the symbol
    sampled at ``j / P`` or a callable evaluated on an (..., d) frequency
    array.  ``period`` may be an int or a per-axis tuple; by default it is
    chosen from the signal diameter and the operator ``radius``.

    Wrap-around is detected from output mass outside the reach of the
    operator (support of f widened by ``radius``), or, when no radius is
    given, in the outer sixteenth of the grid next to the cut.
    """
    d = f.dim
    if period is None:
        periods = auto_periods(f, 0 if radius is None else radius)
    elif np.ndim(period) == 0:
        periods = (int(period),) * d
    else:
        periods = tuple(int(P) for P in period)
    if len(periods) != d or min(periods) < 1:
        raise ParameterError("period does not match the signal dimension")
    coords, vals = f.arrays()
    if len(coords) == 0:
        return Signal.zero(d)
    lo, hi = coords.min(axis=0), coords.max(axis=0)
    mid = (lo + hi) // 2
    P = np.array(periods)
    if np.any(hi - lo >= P):
        raise PeriodTooSmallError("the signal itself does not fit in one period")
    if radius is None:
        above = P // 2 - np.maximum(P // 16, 1) - 1
        below = -above
    else:
        # the output lives in [lo - radius, hi + radius]; it must fit in one period
        radius = np.broadcast_to(np.asarray(radius, dtype=np.int64), (d,))
        below, above = lo - mid - radius, hi - mid + radius
        if np.any(below < -(P // 2)) or np.any(above >= P - P // 2):
            raise PeriodTooSmallError(f"operator reach {radius.tolist()} does not fit the period grid {periods}")
    dense = np.zeros(periods, dtype=complex)
    np.add.at(dense, tuple(((coords - mid) % P).T), vals)
    if hasattr(m, "on_grid"):
        mg = np.asarray(m.on_grid(periods))
    else:
        mg = np.asarray(m(frequency_grid(periods)))
    if mg.shape != tuple(periods):
        raise ParameterError(f"multiplier grid has shape {mg.shape}, expected {periods}")
    out = np.fft.ifftn(dense)
    del dense
    out *= mg
    out = np.fft.fftn(out)

    # per-axis centred offsets; the band is the union of the outer slabs
    cen = [(np.arange(n) + n // 2) % n - n // 2 for n in periods]
    band = np.zeros(periods, dtype=bool)
    for ax in range(d):
        shape = [1] * d
        shape[ax] = periods[ax]
        band |= ((cen[ax] < below[ax]) | (cen[ax] > above[ax])).reshape(shape)
    mag2 = np.abs(out) ** 2
    total = mag2.sum()
    if total > 0 and mag2[band].sum() > tol**2 * total:
        raise PeriodTooSmallError(f"output reaches the cut of the period grid {periods}")
    if total == 0:
        return Signal.zero(d)
    keep = np.nonzero(mag2 > cutoff**2 * mag2.max())
    coords_out = np.stack([cen[ax][keep[ax]] for ax in range(d)], axis=1) + mid
    return Signal.from_arrays(coords_out, out[keep], d)
