"""Weyl and Gauss sums, discrete and continuous multipliers, and major-arc approximation errors.

Phases e(xi . Q(n, p)) are reduced modulo 1 before exponentiation: exactly in
integer arithmetic for rational frequencies, and with an error-free product
for doubles.  Q is the canonical map of the configuration's Gamma unless a
polynomial map is given.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

from .errors import EmptyAverageError, ParameterError
from .lattice import GammaSet, LatticeConfig, Region, as_polynomial_map, monomials, weighted_points
from .phases import e, frac_of_product, torus_reduce
from .primes import euler_totient, units_mod
from .quadrature import polar_integrate

_CHUNK = 2_000_000


@dataclass(frozen=True)
class ReducedFraction:
    """a/q in Q^Gamma / Z^Gamma with a_gamma in [1, q] and gcd(a, q) = 1."""

    a: tuple
    q: int

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        q = int(self.q)
        if q < 1:
            raise ParameterError("denominator must be positive")
        if any(not 1 <= x <= q for x in a):
            raise ParameterError("numerators must lie in [1, q]")
        if reduce(math.gcd, a, q) != 1:
            raise ParameterError(f"{a}/{q} is not reduced")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "q", q)

    @classmethod
    def make(cls, a, q):
        """Normalise numerators into [1, q] first (a = 0 maps to q)."""
        return cls(tuple((int(x) - 1) % q + 1 for x in np.atleast_1d(a)), q)

    @property
    def point(self):
        """Representative in [-1/2, 1/2)^Gamma."""
        return torus_reduce(np.array(self.a, dtype=float) / self.q)

    def __str__(self):
        return "(" + ",".join(str(x) for x in self.a) + f")/{self.q}"


# ---------------------------------------------------------------------------
# phases


def _mons(cfg: LatticeConfig, pts, pmap):
    if pmap is None:
        return monomials(pts, cfg.gamma.exponents)
    return as_polynomial_map(pmap)(pts)


def _phase(xi, mons):
    """(xi . mons) mod 1 for a single frequency; exact for rational inputs."""
    if isinstance(xi, ReducedFraction):
        q = xi.q
        a = np.array(xi.a, dtype=np.int64)
        r = np.zeros(len(mons), dtype=np.int64)
        for j in range(mons.shape[1]):
            r = (r + a[j] * (mons[:, j] % q)) % q
        return r / q
    xi = list(xi) if not isinstance(xi, np.ndarray) else xi
    if len(xi) and all(isinstance(x, Fraction) for x in xi):
        acc = np.zeros(len(mons))
        for j, x in enumerate(xi):
            num, den = x.numerator % x.denominator, x.denominator
            acc += ((mons[:, j] % den) * num % den) / den
        return acc - np.floor(acc)
    xi = np.asarray(xi, dtype=float)
    acc = np.zeros(len(mons))
    for j in range(mons.shape[1]):
        acc += frac_of_product(xi[j], mons[:, j])
    return acc - np.floor(acc)


def _phase_many(xis, mons):
    """(n, M) phases for a float frequency array of shape (M, |Gamma|)."""
    acc = np.zeros((len(mons), len(xis)))
    for j in range(mons.shape[1]):
        acc += frac_of_product(xis[None, :, j], mons[:, None, j])
    return acc - np.floor(acc)


# ---------------------------------------------------------------------------
# Weyl sums


def _resolve_phi(phi, pts, w):
    if phi is None or phi == "one":
        return np.ones(len(pts))
    if phi == "log":
        return w
    return np.asarray(phi(pts, w))


def weyl_sum(xi, cfg: LatticeConfig, outer: Region, t, phi=None, inner: Region | None = None, pmap=None):
    """sum over (n, p) in Omega_t minus Omega'_t of e(xi . Q(n, p)) phi(n, p).

    ``phi`` is None (weight 1), "log" (the prime log-weights) or a callable
    ``phi(points, log_weights)``.
    """
    pts, w = weighted_points(cfg, outer, t)
    if inner is not None:
        keep = ~inner.contains(t, pts)
        pts, w = pts[keep], w[keep]
    vals = _resolve_phi(phi, pts, w).astype(complex)
    total = 0j
    for i in range(0, len(pts), _CHUNK):
        sl = slice(i, i + _CHUNK)
        ph = _phase(xi, _mons(cfg, pts[sl], pmap))
        total += complex(np.sum(vals[sl] * e(ph)))
    return total


# ---------------------------------------------------------------------------
# Gauss sums


def _residue_table(q, cfg: LatticeConfig, pmap=None):
    """Q(x, y) mod q over x in [1, q]^{k'}, y in A_q^{k''}, as an int array (count, |Gamma|)."""
    axes = [np.arange(1, q + 1, dtype=np.int64)] * cfg.k_int + [np.array(sorted(units_mod(q)), dtype=np.int64)] * cfg.k_prime
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, cfg.k)
    red = grid % q  # monomials mod q only depend on residues
    return _mons(cfg, red, pmap) % q


def gauss_sum(frac: ReducedFraction, cfg: LatticeConfig, pmap=None) -> complex:
    """G(a/q) = q^{-k'} phi(q)^{-k''} sum_x sum_y e((a/q) . Q(x, y)), exact integer phases."""
    q = frac.q
    if len(frac.a) != (len(cfg.gamma) if pmap is None else as_polynomial_map(pmap).d):
        raise ParameterError("fraction has the wrong number of components")
    res = _residue_table(q, cfg, pmap)
    a = np.array(frac.a, dtype=np.int64)
    r = (res % q) @ a % q
    counts = np.bincount(r, minlength=q)
    val = complex(np.sum(counts * e(np.arange(q) / q)))
    return val / (q ** cfg.k_int * euler_totient(q) ** cfg.k_prime)


def gauss_sums_all(q, cfg: LatticeConfig, pmap=None):
    """G(a/q) for every a in (Z/q)^Gamma at once, indexed by a mod q.

    The residue histogram of Q is transformed with an inverse FFT, so all
    numerators cost one q^{|Gamma|} transform.
    """
    res = _residue_table(q, cfg, pmap)
    d = res.shape[1]
    if q**d > 50_000_000:
        raise ParameterError("q^|Gamma| too large for the all-numerator table")
    H = np.zeros((q,) * d)
    np.add.at(H, tuple(res.T), 1.0)
    return np.fft.ifftn(H) * (q**d) / (q ** cfg.k_int * euler_totient(q) ** cfg.k_prime)


def max_gauss_modulus(q, cfg: LatticeConfig):
    """max over reduced a of |G(a/q)|."""
    G = gauss_sums_all(q, cfg)
    idx = np.indices(G.shape).reshape(G.ndim, -1).T
    g = np.gcd.reduce(np.concatenate([idx, np.full((len(idx), 1), q)], axis=1), axis=1)
    return float(np.abs(G.ravel()[g == 1]).max())


# ---------------------------------------------------------------------------
# discrete multipliers


class DiscreteMultiplier:
    """m_t (average mode) or n_t (cotlar mode) as a function on T^Gamma.

    Calling it evaluates pointwise; ``on_grid`` samples it on j / P exactly
    by transforming the residue histogram of the shifts.
    """

    def __init__(self, t, cfg: LatticeConfig, region: Region, mode="average", kernel=None, pmap=None):
        pts, w = weighted_points(cfg, region, t)
        if mode == "average":
            theta = math.fsum(w.tolist())
            if theta == 0:
                raise EmptyAverageError(f"Chebyshev normaliser vanishes at t={t}")
            weights = w / theta
        elif mode == "cotlar":
            if kernel is None:
                raise ParameterError("cotlar mode needs a kernel")
            keep = np.any(pts != 0, axis=1)
            pts, w = pts[keep], w[keep]
            weights = w * kernel(pts.astype(float)) if len(pts) else w
        else:
            raise ParameterError(f"unknown multiplier mode {mode!r}")
        self.t, self.cfg, self.mode, self.pmap = t, cfg, mode, pmap
        self.points = pts
        self.weights = np.asarray(weights, dtype=float)
        self.shifts = _mons(cfg, pts, pmap)
        self._grids = {}

    @property
    def dim(self):
        return self.shifts.shape[1]

    @property
    def radius(self):
        """Per-axis spatial reach max |Q_gamma(n, p)|."""
        if len(self.shifts) == 0:
            return np.zeros(self.dim, dtype=np.int64)
        return np.abs(self.shifts).max(axis=0)

    def __call__(self, xi):
        if isinstance(xi, ReducedFraction) or (not isinstance(xi, np.ndarray) and any(isinstance(x, Fraction) for x in xi)):
            return complex(np.sum(self.weights * e(_phase(xi, self.shifts))))
        xi = np.asarray(xi, dtype=float)
        single = xi.ndim == 1
        xis = xi.reshape(-1, self.dim)
        out = np.zeros(len(xis), dtype=complex)
        step = max(1, _CHUNK // max(len(self.shifts), 1))
        for i in range(0, len(xis), step):
            ph = _phase_many(xis[i : i + step], self.shifts)
            out[i : i + step] = self.weights @ e(ph)
        return complex(out[0]) if single else out.reshape(xi.shape[:-1])

    def on_grid(self, periods):
        periods = tuple(int(P) for P in periods)
        if periods not in self._grids:
            H = np.zeros(periods)
            if len(self.shifts):
                np.add.at(H, tuple((self.shifts % np.array(periods)).T), self.weights)
            self._grids = {periods: np.fft.ifftn(H) * math.prod(periods)}
        return self._grids[periods]


def discrete_multiplier(xi, t, cfg: LatticeConfig, region: Region, mode="average", kernel=None, pmap=None):
    return DiscreteMultiplier(t, cfg, region, mode, kernel, pmap)(xi)


# ---------------------------------------------------------------------------
# continuous multipliers


def _canonical_float(u, gamma: GammaSet):
    u = np.asarray(u, dtype=float)
    return np.stack([np.prod(u ** np.array(g), axis=-1) for g in gamma.indices], axis=-1)


def continuous_multiplier(xi, t, region: Region, gamma: GammaSet, mode="phi", kernel=None, tol=1e-10, atol=1e-13):
    """Phi_t (normalised average over Omega_t) or Psi_t (principal value against K).

    Psi_t is integrated as int_{Omega_t} (e(xi . Q(u)) - 1) K(u) du, which
    equals the principal value because K has vanishing annular integrals and
    the integrand is now absolutely integrable at the origin.
    """
    xi = np.asarray(xi, dtype=float)
    if region.k != gamma.k:
        raise ParameterError("region dimension does not match Gamma")
    if mode == "phi":
        # Phi_t(xi) = Phi_1(t^A xi)
        eta = xi * t ** np.array(gamma.orders, dtype=float)
        val = polar_integrate(region, lambda u: e(_canonical_float(u, gamma) @ eta), 1.0, tol=tol, atol=atol)
        return val / region.volume
    if mode == "psi":
        if kernel is None:
            raise ParameterError("psi mode needs a kernel")

        def g(u):
            return (e(_canonical_float(u, gamma) @ xi) - 1.0) * kernel(u)

        return polar_integrate(region, g, t, tol=tol, atol=atol)
    raise ParameterError(f"unknown continuous mode {mode!r}")


# ---------------------------------------------------------------------------
# approximation errors


def in_major_box(frac: ReducedFraction, xi, t, gamma: GammaSet, L):
    d = torus_reduce(np.asarray(xi, dtype=float) - np.array(frac.a) / frac.q)
    return bool(np.all(np.abs(d) <= t ** (-np.array(gamma.orders, dtype=float)) * L))


def approximation_error(
    frac: ReducedFraction,
    xi,
    t,
    cfg: LatticeConfig,
    region: Region,
    mode="average",
    kernel=None,
    L=None,
    t_prev=None,
    normalization="theta",
):
    """|m_t(xi) - G(a/q) Theta_t(xi - a/q)| with Theta = Phi (average) or Psi (cotlar).

    With ``t_prev`` both sides become differences between the scales t_prev
    and t.  ``normalization="volume"`` compares the raw weighted sum with
    G(a/q) times the unnormalised integral, divided by |Omega_t|; this is the
    form that still sees prime-counting errors at xi = 0.
    """
    gamma = cfg.gamma
    if L is not None and not in_major_box(frac, xi, t, gamma, L):
        raise ParameterError("frequency lies outside the major-arc box")
    theta_mode = {"average": "phi", "cotlar": "psi"}.get(mode)
    if theta_mode is None:
        raise ParameterError(f"unknown mode {mode!r}")
    G = gauss_sum(frac, cfg)
    shift = torus_reduce(np.asarray(xi, dtype=float) - np.array(frac.a) / frac.q)

    def side(s):
        if mode == "average" and normalization == "volume":
            raw = weyl_sum(xi, cfg, region, s, phi="log")
            cont = continuous_multiplier(shift, s, region, gamma, "phi") * region.volume * s**region.k
            return raw, cont
        if normalization not in ("theta", "volume"):
            raise ParameterError(f"unknown normalization {normalization!r}")
        disc = discrete_multiplier(xi, s, cfg, region, mode, kernel)
        cont = continuous_multiplier(shift, s, region, gamma, theta_mode, kernel)
        return disc, cont

    d1, c1 = side(t)
    if t_prev is not None:
        d0, c0 = side(t_prev)
        d1, c1 = d1 - d0, c1 - c0
    err = abs(d1 - G * c1)
    if mode == "average" and normalization == "volume":
        err /= region.volume * t**region.k
    return err


def property2_ratio(xi, n, tau, region: Region, gamma: GammaSet):
    """|Phi_{N_n}(xi) - Phi_{N_{n-1}}(xi)| / min(|N_n^A xi|, |N_n^A xi|^{-1/|Gamma|})."""
    from .circle import scale_sequence

    Nn, Nm = scale_sequence(n, tau), scale_sequence(n - 1, tau)
    diff = abs(continuous_multiplier(xi, Nn, region, gamma) - continuous_multiplier(xi, Nm, region, gamma))
    size = float(np.max(np.abs(np.asarray(xi) * Nn ** np.array(gamma.orders, dtype=float))))
    env = min(size, size ** (-1.0 / len(gamma))) if size > 0 else 0.0
    return diff / env if env > 0 else 0.0
