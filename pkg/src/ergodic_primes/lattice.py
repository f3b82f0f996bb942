"""Multi-index sets, polynomial maps, convex regions and weighted lattice points.

The mixed lattice Z^{k'} x (+-P)^{k''} is enumerated by brute force over the
bounding box of the dilated region; coordinates are ordered with the k'
integer coordinates first, and points come out in lexicographic order.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

from .errors import ParameterError, ResourceError
from .primes import primes_upto

MAX_GAMMA_SIZE = 100_000
MAX_ENUMERATION = 60_000_000
INT64_BOUND = 2**63 - 1


# ---------------------------------------------------------------------------
# Multi-indices


@dataclass(frozen=True)
class GammaSet:
    """An ordered set of nonzero multi-indices in N_0^k (lexicographic)."""

    k: int
    indices: tuple

    def __post_init__(self):
        if self.k < 1:
            raise ParameterError("k must be >= 1")
        if not self.indices:
            raise ParameterError("Gamma must be nonempty")
        for g in self.indices:
            if len(g) != self.k or any(e < 0 for e in g) or sum(g) == 0:
                raise ParameterError(f"bad multi-index {g} for k={self.k}")
        if list(self.indices) != sorted(set(self.indices)):
            raise ParameterError("indices must be distinct and lexicographically sorted")

    @classmethod
    def from_indices(cls, k, indices):
        idx = sorted({tuple(int(e) for e in g) for g in indices})
        return cls(k, tuple(idx))

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    @property
    def degree(self):
        return max(sum(g) for g in self.indices)

    @property
    def orders(self):
        """|gamma| for each index, as an int array."""
        return np.array([sum(g) for g in self.indices], dtype=np.int64)

    @property
    def exponents(self):
        return np.array(self.indices, dtype=np.int64).reshape(len(self), self.k)

    def is_full(self):
        return self == build_gamma(self.k, self.degree)


def gamma_size(k, degree):
    return math.comb(k + degree, k) - 1


def build_gamma(k, degree, max_size=MAX_GAMMA_SIZE):
    """All gamma in N_0^k with 0 < |gamma| <= degree, lexicographically ordered."""
    if k < 1 or degree < 1:
        raise ParameterError("k and degree must be >= 1")
    if gamma_size(k, degree) > max_size:
        raise ResourceError(f"|Gamma| = {gamma_size(k, degree)} exceeds {max_size}")
    idx = [g for g in itertools.product(range(degree + 1), repeat=k) if 0 < sum(g) <= degree]
    return GammaSet(k, tuple(sorted(idx)))


def canonical_map(x, gamma: GammaSet, limit_bits=63):
    """The monomial vector (x^gamma : gamma in Gamma).

    Integer input is evaluated exactly and raises OverflowError once a
    monomial leaves the signed ``limit_bits`` range; anything else is
    evaluated in floating point.
    """
    x = tuple(x)
    if len(x) != gamma.k:
        raise ParameterError(f"expected a vector of length {gamma.k}")
    exact = all(isinstance(v, (int, np.integer, Fraction)) for v in x)
    if not exact:
        xv = np.asarray(x, dtype=float)
        return np.prod(xv[None, :] ** gamma.exponents, axis=1)
    out = []
    for g in gamma.indices:
        v = 1
        for xi, e in zip(x, g):
            v *= int(xi) ** e if not isinstance(xi, Fraction) else xi**e
        if limit_bits is not None and not isinstance(v, Fraction) and abs(v) >= 2**limit_bits:
            raise OverflowError(f"monomial {g} overflows {limit_bits} bits")
        out.append(v)
    return tuple(out)


def _monomial_bound(maxabs, exps):
    b = 1
    for m, e in zip(maxabs, exps):
        b *= int(m) ** int(e)
    return b


def monomials(points, exponents):
    """Evaluate monomials exactly on an (M, k) int64 array; (M, d) int64 result."""
    points = np.asarray(points, dtype=np.int64)
    exponents = np.asarray(exponents, dtype=np.int64)
    if len(points) == 0:
        return np.zeros((0, len(exponents)), dtype=np.int64)
    maxabs = np.abs(points).max(axis=0).tolist()
    for row in exponents.tolist():
        if _monomial_bound(maxabs, row) > INT64_BOUND:
            raise OverflowError(f"monomial {tuple(row)} overflows int64 on these points")
    out = np.ones((len(points), len(exponents)), dtype=np.int64)
    for j, row in enumerate(exponents.tolist()):
        for i, e in enumerate(row):
            if e:
                out[:, j] *= points[:, i] ** e
    return out


def scale_matrix_apply(t, xi, gamma: GammaSet):
    """t^A xi: component gamma multiplied by t^{|gamma|}."""
    orders = [sum(g) for g in gamma.indices]
    if isinstance(xi, np.ndarray):
        return xi * np.power(float(t), np.array(orders, dtype=float))
    if len(xi) != len(orders):
        raise ParameterError("frequency length does not match Gamma")
    return tuple(v * t**o for v, o in zip(xi, orders))


# ---------------------------------------------------------------------------
# Polynomial maps


@dataclass(frozen=True)
class IntegerPolynomialMap:
    """P = (P_1, ..., P_d): Z^k -> Z^d with integer coefficients, P(0) = 0.

    Each component is a tuple of ``(multi_index, coefficient)`` pairs.
    """

    k: int
    components: tuple

    def __post_init__(self):
        for comp in self.components:
            for g, c in comp:
                if len(g) != self.k:
                    raise ParameterError(f"multi-index {g} has wrong length")
                if sum(g) == 0 and c != 0:
                    raise ParameterError("polynomial map must vanish at the origin")
                if int(c) != c:
                    raise ParameterError("coefficients must be integers")

    @classmethod
    def from_dicts(cls, k, comps):
        return cls(k, tuple(tuple(sorted((tuple(g), int(c)) for g, c in d.items())) for d in comps))

    @classmethod
    def canonical(cls, gamma: GammaSet):
        return cls(gamma.k, tuple(((g, 1),) for g in gamma.indices))

    @property
    def d(self):
        return len(self.components)

    @property
    def degree(self):
        return max((sum(g) for comp in self.components for g, c in comp if c), default=0)

    def __call__(self, points):
        points = np.asarray(points, dtype=np.int64)
        if points.ndim == 1:
            points = points[None, :]
        out = np.zeros((len(points), self.d), dtype=np.int64)
        if len(points) == 0:
            return out
        maxabs = np.abs(points).max(axis=0).tolist()
        for j, comp in enumerate(self.components):
            if not comp:
                continue
            bound = sum(abs(c) * _monomial_bound(maxabs, g) for g, c in comp)
            if bound > INT64_BOUND:
                raise OverflowError(f"component {j} overflows int64 on these points")
            mons = monomials(points, [g for g, _ in comp])
            out[:, j] = mons @ np.array([c for _, c in comp], dtype=np.int64)
        return out


def as_polynomial_map(pmap) -> IntegerPolynomialMap:
    if isinstance(pmap, GammaSet):
        return IntegerPolynomialMap.canonical(pmap)
    if isinstance(pmap, IntegerPolynomialMap):
        return pmap
    raise ParameterError(f"expected GammaSet or IntegerPolynomialMap, got {type(pmap).__name__}")


# ---------------------------------------------------------------------------
# Regions


@dataclass(frozen=True, eq=False)
class Region:
    """An open bounded convex body with B(0, c_omega) inside it and itself inside B(0, 1).

    Built-in kinds get exact membership and gauge formulas; ``custom`` regions
    only provide a membership predicate on the unit-scale body.
    """

    kind: str
    k: int
    c_omega: float
    axes: tuple = ()
    predicate: Callable | None = field(default=None, repr=False)
    volume_hint: float | None = None

    # -- scale-free geometry -------------------------------------------------

    def gauge(self, x):
        """Minkowski functional: x is in Omega_t exactly when gauge(x) < t."""
        x = np.asarray(x, dtype=float)
        if self.kind == "ball":
            return np.sqrt(np.sum(x * x, axis=-1))
        if self.kind == "cube":
            return 2.0 * np.max(np.abs(x), axis=-1)
        if self.kind == "ellipsoid":
            return np.sqrt(np.sum((x / np.asarray(self.axes)) ** 2, axis=-1))
        return self._bisect_gauge(x)

    def _bisect_gauge(self, x):
        # star-shaped about 0 and inside B(0,1): gauge lies in [|x|, |x|/c]
        norm = np.sqrt(np.sum(x * x, axis=-1))
        lo = norm.copy()
        hi = norm / self.c_omega
        safe = np.where(norm > 0, norm, 1.0)
        unit = x / safe[..., None]
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            inside = np.asarray(self.predicate(unit * (norm / np.where(mid > 0, mid, 1.0))[..., None]))
            hi = np.where(inside, mid, hi)
            lo = np.where(inside, lo, mid)
        return np.where(norm > 0, hi, 0.0)

    def contains_unit(self, y):
        y = np.asarray(y, dtype=float)
        if self.kind == "custom":
            return np.asarray(self.predicate(y), dtype=bool)
        return self.gauge(y) < 1.0

    def contains(self, t, x):
        """Membership in Omega_t, using squared forms to avoid sqrt rounding."""
        x = np.asarray(x, dtype=float)
        if self.kind == "ball":
            return np.sum(x * x, axis=-1) < t * t
        if self.kind == "cube":
            return 2.0 * np.max(np.abs(x), axis=-1) < t
        if self.kind == "ellipsoid":
            return np.sum((x / np.asarray(self.axes)) ** 2, axis=-1) < t * t
        return self.contains_unit(x / t)

    def radial(self, directions):
        """Boundary radius rho(theta) along unit directions."""
        return 1.0 / self.gauge(directions)

    @property
    def angular_breaks(self):
        """Angles (k = 2) where the boundary radius has a kink."""
        if self.kind == "cube" and self.k == 2:
            return tuple(math.pi / 4 + j * math.pi / 2 for j in range(4))
        return ()

    @property
    def smooth(self):
        return self.kind in ("ball", "ellipsoid")

    @property
    def volume(self):
        if self.kind == "ball":
            return math.pi ** (self.k / 2) / math.gamma(self.k / 2 + 1)
        if self.kind == "cube":
            return 1.0
        if self.kind == "ellipsoid":
            return math.pi ** (self.k / 2) / math.gamma(self.k / 2 + 1) * math.prod(self.axes)
        if self.volume_hint is not None:
            return self.volume_hint
        from .quadrature import polar_integrate

        return polar_integrate(self, lambda u: np.ones(u.shape[:-1]), 1.0).real

    def boundary_distance(self, t, x):
        """Euclidean distance from x to the boundary of Omega_t (ball and cube only)."""
        x = np.asarray(x, dtype=float)
        if self.kind == "ball":
            return np.abs(np.sqrt(np.sum(x * x, axis=-1)) - t)
        if self.kind == "cube":
            h = t / 2.0
            ax = np.abs(x)
            inside = np.max(ax, axis=-1) < h
            d_in = h - np.max(ax, axis=-1)
            d_out = np.sqrt(np.sum(np.clip(ax - h, 0, None) ** 2, axis=-1))
            return np.where(inside, d_in, d_out)
        raise ParameterError(f"boundary distance not available for {self.kind} regions")


def ball(k, c_omega=0.5):
    if not 0 < c_omega < 1:
        raise ParameterError("c_omega must lie in (0, 1)")
    return Region("ball", k, c_omega)


def cube(k):
    """The open cube (-1/2, 1/2)^k; it sits inside B(0, 1) only for k <= 3."""
    if k > 3:
        raise ParameterError("the side-1 cube leaves B(0,1) when k > 3")
    return Region("cube", k, 0.5)


def ellipsoid(axes):
    axes = tuple(float(a) for a in axes)
    if not all(0 < a <= 1 for a in axes):
        raise ParameterError("ellipsoid semi-axes must lie in (0, 1]")
    c = min(axes)
    if c >= 1:
        c = 0.5
    return Region("ellipsoid", len(axes), c, axes=axes)


def custom_region(k, predicate, c_omega, check=True, samples=4000, seed=0, volume=None):
    region = Region("custom", k, float(c_omega), predicate=predicate, volume_hint=volume)
    if check:
        problems = check_region(region, samples=samples, seed=seed)
        if problems:
            raise ParameterError("; ".join(problems))
    return region


def check_region(region: Region, samples=4000, seed=0):
    """Randomised spot checks of B(0,c) in Omega in B(0,1) and midpoint convexity.

    Returns a list of human-readable problems (empty when all checks pass).
    """
    rng = np.random.default_rng(seed)
    k = region.k
    problems = []
    d = rng.normal(size=(samples, k))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    inner = d * (region.c_omega * rng.uniform(0, 1, size=(samples, 1)) ** (1 / k)) * (1 - 1e-12)
    if not region.contains_unit(inner).all():
        problems.append("B(0, c_omega) is not contained in the region")
    outer = d * rng.uniform(1.0, 1.5, size=(samples, 1))
    if region.contains_unit(outer).any():
        problems.append("region is not contained in B(0, 1)")
    box = rng.uniform(-1, 1, size=(4 * samples, k))
    members = box[region.contains_unit(box)]
    if len(members) >= 2:
        i = rng.integers(0, len(members), size=samples)
        j = rng.integers(0, len(members), size=samples)
        mid = 0.5 * (members[i] + members[j])
        if not region.contains_unit(mid).all():
            problems.append("midpoint convexity check failed")
    return problems


def region_contains(region: Region, t, x):
    if t <= 0:
        raise ParameterError("t must be positive")
    return bool(region.contains(t, np.asarray(x, dtype=float)))


def boundary_layer_count(region: Region, N, q):
    """Number of integer points within distance q of the boundary of Omega_N."""
    k = region.k
    r = int(math.ceil(N + q)) + 1
    axis = np.arange(-r, r + 1)
    grid = np.stack(np.meshgrid(*([axis] * k), indexing="ij"), axis=-1).reshape(-1, k)
    return int(np.count_nonzero(region.boundary_distance(N, grid) <= q))


# ---------------------------------------------------------------------------
# Configurations and weighted enumeration


@dataclass(frozen=True)
class LatticeConfig:
    k: int
    k_int: int
    k_prime: int
    gamma: GammaSet

    def __post_init__(self):
        if self.k_int < 0 or self.k_prime < 0 or self.k_int + self.k_prime != self.k:
            raise ParameterError("need k' + k'' = k with k', k'' >= 0")
        if self.gamma.k != self.k:
            raise ParameterError("Gamma lives in a different dimension")


def make_config(k, k_prime=0, degree=1, gamma=None):
    """Convenience constructor: full Gamma of the given degree unless one is passed."""
    if gamma is None:
        gamma = build_gamma(k, degree)
    elif not isinstance(gamma, GammaSet):
        gamma = GammaSet.from_indices(k, gamma)
    return LatticeConfig(k, k - k_prime, k_prime, gamma)


@dataclass(frozen=True)
class WeightedPoint:
    point: tuple
    weight: float


def _axes(cfg: LatticeConfig, t):
    r = int(math.ceil(t))
    ints = np.arange(-r, r + 1, dtype=np.int64)
    ps = primes_upto(t) if t >= 2 else np.zeros(0, dtype=np.int64)
    signed = np.concatenate([-ps[::-1], ps])
    return [ints] * cfg.k_int + [signed] * cfg.k_prime


@lru_cache(maxsize=128)
def _weighted_points_cached(cfg, region, t):
    axes = _axes(cfg, t)
    total = math.prod(len(a) for a in axes)
    if total > MAX_ENUMERATION:
        raise ResourceError(f"bounding box holds {total} candidate points")
    if total == 0:
        return np.zeros((0, cfg.k), dtype=np.int64), np.zeros(0)
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, cfg.k)
    grid = grid[region.contains(t, grid)]
    if cfg.k_prime:
        weights = np.prod(np.log(np.abs(grid[:, cfg.k_int :]).astype(float)), axis=1)
    else:
        weights = np.ones(len(grid))
    grid.setflags(write=False)
    weights.setflags(write=False)
    return grid, weights


def weighted_points(cfg: LatticeConfig, region: Region, t):
    """Arrays (points, weights) for the mixed lattice inside Omega_t."""
    if t <= 0:
        raise ParameterError("t must be positive")
    if region.k != cfg.k:
        raise ParameterError("region dimension does not match the configuration")
    return _weighted_points_cached(cfg, region, float(t))


def enumerate_weighted_points(cfg: LatticeConfig, region: Region, t) -> Iterator[WeightedPoint]:
    pts, w = weighted_points(cfg, region, t)
    for p, wt in zip(pts.tolist(), w.tolist()):
        yield WeightedPoint(tuple(p), wt)


def chebyshev_omega(t, cfg: LatticeConfig, region: Region):
    """Log-weighted count of mixed lattice points in Omega_t."""
    _, w = weighted_points(cfg, region, t)
    return math.fsum(w.tolist())


def lattice_breakpoints(cfg: LatticeConfig, region: Region, t_lo, t_hi):
    """Sorted distinct gauges g in [t_lo, t_hi) of lattice points: Omega_t gains points just after g."""
    pts, _ = weighted_points(cfg, region, t_hi)
    g = np.unique(region.gauge(pts.astype(float)))
    return g[(g >= t_lo) & (g < t_hi)]

