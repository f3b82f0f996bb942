"""Circle-method scaffolding: parameter plan, fraction families, bumps and major-arc symbols.

The denominator family is P_{<=N} = {1, ..., N}.  It has the four
set-theoretic properties the construction relies on (contains N_N, monotone,
closed under divisors, lcm(P_{<=N}) <= 3^N), which are checked exactly
rather than assumed.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache, reduce

import numpy as np

from .errors import ParameterError, ResourceError
from .expsums import ReducedFraction, continuous_multiplier, gauss_sum
from .lattice import GammaSet, LatticeConfig, Region
from .phases import torus_reduce
from .primes import factorize

MAX_FRACTIONS = 2_000_000


# ---------------------------------------------------------------------------
# scales


def scale_sequence(n, tau):
    """N_n = floor(2^{n^tau}); N_0 = 1."""
    if n < 0 or not 0 < tau <= 1:
        raise ParameterError("need n >= 0 and 0 < tau <= 1")
    x = n**tau
    if x >= 63:
        raise ResourceError(f"N_{n} = 2^{x:.3f} does not fit in 64 bits")
    if float(x).is_integer():
        return 1 << int(x)
    return math.floor(2.0**x)


def _floor_pow2(x):
    if x >= 63:
        raise ResourceError(f"2^{x:.3f} does not fit in 64 bits")
    return math.floor(2.0**x) if x > -1075 else 0


@dataclass(frozen=True)
class ParameterPlan:
    """Tuned exponents of the long-scale argument, validated on construction.

    ``beta`` stands in for the existential beta_rho of the minor-arc
    property; any positive value is accepted.  ``delta`` defaults to 1/2
    for purely quadratic Gamma and 1/(2 max|gamma|) otherwise, a heuristic.
    """

    p: float
    tau: float
    chi: float
    rho: float
    beta: float
    u: int
    gamma_size: int
    p0: float | None = None
    delta: float = 0.5
    kappa_rule: str = "floor"
    varrho: float = field(init=False)

    def __post_init__(self):
        p, p0 = self.p, self.p0
        if not 1 < p < math.inf:
            raise ParameterError("p must lie in (1, inf)")
        if p != 2:
            if p0 is None:
                raise ParameterError("p0 is required when p != 2")
            if p < 2 and not 1 < p0 < p:
                raise ParameterError("for p < 2 need 1 < p0 < p")
            if p > 2 and not p0 > p:
                raise ParameterError("for p > 2 need p0 > p")
        if not 0 < self.tau < 1 - 1 / min(2.0, p):
            raise ParameterError("need 0 < tau < 1 - 1/min(2, p)")
        if not 0 < self.chi < 0.1:
            raise ParameterError("chi must lie in (0, 1/10)")
        if p != 2:
            bound = (p * p0 - 2 * p) / (self.tau * (2 * p0 - 2 * p))
            if not self.rho > bound:
                raise ParameterError(f"rho must exceed {bound:.6g}")
        if self.beta <= 0:
            raise ParameterError("beta must be positive")
        if int(self.u) != self.u or not self.u > self.gamma_size * self.beta:
            raise ParameterError("u must be an integer exceeding |Gamma| * beta")
        if self.delta <= 0:
            raise ParameterError("delta must be positive")
        if self.kappa_rule not in ("floor", "literal"):
            raise ParameterError("kappa_rule is 'floor' or 'literal'")
        object.__setattr__(self, "u", int(self.u))
        object.__setattr__(self, "varrho", min(self.chi / (10 * self.u), self.delta / (8 * self.tau)))

    @classmethod
    def for_gamma(cls, gamma: GammaSet, p=2.0, tau=0.4, chi=0.05, rho=None, beta=1.0, u=None, p0=None, delta=None, kappa_rule="floor"):
        """Plan with defaults filled in: u = floor(|Gamma| beta) + 1, rho just above its bound."""
        if delta is None:
            delta = default_delta(gamma)
        if u is None:
            u = math.floor(len(gamma) * beta) + 1
        if p0 is None and p != 2:
            p0 = (1 + p) / 2 if p < 2 else 2 * p
        if rho is None:
            rho = 1.0 / tau if p == 2 else (p * p0 - 2 * p) / (tau * (2 * p0 - 2 * p)) + 1.0
        return cls(p, tau, chi, rho, beta, u, len(gamma), p0, delta, kappa_rule)

    def N(self, n):
        return scale_sequence(n, self.tau)

    def kappa(self, s):
        """kappa_s; 'floor' is floor(s^{2 varrho}), 'literal' is s^{2 floor(varrho)}."""
        if self.kappa_rule == "literal":
            return int(s ** (2 * math.floor(self.varrho)))
        return math.floor(s ** (2 * self.varrho))

    def j0(self, s):
        """First index of the large-scale range, ceil(2^{kappa_s / tau})."""
        return math.ceil(2.0 ** (self.kappa(s) / self.tau))

    def S(self, M):
        return _floor_pow2(M**self.tau - 3 * M ** (self.tau * self.chi))

    def J(self, s):
        k = self.kappa(s)
        return _floor_pow2(2.0**k - 3 * 2.0 ** (k * self.chi))

    def to_dict(self):
        return asdict(self)


def default_delta(gamma: GammaSet):
    if all(o == 2 for o in gamma.orders):
        return 0.5
    return 1.0 / (2 * int(max(gamma.orders)))


def F(t, u):
    """max{s in 2^{uN} : s <= t}, or None when t < 2^u."""
    step = 1 << u
    if t < step:
        return None
    s = step
    while s * step <= t:
        s *= step
    return s


def annulus_levels(limit, u):
    """All s in 2^{uN} with s <= limit."""
    out, s = [], 1 << u
    while s <= limit:
        out.append(s)
        s <<= u
    return out


# ---------------------------------------------------------------------------
# Ionescu-Wainger denominators and fractions


def build_P_leq(N):
    if N < 1:
        raise ParameterError("N must be >= 1")
    return frozenset(range(1, int(N) + 1))


def lcm_of(qs):
    return reduce(math.lcm, qs, 1)


def check_iw_properties(N_max=100, lcm_max=60):
    """Exact checks of inclusion, monotonicity, divisor closure and lcm(P_N) <= 3^N."""
    prev = frozenset()
    res = {"inclusion": True, "monotone": True, "divisor_closed": True, "lcm_bound": True}
    for N in range(1, N_max + 1):
        P = build_P_leq(N)
        res["inclusion"] &= set(range(1, N + 1)) <= P
        res["monotone"] &= prev <= P
        res["divisor_closed"] &= all(d in P for q in P for d in range(1, q + 1) if q % d == 0)
        prev = P
    for N in range(1, lcm_max + 1):
        res["lcm_bound"] &= lcm_of(build_P_leq(N)) <= 3**N
    return res


@dataclass(frozen=True)
class FractionSet:
    """Reduced fractions a/q in T^Gamma; ``numerators`` is (n, |Gamma|) with entries in [1, q]."""

    level: str
    numerators: np.ndarray = field(repr=False)
    denominators: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.denominators)

    @property
    def points(self):
        """Representatives in [-1/2, 1/2)^Gamma."""
        return torus_reduce(self.numerators / self.denominators[:, None])

    @property
    def moduli(self):
        return sorted(set(self.denominators.tolist()))

    def members(self):
        return {ReducedFraction(tuple(a), int(q)) for a, q in zip(self.numerators.tolist(), self.denominators.tolist())}

    def keys(self):
        """Hashable identity of each member as a point of T^Gamma."""
        return {(tuple(a), q) for a, q in zip(self.numerators.tolist(), self.denominators.tolist())}


def _count_reduced(q, d):
    # Jordan totient J_d(q)
    out = q**d
    for p, _ in factorize(q):
        out = out // p**d * (p**d - 1)
    return out


def _fractions_with(qs, d, level, cap):
    qs = list(qs)
    total = sum(_count_reduced(q, d) for q in qs)
    if total > cap:
        raise ResourceError(f"{total} fractions exceed the cap {cap}")
    nums, dens = [], []
    for q in qs:
        a = np.indices((q,) * d).reshape(d, -1).T + 1
        g = np.gcd.reduce(np.concatenate([a, np.full((len(a), 1), q)], axis=1), axis=1)
        a = a[g == 1]
        nums.append(a)
        dens.append(np.full(len(a), q, dtype=np.int64))
    if not nums:
        return FractionSet(level, np.zeros((0, d), dtype=np.int64), np.zeros(0, dtype=np.int64))
    return FractionSet(level, np.concatenate(nums).astype(np.int64), np.concatenate(dens))


@lru_cache(maxsize=64)
def _fractions_leq_cached(N, d, cap):
    return _fractions_with(sorted(build_P_leq(N)), d, f"<={N}", cap)


def fractions_leq(N, gamma, cap=MAX_FRACTIONS):
    """Sigma_{<=N}: a/q with q in P_{<=N}, a in [1, q]^Gamma, gcd(a, q) = 1."""
    d = gamma if isinstance(gamma, int) else len(gamma)
    return _fractions_leq_cached(int(N), d, cap)


def _annulus_moduli(s, u):
    lo = s >> u if s > (1 << u) else 0
    return [q for q in sorted(build_P_leq(s)) if q > lo]


def _check_level(s, u):
    if u < 1 or s < (1 << u) or s & (s - 1) or (s.bit_length() - 1) % u:
        raise ParameterError(f"{s} is not a power of 2^{u}")


@lru_cache(maxsize=64)
def _fractions_annulus_cached(s, u, d, cap):
    # a reduced fraction has a unique denominator, so removing Sigma_{<=s/2^u}
    # leaves exactly the fractions whose q lies in (s/2^u, s]
    return _fractions_with(_annulus_moduli(s, u), d, f"s={s}", cap)


def fractions_annulus(s, u, gamma, cap=MAX_FRACTIONS):
    s = int(s)
    _check_level(s, u)
    d = gamma if isinstance(gamma, int) else len(gamma)
    return _fractions_annulus_cached(s, u, d, cap)


# ---------------------------------------------------------------------------
# bumps


def _smooth_step(z):
    """0 for z <= 0, 1 for z >= 1, C-infinity in between."""
    z = np.clip(np.asarray(z, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(z > 0, np.exp(-1.0 / np.where(z > 0, z, 1.0)), 0.0)
        b = np.where(z < 1, np.exp(-1.0 / np.where(z < 1, 1.0 - z, 1.0)), 0.0)
    return a / (a + b)


def bump_eta(x, gamma_size=None):
    """eta: 1 for |x|_inf <= 1/(32|Gamma|), 0 for |x|_inf >= 1/(16|Gamma|)."""
    x = np.asarray(x, dtype=float)
    G = x.shape[-1] if gamma_size is None else gamma_size
    m = np.max(np.abs(x), axis=-1)
    lo, hi = 1.0 / (32 * G), 1.0 / (16 * G)
    return _smooth_step((hi - m) / (hi - lo))


def bump_eta_scaled(N, chi, xi, gamma: GammaSet, variant="standard"):
    """eta(2^{N A - N^chi Id} xi); the tilde variant evaluates at xi / 2."""
    if N <= 0:
        raise ParameterError("N must be positive")
    xi = np.asarray(xi, dtype=float)
    if variant == "tilde":
        xi = xi / 2
    elif variant != "standard":
        raise ParameterError(f"unknown bump variant {variant!r}")
    expo = N * gamma.orders.astype(float) - N**chi
    with np.errstate(over="ignore", invalid="ignore"):
        y = np.where(xi == 0, 0.0, xi * np.exp2(np.minimum(expo, 1e4)))
    y = np.where(np.isnan(y), np.inf, y)
    return bump_eta(y, len(gamma))


def bump_support_radius(N, chi, gamma: GammaSet, variant="standard"):
    """Per-component half-width of supp eta_N: 2^{-N|gamma| + N^chi} / (16 |Gamma|)."""
    r = np.exp2(-N * gamma.orders.astype(float) + N**chi) / (16 * len(gamma))
    return 2 * r if variant == "tilde" else r


def _bump_sum(fr: FractionSet, N, chi, xi, gamma, weights=None, variant="standard", chunk=1_000_000):
    xi = np.asarray(xi, dtype=float)
    single = xi.ndim == 1
    xis = xi.reshape(-1, len(gamma))
    out = np.zeros(len(xis), dtype=complex if weights is not None else float)
    if len(fr) == 0:
        return out[0] if single else out.reshape(xi.shape[:-1])
    pts = fr.points
    step = max(1, chunk // (len(pts) * len(gamma)))
    for i in range(0, len(xis), step):
        diff = torus_reduce(xis[i : i + step, None, :] - pts[None, :, :])
        b = bump_eta_scaled(N, chi, diff, gamma, variant)
        out[i : i + step] = b @ weights if weights is not None else b.sum(axis=1)
    return out[0] if single else out.reshape(xi.shape[:-1])


def annuli_multiplier(j, s, plan: ParameterPlan, gamma: GammaSet, xi):
    """Xi_j^s(xi) for an annulus level s, or Xi_{<= j^{tau u}} when s == "leq"."""
    N = j**plan.tau
    if s == "leq":
        top = F(N**plan.u, plan.u)
        fr = fractions_leq(top, gamma) if top is not None else FractionSet("empty", np.zeros((0, len(gamma)), np.int64), np.zeros(0, np.int64))
    else:
        fr = fractions_annulus(s, plan.u, gamma)
    return _bump_sum(fr, N, plan.chi, xi, gamma)


def bump_disjointness(j, plan: ParameterPlan, gamma: GammaSet):
    """Whether the eta_{j^tau} bumps around Sigma_{<=F(j^{tau u})} are pairwise disjoint.

    Two boxes are disjoint when some component separation is at least the
    sum of half-widths.  Returns (disjoint, min separation ratio).
    """
    N = j**plan.tau
    top = F(N**plan.u, plan.u)
    if top is None:
        return True, math.inf
    pts = fractions_leq(top, gamma).points
    r = bump_support_radius(N, plan.chi, gamma)
    if len(pts) < 2:
        return True, math.inf
    diff = np.abs(torus_reduce(pts[:, None, :] - pts[None, :, :])) / (2 * r)
    sep = diff.max(axis=-1)
    np.fill_diagonal(sep, np.inf)
    m = float(sep.min())
    return m >= 1.0, m


# ---------------------------------------------------------------------------
# composite symbols


class ThetaCache:
    """Memoised Theta_t(xi) (Phi or Psi) for the composite symbols."""

    def __init__(self, region: Region, gamma: GammaSet, mode="phi", kernel=None):
        self.region, self.gamma, self.mode, self.kernel = region, gamma, mode, kernel
        self._memo = {}

    def __call__(self, xi, t):
        key = (tuple(np.asarray(xi, dtype=float).tolist()), float(t))
        if key not in self._memo:
            self._memo[key] = continuous_multiplier(key[0], t, self.region, self.gamma, self.mode, self.kernel)
        return self._memo[key]

    def diff(self, xi, j, plan):
        return self(xi, plan.N(j)) - self(xi, plan.N(j - 1))


def composite_multiplier(variant, index, s, plan: ParameterPlan, cfg: LatticeConfig, theta: ThetaCache, xi):
    """Evaluate v, Lambda, w, Pi, omega or Delta at a single frequency xi.

    ``index`` is j for v and Lambda, n for omega and Delta, and ignored for
    w and Pi.
    """
    gamma = cfg.gamma
    xi = np.asarray(xi, dtype=float)
    if variant in ("v", "Lambda", "w", "Pi"):
        fr = fractions_annulus(s, plan.u, gamma)
        total = 0j
        for a, q in zip(fr.numerators.tolist(), fr.denominators.tolist()):
            d = torus_reduce(xi - np.array(a) / q)
            if variant in ("v", "Lambda"):
                b = float(bump_eta_scaled(index**plan.tau, plan.chi, d, gamma))
                if b == 0:
                    continue
                term = theta.diff(d, index, plan) * b
            else:
                b = float(bump_eta_scaled(2 ** plan.kappa(s), plan.chi, d, gamma, "tilde"))
                if b == 0:
                    continue
                term = b
            if variant in ("v", "w"):
                term *= gauss_sum(ReducedFraction(tuple(a), q), cfg)
            total += term
        return total
    j0 = plan.j0(s)
    if variant == "omega":
        total = 0j
        for j in range(j0, index + 1):
            b = float(bump_eta_scaled(j**plan.tau, plan.chi, xi, gamma))
            if b:
                total += theta.diff(xi, j, plan) * b
        return total
    if variant == "Delta":
        if index < j0:
            return 0j
        return theta(xi, plan.N(index)) - theta(xi, plan.N(j0 - 1))
    raise ParameterError(f"unknown composite variant {variant!r}")


def delta_telescoping_gap(n, s, plan: ParameterPlan, theta: ThetaCache, xi):
    """|sum_{j0 <= j <= n} (Theta_{N_j} - Theta_{N_{j-1}})(xi) - Delta_n^s(xi)|."""
    j0 = plan.j0(s)
    total = sum((theta.diff(xi, j, plan) for j in range(j0, n + 1)), 0j)
    delta = theta(xi, plan.N(n)) - theta(xi, plan.N(j0 - 1)) if n >= j0 else 0j
    return abs(total - delta)


@dataclass(frozen=True)
class SupportReport:
    s: int
    Q_s: int
    Q_bound_ok: bool
    divides_lcm: bool
    kappa: int
    level_inequality: bool
    support_radius: float
    support_ok: bool | None  # None where the level inequality fails and the check does not apply

    def to_dict(self):
        return asdict(self)


def support_radius_check(plan: ParameterPlan, s, gamma: GammaSet):
    s = int(s)
    _check_level(s, plan.u)
    Q = lcm_of(_annulus_moduli(s, plan.u))
    k = plan.kappa(s)
    N = 2.0**k
    # 2^{-2^kappa + 2^{kappa chi}} <= 1/(4 Q_s), compared in log2
    lhs = -N + 2.0 ** (k * plan.chi)
    ineq = lhs <= -math.log2(4 * Q)
    radius = float(bump_support_radius(N, plan.chi, gamma).max())
    return SupportReport(
        s=s,
        Q_s=Q,
        Q_bound_ok=Q <= 3**s,
        divides_lcm=lcm_of(build_P_leq(s)) % Q == 0,
        kappa=k,
        level_inequality=bool(ineq),
        support_radius=radius,
        support_ok=(radius <= 1.0 / (4 * Q)) if ineq else None,
    )
