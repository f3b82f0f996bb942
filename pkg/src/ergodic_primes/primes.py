"""Primes, residue classes and Chebyshev-type prime sums.

All log-sums go through :func:`math.fsum`, so the only rounding is in the
individual ``log p`` terms.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidClassError, ParameterError, ResourceError

# Bytes we are willing to spend on one prime table (int64 entries plus the
# segment bitmap).  Raise it for bigger sieves.
DEFAULT_MEMORY_BUDGET = 1 << 30
DEFAULT_SEGMENT = 1 << 18


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: np.ndarray

    def __len__(self):
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes.tolist())

    def upto(self, x):
        """Primes <= x (requires x <= limit)."""
        if x > self.limit:
            raise ParameterError(f"table only reaches {self.limit}, asked for {x}")
        return self.primes[: np.searchsorted(self.primes, math.floor(x), side="right")]


@dataclass(frozen=True)
class ResidueClass:
    q: int
    r: int

    def __post_init__(self):
        if self.q < 1:
            raise ParameterError("modulus must be positive")
        if not 1 <= self.r <= self.q:
            raise ParameterError(f"residue must lie in [1, {self.q}], got {self.r}")

    @property
    def coprime(self):
        return math.gcd(self.r, self.q) == 1


def _estimated_bytes(limit):
    if limit < 3:
        return 0
    count = 1.26 * limit / math.log(limit)
    return int(8 * count + DEFAULT_SEGMENT)


def _small_sieve(n):
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def sieve_primes(limit, segment=DEFAULT_SEGMENT, memory_budget=DEFAULT_MEMORY_BUDGET):
    """Segmented sieve of Eratosthenes returning every prime <= ``limit``."""
    limit = int(limit)
    if limit < 1:
        raise ParameterError("limit must be >= 1")
    if _estimated_bytes(limit) > memory_budget:
        raise ResourceError(
            f"sieving to {limit} needs ~{_estimated_bytes(limit)} bytes, budget is {memory_budget}"
        )
    root = math.isqrt(limit)
    base = _small_sieve(root)
    if limit <= max(root, 1) or limit < 2:
        return PrimeTable(limit, base[base <= limit])

    chunks = [base]
    low = root + 1
    while low <= limit:
        high = min(low + segment, limit + 1)
        flags = np.ones(high - low, dtype=bool)
        for p in base.tolist():
            if p * p >= high:
                break
            start = max(p * p, -(-low // p) * p)
            flags[start - low :: p] = False
        chunks.append(np.flatnonzero(flags).astype(np.int64) + low)
        low = high
    return PrimeTable(limit, np.concatenate(chunks))


_table_lock = threading.Lock()
_table_cache: list[PrimeTable] = []


def prime_table(limit):
    """Shared table covering at least ``limit``; grows by doubling."""
    limit = max(int(math.floor(limit)), 2)
    with _table_lock:
        if _table_cache and _table_cache[0].limit >= limit:
            return _table_cache[0]
        target = 1 << max(10, (limit - 1).bit_length())
        table = sieve_primes(target)
        _table_cache[:] = [table]
        return table


def primes_upto(x):
    if x < 2:
        return np.zeros(0, dtype=np.int64)
    return prime_table(x).upto(x)


def is_prime(n):
    """Trial division; used to certify table entries in tests."""
    n = int(n)
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@lru_cache(maxsize=4096)
def factorize(n):
    """Prime factorisation as a tuple of (p, e), by trial division."""
    n = int(n)
    if n < 1:
        raise ParameterError("factorize expects a positive integer")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def euler_totient(q):
    if q < 1:
        raise ParameterError("totient needs q >= 1")
    result = q
    for p, _ in factorize(q):
        result = result // p * (p - 1)
    return result


def mobius(q):
    if q < 1:
        raise ParameterError("mobius needs q >= 1")
    fac = factorize(q)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def units_mod(q):
    """The reduced residue system {a in [1, q] : gcd(a, q) = 1}."""
    if q < 1:
        raise ParameterError("units_mod needs q >= 1")
    return {a for a in range(1, q + 1) if math.gcd(a, q) == 1}


def _as_class(q, r):
    if isinstance(q, ResidueClass):
        return q
    return ResidueClass(int(q), int(r))


def chebyshev_theta(x, q=1, r=1):
    """Sum of log p over primes p <= x with p = r (mod q).

    ``q`` may also be a :class:`ResidueClass`, in which case ``r`` is ignored.
    """
    cls = _as_class(q, r)
    if x < 0:
        raise ParameterError("x must be nonnegative")
    ps = primes_upto(x)
    if cls.q > 1:
        ps = ps[ps % cls.q == cls.r % cls.q]
    if len(ps) == 0:
        return 0.0
    return math.fsum(np.log(ps.astype(np.float64)).tolist())


def siegel_walfisz_error(x, q=1, r=1):
    """|theta(x; q, r) - x / phi(q)| for a coprime class."""
    cls = _as_class(q, r)
    if not cls.coprime:
        raise InvalidClassError(f"gcd({cls.r}, {cls.q}) > 1")
    if x < 1:
        raise ParameterError("x must be >= 1")
    return abs(chebyshev_theta(x, cls) - x / euler_totient(cls.q))
