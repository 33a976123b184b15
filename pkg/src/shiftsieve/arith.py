"""Elementary multiplicative-function utilities and smooth/rough factorization.

A single cached Eratosthenes table backs every prime lookup; all outputs
here are exact integers except the floating fields of SievingParameters.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from math import comb, gcd, isqrt
from typing import Iterator

import numpy as np

__all__ = [
    "prime_table",
    "is_prime",
    "factorize",
    "euler_phi",
    "tau",
    "tau_m",
    "divisors",
    "gcd",
    "smooth_rough",
    "SmoothRoughFactorization",
    "smooth_part_table",
    "SievingParameters",
    "make_params",
    "PRIME_TABLE_MAX",
]

PRIME_TABLE_MAX = 200_000_000
_CACHE_ENV = "SHIFTSIEVE_PRIME_CACHE"

_primes: np.ndarray = np.array([], dtype=np.int64)
_primes_limit = 0


def prime_table(limit: int) -> np.ndarray:
    """Sorted primes <= limit (int64).  Built once and grown on demand.

    If the SHIFTSIEVE_PRIME_CACHE environment variable names a directory,
    sieved tables are persisted there as .npy files and reloaded.
    """
    global _primes, _primes_limit
    limit = int(limit)
    if limit > PRIME_TABLE_MAX:
        raise ValueError(f"prime table limit {limit} exceeds capacity {PRIME_TABLE_MAX}")
    if limit <= _primes_limit:
        return _primes[: np.searchsorted(_primes, limit, side="right")]

    cache_dir = os.environ.get(_CACHE_ENV)
    path = None
    if cache_dir:
        path = os.path.join(cache_dir, f"primes_{limit}.npy")
        if os.path.exists(path):
            _primes = np.load(path)
            _primes_limit = limit
            return _primes

    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    _primes = np.nonzero(sieve)[0].astype(np.int64)
    _primes_limit = limit
    if path:
        os.makedirs(cache_dir, exist_ok=True)
        np.save(path, _primes)
    return _primes


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in prime_table(isqrt(n)):
        if n % int(p) == 0:
            return False
    return True


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization [(p, e), ...] by trial division."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    out = []
    rem = n
    for p in prime_table(isqrt(n)):
        p = int(p)
        if p * p > rem:
            break
        if rem % p == 0:
            e = 0
            while rem % p == 0:
                rem //= p
                e += 1
            out.append((p, e))
    if rem > 1:
        out.append((rem, 1))
    return out


def euler_phi(n: int) -> int:
    phi = 1
    for p, e in factorize(n):
        phi *= (p - 1) * p ** (e - 1)
    return phi


def tau_m(n: int, m: int = 2) -> int:
    """Number of ordered m-tuples with product n: tau_m(p^a) = C(a+m-1, m-1)."""
    if n < 1 or m < 1:
        raise ValueError("tau_m requires n >= 1 and m >= 1")
    value = 1
    for _, e in factorize(n):
        value *= comb(e + m - 1, m - 1)
    return value


def tau(n: int) -> int:
    return tau_m(n, 2)


def divisors(n: int) -> list[int]:
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**j for d in ds for j in range(e + 1)]
    return sorted(ds)


@dataclass(frozen=True)
class SmoothRoughFactorization:
    """The unique split n = smooth * rough at threshold z."""

    n: int
    z: float
    smooth: int
    rough: int


def smooth_rough(n: int, z: float) -> SmoothRoughFactorization:
    """Split n into its z-smooth part and z-rough part by trial division."""
    if n < 1:
        raise ValueError("smooth_rough requires n >= 1")
    if z < 2 or n <= z:
        # below 2 nothing is smooth; at z >= n everything is
        if z < 2:
            return SmoothRoughFactorization(n, z, 1, n)
        return SmoothRoughFactorization(n, z, n, 1)
    smooth = 1
    rem = n
    bound = min(int(z), isqrt(n))
    for p in prime_table(bound):
        p = int(p)
        if p * p > rem:
            break
        while rem % p == 0:
            smooth *= p
            rem //= p
    if rem > 1 and rem <= z:
        smooth *= rem
        rem = 1
    return SmoothRoughFactorization(n, z, smooth, rem)


def smooth_part_table(limit: int, z: float) -> np.ndarray:
    """Vector of z-smooth parts for 0..limit (entry 0 unused, set to 1).

    Accumulates one factor p per prime power p^e <= limit with p <= z; the
    smooth parts themselves never exceed limit, so int64 is exact.
    """
    out = np.ones(limit + 1, dtype=np.int64)
    if z < 2 or limit < 2:
        return out
    if z >= limit:
        out[1:] = np.arange(1, limit + 1, dtype=np.int64)
        return out
    for p in prime_table(min(int(z), limit)):
        p = int(p)
        power = p
        while power <= limit:
            out[power::power] *= p
            power *= p
    return out


@dataclass(frozen=True)
class SievingParameters:
    """The tuple (x, epsilon, s, z, y, Q) governing the sieve computations.

    z = x**(1/s) with s = epsilon * loglog x, y = x**epsilon, Q = x**(1/4).
    The regime constraint 2 <= z <= y <= x only kicks in above a
    triple-exponential threshold in x; below it (every desk-scale run)
    below_paper_threshold is set instead of rejecting, and z may exceed y
    and even x.
    """

    x: float
    epsilon: float
    s: float
    z: float
    y: float
    Q: float
    below_paper_threshold: bool

    def __post_init__(self) -> None:
        if not self.below_paper_threshold and not (2 <= self.z <= self.y <= self.x):
            raise ValueError("variable ordering 2 <= z <= y <= x violated above threshold")


def make_params(x: float, epsilon: float, m: int = 2) -> SievingParameters:
    """Derive (s, z, y, Q) from (x, epsilon); m enters only the regime flag."""
    if x < 16:
        raise ValueError(f"x must be >= 16, got {x}")
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    log_x = math.log(x)
    s = epsilon * math.log(log_x)
    if s <= 0:
        raise ValueError("epsilon * loglog x must be positive")
    quot = log_x / s
    z = math.inf if quot > 700 else math.exp(quot)
    y = x**epsilon
    q = x**0.25
    # threshold x >= exp(exp(exp((4 + m^4) / (2 epsilon)))), checked in log^3
    below = math.log(math.log(log_x)) < (4 + m**4) / (2 * epsilon) if log_x > 1 else True
    return SievingParameters(float(x), epsilon, s, z, y, q, below)


def smooth_numbers_upto(limit: float, z: float) -> Iterator[int]:
    """All z-smooth integers <= limit in increasing order (DFS + sort)."""
    limit_int = int(limit)
    if limit_int < 1:
        return iter(())
    if z >= limit_int:
        return iter(range(1, limit_int + 1))
    primes = [int(p) for p in prime_table(min(int(z), limit_int))] if z >= 2 else []
    found = []

    def extend(value: int, idx: int) -> None:
        found.append(value)
        for i in range(idx, len(primes)):
            nxt = value * primes[i]
            if nxt > limit_int:
                break
            extend(nxt, i)

    extend(1, 0)
    return iter(sorted(found))
