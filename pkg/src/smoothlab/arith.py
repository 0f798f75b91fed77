"""Elementary multiplicative number theory shared by the whole lab.

Prime and multiplicative-function tables are sieved once per limit and
memoized in-process; after construction everything here is pure and safe
to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_PRIME_CACHE: dict[int, "PrimeTable"] = {}
_MULT_CACHE: dict[int, "MultiplicativeTables"] = {}


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to ``limit``, ascending."""

    limit: int
    primes: np.ndarray  # int64, strictly increasing


@dataclass(frozen=True)
class MultiplicativeTables:
    """Mobius mu(n), Euler phi(n) and omega(n) = #distinct prime factors, n <= limit.

    Index 0 is a sentinel (mu=0, phi=0, omega=0).
    """

    limit: int
    mobius: np.ndarray  # int8
    phi: np.ndarray  # int64
    omega: np.ndarray  # int8


def primes_upto(limit: int) -> PrimeTable:
    """Sieve of Eratosthenes up to ``limit`` inclusive."""
    if limit < 0:
        raise ValueError("limit must be nonnegative")
    cached = _PRIME_CACHE.get(limit)
    if cached is not None:
        return cached
    if limit < 2:
        table = PrimeTable(limit, np.array([], dtype=np.int64))
    else:
        mask = np.ones(limit + 1, dtype=bool)
        mask[:2] = False
        for p in range(2, math.isqrt(limit) + 1):
            if mask[p]:
                mask[p * p :: p] = False
        table = PrimeTable(limit, np.flatnonzero(mask).astype(np.int64))
    _PRIME_CACHE[limit] = table
    return table


def multiplicative_tables(limit: int) -> MultiplicativeTables:
    """Sieve mu, phi and omega for every n <= limit."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    cached = _MULT_CACHE.get(limit)
    if cached is not None:
        return cached
    mobius = np.ones(limit + 1, dtype=np.int8)
    phi = np.arange(limit + 1, dtype=np.int64)
    omega = np.zeros(limit + 1, dtype=np.int8)
    mobius[0] = 0
    for p in primes_upto(limit).primes:
        p = int(p)
        mobius[p::p] *= -1
        if p * p <= limit:
            mobius[p * p :: p * p] = 0
        omega[p::p] += 1
        phi[p::p] = phi[p::p] // p * (p - 1)
    tables = MultiplicativeTables(limit, mobius, phi, omega)
    _MULT_CACHE[limit] = tables
    return tables


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n >= 1, ascending, by trial division."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _phi_of(n: int) -> int:
    phi = n
    for p in prime_factors(n):
        phi = phi // p * (p - 1)
    return phi


def _mobius_of(n: int) -> int:
    if n == 1:
        return 1
    count = 0
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            count += 1
        d += 1 if d == 2 else 2
    if n > 1:
        count += 1
    return -1 if count % 2 else 1


def ramanujan_sum(q: int, a: int) -> float:
    """Ramanujan sum c_q(a) via the closed form mu(q/g) phi(q) / phi(q/g), g = gcd(a, q)."""
    if q < 1:
        raise ValueError("q must be >= 1")
    g = math.gcd(a, q)
    k = q // g
    mu = _mobius_of(k)
    if mu == 0:
        return 0.0
    return float(mu * _phi_of(q) // _phi_of(k))


def ramanujan_sum_bruteforce(q: int, a: int) -> complex:
    """Ramanujan sum by direct summation of e(at/q) over t <= q coprime to q.

    Kept complex so the vanishing of the imaginary part is itself checkable.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    t = np.arange(1, q + 1, dtype=np.int64)
    t = t[np.gcd(t, q) == 1]
    return complex(np.exp((2j * np.pi * a / q) * t).sum())


def mod_inverse(a: int, q: int) -> int:
    """Inverse of a modulo q, in [0, q). Raises for non-coprime input."""
    if q < 1:
        raise ValueError("q must be >= 1")
    if math.gcd(a, q) != 1:
        raise ValueError(f"{a} is not invertible modulo {q}")
    return pow(a, -1, q)


def is_prime(n: int) -> bool:
    """Trial-division primality test; adequate for the table sizes used here."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def next_prime_at_least(n: int) -> int:
    """Smallest prime >= n."""
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n
