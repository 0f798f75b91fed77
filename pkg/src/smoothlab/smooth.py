"""Greatest-prime-factor sieve and smooth-number counting.

A positive integer n is y-smooth when its greatest prime factor gpf(n) is
at most y (gpf(1) = 1, so 1 belongs to every smooth set).  The gpf table is
the single oracle behind every smoothness query in the lab: membership is
one comparison.  Counts are exact integers throughout; no density
approximations enter here.

Counting notation used across the module:

    psi(N, y)        = #{n <= N : gpf(n) <= y}
    psi(N, y; q, a)  = members congruent to a mod q
    psi_q(N, y)      = members coprime to q
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .arith import primes_upto

# gpf entries are uint32; the budget caps table length (entries, not bytes).
DEFAULT_SIEVE_BUDGET = 1 << 26

_SIEVE_CACHE: dict[int, "SmoothSieve"] = {}

_CACHE_MAGIC = b"SMGPF1"


@dataclass(frozen=True)
class SmoothSieve:
    """gpf[n] = greatest prime factor of n for n in [1..N]; gpf[0] = 0 sentinel."""

    N: int
    gpf: np.ndarray  # uint32, length N + 1


@dataclass(frozen=True)
class SmoothSet:
    """Ascending y-smooth members of [1..N]."""

    N: int
    y: int
    members: np.ndarray  # int64, ascending

    @property
    def psi(self) -> int:
        return int(self.members.size)


def build_sieve(N: int, budget: int = DEFAULT_SIEVE_BUDGET) -> SmoothSieve:
    """Build (or fetch from the in-memory cache) the gpf table for [1..N].

    Ascending prime passes overwrite gpf[m] for every multiple m, so the
    last writer is the largest prime factor.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if N + 1 > budget:
        raise ValueError(f"sieve for N={N} exceeds the memory budget of {budget} entries")
    cached = _SIEVE_CACHE.get(N)
    if cached is not None:
        return cached
    gpf = np.zeros(N + 1, dtype=np.uint32)
    gpf[1:2] = 1
    for p in primes_upto(N).primes:
        p = int(p)
        gpf[p::p] = p
    sieve = SmoothSieve(N, gpf)
    _SIEVE_CACHE[N] = sieve
    return sieve


def save_sieve(sieve: SmoothSieve, path: str | Path) -> None:
    """Write the binary cache: magic "SMGPF1", N as u64 LE, then gpf(1..N) as u32 LE."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(_CACHE_MAGIC)
        fh.write(struct.pack("<Q", sieve.N))
        fh.write(sieve.gpf[1:].astype("<u4").tobytes())


def load_sieve(path: str | Path) -> SmoothSieve:
    """Read a sieve cache file written by :func:`save_sieve`."""
    with open(path, "rb") as fh:
        magic = fh.read(len(_CACHE_MAGIC))
        if magic != _CACHE_MAGIC:
            raise ValueError(f"{path}: not a sieve cache file (bad magic {magic!r})")
        (N,) = struct.unpack("<Q", fh.read(8))
        body = np.frombuffer(fh.read(), dtype="<u4")
    if body.size != N:
        raise ValueError(f"{path}: expected {N} gpf entries, found {body.size}")
    gpf = np.zeros(N + 1, dtype=np.uint32)
    gpf[1:] = body
    sieve = SmoothSieve(int(N), gpf)
    _SIEVE_CACHE.setdefault(int(N), sieve)
    return sieve


def smooth_set(sieve: SmoothSieve, y: int) -> SmoothSet:
    """The y-smooth members of [1..N], ascending."""
    if y < 2:
        raise ValueError("y must be >= 2")
    members = np.flatnonzero(sieve.gpf <= y).astype(np.int64)
    members = members[members >= 1]
    return SmoothSet(sieve.N, int(y), members)


def psi_progression(sset: SmoothSet, q: int, a: int) -> int:
    """Count members congruent to a mod q."""
    if q < 1:
        raise ValueError("q must be >= 1")
    return int(np.count_nonzero(sset.members % q == a % q))


def psi_coprime(sset: SmoothSet, q: int) -> int:
    """Count members coprime to q; equals the sum of psi_progression over coprime classes."""
    if q < 1:
        raise ValueError("q must be >= 1")
    return int(np.count_nonzero(np.gcd(sset.members, q) == 1))


def granville_deviation(sset: SmoothSet, q: int) -> float:
    """Worst relative deviation of coprime residue classes from equidistribution.

    Returns max over a with gcd(a, q) = 1 of |phi(q) psi(N,y;q,a) / psi_q(N,y) - 1|,
    i.e. how far the smooth counts sit from the uniform share of the coprime mass.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    counts = np.bincount(sset.members % q, minlength=q)
    coprime = np.flatnonzero(np.gcd(np.arange(q, dtype=np.int64), q) == 1)
    psi_q = int(counts[coprime].sum())
    if psi_q == 0:
        raise ValueError(f"no members coprime to q={q}; deviation undefined")
    phi_q = coprime.size
    return float(np.max(np.abs(phi_q * counts[coprime] / psi_q - 1.0)))


def w_smooth_divisors(sieve: SmoothSieve, w: float, bound: int) -> np.ndarray:
    """All w-smooth integers in [1..bound], ascending."""
    if bound > sieve.N:
        raise ValueError(f"bound {bound} exceeds sieve range {sieve.N}")
    vals = np.flatnonzero(sieve.gpf[: bound + 1] <= w).astype(np.int64)
    return vals[vals >= 1]


def rankin_tail(N: int, w: int, alpha: float, eps: float = 0.0) -> float:
    """Upper-bound surrogate for the smooth mass divisible by a w-smooth b1 > sqrt(N).

    Shifting a factor (b1 / sqrt(N))^alpha into the sum turns the tail over
    w-smooth b1 into the convergent Euler product

        N^(alpha/2 + eps) * prod_{p <= w} (1 - p^(alpha - 1))^(-1).

    The product diverges as alpha -> 1, which is reported as an error.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1); the tail diverges at alpha >= 1")
    if w < 2:
        raise ValueError("w must be >= 2")
    product = 1.0
    for p in primes_upto(w).primes:
        product /= 1.0 - float(p) ** (alpha - 1.0)
    return float(N ** (alpha / 2.0 + eps) * product)
