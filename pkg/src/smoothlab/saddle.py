"""Saddle-point exponents and the multiplicative correction factors built on them.

Two notions of the exponent alpha coexist at desk scale and differ
measurably:

  * the saddle point, the root of  sum_{p <= y} log p / (p^alpha - 1) = log x,
    which governs local scaling laws like psi(x/d, y) ~ d^(-alpha) psi(x, y);
  * the empirical exponent  log psi(N, y) / log N,  i.e. the alpha in
    psi(N, y) = N^alpha read off literally.

Both are exposed; consumers choose which to feed into the weight machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import prime_factors, primes_upto
from .smooth import SmoothSet, psi_coprime

_BRACKET_HIGH = 2.0


@dataclass(frozen=True)
class SaddlePoint:
    x: float
    y: int
    alpha: float
    residual: float  # value of the defining equation at alpha


def solve_alpha(x: float, y: int, tol: float = 1e-10) -> SaddlePoint:
    """Solve sum_{p <= y} log p / (p^alpha - 1) = log x by bisection on (0, 2].

    The left side decreases strictly in alpha, blowing up at 0+ and tending
    to a finite limit at 2, so a sign change is required before bisecting;
    its absence (tiny x together with large y) is reported as an error.
    """
    if x < 2 or y < 2:
        raise ValueError("need x >= 2 and y >= 2")
    ps = primes_upto(int(y)).primes.astype(np.float64)
    logs = np.log(ps)
    target = math.log(x)

    def residual(a: float) -> float:
        return float(np.sum(logs / (np.power(ps, a) - 1.0))) - target

    hi = _BRACKET_HIGH
    if residual(hi) > 0:
        raise ValueError(
            f"no sign change on (0, {_BRACKET_HIGH}]: saddle point for x={x}, y={y} "
            f"lies beyond the bracket"
        )
    lo = 0.5
    while residual(lo) <= 0:
        lo /= 2.0
        if lo < 1e-300:
            raise ValueError("failed to bracket the saddle point from below")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if residual(mid) > 0:
            lo = mid
        else:
            hi = mid
    alpha = 0.5 * (lo + hi)
    return SaddlePoint(float(x), int(y), alpha, residual(alpha))


def alpha_empirical(sset: SmoothSet) -> float:
    """The exponent log psi(N, y) / log N."""
    if sset.N < 2:
        raise ValueError("need N >= 2")
    return math.log(sset.psi) / math.log(sset.N)


def g_q(q: int, s: float) -> float:
    """prod over distinct primes p | q of (1 - p^(-s)); empty product for q = 1."""
    if q < 1:
        raise ValueError("q must be >= 1")
    if s <= 0:
        raise ValueError("s must be positive")
    out = 1.0
    for p in prime_factors(q):
        out *= 1.0 - p ** (-s)
    return out


def bt_ratio(sset: SmoothSet, q: int, alpha: float) -> float:
    """psi_q(N, y) / (g_q(alpha) psi(N, y)), the coprime-count correction ratio.

    Only meaningful for y-smooth q; a q with a prime factor beyond y is
    rejected.
    """
    if any(p > sset.y for p in prime_factors(q)) if q > 1 else False:
        raise ValueError(f"q={q} is not {sset.y}-smooth")
    if sset.psi == 0:
        raise ValueError("empty smooth set")
    return psi_coprime(sset, q) / (g_q(q, alpha) * sset.psi)


def c_w_constant(W: int, alpha: float) -> float:
    """prod over p | W of (1 - p^(-1)) / (1 - p^(-alpha)).

    Each factor exceeds 1 when alpha < 1, so the product is >= 1 and grows
    with the primorial; see :func:`c_w_growth_scale` for the coarse growth
    law it tracks.
    """
    if W < 1:
        raise ValueError("W must be >= 1")
    out = 1.0
    for p in prime_factors(W):
        out *= (1.0 - 1.0 / p) / (1.0 - p ** (-alpha))
    return out


def c_w_growth_scale(W: int, alpha: float) -> float:
    """The comparison value exp(w^(1-alpha) / log w) / log w with w = max prime of W."""
    ps = prime_factors(W)
    if not ps:
        raise ValueError("W must have at least one prime factor")
    w = ps[-1]
    return math.exp(w ** (1.0 - alpha) / math.log(w)) / math.log(w)


def gamma_rq(r: int, q: int, W: int, b2: int, alpha: float) -> float:
    """Segment-density constant of the W-tricked weight on the class r mod q.

        gamma_{r,q} = prod_{p | W} (1-p^-1)/(1-p^-alpha)
                      * prod_{p | Wq/d} (1-p^-alpha)/(1-p^-1),
        d = gcd(-b2 + W r, W q).

    The W-primes cancel between the two products, leaving one factor per
    prime of q beyond W that survives in Wq/d.
    """
    if q < 1 or W < 1:
        raise ValueError("q and W must be >= 1")
    d = math.gcd(-b2 + W * r, W * q)
    out = 1.0
    for p in prime_factors(W):
        out *= (1.0 - 1.0 / p) / (1.0 - p ** (-alpha))
    for p in prime_factors(W * q // d):
        out *= (1.0 - p ** (-alpha)) / (1.0 - 1.0 / p)
    return out


def gamma_vector(q: int, W: int, b2: int, alpha: float) -> np.ndarray:
    """gamma_rq for every residue r = 0..q-1, vectorized over r."""
    if q < 1 or W < 1:
        raise ValueError("q and W must be >= 1")
    r = np.arange(q, dtype=np.int64)
    d = np.gcd(-b2 + W * r, W * q)
    quotient = (W * q) // d
    base = 1.0
    for p in prime_factors(W):
        base *= (1.0 - 1.0 / p) / (1.0 - p ** (-alpha))
    gam = np.full(q, base, dtype=np.float64)
    for p in prime_factors(W * q):
        factor = (1.0 - p ** (-alpha)) / (1.0 - 1.0 / p)
        gam[quotient % p == 0] *= factor
    return gam
