"""The W-trick frame: re-parameterize a smooth set along n -> b1 (W n - b2).

W is the primorial of primes up to w, b1 a w-smooth scale factor, and b2 a
unit residue mod W.  The weight

    nu(n) = C_W (W n - b2)^(1 - alpha) / alpha   if b1 (W n - b2) is y-smooth,
            0                                    otherwise,
    C_W   = prod_{p | W} (1 - p^-1) / (1 - p^-alpha),

turns the pulled-back smooth indicator into an approximately mean-one
measure on [1..Nb], Nb = floor(N / (b1 W)) + 1.  The alpha consumed here is
a configuration choice: the empirical exponent log psi / log N (default) or
the saddle point; at desk scale only the empirical choice normalizes the
weight to mean ~= 1 (see the acceptance suite), while the saddle value
inflates it by roughly psi(N, y) / N^alpha_saddle.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .arith import mod_inverse, prime_factors, primes_upto
from .saddle import alpha_empirical, c_w_constant, gamma_rq, gamma_vector, solve_alpha
from .smooth import SmoothSieve, smooth_set, w_smooth_divisors

DEFAULT_B1_BUDGET = 64


@dataclass(frozen=True)
class WContext:
    """Immutable W-trick frame; see the module docstring for the roles of the fields."""

    N: int
    y: int
    w: float
    W: int
    alpha: float
    b1: int
    b2: int
    Nb: int
    CW: float
    alpha_source: str = "empirical"


@dataclass(frozen=True)
class WeightedSequence:
    """Weight values indexed n = 1..length (values[n-1] is the weight at n)."""

    length: int
    values: np.ndarray  # float64, nonnegative


def default_w(N: int) -> float:
    """w = max(half the triple logarithm of N, 2); the floor wins at any feasible N."""
    return max(0.5 * math.log(math.log(math.log(N))), 2.0)


def primorial_upto(w: float) -> int:
    out = 1
    for p in primes_upto(int(w)).primes:
        out *= int(p)
    return out


def coprime_residues(W: int) -> list[int]:
    """Residues b2 in [1, W] with gcd(b2, W) = 1."""
    return [b for b in range(1, W + 1) if math.gcd(b, W) == 1]


def make_context(
    N: int,
    y: int,
    w_override: float | None = None,
    b: tuple[int, int] | None = None,
    *,
    alpha: float | None = None,
    alpha_source: str = "empirical",
    sieve: SmoothSieve | None = None,
) -> WContext:
    """Build a validated frame; b defaults to the identity scale (1, 1).

    alpha resolution order: explicit value, else alpha_source in
    {"empirical", "saddle"} evaluated at (N, y).
    """
    if N < 100:
        raise ValueError("N must be >= 100")
    if y < 2:
        raise ValueError("y must be >= 2")
    w = float(w_override) if w_override is not None else default_w(N)
    if w < 2:
        raise ValueError("w must be >= 2")
    W = primorial_upto(w)
    if alpha is not None:
        alpha_source = "fixed"
    elif alpha_source == "empirical":
        from .smooth import build_sieve

        sv = sieve if sieve is not None and sieve.N >= N else build_sieve(N)
        alpha = alpha_empirical(smooth_set(sv, y))
    elif alpha_source == "saddle":
        alpha = solve_alpha(N, y).alpha
    else:
        raise ValueError(f"unknown alpha_source {alpha_source!r}")
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha={alpha} outside (0, 1]")
    b1, b2 = b if b is not None else (1, 1)
    if b1 < 1 or any(p > w for p in prime_factors(b1)):
        raise ValueError(f"b1={b1} is not {w}-smooth")
    if b1 * b1 > N:
        raise ValueError(f"b1={b1} exceeds sqrt(N)")
    b2 = (b2 - 1) % W + 1  # canonical residue in [1, W]; coprimality is unchanged
    if math.gcd(b2, W) != 1:
        raise ValueError(f"b2={b2} shares a factor with W={W}")
    Nb = N // (b1 * W) + 1
    return WContext(N, y, w, W, float(alpha), b1, b2, Nb, c_w_constant(W, alpha), alpha_source)


def _require_sieve(ctx: WContext, sieve: SmoothSieve) -> None:
    if sieve.N < ctx.N:
        raise ValueError(f"sieve covers only [1..{sieve.N}], context needs [1..{ctx.N}]")


def nu(n: int, ctx: WContext, sieve: SmoothSieve) -> float:
    """The weight at a single n in [1, Nb]."""
    if not 1 <= n <= ctx.Nb:
        raise ValueError(f"n={n} outside [1, {ctx.Nb}]")
    _require_sieve(ctx, sieve)
    m = ctx.W * n - ctx.b2
    x = ctx.b1 * m
    if x > ctx.N or sieve.gpf[x] > ctx.y:
        return 0.0
    return ctx.CW * m ** (1.0 - ctx.alpha) / ctx.alpha


def weight_sequence(ctx: WContext, sieve: SmoothSieve) -> WeightedSequence:
    """All weights nu(1..Nb) in one vectorized pass over the sieve."""
    _require_sieve(ctx, sieve)
    n = np.arange(1, ctx.Nb + 1, dtype=np.int64)
    m = ctx.W * n - ctx.b2
    x = ctx.b1 * m
    values = np.zeros(ctx.Nb, dtype=np.float64)
    live = x <= ctx.N
    live[live] = sieve.gpf[x[live]] <= ctx.y
    values[live] = ctx.CW * m[live].astype(np.float64) ** (1.0 - ctx.alpha) / ctx.alpha
    return WeightedSequence(ctx.Nb, values)


def nu_total(ctx: WContext, sieve: SmoothSieve) -> float:
    """sum_n nu(n); the ratio to Nb is the normalization statistic."""
    return float(weight_sequence(ctx, sieve).values.sum())


def map_to_Ab(A, ctx: WContext) -> np.ndarray:
    """Exact preimage {n : b1 (W n - b2) in A}, ascending.

    n qualifies iff b1 | x and W | (x / b1 + b2) for some x in A; the map
    n -> x is a bijection onto its image, so no duplicates arise.
    """
    A = np.asarray(sorted(A) if isinstance(A, (set, frozenset)) else A, dtype=np.int64)
    if A.size == 0:
        return np.array([], dtype=np.int64)
    x = A[A % ctx.b1 == 0]
    m = x // ctx.b1
    m = m[(m + ctx.b2) % ctx.W == 0]
    return (m + ctx.b2) // ctx.W


def _mass_for(A: np.ndarray, b1: int, W: int, b2_list: list[int], CW: float, alpha: float):
    """Weighted mass sum_{n in A_b} nu(n) for one b1 and every candidate b2.

    Elements of A are y-smooth by precondition, so the support condition
    holds automatically: x = b1 m with x in A means nu((m + b2)/W) is live.
    """
    m = A[A % b1 == 0] // b1
    out = []
    mf = m.astype(np.float64)
    for b2 in b2_list:
        sel = (m + b2) % W == 0
        out.append(float(CW / alpha * np.sum(mf[sel] ** (1.0 - alpha))))
    return out


def select_b(
    A,
    N: int,
    y: int,
    sieve: SmoothSieve,
    w_override: float | None = None,
    *,
    b1_budget: int = DEFAULT_B1_BUDGET,
    alpha: float | None = None,
    alpha_source: str = "empirical",
    threads: int | None = None,
) -> tuple[WContext, float]:
    """Scan candidate frames (b1, b2) and return the one of largest weighted mass.

    Candidate b1 run over the first ``b1_budget`` w-smooth integers up to
    sqrt(N) (ascending), b2 over all unit residues mod W.  Ties break to
    the smaller (b1, b2), and the threaded path reduces in the same order
    as the sequential one.
    """
    A = np.asarray(sorted(A) if isinstance(A, (set, frozenset)) else A, dtype=np.int64)
    if A.size == 0:
        raise ValueError("A is empty")
    _ = _require_sieve  # sieve range validated through the base context below
    base = make_context(N, y, w_override, (1, 1), alpha=alpha,
                        alpha_source=alpha_source, sieve=sieve)
    if A.min() < 1 or A.max() > N or np.any(sieve.gpf[A] > y):
        raise ValueError("A must consist of y-smooth members of [1, N]")
    b1_cands = [int(v) for v in w_smooth_divisors(sieve, base.w, math.isqrt(N))[:b1_budget]]
    if not b1_cands:
        raise ValueError("no admissible b1 candidates")
    b2_cands = coprime_residues(base.W)

    def worker(b1: int):
        return _mass_for(A, b1, base.W, b2_cands, base.CW, base.alpha)

    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(worker, b1_cands))
    else:
        rows = [worker(b1) for b1 in b1_cands]

    best_b1, best_b2, best_mass = b1_cands[0], b2_cands[0], rows[0][0]
    for b1, row in zip(b1_cands, rows):
        for b2, mass in zip(b2_cands, row):
            if mass > best_mass:
                best_b1, best_b2, best_mass = b1, b2, mass
    ctx = make_context(N, y, w_override, (best_b1, best_b2),
                       alpha=base.alpha, sieve=sieve)
    return ctx, best_mass


def nu_fourier_max(ctx: WContext, sieve: SmoothSieve) -> tuple[int, float]:
    """Largest normalized nonzero Fourier mode of nu on Z/Nb: (argmax a, |nu_hat(a)|/Nb).

    This is the pseudorandomness defect eta fed to the transference audit.
    """
    seq = weight_sequence(ctx, sieve)
    cyclic = np.roll(seq.values, 1)  # index j holds nu(j), with n = Nb wrapping to 0
    F = np.abs(np.fft.fft(cyclic))
    if ctx.Nb < 2:
        return (0, 0.0)
    a = 1 + int(np.argmax(F[1:]))
    return (a, float(F[a] / ctx.Nb))


def sigma_aq_closed(a: int, q: int, ctx: WContext) -> complex:
    """Closed form of the major-arc constant sigma_{a,q} for the normalized weight.

        sigma_{a,q} = e(a b2 Wbar / q) prod_{p | q} (p^-alpha - p^-1)/(1 - p^-1)
                      if gcd(q, W) = 1, and 0 otherwise,

    with Wbar the inverse of W mod q.  Requires gcd(a, q) = 1.
    """
    if math.gcd(a, q) != 1:
        raise ValueError(f"need gcd(a, q) = 1, got a={a}, q={q}")
    if math.gcd(q, ctx.W) > 1:
        return 0j
    if q == 1:
        return 1 + 0j
    wbar = mod_inverse(ctx.W, q)
    phase = np.exp(2j * np.pi * ((a * ctx.b2 * wbar) % q) / q)
    prod = 1.0
    for p in prime_factors(q):
        prod *= (p ** (-ctx.alpha) - 1.0 / p) / (1.0 - 1.0 / p)
    return complex(phase * prod)


def sigma_aq_brute(a: int, q: int, ctx: WContext) -> complex:
    """sigma_{a,q} by direct summation of e(a r / q) gamma_{r,q} over r mod q."""
    gam = gamma_vector(q, ctx.W, ctx.b2, ctx.alpha)
    r = np.arange(q, dtype=np.float64)
    return complex(np.sum(np.exp((2j * np.pi * a / q) * r) * gam))


def sigma_aq_brute_row(q: int, ctx: WContext, residues) -> np.ndarray:
    """sigma_{a,q} for many a at once, sharing one gamma vector."""
    gam = gamma_vector(q, ctx.W, ctx.b2, ctx.alpha)
    a = np.asarray(residues, dtype=np.float64).reshape(-1, 1)
    r = np.arange(q, dtype=np.float64).reshape(1, -1)
    return np.exp((2j * np.pi / q) * a * r) @ gam


def segment_mass_audit(
    ctx: WContext, sieve: SmoothSieve, r: int, q: int, L: int
) -> tuple[float, float]:
    """Measured vs predicted normalized weight mass on X = {r, r+q, ..., r+(L-1)q}.

    measured  = sum_{n in X} nu(n) / Nb
    predicted = (L / Nb) gamma_{r,q}

    Both are returned; thresholds live with the caller.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    last = r + (L - 1) * q
    if r < 1 or last > ctx.Nb:
        raise ValueError(f"progression [{r}, {last}] exceeds [1, {ctx.Nb}]")
    seq = weight_sequence(ctx, sieve)
    X = np.arange(r, last + 1, q, dtype=np.int64)
    measured = float(seq.values[X - 1].sum() / ctx.Nb)
    predicted = float(L / ctx.Nb * gamma_rq(r, q, ctx.W, ctx.b2, ctx.alpha))
    return measured, predicted


def context_to_json(ctx: WContext) -> str:
    """Serialize a frame; reals as decimal strings, integers exact."""
    return json.dumps(
        {
            "N": ctx.N,
            "y": ctx.y,
            "w": repr(ctx.w),
            "W": ctx.W,
            "alpha": repr(ctx.alpha),
            "b1": ctx.b1,
            "b2": ctx.b2,
            "Nb": ctx.Nb,
            "CW": repr(ctx.CW),
            "alpha_source": ctx.alpha_source,
        },
        sort_keys=True,
    )


def context_from_json(text: str) -> WContext:
    """Rebuild a frame from :func:`context_to_json` output, revalidating invariants."""
    raw = json.loads(text)
    ctx = make_context(
        int(raw["N"]),
        int(raw["y"]),
        float(raw["w"]),
        (int(raw["b1"]), int(raw["b2"])),
        alpha=float(raw["alpha"]),
    )
    if ctx.Nb != int(raw["Nb"]):
        raise ValueError(f"inconsistent Nb: stored {raw['Nb']}, derived {ctx.Nb}")
    return ctx
