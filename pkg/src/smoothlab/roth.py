"""Three-term progression counting, the trilinear form, and the end-to-end pipeline.

Counting conventions: the brute counter walks d = 1, 2, ... and counts each
unordered progression once (canonical d > 0); the cyclic spectral counter
keeps both orientations of every progression and subtracts the d = 0
diagonal, so on sets embedded without wraparound it returns exactly twice
the brute count.  That factor-two relationship is part of the tested
contract, not an implementation accident.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .arith import next_prime_at_least
from .roth_params import PipelineParams
from .smooth import SmoothSieve, build_sieve
from .wtrick import WContext, map_to_Ab, select_b, weight_sequence


class NoProgressionError(Exception):
    """Neither the W-trick route nor the direct brute route found a progression."""


@dataclass(frozen=True)
class APWitness:
    """A verified triple (n, n+d, n+2d) in some host set.

    When the triple lives in a pulled-back frame, ``pulled_back`` carries
    (x0, D) with x0 = b1 (W n - b2) and D = b1 W d, the corresponding
    progression in the original set.
    """

    n: int
    d: int
    triple: tuple[int, int, int]
    pulled_back: tuple[int, int] | None = None
    route: str = "direct"


@dataclass(frozen=True)
class TransferenceReport:
    """Measured transference-hypothesis statistics for a majorized pair (f, nu).

    delta: mean of f.  eta: largest normalized nonzero Fourier mode of nu.
    mp: sum over modes of |f_hat(a) / M|^p.  trilinear: the (f, f, f) form.
    w_comparison: W^(p (1 - alpha)) when a frame is supplied, the scale the
    measured mp is compared against.
    """

    delta: float
    eta: float
    p: float
    mp: float
    trilinear: float
    w_comparison: float | None = None


def _as_sorted_array(points) -> np.ndarray:
    pts = np.asarray(sorted(points) if isinstance(points, (set, frozenset)) else points,
                     dtype=np.int64)
    if pts.size and pts.min() < 0:
        raise ValueError("points must be nonnegative integers")
    return np.unique(pts)


def count_3aps_brute(points, max_witnesses: int | None = None):
    """Count triples (n, n+d, n+2d) in the set with d > 0; optionally collect them.

    Returns (count, witnesses).  ``max_witnesses`` caps the collected list
    (None collects every progression); the count itself is always exact.
    """
    pts = _as_sorted_array(points)
    witnesses: list[APWitness] = []
    if pts.size < 3:
        return 0, witnesses
    top = int(pts.max())
    ind = np.zeros(top + 1, dtype=bool)
    ind[pts] = True
    count = 0
    for d in range(1, top // 2 + 1):
        hits = ind[: top + 1 - 2 * d] & ind[d : top + 1 - d] & ind[2 * d :]
        c = int(np.count_nonzero(hits))
        if c == 0:
            continue
        count += c
        if max_witnesses is None or len(witnesses) < max_witnesses:
            for n in np.flatnonzero(hits):
                if max_witnesses is not None and len(witnesses) >= max_witnesses:
                    break
                n = int(n)
                witnesses.append(APWitness(n, d, (n, n + d, n + 2 * d)))
    return count, witnesses


def find_first_3ap(points) -> tuple[int, int] | None:
    """First (n, d) with the whole triple inside the set, scanning d upward."""
    pts = _as_sorted_array(points)
    if pts.size < 3:
        return None
    top = int(pts.max())
    ind = np.zeros(top + 1, dtype=bool)
    ind[pts] = True
    for d in range(1, top // 2 + 1):
        hits = ind[: top + 1 - 2 * d] & ind[d : top + 1 - d] & ind[2 * d :]
        j = np.flatnonzero(hits)
        if j.size:
            return int(j[0]), d
    return None


def count_3aps_spectral(points, M: int) -> int:
    """Ordered cyclic triple count with d != 0 on Z/MZ, via the Fourier identity.

    With M >= 2 max(points) + 1 the cyclic relation n + k = 2m cannot wrap,
    so the result equals exactly twice the canonical brute count.  The
    d = 0 diagonal contributes |points| and is subtracted.
    """
    pts = _as_sorted_array(points)
    if pts.size == 0:
        return 0
    top = int(pts.max())
    if M < 2 * top + 1:
        raise ValueError(f"cyclic length M={M} allows wraparound; need M >= {2 * top + 1}")
    buf = np.zeros(M, dtype=np.float64)
    buf[pts] = 1.0
    F = np.conj(np.fft.fft(buf))
    idx2 = (2 * np.arange(M)) % M
    total = float(np.real(np.sum(F * F * np.conj(F[idx2])))) / M
    raw = total - pts.size
    rounded = int(round(raw))
    if abs(raw - rounded) > 1e-6 * max(1.0, abs(raw)):
        raise ArithmeticError(f"spectral count {raw} is not near an integer")
    return rounded


def trilinear_form(f, g, h) -> float:
    """(1/M^2) sum_{n,d mod M} f(n) g(n+d) h(n+2d), computed spectrally.

    Element i of each sequence is the value at residue i mod M.
    """
    f = np.asarray(f, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    if not (f.size == g.size == h.size):
        raise ValueError(f"length mismatch: {f.size}, {g.size}, {h.size}")
    M = f.size
    Pf = np.conj(np.fft.fft(f))
    Ph = np.conj(np.fft.fft(h))
    Gm = np.fft.fft(g)[(2 * np.arange(M)) % M]  # sum_m g(m) e(-2am/M)
    return float(np.real(np.sum(Pf * Gm * Ph)) / M**3)


def transference_audit(
    f, nu, p: float, ctx: WContext | None = None
) -> TransferenceReport:
    """Measure the transference hypotheses for f majorized by nu on a common cycle.

    Verifies f <= nu pointwise (a violation is an error naming the index),
    then records delta, eta, the p-th spectral moment of f, and the
    trilinear form of (f, f, f).
    """
    if not 2.0 < p < 3.0:
        raise ValueError(f"p={p} outside (2, 3)")
    f = np.asarray(f, dtype=np.float64)
    nu_arr = np.asarray(nu, dtype=np.float64)
    if f.size != nu_arr.size:
        raise ValueError(f"length mismatch: {f.size} vs {nu_arr.size}")
    bad = np.flatnonzero(f > nu_arr + 1e-12)
    if bad.size:
        i = int(bad[0])
        raise ValueError(f"majorization fails at index {i}: f={f[i]} > nu={nu_arr[i]}")
    M = f.size
    delta = float(f.mean())
    Fnu = np.abs(np.fft.fft(nu_arr))
    eta = float(Fnu[1:].max() / M) if M > 1 else 0.0
    Ff = np.abs(np.fft.fft(f)) / M
    mp = float(np.sum(Ff**p))
    tri = trilinear_form(f, f, f)
    comparison = None
    if ctx is not None:
        comparison = float(ctx.W ** (p * (1.0 - ctx.alpha)))
    return TransferenceReport(delta, eta, p, mp, tri, comparison)


def _cyclic(values: np.ndarray) -> np.ndarray:
    # values[n-1] holds position n = 1..Nb; residue n mod Nb puts n = Nb at 0
    return np.roll(values, 1)


def find_3ap_pipeline(
    A,
    N: int,
    y: int,
    params: PipelineParams | None = None,
    sieve: SmoothSieve | None = None,
) -> APWitness:
    """Full rehearsal: frame selection, transference audit, spectral count, pullback.

    Route one selects the best frame, counts progressions of A_b on a prime
    cycle of length >= 2 Nb + 1 (no wraparound, prime so the cyclic
    machinery applies verbatim), extracts the first witness by an ascending
    difference scan, and pulls it back to A via x = b1 (W n - b2).  If the
    frame yields nothing the direct brute route runs on A itself; finding
    nothing either way raises :class:`NoProgressionError`.
    """
    params = params or PipelineParams()
    sieve = sieve or build_sieve(N)
    A = _as_sorted_array(A)
    if A.size == 0:
        raise ValueError("A is empty")
    if A.max() > N or np.any(sieve.gpf[A] > y):
        raise ValueError("A must consist of y-smooth members of [1, N]")
    A_set = set(int(v) for v in A)

    ctx, _mass = select_b(
        A, N, y, sieve, params.w_override,
        b1_budget=params.b1_budget, alpha_source=params.alpha_source,
        threads=params.threads,
    )
    Ab = map_to_Ab(A, ctx)
    if params.min_element_fraction is not None:
        Ab = Ab[Ab >= params.min_element_fraction * ctx.Nb]

    if Ab.size:
        seq = weight_sequence(ctx, sieve)
        fb = np.zeros(ctx.Nb, dtype=np.float64)
        fb[Ab - 1] = seq.values[Ab - 1]
        # hypothesis measurement on the natural cycle; thresholds live in tests
        transference_audit(_cyclic(fb), _cyclic(seq.values), params.p, ctx)

        M_cyc = next_prime_at_least(2 * ctx.Nb + 1)
        if count_3aps_spectral(Ab, M_cyc) > 0:
            hit = find_first_3ap(Ab)
            if hit is None:
                raise ArithmeticError("positive spectral count but no witness found")
            n, d = hit
            x0 = ctx.b1 * (ctx.W * n - ctx.b2)
            D = ctx.b1 * ctx.W * d
            if not all(v in A_set for v in (x0, x0 + D, x0 + 2 * D)):
                raise ArithmeticError("pullback arithmetic left the original set")
            return APWitness(n, d, (n, n + d, n + 2 * d), (x0, D), "wtrick")

    hit = find_first_3ap(A)
    if hit is not None:
        n, d = hit
        return APWitness(n, d, (n, n + d, n + 2 * d), None, "fallback")
    raise NoProgressionError(
        f"no 3-term progression found in A (|A|={A.size}) by either route"
    )


def witness_to_json(w: APWitness) -> str:
    return json.dumps(
        {
            "n": w.n,
            "d": w.d,
            "triple": list(w.triple),
            "pulled_back": None if w.pulled_back is None
            else {"x0": w.pulled_back[0], "D": w.pulled_back[1]},
            "route": w.route,
        },
        sort_keys=True,
    )
