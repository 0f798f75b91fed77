"""Exponential sums over integer sets, arc decomposition, and L^p moments.

All grid work evaluates S(theta) = sum_{n in points} e(n theta) at theta =
j/M via one FFT; single-theta evaluation stays direct.  Integrals over
[0,1] are Riemann sums on the same grid (oversample with M >= 2N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Spectrum:
    """values[j] = sum_n f(n) e(n j / M) on the M-point grid."""

    M: int
    values: np.ndarray  # complex128, length M


@dataclass(frozen=True)
class ArcSet:
    """Major-arc system: intervals [a/q - R/N, a/q + R/N] for reduced a/q, q <= R.

    ``arcs`` holds (a, q, lo, hi) with the interval clipped to [0, 1];
    ``overlapping`` reports whether any two raw arcs intersect (large R
    relative to N), which degrades the decomposition but is not fatal.
    """

    N: int
    R: float
    arcs: list[tuple[int, int, float, float]]
    overlapping: bool
    _merged_lo: np.ndarray = field(repr=False)
    _merged_hi: np.ndarray = field(repr=False)

    def classify(self, theta: float) -> tuple[str, int, int] | tuple[str]:
        """("major", a, q) for the smallest covering q, else ("minor",).

        Deterministic: q is scanned upward, so ties go to the smallest
        denominator; within one q the nearer endpoint wins.
        """
        width = self.R / self.N
        for q in range(1, int(self.R) + 1):
            best = None
            for a in (math.floor(theta * q), math.ceil(theta * q)):
                if 0 <= a <= q and math.gcd(a, q) == 1:
                    dist = abs(theta - a / q)
                    if dist <= width and (best is None or dist < best[0]):
                        best = (dist, a)
            if best is not None:
                return ("major", best[1], q)
        return ("minor",)

    def major_mask(self, thetas: np.ndarray) -> np.ndarray:
        """Boolean mask: True where theta lies in the union of major arcs."""
        thetas = np.asarray(thetas, dtype=np.float64)
        idx = np.searchsorted(self._merged_lo, thetas, side="right") - 1
        idx_clipped = np.clip(idx, 0, len(self._merged_lo) - 1)
        return (idx >= 0) & (thetas <= self._merged_hi[idx_clipped])


def exp_sum(points, theta: float) -> complex:
    """Direct evaluation of sum_{n in points} e(n theta)."""
    pts = np.asarray(sorted(points) if isinstance(points, (set, frozenset)) else points,
                     dtype=np.int64)
    if pts.size == 0:
        return 0j
    return complex(np.exp((1j * TWO_PI * theta) * pts).sum())


def spectrum(f: np.ndarray, M: int) -> Spectrum:
    """Grid transform of a real sequence f indexed 1..N (f[i] is the value at n = i+1).

    Requires M >= N + 1 so distinct indices stay distinct on the grid.
    """
    f = np.asarray(f, dtype=np.float64)
    N = f.size
    if M <= N:
        raise ValueError(f"grid M={M} aliases a sequence of length {N}; need M >= N + 1")
    buf = np.zeros(M, dtype=np.float64)
    buf[1 : N + 1] = f
    return Spectrum(M, np.conj(np.fft.fft(buf)))


def spectrum_of_set(points, M: int) -> Spectrum:
    """Spectrum of the 0/1 indicator of a set of positive integers."""
    pts = np.asarray(sorted(points) if isinstance(points, (set, frozenset)) else points,
                     dtype=np.int64)
    if pts.size and (pts.min() < 1 or pts.max() >= M):
        raise ValueError("points must lie in [1, M)")
    buf = np.zeros(M, dtype=np.float64)
    buf[pts] = 1.0
    return Spectrum(M, np.conj(np.fft.fft(buf)))


def tau(theta: float, N: int) -> complex:
    """(1/N) sum_{n=1..N} e(n theta), by the closed Dirichlet-kernel form.

    Exactly 1 at integer theta.
    """
    if theta == round(theta):
        return 1.0 + 0j
    s = math.sin(math.pi * theta)
    kernel = math.sin(math.pi * N * theta) / (N * s)
    phase = np.exp(1j * math.pi * theta * (N + 1))
    return complex(phase * kernel)


def arc_decomposition(N: int, R: float) -> ArcSet:
    """Enumerate every reduced fraction a/q with q <= R and its arc of half-width R/N.

    Overlap between raw arcs (possible when R^2/N is large) is detected
    exactly and reported through ``ArcSet.overlapping``.
    """
    if R < 1:
        raise ValueError("R must be >= 1")
    if N < 1:
        raise ValueError("N must be >= 1")
    width = R / N
    arcs = []
    for q in range(1, int(R) + 1):
        for a in range(q + 1):
            if math.gcd(a, q) == 1:
                center = a / q
                arcs.append((a, q, max(center - width, 0.0), min(center + width, 1.0)))
    arcs.sort(key=lambda t: (t[2], t[1]))
    overlapping = False
    merged: list[list[float]] = []
    prev_hi = None
    for a, q, lo, hi in arcs:
        if prev_hi is not None and lo < prev_hi:
            overlapping = True
        prev_hi = hi if prev_hi is None else max(prev_hi, hi)
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    merged_lo = np.array([m[0] for m in merged])
    merged_hi = np.array([m[1] for m in merged])
    return ArcSet(N, float(R), arcs, overlapping, merged_lo, merged_hi)


def minor_arc_sup(points, N: int, arcs: ArcSet, M: int) -> tuple[float, float]:
    """Max of |S(j/M)| over grid points classified minor; returns (theta*, sup).

    The caller divides by psi(N, y) for the normalized statistic.
    """
    if M < 2 * N:
        raise ValueError(f"grid M={M} too coarse; need M >= 2N = {2 * N}")
    spec = spectrum_of_set(points, M)
    thetas = np.arange(M, dtype=np.float64) / M
    minor = ~arcs.major_mask(thetas)
    if not minor.any():
        raise ValueError("major arcs cover the whole grid; R is too large for this N")
    mags = np.abs(spec.values)
    mags[~minor] = -1.0
    j = int(np.argmax(mags))
    return (j / M, float(mags[j]))


def lp_moment(points, p: float, M: int, allow_low_p: bool = False) -> float:
    """Riemann-grid approximation (1/M) sum_j |S(j/M)|^p of the p-th moment.

    p <= 2 is outside the regime the moment statistics target and is
    rejected unless allow_low_p is set (p = 2 serves as a Parseval oracle).
    """
    if p <= 2 and not allow_low_p:
        raise ValueError("p must exceed 2 (pass allow_low_p=True for the p<=2 oracle)")
    spec = spectrum_of_set(points, M)
    return float(np.mean(np.abs(spec.values) ** p))


def residue_sum_audit(
    f: np.ndarray, r: int, q: int, theta: float, gamma: float
) -> tuple[complex, complex, float]:
    """Measure sum_{n = r mod q} f(n) e(n theta) against gamma tau(theta) / q.

    Pure measurement: returns (lhs, rhs, |lhs - rhs|) with no pass/fail.
    """
    f = np.asarray(f, dtype=np.float64)
    N = f.size
    n = np.arange(1, N + 1, dtype=np.int64)
    mask = n % q == r % q
    lhs = complex(np.sum(f[mask] * np.exp((1j * TWO_PI * theta) * n[mask])))
    rhs = gamma * tau(theta, N) / q
    return lhs, rhs, abs(lhs - rhs)


def major_arc_audit(
    f: np.ndarray, a: int, q: int, theta: float, sigma: complex
) -> tuple[complex, complex, float]:
    """Measure fhat(theta) = sum_n f(n) e(n theta) against sigma tau(theta - a/q) / q."""
    f = np.asarray(f, dtype=np.float64)
    N = f.size
    n = np.arange(1, N + 1, dtype=np.int64)
    lhs = complex(np.sum(f * np.exp((1j * TWO_PI * theta) * n)))
    rhs = sigma * tau(theta - a / q, N) / q
    return lhs, rhs, abs(lhs - rhs)


def write_spectrum_csv(spec: Spectrum, fh) -> None:
    """Dump a spectrum as CSV rows j, theta, re, im, abs."""
    fh.write("j,theta,re,im,abs\n")
    for j, v in enumerate(spec.values):
        fh.write(f"{j},{j / spec.M!r},{float(v.real)!r},{float(v.imag)!r},{float(abs(v))!r}\n")
