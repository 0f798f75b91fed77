"""Acceptance checks: exact-oracle equivalences plus measured desk-scale trends.

Each check is self-contained, deterministically seeded, and returns a
:class:`CheckResult` carrying pass/fail, the measured detail, and its
runtime budget.  Two of the trend checks (minor-arc decay, weight-spectrum
decay) encode asymptotic expectations that measurably reverse at the
scales this lab reaches with y held fixed: the smooth sets grow *more*
structured as N rises because the scaling exponent alpha(N, y) falls.
Those checks run exactly as specified and report the measured reversal
rather than being weakened to pass.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import arith, fourier, roth, saddle, smooth, wtrick
from .roth_params import PipelineParams

SWEEP_SEED = 0x5EED_0001
SUBSET_SEED = 0x5EED_0004
PIPELINE_SEED = 0x5EED_0010


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    elapsed: float
    budget: float
    detail: str


def _result(number, name, t0, budget, ok, detail) -> CheckResult:
    elapsed = time.perf_counter() - t0
    return CheckResult(number, name, bool(ok) and elapsed <= budget, elapsed, budget, detail)


def sweep_contexts(count: int = 20, seed: int = SWEEP_SEED) -> list[wtrick.WContext]:
    """Deterministic frames cycling W over {2, 6, 30} and alpha over {0.3, 0.5, 0.9}."""
    rng = np.random.Generator(np.random.Philox(seed))
    frames = []
    for i in range(count):
        w = [2.0, 3.0, 5.0][i % 3]
        alpha = [0.3, 0.5, 0.9][(i // 3) % 3]
        W = wtrick.primorial_upto(w)
        b2 = int(rng.choice(wtrick.coprime_residues(W)))
        frames.append(wtrick.make_context(1000, 100, w, (1, b2), alpha=alpha))
    return frames


def check_sigma_exactness() -> CheckResult:
    """Closed sigma_{a,q} equals the direct r-sum to 1e-9 for q <= 200."""
    t0 = time.perf_counter()
    worst = 0.0
    pairs = 0
    for ctx in sweep_contexts():
        for q in range(1, 201):
            residues = [0] if q == 1 else [a for a in range(1, q) if math.gcd(a, q) == 1]
            brute = wtrick.sigma_aq_brute_row(q, ctx, residues)
            for a, bval in zip(residues, brute):
                cval = wtrick.sigma_aq_closed(a, q, ctx)
                worst = max(worst, abs(bval.real - cval.real), abs(bval.imag - cval.imag))
                pairs += 1
    ok = worst <= 1e-9
    return _result(1, "sigma-formula exactness", t0, 10.0, ok,
                   f"{pairs} (a,q,ctx) pairs, worst component gap {worst:.3e}")


def check_ramanujan_exactness() -> CheckResult:
    """Closed Ramanujan sums equal direct summation to 1e-9 for all q <= 500."""
    t0 = time.perf_counter()
    worst = 0.0
    for q in range(1, 501):
        for a in range(q):
            closed = arith.ramanujan_sum(q, a)
            brute = arith.ramanujan_sum_bruteforce(q, a)
            worst = max(worst, abs(closed - brute.real), abs(brute.imag))
    ok = worst <= 1e-9
    return _result(2, "Ramanujan-sum exactness", t0, 5.0, ok,
                   f"all q <= 500, worst gap {worst:.3e}")


def check_parseval() -> CheckResult:
    """Grid Parseval: the p=2 moment of the smooth indicator equals psi exactly."""
    t0 = time.perf_counter()
    sieve = smooth.build_sieve(10**4)
    sset = smooth.smooth_set(sieve, 100)
    moment = fourier.lp_moment(sset.members, 2.0, 2**15, allow_low_p=True)
    rel = abs(moment - sset.psi) / sset.psi
    ok = rel <= 1e-6
    return _result(3, "Parseval identity", t0, 5.0, ok,
                   f"psi={sset.psi}, p=2 moment={moment:.6f}, rel gap {rel:.3e}")


def check_spectral_ap_counting() -> CheckResult:
    """Cyclic spectral count equals twice the brute count on 100 seeded subsets."""
    t0 = time.perf_counter()
    rng = np.random.Generator(np.random.Philox(SUBSET_SEED))
    mismatches = 0
    universe = np.arange(1, 2001)
    for i in range(100):
        density = 0.05 + 0.009 * i
        pts = universe[rng.random(2000) < density]
        brute, _ = roth.count_3aps_brute(pts, max_witnesses=0)
        spectral = roth.count_3aps_spectral(pts, 4096)
        if spectral != 2 * brute:
            mismatches += 1
    ok = mismatches == 0
    return _result(4, "spectral AP counting", t0, 30.0, ok,
                   f"100 subsets of [1..2000], {mismatches} mismatches")


def check_granville_trend() -> CheckResult:
    """Residue-class deviations shrink from y=100 to y=1000 at N=1e6, q in {3,5,7}."""
    t0 = time.perf_counter()
    sieve = smooth.build_sieve(10**6)
    set2 = smooth.smooth_set(sieve, 100)
    set3 = smooth.smooth_set(sieve, 1000)
    rows = []
    ok = True
    for q in (3, 5, 7):
        d2 = smooth.granville_deviation(set2, q)
        d3 = smooth.granville_deviation(set3, q)
        ok = ok and d3 < d2 and max(d2, d3) <= 0.5
        rows.append(f"q={q}: {d2:.5f} -> {d3:.5f}")
    return _result(5, "Granville deviation trend", t0, 60.0, ok, "; ".join(rows))


def check_bt_band() -> CheckResult:
    """Coprime-count ratios stay within [0.5, 2] for smooth q <= 30 at N=1e6, y=100."""
    t0 = time.perf_counter()
    sieve = smooth.build_sieve(10**6)
    sset = smooth.smooth_set(sieve, 100)
    alpha = saddle.solve_alpha(10**6, 100).alpha
    tables = arith.multiplicative_tables(30)
    worst_q, worst_r = 1, 1.0
    ok = True
    for q in range(1, 31):
        if tables.omega[q] > 3 or (q > 1 and max(arith.prime_factors(q)) > 100):
            continue
        r = saddle.bt_ratio(sset, q, alpha)
        if abs(math.log(r)) > abs(math.log(worst_r)):
            worst_q, worst_r = q, r
        ok = ok and 0.5 <= r <= 2.0
    return _result(6, "coprime-ratio band", t0, 60.0, ok,
                   f"alpha={alpha:.6f}, worst ratio {worst_r:.4f} at q={worst_q}")


def check_minor_arc_trend() -> CheckResult:
    """Normalized minor-arc sup across N in {1e4, 1e5, 1e6} at y=100, R=log10^2 N.

    The asymptotic expectation is strict decrease.  Measured at fixed y the
    sup *rises*: the top minor peak sits at a/q for the first prime q > R,
    with height tracking q^(-alpha_saddle), and alpha_saddle(N, 100) falls
    from 0.72 to 0.60 over this range.  The check records the honest
    outcome.  (With natural-log R the major arcs cover the whole circle at
    these N, which is why R follows the base-10 reading that keeps the
    arcs disjoint.)
    """
    t0 = time.perf_counter()
    sups = []
    for N in (10**4, 10**5, 10**6):
        sieve = smooth.build_sieve(10**6)
        members = smooth.smooth_set(sieve, 100).members
        members = members[members <= N]
        R = math.log10(N) ** 2
        arcs = fourier.arc_decomposition(N, R)
        _theta, sup = fourier.minor_arc_sup(members, N, arcs, 2 * N)
        sups.append(sup / members.size)
    ok = sups[0] > sups[1] > sups[2]
    return _result(7, "minor-arc decay trend", t0, 300.0, ok,
                   "normalized sups " + " -> ".join(f"{s:.5f}" for s in sups))


def check_harper_moment() -> CheckResult:
    """p=2.5 moment ratios against psi^p / N stay within a factor 4 while N doubles."""
    t0 = time.perf_counter()
    sieve = smooth.build_sieve(10**6)
    members_full = smooth.smooth_set(sieve, 100).members
    ratios = []
    for N in (10**4, 2 * 10**4, 4 * 10**4):
        members = members_full[members_full <= N]
        moment = fourier.lp_moment(members, 2.5, 2 * N)
        ratios.append(moment / (members.size**2.5 / N))
    spread = max(ratios) / min(ratios)
    ok = spread < 4.0
    return _result(8, "moment-ratio boundedness", t0, 120.0, ok,
                   "ratios " + ", ".join(f"{r:.4f}" for r in ratios) + f"; spread {spread:.3f}")


def check_nu_normalization() -> CheckResult:
    """Weight normalization band at N=1e6 plus the weight-spectrum trend.

    Clause one: nu_total / Nb in [0.5, 1.5] for the best frame selected on
    the full smooth set (passes with the empirical-alpha weights).  Clause
    two expects the top nonzero weight mode eta to fall across N in
    {1e4, 1e5, 1e6}; measured at fixed y it rises (the mode sits at the
    3-adic frequency, and the 3-bias strengthens as alpha drops), so the
    check reports the honest reversal.
    """
    t0 = time.perf_counter()
    sieve = smooth.build_sieve(10**6)
    sset = smooth.smooth_set(sieve, 100)
    ctx, _mass = wtrick.select_b(sset.members, 10**6, 100, sieve, 2.0)
    ratio = wtrick.nu_total(ctx, sieve) / ctx.Nb
    band_ok = 0.5 <= ratio <= 1.5
    etas = []
    for N in (10**4, 10**5, 10**6):
        ctx_n = wtrick.make_context(N, 100, 2.0, sieve=sieve)
        _a, eta = wtrick.nu_fourier_max(ctx_n, sieve)
        etas.append(eta)
    trend_ok = etas[0] > etas[1] > etas[2]
    ok = band_ok and trend_ok
    return _result(
        9, "weight normalization and spectrum", t0, 180.0, ok,
        f"best b=({ctx.b1},{ctx.b2}), nu_total/Nb={ratio:.4f} (band {'ok' if band_ok else 'FAIL'}); "
        "eta " + " -> ".join(f"{e:.5f}" for e in etas) + f" (decreasing {'ok' if trend_ok else 'FAIL'})",
    )


def check_pipeline() -> CheckResult:
    """End-to-end rehearsal on a seeded half-density subset of the smooth numbers."""
    t0 = time.perf_counter()
    N, y = 10**5, 100
    sieve = smooth.build_sieve(N)
    members = smooth.smooth_set(sieve, y).members
    rng = np.random.Generator(np.random.Philox(PIPELINE_SEED))
    A = members[rng.random(members.size) < 0.5]
    witness = roth.find_3ap_pipeline(A, N, y, PipelineParams(), sieve)
    A_set = set(int(v) for v in A)
    if witness.route == "wtrick":
        assert witness.pulled_back is not None
        x0, D = witness.pulled_back
        verified = all(v in A_set for v in (x0, x0 + D, x0 + 2 * D))
    else:
        verified = all(v in A_set for v in witness.triple)
    ok = verified
    return _result(10, "end-to-end pipeline", t0, 60.0, ok,
                   f"|A|={A.size}, route={witness.route}, witness n={witness.n}, d={witness.d}, "
                   f"pullback={witness.pulled_back}")


def check_gamma_bound() -> CheckResult:
    """gamma_{r,q} <= q for every r, q <= 200, over the sweep frames."""
    t0 = time.perf_counter()
    worst = 0.0
    ok = True
    for ctx in sweep_contexts():
        for q in range(1, 201):
            gam = saddle.gamma_vector(q, ctx.W, ctx.b2, ctx.alpha)
            worst = max(worst, float(gam.max() / q))
            if np.any(gam > q + 1e-12):
                ok = False
    return _result(11, "gamma bound", t0, 10.0, ok,
                   f"max gamma/q over sweep = {worst:.6f}")


ACCEPTANCE_CHECKS = [
    check_sigma_exactness,
    check_ramanujan_exactness,
    check_parseval,
    check_spectral_ap_counting,
    check_granville_trend,
    check_bt_band,
    check_minor_arc_trend,
    check_harper_moment,
    check_nu_normalization,
    check_pipeline,
    check_gamma_bound,
]


def run_all() -> list[CheckResult]:
    return [check() for check in ACCEPTANCE_CHECKS]
