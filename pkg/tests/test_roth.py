import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from smoothlab import roth, smooth, wtrick
from smoothlab.roth_params import PipelineParams

from conftest import rng


def brute_oracle(points):
    """Exhaustive double loop over (n, d) pairs."""
    s = set(points)
    count = 0
    for n, d in itertools.product(sorted(s), range(1, max(s, default=0) + 1)):
        if n + d in s and n + 2 * d in s:
            count += 1
    return count


def trilinear_oracle(f, g, h):
    M = len(f)
    total = 0.0
    for n in range(M):
        for d in range(M):
            total += f[n] * g[(n + d) % M] * h[(n + 2 * d) % M]
    return total / M**2


# the base-3 digit-{0,1} set shifted by one: no three-term progression
BEHREND_STYLE = [1, 2, 4, 5, 10, 11, 13, 14, 28, 29, 31, 32, 37, 38, 40, 41]


class TestBruteCount:
    def test_unique_progression(self):
        count, wits = roth.count_3aps_brute({1, 2, 3})
        assert count == 1
        assert wits[0].triple == (1, 2, 3)

    def test_no_progression(self):
        assert roth.count_3aps_brute({1, 2, 4})[0] == 0

    def test_first_ten(self):
        assert roth.count_3aps_brute(range(1, 11))[0] == 20

    def test_behrend_style_set_is_free(self):
        assert roth.count_3aps_brute(BEHREND_STYLE)[0] == 0

    def test_against_double_loop(self):
        g = rng(300)
        for _ in range(30):
            pts = np.flatnonzero(g.random(200) < 0.3) + 1
            assert roth.count_3aps_brute(pts, max_witnesses=0)[0] == brute_oracle(pts)

    def test_witness_cap(self):
        count, wits = roth.count_3aps_brute(range(1, 51), max_witnesses=5)
        assert count == brute_oracle(range(1, 51))
        assert len(wits) == 5

    def test_witnesses_verify(self):
        g = rng(301)
        pts = set((np.flatnonzero(g.random(150) < 0.4) + 1).tolist())
        _count, wits = roth.count_3aps_brute(pts)
        for w in wits:
            assert all(v in pts for v in w.triple)
            assert w.triple == (w.n, w.n + w.d, w.n + 2 * w.d)
            assert w.d > 0

    def test_dilation_invariance(self):
        g = rng(302)
        pts = np.flatnonzero(g.random(120) < 0.35) + 1
        base = roth.count_3aps_brute(pts, max_witnesses=0)[0]
        for c in (2, 6, 10):
            assert roth.count_3aps_brute(pts * c, max_witnesses=0)[0] == base


class TestSpectralCount:
    def test_orientation_doubling(self):
        assert roth.count_3aps_spectral({1, 2, 3}, 7) == 2

    def test_empty(self):
        assert roth.count_3aps_spectral([], 7) == 0

    def test_wraparound_guard(self):
        with pytest.raises(ValueError, match="wraparound"):
            roth.count_3aps_spectral({1, 2, 3}, 6)

    def test_matches_twice_brute(self):
        g = rng(303)
        for i in range(50):
            density = 0.1 + 0.015 * i
            pts = np.flatnonzero(g.random(400) < density) + 1
            brute = roth.count_3aps_brute(pts, max_witnesses=0)[0]
            assert roth.count_3aps_spectral(pts, 1024) == 2 * brute

    @settings(max_examples=40, deadline=None)
    @given(st.sets(st.integers(1, 120), max_size=60))
    def test_matches_twice_brute_property(self, pts):
        brute = roth.count_3aps_brute(pts, max_witnesses=0)[0]
        assert roth.count_3aps_spectral(pts, 257) == 2 * brute


class TestTrilinearForm:
    def test_uniform(self):
        f = np.ones(7)
        assert roth.trilinear_form(f, f, f) == pytest.approx(1.0, rel=1e-12)

    def test_point_mass(self):
        f = np.zeros(11)
        f[4] = 1.0
        assert roth.trilinear_form(f, f, f) == pytest.approx(1 / 121, rel=1e-9)

    def test_against_double_loop(self):
        g = rng(304)
        for M in (16, 64, 257, 512):
            f, gg, h = g.random(M), g.random(M), g.random(M)
            assert roth.trilinear_form(f, gg, h) == pytest.approx(
                trilinear_oracle(f, gg, h), abs=1e-9
            )

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            roth.trilinear_form(np.ones(4), np.ones(5), np.ones(4))

    def test_diagonal_restoration_identity(self):
        # M^2 * T(1_S) = cyclic ordered count with d != 0 plus the |S| diagonal
        g = rng(305)
        pts = np.flatnonzero(g.random(100) < 0.3) + 1
        M = 257
        f = np.zeros(M)
        f[pts] = 1.0
        lhs = roth.trilinear_form(f, f, f) * M**2
        rhs = roth.count_3aps_spectral(pts, M) + pts.size
        assert lhs == pytest.approx(rhs, abs=1e-6)


class TestTransferenceAudit:
    def test_uniform_measure(self):
        f = np.ones(64)
        report = roth.transference_audit(f, f, 2.5)
        assert report.delta == pytest.approx(1.0)
        assert report.eta < 1e-12
        assert report.trilinear == pytest.approx(1.0, rel=1e-9)
        assert report.mp == pytest.approx(1.0, rel=1e-9)

    def test_zero_function(self):
        f = np.zeros(32)
        report = roth.transference_audit(f, np.ones(32), 2.5)
        assert report.delta == 0 and report.mp == 0 and report.trilinear == 0

    def test_majorization_violation_names_index(self):
        f = np.zeros(16)
        f[7] = 2.0
        with pytest.raises(ValueError, match="index 7"):
            roth.transference_audit(f, np.ones(16), 2.5)

    def test_p_range_enforced(self):
        f = np.ones(8)
        for p in (2.0, 3.0, 1.5):
            with pytest.raises(ValueError):
                roth.transference_audit(f, f, p)

    def test_frame_comparison_attached(self, sieve10k):
        ctx = wtrick.make_context(10**4, 100, 3.0, alpha=0.5, sieve=sieve10k)
        f = np.ones(16)
        report = roth.transference_audit(f, f, 2.5, ctx)
        assert report.w_comparison == pytest.approx(6 ** (2.5 * 0.5), rel=1e-12)

    def test_wtrick_measurement(self, sieve10k):
        # measured hypothesis statistics for a half-density subset at N=1e4
        ctx = wtrick.make_context(10**4, 100, 2.0, sieve=sieve10k)
        seq = wtrick.weight_sequence(ctx, sieve10k)
        g = rng(306)
        keep = g.random(ctx.Nb) < 0.5
        f = np.where(keep, seq.values, 0.0)
        report = roth.transference_audit(np.roll(f, 1), np.roll(seq.values, 1), 2.5, ctx)
        assert 0 < report.delta < 1
        assert report.eta < 0.25
        assert report.trilinear > 0


class TestPipeline:
    def test_dense_smooth_set(self, sieve10k):
        members = smooth.smooth_set(sieve10k, 100).members
        witness = roth.find_3ap_pipeline(members, 10**4, 100, sieve=sieve10k)
        assert witness.route == "wtrick"
        x0, D = witness.pulled_back
        member_set = set(members.tolist())
        assert all(v in member_set for v in (x0, x0 + D, x0 + 2 * D))

    def test_pullback_arithmetic_recomputed(self, sieve10k):
        members = smooth.smooth_set(sieve10k, 100).members
        g = rng(307)
        A = members[g.random(members.size) < 0.6]
        witness = roth.find_3ap_pipeline(A, 10**4, 100, sieve=sieve10k)
        if witness.route == "wtrick":
            ctx, _ = wtrick.select_b(A, 10**4, 100, sieve10k)
            x0, D = witness.pulled_back
            assert x0 == ctx.b1 * (ctx.W * witness.n - ctx.b2)
            assert D == ctx.b1 * ctx.W * witness.d
            a_set = set(A.tolist())
            assert all(v in a_set for v in (x0, x0 + D, x0 + 2 * D))
        else:
            a_set = set(A.tolist())
            assert all(v in a_set for v in witness.triple)

    def test_progression_free_set_raises(self):
        sieve = smooth.build_sieve(200)
        with pytest.raises(roth.NoProgressionError):
            roth.find_3ap_pipeline(BEHREND_STYLE, 200, 50, sieve=sieve)

    def test_non_smooth_input_rejected(self, sieve10k):
        with pytest.raises(ValueError, match="smooth"):
            roth.find_3ap_pipeline([101, 103, 105], 10**4, 100, sieve=sieve10k)

    def test_custom_params(self, sieve10k):
        members = smooth.smooth_set(sieve10k, 100).members
        params = PipelineParams(w_override=3.0, p=2.7, b1_budget=8)
        witness = roth.find_3ap_pipeline(members, 10**4, 100, params, sieve10k)
        assert all(v in set(members.tolist()) for v in (
            witness.pulled_back[0],
            witness.pulled_back[0] + witness.pulled_back[1],
            witness.pulled_back[0] + 2 * witness.pulled_back[1],
        ))


class TestWitnessJson:
    def test_wtrick_shape(self):
        w = roth.APWitness(3, 2, (3, 5, 7), (5, 4), "wtrick")
        doc = json.loads(roth.witness_to_json(w))
        assert doc == {
            "n": 3,
            "d": 2,
            "triple": [3, 5, 7],
            "pulled_back": {"x0": 5, "D": 4},
            "route": "wtrick",
        }

    def test_fallback_shape(self):
        w = roth.APWitness(1, 1, (1, 2, 3), None, "fallback")
        doc = json.loads(roth.witness_to_json(w))
        assert doc["pulled_back"] is None and doc["route"] == "fallback"
