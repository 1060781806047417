import math

import numpy as np
import pytest

from impulse_floquet import (DensePath, State, disconjugacy_oracle, disconjugacy_test,
                             find_zero_pair, lyapunov_lhs, lyapunov_verify, rescale)
from impulse_floquet.harness import GeneratorSpec, generate
from impulse_floquet.lyapunov import (DISCONJUGATE, DISCONJUGATE_CERTIFIED,
                                      INCONCLUSIVE, NOT_DISCONJUGATE)

from helpers import make_system, rotation_system

PI_SQ = math.pi ** 2


def sine_system(freq_sq=PI_SQ, T=1.0):
    return make_system(0.0, 1.0, freq_sq, T=T)


class TestRescale:
    def test_no_impulses_identity(self):
        sys_ = rotation_system(1.0)
        path = DensePath(sys_, 0.0, 1.0)
        sol = rescale(path, (0.0, 1.0))
        for t in (0.2, 0.5, 0.9):
            z, v = sol.zv(t)
            assert z == pytest.approx(math.sin(t), abs=1e-9)
            assert v == pytest.approx(math.cos(t), abs=1e-9)

    def test_continuity_across_positive_jump(self):
        sys_ = make_system(0.0, 1.0, 1.0, impulses=[(0.5, 2.0, 0.0)])
        sol = rescale(DensePath(sys_, 0.0, 1.0), (1.0, 0.0))
        zl = sol.z(0.5, "left")
        zr = sol.z(0.5, "right")
        assert zr == pytest.approx(zl, abs=1e-10)

    def test_two_negative_jumps_restore_scale(self):
        sys_ = make_system(0.0, 0.0, 0.0,
                           impulses=[(0.3, -1.0, 0.0), (0.7, -1.0, 0.0)])
        sol = rescale(DensePath(sys_, 0.0, 1.0), (1.0, 0.0))
        assert sol.z(0.9) == pytest.approx(1.0, abs=1e-12)
        assert sol.path.alpha_product(0.9) == 1.0

    def test_v_jump_rule(self):
        sys_ = make_system(0.0, 0.0, 0.0, impulses=[(0.5, 2.0, 1.0)])
        sol = rescale(DensePath(sys_, 0.0, 1.0), (1.0, 0.0))
        vl = sol.v(0.5, "left")
        vr = sol.v(0.5, "right")
        zl = sol.z(0.5, "left")
        assert vr - vl == pytest.approx(-(1.0 / 2.0) * zl, abs=1e-12)

    def test_continuity_random_impulsive(self):
        for seed in range(6):
            sys_ = generate(GeneratorSpec(seed=40 + seed, mode="positive-b",
                                          impulse_range=(1, 3)))
            sol = rescale(DensePath(sys_, 0.0, 1.0), (0.7, -0.4))
            ts = np.linspace(0.0, 1.0, 65)
            scale = float(np.max(np.abs(sol.z_samples(ts)))) or 1.0
            for imp in sys_.schedule.impulses:
                zl = sol.z(imp.tau, "left")
                zr = sol.z(imp.tau, "right")
                assert abs(zr - zl) <= 1e-10 * scale


class TestFindZeroPair:
    def test_sine_pair(self):
        pair = find_zero_pair(sine_system(), State(0.0, 0.0, 1.0), (0.0, 1.5))
        assert pair.t1 == pytest.approx(0.0, abs=1e-10)
        assert pair.t2 == pytest.approx(1.0, abs=1e-10)

    def test_constant_solution_none(self):
        sys_ = make_system(0.0, 1.0, 0.0)
        assert find_zero_pair(sys_, State(0.0, 1.0, 0.0), (0.0, 1.0)) is None

    def test_slow_rotation_multi_period(self):
        pair = find_zero_pair(rotation_system(1.0), State(0.0, 0.0, 1.0), (0.0, 4.0))
        assert pair.t1 == pytest.approx(0.0, abs=1e-10)
        assert pair.t2 == pytest.approx(math.pi, abs=1e-9)

    def test_sign_flip_without_zero_not_counted(self):
        # alpha < 0 flips x across the impulse; z has no zero there
        sys_ = make_system(0.0, 0.0, 0.0, impulses=[(0.5, -1.0, 0.0)])
        assert find_zero_pair(sys_, State(0.0, 1.0, 0.0), (0.0, 1.0)) is None

    def test_trivial_initial_state(self):
        assert find_zero_pair(rotation_system(1.0), State(0.0, 0.0, 0.0),
                              (0.0, 1.0)) is None


class TestLyapunovLhs:
    def test_sine_closed_form(self):
        val = lyapunov_lhs(sine_system(), 0.0, 1.0, 0.5)
        assert val == pytest.approx(PI_SQ, abs=1e-9)

    def test_nonpositive_c_gives_zero(self):
        sys_ = make_system(0.0, 1.0, -2.0, impulses=[(0.5, -1.0, 0.5)])
        assert lyapunov_lhs(sys_, 0.0, 1.0, 0.5) == 0.0

    def test_impulse_ratio_counts(self):
        sys_ = make_system(0.0, 1.0, 1.0, impulses=[(0.5, 1.0, 1.0)])
        assert lyapunov_lhs(sys_, 0.0, 1.0, 0.25) == pytest.approx(2.0, abs=1e-9)

    def test_constant_a_closed_form(self):
        # b = 1, c = 1, a = 0.5: first factor integrates exp(-2*a*(t-t0))
        a0, t0 = 0.5, 0.3
        sys_ = make_system(a0, 1.0, 1.0)
        expect = (math.exp(-2 * a0 * (0.0 - t0)) - math.exp(-2 * a0 * (1.0 - t0))) / (2 * a0)
        assert lyapunov_lhs(sys_, 0.0, 1.0, t0) == pytest.approx(expect, abs=1e-9)

    def test_window_beyond_one_period(self):
        # b-integral over two periods is 2, positive mass is 2*pi^2
        val = lyapunov_lhs(sine_system(), 0.5, 2.5, 1.0)
        assert val == pytest.approx(4.0 * PI_SQ, rel=1e-9)

    def test_t0_must_be_interior(self):
        with pytest.raises(ValueError):
            lyapunov_lhs(sine_system(), 0.0, 1.0, 1.5)


class TestLyapunovVerify:
    def test_sine_witness(self):
        sys_ = sine_system()
        pair = find_zero_pair(sys_, State(0.0, 0.0, 1.0), (0.0, 1.5))
        w = lyapunov_verify(sys_, pair)
        assert w.t0 == pytest.approx(0.5, abs=1e-3)
        assert w.lhs == pytest.approx(PI_SQ, abs=1e-6)
        assert w.holds

    def test_double_frequency(self):
        sys_ = sine_system(4.0 * PI_SQ)
        pair = find_zero_pair(sys_, State(0.0, 0.0, 1.0), (0.0, 0.8))
        assert pair.t2 == pytest.approx(0.5, abs=1e-9)
        w = lyapunov_verify(sys_, pair)
        assert w.lhs == pytest.approx(PI_SQ, abs=1e-6)

    def test_half_frequency_long_pair(self):
        sys_ = sine_system((math.pi / 2.0) ** 2, T=1.0)
        pair = find_zero_pair(sys_, State(0.0, 0.0, 1.0), (0.0, 2.5))
        assert pair.t2 == pytest.approx(2.0, abs=1e-8)
        w = lyapunov_verify(sys_, pair)
        assert w.lhs == pytest.approx(2.0 * PI_SQ / 2.0, abs=1e-6)

    def test_reconstruction_without_solution_handle(self):
        sys_ = sine_system()
        pair = find_zero_pair(sys_, State(0.0, 0.0, 1.0), (0.0, 1.5))
        stripped = type(pair)(pair.t1, pair.t2, pair.t1_at_impulse, pair.t2_at_impulse)
        w = lyapunov_verify(sys_, stripped)
        assert w.lhs == pytest.approx(PI_SQ, abs=1e-6)

    def test_degenerate_pair_rejected(self):
        sys_ = sine_system()
        bad = type(find_zero_pair(sys_, State(0.0, 0.0, 1.0), (0.0, 1.5)))(0.0, 1e-12)
        with pytest.raises(ValueError):
            lyapunov_verify(sys_, bad)

    def test_lhs_sup_at_least_witness(self):
        sys_ = generate(GeneratorSpec(seed=77, mode="positive-b", amplitude=1.5))
        pair = find_zero_pair(sys_, State(0.0, 0.0, 1.0), (0.0, 4.0))
        if pair is not None:
            w = lyapunov_verify(sys_, pair)
            assert w.lhs_sup >= w.lhs - 1e-9


class TestDisconjugacy:
    def test_unit_box_certified(self):
        sys_ = rotation_system(1.0)
        chk = disconjugacy_test(sys_, 0.0, 1.0)
        assert chk.status == DISCONJUGATE_CERTIFIED
        assert chk.sup_value == pytest.approx(1.0, abs=1e-9)
        assert disconjugacy_oracle(sys_, 0.0, 1.0) == DISCONJUGATE

    def test_sine_inconclusive_and_not_disconjugate(self):
        sys_ = sine_system()
        chk = disconjugacy_test(sys_, 0.0, 1.01)
        assert chk.status == INCONCLUSIVE
        assert disconjugacy_oracle(sys_, 0.0, 1.01) == NOT_DISCONJUGATE

    def test_sine_half_window_certified(self):
        sys_ = sine_system()
        chk = disconjugacy_test(sys_, 0.0, 0.5)
        assert chk.status == DISCONJUGATE_CERTIFIED
        assert chk.sup_value == pytest.approx(PI_SQ / 4.0, abs=1e-9)
        assert disconjugacy_oracle(sys_, 0.0, 0.5) == DISCONJUGATE

    def test_nonpositive_mass_certified(self):
        sys_ = make_system(0.0, 1.0, -1.0, impulses=[(0.5, -1.0, 0.5)])
        chk = disconjugacy_test(sys_, 0.0, 1.0)
        assert chk.status == DISCONJUGATE_CERTIFIED and chk.sup_value == 0.0
        assert disconjugacy_oracle(sys_, 0.0, 1.0) == DISCONJUGATE

    def test_affine_solutions_disconjugate(self):
        sys_ = make_system(0.0, 1.0, 0.0)
        assert disconjugacy_oracle(sys_, 0.0, 1.0) == DISCONJUGATE

    def test_monotone_in_window(self):
        sys_ = generate(GeneratorSpec(seed=9, mode="positive-b"))
        sups = [disconjugacy_test(sys_, 0.2, 0.2 + w).sup_value
                for w in (0.3, 0.6, 0.9, 1.2)]
        assert all(b >= a - 1e-9 for a, b in zip(sups, sups[1:]))

    def test_certificate_sound_against_oracle(self):
        rng = np.random.default_rng(2)
        for i in range(12):
            sys_ = generate(GeneratorSpec(seed=500 + i, mode="positive-b",
                                          amplitude=1.5))
            t1 = float(rng.uniform(0.0, 1.0))
            t2 = t1 + float(rng.uniform(0.2, 1.6))
            chk = disconjugacy_test(sys_, t1, t2)
            if chk.status == DISCONJUGATE_CERTIFIED:
                assert disconjugacy_oracle(sys_, t1, t2) == DISCONJUGATE


class TestSoundnessSmall:
    def test_every_found_pair_holds(self):
        for seed in range(6):
            sys_ = generate(GeneratorSpec(seed=900 + seed, mode="positive-b",
                                          amplitude=1.8))
            for k in range(4):
                theta = math.pi * k / 4
                pair = find_zero_pair(sys_, State(0.0, math.cos(theta), math.sin(theta)),
                                      (0.0, 4.0))
                if pair is not None:
                    w = lyapunov_verify(sys_, pair)
                    assert w.holds, (seed, k, w.lhs)
