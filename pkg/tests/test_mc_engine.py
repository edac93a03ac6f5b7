from __future__ import annotations

import math

import numpy as np
import pytest

from vixjumps.asymptotics import Kind, OptionSpec, Underlying, atm_strike
from vixjumps.errors import DomainError
from vixjumps.jump_models import DiffusionParams, JumpIntensities, ModelSpec, compute_compensators
from vixjumps.mc_engine import (
    BLOCK_SIZE,
    MCConfig,
    convergence_study,
    price_option_mc,
    price_strikes_mc,
    simulate_terminal,
    vix_forward_mc,
)

EQ, VIX = Underlying.EQUITY, Underlying.VIX
C, P = Kind.CALL, Kind.PUT
PLAIN = ModelSpec(DiffusionParams(s0=1.0, v0=0.04, rho=-0.7, sigma_v=0.8, r=0.03, q=0.01))


def within(a, b, se, k=3.0):
    return abs(a - b) <= k * se


class TestMartingale:
    def test_no_jumps(self):
        T = 0.5
        smp = simulate_terminal(PLAIN, T, MCConfig(paths=100_000, steps=50, seed=3))
        se = smp.s.std() / math.sqrt(smp.s.size)
        assert within(smp.s.mean(), math.exp(0.02 * T), se)
        assert smp.nonfinite == 0

    def test_jump_models(self, any_model):
        T = 0.5
        smp = simulate_terminal(any_model, T, MCConfig(paths=100_000, steps=50, seed=4))
        se = smp.s.std() / math.sqrt(smp.s.size)
        assert within(smp.s.mean(), 1.0, se)

    def test_variance_mean(self, any_model):
        # V is a geometric Brownian motion times uncompensated jumps
        T = 0.5
        smp = simulate_terminal(any_model, T, MCConfig(paths=100_000, steps=50, seed=5))
        lam_c = any_model.intensities.lambda_c
        expected = 0.0076 * math.exp(lam_c * T * compute_compensators(any_model).comp_cv)
        assert within(smp.v.mean(), expected, smp.v.std() / math.sqrt(smp.v.size))

    def test_tiny_strike_call(self, eraker):
        cfg = MCConfig(paths=20_000, steps=10, seed=1)
        smp = simulate_terminal(eraker, 0.1, cfg)
        est = price_option_mc(eraker, OptionSpec(EQ, C, 1e-8, maturity=0.1), cfg)
        assert est.value == pytest.approx(smp.s.mean() - 1e-8, rel=1e-12)


class TestDeterminism:
    @pytest.mark.parametrize("antithetic", [False, True])
    def test_workers_bitwise(self, kou, antithetic):
        cfg = MCConfig(paths=5 * BLOCK_SIZE + 17, steps=20, seed=99, antithetic=antithetic)
        ref = simulate_terminal(kou, 0.05, cfg, workers=1)
        for w in (2, 4):
            got = simulate_terminal(kou, 0.05, cfg, workers=w)
            assert np.array_equal(ref.s, got.s) and np.array_equal(ref.v, got.v)

    def test_seed_changes_paths(self, kou):
        a = simulate_terminal(kou, 0.05, MCConfig(paths=100, steps=5, seed=1))
        b = simulate_terminal(kou, 0.05, MCConfig(paths=100, steps=5, seed=2))
        assert not np.array_equal(a.s, b.s)

    def test_prefix_stable(self, kou):
        # the first block does not depend on the total number of paths
        a = simulate_terminal(kou, 0.05, MCConfig(paths=BLOCK_SIZE, steps=5, seed=8))
        b = simulate_terminal(kou, 0.05, MCConfig(paths=3 * BLOCK_SIZE, steps=5, seed=8))
        assert np.array_equal(a.s, b.s[:BLOCK_SIZE])

    def test_antithetic_pairs(self):
        m = ModelSpec(DiffusionParams(s0=1.0, v0=0.04))
        smp = simulate_terminal(m, 0.1, MCConfig(paths=10, steps=4, seed=0, antithetic=True))
        log_ret = np.log(smp.s) + 0.5 * 0.04 * 0.1
        np.testing.assert_allclose(log_ret[:5], -log_ret[5:], atol=1e-15)


class TestForward:
    def test_no_jumps_no_vol_of_vol(self):
        m = ModelSpec(DiffusionParams(s0=1.0, v0=0.04))
        est = vix_forward_mc(m, 0.1, MCConfig(paths=1000, steps=10))
        assert est.value == pytest.approx(0.2, rel=1e-13)
        assert est.std_error == pytest.approx(0.0, abs=1e-15)

    def test_tiny_maturity(self, eraker):
        est = vix_forward_mc(eraker, 1e-6, MCConfig(paths=10_000, steps=1, seed=2))
        assert est.value == pytest.approx(math.sqrt(0.0076 + 0.0095), rel=1e-6)


class TestPrices:
    @pytest.mark.parametrize("ratio", [0.6, 0.9])
    def test_otm_vix_puts_vanish(self, any_model, ratio):
        K = ratio * atm_strike(any_model, VIX)
        est = price_option_mc(any_model, OptionSpec(VIX, P, K), MCConfig(paths=50_000, steps=50, seed=6), T=0.01)
        assert abs(est.value) <= 3 * est.std_error + 1e-15

    def test_step_refinement(self, eraker):
        opt = OptionSpec(EQ, P, 0.95, maturity=0.01)
        a = price_option_mc(eraker, opt, MCConfig(paths=100_000, steps=100, seed=10))
        b = price_option_mc(eraker, opt, MCConfig(paths=100_000, steps=200, seed=11))
        assert within(a.value, b.value, math.hypot(a.std_error, b.std_error), 2.0)

    def test_single_path(self, eraker):
        est = price_option_mc(eraker, OptionSpec(EQ, P, 0.95), MCConfig(paths=1, steps=5), T=0.01)
        assert est.std_error == 0.0 and est.paths_used == 1

    def test_discounting(self):
        m = ModelSpec(DiffusionParams(s0=1.0, v0=0.04, r=0.05, q=0.05))
        est = price_option_mc(m, OptionSpec(EQ, C, 1e-9), MCConfig(paths=2000, steps=5), T=1.0)
        assert est.value == pytest.approx(math.exp(-0.05), rel=0.02)

    def test_common_paths_across_strikes(self, eraker):
        cfg = MCConfig(paths=8000, steps=10, seed=3)
        opts = [OptionSpec(EQ, P, k) for k in (0.9, 0.95)]
        joint = price_strikes_mc(eraker, opts, 0.01, cfg)
        single = [price_option_mc(eraker, o, cfg, T=0.01) for o in opts]
        assert [j.value for j in joint] == [s.value for s in single]

    def test_antithetic_standard_error(self):
        opt = OptionSpec(EQ, C, 1.05)
        plain = price_option_mc(PLAIN, opt, MCConfig(paths=40_000, steps=10, seed=1), T=0.25)
        anti = price_option_mc(PLAIN, opt, MCConfig(paths=40_000, steps=10, seed=1, antithetic=True), T=0.25)
        assert within(plain.value, anti.value, math.hypot(plain.std_error, anti.std_error))
        assert anti.std_error < plain.std_error

    def test_needs_maturity(self, eraker):
        with pytest.raises(DomainError):
            price_option_mc(eraker, OptionSpec(EQ, P, 0.9), MCConfig(paths=10))
        with pytest.raises(DomainError):
            simulate_terminal(eraker, 0.0, MCConfig(paths=10))


class TestConvergence:
    def test_asym_column_constant(self, kou):
        rows = convergence_study(kou, OptionSpec(EQ, P, 0.9), [0.05, 0.02], MCConfig(paths=20_000, steps=20))
        assert rows[0].asym == rows[1].asym > 0
        assert [r.maturity for r in rows] == [0.05, 0.02]

    def test_jump_free_decays(self):
        m = ModelSpec(DiffusionParams(s0=1.0, v0=0.0076), JumpIntensities())
        rows = convergence_study(m, OptionSpec(EQ, C, 1.1), [0.01, 0.001], MCConfig(paths=20_000, steps=20))
        assert rows[-1].mc_over_t == 0.0 and rows[-1].asym == 0.0
        assert math.isnan(rows[-1].ratio)

    def test_needs_otm(self, kou):
        with pytest.raises(DomainError):
            convergence_study(kou, OptionSpec(EQ, P, 1.0), [0.01], MCConfig(paths=10))


@pytest.mark.parametrize("kwargs", [dict(paths=0), dict(steps=0), dict(seed=-1), dict(seed=2 ** 64)])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        MCConfig(**kwargs)
