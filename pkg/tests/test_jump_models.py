from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate as sp_integrate

from vixjumps.errors import DomainError
from vixjumps.jump_models import (
    BoundedLocalVol,
    ConstantOne,
    DiffusionParams,
    ErakerJump,
    ExponentialJump,
    FoldedNormalJump,
    JumpIntensities,
    KouJump,
    ModelSpec,
    NormalJump,
    compute_compensators,
    kou_marginal_coefficients,
    marginal_density_common_s,
    sample_common_jump,
    sample_idio_jump,
)

ERAKER = ErakerJump(eta_cv=20.0, loc_s=-0.0869, rho_j=-0.38, sigma_cs=0.1)
KOU = KouJump(eta_cv=20.0, eta_cs=10.0, loc_s=-0.11, rho_j=-0.38, alpha=0.5)
FN = FoldedNormalJump(sigma_cv=0.063, loc_s=-0.11, rho_j=-0.38, sigma_cs=0.1)
COMMON = {"eraker": ERAKER, "kou": KOU, "fn": FN}


def joint_expectation(jump, g):
    """E[g(x, y)] over the joint law by 2-d scipy quadrature (test oracle)."""
    ymax = jump.v_upper()
    lo, hi = jump.residual_segments()[0][0], jump.residual_segments()[-1][1]
    pts = [0.0] if isinstance(jump, KouJump) else None

    def inner(y):
        c = jump.loc_s + jump.rho_j * y
        f = lambda z: g(c + z, y) * float(jump.residual_pdf(z))  # noqa: E731
        val, _ = sp_integrate.quad(f, lo, hi, points=pts, epsabs=0, epsrel=1e-12, limit=200)
        return val * float(jump.v_pdf(y))

    val, _ = sp_integrate.quad(inner, 0.0, ymax, epsabs=0, epsrel=1e-11, limit=200)
    return val


def _model(common, **kw):
    return ModelSpec(DiffusionParams(s0=1.0, v0=0.0076, sigma_v=0.01), JumpIntensities(lambda_c=0.47),
                     common=common, **kw)


class TestCompensators:
    def test_eraker_kappa(self):
        comp = compute_compensators(_model(ERAKER))
        assert comp.kappa == pytest.approx(0.0095, abs=5e-5)
        assert comp.kappa == comp.kappa_formula

    def test_kou_values(self):
        comp = compute_compensators(_model(KOU))
        assert comp.comp_cs == pytest.approx(-0.112, abs=5e-4)
        assert comp.mean_cs == pytest.approx(-0.129, abs=5e-4)
        assert comp.kappa == pytest.approx(0.016, abs=5e-5)

    def test_override_keeps_formula(self):
        comp = compute_compensators(_model(FN, kappa_override=0.0079))
        assert comp.kappa == 0.0079
        assert comp.kappa_formula == pytest.approx(0.011734, abs=1e-6)

    @pytest.mark.parametrize("name", sorted(COMMON))
    def test_against_quadrature_oracle(self, name):
        jump = COMMON[name]
        comp = compute_compensators(_model(jump))
        assert comp.comp_cs == pytest.approx(joint_expectation(jump, lambda x, y: math.exp(x)) - 1, rel=1e-8)
        assert comp.mean_cs == pytest.approx(joint_expectation(jump, lambda x, y: x), rel=1e-8)
        assert comp.comp_cv == pytest.approx(joint_expectation(jump, lambda x, y: math.exp(y)) - 1, rel=1e-8)

    def test_folded_normal_printed_compensator_differs(self):
        # the reference value -0.120641 cannot be reproduced from the stated law
        comp = compute_compensators(_model(FN))
        assert comp.comp_cs == pytest.approx(-0.116618, abs=1e-6)
        assert abs(comp.comp_cs - (-0.120641)) > 1e-3

    def test_idiosyncratic_parts(self):
        m = ModelSpec(DiffusionParams(s0=1.0, v0=0.04), JumpIntensities(lambda_s=2.0, lambda_v=1.0),
                      idio_s=NormalJump(-0.05, 0.1), idio_v=ExponentialJump(5.0))
        comp = compute_compensators(m)
        assert comp.comp_s == pytest.approx(math.exp(-0.05 + 0.005) - 1, rel=1e-14)
        assert comp.comp_v == pytest.approx(0.25, rel=1e-14)
        assert comp.kappa == pytest.approx(4.0 * (comp.comp_s + 0.05), rel=1e-13)

    @given(st.floats(-0.5, 0.5), st.floats(0.0, 0.5), st.floats(-1, 1), st.floats(1.5, 40),
           st.floats(0, 5), st.floats(0, 5))
    def test_kappa_nonnegative(self, loc, sig, rho_j, eta_cv, lam_s, lam_c):
        m = ModelSpec(DiffusionParams(s0=1.0, v0=0.04), JumpIntensities(lambda_s=lam_s, lambda_c=lam_c),
                      idio_s=NormalJump(loc, sig), common=ErakerJump(eta_cv, loc, rho_j, sig))
        assert compute_compensators(m).kappa >= 0.0

    def test_no_jumps(self):
        comp = compute_compensators(ModelSpec(DiffusionParams(s0=1.0, v0=0.04)))
        assert comp.kappa == 0.0 and comp.comp_cs == 0.0


class TestDomain:
    @pytest.mark.parametrize("factory", [
        lambda: ErakerJump(eta_cv=1.0, loc_s=0.0, rho_j=0.0, sigma_cs=0.1),
        lambda: ErakerJump(eta_cv=2.0, loc_s=0.0, rho_j=3.0, sigma_cs=0.1),
        lambda: ErakerJump(eta_cv=20.0, loc_s=0.0, rho_j=0.0, sigma_cs=-0.1),
        lambda: KouJump(eta_cv=20.0, eta_cs=1.0, loc_s=0.0, rho_j=0.0, alpha=0.5),
        lambda: KouJump(eta_cv=20.0, eta_cs=10.0, loc_s=0.0, rho_j=0.0, alpha=1.5),
        lambda: FoldedNormalJump(sigma_cv=0.0, loc_s=0.0, rho_j=0.0, sigma_cs=0.1),
        lambda: ExponentialJump(1.0),
        lambda: NormalJump(0.0, -1.0),
        lambda: DiffusionParams(s0=0.0, v0=0.04),
        lambda: DiffusionParams(s0=1.0, v0=-0.04),
        lambda: DiffusionParams(s0=1.0, v0=0.04, rho=1.5),
        lambda: DiffusionParams(s0=1.0, v0=0.04, sigma_v=-1),
        lambda: JumpIntensities(lambda_c=-1.0),
        lambda: ModelSpec(DiffusionParams(s0=1.0, v0=0.04), JumpIntensities(lambda_c=1.0)),
        lambda: ModelSpec(DiffusionParams(s0=1.0, v0=0.04), JumpIntensities(lambda_s=1.0)),
        lambda: ModelSpec(DiffusionParams(s0=1.0, v0=0.04), kappa_override=-0.1),
    ])
    def test_rejected(self, factory):
        with pytest.raises(DomainError):
            factory()

    def test_exponential_moment_beyond_rate(self):
        assert ExponentialJump(3.0).exp_moment(3.0) == math.inf
        assert ERAKER.v_exp_moment(25.0) == math.inf

    def test_sampling_without_law(self):
        rng = np.random.default_rng(0)
        with pytest.raises(DomainError):
            sample_common_jump(None, rng, 3)
        with pytest.raises(DomainError):
            sample_idio_jump(None, rng, 3)


class TestSamplers:
    N = 1_000_000

    @pytest.mark.parametrize("name", sorted(COMMON))
    def test_common_moments(self, name):
        jump = COMMON[name]
        rng = np.random.default_rng(11)
        dx, dy = sample_common_jump(jump, rng, self.N)
        assert np.all(dy >= 0)
        for sample, exact in [(dx, jump.s_mean()), (dy, jump.v_mean()),
                              (np.exp(dx), jump.s_exp_moment()), (np.exp(dy), jump.v_exp_moment(1.0))]:
            se = sample.std() / math.sqrt(self.N)
            assert abs(sample.mean() - exact) < 4 * se

    @pytest.mark.parametrize("dist", [NormalJump(-0.05, 0.1), ExponentialJump(5.0)])
    def test_idio_moments(self, dist):
        rng = np.random.default_rng(5)
        s = sample_idio_jump(dist, rng, self.N)
        assert abs(s.mean() - dist.mean()) < 4 * s.std() / math.sqrt(self.N)
        e = np.exp(s)
        assert abs(e.mean() - dist.exp_moment()) < 4 * e.std() / math.sqrt(self.N)

    def test_degenerate_laws(self):
        rng = np.random.default_rng(1)
        assert np.all(NormalJump(0.3, 0.0).sample(rng, 10) == 0.3)
        dx, dy = sample_common_jump(ErakerJump(20.0, -0.1, 0.0, 0.0), rng, 10)
        assert np.all(dx == -0.1)
        kou_up = KouJump(20.0, 10.0, 0.0, 0.0, alpha=1.0).sample_residual(rng, 1000)
        assert np.all(kou_up >= 0)


class TestMarginal:
    @pytest.mark.parametrize("name", sorted(COMMON))
    def test_normalized(self, name):
        jump = COMMON[name]
        lo, hi = jump.s_support()
        pts = [jump.loc_s] if isinstance(jump, KouJump) else None
        total, _ = sp_integrate.quad(lambda x: marginal_density_common_s(jump, x), lo, hi, points=pts, limit=400)
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_kou_closed_matches_quadrature(self):
        xs = np.array([-0.8, -0.4, -0.2, -0.12, -0.11, -0.1, 0.0, 0.05, 0.3])
        closed = marginal_density_common_s(KOU, xs, method="closed")
        quad = marginal_density_common_s(KOU, xs, method="quadrature")
        np.testing.assert_allclose(closed, quad, rtol=1e-8, atol=1e-12)
        assert marginal_density_common_s(KOU, 0.0) == pytest.approx(float(quad[6]), rel=1e-8)

    def test_kou_continuous_at_location(self):
        eps = 1e-10
        left = marginal_density_common_s(KOU, KOU.loc_s - eps)
        right = marginal_density_common_s(KOU, KOU.loc_s + eps)
        assert left == pytest.approx(right, rel=1e-8)

    def test_kou_coefficients_sum(self):
        # integrating each exponential piece over its branch recovers total mass 1
        c_r, c_1l, c_2l = kou_marginal_coefficients(KOU)
        a1, es, loc = KOU.eta_cv / abs(KOU.rho_j), KOU.eta_cs, KOU.loc_s
        mass = c_r * math.exp(-es * loc) + c_1l * math.exp(a1 * loc) + c_2l * math.exp(es * loc)
        assert mass == pytest.approx(1.0, rel=1e-12)

    def test_kou_singular_case(self):
        singular = KouJump(eta_cv=5.0, eta_cs=10.0, loc_s=-0.1, rho_j=-0.5, alpha=0.5)
        with pytest.raises(DomainError, match="singular"):
            kou_marginal_coefficients(singular)
        # auto falls back to quadrature and stays finite
        assert math.isfinite(marginal_density_common_s(singular, -0.2))

    def test_closed_needs_kou(self):
        with pytest.raises(DomainError):
            marginal_density_common_s(ERAKER, 0.0, method="closed")
        with pytest.raises(DomainError):
            kou_marginal_coefficients(KouJump(20.0, 10.0, 0.0, 0.2, 0.5))
        with pytest.raises(ValueError):
            marginal_density_common_s(ERAKER, 0.0, method="spline")

    def test_scalar_in_scalar_out(self):
        assert isinstance(marginal_density_common_s(ERAKER, -0.1), float)
        assert marginal_density_common_s(ERAKER, np.array([-0.1, 0.0])).shape == (2,)


class TestLocalVol:
    def test_constant(self):
        eta = ConstantOne()
        assert np.all(eta(np.array([0.5, 2.0])) == 1.0)
        assert eta.m_eta == 1.0 and eta.lipschitz == 0.0

    def test_bounded_and_derivative(self):
        eta = BoundedLocalVol(lambda s: 1.0 + 0.5 * np.tanh(np.log(s)), m_eta=1.5, lipschitz=0.5, m_eta2=1.0)
        s = np.array([0.5, 1.0, 2.0])
        exact = 0.5 / np.cosh(np.log(s)) ** 2 / s
        np.testing.assert_allclose(eta.derivative(s), exact, rtol=1e-7)

    @pytest.mark.parametrize("func, bound", [(lambda s: 0.0 * s, 1.0), (lambda s: 2.0 + 0.0 * s, 1.0)])
    def test_bad_local_vol(self, func, bound):
        with pytest.raises(DomainError):
            BoundedLocalVol(func, m_eta=bound, lipschitz=0.0, m_eta2=0.0)
