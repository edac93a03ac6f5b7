"""Leading-order short-maturity coefficients for VIX and European options.

OTM prices behave like ``a(K) T`` with
``a(K) = lambda_s f_s(K) + lambda_c f_c(K) + lambda_v f_v(K)``; ATM prices like
``b sqrt(T)``. Two independent routes are provided for the OTM case:

* ``*_otm_asym``: the jump-integral representation evaluated by quadrature
  against the model densities (works for any local vol),
* ``*_otm_closed_form``: model specific reductions (2F1, Black-Scholes blocks,
  piecewise exponentials), valid for eta = 1 where noted.

Discounting is not applied: coefficients are limits of price / T.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, MoneynessError
from .jump_models import (
    CompensatorSet,
    ConstantOne,
    ErakerJump,
    ExponentialJump,
    FoldedNormalJump,
    KouJump,
    ModelSpec,
    NormalJump,
    compute_compensators,
    kou_marginal_coefficients,
    marginal_density_common_s,
)
from .special_math import QuadratureConfig, bs_call_block, bs_put_block, i1, integrate, norm_cdf

ATM_TOL = 1e-9

PRICER_QUAD = QuadratureConfig(abs_tol=1e-20, rel_tol=1e-11)
# inner integrals of nested schemes get a slightly tighter target
INNER_QUAD = QuadratureConfig(abs_tol=1e-22, rel_tol=1e-12)


class Underlying(str, enum.Enum):
    VIX = "vix"
    EQUITY = "equity"


class Kind(str, enum.Enum):
    CALL = "call"
    PUT = "put"


class Moneyness(str, enum.Enum):
    OTM = "otm"
    ATM = "atm"
    ITM = "itm"


class Order(str, enum.Enum):
    LINEAR_T = "T"
    SQRT_T = "sqrtT"


@dataclass(frozen=True)
class OptionSpec:
    underlying: Underlying
    kind: Kind
    strike: float
    maturity: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "underlying", Underlying(self.underlying))
        object.__setattr__(self, "kind", Kind(self.kind))
        if not self.strike > 0:
            raise DomainError(f"strike must be > 0, got {self.strike}")
        if self.maturity is not None and not self.maturity > 0:
            raise DomainError(f"maturity must be > 0, got {self.maturity}")


@dataclass(frozen=True)
class AsymCoefficient:
    total: float
    order: Order
    moneyness: Moneyness
    kind: Kind
    # (f_s, f_c, f_v); None for the sqrt(T) order
    parts: Optional[tuple[float, float, float]] = None
    # set when an ITM request was answered with the parity-opposite OTM coefficient
    extension: bool = False


@dataclass(frozen=True)
class BoundInputs:
    m_eta: float
    m_mu: float
    m_sigma: float
    lipschitz: float
    m_eta2: float
    tau: float

    def __post_init__(self):
        if min(self.m_eta, self.m_mu, self.m_sigma, self.lipschitz, self.m_eta2) < 0:
            raise DomainError("bound constants must be nonnegative")
        if not self.tau > 0:
            raise DomainError("tau must be > 0")


@dataclass(frozen=True)
class ProxyBounds:
    c1: float
    c2: float
    vix2_bound: float
    vix_bound: Optional[float]


# ---------------------------------------------------------------------------
# Moneyness
# ---------------------------------------------------------------------------

def atm_level(model: ModelSpec, underlying: Underlying, comps: CompensatorSet | None = None) -> float:
    """VIX: eta(S0)^2 V0 + kappa (compared with K^2). Equity: S0 (compared with K)."""
    d = model.diffusion
    if Underlying(underlying) is Underlying.EQUITY:
        return d.s0
    comps = comps or compute_compensators(model)
    eta0 = float(d.eta(d.s0))
    return eta0 * eta0 * d.v0 + comps.kappa


def atm_strike(model: ModelSpec, underlying: Underlying) -> float:
    level = atm_level(model, underlying)
    return math.sqrt(level) if Underlying(underlying) is Underlying.VIX else level


def classify_moneyness(model: ModelSpec, opt: OptionSpec, tol: float = ATM_TOL) -> Moneyness:
    level = atm_level(model, opt.underlying)
    x = opt.strike ** 2 if opt.underlying is Underlying.VIX else opt.strike
    if abs(x - level) <= tol * level:
        return Moneyness.ATM
    above = x > level
    if above == (opt.kind is Kind.CALL):
        return Moneyness.OTM
    return Moneyness.ITM


def _require(model, opt, wanted: Moneyness, underlying: Underlying):
    if opt.underlying is not underlying:
        raise DomainError(f"expected a {underlying.value} option, got {opt.underlying.value}")
    got = classify_moneyness(model, opt)
    if got is not wanted:
        raise MoneynessError(f"{opt.kind.value} at K={opt.strike} is {got.value}, pricer needs {wanted.value}")


def _coefficient(model, kind, parts) -> AsymCoefficient:
    lam = model.intensities
    f_s, f_c, f_v = (float(p) for p in parts)
    total = lam.lambda_s * f_s + lam.lambda_c * f_c + lam.lambda_v * f_v
    return AsymCoefficient(total, Order.LINEAR_T, Moneyness.OTM, kind, (f_s, f_c, f_v))


# ---------------------------------------------------------------------------
# VIX, OTM: generic jump integrals
# ---------------------------------------------------------------------------

def _signed_payoff(kind: Kind, value, strike):
    diff = value - strike if kind is Kind.CALL else strike - value
    return np.maximum(diff, 0.0)


def _payoff_range(kind: Kind, kink: float, lo: float, hi: float) -> tuple[float, float] | None:
    """Sub-interval of [lo, hi] where a monotone payoff with hinge at ``kink`` is positive."""
    if kind is Kind.CALL:
        lo = max(lo, kink)
    else:
        hi = min(hi, kink)
    return (lo, hi) if hi > lo else None


def _upper_tail(kink: float, lo: float, hi: float) -> tuple[float, float]:
    """Integration window for a call on a variance jump supported on [lo, hi].

    ``hi`` is a truncation point chosen for absolute accuracy. Deep OTM the
    kink approaches it and the neglected tail becomes large relative to the
    price, so the window keeps its full width beyond the kink.
    """
    start = max(lo, kink)
    return start, max(hi, start + (hi - lo))


def _vix_kink(model, comps, strike, eta_sq) -> float:
    """Log variance jump where sqrt(eta^2 V0 e^y + kappa) crosses the strike."""
    gap = strike * strike - comps.kappa
    if gap <= 0:
        return -math.inf
    return math.log(gap / (eta_sq * model.diffusion.v0))


def vix_otm_asym(model: ModelSpec, opt: OptionSpec, cfg: QuadratureConfig = PRICER_QUAD) -> AsymCoefficient:
    """OTM VIX coefficient from the jump integrals, by quadrature against the model densities."""
    _require(model, opt, Moneyness.OTM, Underlying.VIX)
    d = model.diffusion
    comps = compute_compensators(model)
    kappa, K, kind = comps.kappa, opt.strike, opt.kind
    const_eta = isinstance(d.eta, ConstantOne)
    eta0_sq = float(d.eta(d.s0)) ** 2

    def vix(x, y):
        eta = d.eta(d.s0 * np.exp(x))
        return np.sqrt(eta * eta * d.v0 * np.exp(y) + kappa)

    # asset-only jumps
    f_s = 0.0
    if model.idio_s is not None:
        dist = model.idio_s
        if dist.sigma == 0:
            f_s = float(_signed_payoff(kind, vix(np.array(dist.alpha), 0.0), K))
        else:
            lo, hi = dist.support()
            f_s, _ = integrate(lambda x: _signed_payoff(kind, vix(x, 0.0), K) * dist.pdf(x), lo, hi, cfg)

    # variance-only jumps
    f_v = 0.0
    if model.idio_v is not None:
        dist = model.idio_v
        kink = _vix_kink(model, comps, K, eta0_sq)
        lo, hi = dist.support()
        rng = _upper_tail(kink, lo, hi) if kind is Kind.CALL else _payoff_range(kind, kink, lo, hi)
        if rng is not None:
            f_v, _ = integrate(
                lambda y: _signed_payoff(kind, np.sqrt(eta0_sq * d.v0 * np.exp(y) + kappa), K) * dist.pdf(y),
                rng[0], rng[1], cfg)

    # common jumps: double integral over (residual z, variance jump y), x = loc + rho y + z
    f_c = 0.0
    cm = model.common
    if cm is not None:
        ylo, yhi = 0.0, cm.v_upper()
        if const_eta:
            kink = _vix_kink(model, comps, K, eta0_sq)
            rng = _upper_tail(kink, ylo, yhi) if kind is Kind.CALL else _payoff_range(kind, kink, ylo, yhi)
        else:
            rng = (ylo, yhi)
        if rng is not None:
            segs = cm.residual_segments()

            def inner(y):
                def integrand(z):
                    x = cm.loc_s + cm.rho_j * y[None, :] + z[:, None]
                    return _signed_payoff(kind, vix(x, y[None, :]), K) * cm.residual_pdf(z)[:, None]

                acc = 0.0
                for a, b in segs:
                    val, _ = integrate(integrand, a, b, INNER_QUAD)
                    acc = acc + val
                return acc * cm.v_pdf(y)

            f_c, _ = integrate(inner, rng[0], rng[1], cfg)
    return _coefficient(model, kind, (f_s, f_c, f_v))


# ---------------------------------------------------------------------------
# VIX, OTM: closed forms (eta = 1)
# ---------------------------------------------------------------------------

def _exp_vjump_call(eta: float, y0: float, v0: float, kappa: float, K: float) -> float:
    """int_{y0}^inf (sqrt(V0 e^y + kappa) - K) eta e^{-eta y} dy, y0 >= 0."""
    return math.exp(-eta * y0) * (eta * i1(kappa, v0 * math.exp(y0), eta) - K)


def vix_otm_closed_form(model: ModelSpec, opt: OptionSpec, cfg: QuadratureConfig = PRICER_QUAD,
                        tol: float = ATM_TOL) -> AsymCoefficient:
    """Closed-form OTM VIX coefficient for eta = 1.

    A strike exactly at the ATM level returns the right limit of the OTM
    call coefficient (y0 = 0), which is what the reference tables list for
    moneyness 1.00.
    """
    if opt.underlying is not Underlying.VIX:
        raise DomainError("vix_otm_closed_form needs a VIX option")
    d = model.diffusion
    if not isinstance(d.eta, ConstantOne):
        raise DomainError("VIX closed forms assume eta(x) = 1")
    moneyness = classify_moneyness(model, opt, tol)
    if moneyness is Moneyness.ITM:
        raise MoneynessError(f"VIX {opt.kind.value} at K={opt.strike} is ITM")
    comps = compute_compensators(model)
    kappa, K = comps.kappa, opt.strike
    if model.idio_v is not None and not isinstance(model.idio_v, ExponentialJump):
        raise DomainError("closed form supports exponential idiosyncratic variance jumps only")

    if opt.kind is Kind.PUT:
        if moneyness is Moneyness.ATM:
            raise MoneynessError("VIX put at the ATM level has no OTM coefficient")
        # every variance jump is >= 0 and the asset-jump term sits at the ATM level
        return _coefficient(model, opt.kind, (0.0, 0.0, 0.0))

    y0 = max(math.log((K * K - kappa) / d.v0), 0.0)
    f_v = 0.0
    if model.idio_v is not None:
        f_v = _exp_vjump_call(model.idio_v.eta, y0, d.v0, kappa, K)
    f_c = 0.0
    cm = model.common
    if isinstance(cm, (ErakerJump, KouJump)):
        f_c = _exp_vjump_call(cm.eta_cv, y0, d.v0, kappa, K)
    elif isinstance(cm, FoldedNormalJump):
        f_c, _ = integrate(lambda y: (np.sqrt(d.v0 * np.exp(y) + kappa) - K) * cm.v_pdf(y),
                           *_upper_tail(y0, 0.0, cm.v_upper()), cfg)
    elif cm is not None:
        raise DomainError(f"no closed form for common jump model {type(cm).__name__}")
    # f_s vanishes: with eta = 1 an asset jump leaves VIX at its ATM level
    return _coefficient(model, opt.kind, (0.0, f_c, f_v))


# ---------------------------------------------------------------------------
# VIX, ATM
# ---------------------------------------------------------------------------

def vix_atm_coefficient(model: ModelSpec) -> float:
    d = model.diffusion
    comps = compute_compensators(model)
    s0, v0 = d.s0, d.v0
    eta0 = float(d.eta(s0))
    deta0 = float(d.eta.derivative(s0))
    base = eta0 * eta0 * v0
    drift_term = eta0 * 0.5 * d.sigma_v * math.sqrt(v0) + deta0 * eta0 * s0 * v0 * d.rho
    orth_term = deta0 * eta0 * s0 * v0 * math.sqrt(max(1.0 - d.rho ** 2, 0.0))
    return (math.sqrt(base) / math.sqrt(base + comps.kappa) / math.sqrt(2 * math.pi)
            * math.hypot(drift_term, orth_term))


def vix_atm_asym(model: ModelSpec, opt: OptionSpec) -> AsymCoefficient:
    _require(model, opt, Moneyness.ATM, Underlying.VIX)
    # call and put share the same limit
    return AsymCoefficient(vix_atm_coefficient(model), Order.SQRT_T, Moneyness.ATM, opt.kind)


# ---------------------------------------------------------------------------
# European, OTM: generic
# ---------------------------------------------------------------------------

def _normal_idio_s(dist: NormalJump, kind: Kind, s0: float, K: float) -> float:
    """int (S0 e^x - K)^+ dP(x) (call) or the put analogue for a normal jump."""
    k = math.log(K / s0)
    a, s = dist.alpha, dist.sigma
    if s == 0:
        x = s0 * math.exp(a)
        return max(x - K, 0.0) if kind is Kind.CALL else max(K - x, 0.0)
    fwd = s0 * math.exp(a + 0.5 * s * s)
    if kind is Kind.CALL:
        return fwd * norm_cdf((-k + a + s * s) / s) - K * norm_cdf((-k + a) / s)
    return K * norm_cdf((k - a) / s) - fwd * norm_cdf((k - a - s * s) / s)


def euro_otm_asym(model: ModelSpec, opt: OptionSpec, cfg: QuadratureConfig = PRICER_QUAD) -> AsymCoefficient:
    """OTM European coefficient: payoff integrated against the asset-jump marginals."""
    _require(model, opt, Moneyness.OTM, Underlying.EQUITY)
    s0, K, kind = model.diffusion.s0, opt.strike, opt.kind
    k = math.log(K / s0)

    def payoff(x):
        return _signed_payoff(kind, s0 * np.exp(x), K)

    f_s = 0.0
    if model.idio_s is not None:
        dist = model.idio_s
        if dist.sigma == 0:
            f_s = float(payoff(np.array(dist.alpha)))
        else:
            rng = _payoff_range(kind, k, *dist.support())
            if rng is not None:
                f_s, _ = integrate(lambda x: payoff(x) * dist.pdf(x), rng[0], rng[1], cfg)

    f_c = 0.0
    cm = model.common
    if cm is not None:
        rng = _payoff_range(kind, k, *cm.s_support())
        if rng is not None:
            pts = [cm.loc_s] if isinstance(cm, KouJump) else []
            f_c, _ = integrate(
                lambda x: payoff(x) * marginal_density_common_s(cm, x, cfg=INNER_QUAD),
                rng[0], rng[1], cfg, points=pts)
    # variance-only jumps never move the asset
    return _coefficient(model, kind, (f_s, f_c, 0.0))


# ---------------------------------------------------------------------------
# European, OTM: closed forms
# ---------------------------------------------------------------------------

def _kou_call(s0: float, k: float, a: float) -> float:
    """int_k^inf (S0 e^x - K) a e^{-a x} dx with K = S0 e^k."""
    return s0 * math.exp(-(a - 1.0) * k) / (a - 1.0)


def _kou_put(s0: float, k: float, a: float) -> float:
    """int_{-inf}^k (K - S0 e^x) a e^{a x} dx with K = S0 e^k."""
    return s0 * math.exp((a + 1.0) * k) / (a + 1.0)


def _kou_common_closed(cm: KouJump, kind: Kind, s0: float, K: float) -> float:
    if not cm.rho_j < 0:
        raise DomainError("Kou closed form assumes rho_j < 0")
    if not cm.loc_s < 0:
        raise DomainError("Kou closed form assumes loc_s < 0")
    c_r, c_1l, c_2l = kou_marginal_coefficients(cm)
    a1 = cm.eta_cv / abs(cm.rho_j)
    es = cm.eta_cs
    loc = cm.loc_s
    k = math.log(K / s0)
    if kind is Kind.CALL:
        # k > 0 > loc: only the right branch of the marginal is above the strike
        return c_r * _kou_call(s0, k, es)
    if k <= loc:
        return c_1l * _kou_put(s0, k, a1) + c_2l * _kou_put(s0, k, es)
    # loc < k < 0: left branch on (-inf, loc], right branch on (loc, k]
    spread = s0 * (math.exp(k) - math.exp(loc))
    left = (c_1l * (_kou_put(s0, loc, a1) + spread * math.exp(a1 * loc))
            + c_2l * (_kou_put(s0, loc, es) + spread * math.exp(es * loc)))
    right = c_r * (_kou_call(s0, k, es) - _kou_call(s0, loc, es) + spread * math.exp(-es * loc))
    return left + right


def euro_otm_closed_form(model: ModelSpec, opt: OptionSpec, cfg: QuadratureConfig = PRICER_QUAD,
                         bs_forward: str = "mean", allow_atm: bool = False) -> AsymCoefficient:
    """OTM European coefficient from model specific reductions.

    For normal residuals (Eraker, folded normal) the common-jump term is a
    Black-Scholes block integrated over the variance jump. ``bs_forward``
    picks the forward fed to the block: "mean" uses the conditional mean
    S0 exp(loc + rho y + sigma_cs^2 / 2) and equals the jump integral;
    "median" drops the convexity term and is kept only to regenerate the
    reference tables, which were computed that way.

    ``allow_atm`` accepts K = S0 and returns the one-sided limit of the OTM
    coefficient there (the leading price term at K = S0 is of order sqrt(T)).
    """
    at_atm = (allow_atm and opt.underlying is Underlying.EQUITY
              and classify_moneyness(model, opt) is Moneyness.ATM)
    if not at_atm:
        _require(model, opt, Moneyness.OTM, Underlying.EQUITY)
    if bs_forward not in ("mean", "median"):
        raise ValueError(f"bs_forward must be 'mean' or 'median', got {bs_forward!r}")
    s0, K, kind = model.diffusion.s0, opt.strike, opt.kind

    f_s = 0.0
    if model.idio_s is not None:
        if not isinstance(model.idio_s, NormalJump):
            raise DomainError("closed form supports normal idiosyncratic asset jumps only")
        f_s = _normal_idio_s(model.idio_s, kind, s0, K)

    f_c = 0.0
    cm = model.common
    if isinstance(cm, KouJump):
        f_c = _kou_common_closed(cm, kind, s0, K)
    elif isinstance(cm, (ErakerJump, FoldedNormalJump)):
        block = bs_call_block if kind is Kind.CALL else bs_put_block
        shift = cm.loc_s + (0.5 * cm.sigma_cs ** 2 if bs_forward == "mean" else 0.0)
        f_c, _ = integrate(
            lambda y: cm.v_pdf(y) * block(K, s0 * np.exp(shift + cm.rho_j * y), cm.sigma_cs),
            0.0, cm.v_upper(), cfg)
    elif cm is not None:
        raise DomainError(f"no closed form for common jump model {type(cm).__name__}")
    return _coefficient(model, kind, (f_s, f_c, 0.0))


# ---------------------------------------------------------------------------
# European, ATM
# ---------------------------------------------------------------------------

def euro_atm_coefficient(model: ModelSpec) -> float:
    d = model.diffusion
    return float(d.eta(d.s0)) * math.sqrt(d.v0) / math.sqrt(2 * math.pi)


def euro_atm_asym(model: ModelSpec, opt: OptionSpec) -> AsymCoefficient:
    _require(model, opt, Moneyness.ATM, Underlying.EQUITY)
    return AsymCoefficient(euro_atm_coefficient(model), Order.SQRT_T, Moneyness.ATM, opt.kind)


# ---------------------------------------------------------------------------
# Dispatcher
# ---------------------------------------------------------------------------

def asym_coefficient(model: ModelSpec, opt: OptionSpec, method: str = "closed",
                     bs_forward: str = "mean") -> AsymCoefficient:
    """Leading coefficient for any strike.

    method: "closed" (model closed forms) or "generic" (jump integrals).
    ITM strikes get the OTM coefficient of the opposite option with
    ``extension=True``; that value is not a short-maturity limit of the ITM
    price itself.
    """
    if method not in ("closed", "generic"):
        raise ValueError(f"unknown method {method!r}")
    m = classify_moneyness(model, opt)
    vix = opt.underlying is Underlying.VIX
    if m is Moneyness.ATM:
        return vix_atm_asym(model, opt) if vix else euro_atm_asym(model, opt)
    target = opt
    if m is Moneyness.ITM:
        other = Kind.PUT if opt.kind is Kind.CALL else Kind.CALL
        target = OptionSpec(opt.underlying, other, opt.strike, opt.maturity)
    if vix:
        out = (vix_otm_closed_form if method == "closed" else vix_otm_asym)(model, target)
    elif method == "closed":
        out = euro_otm_closed_form(model, target, bs_forward=bs_forward)
    else:
        out = euro_otm_asym(model, target)
    if m is Moneyness.ITM:
        return AsymCoefficient(out.total, out.order, Moneyness.ITM, opt.kind, out.parts, extension=True)
    return out


# ---------------------------------------------------------------------------
# VIX proxy error bounds
# ---------------------------------------------------------------------------

def _v_moments(model: ModelSpec) -> tuple[float, float, float, float]:
    """(E e^{Y^V}, E e^{2Y^V}, E e^{Y^{C,V}}, E e^{2Y^{C,V}}); 1 where a jump type is absent."""
    ev1 = ev2 = ec1 = ec2 = 1.0
    if model.idio_v is not None:
        ev1, ev2 = model.idio_v.exp_moment(1.0), model.idio_v.exp_moment(2.0)
    if model.common is not None:
        ec1, ec2 = model.common.v_exp_moment(1.0), model.common.v_exp_moment(2.0)
    if not all(math.isfinite(v) for v in (ev1, ev2, ec1, ec2)):
        raise DomainError("proxy bounds need finite E[e^{2Y}] for both variance jump types "
                          "(eta_V > 2, eta_cv > 2)")
    return ev1, ev2, ec1, ec2


def proxy_error_bounds(model: ModelSpec, bounds: BoundInputs, T: float, *, with_vix: bool = True) -> ProxyBounds:
    """Bounds on E|VIX_T^2 - proxy| and E|VIX_T - sqrt(proxy)| for a window ``bounds.tau``."""
    d = model.diffusion
    lam = model.intensities
    comps = compute_compensators(model)
    ev1, ev2, ec1, ec2 = _v_moments(model)
    tau = bounds.tau
    m_eta, m_mu, m_sig = bounds.m_eta, bounds.m_mu, bounds.m_sigma
    drift = d.r - d.q - lam.lambda_s * comps.comp_s - lam.lambda_c * comps.comp_cs
    c1 = 2.0 * bounds.lipschitz * m_eta * abs(drift) * math.exp(abs(d.r - d.q) * tau) * tau

    grow = (math.exp(lam.lambda_v * tau * (ev2 - 1.0)) * math.exp(lam.lambda_c * tau * (ec2 - 1.0))
            * math.exp(2.0 * tau * m_mu) * math.exp(4.0 * tau * m_sig ** 2))
    shrink = (math.exp(-lam.lambda_v * tau * (ev1 - 1.0)) * math.exp(-lam.lambda_c * tau * (ec1 - 1.0))
              * math.exp(-tau * m_mu - 0.5 * tau * m_sig ** 2))
    bracket = max(grow + 1.0 - 2.0 * shrink, 0.0)
    c2 = (m_eta ** 2 * math.sqrt(bracket)
          + 0.5 * tau * bounds.m_eta2 * m_eta ** 2 * math.exp(lam.lambda_v * tau * comps.comp_v)
          * math.exp(lam.lambda_c * tau * comps.comp_cv) * math.exp(tau * m_mu))
    vix2 = (c1 * d.s0 * math.exp((d.r - d.q) * T)
            + c2 * d.v0 * math.exp(lam.lambda_v * T * comps.comp_v) * math.exp(lam.lambda_c * T * comps.comp_cv)
            * math.exp(T * m_mu)
            + (lam.lambda_s + lam.lambda_c) * m_eta ** 2 * tau)
    vix = None
    if with_vix:
        if not comps.kappa > 0:
            raise DomainError("the VIX-level bound divides by sqrt(kappa) and needs kappa > 0")
        vix = vix2 / math.sqrt(comps.kappa)
    return ProxyBounds(c1, c2, vix2, vix)
