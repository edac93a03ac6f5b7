"""Model description: diffusion coefficients, jump intensities and jump-size laws.

Naming: ``comp_*`` are compensators E[e^Y] - 1, ``mean_*`` are E[Y], and
``loc_s`` is the location of the common asset jump (the conditional mean of
the asset jump given a zero variance jump).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .errors import DomainError
from .special_math import DEFAULT_QUAD, QuadratureConfig, integrate, norm_cdf, norm_pdf

# tail truncation used wherever a jump density is integrated numerically
EXP_TAIL = 40.0
GAUSS_TAIL = 12.0


# ---------------------------------------------------------------------------
# Local volatility
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantOne:
    """eta(x) = 1 for all x."""

    def __call__(self, s):
        return np.ones_like(np.asarray(s, dtype=float))

    def derivative(self, s):
        return np.zeros_like(np.asarray(s, dtype=float))

    @property
    def m_eta(self) -> float:
        return 1.0

    @property
    def lipschitz(self) -> float:
        return 0.0

    @property
    def m_eta2(self) -> float:
        return 0.0


@dataclass(frozen=True)
class BoundedLocalVol:
    """A user supplied eta(x) with its declared regularity constants.

    ``func`` must accept numpy arrays. ``deriv`` is optional; without it the
    derivative is taken by central differences. The positivity and the sup
    bound are checked on a log-spaced grid at construction.
    """

    func: Callable[[np.ndarray], np.ndarray]
    m_eta: float
    lipschitz: float
    m_eta2: float
    deriv: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        grid = np.logspace(-4, 4, 801)
        vals = np.asarray(self.func(grid), dtype=float)
        if np.any(~np.isfinite(vals)) or np.any(vals <= 0):
            raise DomainError("local vol eta(x) must be finite and > 0 for x > 0")
        if np.any(vals > self.m_eta * (1 + 1e-12)):
            raise DomainError(f"local vol exceeds declared bound M_eta={self.m_eta}")
        if min(self.m_eta, self.lipschitz, self.m_eta2) < 0:
            raise DomainError("local vol bound constants must be nonnegative")

    def __call__(self, s):
        return np.asarray(self.func(np.asarray(s, dtype=float)), dtype=float)

    def derivative(self, s):
        s = np.asarray(s, dtype=float)
        if self.deriv is not None:
            return np.asarray(self.deriv(s), dtype=float)
        h = 1e-6 * np.maximum(np.abs(s), 1e-8)
        return (self(s + h) - self(s - h)) / (2 * h)


LocalVolSpec = Union[ConstantOne, BoundedLocalVol]


@dataclass(frozen=True)
class DiffusionParams:
    s0: float
    v0: float
    r: float = 0.0
    q: float = 0.0
    rho: float = 0.0
    mu_v: float = 0.0
    sigma_v: float = 0.0
    eta: LocalVolSpec = field(default_factory=ConstantOne)

    def __post_init__(self):
        if not self.s0 > 0:
            raise DomainError(f"s0 must be > 0, got {self.s0}")
        if not self.v0 > 0:
            raise DomainError(f"v0 must be > 0, got {self.v0}")
        if not abs(self.rho) <= 1:
            raise DomainError(f"|rho| must be <= 1, got {self.rho}")
        if not self.sigma_v >= 0:
            raise DomainError(f"sigma_v must be >= 0, got {self.sigma_v}")


@dataclass(frozen=True)
class JumpIntensities:
    lambda_s: float = 0.0
    lambda_v: float = 0.0
    lambda_c: float = 0.0

    def __post_init__(self):
        for name in ("lambda_s", "lambda_v", "lambda_c"):
            if not getattr(self, name) >= 0:
                raise DomainError(f"{name} must be >= 0")


# ---------------------------------------------------------------------------
# Idiosyncratic jump sizes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormalJump:
    """Y = alpha + sigma Z. sigma = 0 is accepted as a point mass."""

    alpha: float
    sigma: float

    def __post_init__(self):
        if not self.sigma >= 0:
            raise DomainError(f"normal jump sigma must be >= 0, got {self.sigma}")

    def exp_moment(self, t: float = 1.0) -> float:
        return math.exp(t * self.alpha + 0.5 * t * t * self.sigma ** 2)

    def mean(self) -> float:
        return self.alpha

    def pdf(self, x):
        return norm_pdf((np.asarray(x) - self.alpha) / self.sigma) / self.sigma

    def support(self) -> tuple[float, float]:
        w = GAUSS_TAIL * self.sigma
        return self.alpha - w, self.alpha + w

    def sample(self, rng: np.random.Generator, size=None):
        return self.alpha + self.sigma * rng.standard_normal(size)


@dataclass(frozen=True)
class ExponentialJump:
    """Y ~ Exp(eta), mean 1/eta. eta > 1 keeps E[e^Y] finite."""

    eta: float

    def __post_init__(self):
        if not self.eta > 1:
            raise DomainError(f"exponential jump needs eta > 1 for a finite compensator, got {self.eta}")

    def exp_moment(self, t: float = 1.0) -> float:
        if t >= self.eta:
            return math.inf
        return self.eta / (self.eta - t)

    def mean(self) -> float:
        return 1.0 / self.eta

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x >= 0, self.eta * np.exp(-self.eta * np.abs(x)), 0.0)

    def support(self) -> tuple[float, float]:
        return 0.0, EXP_TAIL / self.eta

    def sample(self, rng: np.random.Generator, size=None):
        return rng.exponential(1.0 / self.eta, size)


MarginalJumpDist = Optional[Union[NormalJump, ExponentialJump]]


# ---------------------------------------------------------------------------
# Common (simultaneous) jumps
#
# All three laws share the structure
#     Y^{C,V} = variance jump >= 0,
#     Y^{C,S} = loc_s + rho_j Y^{C,V} + R,  R independent of Y^{C,V},
# so each class only describes the variance-jump law and the residual R.
# ---------------------------------------------------------------------------

class _CommonJump:
    loc_s: float
    rho_j: float

    # variance jump ------------------------------------------------------
    def v_pdf(self, y):
        raise NotImplementedError

    def v_exp_moment(self, t: float = 1.0) -> float:
        raise NotImplementedError

    def v_mean(self) -> float:
        raise NotImplementedError

    def v_upper(self) -> float:
        """Truncation point for integrals over the variance jump."""
        raise NotImplementedError

    def sample_v(self, rng, size):
        raise NotImplementedError

    # residual of the asset jump -----------------------------------------
    def residual_pdf(self, z):
        raise NotImplementedError

    def residual_exp_moment(self) -> float:
        raise NotImplementedError

    def residual_mean(self) -> float:
        raise NotImplementedError

    def residual_segments(self) -> list[tuple[float, float]]:
        """Truncated support of R split at its non-smooth points."""
        raise NotImplementedError

    def sample_residual(self, rng, size):
        raise NotImplementedError

    # derived --------------------------------------------------------------
    def s_exp_moment(self) -> float:
        return math.exp(self.loc_s) * self.v_exp_moment(self.rho_j) * self.residual_exp_moment()

    def s_mean(self) -> float:
        return self.loc_s + self.rho_j * self.v_mean() + self.residual_mean()

    def joint_pdf(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return self.v_pdf(y) * self.residual_pdf(x - self.loc_s - self.rho_j * y)

    def s_support(self) -> tuple[float, float]:
        """Range of the asset jump once both tails are truncated."""
        segs = self.residual_segments()
        ylo, yhi = 0.0, self.v_upper()
        shift = sorted((self.rho_j * ylo, self.rho_j * yhi))
        return self.loc_s + shift[0] + segs[0][0], self.loc_s + shift[1] + segs[-1][1]


def _check_positive(name: str, value: float):
    if not value > 0:
        raise DomainError(f"{name} must be > 0, got {value}")


@dataclass(frozen=True)
class ErakerJump(_CommonJump):
    """Exp(eta_cv) variance jump; normal residual with stdev sigma_cs."""

    eta_cv: float
    loc_s: float
    rho_j: float
    sigma_cs: float

    def __post_init__(self):
        if not self.eta_cv > max(1.0, self.rho_j):
            raise DomainError(
                f"eraker: need eta_cv > max(1, rho_j) for finite compensators, got eta_cv={self.eta_cv}"
            )
        if not self.sigma_cs >= 0:
            raise DomainError("eraker: sigma_cs must be >= 0")

    def v_pdf(self, y):
        y = np.asarray(y, dtype=float)
        return np.where(y >= 0, self.eta_cv * np.exp(-self.eta_cv * np.abs(y)), 0.0)

    def v_exp_moment(self, t=1.0):
        return self.eta_cv / (self.eta_cv - t) if t < self.eta_cv else math.inf

    def v_mean(self):
        return 1.0 / self.eta_cv

    def v_upper(self):
        return EXP_TAIL / self.eta_cv

    def sample_v(self, rng, size):
        return rng.exponential(1.0 / self.eta_cv, size)

    def residual_pdf(self, z):
        return norm_pdf(np.asarray(z) / self.sigma_cs) / self.sigma_cs

    def residual_exp_moment(self):
        return math.exp(0.5 * self.sigma_cs ** 2)

    def residual_mean(self):
        return 0.0

    def residual_segments(self):
        w = GAUSS_TAIL * self.sigma_cs
        return [(-w, w)]

    def sample_residual(self, rng, size):
        return self.sigma_cs * rng.standard_normal(size)


@dataclass(frozen=True)
class KouJump(_CommonJump):
    """Exp(eta_cv) variance jump; residual +Exp(eta_cs) w.p. alpha, -Exp(eta_cs) otherwise."""

    eta_cv: float
    eta_cs: float
    loc_s: float
    rho_j: float
    alpha: float

    def __post_init__(self):
        if not self.eta_cv > max(1.0, self.rho_j):
            raise DomainError(
                f"kou: need eta_cv > max(1, rho_j) for finite compensators, got eta_cv={self.eta_cv}"
            )
        if not self.eta_cs > 1:
            raise DomainError(f"kou: need eta_cs > 1, got {self.eta_cs}")
        if not 0 <= self.alpha <= 1:
            raise DomainError(f"kou: alpha must be in [0, 1], got {self.alpha}")

    v_pdf = ErakerJump.v_pdf
    v_exp_moment = ErakerJump.v_exp_moment
    v_mean = ErakerJump.v_mean
    v_upper = ErakerJump.v_upper
    sample_v = ErakerJump.sample_v

    def residual_pdf(self, z):
        z = np.asarray(z, dtype=float)
        e = self.eta_cs
        return np.where(z >= 0, self.alpha * e * np.exp(-e * np.abs(z)),
                        (1 - self.alpha) * e * np.exp(-e * np.abs(z)))

    def residual_exp_moment(self):
        e = self.eta_cs
        return e * (e + 2 * self.alpha - 1) / (e * e - 1)

    def residual_mean(self):
        return (2 * self.alpha - 1) / self.eta_cs

    def residual_segments(self):
        w = EXP_TAIL / self.eta_cs
        return [(-w, 0.0), (0.0, w)]

    def sample_residual(self, rng, size):
        mag = rng.exponential(1.0 / self.eta_cs, size)
        up = rng.random(size) < self.alpha
        return np.where(up, mag, -mag)


@dataclass(frozen=True)
class FoldedNormalJump(_CommonJump):
    """sigma_cv |Z| variance jump; normal residual with stdev sigma_cs."""

    sigma_cv: float
    loc_s: float
    rho_j: float
    sigma_cs: float

    def __post_init__(self):
        _check_positive("folded normal sigma_cv", self.sigma_cv)
        if not self.sigma_cs >= 0:
            raise DomainError("folded normal: sigma_cs must be >= 0")

    def v_pdf(self, y):
        y = np.asarray(y, dtype=float)
        s = self.sigma_cv
        return np.where(y >= 0, 2.0 * norm_pdf(y / s) / s, 0.0)

    def v_exp_moment(self, t=1.0):
        s = self.sigma_cv
        return 2.0 * math.exp(0.5 * t * t * s * s) * norm_cdf(t * s)

    def v_mean(self):
        return math.sqrt(2.0 / math.pi) * self.sigma_cv

    def v_upper(self):
        return GAUSS_TAIL * self.sigma_cv

    def sample_v(self, rng, size):
        return self.sigma_cv * np.abs(rng.standard_normal(size))

    residual_pdf = ErakerJump.residual_pdf
    residual_exp_moment = ErakerJump.residual_exp_moment
    residual_mean = ErakerJump.residual_mean
    residual_segments = ErakerJump.residual_segments
    sample_residual = ErakerJump.sample_residual


CommonJumpModel = Optional[Union[ErakerJump, KouJump, FoldedNormalJump]]


# ---------------------------------------------------------------------------
# Full model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelSpec:
    diffusion: DiffusionParams
    intensities: JumpIntensities = field(default_factory=JumpIntensities)
    idio_s: MarginalJumpDist = None
    idio_v: MarginalJumpDist = None
    common: CommonJumpModel = None
    kappa_override: Optional[float] = None

    def __post_init__(self):
        lam = self.intensities
        if lam.lambda_s > 0 and self.idio_s is None:
            raise DomainError("lambda_s > 0 needs an idio_s distribution")
        if lam.lambda_v > 0 and self.idio_v is None:
            raise DomainError("lambda_v > 0 needs an idio_v distribution")
        if lam.lambda_c > 0 and self.common is None:
            raise DomainError("lambda_c > 0 needs a common jump model")
        if self.kappa_override is not None and not self.kappa_override >= 0:
            raise DomainError("kappa_override must be >= 0")

    def replace(self, **changes) -> "ModelSpec":
        import dataclasses

        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class CompensatorSet:
    comp_s: float
    comp_v: float
    comp_cs: float
    comp_cv: float
    mean_s: float
    mean_cs: float
    kappa: float
    # kappa from the compensator formula, before any override
    kappa_formula: float


def compute_compensators(model: ModelSpec) -> CompensatorSet:
    lam = model.intensities
    comp_s = model.idio_s.exp_moment(1.0) - 1.0 if model.idio_s is not None else 0.0
    mean_s = model.idio_s.mean() if model.idio_s is not None else 0.0
    comp_v = model.idio_v.exp_moment(1.0) - 1.0 if model.idio_v is not None else 0.0
    if model.common is not None:
        comp_cs = model.common.s_exp_moment() - 1.0
        comp_cv = model.common.v_exp_moment(1.0) - 1.0
        mean_cs = model.common.s_mean()
    else:
        comp_cs = comp_cv = mean_cs = 0.0
    kappa = 2.0 * lam.lambda_s * (comp_s - mean_s) + 2.0 * lam.lambda_c * (comp_cs - mean_cs)
    # e^x - 1 - x >= 0; only rounding can push this below zero
    kappa = max(kappa, 0.0)
    effective = kappa if model.kappa_override is None else float(model.kappa_override)
    return CompensatorSet(comp_s, comp_v, comp_cs, comp_cv, mean_s, mean_cs, effective, kappa)


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def sample_common_jump(model: CommonJumpModel, rng: np.random.Generator, size=None):
    """Draw (dx, dy): log-asset and log-variance jump sizes of a common jump."""
    if model is None:
        raise DomainError("no common jump model to sample from")
    dy = model.sample_v(rng, size)
    dx = model.loc_s + model.rho_j * dy + model.sample_residual(rng, size)
    return dx, dy


def sample_idio_jump(dist: MarginalJumpDist, rng: np.random.Generator, size=None):
    if dist is None:
        raise DomainError("no jump distribution to sample from")
    return dist.sample(rng, size)


# ---------------------------------------------------------------------------
# Marginal density of the common asset jump
# ---------------------------------------------------------------------------

def kou_marginal_coefficients(model: KouJump) -> tuple[float, float, float]:
    """(c_R, c_1L, c_2L) of the piecewise-exponential asset-jump marginal (rho_j < 0)."""
    if not model.rho_j < 0:
        raise DomainError("kou marginal closed form needs rho_j < 0")
    a = abs(model.rho_j)
    ev, es, loc, al = model.eta_cv, model.eta_cs, model.loc_s, model.alpha
    gap = ev - es * a
    if abs(gap) <= 1e-12 * ev:
        raise DomainError(f"kou marginal is singular when eta_cv == eta_cs*|rho_j| ({ev} vs {es * a})")
    c_r = al * ev / (ev + es * a) * math.exp(es * loc)
    c_1l = (al * es * a / (ev + es * a) - (1 - al) * es * a / gap) * math.exp(-ev / a * loc)
    c_2l = (1 - al) * ev / gap * math.exp(-es * loc)
    return c_r, c_1l, c_2l


def _kou_marginal_closed(model: KouJump, x: np.ndarray) -> np.ndarray:
    c_r, c_1l, c_2l = kou_marginal_coefficients(model)
    a1 = model.eta_cv / abs(model.rho_j)
    es = model.eta_cs
    right = c_r * es * np.exp(-es * x)
    with np.errstate(over="ignore"):
        left = c_1l * a1 * np.exp(a1 * np.minimum(x, model.loc_s)) + c_2l * es * np.exp(es * np.minimum(x, model.loc_s))
    return np.where(x > model.loc_s, right, left)


def _marginal_quadrature(model, x: np.ndarray, cfg: QuadratureConfig) -> np.ndarray:
    ymax = model.v_upper()
    if isinstance(model, KouJump):
        # residual has a kink at x - loc - rho y = 0, different for each x
        out = np.empty_like(x)
        for i, xi in enumerate(x):
            pts = []
            if model.rho_j != 0:
                yk = (xi - model.loc_s) / model.rho_j
                if 0 < yk < ymax:
                    pts.append(yk)
            out[i], _ = integrate(lambda y: model.joint_pdf(xi, y), 0.0, ymax, cfg, points=pts)
        return out
    val, _ = integrate(lambda y: model.joint_pdf(x[None, :], y[:, None]), 0.0, ymax, cfg)
    return np.asarray(val)


def marginal_density_common_s(model: CommonJumpModel, x, *, method: str = "auto",
                              cfg: QuadratureConfig = DEFAULT_QUAD):
    """Density of the common asset jump Y^{C,S} at ``x``.

    method: "auto" uses the piecewise closed form for Kou with rho_j < 0 and
    quadrature over the variance jump otherwise; "closed" insists on the
    closed form; "quadrature" forces the numerical route.
    """
    if model is None:
        raise DomainError("no common jump model")
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if method not in ("auto", "closed", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    use_closed = isinstance(model, KouJump) and (
        method == "closed" or (method == "auto" and model.rho_j < 0
                               and abs(model.eta_cv - model.eta_cs * abs(model.rho_j)) > 1e-12 * model.eta_cv)
    )
    if method == "closed" and not isinstance(model, KouJump):
        raise DomainError("closed-form marginal is only available for the Kou model")
    if use_closed:
        out = _kou_marginal_closed(model, xa)
    else:
        out = _marginal_quadrature(model, xa, cfg)
    out = np.maximum(out, 0.0)
    return float(out[0]) if np.ndim(x) == 0 else out
