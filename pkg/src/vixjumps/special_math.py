"""Numerical kernels: normal CDF, the 2F1 needed for VIX call integrals,
Black-Scholes building blocks and adaptive Gauss-Legendre quadrature."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import NumericError

_SQRT2 = math.sqrt(2.0)


def norm_cdf(x):
    """Standard normal CDF. Accepts scalars or arrays."""
    if np.ndim(x) == 0:
        return 0.5 * math.erfc(-float(x) / _SQRT2)
    from scipy.special import erfc

    return 0.5 * erfc(-np.asarray(x, dtype=float) / _SQRT2)


def norm_pdf(x):
    return np.exp(-0.5 * np.square(x)) / math.sqrt(2.0 * math.pi)


# ---------------------------------------------------------------------------
# Gauss hypergeometric function
# ---------------------------------------------------------------------------

def hyp2f1_series(a: float, b: float, c: float, z: float, *, max_terms: int = 500,
                  rtol: float = 1e-16) -> float:
    """Plain power series of 2F1(a, b; c; z) for |z| < 1 (or z = 1 when c - a - b > 0).

    Raises NumericError if the relative size of the last term does not drop
    below ``rtol`` within ``max_terms`` terms.
    """
    if z == 0.0:
        return 1.0
    total = 1.0
    term = 1.0
    for n in range(max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        total += term
        if term == 0.0 or abs(term) <= rtol * abs(total):
            return total
    raise NumericError(
        f"2F1({a}, {b}; {c}; {z}) series did not converge in {max_terms} terms "
        f"(last term {term:.3e}, partial sum {total:.17g})"
    )


def hyp2f1_vix(z: float, eta: float, *, max_terms: int = 500) -> float:
    """2F1(-1/2, eta - 1/2; eta + 1/2; z) for z <= 0, eta > 1/2.

    The Pfaff transformation maps z <= 0 onto w = z/(z-1) in [0, 1):

        2F1(a, b; c; z) = (1 - z)^(-a) 2F1(a, c - b; c; w)

    and here c - b = 1, so the transformed series has a simple ratio. It is
    summed directly for w <= 1/2; closer to 1 scipy's 2F1 is used.
    """
    if z > 0.0:
        raise ValueError(f"hyp2f1_vix needs z <= 0, got {z}")
    if not eta > 0.5:
        raise ValueError(f"hyp2f1_vix needs eta > 1/2, got {eta}")
    if z == 0.0:
        return 1.0
    w = z / (z - 1.0)
    if w <= 0.5:
        return math.sqrt(1.0 - z) * hyp2f1_series(-0.5, 1.0, eta + 0.5, w, max_terms=max_terms)
    # near w = 1 the terms only decay like n^-(eta+1); scipy's implementation
    # switches to the 1 - w expansion there
    from scipy.special import hyp2f1

    val = float(hyp2f1(-0.5, 1.0, eta + 0.5, w))
    if not math.isfinite(val):
        raise NumericError(f"2F1(-0.5, 1; {eta + 0.5}; {w}) is not finite")
    return math.sqrt(1.0 - z) * val


def i1(a: float, b: float, eta: float) -> float:
    """I1(a, b, eta) = int_0^inf sqrt(b e^u + a) e^(-eta u) du.

    Closed form 2 sqrt(b) / (2 eta - 1) * 2F1(-1/2, eta - 1/2; eta + 1/2; -a/b).
    """
    if a < 0.0 or b <= 0.0:
        raise ValueError(f"i1 needs a >= 0 and b > 0, got a={a}, b={b}")
    return 2.0 * math.sqrt(b) / (2.0 * eta - 1.0) * hyp2f1_vix(-a / b, eta)


# ---------------------------------------------------------------------------
# Black-Scholes blocks (log-normal with total stdev v, forward F)
# ---------------------------------------------------------------------------

def bs_call_block(K, F, v):
    """F N(d1) - K N(d2) with d1,2 = -log(K/F)/v +- v/2.

    v = 0 collapses to the intrinsic value (F - K)^+.
    """
    K = np.asarray(K, dtype=float)
    F = np.asarray(F, dtype=float)
    if np.any(v < 0):
        raise ValueError("bs block needs v >= 0")
    if np.all(v == 0):
        out = np.maximum(F - K, 0.0)
    else:
        d = -np.log(K / F) / v
        out = F * norm_cdf(d + 0.5 * v) - K * norm_cdf(d - 0.5 * v)
    return float(out) if out.ndim == 0 else out


def bs_put_block(K, F, v):
    """K N(-d2) - F N(-d1); the put counterpart of :func:`bs_call_block`."""
    K = np.asarray(K, dtype=float)
    F = np.asarray(F, dtype=float)
    if np.any(v < 0):
        raise ValueError("bs block needs v >= 0")
    if np.all(v == 0):
        out = np.maximum(K - F, 0.0)
    else:
        d = np.log(K / F) / v
        out = K * norm_cdf(d + 0.5 * v) - F * norm_cdf(d - 0.5 * v)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Adaptive quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-14
    rel_tol: float = 1e-11
    max_subdivisions: int = 2000
    # semi-infinite ranges are cut at tail_cutoff / decay_rate
    tail_cutoff: float = 40.0
    order: int = 20

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if self.order < 15:
            raise ValueError("panel order must be >= 15")


DEFAULT_QUAD = QuadratureConfig()

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    rule = _GL_CACHE.get(order)
    if rule is None:
        rule = np.polynomial.legendre.leggauss(order)
        _GL_CACHE[order] = rule
    return rule


def _panel(f, a: float, b: float, nodes, weights):
    half = 0.5 * (b - a)
    x = a + half * (nodes + 1.0)
    fx = np.asarray(f(x), dtype=float)
    # f may be vector valued: shape (n,) or (n, m)
    return half * np.tensordot(weights, fx, axes=(0, 0))


def integrate(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
              cfg: QuadratureConfig = DEFAULT_QUAD, *, points: Sequence[float] = (),
              decay_rate: float | None = None) -> tuple[np.ndarray | float, float]:
    """Adaptive Gauss-Legendre integration of ``f`` over [a, b].

    ``f`` is called with a 1-D array of nodes and returns either an array of
    the same length or a 2-D array (nodes x components); in the second case
    every component is integrated and must meet the tolerance separately.

    An infinite ``b`` (or ``a``) needs ``decay_rate``: the integrand is then
    assumed to fall like exp(-decay_rate |x|) and the range is truncated at
    ``cfg.tail_cutoff / decay_rate`` beyond the last finite breakpoint.

    ``points`` are known kinks; panels are split there first.

    Returns (value, error_estimate). Raises NumericError when the subdivision
    budget is exhausted.
    """
    if a == b:
        probe = np.asarray(f(np.array([a])), dtype=float)
        zero = np.zeros(probe.shape[1:]) if probe.ndim > 1 else 0.0
        return zero, 0.0
    sign = 1.0
    if a > b:
        a, b = b, a
        sign = -1.0
    if math.isinf(a) or math.isinf(b):
        if decay_rate is None or decay_rate <= 0:
            raise ValueError("semi-infinite integration needs a positive decay_rate")
        span = cfg.tail_cutoff / decay_rate
        finite = [p for p in (a, b, *points) if math.isfinite(p)]
        if math.isinf(b):
            b = max(finite) + span
        if math.isinf(a):
            a = min(finite) - span
    nodes, weights = _gl_rule(cfg.order)
    cuts = sorted({a, b, *[p for p in points if a < p < b]})
    stack = [(lo, hi) for lo, hi in zip(cuts[:-1], cuts[1:])]
    estimates = {iv: _panel(f, iv[0], iv[1], nodes, weights) for iv in stack}
    total = None
    err_total = 0.0
    n_splits = 0
    done: list = []
    while stack:
        lo, hi = stack.pop()
        whole = estimates.pop((lo, hi))
        mid = 0.5 * (lo + hi)
        left = _panel(f, lo, mid, nodes, weights)
        right = _panel(f, mid, hi, nodes, weights)
        refined = left + right
        err = np.abs(refined - whole)
        # local acceptance: scale tolerance with the panel's share of the range
        share = (hi - lo) / (b - a)
        tol = np.maximum(cfg.abs_tol * share, cfg.rel_tol * np.abs(refined))
        if np.all(err <= tol) or mid in (lo, hi):
            done.append((refined, float(np.max(err))))
            continue
        n_splits += 1
        if n_splits > cfg.max_subdivisions:
            partial = sum(v for v, _ in done) + refined
            raise NumericError(
                f"quadrature budget exhausted on [{a}, {b}] "
                f"(best estimate {np.asarray(partial).ravel()[:3]}, panel error {np.max(err):.3e})"
            )
        estimates[(lo, mid)] = left
        estimates[(mid, hi)] = right
        stack.append((lo, mid))
        stack.append((mid, hi))
    for v, e in done:
        total = v if total is None else total + v
        err_total += e
    if np.ndim(total) == 0:
        total = float(total)
    return sign * total, err_total
