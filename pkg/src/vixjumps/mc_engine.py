"""Monte Carlo for the jump-diffusion: log-space Euler with compound Poisson jumps.

Paths are simulated in fixed-size blocks. Every block owns a random stream
derived from ``(seed, block index)`` so the numbers drawn for a given path do
not depend on how blocks are spread over workers, and results are bit
identical for any ``workers`` value.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .asymptotics import Kind, Moneyness, OptionSpec, Underlying, asym_coefficient, classify_moneyness
from .errors import DomainError
from .jump_models import ModelSpec, compute_compensators, sample_common_jump, sample_idio_jump

log = logging.getLogger(__name__)

BLOCK_SIZE = 4096


@dataclass(frozen=True)
class MCConfig:
    paths: int = 100_000
    steps: int = 100
    seed: int = 0
    antithetic: bool = False

    def __post_init__(self):
        if self.paths < 1:
            raise ValueError(f"paths must be >= 1, got {self.paths}")
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")


@dataclass
class PathState:
    """Log coordinates of a batch of paths at time ``t``."""

    log_s: np.ndarray
    log_v: np.ndarray
    t: float


@dataclass(frozen=True)
class PriceEstimate:
    value: float
    std_error: float
    paths_used: int
    seed: int


@dataclass(frozen=True)
class TerminalSample:
    s: np.ndarray
    v: np.ndarray
    # paths dropped because the state stopped being finite
    nonfinite: int


@dataclass(frozen=True)
class ConvergenceRow:
    maturity: float
    mc_over_t: float
    se_over_t: float
    asym: float
    ratio: float


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, block])))


def _block_sizes(paths: int) -> list[int]:
    full, rest = divmod(paths, BLOCK_SIZE)
    return [BLOCK_SIZE] * full + ([rest] if rest else [])


def _jump_grid(rng, n: int, steps: int, rate: float, draw) -> tuple[np.ndarray, ...]:
    """Poisson counts per path, uniform jump times; returns (step, path, *sizes)."""
    counts = rng.poisson(rate, n)
    total = int(counts.sum())
    owner = np.repeat(np.arange(n), counts)
    when = np.minimum((rng.random(total) * steps).astype(np.int64), steps - 1)
    return (when, owner) + tuple(np.atleast_1d(a) for a in draw(total))


def _simulate_block(model: ModelSpec, T: float, steps: int, n: int, antithetic: bool,
                    rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    d = model.diffusion
    lam = model.intensities
    comps = compute_compensators(model)
    dt = T / steps
    sq = math.sqrt(dt)
    m = (n + 1) // 2 if antithetic else n

    # jumps first, then Brownian increments: a fixed draw order per block
    jump_s = np.zeros((steps, m))
    jump_v = np.zeros((steps, m))
    if lam.lambda_s > 0:
        when, who, dx = _jump_grid(rng, m, steps, lam.lambda_s * T,
                                   lambda k: (sample_idio_jump(model.idio_s, rng, k),))
        np.add.at(jump_s, (when, who), dx)
    if lam.lambda_v > 0:
        when, who, dy = _jump_grid(rng, m, steps, lam.lambda_v * T,
                                   lambda k: (sample_idio_jump(model.idio_v, rng, k),))
        np.add.at(jump_v, (when, who), dy)
    if lam.lambda_c > 0:
        when, who, dx, dy = _jump_grid(rng, m, steps, lam.lambda_c * T,
                                       lambda k: sample_common_jump(model.common, rng, k))
        np.add.at(jump_s, (when, who), dx)
        np.add.at(jump_v, (when, who), dy)
    z1 = rng.standard_normal((steps, m))
    z2 = rng.standard_normal((steps, m))
    if antithetic:
        z1 = np.concatenate([z1, -z1], axis=1)[:, :n]
        z2 = np.concatenate([z2, -z2], axis=1)[:, :n]
        jump_s = np.concatenate([jump_s, jump_s], axis=1)[:, :n]
        jump_v = np.concatenate([jump_v, jump_v], axis=1)[:, :n]

    drift_s = d.r - d.q - lam.lambda_s * comps.comp_s - lam.lambda_c * comps.comp_cs
    drift_v = (d.mu_v - 0.5 * d.sigma_v ** 2) * dt
    orth = math.sqrt(max(1.0 - d.rho ** 2, 0.0))
    state = PathState(np.full(n, math.log(d.s0)), np.full(n, math.log(d.v0)), 0.0)
    for i in range(steps):
        v = np.exp(state.log_v)
        eta = np.asarray(d.eta(np.exp(state.log_s)), dtype=float)
        ev = eta * eta * v
        dw = z1[i] * sq
        dz = (d.rho * z1[i] + orth * z2[i]) * sq
        state.log_s += np.sqrt(ev) * dw + (drift_s - 0.5 * ev) * dt + jump_s[i]
        state.log_v += d.sigma_v * dz + drift_v + jump_v[i]
        state.t += dt
    return np.exp(state.log_s), np.exp(state.log_v)


def iter_terminal_blocks(model: ModelSpec, T: float, cfg: MCConfig,
                         workers: int = 1) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield (S_T, V_T) per block, always in block order."""
    if not T > 0:
        raise DomainError(f"maturity must be > 0, got {T}")
    sizes = _block_sizes(cfg.paths)

    def run(b):
        return _simulate_block(model, T, cfg.steps, sizes[b], cfg.antithetic, _block_rng(cfg.seed, b))

    if workers <= 1:
        for b in range(len(sizes)):
            yield run(b)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(run, range(len(sizes)))


def simulate_terminal(model: ModelSpec, T: float, cfg: MCConfig, workers: int = 1) -> TerminalSample:
    blocks = list(iter_terminal_blocks(model, T, cfg, workers))
    s = np.concatenate([b[0] for b in blocks])
    v = np.concatenate([b[1] for b in blocks])
    ok = np.isfinite(s) & np.isfinite(v) & (s > 0) & (v > 0)
    bad = int(np.size(ok) - np.count_nonzero(ok))
    if bad:
        log.warning("dropped %d non-finite paths out of %d", bad, s.size)
        s, v = s[ok], v[ok]
    return TerminalSample(s, v, bad)


def _estimate(samples: np.ndarray, cfg: MCConfig, scale: float = 1.0) -> PriceEstimate:
    n = samples.size
    if n == 0:
        raise DomainError("no usable paths")
    value = scale * float(np.mean(samples))
    if n < 2:
        return PriceEstimate(value, 0.0, n, cfg.seed)
    if cfg.antithetic:
        # pairs (i, i + half) inside each block are dependent; average them first
        pairs = []
        start = 0
        for size in _block_sizes(n):
            blk = samples[start:start + size]
            half = size // 2
            pairs.append(0.5 * (blk[:half] + blk[(size + 1) // 2:(size + 1) // 2 + half]))
            if size % 2:
                pairs.append(blk[half:half + 1])
            start += size
        pooled = np.concatenate(pairs)
        se = float(np.std(pooled, ddof=1)) / math.sqrt(pooled.size) if pooled.size > 1 else 0.0
    else:
        se = float(np.std(samples, ddof=1)) / math.sqrt(n)
    return PriceEstimate(value, scale * se, n, cfg.seed)


def vix_proxy(model: ModelSpec, s: np.ndarray, v: np.ndarray) -> np.ndarray:
    """sqrt(eta^2(S_T) V_T + kappa), the window -> 0 limit of VIX_T."""
    eta = np.asarray(model.diffusion.eta(s), dtype=float)
    return np.sqrt(eta * eta * v + compute_compensators(model).kappa)


def payoff(model: ModelSpec, opt: OptionSpec, s: np.ndarray, v: np.ndarray) -> np.ndarray:
    x = vix_proxy(model, s, v) if opt.underlying is Underlying.VIX else s
    diff = x - opt.strike if opt.kind is Kind.CALL else opt.strike - x
    return np.maximum(diff, 0.0)


def price_option_mc(model: ModelSpec, opt: OptionSpec, cfg: MCConfig, T: Optional[float] = None,
                    workers: int = 1) -> PriceEstimate:
    """Discounted payoff mean with its standard error. ``T`` defaults to ``opt.maturity``."""
    T = opt.maturity if T is None else T
    if T is None:
        raise DomainError("option maturity is required for Monte Carlo pricing")
    sample = simulate_terminal(model, T, cfg, workers)
    disc = math.exp(-model.diffusion.r * T)
    return _estimate(payoff(model, opt, sample.s, sample.v), cfg, disc)


def price_strikes_mc(model: ModelSpec, opts: Sequence[OptionSpec], T: float, cfg: MCConfig,
                     workers: int = 1) -> list[PriceEstimate]:
    """Several options on one set of paths (common random numbers across strikes)."""
    sample = simulate_terminal(model, T, cfg, workers)
    disc = math.exp(-model.diffusion.r * T)
    return [_estimate(payoff(model, o, sample.s, sample.v), cfg, disc) for o in opts]


def vix_forward_mc(model: ModelSpec, T: float, cfg: MCConfig, workers: int = 1) -> PriceEstimate:
    sample = simulate_terminal(model, T, cfg, workers)
    return _estimate(vix_proxy(model, sample.s, sample.v), cfg)


def convergence_study(model: ModelSpec, opt: OptionSpec, maturities: Sequence[float], cfg: MCConfig,
                      workers: int = 1) -> list[ConvergenceRow]:
    """MC price / T next to the leading coefficient for a sequence of maturities."""
    if classify_moneyness(model, opt) is not Moneyness.OTM:
        raise DomainError("convergence study needs an OTM option")
    asym = asym_coefficient(model, opt).total
    rows = []
    for T in maturities:
        est = price_option_mc(model, opt, cfg, T=T, workers=workers)
        mc = est.value / T
        rows.append(ConvergenceRow(T, mc, est.std_error / T, asym, mc / asym if asym else math.nan))
    return rows
