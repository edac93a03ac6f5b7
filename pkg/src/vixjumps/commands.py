"""Command implementations shared by the CLI and the HTTP service.

Every command returns a :class:`CommandResult`: column names, rows as plain
dicts, an exit code and human readable messages. Formatting (CSV) happens
at the edge so the local CLI and the thin client print identical bytes.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .asymptotics import (
    Kind,
    Moneyness,
    OptionSpec,
    Order,
    Underlying,
    asym_coefficient,
    atm_strike,
    classify_moneyness,
    euro_otm_closed_form,
    vix_otm_closed_form,
)
from .config import parse_config
from .errors import ConfigError, DomainError
from .jump_models import ConstantOne, ErakerJump, FoldedNormalJump, ModelSpec
from .mc_engine import MCConfig, convergence_study, price_strikes_mc, vix_forward_mc
from .tables import get_table, reproduce

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_REPRODUCE = 2
EXIT_NUMERIC = 3

PRICE_COLUMNS = ("strike", "moneyness", "side", "order", "value", "std_error", "scale_factor",
                 "scaled_value", "f_s", "f_c", "f_v", "seed", "note")
FORWARD_COLUMNS = ("maturity", "value", "std_error", "atm_level", "paths", "seed", "note")
CONVERGE_COLUMNS = ("maturity", "strike", "side", "mc_over_t", "se_over_t", "asym", "ratio", "seed")
REPRODUCE_COLUMNS = ("table", "strike", "side", "column", "expected", "expected_se", "got", "got_se",
                     "tolerance", "status", "note")


@dataclass
class CommandResult:
    columns: tuple[str, ...]
    rows: list[dict] = field(default_factory=list)
    exit_code: int = EXIT_OK
    messages: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class Source:
    """Where the model comes from: a built-in table or INI text."""

    model: ModelSpec
    scale_base: float = 1000.0
    bs_forward: str = "mean"
    table_id: Optional[str] = None
    default_strikes: tuple[tuple[float, str], ...] = ()
    underlying: Optional[Underlying] = None
    mc: Optional[MCConfig] = None
    maturity: Optional[float] = None


def resolve_source(table: Optional[str] = None, config_text: Optional[str] = None) -> Source:
    if (table is None) == (config_text is None):
        raise ConfigError("give exactly one of a table id or a model config")
    if table is not None:
        spec = get_table(table)
        seen = []
        for c in spec.cells:
            key = (c.strike, c.kind.value)
            if key not in seen:
                seen.append(key)
        return Source(spec.model, spec.scale, spec.bs_forward, spec.table_id, tuple(seen), spec.underlying)
    rc = parse_config(config_text)
    return Source(rc.model, mc=rc.mc, maturity=rc.maturity)


def parse_strike_range(text: str) -> list[float]:
    """'a:b:step' -> [a, a + step, ..., b] (b included when it lies on the grid)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"strike range must look like a:b:step, got {text!r}")
    try:
        a, b, step = (float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"strike range {text!r} has a non-numeric field") from None
    if not step > 0 or b < a:
        raise ConfigError(f"strike range {text!r} needs step > 0 and a <= b")
    n = int(math.floor((b - a) / step + 1e-9)) + 1
    return [round(a + i * step, 12) for i in range(n)]


def _otm_side(model: ModelSpec, underlying: Underlying, strike: float) -> Kind:
    m = classify_moneyness(model, OptionSpec(underlying, Kind.CALL, strike))
    return Kind.PUT if m is Moneyness.ITM else Kind.CALL


def build_strikes(src: Source, underlying: Underlying, strikes: Optional[Sequence[float]],
                  moneyness: Optional[Sequence[float]], kind: str) -> list[tuple[float, float, Kind]]:
    """(strike, moneyness ratio, side) triples."""
    ref = atm_strike(src.model, underlying)
    if strikes is not None and moneyness is not None:
        raise ConfigError("give strikes or moneyness, not both")
    if strikes is None and moneyness is None:
        if src.default_strikes and underlying is src.underlying:
            if underlying is Underlying.VIX:
                return [(k * ref, k, Kind(side)) for k, side in src.default_strikes]
            return [(k, k / ref, Kind(side)) for k, side in src.default_strikes]
        raise ConfigError("no strikes given (use --strikes or --moneyness)")
    pairs = ([(k * ref, k) for k in moneyness] if moneyness is not None
             else [(K, K / ref) for K in strikes])
    out = []
    for K, k in pairs:
        if not K > 0:
            raise ConfigError(f"strikes must be > 0, got {K}")
        side = _otm_side(src.model, underlying, K) if kind == "auto" else Kind(kind)
        out.append((K, k, side))
    return out


def _scale_factor(src: Source, scaled: bool, maturity: float = 1.0) -> tuple[float, str]:
    lam_c = src.model.intensities.lambda_c
    if not scaled:
        return 1.0, ""
    if lam_c <= 0:
        return 1.0, "lambda_c = 0: values left unscaled"
    return src.scale_base / (lam_c * maturity), ""


def _num(x):
    return None if x is None or (isinstance(x, float) and math.isnan(x)) else x


def _atm_right_limit(src: Source, underlying: Underlying, opt: OptionSpec):
    """One-sided limit of the OTM coefficient at the ATM strike, or None when no closed form applies."""
    try:
        if underlying is Underlying.VIX:
            if opt.kind is Kind.PUT:
                return None
            return vix_otm_closed_form(src.model, opt)
        return euro_otm_closed_form(src.model, opt, bs_forward=src.bs_forward, allow_atm=True)
    except DomainError:
        return None


def cmd_asym(src: Source, underlying: Underlying, strikes=None, moneyness=None, kind: str = "auto",
             method: str = "closed", scaled: bool = True, bs_forward: Optional[str] = None) -> CommandResult:
    underlying = Underlying(underlying)
    if bs_forward is not None:
        src = dataclasses.replace(src, bs_forward=bs_forward)
    factor, scale_note = _scale_factor(src, scaled)
    res = CommandResult(PRICE_COLUMNS)
    if scale_note:
        res.messages.append(scale_note)
    if method == "closed" and underlying is Underlying.VIX and not isinstance(src.model.diffusion.eta, ConstantOne):
        raise DomainError("VIX closed forms need eta = 1; use method 'generic'")
    for K, k, side in build_strikes(src, underlying, strikes, moneyness, kind):
        opt = OptionSpec(underlying, side, K)
        m = classify_moneyness(src.model, opt)
        note = ""
        if method == "closed" and underlying is Underlying.EQUITY and m is not Moneyness.ATM:
            target = opt if m is Moneyness.OTM else OptionSpec(underlying, Kind.PUT if side is Kind.CALL else Kind.CALL, K)
            c = euro_otm_closed_form(src.model, target, bs_forward=src.bs_forward)
            if m is Moneyness.ITM:
                note = "ITM: parity-opposite OTM coefficient (extension)"
            if src.bs_forward == "median" and isinstance(src.model.common, (ErakerJump, FoldedNormalJump)):
                note = (note + "; " if note else "") + "median-forward convention of the reference tables"
        else:
            c = asym_coefficient(src.model, opt, method=method)
            if c.extension:
                note = "ITM: parity-opposite OTM coefficient (extension)"
        parts = c.parts or (None, None, None)
        row = dict(strike=K, moneyness=k, side=side.value, order=c.order.value, value=c.total, std_error=None,
                   scale_factor=factor, scaled_value=c.total * factor, f_s=parts[0], f_c=parts[1], f_v=parts[2],
                   seed=None, note=note)
        if m is Moneyness.ATM:
            row["scale_factor"] = 1.0
            row["scaled_value"] = c.total
            row["note"] = "ATM: coefficient of sqrt(T)"
            res.rows.append(row)
            # the generic route is exact, so pair it with the mean-forward closed form
            lim = _atm_right_limit(dataclasses.replace(src, bs_forward="mean") if method == "generic" else src,
                                   underlying, opt)
            if lim is not None:
                res.rows.append(dict(strike=K, moneyness=k, side=side.value, order=Order.LINEAR_T.value,
                                     value=lim.total, std_error=None, scale_factor=factor,
                                     scaled_value=lim.total * factor, f_s=lim.parts[0], f_c=lim.parts[1],
                                     f_v=lim.parts[2], seed=None,
                                     note="ATM: one-sided limit of the OTM coefficient"))
            continue
        res.rows.append(row)
    return res


def _mc_config(src: Source, paths, steps, seed, antithetic) -> MCConfig:
    base = src.mc or MCConfig()
    return MCConfig(paths if paths is not None else base.paths, steps if steps is not None else base.steps,
                    seed if seed is not None else base.seed,
                    antithetic if antithetic is not None else base.antithetic)


def _maturity(src: Source, maturity: Optional[float]) -> float:
    T = maturity if maturity is not None else src.maturity
    if T is None or not T > 0:
        raise ConfigError("a positive maturity is required (--maturity or [mc] maturity)")
    return T


def cmd_mc(src: Source, underlying: Underlying, strikes=None, moneyness=None, kind: str = "auto",
           maturity: Optional[float] = None, paths=None, steps=None, seed=None, antithetic=None,
           scaled: bool = True, workers: int = 1) -> CommandResult:
    underlying = Underlying(underlying)
    T = _maturity(src, maturity)
    cfg = _mc_config(src, paths, steps, seed, antithetic)
    factor, scale_note = _scale_factor(src, scaled, T)
    res = CommandResult(PRICE_COLUMNS)
    if scale_note:
        res.messages.append(scale_note)
    legs = build_strikes(src, underlying, strikes, moneyness, kind)
    opts = [OptionSpec(underlying, side, K, T) for K, _, side in legs]
    ests = price_strikes_mc(src.model, opts, T, cfg, workers) if opts else []
    for (K, k, side), est in zip(legs, ests):
        note = "std_error undefined for a single path" if est.paths_used < 2 else ""
        res.rows.append(dict(strike=K, moneyness=k, side=side.value, order=None, value=est.value,
                             std_error=None if est.paths_used < 2 else est.std_error, scale_factor=factor,
                             scaled_value=est.value * factor, f_s=None, f_c=None, f_v=None, seed=est.seed,
                             note=note))
    return res


def cmd_forward(src: Source, maturity: Optional[float] = None, paths=None, steps=None, seed=None,
                antithetic=None, workers: int = 1) -> CommandResult:
    T = _maturity(src, maturity)
    cfg = _mc_config(src, paths, steps, seed, antithetic)
    est = vix_forward_mc(src.model, T, cfg, workers)
    res = CommandResult(FORWARD_COLUMNS)
    res.rows.append(dict(maturity=T, value=est.value, std_error=est.std_error,
                         atm_level=atm_strike(src.model, Underlying.VIX), paths=est.paths_used, seed=est.seed,
                         note="E[sqrt(eta^2(S_T) V_T + kappa)]"))
    return res


def cmd_converge(src: Source, underlying: Underlying, strike: float, kind: str, maturities: Sequence[float],
                 paths=None, steps=None, seed=None, antithetic=None, workers: int = 1) -> CommandResult:
    underlying = Underlying(underlying)
    cfg = _mc_config(src, paths, steps, seed, antithetic)
    side = _otm_side(src.model, underlying, strike) if kind == "auto" else Kind(kind)
    if not maturities:
        raise ConfigError("converge needs at least one maturity")
    rows = convergence_study(src.model, OptionSpec(underlying, side, strike), maturities, cfg, workers)
    res = CommandResult(CONVERGE_COLUMNS)
    for r in rows:
        res.rows.append(dict(maturity=r.maturity, strike=strike, side=side.value, mc_over_t=r.mc_over_t,
                             se_over_t=r.se_over_t, asym=r.asym, ratio=_num(r.ratio), seed=cfg.seed))
    return res


def cmd_reproduce(table: str, with_mc: bool = False, seed: int = 2024, paths: Optional[int] = None,
                  workers: int = 1) -> CommandResult:
    results = reproduce(table, with_mc=with_mc, seed=seed, paths=paths, workers=workers)
    res = CommandResult(REPRODUCE_COLUMNS)
    for r in results:
        res.rows.append(dict(table=r.table_id, strike=r.strike, side=r.kind, column=r.column, expected=r.expected,
                             expected_se=r.expected_se, got=_num(r.got), got_se=r.got_se, tolerance=r.tolerance,
                             status=r.status, note=r.note))
    failed = [r for r in results if r.status == "FAIL"]
    counts = {s: sum(r.status == s for r in results) for s in ("PASS", "FAIL", "SKIP")}
    res.messages.append(f"{table}: {counts['PASS']} pass, {counts['FAIL']} fail, {counts['SKIP']} skipped")
    for r in failed:
        res.messages.append(f"FAIL {r.column} {r.kind} {r.strike:g}: expected {r.expected:g}, got {r.got:.6g}"
                            + (f" ({r.note})" if r.note else ""))
    res.exit_code = EXIT_REPRODUCE if failed else EXIT_OK
    return res


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return "" if math.isnan(v) else repr(v)
    return str(v)
