"""INI-style run configuration.

Sections::

    [diffusion]   s0, v0, r, q, rho, mu_v, sigma_v, eta (only "one")
    [intensities] lambda_s, lambda_v, lambda_c
    [idio_s]      type = normal | none; alpha, sigma
    [idio_v]      type = exponential | none; eta
    [common]      type = eraker | kou | folded_normal | none; model keys
    [model]       kappa_override (optional)
    [mc]          paths, steps, seed, antithetic, maturity

Every section is optional except [diffusion]. Unknown sections and keys are
rejected with the offending line number.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from typing import Optional

from .errors import ConfigError, DomainError
from .jump_models import (
    ConstantOne,
    DiffusionParams,
    ErakerJump,
    ExponentialJump,
    FoldedNormalJump,
    JumpIntensities,
    KouJump,
    ModelSpec,
    NormalJump,
)
from .mc_engine import MCConfig

_DIFFUSION_KEYS = ("s0", "v0", "r", "q", "rho", "mu_v", "sigma_v", "eta")
_INTENSITY_KEYS = ("lambda_s", "lambda_v", "lambda_c")
_IDIO_S = {"normal": (NormalJump, ("alpha", "sigma"))}
_IDIO_V = {"exponential": (ExponentialJump, ("eta",))}
_COMMON = {
    "eraker": (ErakerJump, ("eta_cv", "loc_s", "rho_j", "sigma_cs")),
    "kou": (KouJump, ("eta_cv", "eta_cs", "loc_s", "rho_j", "alpha")),
    "folded_normal": (FoldedNormalJump, ("sigma_cv", "loc_s", "rho_j", "sigma_cs")),
}
_MC_KEYS = ("paths", "steps", "seed", "antithetic", "maturity")
_SECTIONS = ("diffusion", "intensities", "idio_s", "idio_v", "common", "model", "mc")


@dataclass(frozen=True)
class RunConfig:
    model: ModelSpec
    mc: MCConfig = field(default_factory=MCConfig)
    maturity: Optional[float] = None


def _line_index(text: str) -> dict[tuple[str, Optional[str]], int]:
    """Map (section, key) and (section, None) to 1-based line numbers."""
    where: dict[tuple[str, Optional[str]], int] = {}
    section = None
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "#;":
            continue
        m = re.fullmatch(r"\[([^\]]+)\]", line)
        if m:
            section = m.group(1).strip().lower()
            where.setdefault((section, None), no)
            continue
        key = re.split(r"[=:]", line, maxsplit=1)[0].strip().lower()
        if section is not None:
            where.setdefault((section, key), no)
    return where


class _Reader:
    def __init__(self, parser: configparser.ConfigParser, lines):
        self.parser = parser
        self.lines = lines

    def line(self, section, key=None):
        return self.lines.get((section, key), self.lines.get((section, None)))

    def check_keys(self, section: str, allowed):
        for key in self.parser[section]:
            if key not in allowed:
                raise ConfigError(f"unknown key {key!r} in [{section}] (allowed: {', '.join(allowed)})",
                                  self.line(section, key))

    def number(self, section, key, default=None, kind=float):
        if not self.parser.has_option(section, key):
            if default is None:
                raise ConfigError(f"missing key {key!r} in [{section}]", self.line(section))
            return default
        raw = self.parser.get(section, key)
        try:
            return kind(raw)
        except ValueError:
            raise ConfigError(f"[{section}] {key} = {raw!r} is not a valid {kind.__name__}",
                              self.line(section, key)) from None

    def tagged(self, section: str, table: dict):
        if not self.parser.has_section(section):
            return None
        tag = self.parser.get(section, "type", fallback="none").strip().lower()
        if tag == "none":
            self.check_keys(section, ("type",))
            return None
        if tag not in table:
            raise ConfigError(f"[{section}] type {tag!r} not one of none, {', '.join(table)}",
                              self.line(section, "type"))
        cls, keys = table[tag]
        self.check_keys(section, ("type",) + keys)
        try:
            return cls(*(self.number(section, k) for k in keys))
        except DomainError as exc:
            raise ConfigError(f"[{section}] {exc}", self.line(section)) from None


def parse_config(text: str) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc).splitlines()[0], getattr(exc, "lineno", None)) from None
    rd = _Reader(parser, _line_index(text))
    for section in parser.sections():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section [{section}]", rd.line(section))
    if not parser.has_section("diffusion"):
        raise ConfigError("missing required section [diffusion]")
    rd.check_keys("diffusion", _DIFFUSION_KEYS)
    eta = parser.get("diffusion", "eta", fallback="one").strip().lower()
    if eta != "one":
        raise ConfigError(f"[diffusion] eta = {eta!r}: only the constant 'one' can be set from a file",
                          rd.line("diffusion", "eta"))
    try:
        diffusion = DiffusionParams(
            s0=rd.number("diffusion", "s0"),
            v0=rd.number("diffusion", "v0"),
            **{k: rd.number("diffusion", k, 0.0) for k in ("r", "q", "rho", "mu_v", "sigma_v")},
            eta=ConstantOne(),
        )
        intensities = JumpIntensities()
        if parser.has_section("intensities"):
            rd.check_keys("intensities", _INTENSITY_KEYS)
            intensities = JumpIntensities(*(rd.number("intensities", k, 0.0) for k in _INTENSITY_KEYS))
    except DomainError as exc:
        raise ConfigError(str(exc), rd.line("diffusion")) from None

    kappa = None
    if parser.has_section("model"):
        rd.check_keys("model", ("kappa_override",))
        if parser.has_option("model", "kappa_override"):
            kappa = rd.number("model", "kappa_override")
    try:
        model = ModelSpec(diffusion, intensities, rd.tagged("idio_s", _IDIO_S), rd.tagged("idio_v", _IDIO_V),
                          rd.tagged("common", _COMMON), kappa)
    except DomainError as exc:
        raise ConfigError(str(exc), rd.line("intensities") or rd.line("model")) from None

    mc = MCConfig()
    maturity = None
    if parser.has_section("mc"):
        rd.check_keys("mc", _MC_KEYS)
        anti_raw = parser.get("mc", "antithetic", fallback="false")
        try:
            anti = parser.getboolean("mc", "antithetic", fallback=False)
        except ValueError:
            raise ConfigError(f"[mc] antithetic = {anti_raw!r} is not a boolean", rd.line("mc", "antithetic")) from None
        try:
            mc = MCConfig(rd.number("mc", "paths", mc.paths, int), rd.number("mc", "steps", mc.steps, int),
                          rd.number("mc", "seed", mc.seed, int), anti)
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"[mc] {exc}", rd.line("mc")) from None
        if parser.has_option("mc", "maturity"):
            maturity = rd.number("mc", "maturity")
            if not maturity > 0:
                raise ConfigError("[mc] maturity must be > 0", rd.line("mc", "maturity"))
    return RunConfig(model, mc, maturity)


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def _section(name: str, items) -> list[str]:
    return [f"[{name}]"] + [f"{k} = {v}" for k, v in items] + [""]


def _tag_of(obj, table) -> str:
    for tag, (cls, _) in table.items():
        if type(obj) is cls:
            return tag
    raise ConfigError(f"{type(obj).__name__} cannot be written to a config file")


def dump_config(cfg: RunConfig) -> str:
    """Serialize so that ``parse_config(dump_config(c)) == c``; floats use repr."""
    m = cfg.model
    d = m.diffusion
    if not isinstance(d.eta, ConstantOne):
        raise ConfigError("only eta = one can be written to a config file")
    out = _section("diffusion", [(k, repr(float(getattr(d, k)))) for k in _DIFFUSION_KEYS[:-1]] + [("eta", "one")])
    out += _section("intensities", [(k, repr(float(getattr(m.intensities, k)))) for k in _INTENSITY_KEYS])
    for name, obj, table in (("idio_s", m.idio_s, _IDIO_S), ("idio_v", m.idio_v, _IDIO_V),
                             ("common", m.common, _COMMON)):
        if obj is None:
            out += _section(name, [("type", "none")])
        else:
            tag = _tag_of(obj, table)
            out += _section(name, [("type", tag)] + [(k, repr(float(getattr(obj, k)))) for k in table[tag][1]])
    if m.kappa_override is not None:
        out += _section("model", [("kappa_override", repr(float(m.kappa_override)))])
    mc_items = [("paths", cfg.mc.paths), ("steps", cfg.mc.steps), ("seed", cfg.mc.seed),
                ("antithetic", "true" if cfg.mc.antithetic else "false")]
    if cfg.maturity is not None:
        mc_items.append(("maturity", repr(float(cfg.maturity))))
    out += _section("mc", mc_items)
    return "\n".join(out)
