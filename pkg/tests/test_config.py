from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vixjumps.config import RunConfig, dump_config, load_config, parse_config
from vixjumps.errors import ConfigError
from vixjumps.jump_models import (
    DiffusionParams,
    ErakerJump,
    ExponentialJump,
    JumpIntensities,
    ModelSpec,
    NormalJump,
)
from vixjumps.mc_engine import MCConfig

BASIC = """\
[diffusion]
s0 = 1.0
v0 = 0.0076
sigma_v = 0.01   # vol of vol

[intensities]
lambda_c = 0.47

[common]
type = eraker
eta_cv = 20
loc_s = -0.0869
rho_j = -0.38
sigma_cs = 0.1

[mc]
paths = 5000
seed = 12
maturity = 0.01
"""


def test_parse_basic():
    cfg = parse_config(BASIC)
    assert cfg.model.common == ErakerJump(20.0, -0.0869, -0.38, 0.1)
    assert cfg.model.diffusion.sigma_v == 0.01 and cfg.model.diffusion.r == 0.0
    assert cfg.mc == MCConfig(paths=5000, steps=100, seed=12)
    assert cfg.maturity == 0.01


@pytest.mark.parametrize("name", ["eraker", "kou", "fn"])
def test_round_trip_tables(request, name):
    model = request.getfixturevalue(name)
    cfg = RunConfig(model, MCConfig(paths=123, steps=7, seed=5, antithetic=True), 0.1)
    assert parse_config(dump_config(cfg)) == cfg


def test_round_trip_idiosyncratic(tmp_path):
    m = ModelSpec(DiffusionParams(s0=100.0, v0=0.04, r=0.01, q=0.02, rho=-0.5, mu_v=0.1, sigma_v=0.3),
                  JumpIntensities(1.0, 2.0, 0.0), idio_s=NormalJump(-0.1, 0.2), idio_v=ExponentialJump(4.0))
    cfg = RunConfig(m)
    path = tmp_path / "model.ini"
    path.write_text(dump_config(cfg))
    assert load_config(path) == cfg


@given(st.floats(1e-3, 1e3), st.floats(1e-4, 1.0), st.floats(-1, 1), st.floats(0, 5),
       st.floats(1.01, 100), st.integers(0, 2 ** 64 - 1))
def test_round_trip_property(s0, v0, rho, lam, eta_v, seed):
    m = ModelSpec(DiffusionParams(s0=s0, v0=v0, rho=rho), JumpIntensities(lambda_v=lam), idio_v=ExponentialJump(eta_v))
    cfg = RunConfig(m, MCConfig(seed=seed))
    assert parse_config(dump_config(cfg)) == cfg


@pytest.mark.parametrize("text, line, match", [
    ("[diffusion]\ns0 = 1\nv0 = 0.04\n\nbogus = 3\n", 5, "unknown key 'bogus'"),
    ("[diffusion]\ns0 = 1\nv0 = 0.04\n[extras]\nx = 1\n", 4, r"unknown section \[extras\]"),
    ("[diffusion]\ns0 = 1\nv0 = abc\n", 3, "not a valid float"),
    ("[diffusion]\ns0 = 1\nv0 = 0.04\n[common]\ntype = merton\n", 5, "type 'merton'"),
    ("[diffusion]\ns0 = 1\nv0 = 0.04\n[mc]\nsteps = 1.5\n", 5, "not a valid int"),
    ("[diffusion]\ns0 = 1\nv0 = 0.04\n[mc]\nantithetic = maybe\n", 5, "not a boolean"),
    ("[diffusion]\ns0 = 1\nv0 = 0.04\neta = cev\n", 4, "only the constant"),
])
def test_errors_name_the_line(text, line, match):
    with pytest.raises(ConfigError, match=match) as info:
        parse_config(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}: ")


@pytest.mark.parametrize("text, match", [
    ("[intensities]\nlambda_c = 1\n", "missing required section"),
    ("[diffusion]\ns0 = 1\n", "missing key 'v0'"),
    ("[diffusion]\ns0 = -1\nv0 = 0.04\n", "s0 must be > 0"),
    ("[diffusion]\ns0 = 1\nv0 = 0.04\n[intensities]\nlambda_c = 1\n", "common jump model"),
    ("[diffusion]\ns0 = 1\nv0 = 0.04\n[idio_v]\ntype = exponential\neta = 0.5\n", "eta > 1"),
    ("[diffusion]\ns0 = 1\nv0 = 0.04\n[mc]\npaths = 0\n", "paths"),
    ("[diffusion]\ns0 = 1\nv0 = 0.04\n[mc]\nmaturity = 0\n", "maturity"),
    ("no section header\n", "header"),
])
def test_rejected(text, match):
    with pytest.raises(ConfigError, match=match):
        parse_config(text)


def test_none_type_takes_no_keys():
    with pytest.raises(ConfigError, match="unknown key 'eta'"):
        parse_config("[diffusion]\ns0 = 1\nv0 = 0.04\n[idio_v]\ntype = none\neta = 3\n")
    assert parse_config("[diffusion]\ns0 = 1\nv0 = 0.04\n[idio_v]\ntype = none\n").model.idio_v is None
