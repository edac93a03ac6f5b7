"""Reference tables of leading-order and MC values and the machinery to re-derive them.

Each fixture stores the printed numbers verbatim (as strings, so the number
of printed decimals is known) next to the frozen model parameters that
produced them. Nothing here is recomputed at import time.

Asymptotic cells pass when the computed value is within ``rel_tol`` of the
printed one, or within half a unit of the last printed digit (values
rounded to 4 decimals cannot be checked to 0.5% otherwise). MC cells pass
when the two estimates overlap within two combined standard errors.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Optional

from .asymptotics import (
    Kind,
    OptionSpec,
    Underlying,
    atm_strike,
    euro_otm_closed_form,
    vix_otm_closed_form,
)
from .jump_models import DiffusionParams, ErakerJump, FoldedNormalJump, JumpIntensities, KouJump, ModelSpec
from .mc_engine import MCConfig, price_strikes_mc


class TableId(str, enum.Enum):
    ERAKER_EURO_T001 = "eraker-euro-T001"
    ERAKER_VIX = "eraker-vix"
    KOU_EURO_T001 = "kou-euro-T001"
    KOU_VIX = "kou-vix"
    FN_EURO_T01 = "fn-euro-T01"
    FN_EURO_T001 = "fn-euro-T001"
    FN_VIX = "fn-vix"


@dataclass(frozen=True)
class Cell:
    # strike for equity tables, K / K_ATM for VIX tables
    strike: float
    kind: Kind
    asym: Optional[str]
    # maturity -> (mean, std error) as printed; None where only a bare 0 is printed
    mc: tuple[tuple[float, str, Optional[str]], ...] = ()
    # excluded from the asymptotic comparison (ATM rows dominated by the sqrt(T) term)
    skip_asym: Optional[str] = None


@dataclass(frozen=True)
class TableSpec:
    table_id: str
    title: str
    model: ModelSpec
    underlying: Underlying
    scale: float
    cells: tuple[Cell, ...]
    rel_tol: float = 0.005
    bs_forward: str = "median"
    mc_paths: int = 100_000
    mc_steps: int = 100
    # cells whose printed value is known to disagree with its own formula
    known_issues: dict = field(default_factory=dict)

    def strike_of(self, cell: Cell) -> float:
        if self.underlying is Underlying.VIX:
            return cell.strike * atm_strike(self.model, Underlying.VIX)
        return cell.strike


@dataclass(frozen=True)
class CellResult:
    table_id: str
    strike: float
    kind: str
    column: str
    expected: float
    expected_se: Optional[float]
    got: float
    got_se: Optional[float]
    tolerance: float
    status: str
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "FAIL"


# ---------------------------------------------------------------------------
# Frozen parameter sets
# ---------------------------------------------------------------------------

_DIFFUSION = DiffusionParams(s0=1.0, v0=0.0076, r=0.0, q=0.0, rho=0.0, mu_v=0.0, sigma_v=0.01)
_LAMBDA_C = JumpIntensities(lambda_c=0.47)

# Eraker common jumps; the printed VIX column was computed with kappa rounded to 0.0095
ERAKER_MODEL = ModelSpec(_DIFFUSION, _LAMBDA_C, common=ErakerJump(eta_cv=20.0, loc_s=-0.0869, rho_j=-0.38, sigma_cs=0.1),
                         kappa_override=0.0095)
# Kou-type common jumps; kappa from the compensators (0.01599, printed as 0.016)
KOU_MODEL = ModelSpec(_DIFFUSION, _LAMBDA_C,
                      common=KouJump(eta_cv=20.0, eta_cs=10.0, loc_s=-0.11, rho_j=-0.38, alpha=0.5))
# folded normal common jumps; the printed kappa 0.0079 does not follow from the
# model compensators (derived value 0.01173) and is pinned here
FN_MODEL = ModelSpec(_DIFFUSION, _LAMBDA_C,
                     common=FoldedNormalJump(sigma_cv=0.063, loc_s=-0.11, rho_j=-0.38, sigma_cs=0.1),
                     kappa_override=0.0079)

C, P = Kind.CALL, Kind.PUT
_ATM_NOTE = "ATM row: the price is dominated by the sqrt(T) diffusive term"


def _mc(T, *pairs):
    return tuple((T, m, s) for m, s in pairs)


# Eraker model, European options, MC maturity 0.01, 1000 a / lambda_C
_ERAKER_EURO = (
    Cell(1.0, C, "7.409", _mc(0.01, ("785.2", "3.8")), skip_asym=_ATM_NOTE),
    Cell(1.05, C, "2.741", _mc(0.01, ("2.97", "0.75"))),
    Cell(1.1, C, "0.897", _mc(0.01, ("1.14", "0.38"))),
    Cell(1.15, C, "0.262", _mc(0.01, ("0", None))),
    Cell(1.2, C, "0.069", _mc(0.01, ("0", None))),
    Cell(1.25, C, "0.017", _mc(0.01, ("0", None))),
    Cell(1.3, C, "0.0004", _mc(0.01, ("0", None))),
    Cell(1.0, P, "107.734", _mc(0.01, ("789.9", "6.66")), skip_asym=_ATM_NOTE),
    Cell(0.95, P, "67.8864", _mc(0.01, ("64.65", "4.23"))),
    Cell(0.9, P, "36.6656", _mc(0.01, ("34.75", "2.74"))),
    Cell(0.85, P, "16.0734", _mc(0.01, ("14.13", "1.59"))),
    Cell(0.8, P, "5.3573", _mc(0.01, ("4.517", "0.816"))),
    Cell(0.75, P, "1.2573", _mc(0.01, ("1.084", "0.385"))),
    Cell(0.7, P, "0.1902", _mc(0.01, ("0.25", "0.18"))),
)

# Eraker model, VIX calls against K / K_ATM, MC maturity 0.1
_ERAKER_VIX = (
    Cell(1.00, C, "1.51125", _mc(0.1, ("2.193", "0.030"))),
    Cell(1.02, C, "0.28352", _mc(0.1, ("0.266", "0.013"))),
    Cell(1.04, C, "0.05901", _mc(0.1, ("0.050", "0.006"))),
    Cell(1.06, C, "0.01345", _mc(0.1, ("0.008", "0.003"))),
    Cell(1.08, C, "0.00332", _mc(0.1, ("0.002", "0.002"))),
    Cell(1.10, C, "0.00088", _mc(0.1, ("0.001", "0.001"))),
    Cell(1.12, C, "0.00025", _mc(0.1, ("0.001", "0.001"))),
)

# Kou-type model, European options, MC maturity 0.01
_KOU_EURO = (
    Cell(1.05, C, "10.0174", _mc(0.01, ("10.037", "1.099"))),
    Cell(1.10, C, "6.5906", _mc(0.01, ("6.646", "0.795"))),
    Cell(1.15, C, "4.4175", _mc(0.01, ("5.044", "0.805"))),
    Cell(1.20, C, "3.0118", _mc(0.01, ("2.554", "0.552"))),
    Cell(1.25, C, "2.0858", _mc(0.01, ("2.455", "0.858"))),
    Cell(1.30, C, "1.4654", _mc(0.01, ("1.076", "0.281"))),
    Cell(1.35, C, "1.0434", _mc(0.01, ("0.858", "0.266"))),
    Cell(0.95, P, "86.6465", _mc(0.01, ("85.461", "2.487"))),
    Cell(0.90, P, "52.1012", _mc(0.01, ("51.362", "1.826"))),
    Cell(0.85, P, "28.1740", _mc(0.01, ("25.754", "1.264"))),
    Cell(0.80, P, "14.4798", _mc(0.01, ("13.738", "0.867"))),
    Cell(0.75, P, "7.1201", _mc(0.01, ("7.115", "0.632"))),
    Cell(0.70, P, "3.3335", _mc(0.01, ("3.543", "0.429"))),
    Cell(0.65, P, "1.4752", _mc(0.01, ("1.424", "0.232"))),
)

# Kou-type model, VIX calls, MC maturities 0.01 and 0.1
_KOU_VIX = (
    Cell(1.00, C, "1.2908", _mc(0.01, ("2.845", "0.039")) + _mc(0.1, ("1.422", "0.012"))),
    Cell(1.02, C, "0.1340", _mc(0.01, ("0.134", "0.013")) + _mc(0.1, ("0.140", "0.004"))),
    Cell(1.04, C, "0.0170", _mc(0.01, ("0.014", "0.004")) + _mc(0.1, ("0.016", "0.001"))),
    Cell(1.06, C, "0.0025", _mc(0.01, ("0.001", "0.001")) + _mc(0.1, ("0.002", "0.000"))),
    Cell(1.08, C, "0.0004", _mc(0.01, ("0.000", "0.000")) + _mc(0.1, ("0.000", "0.000"))),
    Cell(1.10, C, "0.0001", _mc(0.01, ("0.000", "0.000")) + _mc(0.1, ("0.000", "0.000"))),
)


def _fn_euro(T, mc_cols):
    asym = (("1.02", C, "2.970"), ("1.04", C, "1.913"), ("1.06", C, "1.208"), ("1.08", C, "0.748"),
            ("1.10", C, "0.454"), ("0.98", P, "107.742"), ("0.96", P, "90.800"), ("0.94", P, "74.935"),
            ("0.92", P, "60.371"), ("0.90", P, "47.318"))
    return tuple(Cell(float(k), kind, a, _mc(T, mc)) for (k, kind, a), mc in zip(asym, mc_cols))


# folded normal model, European options, MC maturity 0.1
_FN_EURO_T01 = _fn_euro(0.1, (("112.903", "0.523"), ("33.184", "0.113"), ("7.786", "0.133"), ("1.965", "0.140"),
                              ("0.786", "0.086"), ("152.807", "1.386"), ("94.924", "1.272"), ("70.907", "1.148"),
                              ("56.245", "1.063"), ("44.144", "0.934")))
# same asymptotic columns, MC maturity 0.01
_FN_EURO_T001 = _fn_euro(0.01, (("12.696", "0.240"), ("2.301", "0.121"), ("1.429", "0.140"), ("0.886", "0.193"),
                                ("0.515", "0.233"), ("112.020", "4.042"), ("89.587", "3.222"), ("73.627", "2.484"),
                                ("59.204", "1.920"), ("46.300", "1.413")))

# folded normal model, VIX calls, 1e4 a / lambda_C, MC maturities 0.01 and 0.1
_FN_VIX = (
    Cell(1.01, C, "6.44", _mc(0.01, ("6.11", "0.16")) + _mc(0.1, ("6.10", "0.11"))),
    Cell(1.02, C, "2.08", _mc(0.01, ("1.96", "0.01")) + _mc(0.1, ("2.07", "0.04"))),
    Cell(1.03, C, "0.53", _mc(0.01, ("0.40", "0.03")) + _mc(0.1, ("0.60", "0.01"))),
    Cell(1.04, C, "0.10", _mc(0.01, ("0.02", "0.00")) + _mc(0.1, ("0.15", "0.01"))),
    Cell(1.05, C, "0.02", _mc(0.01, ("0.00", "0.00")) + _mc(0.1, ("0.04", "0.00"))),
    Cell(1.06, C, "0.00", _mc(0.01, ("0.00", "0.00")) + _mc(0.1, ("0.01", "0.00"))),
)

_K13_NOTE = ("printed 0.0004 but the same formula that reproduces every other row gives 0.00369; "
             "the neighbouring rows decay by a factor of about 4 per step, which also points to 0.0037")

TABLES: dict[str, TableSpec] = {
    t.table_id: t for t in (
        TableSpec("eraker-euro-T001", "Eraker model: European options, MC at T = 0.01", ERAKER_MODEL,
                  Underlying.EQUITY, 1000.0, _ERAKER_EURO, known_issues={(1.3, "call"): _K13_NOTE}),
        TableSpec("eraker-vix", "Eraker model: VIX calls, MC at T = 0.1", ERAKER_MODEL,
                  Underlying.VIX, 1000.0, _ERAKER_VIX),
        TableSpec("kou-euro-T001", "Kou-type model: European options, MC at T = 0.01", KOU_MODEL,
                  Underlying.EQUITY, 1000.0, _KOU_EURO),
        TableSpec("kou-vix", "Kou-type model: VIX calls, MC at T = 0.01 and 0.1", KOU_MODEL,
                  Underlying.VIX, 1000.0, _KOU_VIX),
        TableSpec("fn-euro-T01", "Folded normal model: European options, MC at T = 0.1", FN_MODEL,
                  Underlying.EQUITY, 1000.0, _FN_EURO_T01),
        TableSpec("fn-euro-T001", "Folded normal model: European options, MC at T = 0.01", FN_MODEL,
                  Underlying.EQUITY, 1000.0, _FN_EURO_T001),
        TableSpec("fn-vix", "Folded normal model: VIX calls, MC at T = 0.01 and 0.1", FN_MODEL,
                  Underlying.VIX, 1e4, _FN_VIX, rel_tol=0.02),
    )
}


def get_table(table_id: str) -> TableSpec:
    try:
        return TABLES[TableId(table_id).value]
    except ValueError:
        raise KeyError(f"unknown table {table_id!r}; known: {', '.join(TABLES)}") from None


def half_ulp(printed: str) -> float:
    """Half a unit in the last printed decimal place."""
    exp = Decimal(printed).as_tuple().exponent
    return 0.5 * 10.0 ** exp


def scaled_asym(spec: TableSpec, cell: Cell) -> float:
    opt = OptionSpec(spec.underlying, cell.kind, spec.strike_of(cell))
    if spec.underlying is Underlying.VIX:
        coef = vix_otm_closed_form(spec.model, opt)
    else:
        coef = euro_otm_closed_form(spec.model, opt, bs_forward=spec.bs_forward)
    return spec.scale * coef.parts[1]


def check_asym(spec: TableSpec) -> list[CellResult]:
    out = []
    for cell in spec.cells:
        if cell.asym is None:
            continue
        expected = float(cell.asym)
        note = spec.known_issues.get((cell.strike, cell.kind.value), "")
        if cell.skip_asym:
            out.append(CellResult(spec.table_id, cell.strike, cell.kind.value, "asym", expected, None,
                                  math.nan, None, 0.0, "SKIP", cell.skip_asym))
            continue
        got = scaled_asym(spec, cell)
        tol = max(spec.rel_tol * abs(expected), half_ulp(cell.asym))
        status = "PASS" if abs(got - expected) <= tol else "FAIL"
        out.append(CellResult(spec.table_id, cell.strike, cell.kind.value, "asym", expected, None,
                              got, None, tol, status, note))
    return out


def check_mc(spec: TableSpec, seed: int = 2024, paths: Optional[int] = None, workers: int = 1) -> list[CellResult]:
    """Fresh MC run per maturity (all strikes on one path set), 2-SE overlap against the printed MC."""
    maturities = sorted({T for cell in spec.cells for T, _, _ in cell.mc})
    cfg = MCConfig(paths or spec.mc_paths, spec.mc_steps, seed)
    lam_c = spec.model.intensities.lambda_c
    out = []
    for T in maturities:
        cells = [c for c in spec.cells if any(m[0] == T for m in c.mc)]
        opts = [OptionSpec(spec.underlying, c.kind, spec.strike_of(c), T) for c in cells]
        ests = price_strikes_mc(spec.model, opts, T, cfg, workers)
        factor = spec.scale / (lam_c * T)
        for cell, est in zip(cells, ests):
            _, mean, se = next(m for m in cell.mc if m[0] == T)
            exp_se = float(se) if se is not None else 0.0
            got, got_se = factor * est.value, factor * est.std_error
            tol = 2.0 * math.hypot(exp_se, got_se)
            # printed SEs of 0.000 are rounded; allow the rounding half-unit too
            if se is not None:
                tol = max(tol, 2.0 * half_ulp(se))
            status = "PASS" if abs(got - float(mean)) <= tol else "FAIL"
            out.append(CellResult(spec.table_id, cell.strike, cell.kind.value, f"mc T={T:g}", float(mean),
                                  None if se is None else exp_se, got, got_se, tol, status))
    return out


def reproduce(table_id: str, *, with_mc: bool = False, seed: int = 2024, paths: Optional[int] = None,
              workers: int = 1, spec: Optional[TableSpec] = None) -> list[CellResult]:
    spec = spec or get_table(table_id)
    results = check_asym(spec)
    if with_mc:
        results += check_mc(spec, seed, paths, workers)
    return results
