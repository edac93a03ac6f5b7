"""Short-maturity asymptotics and Monte Carlo for VIX and European options
under local-stochastic volatility with compound Poisson jumps."""

__version__ = "0.1.0"

from .asymptotics import (  # noqa: E402
    AsymCoefficient,
    BoundInputs,
    Kind,
    Moneyness,
    OptionSpec,
    Order,
    ProxyBounds,
    Underlying,
    asym_coefficient,
    classify_moneyness,
    euro_atm_asym,
    euro_otm_asym,
    euro_otm_closed_form,
    proxy_error_bounds,
    vix_atm_asym,
    vix_otm_asym,
    vix_otm_closed_form,
)
from .errors import ConfigError, DomainError, MoneynessError, NumericError  # noqa: E402
from .jump_models import (  # noqa: E402
    BoundedLocalVol,
    CompensatorSet,
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
    marginal_density_common_s,
    sample_common_jump,
    sample_idio_jump,
)
from .mc_engine import MCConfig, PriceEstimate, convergence_study, price_option_mc, simulate_terminal, vix_forward_mc  # noqa: E402
