"""Mean-variance portfolio selection driven by average and current profitability."""

from .backtest import (
    BacktestConfig,
    CampaignResult,
    WealthLedger,
    compute_signals,
    horizon_count,
    monte_carlo_campaign,
    rolling_horizons,
    run_backtest,
    wealth_step,
)
from .errors import (
    DataError,
    InsufficientSampleError,
    InvalidSpecError,
    MvapcpError,
    UndefinedRatioError,
    WindowError,
)
from .estimators import (
    EstimationWindow,
    ParamEstimate,
    ap_trajectory,
    aux_position,
    build_aux_wealth,
    estimate_AP,
    estimate_CP,
    mle_estimate,
    quadratic_variation,
    rolling_mle,
    premium_error_reduced,
)
from .market_models import (
    MarketSpec,
    PricePath,
    RngSeed,
    TimeGrid,
    discount_prices,
    simulate,
    simulate_gbm_path,
    simulate_heston_path,
)
from .metrics import ceq, sharpe, turnover, welch_test
from .strategies import (
    RiskPreferences,
    StrategyKind,
    theta_buy_and_hold,
    theta_combined,
    theta_precommit,
    theta_strategy_B,
)

__version__ = "0.1.0"
