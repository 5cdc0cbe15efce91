"""Secure LED selection for indoor visible light communication.

Solves the LED-to-user assignment problem that maximizes the sum secrecy
rate of a multi-user VLC downlink overheard by an eavesdropper: a
Lambertian channel model, an SINR-based secrecy objective, a tabu-search
solver, three fixed baseline strategies, an exhaustive oracle, and a
seeded Monte-Carlo experiment harness.
"""

from .channel import (
    ChannelTable,
    Emitter,
    Point3,
    Receiver,
    build_channel_table,
    channel_gain,
    concentrator_gain,
    lambertian_order,
    lambertian_order_deg,
)
from .errors import (
    DegenerateGeometryError,
    EnumerationBudgetError,
    InfeasibleAssignmentError,
    InfeasibleScenarioError,
    InvalidParameterError,
    VlcsecError,
)
from .experiment import (
    DEFAULT_SWEEPS,
    EXPERIMENT_IDS,
    ExperimentResult,
    ExperimentSpec,
    ResultRow,
    run_experiment,
    write_results,
)
from .rates import (
    CAPACITY_LB_FACTOR,
    Assignment,
    NoiseModel,
    RateReport,
    SecrecyEvaluator,
    dbm_to_watts,
    eve_rate,
    rate_report,
    secrecy_rate,
    sum_secrecy_rate,
    ue_rate,
    validate_assignment,
    watts_to_dbm,
)
from .scenario import (
    Scenario,
    ScenarioConfig,
    load_scenario,
    place_led_grid,
    reference_layout,
    sample_instance,
    save_scenario,
)
from .strategies import (
    StrategyKind,
    channel_gain_strategy,
    eve_aware_strategy,
    global_search,
    random_strategy,
)
from .tabu import (
    TabuState,
    TraceRecord,
    TsConfig,
    commit_move,
    generate_neighborhood,
    run_tabu_search,
    select_move,
    stopping_check,
)
from .version import __version__

__all__ = [
    "Assignment",
    "CAPACITY_LB_FACTOR",
    "ChannelTable",
    "DEFAULT_SWEEPS",
    "DegenerateGeometryError",
    "Emitter",
    "EnumerationBudgetError",
    "EXPERIMENT_IDS",
    "ExperimentResult",
    "ExperimentSpec",
    "InfeasibleAssignmentError",
    "InfeasibleScenarioError",
    "InvalidParameterError",
    "NoiseModel",
    "Point3",
    "RateReport",
    "Receiver",
    "ResultRow",
    "Scenario",
    "ScenarioConfig",
    "SecrecyEvaluator",
    "StrategyKind",
    "TabuState",
    "TraceRecord",
    "TsConfig",
    "VlcsecError",
    "build_channel_table",
    "channel_gain",
    "channel_gain_strategy",
    "commit_move",
    "concentrator_gain",
    "dbm_to_watts",
    "eve_aware_strategy",
    "eve_rate",
    "generate_neighborhood",
    "global_search",
    "lambertian_order",
    "lambertian_order_deg",
    "load_scenario",
    "place_led_grid",
    "random_strategy",
    "rate_report",
    "reference_layout",
    "run_experiment",
    "run_tabu_search",
    "sample_instance",
    "save_scenario",
    "secrecy_rate",
    "select_move",
    "stopping_check",
    "sum_secrecy_rate",
    "ue_rate",
    "validate_assignment",
    "watts_to_dbm",
    "write_results",
    "__version__",
]
