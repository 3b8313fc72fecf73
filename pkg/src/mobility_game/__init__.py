"""Mobility game engine: multimodal routing with hub pricing, equilibria and price of anarchy."""

from .equilibrium import (
    BestResponseConfig,
    EquilibriumReport,
    NashCheck,
    NoEquilibriumError,
    PoAReport,
    best_response,
    poa_bound,
    price_of_anarchy,
    random_assignment,
    run_dynamics,
    social_optimum,
    verify_nash,
)
from .mechanics import (
    Action,
    Assignment,
    EmptyWalletError,
    Game,
    MechanicsConfig,
    TravelerProfile,
    disincentive,
    make_assignment,
    potential,
    pricing,
    pricing_transfer,
    utility,
    utility_terms,
    welfare,
)
from .network import (
    DomainError,
    Hub,
    NetworkSpec,
    Road,
    Route,
    ServiceType,
    StructuralError,
    hub_cohort,
    latency,
    services_on_road,
)
from .prospect import (
    BudgetLottery,
    ProspectModel,
    ProspectParams,
    prelec_weight,
    prospect_potential,
    prospect_utility,
    prospect_welfare,
    value,
)
from .scenario import ScenarioConfig, ScenarioError, build_game, load_scenario, sample_population

__version__ = "0.1.0"

__all__ = [
    "Action",
    "Assignment",
    "BestResponseConfig",
    "BudgetLottery",
    "DomainError",
    "EmptyWalletError",
    "EquilibriumReport",
    "Game",
    "Hub",
    "MechanicsConfig",
    "NashCheck",
    "NetworkSpec",
    "NoEquilibriumError",
    "PoAReport",
    "ProspectModel",
    "ProspectParams",
    "Road",
    "Route",
    "ScenarioConfig",
    "ScenarioError",
    "ServiceType",
    "StructuralError",
    "TravelerProfile",
    "best_response",
    "build_game",
    "disincentive",
    "hub_cohort",
    "latency",
    "load_scenario",
    "make_assignment",
    "poa_bound",
    "potential",
    "prelec_weight",
    "price_of_anarchy",
    "pricing",
    "pricing_transfer",
    "prospect_potential",
    "prospect_utility",
    "prospect_welfare",
    "random_assignment",
    "run_dynamics",
    "sample_population",
    "services_on_road",
    "social_optimum",
    "utility",
    "utility_terms",
    "value",
    "verify_nash",
    "welfare",
]
