"""Non-cooperative joint replenishment games under weighted proportional sharing."""

from .centralized import Partition, centralized_policy, partition_uv, s_oracle
from .core import (
    CostBreakdown,
    Instance,
    InvalidInstance,
    Policy,
    PotInterval,
    RetailerParams,
    StrategySet,
    allocate_major,
    cost_breakdown,
    pot_round,
    retailer_cost,
    strategy_set,
    system_cost,
    validate_instance,
)
from .dynamics import DynamicsTrace, gain_by_doubling, gain_by_halving, run_dynamics, wpsh_fast
from .metrics import EfficiencyReport, bound_checks, efficiency
from .oracle import BudgetExceeded, EquilibriumSet, enumerate_nash, is_nash, select_least, select_payoff_dominant
from .rules import WeightVector, gamma_ratio, make_weights

__version__ = "0.1.0"
