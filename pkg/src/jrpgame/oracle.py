"""Exhaustive pure Nash equilibrium enumeration on small instances.

Deviations are checked against every point of the strategy window, not just
the neighbouring double/halve moves, so this module stays independent of the
single-step jump conditions used by the dynamics.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Sequence

from .centralized import centralized_policy
from .core import Instance, Policy, StrategySet, major_share, strategy_set, system_cost

__all__ = [
    "DEFAULT_BUDGET",
    "BudgetExceeded",
    "EquilibriumSet",
    "is_nash",
    "enumerate_nash",
    "select_least",
    "select_payoff_dominant",
    "oracle_budget",
]

DEFAULT_BUDGET = 10**7

# relative slack when comparing per-retailer costs across different equilibria
DOMINANCE_RTOL = 1e-12


class BudgetExceeded(RuntimeError):
    """The policy grid is larger than the configured enumeration budget."""


def oracle_budget() -> int:
    env = os.environ.get("JRP_ORACLE_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _cost(inst: Instance, w: Sequence[float], exps: Sequence[int], i: int) -> float:
    r = inst.retailers[i]
    t = inst.interval(exps[i])
    return r.holding * t + r.minor_setup / t + major_share(inst, w, exps, i)


def is_nash(
    inst: Instance,
    w: Sequence[float],
    policy: Policy,
    strategies: StrategySet | None = None,
) -> bool:
    """True when no retailer has a strictly cheaper interval in its window."""
    if strategies is None:
        strategies = strategy_set(inst, w)
    exps = list(policy.exponents)
    for i in range(inst.n):
        current = _cost(inst, w, exps, i)
        zi = exps[i]
        for z in strategies.exponents(i):
            if z == zi:
                continue
            exps[i] = z
            better = _cost(inst, w, exps, i) < current
            exps[i] = zi
            if better:
                return False
    return True


@dataclass
class EquilibriumSet:
    equilibria: list[Policy]
    retailer_costs: list[tuple[float, ...]]
    system_costs: list[float]
    lower: tuple[int, ...]
    upper: tuple[int, ...]
    mode: str
    least: Policy | None = None
    payoff_dominant: Policy | None = None
    domain: list[list[int]] = field(default_factory=list)

    def __len__(self):
        return len(self.equilibria)

    def __contains__(self, policy: Policy) -> bool:
        return any(p.exponents == policy.exponents for p in self.equilibria)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "domain": {"lower": list(self.lower), "upper": list(self.upper), "exponents": self.domain},
            "equilibria": [
                {"exponents": list(p.exponents), "T": list(p.values), "cost": c, "retailer_costs": list(rc)}
                for p, c, rc in zip(self.equilibria, self.system_costs, self.retailer_costs)
            ],
            "least": list(self.least.values) if self.least else None,
            "payoff_dominant": list(self.payoff_dominant.values) if self.payoff_dominant else None,
        }


def enumerate_nash(
    inst: Instance,
    w: Sequence[float],
    mode: str = "pruned",
    budget: int | None = None,
    strategies: StrategySet | None = None,
) -> EquilibriumSet:
    """All pure Nash equilibria on the strategy grid.

    ``full`` scans every window point.  ``pruned`` keeps only intervals at or
    above the centralized ones, which is where every equilibrium lies; the full
    mode exists to check that claim.
    """
    if mode not in ("pruned", "full"):
        raise ValueError(f"unknown enumeration mode {mode!r}")
    if strategies is None:
        strategies = strategy_set(inst, w)
    if mode == "full":
        domain = [list(strategies.exponents(i)) for i in range(inst.n)]
    else:
        tc = centralized_policy(inst)
        domain = [[z for z in strategies.exponents(i) if z >= tc.exponents[i]] for i in range(inst.n)]
    size = 1
    for d in domain:
        size *= len(d)
    limit = oracle_budget() if budget is None else budget
    if size > limit:
        raise BudgetExceeded(f"{size} policies exceed the enumeration budget of {limit}")

    found, rcosts, scosts = [], [], []
    for exps in itertools.product(*domain):
        p = Policy(exps, inst.base)
        if is_nash(inst, w, p, strategies):
            found.append(p)
            rcosts.append(tuple(_cost(inst, w, exps, i) for i in range(inst.n)))
            scosts.append(system_cost(inst, p))
    result = EquilibriumSet(
        equilibria=found,
        retailer_costs=rcosts,
        system_costs=scosts,
        lower=strategies.lower,
        upper=strategies.upper,
        mode=mode,
        domain=domain,
    )
    if found:
        result.least = select_least(result)
        result.payoff_dominant = select_payoff_dominant(inst, w, result)
    return result


def select_least(eqs: EquilibriumSet) -> Policy | None:
    """The componentwise-smallest equilibrium, if it is one."""
    if not eqs.equilibria:
        return None
    n = len(eqs.equilibria[0])
    low = tuple(min(p.exponents[i] for p in eqs.equilibria) for i in range(n))
    for p in eqs.equilibria:
        if p.exponents == low:
            return p
    return None


def select_payoff_dominant(inst: Instance, w: Sequence[float], eqs: EquilibriumSet) -> Policy | None:
    """An equilibrium that is weakly cheapest for every retailer at once."""
    costs = eqs.retailer_costs
    if not costs and eqs.equilibria:
        costs = [tuple(_cost(inst, w, p.exponents, i) for i in range(inst.n)) for p in eqs.equilibria]
    for d, cd in zip(eqs.equilibria, costs):
        if all(a <= b + DOMINANCE_RTOL * abs(b) for other in costs for a, b in zip(cd, other)):
            return d
    return None
