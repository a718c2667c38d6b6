"""Empirical price of stability / anarchy and the known efficiency bounds."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field

from .centralized import centralized_policy
from .core import Instance, Policy, setup_cost, system_cost
from .dynamics import run_dynamics
from .oracle import enumerate_nash
from .rules import WeightVector, epsilon_max, gamma_ratio

__all__ = [
    "BoundCheck",
    "EfficiencyReport",
    "efficiency",
    "bound_checks",
    "instance_digest",
    "within",
    "wpsh_pos_bound",
    "jump_bound",
    "log_gamma_bound",
    "poa_upper_bound",
    "poa_lower_bound",
    "wpshat_bound",
]

SLACK = 1e-9


def within(measured: float, bound: float, slack: float = SLACK) -> bool:
    """measured <= bound, with absolute slack near 1 and relative slack beyond."""
    return measured <= bound + slack * max(1.0, abs(bound))


def wpsh_pos_bound() -> float:
    return 1.25


def jump_bound(gamma: float) -> float:
    return 2.0 * math.sqrt(1.0 + gamma)


def _ceil_log2(x: float) -> int:
    return max(0, math.ceil(math.log2(x)))


def log_gamma_bound(gamma: float) -> float:
    return 4.0 * math.sqrt(_ceil_log2(gamma)) + 1.0 / math.sqrt(2.0) + 1.0


def poa_upper_bound(n: int) -> float:
    return 3.0 / (2.0 * math.sqrt(2.0)) * math.sqrt(n)


def poa_lower_bound(n: int) -> float:
    return math.sqrt(2.0) / 3.0 * math.sqrt(n)


def wpshat_bound(eps: float) -> float:
    by_log = 4.0 * math.sqrt(max(0, math.ceil(2.0 * math.log2(eps)))) + 1.0 / math.sqrt(2.0) + 1.0
    return min(by_log, 2.0 * math.sqrt(1.0 + eps * eps))


def instance_digest(inst: Instance) -> str:
    blob = json.dumps(inst.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass
class BoundCheck:
    name: str
    bound: float | None
    measured: float | None
    status: str  # "pass" | "fail" | "n/a"

    @property
    def ok(self) -> bool:
        return self.status != "fail"


@dataclass
class EfficiencyReport:
    digest: str
    rule: str
    n: int
    cost_c: float
    cost_w: float
    pos_algorithmic: float
    gamma_w: float
    jump_ratio: float
    setup_c: float
    setup_w: float
    moves: int
    policy_c: Policy
    policy_w: Policy
    pos_empirical: float | None = None
    poa_empirical: float | None = None
    n_equilibria: int | None = None
    epsilon_max: float | None = None
    checks: list[BoundCheck] = field(default_factory=list)

    @property
    def bounds_pass(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["policy_c"] = list(self.policy_c.values)
        out["policy_w"] = list(self.policy_w.values)
        out["bounds_pass"] = self.bounds_pass
        return out


def efficiency(
    inst: Instance,
    w: WeightVector,
    with_oracle: bool = False,
    mode: str = "pruned",
    budget: int | None = None,
) -> EfficiencyReport:
    tc = centralized_policy(inst)
    trace = run_dynamics(inst, w)
    tw = trace.policy
    cost_c = system_cost(inst, tc)
    cost_w = system_cost(inst, tw)
    report = EfficiencyReport(
        digest=instance_digest(inst),
        rule=w.rule,
        n=inst.n,
        cost_c=cost_c,
        cost_w=cost_w,
        pos_algorithmic=cost_w / cost_c,
        gamma_w=gamma_ratio(inst, w),
        jump_ratio=max(2.0 ** (a - b) for a, b in zip(tw.exponents, tc.exponents)),
        setup_c=setup_cost(inst, tc),
        setup_w=setup_cost(inst, tw),
        moves=len(trace.moves),
        policy_c=tc,
        policy_w=tw,
    )
    if w.estimates is not None:
        report.epsilon_max = epsilon_max(inst, w.estimates)
    if with_oracle:
        eqs = enumerate_nash(inst, w, mode=mode, budget=budget)
        report.n_equilibria = len(eqs)
        if eqs.system_costs:
            report.pos_empirical = min(eqs.system_costs) / cost_c
            report.poa_empirical = max(eqs.system_costs) / cost_c
    report.checks = bound_checks(report, w.rule)
    return report


def _check(name: str, measured: float | None, bound: float | None) -> BoundCheck:
    if measured is None or bound is None or not math.isfinite(bound):
        return BoundCheck(name, bound if bound is not None and math.isfinite(bound) else None, measured, "n/a")
    return BoundCheck(name, bound, measured, "pass" if within(measured, bound) else "fail")


def bound_checks(report: EfficiencyReport, rule: str) -> list[BoundCheck]:
    """Compare the measured ratios with every bound that applies to ``rule``."""
    rule = rule.replace("-", "_")
    gamma = report.gamma_w
    finite = math.isfinite(gamma)
    pos = report.pos_algorithmic
    checks = [
        _check("pos_at_least_one", 1.0, pos),
        _check("setup_not_above_centralized", report.setup_w, report.setup_c),
        _check("jump_ratio_gamma", report.jump_ratio, jump_bound(gamma) if finite else None),
        _check("pos_sqrt_gamma", pos, jump_bound(gamma) if finite else None),
        _check("pos_log_gamma", pos, log_gamma_bound(gamma) if finite else None),
        _check("poa_sqrt_n", report.poa_empirical, poa_upper_bound(report.n)),
    ]
    if report.pos_empirical is not None:
        checks.append(_check("oracle_pos_matches_dynamics", abs(report.pos_empirical - pos), 1e-12))
    if rule == "wps_h":
        checks.append(_check("wpsh_pos_1.25", pos, wpsh_pos_bound()))
    if rule == "wps_o":
        checks.append(_check("wpso_pos_one", pos, 1.0))
    if rule == "wps_hat" and report.epsilon_max is not None:
        checks.append(_check("wpshat_envelope", pos, wpshat_bound(report.epsilon_max)))
        checks.append(_check("wpshat_gamma_eps2", gamma, report.epsilon_max**2))
    return checks
