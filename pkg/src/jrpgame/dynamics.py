"""Better-response dynamics for WPS games.

``run_dynamics`` starts at the centralized policy and lets retailers double
their intervals while that strictly lowers their own cost; the fixed point is
the least (and payoff-dominant) Nash equilibrium.  ``wpsh_fast`` is the
single-pass variant for weights ``w_i = H_i``.
"""

from __future__ import annotations

import json
import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .centralized import centralized_policy, partition_uv
from .core import Instance, Policy, StrategySet, coalition_weight, share_fraction

__all__ = [
    "HalvingReachedError",
    "Move",
    "DynamicsTrace",
    "coalition_below",
    "gain_by_doubling",
    "gain_by_halving",
    "run_dynamics",
    "wpsh_fast",
    "resolve_order",
    "total_move_bound",
]


class HalvingReachedError(AssertionError):
    """A profitable halving appeared during the dynamics; that is a bug."""


@dataclass(frozen=True)
class Move:
    round: int
    retailer_id: int
    old_exponent: int
    new_exponent: int
    kind: str = "double"

    def to_dict(self) -> dict:
        return {
            "round": self.round,
            "retailer": self.retailer_id,
            "old_exponent": self.old_exponent,
            "new_exponent": self.new_exponent,
            "kind": self.kind,
        }


@dataclass
class DynamicsTrace:
    policy: Policy
    moves: list[Move] = field(default_factory=list)
    rounds: int = 0

    def to_jsonl(self) -> str:
        return "".join(json.dumps(m.to_dict()) + "\n" for m in self.moves)


def _doubling_pays(h: float, k: float, k0: float, t: float, share: float) -> bool:
    # squared form of T_i < sqrt((K_i + share K0) / (2 H_i))
    return 2.0 * h * t * t < k + share * k0


def _halving_pays(h: float, k: float, k0: float, t: float, share: float) -> bool:
    # squared form of T_i > sqrt(2 (K_i + share K0) / H_i)
    return h * t * t > 2.0 * (k + share * k0)


def coalition_below(policy: Policy, i: int) -> tuple[int, ...]:
    """Positions ``j`` with ``T_j <= T_i`` (always includes ``i``)."""
    zi = policy.exponents[i]
    return tuple(j for j, z in enumerate(policy.exponents) if z <= zi)


def gain_by_doubling(inst: Instance, w: Sequence[float], policy: Policy, i: int) -> bool:
    group = coalition_below(policy, i)
    share = share_fraction(w[i], coalition_weight(w, group), len(group))
    r = inst.retailers[i]
    return _doubling_pays(r.holding, r.minor_setup, inst.major_setup, inst.interval(policy.exponents[i]), share)


def gain_by_halving(
    inst: Instance,
    w: Sequence[float],
    policy: Policy,
    i: int,
    strategies: StrategySet | None = None,
) -> bool:
    """Whether halving strictly lowers ``f_i``; the group is evaluated at ``T_i / 2``."""
    zi = policy.exponents[i]
    if strategies is not None and zi - 1 < strategies.lower[i]:
        return False
    group = [j for j, z in enumerate(policy.exponents) if z <= zi - 1 and j != i] + [i]
    share = share_fraction(w[i], coalition_weight(w, group), len(group))
    r = inst.retailers[i]
    return _halving_pays(r.holding, r.minor_setup, inst.major_setup, inst.interval(zi), share)


class _Coalitions:
    """Exact per-level weight totals.

    Weights are scaled to integers over a common power-of-two denominator, so
    group totals are exact and ``total / den`` is the correctly rounded sum,
    identical to ``math.fsum`` over the same members.
    """

    def __init__(self, weights: Sequence[float], exps: Sequence[int]):
        ratios = [float(x).as_integer_ratio() for x in weights]
        self.den = max(q for _, q in ratios)
        self.iw = [p * (self.den // q) for p, q in ratios]
        self.level_w: dict[int, int] = defaultdict(int)
        self.level_n: dict[int, int] = defaultdict(int)
        for j, z in enumerate(exps):
            self.level_w[z] += self.iw[j]
            self.level_n[z] += 1

    def upto(self, z: int) -> tuple[int, int]:
        tw = tn = 0
        for level, lw in self.level_w.items():
            if level <= z:
                tw += lw
                tn += self.level_n[level]
        return tw, tn

    def move(self, j: int, old: int, new: int) -> None:
        self.level_w[old] -= self.iw[j]
        self.level_n[old] -= 1
        if self.level_n[old] == 0:
            del self.level_w[old]
            del self.level_n[old]
        self.level_w[new] += self.iw[j]
        self.level_n[new] += 1

    def share(self, w_i: float, total: int, count: int) -> float:
        return share_fraction(w_i, total / self.den, count)


def resolve_order(inst: Instance, order: str | Sequence[int] | None) -> list[int]:
    """Update order as retailer positions.

    ``None`` means ascending id; a sequence lists retailer ids; the string
    ``"random:SEED"`` shuffles with a seeded ``random.Random``.
    """
    if order is None:
        return sorted(range(inst.n), key=lambda i: inst.retailers[i].id)
    if isinstance(order, str):
        kind, _, seed = order.partition(":")
        if kind != "random":
            ids = [int(x) for x in order.split(",") if x.strip()]
            return resolve_order(inst, ids)
        perm = list(range(inst.n))
        random.Random(int(seed) if seed else 0).shuffle(perm)
        return perm
    positions = [inst.index_of(rid) for rid in order]
    if sorted(positions) != list(range(inst.n)):
        raise ValueError("update order must be a permutation of the retailer ids")
    return positions


def run_dynamics(
    inst: Instance,
    w: Sequence[float],
    order: str | Sequence[int] | None = None,
    check_halving: bool = True,
) -> DynamicsTrace:
    """Better-response dynamics from T^c until a full sweep makes no move."""
    positions = resolve_order(inst, order)
    start = centralized_policy(inst)
    exps = list(start.exponents)
    weights = [float(x) for x in w]
    coal = _Coalitions(weights, exps)
    k0 = inst.major_setup
    params = [(r.holding, r.minor_setup, r.id) for r in inst.retailers]
    trace = DynamicsTrace(policy=start)

    rounds = 0
    moved = True
    while moved:
        moved = False
        rounds += 1
        for i in positions:
            h, k, rid = params[i]
            z = exps[i]
            t = inst.interval(z)
            if check_halving:
                tw, tn = coal.upto(z - 1)
                share = coal.share(weights[i], tw + coal.iw[i], tn + 1)
                if _halving_pays(h, k, k0, t, share):
                    raise HalvingReachedError(f"retailer {rid} could profitably halve at exponent {z}")
            tw, tn = coal.upto(z)
            if _doubling_pays(h, k, k0, t, coal.share(weights[i], tw, tn)):
                coal.move(i, z, z + 1)
                exps[i] = z + 1
                trace.moves.append(Move(rounds, rid, z, z + 1))
                moved = True
    trace.rounds = rounds
    trace.policy = Policy(tuple(exps), inst.base)
    return trace


def wpsh_fast(inst: Instance) -> DynamicsTrace:
    """One pass in descending ``K_i / H_i`` order under weights ``H_i``."""
    part = partition_uv(inst)
    start = centralized_policy(inst, part)
    exps = list(start.exponents)
    weights = list(inst.H)
    coal = _Coalitions(weights, exps)
    k0 = inst.major_setup
    order = sorted(range(inst.n), key=lambda i: (inst.retailers[i].ratio, inst.retailers[i].id), reverse=True)
    trace = DynamicsTrace(policy=start, rounds=1)
    for i in order:
        r = inst.retailers[i]
        z = exps[i]
        tw, tn = coal.upto(z)
        if _doubling_pays(r.holding, r.minor_setup, k0, inst.interval(z), coal.share(weights[i], tw, tn)):
            coal.move(i, z, z + 1)
            exps[i] = z + 1
            trace.moves.append(Move(1, r.id, z, z + 1))
    trace.policy = Policy(tuple(exps), inst.base)
    return trace


def total_move_bound(strategies: StrategySet, start: Policy) -> int:
    """Moves available to the dynamics: the distance from T^c to each window top."""
    return sum(max(0, hi - z) for hi, z in zip(strategies.upper, start.exponents))
