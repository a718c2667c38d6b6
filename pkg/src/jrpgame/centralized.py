"""Optimal centralized power-of-two policy and the U/V partition."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .core import Instance, Policy, pot_round

__all__ = [
    "Partition",
    "partition_uv",
    "s_oracle",
    "centralized_policy",
    "pot_residual",
    "S_ORACLE_LIMIT",
]

S_ORACLE_LIMIT = 20


@dataclass(frozen=True)
class Partition:
    """Joint-order group ``U`` (positions) and individual-EOQ group ``V``.

    ``s`` is the critical ratio ``(K0 + K(U)) / H(U)``; ``i_star`` is the
    position of the last member of ``U`` in ascending ``K_i / H_i`` order.
    """

    U: tuple[int, ...]
    V: tuple[int, ...]
    s: float
    i_star: int


def _ratio_order(inst: Instance) -> list[int]:
    return sorted(range(inst.n), key=lambda i: (inst.retailers[i].ratio, inst.retailers[i].id))


def partition_uv(inst: Instance) -> Partition:
    order = _ratio_order(inst)
    k_sum = inst.major_setup
    h_sum = 0.0
    last = 0
    s_at_last = None
    for j, pos in enumerate(order):
        r = inst.retailers[pos]
        k_sum += r.minor_setup
        h_sum += r.holding
        # (K0 + K(prefix)) / H(prefix) >= K_j / H_j, compared without division
        if k_sum * r.holding >= r.minor_setup * h_sum:
            last = j
            s_at_last = (k_sum, h_sum)
    k_u, h_u = s_at_last
    u = tuple(sorted(order[: last + 1]))
    v = tuple(sorted(order[last + 1:]))
    return Partition(U=u, V=v, s=k_u / h_u, i_star=order[last])


def s_oracle(inst: Instance, limit: int = S_ORACLE_LIMIT) -> float:
    """min over nonempty S of (K0 + K(S)) / H(S), by exhaustive enumeration."""
    if inst.n > limit:
        raise ValueError(f"s_oracle limited to n <= {limit}, got n={inst.n}")
    best = math.inf
    k = inst.K
    h = inst.H
    for size in range(1, inst.n + 1):
        for subset in itertools.combinations(range(inst.n), size):
            val = (inst.major_setup + math.fsum(k[j] for j in subset)) / math.fsum(h[j] for j in subset)
            best = min(best, val)
    return best


def centralized_policy(inst: Instance, partition: Partition | None = None) -> Policy:
    """T^c: ``pot(sqrt(s))`` on ``U`` and ``pot(sqrt(K_i / H_i))`` on ``V``."""
    if partition is None:
        partition = partition_uv(inst)
    joint = pot_round(math.sqrt(partition.s), inst.base).exponent
    exps = [joint] * inst.n
    for i in partition.V:
        exps[i] = pot_round(math.sqrt(inst.retailers[i].ratio), inst.base).exponent
    return Policy(tuple(exps), inst.base)


def pot_residual(inst: Instance, partition: Partition, policy_c: Policy, i: int) -> float:
    """alpha with T^c_i = alpha * (unrounded optimum); lies in (1/sqrt 2, sqrt 2]."""
    if i in partition.V:
        target = math.sqrt(inst.retailers[i].ratio)
    else:
        target = math.sqrt(partition.s)
    return inst.interval(policy_c.exponents[i]) / target
