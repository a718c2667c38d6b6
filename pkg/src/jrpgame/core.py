"""Instance model, power-of-two interval arithmetic and cost formulas.

Intervals are kept as integer exponents ``z`` over the instance base period
``B`` (``T = B * 2**z``), so membership in a joint-order group is decided by
integer comparison only.  Costs are plain floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "InvalidInstance",
    "RetailerParams",
    "Instance",
    "PotInterval",
    "Policy",
    "StrategySet",
    "CostBreakdown",
    "validate_instance",
    "pot_round",
    "largest_pot_below",
    "share_fraction",
    "coalition_weight",
    "strategy_set",
    "system_cost",
    "setup_cost",
    "holding_cost",
    "allocate_major",
    "major_share",
    "retailer_cost",
    "cost_breakdown",
]

SQRT2 = math.sqrt(2.0)

# Lower strategy bound offset (in exponents below T^c) for zero-weight retailers
# with K_i = 0, where the analytic lower bound collapses to 0.
ZERO_WEIGHT_CLAMP = 4


class InvalidInstance(ValueError):
    """Raised when an instance description violates the model constraints."""


@dataclass(frozen=True)
class RetailerParams:
    id: int
    minor_setup: float
    holding_rate: float
    demand_rate: float

    @property
    def holding(self) -> float:
        """H_i = h_i * d_i / 2, holding cost per unit time per unit of interval."""
        return self.holding_rate * self.demand_rate / 2.0

    @property
    def ratio(self) -> float:
        """K_i / H_i."""
        return self.minor_setup / self.holding


@dataclass(frozen=True)
class Instance:
    major_setup: float
    retailers: tuple[RetailerParams, ...]
    base: float = 1.0

    @property
    def n(self) -> int:
        return len(self.retailers)

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(r.id for r in self.retailers)

    @property
    def K(self) -> tuple[float, ...]:
        return tuple(r.minor_setup for r in self.retailers)

    @property
    def H(self) -> tuple[float, ...]:
        return tuple(r.holding for r in self.retailers)

    def index_of(self, retailer_id: int) -> int:
        for pos, r in enumerate(self.retailers):
            if r.id == retailer_id:
                return pos
        raise KeyError(f"unknown retailer id {retailer_id}")

    def interval(self, exponent: int) -> float:
        return math.ldexp(self.base, exponent)

    def to_dict(self) -> dict:
        return {
            "base": self.base,
            "K0": self.major_setup,
            "retailers": [
                {"id": r.id, "K": r.minor_setup, "h": r.holding_rate, "d": r.demand_rate}
                for r in self.retailers
            ],
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "Instance":
        return validate_instance(raw)


_INSTANCE_KEYS = {"base", "K0", "retailers"}
_RETAILER_KEYS = {"id", "K", "h", "d"}


def _number(value, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidInstance(f"{what} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise InvalidInstance(f"{what} must be finite")
    return value


def validate_instance(raw: dict) -> Instance:
    """Build an :class:`Instance` from the canonical JSON-like description.

    ``raw`` has keys ``base`` (optional, default 1), ``K0`` and ``retailers``,
    each retailer being ``{"id", "K", "h", "d"}``.  Unknown keys are rejected.
    """
    if not isinstance(raw, dict):
        raise InvalidInstance("instance must be a JSON object")
    unknown = set(raw) - _INSTANCE_KEYS
    if unknown:
        raise InvalidInstance(f"unknown instance fields: {sorted(unknown)}")
    if "K0" not in raw:
        raise InvalidInstance("missing field K0")
    base = _number(raw.get("base", 1.0), "base")
    if base <= 0:
        raise InvalidInstance("base period B must be positive")
    k0 = _number(raw["K0"], "K0")
    if k0 <= 0:
        raise InvalidInstance("K0 must be positive")
    items = raw.get("retailers")
    if not isinstance(items, list) or not items:
        raise InvalidInstance("retailer list must be non-empty")

    retailers = []
    seen = set()
    for pos, item in enumerate(items):
        if not isinstance(item, dict):
            raise InvalidInstance(f"retailer #{pos + 1} must be an object")
        unknown = set(item) - _RETAILER_KEYS
        if unknown:
            raise InvalidInstance(f"retailer #{pos + 1}: unknown fields {sorted(unknown)}")
        missing = _RETAILER_KEYS - set(item) - {"id"}
        if missing:
            raise InvalidInstance(f"retailer #{pos + 1}: missing fields {sorted(missing)}")
        rid = item.get("id", pos + 1)
        if isinstance(rid, bool) or not isinstance(rid, int):
            raise InvalidInstance(f"retailer #{pos + 1}: id must be an integer")
        if rid in seen:
            raise InvalidInstance(f"duplicate retailer id {rid}")
        seen.add(rid)
        k = _number(item["K"], f"retailer {rid}: K")
        h = _number(item["h"], f"retailer {rid}: h")
        d = _number(item["d"], f"retailer {rid}: d")
        if k < 0:
            raise InvalidInstance(f"retailer {rid}: minor setup K must be nonnegative")
        if h <= 0:
            raise InvalidInstance(f"retailer {rid}: holding rate h must be positive")
        if d <= 0:
            raise InvalidInstance(f"retailer {rid}: demand rate d must be positive")
        r = RetailerParams(rid, k, h, d)
        if not r.holding > 0:
            raise InvalidInstance(f"retailer {rid}: H = h*d/2 underflows to zero")
        retailers.append(r)
    return Instance(major_setup=k0, retailers=tuple(retailers), base=base)


@dataclass(frozen=True, order=True)
class PotInterval:
    """A power-of-two interval ``base * 2**exponent``."""

    exponent: int
    base: float = 1.0

    @property
    def value(self) -> float:
        return math.ldexp(self.base, self.exponent)


@dataclass(frozen=True)
class Policy:
    """One power-of-two interval per retailer, stored as exponents."""

    exponents: tuple[int, ...]
    base: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(z) for z in self.exponents))

    def __len__(self) -> int:
        return len(self.exponents)

    def __getitem__(self, i: int) -> PotInterval:
        return PotInterval(self.exponents[i], self.base)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(math.ldexp(self.base, z) for z in self.exponents)

    @property
    def t_min(self) -> float:
        return math.ldexp(self.base, min(self.exponents))

    def with_exponent(self, i: int, z: int) -> "Policy":
        exps = list(self.exponents)
        exps[i] = z
        return Policy(tuple(exps), self.base)

    def __le__(self, other: "Policy") -> bool:
        """Componentwise comparison."""
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def __ge__(self, other: "Policy") -> bool:
        return all(a >= b for a, b in zip(self.exponents, other.exponents))

    @classmethod
    def from_values(cls, values: Sequence[float], base: float = 1.0) -> "Policy":
        """Build a policy from interval values that must be exact POT points."""
        exps = []
        for v in values:
            m, e = math.frexp(v / base)
            if m != 0.5:
                raise ValueError(f"{v} is not a power-of-two multiple of base {base}")
            exps.append(e - 1)
        return cls(tuple(exps), base)


@dataclass(frozen=True)
class StrategySet:
    """Per-retailer inclusive exponent bounds of the admissible POT intervals."""

    lower: tuple[int, ...]
    upper: tuple[int, ...]
    base: float = 1.0

    def exponents(self, i: int) -> range:
        return range(self.lower[i], self.upper[i] + 1)

    def values(self, i: int) -> list[float]:
        return [math.ldexp(self.base, z) for z in self.exponents(i)]

    def size(self) -> int:
        total = 1
        for lo, hi in zip(self.lower, self.upper):
            total *= hi - lo + 1
        return total

    def contains(self, policy: Policy) -> bool:
        return all(lo <= z <= hi for z, lo, hi in zip(policy.exponents, self.lower, self.upper))


@dataclass(frozen=True)
class CostBreakdown:
    holding: tuple[float, ...]
    minor: tuple[float, ...]
    major_share: tuple[float, ...]

    @property
    def retailer_costs(self) -> tuple[float, ...]:
        return tuple(a + b + c for a, b, c in zip(self.holding, self.minor, self.major_share))

    @property
    def total(self) -> float:
        return sum(self.retailer_costs)


def pot_round(b: float, base: float = 1.0) -> PotInterval:
    """Multiplicatively nearest POT point to ``b``.

    Returns ``a = base * 2**z`` with ``z = floor(log2(b / base) + 0.5)``, so
    ``a`` lies in ``(b / sqrt 2, sqrt 2 * b]``.
    """
    if not b > 0:
        raise ValueError("pot_round requires b > 0")
    r = b / base
    z = math.floor(math.log2(r) + 0.5)
    # log2 rounding can misplace z by one near the half-exponent boundary;
    # settle it with the squared containment test a**2 <= 2 r**2 < 4 a**2.
    while math.ldexp(1.0, 2 * z) > 2.0 * r * r:
        z -= 1
    while math.ldexp(1.0, 2 * z + 2) <= 2.0 * r * r:
        z += 1
    return PotInterval(z, base)


def largest_pot_below(value: float, base: float = 1.0) -> int:
    """Largest exponent ``z`` with ``base * 2**z <= value``."""
    if not value > 0:
        raise ValueError("value must be positive")
    r = value / base
    z = math.floor(math.log2(r))
    while math.ldexp(1.0, z) > r:
        z -= 1
    while math.ldexp(1.0, z + 1) <= r:
        z += 1
    return z


def _largest_pot_below_sqrt(square: float, base: float) -> int:
    """Largest ``z`` with ``(base * 2**z)**2 <= square``."""
    r2 = square / (base * base)
    z = math.floor(math.log2(r2) / 2)
    while math.ldexp(1.0, 2 * z) > r2:
        z -= 1
    while math.ldexp(1.0, 2 * z + 2) <= r2:
        z += 1
    return z


def coalition_weight(weights: Sequence[float], members: Iterable[int]) -> float:
    """Correctly rounded total weight of ``members``."""
    return math.fsum(weights[j] for j in members)


def share_fraction(w_i: float, group_weight: float, group_size: int) -> float:
    """Fraction of one joint order's K0 paid by a member of weight ``w_i``.

    Zero-weight members pay nothing unless the whole group has zero weight, in
    which case the order is split equally.
    """
    if group_weight > 0:
        return w_i / group_weight
    return 1.0 / group_size


def _sorted_levels(exps: Sequence[int]) -> list[int]:
    return sorted(set(exps))


def allocate_major(inst: Instance, weights: Sequence[float], policy: Policy) -> tuple[float, ...]:
    """Per-retailer share ``x_i(T)`` of the major setup cost rate ``K0 / T_min``.

    A joint order contains exactly the retailers with exponent ``<= L`` for
    some level ``L``; the group ending at level ``L`` orders with frequency
    ``1/T(L) - 1/T(next level)``.
    """
    exps = policy.exponents
    n = len(exps)
    levels = _sorted_levels(exps)
    by_level: dict[int, list[int]] = {z: [] for z in levels}
    for j, z in enumerate(exps):
        by_level[z].append(j)

    # cumulative groups G_l = {j : z_j <= levels[l]}
    group_w = []
    group_n = []
    members: list[int] = []
    for z in levels:
        members.extend(by_level[z])
        group_w.append(coalition_weight(weights, members))
        group_n.append(len(members))

    k0 = inst.major_setup
    freq = []
    for l, z in enumerate(levels):
        f = 1.0 / inst.interval(z)
        if l + 1 < len(levels):
            f -= 1.0 / inst.interval(levels[l + 1])
        freq.append(f)

    # suffix sums over levels >= l: positive-weight part and equal-split part
    weighted = [0.0] * (len(levels) + 1)
    equal = [0.0] * (len(levels) + 1)
    for l in range(len(levels) - 1, -1, -1):
        if group_w[l] > 0:
            weighted[l] = weighted[l + 1] + freq[l] / group_w[l]
            equal[l] = equal[l + 1]
        else:
            weighted[l] = weighted[l + 1]
            equal[l] = equal[l + 1] + freq[l] / group_n[l]

    pos = {z: l for l, z in enumerate(levels)}
    shares = [0.0] * n
    for i, z in enumerate(exps):
        l = pos[z]
        shares[i] = k0 * (weights[i] * weighted[l] + equal[l])
    return tuple(shares)


def major_share(inst: Instance, weights: Sequence[float], exps: Sequence[int], i: int) -> float:
    """``x_i`` for a single retailer, evaluated directly from the sum formula."""
    zi = exps[i]
    levels = sorted({z for z in exps if z >= zi})
    k0 = inst.major_setup
    total = 0.0
    for l, z in enumerate(levels):
        f = 1.0 / inst.interval(z)
        if l + 1 < len(levels):
            f -= 1.0 / inst.interval(levels[l + 1])
        group = [j for j, zj in enumerate(exps) if zj <= z]
        total += f * share_fraction(weights[i], coalition_weight(weights, group), len(group)) * k0
    return total


def holding_cost(inst: Instance, policy: Policy) -> float:
    return sum(r.holding * t for r, t in zip(inst.retailers, policy.values))


def setup_cost(inst: Instance, policy: Policy) -> float:
    """Minor setups plus the major setup rate ``K0 / T_min``."""
    minor = sum(r.minor_setup / t for r, t in zip(inst.retailers, policy.values))
    return minor + inst.major_setup / policy.t_min


def system_cost(inst: Instance, policy: Policy) -> float:
    """C(T) = sum_i (H_i T_i + K_i / T_i) + K0 / T_min."""
    total = 0.0
    for r, t in zip(inst.retailers, policy.values):
        total += r.holding * t + r.minor_setup / t
    return total + inst.major_setup / policy.t_min


def cost_breakdown(inst: Instance, weights: Sequence[float], policy: Policy) -> CostBreakdown:
    vals = policy.values
    return CostBreakdown(
        holding=tuple(r.holding * t for r, t in zip(inst.retailers, vals)),
        minor=tuple(r.minor_setup / t for r, t in zip(inst.retailers, vals)),
        major_share=allocate_major(inst, weights, policy),
    )


def retailer_cost(inst: Instance, weights: Sequence[float], policy: Policy, i: int) -> float:
    """f_i(T) for the retailer at position ``i``."""
    if not 0 <= i < inst.n:
        raise IndexError(f"retailer position {i} out of range for n={inst.n}")
    r = inst.retailers[i]
    t = inst.interval(policy.exponents[i])
    return r.holding * t + r.minor_setup / t + major_share(inst, weights, policy.exponents, i)


def strategy_set(inst: Instance, weights: Sequence[float], centralized: Policy | None = None) -> StrategySet:
    """Finite POT strategy window of every retailer.

    Upper end: largest POT point ``<= sqrt(2 (K0 + K_i) / H_i)``.  Lower end:
    largest POT point ``<= sqrt((K_i + m_i K0) / (2 H_i))`` with ``m_i`` the
    smallest share the retailer can ever be charged.  When that bound is zero
    (``K_i = 0`` and ``m_i = 0``) the window starts ``ZERO_WEIGHT_CLAMP``
    exponents below the centralized interval.
    """
    k0 = inst.major_setup
    total_w = math.fsum(weights)
    lower, upper = [], []
    for i, r in enumerate(inst.retailers):
        h = r.holding
        hi = _largest_pot_below_sqrt(2.0 * (k0 + r.minor_setup) / h, inst.base)
        m = share_fraction(weights[i], total_w, inst.n)
        floor_sq = (r.minor_setup + m * k0) / (2.0 * h)
        if floor_sq > 0:
            lo = _largest_pot_below_sqrt(floor_sq, inst.base)
        else:
            if centralized is None:
                from .centralized import centralized_policy

                centralized = centralized_policy(inst)
            lo = centralized.exponents[i] - ZERO_WEIGHT_CLAMP
        assert lo <= hi, "empty strategy set"
        lower.append(lo)
        upper.append(hi)
    return StrategySet(tuple(lower), tuple(upper), inst.base)
