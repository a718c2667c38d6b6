"""Weight vectors for the weighted proportional sharing rules."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .centralized import partition_uv
from .core import Instance

__all__ = [
    "RULES",
    "WeightVector",
    "make_weights",
    "parse_rule",
    "gamma_ratio",
    "gamma_d",
    "epsilon_max",
]

RULES = ("equal", "wps_o", "wps_h", "wps_d", "wps_hat", "custom")


@dataclass(frozen=True)
class WeightVector:
    weights: tuple[float, ...]
    rule: str = "custom"
    estimates: tuple[float, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}")
        w = tuple(float(x) for x in self.weights)
        if any(not math.isfinite(x) or x < 0 for x in w):
            raise ValueError("weights must be finite and nonnegative")
        if len(w) > 1 and not any(x > 0 for x in w):
            raise ValueError("at least one weight must be positive")
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return len(self.weights)

    def __getitem__(self, i):
        return self.weights[i]

    def __iter__(self):
        return iter(self.weights)


def _aligned(values, inst: Instance, what: str) -> tuple[float, ...]:
    """Accept a list aligned with retailer order or a mapping id -> value."""
    if isinstance(values, dict):
        try:
            values = [values[str(r.id)] if str(r.id) in values else values[r.id] for r in inst.retailers]
        except KeyError as exc:
            raise ValueError(f"{what}: missing value for retailer {exc.args[0]}") from None
    values = tuple(float(v) for v in values)
    if len(values) != inst.n:
        raise ValueError(f"{what}: expected {inst.n} values, got {len(values)}")
    return values


def make_weights(
    rule: str,
    inst: Instance,
    estimates: Sequence[float] | dict | None = None,
    weights: Sequence[float] | dict | None = None,
) -> WeightVector:
    """Weight vector realizing ``rule`` on ``inst``.

    ``wps_hat`` needs holding-rate estimates ``h_hat``; ``custom`` needs the
    weights themselves.  Weights depend on the instance only, never on a policy.
    """
    rule = rule.replace("-", "_")
    if rule == "equal":
        return WeightVector(tuple(1.0 for _ in inst.retailers), "equal")
    if rule == "wps_h":
        return WeightVector(inst.H, "wps_h")
    if rule == "wps_d":
        return WeightVector(tuple(r.demand_rate for r in inst.retailers), "wps_d")
    if rule == "wps_o":
        part = partition_uv(inst)
        w = [0.0] * inst.n
        for i in part.U:
            r = inst.retailers[i]
            # K_i <= s H_i on U; clip the rounding residue of boundary retailers
            w[i] = max(0.0, (r.holding * part.s - r.minor_setup) / inst.major_setup)
        return WeightVector(tuple(w), "wps_o")
    if rule == "wps_hat":
        if estimates is None:
            raise ValueError("wps_hat requires holding-rate estimates")
        est = _aligned(estimates, inst, "estimates")
        if any(not e > 0 for e in est):
            raise ValueError("holding-rate estimates must be positive")
        w = tuple(e * r.demand_rate / 2.0 for e, r in zip(est, inst.retailers))
        return WeightVector(w, "wps_hat", est)
    if rule == "custom":
        if weights is None:
            raise ValueError("custom rule requires explicit weights")
        w = _aligned(weights, inst, "weights")
        if any(x < 0 for x in w):
            raise ValueError("custom weights must be nonnegative")
        return WeightVector(w, "custom")
    raise ValueError(f"unknown rule {rule!r}")


def parse_rule(spec: str, inst: Instance) -> WeightVector:
    """CLI rule grammar: equal | wps-o | wps-h | wps-d | wps-hat:PATH | custom:PATH."""
    name, _, path = spec.partition(":")
    name = name.strip().lower().replace("-", "_")
    if name in ("wps_hat", "custom"):
        if not path:
            raise ValueError(f"rule {spec!r} needs a file path, e.g. {name.replace('_', '-')}:values.json")
        data = json.loads(Path(path).read_text())
        if name == "wps_hat":
            return make_weights(name, inst, estimates=data)
        return make_weights(name, inst, weights=data)
    if path:
        raise ValueError(f"rule {name!r} takes no argument")
    return make_weights(name, inst)


def gamma_ratio(inst: Instance, w: Sequence[float]) -> float:
    """(max_i H_i / w_i) / (min_i H_i / w_i); ``inf`` when some w_i is zero.

    A single retailer (or an all-zero vector) gives 1.
    """
    pos = [(r.holding, wi) for r, wi in zip(inst.retailers, w) if wi > 0]
    if not pos:
        return 1.0
    if len(pos) < inst.n:
        return math.inf
    ratios = [h / wi for h, wi in pos]
    return max(ratios) / min(ratios)


def gamma_d(inst: Instance) -> float:
    rates = [r.holding_rate for r in inst.retailers]
    return max(rates) / min(rates)


def epsilon_max(inst: Instance, estimates: Sequence[float]) -> float:
    return max(max(e / r.holding_rate, r.holding_rate / e) for e, r in zip(estimates, inst.retailers))
