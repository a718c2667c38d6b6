"""Lower-bound instance families and seeded random instances.

Random instances use ``random.Random`` (MT19937) seeded with an integer; the
draw order is fixed below, so a seed reproduces the same instance on every
platform running CPython.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .core import Instance, validate_instance

__all__ = [
    "PRNG_NAME",
    "RandomRanges",
    "gen_symmetric_poa",
    "gen_k_private_pair",
    "gen_adaptive_h",
    "gen_random",
    "random_estimates",
]

PRNG_NAME = "python-random-mt19937"


@dataclass(frozen=True)
class RandomRanges:
    """Log-uniform sampling ranges; ``K_i`` also has an atom at zero."""

    K0: tuple[float, float] = (0.1, 100.0)
    K: tuple[float, float] = (0.01, 10.0)
    h: tuple[float, float] = (0.1, 10.0)
    d: tuple[float, float] = (0.1, 10.0)
    k_zero_prob: float = 0.2

    def __post_init__(self):
        for name in ("K0", "K", "h", "d"):
            lo, hi = getattr(self, name)
            if not 0 < lo <= hi:
                raise ValueError(f"range {name} must satisfy 0 < lo <= hi, got {(lo, hi)}")
        if not 0 <= self.k_zero_prob <= 1:
            raise ValueError("k_zero_prob must lie in [0, 1]")


def _retailers(ks, hs, ds):
    return [{"id": i + 1, "K": k, "h": h, "d": d} for i, (k, h, d) in enumerate(zip(ks, hs, ds))]


def gen_symmetric_poa(n: int) -> Instance:
    """K0 = 1, K_i = 0, h_i = 1, d_i = 2: the symmetric anarchy witness."""
    if n < 2:
        raise ValueError("symmetric family needs n >= 2")
    return validate_instance({"base": 1.0, "K0": 1.0, "retailers": _retailers([0.0] * n, [1.0] * n, [2.0] * n)})


def gen_k_private_pair() -> tuple[Instance, Instance]:
    """Two 2-retailer instances differing only by swapped minor setup costs."""
    first = validate_instance({"base": 1.0, "K0": 5.0, "retailers": _retailers([1.0, 6.0], [1.0, 1.0], [2.0, 2.0])})
    second = validate_instance({"base": 1.0, "K0": 5.0, "retailers": _retailers([6.0, 1.0], [1.0, 1.0], [2.0, 2.0])})
    return first, second


def gen_adaptive_h(weights: Sequence[float] | None = None, n: int | None = None) -> Instance:
    """Holding rates tuned against a fixed ascending weight vector.

    ``h_i = w_i / sum_{j <= i} w_j`` with ``K0 = 1``, ``K_i = 0``, ``d_i = 2``.
    Equal weights of length ``n`` are used when ``weights`` is omitted.
    """
    if weights is None:
        if n is None or n < 1:
            raise ValueError("give weights or n >= 1")
        weights = [1.0] * n
    weights = [float(x) for x in weights]
    if n is not None and len(weights) != n:
        raise ValueError("len(weights) must equal n")
    if not weights or any(not x > 0 for x in weights):
        raise ValueError("weights must be positive")
    if any(a > b for a, b in zip(weights, weights[1:])):
        raise ValueError("weights must be sorted ascending")
    hs = []
    acc = 0.0
    for x in weights:
        acc += x
        hs.append(x / acc)
    m = len(weights)
    return validate_instance({"base": 1.0, "K0": 1.0, "retailers": _retailers([0.0] * m, hs, [2.0] * m)})


def _log_uniform(rng: random.Random, lo: float, hi: float) -> float:
    if lo == hi:
        return lo
    return math.exp(rng.uniform(math.log(lo), math.log(hi)))


def gen_random(n: int, seed: int, ranges: RandomRanges | None = None) -> Instance:
    """Seeded random instance; draws K0, then (K_i, h_i, d_i) per retailer."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ranges = ranges or RandomRanges()
    rng = random.Random(seed)
    k0 = _log_uniform(rng, *ranges.K0)
    ks, hs, ds = [], [], []
    for _ in range(n):
        zero = rng.random() < ranges.k_zero_prob
        k = _log_uniform(rng, *ranges.K)
        ks.append(0.0 if zero else k)
        hs.append(_log_uniform(rng, *ranges.h))
        ds.append(_log_uniform(rng, *ranges.d))
    return validate_instance({"base": 1.0, "K0": k0, "retailers": _retailers(ks, hs, ds)})


def random_estimates(inst: Instance, seed: int, eps_max: float = 2.0) -> list[float]:
    """Holding-rate estimates within a multiplicative factor ``eps_max``."""
    if eps_max < 1:
        raise ValueError("eps_max must be >= 1")
    rng = random.Random(seed)
    span = math.log2(eps_max)
    return [r.holding_rate * 2.0 ** rng.uniform(-span, span) for r in inst.retailers]
