"""Independent reference computations used only by the tests."""

import itertools
import math
from fractions import Fraction


def simulate_shares(K0, weights, values):
    """Major-setup share rates by walking every order epoch of one full cycle.

    ``values`` are interval lengths (powers of two times a common base).  Each
    epoch ``t`` that is a multiple of the smallest interval triggers a joint
    order for every retailer whose interval divides ``t``; the order's K0 is
    split by weight (equally if the whole group has zero weight).
    """
    vals = [Fraction(v) for v in values]
    w = [Fraction(x) for x in weights]
    step = min(vals)
    horizon = max(vals)
    paid = [Fraction(0)] * len(vals)
    k = 1
    while k * step <= horizon:
        t = k * step
        group = [j for j, v in enumerate(vals) if (t / v).denominator == 1]
        total = sum(w[j] for j in group)
        for j in group:
            paid[j] += Fraction(K0) * (w[j] / total if total > 0 else Fraction(1, len(group)))
        k += 1
    return [float(p / horizon) for p in paid]


def largest_pot_le(value, base=1.0, lo=-200, hi=200):
    """Scan integer exponents for the largest base * 2**z <= value."""
    best = None
    for z in range(lo, hi):
        if math.ldexp(base, z) <= value:
            best = z
    return best


def brute_force_min_policy_cost(cost_fn, windows):
    return min(cost_fn(exps) for exps in itertools.product(*windows))
