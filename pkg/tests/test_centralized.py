import itertools
import math
import random

import pytest

from jrpgame.centralized import centralized_policy, partition_uv, pot_residual, s_oracle
from jrpgame.core import Policy, system_cost, validate_instance
from jrpgame.generators import gen_random, gen_symmetric_poa


def inst_of(k0, rows):
    return validate_instance({"K0": k0, "retailers": [{"id": i + 1, "K": k, "h": h, "d": d} for i, (k, h, d) in enumerate(rows)]})


def test_private_pair_partition(pair):
    part = partition_uv(pair)
    assert part.U == (0, 1) and part.V == ()
    assert part.s == 6.0
    assert centralized_policy(pair).values == (2.0, 2.0)
    assert system_cost(pair, centralized_policy(pair)) == 10.0


@pytest.mark.parametrize("n", [2, 3, 4, 8, 16])
def test_symmetric_s(n):
    inst = gen_symmetric_poa(n)
    part = partition_uv(inst)
    assert part.U == tuple(range(n))
    assert part.s == pytest.approx(1 / n, rel=1e-15)


def test_high_minor_cost_goes_to_v():
    inst = inst_of(1, [(0.1, 1, 2), (100, 1, 2)])
    part = partition_uv(inst)
    assert part.U == (0,) and part.V == (1,)
    assert part.s == pytest.approx(1.1, rel=1e-15)
    tc = centralized_policy(inst, part)
    # sqrt(1.1) -> 1, sqrt(100) -> 8
    assert tc.values == (1.0, 8.0)


def test_single_retailer(single):
    part = partition_uv(single)
    assert part.U == (0,) and part.s == 1.0
    assert centralized_policy(single).values == (1.0,)


def test_s_matches_subset_oracle():
    rng = random.Random(3)
    for _ in range(1000):
        inst = gen_random(rng.randint(1, 12), rng.randrange(10**9))
        assert partition_uv(inst).s == pytest.approx(s_oracle(inst), rel=1e-12)


def test_s_oracle_size_limit():
    with pytest.raises(ValueError):
        s_oracle(gen_random(21, 0))


def test_uv_characterization():
    rng = random.Random(4)
    for _ in range(1000):
        inst = gen_random(rng.randint(1, 12), rng.randrange(10**9))
        part = partition_uv(inst)
        tol = 1e-12 * part.s
        for i in part.U:
            assert inst.retailers[i].ratio <= part.s + tol
        for i in part.V:
            assert inst.retailers[i].ratio > part.s - tol


def test_residuals_in_range():
    rng = random.Random(5)
    for _ in range(500):
        inst = gen_random(rng.randint(1, 10), rng.randrange(10**9))
        part = partition_uv(inst)
        tc = centralized_policy(inst, part)
        for i in range(inst.n):
            a = pot_residual(inst, part, tc, i)
            assert 1 / math.sqrt(2) - 1e-15 < a <= math.sqrt(2) + 1e-15


def test_centralized_optimal_over_nearby_pot_policies():
    rng = random.Random(6)
    for _ in range(300):
        inst = gen_random(rng.randint(1, 3), rng.randrange(10**9))
        tc = centralized_policy(inst)
        best = system_cost(inst, tc)
        grid = [range(z - 6, z + 7) for z in tc.exponents]
        for exps in itertools.product(*grid):
            assert system_cost(inst, Policy(exps)) >= best * (1 - 1e-12)
