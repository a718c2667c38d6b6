import random

import pytest

from jrpgame.centralized import centralized_policy
from jrpgame.core import Policy, retailer_cost, validate_instance
from jrpgame.dynamics import run_dynamics, wpsh_fast
from jrpgame.generators import gen_random, gen_symmetric_poa
from jrpgame.oracle import (
    BudgetExceeded,
    EquilibriumSet,
    enumerate_nash,
    is_nash,
    oracle_budget,
    select_least,
    select_payoff_dominant,
)
from jrpgame.rules import make_weights


def test_is_nash_examples(pair, sym4):
    assert is_nash(pair, [1, 1], Policy((1, 2)))
    assert not is_nash(pair, [1, 1], Policy((1, 1)))
    assert is_nash(sym4, [1] * 4, Policy((0, 0, 0, 0)))
    assert is_nash(sym4, [1] * 4, Policy((-1, -1, -1, -1)))
    assert not is_nash(sym4, [1] * 4, Policy((-1, -1, 0, 0)))


def test_symmetric_four(sym4):
    eqs = enumerate_nash(sym4, make_weights("equal", sym4), mode="full")
    assert [p.values for p in eqs.equilibria] == [(0.5,) * 4, (1.0,) * 4]
    assert eqs.system_costs == [4.0, 5.0]
    assert eqs.least.values == (0.5,) * 4
    assert eqs.payoff_dominant.values == (0.5,) * 4
    assert eqs.retailer_costs[0] == (1.0,) * 4
    assert eqs.retailer_costs[1] == pytest.approx((1.25,) * 4, rel=1e-15)


def test_symmetric_two_boundary_tie():
    # sqrt(s) = sqrt(1/2) sits on a rounding boundary: (1/2, 1/2) and (1, 1) tie at cost 3
    inst = gen_symmetric_poa(2)
    w = make_weights("equal", inst)
    assert centralized_policy(inst).values == (1.0, 1.0)
    pruned = enumerate_nash(inst, w)
    assert [p.values for p in pruned.equilibria] == [(1.0, 1.0)]
    full = enumerate_nash(inst, w, mode="full")
    assert [p.values for p in full.equilibria] == [(0.5, 0.5), (1.0, 1.0)]
    assert full.system_costs == [3.0, 3.0]


def test_private_pair(pair):
    eqs = enumerate_nash(pair, [1, 1], mode="full")
    assert [p.values for p in eqs.equilibria] == [(2.0, 4.0)]
    assert eqs.least.values == (2.0, 4.0)
    assert eqs.payoff_dominant.values == (2.0, 4.0)
    assert eqs.domain == [[0, 1], [1, 2]]


def test_single_retailer_minimizer():
    inst = validate_instance({"K0": 4, "retailers": [{"id": 1, "K": 3, "h": 1, "d": 2}]})
    eqs = enumerate_nash(inst, [1.0], mode="full")
    assert len(eqs) == 1
    only = eqs.equilibria[0]
    window = range(eqs.lower[0], eqs.upper[0] + 1)
    best = min(window, key=lambda z: retailer_cost(inst, [1.0], Policy((z,)), 0))
    assert only.exponents == (best,)
    assert only.values == (2.0,)
    assert eqs.least == eqs.payoff_dominant == only


def test_selectors_on_hand_built_set():
    a, b = Policy((0, 1)), Policy((1, 0))
    eqs = EquilibriumSet([a, b], [(1.0, 2.0), (2.0, 1.0)], [3.0, 3.0], (0, 0), (1, 1), "full")
    assert select_least(eqs) is None
    inst = gen_random(2, 0)
    assert select_payoff_dominant(inst, [1, 1], eqs) is None
    single = EquilibriumSet([a], [(1.0, 2.0)], [3.0], (0, 0), (1, 1), "full")
    assert select_least(single) == a
    assert select_payoff_dominant(inst, [1, 1], single) == a


def test_budget_refusal(pair, monkeypatch):
    with pytest.raises(BudgetExceeded):
        enumerate_nash(pair, [1, 1], mode="full", budget=3)
    monkeypatch.setenv("JRP_ORACLE_BUDGET", "2")
    assert oracle_budget() == 2
    with pytest.raises(BudgetExceeded):
        enumerate_nash(pair, [1, 1], mode="full")


def test_bad_mode(pair):
    with pytest.raises(ValueError):
        enumerate_nash(pair, [1, 1], mode="partial")


def test_to_dict_shape(pair):
    out = enumerate_nash(pair, [1, 1]).to_dict()
    assert set(out) == {"mode", "domain", "equilibria", "least", "payoff_dominant"}
    assert out["least"] == [2.0, 4.0]


def test_dynamics_agree_with_oracle():
    rng = random.Random(51)
    for _ in range(60):
        inst = gen_random(rng.randint(1, 3), rng.randrange(10**9))
        for rule in ("equal", "wps_h", "wps_d", "wps_o"):
            w = make_weights(rule, inst)
            tw = run_dynamics(inst, w).policy
            full = enumerate_nash(inst, w, mode="full")
            pruned = enumerate_nash(inst, w, mode="pruned")
            assert full.least == tw and full.payoff_dominant == tw
            assert [p.exponents for p in pruned.equilibria] == [p.exponents for p in full.equilibria]
            if rule == "wps_h":
                assert wpsh_fast(inst).policy in full
            if rule == "wps_o":
                assert centralized_policy(inst) in full
