import json
import math
import random

import pytest

from jrpgame.centralized import partition_uv
from jrpgame.core import validate_instance
from jrpgame.generators import gen_adaptive_h, gen_random, random_estimates
from jrpgame.rules import WeightVector, epsilon_max, gamma_d, gamma_ratio, make_weights, parse_rule


def test_private_pair_weights(pair):
    assert make_weights("wps_o", pair).weights == (1.0, 0.0)
    assert make_weights("wps_h", pair).weights == (1.0, 1.0)
    assert make_weights("equal", pair).weights == (1.0, 1.0)
    assert gamma_ratio(pair, make_weights("wps_o", pair)) == math.inf
    assert gamma_ratio(pair, make_weights("equal", pair)) == 1.0


def test_gamma_four_for_harmonic_rates():
    rows = [{"id": i + 1, "K": 0, "h": h, "d": 2} for i, h in enumerate([1, 1 / 2, 1 / 3, 1 / 4])]
    inst = validate_instance({"K0": 1, "retailers": rows})
    assert gamma_ratio(inst, make_weights("equal", inst)) == pytest.approx(4.0, rel=1e-15)
    assert gamma_d(inst) == pytest.approx(4.0, rel=1e-15)
    assert gamma_ratio(inst, make_weights("wps_d", inst)) == pytest.approx(4.0, rel=1e-15)
    assert gamma_ratio(inst, make_weights("wps_h", inst)) == pytest.approx(1.0, rel=1e-15)


def test_wps_hat_exact_estimates_is_wps_h(pair):
    w = make_weights("wps_hat", pair, estimates=[1.0, 1.0])
    assert w.weights == make_weights("wps_h", pair).weights
    assert epsilon_max(pair, w.estimates) == 1.0


def test_wps_hat_gamma_at_most_eps_squared():
    rng = random.Random(1)
    for _ in range(500):
        inst = gen_random(rng.randint(1, 10), rng.randrange(10**9))
        est = random_estimates(inst, rng.randrange(10**9), eps_max=rng.uniform(1, 4))
        w = make_weights("wps_hat", inst, estimates=est)
        eps = epsilon_max(inst, est)
        assert gamma_ratio(inst, w) <= eps * eps * (1 + 1e-12)


def test_wps_o_zero_exactly_on_v():
    rng = random.Random(2)
    for _ in range(500):
        inst = gen_random(rng.randint(1, 10), rng.randrange(10**9))
        part = partition_uv(inst)
        w = make_weights("wps_o", inst)
        assert min(w) >= 0
        for i in part.V:
            assert w[i] == 0.0
        for i in part.U:
            expected = (inst.retailers[i].holding * part.s - inst.retailers[i].minor_setup) / inst.major_setup
            assert w[i] == pytest.approx(max(0.0, expected), abs=1e-12)
        # weights over U sum to one when K0 is the only shared cost
        assert math.fsum(w) == pytest.approx(1.0, rel=1e-9)


def test_adaptive_h_wps_d_equals_equal():
    inst = gen_adaptive_h(n=5)
    assert gamma_ratio(inst, make_weights("wps_d", inst)) == gamma_ratio(inst, make_weights("equal", inst))


def test_weight_vector_validation():
    with pytest.raises(ValueError):
        WeightVector((1.0, -1.0))
    with pytest.raises(ValueError):
        WeightVector((0.0, 0.0))
    with pytest.raises(ValueError):
        WeightVector((1.0,), rule="bogus")
    assert WeightVector((0.0,)).weights == (0.0,)


def test_custom_by_id_mapping(pair):
    w = make_weights("custom", pair, weights={"2": 3, "1": 1})
    assert w.weights == (1.0, 3.0)
    with pytest.raises(ValueError):
        make_weights("custom", pair, weights=[1.0])
    with pytest.raises(ValueError):
        make_weights("wps_hat", pair)


def test_parse_rule(pair, tmp_path):
    path = tmp_path / "est.json"
    path.write_text(json.dumps([2.0, 1.0]))
    assert parse_rule("wps-hat:" + str(path), pair).weights == (2.0, 1.0)
    assert parse_rule("WPS-H", pair).rule == "wps_h"
    with pytest.raises(ValueError):
        parse_rule("custom", pair)
    with pytest.raises(ValueError):
        parse_rule("equal:x", pair)
    with pytest.raises(ValueError):
        parse_rule("nope", pair)
