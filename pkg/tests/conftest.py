import pytest

from jrpgame.core import validate_instance
from jrpgame.generators import gen_k_private_pair, gen_symmetric_poa

_ACCEPTANCE = []


def record_acceptance(number, title, passed, detail=""):
    _ACCEPTANCE.append((number, title, passed, detail))


@pytest.fixture
def acceptance():
    return record_acceptance


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(_ACCEPTANCE):
        mark = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{mark}] {number:>2}. {title}" + (f" -- {detail}" if detail else ""))


@pytest.fixture
def pair():
    return gen_k_private_pair()[0]


@pytest.fixture
def sym4():
    return gen_symmetric_poa(4)


@pytest.fixture
def single():
    return validate_instance({"K0": 1, "retailers": [{"id": 1, "K": 0, "h": 1, "d": 2}]})


@pytest.fixture
def three_levels():
    """Three retailers used with the policy (1, 2, 8)."""
    return validate_instance(
        {"K0": 1, "retailers": [{"id": i, "K": 0, "h": 1, "d": 2} for i in (1, 2, 3)]}
    )
