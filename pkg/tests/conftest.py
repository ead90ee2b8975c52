import random

import pytest

from securenc.ffmath import GroupParams, gen_group_params
from securenc.homohash import gen_hash_params, hash_params_from_exponents

TOY_GROUP = GroupParams(p=11, q=23, g=2)
TOY_EXPONENTS = (3, 5, 7, 2)


@pytest.fixture(scope="session")
def toy_group():
    return TOY_GROUP


@pytest.fixture(scope="session")
def toy_keys():
    """n = 2 toy hash over p=11, q=23, g=2 with u = (3, 5, 7, 2)."""
    return hash_params_from_exponents(TOY_GROUP, TOY_EXPONENTS)


@pytest.fixture(scope="session")
def full_group():
    return gen_group_params(320, 1024, seed=2024)


@pytest.fixture(scope="session")
def full_keys(full_group):
    return gen_hash_params(full_group, 8, seed=7)


@pytest.fixture
def rng():
    return random.Random(12345)


# ---------------------------------------------------------------------------
# one PASS/FAIL line per acceptance criterion in the terminal summary

_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance[report.nodeid.split("::")[-1]] = report.outcome.upper()


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_acceptance.items(), key=lambda kv: int(kv[0].split("_")[1][2:])):
        status = "PASS" if outcome == "PASSED" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
