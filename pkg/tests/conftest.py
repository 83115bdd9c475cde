import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from opal import load_fixture, to_buchi_final  # noqa: E402

settings.register_profile(
    "opal", max_examples=25, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("opal")


@pytest.fixture(scope="session")
def db():
    return load_fixture("db_queries").payload


@pytest.fixture(scope="session")
def irq():
    return load_fixture("interrupts").payload


@pytest.fixture(scope="session")
def restricted():
    return load_fixture("interrupts_restricted").payload


@pytest.fixture(scope="session")
def l1():
    """The L1 automaton read with final-state acceptance."""
    return to_buchi_final(load_fixture("L1_bfae").payload)


@pytest.fixture(scope="session")
def inf_a():
    return to_buchi_final(load_fixture("inf_a_dopbea").payload)


@pytest.fixture(scope="session")
def l2():
    return load_fixture("L2_dbfa").payload


@pytest.fixture(scope="session")
def m_db(db):
    return db.opm


@pytest.fixture(scope="session")
def m_int(irq):
    return irq.opm


@pytest.fixture(scope="session")
def m_fact():
    return load_fixture("factorization_example").payload.opm


# acceptance criteria results, reported at the end of the session
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, title, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} [{n}] {title}: {detail}")
