from __future__ import annotations

import pytest

import acceptance_log
from mapkit import Topology, build_topology


@pytest.fixture(scope="session")
def mesh444() -> Topology:
    return build_topology("mesh", (4, 4, 4))


@pytest.fixture(scope="session")
def torus444() -> Topology:
    return build_topology("torus", (4, 4, 4))


@pytest.fixture(scope="session")
def haec444() -> Topology:
    return build_topology("haec_box", (4, 4, 4))


@pytest.fixture(scope="session")
def haecfull444() -> Topology:
    return build_topology("haec_box", (4, 4, 4), wireless_full=True)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not acceptance_log.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance_log.summary_lines():
        terminalreporter.write_line(line)
