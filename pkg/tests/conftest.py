import sys

import pytest

import walkcent as wc

_acceptance_lines = []


def report_criterion(num, name, ok, detail=""):
    """Record one acceptance-criterion outcome line.

    The line is echoed to the unbuffered stderr (so it shows up inside a
    failure report) and replayed in the terminal summary, where it stays
    visible for passing tests despite output capture.
    """
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num:02d}: {name}"
    if detail:
        line += f" -- {detail}"
    _acceptance_lines.append(line)
    print(line, file=sys.__stderr__, flush=True)
    return line


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def p3():
    """Path 0 - 1 - 2."""
    return wc.build_graph([(0, 1), (1, 2)])


@pytest.fixture(scope="session")
def k2():
    return wc.build_graph([(0, 1)])


@pytest.fixture(scope="session")
def k3():
    return wc.build_graph([(0, 1), (0, 2), (1, 2)])


@pytest.fixture(scope="session")
def k4():
    return wc.build_graph([(i, j) for i in range(4) for j in range(i + 1, 4)])


@pytest.fixture(scope="session")
def star4():
    """Star K_{1,3} with hub 0."""
    return wc.build_graph([(0, 1), (0, 2), (0, 3)])


@pytest.fixture(scope="session")
def f2():
    """Pseudofractal generation 2: 15 vertices, 27 edges."""
    return wc.pseudofractal(2)


@pytest.fixture(scope="session")
def koch1():
    """Koch generation 1: 9 vertices, 12 edges."""
    return wc.koch(1)
