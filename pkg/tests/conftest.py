from __future__ import annotations

import pytest

from boolsys.boolean_core import FiniteCofinite
from boolsys.dynamics import KILL, BooleanDynamicalSystem, Shift, TailAction, finite_system


def make_s1():
    return finite_system(["u", "v"], {"a": {"u": ["u"]}, "b": {"u": ["v"]}})


def make_s2():
    return finite_system(["w"], {"b": {"w": ["w"]}, "c": {"w": ["w"]}})


def make_s3():
    return finite_system(["x"], {"a": {"x": ["x"]}})


def make_s4():
    z = FiniteCofinite("Z")
    return BooleanDynamicalSystem(
        z,
        {
            "a": TailAction(z, {0: z.point(0)}, KILL, 0),
            "b": TailAction(z, {}, Shift(1), 0),
            "c": TailAction(z, {}, Shift(-1), 0),
        },
    )


def make_example3():
    """Over N: one label sending the point 0 onto the cofinite set N - {0}, killing everything else."""
    n = FiniteCofinite("N")
    return BooleanDynamicalSystem(n, {"alpha": TailAction(n, {0: n.cofinite([0])}, KILL, 0)})


def o_n(n: int):
    return finite_system(["v"], {f"e{i}": {"v": ["v"]} for i in range(1, n + 1)})


@pytest.fixture
def s1():
    return make_s1()


@pytest.fixture
def s2():
    return make_s2()


@pytest.fixture
def s3():
    return make_s3()


@pytest.fixture
def s4():
    return make_s4()


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
