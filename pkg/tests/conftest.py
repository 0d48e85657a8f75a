import pytest

from desing import CenterStrategy, Ideal, Ring, collect_divisors, parse_poly, resolve

# Scripted centers for x^5 + y^2 + z^2: three point blow-ups followed by the
# two exceptional lines of the third one.
A4_CENTERS = {
    "1": ["x", "y", "z"],
    "1.1": ["x1_0", "x1_1", "x1_2"],
    "1.1.1": ["x2_0", "x2_1", "x2_2"],
    "1.1.1.2": ["x3_0", "x3_1"],
    "1.1.1.3": ["x3_0", "x3_2"],
}

# Same resolution with two superfluous point blow-ups on already SNC charts.
A4_EXTRA_CENTERS = dict(A4_CENTERS, **{"1.2": ["x1_0", "x1_1", "x1_2"], "1.1.1.1": ["x3_0", "x3_1", "x3_2"]})

CUSP_CENTERS = {"1": ["x", "y"], "1.1": ["x1_0", "x1_1"], "1.1.2": ["x2_0", "x2_1"]}
CUSP_EXTRA_CENTERS = dict(CUSP_CENTERS, **{"1.1.2.1": ["x3_0", "x3_1"]})


def hypersurface(text, names):
    R = Ring(names)
    return Ideal(R, [parse_poly(text, R)])


def run(text, names, centers=None):
    strategy = CenterStrategy.scripted(centers) if centers else CenterStrategy()
    tree = resolve(hypersurface(text, names), strategy)
    return tree, collect_divisors(tree)


@pytest.fixture(scope="session")
def a4():
    return run("x^5+y^2+z^2", "xyz", A4_CENTERS)


@pytest.fixture(scope="session")
def a4_default():
    return run("x^5+y^2+z^2", "xyz")


@pytest.fixture(scope="session")
def a4_extra():
    return run("x^5+y^2+z^2", "xyz", A4_EXTRA_CENTERS)


@pytest.fixture(scope="session")
def cusp():
    return run("y^2-x^3", "xy", CUSP_CENTERS)


@pytest.fixture(scope="session")
def cusp_default():
    return run("y^2-x^3", "xy")


@pytest.fixture(scope="session")
def cusp_extra():
    return run("y^2-x^3", "xy", CUSP_EXTRA_CENTERS)


@pytest.fixture(scope="session")
def a1():
    return run("x^2+y^2+z^2", "xyz")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
