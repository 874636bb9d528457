import numpy as np
import pytest

from hybridfide.basis import BasisConfig
from hybridfide.expr import parse
from hybridfide.system import ProblemSpec

CFG = BasisConfig(3, 4)


def example_problems():
    """The three worked equations, written directly rather than loaded from files."""
    return {
        "ex1": ProblemSpec(3, 2, 2, None, parse("-s*t"),
                           parse("exp(t) - (t/4)*(exp(2)+1)"), (1, 1, 1)),
        "ex2": ProblemSpec(2, 0, 1, None, parse("-t"), parse("2 - t/2"), (0, 0)),
        "ex3": ProblemSpec(1, 0, 0, None, parse("-s*t"), parse("6*t^2 - t/2"), (0,)),
    }


EXACT = {"ex1": np.exp, "ex2": lambda t: t ** 2, "ex3": lambda t: 2 * t ** 3}


@pytest.fixture(params=["ex1", "ex2", "ex3"])
def example(request):
    return request.param, example_problems()[request.param]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
