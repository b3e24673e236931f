import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from twopres import presio
from twopres.fixtures import path
from twopres.terms import GeneratingData

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ARROW_NAMES = "fghk"


def chain(k):
    """Linear quiver o0 -f-> o1 -g-> o2 ... with k arrows."""
    X = GeneratingData()
    objs = [X.add_object(f"o{i}") for i in range(k + 1)]
    names = ARROW_NAMES if k <= len(ARROW_NAMES) else [f"a{i}" for i in range(k)]
    arrows = [X.add_arrow(names[i], f"o{i}", f"o{i + 1}") for i in range(k)]
    return X, objs, arrows


def load(name):
    return presio.read(path(name))


@pytest.fixture
def z2_swap():
    return load("z2_swap.2pres").action()


@pytest.fixture
def trivial_point():
    return load("trivial_point.2pres").action()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance")
    for line in sorted(mod.RESULTS, key=lambda l: int(l.split()[1])):
        terminalreporter.write_line(line)
