import os

import pytest
from hypothesis import HealthCheck, settings

from lsboundary import parse_surface_spec
from lsboundary.zoo import ZooRule, make_zoo_surface, parse_rule

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def genus2_doc(lengths=(2.0, 2.0, 2.0), twists=(0.0, 0.0, 0.0)):
    return {"pants": ["A", "B"],
            "cuffs": [{"id": f"a{i + 1}", "end_a": f"A.{i + 1}", "end_b": f"B.{i + 1}",
                       "length": lengths[i], "twist": twists[i]} for i in range(3)]}


def handle_doc(l=2.0, boundary=1.0, twist=0.0):
    return {"pants": ["H"],
            "cuffs": [{"id": "a", "end_a": "H.1", "end_b": "H.2", "length": l, "twist": twist},
                      {"id": "b", "end_a": "H.3", "length": boundary}]}


def flute(N=20, cuff="const:2", twist="const:0"):
    return make_zoo_surface(ZooRule("flute", parse_rule(cuff), parse_rule(twist), N=N))


@pytest.fixture
def genus2():
    return parse_surface_spec(genus2_doc())


@pytest.fixture
def flute20():
    return flute(20)


@pytest.fixture(scope="session")
def flute_small():
    return flute(6, "wave:2:1", "wave:0.3:1")


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
