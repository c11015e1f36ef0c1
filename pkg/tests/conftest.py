import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from cotree_lab.formula import random_formula  # noqa: E402
from cotree_lab.poset import random_coforest, random_cotree  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def cotrees(max_size=6):
    return st.builds(random_cotree, st.integers(1, max_size), st.integers(0, 10**6))


def coforests(max_size=6):
    return st.builds(random_coforest, st.integers(1, max_size), st.integers(0, 10**6))


@st.composite
def formulas(draw, names=("p", "q"), depth=3):
    import random

    return random_formula(random.Random(draw(st.integers(0, 10**9))), list(names), depth)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import SUMMARY
    except ImportError:
        return
    if SUMMARY:
        terminalreporter.section("acceptance criteria")
        for line in sorted(SUMMARY, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
