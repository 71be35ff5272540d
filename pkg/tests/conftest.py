import numpy as np
from hypothesis import settings, strategies as st

from fatmax.core import SampledClass

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def grid_classes(draw, max_rows=5, max_points=4, lo=-3, hi=3):
    n = draw(st.integers(1, max_rows))
    m = draw(st.integers(1, max_points))
    vals = draw(st.lists(st.lists(st.integers(lo, hi), min_size=m, max_size=m), min_size=n, max_size=n))
    return SampledClass(np.array(vals, dtype=float))


gammas = st.sampled_from([0.5, 1.0, 1.5, 2.0])


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
