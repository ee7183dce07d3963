from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, settings
from hypothesis import strategies as st

from minkval.bodies import Polytope, Zonotope
from minkval.kernel import convex_hull_indices

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def rationals(lo=-4, hi=4, den=8):
    return st.builds(Fraction, st.integers(lo * den, hi * den), st.just(den))


def points(n, lo=-4, hi=4):
    return st.tuples(*[rationals(lo, hi) for _ in range(n)])


@st.composite
def polytopes(draw, n, min_pts=None, max_pts=9):
    pts = draw(st.lists(points(n), min_size=min_pts or n + 1, max_size=max_pts, unique=True))
    assume(convex_hull_indices(pts).dim == n)
    return Polytope(tuple(pts))


@st.composite
def zonotopes(draw, n, min_gens=1, max_gens=5):
    c = draw(points(n))
    gens = draw(st.lists(points(n, -3, 3), min_size=min_gens, max_size=max_gens))
    gens = [g for g in gens if any(g)]
    assume(gens)
    return Zonotope(c, tuple(gens))


@st.composite
def full_zonotopes(draw, n, max_gens=5):
    Z = draw(zonotopes(n, min_gens=n, max_gens=max_gens))
    assume(np.linalg.matrix_rank(np.array(Z.generators, dtype=float)) == n)
    return Z


directions = st.integers(-6, 6)


def int_direction(n):
    return st.tuples(*[directions for _ in range(n)]).filter(any)


def float_vertices(K):
    return np.array([[float(x) for x in v] for v in K.vertices])


@pytest.fixture
def cube3():
    return Polytope(tuple((a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)))


@pytest.fixture
def square():
    return Polytope(((0, 0), (1, 0), (1, 1), (0, 1)))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
