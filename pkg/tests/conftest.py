import math
import random

import pytest
from hypothesis import assume
from hypothesis import strategies as st
from sympy.polys.domains import ZZ_I

from gausslines.construct import ConstructionRequest, construct_line
from gausslines.line import Line
from gausslines.zi import GaussInt

G = GaussInt
IM1 = Line.from_points(G(0, 1), G(5, 1))  # the line Im(z) = 1
REAL = Line.from_points(0, 7)


def oracle_gcd_is_unit(z: GaussInt, w: GaussInt) -> bool:
    """Coprimality via sympy's Gaussian integer domain, independent of gausslines.zi."""
    g = ZZ_I.gcd(ZZ_I(z.re, z.im), ZZ_I(w.re, w.im))
    return g.x * g.x + g.y * g.y == 1


def random_primitive_line(rng: random.Random, box: int = 60) -> Line:
    while True:
        z = G(rng.randint(-box, box), rng.randint(-box, box))
        w = G(rng.randint(-box, box), rng.randint(-box, box))
        if z != w:
            line = Line.from_points(z, w)
            if line.primitive:
                return line


gauss_ints = st.builds(G, st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
nonzero_gauss = gauss_ints.filter(bool)
small_points = st.builds(G, st.integers(-40, 40), st.integers(-40, 40))


@st.composite
def primitive_lines(draw):
    z = draw(small_points)
    w = draw(small_points.filter(lambda p: p != z))
    line = Line.from_points(z, w)
    assume(line.primitive)
    return line


def build(cons, inert=(), split=(), seed=0):
    return construct_line(ConstructionRequest(list(cons), list(inert), list(split), seed))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
