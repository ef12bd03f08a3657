import itertools
import random
import sys

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from qcech.lattice import chain, product_quantale, validate_quantale
from qcech.sources import function_ring, ideal_quantale, locale_of_space, space_from_preorder, zmod_ring

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def nilpotent_chain():
    """0 < a < 1 with a*a = 0: semicartesian, not idempotent."""
    leq = [[i <= j for j in range(3)] for i in range(3)]
    mul = [[0, 0, 0], [0, 0, 1], [0, 1, 2]]
    return validate_quantale(["0", "a", "1"], leq, mul)


@st.composite
def preorders(draw, max_points=4):
    n = draw(st.integers(1, max_points))
    rel = [[i == j for j in range(n)] for i in range(n)]
    for i, j in itertools.permutations(range(n), 2):
        if draw(st.booleans()) and draw(st.booleans()):
            rel[i][j] = True
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if rel[i][k] and rel[k][j]:
                    rel[i][j] = True
    return [f"p{i + 1}" for i in range(n)], rel


@st.composite
def spaces(draw, max_points=4):
    pts, rel = draw(preorders(max_points))
    return space_from_preorder(pts, rel)


def quantale_pool():
    pool = [chain(1), chain(2), chain(3), nilpotent_chain()]
    pool += [ideal_quantale(zmod_ring(n))[0] for n in range(1, 13)]
    pool += [ideal_quantale(function_ring(q, k))[0] for q, k in [(2, 1), (2, 2), (3, 2), (2, 3)]]
    pool.append(product_quantale(nilpotent_chain(), chain(2))[0])
    pool.append(product_quantale(ideal_quantale(zmod_ring(4))[0], ideal_quantale(zmod_ring(2))[0])[0])
    return pool


POOL = quantale_pool()


@st.composite
def quantales(draw):
    if draw(st.booleans()):
        return draw(st.sampled_from(POOL))
    return locale_of_space(draw(spaces()))


@pytest.fixture
def rng():
    return random.Random(20240601)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        ok, note = mod.RESULTS[n]
        terminalreporter.write_line(f"criterion {n:>2} {'PASS' if ok else 'FAIL'}  {mod.TITLES[n]}: {note}")
