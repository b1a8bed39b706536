"""
Shared fixtures: analyzed structures for the block sizes used across the suite.
"""

import random
from fractions import Fraction

import pytest

from src.models.types import ParabolicStructure, Root
from src.tools.canonical_form import make_Y_point
from src.tools.invariants import InvariantBuilder
from src.tools.root_combinatorics import analyze_structure

SMALL = (2, 1, 3, 2)
TWO_THREE_TWO = (2, 3, 2)
PALINDROME = (1, 2, 2, 1)
FIVE_BLOCKS = (2, 2, 3, 3, 2)
STAIRS = (3, 4, 3, 2)
SIX_BLOCKS = (2, 1, 3, 1, 4, 2)

GOLDEN = (SMALL, TWO_THREE_TWO, PALINDROME, FIVE_BLOCKS, STAIRS, SIX_BLOCKS)

_cache = {}


def structure_for(sizes) -> ParabolicStructure:
    sizes = tuple(sizes)
    if sizes not in _cache:
        _cache[sizes] = analyze_structure(sizes)
    return _cache[sizes]


def roots(*pairs) -> frozenset:
    return frozenset(Root(*p) for p in pairs)


def random_y_point(structure: ParabolicStructure, rng: random.Random, bound: int = 9):
    values = [v for v in range(-bound, bound + 1) if v != 0]
    coeffs = {root: Fraction(rng.choice(values)) for root in structure.extended.extended}
    return make_Y_point(structure, coeffs)


@pytest.fixture
def small():
    return structure_for(SMALL)


@pytest.fixture
def two_three_two():
    return structure_for(TWO_THREE_TWO)


@pytest.fixture
def palindrome():
    return structure_for(PALINDROME)


@pytest.fixture
def five_blocks():
    return structure_for(FIVE_BLOCKS)


@pytest.fixture
def stairs():
    return structure_for(STAIRS)


@pytest.fixture
def six_blocks():
    return structure_for(SIX_BLOCKS)


@pytest.fixture
def worked_y(palindrome):
    """Y point of the blocks (1,2,2,1) used in the reduction walkthrough"""
    return make_Y_point(palindrome, {(1, 2): 2, (2, 4): 3, (3, 4): 5, (5, 6): 7, (2, 5): 11, (4, 6): 13})


@pytest.fixture
def builder_for():
    builders = {}

    def get(structure: ParabolicStructure) -> InvariantBuilder:
        key = structure.blocks.sizes
        if key not in builders:
            builders[key] = InvariantBuilder(structure)
        return builders[key]

    return get
