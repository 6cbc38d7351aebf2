import os
import sys
from fractions import Fraction

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

from trophodge.cli import BUILTIN_GRAPHS, GENUS_TWO_MODELS  # noqa: E402
from trophodge.linsys import MetricGraph  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def theta():
    return BUILTIN_GRAPHS["theta"]


@pytest.fixture
def dumbbell():
    return BUILTIN_GRAPHS["dumbbell"]


@pytest.fixture
def k4():
    return BUILTIN_GRAPHS["k4"]


def unit_metric(G):
    return MetricGraph(G, {e: Fraction(1) for e in G.edge_ids})


def genus_two_models():
    return [BUILTIN_GRAPHS[name] for name in GENUS_TWO_MODELS]


@pytest.fixture(scope="session")
def k4_chambers():
    from trophodge.chambers import k4_graph, wall_and_chamber

    return wall_and_chamber(k4_graph())


@pytest.fixture(scope="session")
def k4_report():
    from trophodge.chambers import k4_chamber_analysis

    return k4_chamber_analysis()
