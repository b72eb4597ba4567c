from __future__ import annotations

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from knotforge.diagram import Diagram, parse_pd  # noqa: E402

TREFOIL = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"
FIGURE_EIGHT = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)"
HOPF = "X(4,1,3,2) X(2,3,1,4)"


@pytest.fixture
def trefoil():
    return parse_pd(TREFOIL)


@pytest.fixture
def figure_eight():
    return parse_pd(FIGURE_EIGHT)


@pytest.fixture
def unknot():
    return Diagram((), 1, frozenset())


@pytest.fixture
def hopf():
    return parse_pd(HOPF)
