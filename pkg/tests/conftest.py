import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from fractions import Fraction

import pytest

from flatsurfkit.surface import Gluing, Polygon, Surface, TRANSLATION


@pytest.fixture(scope="session")
def torus():
    """Unit-square torus with its single (marked) 2*pi vertex."""
    square = Polygon([(0, 0), (Fraction(1), 0), (Fraction(1), Fraction(1)), (0, Fraction(1))])
    return Surface(
        [square],
        [Gluing((0, 0), (0, 2), TRANSLATION), Gluing((0, 1), (0, 3), TRANSLATION)],
    )


@pytest.fixture(scope="session")
def ay():
    from flatsurfkit.constructions import ay_surface

    return ay_surface()


@pytest.fixture(scope="session")
def ay_isometries(ay):
    from flatsurfkit.symmetry import isometries

    return isometries(ay)
