import cmath
import math

import pytest

from pd7kit.spectral import solve_c1

COMPLEX_Y = 0.15 * cmath.exp(1j * math.pi / 8)


@pytest.fixture(scope="session")
def boutroux_015():
    return solve_c1(0.15)


@pytest.fixture(scope="session")
def boutroux_complex():
    return solve_c1(COMPLEX_Y)
