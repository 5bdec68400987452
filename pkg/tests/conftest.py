"""
Shared fixtures: a small corpus of maps and polynomials
"""
import json

import pytest

from app.core.dynamics.rational_map import new_map, polynomial_map
from app.core.exact import PolyQ
from app.core.realctx import RealCtx


@pytest.fixture
def ctx():
    return RealCtx(256)

@pytest.fixture
def squaring():
    return polynomial_map([0, 0, 1])

@pytest.fixture
def half_squaring():
    """z^2 / 2"""
    return new_map([1, 0, 0], [0, 0, 2])

@pytest.fixture
def chebyshev():
    """z^2 - 2"""
    return polynomial_map([-2, 0, 1])

@pytest.fixture
def z2_plus_1():
    return polynomial_map([1, 0, 1])

@pytest.fixture
def z2_minus_1():
    return polynomial_map([-1, 0, 1])

@pytest.fixture
def z_plus_inverse():
    """(z^2 + 1) / z"""
    return new_map([1, 0, 1], [0, 1, 0])

@pytest.fixture
def parabolic():
    """z + z^2, multiplier 1 at the fixed point 0"""
    return polynomial_map([0, 1, 1])

@pytest.fixture
def t_minus_2():
    return PolyQ.from_coefficients([-2, 1])

@pytest.fixture
def golden_poly():
    """t^2 - t - 1"""
    return PolyQ.from_coefficients([-1, -1, 1])

@pytest.fixture
def maps_dir(tmp_path):
    """Map files in the JSON schema read by the command line"""
    files = {
        "squaring.json": {"d": 2, "P": ["1", "0", "0"], "Q": ["0", "0", "1"]},
        "half_squaring.json": {"d": 2, "P": ["1", "0", "0"], "Q": ["0", "0", "2"]},
        "degenerate.json": {"d": 2, "P": ["1", "1", "0"], "Q": ["1", "0", "0"]},
        "malformed.json": {"d": 2, "P": ["1", "x/2", "0"], "Q": ["0", "0", "1"]},
    }
    for name, data in files.items():
        (tmp_path / name).write_text(json.dumps(data), encoding="utf-8")
    return tmp_path
