import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bimap.geometry import (MER, BitextMap, BitextSpace, DomainError, InputError, Token, evaluate_map,
                            inverse_map, mean_position, perp_displacement)
from bimap.mapbuild import encapsulate_mers


@pytest.mark.parametrize("start,length,expected", [(5, 4, 6.5), (0, 1, 0.0), (10, 3, 11.0)])
def test_mean_position(start, length, expected):
    assert mean_position(Token("w" * length, start, length)) == expected


def test_token_rejects_zero_length():
    with pytest.raises(InputError):
        Token("", 3, 0)


def test_displacement_on_diagonal_is_zero():
    assert perp_displacement((40, 40), BitextSpace(100, 100)) == 0.0


def test_displacement_corner_values():
    sq = BitextSpace(100, 100)
    assert perp_displacement((0, 100), sq) == pytest.approx(100 / math.sqrt(2))
    assert perp_displacement((100, 0), sq) == pytest.approx(-70.71, abs=5e-3)


@given(st.floats(0, 1000), st.floats(0, 1000), st.floats(1, 1000))
def test_displacement_antisymmetric_in_square_space(x, y, side):
    sq = BitextSpace(side, side)
    assert perp_displacement((x, y), sq) == pytest.approx(-perp_displacement((y, x), sq), abs=1e-9)


def test_space_rejects_nonpositive_side():
    with pytest.raises(InputError):
        BitextSpace(0, 10)


def test_evaluate_identity_diagonal():
    m = BitextMap(BitextSpace(100, 100), [(0, 0), (100, 100)])
    assert evaluate_map(m, 50) == 50


def test_evaluate_midpoint_of_first_segment():
    m = BitextMap(BitextSpace(100, 100), [(0, 0), (50, 80), (100, 100)])
    assert m(25) == 40


def test_evaluate_through_mer_corners():
    m = encapsulate_mers([(10, 20), (20, 10)], BitextSpace(100, 100))
    assert m(15) == 15


def test_evaluate_outside_domain():
    m = BitextMap.diagonal(BitextSpace(10, 20))
    with pytest.raises(DomainError):
        m(10.5)
    with pytest.raises(DomainError):
        inverse_map(m, -1)


def test_map_must_be_strictly_increasing():
    with pytest.raises(InputError):
        BitextMap(BitextSpace(10, 10), [(0, 0), (5, 5), (5, 6), (10, 10)])
    with pytest.raises(InputError):
        BitextMap(BitextSpace(10, 10), [(0, 0), (5, 5)])


def test_mer_enclosing_bounds():
    pts = [(3, 9), (7, 2), (5, 5)]
    m = MER.enclosing(pts)
    assert m.lower_left == (3, 2) and m.upper_right == (7, 9)
    assert all(m.contains(*p) for p in pts)


@st.composite
def increasing_anchors(draw):
    n = draw(st.integers(0, 12))
    xs = sorted(draw(st.sets(st.integers(1, 999), min_size=n, max_size=n)))
    ys = sorted(draw(st.sets(st.integers(1, 1999), min_size=n, max_size=n)))
    return [(0, 0)] + list(zip(xs, ys)) + [(1000, 2000)]


@given(increasing_anchors())
def test_endpoints_exact_and_inverse_roundtrip(anchors):
    m = BitextMap(BitextSpace(1000, 2000), anchors)
    assert m(0) == 0.0 and m(1000) == 2000.0
    xs = np.linspace(0, 1000, 57)
    assert np.allclose(inverse_map(m, m(xs)), xs)
    assert np.all(np.diff(m(xs)) > 0)
