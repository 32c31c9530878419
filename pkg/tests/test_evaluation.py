import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bimap.evaluation import alignment_errors, map_error, map_errors
from bimap.geometry import BitextMap, BitextSpace, DomainError, InputError
from bimap.gsa import AlignedBlock, Alignment


def test_map_through_refs_scores_zero():
    m = BitextMap(BitextSpace(100, 80), [(0, 0), (30, 20), (70, 60), (100, 80)])
    refs = [(30, 20), (70, 60), (50, 40)]
    for metric in ("horizontal", "vertical", "perpendicular"):
        st_ = map_error(m, refs, metric)
        assert (st_.rms, st_.median_abs, st_.p99) == (0, 0, 0) and st_.n == 3


def test_single_vertical_offset():
    m = BitextMap.diagonal(BitextSpace(100, 100))
    assert map_error(m, [(40, 47)], "vertical").rms == pytest.approx(7)
    assert map_error(m, [(40, 47)], "perpendicular").rms == pytest.approx(7 / math.sqrt(2))
    assert map_error(m, [(40, 47)], "horizontal").rms == pytest.approx(7)


def test_percentile_and_median():
    m = BitextMap.diagonal(BitextSpace(1000, 1000))
    refs = [(x, x + d) for x, d in zip(range(10, 110), range(100))]
    st_ = map_error(m, refs, "vertical")
    assert st_.median_abs == pytest.approx(49.5)
    assert st_.p99 == pytest.approx(np.percentile(np.arange(100), 99))
    assert st_.rms == pytest.approx(math.sqrt(np.mean(np.arange(100.0) ** 2)))


def test_bad_inputs():
    m = BitextMap.diagonal(BitextSpace(10, 10))
    with pytest.raises(DomainError):
        map_error(m, [])
    with pytest.raises(InputError):
        map_error(m, [(1, 1)], "diagonal")
    with pytest.raises(DomainError):
        map_error(m, [(11, 1)])


@st.composite
def maps_and_refs(draw):
    w = draw(st.integers(10, 2000))
    h = draw(st.integers(10, 2000))
    n = draw(st.integers(0, 8))
    xs = sorted(draw(st.sets(st.integers(1, w - 1), min_size=min(n, w - 1), max_size=min(n, w - 1))))
    ys = sorted(draw(st.sets(st.integers(1, h - 1), min_size=len(xs), max_size=len(xs))))
    m = BitextMap(BitextSpace(w, h), [(0, 0)] + list(zip(xs, ys)) + [(w, h)])
    refs = draw(st.lists(st.tuples(st.floats(0, w), st.floats(0, h)), min_size=1, max_size=20))
    return m, refs


@given(maps_and_refs())
def test_perpendicular_never_exceeds_vertical(args):
    m, refs = args
    perp = map_errors(m, refs, "perpendicular")
    vert = map_errors(m, refs, "vertical")
    assert np.all(perp <= vert + 1e-12)
    assert map_error(m, refs, "perpendicular").rms <= map_error(m, refs, "vertical").rms + 1e-12


def _ten():
    return Alignment.from_beads([(1, 1)] * 10)


def test_alignment_errors_examples():
    ref = _ten()
    assert alignment_errors(ref, ref) == 0
    merged = Alignment.from_beads([(2, 2)] + [(1, 1)] * 8)
    assert alignment_errors(merged, ref) == 2
    ref22 = Alignment.from_beads([(1, 1), (2, 2), (1, 1)])
    split = Alignment.from_beads([(1, 1)] * 4)
    assert alignment_errors(split, ref22) == 1


def test_alignment_errors_require_same_extent():
    with pytest.raises(InputError):
        alignment_errors(Alignment.from_beads([(1, 1)]), _ten())


@given(st.lists(st.sampled_from([(1, 1), (1, 0), (0, 1), (2, 1), (1, 2), (2, 2)]), min_size=1, max_size=30))
def test_alignment_errors_self_zero(beads):
    al = Alignment.from_beads(beads)
    assert alignment_errors(al, al) == 0
