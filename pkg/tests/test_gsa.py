import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bimap.evaluation import alignment_errors
from bimap.geometry import InputError
from bimap.gsa import (AlignedBlock, Alignment, GsaReport, LengthModel, SentenceGrid, close_and_fill, gsa_align,
                       length_align, points_to_cells)
from bimap.synth import planted_alignment
from oracles import segmentation_costs

# x sentences A..H = 0..7, y sentences a..f = 0..5
A, B, C, D, E, F, G, H = range(8)
a, b, c, d, e, f = range(6)


def test_no_points_no_cells():
    assert points_to_cells([], SentenceGrid((10, 20), (10, 20))) == set()


def test_point_mid_sentence():
    assert points_to_cells([(15, 14)], SentenceGrid((10, 20, 30), (10, 20, 30))) == {(1, 1)}


def test_point_outside_grid_rejected():
    with pytest.raises(InputError):
        points_to_cells([(35, 1)], SentenceGrid((10, 20, 30), (10, 20, 30)))


def test_closure_adds_missing_corner():
    blocks = close_and_fill({(G, e), (H, e), (H, f)}, 8, 6)
    assert AlignedBlock(G, H + 1, e, f + 1) in blocks


def test_contiguity_fills_between():
    blocks = close_and_fill({(0, 0), (0, 2)}, 1, 3)
    assert [bl.key() for bl in blocks] == [(0, 1, 0, 3)]


# A layout in the style of the textbook example: a run of three x sentences and two y sentences
# with no points between them, a stray in (H, e) inside a G,H x e,f square.
FIG10 = {(A, a), (E, d), (F, d), (G, e), (H, e), (H, f)}


def test_figure_style_relation_and_empty_block():
    blocks = close_and_fill(FIG10, 8, 6)
    assert (E, d) in FIG10
    assert AlignedBlock(B, E, b, d) in blocks
    empty = [bl for bl in blocks if not bl.supported]
    assert [bl.key() for bl in empty] == [(B, E, b, d)]
    assert [bl.key() for bl in blocks] == [(0, 1, 0, 1), (1, 4, 1, 3), (4, 6, 3, 4), (6, 8, 4, 6)]


relations = st.integers(1, 9).flatmap(lambda nx: st.integers(1, 9).flatmap(
    lambda ny: st.tuples(st.just(nx), st.just(ny),
                         st.sets(st.tuples(st.integers(0, nx - 1), st.integers(0, ny - 1)), max_size=12))))


@given(relations)
def test_close_and_fill_partitions_and_is_fixpoint(args):
    nx, ny, rel = args
    blocks = close_and_fill(rel, nx, ny)
    al = Alignment(blocks, nx, ny)     # ordered, contiguous, covering both axes
    assert al.n_x == nx and al.n_y == ny
    covered = set().union(*(bl.cells() for bl in blocks)) if blocks else set()
    assert set(rel) <= covered
    supported_cells = set().union(*(bl.cells() for bl in blocks if bl.supported)) if blocks else set()
    assert close_and_fill(supported_cells, nx, ny) == blocks


def test_equal_pair_single_bead_with_top_confidence():
    la = length_align([100], [100])
    assert la.beads == ((1, 1),)
    # among pairs of the same total size, equal lengths give the most confident 1-1 bead
    for delta in (5, 10, 20, 40):
        assert la.confidence > length_align([100 - delta], [100 + delta]).confidence
        assert la.confidence > length_align([100 + delta], [100 - delta]).confidence


def test_two_to_one_preferred():
    la = length_align([100, 30], [128])
    assert la.beads == ((2, 1),)
    costs = segmentation_costs([100, 30], [128], LengthModel())
    alt = dict((bd, cost) for cost, bd in costs)
    assert alt[((2, 1),)] < alt[((1, 1), (1, 0))]


def test_empty_side_forces_deletions():
    la = length_align([10, 20, 30], [])
    assert la.beads == ((1, 0),) * 3 and la.confidence == math.inf
    with pytest.raises(InputError):
        length_align([], [])


@given(st.lists(st.integers(1, 200), max_size=4), st.lists(st.integers(1, 200), max_size=4),
       st.floats(0.8, 1.3))
def test_length_dp_matches_exhaustive_segmentations(xl, yl, ratio):
    if not xl and not yl:
        return
    model = LengthModel(c=ratio)
    la = length_align(xl, yl, model)
    costs = segmentation_costs(xl, yl, model)
    assert la.cost == pytest.approx(costs[0][0])
    assert la.beads in {bd for cost, bd in costs if cost <= costs[0][0] + 1e-9}
    if len(costs) > 1:
        assert la.second_cost == pytest.approx(costs[1][0])
        assert la.confidence == pytest.approx((costs[1][0] - costs[0][0]) / len(la.beads))


def _complete_points(pa):
    g = pa.grid
    xb, yb = (0,) + g.x_bounds, (0,) + g.y_bounds
    return [((xb[i] + xb[i + 1]) / 2, (yb[j] + yb[j + 1]) / 2)
            for bl in pa.alignment for i in range(bl.x0, bl.x1) for j in range(bl.y0, bl.y1)]


MIXED = (((1, 1), 0.5), ((1, 0), 0.08), ((0, 1), 0.08), ((2, 1), 0.12), ((1, 2), 0.12), ((2, 2), 0.1))


@given(st.integers(1, 60), st.integers(0, 10 ** 6))
def test_complete_points_reproduce_planted_alignment(n, seed):
    pa = planted_alignment(n, seed=seed, completeness=1.0, stray_rate=0.0, bead_probs=MIXED)
    assert alignment_errors(gsa_align(_complete_points(pa), pa.grid), pa.alignment) == 0


def stray_fixture():
    grid = SentenceGrid((100, 250, 270, 370), (110, 270, 294, 399))
    pts = [(50, 55), (60, 66), (150, 170), (200, 220), (240, 260), (255, 280), (262, 288), (320, 340),
           (330, 350), (200, 285)]
    return grid, pts


def test_stray_point_overruled_by_lengths():
    grid, pts = stray_fixture()
    rep = GsaReport()
    al = gsa_align(pts, grid, report=rep)
    assert [bl.key() for bl in al] == [(0, 1, 0, 1), (1, 2, 1, 2), (2, 3, 2, 3), (3, 4, 3, 4)]
    assert (1, 2) in rep.relation
    assert any(r[:2] == (2, 2) and r[3] for r in rep.realigned)


def test_attested_cell_not_overruled():
    grid, pts = stray_fixture()
    pts = pts + [(210, 287), (220, 289)]     # now three points say sentence 1 meets y sentence 2
    al = gsa_align(pts, grid)
    assert (1, 3, 1, 3) in al.keys()


def test_low_confidence_keeps_point_blocks():
    # x: 100 | 60 60 ; y: 110 | 60 (unmatched) | 132
    grid = SentenceGrid((100, 160, 220), (110, 170, 302))
    pts = [(50, 55), (130, 214), (190, 258)]
    rep = GsaReport()
    al = gsa_align(pts, grid, report=rep)
    assert al.keys() == [(0, 1, 0, 1), (1, 1, 1, 2), (1, 3, 2, 3)]
    merged = [r for r in rep.realigned if r[:2] == (2, 2)]
    assert merged and merged[0][2] < 1.0 and not merged[0][3]


def test_alignment_constructor_checks():
    with pytest.raises(InputError):
        Alignment([AlignedBlock(0, 1, 0, 1), AlignedBlock(2, 3, 1, 2)])
    with pytest.raises(InputError):
        Alignment([AlignedBlock(0, 0, 0, 0)])
    with pytest.raises(InputError):
        Alignment([AlignedBlock(0, 1, 0, 1)], n_x=2, n_y=1)
    assert Alignment.from_beads([(1, 1), (0, 1), (2, 1)]).keys() == [(0, 1, 0, 1), (1, 1, 1, 2), (1, 3, 2, 3)]


def test_grid_validation():
    with pytest.raises(InputError):
        SentenceGrid((10, 10), (5,))
    with pytest.raises(InputError):
        SentenceGrid((), (5,))
    g = SentenceGrid((3, 10), (4,))
    assert g.x_lengths() == [3, 7] and (g.width, g.height) == (10, 4)


def test_sentence_lengths_must_match_grid():
    with pytest.raises(InputError):
        gsa_align([], SentenceGrid((3, 10), (4,)), x_lens=[3])


def test_output_partitions_with_noisy_points():
    for seed in range(30):
        pa = planted_alignment(80, seed=seed, stray_rate=0.05)
        al = gsa_align(pa.points, pa.grid)
        assert (al.n_x, al.n_y) == (pa.grid.n_x, pa.grid.n_y)
        assert all(bl.nx or bl.ny for bl in al)
