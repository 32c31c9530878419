import numpy as np
import pytest

from bimap import io
from bimap.geometry import BitextMap, BitextSpace, InputError
from bimap.gsa import Alignment
from bimap.mapbuild import encapsulate_mers
from bimap.search import SimrParams


def test_map_roundtrip_evaluates_identically(tmp_path):
    rng = np.random.default_rng(0)
    pts = list(zip(rng.choice(np.arange(1, 9999), 60, replace=False) + 0.5,
                   rng.choice(np.arange(1, 11999), 60, replace=False)))
    m = encapsulate_mers(pts, BitextSpace(10000, 12000))
    assert m.mers
    io.write_map(tmp_path / "m.map", m)
    back = io.read_map(tmp_path / "m.map")
    assert back == m
    xs = rng.uniform(0, 10000, 1000)
    assert np.array_equal(back(xs), m(xs))


@pytest.mark.parametrize("body", ["", "#bimap v1 width=10 height=10\n0\t0\n5\t5\tM\n10\t10\n",
                                  "#bimap v1 width=10 height=10\n0\t0\nx\t5\n10\t10\n",
                                  "#bimap v1 width=10 height=10\n0\t0\n5\t5\tQ\n10\t10\n",
                                  "#bimap v1 width=10 height=10\n0\t0\n10\t9\n"])
def test_bad_map_files(tmp_path, body):
    p = tmp_path / "bad.map"
    p.write_text(body, encoding="utf-8")
    with pytest.raises(InputError):
        io.read_map(p)


def test_points_roundtrip_and_validation(tmp_path):
    p = tmp_path / "p.tsv"
    io.write_points(p, [(1.5, 2), (3, 4.25)])
    assert io.read_points(p).tolist() == [[1.5, 2.0], [3.0, 4.25]]
    p.write_text("# refs\n1\t2\n\n3 nan\n", encoding="utf-8")
    with pytest.raises(InputError):
        io.read_points(p)
    p.write_text("1\t2\t3\n", encoding="utf-8")
    with pytest.raises(InputError):
        io.read_points(p)


def test_points_or_map(tmp_path):
    m = BitextMap(BitextSpace(10, 10), [(0, 0), (4, 5), (10, 10)])
    io.write_map(tmp_path / "m.map", m)
    pts, back = io.read_points_or_map(tmp_path / "m.map")
    assert pts.tolist() == [[4.0, 5.0]] and back == m


def test_boundaries(tmp_path):
    p = tmp_path / "b"
    io.write_boundaries(p, (3, 9, 20))
    assert io.read_boundaries(p, 20) == (3, 9, 20)
    with pytest.raises(InputError):
        io.read_boundaries(p, 21)
    p.write_text("3\n3\n", encoding="utf-8")
    with pytest.raises(InputError):
        io.read_boundaries(p)


def test_alignment_format_and_roundtrip(tmp_path):
    al = Alignment.from_beads([(1, 1), (0, 1), (2, 1), (1, 0), (2, 2)])
    text = io.format_alignment(al)
    assert text.splitlines() == ["0..0\t0..0", "-\t1..1", "1..2\t2..2", "3..3\t-", "4..5\t3..4"]
    io.write_alignment(tmp_path / "a", al)
    assert io.read_alignment(tmp_path / "a").keys() == al.keys()
    (tmp_path / "a").write_text("0..0\t0..0\n2..3\t1..1\n", encoding="utf-8")
    with pytest.raises(InputError):
        io.read_alignment(tmp_path / "a")


def test_params_roundtrip_and_unknown_keys(tmp_path):
    p = tmp_path / "x.params"
    io.write_params(p, SimrParams(chain_size=7, max_point_dispersal=4.5), {"min_confidence": 2.0})
    params, align = io.read_params(p)
    assert params == SimrParams(chain_size=7, max_point_dispersal=4.5)
    assert align == {"min_confidence": 2.0}
    p.write_text("chain_size = 7\nbogus = 1\n", encoding="utf-8")
    with pytest.raises(InputError):
        io.read_params(p)
    p.write_text("merge_empty = maybe\n", encoding="utf-8")
    with pytest.raises(InputError):
        io.read_params(p)


def test_non_utf8_rejected(tmp_path):
    p = tmp_path / "latin1.txt"
    p.write_bytes("gouvernement élu".encode("latin-1"))
    with pytest.raises(InputError):
        io.read_text(p)


def test_manifest_paths_relative(tmp_path):
    (tmp_path / "dev").mkdir()
    m = tmp_path / "dev" / "manifest.tsv"
    m.write_text("x.txt\ty.txt\trefs.tsv\n", encoding="utf-8")
    (entry,) = io.read_manifest(m)
    assert entry[0] == tmp_path / "dev" / "x.txt"
    m.write_text("x.txt\ty.txt\n", encoding="utf-8")
    with pytest.raises(InputError):
        io.read_manifest(m)
