import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from localrec.geometry import PointCloud, fill_distance, read_point_file, separation_distance
from oracles import fill_scan, knn_scan, separation_scan


def test_knn_trivial():
    cloud = PointCloud([[0.0, 0.0], [1.0, 0.0]])
    assert cloud.knn([0.9, 0.0], 1) == [(1, pytest.approx(0.1))]
    got = cloud.knn([0.9, 0.0], 2)
    assert [i for i, _ in got] == [1, 0]


def test_knn_matches_linear_scan():
    rng = np.random.default_rng(3)
    for _ in range(20):
        pts = rng.uniform(-1, 1, (100, 2))
        cloud = PointCloud(pts)
        z = rng.uniform(-1.2, 1.2, 2)
        got = cloud.knn(z, 30)
        ref = knn_scan(pts, z, 30)
        assert [i for i, _ in got] == [i for i, _ in ref]
        np.testing.assert_allclose(
            [d for _, d in got], [d for _, d in ref], rtol=1e-14, atol=0
        )


def test_knn_tie_break_toward_lower_index():
    # a ring of sites all at distance 1 from the origin
    pts = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0], [2.0, 0.0]]
    cloud = PointCloud(pts)
    assert [i for i, _ in cloud.knn([0.0, 0.0], 2)] == [0, 1]
    assert [i for i, _ in cloud.knn([0.0, 0.0], 4)] == [0, 1, 2, 3]


def test_knn_query_on_site_returns_zero_distance():
    pts = np.array([[0.0, 0.0], [0.5, 0.5]])
    got = PointCloud(pts).knn([0.5, 0.5], 1)
    assert got == [(1, 0.0)]


def test_knn_validation():
    cloud = PointCloud(np.zeros((3, 2)))
    with pytest.raises(ValueError):
        cloud.knn([0.0, 0.0], 0)
    with pytest.raises(ValueError):
        cloud.knn([0.0, 0.0], 4)
    with pytest.raises(ValueError):
        cloud.knn([0.0], 1)
    with pytest.raises(ValueError):
        cloud.knn([np.nan, 0.0], 1)


def test_cloud_validation():
    with pytest.raises(ValueError):
        PointCloud(np.zeros((0, 2)))
    with pytest.raises(ValueError):
        PointCloud([[np.inf, 0.0]])
    with pytest.raises(ValueError):
        PointCloud([[0.0, 0.0]], values=[1.0, 2.0])


def test_separation_examples():
    assert separation_distance(PointCloud([[0.0, 0.0], [2.0, 0.0]])) == 1.0
    assert separation_distance(PointCloud([[0.5, 0.5], [0.5, 0.5], [1.0, 0.0]])) == 0.0
    with pytest.raises(ValueError):
        separation_distance(PointCloud([[0.0, 0.0]]))


def test_separation_matches_double_loop():
    rng = np.random.default_rng(5)
    for _ in range(10):
        pts = rng.uniform(-1, 1, (40, 2))
        assert separation_distance(PointCloud(pts)) == pytest.approx(
            separation_scan(pts), rel=1e-14
        )


def test_fill_distance_examples():
    # sites at the corners of [-1,1]^2, probed at the center
    corners = [[-1, -1], [1, -1], [-1, 1], [1, 1]]
    assert fill_distance(PointCloud(corners), [[0.0, 0.0]]) == pytest.approx(np.sqrt(2.0))
    pts = np.random.default_rng(0).uniform(-1, 1, (17, 2))
    assert fill_distance(PointCloud(pts), pts) == 0.0


def test_fill_distance_matches_double_loop():
    rng = np.random.default_rng(6)
    pts = rng.uniform(-1, 1, (60, 2))
    probe = rng.uniform(-1, 1, (50, 2))
    assert fill_distance(PointCloud(pts), probe) == pytest.approx(
        fill_scan(pts, probe), rel=1e-14
    )


@given(st.integers(2, 25), st.integers(1, 10), st.integers(0, 2**31 - 1))
def test_fill_distance_monotone_in_sites(n, extra, seed):
    # adding sites can only shrink the fill distance
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-1, 1, (n + extra, 2))
    probe = rng.uniform(-1, 1, (20, 2))
    assert fill_distance(PointCloud(pts), probe) <= fill_distance(
        PointCloud(pts[:n]), probe
    )


def test_read_point_file_variants(tmp_path):
    f = tmp_path / "pts.txt"
    f.write_text(
        "# comment line\n"
        "0.0, 0.5\n"
        "1.0 -0.25\n"
        "\n"
        "-2.5,3\n",
        encoding="utf-8",
    )
    pts, vals = read_point_file(f, dim=2)
    np.testing.assert_array_equal(pts, [[0.0, 0.5], [1.0, -0.25], [-2.5, 3.0]])
    assert vals is None


def test_read_point_file_value_column(tmp_path):
    f = tmp_path / "ptsv.txt"
    f.write_text("0 0 1.5\n1,0,2.5\n", encoding="utf-8")
    pts, vals = read_point_file(f, dim=2)
    np.testing.assert_array_equal(pts, [[0.0, 0.0], [1.0, 0.0]])
    np.testing.assert_array_equal(vals, [1.5, 2.5])


def test_read_point_file_errors(tmp_path):
    bad_width = tmp_path / "w.txt"
    bad_width.write_text("0 0\n1 2 3 4\n", encoding="utf-8")
    with pytest.raises(ValueError, match="inconsistent"):
        read_point_file(bad_width, dim=2)

    non_numeric = tmp_path / "n.txt"
    non_numeric.write_text("0 zero\n", encoding="utf-8")
    with pytest.raises(ValueError, match="non-numeric"):
        read_point_file(non_numeric, dim=2)

    empty = tmp_path / "e.txt"
    empty.write_text("# only a comment\n", encoding="utf-8")
    with pytest.raises(ValueError, match="no data"):
        read_point_file(empty, dim=2)

    too_wide = tmp_path / "t.txt"
    too_wide.write_text("1 2 3 4\n", encoding="utf-8")
    with pytest.raises(ValueError, match="expected 2 or 3"):
        read_point_file(too_wide, dim=2)
