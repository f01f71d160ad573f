"""Communication-matrix loading and the six structure metrics."""
from __future__ import annotations

import numpy as np
import pytest

from mapkit import (
    CommMatrix,
    average_intensity,
    compute_metrics,
    load_matrix_csv,
    neighbour_share,
    random_matrix,
    rank_dispersion,
    ring_matrix,
    row_heterogeneity,
    save_matrix_csv,
    split_fraction,
    traffic_imbalance,
)


# -- loading ---------------------------------------------------------------------

def test_load_2x2(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("0,5\n7,0\n")
    m = load_matrix_csv(path, "count")
    assert m.n == 2
    assert m.kind == "count"
    assert (m.entries == [[0, 5], [7, 0]]).all()


def test_nonzero_diagonal_zeroed_with_warning(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("3,5\n7,0\n")
    with pytest.warns(UserWarning):
        m = load_matrix_csv(path, "count")
    assert (m.entries == [[0, 5], [7, 0]]).all()


def test_comment_and_blank_lines_skipped(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("# header\n\n0,5\n7,0\n")
    assert load_matrix_csv(path, "count").n == 2


def test_ragged_rows_rejected(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("0,5\n7\n")
    with pytest.raises(ValueError, match="cells"):
        load_matrix_csv(path, "count")


def test_non_numeric_cell_rejected_with_line_number(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("0,5\n7,oops\n")
    with pytest.raises(ValueError, match="line 2"):
        load_matrix_csv(path, "count")


def test_negative_entry_rejected(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("0,-5\n7,0\n")
    with pytest.raises(ValueError, match="non-negative"):
        load_matrix_csv(path, "count")


def test_empty_file_rejected(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("# nothing\n")
    with pytest.raises(ValueError, match="no matrix rows"):
        load_matrix_csv(path, "count")


def test_matrix_must_be_square_and_non_empty():
    with pytest.raises(ValueError):
        CommMatrix("count", np.zeros((2, 3)))
    with pytest.raises(ValueError):
        CommMatrix("count", np.zeros((0, 0)))
    with pytest.raises(ValueError):
        CommMatrix("sizes", np.zeros((2, 2)))


def test_save_load_round_trip(tmp_path):
    m = random_matrix(16, seed=3)
    path = tmp_path / "m.csv"
    save_matrix_csv(m, path)
    back = load_matrix_csv(path, "count")
    assert (back.entries == m.entries).all()


def test_ring_file_sum(tmp_path):
    m = ring_matrix(64, weight=3)
    path = tmp_path / "ring.csv"
    save_matrix_csv(m, path)
    assert load_matrix_csv(path, "count").total == 64 * 3


def test_random_matrix_deterministic_per_seed():
    a = random_matrix(32, seed=7)
    b = random_matrix(32, seed=7)
    c = random_matrix(32, seed=8)
    assert (a.entries == b.entries).all()
    assert (a.entries != c.entries).any()
    assert (np.diagonal(a.entries) == 0).all()


# -- individual metrics ------------------------------------------------------------

def test_average_intensity_is_total_over_n_squared():
    m = random_matrix(64, seed=11)
    assert average_intensity(m) == m.total / 4096


def test_uniform_matrix_has_zero_imbalance():
    e = np.ones((8, 8)) - np.eye(8)
    assert traffic_imbalance(CommMatrix("count", e)) == 0.0


def test_imbalance_zero_iff_per_process_totals_equal():
    e = np.zeros((4, 4))
    e[0, 1] = 10.0
    m = CommMatrix("count", e)
    assert traffic_imbalance(m) > 0
    assert traffic_imbalance(ring_matrix(8)) == 0.0


def test_imbalance_and_intensity_invariant_under_permutation():
    rng = np.random.default_rng(5)
    m = random_matrix(16, seed=5)
    perm = rng.permutation(16)
    p = CommMatrix("count", m.entries[np.ix_(perm, perm)])
    assert traffic_imbalance(p) == pytest.approx(traffic_imbalance(m), rel=1e-12)
    assert average_intensity(p) == pytest.approx(average_intensity(m), rel=1e-12)


def test_dispersion_extremes():
    near = np.zeros((8, 8))
    near[2, 3] = 5.0
    assert rank_dispersion(CommMatrix("count", near)) == pytest.approx(1 / 7)
    far = np.zeros((8, 8))
    far[0, 7] = 5.0
    assert rank_dispersion(CommMatrix("count", far)) == 1.0


def test_tridiagonal_matrix_has_neighbour_share_one():
    e = np.zeros((8, 8))
    for i in range(7):
        e[i, i + 1] = 2.0
        e[i + 1, i] = 1.0
    assert neighbour_share(CommMatrix("count", e)) == 1.0


def test_heterogeneity_zero_for_uniform_rows():
    e = np.ones((8, 8))
    np.fill_diagonal(e, 0.0)
    m = CommMatrix("count", e)
    assert 0 < row_heterogeneity(m) < 1
    single = np.zeros((4, 4))
    single[0, 1] = 9.0
    assert row_heterogeneity(CommMatrix("count", single)) == pytest.approx(3 / 64)


def test_split_fraction_block_diagonal():
    e = np.zeros((64, 64))
    for b in range(4):
        sl = slice(16 * b, 16 * (b + 1))
        e[sl, sl] = 1.0
    np.fill_diagonal(e, 0.0)
    m = CommMatrix("count", e)
    assert split_fraction(m, 4) == 1.0
    assert split_fraction(m, 16) < 1.0
    assert split_fraction(m, 1) == 1.0


def test_split_fraction_uniform_off_diagonal():
    e = np.ones((64, 64)) - np.eye(64)
    m = CommMatrix("count", e)
    assert split_fraction(m, 4) == pytest.approx(4 * 16 * 15 / (64 * 63))


def test_split_fraction_requires_divisor():
    m = ring_matrix(64)
    with pytest.raises(ValueError, match="k"):
        split_fraction(m, 5)
    with pytest.raises(ValueError, match="k"):
        split_fraction(m, 0)


def test_split_fraction_non_increasing_along_divisor_chain():
    for seed in range(5):
        m = random_matrix(64, seed=seed)
        assert split_fraction(m, 4) >= split_fraction(m, 16)


def test_scaling_matrix_scales_only_intensity():
    m = random_matrix(32, seed=9)
    scaled = CommMatrix("count", m.entries * 5)
    assert average_intensity(scaled) == pytest.approx(5 * average_intensity(m))
    for fn in (traffic_imbalance, rank_dispersion, neighbour_share):
        assert fn(scaled) == pytest.approx(fn(m), rel=1e-12)
    assert split_fraction(scaled, 4) == pytest.approx(split_fraction(m, 4), rel=1e-12)


# -- full report -------------------------------------------------------------------

def test_report_fields_and_ranges():
    m = random_matrix(64, seed=1)
    r = compute_metrics(m, ks=(4, 16))
    assert r.n == 64 and r.kind == "count"
    assert r.sum == m.total
    assert r.ca == m.total / 4096
    for value in (r.cb, r.cc, r.ch, r.nbc, r.sp[4], r.sp[16]):
        assert 0.0 <= value <= 1.0
    d = r.as_dict()
    assert d["sp_4"] == r.sp[4] and d["sp_16"] == r.sp[16]


def test_all_zero_matrix_reports_zeros_with_warning():
    m = CommMatrix("count", np.zeros((8, 8)))
    with pytest.warns(UserWarning):
        r = compute_metrics(m, ks=(2,))
    assert (r.sum, r.ca, r.cb, r.cc, r.ch, r.nbc, r.sp[2]) == (0, 0, 0, 0, 0, 0, 0)
