import numpy as np
import pytest

import seriesmine as sm
from seriesmine.discords import DiscordMatrix, VariableLengthDiscordMatrix
from seriesmine.exceptions import InvalidParametersError
from seriesmine.metrics import RunTrace
from seriesmine.oracle import naive_distance_matrix, sorted_match_distances
from seriesmine.synthetic import random_walk


def _spike_series(n=600, at=300, seed=0):
    # repetitive background, so the spike window is the anomaly at any length
    rng = np.random.default_rng(seed)
    values = np.sin(np.arange(n) * (2 * np.pi / 50)) + rng.normal(0, 0.05, n)
    values[at] += 6.0
    return sm.ingest(values), at


def test_insert_first_candidate_fills_last_column_top():
    dkm = DiscordMatrix.empty(3, 2, 16)
    assert sm.update_fixed_length_discords(dkm, np.array([1.0, 2.0]), 50, 3, 2)
    assert dkm.dist[0, 1] == 2.0 and dkm.offset[0, 1] == 50
    assert np.all(dkm.offset[:, 0] == -1)


def test_insert_below_everything_changes_nothing():
    dkm = DiscordMatrix.empty(2, 2, 16)
    for off, vals in [(0, [5.0, 6.0]), (20, [4.0, 5.5]),
                      (40, [3.0, 5.0]), (60, [2.5, 4.8])]:
        sm.update_fixed_length_discords(dkm, np.array(vals), off, 2, 2)
    assert np.all(dkm.offset >= 0)   # full matrix
    before_d, before_o = dkm.dist.copy(), dkm.offset.copy()
    assert not sm.update_fixed_length_discords(dkm, np.array([0.1, 0.2]), 80, 2, 2)
    assert np.array_equal(dkm.dist, before_d) and np.array_equal(dkm.offset, before_o)


def test_insert_policy_replay_on_random_rows():
    # replaying identical insertions must give the identical matrix
    rng = np.random.default_rng(1)
    k = m = 3
    a = DiscordMatrix.empty(k, m, 12)
    b = DiscordMatrix.empty(k, m, 12)
    for off in range(0, 600, 13):
        vals = np.sort(rng.uniform(0.5, 6.0, size=m))
        if not a.has_trivial(off):
            sm.update_fixed_length_discords(a, vals, off, k, m)
        if not b.has_trivial(off):
            sm.update_fixed_length_discords(b, vals, off, k, m)
    assert np.array_equal(a.dist, b.dist) and np.array_equal(a.offset, b.offset)


def test_columns_stay_sorted_descending():
    rng = np.random.default_rng(2)
    k = m = 3
    dkm = DiscordMatrix.empty(k, m, 16)
    for off in range(0, 900, 11):
        vals = np.sort(rng.uniform(0, 10, size=m))
        if not dkm.has_trivial(off):
            sm.update_fixed_length_discords(dkm, vals, off, k, m)
    for j in range(m):
        col = dkm.dist[:, j]
        assert np.all(np.diff(col) <= 0)


def test_merge_first_length_is_normalized_copy():
    dkm = DiscordMatrix.empty(2, 2, 16)
    sm.update_fixed_length_discords(dkm, np.array([2.0, 3.0]), 10, 2, 2)
    sm.update_fixed_length_discords(dkm, np.array([1.0, 2.5]), 40, 2, 2)
    merged = VariableLengthDiscordMatrix.empty(2, 2)
    sm.update_variable_length_discords(dkm, merged, 2, 2)
    assert np.allclose(merged.dist, dkm.dist / 4.0)
    assert np.array_equal(merged.offset, dkm.offset)
    assert np.all(merged.length[merged.offset >= 0] == 16)


def test_merge_tie_keeps_later_length():
    merged = VariableLengthDiscordMatrix.empty(1, 1)
    d16 = DiscordMatrix.empty(1, 1, 16)
    sm.update_fixed_length_discords(d16, np.array([4.0]), 10, 1, 1)
    d25 = DiscordMatrix.empty(1, 1, 25)
    sm.update_fixed_length_discords(d25, np.array([5.0]), 77, 1, 1)   # 5/sqrt(25) == 4/sqrt(16)
    sm.update_variable_length_discords(d16, merged, 1, 1)
    sm.update_variable_length_discords(d25, merged, 1, 1)
    assert merged.length[0, 0] == 25 and merged.offset[0, 0] == 77


def test_merge_equals_per_cell_max_over_lengths():
    rng = np.random.default_rng(3)
    k = m = 2
    merged = VariableLengthDiscordMatrix.empty(k, m)
    cells = []
    for length in (16, 20, 24):
        dkm = DiscordMatrix.empty(k, m, length)
        for off in range(0, 500, 37):
            vals = np.sort(rng.uniform(1, 9, size=m))
            if not dkm.has_trivial(off):
                sm.update_fixed_length_discords(dkm, vals, off, k, m)
        cells.append(dkm.dist / np.sqrt(length))
        sm.update_variable_length_discords(dkm, merged, k, m)
    assert np.allclose(merged.dist, np.maximum.reduce(cells))


def test_degenerate_single_length_equals_profile_argmax():
    # k=m=1 at a single length: the profile argmax under the ascending
    # trivial-match policy, here replayed on the brute-force profile
    t = sm.ingest(random_walk(500, seed=4))
    scan = sm.topkm_discord_discovery(t, 24, 24, 1, 1, 5)
    dists = naive_distance_matrix(t, 24)
    replay = DiscordMatrix.empty(1, 1, 24)
    for i in range(dists.shape[0]):
        if replay.has_trivial(i):
            continue
        d = sorted_match_distances(dists[i], 1)
        if np.isfinite(d[0]):
            sm.update_fixed_length_discords(replay, d, i, 1, 1)
    assert int(scan.merged.offset[0, 0]) == int(replay.offset[0, 0])
    assert float(scan.per_length[24].dist[0, 0]) == \
        pytest.approx(float(replay.dist[0, 0]), abs=1e-7)


def test_spike_tops_ranking_at_every_length():
    t, at = _spike_series()
    scan = sm.topkm_discord_discovery(t, 16, 32, 1, 1, 5)
    for length, dkm in scan.per_length.items():
        off = int(dkm.offset[0, 0])
        assert off <= at <= off + length - 1, length
    off, length = int(scan.merged.offset[0, 0]), int(scan.merged.length[0, 0])
    assert off <= at <= off + length - 1


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("k,m", [(1, 1), (3, 3)])
def test_equals_oracle_on_random_series(seed, k, m):
    t = sm.ingest(random_walk(600, seed=10 + seed))
    scan = sm.topkm_discord_discovery(t, 16, 40, k, m, max(m, 5))
    per_o, merged_o = sm.brute_force_discords(t, 16, 40, k, m)
    for length in range(16, 41):
        e, o = scan.per_length[length], per_o[length]
        assert np.array_equal(e.offset, o.offset), length
        fe = np.isfinite(e.dist)
        assert np.array_equal(fe, np.isfinite(o.dist))
        assert np.allclose(e.dist[fe], o.dist[fe], atol=1e-7)
    assert np.array_equal(scan.merged.offset, merged_o.offset)
    assert np.array_equal(scan.merged.length, merged_o.length)
    assert np.allclose(scan.merged.dist, merged_o.dist, atol=1e-7)


def test_capacity_does_not_change_matrices():
    t = sm.ingest(random_walk(600, seed=20))
    m = 3
    a = sm.topkm_discord_discovery(t, 16, 32, 3, m, m)        # minimum capacity
    b = sm.topkm_discord_discovery(t, 16, 32, 3, m, 4 * m)
    for length in range(16, 33):
        assert np.array_equal(a.per_length[length].offset, b.per_length[length].offset)
        fa = np.isfinite(a.per_length[length].dist)
        assert np.allclose(a.per_length[length].dist[fa],
                           b.per_length[length].dist[fa], atol=1e-9)
    assert np.array_equal(a.merged.offset, b.merged.offset)


def test_no_trivial_matches_within_matrix():
    t = sm.ingest(random_walk(800, seed=21))
    scan = sm.topkm_discord_discovery(t, 16, 32, 3, 3, 5)
    for length, dkm in scan.per_length.items():
        offs = dkm.offset[dkm.offset >= 0]
        excl = -(-length // 2)
        for a in range(len(offs)):
            for b in range(a + 1, len(offs)):
                assert abs(int(offs[a]) - int(offs[b])) >= excl


def test_smooth_series_prunes_everything():
    from seriesmine.synthetic import smooth_walk
    t = sm.ingest(smooth_walk(900, seed=22))
    trace = RunTrace()
    sm.topkm_discord_discovery(t, 16, 28, 1, 1, 8, trace=trace)
    recomputed = sum(r.n_recomputed for r in trace.records)
    considered = sum(r.n_valid + r.n_nonvalid for r in trace.records)
    assert recomputed < 0.05 * considered


def test_capacity_below_m_rejected():
    t = sm.ingest(random_walk(300, seed=23))
    with pytest.raises(InvalidParametersError) as exc:
        sm.topkm_discord_discovery(t, 16, 24, 1, 3, 2)
    assert "p" in str(exc.value) and "m" in str(exc.value)
