import numpy as np
import pytest
from numpy.testing import assert_allclose

from exsca.closedform import (BiasWindow, ClosedFormInapplicable, apca_ranges,
                              bias_closed, bias_closed_apca, bias_closed_exsca,
                              bias_closed_generalized, comparison_record, cross_ranges,
                              cross_unique_count, dirichlet_ratio, dtft_window, exsca_sets,
                              fold, fold_table, frequency_grid, main_lobe_bounds,
                              max_abs_deviation, mirror_pairs_characterized,
                              relative_amplitude, unique_count_exsca, weight_closed_exsca,
                              weight_closed_generalized, weight_piecewise_exsca)
from exsca.diffset import (WeightFunction, cross_differences, mirror_pair_set,
                           weight_function)
from exsca.geometry import (ApcaConfig, ExscaConfig, GeneralizedConfig, positions)

from oracles import (brute_positions_apca, brute_positions_exsca, brute_weights,
                     coprime_pairs, direct_dtft, peak_norm)


def dev(a, b):
    return float(np.max(np.abs(peak_norm(a) - peak_norm(b))))


def three_subarray_config(s3):
    return GeneralizedConfig.from_lists([2, 3, 5], [15, 10, 6], sparsity=[3, 2, 1],
                                        periods=[3, 2, 1], shifts=[0, 1, s3])


def test_fold_tables():
    assert fold_table(3) == [0, 1, 0]
    assert fold_table(4) == [0, 1, 1, 0]
    assert all(fold(0, X) == 0 for X in range(1, 9))
    with pytest.raises(ValueError):
        fold(4, 4)


def test_dirichlet_ratio_poles_and_limits():
    assert_allclose(dirichlet_ratio(0.0, 5), 5.0)
    assert_allclose(dirichlet_ratio(1.0, 4), -4.0)
    assert_allclose(dirichlet_ratio(1.0, 5), 5.0)
    for t0 in (0.0, 1.0, 2.0, 3.0):
        for L in (2, 3, 4, 7):
            eps = 1e-5
            two_sided = 0.5 * (np.sin(L * np.pi * (t0 + eps)) / np.sin(np.pi * (t0 + eps))
                               + np.sin(L * np.pi * (t0 - eps)) / np.sin(np.pi * (t0 - eps)))
            assert abs(dirichlet_ratio(t0, L) - two_sided) < 1e-6


def test_dirichlet_ratio_matches_sum_of_exponentials():
    t = np.linspace(-2.3, 2.3, 101)
    for L in (1, 2, 5, 8):
        direct = np.abs(sum(np.exp(2j * np.pi * t * k) for k in range(L)))
        assert_allclose(np.abs(dirichlet_ratio(t, L)), direct, atol=1e-9)


def test_weight_closed_exsca_examples():
    z = weight_closed_exsca(4, 3, 1)
    assert z(8) == z(-8) == 2
    assert z(16) == z(-16) == 1
    sets = exsca_sets(4, 3, 1)
    assert all(z(l) == 1 for l in sets.nonmirror)
    assert weight_closed_exsca(4, 3, 0)(2) == 2


def test_weight_closed_exsca_small_sweep_against_pair_counts():
    for M, N in coprime_pairs(6):
        for s in range(2 * N):
            oracle = brute_weights(brute_positions_exsca(M, N, s))
            assert weight_closed_exsca(M, N, s) == WeightFunction.from_mapping(oracle)
            assert weight_piecewise_exsca(M, N, s) == WeightFunction.from_mapping(oracle)


def test_mirror_characterization_matches_enumeration():
    for M, N in coprime_pairs(7):
        for s in range(2 * N):
            subs, _ = positions(ExscaConfig(M, N, s))
            brute = set(mirror_pair_set(cross_differences(*subs)))
            assert mirror_pairs_characterized(M, N, s) == brute


def test_cross_ranges_case_split():
    r = cross_ranges(4, 3, 1)
    assert r.plus == (-19, 15)
    assert r.cross_extent == 19
    r = cross_ranges(3, 7, 0)
    assert r.cross_extent == 2 * 3 * (7 - 1)
    assert apca_ranges(4, 3, 2) == (11, 11)


def test_unique_counts():
    for s, count in [(0, 17), (1, 24 - 0 + 13)]:
        subs, _ = positions(ExscaConfig(4, 3, s))
        lp = len(mirror_pair_set(cross_differences(*subs)))
        z = brute_weights(brute_positions_exsca(4, 3, s))
        assert unique_count_exsca(4, 3, s, lp) == len(z)
        assert cross_unique_count(4, 3, lp) == len(set(cross_differences(*subs).full))
    subs, _ = positions(ExscaConfig(4, 3, 0))
    assert unique_count_exsca(4, 3, 0, len(mirror_pair_set(cross_differences(*subs)))) == 17


def test_s2_missing_self_differences():
    z = brute_weights(brute_positions_exsca(4, 3, 2))
    subs, _ = positions(ExscaConfig(4, 3, 2))
    lp = len(mirror_pair_set(cross_differences(*subs)))
    assert unique_count_exsca(4, 3, 2, lp) == 24 - lp + 2 * (1 + 1) == len(z)


def test_dtft_window_equals_direct_cosine_sum():
    for M, N, s in [(4, 3, 0), (4, 3, 3), (7, 6, 5)]:
        z = weight_function(positions(ExscaConfig(M, N, s))[1])
        w = dtft_window(z, 512)
        oracle = direct_dtft(brute_weights(brute_positions_exsca(M, N, s)), w.freqs)
        assert_allclose(w.values, oracle, atol=1e-9)


def test_bias_exsca_s3_against_direct_dtft():
    w = bias_closed_exsca(4, 3, 3)
    oracle = direct_dtft(brute_weights(brute_positions_exsca(4, 3, 3)), w.freqs)
    assert dev(w.values, oracle) < 1e-9


@pytest.mark.parametrize("s", [0, 2, 4])
def test_even_shift_image_at_pi(s):
    w = bias_closed_exsca(4, 3, s).normalized()
    assert abs(w.at(1.0) - w.at(0.0)) < 1e-9


def test_main_lobe_at_zero():
    w = bias_closed_exsca(4, 3, 1)
    assert np.argmax(w.values) == 0
    assert_allclose(w.values[0], 7 ** 2)


def test_bias_apca_against_direct_dtft():
    for M, N in [(4, 3), (7, 3), (3, 4), (9, 8)]:
        for s in range(N):
            w = bias_closed_apca(M, N, s, grid_size=1024)
            oracle = direct_dtft(brute_weights(brute_positions_apca(M, N, s)), w.freqs)
            assert dev(w.values, oracle) < 1e-9


def test_generalized_weights_three_subarrays():
    cfg = three_subarray_config(2)
    _, union = positions(cfg)
    assert weight_closed_generalized(cfg) == WeightFunction.from_mapping(brute_weights(union))


def test_generalized_single_subarray_is_triangle():
    cfg = GeneralizedConfig.from_lists([4], [3], periods=[1])
    z = weight_closed_generalized(cfg)
    assert z.to_dict() == {3 * n: 4 - abs(n) for n in range(-3, 4)}


def test_generalized_q2_reduces_to_exsca_for_odd_shift():
    for s in (1, 3, 5):
        cfg = GeneralizedConfig.from_exsca(ExscaConfig(4, 3, s))
        assert weight_closed_generalized(cfg) == weight_closed_exsca(4, 3, s)
        a = bias_closed_generalized(cfg, 1024)
        b = bias_closed_exsca(4, 3, s, grid_size=1024)
        assert max_abs_deviation(a, b) < 1e-9


def test_generalized_overlap_is_flagged():
    with pytest.raises(ClosedFormInapplicable) as err:
        bias_closed_generalized(three_subarray_config(3))
    assert err.value.overlaps == [(21, frozenset({1, 2}))]
    with pytest.raises(ClosedFormInapplicable):
        weight_closed_generalized(three_subarray_config(9))


@pytest.mark.parametrize("ex,bad", [((3, 3), {0, 3, 6}), ((3, 2), {0, 6})])
def test_mixed_sparsity_overlaps(ex, bad):
    flagged = set()
    for s in range(3 * 3):
        cfg = GeneralizedConfig.from_lists([3, 4], [4, 3], sparsity=list(ex), shifts=[0, s])
        try:
            w = bias_closed_generalized(cfg, 1024)
        except ClosedFormInapplicable:
            flagged.add(s)
            continue
        oracle = direct_dtft(brute_weights(positions(cfg)[1]), w.freqs)
        assert dev(w.values, oracle) < 1e-9
    assert flagged == bad


def test_bias_window_api():
    w = BiasWindow(frequency_grid(8), np.arange(8.0)[::-1] + 1)
    assert w.normalized().values.max() == 1.0
    assert w.to_csv().splitlines()[0] == "f,value,normalized"
    assert w.at(0.25) == 7.0


@pytest.mark.parametrize("s,expected", [(0, 0.7237), (1, 0.6229), (2, 0.7121)])
def test_relative_amplitude_apca_4_3(s, expected):
    assert abs(relative_amplitude(bias_closed(ApcaConfig(4, 3, s))) - expected) < 5e-3


def test_relative_amplitude_scale_invariant():
    w = bias_closed(ApcaConfig(9, 8, 1))
    scaled = BiasWindow(w.freqs, 3.7 * w.values)
    assert relative_amplitude(scaled) == pytest.approx(relative_amplitude(w), abs=1e-12)
    assert abs(relative_amplitude(w) - 0.7366) < 5e-3


def test_relative_amplitude_rejects_flat_window():
    with pytest.raises(ValueError):
        relative_amplitude(BiasWindow(frequency_grid(16), np.ones(16)))


def test_main_lobe_bounds_symmetric():
    w = bias_closed(ApcaConfig(4, 3, 0))
    right, left = main_lobe_bounds(w.values)
    assert right == len(w.values) - left


def test_exsca_narrower_main_lobe_than_prototype():
    proto = bias_closed(ApcaConfig(4, 3, 0), 4096)
    ex = bias_closed(ExscaConfig(4, 3, 1), 4096)
    assert main_lobe_bounds(ex.values)[0] < main_lobe_bounds(proto.values)[0]


def test_comparison_record_keys():
    rec = comparison_record(ApcaConfig(4, 3, 2), 1024)
    assert rec["unique_count"] == 21 and rec["continuous_range"] == 9
    assert rec["applicable"] and rec["max_abs_dev"] < 1e-9
    rec = comparison_record(three_subarray_config(3), 1024)
    assert not rec["applicable"] and rec["max_abs_dev"] is None
