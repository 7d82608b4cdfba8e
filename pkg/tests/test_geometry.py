from math import gcd

import numpy as np
import pytest

from exsca.geometry import (ApcaConfig, CoPrimePair, ElementSet, ExscaConfig,
                            GeneralizedConfig, SubarraySpec, detect_overlap,
                            geometry_record, pivot_location, positions,
                            positions_apca, positions_exsca, positions_generalized,
                            validate_coprime)


def three_subarray_config(s3=2, compression=(1, 1, 1)):
    return GeneralizedConfig.from_lists(
        counts=[2, 3, 5], spacings=[15, 10, 6], compression=compression,
        sparsity=[3, 2, 1], periods=[3, 2, 1], shifts=[0, 1, s3])


@pytest.mark.parametrize("M,N,expected", [(4, 3, True), (4, 2, False), (29, 27, True),
                                          (1, 3, False), (6, 9, False)])
def test_validate_coprime(M, N, expected):
    assert validate_coprime(M, N) is expected


def test_coprime_pair_rejects_common_factor():
    with pytest.raises(ValueError):
        CoPrimePair(4, 2)


def test_apca_prototype_positions():
    sub1, sub2, union = positions_apca(ApcaConfig(4, 3, 0))
    assert sub1.to_list() == [0, 4, 8]
    assert sub2.to_list() == [0, 3, 6, 9]
    assert len(union) == 6
    assert union.provenance[0] == (0, 1)


@pytest.mark.parametrize("s,pivot,location", [(0, (0, 0), 0), (1, (1, 1), 4), (2, (2, 2), 8)])
def test_apca_pivots(s, pivot, location):
    cfg = ApcaConfig(4, 3, s)
    assert pivot_location(cfg) == pivot
    assert cfg.M * pivot[0] == location


def test_apca_rejects_out_of_range_shift():
    with pytest.raises(ValueError):
        ApcaConfig(4, 3, 3)
    assert len(positions_apca(ApcaConfig(4, 3, 3, displaced=True))[2]) == 7


def test_exsca_odd_shift_uses_m_plus_n_elements():
    sub1, sub2, union = positions_exsca(ExscaConfig(4, 3, 1))
    assert sub1.to_list() == [0, 8, 16]
    assert sub2.to_list() == [1, 7, 13, 19]
    assert len(union) == 7
    assert detect_overlap([sub1, sub2]) == []


@pytest.mark.parametrize("s,where,pivot", [(0, 0, (0, 0)), (2, 8, (1, 1)), (4, 16, (2, 2))])
def test_exsca_even_shift_overlaps(s, where, pivot):
    sub1, sub2, union = positions_exsca(ExscaConfig(4, 3, s))
    assert detect_overlap([sub1, sub2]) == [(where, frozenset({0, 1}))]
    assert len(union) == 6
    assert pivot_location(ExscaConfig(4, 3, s)) == pivot


def test_exsca_odd_shift_has_no_pivot():
    assert pivot_location(ExscaConfig(4, 3, 3)) is None


def test_exsca_shift_range_and_displaced():
    with pytest.raises(ValueError):
        ExscaConfig(4, 3, 6)
    cfg = ExscaConfig(4, 3, 17, displaced=True)
    sub1, sub2, _ = positions_exsca(cfg)
    assert sub2.to_list()[0] > sub1.to_list()[-1]


def test_pivot_uniqueness_exhaustive():
    for M in range(2, 13):
        for N in range(2, 13):
            if gcd(M, N) != 1:
                continue
            for s in range(N):
                hits = [(n, m) for n in range(N) for m in range(M) if M * n - (N * m + s) == 0]
                assert len(hits) == 1
                assert pivot_location(ApcaConfig(M, N, s)) == hits[0]
                assert len(positions_apca(ApcaConfig(M, N, s))[2]) == M + N - 1


def test_exsca_zero_cross_difference_parity():
    for M in range(2, 13):
        for N in range(2, 13):
            if gcd(M, N) != 1:
                continue
            for s in range(2 * N):
                zeros = sum(2 * M * n == 2 * N * m + s for n in range(N) for m in range(M))
                assert zeros == (1 if s % 2 == 0 else 0)


def test_generalized_specializes_to_exsca_and_apca():
    cfg = ExscaConfig(4, 3, 1)
    _, union = positions_generalized(GeneralizedConfig.from_exsca(cfg))
    assert union == positions_exsca(cfg)[2]
    for s in range(3):
        apca = ApcaConfig(4, 3, s)
        gen = GeneralizedConfig.from_lists([3, 4], [4, 3], shifts=[0, s])
        assert positions_generalized(gen)[1] == positions_apca(apca)[2]


def test_generalized_three_subarray_union():
    subs, union = positions_generalized(three_subarray_config())
    assert [len(s) for s in subs] == [6, 6, 5]
    assert subs[0].to_list() == [0, 45, 90, 135, 180, 225]
    assert subs[1].to_list() == [1, 21, 41, 61, 81, 101]
    assert subs[2].to_list() == [2, 8, 14, 20, 26]
    brute = set(subs[0]) | set(subs[1]) | set(subs[2])
    assert union.to_list() == sorted(brute)
    assert len(union) == 17


def test_generalized_three_subarray_overlaps_by_enumeration():
    for s3 in range(2, 14):
        subs, _ = positions_generalized(three_subarray_config(s3))
        pos = [set(s) for s in subs]
        shared = sorted((p, frozenset(i for i in range(3) if p in pos[i]))
                        for p in set().union(*pos) if sum(p in q for q in pos) > 1)
        assert detect_overlap(subs) == shared
    assert detect_overlap(positions_generalized(three_subarray_config(3))[0]) == [(21, frozenset({1, 2}))]


def test_compression_gives_nested_style_first_subarray():
    cfg = GeneralizedConfig.from_lists([4, 3], [4, 3], compression=[4, 1], shifts=[0, 5])
    subs, _ = positions_generalized(cfg)
    assert subs[0].to_list() == [0, 1, 2, 3]


def test_compression_must_divide_spacing():
    with pytest.raises(ValueError):
        SubarraySpec(3, 10, compression=3)


def test_element_set_validation():
    with pytest.raises(ValueError):
        ElementSet(np.array([3, 1]))
    assert len(ElementSet(np.array([1, 5]))) == 2


def test_geometry_record_shape():
    rec = geometry_record(ApcaConfig(4, 3, 2))
    assert rec["family"] == "apca"
    assert rec["pivot"] == [2, 2]
    assert rec["union"] == [0, 2, 4, 5, 8, 11]
    assert rec["overlaps"] == [{"position": 8, "subarrays": [0, 1]}]
    assert geometry_record(ExscaConfig(4, 3, 3))["pivot"] is None
    assert geometry_record(three_subarray_config())["pivot"] is None


def test_positions_dispatch():
    subs, union = positions(ExscaConfig(7, 6, 5))
    assert len(subs) == 2 and len(union) == 13
