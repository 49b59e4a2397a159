import numpy as np
import pytest

from wavecoef import (
    CoeffPlane,
    CoeffPyramid,
    LiftingParams,
    analysis_filters,
    build_transform_pair,
    dwt1d_lifting_reference,
    dwt2d,
    dwt2d_batch,
    dwt2d_lifting_reference,
    dwt_multilevel,
    idwt2d,
    idwt_multilevel,
    idwt_partial,
    merge_subbands,
    plane_to_pyramid,
    pyramid_to_plane,
    split_subbands,
)

# Equivalent analysis filter bank, expanded independently from the lifting
# recurrences on an unbounded signal (oracle in a scratch script, frozen
# here).  Matches the published 9/7 irreversible filter taps.
H0_TAPS = np.array([
    0.026748757411, -0.016864118443, -0.078223266529, 0.266864118443,
    0.602949018236, 0.266864118443, -0.078223266529, -0.016864118443,
    0.026748757411,
])
H1_TAPS = np.array([
    0.091271763114, -0.057543526229, -0.591271763114, 1.115087052457,
    -0.591271763114, -0.057543526229, 0.091271763114,
])


def wss_index(j: int, n: int) -> int:
    # whole-sample symmetric extension: x[-1] -> x[1], x[n] -> x[n-2]
    period = 2 * n - 2
    j = j % period
    return j if j < n else period - j


def convolution_oracle_1d(x: np.ndarray) -> np.ndarray:
    """Direct filter-bank transform: convolve with the frozen taps under
    symmetric extension, downsample, concatenate low then high."""
    n = x.size
    half = n // 2
    out = np.empty(n)
    for i in range(half):
        out[i] = sum(H0_TAPS[k + 4] * x[wss_index(2 * i + k, n)] for k in range(-4, 5))
        out[half + i] = sum(
            H1_TAPS[k + 3] * x[wss_index(2 * i + 1 + k, n)] for k in range(-3, 4))
    return out


class TestLiftingParams:
    def test_defaults_valid(self):
        p = LiftingParams()
        assert p.alpha < 0 and p.k_scale > 1

    @pytest.mark.parametrize("field", ["alpha", "beta", "gamma", "delta", "k_scale"])
    @pytest.mark.parametrize("bad", [0.0, float("nan"), float("inf")])
    def test_rejects_degenerate_values(self, field, bad):
        with pytest.raises(ValueError):
            LiftingParams(**{field: bad})

    def test_derived_filter_gains(self):
        h0, h1 = analysis_filters()
        assert abs(h0.sum() - 1.0) < 1e-9
        assert abs(h1.sum()) < 1e-9

    def test_derived_filters_match_frozen_taps(self):
        h0, h1 = analysis_filters()
        assert np.abs(h0 - H0_TAPS).max() < 1e-11
        assert np.abs(h1 - H1_TAPS).max() < 1e-11


class TestBuildTransformPair:
    def test_inverse_identity_n4(self):
        pair = build_transform_pair(4)
        assert np.abs(pair.A @ pair.A_inv - np.eye(4)).max() < 1e-12

    @pytest.mark.parametrize("n", [4, 8, 16, 32, 64])
    def test_inverse_identity(self, n):
        pair = build_transform_pair(n)
        assert np.abs(pair.A @ pair.A_inv - np.eye(n)).max() < 1e-10

    def test_constant_signal_gains(self):
        # DC gains of the derived filters: 1 for low, 0 for high
        pair = build_transform_pair(8)
        c = 7.5
        out = np.full(8, c) @ pair.A
        assert np.abs(out[:4] - c).max() < 1e-9
        assert np.abs(out[4:]).max() < 1e-9

    def test_impulse_equals_matrix_column_and_reference(self):
        pair = build_transform_pair(8)
        impulse = np.zeros(8)
        impulse[0] = 1.0
        out = impulse @ pair.A
        assert np.array_equal(out, pair.A[0])
        assert np.abs(out - dwt1d_lifting_reference(impulse)).max() < 1e-12

    def test_matches_convolution_oracle(self, rng):
        pair = build_transform_pair(16)
        for _ in range(20):
            x = rng.uniform(-100, 100, 16)
            assert np.abs(x @ pair.A - convolution_oracle_1d(x)).max() < 1e-9

    @pytest.mark.parametrize("n", [3, 5, 7, 2, 0, -4])
    def test_rejects_bad_lengths(self, n):
        with pytest.raises(ValueError):
            build_transform_pair(n)

    def test_factorization_consistency(self):
        pair = build_transform_pair(16)
        assert np.abs(pair.factors.product() - pair.A).max() < 1e-12

    def test_deinterleave_is_permutation(self):
        s = build_transform_pair(16).factors.s
        assert np.array_equal(np.sort(s, axis=0)[-1], np.ones(16))
        assert (s.sum(axis=0) == 1).all() and (s.sum(axis=1) == 1).all()
        assert ((s == 0) | (s == 1)).all()

    def test_scaling_factor_is_diagonal_split(self):
        pair = build_transform_pair(8)
        d = np.diag(pair.factors.scaling)
        assert np.allclose(d[0::2], 1.0 / pair.params.k_scale)
        assert np.allclose(d[1::2], pair.params.k_scale)
        assert np.count_nonzero(pair.factors.scaling - np.diag(d)) == 0


class TestDwt2d:
    def test_flat_image_concentrates_in_ll(self):
        pair = build_transform_pair(32)
        w = dwt2d(np.full((32, 32), 128.0), pair)
        ll, hl, lh, hh = split_subbands(w)
        assert np.abs(ll - 128.0).max() < 1e-9
        for band in (hl, lh, hh):
            assert np.abs(band).max() < 1e-9

    def test_zero_in_zero_out(self):
        pair = build_transform_pair(16)
        assert np.abs(dwt2d(np.zeros((16, 16)), pair).data).max() == 0.0

    def test_matches_lifting_reference(self, rng):
        pair = build_transform_pair(32)
        x = rng.uniform(-128, 128, (32, 32))
        diff = dwt2d(x, pair).data - dwt2d_lifting_reference(x).data
        assert np.abs(diff).max() < 1e-9

    def test_linearity(self, rng):
        pair = build_transform_pair(16)
        x, y = rng.normal(size=(2, 16, 16))
        lhs = dwt2d(2.5 * x - 1.25 * y, pair).data
        rhs = 2.5 * dwt2d(x, pair).data - 1.25 * dwt2d(y, pair).data
        assert np.abs(lhs - rhs).max() < 1e-9

    def test_shape_errors(self, rng):
        pair = build_transform_pair(16)
        with pytest.raises(ValueError):
            dwt2d(rng.normal(size=(16, 8)), pair)
        with pytest.raises(ValueError):
            dwt2d(rng.normal(size=(8, 8)), pair)


class TestIdwt2d:
    @pytest.mark.parametrize("n", [8, 16, 32, 64, 224])
    def test_perfect_reconstruction_double(self, n, rng):
        pair = build_transform_pair(n)
        x = rng.uniform(0, 255, (n, n))
        assert np.abs(idwt2d(dwt2d(x, pair), pair) - x).max() < 1e-10

    @pytest.mark.parametrize("n", [8, 32, 64])
    def test_perfect_reconstruction_single_precision_storage(self, n, rng):
        # coefficients held in float32, as in the WCT container
        pair = build_transform_pair(n)
        x = rng.uniform(0, 255, (n, n)).astype(np.float32)
        w32 = dwt2d(x, pair).data.astype(np.float32)
        back = idwt2d(CoeffPlane(w32.astype(np.float64)), pair)
        assert np.abs(back - x).max() < 1e-4

    def test_zero_in_zero_out(self):
        pair = build_transform_pair(16)
        assert np.abs(idwt2d(CoeffPlane(np.zeros((16, 16))), pair)).max() == 0.0

    def test_ll_only_constant_reconstructs_flat(self):
        pair = build_transform_pair(16)
        w = np.zeros((16, 16))
        w[:8, :8] = 42.0
        back = idwt2d(CoeffPlane(w), pair)
        assert np.abs(back - 42.0).max() < 1e-7

    def test_size_mismatch(self):
        pair = build_transform_pair(16)
        with pytest.raises(ValueError):
            idwt2d(CoeffPlane(np.zeros((8, 8))), pair)


class TestLiftingReference:
    def test_constant_signal(self):
        out = dwt1d_lifting_reference(np.full(8, 3.25))
        assert np.abs(out[:4] - 3.25).max() < 1e-9
        assert np.abs(out[4:]).max() < 1e-9

    def test_zero_signal(self):
        assert np.abs(dwt1d_lifting_reference(np.zeros(12))).max() == 0.0

    def test_odd_length_rejected(self):
        with pytest.raises(ValueError):
            dwt1d_lifting_reference(np.zeros(7))

    def test_2d_variant_rejects_non_square(self):
        with pytest.raises(ValueError):
            dwt2d_lifting_reference(np.zeros((8, 6)))


class TestBatch:
    def test_batch_matches_per_plane(self, rng):
        pair = build_transform_pair(16)
        stack = rng.normal(size=(5, 16, 16))
        batched = dwt2d_batch(stack, pair)
        for i in range(5):
            assert np.abs(batched[i] - dwt2d(stack[i], pair).data).max() < 1e-9

    def test_batch_shape_errors(self):
        pair = build_transform_pair(16)
        with pytest.raises(ValueError):
            dwt2d_batch(np.zeros((3, 16, 8)), pair)


class TestSubbandLayout:
    def test_split_merge_identity(self, rng):
        plane = CoeffPlane(rng.normal(size=(16, 16)))
        assert np.array_equal(merge_subbands(*split_subbands(plane)).data, plane.data)

    def test_merge_rejects_mismatched_quadrants(self):
        with pytest.raises(ValueError):
            merge_subbands(np.zeros((4, 4)), np.zeros((4, 4)),
                           np.zeros((4, 4)), np.zeros((2, 2)))

    def test_plane_rejects_nonfinite(self):
        bad = np.zeros((8, 8))
        bad[2, 3] = np.nan
        with pytest.raises(ValueError):
            CoeffPlane(bad)


class TestMultilevel:
    def test_level1_equals_dwt2d(self, rng):
        x = rng.uniform(0, 255, (16, 16))
        pyramid = dwt_multilevel(x, 1)
        plane = dwt2d(x, build_transform_pair(16))
        assert np.abs(pyramid_to_plane(pyramid) - plane.data).max() < 1e-12

    def test_two_level_roundtrip(self, rng):
        x = rng.uniform(0, 255, (32, 32))
        assert np.abs(idwt_multilevel(dwt_multilevel(x, 2)) - x).max() < 1e-9

    def test_constant_image_concentrates_in_deepest_ll(self):
        pyramid = dwt_multilevel(np.full((32, 32), 55.0), 2)
        assert np.abs(pyramid.ll - 55.0).max() < 1e-9
        for triple in pyramid.details:
            for band in triple:
                assert np.abs(band).max() < 1e-9

    @pytest.mark.parametrize("n,levels", [(10, 2), (12, 3), (8, 4)])
    def test_indivisible_size_rejected(self, n, levels):
        with pytest.raises(ValueError):
            dwt_multilevel(np.zeros((n, n)), levels)

    def test_coefficient_count_invariant(self, rng):
        pyramid = dwt_multilevel(rng.normal(size=(32, 32)), 3)
        total = pyramid.ll.size + sum(b.size for t in pyramid.details for b in t)
        assert total == 32 * 32

    def test_pyramid_plane_roundtrip(self, rng):
        pyramid = dwt_multilevel(rng.normal(size=(32, 32)), 2)
        grid = pyramid_to_plane(pyramid)
        back = plane_to_pyramid(grid, 2)
        assert np.array_equal(back.ll, pyramid.ll)
        for a, b in zip(back.details, pyramid.details):
            for x, y in zip(a, b):
                assert np.array_equal(x, y)

    def test_bad_pyramid_construction(self):
        with pytest.raises(ValueError):
            CoeffPyramid(n=16, levels=2, ll=np.zeros((4, 4)), details=())


class TestIdwtPartial:
    def test_identity_at_deepest_level(self, rng):
        pyramid = dwt_multilevel(rng.normal(size=(32, 32)), 2)
        plane = idwt_partial(pyramid, 2)
        assert plane.level == 2 and plane.n == 16
        expected = merge_subbands(pyramid.ll, *pyramid.details[1], level=2)
        assert np.array_equal(plane.data, expected.data)

    def test_collapse_to_level1_matches_direct_transform(self, rng):
        x = rng.uniform(0, 255, (32, 32))
        pyramid = dwt_multilevel(x, 2)
        collapsed = idwt_partial(pyramid, 1)
        direct = dwt2d(x, build_transform_pair(32))
        assert np.abs(collapsed.data - direct.data).max() < 1e-9

    def test_collapse_then_invert_recovers_image(self, rng):
        x = rng.uniform(0, 255, (32, 32))
        plane = idwt_partial(dwt_multilevel(x, 2), 1)
        assert np.abs(idwt2d(plane, build_transform_pair(32)) - x).max() < 1e-9

    @pytest.mark.parametrize("level", [0, 3, -1])
    def test_out_of_range_level(self, level, rng):
        pyramid = dwt_multilevel(rng.normal(size=(32, 32)), 2)
        with pytest.raises(ValueError):
            idwt_partial(pyramid, level)
