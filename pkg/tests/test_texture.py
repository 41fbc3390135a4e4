"""Texture matrices and feature statistics, checked against hand
enumerations and independent re-implementations."""

import numpy as np
import pytest

from fknne import (
    DIRECTIONS,
    FEATURE_NAMES,
    ExtractionConfig,
    FeatureVector,
    Gldm,
    GrayImage,
    compute_glcm,
    compute_gldm,
    compute_glrlm,
    extract_all,
    gldm_features,
    haralick_features,
    runlength_features,
)

EXAMPLE_3X3 = GrayImage([[0, 0, 1], [0, 0, 1], [0, 2, 2]], 2)


def random_quantized(rng, shape=(8, 8), levels=4) -> GrayImage:
    return GrayImage(rng.integers(0, levels, size=shape), levels - 1)


def checkerboard(n=6) -> GrayImage:
    return GrayImage(np.indices((n, n)).sum(axis=0) % 2, 1)


class TestGlcm:
    def test_hand_enumerated_horizontal_pairs(self):
        g = compute_glcm(EXAMPLE_3X3, 1, 0)
        expected = np.zeros((3, 3))
        expected[0, 0] = 2 / 6
        expected[0, 1] = 2 / 6
        expected[0, 2] = 1 / 6
        expected[2, 2] = 1 / 6
        assert np.array_equal(g.p, expected)

    def test_symmetric_mirrors_counts(self):
        g = compute_glcm(EXAMPLE_3X3, 1, 0, symmetric=True)
        expected = np.zeros((3, 3))
        expected[0, 0] = 4 / 12
        expected[0, 1] = expected[1, 0] = 2 / 12
        expected[0, 2] = expected[2, 0] = 1 / 12
        expected[2, 2] = 2 / 12
        assert np.array_equal(g.p, expected)

    def test_constant_image_single_cell(self):
        g = compute_glcm(GrayImage(np.full((4, 4), 2), 3), 1, 0)
        assert g.p[2, 2] == 1.0
        assert g.p.sum() == 1.0

    def test_zero_offset_rejected(self):
        with pytest.raises(ValueError, match="nonzero"):
            compute_glcm(EXAMPLE_3X3, 0, 0)

    def test_offset_larger_than_image_rejected(self):
        with pytest.raises(ValueError, match="empty co-occurrence"):
            compute_glcm(GrayImage([[0, 1]], 1), 5, 0)

    def test_probabilities_sum_to_one_on_random_images(self):
        rng = np.random.default_rng(42)
        for _ in range(25):
            img = random_quantized(rng)
            for dx, dy in DIRECTIONS:
                for sym in (False, True):
                    p = compute_glcm(img, dx, dy, symmetric=sym).p
                    assert (p >= 0).all()
                    assert abs(p.sum() - 1.0) < 1e-9


class TestHaralickFeatures:
    def test_constant_image_values(self):
        hf = haralick_features(compute_glcm(GrayImage(np.full((5, 5), 1), 3), 1, 0))
        assert hf["asm"] == 1.0
        assert hf["contrast"] == 0.0
        assert hf["entropy"] == 0.0
        assert hf["idm"] == 1.0
        # degenerate marginals: correlation defined as 0
        assert hf["correlation"] == 0.0

    def test_contrast_matches_direct_summation(self):
        hf = haralick_features(compute_glcm(EXAMPLE_3X3, 1, 0))
        # sum p(i,j)(i-j)^2 = (2/6)*1 + (1/6)*4 = 1
        assert hf["contrast"] == pytest.approx(1.0, abs=1e-12)

    def test_asm_against_independent_loop(self):
        rng = np.random.default_rng(1)
        g = compute_glcm(random_quantized(rng), 1, 1)
        direct = 0.0
        for i in range(g.levels):
            for j in range(g.levels):
                direct += g.p[i, j] ** 2
        assert haralick_features(g)["asm"] == pytest.approx(direct, abs=1e-12)

    def test_sum_average_is_twice_marginal_mean_when_symmetric(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            g = compute_glcm(random_quantized(rng), 0, 1, symmetric=True)
            marginal_mean = float(np.arange(g.levels) @ g.p.sum(axis=1))
            assert haralick_features(g)["sum_average"] == pytest.approx(
                2.0 * marginal_mean, abs=1e-9
            )

    def test_ranges_on_random_fixtures(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            g = compute_glcm(random_quantized(rng), *DIRECTIONS[rng.integers(4)])
            hf = haralick_features(g)
            assert 0.0 < hf["asm"] <= 1.0
            assert hf["contrast"] >= 0.0
            assert hf["entropy"] >= 0.0
            assert -1.0 <= hf["correlation"] <= 1.0
            assert 0.0 < hf["idm"] <= 1.0


class TestGlrlm:
    def test_hand_run_enumeration(self):
        rl = compute_glrlm(GrayImage([[0, 0, 1, 1, 1]], 1), 1, 0)
        assert rl.r[0, 1] == 1  # one run of gray 0, length 2
        assert rl.r[1, 2] == 1  # one run of gray 1, length 3
        assert rl.r.sum() == 2

    def test_constant_image_one_run_per_row(self):
        rl = compute_glrlm(GrayImage(np.full((3, 5), 1), 1), 1, 0)
        assert rl.r[1, 4] == 3
        assert rl.r.sum() == 3

    def test_checkerboard_forces_unit_runs(self):
        img = checkerboard(6)
        rl = compute_glrlm(img, 1, 0)
        assert rl.r[:, 0].sum() == 36
        assert rl.r[:, 1:].sum() == 0

    def test_unsupported_direction_rejected(self):
        with pytest.raises(ValueError, match="direction"):
            compute_glrlm(EXAMPLE_3X3, 2, 0)

    def test_pixel_coverage_identity_on_random_images(self):
        # every pixel lies in exactly one maximal run
        rng = np.random.default_rng(7)
        lengths = None
        for _ in range(100):
            img = random_quantized(rng)
            for dx, dy in DIRECTIONS:
                rl = compute_glrlm(img, dx, dy)
                lengths = np.arange(1, rl.max_run + 1)
                assert int((rl.r * lengths).sum()) == rl.n_pixels


class TestRunlengthFeatures:
    def test_run_percentage_single_row(self):
        rl = compute_glrlm(GrayImage([[0, 0, 1, 1, 1]], 1), 1, 0)
        assert runlength_features(rl)["rp"] == pytest.approx(0.4, abs=1e-12)

    def test_checkerboard_unit_emphases(self):
        feats = runlength_features(compute_glrlm(checkerboard(6), 1, 0))
        assert feats["sre"] == 1.0
        assert feats["lre"] == 1.0

    def test_constant_square_run_percentage(self):
        rl = compute_glrlm(GrayImage(np.zeros((4, 4), dtype=int), 1), 1, 0)
        assert runlength_features(rl)["rp"] == pytest.approx(0.25, abs=1e-12)


class TestGldm:
    def test_constant_image_all_mass_at_zero(self):
        d = compute_gldm(GrayImage(np.full((4, 4), 3), 7), 1, 0).d
        assert d[0] == 1.0

    def test_hand_enumerated_row(self):
        d = compute_gldm(GrayImage([[0, 2, 0]], 2), 1, 0).d
        assert d.tolist() == [0.0, 0.0, 1.0]

    def test_checkerboard_all_mass_at_one(self):
        d = compute_gldm(checkerboard(4), 1, 0).d
        assert d[1] == 1.0

    def test_probabilities_sum_to_one_on_random_images(self):
        rng = np.random.default_rng(9)
        for _ in range(25):
            img = random_quantized(rng)
            for dx, dy in DIRECTIONS:
                d = compute_gldm(img, dx, dy).d
                assert (d >= 0).all()
                assert abs(d.sum() - 1.0) < 1e-9


class TestGldmFeatures:
    def test_constant_image_values(self):
        feats = gldm_features(compute_gldm(GrayImage(np.full((4, 4), 1), 3), 1, 0))
        assert feats["mean"] == 0.0
        assert feats["contrast"] == 0.0
        assert feats["asm"] == 1.0
        assert feats["entropy"] == 0.0
        assert feats["idm"] == 1.0

    def test_checkerboard_values(self):
        feats = gldm_features(compute_gldm(checkerboard(4), 1, 0))
        assert feats["mean"] == 1.0
        assert feats["contrast"] == 1.0
        assert feats["idm"] == 0.5

    def test_uniform_two_cell_entropy(self):
        feats = gldm_features(Gldm(levels=2, d=np.array([0.5, 0.5]), offset=(1, 0)))
        assert feats["entropy"] == pytest.approx(np.log(2), abs=1e-12)


class TestExtractAll:
    def test_schema_is_stable_across_images(self):
        rng = np.random.default_rng(10)
        fv1 = extract_all(random_quantized(rng, (6, 6), 16))
        fv2 = extract_all(random_quantized(rng, (9, 5), 16))
        assert fv1.names == fv2.names == FEATURE_NAMES
        assert len(fv1) == 25

    def test_constant_roi_direction_average(self):
        fv = extract_all(GrayImage(np.full((4, 4), 7), 255))
        assert fv["glcm.contrast"] == 0.0
        assert fv["glcm.asm"] == 1.0
        # rp averaged over the four directions of a 4x4 constant image:
        # rows 4/16, cols 4/16, diagonals 7/16 twice -> 11/32
        assert fv["rl.rp"] == pytest.approx(11 / 32, abs=1e-12)

    def test_deterministic_bitwise(self):
        rng = np.random.default_rng(12)
        img = random_quantized(rng, (10, 10), 16)
        a = extract_all(img)
        b = extract_all(img)
        assert a.values.tobytes() == b.values.tobytes()

    def test_rotation_by_90_degrees_preserves_direction_average(self):
        rng = np.random.default_rng(13)
        for _ in range(5):
            img = random_quantized(rng, (8, 8), 8)
            rot = GrayImage(np.rot90(img.pixels), img.max_val)
            a = extract_all(img)
            b = extract_all(rot)
            assert np.allclose(a.values, b.values, atol=1e-9)

    def test_propagates_quantization(self):
        # raw 8-bit input is quantized down to the configured depth
        rng = np.random.default_rng(14)
        img = GrayImage(rng.integers(0, 256, size=(8, 8)), 255)
        fv = extract_all(img, ExtractionConfig(levels=8))
        assert np.all(np.isfinite(fv.values))


class TestFeatureVector:
    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError, match="unique"):
            FeatureVector(("a", "a"), np.array([1.0, 2.0]))

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError, match="finite"):
            FeatureVector(("a",), np.array([np.inf]))

    def test_as_dict_round_trip(self):
        fv = FeatureVector(("x", "y"), np.array([1.5, -2.0]))
        assert fv.as_dict() == {"x": 1.5, "y": -2.0}
