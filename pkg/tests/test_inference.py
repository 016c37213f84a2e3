import math

import numpy as np
import pytest
from scipy import stats

from conftest import make_random_dataset
from mcaw.dataset import CategoricalDataset, Variable
from mcaw.errors import DegenerateError
from mcaw.inference import (describe_dimension, ellipse_from_points, format_p,
                            group_ellipse)
from mcaw.mca import fit_mca, variable_eta2


def planted_dataset(n=40, seed=0):
    """One variable splits individuals into two well-separated groups;
    a second variable is noise."""
    rng = np.random.default_rng(seed)
    split = np.array([0] * (n // 2) + [1] * (n - n // 2))
    noise = rng.integers(0, 2, size=n)
    noise[:2] = [0, 1]
    # couple a third variable to the split so axis 1 is determined by it
    coupled = split.copy()
    flip = rng.random(n) < 0.05
    coupled[flip] = 1 - coupled[flip]
    codes = np.column_stack([split, coupled, noise])
    return CategoricalDataset(
        variables=(Variable("X", ("lo", "hi")),
                   Variable("X2", ("lo", "hi")),
                   Variable("noise", ("u", "v"))),
        codes=codes)


def brute_force_anova(values, codes, n_groups):
    """Independent one-way ANOVA: eta2 by explicit loops, p via scipy."""
    groups = [values[codes == j] for j in range(n_groups)]
    grand = values.mean()
    ss_total = float(((values - grand) ** 2).sum())
    ss_between = sum(len(g) * (g.mean() - grand) ** 2 for g in groups)
    eta2 = ss_between / ss_total
    f_stat, p = stats.f_oneway(*groups)
    return eta2, float(p)


class TestDescribeDimension:
    def test_planted_axis_determining_variable(self):
        ds = planted_dataset()
        model = fit_mca(ds)
        desc = describe_dimension(model, ds, 1)
        row = next(r for r in desc.variables if r.name == "X")
        assert row.eta2 > 0.9
        assert row.p_value < 1e-6
        # independent oracle
        f = model.row_coords[:, 0]
        q = ds.variable_index("X")
        eta2, p = brute_force_anova(f, ds.codes[:, q], 2)
        assert row.eta2 == pytest.approx(eta2, abs=1e-10)
        assert row.p_value == pytest.approx(p, abs=1e-8)

    def test_eta2_matches_model(self):
        rng = np.random.default_rng(1)
        ds = make_random_dataset(rng, 50, 3)
        model = fit_mca(ds)
        names, eta2 = variable_eta2(model)
        for axis in range(1, model.n_dims + 1):
            desc = describe_dimension(model, ds, axis)
            for row in desc.variables:
                q = names.index(row.name)
                assert row.eta2 == pytest.approx(eta2[q, axis - 1], abs=1e-10)

    def test_sum_to_zero_convention(self):
        rng = np.random.default_rng(2)
        ds = make_random_dataset(rng, 60, 3)
        model = fit_mca(ds)
        desc = describe_dimension(model, ds, 1)
        est = {r.label: r.estimate for r in desc.categories}
        for q, var in enumerate(ds.variables):
            counts = np.bincount(ds.codes[:, q], minlength=len(var.labels))
            total = sum(counts[j] * est[f"{var.name}::{lab}"]
                        for j, lab in enumerate(var.labels))
            assert abs(total) < 1e-8

    def test_sorted_by_ascending_p(self):
        ds = planted_dataset()
        model = fit_mca(ds)
        desc = describe_dimension(model, ds, 1)
        p_vals = [r.p_value for r in desc.variables]
        assert p_vals == sorted(p_vals)

    def test_threshold_filters(self):
        ds = planted_dataset()
        model = fit_mca(ds)
        full = describe_dimension(model, ds, 1, p_threshold=1.0)
        cut = describe_dimension(model, ds, 1, p_threshold=1e-6)
        assert len(cut.variables) < len(full.variables)
        assert all(r.p_value <= 1e-6 for r in cut.variables)

    def test_estimate_invariant_under_permutation(self):
        rng = np.random.default_rng(3)
        ds = planted_dataset(seed=5)
        model = fit_mca(ds)
        perm = rng.permutation(ds.n)
        ds2 = CategoricalDataset(variables=ds.variables, codes=ds.codes[perm])
        model2 = fit_mca(ds2)
        d1 = describe_dimension(model, ds, 1)
        d2 = describe_dimension(model2, ds2, 1)
        e1 = {r.label: r.estimate for r in d1.categories}
        e2 = {r.label: r.estimate for r in d2.categories}
        for label in e1:
            assert e1[label] == pytest.approx(e2[label], abs=1e-9)

    def test_mismatched_dataset_rejected(self):
        ds = planted_dataset()
        model = fit_mca(ds)
        smaller = planted_dataset(n=20)
        with pytest.raises(DegenerateError, match="fitted"):
            describe_dimension(model, smaller, 1)

    def test_axis_out_of_range(self):
        ds = planted_dataset()
        model = fit_mca(ds)
        with pytest.raises(DegenerateError, match="out of range"):
            describe_dimension(model, ds, model.n_dims + 1)

    def test_p_values_in_unit_interval(self):
        rng = np.random.default_rng(4)
        ds = make_random_dataset(rng, 40, 4)
        model = fit_mca(ds)
        desc = describe_dimension(model, ds, 1)
        for row in list(desc.variables) + list(desc.categories):
            assert 0 <= row.p_value <= 1


class TestFormatP:
    def test_tiny_p(self):
        assert format_p(1e-20) == "< 1e-16"

    def test_regular_p(self):
        assert format_p(0.0314) == "0.0314"


class TestEllipseFromPoints:
    def test_isotropic_calibration(self):
        # chi2(2) quantile at 0.95 is 5.991; semi-axes of the mean
        # ellipse should approach sqrt(5.991 * sigma^2 / m).
        rng = np.random.default_rng(42)
        m, sigma = 500, 1.7
        points = rng.normal(0.0, sigma, size=(m, 2))
        spec = ellipse_from_points(points, "g", level=0.95, kind="mean")
        expected = math.sqrt(5.991 * sigma ** 2 / m)
        assert spec.semi_major == pytest.approx(expected, rel=0.10)
        assert spec.semi_minor == pytest.approx(expected, rel=0.10)

    def test_observation_kind_scaling(self):
        rng = np.random.default_rng(7)
        points = rng.normal(size=(100, 2))
        mean = ellipse_from_points(points, "g", kind="mean")
        obs = ellipse_from_points(points, "g", kind="observation")
        root_m = math.sqrt(100)
        assert obs.semi_major == pytest.approx(mean.semi_major * root_m, abs=1e-9)
        assert obs.semi_minor == pytest.approx(mean.semi_minor * root_m, abs=1e-9)

    def test_axis_aligned_anisotropic_orientation(self):
        rng = np.random.default_rng(8)
        points = np.column_stack([rng.normal(0, 3.0, 400),
                                  rng.normal(0, 0.5, 400)])
        spec = ellipse_from_points(points, "g")
        assert abs(spec.angle) < 0.1
        assert spec.semi_major > spec.semi_minor

    def test_area_monotone_in_level(self):
        rng = np.random.default_rng(9)
        points = rng.normal(size=(50, 2))
        areas = []
        for level in (0.5, 0.8, 0.9, 0.95, 0.99):
            s = ellipse_from_points(points, "g", level=level)
            areas.append(s.semi_major * s.semi_minor)
        assert areas == sorted(areas)

    def test_angle_range(self):
        rng = np.random.default_rng(10)
        for _ in range(20):
            points = rng.normal(size=(30, 2)) @ rng.normal(size=(2, 2))
            s = ellipse_from_points(points, "g")
            assert -math.pi / 2 < s.angle <= math.pi / 2


class TestGroupEllipse:
    def test_point_group_degenerate(self):
        codes = np.array([[0, 0]] * 5 + [[1, 1]] * 5)
        ds = CategoricalDataset(
            variables=(Variable("g", ("a", "b")), Variable("h", ("u", "v"))),
            codes=codes)
        model = fit_mca(ds)
        # members of each group coincide -> zero covariance
        ellipses, warnings = group_ellipse(model, ds, "g", axes=(1, 1))
        assert warnings == []
        for e in ellipses:
            assert e.degenerate
            assert e.semi_major == 0 and e.semi_minor == 0

    def test_small_group_warned_not_failed(self):
        rng = np.random.default_rng(11)
        codes = np.column_stack([
            np.concatenate([[0, 0], np.ones(20, dtype=int)]),
            rng.integers(0, 2, 22),
        ])
        codes[2:4, 1] = [0, 1]
        ds = CategoricalDataset(
            variables=(Variable("g", ("rare", "common")),
                       Variable("h", ("u", "v"))),
            codes=codes)
        model = fit_mca(ds)
        ellipses, warnings = group_ellipse(model, ds, "g")
        assert len(warnings) == 1 and "rare" in warnings[0]
        assert all(e.label == "common" for e in ellipses)

    def test_unknown_kind_rejected(self, balanced_dataset):
        model = fit_mca(balanced_dataset)
        with pytest.raises(DegenerateError):
            group_ellipse(model, balanced_dataset, "A", kind="wat")
