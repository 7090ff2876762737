import numpy as np
import pytest

from movstable.exceptions import DegenerateSampleError, StableDomainError, TableConstructionError
from movstable.stable import StableParams, moment_constant, sample_stable
from movstable.static import (
    AlphaTable,
    MomentPowers,
    build_alpha_table,
    default_alpha_table,
    estimate_alpha,
    estimate_mu,
    estimate_sigma,
    fit_static,
    optimal_sigma_power,
)


def test_estimate_mu_examples():
    assert estimate_mu([1, 1, 1]) == 1.0
    assert estimate_mu([-1, 1]) == 0.0
    with pytest.raises(ValueError):
        estimate_mu([])


def test_mean_does_not_settle_for_cauchy():
    # spread of the mean over seeds does not shrink with n when alpha = 1
    spread = []
    for n in (10**3, 10**5):
        mus = [estimate_mu(sample_stable(StableParams(3.0, 1.0, 1.0), n, s)) for s in range(30)]
        spread.append(np.subtract(*np.percentile(mus, [75, 25])))
    assert spread[1] > 0.3 * spread[0]


def test_estimate_sigma_cms():
    xs = sample_stable(StableParams(0.0, 2.0, 1.7), 10**5, 1)
    assert estimate_sigma(xs, 0.0, 1.7, 0.35) == pytest.approx(2.0, abs=0.04)


def test_estimate_sigma_homogeneous():
    xs = sample_stable(StableParams(0.5, 1.0, 1.4), 1000, 2)
    a = estimate_sigma(3 * xs, 1.5, 1.4, 0.35)
    b = estimate_sigma(xs, 0.5, 1.4, 0.35)
    assert a == pytest.approx(3 * b, rel=1e-13)


def test_estimate_sigma_gaussian_p2():
    xs = np.random.default_rng(3).normal(0.0, np.sqrt(2.0), 10**5)
    assert estimate_sigma(xs, 0.0, 2.0, 2.0) == pytest.approx(1.0, abs=0.01)


def test_estimate_sigma_degenerate():
    with pytest.raises(DegenerateSampleError):
        estimate_sigma([2.0, 2.0], 2.0, 1.5, 0.5)


def test_optimal_sigma_power():
    assert optimal_sigma_power(2.0) == 2.0
    assert optimal_sigma_power(1.5) == pytest.approx(0.25)
    assert optimal_sigma_power(1.1) == pytest.approx(0.05)
    with pytest.raises(StableDomainError):
        optimal_sigma_power(1.0)


def test_table_monotone_and_rows():
    t = build_alpha_table(0.5, 0.2, 1.05, 2.0, 0.005)
    assert t.alphas[0] == 1.05 and t.alphas[-1] == 2.0
    assert t.alphas.size == 191
    assert np.all(np.diff(t.ratios) < 0)
    ref = np.array([moment_constant(a, 0.5) / moment_constant(a, 0.2) for a in t.alphas])
    np.testing.assert_allclose(t.ratios, ref, rtol=1e-15)


def test_table_row_at_cauchy():
    t = build_alpha_table(0.5, 0.2, 0.8, 2.0, 0.05)
    i = int(np.argmin(np.abs(t.alphas - 1.0)))
    assert t.ratios[i] == pytest.approx(2.0 / moment_constant(1.0, 0.2), rel=1e-13)


def test_table_preconditions():
    with pytest.raises(StableDomainError):
        build_alpha_table(0.5, 0.5)
    with pytest.raises(StableDomainError):
        build_alpha_table(1.2, 0.2)


def test_table_rejects_nonmonotone():
    with pytest.raises(TableConstructionError):
        AlphaTable(0.5, 0.2, [1.0, 1.5, 2.0], [3.0, 1.0, 2.0])


def test_table_csv_roundtrip(tmp_path):
    t = build_alpha_table(0.5, 0.2, 1.1, 2.0, 0.05)
    t.to_csv(tmp_path / "t.csv")
    u = AlphaTable.from_csv(tmp_path / "t.csv", 0.5, 0.2)
    assert np.array_equal(t.alphas, u.alphas) and np.array_equal(t.ratios, u.ratios)
    assert (tmp_path / "t.csv").read_text().splitlines()[0] == "alpha,ratio"


def test_alpha_clamps_for_cauchy():
    xs = sample_stable(StableParams(0.0, 1.0, 1.0), 10**5, 4)
    assert estimate_alpha(xs, 0.0, default_alpha_table()) == 1.05
    wide = build_alpha_table(0.5, 0.2, 0.8, 2.0, 0.005)
    assert estimate_alpha(xs, 0.0, wide) == pytest.approx(1.0, abs=0.03)


def test_alpha_gaussian():
    xs = np.random.default_rng(5).normal(size=10**5)
    a = estimate_alpha(xs, 0.0, default_alpha_table())
    assert a <= 2.0 and a == pytest.approx(2.0, abs=0.02)


def test_alpha_scale_invariant():
    xs = sample_stable(StableParams(0.2, 1.0, 1.6), 5000, 6)
    t = default_alpha_table()
    assert estimate_alpha(7 * xs, 1.4, t) == pytest.approx(estimate_alpha(xs, 0.2, t), abs=1e-12)


def test_fit_static_recovers():
    xs = sample_stable(StableParams(1.0, 2.5, 1.6), 10**5, 7)
    p = fit_static(xs)
    assert p.alpha == pytest.approx(1.6, abs=0.03)
    assert p.sigma == pytest.approx(2.5, rel=0.03)
    assert p.mu == pytest.approx(1.0, abs=0.05)


def test_fit_static_options():
    xs = sample_stable(StableParams(0.0, 1.0, 1.8), 10**4, 8)
    assert fit_static(xs, center="mean").alpha == pytest.approx(fit_static(xs).alpha, abs=0.05)
    with pytest.raises(ValueError):
        fit_static(xs, center="mode")


def test_moment_powers_validation():
    with pytest.raises(StableDomainError):
        MomentPowers(p1=0.3, p2=0.3)
    with pytest.raises(StableDomainError):
        MomentPowers(p_sigma=0.0)
