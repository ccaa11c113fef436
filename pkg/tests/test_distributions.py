import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

import reinsgame as rg

LN100 = math.log(100.0)

ANALYTIC_DISTS = [
    rg.Exponential(1.0),
    rg.Exponential(0.4),
    rg.Uniform(0.0, 2.0),
    rg.Uniform(0.5, 3.0),
    rg.Lognormal(0.0, 1.0),
    rg.Lognormal(-0.3, 0.6),
]


def test_exponential_survival_examples():
    dist = rg.Exponential(1.0)
    assert dist.survival(LN100) == pytest.approx(0.01, abs=1e-12)
    assert dist.survival(0.0) == 1.0


def test_empirical_survival_is_right_continuous_step():
    dist = rg.Empirical([1.0, 2.0, 3.0])
    assert dist.survival(1.5) == pytest.approx(2.0 / 3.0, abs=1e-15)
    assert dist.survival(1.0) == pytest.approx(2.0 / 3.0, abs=1e-15)
    assert dist.survival(0.999) == 1.0
    assert dist.survival(3.0) == 0.0


def test_exponential_quantile():
    dist = rg.Exponential(1.0)
    assert dist.quantile(0.99) == pytest.approx(LN100, abs=1e-12)
    assert dist.quantile(0.0) == 0.0


@pytest.mark.parametrize("bad", [-0.1, 1.0, 1.5])
def test_quantile_domain_errors(bad):
    with pytest.raises(ValueError):
        rg.Exponential(1.0).quantile(bad)


def test_empirical_quantile_order_statistic_rule():
    dist = rg.Empirical([1.0, 2.0, 3.0])
    assert dist.quantile(0.5) == 2.0
    assert dist.quantile(0.0) == 1.0  # essential infimum
    assert dist.quantile(1.0 / 3.0) == 1.0
    assert dist.quantile(0.34) == 2.0


def test_means():
    assert rg.Exponential(1.0).mean() == 1.0
    assert rg.Empirical([1.0, 2.0, 3.0]).mean() == pytest.approx(2.0, abs=1e-15)
    # near-point mass (an exact constant is rejected by construction)
    c, h = 5.0, 1e-9
    assert rg.Empirical([c - h, c + h]).mean() == pytest.approx(c, abs=1e-12)


def test_constant_sample_rejected():
    with pytest.raises(ValueError, match="constant"):
        rg.Empirical([5.0, 5.0, 5.0])


def test_weights_are_normalized():
    dist = rg.Empirical([1.0, 3.0], weights=[2.0, 6.0])
    assert dist.weights.sum() == pytest.approx(1.0, abs=1e-15)
    assert dist.mean() == pytest.approx(0.25 * 1.0 + 0.75 * 3.0, abs=1e-12)


@pytest.mark.parametrize("dist", ANALYTIC_DISTS, ids=repr)
def test_mean_matches_survival_integral(dist):
    value, _ = integrate.quad(dist.survival, 0.0, dist.support_upper, limit=200)
    assert value == pytest.approx(dist.mean(), rel=1e-8)


def test_empirical_mean_matches_survival_integral_exactly():
    dist = rg.Empirical([0.5, 1.0, 2.5, 2.5, 4.0])
    grid = np.concatenate([[0.0], np.unique(dist.samples)])
    steps = np.diff(grid) * dist.survival(grid[:-1])
    assert steps.sum() == pytest.approx(dist.mean(), abs=1e-15)


@pytest.mark.parametrize("dist", ANALYTIC_DISTS, ids=repr)
def test_support_upper_tail(dist):
    assert dist.survival(dist.support_upper) <= 1e-12 + 1e-15


@given(z=st.floats(0.0, 30.0), step=st.floats(1e-6, 10.0))
def test_survival_monotone(z, step):
    for dist in (rg.Exponential(1.0), rg.Uniform(0.0, 2.0), rg.Empirical([1.0, 2.0, 5.0])):
        assert dist.survival(z) >= dist.survival(z + step)


@given(p=st.floats(0.0, 0.999999))
def test_quantile_survival_roundtrip(p):
    for dist in (rg.Exponential(1.0), rg.Uniform(0.5, 3.0), rg.Empirical([1.0, 2.0, 2.0, 7.0])):
        q = dist.quantile(p)
        assert 1.0 - dist.survival(q) >= p - 1e-12


@given(p=st.floats(0.01, 0.99))
def test_step_law_roundtrip_lower_side(p):
    dist = rg.Empirical([1.0, 2.0, 2.0, 7.0])
    q = dist.quantile(p)
    assert 1.0 - dist.survival(q - 1e-9) <= p + 1e-12


@pytest.mark.parametrize("dist", ANALYTIC_DISTS, ids=repr)
@pytest.mark.parametrize("frac", [0.1, 0.5, 0.9])
def test_emin_matches_quadrature(dist, frac):
    x = frac * dist.support_upper
    value, _ = integrate.quad(dist.survival, 0.0, x, limit=200)
    assert dist.emin(x) == pytest.approx(value, rel=1e-9, abs=1e-10)


def test_emin_empirical_exact():
    dist = rg.Empirical([1.0, 2.0, 4.0])
    x = 2.5
    direct = np.mean(np.minimum(dist.samples, x))
    assert dist.emin(x) == pytest.approx(direct, abs=1e-15)


def test_parse_distribution_grammar(tmp_path):
    assert isinstance(rg.parse_distribution("exp(1)"), rg.Exponential)
    assert isinstance(rg.parse_distribution("lognormal(0.5,1.2)"), rg.Lognormal)
    assert isinstance(rg.parse_distribution("uniform(0,2)"), rg.Uniform)
    csv = tmp_path / "losses.csv"
    csv.write_text("1.0\n2.0\n3.0\n")
    emp = rg.parse_distribution(f"empirical({csv})")
    assert isinstance(emp, rg.Empirical)
    assert emp.mean() == pytest.approx(2.0)
    weighted = tmp_path / "weighted.csv"
    weighted.write_text("1.0,1\n3.0,3\n")
    emp2 = rg.parse_distribution("empirical(weighted.csv)", base_dir=tmp_path)
    assert emp2.mean() == pytest.approx(2.5)


@pytest.mark.parametrize(
    "text",
    ["exp()", "exp(0)", "pareto(1)", "uniform(2,1)", "lognormal(0)", "empirical(missing.csv)", "exp(1"],
)
def test_parse_distribution_rejects(text):
    with pytest.raises((rg.GrammarError, ValueError)):
        rg.parse_distribution(text)
