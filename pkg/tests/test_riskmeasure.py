import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import reinsgame as rg
from reinsgame.riskmeasure import _quad_layer
from oracles import LN100, choquet_sum, mc_estimate_and_se_mix

FAMILIES = [rg.MeanCVaRMix(0.99), rg.MeanCVaRMix(0.9), rg.ProportionalHazard()]
DISTS = [rg.Exponential(1.0), rg.Exponential(0.4), rg.Uniform(0.0, 2.0), rg.Uniform(0.5, 3.0)]


@st.composite
def dist_gamma_indemnity(draw):
    dist = draw(st.sampled_from(DISTS + [rg.Empirical([0.5, 1.0, 2.0, 2.0, 3.5])]))
    gamma = draw(st.floats(0.0, 1.0))
    cells = draw(st.integers(1, 5))
    cuts = draw(
        st.lists(st.floats(0.02, 0.98), min_size=cells, max_size=cells, unique=True)
    )
    grid = np.concatenate([[0.0], np.sort(cuts) * dist.support_upper, [dist.support_upper]])
    grid = np.unique(grid)
    slopes = draw(
        st.lists(st.floats(0.0, 1.0), min_size=grid.size - 1, max_size=grid.size - 1)
    )
    return dist, gamma, rg.Indemnity(grid, slopes)


def test_distortion_mix_value():
    fam = rg.MeanCVaRMix(0.99)
    assert rg.distortion(fam, 0.005, 0.5) == pytest.approx(0.2525, abs=1e-15)


def test_distortion_boundary_and_sqrt():
    for fam in FAMILIES:
        for gamma in (0.0, 0.3, 1.0):
            assert rg.distortion(fam, 1.0, gamma) == pytest.approx(1.0, abs=1e-12)
            assert rg.distortion(fam, 0.0, gamma) == 0.0
    assert rg.distortion(rg.ProportionalHazard(), 0.25, 0.5) == pytest.approx(0.5, abs=1e-15)


def test_distortion_domain_errors():
    fam = rg.MeanCVaRMix(0.99)
    with pytest.raises(ValueError):
        rg.distortion(fam, 1.2, 0.5)
    with pytest.raises(ValueError):
        rg.distortion(fam, 0.5, 1.5)


@given(s=st.floats(1e-6, 1.0 - 1e-6), lo=st.floats(0.0, 1.0), hi=st.floats(0.0, 1.0))
def test_families_strictly_increase_in_gamma(s, lo, hi):
    gamma_lo, gamma_hi = sorted((lo, hi))
    if gamma_hi - gamma_lo < 1e-9:
        return
    for fam in FAMILIES:
        assert rg.distortion(fam, s, gamma_lo) < rg.distortion(fam, s, gamma_hi)


@pytest.mark.parametrize("gamma", [0.0, 1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0])
def test_rho_headline_affine(mix99, exp1, gamma):
    assert rg.rho_total(mix99, exp1, gamma) == pytest.approx(1.0 + gamma * LN100, abs=1e-8)


@pytest.mark.parametrize("gamma", [0.0, 0.5, 1.0])
def test_closed_form_agrees_with_quadrature(mix99, exp1, gamma):
    closed = rg.rho_total(mix99, exp1, gamma)
    quad = _quad_layer(mix99, exp1, gamma, 0.0, exp1.support_upper)
    assert closed == pytest.approx(quad, abs=1e-8)
    ph = rg.ProportionalHazard()
    closed_ph = rg.rho_total(ph, exp1, gamma)
    quad_ph = _quad_layer(ph, exp1, gamma, 0.0, exp1.support_upper)
    assert closed_ph == pytest.approx(quad_ph, abs=1e-8)


def test_rho_of_cash_only(mix99, exp1):
    part = rg.PayoutSlice.ceded(rg.null_cover(exp1), cash=2.5)
    for gamma in (0.0, 0.4, 1.0):
        assert rg.rho(mix99, exp1, part, gamma) == 2.5


def test_rho_normalization_constant_one(mix99, exp1):
    part = rg.PayoutSlice.ceded(rg.null_cover(exp1), cash=1.0)
    for gamma in (0.0, 0.7, 1.0):
        assert rg.rho(mix99, exp1, part, gamma) == 1.0


def test_rho_gamma_zero_is_mean(mix99, exp1):
    assert rg.rho(mix99, exp1, rg.PayoutSlice.total(), 0.0) == pytest.approx(1.0, abs=1e-9)


def test_rho_rejects_bad_gamma(mix99, exp1):
    with pytest.raises(ValueError):
        rg.rho_total(mix99, exp1, 1.2)


@given(case=dist_gamma_indemnity(), fam=st.sampled_from(FAMILIES))
def test_comonotonic_additivity(case, fam):
    dist, gamma, ind = case
    total = rg.rho(fam, dist, rg.PayoutSlice.total(), gamma)
    ceded = rg.rho(fam, dist, rg.PayoutSlice.ceded(ind), gamma)
    retained = rg.rho(fam, dist, rg.PayoutSlice.retained(ind), gamma)
    assert abs(total - (ceded + retained)) < 1e-8


@given(case=dist_gamma_indemnity(), fam=st.sampled_from(FAMILIES), bump=st.floats(1e-3, 1.0))
def test_rho_increasing_in_gamma(case, fam, bump):
    # Strictly increasing whenever the ceded payout is genuinely random; an
    # indemnity confined to layers below the essential infimum pays a
    # deterministic amount, which prices as cash at every aversion level.
    dist, gamma, ind = case
    if ind.is_null:
        return
    hi = min(1.0, gamma + bump)
    if hi - gamma < 1e-9:
        return
    lo_val = rg.rho(fam, dist, rg.PayoutSlice.ceded(ind), gamma)
    hi_val = rg.rho(fam, dist, rg.PayoutSlice.ceded(ind), hi)
    mids = 0.5 * (ind.grid[:-1] + ind.grid[1:])
    surv = dist.survival(mids)
    random_payout = bool(np.any((ind.slopes > 0.0) & (surv > 0.0) & (surv < 1.0)))
    if random_payout:
        assert lo_val < hi_val
    else:
        assert hi_val == pytest.approx(lo_val, abs=1e-12)


def test_empirical_matches_sorted_sample_choquet_sum(mix99):
    rng = np.random.default_rng(7)
    samples = rng.exponential(1.0, size=400)
    weights = np.full(samples.size, 1.0 / samples.size)
    dist = rg.Empirical(samples)
    for gamma in (0.0, 0.35, 1.0):
        expected = choquet_sum(samples, weights, lambda s: float(mix99.g(s, gamma)))
        assert rg.rho_total(mix99, dist, gamma) == pytest.approx(expected, abs=5e-13)


def test_analytic_vs_monte_carlo(mix99, exp1):
    rng = np.random.default_rng(2024)
    samples = rng.exponential(1.0, size=200_000)
    dist = rg.Empirical(samples)
    for gamma in (0.0, 0.5, 1.0):
        estimate = rg.rho_total(mix99, dist, gamma)
        oracle_estimate, se = mc_estimate_and_se_mix(samples, gamma, 0.99)
        assert estimate == pytest.approx(oracle_estimate, rel=1e-6)
        assert abs(estimate - (1.0 + gamma * LN100)) <= 3.0 * se


def _mix_table(alpha=0.99):
    s_nodes = np.array([0.0, 1.0 - alpha, 0.1, 0.5, 1.0])
    gamma_nodes = np.array([0.0, 0.5, 1.0])
    fam = rg.MeanCVaRMix(alpha)
    table = np.column_stack([fam.g(s_nodes, g) for g in gamma_nodes])
    return s_nodes, gamma_nodes, table


def test_tabulated_reproduces_mix_exactly(exp1):
    s_nodes, gamma_nodes, table = _mix_table()
    tab = rg.TabulatedFamily(s_nodes, gamma_nodes, table)
    fam = rg.MeanCVaRMix(0.99)
    for s in (0.003, 0.01, 0.25, 0.77):
        for gamma in (0.0, 0.2, 0.5, 0.9, 1.0):
            assert rg.distortion(tab, s, gamma) == pytest.approx(
                rg.distortion(fam, s, gamma), abs=1e-14
            )
    # the tabulated family has no closed form, so this exercises quadrature
    for gamma in (0.0, 0.5, 1.0):
        assert rg.rho_total(tab, exp1, gamma) == pytest.approx(
            rg.rho_total(fam, exp1, gamma), abs=1e-8
        )


def test_tabulated_family_csv_roundtrip(tmp_path):
    s_nodes, gamma_nodes, table = _mix_table()
    lines = ["s," + ",".join(str(g) for g in gamma_nodes)]
    for i, s in enumerate(s_nodes):
        lines.append(",".join(str(v) for v in [s, *table[i]]))
    path = tmp_path / "table.csv"
    path.write_text("\n".join(lines) + "\n")
    tab = rg.parse_family(f"custom({path})")
    assert rg.distortion(tab, 0.005, 0.5) == pytest.approx(0.2525, abs=1e-12)


def test_tabulated_family_validation():
    with pytest.raises(rg.GrammarError):  # g(0) != 0
        rg.TabulatedFamily([0.0, 1.0], [0.0, 1.0], [[0.1, 0.2], [1.0, 1.0]])
    with pytest.raises(rg.GrammarError):  # decreasing along s
        rg.TabulatedFamily(
            [0.0, 0.3, 0.6, 1.0],
            [0.0, 1.0],
            [[0.0, 0.0], [0.5, 0.6], [0.4, 0.5], [1.0, 1.0]],
        )
    with pytest.raises(rg.GrammarError):  # not strictly increasing in gamma
        rg.TabulatedFamily(
            [0.0, 0.5, 1.0], [0.0, 1.0], [[0.0, 0.0], [0.6, 0.6], [1.0, 1.0]]
        )


def test_parse_family_grammar():
    assert isinstance(rg.parse_family("mean_cvar(0.99)"), rg.MeanCVaRMix)
    assert isinstance(rg.parse_family("prop_hazard"), rg.ProportionalHazard)
    for bad in ("mean_cvar()", "mean_cvar(1.5)", "prop_hazard(2)", "wang(0.5)", "custom(nope.csv)"):
        with pytest.raises(rg.GrammarError):
            rg.parse_family(bad)


def test_payout_slice_validation():
    with pytest.raises(ValueError):
        rg.PayoutSlice("ceded", None)
    with pytest.raises(ValueError):
        rg.PayoutSlice("everything")
