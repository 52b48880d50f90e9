import math

import numpy as np
import pytest
from scipy import special as sc

from conftest import (angle_bin_counts, chi2_uniformity, ks_crit, ks_stat,
                      two_sample_ks)
from stbfield import samplers as sp
from stbfield.models import (GHParams, KummerParams, MaternParams,
                             kummer_matern_reparam)

# frozen: scripts/oracle_spectral.py (mpmath quadrature of the scale-free
# spectral laws). gh rows keyed by (nu, mu), l = 0.5, d = 2; probes are
# P(a R <= t*) at the t* grid below.
T_STAR = np.array([0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0])
GH_CDF_ORACLE = {
    (0.0, 6.0): [0.0022274998901954558, 0.0088546341438391834,
                 0.034553302497273628, 0.12559399608806394,
                 0.35950531311162126, 0.63938452473179392,
                 0.81432309748775063],
    (1.0, 3.0): [0.0088899215161919266, 0.035100775033260414,
                 0.13334549309322432, 0.43677111701180652,
                 0.88471963483158896, 0.98586757294229216,
                 0.99815827230896499],
    (0.0, 2.0): [0.010351804115315325, 0.040640351310346553,
                 0.15095451455984682, 0.45461125625792219,
                 0.75597237800586611, 0.87369149654846064,
                 0.93776729773701714],
}
KUMMER_CDF_ORACLE = [(1.0, 0.0010175181840758706),
                     (3.0, 0.0089816917130098052),
                     (10.0, 0.084073528806514335),
                     (30.0, 0.37239586317376532),
                     (100.0, 0.75645256898342861)]
ATAN_MOMENT_ORACLE = 0.41321800123301788  # E[atan R], nu=1.5 alpha=2 d=2


@pytest.fixture(scope="module")
def p_beta1():
    return GHParams(0.0, 6.0, 0.5, 0.1, 2)


@pytest.fixture(scope="module")
def p_gasper5():
    return GHParams(0.0, 2.0, 0.5, 0.1, 2)


@pytest.fixture(scope="module")
def p_gasper6():
    return GHParams(1.0, 3.0, 0.5, 0.5, 2)


@pytest.fixture(scope="module")
def tbl_gasper5(p_gasper5):
    return sp.build_gasper_weights(p_gasper5, truncation_tol=1e-12,
                                   max_terms=400, allow_truncation=True)


@pytest.fixture(scope="module")
def tbl_gasper6(p_gasper6):
    return sp.build_gasper_weights(p_gasper6, truncation_tol=1e-12,
                                   max_terms=400, allow_truncation=True)


@pytest.fixture(scope="module")
def gasper5_omega(p_gasper5, tbl_gasper5):
    stats = {}
    om = sp.sample_gh_gasper_freq(p_gasper5, tbl_gasper5,
                                  sp.RngStream(902), size=100000, stats=stats)
    return om, stats


@pytest.fixture(scope="module")
def beta1_omega(p_beta1):
    return sp.sample_gh_beta_freq(p_beta1, sp.RngStream(903), size=100000)


def test_rng_stream_replays():
    a = sp.RngStream(123, 4).gen.standard_normal(64)
    b = sp.RngStream(123, 4).gen.standard_normal(64)
    c = sp.RngStream(123, 5).gen.standard_normal(64)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_rejection_envelope_record():
    env = sp.RejectionEnvelope(t0=2.0, m1=1.2, m2=0.8, tail_exponent=1.5,
                               dim=2)
    assert abs(env.body_weight - 1.2 / 2.0) < 1e-15
    assert abs(env.acceptance - 1.0 / 2.0) < 1e-15
    with pytest.raises(ValueError):
        sp.RejectionEnvelope(t0=-1.0, m1=1.0, m2=1.0, tail_exponent=1.0, dim=2)
    with pytest.raises(ValueError):
        sp.RejectionEnvelope(t0=1.0, m1=0.0, m2=1.0, tail_exponent=1.0, dim=2)


def test_gasper_weight_table_record():
    with pytest.raises(ValueError):
        sp.GasperWeightTable(weights=np.array([0.5, -0.1]), eta=1.0,
                             truncation_mass=0.0)
    with pytest.raises(ValueError):
        sp.GasperWeightTable(weights=np.array([0.5]), eta=1.0,
                             truncation_mass=1.0)


def test_sample_sphere_dim1_signs():
    th = sp.sample_sphere(1, sp.RngStream(11), size=20000)
    assert set(np.unique(th)) == {-1.0, 1.0}
    # mean of +-1 has sd 1/sqrt(n)
    assert abs(th.mean()) < 4.0 / math.sqrt(20000)


def test_sample_sphere_dim2_angles_uniform():
    th = sp.sample_sphere(2, sp.RngStream(12), size=100000)
    stat, crit = chi2_uniformity(angle_bin_counts(th, bins=36))
    assert stat < crit


def test_sample_sphere_norms_and_shapes():
    for d in (1, 2, 3, 5):
        th = sp.sample_sphere(d, sp.RngStream(13), size=500)
        assert th.shape == (500, d)
        assert np.max(np.abs(np.linalg.norm(th, axis=1) - 1.0)) < 1e-12
    one = sp.sample_sphere(3, sp.RngStream(14))
    assert one.shape == (3,)
    with pytest.raises(ValueError):
        sp.sample_sphere(0, sp.RngStream(15))


def test_matern_radius_law():
    p = MaternParams(1.5, 2.0)
    om = sp.sample_matern_freq(p, 2, sp.RngStream(21), size=100000)
    r = np.linalg.norm(om, axis=1)
    assert ks_stat(r, lambda x: sp.matern_radius_cdf(p, 2, x)) < ks_crit(len(r))


def test_matern_atan_moment():
    om = sp.sample_matern_freq(MaternParams(1.5, 2.0), 2, sp.RngStream(22),
                               size=100000)
    v = np.arctan(np.linalg.norm(om, axis=1))
    se = v.std(ddof=1) / math.sqrt(len(v))
    assert abs(v.mean() - ATAN_MOMENT_ORACLE) < 3.0 * se


def test_matern_isotropy():
    om = sp.sample_matern_freq(MaternParams(0.5, 1.0), 2, sp.RngStream(23),
                               size=100000)
    stat, crit = chi2_uniformity(angle_bin_counts(om, bins=36))
    assert stat < crit


def test_matern_scalar_form():
    s = sp.sample_matern_freq(MaternParams(1.0, 1.0), 3, sp.RngStream(24))
    assert isinstance(s, sp.FrequencySample)
    assert s.omega.shape == (3,)
    assert np.all(np.isfinite(s.omega))


def test_kummer_radius_law():
    p = KummerParams(0.5, 3.5, 0.101)
    om = sp.sample_kummer_freq(p, 2, sp.RngStream(31), size=100000)
    r = np.linalg.norm(om, axis=1)
    assert ks_stat(r, sp.kummer_radius_cdf(p, 2)) < ks_crit(len(r))


def test_kummer_radius_cdf_oracle_probes():
    cdf = sp.kummer_radius_cdf(KummerParams(0.5, 3.5, 0.101), 2)
    for r, want in KUMMER_CDF_ORACLE:
        assert abs(cdf(r) - want) < 1e-5


def test_kummer_radius_cdf_needs_density():
    # mu <= d/2: the beta-prime scale mixture has an atom at the origin of
    # the T variable and no integrable radius density
    with pytest.raises(ValueError):
        sp.kummer_radius_cdf(KummerParams(0.5, 1.0, 0.1), 2)


def test_kummer_mixing_ratio_is_beta_prime():
    # the construction draws X ~ Gamma(nu), Y ~ Gamma(mu), then Z; replay
    # the stream to recover T = X/Y and check it against the BetaPrime CDF
    p = KummerParams(0.5, 3.5, 0.101)
    om = sp.sample_kummer_freq(p, 2, sp.RngStream(32), size=100000)
    g = sp.RngStream(32).gen
    x = g.gamma(p.nu, 1.0, size=100000)
    y = g.gamma(p.mu, 1.0, size=100000)
    z = g.standard_normal((100000, 2))
    assert np.array_equal(om, z / (p.beta * np.sqrt(x / y))[:, None])
    t = x / y
    assert ks_stat(t, lambda s: sc.betainc(p.nu, p.mu, s / (1.0 + s))) \
        < ks_crit(len(t))


def test_kummer_large_mu_matches_matern():
    # beta' = beta sqrt(2 (mu + 1)) sends the Kummer law to Matern as mu
    # grows; at mu = 1e3 the radius laws are KS-indistinguishable at 1e5
    kp = kummer_matern_reparam(1.5, 1000.0, 0.3)
    rk = np.linalg.norm(
        sp.sample_kummer_freq(kp, 2, sp.RngStream(33), size=100000), axis=1)
    rm = np.linalg.norm(
        sp.sample_matern_freq(MaternParams(1.5, 0.3), 2, sp.RngStream(34),
                              size=100000), axis=1)
    stat, crit = two_sample_ks(rk, rm)
    assert stat < crit


def test_universal_envelope_cells():
    # acceptance 1/(m1+m2) and near-balance of body and tail masses across
    # the smoothness/dimension grid
    for nu in (0.0, 1.0, 2.0):
        for d in (1, 2, 3):
            env = sp.build_universal_T_envelope(nu, d)
            assert env.tail_exponent == 2.0 * nu + 1.0
            assert 0.4 <= env.acceptance <= 0.7
            assert abs(env.m1 - env.m2) / (env.m1 + env.m2) < 0.25
            assert abs(env.body_weight - env.m1 / (env.m1 + env.m2)) < 1e-15


def test_universal_envelope_cached():
    assert sp.build_universal_T_envelope(1.0, 2) is \
        sp.build_universal_T_envelope(1.0, 2)


def test_universal_density_normalizes():
    # quadrature body to T0 plus the mean-envelope tail: J^2 averages to
    # 2/(pi t), so the tail integrates to exp(log_mean) T0^-(2nu+1)/(2nu+1)
    for nu, d in ((0.0, 2), (1.0, 2), (0.5, 3)):
        grid = np.arange(0.0, 4000.0 + 0.2, 0.4)
        body = sp._cumulative_quadrature(
            lambda t: sp.universal_T_density(t, nu, d), grid)[-1]
        delta = (d + 1.0) / 2.0 + nu
        log_mean = (sp.log_sphere_area(d) + sp._log_ch(nu, d)
                    + 2.0 * sc.gammaln(delta + 0.5)
                    + (2.0 * delta - 1.0) * 2.0 * math.log(2.0)
                    + math.log(2.0 / math.pi))
        tail = math.exp(log_mean - (2.0 * nu + 1.0) * math.log(grid[-1])) \
            / (2.0 * nu + 1.0)
        assert abs(body + tail - 1.0) < 1e-6


def test_universal_density_tail_order():
    # window means over whole oscillation periods isolate the power law;
    # the decay is t^-(2 nu + 2), one order above the proposal exponent
    for nu in (0.0, 1.0):
        centers = np.geomspace(1.0e3, 1.0e4, 12)
        means = []
        for c in centers:
            w = 8.0 * math.pi
            tt = np.linspace(c - w / 2.0, c + w / 2.0, 600)
            means.append(np.mean(sp.universal_T_density(tt, nu, 2)))
        slope = np.polyfit(np.log(centers), np.log(means), 1)[0]
        assert abs(slope + (2.0 * nu + 2.0)) < 0.2


def test_universal_density_rejects_nonpositive_t():
    with pytest.raises(ValueError):
        sp.universal_T_density(0.0, 0.0, 2)
    with pytest.raises(ValueError):
        sp.universal_T_density(np.array([1.0, -2.0]), 1.0, 2)


def test_sample_universal_T_binned_law():
    env = sp.build_universal_T_envelope(0.0, 2)
    stats = {}
    t = sp.sample_universal_T(env, 0.0, 2, sp.RngStream(41), size=100000,
                              stats=stats)
    cdf = sp.universal_T_cdf(0.0, 2)
    # near-quantile edges: equal-width bins can straddle a Bessel node and
    # starve a bin of mass
    fine = np.linspace(0.0, 200.0, 40001)
    fvals = np.asarray(cdf(fine))
    edges = fine[np.searchsorted(fvals, np.arange(50) / 50.0)]
    probs = np.diff(np.append(fvals[np.searchsorted(fvals,
                                                    np.arange(50) / 50.0)],
                              1.0))
    counts, _ = np.histogram(t, np.append(edges, np.inf))
    assert len(counts) == 50
    assert np.min(len(t) * probs) >= 5.0
    stat, crit = chi2_uniformity(counts, probs)
    assert stat < crit
    # measured acceptance tracks 1/(m1+m2)
    acc = stats["accepts"] / stats["proposals"]
    assert abs(acc - env.acceptance) < 0.02
    assert 0.4 <= env.acceptance <= 0.7


def test_sample_universal_T_scalar_and_stats_accumulate():
    env = sp.build_universal_T_envelope(1.0, 2)
    rng = sp.RngStream(42)
    one = sp.sample_universal_T(env, 1.0, 2, rng)
    assert isinstance(one, float) and one > 0.0
    stats = {}
    sp.sample_universal_T(env, 1.0, 2, rng, size=500, stats=stats)
    first = stats["proposals"]
    sp.sample_universal_T(env, 1.0, 2, rng, size=500, stats=stats)
    assert stats["proposals"] > first
    assert stats["accepts"] >= 1000


def test_rejection_proposal_inverse_cdfs():
    # with pdf equal to the envelope bound every proposal is accepted, so
    # the output is the raw proposal stream: (t/t0)^d must be uniform on the
    # body and (t0/t)^alpha uniform on the tail
    env = sp.RejectionEnvelope(t0=2.0, m1=1.3, m2=0.7, tail_exponent=1.5,
                               dim=2)

    def bound(t):
        return np.where(t <= env.t0,
                        env.m1 * 2.0 * t / env.t0 ** 2,
                        env.m2 * 1.5 * env.t0 ** 1.5 / t ** 2.5)

    out = sp._rejection_sample(bound, env, sp.RngStream(43), 200000)
    body = out[out <= env.t0]
    tail = out[out > env.t0]
    assert abs(len(body) / len(out) - env.body_weight) \
        < 4.0 * math.sqrt(0.25 / len(out))
    ident = lambda x: np.clip(x, 0.0, 1.0)
    assert ks_stat((body / env.t0) ** 2, ident) < ks_crit(len(body))
    assert ks_stat((env.t0 / tail) ** 1.5, ident) < ks_crit(len(tail))


def test_rejection_proposal_cap():
    env = sp.RejectionEnvelope(t0=1.0, m1=1.0, m2=1.0, tail_exponent=2.0,
                               dim=1)
    with pytest.raises(RuntimeError):
        sp._rejection_sample(lambda t: np.zeros_like(t), env,
                             sp.RngStream(44), 1)


def test_envelope_audit_rejects_bad_bound():
    env = sp.RejectionEnvelope(t0=3.5, m1=0.1, m2=0.1, tail_exponent=1.0,
                               dim=2)
    with pytest.raises(RuntimeError):
        sp._audit_envelope(lambda t: sp.universal_T_density(t, 0.0, 2), env)


def test_gh_beta_sampler_requires_mixture_region(p_gasper5):
    with pytest.raises(ValueError, match="ValidBetaMixture"):
        sp.sample_gh_beta_freq(p_gasper5, sp.RngStream(51), size=4)
    with pytest.raises(ValueError, match="ValidBetaMixture"):
        sp.gh_beta_radius_cdf(p_gasper5)


def test_gh_beta_radius_law(p_beta1, beta1_omega):
    r = np.linalg.norm(beta1_omega, axis=1)
    assert ks_stat(r, sp.gh_beta_radius_cdf(p_beta1)) < ks_crit(len(r))


def test_gh_beta_radius_cdf_oracle_probes(p_beta1):
    cdf = sp.gh_beta_radius_cdf(p_beta1)
    got = cdf(T_STAR / p_beta1.a)
    want = np.array(GH_CDF_ORACLE[(0.0, 6.0)])
    # 48-node Gauss-Jacobi mixing leaves ~1e-4; see also the sampled KS
    assert np.max(np.abs(got - want)) < 5e-4


def test_gh_beta_isotropy(beta1_omega):
    stat, crit = chi2_uniformity(angle_bin_counts(beta1_omega, bins=36))
    assert stat < crit


def test_gh_beta_scale_equivariance(p_beta1):
    # support a vs 2a: radii contract by exactly 2 in distribution
    p2 = GHParams(p_beta1.nu, p_beta1.mu, p_beta1.l, 2.0 * p_beta1.a,
                  p_beta1.dim)
    r1 = np.linalg.norm(sp.sample_gh_beta_freq(p_beta1, sp.RngStream(52),
                                               size=50000), axis=1)
    r2 = np.linalg.norm(sp.sample_gh_beta_freq(p2, sp.RngStream(53),
                                               size=50000), axis=1)
    stat, crit = two_sample_ks(r1, 2.0 * r2)
    assert stat < crit


def test_gh_mixture_constant_gamma_form():
    for nu, mu, l, d in ((0.0, 6.0, 0.5, 2), (1.0, 7.0, 0.5, 2),
                         (0.5, 4.0, 1.5, 3)):
        b1 = sc.beta(1.0 + nu, mu / 2.0 - 0.5)
        b2 = sc.beta(d / 2.0 + 2.0 * nu + 1.0,
                     mu / 2.0 - d / 2.0 - 0.5 - nu + l)
        want = 1.0 / (b1 * b2)
        got = sp.gh_mixture_constant(nu, mu, l, d)
        assert abs(got - want) < 1e-10 * want


def test_gasper_weights_sum_to_one_fast_row():
    # nu = 2 decays fast enough to clear 1e-10 residual in a short table
    tbl = sp.build_gasper_weights(GHParams(2.0, 4.0, 0.5, 1.0, 2))
    assert tbl.truncation_mass < 1e-10
    assert np.all(tbl.weights >= 0.0)
    assert tbl.weights.sum() >= 1.0 - 1e-10
    assert len(tbl.weights) < 400


def test_gasper_weights_nonnegative_on_slow_rows(tbl_gasper5, tbl_gasper6):
    assert np.all(tbl_gasper5.weights >= 0.0)
    assert np.all(tbl_gasper6.weights >= 0.0)
    assert tbl_gasper5.truncation_mass < 2e-3
    assert tbl_gasper6.truncation_mass < 1e-7


def test_gasper_weights_reject_invalid_params():
    with pytest.raises(ValueError, match="invalid"):
        sp.build_gasper_weights(GHParams(1.0, 2.0, 0.5, 1.0, 2))


def test_gasper_weights_strict_cap_raises():
    p = GHParams(0.0, 2.0, 0.5, 1.0, 2)
    with pytest.raises(RuntimeError, match="residual"):
        sp.build_gasper_weights(p, truncation_tol=1e-10, max_terms=49)
    # same table through the cache: truncated build first, then strict
    sp.build_gasper_weights(p, truncation_tol=1e-10, max_terms=48,
                            allow_truncation=True)
    with pytest.raises(RuntimeError, match="residual"):
        sp.build_gasper_weights(p, truncation_tol=1e-10, max_terms=48)


def test_gasper_weights_cached_a_free(p_gasper6, tbl_gasper6):
    twin = GHParams(p_gasper6.nu, p_gasper6.mu, p_gasper6.l, 7.3,
                    p_gasper6.dim)
    again = sp.build_gasper_weights(twin, truncation_tol=1e-12, max_terms=400,
                                    allow_truncation=True)
    assert again is tbl_gasper6


def test_mixture_identity_at_frozen_radii(p_gasper5, p_gasper6, tbl_gasper5,
                                          tbl_gasper6):
    # sum_n w_n g^(n) reproduces the closed-form spectral density; anchors
    # frozen from scripts/oracle_spectral.py as a^d g(t) at r = t/a
    for p, tbl, t, g in (
            (p_gasper5, tbl_gasper5, 0.05, 0.013261254152845804),
            (p_gasper5, tbl_gasper5, 6.0, 0.001856201907721506),
            (p_gasper6, tbl_gasper6, 0.05, 0.011367223436293504),
            (p_gasper6, tbl_gasper6, 6.0, 0.0030427352897762702)):
        want = p.a ** p.dim * g
        got = sp.gh_spectral_density(p, t / p.a, table=tbl)[0]
        assert abs(got - want) < 1e-6 * want


def test_component_density_normalizes(p_gasper5):
    eta = p_gasper5.eta
    alpha = 2.0 * eta + 1.0 - 2.0
    for n in (0, 1, 5):
        grid = np.arange(0.0, 4000.0 + 0.2, 0.4)
        body = sp._cumulative_quadrature(
            lambda t: sp.gasper_component_T_density(t, n, eta, 2), grid)[-1]
        logc = (sp.log_sphere_area(2) + sp._log_ch(eta + n - 1.0, 2, n)
                + (2.0 * eta + 2.0 * n) * 2.0 * math.log(2.0)
                + 2.0 * sc.gammaln(1.0 + eta + n))
        tail = math.exp(logc + math.log(2.0 / math.pi)
                        - alpha * math.log(grid[-1])) / alpha
        assert abs(body + tail - 1.0) < 1e-6


def test_component_density_bounded_far_out(p_gasper5):
    eta = p_gasper5.eta
    for n in (0, 3):
        near = sp.gasper_component_T_density(
            np.arange(0.05, 1000.0, 0.05), n, eta, 2)
        far = sp.gasper_component_T_density(
            np.geomspace(1e3, 1e6, 4001), n, eta, 2)
        assert far.max() < near.max()
    with pytest.raises(ValueError):
        sp.gasper_component_T_density(-1.0, 0, eta, 2)


def test_component_envelope_needs_tail_exponent():
    # 2 eta + 1 - d <= 0 leaves no integrable power tail to propose from
    with pytest.raises(ValueError, match="tail exponent"):
        sp._build_component_envelope(0, 0.5, 2)


def test_gasper_radius_law(p_gasper5, tbl_gasper5, gasper5_omega):
    om, _ = gasper5_omega
    r = np.linalg.norm(om, axis=1)
    cdf = sp.gh_gasper_radius_cdf(p_gasper5, tbl_gasper5)
    assert ks_stat(r, cdf) < ks_crit(len(r))


def test_gasper_radius_cdf_oracle_probes(p_gasper5, p_gasper6, tbl_gasper5,
                                         tbl_gasper6):
    # (1,3) decays fast: the 400-term table carries 3e-8 truncation, so the
    # quadrature CDF sits on the oracle; the (0,2) row keeps ~1e-3 residual
    # and renormalization shifts the CDF by at most twice that
    cdf = sp.gh_gasper_radius_cdf(p_gasper6, tbl_gasper6)
    want = np.array(GH_CDF_ORACLE[(1.0, 3.0)])
    assert np.max(np.abs(cdf(T_STAR / p_gasper6.a) - want)) < 1e-6
    cdf = sp.gh_gasper_radius_cdf(p_gasper5, tbl_gasper5)
    want = np.array(GH_CDF_ORACLE[(0.0, 2.0)])
    assert np.max(np.abs(cdf(T_STAR / p_gasper5.a) - want)) < 3e-3


def test_gasper_isotropy(gasper5_omega):
    om, _ = gasper5_omega
    stat, crit = chi2_uniformity(angle_bin_counts(om, bins=36))
    assert stat < crit


def test_gasper_acceptance_stats(gasper5_omega):
    _, stats = gasper5_omega
    assert stats["accepts"] >= 100000
    assert 0.0 < stats["accepts"] / stats["proposals"] <= 1.0


def test_gasper_index_distribution(p_gasper6, tbl_gasper6):
    # replay the stream to recover the discrete component indices, then
    # chi-square them against the renormalized weights (expected >= 5 per
    # bucket, small-weight tail lumped)
    n = 30000
    sp.sample_gh_gasper_freq(p_gasper6, tbl_gasper6, sp.RngStream(61), size=n)
    prob = tbl_gasper6.weights / tbl_gasper6.weights.sum()
    cdf = np.cumsum(prob)
    cdf[-1] = 1.0
    idx = np.searchsorted(cdf, sp.RngStream(61).gen.random(n), side="right")
    keep = np.flatnonzero(n * prob >= 5.0)
    counts = np.bincount(idx, minlength=len(prob))
    cc = np.append(counts[keep], counts.sum() - counts[keep].sum())
    pp = np.append(prob[keep], 1.0 - prob[keep].sum())
    assert np.min(n * pp) >= 5.0
    stat, crit = chi2_uniformity(cc, pp)
    assert stat < crit


def test_gasper_component_T_a_independence(p_gasper5, tbl_gasper5):
    # T = a R has the same law whatever the support parameter
    samples = []
    for seed, a in ((62, 0.1), (63, 1.0)):
        p = GHParams(p_gasper5.nu, p_gasper5.mu, p_gasper5.l, a, p_gasper5.dim)
        om = sp.sample_gh_gasper_freq(p, tbl_gasper5, sp.RngStream(seed),
                                      size=30000)
        samples.append(a * np.linalg.norm(om, axis=1))
    stat, crit = two_sample_ks(samples[0], samples[1])
    assert stat < crit


def test_gasper_sampler_rejects_invalid_params(tbl_gasper6):
    with pytest.raises(ValueError, match="invalid"):
        sp.sample_gh_gasper_freq(GHParams(1.0, 2.0, 0.5, 1.0, 2), tbl_gasper6,
                                 sp.RngStream(64), size=4)


def test_beta_gasper_cross_validation(p_beta1):
    # both constructions target the same law on the overlap row; the
    # acceptance suite repeats this at 1e5 draws per side. cache key must
    # stay in sync with the acceptance suite: (tol 1e-3, cap 3500)
    tbl = sp.build_gasper_weights(p_beta1, truncation_tol=1e-3,
                                  max_terms=3500, allow_truncation=True)
    assert tbl.truncation_mass < 1.5e-3
    rg = np.linalg.norm(sp.sample_gh_gasper_freq(p_beta1, tbl,
                                                 sp.RngStream(65),
                                                 size=20000), axis=1)
    rb = np.linalg.norm(sp.sample_gh_beta_freq(p_beta1, sp.RngStream(66),
                                               size=20000), axis=1)
    stat, crit = two_sample_ks(rg, rb)
    assert stat < crit


def test_sampler_determinism(p_beta1, p_gasper6, tbl_gasper6):
    def twice(draw):
        return draw(sp.RngStream(71)), draw(sp.RngStream(71))

    a, b = twice(lambda r: sp.sample_sphere(2, r, size=50))
    assert np.array_equal(a, b)
    a, b = twice(lambda r: sp.sample_matern_freq(MaternParams(1.5, 2.0), 2, r,
                                                 size=50))
    assert np.array_equal(a, b)
    a, b = twice(lambda r: sp.sample_kummer_freq(KummerParams(0.5, 3.5, 0.1),
                                                 2, r, size=50))
    assert np.array_equal(a, b)
    a, b = twice(lambda r: sp.sample_gh_beta_freq(p_beta1, r, size=50))
    assert np.array_equal(a, b)
    a, b = twice(lambda r: sp.sample_gh_gasper_freq(p_gasper6, tbl_gasper6, r,
                                                    size=50))
    assert np.array_equal(a, b)


def test_gh_scalar_forms(p_beta1, p_gasper6, tbl_gasper6):
    s = sp.sample_gh_beta_freq(p_beta1, sp.RngStream(72))
    assert isinstance(s, sp.FrequencySample) and s.omega.shape == (2,)
    s = sp.sample_gh_gasper_freq(p_gasper6, tbl_gasper6, sp.RngStream(73))
    assert isinstance(s, sp.FrequencySample) and s.omega.shape == (2,)
