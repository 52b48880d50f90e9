"""Arbitrary-precision reference values for spectral densities and CDFs.

The in-package evaluators use squared-Bessel expansions (never the 1F2
series); this oracle goes the other way: direct 1F2 evaluation and direct
quadrature with mpmath. Run once, freeze the printout into the tests.

All radial quantities are reported in the scale-free variable t = a*r
(the support radius enters the density only through t and an a^d factor).
"""

import mpmath as mp

mp.mp.dps = 30


def tilde_params(nu, mu, l, d):
    delta = (d + 1) / mp.mpf(2) + nu
    return delta, delta + mp.mpf(mu) / 2, delta + mp.mpf(mu) / 2 + l


def log_prefactor(delta, bt, gm, d):
    return (mp.loggamma(delta) + mp.loggamma(bt - mp.mpf(d) / 2)
            + mp.loggamma(gm - mp.mpf(d) / 2) - mp.loggamma(delta - mp.mpf(d) / 2)
            - mp.loggamma(bt) - mp.loggamma(gm)
            - d * mp.log(2) - mp.mpf(d) / 2 * mp.log(mp.pi))


def gh_density_t(t, nu, mu, l, d):
    """a^-d * g_R(t/a): scale-free radial spectral density in t = a*r."""
    delta, bt, gm = tilde_params(nu, mu, l, d)
    pref = mp.exp(log_prefactor(delta, bt, gm, d))
    return pref * mp.hyp1f2(delta, bt, gm, -(mp.mpf(t) / 2) ** 2)


def gh_cdf_t(tstar, nu, mu, l, d):
    """P(a*R <= t*) for the GH spectral radius; d = 2 surface factor 2 pi."""
    assert d == 2
    f = lambda t: 2 * mp.pi * t * gh_density_t(t, nu, mu, l, d)
    # integrate in oscillation-sized panels
    pts = [mp.mpf(0)]
    while pts[-1] < tstar:
        pts.append(min(pts[-1] + 4, mp.mpf(tstar)))
    return mp.quad(f, pts)


def kummer_cdf(r, nu, mu, beta, d):
    """P(|Omega| <= r) = E_{u ~ Beta(nu, mu)} P(chi2_d <= r^2 b^2 u/(1-u))."""
    nu, mu, beta = mp.mpf(nu), mp.mpf(mu), mp.mpf(beta)
    half = mp.mpf(d) / 2

    def f(u):
        dens = u ** (nu - 1) * (1 - u) ** (mu - 1) / mp.beta(nu, mu)
        return dens * mp.gammainc(half, 0, r * r * beta * beta * u
                                  / (2 * (1 - u)), regularized=True)

    return mp.quad(f, [0, mp.mpf(1) / 2, 1])


def matern_atan_moment(nu, alpha, d):
    """E[atan |Omega|] for the Matern spectral law, d = 2."""
    assert d == 2
    nu, alpha = mp.mpf(nu), mp.mpf(alpha)
    f = lambda r: mp.atan(r) * 2 * nu * alpha ** 2 * r \
        * (1 + (alpha * r) ** 2) ** (-(nu + 1))
    return mp.quad(f, [0, 1 / alpha, 10 / alpha, 1000 / alpha, mp.inf])


def show(name, value):
    print("%s = %s" % (name, mp.nstr(value, 17)))


def main():
    # scale-free GH spectral density at 20 points, one block per row of the
    # Gasper-route scenario table plus the Beta-route cross-check row
    tgrid = [mp.mpf("0.05") * (mp.mpf(6) / mp.mpf("0.05")) ** (mp.mpf(k) / 19)
             for k in range(20)]
    for (nu, mu) in [(0, 2), (1, 3), (0, 6), (1, 7)]:
        print("# gh density, nu=%s mu=%s l=0.5 d=2" % (nu, mu))
        for t in tgrid:
            show("g(%s)" % mp.nstr(t, 10), gh_density_t(t, nu, mu, mp.mpf("0.5"), 2))

    # normalization sanity: the densities above integrate to 1 in t
    for (nu, mu) in [(0, 2), (1, 7)]:
        mass = gh_cdf_t(400, nu, mu, mp.mpf("0.5"), 2)
        show("mass_to_400 nu=%s mu=%s" % (nu, mu), mass)

    # GH radial CDF probes (t = a*r units)
    for (nu, mu) in [(0, 6), (1, 7), (0, 2), (1, 3)]:
        print("# gh cdf, nu=%s mu=%s l=0.5 d=2" % (nu, mu))
        for tstar in [mp.mpf("0.5"), 1, 2, 4, 8, 16, 32]:
            show("F(%s)" % tstar, gh_cdf_t(tstar, nu, mu, mp.mpf("0.5"), 2))

    # Kummer radial CDF probes, scenario row (0.5, 3.5, 0.101), d = 2
    print("# kummer cdf, nu=0.5 mu=3.5 beta=0.101 d=2")
    for r in [1, 3, 10, 30, 100]:
        show("F(%s)" % r, kummer_cdf(r, "0.5", "3.5", "0.101", 2))

    print("# matern atan moment")
    show("E[atan R] nu=1.5 alpha=2 d=2", matern_atan_moment("1.5", 2, 2))


if __name__ == "__main__":
    main()
