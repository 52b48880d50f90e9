"""Arbitrary-precision reference values for the correlation models.

Run once and freeze the printed values into tests/test_models.py and
tests/test_acceptance.py. Uses mpmath only.
"""

import mpmath as mp

mp.mp.dps = 40


def kummer(nu, mu, beta, x):
    z = mp.mpf(x) ** 2 / (2 * mp.mpf(beta) ** 2)
    return mp.gamma(nu + mu) / mp.gamma(nu) * mp.hyperu(mu, 1 - mp.mpf(nu), z)


def gh(nu, mu, l, a, x):
    """Closed form: Gamma-ratio prefactor, power of w, 2F1; w = 1-(x/a)^2."""
    nu, mu, l = mp.mpf(nu), mp.mpf(mu), mp.mpf(l)
    w = 1 - (mp.mpf(x) / mp.mpf(a)) ** 2
    if w <= 0:
        return mp.mpf(0)
    pref = (mp.gamma(nu + mp.mpf(1) / 2 + mu / 2)
            * mp.gamma(nu + mp.mpf(1) / 2 + mu / 2 + l)
            / mp.gamma(nu + mu + l + mp.mpf(1) / 2)
            / mp.gamma(nu + mp.mpf(1) / 2))
    return (pref * w ** (mu + l + nu - mp.mpf(1) / 2)
            * mp.hyp2f1(mu / 2, mu / 2 + l, nu + mu + l + mp.mpf(1) / 2, w))


def show(name, value):
    print("%s = %s" % (name, mp.nstr(value, 20)))


def main():
    show("kummer(1.5, 2, 0.5)(0.3)", kummer(1.5, 2, 0.5, 0.3))
    show("kummer(0.5, 3.5, 0.101)(0.1)", kummer(0.5, 3.5, "0.101", "0.1"))
    show("kummer(0.5, 0.25, 0.013)(0.1)", kummer(0.5, 0.25, "0.013", "0.1"))
    show("kummer(1.5, 3.5, 0.059)(0.1)", kummer(1.5, 3.5, "0.059", "0.1"))
    show("kummer(0.5, 3.5, 2.0)(1.3)", kummer(0.5, 3.5, 2, 1.3))

    show("gh(0, 6, 0.5, 0.5)(0.2)", gh(0, 6, "0.5", "0.5", "0.2"))
    show("gh(1, 7, 0.5, 0.1)(0.03)", gh(1, 7, "0.5", "0.1", "0.03"))
    show("gh(0, 2, 0.5, 0.1)(0.05)", gh(0, 2, "0.5", "0.1", "0.05"))
    show("gh(1, 3, 0.5, 0.5)(0.2)", gh(1, 3, "0.5", "0.5", "0.2"))
    # hypergeometric tail shape l = d/2 + nu, d = 2
    show("gh(0.5, 4, 1.5, 1.0)(0.4)", gh("0.5", 4, "1.5", 1, "0.4"))

    # semivariogram complements quoted in the validation harness
    show("1 - kummer(0.5, 3.5, 0.101)(0.1)",
         1 - kummer(0.5, 3.5, "0.101", "0.1"))


if __name__ == "__main__":
    main()
