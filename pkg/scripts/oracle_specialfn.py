"""Arbitrary-precision reference values for the special-function layer.

Run once and freeze the printed values into tests/test_specialfn.py.
Everything here uses mpmath at 50 digits, fully independent of the
scipy-backed implementations under test.
"""

import mpmath as mp

mp.mp.dps = 50


def show(name, value):
    print("%s = %s" % (name, mp.nstr(value, 20)))


def main():
    # Tricomi U spot values (quadrature implementation under test)
    show("U(1.5, -0.2, 0.8)", mp.hyperu(1.5, -0.2, 0.8))
    show("U(2.5, 0.5, 1.2)", mp.hyperu(2.5, 0.5, 1.2))
    show("U(3.5, 0.5, 0.005)", mp.hyperu(3.5, 0.5, 0.005))
    show("U(1, 1, 1)", mp.e * mp.e1(1))

    # log U in the large-first-parameter regime (Matern-limit path)
    show("log U(100, -0.5, 0.01)", mp.log(mp.hyperu(100, -0.5, 0.01)))
    show("log U(1000, 0.5, 0.001)", mp.log(mp.hyperu(1000, 0.5, 0.001)))
    show("log U(1000, 0.5, 2.0)", mp.log(mp.hyperu(1000, 0.5, 2.0)))

    # Gauss 2F1 spot values
    show("2F1(1.2, 0.7; 2.9; 0.6)", mp.hyp2f1(1.2, 0.7, 2.9, 0.6))
    show("2F1(3.0, 3.5; 6.5; 0.9996)", mp.hyp2f1(3.0, 3.5, 6.5, 0.9996))
    show("2F1(3.0, 3.5; 6.5; 0.36)", mp.hyp2f1(3.0, 3.5, 6.5, 0.36))
    # large-parameter regime exercised by the mu -> infinity limit checks;
    # in-package the argument sits this close to 1 (support radius grows
    # with mu), keeping the connection series well conditioned
    show("2F1(500, 500.5; 1002; 0.999975)",
         mp.hyp2f1(500, 500.5, 1002, mp.mpf("0.999975")))
    show("2F1(500, 500.5; 1002; 0.9999)",
         mp.hyp2f1(500, 500.5, 1002, mp.mpf("0.9999")))

    # Bessel spot values
    show("K(2.7, 3.1)", mp.besselk(2.7, 3.1))
    show("J(2.5, 7.3)", mp.besselj(2.5, 7.3))
    show("J(60, 5000)", mp.besselj(60, 5000))

    # terminating 4F3 coefficient, n = 5, eta = (beta+gamma-delta-3/2)/2
    dl, bt, gm = mp.mpf("2.5"), mp.mpf(4), mp.mpf("4.5")
    et = (bt + gm - dl - mp.mpf(3) / 2) / 2
    show("C(5; 2.5, 4.0, 4.5), eta=2.25",
         mp.hyper([-5, 5 + 2 * et, et + 1, dl], [et + mp.mpf(1) / 2, bt, gm], 1))
    # n = 1 closed form used as a cross-check
    t1 = -(1 + 2 * et) * (et + 1) * dl / ((et + mp.mpf(1) / 2) * bt * gm)
    show("C(1; 2.5, 4.0, 4.5), eta=2.25", 1 + t1)


if __name__ == "__main__":
    main()
