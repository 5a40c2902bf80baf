#!/usr/bin/env python3
"""Independent reference values for the C++ test suites.

Everything here is computed with mpmath / scipy from first principles
(direct series, brute-force quadrature, dense linear algebra) and shares no
code path with the library. Run it to regenerate the constants that are
frozen into tests/*.cpp.
"""
import math

import mpmath as mp
import numpy as np
from scipy import integrate, linalg

mp.mp.dps = 40


def c_eps(eps):
    return mp.log(6, 2) + 2 * mp.log((1 + eps) / (1 - eps), 2)


def g_entropy(n):
    n = mp.mpf(n)
    if n == 0:
        return mp.mpf(0)
    return (n + 1) * mp.log(n + 1, 2) - n * mp.log(n, 2)


def thermal_fid(n1, n2):
    n1, n2 = mp.mpf(n1), mp.mpf(n2)
    return 1 / (mp.sqrt((n1 + 1) * (n2 + 1)) - mp.sqrt(n1 * n2)) ** 2


def thermal_fid_series(n1, n2, cutoff):
    # diagonal states commute: F = (sum sqrt(p q))^2
    s = mp.mpf(0)
    for n in range(cutoff + 1):
        p = (mp.mpf(n1) ** n) / (mp.mpf(n1) + 1) ** (n + 1)
        q = (mp.mpf(n2) ** n) / (mp.mpf(n2) + 1) ** (n + 1)
        s += mp.sqrt(p * q)
    return s ** 2


def laguerre_diag(n, u):
    return mp.exp(-u / 2) * mp.laguerre(n, 0, u)


def basel_infidelity(sigma, cutoff):
    # eps = 1 - int_0^inf (1/sigma) e^{-u/sigma} |chi(u)|^2 du,
    # chi(u) = sum_n p_n e^{-u/2} L_n(u), p_n ~ 1/n^2 (n>=1), renormalised.
    w = [1.0 / (n * n) for n in range(1, cutoff + 1)]
    z = sum(w)
    p = np.array([0.0] + [x / z for x in w])

    def chi(u):
        # three-term recurrence in double precision, u is small here
        l0 = math.exp(-u / 2)
        l1 = l0 * (1 - u)
        acc = p[0] * l0 + p[1] * l1
        for k in range(1, cutoff):
            l2 = ((2 * k + 1 - u) * l1 - k * l0) / (k + 1)
            acc += p[k + 1] * l2
            l0, l1 = l1, l2
        return acc

    f = lambda t: math.exp(-t) * chi(sigma * t) ** 2
    # split [0, 45] finely: the integrand oscillates near t ~ 0 for small sigma
    edges = np.concatenate([[0.0], np.geomspace(1e-6, 45.0, 400)])
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, _ = integrate.quad(f, a, b, epsabs=1e-13, epsrel=1e-12, limit=200)
        total += val
    return 1 - total


def bhattacharyya(x1, x2):
    # F(G1, G2) = (int sqrt(G1 G2) d^2 alpha)^2 over the plane, polar coords
    g = lambda r, x: math.exp(-r * r / x) / (math.pi * x)
    val, _ = integrate.quad(lambda r: 2 * math.pi * r * math.sqrt(g(r, x1) * g(r, x2)), 0, math.inf,
                            epsabs=1e-14, epsrel=1e-13)
    return val ** 2


def main():
    print("C(0.1)      =", mp.nstr(c_eps(mp.mpf("0.1")), 17))
    print("C(0.5)      =", mp.nstr(c_eps(mp.mpf("0.5")), 17))
    print("log2 6      =", mp.nstr(mp.log(6, 2), 17))
    pl = -mp.log(1 - mp.mpf("0.5"), 2) + c_eps(mp.mpf("0.1")) / 100
    print("pure_loss(0.5,100,0.1) =", mp.nstr(pl, 17))
    pl = -mp.log(1 - mp.mpf("0.9"), 2) + c_eps(mp.mpf("0.01")) / 1000
    print("pure_loss(0.9,1000,0.01) =", mp.nstr(pl, 17))
    eta, nb, n, eps, v = mp.mpf("0.5"), 1, 100, mp.mpf("0.1"), 2
    tb = (-mp.log((1 - eta) * eta ** nb, 2) - g_entropy(nb)
          + mp.sqrt(2 * v / (n * (1 - eps))) + c_eps(eps) / n)
    print("thermal_bound(0.5,1,100,0.1,V=2) =", mp.nstr(tb, 17))
    print("g(1)        =", mp.nstr(g_entropy(1), 17))

    print("F_th(1,1.2) closed =", mp.nstr(thermal_fid(1, "1.2"), 17))
    print("F_th(1,1.2) series80 =", mp.nstr(thermal_fid_series(1, "1.2", 80), 17))
    print("e(0,0.5,0.5) =", mp.nstr(mp.sqrt(1 - 1 / mp.mpf("1.5")), 17))
    print("e(1,0.5,0.2) =", mp.nstr(mp.sqrt(1 - thermal_fid(1, "1.2")), 17))
    print("e_amp(0,2,0.1) =", mp.nstr(mp.sqrt(1 - 1 / mp.mpf("1.2")), 17))
    print("e_amp(1,3,0.2) =", mp.nstr(mp.sqrt(1 - thermal_fid(1, "1.3")), 17))
    print("overlap(10,0.1) =", mp.nstr(1 / (mp.mpf("0.1") + 2 + 1), 17))
    print("1-overlap(1e3,0.1) =", mp.nstr(1 - 1 / (mp.mpf("0.1") + 200 + 1), 17))
    print("1-1/1.3 =", mp.nstr(1 - 1 / mp.mpf("1.3"), 17))
    print("FvdG(0.4) =", mp.nstr(1 - mp.sqrt("0.4"), 17), mp.nstr(mp.sqrt("0.6"), 17))
    print("basel weight cutoff1 =", mp.nstr(6 / mp.pi ** 2, 17))
    print("basel weight cutoff60 =", mp.nstr(6 / mp.pi ** 2 * sum(mp.mpf(1) / k ** 2 for k in range(1, 61)), 17))
    print("basel weight cutoff2000 =", mp.nstr(6 / mp.pi ** 2 * mp.nsum(lambda k: 1 / k ** 2, [1, 2000]), 17))

    for x1, x2 in [(1, 2), (0.3, 0.7), (2.0, 2.5)]:
        print(f"bhattacharyya({x1},{x2}) =", repr(bhattacharyya(x1, x2)), " formula", 4 * x1 * x2 / (x1 + x2) ** 2)

    # sigma for thermal(0.5,0) target e = 0.05 and amplifier(2,0) target 0.1
    e = mp.mpf("0.05")
    print("sigma thermal(0.5,0) e=.05 =", mp.nstr((1 / (1 - e * e) - 1) * (1 - mp.mpf("0.5")) / mp.mpf("0.5"), 17))
    e = mp.mpf("0.1")
    print("sigma amp(2,0) e=.1 =", mp.nstr((1 / (1 - e * e) - 1) * (2 - 1) / mp.mpf(2), 17))

    for s in [1.0, 0.1, 0.01, 0.001]:
        print(f"basel eps(sigma={s}, cutoff 2000) =", repr(basel_infidelity(s, 2000)))
    print("basel eps(0.001, cutoff 60) =", repr(basel_infidelity(0.001, 60)))


if __name__ == "__main__":
    main()
