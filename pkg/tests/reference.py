"""Independent arbitrary-precision recomputation of the DPTS key-rate chain.

Written straight from the formulas with mpmath and no imports from the
package; tests compare the package against it.
"""

from mpmath import mp, mpf, exp, log

mp.dps = 40


def s4(x):
    x = mpf(x)
    return mpf(0) if x == 0 else -x * log(x, 4)


def h4(x):
    return s4(x) + s4(1 - mpf(x))


def h2(x):
    x = mpf(x)
    if x in (0, 1):
        return mpf(0)
    return -x * log(x, 2) - (1 - x) * log(1 - x, 2)


def chi0(g):
    g = mpf(g)
    spectrum = s4(((1 + g**2) ** 2 + 4 * g**2) / 8) + 3 * s4((1 - g**2) ** 2 / 8) + 4 * s4((1 - g**4) / 8)
    return spectrum - h4((1 - g**4) / 2)


def bracket(g, printed=False):
    g = mpf(g)
    if printed:
        mix = s4((1 + 3 * g**2) / 4) + 3 * s4((1 - g**2) / 4)
    else:
        mix = s4((1 + g) ** 2 / 4) + s4((1 - g) ** 2 / 4) + 2 * s4((1 - g**2) / 4)
    return mix - h4((1 - g**2) / 2)


def key_rate_chain(mu, length_km, eta, p_d, v, mean_n, p_decoy, alpha_db=mpf("0.2"), printed=False):
    mu, eta, p_d, v, p_decoy = (mpf(x) for x in (mu, eta, p_d, v, p_decoy))
    t = mpf(10) ** (-mpf(alpha_db) * mpf(length_km) / 10)
    r = (1 - exp(-mu * t * eta)) / 2
    rb = r + 4 * p_d * (1 - r)
    f = (1 - p_decoy) * (mpf(mean_n) - 1) / mpf(mean_n)
    e1 = (r * (1 - v) / 2 + 3 * p_d * (1 - r)) / rb
    e2 = (r * (1 - v) / 2 + p_d * (1 - r)) / rb
    e3 = p_d * (1 - r) / rb
    i_ab = 1 - (s4(1 - e1) + s4(e2) + 2 * s4(e3))
    g = exp(-mu * (1 - t))
    c0 = chi0(g)
    p_e = (mpf(mean_n) - 2) / (mpf(mean_n) - 1)
    c1 = (1 - h2(p_e)) * bracket(g, printed) / 2
    chi = c0 + (1 - c0) * c1
    return dict(t=t, r=r, rb=rb, f=f, err=(e1, e2, e3, e3), i_ab=i_ab, gamma=g,
                chi0=c0, chi1=c1, chi=chi, rsk=f * rb * max(mpf(0), i_ab - chi))
