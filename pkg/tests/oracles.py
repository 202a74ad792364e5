"""Independent reference implementations in 50-digit arithmetic.

Nothing here imports the package under test.
"""

import mpmath as mp
import numpy as np

mp.mp.dps = 50


def roots(s, p):
    s, p = mp.mpc(s), mp.mpc(p)
    d = mp.sqrt(s * s - 4 * p)
    return (s + d) / 2, (s - d) / 2


def in_G(s, p):
    """Definition of G: both roots of z^2 - s z + p in the open disc; returns 1 - max|root|."""
    r1, r2 = roots(s, p)
    return float(1 - max(abs(r1), abs(r2)))


def mobius(z1, z2):
    z1, z2 = mp.mpc(z1), mp.mpc(z2)
    return float(abs(z1 - z2) / abs(1 - mp.conj(z1) * z2))


def leaf(s, p):
    r1, r2 = roots(s, p)
    return mp.mpf(abs(r1 - r2) / abs(1 - mp.conj(r1) * r2))


def F(s, p):
    s, p = mp.mpc(s), mp.mpc(p)
    return complex(1j * (1 + p) / (1 - p)), complex(-1j * s / (1 - p))


def F_inv(u, v):
    u, v = mp.mpc(u), mp.mpc(v)
    return complex(-2 * v / (u + 1j)), complex((u - 1j) / (u + 1j))


def in_D1(u, v):
    """D1 through its preimage in G: 1 - max|root| of the pulled-back quadratic."""
    s, p = F_inv(u, v)
    return in_G(s, p)


def d1_definition(u, v):
    """Slack of the two defining inequalities of D1 (unnormalised)."""
    u, v = mp.mpc(u), mp.mpc(v)
    a = 1 + abs(u) ** 2 - abs(v) ** 2 - abs(1 + u * u - v * v)
    b = mp.im(u * (1 + mp.conj(v)))
    return float(a), float(b)


def disc_map(theta, alpha, z):
    return complex(mp.expj(theta) * (mp.mpc(z) - alpha) / (1 - mp.conj(mp.mpc(alpha)) * z))


def dense_circle_max(f, n=200_000):
    theta = np.linspace(-np.pi, np.pi, n, endpoint=False)
    return float(np.max(f(theta)))
