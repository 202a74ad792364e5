"""The symmetrized bidisc G = {(z1 + z2, z1 z2) : z1, z2 in D}.

Membership is reported as ``(Tri, margin)`` where the margin is the
smallest slack over the inequalities of the chosen characterisation, each
slack divided by ``max(1, |lhs|, |rhs|)``.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from symbidisc._circle import circle_sup
from symbidisc.complex_core import (
    DEFAULT,
    DegenerateError,
    DomainError,
    ToleranceConfig,
    Tri,
    _comp_sum,
    _two_prod,
    _unwrap,
    as_complex,
    margin_to_tri,
    solve_quadratic,
)
from symbidisc.disc_geometry import DiscAutomorphism, disc_apply, mobius_distance

CONDITIONS = range(1, 10)


class GPoint(NamedTuple):
    s: complex
    p: complex


def _slack(lhs, rhs):
    """Normalised slack of ``lhs < rhs``."""
    scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    return (rhs - lhs) / scale


def _split(s, p=None):
    if p is None:
        s, p = s
    return as_complex(s), as_complex(p)


def sym(z1, z2=None):
    """``(z1, z2) -> (z1 + z2, z1 z2)``."""
    z1, z2 = _split(z1, z2)
    return GPoint(_unwrap(z1 + z2), _unwrap(z1 * z2))


def _sorted_pair(r1, r2):
    swap = (r1.real > r2.real) | ((r1.real == r2.real) & (r1.imag > r2.imag))
    return np.where(swap, r2, r1), np.where(swap, r1, r2)


def _roots(s, p):
    return solve_quadratic(np.ones_like(s), -s, p)


def sym_inverse(s, p=None, cfg: ToleranceConfig = DEFAULT, check: bool = True):
    """The two roots of ``z^2 - s z + p``, ordered lexicographically by (re, im)."""
    s, p = _split(s, p)
    if check:
        _require_g(s, p, cfg)
    r1, r2 = _roots(s, p)
    r1, r2 = _sorted_pair(np.asarray(r1), np.asarray(r2))
    return _unwrap(r1), _unwrap(r2)


def _require_g(s, p, cfg):
    _, m = _cond4(s, p)
    if np.any(margin_to_tri(np.atleast_1d(m), cfg) == Tri.OUTSIDE):
        raise DomainError("point is outside the symmetrized bidisc")


# -- the nine characterisations --------------------------------------------

def _cond2(s, p):
    a = _slack(np.abs(s * s - 4 * p) + np.abs(s) ** 2, 2 * (1 + np.abs(p) ** 2))
    b = _slack(np.abs(p) ** 2 + (s.conjugate() * p + s.conjugate()).imag, 1.0)
    return None, np.minimum(a, b)


def _cond3(s, p):
    r1, r2 = _roots(s, p)
    rmax = np.maximum(np.abs(r1), np.abs(r2))
    return None, _slack(rmax, 1.0)


def _cond4(s, p):
    return None, _slack(np.abs(s - s.conjugate() * p) + np.abs(p) ** 2, 1.0)


def _cond5(s, p):
    return None, np.minimum(_slack(np.abs(s), 2.0), _cond4(s, p)[1])


def _ratio6(theta, s, p):
    z = np.exp(1j * theta)
    return np.abs(2 * z * p - s) / np.abs(2 - z * s)


def _ratio7(theta, s, p):
    z = np.exp(1j * theta)
    return np.abs(2 * p - z.conjugate() * s) / np.abs(2 - z * s)


def _sup_condition(ratio, s, p):
    # |s| < 2 keeps the pole 2/s outside the closed disc; only then does
    # the maximum principle reduce the supremum to the boundary circle.
    pole = _slack(np.abs(s), 2.0)
    sflat, pflat = s.ravel(), p.ravel()
    sup = np.full(sflat.shape, np.inf)
    ok = pole.ravel() > 0
    if np.any(ok):
        sup[ok] = circle_sup(ratio, (sflat[ok], pflat[ok]))
    sup_slack = np.where(np.isfinite(sup), _slack(np.where(np.isfinite(sup), sup, 0), 1.0), -1.0)
    return None, np.minimum(pole, sup_slack.reshape(s.shape))


def _cond6(s, p):
    return _sup_condition(_ratio6, s, p)


def _cond7(s, p):
    return _sup_condition(_ratio7, s, p)


def _cond8(s, p):
    lhs = 2 * np.abs(s - s.conjugate() * p) + np.abs(s * s - 4 * p) + np.abs(s) ** 2
    return None, _slack(lhs, 4.0)


def solve_beta(s, p):
    """Solve ``s = beta p + conj(beta)`` as a real 2x2 system; inf where singular."""
    p1, p2 = p.real, p.imag
    det = p1 * p1 + p2 * p2 - 1.0
    sing = np.abs(det) < 1e-300
    det = np.where(sing, 1.0, det)
    # [[1 + p1, -p2], [p2, p1 - 1]] @ [b1, b2] = [Re s, Im s]
    b1 = ((p1 - 1) * s.real + p2 * s.imag) / det
    b2 = ((1 + p1) * s.imag - p2 * s.real) / det
    beta = b1 + 1j * b2
    return np.where(sing, np.inf, beta)


def _cond9(s, p):
    beta = solve_beta(s, p)
    mb = np.abs(beta)
    bslack = np.where(np.isfinite(mb), _slack(np.where(np.isfinite(mb), mb, 0), 1.0), -1.0)
    return None, np.minimum(_slack(np.abs(p), 1.0), bslack)


_G_CONDITIONS = {
    1: _cond4,
    2: _cond2,
    3: _cond3,
    4: _cond4,
    5: _cond5,
    6: _cond6,
    7: _cond7,
    8: _cond8,
    9: _cond9,
}


def g_margin(s, p, condition: int):
    if condition not in _G_CONDITIONS:
        raise ValueError(f"invalid condition {condition!r}; expected 1..9")
    s, p = _split(s, p)
    return _G_CONDITIONS[condition](s, p)[1]


def membership_g(s, p=None, condition: int = 4, cfg: ToleranceConfig = DEFAULT):
    """Classify ``(s, p)`` against one characterisation of G.

    Condition 1 (the definition) is evaluated through condition 4.
    Conditions 6 and 7 take the supremum over the closed disc on its
    boundary circle; condition 9 solves for beta explicitly.
    """
    if p is None:
        s, p = s
    m = g_margin(s, p, condition)
    return margin_to_tri(m, cfg), _unwrap(m)


def membership_g_all(s, p=None, cfg: ToleranceConfig = DEFAULT):
    if p is None:
        s, p = s
    return {k: membership_g(s, p, k, cfg) for k in CONDITIONS}


def membership_gc(s, p=None, c=2.0, cfg: ToleranceConfig = DEFAULT):
    """Membership in the exhausting subdomain ``G_c``; ``c > 1`` may be an array."""
    c = np.asarray(c, dtype=float)
    if not np.all(c > 1):
        raise ValueError(f"G_c needs c > 1, got {c!r}")
    s, p = _split(s, p)
    a = _slack(c * np.abs(s * s - 4 * p) + np.abs(s) ** 2, 2 * (1 + np.abs(p) ** 2))
    b = _slack(np.abs(p) ** 2 + (s.conjugate() * p + s.conjugate()).imag, 1.0)
    m = np.minimum(a, b)
    return margin_to_tri(m, cfg), _unwrap(m)


def gc_threshold(s, p=None):
    """Largest c with ``(s, p)`` in the closure of G_c; inf on the royal variety."""
    s, p = _split(s, p)
    d = np.abs(s * s - 4 * p)
    with np.errstate(divide="ignore"):
        return _unwrap(np.where(d > 0, (2 * (1 + np.abs(p) ** 2) - np.abs(s) ** 2) / d, np.inf))


# -- automorphisms and leaves ----------------------------------------------

def apply_H(phi: DiscAutomorphism, s, p=None, cfg: ToleranceConfig = DEFAULT):
    """``H_phi(z1 + z2, z1 z2) = (phi(z1) + phi(z2), phi(z1) phi(z2))``."""
    s, p = _split(s, p)
    z1, z2 = sym_inverse(s, p, cfg)
    return sym(phi(z1), phi(z2))


def apply_H_params(theta, alpha, s, p):
    """Vectorised ``H_phi`` for arrays of automorphism parameters (no checks)."""
    s, p = as_complex(s), as_complex(p)
    z1, z2 = _roots(s, p)
    w1 = disc_apply(theta, alpha, z1)
    w2 = disc_apply(theta, alpha, z2)
    return w1 + w2, w1 * w2


def leaf_index(s, p=None, cfg: ToleranceConfig = DEFAULT, check: bool = True):
    """Orbit invariant ``q``: the Mobius distance between the two roots.

    Evaluated from the symmetric functions,
    ``q^2 = 2|s^2 - 4p| / (2 + 2|p|^2 - |s|^2 + |s^2 - 4p|)``,
    so it needs no root ordering.  Both the discriminant and the
    denominator cancel badly near the royal variety and near the
    distinguished boundary, so they are accumulated with error-free
    products and compensated sums; the result is accurate to a few ulps
    for the stored ``(s, p)``.
    """
    s, p = _split(s, p)
    if check:
        _require_g(s, p, cfg)
    a, b, pr, pi = s.real, s.imag, p.real, p.imag
    a2, a2_lo = _two_prod(a, a)
    b2, b2_lo = _two_prod(b, b)
    ab, ab_lo = _two_prod(a, b)
    pr2, pr2_lo = _two_prod(pr, pr)
    pi2, pi2_lo = _two_prod(pi, pi)
    disc_re = _comp_sum([a2, -b2, -4 * pr, a2_lo, -b2_lo])
    disc_im = _comp_sum([2 * ab, -4 * pi, 2 * ab_lo])
    d = np.hypot(disc_re, disc_im)
    den = _comp_sum([np.full_like(a, 2.0), 2 * pr2, 2 * pi2, -a2, -b2, d,
                     2 * pr2_lo, 2 * pi2_lo, -a2_lo, -b2_lo])
    return _unwrap(np.sqrt(2 * d / den))


def reindex_a_to_b(a):
    """``b = a / (1 + sqrt(1 - a^2))`` so that the leaf of (a, 0) contains (0, -b^2)."""
    a = np.asarray(a, dtype=float)
    if np.any((a < 0) | (a >= 1)):
        raise ValueError("leaf index must lie in [0, 1)")
    return _unwrap(a / (1.0 + np.sqrt((1.0 - a) * (1.0 + a))))


def reindex_b_to_a(b):
    b = np.asarray(b, dtype=float)
    if np.any((b < 0) | (b >= 1)):
        raise ValueError("leaf index must lie in [0, 1)")
    return _unwrap(2 * b / (1 + b * b))


def recover_automorphism(a: float, lift, cfg: ToleranceConfig = DEFAULT) -> DiscAutomorphism:
    """The unique ``phi`` with ``phi(a) = z1`` and ``phi(0) = z2``."""
    z1, z2 = complex(lift[0]), complex(lift[1])
    if a <= cfg.boundary_band:
        raise DegenerateError("the royal leaf a = 0 has infinitely many such automorphisms")
    d = mobius_distance(z1, z2)
    if abs(d - a) > cfg.eq_tol * (1 + a):
        raise DomainError(f"lift has Mobius distance {d!r}, not {a!r}")
    w = (z1 - z2) / (1 - z2.conjugate() * z1)
    theta = math.atan2(w.imag, w.real)
    return DiscAutomorphism(theta, -z2 * complex(math.cos(theta), -math.sin(theta)))


def automorphisms_between(g, h, cfg: ToleranceConfig = DEFAULT):
    """Both ``phi`` with ``H_phi(g) = h`` for two points on one non-royal leaf."""
    a = leaf_index(*g, cfg=cfg)
    b = leaf_index(*h, cfg=cfg)
    if abs(a - b) > cfg.eq_tol * (1 + a):
        raise DomainError("points lie on different leaves")
    z = sym_inverse(*g, cfg=cfg)
    w = sym_inverse(*h, cfg=cfg)
    rz = recover_automorphism(a, z, cfg)
    out = []
    for target in (w, w[::-1]):
        out.append(recover_automorphism(a, target, cfg).compose(rz.invert()))
    return out


def orbit_path(a: float, target, steps: int, cfg: ToleranceConfig = DEFAULT):
    """Waypoints ``H_{phi_t}(a, 0)`` joining ``(a, 0)`` to ``target`` inside its leaf.

    ``phi_t(z) = e^{i theta_t}(alpha_t - z)/(1 - conj(alpha_t) z)`` with
    ``theta_t = t theta + (1 - t) pi`` and ``alpha_t = t alpha``; ``phi_0`` is
    the identity and ``phi_1`` carries ``(a, 0)`` to the target.
    """
    if steps < 2:
        raise ValueError("steps must be at least 2")
    s, p = complex(target[0]), complex(target[1])
    if a <= cfg.boundary_band:
        # q ~ sqrt|s^2 - 4p| amplifies rounding, so test the royal equation itself
        _require_g(np.asarray(s), np.asarray(p), cfg)
        if abs(s * s - 4 * p) > cfg.eq_tol * (1 + abs(s) ** 2):
            raise DomainError("target is not on the royal variety")
    else:
        q = leaf_index(s, p, cfg)
        if abs(q - a) > cfg.eq_tol * (1 + a):
            raise DomainError(f"target lies on leaf {q!r}, not {a!r}")
    z1, z2 = sym_inverse(s, p, cfg)
    if a <= cfg.boundary_band:
        # any phi with phi(0) = z works on the royal leaf
        theta, alpha = math.pi, -(s / 2)
    else:
        # both orderings of the lift are valid; take the one nearer the identity
        phi = min(
            (recover_automorphism(a, lift, cfg) for lift in ((z1, z2), (z2, z1))),
            key=lambda f: abs(f.alpha) + abs(f.theta) / math.pi,
        )
        # e^{i t}(z - al)/(1 - conj(al) z) == e^{i(t + pi)}(al - z)/(1 - conj(al) z)
        theta, alpha = phi.theta + math.pi, phi.alpha
    t = np.linspace(0.0, 1.0, steps)
    th = t * theta + (1 - t) * math.pi
    al = t * alpha
    e = np.exp(1j * th)
    w1 = e * (al - a) / (1 - al.conjugate() * a)
    w2 = e * al
    return [GPoint(complex(x), complex(y)) for x, y in zip(w1 + w2, w1 * w2)]


# -- sampling ---------------------------------------------------------------

def rng_for(seed: int, *stream: int) -> np.random.Generator:
    """PCG64 generator keyed by ``(seed, *stream)`` through numpy's SeedSequence."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *stream])))


def sample_disc(rng: np.random.Generator, n: int, radius: float = 1.0):
    """``n`` uniform points of the open disc of the given radius (rejection from the square)."""
    out = np.empty(0, dtype=complex)
    while out.size < n:
        m = int((n - out.size) * 1.35) + 16
        z = rng.uniform(-1.0, 1.0, m) + 1j * rng.uniform(-1.0, 1.0, m)
        out = np.concatenate([out, z[np.abs(z) < 1.0]])
    return radius * out[:n]


def sample_bidisc(n: int, seed: int, radius: float = 1.0):
    rng = rng_for(seed, 0)
    return sample_disc(rng, n, radius), sample_disc(rng, n, radius)


def sample_g(n: int, seed: int) -> GPoint:
    """Push uniform bidisc samples through ``sym``; ``n = 0`` gives empty arrays."""
    if n < 0:
        raise ValueError("n must be non-negative")
    z1, z2 = sample_bidisc(n, seed)
    return GPoint(z1 + z2, z1 * z2)


def sample_box(n: int, seed: int, half_width: float = 3.0):
    """Uniform points of the box ``[-w, w]^4`` in (Re s, Im s, Re p, Im p)."""
    rng = rng_for(seed, 1)
    x = rng.uniform(-half_width, half_width, (4, n))
    return x[0] + 1j * x[1], x[2] + 1j * x[3]
