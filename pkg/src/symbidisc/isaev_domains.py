"""Isaev's model domains D1, D_s, D_{s,t}, Omega_1, D1^(2) and the SO(2,1)^0 action.

Margins follow the convention of ``symmetrized_bidisc``: smallest
normalised slack over the defining inequalities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from symbidisc._circle import circle_sup
from symbidisc.complex_core import (
    DEFAULT,
    DomainError,
    ToleranceConfig,
    Tri,
    _unwrap,
    as_complex,
    margin_to_tri,
    solve_quadratic,
)
from symbidisc.symmetrized_bidisc import _slack


class D1Point(NamedTuple):
    z1: complex
    z2: complex


class ProjPoint3(NamedTuple):
    """Homogeneous coordinates ``(x0 : x1 : x2 : x3)`` of a point of CP^3."""

    x0: complex
    x1: complex
    x2: complex
    x3: complex

    def array(self):
        return np.stack(np.broadcast_arrays(*(as_complex(x) for x in self)))

    def canonical(self) -> "ProjPoint3":
        """Representative whose largest-modulus coordinate (first on ties) equals 1."""
        x = self.array()
        mod = np.abs(x)
        if np.any(mod.max(axis=0) == 0):
            raise DomainError("the zero vector is not a projective point")
        # ties within rounding resolve to the lowest index
        k = np.argmax(mod >= mod.max(axis=0) * (1 - 1e-12), axis=0)
        pivot = np.take_along_axis(x, k[None, ...], axis=0)[0]
        return ProjPoint3(*(_unwrap(c) for c in x / pivot))


def proj_residual(p: ProjPoint3, q: ProjPoint3):
    """Distance between two projective points in the affine chart of p's largest coordinate."""
    x, y = p.array(), q.array()
    mod = np.abs(x)
    k = np.argmax(mod >= mod.max(axis=0) * (1 - 1e-12), axis=0)[None, ...]
    xa = x / np.take_along_axis(x, k, axis=0)
    yk = np.take_along_axis(y, k, axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ya = y / yk
    res = np.max(np.abs(xa - ya) / (1 + np.maximum(np.abs(xa), np.abs(ya))), axis=0)
    return _unwrap(np.where(yk == 0, np.inf, res))


def proj_equal(p: ProjPoint3, q: ProjPoint3, cfg: ToleranceConfig = DEFAULT):
    return proj_residual(p, q) <= cfg.eq_tol


@dataclass(frozen=True)
class IsaevParams:
    """``D_s`` when ``t`` is None, otherwise ``D_{s,t}`` (``t`` may be ``inf``)."""

    s: float = 1.0
    t: float | None = None

    def __post_init__(self):
        if not self.s >= 1:
            raise ValueError(f"need s >= 1, got {self.s!r}")
        if self.t is not None and not self.t > self.s:
            raise ValueError(f"need t > s, got s={self.s!r}, t={self.t!r}")


def _split(u, v):
    if v is None:
        u, v = u
    return as_complex(u), as_complex(v)


def _quad(u, v):
    return 1 + u * u - v * v


def _herm(u, v):
    return 1 + np.abs(u) ** 2 - np.abs(v) ** 2


def _orient(u, v):
    return (u * (1 + v.conjugate())).imag


# -- nine characterisations of D1 ------------------------------------------

def _d1_def(u, v):
    a = _slack(np.abs(_quad(u, v)), _herm(u, v))
    return np.minimum(a, _slack(0.0, _orient(u, v)))


def _d1_cond3(u, v):
    lead = u + 1j
    degenerate = lead == 0
    lead = np.where(degenerate, 1.0, lead)
    r1, r2 = solve_quadratic(lead, 2 * v, u - 1j)
    rmax = np.maximum(np.abs(r1), np.abs(r2))
    return np.where(degenerate, -1.0, _slack(rmax, 1.0))


def _imag_pair(u, v):
    return np.abs(v.imag + 1j * (u.conjugate() * v).imag)


def _d1_cond4(u, v):
    return _slack(_imag_pair(u, v), u.imag)


def _d1_cond5(u, v):
    return np.minimum(_slack(np.abs(v), np.abs(u + 1j)), _d1_cond4(u, v))


def _ratio6(theta, u, v):
    al = np.exp(1j * theta)
    return np.abs(al * (u - 1j) + v) / np.abs(u + 1j + al * v)


def _ratio7(theta, u, v):
    al = np.exp(1j * theta)
    return np.abs(u - 1j + al.conjugate() * v) / np.abs(u + 1j + al * v)


def _d1_sup(ratio, u, v):
    # pole alpha = -(u + i)/v lies in the closed disc iff |v| >= |u + i|
    pole = _slack(np.abs(v), np.abs(u + 1j))
    uf, vf = u.ravel(), v.ravel()
    ok = pole.ravel() > 0
    sup = np.full(uf.shape, np.inf)
    if np.any(ok):
        sup[ok] = circle_sup(ratio, (uf[ok], vf[ok]))
    finite = np.isfinite(sup)
    sup_slack = np.where(finite, _slack(np.where(finite, sup, 0), 1.0), -1.0)
    return np.minimum(pole, sup_slack.reshape(u.shape))


def _d1_cond6(u, v):
    return _d1_sup(_ratio6, u, v)


def _d1_cond7(u, v):
    return _d1_sup(_ratio7, u, v)


def _d1_cond8(u, v):
    lhs = 2 * _imag_pair(u, v) + np.abs(_quad(u, v))
    return _slack(lhs, np.abs(1j + u) ** 2 - np.abs(v) ** 2)


def _d1_cond9(u, v):
    # v + b1 u + b2 = 0 splits into Im: v2 = -b1 u2, Re: v1 = -b1 u1 - b2
    u2 = u.imag
    sing = u2 == 0
    safe = np.where(sing, 1.0, u2)
    b1 = -v.imag / safe
    b2 = -v.real - b1 * u.real
    mb = np.hypot(b1, b2)
    bslack = np.where(sing, -1.0, _slack(mb, 1.0))
    return np.minimum(_slack(0.0, u2), bslack)


_D1_CONDITIONS = {
    1: _d1_def,
    2: _d1_def,
    3: _d1_cond3,
    4: _d1_cond4,
    5: _d1_cond5,
    6: _d1_cond6,
    7: _d1_cond7,
    8: _d1_cond8,
    9: _d1_cond9,
}


def d1_margin(u, v, condition: int):
    if condition not in _D1_CONDITIONS:
        raise ValueError(f"invalid condition {condition!r}; expected 1..9")
    u, v = _split(u, v)
    return _D1_CONDITIONS[condition](u, v)


def membership_d1(u, v=None, condition: int = 1, cfg: ToleranceConfig = DEFAULT):
    """Classify ``(u, v)`` against one of the nine characterisations of D1."""
    if v is None:
        u, v = u
    m = d1_margin(u, v, condition)
    return margin_to_tri(m, cfg), _unwrap(m)


def membership_d1_all(u, v=None, cfg: ToleranceConfig = DEFAULT):
    if v is None:
        u, v = u
    return {k: membership_d1(u, v, k, cfg) for k in range(1, 10)}


def membership_ds_dst(u, v=None, params: IsaevParams = IsaevParams(), cfg: ToleranceConfig = DEFAULT):
    """Membership in ``D_s`` or ``D_{s,t}``.

    For ``t = inf`` the upper bound is replaced by excluding the curve
    ``1 + u^2 - v^2 = 0``.
    """
    u, v = _split(u, v)
    q = np.abs(_quad(u, v))
    h = _herm(u, v)
    m = np.minimum(_slack(params.s * q, h), _slack(0.0, _orient(u, v)))
    if params.t is not None:
        if math.isinf(params.t):
            m = np.minimum(m, _slack(0.0, q))
        else:
            m = np.minimum(m, _slack(h, params.t * q))
    return margin_to_tri(m, cfg), _unwrap(m)


def membership_dc(u, v=None, c=2.0, cfg: ToleranceConfig = DEFAULT):
    """Membership in ``D_c``; ``c`` may be an array broadcasting against the point."""
    c = np.asarray(c, dtype=float)
    if not np.all(c >= 1):
        raise ValueError(f"D_c needs c >= 1, got {c!r}")
    u, v = _split(u, v)
    m = np.minimum(_slack(c * np.abs(_quad(u, v)), _herm(u, v)), _slack(0.0, _orient(u, v)))
    return margin_to_tri(m, cfg), _unwrap(m)


def dc_threshold(u, v=None):
    """Largest c with ``(u, v)`` in the closure of ``D_c``; inf on the curve eta_0."""
    u, v = _split(u, v)
    q = np.abs(_quad(u, v))
    with np.errstate(divide="ignore", over="ignore"):
        return _unwrap(np.where(q > 0, _herm(u, v) / np.where(q > 0, q, 1.0), np.inf))


def eta_index(u, v=None, cfg: ToleranceConfig = DEFAULT, check: bool = True):
    """The c with ``(u, v)`` on the orbit ``eta_c``: ``|1 + u^2 - v^2| / (1 + |u|^2 - |v|^2)``."""
    u, v = _split(u, v)
    if check:
        tri, _ = membership_d1(np.atleast_1d(u), np.atleast_1d(v), 1, cfg)
        if np.any(tri != Tri.INSIDE):
            raise DomainError("eta_index needs an interior point of D1")
    return _unwrap(np.abs(_quad(u, v)) / _herm(u, v))


def membership_omega1(u, v=None, cfg: ToleranceConfig = DEFAULT):
    """``|u^2| + |v^2| - 1 < |u^2 + v^2 - 1|``."""
    u, v = _split(u, v)
    m = _slack(np.abs(u) ** 2 + np.abs(v) ** 2 - 1, np.abs(u * u + v * v - 1))
    return margin_to_tri(m, cfg), _unwrap(m)


def membership_d2_1(point: ProjPoint3, cfg: ToleranceConfig = DEFAULT):
    """Membership in D1^(2), split on the chart ``x0 != 0`` versus ``x0 = 0``."""
    x = ProjPoint3(*point).array()
    norm = np.abs(x).max(axis=0)
    if np.any(norm == 0):
        raise DomainError("the zero vector is not a projective point")
    chart1 = np.abs(x[0]) > cfg.boundary_band * norm
    x0 = np.where(chart1, x[0], norm)
    t, u, v = x[1] / x0, x[2] / x0, x[3] / x0
    size = np.abs(t) ** 2 + np.abs(u) ** 2 + np.abs(v) ** 2
    eq = np.where(
        chart1,
        np.abs(t * t + u * u - v * v - 1) / (1 + size),
        np.abs(t * t + u * u - v * v) / size,
    )
    orient = _slack(0.0, (u * (t.conjugate() + v.conjugate())).imag)
    herm = np.where(chart1, _slack(1.0, np.abs(t) ** 2 + np.abs(u) ** 2 - np.abs(v) ** 2), np.inf)
    m = np.minimum(orient, herm)
    m = np.where(eq <= cfg.eq_tol, m, np.minimum(m, -eq))
    return margin_to_tri(m, cfg), _unwrap(m)


# -- SO(2,1)^0 ---------------------------------------------------------------

ETA = np.diag([1.0, 1.0, -1.0])


@dataclass(frozen=True, eq=False)
class SO21Element:
    """A 3x3 real matrix preserving ``x0^2 + x1^2 - x2^2`` with determinant 1.

    Identity-component membership is only certified for products of
    ``so21_generator`` outputs; arbitrary matrices are checked for the
    form and determinant alone.
    """

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        if m.shape != (3, 3):
            raise ValueError("SO(2,1) element must be 3x3")
        if so21_residual(m) > 1e-9 * (1 + np.abs(m).max() ** 2):
            raise DomainError("matrix does not preserve diag(1, 1, -1)")
        if abs(np.linalg.det(m) - 1) > 1e-9 * (1 + np.abs(m).max() ** 3):
            raise DomainError("matrix does not have determinant 1")
        object.__setattr__(self, "m", m)

    def __matmul__(self, other: "SO21Element") -> "SO21Element":
        return SO21Element(self.m @ other.m)

    def __call__(self, z1, z2=None, cfg: ToleranceConfig = DEFAULT):
        return so21_act(self, z1, z2, cfg)


def so21_residual(m) -> float:
    m = np.asarray(m, dtype=float)
    return float(np.abs(m.T @ ETA @ m - ETA).max())


def so21_generator(kind: str, t: float) -> SO21Element:
    """One-parameter subgroups: ``rot01``, ``boost02`` and ``boost12``."""
    c, s = math.cos(t), math.sin(t)
    ch, sh = math.cosh(t), math.sinh(t)
    if kind == "rot01":
        m = [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
    elif kind == "boost02":
        m = [[ch, 0.0, sh], [0.0, 1.0, 0.0], [sh, 0.0, ch]]
    elif kind == "boost12":
        m = [[1.0, 0.0, 0.0], [0.0, ch, sh], [0.0, sh, ch]]
    else:
        raise ValueError(f"unknown generator {kind!r}")
    return SO21Element(np.array(m))


def so21_act(g: SO21Element, z1, z2=None, cfg: ToleranceConfig = DEFAULT):
    """Fractional-linear action on ``(z1, z2)`` through homogeneous ``(1, z1, z2)``."""
    z1, z2 = _split(z1, z2)
    a = g.m if isinstance(g, SO21Element) else np.asarray(g, dtype=float)
    den = a[0, 0] + a[0, 1] * z1 + a[0, 2] * z2
    if np.any(np.abs(den) <= cfg.boundary_band):
        raise DomainError("singular denominator in the SO(2,1) action")
    w1 = (a[1, 0] + a[1, 1] * z1 + a[1, 2] * z2) / den
    w2 = (a[2, 0] + a[2, 1] * z1 + a[2, 2] * z2) / den
    return D1Point(_unwrap(w1), _unwrap(w2))
