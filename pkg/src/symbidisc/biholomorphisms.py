"""Explicit biholomorphisms G -> D1, D x D -> Omega_1, D x D -> D1^(2) and the
symmetrisation maps that close the commutative squares with ``sym``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from symbidisc.complex_core import (
    DEFAULT,
    DegenerateError,
    DomainError,
    ToleranceConfig,
    Tri,
    _unwrap,
    as_complex,
    margin_to_tri,
    rel_residual,
    sqrt_slit,
)
from symbidisc.disc_geometry import BidiscPoint
from symbidisc.isaev_domains import (
    D1Point,
    ProjPoint3,
    membership_d1,
    membership_d2_1,
    membership_omega1,
)
from symbidisc.symmetrized_bidisc import GPoint, _roots, _split, membership_g, sample_bidisc, sym


def _require(tri, what):
    if np.any(np.atleast_1d(tri) == Tri.OUTSIDE):
        raise DomainError(f"point is outside {what}")


def _require_bidisc(z, w, cfg):
    m = np.minimum(1 - np.abs(z), 1 - np.abs(w))
    if np.any(margin_to_tri(np.atleast_1d(m), cfg) != Tri.INSIDE):
        raise DomainError("point is outside the bidisc")


def map_F(s, p=None, cfg: ToleranceConfig = DEFAULT, check: bool = True):
    """``F(s, p) = (i (1 + p)/(1 - p), -i s/(1 - p))``, a biholomorphism G -> D1."""
    s, p = _split(s, p)
    if check:
        _require(membership_g(s, p, 4, cfg)[0], "G")
    return D1Point(_unwrap(1j * (1 + p) / (1 - p)), _unwrap(-1j * s / (1 - p)))


def map_F_inv(u, v=None, cfg: ToleranceConfig = DEFAULT, check: bool = True):
    """``p = (u - i)/(u + i)``, ``s = -2v/(u + i)``."""
    u, v = _split(u, v)
    if check:
        _require(membership_d1(u, v, 1, cfg)[0], "D1")
    return GPoint(_unwrap(-2 * v / (u + 1j)), _unwrap((u - 1j) / (u + 1j)))


def map_H(z, w=None, cfg: ToleranceConfig = DEFAULT, check: bool = True):
    """``H(z, w) = ((z - w)/(1 - zw), -i (z + w)/(1 - zw))``, a biholomorphism D x D -> Omega_1."""
    z, w = _split(z, w)
    if check:
        _require_bidisc(z, w, cfg)
    d = 1 - z * w
    return _unwrap((z - w) / d), _unwrap(-1j * (z + w) / d)


def map_H_inv(u, v=None, cfg: ToleranceConfig = DEFAULT, check: bool = True):
    """Preimage of ``(u, v)`` under ``H``.

    Off the lines ``u = +-iv`` the closed-form pair
    ``z = (1 + r)/(u - iv)``, ``w = -(1 + r)/(u + iv)`` with
    ``r = sqrt(1 - u^2 - v^2)`` lies entirely inside or entirely outside the
    disc; outside, ``(-1/w, -1/z)`` is returned instead.  A pair on the
    unit circle is numerically undecidable and refused.
    """
    u, v = _split(u, v)
    if check:
        _require(membership_omega1(u, v, cfg)[0], "Omega_1")
    r = sqrt_slit(1 - u * u - v * v, cfg)
    r = np.asarray(r)
    a = u - 1j * v
    b = u + 1j * v
    band = cfg.boundary_band * (1 + np.abs(u))
    case_plus = np.abs(a) <= band  # u = iv  -> (iv, 0)
    case_minus = np.abs(b) <= band  # u = -iv -> (0, iv)
    generic = ~(case_plus | case_minus)
    sa = np.where(generic, a, 1.0)
    sb = np.where(generic, b, 1.0)
    zf = (1 + r) / sa
    wf = -(1 + r) / sb
    mod = np.abs(zf)
    if np.any(generic & (np.abs(mod - 1) <= cfg.boundary_band)):
        raise DomainError("preimage lies on the unit circle; point is on the boundary of Omega_1")
    inside = mod < 1
    # -1/wf and -1/zf written without the reciprocal
    z = np.where(inside, zf, sb / (1 + r))
    w = np.where(inside, wf, -sa / (1 + r))
    z = np.where(case_plus, 1j * v, np.where(case_minus, 0, z))
    w = np.where(case_plus, 0, np.where(case_minus, 1j * v, w))
    return BidiscPoint(_unwrap(z), _unwrap(w))


def map_J(z, w=None, cfg: ToleranceConfig = DEFAULT, check: bool = True) -> ProjPoint3:
    """``J(z, w) = (z - w : 1 - zw : i(1 + zw) : -i(z + w))``."""
    z, w = _split(z, w)
    if check:
        _require_bidisc(z, w, cfg)
    zw = z * w
    return ProjPoint3(*(_unwrap(c) for c in (z - w, 1 - zw, 1j * (1 + zw), -1j * (z + w))))


def map_J_inv(point: ProjPoint3, cfg: ToleranceConfig = DEFAULT, check: bool = True) -> BidiscPoint:
    """Preimage under ``J``.

    ``(u/t, v/t)`` lies in D1 and pulls back through ``F`` and ``sym`` to an
    unordered pair; in the chart ``x0 = 1`` the ordering is the one with
    ``t (z - w)/(1 - zw) = +1``, in the chart ``x0 = 0`` the pair is diagonal.
    """
    x = ProjPoint3(*point).array()
    if check:
        _require(membership_d2_1(ProjPoint3(*x), cfg)[0], "D1^(2)")
    norm = np.abs(x).max(axis=0)
    chart1 = np.abs(x[0]) > cfg.boundary_band * norm
    if np.any(np.abs(x[1]) <= cfg.boundary_band * norm):
        raise DegenerateError("t = 0 cannot occur on D1^(2)")
    s, p = map_F_inv(x[2] / x[1], x[3] / x[1], cfg, check=False)
    r1, r2 = _roots(np.asarray(s), np.asarray(p))
    t = x[1] / np.where(chart1, x[0], 1.0)
    alpha_dz = t * (r1 - r2) / (1 - r1 * r2)
    keep = np.abs(alpha_dz - 1) <= np.abs(alpha_dz + 1)
    z = np.where(chart1, np.where(keep, r1, r2), s / 2)
    w = np.where(chart1, np.where(keep, r2, r1), s / 2)
    return BidiscPoint(_unwrap(z), _unwrap(w))


def sym_omega1(u, v=None, cfg: ToleranceConfig = DEFAULT, check: bool = True):
    """``(u, v) -> (i sqrt(1 - u^2 - v^2), v)``, proper 2-to-1 onto D1."""
    u, v = _split(u, v)
    if check:
        _require(membership_omega1(u, v, cfg)[0], "Omega_1")
    return D1Point(_unwrap(1j * np.asarray(sqrt_slit(1 - u * u - v * v, cfg))), _unwrap(v))


def sym_d2_1(point: ProjPoint3, cfg: ToleranceConfig = DEFAULT, check: bool = True):
    """``(s : t : u : v) -> (u/t, v/t)``."""
    x = ProjPoint3(*point).array()
    if check:
        _require(membership_d2_1(ProjPoint3(*x), cfg)[0], "D1^(2)")
    if np.any(np.abs(x[1]) <= cfg.boundary_band * np.abs(x).max(axis=0)):
        raise DegenerateError("t = 0 cannot occur on D1^(2)")
    return D1Point(_unwrap(x[2] / x[1]), _unwrap(x[3] / x[1]))


@dataclass(frozen=True)
class DiagramReport:
    max_residual: float
    n_samples: int
    worst_point: BidiscPoint


def diagram_residuals(which: str, z, w, cfg: ToleranceConfig = DEFAULT):
    """Relative gap between the two routes around a commutative square, per sample."""
    z, w = as_complex(z), as_complex(w)
    direct = map_F(*sym(z, w), cfg=cfg, check=False)
    if which == "omega1":
        other = sym_omega1(*map_H(z, w, check=False), cfg=cfg, check=False)
    elif which == "d2_1":
        other = sym_d2_1(map_J(z, w, check=False), cfg=cfg, check=False)
    else:
        raise ValueError(f"unknown diagram {which!r}; expected 'omega1' or 'd2_1'")
    return np.maximum(rel_residual(direct[0], other[0]), rel_residual(direct[1], other[1]))


def check_diagram(which: str, n: int, seed: int, cfg: ToleranceConfig = DEFAULT) -> DiagramReport:
    """Compare ``sym_X o X`` with ``F o sym`` on ``n`` seeded bidisc samples."""
    if n < 1:
        raise ValueError("n must be positive")
    z, w = sample_bidisc(n, seed)
    res = np.atleast_1d(diagram_residuals(which, z, w, cfg))
    k = int(np.argmax(res))
    return DiagramReport(float(res[k]), n, BidiscPoint(complex(z[k]), complex(w[k])))
