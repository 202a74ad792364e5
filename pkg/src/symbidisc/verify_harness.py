"""Seeded property suites and machine-readable certificates.

Every suite draws its samples in chunks of ``CHUNK`` points; chunk ``k`` of
suite ``name`` uses a PCG64 generator seeded with
``SeedSequence([seed, crc32(name), k])``.  Results therefore depend only on
``(name, n, seed)`` and reductions are maxima or counts, so the order in
which chunks run does not matter.

Suites that check a single residual report it as ``max_violation`` against
their own tolerance.  Composite suites report ``max(residual_i / tol_i)``
plus the number of failed predicates, so they pass when the value is at
most 1.  Samples whose decisive margin is within ``SKIP_FACTOR *
boundary_band`` of zero are counted as skipped.
"""

from __future__ import annotations

import json
import math
import time
import zlib
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from symbidisc.biholomorphisms import (
    diagram_residuals,
    map_F,
    map_F_inv,
    map_H,
    map_H_inv,
    map_J,
    map_J_inv,
    sym_omega1,
)
from symbidisc.complex_core import (
    DEFAULT,
    ToleranceConfig,
    Tri,
    margin_to_tri,
    rel_residual,
    solve_quadratic,
    sqrt_slit,
)
from symbidisc.disc_geometry import DiscAutomorphism, disc_apply, mobius_distance
from symbidisc.isaev_domains import (
    ProjPoint3,
    d1_margin,
    dc_threshold,
    eta_index,
    membership_d1,
    membership_d2_1,
    membership_dc,
    membership_omega1,
    so21_act,
    so21_generator,
    so21_residual,
)
from symbidisc.levi_analysis import (
    cauchy_riemann_residual,
    check_f_submersion,
    f_partials,
    g_a,
    grad_g_a,
    jacobian_sym_det,
    leaf_point,
    levi_matrix,
    levi_matrix_fd,
    levi_values,
    pushforward_levi,
    wirtinger_fd,
)
from symbidisc.symmetrized_bidisc import (
    apply_H,
    apply_H_params,
    automorphisms_between,
    g_margin,
    gc_threshold,
    leaf_index,
    membership_g,
    membership_gc,
    orbit_path,
    recover_automorphism,
    reindex_a_to_b,
    reindex_b_to_a,
    rng_for,
    sample_disc,
    sym,
    sym_inverse,
)

CHUNK = 50_000
SKIP_FACTOR = 10.0
MAX_SKIP_FRACTION = 0.01


@dataclass(frozen=True)
class SuiteResult:
    suite_name: str
    n_samples: int
    n_skipped_boundary: int
    max_violation: float
    tolerance: float
    passed: bool
    seed: int
    elapsed: float = 0.0
    details: dict = field(default_factory=dict)

    def to_record(self, include_elapsed: bool = False) -> dict:
        rec = {
            "suite_name": self.suite_name,
            "n_samples": self.n_samples,
            "n_skipped_boundary": self.n_skipped_boundary,
            "max_violation": _jsonable(self.max_violation),
            "tolerance": _jsonable(self.tolerance),
            "pass": self.passed,
            "seed": self.seed,
            "details": {k: _jsonable(v) for k, v in sorted(self.details.items())},
        }
        if include_elapsed:
            rec["elapsed"] = self.elapsed
        return rec

    def to_json(self, include_elapsed: bool = False) -> str:
        return json.dumps(self.to_record(include_elapsed), sort_keys=True)


def _jsonable(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    return x if math.isfinite(x) else repr(x)


class Outcome(NamedTuple):
    violation: float
    n_samples: int
    n_skipped: int = 0
    details: dict = {}


@dataclass(frozen=True)
class Suite:
    name: str
    check: Callable[[int, int, ToleranceConfig], Outcome]
    default_n: int
    tolerance: float


REGISTRY: dict[str, Suite] = {}


def _suite(name: str, default_n: int, tolerance: float):
    def register(fn):
        REGISTRY[name] = Suite(name, fn, default_n, tolerance)
        return fn

    return register


def _chunks(name: str, n: int, seed: int):
    key = zlib.crc32(name.encode())
    for k, start in enumerate(range(0, n, CHUNK)):
        yield rng_for(seed, key, k), min(CHUNK, n - start)


def _worst(*values) -> float:
    out = 0.0
    for v in values:
        v = np.asarray(v, dtype=float)
        if v.size:
            if np.any(np.isnan(v)):
                return math.inf
            out = max(out, float(v.max()))
    return out


# -- samplers ---------------------------------------------------------------

def _g_points(rng, m, radius=1.0):
    z1 = sample_disc(rng, m, radius)
    z2 = sample_disc(rng, m, radius)
    return z1, z2


def _automorphisms(rng, m, rmax=0.95):
    theta = rng.uniform(-math.pi, math.pi, m)
    return theta, sample_disc(rng, m, rmax)


def _box(rng, m, w=3.0):
    x = rng.uniform(-w, w, (4, m))
    return x[0] + 1j * x[1], x[2] + 1j * x[3]


def _leaf_samples(rng, m):
    a = rng.uniform(0.05, 0.95, m)
    theta, alpha = _automorphisms(rng, m)
    z1, z2 = leaf_point(a, theta, alpha)
    return a, z1, z2


# -- complex_core -----------------------------------------------------------

@_suite("quadratic-vieta", 100_000, DEFAULT.eq_tol)
def _quadratic_vieta(n, seed, cfg):
    worst = 0.0
    for rng, m in _chunks("quadratic-vieta", n, seed):
        a = rng.uniform(0.1, 1.0, m) * np.exp(1j * rng.uniform(-math.pi, math.pi, m))
        b, c = _box(rng, m, 2.0)
        r1, r2 = solve_quadratic(a, b, c)
        worst = max(worst, _worst(
            np.abs(a * (r1 + r2) + b) / (1 + np.abs(b)),
            np.abs(a * r1 * r2 - c) / (1 + np.abs(c)),
        ))
    return Outcome(worst, n)


@_suite("sqrt-slit", 100_000, DEFAULT.eq_tol)
def _sqrt_slit(n, seed, cfg):
    worst, bad = 0.0, 0
    for rng, m in _chunks("sqrt-slit", n, seed):
        r = 10.0 ** rng.uniform(-3, 3, m)
        phi = rng.uniform(-1, 1, m) * math.acos(-0.99)
        w = r * np.exp(1j * phi)
        root = sqrt_slit(w, cfg)
        worst = max(worst, _worst(np.abs(root * root - w) / np.abs(w)))
        bad += int(np.count_nonzero(root.real <= 0))
    return Outcome(worst + bad, n, details={"non_positive_real_part": bad})


# -- disc_geometry ----------------------------------------------------------

@_suite("mobius-invariance", 100_000, DEFAULT.eq_tol)
def _mobius_invariance(n, seed, cfg):
    worst, escaped = 0.0, 0
    for rng, m in _chunks("mobius-invariance", n, seed):
        theta, alpha = _automorphisms(rng, m)
        z1, z2 = _g_points(rng, m)
        w1, w2 = disc_apply(theta, alpha, z1), disc_apply(theta, alpha, z2)
        escaped += int(np.count_nonzero((np.abs(w1) >= 1) | (np.abs(w2) >= 1)))
        worst = max(worst, _worst(np.abs(mobius_distance(w1, w2) - mobius_distance(z1, z2))))
    return Outcome(worst + escaped, n, details={"left_disc": escaped})


@_suite("disc-group", 1_000, 1.0)
def _disc_group(n, seed, cfg):
    worst = 0.0
    for rng, m in _chunks("disc-group", n, seed):
        theta, alpha = _automorphisms(rng, 3 * m, 0.9)
        z = sample_disc(rng, 20, 0.99)
        ident = DiscAutomorphism.identity()
        for k in range(m):
            f, g, h = (DiscAutomorphism(theta[3 * k + j], alpha[3 * k + j]) for j in range(3))
            ref = f(z)
            worst = max(worst, _worst(
                np.abs(f.compose(g).compose(h)(z) - f.compose(g.compose(h))(z)),
                np.abs(f.compose(ident)(z) - ref),
                np.abs(ident.compose(f)(z) - ref),
                np.abs(f.compose(f.invert())(z) - z),
                np.abs(f.invert().compose(f)(z) - z),
            ))
    return Outcome(worst / cfg.eq_tol, n)


# -- symmetrized_bidisc -----------------------------------------------------

def _nine_way(margins, cfg):
    band = SKIP_FACTOR * cfg.boundary_band
    skip = np.any(np.abs(margins) <= band, axis=0)
    sign = margins > 0
    agree = np.all(sign == sign[0], axis=0)
    keep = ~skip
    return (
        int(np.count_nonzero(keep & ~agree)),
        int(np.count_nonzero(skip)),
        int(np.count_nonzero(keep & agree & sign[0])),
    )


@_suite("membership-9way-G", 1_000_000, 0.0)
def _membership_9way_g(n, seed, cfg):
    bad = skipped = inside = 0
    for rng, m in _chunks("membership-9way-G", n, seed):
        s, p = _box(rng, m)
        margins = np.stack([g_margin(s, p, k) for k in range(1, 10)])
        b, sk, ins = _nine_way(margins, cfg)
        bad, skipped, inside = bad + b, skipped + sk, inside + ins
    return Outcome(bad, n, skipped, {"disagreements": bad, "inside": inside})


def _d1_mixture(rng, m):
    """Box points, F-images of G and F-images of exterior points with |p| < 1."""
    k = m // 3
    u0, v0 = _box(rng, m - 2 * k)
    z1, z2 = _g_points(rng, k)
    u1, v1 = map_F(*sym(z1, z2), check=False)
    s2 = rng.uniform(-3, 3, k) + 1j * rng.uniform(-3, 3, k)
    p2 = sample_disc(rng, k, 1 - 1e-6)
    u2, v2 = map_F(s2, p2, check=False)
    return np.concatenate([u0, u1, u2]), np.concatenate([v0, v1, v2])


@_suite("membership-9way-D1", 1_000_000, 0.0)
def _membership_9way_d1(n, seed, cfg):
    bad = skipped = inside = 0
    for rng, m in _chunks("membership-9way-D1", n, seed):
        u, v = _d1_mixture(rng, m)
        margins = np.stack([d1_margin(u, v, k) for k in range(1, 10)])
        b, sk, ins = _nine_way(margins, cfg)
        bad, skipped, inside = bad + b, skipped + sk, inside + ins
    return Outcome(bad, n, skipped, {"disagreements": bad, "inside": inside})


@_suite("q-invariance", 100_000, DEFAULT.eq_tol)
def _q_invariance(n, seed, cfg):
    worst = 0.0
    for rng, m in _chunks("q-invariance", n, seed):
        s, p = sym(*_g_points(rng, m))
        theta, alpha = _automorphisms(rng, m, 0.9)
        s2, p2 = apply_H_params(theta, alpha, s, p)
        worst = max(worst, _worst(np.abs(leaf_index(s2, p2, check=False) - leaf_index(s, p, check=False))))
    return Outcome(worst, n)


@_suite("roundtrip-sym", 100_000, DEFAULT.eq_tol)
def _roundtrip_sym(n, seed, cfg):
    worst = 0.0
    for rng, m in _chunks("roundtrip-sym", n, seed):
        z1, z2 = _g_points(rng, m)
        s, p = sym(z1, z2)
        r1, r2 = sym_inverse(s, p, cfg)
        s2, p2 = sym(r1, r2)
        same = np.maximum(rel_residual(r1, z1), rel_residual(r2, z2))
        swapped = np.maximum(rel_residual(r1, z2), rel_residual(r2, z1))
        worst = max(worst, _worst(rel_residual(s2, s), rel_residual(p2, p), np.minimum(same, swapped)))
    return Outcome(worst, n)


@_suite("two-automorphisms", 1_000, 1.0)
def _two_automorphisms(n, seed, cfg):
    worst, bad = 0.0, 0
    for rng, m in _chunks("two-automorphisms", n, seed):
        a = rng.uniform(0.05, 0.95, m)
        th, al = _automorphisms(rng, 2 * m, 0.9)
        probe = sym(*_g_points(rng, 8, 0.9))
        for k in range(m):
            g = sym(*leaf_point(a[k], th[2 * k], al[2 * k]))
            h = sym(*leaf_point(a[k], th[2 * k + 1], al[2 * k + 1]))
            phis = automorphisms_between(g, h, cfg)
            for phi in phis:
                worst = max(worst, _worst(rel_residual(np.array(apply_H(phi, g, cfg=cfg)), np.array(h))))
            first = np.array(apply_H(phis[0], probe, cfg=cfg))
            second = np.array(apply_H(phis[1], probe, cfg=cfg))
            if np.max(np.abs(first - second)) <= 1e-6:
                bad += 1
    return Outcome(worst / cfg.eq_tol + bad, n, details={"coinciding_pairs": bad})


@_suite("royal-invariance", 100_000, DEFAULT.eq_tol)
def _royal_invariance(n, seed, cfg):
    # the leaf index is a square root and loses half its digits at 0, so
    # test the royal equation s^2 = 4p instead
    worst = 0.0
    for rng, m in _chunks("royal-invariance", n, seed):
        z = sample_disc(rng, m)
        theta, alpha = _automorphisms(rng, m)
        s, p = apply_H_params(theta, alpha, 2 * z, z * z)
        worst = max(worst, _worst(np.abs(s * s - 4 * p) / (1 + np.abs(s) ** 2)))
    return Outcome(worst, n)


@_suite("reindex-ab", 10_000, 1.0)
def _reindex_ab(n, seed, cfg):
    a = (np.arange(n) + 0.5) / n
    roundtrip = _worst(np.abs(reindex_b_to_a(reindex_a_to_b(a)) - a))
    k = max(1, n // 10)
    worst_h = 0.0
    for ak in np.linspace(0.0, 0.99, k):
        b = float(reindex_a_to_b(ak))
        s, p = apply_H(DiscAutomorphism.blaschke_at(b), ak, 0.0, cfg=cfg)
        worst_h = max(worst_h, abs(s), abs(p + b * b))
    return Outcome(
        max(roundtrip / 1e-14, worst_h / 1e-11),
        n,
        details={"roundtrip": roundtrip, "blaschke_image": worst_h},
    )


@_suite("orbit-path", 1_000, 1e-10)
def _orbit_path(n, seed, cfg):
    worst = 0.0
    for rng, m in _chunks("orbit-path", n, seed):
        a = rng.uniform(0.05, 0.95, m)
        a[::10] = 0.0
        theta, alpha = _automorphisms(rng, m, 0.9)
        for k in range(m):
            target = sym(*disc_apply(theta[k], alpha[k], np.array([a[k], 0.0])))
            path = orbit_path(a[k], target, 16, cfg)
            pts = np.array(path)
            if a[k] == 0:
                off = np.abs(pts[:, 0] ** 2 - 4 * pts[:, 1]) / (1 + np.abs(pts[:, 0]) ** 2)
            else:
                off = np.abs(leaf_index(pts[:, 0], pts[:, 1], check=False) - a[k])
            worst = max(worst, _worst(
                off,
                rel_residual(pts[0], np.array([a[k], 0.0])),
                rel_residual(pts[-1], np.array(target)),
            ))
    return Outcome(worst, n)


@_suite("recover-automorphism", 10_000, DEFAULT.eq_tol)
def _recover_automorphism(n, seed, cfg):
    worst = 0.0
    for rng, m in _chunks("recover-automorphism", n, seed):
        a = rng.uniform(0.05, 0.95, m)
        theta, alpha = _automorphisms(rng, m, 0.9)
        probe = sample_disc(rng, 8, 0.9)
        for k in range(m):
            psi = DiscAutomorphism(theta[k], alpha[k])
            phi = recover_automorphism(a[k], (psi(a[k]), psi(0.0)), cfg)
            worst = max(worst, _worst(np.abs(phi(probe) - psi(probe))))
    return Outcome(worst, n)


def _bisect_threshold(inside_at, lo, hi, steps=60):
    """Largest c in [lo, hi] with ``inside_at(c)``, bisected in log scale per sample."""
    lo, hi = np.log(lo), np.log(hi)
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        ok = inside_at(np.exp(mid))
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    return np.exp(lo)


@_suite("exhaustion-Gc", 10_000, 0.0)
def _exhaustion_gc(n, seed, cfg):
    bad = skipped = 0
    band = SKIP_FACTOR * cfg.boundary_band
    for rng, m in _chunks("exhaustion-Gc", n, seed):
        s, p = sym(*_g_points(rng, m))
        c_big = rng.uniform(1.0, 10.0, m) + 1e-3
        c_small = 1.0 + (c_big - 1.0) * rng.uniform(0.0, 1.0, m) + 1e-6
        t_big, m_big = membership_gc(s, p, c_big, cfg)
        t_small, m_small = membership_gc(s, p, c_small, cfg)
        t_g, m_g = membership_g(s, p, 4, cfg)
        decided = (np.abs(m_big) > band) & (np.abs(m_small) > band) & (np.abs(m_g) > band)
        skipped += int(np.count_nonzero(~decided))
        nested = (t_big != Tri.INSIDE) | ((t_small == Tri.INSIDE) & (t_g == Tri.INSIDE))
        bad += int(np.count_nonzero(decided & ~nested))
        # every interior point of G sits in some G_c with c > 1
        inner = decided & (t_g == Tri.INSIDE)
        thr = gc_threshold(s[inner], p[inner])
        c_star = _bisect_threshold(
            lambda c: membership_gc(s[inner], p[inner], c, cfg)[0] == Tri.INSIDE,
            np.full(thr.shape, 1.0 + 1e-15), np.full(thr.shape, 1e6),
        )
        finite = thr < 1e5
        bad += int(np.count_nonzero(c_star <= 1.0))
        bad += int(np.count_nonzero(finite & (np.abs(c_star - thr) > 1e-6 * thr)))
    return Outcome(bad, n, skipped, {"failures": bad})


# -- isaev_domains ----------------------------------------------------------

def _d1_points(rng, m, radius=1.0):
    return map_F(*sym(*_g_points(rng, m, radius)), check=False)


@_suite("d1-halfplane", 100_000, 0.0)
def _d1_halfplane(n, seed, cfg):
    bad = 0
    for rng, m in _chunks("d1-halfplane", n, seed):
        u, v = _d1_points(rng, m)
        tri, _ = membership_d1(u, v, 1, cfg)
        u, v = u[tri == Tri.INSIDE], v[tri == Tri.INSIDE]
        on_slit = (np.abs(v.imag) <= cfg.boundary_band) & (np.abs(v.real) >= 1)
        bad += int(np.count_nonzero((u.imag <= 0) | on_slit))
        bad += int(np.count_nonzero(membership_d1(u, np.zeros_like(v), 1, cfg)[0] != Tri.INSIDE))
    return Outcome(bad, n, details={"failures": bad})


@_suite("nesting-Dc", 10_000, 0.0)
def _nesting_dc(n, seed, cfg):
    bad = skipped = 0
    band = SKIP_FACTOR * cfg.boundary_band
    for rng, m in _chunks("nesting-Dc", n, seed):
        u, v = _d1_points(rng, m)
        s_big = rng.uniform(1.0, 10.0, m)
        s_small = 1.0 + (s_big - 1.0) * rng.uniform(0.0, 1.0, m)
        t_big, m_big = membership_dc(u, v, s_big, cfg)
        t_small, m_small = membership_dc(u, v, s_small, cfg)
        decided = (np.abs(m_big) > band) & (np.abs(m_small) > band)
        skipped += int(np.count_nonzero(~decided))
        bad += int(np.count_nonzero(decided & (t_big == Tri.INSIDE) & (t_small != Tri.INSIDE)))
        t1, m1 = membership_d1(u, v, 1, cfg)
        inner = (t1 == Tri.INSIDE) & (np.abs(m1) > band)
        thr = dc_threshold(u[inner], v[inner])
        c_star = _bisect_threshold(
            lambda c: membership_dc(u[inner], v[inner], c, cfg)[0] == Tri.INSIDE,
            np.full(thr.shape, 1.0 + 1e-15), np.full(thr.shape, 1e6),
        )
        finite = thr < 1e5
        bad += int(np.count_nonzero(c_star <= 1.0))
        bad += int(np.count_nonzero(finite & (np.abs(c_star - thr) > 1e-6 * thr)))
    return Outcome(bad, n, skipped, {"failures": bad})


_GENERATORS = ("rot01", "boost02", "boost12")


@_suite("so21-invariance", 100_000, 1.0)
def _so21_invariance(n, seed, cfg):
    worst_eta = worst_form = 0.0
    bad = skipped = 0
    band = SKIP_FACTOR * cfg.boundary_band
    per_element = 100
    for rng, m in _chunks("so21-invariance", n, seed):
        u, v = _d1_points(rng, m, 0.9)
        eta = eta_index(u, v, cfg, check=False)
        for start in range(0, m, per_element):
            kinds = rng.integers(0, 3, 3)
            params = rng.uniform(-1.0, 1.0, 3)
            g = so21_generator(_GENERATORS[kinds[0]], params[0])
            for kind, t in zip(kinds[1:], params[1:]):
                g = g @ so21_generator(_GENERATORS[kind], t)
            worst_form = max(worst_form, so21_residual(g.m))
            sl = slice(start, start + per_element)
            w1, w2 = so21_act(g, u[sl], v[sl], cfg)
            tri, margin = membership_d1(w1, w2, 1, cfg)
            skipped += int(np.count_nonzero(np.abs(margin) <= band))
            bad += int(np.count_nonzero((np.abs(margin) > band) & (tri != Tri.INSIDE)))
            worst_eta = max(worst_eta, _worst(np.abs(eta_index(w1, w2, cfg, check=False) - eta[sl])))
    return Outcome(
        max(worst_eta / 1e-10, worst_form / 1e-12) + bad,
        n,
        skipped,
        {"eta_drift": worst_eta, "form_residual": worst_form, "left_domain": bad},
    )


def _omega1_points(rng, m):
    return map_H(*_g_points(rng, m), check=False)


@_suite("slit-plane", 100_000, 0.0)
def _slit_plane(n, seed, cfg):
    bad, closest = 0, math.inf
    for rng, m in _chunks("slit-plane", n, seed):
        u, v = _omega1_points(rng, m)
        tri, _ = membership_omega1(u, v, cfg)
        w = 1 - u * u - v * v
        dist = np.where(w.real <= 0, np.abs(w.imag), np.abs(w))
        closest = min(closest, float(dist.min()))
        bad += int(np.count_nonzero(tri != Tri.INSIDE))
        bad += int(np.count_nonzero(dist <= cfg.boundary_band))
    return Outcome(bad, n, details={"closest_to_cut": closest})


# -- biholomorphisms --------------------------------------------------------

@_suite("roundtrip-F", 100_000, 1.0)
def _roundtrip_f(n, seed, cfg):
    worst, bad, low = 0.0, 0, math.inf
    for rng, m in _chunks("roundtrip-F", n, seed):
        s, p = sym(*_g_points(rng, m))
        u, v = map_F(s, p, check=False)
        tri, margin = membership_d1(u, v, 1, cfg)
        low = min(low, float(margin.min()))
        bad += int(np.count_nonzero(tri != Tri.INSIDE))
        s2, p2 = map_F_inv(u, v, check=False)
        bad += int(np.count_nonzero(membership_g(s2, p2, 4, cfg)[0] != Tri.INSIDE))
        u2, v2 = map_F(s2, p2, check=False)
        worst = max(worst, _worst(
            rel_residual(s2, s), rel_residual(p2, p), rel_residual(u2, u), rel_residual(v2, v)
        ))
    return Outcome(worst / 1e-11 + bad, n, details={"roundtrip": worst, "min_d1_margin": low})


@_suite("membership-transport", 100_000, 0.0)
def _membership_transport(n, seed, cfg):
    bad = skipped = 0
    band = SKIP_FACTOR * cfg.boundary_band
    for rng, m in _chunks("membership-transport", n, seed):
        s1, p1 = sym(*_g_points(rng, m))
        s2 = rng.uniform(-3, 3, m) + 1j * rng.uniform(-3, 3, m)
        p2 = sample_disc(rng, m, 1 - 1e-6)
        s, p = np.concatenate([s1, s2]), np.concatenate([p1, p2])
        tg, mg = membership_g(s, p, 4, cfg)
        td, md = membership_d1(*map_F(s, p, check=False), 1, cfg)
        keep = (np.abs(mg) > band) & (np.abs(md) > band)
        skipped += int(np.count_nonzero(~keep))
        bad += int(np.count_nonzero(keep & ((tg == Tri.INSIDE) != (td == Tri.INSIDE))))
    return Outcome(bad, 2 * n, skipped, {"mismatches": bad})


@_suite("roundtrip-H", 100_000, DEFAULT.eq_tol)
def _roundtrip_h(n, seed, cfg):
    worst = 0.0
    for rng, m in _chunks("roundtrip-H", n, seed):
        z, w = _g_points(rng, m)
        z2, w2 = map_H_inv(*map_H(z, w, check=False), cfg=cfg, check=False)
        worst = max(worst, _worst(rel_residual(z2, z), rel_residual(w2, w)))
    return Outcome(worst, n)


@_suite("roundtrip-J", 100_000, 1.0)
def _roundtrip_j(n, seed, cfg):
    worst, bad = 0.0, 0
    for rng, m in _chunks("roundtrip-J", n, seed):
        z, w = _g_points(rng, m)
        w[::20] = z[::20]  # the chart x0 = 0
        image = map_J(z, w, check=False)
        bad += int(np.count_nonzero(membership_d2_1(image, cfg)[0] != Tri.INSIDE))
        z2, w2 = map_J_inv(image, cfg, check=False)
        worst = max(worst, _worst(rel_residual(z2, z), rel_residual(w2, w)))
    return Outcome(worst / cfg.eq_tol + bad, n, details={"roundtrip": worst, "outside_image": bad})


def _diagram_suite(name, which):
    @_suite(name, 100_000, 1e-10)
    def run(n, seed, cfg):
        worst = 0.0
        for rng, m in _chunks(name, n, seed):
            z, w = _g_points(rng, m)
            worst = max(worst, _worst(diagram_residuals(which, z, w, cfg)))
        return Outcome(worst, n)

    return run


_diagram_suite("diagram-omega1", "omega1")
_diagram_suite("diagram-d21", "d2_1")


@_suite("sym-omega1-fibres", 100_000, 1.0)
def _sym_omega1_fibres(n, seed, cfg):
    worst, bad = 0.0, 0
    for rng, m in _chunks("sym-omega1-fibres", n, seed):
        z, w = _g_points(rng, m)
        w[::10] = z[::10]  # u = 0: a one-point fibre
        u, v = map_H(z, w, check=False)
        U, V = sym_omega1(u, v, cfg, check=False)
        # preimages of (U, V) are (x, V) with x^2 = 1 - V^2 + U^2
        scale = 1 + np.abs(U) ** 2 + np.abs(V) ** 2
        x2 = 1 - V * V + U * U
        single = np.abs(x2) <= cfg.eq_tol * scale
        expect_single = np.abs(u) <= cfg.boundary_band
        bad += int(np.count_nonzero(single != expect_single))
        other = np.where(expect_single, u, -u)
        bad += int(np.count_nonzero(membership_omega1(other, v, cfg)[0] != Tri.INSIDE))
        U2, V2 = sym_omega1(other, v, cfg, check=False)
        worst = max(worst, _worst(
            np.abs(x2 - u * u) / scale, rel_residual(U2, U), rel_residual(V2, V)
        ))
    return Outcome(worst / cfg.eq_tol + bad, n, details={"fibre_mismatches": bad})


# -- levi_analysis ----------------------------------------------------------

@_suite("levi-closed-form", 100_000, 1e-9)
def _levi_closed_form(n, seed, cfg):
    worst, off_leaf = 0.0, 0
    for rng, m in _chunks("levi-closed-form", n, seed):
        a, z1, z2 = _leaf_samples(rng, m)
        off_leaf += int(np.count_nonzero(np.abs(g_a(z1, z2, a)) > cfg.eq_tol * (1 + a * a)))
        D, closed, _ = levi_values(z1, z2, a)
        worst = max(worst, _worst(np.abs(D - closed) / (1 + np.abs(D))))
    return Outcome(math.inf if off_leaf else worst, n, details={"off_leaf": off_leaf})


@_suite("levi-positivity", 100_000, 0.0)
def _levi_positivity(n, seed, cfg):
    lowest = math.inf
    for rng, m in _chunks("levi-positivity", n, seed):
        a, z1, z2 = _leaf_samples(rng, m)
        D, _, _ = levi_values(z1, z2, a)
        lowest = min(lowest, float(D.min()))
    return Outcome(-lowest, n, details={"min_levi_value": lowest})


@_suite("levi-pushforward", 10_000, 1.0)
def _levi_pushforward(n, seed, cfg):
    swap_gap = fd_gap = 0.0
    bad = 0
    for rng, m in _chunks("levi-pushforward", n, seed):
        a, z1, z2 = _leaf_samples(rng, m)
        D, _, u = levi_values(z1, z2, a)
        D_sw, _, u_sw = levi_values(z2, z1, a)
        bad += int(np.count_nonzero((D <= 0) | (D_sw <= 0)))
        unit, unit_sw = D / (1 + np.abs(u) ** 2), D_sw / (1 + np.abs(u_sw) ** 2)
        swap_gap = max(swap_gap, _worst(rel_residual(unit, unit_sw)))
        fd_gap = max(fd_gap, _worst(rel_residual(pushforward_levi(z1, z2, a), D)))
    return Outcome(
        max(swap_gap / cfg.eq_tol, fd_gap / 1e-5) + bad,
        n,
        details={"swap_gap": swap_gap, "fd_gap": fd_gap, "non_positive": bad},
    )


@_suite("levi-fd", 10_000, 1.0)
def _levi_fd(n, seed, cfg):
    grad_gap = hess_gap = 0.0
    for rng, m in _chunks("levi-fd", n, seed):
        z1, z2 = _g_points(rng, m, 0.95)
        a = rng.uniform(0.05, 0.95, m)

        def g(x):
            return g_a(x[0], x[1], a)

        dz, _ = wirtinger_fd(g, np.array([z1, z2]), cfg.fd_step)
        d1, d2 = grad_g_a(z1, z2, a)
        grad_gap = max(grad_gap, _worst(rel_residual(dz[0, 0], d1), rel_residual(dz[0, 1], d2)))
        fd_hess = np.moveaxis(levi_matrix_fd(g, np.array([z1, z2]), math.sqrt(cfg.fd_step)), (0, 1), (-2, -1))
        hess_gap = max(hess_gap, _worst(rel_residual(fd_hess, levi_matrix(z1, z2, a))))
    return Outcome(
        max(grad_gap / 1e-6, hess_gap / 1e-5),
        n,
        details={"gradient_gap": grad_gap, "hessian_gap": hess_gap},
    )


@_suite("jacobian-det", 10_000, 1e-5)
def _jacobian_det(n, seed, cfg):
    worst = 0.0
    for rng, m in _chunks("jacobian-det", n, seed):
        z1, z2 = _g_points(rng, m)
        ref = np.abs(z1 - z2) ** 2
        worst = max(worst, _worst(np.abs(jacobian_sym_det(z1, z2, cfg) - ref) / ref))
    return Outcome(worst, n)


@_suite("submersion-f", 10_000, 1.0)
def _submersion_f(n, seed, cfg):
    worst, bad = 0.0, 0
    h = cfg.fd_step
    for rng, m in _chunks("submersion-f", n, seed):
        z1, z2 = _g_points(rng, m)
        norm, indicator = check_f_submersion(z1, z2, cfg)
        bad += int(np.count_nonzero((norm <= 0) | (indicator <= cfg.boundary_band)))
        analytic = f_partials(z1, z2)
        steps = ((h, 0), (1j * h, 0), (0, h), (0, 1j * h))
        for exact, (e1, e2) in zip(analytic, steps):
            fd = (mobius_distance(z1 + e1, z2 + e2) - mobius_distance(z1 - e1, z2 - e2)) / (2 * h)
            worst = max(worst, _worst(rel_residual(fd, exact)))
    return Outcome(worst / 1e-5 + bad, n, details={"fd_gap": worst, "degenerate": bad})


_CR_MAPS = ("F", "H", "J-chart", "sym")


@_suite("cr-residuals", 1_000, 1.0)
def _cr_residuals(n, seed, cfg):
    worst, control = 0.0, math.inf
    for rng, m in _chunks("cr-residuals", n, seed):
        z1, z2 = _g_points(rng, m, 0.9)
        s, p = sym(z1, z2)
        for k in range(m):
            bidisc = (z1[k], z2[k])
            worst = max(worst, cauchy_riemann_residual("F", (s[k], p[k]), cfg))
            for name in _CR_MAPS[1:]:
                worst = max(worst, cauchy_riemann_residual(name, bidisc, cfg))
            control = min(control, cauchy_riemann_residual("conj", bidisc, cfg))
    return Outcome(
        max(worst / 1e-7, 0.5 / control if control > 0 else math.inf),
        n,
        details={"holomorphic_max": worst, "control_min": control},
    )


# -- the harness itself and the CLI ----------------------------------------

@_suite("determinism", 1_000, 0.0)
def _determinism(n, seed, cfg):
    mismatches = 0
    for name in ("q-invariance", "membership-9way-G", "levi-pushforward"):
        first = run_suite(name, n, seed, cfg).to_json()
        second = run_suite(name, n, seed, cfg).to_json()
        mismatches += first != second
    return Outcome(mismatches, 3, details={"mismatches": mismatches})


@_suite("registry-coverage", 1, 0.0)
def _registry_coverage(n, seed, cfg):
    problems = sum(1 for inv in INVARIANTS if inv.suite not in REGISTRY)
    keys = [(inv.module, inv.text) for inv in INVARIANTS]
    problems += len(keys) - len(set(keys))
    problems += sum(1 for name in SPEC_SUITES if name not in REGISTRY)
    return Outcome(problems, len(INVARIANTS), details={"problems": problems})


@_suite("cli-contract", 1, 0.0)
def _cli_contract(n, seed, cfg):
    from symbidisc.cli import contract_failures

    failures = contract_failures(seed)
    return Outcome(len(failures), 1, details={"failures": len(failures)})


# -- invariants ownership ---------------------------------------------------

SPEC_SUITES = (
    "membership-9way-G", "membership-9way-D1", "q-invariance", "diagram-omega1",
    "diagram-d21", "levi-closed-form", "levi-positivity", "jacobian-det",
    "submersion-f", "so21-invariance", "slit-plane", "roundtrip-F", "roundtrip-H",
    "roundtrip-J", "exhaustion-Gc", "reindex-ab", "orbit-path",
    "recover-automorphism", "cr-residuals",
)


class Invariant(NamedTuple):
    module: str
    text: str
    suite: str


INVARIANTS = (
    Invariant("complex_core", "solve_quadratic satisfies Vieta's relations", "quadratic-vieta"),
    Invariant("complex_core", "sqrt_slit squares back to its argument", "sqrt-slit"),
    Invariant("complex_core", "sqrt_slit lands in the right half-plane", "sqrt-slit"),
    Invariant("disc_geometry", "Mobius distance is automorphism invariant", "mobius-invariance"),
    Invariant("disc_geometry", "group axioms for compose/invert/identity", "disc-group"),
    Invariant("disc_geometry", "automorphisms preserve the open disc", "mobius-invariance"),
    Invariant("symmetrized_bidisc", "nine-way agreement of G membership", "membership-9way-G"),
    Invariant("symmetrized_bidisc", "leaf index is invariant under H_phi", "q-invariance"),
    Invariant("symmetrized_bidisc", "sym and sym_inverse are mutually inverse", "roundtrip-sym"),
    Invariant("symmetrized_bidisc", "exactly two automorphisms join two leaf points", "two-automorphisms"),
    Invariant("symmetrized_bidisc", "the royal variety is invariant", "royal-invariance"),
    Invariant("symmetrized_bidisc", "H_{phi_b}(a, 0) = (0, -b^2)", "reindex-ab"),
    Invariant("isaev_domains", "D1 lies in the upper half-plane region", "d1-halfplane"),
    Invariant("isaev_domains", "nine-way agreement of D1 membership", "membership-9way-D1"),
    Invariant("isaev_domains", "SO(2,1) preserves D1 and eta_index", "so21-invariance"),
    Invariant("isaev_domains", "D_s nesting and D1 as a union of D_c", "nesting-Dc"),
    Invariant("isaev_domains", "Omega_1 maps into the slit plane", "slit-plane"),
    Invariant("biholomorphisms", "F and F_inv preserve membership and round-trip", "roundtrip-F"),
    Invariant("biholomorphisms", "H_inv o H is the identity", "roundtrip-H"),
    Invariant("biholomorphisms", "membership transports through F", "membership-transport"),
    Invariant("biholomorphisms", "the Omega_1 square commutes", "diagram-omega1"),
    Invariant("biholomorphisms", "the D1^(2) square commutes", "diagram-d21"),
    Invariant("biholomorphisms", "sym_omega1 fibres have one or two points", "sym-omega1-fibres"),
    Invariant("levi_analysis", "Levi value equals 2 a^2 |u|", "levi-closed-form"),
    Invariant("levi_analysis", "Levi value is positive", "levi-positivity"),
    Invariant("levi_analysis", "Levi form agrees at both preimages and on G", "levi-pushforward"),
    Invariant("levi_analysis", "gradient and Hessian match finite differences", "levi-fd"),
    Invariant("levi_analysis", "sym Jacobian determinant is |z1 - z2|^2", "jacobian-det"),
    Invariant("verify_harness", "certificates are byte-reproducible", "determinism"),
    Invariant("verify_harness", "every invariant has exactly one suite", "registry-coverage"),
    Invariant("cli", "exit codes and output schema are stable", "cli-contract"),
    Invariant("cli", "CSV is locale independent with 17 digits", "cli-contract"),
)


# -- runners ----------------------------------------------------------------

def suite_names() -> list[str]:
    return list(REGISTRY)


def run_suite(name: str, n: int, seed: int, cfg: ToleranceConfig = DEFAULT) -> SuiteResult:
    """Run one registered suite on ``n`` samples; deterministic in ``(name, n, seed)``."""
    try:
        suite = REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown suite {name!r}") from None
    if n < 1:
        raise ValueError("n must be positive")
    start = time.perf_counter()
    out = suite.check(n, seed, cfg)
    elapsed = time.perf_counter() - start
    violation = float(out.violation)
    ok = violation <= suite.tolerance and out.n_skipped < MAX_SKIP_FRACTION * out.n_samples
    return SuiteResult(
        suite_name=name,
        n_samples=int(out.n_samples),
        n_skipped_boundary=int(out.n_skipped),
        max_violation=violation,
        tolerance=suite.tolerance,
        passed=bool(ok),
        seed=seed,
        elapsed=elapsed,
        details=dict(out.details),
    )


def scaled_n(name: str, n_scale: float) -> int:
    return max(1, int(round(REGISTRY[name].default_n * n_scale)))


def run_all(n_scale: float = 1.0, seed: int = 0, cfg: ToleranceConfig = DEFAULT, names=None) -> list[SuiteResult]:
    if not n_scale > 0:
        raise ValueError("n_scale must be positive")
    return [run_suite(name, scaled_n(name, n_scale), seed, cfg) for name in (names or REGISTRY)]


def certificates(results, include_elapsed: bool = False) -> str:
    """One JSON record per line."""
    return "".join(r.to_json(include_elapsed) + "\n" for r in results)
