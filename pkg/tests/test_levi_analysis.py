import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from symbidisc import (
    DegenerateError,
    DomainError,
    LeviReport,
    cauchy_riemann_residual,
    check_f_submersion,
    g_a,
    grad_g_a,
    jacobian_sym_det,
    levi_matrix,
    levi_value,
)
from symbidisc.levi_analysis import (
    f_partials,
    leaf_point,
    levi_matrix_fd,
    levi_values,
    pushforward_levi,
)

angle = st.floats(-math.pi, math.pi)
disc_pt = st.builds(lambda r, t: r * complex(math.cos(t), math.sin(t)), st.floats(0, 0.95), angle)
leaf_a = st.floats(0.05, 0.95)


def mp_levi_form(z1, z2, a, w):
    """Quarter Laplacian of g_a along the complex line z + t w, differentiated in 40 digits."""
    mp.mp.dps = 40
    z1, z2, a = mp.mpc(z1), mp.mpc(z2), mp.mpf(a)

    def g(t, rot):
        x1 = z1 + t * rot * w[0]
        x2 = z2 + t * rot * w[1]
        return abs(x1 - x2) ** 2 - a * a * abs(1 - x1 * mp.conj(x2)) ** 2

    return float((mp.diff(lambda t: g(t, 1), 0, 2) + mp.diff(lambda t: g(t, 1j), 0, 2)) / 4)


def hermitian(b, w):
    w = np.asarray(w, dtype=complex)
    return float(np.real(np.conj(w) @ b @ w))


@pytest.mark.parametrize("pt, a, value", [((0.5, 0), 0.5, 0.0), ((0.5, 0), 0.6, -0.11)])
def test_g_a_examples(pt, a, value):
    assert g_a(*pt, a) == pytest.approx(value, abs=1e-15)


@given(disc_pt, st.floats(0.01, 0.99))
def test_g_a_negative_on_diagonal(z, a):
    assert g_a(z, z, a) == pytest.approx(-a * a * (1 - abs(z) ** 2) ** 2, abs=1e-14)


def test_grad_example():
    d1, d2 = grad_g_a(0.5, 0, 0.5)
    assert d1 == pytest.approx(0.5) and d2 == pytest.approx(-0.375)


@given(disc_pt, disc_pt, leaf_a)
def test_grad_matches_fd(z1, z2, a):
    d1, d2 = grad_g_a(z1, z2, a)
    h = 1e-6
    for k, d in enumerate((d1, d2)):
        e = np.zeros(2, dtype=complex)
        e[k] = h
        x = np.array([z1, z2])
        dx = (g_a(*(x + e), a) - g_a(*(x - e), a)) / (2 * h)
        dy = (g_a(*(x + 1j * e), a) - g_a(*(x - 1j * e), a)) / (2 * h)
        assert abs(d - 0.5 * (dx - 1j * dy)) < 1e-8


def test_levi_matrix_example():
    b = levi_matrix(0.5, 0, 0.5)
    assert np.allclose(np.diag(b), [1, 0.9375]) and np.allclose([b[0, 1], b[1, 0]], -0.75)


def test_levi_matrix_small_a_limit():
    assert np.allclose(levi_matrix(0.3 + 0.2j, -0.1j, 1e-9), [[1, -1], [-1, 1]], atol=1e-15)


def test_levi_matrix_rejects_bad_a():
    with pytest.raises(ValueError):
        levi_matrix(0, 0, 1.0)


@given(disc_pt, disc_pt, leaf_a)
def test_levi_matrix_hermitian(z1, z2, a):
    b = levi_matrix(z1, z2, a)
    assert np.allclose(b, b.conj().T, atol=0)


@pytest.mark.parametrize("seed", range(5))
def test_levi_matrix_against_mp_derivatives(seed):
    rng = np.random.default_rng(seed)
    z1, z2 = 0.9 * np.sqrt(rng.uniform(size=2)) * np.exp(2j * np.pi * rng.uniform(size=2))
    a = rng.uniform(0.05, 0.95)
    b = levi_matrix(z1, z2, a)
    for w in [(1, 0), (0, 1), (1, 1), (1, 1j), (0.3 - 0.2j, 1.1)]:
        assert hermitian(b, w) == pytest.approx(mp_levi_form(z1, z2, a, w), abs=1e-12)


def test_levi_matrix_fd_cross_check():
    rng = np.random.default_rng(12)
    n = 1000
    z = 0.95 * np.sqrt(rng.uniform(size=(2, n))) * np.exp(2j * np.pi * rng.uniform(size=(2, n)))
    a = 0.6
    fd = levi_matrix_fd(lambda x: g_a(x[0], x[1], a), z)
    exact = np.moveaxis(levi_matrix(z[0], z[1], a), (-2, -1), (0, 1))
    rel = np.abs(fd - exact) / (1 + np.abs(exact))
    assert rel.max() < 1e-5


def test_levi_value_example():
    rep = levi_value(0.5, 0, 0.5)
    assert isinstance(rep, LeviReport)
    assert rep.tangent == pytest.approx(0.75)
    assert rep.levi_value == pytest.approx(0.375, abs=1e-12)
    assert rep.closed_form_value == pytest.approx(0.375, abs=1e-12)
    flat = rep.to_dict()
    assert flat["levi_value"] == rep.levi_value and "tangent_re" in flat


@given(leaf_a, angle)
def test_levi_alpha_zero_family(a, theta):
    rep = levi_value(*leaf_point(a, theta, 0), a)
    assert rep.levi_value == pytest.approx(2 * a * a * (1 - a * a), abs=1e-12)


@given(leaf_a, angle, st.builds(lambda z: 0.9 * z, disc_pt))
def test_levi_closed_form_and_positivity(a, theta, alpha):
    z1, z2 = leaf_point(a, theta, alpha)
    rep = levi_value(z1, z2, a)
    d = rep.levi_value
    assert d > 0
    assert abs(d - rep.closed_form_value) <= 1e-9 * (1 + d)
    assert hermitian(rep.levi_matrix, (rep.tangent, 1)) == pytest.approx(d, rel=1e-12)


@given(leaf_a, st.builds(lambda z: 0.9 * z, disc_pt))
def test_levi_tangent_closed_form(a, alpha):
    _, _, u = levi_values(*leaf_point(a, 0.0, alpha), a)
    assert abs(u - (1 - a * a) / (1 - a * np.conj(alpha)) ** 2) <= 1e-10 * (1 + abs(u))


@given(leaf_a, angle, st.builds(lambda z: 0.9 * z, disc_pt))
def test_levi_tangent_is_complex_tangent(a, theta, alpha):
    z1, z2 = leaf_point(a, theta, alpha)
    d1, d2 = grad_g_a(z1, z2, a)
    _, _, u = levi_values(z1, z2, a)
    assert abs(d1 * u + d2) <= 1e-12 * (1 + abs(d2))


def test_levi_value_swap_symmetry():
    a = 0.4
    z1, z2 = leaf_point(a, 0.3, 0.2 - 0.5j)
    one = levi_value(z1, z2, a)
    two = levi_value(z2, z1, a)
    norm = lambda r: r.levi_value / (1 + abs(r.tangent) ** 2)
    assert norm(one) == pytest.approx(norm(two), rel=1e-10)


def test_levi_value_errors():
    with pytest.raises(DomainError):
        levi_value(0.5, 0, 0.3)
    with pytest.raises(ValueError):
        levi_value(0.5, 0, 0)


def test_pushforward_matches_levi_value():
    rng = np.random.default_rng(4)
    for _ in range(50):
        a = rng.uniform(0.05, 0.95)
        alpha = 0.9 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        z1, z2 = leaf_point(a, rng.uniform(-np.pi, np.pi), alpha)
        d = levi_value(z1, z2, a).levi_value
        assert abs(pushforward_levi(z1, z2, a) - d) <= 1e-5 * (1 + d)


@pytest.mark.parametrize("pt, det", [((0.5, 0), 0.25), ((0.3 + 0.3j, 0.3 + 0.3j), 0.0)])
def test_jacobian_examples(pt, det):
    assert jacobian_sym_det(*pt) == pytest.approx(det, abs=1e-9)


def test_jacobian_random():
    rng = np.random.default_rng(6)
    z = np.sqrt(rng.uniform(size=(2, 10_000))) * np.exp(2j * np.pi * rng.uniform(size=(2, 10_000)))
    det = jacobian_sym_det(z[0], z[1])
    exact = np.abs(z[0] - z[1]) ** 2
    keep = exact > 1e-4
    assert np.max(np.abs(det[keep] - exact[keep]) / exact[keep]) < 1e-5


def test_submersion_examples():
    norm, ind = check_f_submersion(0.5, 0)
    assert norm > 0 and ind == pytest.approx(1.75)
    with pytest.raises(DegenerateError):
        check_f_submersion(0.2, 0.2)


@given(disc_pt, disc_pt)
def test_submersion_indicator_bound(z1, z2):
    if abs(z1 - z2) < 1e-6:
        return
    norm, ind = check_f_submersion(z1, z2)
    assert norm > 0 and ind >= 2 - (abs(z1) ** 2 + abs(z2) ** 2) - 1e-15


def test_f_partials_fd():
    rng = np.random.default_rng(9)
    n = 10_000
    z = 0.95 * np.sqrt(rng.uniform(size=(2, n))) * np.exp(2j * np.pi * rng.uniform(size=(2, n)))
    z = z[:, np.abs(z[0] - z[1]) > 1e-2]
    exact = np.stack(f_partials(z[0], z[1]))

    def f(x1, y1, x2, y2):
        w1, w2 = x1 + 1j * y1, x2 + 1j * y2
        return np.abs(w1 - w2) / np.abs(1 - np.conj(w1) * w2)

    coords = [z[0].real, z[0].imag, z[1].real, z[1].imag]
    h = 1e-6
    for k in range(4):
        up = list(coords)
        dn = list(coords)
        up[k] = coords[k] + h
        dn[k] = coords[k] - h
        fd = (f(*up) - f(*dn)) / (2 * h)
        assert np.max(np.abs(fd - exact[k]) / (1 + np.abs(exact[k]))) < 1e-5


@pytest.mark.parametrize("name, point", [("sym", (0.3, 0.1j)), ("F", (0.5, 0)), ("H", (0.2, -0.4j)), ("J-chart", (0.1, 0.6))])
def test_cr_residual_holomorphic(name, point):
    assert cauchy_riemann_residual(name, np.array(point, dtype=complex)) < 1e-7


def test_cr_residual_control():
    assert cauchy_riemann_residual("conj", np.array([0.3, 0.1j])) == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(ValueError):
        cauchy_riemann_residual("exp", np.array([0, 0]))
