"""Defining functions of the leaves, their Wirtinger derivatives and the Levi form.

A leaf ``F_a = {|z1 - z2| = a |1 - z1 conj(z2)|}`` of the bidisc has defining
function ``g_a = |z1 - z2|^2 - a^2 |1 - z1 conj(z2)|^2``.  Its complex tangent
line at z is spanned by ``(u, 1)`` with ``u = -d_{z2} g_a / d_{z1} g_a`` and the
Levi form evaluated there equals ``2 a^2 |u|``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from symbidisc.complex_core import (
    DEFAULT,
    DegenerateError,
    DomainError,
    ToleranceConfig,
    _unwrap,
    as_complex,
)
from symbidisc.disc_geometry import BidiscPoint, mobius_distance
from symbidisc.symmetrized_bidisc import sym


def _check_a(a):
    a = np.asarray(a)
    if not np.all((a > 0) & (a < 1)):
        raise ValueError(f"leaf parameter must lie in (0, 1), got {a!r}")


def g_a(z1, z2, a: float):
    z1, z2 = as_complex(z1), as_complex(z2)
    return _unwrap(np.abs(z1 - z2) ** 2 - a * a * np.abs(1 - z1 * z2.conjugate()) ** 2)


def grad_g_a(z1, z2, a: float):
    """``(d_{z1} g_a, d_{z2} g_a)``."""
    _check_a(a)
    z1, z2 = as_complex(z1), as_complex(z2)
    c1, c2 = z1.conjugate(), z2.conjugate()
    d1 = (c1 - c2) + a * a * c2 * (1 - c1 * z2)
    d2 = -(c1 - c2) + a * a * c1 * (1 - c2 * z1)
    return _unwrap(d1), _unwrap(d2)


def levi_matrix(z1, z2, a: float):
    """Complex Hessian ``[[g_{1 1bar}, g_{2 1bar}], [g_{1 2bar}, g_{2 2bar}]]``; shape (..., 2, 2)."""
    _check_a(a)
    z1, z2 = as_complex(z1), as_complex(z2)
    a2 = a * a
    b11 = 1 - a2 * np.abs(z2) ** 2 + 0j
    b22 = 1 - a2 * np.abs(z1) ** 2 + 0j
    b21 = -1 + a2 * (1 - z1.conjugate() * z2)
    b12 = b21.conjugate()
    return np.stack([np.stack([b11, b12], -1), np.stack([b21, b22], -1)], -2)


@dataclass(frozen=True)
class LeviReport:
    point: BidiscPoint
    leaf: float
    grad: tuple
    levi_matrix: np.ndarray
    tangent: complex
    levi_value: float
    closed_form_value: float

    def to_dict(self) -> dict:
        d = asdict(self)
        b = np.asarray(self.levi_matrix)
        out = {
            "z1_re": self.point[0].real, "z1_im": self.point[0].imag,
            "z2_re": self.point[1].real, "z2_im": self.point[1].imag,
            "leaf_a": self.leaf,
            "grad1_re": self.grad[0].real, "grad1_im": self.grad[0].imag,
            "grad2_re": self.grad[1].real, "grad2_im": self.grad[1].imag,
            "B11": b[0, 0].real, "B22": b[1, 1].real,
            "B12_re": b[0, 1].real, "B12_im": b[0, 1].imag,
            "tangent_re": self.tangent.real, "tangent_im": self.tangent.imag,
            "levi_value": d["levi_value"],
            "closed_form_value": d["closed_form_value"],
        }
        return {k: float(v) for k, v in out.items()}


def levi_values(z1, z2, a: float):
    """Vectorised ``(<B v, v>, 2 a^2 |u|, u)`` without leaf checks."""
    d1, d2 = (np.asarray(x) for x in grad_g_a(z1, z2, a))
    u = -d2 / d1
    b = levi_matrix(z1, z2, a)
    D = (b[..., 0, 0] * np.abs(u) ** 2 + b[..., 0, 1] * u.conjugate() + b[..., 1, 0] * u + b[..., 1, 1]).real
    return D, 2 * a * a * np.abs(u), u


def levi_value(z1, z2, a: float, cfg: ToleranceConfig = DEFAULT) -> LeviReport:
    """Levi form of ``g_a`` on the complex tangent line at a point of the leaf ``F_a``."""
    _check_a(a)
    z1, z2 = complex(z1), complex(z2)
    if abs(g_a(z1, z2, a)) > cfg.eq_tol * (1 + a * a):
        raise DomainError(f"point is not on the leaf a = {a!r} (Mobius distance {mobius_distance(z1, z2)!r})")
    d1, d2 = grad_g_a(z1, z2, a)
    if abs(d1) <= cfg.boundary_band:
        raise DegenerateError("d g_a / d z1 vanishes")
    D, closed, u = levi_values(z1, z2, a)
    return LeviReport(
        point=BidiscPoint(z1, z2),
        leaf=a,
        grad=(complex(d1), complex(d2)),
        levi_matrix=levi_matrix(z1, z2, a),
        tangent=complex(u),
        levi_value=float(D),
        closed_form_value=float(closed),
    )


def leaf_point(a: float, theta: float, alpha: complex):
    """``(phi(a), phi(0))`` for ``phi(z) = e^{i theta}(z - alpha)/(1 - conj(alpha) z)``."""
    e = np.exp(1j * np.asarray(theta))
    alpha = np.asarray(alpha, dtype=complex)
    return _unwrap(e * (a - alpha) / (1 - alpha.conjugate() * a)), _unwrap(-e * alpha)


# -- finite-difference oracles ------------------------------------------------

def _lift(w, x):
    """Broadcast a direction of shape (n,) against points of shape (n, ...)."""
    w = np.asarray(w, dtype=complex)
    return w.reshape(w.shape + (1,) * (x.ndim - w.ndim))


def wirtinger_fd(f, point, h: float = DEFAULT.fd_step):
    """Central-difference ``(df/dz_j, df/dzbar_j)`` of a map C^n -> C^m (or R).

    ``point`` has shape (n,) or (n, N) for a batch of N points; ``f`` maps it
    to shape (m, ...) or, for scalar-valued maps, to the batch shape alone.
    Results have shape (m, n, ...).
    """
    x = np.asarray(point, dtype=complex)
    n = x.shape[0]

    def call(y):
        out = np.asarray(f(y))
        return out[None] if out.ndim == x.ndim - 1 else out

    cols_x, cols_y = [], []
    for j in range(n):
        e = np.zeros(n, dtype=complex)
        e[j] = h
        e = _lift(e, x)
        cols_x.append((call(x + e) - call(x - e)) / (2 * h))
        cols_y.append((call(x + 1j * e) - call(x - 1j * e)) / (2 * h))
    dx = np.stack(cols_x, 1)
    dy = np.stack(cols_y, 1)
    return 0.5 * (dx - 1j * dy), 0.5 * (dx + 1j * dy)


def levi_form_fd(f, point, direction, h: float = 1e-3):
    """``sum_jk f_{j kbar} w_j conj(w_k)`` as a quarter Laplacian along the complex line ``x + lambda w``."""
    x = np.asarray(point, dtype=complex)
    w = _lift(direction, x) if np.ndim(direction) == 1 else np.asarray(direction, dtype=complex)
    lap = f(x + h * w) + f(x - h * w) + f(x + 1j * h * w) + f(x - 1j * h * w) - 4 * f(x)
    return np.real(lap) / (4 * h * h)


def levi_matrix_fd(f, point, h: float = 1e-3):
    """Recover the 2x2 complex Hessian from four complex-line Laplacians by polarisation.

    The matrix axes come first: shape (2, 2, ...).
    """
    e1, e2 = np.array([1, 0]), np.array([0, 1])
    b11 = levi_form_fd(f, point, e1, h)
    b22 = levi_form_fd(f, point, e2, h)
    plus = levi_form_fd(f, point, e1 + e2, h)  # b11 + b22 + 2 Re b21
    iplus = levi_form_fd(f, point, e1 + 1j * e2, h)  # b11 + b22 + 2 Im b21
    b21 = 0.5 * (plus - b11 - b22) + 0.5j * (iplus - b11 - b22)
    return np.array([[b11 + 0j, np.conj(b21)], [b21, b22 + 0j]])


def jacobian_sym_det(z1, z2, cfg: ToleranceConfig = DEFAULT):
    """Determinant of the real 4x4 Jacobian of ``sym`` by central differences."""
    z1, z2 = np.broadcast_arrays(as_complex(z1), as_complex(z2))
    h = cfg.fd_step
    x = np.stack([z1, z2], -1)
    cols = []
    for j in range(2):
        for step in (h, 1j * h):
            e = np.zeros(2, dtype=complex)
            e[j] = step
            fp = np.stack(sym(*np.moveaxis(x + e, -1, 0)), -1)
            fm = np.stack(sym(*np.moveaxis(x - e, -1, 0)), -1)
            d = (fp - fm) / (2 * h)
            cols.append(np.stack([d[..., 0].real, d[..., 0].imag, d[..., 1].real, d[..., 1].imag], -1))
    jac = np.stack(cols, -1)
    return _unwrap(np.linalg.det(jac))


def f_partials(z1, z2):
    """Analytic ``(d_x1 f, d_y1 f, d_x2 f, d_y2 f)`` of the Mobius distance ``f``."""
    z1, z2 = as_complex(z1), as_complex(z2)
    x1, y1, x2, y2 = z1.real, z1.imag, z2.real, z2.imag
    n = (x1 - x2) ** 2 + (y1 - y2) ** 2
    m = 1 - x1 * x2 - y1 * y2
    k = x1 * y2 - x2 * y1
    dn = m * m + k * k
    f = np.sqrt(n / dn)
    return (
        f * ((x1 - x2) / n + (x2 * m - y2 * k) / dn),
        f * ((y1 - y2) / n + (y2 * m + x2 * k) / dn),
        f * (-(x1 - x2) / n + (x1 * m + y1 * k) / dn),
        f * (-(y1 - y2) / n + (y1 * m - x1 * k) / dn),
    )


def check_f_submersion(z1, z2, cfg: ToleranceConfig = DEFAULT):
    """``(|grad f|, |x1^2 + y1^2 + x2^2 + y2^2 - 2|)`` off the diagonal.

    The gradient of ``f`` can only vanish where the squared norm of the
    point equals 2, which never happens on the bidisc.
    """
    z1, z2 = as_complex(z1), as_complex(z2)
    if np.any(np.abs(z1 - z2) <= cfg.boundary_band):
        raise DegenerateError("f is not differentiable on the diagonal z1 = z2")
    grad = np.stack(f_partials(z1, z2))
    norm = np.sqrt(np.sum(grad * grad, axis=0))
    indicator = np.abs(np.abs(z1) ** 2 + np.abs(z2) ** 2 - 2)
    return _unwrap(norm), _unwrap(indicator)


def _map_F_vec(x):
    s, p = x[0], x[1]
    return np.array([1j * (1 + p) / (1 - p), -1j * s / (1 - p)])


def _map_H_vec(x):
    z, w = x[0], x[1]
    d = 1 - z * w
    return np.array([(z - w) / d, -1j * (z + w) / d])


def _map_J_chart(x):
    # affine chart x1 = 1, since 1 - zw never vanishes on the bidisc
    z, w = x[0], x[1]
    d = 1 - z * w
    return np.array([(z - w) / d, 1j * (1 + z * w) / d, -1j * (z + w) / d])


def _map_sym_vec(x):
    return np.array([x[0] + x[1], x[0] * x[1]])


def _map_conj(x):
    return np.conj(x)


CR_MAPS = {
    "F": _map_F_vec,
    "H": _map_H_vec,
    "J-chart": _map_J_chart,
    "sym": _map_sym_vec,
    "conj": _map_conj,
}


def cauchy_riemann_residual(name: str, point, cfg: ToleranceConfig = DEFAULT) -> float:
    """``max |df_k / dzbar_j|`` by central differences; ~0 for holomorphic maps."""
    try:
        f = CR_MAPS[name]
    except KeyError:
        raise ValueError(f"unknown map {name!r}; expected one of {sorted(CR_MAPS)}") from None
    _, dbar = wirtinger_fd(f, point, cfg.fd_step)
    return float(np.max(np.abs(dbar)))


def descended_g_a(s, p, a: float):
    """``g_a`` written in the symmetric coordinates ``(s, p) = sym(z1, z2)``.

    Uses ``|z1 - z2|^2 = |s^2 - 4p|`` and ``2 Re(z1 conj z2) = (|s|^2 - |s^2 - 4p|) / 2``.
    """
    s, p = as_complex(s), as_complex(p)
    disc = np.abs(s * s - 4 * p)
    return _unwrap(disc - a * a * (1 - (np.abs(s) ** 2 - disc) / 2 + np.abs(p) ** 2))


def pushforward_levi(z1, z2, a: float, h=None):
    """Levi form of ``g_a`` pushed down to G, at ``sym(z)`` along ``Dsym (u, 1)``.

    Should reproduce the Levi form of ``g_a`` at z.  Two step sizes are
    combined by Richardson extrapolation.  The pushed-down function is only
    smooth off the royal variety, so by default the step shrinks with
    ``|z1 - z2|`` (clipped to [1e-4, 5e-4] to keep rounding in check).
    """
    z1, z2 = as_complex(z1), as_complex(z2)
    if h is None:
        h = np.clip(0.02 * np.abs(z1 - z2), 1e-4, 5e-4)
    d1, d2 = grad_g_a(z1, z2, a)
    u = -np.asarray(d2) / np.asarray(d1)
    base = np.array(sym(z1, z2), dtype=complex)
    direction = np.array([u + 1, z2 * u + z1])

    def descended(x):
        return descended_g_a(x[0], x[1], a)

    coarse = levi_form_fd(descended, base, direction, h)
    fine = levi_form_fd(descended, base, direction, h / 2)
    return _unwrap((4 * fine - coarse) / 3)
