"""Complex arithmetic helpers shared by every domain module.

Scalars and arrays are both accepted; array inputs are processed
elementwise and results keep the broadcast shape.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """A point lies outside the domain an operation is defined on."""


class DegenerateError(ValueError):
    """An input sits on a degenerate locus (zero leading coefficient, royal leaf, ...)."""


class BranchCutError(DomainError):
    """Square root requested on (or numerically on) the cut (-inf, 0]."""


@dataclass(frozen=True)
class ToleranceConfig:
    eq_tol: float = 1e-10
    boundary_band: float = 1e-12
    fd_step: float = 1e-6

    def __post_init__(self):
        if min(self.eq_tol, self.boundary_band, self.fd_step) <= 0:
            raise ValueError("tolerances must be strictly positive")
        if not self.eq_tol > self.boundary_band:
            raise ValueError("eq_tol must exceed boundary_band")


DEFAULT = ToleranceConfig()


class Tri(enum.IntEnum):
    OUTSIDE = -1
    BOUNDARY = 0
    INSIDE = 1


def margin_to_tri(margin, cfg: ToleranceConfig = DEFAULT):
    """Classify a signed margin; arrays give an int8 array of ``Tri`` codes."""
    m = np.asarray(margin, dtype=float)
    if not np.all(np.isfinite(m)):
        raise ValueError("margin must be finite")
    band = cfg.boundary_band
    codes = np.where(m > band, 1, np.where(m < -band, -1, 0)).astype(np.int8)
    if codes.ndim == 0:
        return Tri(int(codes))
    return codes


def close(x, y, tol: float = DEFAULT.eq_tol):
    """Relative-scaled equality ``|x-y| <= tol*(1+max(|x|,|y|))``."""
    x = np.asarray(x)
    y = np.asarray(y)
    return np.abs(x - y) <= tol * (1.0 + np.maximum(np.abs(x), np.abs(y)))


def rel_residual(x, y):
    """``|x-y| / (1+max(|x|,|y|))``, the quantity ``close`` compares to its tolerance."""
    x = np.asarray(x)
    y = np.asarray(y)
    return np.abs(x - y) / (1.0 + np.maximum(np.abs(x), np.abs(y)))


def as_complex(z):
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise ValueError("non-finite complex input")
    return z


def _unwrap(x):
    return x[()] if isinstance(x, np.ndarray) and x.ndim == 0 else x


_VELTKAMP = 134217729.0  # 2**27 + 1


def _two_prod(a, b):
    """``a * b`` as an unevaluated sum ``hi + lo`` (Dekker's algorithm)."""
    hi = a * b
    c = _VELTKAMP * a
    ah = c - (c - a)
    al = a - ah
    c = _VELTKAMP * b
    bh = c - (c - b)
    bl = b - bh
    return hi, ((ah * bh - hi) + ah * bl + al * bh) + al * bl


def _comp_sum(terms):
    """Neumaier's compensated sum of a sequence of equally shaped float arrays."""
    total = np.zeros_like(terms[0])
    comp = np.zeros_like(terms[0])
    for x in terms:
        t = total + x
        comp += np.where(np.abs(total) >= np.abs(x), (total - t) + x, (x - t) + total)
        total = t
    return total + comp


def solve_quadratic(a, b, c):
    """Both roots of ``a z^2 + b z + c = 0``.

    The larger root comes from the discriminant branch aligned with ``b``
    and the other from Vieta's product, so near-double roots do not lose
    digits to cancellation.
    """
    a, b, c = np.broadcast_arrays(as_complex(a), as_complex(b), as_complex(c))
    if np.any(a == 0):
        raise DegenerateError("leading coefficient is zero")
    sq = np.sqrt(b * b - 4.0 * a * c)
    sq = np.where((b.conjugate() * sq).real >= 0, sq, -sq)
    q = -0.5 * (b + sq)
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = q / a
        r2 = np.where(q != 0, c / np.where(q != 0, q, 1.0), 0.0)
    return _unwrap(r1), _unwrap(r2)


def sqrt_slit(w, cfg: ToleranceConfig = DEFAULT):
    """Principal square root on the plane slit along (-inf, 0]."""
    w = as_complex(w)
    on_cut = (np.abs(w.imag) <= cfg.boundary_band) & (w.real <= cfg.boundary_band)
    if np.any(on_cut):
        raise BranchCutError("argument lies on the branch cut (-inf, 0]")
    return _unwrap(np.sqrt(w))
