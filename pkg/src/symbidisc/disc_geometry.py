"""Automorphisms of the unit disc and the pseudo-hyperbolic distance."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from symbidisc.complex_core import DEFAULT, DomainError, ToleranceConfig, as_complex, _unwrap


class BidiscPoint(NamedTuple):
    z1: complex
    z2: complex


def _wrap_angle(theta: float) -> float:
    # into (-pi, pi]
    t = math.remainder(theta, 2.0 * math.pi)
    return math.pi if t == -math.pi else t


def disc_apply(theta, alpha, z):
    """Vectorised ``e^{i theta} (z - alpha) / (1 - conj(alpha) z)``."""
    alpha = np.asarray(alpha, dtype=complex)
    z = np.asarray(z, dtype=complex)
    return np.exp(1j * np.asarray(theta)) * (z - alpha) / (1.0 - alpha.conjugate() * z)


@dataclass(frozen=True)
class DiscAutomorphism:
    """The map ``z -> e^{i theta} (z - alpha) / (1 - conj(alpha) z)``."""

    theta: float = 0.0
    alpha: complex = 0j

    def __post_init__(self):
        alpha = complex(self.alpha)
        if not (math.isfinite(self.theta) and np.isfinite(alpha)):
            raise ValueError("non-finite automorphism parameters")
        if abs(alpha) >= 1.0 - DEFAULT.boundary_band:
            raise DomainError(f"|alpha| = {abs(alpha)!r} is not inside the unit disc")
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "alpha", alpha)

    @classmethod
    def identity(cls):
        return cls(0.0, 0j)

    @classmethod
    def rotation(cls, theta: float):
        return cls(_wrap_angle(theta), 0j)

    @classmethod
    def blaschke_at(cls, alpha: complex):
        """``z -> (alpha - z) / (1 - conj(alpha) z)``: swaps 0 and alpha."""
        return cls(math.pi, alpha)

    def __call__(self, z, cfg: ToleranceConfig = DEFAULT):
        z = as_complex(z)
        den = 1.0 - self.alpha.conjugate() * z
        if np.any(np.abs(den) <= cfg.boundary_band):
            raise DomainError("singular denominator: z is at the pole 1/conj(alpha)")
        return _unwrap(np.exp(1j * self.theta) * (z - self.alpha) / den)

    apply = __call__

    def _matrix(self):
        e = complex(math.cos(self.theta), math.sin(self.theta))
        return np.array([[e, -e * self.alpha], [-self.alpha.conjugate(), 1.0]])

    @classmethod
    def _from_matrix(cls, m):
        a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
        rot = a / d
        alpha = -(c / d).conjugate()
        return cls(_wrap_angle(math.atan2(rot.imag, rot.real)), alpha)

    def compose(self, other: "DiscAutomorphism") -> "DiscAutomorphism":
        """``self o other``."""
        return DiscAutomorphism._from_matrix(self._matrix() @ other._matrix())

    def __matmul__(self, other):
        return self.compose(other)

    def invert(self) -> "DiscAutomorphism":
        e = complex(math.cos(self.theta), math.sin(self.theta))
        return DiscAutomorphism(_wrap_angle(-self.theta), -self.alpha * e)

    def allclose(self, other, n: int = 16, tol: float = DEFAULT.eq_tol) -> bool:
        """Pointwise comparison on a fixed ring of sample points."""
        k = np.arange(n)
        z = 0.5 * np.exp(2j * np.pi * k / n) * (0.3 + 0.7 * (k % 3) / 2)
        return bool(np.all(np.abs(self(z) - other(z)) <= tol))


def compose(f: DiscAutomorphism, g: DiscAutomorphism) -> DiscAutomorphism:
    return f.compose(g)


def invert(phi: DiscAutomorphism) -> DiscAutomorphism:
    return phi.invert()


def apply(phi: DiscAutomorphism, z, cfg: ToleranceConfig = DEFAULT):
    return phi(z, cfg)


def mobius_distance(z1, z2=None):
    """Pseudo-hyperbolic distance ``|(z1 - z2) / (1 - conj(z1) z2)|``.

    Accepts either a ``BidiscPoint`` or the two coordinates.
    """
    if z2 is None:
        z1, z2 = z1
    z1 = as_complex(z1)
    z2 = as_complex(z2)
    return _unwrap(np.abs(z1 - z2) / np.abs(1.0 - z1.conjugate() * z2))
