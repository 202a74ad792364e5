import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from symbidisc import BidiscPoint, DiscAutomorphism, DomainError, mobius_distance
from symbidisc.disc_geometry import apply, compose, invert

import oracles

radius = st.floats(0, 0.95)
angle = st.floats(-math.pi, math.pi)
disc_pt = st.builds(lambda r, t: r * complex(math.cos(t), math.sin(t)), radius, angle)
automorphism = st.builds(DiscAutomorphism, angle, disc_pt)

RING = 0.9 * np.exp(2j * np.pi * np.arange(100) / 100) * np.linspace(0.05, 1, 100)


@pytest.mark.parametrize(
    "theta, alpha, z, expected",
    [(0, 0, 0.3 + 0.1j, 0.3 + 0.1j), (math.pi, 0, 0.5, -0.5), (0, 0.5, 0.5, 0)],
)
def test_apply_examples(theta, alpha, z, expected):
    assert abs(apply(DiscAutomorphism(theta, alpha), z) - expected) < 1e-15


def test_apply_matches_mp_oracle():
    phi = DiscAutomorphism(1.1, 0.3 - 0.6j)
    for z in RING[::7]:
        assert abs(phi(z) - oracles.disc_map(1.1, 0.3 - 0.6j, z)) < 1e-14


def test_pole_and_parameter_errors():
    with pytest.raises(DomainError):
        DiscAutomorphism(0, 1.0)
    with pytest.raises(DomainError):
        DiscAutomorphism(0, 0.5)(2.0)
    with pytest.raises(ValueError):
        DiscAutomorphism(float("nan"), 0)


def test_compose_identity():
    g = DiscAutomorphism(0.7, 0.2 + 0.1j)
    assert compose(DiscAutomorphism.identity(), g).allclose(g)


def test_compose_involution():
    # phi_{0,1/2} o phi_{0,1/2} is a rotation-free identity only up to the
    # sign convention; blaschke_at is the genuine involution
    b = DiscAutomorphism.blaschke_at(0.5)
    both = compose(b, b)
    assert np.max(np.abs(both(RING) - RING)) < 1e-14
    phi = DiscAutomorphism(0, 0.5)
    twice = phi(phi(RING))
    assert np.max(np.abs(compose(phi, phi)(RING) - twice)) < 1e-14


def test_compose_rotations():
    r = compose(DiscAutomorphism.rotation(1.0), DiscAutomorphism.rotation(2.5))
    assert r.allclose(DiscAutomorphism.rotation(3.5))
    assert abs(r.alpha) == 0 and -math.pi < r.theta <= math.pi


@pytest.mark.parametrize(
    "phi, expected",
    [
        (DiscAutomorphism.identity(), DiscAutomorphism.identity()),
        (DiscAutomorphism.rotation(0.4), DiscAutomorphism.rotation(-0.4)),
    ],
)
def test_invert_examples(phi, expected):
    assert invert(phi).allclose(expected)


def test_invert_round_trip():
    phi = DiscAutomorphism(0, 0.3 + 0.2j)
    inv = invert(phi)
    assert np.max(np.abs(inv(phi(RING)) - RING)) < 1e-13
    assert np.max(np.abs(phi(inv(RING)) - RING)) < 1e-13


@pytest.mark.parametrize("z1, z2, d", [(0.5, 0, 0.5), (0.3 - 0.2j, 0.3 - 0.2j, 0.0), (0.5, -0.5, 0.8)])
def test_mobius_distance_examples(z1, z2, d):
    assert mobius_distance(BidiscPoint(z1, z2)) == pytest.approx(d, abs=1e-15)
    assert mobius_distance(z1, z2) == pytest.approx(oracles.mobius(z1, z2), abs=1e-15)


@given(automorphism, disc_pt, disc_pt)
def test_mobius_distance_invariant(phi, z1, z2):
    assert abs(mobius_distance(phi(z1), phi(z2)) - mobius_distance(z1, z2)) < 1e-10


@given(automorphism, automorphism, disc_pt)
def test_compose_is_pointwise(f, g, z):
    assert abs(compose(f, g)(z) - f(g(z))) < 1e-10


@given(automorphism, disc_pt)
def test_maps_disc_to_disc(phi, z):
    assert abs(phi(z)) < 1


@given(automorphism)
def test_invert_property(phi):
    assert compose(phi, invert(phi)).allclose(DiscAutomorphism.identity(), tol=1e-9)
