import math

import numpy as np
import pytest
from scipy.integrate import quad

from umbilic import chart
from umbilic.errors import DomainError

CURVATURES = [-1.0, 0.0, 1.0, -2.5, 0.7]


def test_hyperbolic_distance_closed_form():
    # d(0, (r,0,0)) = log((1+r)/(1-r)) in the unit-curvature ball
    p = np.zeros(3)
    q = np.array([0.5, 0.0, 0.0])
    assert chart.riemannian_distance(-1.0, p, q) == pytest.approx(math.log(3.0), abs=1e-14)


def test_distance_matches_line_quadrature():
    # independent oracle: integrate the conformal factor along the segment
    for c in CURVATURES:
        q = np.array([0.3, 0.1, -0.2])
        val, _ = quad(
            lambda t: chart.conformal_factor(c, t * q) * np.linalg.norm(q), 0.0, 1.0,
            epsabs=1e-13, epsrel=1e-13,
        )
        # radial segments from the origin are geodesics in every model
        qr = np.array([np.linalg.norm(q), 0.0, 0.0])
        val_r, _ = quad(
            lambda t: chart.conformal_factor(c, t * qr) * np.linalg.norm(qr), 0.0, 1.0,
            epsabs=1e-13, epsrel=1e-13,
        )
        assert chart.riemannian_distance(c, np.zeros(3), qr) == pytest.approx(val_r, abs=1e-11)
        assert val == pytest.approx(val_r, abs=1e-11)


def test_spherical_quarter_circle():
    # chart radius 1 is the equator of the unit sphere: distance pi/2
    assert chart.riemannian_distance(
        1.0, np.zeros(3), np.array([1.0, 0.0, 0.0])
    ) == pytest.approx(math.pi / 2, abs=1e-14)


def test_euclidean_identity_chart():
    p = np.array([1.5, -2.0, 0.5])
    q = np.array([-0.5, 1.0, 2.5])
    assert chart.conformal_factor(0.0, p) == 1.0
    assert chart.riemannian_distance(0.0, p, q) == pytest.approx(
        np.linalg.norm(p - q), abs=1e-14
    )


@pytest.mark.parametrize("c", CURVATURES)
def test_geodesic_point_roundtrip(c):
    rng = np.random.default_rng(4)
    for _ in range(20):
        p = 0.12 * rng.standard_normal(3)
        u = rng.standard_normal(3)
        u /= np.linalg.norm(u)
        s = rng.uniform(0.05, 0.6)
        q = chart.geodesic_point(c, p, u, s)
        assert chart.riemannian_distance(c, p, q) == pytest.approx(s, abs=1e-12)


@pytest.mark.parametrize("c", CURVATURES)
def test_transported_tangent_is_unit(c):
    rng = np.random.default_rng(5)
    p = 0.2 * rng.standard_normal(3)
    u = rng.standard_normal(3)
    u /= np.linalg.norm(u)
    q, v = chart.geodesic_transported(c, p, u, 0.4)
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)
    # the transported tangent keeps pointing along the same geodesic
    q2 = chart.geodesic_point(c, q, v, 0.1)
    assert chart.riemannian_distance(c, p, q2) == pytest.approx(0.5, abs=1e-10)


def test_domain_checks():
    with pytest.raises(DomainError):
        chart.check_point(-1.0, np.array([1.2, 0.0, 0.0]))
    chart.check_point(-1.0, np.array([0.9, 0.0, 0.0]))
    assert chart.in_hemisphere(1.0, np.array([0.5, 0.0, 0.0]))
    assert not chart.in_hemisphere(1.0, np.array([1.5, 0.0, 0.0]))


def test_geodesics_reach_the_antipode_smoothly():
    # c > 0: walking distance pi from the origin lands on the antipode,
    # which is outside the open hemisphere of the chart
    q = chart.geodesic_point(1.0, np.zeros(3), np.array([1.0, 0.0, 0.0]), 3.0)
    assert np.linalg.norm(q) > 1.0


def test_dimension_agnostic():
    p2 = np.zeros(2)
    q2 = np.array([0.5, 0.0])
    assert chart.riemannian_distance(-1.0, p2, q2) == pytest.approx(math.log(3.0), abs=1e-14)
    r = chart.geodesic_point(-1.0, p2, np.array([0.0, 1.0]), 0.25)
    assert r.shape == (2,)
    assert chart.riemannian_distance(-1.0, p2, r) == pytest.approx(0.25, abs=1e-13)
