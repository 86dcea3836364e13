import math

import numpy as np
import pytest
from scipy.integrate import quad, solve_ivp

from umbilic import chart, umbilic
from umbilic.umbilic import SphereClass

Z = np.array([0.0, 0.0, 1.0])
X = np.array([1.0, 0.0, 0.0])


@pytest.mark.parametrize("c,lam0", [(-1.0, 1.5), (0.0, 1.0), (1.0, 0.5), (-1.0, 0.4), (-2.5, 2.0)])
def test_lambda_at_matches_riccati_ode(c, lam0):
    # independent oracle: integrate lambda' = lambda^2 + c numerically
    t_end = 0.8 * min(umbilic.blow_up_time(c, lam0), 1.0)
    sol = solve_ivp(
        lambda t, y: [y[0] ** 2 + c], (0.0, t_end), [lam0],
        rtol=1e-12, atol=1e-13, dense_output=True,
    )
    for t in np.linspace(0.0, t_end, 7):
        assert umbilic.lambda_at(c, lam0, t) == pytest.approx(
            float(sol.sol(t)[0]), abs=1e-8
        )


def test_blow_up_time_closed_forms():
    assert umbilic.blow_up_time(0.0, 2.0) == pytest.approx(0.5)
    assert umbilic.blow_up_time(-1.0, 1.0) == math.inf  # horoballs never empty
    assert umbilic.blow_up_time(-1.0, 0.5) == math.inf
    assert umbilic.blow_up_time(1.0, 0.0) == pytest.approx(math.pi / 2)
    assert umbilic.blow_up_time(-1.0, 2.0) == pytest.approx(math.atanh(0.5))


@pytest.mark.parametrize("c", [-1.0, 0.0, 1.0])
def test_sphere_through_interface(c):
    rng = np.random.default_rng(11)
    for _ in range(10):
        p = 0.25 * rng.standard_normal(3)
        n_in = rng.standard_normal(3)
        n_in /= np.linalg.norm(n_in)
        S = umbilic.sphere_through(c, 1.5, p, n_in)
        assert float(S.signed_dist(p)) == pytest.approx(0.0, abs=1e-12)
        assert S.outward_normal(p) == pytest.approx(-n_in, abs=1e-10)
        assert S.normal_curvature_at(p) == pytest.approx(1.5, abs=1e-10)
        # a small step along the inward normal enters the ball
        assert float(S.signed_dist(p + 1e-4 * n_in)) < 0.0


def test_classify_hyperbolic_trichotomy():
    p = np.array([0.2, 0.0, 0.0])
    for lam, want in [
        (1.5, SphereClass.GEODESIC_SPHERE),
        (1.0, SphereClass.HOROSPHERE),
        (0.5, SphereClass.EQUIDISTANT),
    ]:
        S = umbilic.sphere_through(-1.0, lam, p, -X)
        assert umbilic.classify(S) is want
    assert umbilic.classify(umbilic.sphere_through(0.0, 1.0, p, -X)) is SphereClass.EUCLIDEAN_SPHERE
    assert (
        umbilic.classify(umbilic.sphere_through(1.0, 1.0, p, -X))
        is SphereClass.SPHERICAL_GEODESIC_SPHERE
    )


@pytest.mark.parametrize("c,lam", [(-1.0, 1.5), (0.0, 1.0), (1.0, 0.8), (-1.0, 0.6), (-1.0, 1.0)])
def test_erode_semigroup(c, lam):
    S = umbilic.sphere_through(c, lam, np.array([0.25, 0.05, -0.1]), -X)
    a = umbilic.erode(umbilic.erode(S, 0.05), 0.07)
    b = umbilic.erode(S, 0.12)
    p = a.base_point()
    assert float(b.signed_dist(p)) == pytest.approx(0.0, abs=1e-10)
    assert a.signed_curvature == pytest.approx(b.signed_curvature, abs=1e-10)


def test_erode_curvature_is_riccati():
    S = umbilic.sphere_through(-1.0, 1.5, np.array([0.3, 0.0, 0.0]), -X)
    for t in (0.1, 0.3):
        assert umbilic.erode(S, t).signed_curvature == pytest.approx(
            umbilic.lambda_at(-1.0, 1.5, t), abs=1e-12
        )
    with pytest.raises(Exception):
        umbilic.erode(S, umbilic.blow_up_time(-1.0, 1.5) + 1e-6)


@pytest.mark.parametrize("c,lam", [(-1.0, 1.5), (0.0, 1.2), (1.0, 0.7), (-1.0, 0.5), (-1.0, 1.0)])
def test_depth_matches_directional_search(c, lam):
    # independent oracle: depth(x) = min over geodesic rays from x of the
    # distance to the boundary crossing, minimized over ray direction
    S = umbilic.sphere_through(c, lam, np.array([0.3, 0.0, 0.0]), -X)
    x = np.array([0.05, 0.02, -0.01])
    assert float(S.signed_dist(x)) < 0.0

    def crossing(u):
        lo, hi = 0.0, 1e-6
        while True:
            try:
                inside = float(S.signed_dist(chart.geodesic_point(c, x, u, hi))) < 0.0
            except Exception:
                return math.inf  # the ray runs off the chart without crossing
            if not inside:
                break
            hi *= 2.0
            if hi > 30.0:
                return math.inf
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if float(S.signed_dist(chart.geodesic_point(c, x, u, mid))) < 0.0:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    best = math.inf
    for th in np.linspace(0.02, math.pi - 0.02, 40):
        for ph in np.linspace(0.0, 2 * math.pi, 80, endpoint=False):
            u = np.array(
                [math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)]
            )
            best = min(best, crossing(u))
    assert umbilic.depth(S, x) == pytest.approx(best, rel=3e-3)
    assert umbilic.depth(S, x) <= best + 1e-9


@pytest.mark.parametrize("c,lam", [(-1.0, 1.5), (0.0, 2.0), (1.0, 1.0), (0.7, 0.5), (-2.5, 2.0)])
def test_lambda_sphere_area_against_lat_long_quadrature(c, lam):
    # independent oracle: integrate h^2 over the chart sphere of the
    # lambda-sphere through a point on the axis
    S = umbilic.sphere_through(c, lam, np.array([0.0, 0.0, 0.1]), -Z)
    z, rho = S.center, S.radius

    def band(theta):
        pt_r = rho * math.sin(theta)
        pt_z = z[2] + rho * math.cos(theta)
        h = 2.0 / (1.0 + c * (pt_r**2 + pt_z**2)) if c != 0.0 else 1.0
        return (h * rho) ** 2 * math.sin(theta) * 2.0 * math.pi

    val, _ = quad(band, 0.0, math.pi, epsabs=1e-13, epsrel=1e-13)
    assert umbilic.lambda_sphere_area(c, lam) == pytest.approx(val, rel=1e-10)
    assert umbilic.lambda_sphere_area(c, lam) == pytest.approx(
        4.0 * math.pi / (lam * lam + c), rel=1e-12
    )


def test_depth_geodesic_ball_closed_form():
    # geodesic sphere: depth is R - d(center, x)
    c, R = -1.0, 0.7
    center = np.zeros(3)
    p, d_out = chart.geodesic_transported(c, center, Z, R)
    lam = 1.0 / math.tanh(R)
    S = umbilic.sphere_through(c, lam, p, -d_out)
    x = np.array([0.1, -0.05, 0.02])
    d = chart.riemannian_distance(c, center, x)
    assert umbilic.depth(S, x) == pytest.approx(R - d, abs=1e-10)


def test_flipped_side_complement():
    S = umbilic.sphere_through(0.0, 1.0, np.array([0.3, 0.0, 0.0]), -X)
    flipped = umbilic.UmbilicSphere(
        c=S.c, lam=S.lam, center=S.center, radius=S.radius,
        offset=S.offset, side=S.side, flipped=True,
    )
    x = np.zeros(3)
    assert float(S.signed_dist(x)) == pytest.approx(-float(flipped.signed_dist(x)), abs=1e-13)
    assert flipped.signed_curvature == -S.lam
