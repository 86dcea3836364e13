"""Totally umbilical spheres of constant normal curvature and their balls.

A sphere of curvature ``lam`` (w.r.t. the inward normal of its ball) is
stored as an oriented Euclidean sphere or plane in the conformal chart.
All metric quantities are recovered through the conformal factor; angles
and directions are chart-exact.

The stored fields always satisfy ``lam >= 0``.  When the curvature flow
drives the signed curvature negative (an equidistant eroded past its base
plane), the object keeps ``lam = |curvature|`` and flips ``ball_side``
via the ``flipped`` flag; ``signed_curvature`` exposes the true value.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from . import chart
from .errors import BlowUpError, DegenerateError, EmptyBodyError, NonCompactSphereError

# Below this |1/a| the chart shape is numerically planar.
_PLANE_THRESHOLD = 1e-12


class SphereClass(enum.Enum):
    GEODESIC_SPHERE = "geodesic_sphere"
    HOROSPHERE = "horosphere"
    EQUIDISTANT = "equidistant"
    EUCLIDEAN_SPHERE = "euclidean_sphere"
    SPHERICAL_GEODESIC_SPHERE = "spherical_geodesic_sphere"


class Containment(enum.Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class UmbilicSphere:
    """Oriented umbilic sphere in the conformal chart of M^d(c).

    ``center``/``radius`` describe a Euclidean sphere; if ``radius`` is
    None the shape is the plane {normal . x = offset} with unit
    ``normal`` stored in ``center`` and ``offset`` in ``offset``.

    ``side`` = +1 means the stored lam-ball is the Euclidean inside
    (resp. {normal . x <= offset}), -1 the outside.  ``flipped`` means
    the actual region bounded by the surface is the complement of the
    stored ball (negative signed curvature).
    """

    c: float
    lam: float
    center: np.ndarray
    radius: float | None
    offset: float
    side: int
    flipped: bool = False

    # -- basic geometry ------------------------------------------------------

    @property
    def is_plane(self) -> bool:
        return self.radius is None

    @property
    def signed_curvature(self) -> float:
        return -self.lam if self.flipped else self.lam

    @property
    def eff_side(self) -> int:
        """+1 if the actual ball is the Euclidean inside of the shape."""
        return -self.side if self.flipped else self.side

    def signed_dist(self, x: np.ndarray) -> np.ndarray | float:
        """Euclidean signed distance; negative inside the actual ball."""
        x = np.asarray(x, dtype=float)
        if self.is_plane:
            base = x @ self.center - self.offset
        else:
            base = np.linalg.norm(x - self.center, axis=-1) - self.radius
        return self.eff_side * base

    def outward_normal(self, x: np.ndarray) -> np.ndarray:
        """Euclidean unit normal at a surface point, pointing out of the
        actual ball.  Equals the Riemannian outward direction."""
        if self.is_plane:
            return self.eff_side * self.center
        v = np.asarray(x, dtype=float) - self.center
        return self.eff_side * v / np.linalg.norm(v)

    def base_point(self) -> np.ndarray:
        """A deterministic valid chart point on the surface."""
        if self.is_plane:
            return self.offset * self.center
        z = self.center
        nz = float(np.linalg.norm(z))
        zhat = z / nz if nz > 1e-300 else _axis_like(z)
        for p in (z - self.radius * zhat, z + self.radius * zhat):
            try:
                chart.check_point(self.c, p)
                return p
            except Exception:
                continue
        raise DegenerateError("umbilic sphere has no valid chart point on axis")

    def normal_curvature_at(self, x: np.ndarray) -> float:
        """Signed normal curvature recomputed from the Euclidean data at a
        surface point; constant (== signed_curvature) up to roundoff."""
        h = chart.conformal_factor(self.c, x)
        kappa = 0.0 if self.is_plane else self.eff_side / self.radius
        nu_out = self.outward_normal(x)
        # grad log h = -c h x
        return (kappa - self.c * h * float(nu_out @ np.asarray(x))) / h


def _axis_like(z: np.ndarray) -> np.ndarray:
    e = np.zeros_like(np.asarray(z, dtype=float))
    e[0] = 1.0
    return e


# -- construction ------------------------------------------------------------

def sphere_through_signed(
    c: float, lam_signed: float, p: np.ndarray, n_in: np.ndarray
) -> UmbilicSphere:
    """Umbilic sphere through p with inward chart normal direction ``n_in``
    and signed normal curvature ``lam_signed`` (w.r.t. that normal)."""
    p = np.asarray(p, dtype=float)
    n = np.asarray(n_in, dtype=float)
    n = n / np.linalg.norm(n)
    chart.check_point(c, p)
    h = chart.conformal_factor(c, p)
    denom = h * (lam_signed - c * float(n @ p))
    if abs(denom) < _PLANE_THRESHOLD:
        # numerically planar: store the plane with the ball on the n side
        if lam_signed >= 0.0:
            return UmbilicSphere(c, abs(lam_signed), n, None, float(n @ p), side=-1)
        return UmbilicSphere(
            c, abs(lam_signed), n, None, float(n @ p), side=+1, flipped=True
        )
    a = 1.0 / denom
    center = p + a * n
    radius = abs(a)
    actual_side = 1 if a > 0 else -1
    if lam_signed >= 0.0:
        return UmbilicSphere(c, lam_signed, center, radius, 0.0, side=actual_side)
    return UmbilicSphere(
        c, -lam_signed, center, radius, 0.0, side=-actual_side, flipped=True
    )


def sphere_through(
    c: float, lam: float, p: np.ndarray, n_in: np.ndarray
) -> UmbilicSphere:
    """Supporting lambda-sphere through p with inward normal n_in (lam > 0)."""
    if lam <= 0.0:
        raise ValueError("lambda must be positive")
    return sphere_through_signed(c, lam, p, n_in)


def classify(S: UmbilicSphere) -> SphereClass:
    if S.c == 0.0:
        return SphereClass.EUCLIDEAN_SPHERE
    if S.c > 0.0:
        return SphereClass.SPHERICAL_GEODESIC_SPHERE
    s = math.sqrt(-S.c)
    if S.lam > s * (1.0 + 1e-13):
        return SphereClass.GEODESIC_SPHERE
    if S.lam >= s * (1.0 - 1e-13):
        return SphereClass.HOROSPHERE
    return SphereClass.EQUIDISTANT


def ball_contains(S: UmbilicSphere, p: np.ndarray, eps: float = 1e-9) -> Containment:
    d = float(S.signed_dist(p))
    if d < -eps:
        return Containment.INSIDE
    if d > eps:
        return Containment.OUTSIDE
    return Containment.BOUNDARY


# -- curvature flow (lambda' = lambda^2 + c) ---------------------------------

def _cs(c: float, t: float) -> tuple[float, float]:
    """Generalized cosine/sine C, S with C' = -cS, S' = C, C(0)=1, S(0)=0."""
    if c == 0.0:
        return 1.0, t
    s = math.sqrt(abs(c))
    if c < 0.0:
        return math.cosh(s * t), math.sinh(s * t) / s
    return math.cos(s * t), math.sin(s * t) / s


def blow_up_time(c: float, lam0: float) -> float:
    """First blow-up time of lambda' = lambda^2 + c from lam0 (inf if none).
    Finite exactly when the lam0-ball is compact; equals its inradius."""
    if c == 0.0:
        return 1.0 / lam0 if lam0 > 0.0 else math.inf
    s = math.sqrt(abs(c))
    if c < 0.0:
        if lam0 > s:
            return math.atanh(s / lam0) / s
        return math.inf
    # c > 0: cot(s t*) = lam0 / s, first positive root
    return math.atan2(1.0, lam0 / s) / s


def lambda_at(c: float, lam0: float, t: float) -> float:
    """Closed-form solution of lambda' = lambda^2 + c with lambda(0)=lam0.

    Derivation: lambda = -u'/u with u'' = -c u, u(0)=1, u'(0)=-lam0, so
    lambda(t) = (c S + lam0 C) / (C - lam0 S).
    """
    if t < 0.0:
        raise ValueError("t must be >= 0")
    C, S = _cs(c, t)
    u = C - lam0 * S
    if u <= 0.0:
        raise BlowUpError(
            f"lambda flow from {lam0} blew up at t={blow_up_time(c, lam0):.17g} <= {t}"
        )
    return (c * S + lam0 * C) / u


# -- erosion -----------------------------------------------------------------

def erode(S: UmbilicSphere, t: float) -> UmbilicSphere:
    """Boundary of {x : B(x, t) is contained in the actual ball of S}.

    Same axis in the Riemannian sense; curvature lambda(t).
    """
    if t < 0.0:
        raise ValueError("t must be >= 0")
    if t == 0.0:
        return S
    lam0 = S.signed_curvature
    tb = blow_up_time(S.c, lam0)
    if t >= tb:
        raise EmptyBodyError(
            f"erosion depth {t} >= ball inradius {tb:.17g}: empty erosion"
        )
    lam_t = lambda_at(S.c, lam0, t)
    p = S.base_point()
    n_in = -S.outward_normal(p)
    if S.c == 0.0:
        q, d = p + t * n_in, n_in
    else:
        q, d = chart.geodesic_transported(S.c, p, n_in, t)
    return sphere_through_signed(S.c, lam_t, q, d)


def lambda_sphere_area(c: float, lam: float) -> float:
    """Closed-form area of a compact lambda-sphere: 4 pi / (lam^2 + c)."""
    k = lam * lam + c
    if k <= 0.0:
        raise NonCompactSphereError(
            "horosphere/equidistant has infinite area (lambda^2 + c <= 0)"
        )
    return 4.0 * math.pi / k


# -- Riemannian depth inside the ball ----------------------------------------

def _n_plus(S: UmbilicSphere, p: np.ndarray) -> np.ndarray:
    """Unit normal at p pointing to the side of positive curvature +lam
    (the inward normal of the stored, non-flipped ball)."""
    out = S.outward_normal(p)
    return out if S.flipped else -out


def depth(S: UmbilicSphere, x: np.ndarray) -> float:
    """Riemannian depth of x inside the actual ball of S (negative
    outside): the largest t with x inside the t-eroded ball."""
    x = np.asarray(x, dtype=float)
    c = S.c
    if c == 0.0:
        return -float(S.signed_dist(x))
    chart.check_point(c, x)
    s = math.sqrt(abs(c))
    p = S.base_point()
    np_dir = _n_plus(S, p)
    sign = -1.0 if S.flipped else 1.0
    if c > 0.0 or S.lam > s * (1.0 + 1e-13):
        # geodesic sphere of radius R about a Riemannian center
        if c > 0.0:
            R = math.atan2(1.0, S.lam / s) / s
        else:
            R = math.atanh(s / S.lam) / s
        zeta = chart.geodesic_point(c, p, np_dir, R)
        return sign * (R - chart.riemannian_distance(c, zeta, x))
    if S.lam >= s * (1.0 - 1e-13):
        # horosphere: Busemann function of the ideal point along n_plus
        X = chart._embed(c, x)
        P = chart._embed(c, p)
        U = chart._embed_tangent(c, p, np_dir)
        U = U / math.sqrt(chart._lorentz_dot(U, U))
        N = P + U
        bp = math.log(-chart._lorentz_dot(P, N))
        bx = math.log(-chart._lorentz_dot(X, N))
        return sign * (bp - bx) / s
    # equidistant: signed distance to the base plane, offset by d0
    d0 = math.atanh(S.lam / s) / s
    pb, dirb = chart.geodesic_transported(c, p, np_dir, d0)
    W = chart._embed_tangent(c, pb, dirb)
    W = W / math.sqrt(chart._lorentz_dot(W, W))
    X = chart._embed(c, x)
    sigma = math.asinh(chart._lorentz_dot(X, W)) / s
    return sign * (sigma + d0)


def with_jitter(S: UmbilicSphere, rng: np.random.Generator, scale: float) -> UmbilicSphere:
    """Perturb the Euclidean shape parameters (general-position retry)."""
    if S.is_plane:
        n = S.center + scale * rng.standard_normal(S.center.shape)
        n = n / np.linalg.norm(n)
        return replace(S, center=n, offset=S.offset + scale * rng.standard_normal())
    return replace(
        S,
        center=S.center + scale * rng.standard_normal(S.center.shape),
        radius=S.radius * (1.0 + scale * rng.standard_normal()),
    )
