"""Conformal chart of the model space M^d(c).

The metric is h(x)^2 * (Euclidean) with h(x) = 2/(1 + c|x|^2) for c != 0.
For c = 0 the chart is the identity (h == 1), so every Euclidean formula
is used unchanged.  For c < 0 the chart is the Poincare ball of radius
1/sqrt(-c); for c > 0 it is the stereographic chart of the sphere of
curvature c (the point at infinity is the antipode of the origin).

Geodesics are computed through the quadric embedding models: the unit
hyperboloid in Lorentz space R^{d,1} for c < 0 and the unit sphere
S^d in R^{d+1} for c > 0, after rescaling by s = sqrt(|c|).

All functions work for chart dimension d in {2, 3}.  Angles between
chart vectors equal Riemannian angles (conformality), so directions are
passed around as Euclidean unit vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# Points closer than this to the model boundary (c < 0) are rejected:
# the conformal factor blow-up destroys quadrature accuracy.
BOUNDARY_MARGIN = 1e-12


def conformal_factor(c: float, x: np.ndarray) -> float:
    """h(x); identity-chart convention h == 1 for c = 0."""
    if c == 0.0:
        return 1.0
    check_point(c, x)
    return 2.0 / (1.0 + c * float(np.dot(x, x)))


def check_point(c: float, x: np.ndarray) -> None:
    """Raise DomainError if x is not a valid chart point for curvature c."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("non-finite chart point")
    if c < 0.0:
        limit = 1.0 / np.sqrt(-c)
        if float(np.linalg.norm(x)) >= limit - BOUNDARY_MARGIN:
            raise DomainError(
                f"point at |x|={np.linalg.norm(x):.17g} outside the model "
                f"ball of radius {limit:.17g}"
            )


def in_hemisphere(c: float, x: np.ndarray) -> bool:
    """For c > 0: is x strictly inside the open hemisphere around the
    chart origin?  Always true for c <= 0 (valid points)."""
    if c <= 0.0:
        return True
    return float(np.linalg.norm(x)) < 1.0 / np.sqrt(c)


@dataclass(frozen=True)
class TangentVec:
    """Tangent vector at a chart point, stored in chart components."""

    base: np.ndarray
    v: np.ndarray

    def riemannian_norm(self, c: float) -> float:
        return conformal_factor(c, self.base) * float(np.linalg.norm(self.v))

    def direction(self) -> np.ndarray:
        n = float(np.linalg.norm(self.v))
        if n == 0.0:
            raise ValueError("zero tangent vector has no direction")
        return self.v / n


def unit_tangent(c: float, base: np.ndarray, direction: np.ndarray) -> TangentVec:
    """Riemannian unit tangent at ``base`` along the chart ``direction``."""
    base = np.asarray(base, dtype=float)
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    return TangentVec(base=base, v=d / conformal_factor(c, base))


def riemannian_distance(c: float, p: np.ndarray, q: np.ndarray) -> float:
    """Geodesic distance between two chart points."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    check_point(c, p)
    check_point(c, q)
    if c == 0.0:
        return float(np.linalg.norm(q - p))
    s = np.sqrt(abs(c))
    yp, yq = s * p, s * q
    d2 = float(np.dot(yp - yq, yp - yq))
    if c < 0.0:
        den = (1.0 - np.dot(yp, yp)) * (1.0 - np.dot(yq, yq)) + d2
        return 2.0 / s * float(np.arctanh(np.sqrt(d2 / den)))
    den = (1.0 + np.dot(yp, yp)) * (1.0 + np.dot(yq, yq)) - d2
    if den <= 0.0:
        # antipodal or beyond: clamp to half the great circle
        return np.pi / s
    return 2.0 / s * float(np.arctan(np.sqrt(d2 / den)))


# -- embedding models (unit curvature; internal) -----------------------------

def _embed(c: float, x: np.ndarray) -> np.ndarray:
    """Map a chart point to the unit quadric model (last coord is the
    time/pole component)."""
    s = np.sqrt(abs(c))
    y = s * np.asarray(x, dtype=float)
    r2 = float(np.dot(y, y))
    if c < 0.0:
        f = 1.0 / (1.0 - r2)
        return np.append(2.0 * y * f, (1.0 + r2) * f)
    f = 1.0 / (1.0 + r2)
    return np.append(2.0 * y * f, (1.0 - r2) * f)


def _unembed(c: float, X: np.ndarray) -> np.ndarray:
    s = np.sqrt(abs(c))
    den = 1.0 + X[-1]
    if den <= 0.0:
        raise DomainError("embedded point maps to chart infinity")
    return X[:-1] / (s * den)


def _embed_tangent(c: float, x: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Differential of the embedding applied to a chart vector."""
    s = np.sqrt(abs(c))
    y = s * np.asarray(x, dtype=float)
    w = s * np.asarray(v, dtype=float)
    r2 = float(np.dot(y, y))
    yw = float(np.dot(y, w))
    if c < 0.0:
        f = 1.0 / (1.0 - r2)
        return np.append(2.0 * w * f + 4.0 * y * yw * f * f, 4.0 * yw * f * f)
    f = 1.0 / (1.0 + r2)
    return np.append(2.0 * w * f - 4.0 * y * yw * f * f, -4.0 * yw * f * f)


def _lorentz_dot(X: np.ndarray, Y: np.ndarray) -> float:
    return float(np.dot(X[:-1], Y[:-1]) - X[-1] * Y[-1])


def _chart_velocity(c: float, X: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Push a model velocity through the inverse embedding (direction only
    is meaningful to callers)."""
    den = 1.0 + X[-1]
    return (V[:-1] * den - X[:-1] * V[-1]) / (den * den)


def geodesic_transported(
    c: float, p: np.ndarray, direction: np.ndarray, t: float
) -> tuple[np.ndarray, np.ndarray]:
    """Point at Riemannian distance t from p along the geodesic with the
    given initial chart direction, plus the transported (chart) direction
    of the geodesic at that point.

    ``direction`` need not be normalized; only its direction is used.
    """
    p = np.asarray(p, dtype=float)
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)
    check_point(c, p)
    if c == 0.0:
        return p + t * u, u
    s = np.sqrt(abs(c))
    X = _embed(c, p)
    U = _embed_tangent(c, p, u)
    ts = s * t
    if c < 0.0:
        U = U / np.sqrt(_lorentz_dot(U, U))
        Q = np.cosh(ts) * X + np.sinh(ts) * U
        Qdot = np.sinh(ts) * X + np.cosh(ts) * U
    else:
        U = U / np.linalg.norm(U)
        Q = np.cos(ts) * X + np.sin(ts) * U
        Qdot = -np.sin(ts) * X + np.cos(ts) * U
    q = _unembed(c, Q)
    check_point(c, q)
    w = _chart_velocity(c, Q, Qdot)
    nw = float(np.linalg.norm(w))
    if nw == 0.0:
        raise DomainError("degenerate transported direction")
    return q, w / nw


def geodesic_point(c: float, p: np.ndarray, direction: np.ndarray, t: float) -> np.ndarray:
    """Point at Riemannian distance t from p along the given chart direction."""
    q, _ = geodesic_transported(c, p, direction, t)
    return q


def ideal_point(c: float, p: np.ndarray, direction: np.ndarray) -> np.ndarray:
    """For c < 0: the boundary point of the model ball hit by the geodesic
    ray from p in the given chart direction."""
    if c >= 0.0:
        raise ValueError("ideal points exist only in the hyperbolic case")
    s = np.sqrt(-c)
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)
    X = _embed(c, p)
    U = _embed_tangent(c, p, u)
    U = U / np.sqrt(_lorentz_dot(U, U))
    N = X + U  # null vector of the ray's endpoint
    return N[:-1] / (s * N[-1])
