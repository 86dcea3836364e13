"""Riemannian measurements on a LambdaPolyhedron.

Facet areas use the zonal structure of the conformal weight: on a chart
sphere, h^2 depends only on the polar angle about the axis through the
chart origin, so the surface integral reduces to closed-form potentials
integrated along the boundary arcs (a spherical Green's theorem), plus a
pole term.  Everything else is 1D quadrature or closed forms.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import chart, quadrature
from .arrangement import Edge, Facet, LambdaPolyhedron
from .errors import DegenerateError, ToleranceError

DEFAULT_TOL = 1e-9


# -- zonal potential on a chart sphere ---------------------------------------

class _ZonalSphere:
    """Zonal potentials of h^2 on the sphere |x - z| = rho, in the polar
    coordinate mu = cos(angle about the axis z/|z|).

    P(mu) = int_{-1}^mu h^2 rho^2 dmu' (vanishes at the south pole) and
    Q(mu) = P(1) - P(mu) (vanishes at the north pole) both reduce to
    cancellation-free rational closed forms.  When the sphere crosses the
    chart singularity (c < 0 and |z| + rho >= 1/sqrt(-c)), only P is a
    valid antiderivative on the sub-singular range; Q and P(1) are not
    usable (``crossing`` is True then).
    """

    def __init__(self, c: float, z: np.ndarray, rho: float):
        self.c = c
        self.z = np.asarray(z, dtype=float)
        self.rho = rho
        nz = float(np.linalg.norm(self.z))
        self.axis = self.z / nz if nz > 1e-300 else np.array([0.0, 0.0, 1.0])
        self.a = 2.0 * rho * nz
        self.b = nz * nz + rho * rho
        # D(mu) = 1 + c(b + a mu) = 1 + c |x(mu)|^2; D(1) <= 0 marks the
        # chart-singularity crossing
        self.d_south = 1.0 + c * (self.b - self.a)
        self.d_north = 1.0 + c * (self.b + self.a)
        self.crossing = c < 0.0 and self.d_north <= 1e-12

    def P_gap(self, south_gap):
        """P expressed in the stable south-pole gap 1 + mu."""
        g = np.asarray(south_gap, dtype=float)
        if self.c == 0.0:
            return self.rho**2 * g
        return 4.0 * self.rho**2 * g / (self.d_south * (self.d_south + self.c * self.a * g))

    def Q_gap(self, north_gap):
        """Q expressed in the stable north-pole gap 1 - mu."""
        g = np.asarray(north_gap, dtype=float)
        if self.c == 0.0:
            return self.rho**2 * g
        return 4.0 * self.rho**2 * g / (self.d_north * (self.d_north - self.c * self.a * g))

    def P(self, mu):
        return self.P_gap(1.0 + np.asarray(mu, dtype=float))

    def Q(self, mu):
        return self.Q_gap(1.0 - np.asarray(mu, dtype=float))

    @property
    def total(self) -> float:
        """Full-sphere integral of h^2 over the sphere is 2 pi * P(1)."""
        if self.crossing:
            raise DegenerateError("sphere crosses the chart singularity")
        return 2.0 * math.pi * float(self.P(1.0))


def facet_area(K: LambdaPolyhedron, facet: Facet, tol: float = DEFAULT_TOL) -> float:
    """Riemannian area of one facet: integral of h^2 over the spherical
    region, via boundary line integrals of the zonal potential."""
    b = K.balls[facet.ball_index]
    zs = _ZonalSphere(K.c, b.center, b.radius)
    if not facet.loops:
        return zs.total

    axis = zs.axis
    # frame (b1, b2, axis) right-handed, for the azimuth about the axis
    k = int(np.argmin(np.abs(axis)))
    b1 = np.zeros(3)
    b1[k] = 1.0
    b1 -= (b1 @ axis) * axis
    b1 /= np.linalg.norm(b1)
    b2 = np.cross(axis, b1)

    # The azimuth derivative is singular at both poles; the potential must
    # vanish at whichever pole the boundary arcs come closest to.  Q vanishes
    # at the north pole (nonzero at south), -P vanishes at the south pole.
    # A chart-singularity-crossing sphere forces the P branch (Q is invalid
    # there, and the north pole lies outside the model anyway).  Pole gaps
    # 1 -+ mu are formed as |omega -+ axis|^2 / 2, which stays fully
    # accurate when a facet hugs a pole (collapsing bodies do).
    prox_n, prox_s, gap_max = _pole_proximity(K, facet, zs)
    north_vanishing = (not zs.crossing) and prox_s >= prox_n

    def pot_from_om(om):
        if north_vanishing:
            g = 0.5 * np.sum((om - axis) ** 2, axis=-1)
            return zs.Q_gap(g)
        g = 0.5 * np.sum((om + axis) ** 2, axis=-1)
        return -zs.P_gap(g)

    scale = 2.0 * math.pi * max(
        float(zs.Q_gap(gap_max) if north_vanishing else zs.P_gap(gap_max)), 1e-300
    )
    total = 0.0
    err = 0.0
    orient = b.eff_side  # loops are stored facet-left w.r.t. the actual ball
    for loop in facet.loops:
        for ei, d in loop:
            e = K.edges[ei]
            circ = e.circle

            def integrand(theta):
                x = circ.point(theta)
                v = circ.velocity(theta)
                om = (x - b.center) / b.radius
                omv = v / b.radius
                u1, u2 = om @ b1, om @ b2
                du1, du2 = omv @ b1, omv @ b2
                denom = u1 * u1 + u2 * u2
                phidot = (u1 * du2 - u2 * du1) / denom
                return pot_from_om(om) * phidot

            lo, hi = (e.theta0, e.theta1) if d == 1 else (e.theta1, e.theta0)
            val, er = quadrature.integrate(
                integrand, lo, hi, rel_tol=1e-12, abs_tol=tol * scale * 1e-3
            )
            total += val
            err += er
    total *= orient

    # correction at the pole where the potential does not vanish; on a
    # crossing sphere that pole is outside the model, never on the facet
    if not zs.crossing:
        pole_dir = -1.0 if north_vanishing else 1.0
        pole = b.center + b.radius * pole_dir * axis
        if _point_on_facet(K, facet, pole):
            total += 2.0 * math.pi * float(zs.P(1.0))
    if err > max(tol * abs(total), tol):
        raise ToleranceError("facet quadrature error estimate exceeds tolerance")
    return total


def _pole_proximity(K, facet, zs) -> tuple[float, float, float]:
    """Min sampled pole gaps (1 -+ mu, formed stably) of the boundary arcs,
    plus the largest gap toward the eventually chosen vanishing pole."""
    prox_n = prox_s = 2.0
    gn_max = gs_max = 0.0
    b = K.balls[facet.ball_index]
    for loop in facet.loops:
        for ei, _ in loop:
            e = K.edges[ei]
            th = np.linspace(e.theta0, e.theta1, 33)
            om = (e.circle.point(th) - b.center) / b.radius
            gn = 0.5 * np.sum((om - zs.axis) ** 2, axis=-1)
            gs = 0.5 * np.sum((om + zs.axis) ** 2, axis=-1)
            prox_n = min(prox_n, float(np.min(gn)))
            prox_s = min(prox_s, float(np.min(gs)))
            gn_max = max(gn_max, float(np.max(gn)))
            gs_max = max(gs_max, float(np.max(gs)))
    gap_max = gn_max if (not zs.crossing) and prox_s >= prox_n else gs_max
    return prox_n, prox_s, gap_max


def _point_on_facet(K, facet, x: np.ndarray) -> bool:
    others = [k for k in range(len(K.balls)) if k != facet.ball_index]
    if not others:
        return True
    return float(np.max(K.signed_dists(x)[others])) < 0.0


def surface_area(K: LambdaPolyhedron, tol: float = DEFAULT_TOL) -> float:
    """Sum of facet areas, accumulated in facet-index order."""
    return math.fsum(facet_area(K, f, tol) for f in K.facets)


# -- edges -------------------------------------------------------------------

def edge_length(K: LambdaPolyhedron, edge: Edge, tol: float = DEFAULT_TOL) -> float:
    """Riemannian length of the edge arc: integral of h along the circle."""
    circ = edge.circle
    if K.c == 0.0:
        return circ.radius * (edge.theta1 - edge.theta0)

    def integrand(theta):
        x = circ.point(theta)
        r2 = np.sum(x * x, axis=-1)
        return 2.0 / (1.0 + K.c * r2) * circ.radius

    val, _ = quadrature.integrate(
        integrand, edge.theta0, edge.theta1, rel_tol=max(tol * 1e-2, 1e-13)
    )
    return val


def normal_angle(K: LambdaPolyhedron, edge: Edge, eps: float = 1e-9) -> float:
    """Angle between the outer facet normals along the edge (constant by
    conformality; evaluated at the arc midpoint)."""
    x = edge.midpoint()
    i, j = edge.facet_pair
    ni = K.balls[i].outward_normal(x)
    nj = K.balls[j].outward_normal(x)
    beta = math.atan2(float(np.linalg.norm(np.cross(ni, nj))), float(ni @ nj))
    if beta < eps or beta > math.pi - eps:
        raise DegenerateError(f"degenerate edge angle beta={beta}")
    return beta


def edge_band_area(K: LambdaPolyhedron, edge: Edge) -> float:
    """Normal-band contribution 2 lambda * l_E * tan(beta_E / 2)."""
    ell = edge.length if not math.isnan(edge.length) else edge_length(K, edge)
    beta = edge.beta if not math.isnan(edge.beta) else normal_angle(K, edge)
    return 2.0 * K.lam * ell * math.tan(0.5 * beta)


# -- vertices ----------------------------------------------------------------

def vertex_normal_area(K: LambdaPolyhedron, vertex) -> float:
    """Spherical area of the region of outer unit normals at a vertex
    (Girard excess of the spherical polygon of facet normals)."""
    normals = [K.balls[i].outward_normal(vertex.point) for i in vertex.facets]
    k = len(normals)
    if k < 3:
        raise ValueError("vertex must have >= 3 incident facets")
    if k == 3 and float(np.linalg.det(np.stack(normals))) < 0.0:
        normals[1], normals[2] = normals[2], normals[1]
    angle_sum = 0.0
    for idx in range(k):
        n0 = normals[idx]
        ta = _tangent_arc(n0, normals[(idx - 1) % k])
        tb = _tangent_arc(n0, normals[(idx + 1) % k])
        ang = math.atan2(
            float(np.linalg.norm(np.cross(ta, tb))), float(ta @ tb)
        )
        angle_sum += ang
    area = angle_sum - (k - 2) * math.pi
    if not 0.0 < area < 2.0 * math.pi:
        raise DegenerateError(f"vertex normal polygon area {area} out of range")
    return area


def _tangent_arc(base: np.ndarray, target: np.ndarray) -> np.ndarray:
    t = target - float(base @ target) * base
    n = float(np.linalg.norm(t))
    if n < 1e-15:
        raise DegenerateError("coincident normals at a vertex")
    return t / n


def normal_cone_contains(K: LambdaPolyhedron, vertex, u: np.ndarray) -> np.ndarray:
    """Membership of directions in the positive hull of the vertex facet
    normals (Monte Carlo oracle support; u may be batched (N, 3))."""
    N = np.stack([K.balls[i].outward_normal(vertex.point) for i in vertex.facets])
    sol = np.linalg.solve(N.T, np.asarray(u, dtype=float).T).T
    return np.all(sol >= 0.0, axis=-1)


# -- volume ------------------------------------------------------------------

def support_value(K: LambdaPolyhedron, e: np.ndarray) -> float:
    """Exact support function max_{x in K} e . x (|e| = 1)."""
    best = -math.inf
    for v in K.vertices:
        best = max(best, float(e @ v.point))
    for edge in K.edges:
        circ = edge.circle
        a1, a2 = float(e @ circ.e1), float(e @ circ.e2)
        if math.hypot(a1, a2) > 1e-300:
            th = math.atan2(a2, a1)
            for cand in (th, th + 2.0 * math.pi):
                if edge.theta0 <= cand <= edge.theta1:
                    best = max(best, float(e @ circ.point(cand)))
    for f in K.facets:
        b = K.balls[f.ball_index]
        x = b.center + b.radius * e
        if _point_on_facet(K, f, x):
            best = max(best, float(e @ x))
    if not math.isfinite(best):
        raise DegenerateError("support computation found no boundary point")
    return best


def bounding_box(K: LambdaPolyhedron, pad: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    lo = np.empty(3)
    hi = np.empty(3)
    for k in range(3):
        e = np.zeros(3)
        e[k] = 1.0
        hi[k] = support_value(K, e) + pad
        lo[k] = -support_value(K, -e) - pad
    return lo, hi


def volume_mc(
    K: LambdaPolyhedron, n: int = 10**6, seed: int = 0
) -> tuple[float, float]:
    """Monte Carlo volume over the chart bounding box with weight h^3.

    Returns (estimate, standard_error); deterministic for a fixed seed.
    """
    lo, hi = bounding_box(K)
    box_vol = float(np.prod(hi - lo))
    rng = np.random.Generator(np.random.Philox(key=abs(int(seed))))
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n:
        batch = min(250_000, n - done)
        pts = lo + (hi - lo) * rng.random((batch, 3))
        inside = K.contains(pts)
        if K.c == 0.0:
            w = inside.astype(float)
        else:
            w = np.zeros(batch)
            p_in = pts[inside]
            w[inside] = (2.0 / (1.0 + K.c * np.sum(p_in * p_in, axis=1))) ** 3
        total += float(np.sum(w))
        total_sq += float(np.sum(w * w))
        done += batch
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0)
    return box_vol * mean, box_vol * math.sqrt(var / n)


# -- Gauss-Bonnet ------------------------------------------------------------

@dataclass(frozen=True)
class GBReport:
    term_area: float
    term_edges: float
    term_vertices: float

    @property
    def total(self) -> float:
        return self.term_area + self.term_edges + self.term_vertices

    @property
    def residual(self) -> float:
        return self.total - 4.0 * math.pi

    def as_dict(self) -> dict:
        return {
            "term_area": self.term_area,
            "term_edges": self.term_edges,
            "term_vertices": self.term_vertices,
            "total": self.total,
            "residual": self.residual,
        }


def fill_edge_measurements(K: LambdaPolyhedron, tol: float = DEFAULT_TOL) -> None:
    for e in K.edges:
        if math.isnan(e.length):
            e.length = edge_length(K, e, tol)
        if math.isnan(e.beta):
            e.beta = normal_angle(K, e)


def edge_sum(K: LambdaPolyhedron, tol: float = DEFAULT_TOL) -> float:
    """Sum over edges of l_E * tan(beta_E / 2)."""
    fill_edge_measurements(K, tol)
    return math.fsum(e.length * math.tan(0.5 * e.beta) for e in K.edges)


def gauss_bonnet_report(K: LambdaPolyhedron, tol: float = DEFAULT_TOL) -> GBReport:
    """The three terms of the polyhedral Gauss-Bonnet identity; their sum
    is 4 pi up to quadrature error."""
    area = surface_area(K, tol)
    lam = K.lam
    term_area = (lam * lam + K.c) * area
    term_edges = 2.0 * lam * edge_sum(K, tol)
    term_vertices = math.fsum(vertex_normal_area(K, v) for v in K.vertices)
    return GBReport(term_area, term_edges, term_vertices)


def total_curvature(K: LambdaPolyhedron, tol: float = DEFAULT_TOL) -> float:
    """TC(K) through its closed-form decomposition 4 pi - c |dK|."""
    return 4.0 * math.pi - K.c * surface_area(K, tol)


# -- Frenet oracle -----------------------------------------------------------

def frenet_curvature_fd(K: LambdaPolyhedron, edge: Edge, h: float = 1e-4) -> float:
    """Riemannian Frenet curvature k of the edge circle at its midpoint,
    by central finite differences in the quadric embedding model.  This
    is deliberately independent of the closed-form machinery."""
    c = K.c
    circ = edge.circle
    th0 = 0.5 * (edge.theta0 + edge.theta1)
    if c == 0.0:
        embed = lambda th: circ.point(th)
        dot = lambda A, B: float(A @ B)
        model_sign = 0.0
    else:
        embed = lambda th: chart._embed(c, circ.point(th))
        if c < 0.0:
            dot = chart._lorentz_dot
        else:
            dot = lambda A, B: float(A @ B)
        model_sign = 1.0
    Ym = embed(th0 - h)
    Y0 = embed(th0)
    Yp = embed(th0 + h)
    Yd = (Yp - Ym) / (2.0 * h)
    Ydd = (Yp - 2.0 * Y0 + Ym) / (h * h)
    v2 = dot(Yd, Yd)
    v = math.sqrt(v2)
    vdot = dot(Ydd, Yd) / v
    # acceleration w.r.t. model arclength
    acc = (Ydd - Yd * (vdot / v)) / v2
    if model_sign:
        # project out the quadric normal (the position vector)
        YY = dot(Y0, Y0)  # +1 (sphere) or -1 (hyperboloid)
        acc = acc - Y0 * (dot(acc, Y0) / YY)
    k_model = math.sqrt(max(dot(acc, acc), 0.0))
    s = math.sqrt(abs(c)) if c != 0.0 else 1.0
    return s * k_model if c != 0.0 else k_model


# -- reports -----------------------------------------------------------------

def body_report(
    K: LambdaPolyhedron,
    tol: float = DEFAULT_TOL,
    mc_n: int = 10**6,
    mc_seed: int = 0,
) -> dict:
    vol, se = volume_mc(K, mc_n, mc_seed)
    gb = gauss_bonnet_report(K, tol)
    return {
        "c": K.c,
        "lambda": K.lam,
        "n_facets": K.n_facets,
        "n_edges": K.n_edges,
        "n_vertices": K.n_vertices,
        "area": surface_area(K, tol),
        "volume_mc": vol,
        "volume_se": se,
        "gb": gb.as_dict(),
    }


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)
