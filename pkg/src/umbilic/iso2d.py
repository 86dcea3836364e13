"""Lambda-convex polygons in the hyperbolic plane (c = -1, Poincare disc).

The chart, umbilic discs, erosion closed forms and the Riccati curvature
flow are shared with the 3D modules (everything there is dimension
agnostic); only the arrangement degenerates to circular-arc polygon
assembly.  Perimeter is the line integral of h, area the Green line
integral of the vector potential F = 2(-y, x)/(1 - |x|^2) with
curl F = h^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import chart, quadrature, umbilic
from .errors import (
    DegenerateError,
    EmptyBodyError,
    EventNearbyError,
    NonCompactError,
    UnattainableError,
)
from .flow import EVENT_RESOLUTION, FlowCurve, FlowSample
from .umbilic import UmbilicSphere

C2 = -1.0
EPS_GEOM = 1e-9
_MAX_RETRIES = 5


@dataclass
class Side:
    disc_index: int
    theta0: float
    theta1: float  # traversal from theta0 to theta1 in the direction below
    direction: int  # +1 counterclockwise on the chart circle, -1 clockwise
    v_start: int | None
    v_end: int | None
    length: float = math.nan

    @property
    def is_full_circle(self) -> bool:
        return self.v_start is None


class LambdaPolygon:
    """Intersection of lambda-discs in H^2 with measured boundary."""

    def __init__(self, lam, discs, labels, sides, vertex_points, angles):
        self.c = C2
        self.lam = lam
        self.discs = discs
        self.labels = labels
        self.sides = sides  # ordered along the boundary loop
        self.vertex_points = vertex_points
        self.angles = angles  # beta_i at vertex i, aligned with vertex_points
        self._incenter = None
        self._inradius = None
        self._perimeter = None
        self._area = None

    @property
    def n_sides(self) -> int:
        return len(self.sides)

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_points)

    def signed_dists(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        Z = np.stack([b.center for b in self.discs])
        R = np.array([b.radius for b in self.discs])
        eff = np.array([b.eff_side for b in self.discs], dtype=float)
        diff = x[..., None, :] - Z
        return eff * (np.linalg.norm(diff, axis=-1) - R)

    def contains(self, x: np.ndarray, eps: float = 0.0) -> np.ndarray:
        return np.max(self.signed_dists(x), axis=-1) <= eps

    def min_depth(self, x: np.ndarray) -> float:
        return min(umbilic.depth(b, x) for b in self.discs)

    def signature(self) -> tuple:
        labs = tuple(sorted(self.labels[s.disc_index] for s in self.sides))
        return labs, self.n_vertices

    def _point_of(self, disc_index: int, theta: float) -> np.ndarray:
        b = self.discs[disc_index]
        return b.center + b.radius * np.stack(
            [np.cos(theta), np.sin(theta)], axis=-1
        )

    # -- measurements --------------------------------------------------------

    @property
    def perimeter(self) -> float:
        if self._perimeter is None:
            for s in self.sides:
                if math.isnan(s.length):
                    s.length = self._side_length(s)
            self._perimeter = math.fsum(s.length for s in self.sides)
        return self._perimeter

    def _side_length(self, s: Side) -> float:
        b = self.discs[s.disc_index]

        def f(theta):
            x = self._point_of(s.disc_index, theta)
            return 2.0 / (1.0 - np.sum(x * x, axis=-1)) * b.radius

        val, _ = quadrature.integrate(f, s.theta0, s.theta1, rel_tol=1e-13)
        return val

    @property
    def area(self) -> float:
        if self._area is None:
            total = 0.0
            for s in self.sides:
                b = self.discs[s.disc_index]

                def f(theta):
                    x = self._point_of(s.disc_index, theta)
                    r2 = np.sum(x * x, axis=-1)
                    # F . dx/dtheta for F = 2(-y, x)/(1 - r^2)
                    vx = b.radius * (-np.sin(theta))
                    vy = b.radius * np.cos(theta)
                    return 2.0 * (-x[..., 1] * vx + x[..., 0] * vy) / (1.0 - r2)

                lo, hi = (
                    (s.theta0, s.theta1)
                    if s.direction == 1
                    else (s.theta1, s.theta0)
                )
                val, _ = quadrature.integrate(f, lo, hi, rel_tol=1e-13)
                total += val
            self._area = total
        return self._area

    def interior_point(self) -> np.ndarray:
        if self._incenter is None:
            self._compute_incenter()
        return self._incenter

    def inradius_opt(self) -> float:
        if self._inradius is None:
            self._compute_incenter()
        return self._inradius

    def _compute_incenter(self) -> None:
        from scipy.optimize import minimize

        if self.vertex_points:
            x0 = np.mean(self.vertex_points, axis=0)
        else:
            x0 = self.discs[self.sides[0].disc_index].base_point()
        n = float(np.linalg.norm(x0))
        if n >= 0.99:
            x0 = x0 * (0.99 / n)

        def safe(x):
            try:
                return self.min_depth(x)
            except Exception:
                return -1e6

        res = minimize(
            lambda x: -safe(x),
            x0,
            method="Nelder-Mead",
            options={"xatol": 1e-11, "fatol": 1e-13, "maxfev": 3000},
        )
        best_x, best_val = np.asarray(res.x, dtype=float), -res.fun
        y0 = np.append(best_x, best_val)

        def depth_b(b, x):
            try:
                return umbilic.depth(b, x)
            except Exception:
                return -1e6

        cons = [
            {"type": "ineq", "fun": (lambda y, b=b: depth_b(b, y[:2]) - y[2])}
            for b in self.discs
        ]
        res = minimize(
            lambda y: -y[2],
            y0,
            method="SLSQP",
            constraints=cons,
            options={"ftol": 1e-14, "maxiter": 300},
        )
        if res.success and safe(res.x[:2]) > best_val - 1e-12:
            best_x, best_val = np.asarray(res.x[:2], dtype=float), safe(res.x[:2])
        # small-simplex refinement: the max-min objective is only piecewise
        # smooth at the incenter, where gradient methods stall
        scale = max(1e-5, 1e-7 * (1.0 + float(np.linalg.norm(best_x))))
        simplex = np.vstack([best_x] + [best_x + scale * e for e in np.eye(2)])
        res = minimize(
            lambda x: -safe(x),
            best_x,
            method="Nelder-Mead",
            options={
                "xatol": 1e-13,
                "fatol": 1e-15,
                "maxfev": 2000,
                "initial_simplex": simplex,
            },
        )
        if -res.fun > best_val:
            best_x, best_val = np.asarray(res.x, dtype=float), -res.fun
        self._incenter = best_x
        self._inradius = best_val


# -- construction ------------------------------------------------------------

def build_polygon(
    lam: float,
    discs: list[UmbilicSphere],
    labels: list[int] | None = None,
    eps_geom: float = EPS_GEOM,
) -> LambdaPolygon:
    if not discs:
        raise ValueError("need at least one disc")
    if labels is None:
        labels = list(range(len(discs)))
    for b in discs:
        if b.is_plane:
            raise DegenerateError("line-backed disc reached the arrangement")
        if abs(b.signed_curvature - lam) > 1e-9 * max(1.0, abs(lam)):
            raise ValueError("all discs must share lambda")
    m = len(discs)

    def sd(x, exclude):
        worst = -math.inf
        for l, b in enumerate(discs):
            if l in exclude:
                continue
            worst = max(worst, float(b.signed_dist(x)))
        return worst

    # vertices: pairwise circle intersections surviving all other discs
    verts: list[np.ndarray] = []
    vert_discs: list[tuple[int, int]] = []
    angles_on: dict[int, list[tuple[float, int]]] = {i: [] for i in range(m)}
    for i, j in combinations(range(m), 2):
        zi, zj = discs[i].center, discs[j].center
        ri, rj = discs[i].radius, discs[j].radius
        t = zj - zi
        d = float(np.linalg.norm(t))
        if d < eps_geom:
            if abs(ri - rj) < eps_geom:
                raise DegenerateError("nearly concentric equal discs")
            continue
        if abs(d - (ri + rj)) < eps_geom or abs(d - abs(ri - rj)) < eps_geom:
            raise DegenerateError("nearly tangent discs")
        if d > ri + rj or d < abs(ri - rj):
            continue
        that = t / d
        perp = np.array([-that[1], that[0]])
        alpha = (d * d + ri * ri - rj * rj) / (2.0 * d)
        hh = ri * ri - alpha * alpha
        for sgn in (+1.0, -1.0):
            x = zi + alpha * that + sgn * math.sqrt(hh) * perp
            worst = sd(x, (i, j))
            if worst > eps_geom:
                continue
            if worst > -eps_geom and m > 2:
                raise DegenerateError("near-triple circle point")
            vid = len(verts)
            verts.append(x)
            vert_discs.append((i, j))
            for k, z, r in ((i, zi, ri), (j, zj, rj)):
                angles_on[k].append(
                    (math.atan2(x[1] - z[1], x[0] - z[0]), vid)
                )

    # arcs on each circle
    sides: list[Side] = []
    for i in range(m):
        entries = sorted(angles_on[i])
        if not entries:
            probes = [0.0, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0]
            z, r = discs[i].center, discs[i].radius
            pts = [z + r * np.array([math.cos(t), math.sin(t)]) for t in probes]
            ws = [sd(x, (i,)) for x in pts]
            if all(w < -eps_geom for w in ws):
                sides.append(
                    Side(i, 0.0, 2.0 * math.pi, discs[i].eff_side, None, None)
                )
            elif all(w > eps_geom for w in ws):
                continue  # redundant disc
            else:
                raise DegenerateError("vertex-free circle partially inside")
            continue
        n = len(entries)
        for a in range(n):
            th0, v0 = entries[a]
            th1, v1 = entries[(a + 1) % n]
            if a == n - 1:
                th1 += 2.0 * math.pi
            if th1 - th0 < eps_geom:
                raise DegenerateError("vanishing arc between vertices")
            thm = 0.5 * (th0 + th1)
            z, r = discs[i].center, discs[i].radius
            xm = z + r * np.array([math.cos(thm), math.sin(thm)])
            if sd(xm, (i,)) < -eps_geom:
                d = discs[i].eff_side
                vs, ve = (v0, v1) if d == 1 else (v1, v0)
                sides.append(Side(i, th0, th1, d, vs, ve))

    if not sides:
        raise EmptyBodyError("intersection of the given discs is empty")

    # assemble the single boundary loop (convexity), prune unused discs
    sides = _order_loop(sides)
    kept = sorted({s.disc_index for s in sides})
    remap = {old: new for new, old in enumerate(kept)}
    new_discs = [discs[i] for i in kept]
    new_labels = [labels[i] for i in kept]
    for s in sides:
        s.disc_index = remap[s.disc_index]

    # vertex order along the loop; beta from the outward normals
    vertex_points: list[np.ndarray] = []
    angles: list[float] = []
    for a, s in enumerate(sides):
        if s.is_full_circle:
            continue
        s2 = sides[(a + 1) % len(sides)]
        x = verts[s.v_end]
        n1 = new_discs[s.disc_index].outward_normal(x)
        n2 = new_discs[s2.disc_index].outward_normal(x)
        beta = math.atan2(abs(n1[0] * n2[1] - n1[1] * n2[0]), float(n1 @ n2))
        if beta < eps_geom or beta > math.pi - eps_geom:
            raise DegenerateError(f"degenerate polygon angle beta={beta}")
        vertex_points.append(x)
        angles.append(beta)

    P = LambdaPolygon(lam, new_discs, new_labels, sides, vertex_points, angles)
    _check_compact_2d(P)
    return P


def _order_loop(sides: list[Side]) -> list[Side]:
    if len(sides) == 1 and sides[0].is_full_circle:
        return sides
    if any(s.is_full_circle for s in sides):
        raise DegenerateError("full circle mixed with polygon arcs")
    start_of = {}
    for s in sides:
        if s.v_start in start_of:
            raise DegenerateError("boundary is not a single loop")
        start_of[s.v_start] = s
    ordered = []
    s = sides[0]
    v0 = s.v_start
    while True:
        ordered.append(s)
        if s.v_end == v0:
            break
        if s.v_end not in start_of or len(ordered) > len(sides):
            raise DegenerateError("open boundary chain")
        s = start_of[s.v_end]
    if len(ordered) != len(sides):
        raise DegenerateError("disconnected boundary arcs")
    return ordered


def _check_compact_2d(P: LambdaPolygon) -> None:
    margin = 1e-6
    far = 0.0
    for x in P.vertex_points:
        far = max(far, float(np.linalg.norm(x)))
    for s in P.sides:
        b = P.discs[s.disc_index]
        nz = float(np.linalg.norm(b.center))
        if nz > 1e-300:
            th = math.atan2(b.center[1], b.center[0])
            for cand in (th, th + 2.0 * math.pi):
                if s.theta0 <= cand <= s.theta1:
                    far = max(far, nz + b.radius)
    if far >= 1.0 - margin:
        raise NonCompactError("polygon closure reaches the ideal boundary")
    th = 2.0 * math.pi * (np.arange(512) + 0.5) / 512
    probe = (1.0 - margin) * np.stack([np.cos(th), np.sin(th)], axis=1)
    if bool(np.any(P.contains(probe))):
        raise NonCompactError("polygon is unbounded toward the ideal boundary")


def random_polygon(
    seed: int, lam: float, m: int, rho0: float, eps_geom: float = EPS_GEOM
) -> LambdaPolygon:
    """Intersection of m supporting lambda-discs of the geodesic disc
    B(origin, rho0), at seeded jittered uniform outer-normal angles."""
    if m < 1:
        raise ValueError("m must be >= 1")
    tb = umbilic.blow_up_time(C2, lam)
    if rho0 >= tb:
        raise ValueError(f"rho0={rho0} exceeds the lambda-disc inradius {tb:.17g}")
    origin = np.zeros(2)
    rng = np.random.Generator(np.random.Philox(key=abs(int(seed)) + (1 << 33)))
    base = 2.0 * math.pi * np.arange(m) / m
    last_err = None
    for _ in range(_MAX_RETRIES + 1):
        phis = base + (0.7 / m) * rng.standard_normal(m)
        discs = []
        for phi in phis:
            u = np.array([math.cos(phi), math.sin(phi)])
            p = chart.geodesic_point(C2, origin, u, rho0)
            discs.append(umbilic.sphere_through(C2, lam, p, -u))
        try:
            return build_polygon(lam, discs, eps_geom=eps_geom)
        except DegenerateError as err:
            last_err = err
    raise DegenerateError(f"random polygon stayed degenerate: {last_err}")


# -- Gauss-Bonnet and angle bounds -------------------------------------------

def gb2_report(P: LambdaPolygon) -> dict:
    """2 pi = -|K| + lambda |dK| + sum beta_i for lambda-convex polygons."""
    rhs = -P.area + P.lam * P.perimeter + math.fsum(P.angles)
    return {"lhs": 2.0 * math.pi, "rhs": rhs, "residual": rhs - 2.0 * math.pi}


def make_twogon(lam: float, w: float) -> LambdaPolygon:
    """2-gon of half-width w: two lambda-discs with apexes at geodesic
    distance w from the origin along the x-axis."""
    if w <= 0.0:
        raise ValueError("half-width must be positive")
    tb = umbilic.blow_up_time(C2, lam)
    if w >= tb:
        raise EmptyBodyError(f"half-width {w} reaches the disc inradius {tb:.17g}")
    origin = np.zeros(2)
    e = np.array([1.0, 0.0])
    discs = []
    for sgn in (+1.0, -1.0):
        p, d = chart.geodesic_transported(C2, origin, sgn * e, w)
        discs.append(umbilic.sphere_through(C2, lam, p, -d))
    P = build_polygon(lam, discs)
    if P.n_sides != 2 or P.n_vertices != 2:
        raise DegenerateError("2-gon construction failed")
    return P


def twogon_for_perimeter(lam: float, target: float, tol: float = 1e-10) -> LambdaPolygon:
    """The 2-gon with |dL| = target by bisection on the monotone width map."""
    from scipy.optimize import brentq

    if target <= 0.0:
        raise UnattainableError("target perimeter must be positive")
    tb = umbilic.blow_up_time(C2, lam)

    def per(w):
        return make_twogon(lam, w).perimeter

    if math.isfinite(tb):
        hi = tb * (1.0 - 1e-9)
        while True:
            try:
                p_hi = per(hi)
                break
            except (DegenerateError, NonCompactError):
                hi *= 1.0 - 1e-6
                if hi < tb * 0.5:
                    raise UnattainableError("no buildable 2-gon near the width limit")
        if p_hi < target:
            raise UnattainableError(
                f"target perimeter {target} exceeds the widest 2-gon"
            )
    else:
        hi = 0.5
        while per(hi) < target:
            hi *= 2.0
            if hi > 1e6:
                raise UnattainableError("bracket expansion failed")
    lo = min(1e-8, 0.5 * hi)
    while per(lo) > target:
        lo *= 0.5
        if lo < 1e-14:
            raise UnattainableError("target perimeter too small")
    w = brentq(lambda w: per(w) - target, lo, hi, xtol=1e-14, rtol=1e-15)
    L = make_twogon(lam, float(w))
    if abs(L.perimeter - target) > tol * target:
        raise UnattainableError("perimeter match misses tolerance")
    return L


def angle_bound_check(P: LambdaPolygon, L: LambdaPolygon) -> dict:
    """Eq. (Angles): beta_i <= beta* at matched perimeter, and the
    conditional sum bound when its hypothesis |K| <= |L| holds."""
    if abs(P.perimeter - L.perimeter) > 1e-8 * max(1.0, L.perimeter):
        raise ValueError("angle bound check requires matched perimeters")
    beta_star = max(L.angles)
    max_excess = max(b - beta_star for b in P.angles) if P.angles else -beta_star
    report = {
        "beta_star": beta_star,
        "max_excess": max_excess,
        "sum_beta": math.fsum(P.angles),
    }
    if P.area <= L.area + 1e-12:
        report["cond_checked"] = True
        report["cond_excess"] = report["sum_beta"] - 2.0 * beta_star
    else:
        report["cond_checked"] = False
        report["cond_note"] = "hypothesis |K| <= |L| not met"
    return report


# -- 2D flow -----------------------------------------------------------------

def inner_parallel_2d(P: LambdaPolygon, t: float) -> LambdaPolygon:
    if t < 0.0:
        raise ValueError("flow parameter must be nonnegative")
    if t == 0.0:
        return P
    lam_t = umbilic.lambda_at(C2, P.lam, t)
    discs = [umbilic.erode(b, t) for b in P.discs]
    return build_polygon(lam_t, discs, labels=list(P.labels))


def inradius_2d(P: LambdaPolygon, tol: float = 1e-10) -> float:
    del tol
    return P.inradius_opt()


def _build_at_2d(P: LambdaPolygon, t: float, nudge: float = 1e-9) -> LambdaPolygon:
    dts = [0.0]
    for k in range(4):
        step = nudge * 8.0**k
        dts += [-step, step]
    for dt in dts:
        tt = t + dt
        if tt < 0.0:
            continue
        try:
            return inner_parallel_2d(P, tt)
        except DegenerateError:
            continue
    raise DegenerateError(f"2D flow time t={t} stayed degenerate under nudging")


def flow2d(
    P: LambdaPolygon, n_grid: int = 64, tol: float = 1e-9
) -> FlowCurve:
    """2D flow curve; the 3D CSV layout is reused with area <- perimeter,
    edge_sum <- sum tan(beta_i/2), n_facets <- sides, n_vertices as is."""
    r = inradius_2d(P)
    curve = FlowCurve(c=C2, lam0=P.lam, inradius=r)
    prev_sig, prev_t = None, 0.0
    for t in r * np.arange(n_grid) / n_grid:
        Pt = _build_at_2d(P, float(t))
        s = FlowSample(
            t=float(t),
            lambda_t=umbilic.lambda_at(C2, P.lam, float(t)),
            area=Pt.perimeter,
            edge_sum=math.fsum(math.tan(0.5 * b) for b in Pt.angles),
            n_facets=Pt.n_sides,
            n_edges=Pt.n_vertices,
            n_vertices=Pt.n_vertices,
        )
        sig = Pt.signature()
        if prev_sig is not None and sig != prev_sig:
            te = _locate_event_2d(P, prev_t, float(t), prev_sig)
            curve.events.append((te, f"signature change ({s.n_facets} sides after)"))
        curve.samples.append(s)
        prev_sig, prev_t = sig, float(t)
    curve.events.append((r, "body vanishes"))
    return curve


def _locate_event_2d(P, lo, hi, sig_lo):
    while hi - lo > EVENT_RESOLUTION:
        mid = 0.5 * (lo + hi)
        try:
            same = inner_parallel_2d(P, mid).signature() == sig_lo
        except (DegenerateError, EmptyBodyError):
            same = False
        if same:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def coarea_area_2d(P: LambdaPolygon, tol: float = 1e-7, curve=None) -> float:
    """|K| = integral of the perimeter over [0, r(K)] (Thm 4.1 with n=2)."""
    if curve is None:
        curve = flow2d(P, n_grid=32)
    r = curve.inradius
    top = r - max(1e-5 * r, 1e-7)
    cuts = sorted({0.0, top} | {t for t, _ in curve.events if 0.0 < t < top})

    def f(ts):
        return np.array(
            [_build_at_2d(P, float(t)).perimeter for t in np.atleast_1d(ts)]
        )

    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        pad = min(2 * EVENT_RESOLUTION, 0.25 * (hi - lo))
        val, _ = quadrature.integrate(
            f, lo + pad, hi - pad, rel_tol=tol, abs_tol=0.0, n=16, max_splits=64
        )
        val += pad * (f(lo + pad)[0] + f(hi - pad)[0])
        total += val
    total += f(top)[0] * (r - top) / 2.0  # linear-vanishing tail (n=2)
    return total


def variation_check_2d(P: LambdaPolygon, t0: float, h: float = 1e-4) -> dict:
    """d/dt |dK_t| = -lambda(t) |dK_t| - 2 sum tan(beta_i/2) (n = 2)."""
    r = inradius_2d(P)
    if not (0.0 <= t0 - h and t0 + h < r):
        raise ValueError("t0 +- h must lie inside [0, inradius)")
    P_m = inner_parallel_2d(P, t0 - h)
    P_p = inner_parallel_2d(P, t0 + h)
    if P_m.signature() != P_p.signature():
        raise EventNearbyError(f"combinatorial event within [{t0 - h}, {t0 + h}]")
    P0 = _build_at_2d(P, t0)
    fd = (P_p.perimeter - P_m.perimeter) / (2.0 * h)
    formula = -umbilic.lambda_at(C2, P.lam, t0) * P0.perimeter - 2.0 * math.fsum(
        math.tan(0.5 * b) for b in P0.angles
    )
    return {"fd": fd, "formula": formula, "residual": fd - formula}


def reverse_iso_check_2d(P: LambdaPolygon, tol: float = 1e-8) -> dict:
    """|K| >= |L| for the perimeter-matched 2-gon, plus the tan-sum
    certificate and the inradius comparison."""
    L = twogon_for_perimeter(P.lam, P.perimeter)
    beta_star = max(L.angles)
    gap = P.area - L.area
    tan_excess = math.fsum(math.tan(0.5 * b) for b in P.angles) - 2.0 * math.tan(
        0.5 * beta_star
    )
    return {
        "area_gap": gap,
        "violation": gap < -tol,
        "tan_excess": tan_excess,
        "beta_star": beta_star,
        "inradius_gap": inradius_2d(P) - inradius_2d(L),
    }


# -- 2D body-spec format ------------------------------------------------------

def dump_polygon_spec(P: LambdaPolygon) -> str:
    out = [f"{C2:.17g} {P.lam:.17g}"]
    for b in P.discs:
        if b.is_plane:
            n, d = b.center, b.offset
            out.append(f"L {n[0]:.17g} {n[1]:.17g} {d:.17g} {b.eff_side:d}")
        else:
            z = b.center
            out.append(f"C {z[0]:.17g} {z[1]:.17g} {b.radius:.17g} {b.eff_side:d}")
    return "\n".join(out) + "\n"


def parse_polygon_spec(text: str) -> tuple[float, list[UmbilicSphere]]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty polygon spec")
    head = lines[0].split()
    if len(head) != 2 or float(head[0]) != C2:
        raise ValueError("2D body-spec header must be '-1 lambda'")
    lam = float(head[1])
    flipped = lam < 0
    discs = []
    for ln in lines[1:]:
        parts = ln.split()
        file_side = int(parts[-1])
        side = -file_side if flipped else file_side
        if parts[0] == "C" and len(parts) == 5:
            z = np.array([float(parts[1]), float(parts[2])])
            discs.append(
                UmbilicSphere(
                    C2, abs(lam), z, float(parts[3]), 0.0, side=side, flipped=flipped
                )
            )
        elif parts[0] == "L" and len(parts) == 5:
            n = np.array([float(parts[1]), float(parts[2])])
            discs.append(
                UmbilicSphere(
                    C2, abs(lam), n, None, float(parts[3]), side=side, flipped=flipped
                )
            )
        else:
            raise ValueError(f"malformed 2D body-spec line: {ln!r}")
    return lam, discs


def load_polygon(text: str) -> LambdaPolygon:
    lam, discs = parse_polygon_spec(text)
    return build_polygon(lam, discs)
