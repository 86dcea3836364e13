"""Sphere-arrangement construction of lambda-convex polyhedra.

A body is the intersection of finitely many lambda-balls, stored as
oriented Euclidean spheres in the conformal chart.  The construction is
the classical O(m^3) pipeline: pairwise intersection circles, triple
points, arc classification by membership, loop assembly.  Non-generic
incidences within ``eps_geom`` raise DegenerateError; callers jitter
and retry (random_polyhedron does this automatically).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import chart, umbilic
from .errors import (
    DegenerateError,
    EmptyBodyError,
    NonCompactError,
)
from .umbilic import UmbilicSphere

EPS_GEOM = 1e-9
_JITTER = 1e-7
_MAX_RETRIES = 5


@dataclass(frozen=True)
class Circle3:
    """Intersection circle of two chart spheres, with a fixed frame."""

    center: np.ndarray
    radius: float
    normal: np.ndarray
    e1: np.ndarray
    e2: np.ndarray

    def point(self, theta):
        theta = np.asarray(theta, dtype=float)
        ct, st = np.cos(theta), np.sin(theta)
        return (
            self.center
            + self.radius * (np.outer(ct, self.e1) + np.outer(st, self.e2))
            if theta.ndim
            else self.center + self.radius * (ct * self.e1 + st * self.e2)
        )

    def velocity(self, theta):
        theta = np.asarray(theta, dtype=float)
        ct, st = np.cos(theta), np.sin(theta)
        return (
            self.radius * (np.outer(-st, self.e1) + np.outer(ct, self.e2))
            if theta.ndim
            else self.radius * (-st * self.e1 + ct * self.e2)
        )

    def angle_of(self, x: np.ndarray) -> float:
        v = np.asarray(x, dtype=float) - self.center
        return math.atan2(float(v @ self.e2), float(v @ self.e1))


@dataclass
class Vertex:
    point: np.ndarray
    facets: tuple[int, int, int]  # indices into the kept ball list


@dataclass
class Edge:
    facet_pair: tuple[int, int]
    circle: Circle3
    v_start: int | None  # vertex index at theta0 (None for a full circle)
    v_end: int | None
    theta0: float
    theta1: float  # theta1 > theta0; full circle spans 2 pi
    i_left_dir: int  # +1 if increasing theta keeps facet_pair[0] on the left
    length: float = math.nan  # filled by measure
    beta: float = math.nan

    @property
    def is_full_circle(self) -> bool:
        return self.v_start is None

    def midpoint(self) -> np.ndarray:
        return self.circle.point(0.5 * (self.theta0 + self.theta1))


@dataclass
class Facet:
    ball_index: int
    # loops of (edge_index, direction); empty list means the full sphere
    loops: list[list[tuple[int, int]]] = field(default_factory=list)


class LambdaPolyhedron:
    """Intersection of lambda-balls with computed combinatorics."""

    def __init__(
        self,
        c: float,
        lam: float,
        balls: list[UmbilicSphere],
        labels: list[int],
        pruned: list[int],
        facets: list[Facet],
        edges: list[Edge],
        vertices: list[Vertex],
    ):
        self.c = c
        self.lam = lam  # signed curvature shared by all facets
        self.balls = balls
        self.labels = labels  # caller-stable identities of kept balls
        self.pruned = pruned  # labels of dropped redundant balls
        self.facets = facets
        self.edges = edges
        self.vertices = vertices
        self._incenter: np.ndarray | None = None
        self._inradius: float | None = None

    # -- membership ----------------------------------------------------------

    def signed_dists(self, x: np.ndarray) -> np.ndarray:
        """Per-ball Euclidean signed distances; x may be (3,) or (N, 3)."""
        x = np.asarray(x, dtype=float)
        Z = np.stack([b.center for b in self.balls])
        R = np.array([b.radius for b in self.balls])
        eff = np.array([b.eff_side for b in self.balls], dtype=float)
        diff = x[..., None, :] - Z
        return eff * (np.linalg.norm(diff, axis=-1) - R)

    def contains(self, x: np.ndarray, eps: float = 0.0) -> np.ndarray:
        """Boolean membership (x may be batched)."""
        return np.max(self.signed_dists(x), axis=-1) <= eps

    def min_depth(self, x: np.ndarray) -> float:
        """Riemannian clearance of x: min over balls of the depth inside
        each ball.  K_t = {x : min_depth(x) >= t} by definition."""
        return min(umbilic.depth(b, x) for b in self.balls)

    # -- derived scalars -----------------------------------------------------

    @property
    def n_facets(self) -> int:
        return len(self.facets)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def signature(self) -> tuple:
        """Combinatorial signature (stable under erosion relabeling)."""
        fs = tuple(sorted(self.labels[f.ball_index] for f in self.facets))
        es = tuple(
            sorted(
                tuple(
                    sorted(
                        (self.labels[e.facet_pair[0]], self.labels[e.facet_pair[1]])
                    )
                )
                for e in self.edges
            )
        )
        return fs, es, self.n_vertices

    def euler_characteristic(self) -> int | None:
        """F - E + V, or None when some facet is not a vertex-bearing disk
        (e.g. a lens facet bounded by a full circle)."""
        for f in self.facets:
            if len(f.loops) != 1:
                return None
            if any(self.edges[ei].is_full_circle for ei, _ in f.loops[0]):
                return None
        return self.n_facets - self.n_edges + self.n_vertices

    def interior_point(self) -> np.ndarray:
        if self._incenter is None:
            self._compute_incenter()
        return self._incenter

    def inradius_opt(self) -> float:
        """Inradius as the max-min Riemannian depth (see flow.inradius)."""
        if self._inradius is None:
            self._compute_incenter()
        return self._inradius

    def _boundary_seed(self) -> np.ndarray:
        if self.vertices:
            return np.mean([v.point for v in self.vertices], axis=0)
        if self.edges:
            return np.mean([e.midpoint() for e in self.edges], axis=0)
        return self.balls[self.facets[0].ball_index].base_point()

    def _compute_incenter(self) -> None:
        from scipy.optimize import minimize

        x0 = self._project_valid(self._boundary_seed())
        best_x, best_val = None, -math.inf
        for start in self._incenter_starts(x0):
            res = minimize(
                lambda x: -self._min_depth_safe(x),
                start,
                method="Nelder-Mead",
                options={"xatol": 1e-11, "fatol": 1e-13, "maxfev": 4000},
            )
            if -res.fun > best_val:
                best_x, best_val = np.asarray(res.x, dtype=float), -res.fun
        # epigraph polish: maximize t subject to depth_k(x) >= t (smooth
        # constraints, much tighter than the simplex search alone)
        y0 = np.append(best_x, best_val)
        cons = [
            {
                "type": "ineq",
                "fun": (
                    lambda y, b=b: self._depth_safe(b, y[:3]) - y[3]
                ),
            }
            for b in self.balls
        ]
        res = minimize(
            lambda y: -y[3],
            y0,
            method="SLSQP",
            constraints=cons,
            options={"ftol": 1e-14, "maxiter": 300},
        )
        if res.success and self._min_depth_safe(res.x[:3]) > best_val - 1e-12:
            best_x = np.asarray(res.x[:3], dtype=float)
            best_val = self._min_depth_safe(best_x)
        # final small-simplex refinement (the max-min objective is only
        # piecewise smooth at the incenter, where gradient methods stall)
        scale = max(1e-5, 1e-7 * (1.0 + float(np.linalg.norm(best_x))))
        simplex = np.vstack([best_x] + [best_x + scale * e for e in np.eye(3)])
        res = minimize(
            lambda x: -self._min_depth_safe(x),
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

    @staticmethod
    def _depth_safe(b: UmbilicSphere, x: np.ndarray) -> float:
        try:
            return umbilic.depth(b, x)
        except Exception:
            return -1e6

    def _incenter_starts(self, x0: np.ndarray):
        yield x0
        # pull a facet point inward as a fallback seed
        f = self.facets[0]
        b = self.balls[f.ball_index]
        p = b.base_point()
        step = 0.05 * (b.radius if not b.is_plane else 1.0)
        yield self._project_valid(p - step * b.outward_normal(p))

    def _project_valid(self, x: np.ndarray) -> np.ndarray:
        if self.c < 0.0:
            limit = 1.0 / math.sqrt(-self.c)
            n = float(np.linalg.norm(x))
            if n >= 0.99 * limit:
                return x * (0.99 * limit / n)
        return x

    def _min_depth_safe(self, x: np.ndarray) -> float:
        try:
            return self.min_depth(x)
        except Exception:
            return -1e6


# -- construction ------------------------------------------------------------

def _pair_circle(
    bi: UmbilicSphere, bj: UmbilicSphere, eps: float
) -> Circle3 | None:
    zi, zj = bi.center, bj.center
    ri, rj = bi.radius, bj.radius
    t = zj - zi
    d = float(np.linalg.norm(t))
    if d < eps:
        if abs(ri - rj) < eps:
            raise DegenerateError("nearly concentric equal spheres")
        return None
    if abs(d - (ri + rj)) < eps or abs(d - abs(ri - rj)) < eps:
        raise DegenerateError("nearly tangent spheres")
    if d > ri + rj or d < abs(ri - rj):
        return None
    that = t / d
    alpha = (d * d + ri * ri - rj * rj) / (2.0 * d)
    r2 = ri * ri - alpha * alpha
    if r2 <= eps * eps:
        raise DegenerateError("vanishing intersection circle")
    center = zi + alpha * that
    k = int(np.argmin(np.abs(that)))
    e1 = np.zeros(3)
    e1[k] = 1.0
    e1 = e1 - (e1 @ that) * that
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(that, e1)
    return Circle3(center, math.sqrt(r2), that, e1, e2)


def _circle_sphere_angles(
    circ: Circle3, bk: UmbilicSphere, eps: float
) -> list[float]:
    """Angles on the circle where it crosses sphere k (0, or 2)."""
    v = circ.center - bk.center
    A = 2.0 * circ.radius * float(v @ circ.e1)
    B = 2.0 * circ.radius * float(v @ circ.e2)
    D = bk.radius**2 - float(v @ v) - circ.radius**2
    M = math.hypot(A, B)
    if M < eps * circ.radius:
        if abs(D) < eps:
            raise DegenerateError("circle lies on a third sphere")
        return []
    q = D / M
    if abs(abs(q) - 1.0) < eps / circ.radius:
        raise DegenerateError("circle tangent to a third sphere")
    if abs(q) > 1.0:
        return []
    phi = math.atan2(B, A)
    dphi = math.acos(q)
    return [phi - dphi, phi + dphi]


def build_polyhedron(
    c: float,
    lam: float,
    balls: list[UmbilicSphere],
    labels: list[int] | None = None,
    eps_geom: float = EPS_GEOM,
) -> LambdaPolyhedron:
    """Construct the full combinatorial structure of the intersection of
    the given lambda-balls (all sharing signed curvature ``lam``)."""
    if not balls:
        raise ValueError("need at least one ball")
    if labels is None:
        labels = list(range(len(balls)))
    for b in balls:
        if b.is_plane:
            raise DegenerateError(
                "plane-backed ball reached the arrangement; perturb the input"
            )
        if abs(b.c - c) > 1e-12 or abs(b.signed_curvature - lam) > 1e-9 * max(
            1.0, abs(lam)
        ):
            raise ValueError("all balls must share curvature c and lambda")
    m = len(balls)

    def sd(x: np.ndarray, exclude: tuple[int, ...]) -> float:
        """Max signed distance over all balls not excluded (scalar x)."""
        worst = -math.inf
        for l, b in enumerate(balls):
            if l in exclude:
                continue
            worst = max(worst, float(b.signed_dist(x)))
        return worst

    # pairwise circles
    circles: dict[tuple[int, int], Circle3] = {}
    for i, j in combinations(range(m), 2):
        circ = _pair_circle(balls[i], balls[j], eps_geom)
        if circ is not None:
            circles[(i, j)] = circ

    # triple points -> vertices
    vertices: list[Vertex] = []
    verts_on_circle: dict[tuple[int, int], list[tuple[float, int]]] = {
        key: [] for key in circles
    }
    for i, j, k in combinations(range(m), 3):
        circ = circles.get((i, j))
        if circ is None:
            continue
        if (i, k) not in circles or (j, k) not in circles:
            continue
        for theta in _circle_sphere_angles(circ, balls[k], eps_geom):
            x = circ.point(theta)
            worst = sd(x, (i, j, k))
            if worst > eps_geom:
                continue
            if worst > -eps_geom and m > 3:
                raise DegenerateError("near-quadruple point detected")
            vid = len(vertices)
            vertices.append(Vertex(point=x, facets=(i, j, k)))
            verts_on_circle[(i, j)].append((theta, vid))
            verts_on_circle[(i, k)].append(
                (circles[(i, k)].angle_of(x), vid)
            )
            verts_on_circle[(j, k)].append(
                (circles[(j, k)].angle_of(x), vid)
            )

    # arcs -> edges
    edges: list[Edge] = []
    for (i, j), circ in circles.items():
        entries = sorted(verts_on_circle[(i, j)])
        if not entries:
            probes = [0.0, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0]
            worsts = [sd(circ.point(th), (i, j)) for th in probes]
            if all(w < -eps_geom for w in worsts):
                edges.append(_make_edge(balls, i, j, circ, None, None, 0.0, 2 * math.pi))
            elif all(w > eps_geom for w in worsts):
                continue
            else:
                raise DegenerateError(
                    "vertex-free circle partially inside the body"
                )
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
            if sd(circ.point(thm), (i, j)) < -eps_geom:
                edges.append(_make_edge(balls, i, j, circ, v0, v1, th0, th1))

    # facet existence
    facet_of_ball: dict[int, Facet] = {}
    balls_with_edges = set()
    for e in edges:
        balls_with_edges.update(e.facet_pair)
    for i in range(m):
        if i in balls_with_edges:
            facet_of_ball[i] = Facet(ball_index=i)
            continue
        b = balls[i]
        samples = [b.center + b.radius * v for v in _sphere_probe_dirs(b)]
        inside = [sd(x, (i,)) < -eps_geom for x in samples]
        if all(inside):
            facet_of_ball[i] = Facet(ball_index=i)  # full-sphere facet
        elif any(inside):
            raise DegenerateError("inconsistent edgeless-facet probe")
        # else: redundant ball, no facet

    if not facet_of_ball:
        raise EmptyBodyError("intersection of the given balls is empty")

    # assemble loops per facet
    for i, facet in facet_of_ball.items():
        facet.loops = _assemble_loops(edges, i)

    # prune redundant balls and reindex
    kept = sorted(facet_of_ball)
    remap = {old: new for new, old in enumerate(kept)}
    pruned_labels = [labels[i] for i in range(m) if i not in facet_of_ball]
    new_balls = [balls[i] for i in kept]
    new_labels = [labels[i] for i in kept]
    facets = []
    for i in kept:
        f = facet_of_ball[i]
        facets.append(Facet(ball_index=remap[i], loops=f.loops))
    for e in edges:
        e.facet_pair = (remap[e.facet_pair[0]], remap[e.facet_pair[1]])
    for v in vertices:
        v.facets = tuple(remap[t] for t in v.facets)

    body = LambdaPolyhedron(
        c, lam, new_balls, new_labels, pruned_labels, facets, edges, vertices
    )
    _check_compact(body)
    return body


def _sphere_probe_dirs(b: UmbilicSphere) -> list[np.ndarray]:
    dirs = [np.eye(3)[k] * s for k in range(3) for s in (+1.0, -1.0)]
    nz = float(np.linalg.norm(b.center))
    if nz > 1e-12:
        zhat = b.center / nz
        dirs += [zhat, -zhat]
    return dirs


def _make_edge(balls, i, j, circ, v0, v1, th0, th1) -> Edge:
    thm = 0.5 * (th0 + th1)
    x = circ.point(thm)
    t_vec = circ.velocity(thm)
    nu_i = balls[i].outward_normal(x)
    nu_j = balls[j].outward_normal(x)
    w = -nu_j + float(nu_j @ nu_i) * nu_i  # into ball j, tangent to sphere i
    left = np.cross(nu_i, t_vec)
    i_left = 1 if float(left @ w) > 0.0 else -1
    return Edge(
        facet_pair=(i, j),
        circle=circ,
        v_start=v0,
        v_end=v1,
        theta0=th0,
        theta1=th1,
        i_left_dir=i_left,
    )


def _assemble_loops(edges: list[Edge], ball: int) -> list[list[tuple[int, int]]]:
    """Group the directed edges of one facet into closed boundary loops.

    Direction +1 traverses theta0 -> theta1.  The direction is chosen so
    the facet is on the left viewed from outside its sphere.
    """
    directed = []
    for ei, e in enumerate(edges):
        if e.facet_pair[0] == ball:
            directed.append((ei, e.i_left_dir))
        elif e.facet_pair[1] == ball:
            directed.append((ei, -e.i_left_dir))
    loops: list[list[tuple[int, int]]] = []
    unused = dict(directed)
    # full circles are their own loops
    for ei in [ei for ei in unused if edges[ei].is_full_circle]:
        loops.append([(ei, unused.pop(ei))])
    start_of: dict[int, tuple[int, int]] = {}
    for ei, d in unused.items():
        e = edges[ei]
        v = e.v_start if d == 1 else e.v_end
        if v in start_of:
            raise DegenerateError("conflicting edge orientation at a vertex")
        start_of[v] = (ei, d)
    while start_of:
        v0, (ei, d) = next(iter(start_of.items()))
        loop = []
        v = v0
        while True:
            ei, d = start_of.pop(v)
            loop.append((ei, d))
            e = edges[ei]
            v = e.v_end if d == 1 else e.v_start
            if v == v0:
                break
            if v not in start_of:
                raise DegenerateError("open boundary chain on a facet")
        loops.append(loop)
    return loops


# -- compactness / validity --------------------------------------------------

def _boundary_far_point(body: LambdaPolyhedron) -> tuple[float, np.ndarray]:
    """Exact max |x| over the body boundary (attained at a vertex, an arc
    extremum, or a facet extremum)."""
    best = (-math.inf, None)

    def consider(x, val):
        nonlocal best
        if val > best[0]:
            best = (val, x)

    for v in body.vertices:
        consider(v.point, float(np.linalg.norm(v.point)))
    for e in body.edges:
        cc = e.circle.center
        a1, a2 = float(cc @ e.circle.e1), float(cc @ e.circle.e2)
        if math.hypot(a1, a2) > 1e-300:
            th = math.atan2(a2, a1)
            for cand in (th, th + 2 * math.pi):
                if e.theta0 <= cand <= e.theta1:
                    x = e.circle.point(cand)
                    consider(x, float(np.linalg.norm(x)))
    for f in body.facets:
        b = body.balls[f.ball_index]
        nz = float(np.linalg.norm(b.center))
        zhat = b.center / nz if nz > 1e-300 else np.array([1.0, 0.0, 0.0])
        x = b.center + b.radius * zhat
        others = tuple(k for k in range(len(body.balls)) if k != f.ball_index)
        if not others or float(
            np.max(body.signed_dists(x)[list(others)])
        ) <= EPS_GEOM:
            consider(x, float(np.linalg.norm(x)))
    return best


def _check_compact(body: LambdaPolyhedron) -> None:
    c = body.c
    if c == 0.0:
        if not any(b.eff_side == 1 for b in body.balls):
            raise NonCompactError("no bounding ball: intersection is unbounded")
        return
    limit = 1.0 / math.sqrt(abs(c))
    if c < 0.0:
        margin = 1e-6
        fast = all(
            b.eff_side == 1
            and float(np.linalg.norm(b.center)) + b.radius < limit - margin
            for b in body.balls
        )
        if fast:
            return
        far, _ = _boundary_far_point(body)
        if far >= limit - margin:
            raise NonCompactError(
                "body closure reaches the model boundary sphere"
            )
        # bulge through a facet-free region: sample the boundary sphere
        probe = _fibonacci_sphere(8192) * (limit - margin)
        if bool(np.any(body.contains(probe))):
            raise NonCompactError("body is unbounded toward the model boundary")
        return
    # c > 0: open-hemisphere restriction
    far, _ = _boundary_far_point(body)
    if far >= limit or not any(b.eff_side == 1 for b in body.balls):
        raise NonCompactError("body leaves the open hemisphere")


def _fibonacci_sphere(n: int) -> np.ndarray:
    k = np.arange(n) + 0.5
    phi = math.pi * (1.0 + math.sqrt(5.0)) * k
    mu = 1.0 - 2.0 * k / n
    r = np.sqrt(1.0 - mu * mu)
    return np.stack([r * np.cos(phi), r * np.sin(phi), mu], axis=1)


# -- random bodies -----------------------------------------------------------

def random_polyhedron(
    seed: int,
    c: float,
    lam: float,
    m: int,
    rho0: float,
    eps_geom: float = EPS_GEOM,
) -> LambdaPolyhedron:
    """Intersection of m supporting lambda-balls of the geodesic ball
    B(origin, rho0), at seeded quasi-uniform outer-normal directions."""
    if m < 1:
        raise ValueError("m must be >= 1")
    tb = umbilic.blow_up_time(c, lam)
    if rho0 >= tb:
        raise ValueError(
            f"rho0={rho0} exceeds the lambda-ball inradius {tb:.17g}"
        )
    origin = np.zeros(3)
    base_dirs = _fibonacci_sphere(m) if m > 2 else np.array(
        [[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]][:m]
    )
    rng = np.random.Generator(np.random.Philox(key=abs(int(seed))))
    last_err: Exception | None = None
    for _ in range(_MAX_RETRIES + 1):
        dirs = base_dirs + 0.35 / math.sqrt(m) * rng.standard_normal((m, 3))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        balls = []
        for u in dirs:
            p = chart.geodesic_point(c, origin, u, rho0)
            balls.append(umbilic.sphere_through(c, lam, p, -u))
        try:
            return build_polyhedron(c, lam, balls, eps_geom=eps_geom)
        except DegenerateError as err:
            last_err = err
    raise DegenerateError(f"random polyhedron stayed degenerate: {last_err}")


# -- lambda-convexity validation ---------------------------------------------

def validate_lambda_convexity(
    K: LambdaPolyhedron, n_samples: int = 200, seed: int = 0
) -> dict:
    """Report-style check of Blaschke support: at sampled boundary points,
    erect the supporting lambda-sphere and measure how far any vertex or
    boundary sample escapes its ball (max Euclidean violation depth)."""
    rng = np.random.Generator(np.random.Philox(key=abs(int(seed)) + 1))
    samples: list[tuple[np.ndarray, np.ndarray]] = []  # (point, outward normal)
    per_facet = max(1, n_samples // max(1, K.n_facets))
    for f in K.facets:
        b = K.balls[f.ball_index]
        got = 0
        for _ in range(200 * per_facet):
            if got >= per_facet:
                break
            w = rng.standard_normal(3)
            w /= np.linalg.norm(w)
            x = b.center + b.radius * w
            others = [k for k in range(len(K.balls)) if k != f.ball_index]
            if others and float(np.max(K.signed_dists(x)[others])) > -EPS_GEOM:
                continue
            try:
                chart.check_point(K.c, x)
            except Exception:
                continue
            samples.append((x, b.outward_normal(x)))
            got += 1
    for e in K.edges:
        for frac in (0.25, 0.5, 0.75):
            th = e.theta0 + frac * (e.theta1 - e.theta0)
            x = e.circle.point(th)
            for bi in e.facet_pair:
                samples.append((x, K.balls[bi].outward_normal(x)))
    test_points = [v.point for v in K.vertices] + [p for p, _ in samples]
    max_violation = 0.0
    for p, nu_out in samples:
        support = umbilic.sphere_through_signed(K.c, K.lam, p, -nu_out)
        for q in test_points:
            max_violation = max(max_violation, float(support.signed_dist(q)))
    return {
        "n_support_spheres": len(samples),
        "n_test_points": len(test_points),
        "max_violation": max_violation,
    }


# -- body-spec file format ---------------------------------------------------

def dump_body_spec(K_or_balls, c: float | None = None, lam: float | None = None) -> str:
    """Line-oriented body spec: header ``c lambda``, then one ball per
    line (``S cx cy cz r side`` or ``P nx ny nz d side``), 17 significant
    digits for a bit-exact round trip."""
    if isinstance(K_or_balls, LambdaPolyhedron):
        balls, c, lam = K_or_balls.balls, K_or_balls.c, K_or_balls.lam
    else:
        balls = K_or_balls
        if c is None or lam is None:
            raise ValueError("c and lam are required with a bare ball list")
    out = [f"{c:.17g} {lam:.17g}"]
    for b in balls:
        if b.is_plane:
            n, d = b.center, b.offset
            out.append(
                f"P {n[0]:.17g} {n[1]:.17g} {n[2]:.17g} {d:.17g} {b.eff_side:d}"
            )
        else:
            z = b.center
            out.append(
                f"S {z[0]:.17g} {z[1]:.17g} {z[2]:.17g} {b.radius:.17g} "
                f"{b.eff_side:d}"
            )
    return "\n".join(out) + "\n"


def parse_body_spec(text: str) -> tuple[float, float, list[UmbilicSphere]]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty body spec")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("body-spec header must be 'c lambda'")
    c, lam = float(head[0]), float(head[1])
    balls = []
    for ln in lines[1:]:
        parts = ln.split()
        flipped = lam < 0
        file_side = int(parts[5])
        side = -file_side if flipped else file_side  # file stores eff_side
        if parts[0] == "S" and len(parts) == 6:
            z = np.array([float(parts[1]), float(parts[2]), float(parts[3])])
            balls.append(
                UmbilicSphere(
                    c, abs(lam), z, float(parts[4]), 0.0, side=side,
                    flipped=flipped,
                )
            )
        elif parts[0] == "P" and len(parts) == 6:
            n = np.array([float(parts[1]), float(parts[2]), float(parts[3])])
            balls.append(
                UmbilicSphere(
                    c, abs(lam), n, None, float(parts[4]), side=side,
                    flipped=flipped,
                )
            )
        else:
            raise ValueError(f"malformed body-spec line: {ln!r}")
    return c, lam, balls


def load_body(text: str) -> LambdaPolyhedron:
    c, lam, balls = parse_body_spec(text)
    return build_polyhedron(c, lam, balls)
