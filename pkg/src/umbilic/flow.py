"""Inner-parallel-body flow of lambda-convex polyhedra.

K_t = {x : B(x, t) subset of K} is realized constructively by eroding
every defining lambda-ball by t and rebuilding the arrangement; the
facet curvature evolves by the closed-form Riccati solution lambda(t).
The surface-area curve f_K(t) = |dK_t| is piecewise analytic between
combinatorial events, which are located by bisection on the signature.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import measure, quadrature, umbilic
from .arrangement import LambdaPolyhedron, build_polyhedron
from .errors import (
    DegenerateError,
    EmptyBodyError,
    EventNearbyError,
)

EVENT_RESOLUTION = 1e-9
DEFAULT_GRID = 64


@dataclass(frozen=True)
class FlowSample:
    t: float
    lambda_t: float
    area: float
    edge_sum: float
    n_facets: int
    n_edges: int
    n_vertices: int


@dataclass
class FlowCurve:
    c: float
    lam0: float
    inradius: float
    samples: list[FlowSample] = field(default_factory=list)
    events: list[tuple[float, str]] = field(default_factory=list)

    def ts(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    def areas(self) -> np.ndarray:
        return np.array([s.area for s in self.samples])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(
            ["t", "lambda_t", "area", "edge_sum", "n_facets", "n_edges", "n_vertices"]
        )
        for s in self.samples:
            w.writerow(
                [
                    f"{s.t:.17g}",
                    f"{s.lambda_t:.17g}",
                    f"{s.area:.17g}",
                    f"{s.edge_sum:.17g}",
                    s.n_facets,
                    s.n_edges,
                    s.n_vertices,
                ]
            )
        return buf.getvalue()

    def events_json(self) -> str:
        return json.dumps(
            [{"t": t, "description": d} for t, d in self.events], indent=2
        )


# -- the flow ----------------------------------------------------------------

def inner_parallel(K: LambdaPolyhedron, t: float) -> LambdaPolyhedron:
    """The inner parallel body K_t, rebuilt from the eroded balls."""
    if t < 0.0:
        raise ValueError("flow parameter must be nonnegative")
    if t == 0.0:
        return K
    lam_t = umbilic.lambda_at(K.c, K.lam, t)
    balls = [umbilic.erode(b, t) for b in K.balls]
    return build_polyhedron(K.c, lam_t, balls, labels=list(K.labels))


def inradius(K: LambdaPolyhedron, tol: float = 1e-10) -> float:
    """Vanishing time of the flow: the max-min Riemannian depth over the
    defining balls (K_t = {min depth >= t}, so the optimum is exact)."""
    del tol  # the optimization converges far below any practical tolerance
    return K.inradius_opt()


def _build_at(K: LambdaPolyhedron, t: float, nudge: float = 1e-9):
    """inner_parallel with a tiny deterministic nudge past degenerate or
    event-coincident times (degenerate bands can span ~1e-7 in t)."""
    dts = [0.0]
    for k in range(4):
        step = nudge * 8.0**k
        dts += [-step, step]
    for dt in dts:
        tt = t + dt
        if tt < 0.0:
            continue
        try:
            return inner_parallel(K, tt)
        except DegenerateError:
            continue
    raise DegenerateError(f"flow time t={t} stayed degenerate under nudging")


def _sample(K: LambdaPolyhedron, t: float, tol: float) -> tuple[FlowSample, tuple]:
    Kt = _build_at(K, t)
    area = measure.surface_area(Kt, tol)
    es = measure.edge_sum(Kt, tol)
    s = FlowSample(
        t=t,
        lambda_t=umbilic.lambda_at(K.c, K.lam, t),
        area=area,
        edge_sum=es,
        n_facets=Kt.n_facets,
        n_edges=Kt.n_edges,
        n_vertices=Kt.n_vertices,
    )
    return s, Kt.signature()


def _locate_event(
    K: LambdaPolyhedron, lo: float, hi: float, sig_lo: tuple
) -> float:
    """Bisect the first signature change in (lo, hi] to EVENT_RESOLUTION."""
    while hi - lo > EVENT_RESOLUTION:
        mid = 0.5 * (lo + hi)
        try:
            same = inner_parallel(K, mid).signature() == sig_lo
        except (DegenerateError, EmptyBodyError):
            same = False
        if same:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def surface_area_curve(
    K: LambdaPolyhedron,
    n_grid: int = DEFAULT_GRID,
    tol: float = measure.DEFAULT_TOL,
    t_grid: np.ndarray | None = None,
) -> FlowCurve:
    """Sample f_K on a uniform grid of [0, inradius) (or an explicit grid),
    recording combinatorial events located by signature bisection."""
    r = inradius(K)
    if t_grid is None:
        t_grid = r * np.arange(n_grid) / n_grid
    else:
        t_grid = np.asarray(t_grid, dtype=float)
        if t_grid.size and t_grid[-1] >= r:
            raise ValueError("explicit flow grid reaches the vanishing time")
    curve = FlowCurve(c=K.c, lam0=K.lam, inradius=r)
    prev_sig = None
    prev_t = 0.0
    for t in t_grid:
        s, sig = _sample(K, float(t), tol)
        if prev_sig is not None and sig != prev_sig:
            te = _locate_event(K, prev_t, float(t), prev_sig)
            curve.events.append(
                (te, f"signature change ({s.n_facets} facets after)")
            )
        curve.samples.append(s)
        prev_sig, prev_t = sig, float(t)
    # a trailing event between the last sample and vanishing, if any; stay
    # a few geometric epsilons short of r, where features become unresolvable
    t_probe = r - max(1e-5 * r, 1e-7)
    if prev_sig is not None and t_probe - prev_t > 4 * EVENT_RESOLUTION:
        try:
            sig_end = inner_parallel(K, t_probe).signature()
        except (DegenerateError, EmptyBodyError):
            sig_end = None
        if sig_end != prev_sig:
            te = _locate_event(K, prev_t, t_probe, prev_sig)
            curve.events.append((te, "signature change (near vanishing)"))
    curve.events.append((r, "body vanishes"))
    return curve


def _area_at(K: LambdaPolyhedron, t: float, tol: float) -> float:
    return measure.surface_area(_build_at(K, t), tol)


def coarea_volume(
    K: LambdaPolyhedron,
    tol: float = 1e-7,
    curve: FlowCurve | None = None,
) -> float:
    """|K| = integral of f_K over [0, r(K)], split at the flow events."""
    if curve is None:
        curve = surface_area_curve(K, n_grid=32)
    r = curve.inradius
    # the last ~1e-5 of the flow is below geometric resolution; the body is
    # a point there and the untreated tail is O(pad^3)
    top = r - max(1e-5 * r, 1e-7)
    cuts = sorted({0.0, top} | {t for t, _ in curve.events if 0.0 < t < top})

    def f(ts):
        return np.array(
            [_area_at(K, float(t), measure.DEFAULT_TOL) for t in np.atleast_1d(ts)]
        )

    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        # stay clear of the kinks themselves
        pad = min(2 * EVENT_RESOLUTION, 0.25 * (hi - lo))
        val, _ = quadrature.integrate(
            f, lo + pad, hi - pad, rel_tol=tol, abs_tol=0.0, n=16, max_splits=64
        )
        # the shaved slivers are below any stated tolerance but cheap to add
        val += pad * (f(lo + pad)[0] + f(hi - pad)[0])
        total += val
    # quadratic-vanishing tail beyond the resolvable range
    total += f(top)[0] * (r - top) / 3.0
    return total


def variation_check(
    K: LambdaPolyhedron,
    t0: float,
    h: float = 1e-4,
    tol: float = measure.DEFAULT_TOL,
) -> dict:
    """Central difference of f_K at t0 against the first-variation formula
    -2 lambda(t0) f(t0) - 2 edge_sum(t0)."""
    r = inradius(K)
    if not (0.0 <= t0 - h and t0 + h < r):
        raise ValueError("t0 +- h must lie inside [0, inradius)")
    K_m = inner_parallel(K, t0 - h)
    K_p = inner_parallel(K, t0 + h)
    if K_m.signature() != K_p.signature():
        raise EventNearbyError(f"combinatorial event within [{t0 - h}, {t0 + h}]")
    s0, _ = _sample(K, t0, tol)
    fd = (measure.surface_area(K_p, tol) - measure.surface_area(K_m, tol)) / (2.0 * h)
    formula = -2.0 * s0.lambda_t * s0.area - 2.0 * s0.edge_sum
    return {"fd": fd, "formula": formula, "residual": fd - formula}


def curve_dominance_check(K_curve: FlowCurve, L_curve: FlowCurve) -> dict:
    """Pointwise comparison f_K - f_L on the shared sample times."""
    tK = {round(s.t, 12): s.area for s in K_curve.samples}
    min_gap = math.inf
    argmin_t = None
    first_violation = None
    n = 0
    for s in L_curve.samples:
        key = round(s.t, 12)
        if key not in tK:
            continue
        n += 1
        gap = tK[key] - s.area
        if gap < min_gap:
            min_gap, argmin_t = gap, s.t
        if first_violation is None and gap < -1e-6 * s.area:
            first_violation = (s.t, gap)
    if n == 0:
        raise ValueError("flow curves share no sample times")
    return {
        "n_compared": n,
        "min_gap": min_gap,
        "argmin_t": argmin_t,
        "first_violation": first_violation,
        "inradius_gap": K_curve.inradius - L_curve.inradius,
    }
