"""The lambda-convex lens family: two opposing umbilic caps.

A lens is parametrized by its half-width w, the geodesic distance from
the center to each cap apex along the axis; w is the flow-natural
parameter (the inradius equals w, and erosion maps lenses to lenses).
All derived quantities are measured numerically on the two-ball
arrangement; nothing lens-specific is assumed beyond the construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import chart, flow, measure, umbilic
from .arrangement import LambdaPolyhedron, build_polyhedron
from .errors import (
    DegenerateError,
    EmptyBodyError,
    NonCompactError,
    UnattainableError,
)

_Z = np.array([0.0, 0.0, 1.0])


@dataclass
class Lens:
    c: float
    lam: float
    w: float
    center: np.ndarray
    axis: np.ndarray
    body: LambdaPolyhedron
    ell_star: float
    beta_star: float
    area: float
    _volume: float | None = field(default=None, repr=False)

    @property
    def inradius(self) -> float:
        """r(L) = w: both caps erode toward the center symmetrically."""
        return self.w

    @property
    def volume(self) -> float:
        if self._volume is None:
            self._volume = lens_volume(self)
        return self._volume

    def gb_residual(self) -> float:
        """Gauss-Bonnet closure of the vertex-free lens."""
        return (
            (self.lam**2 + self.c) * self.area
            + 2.0 * self.lam * self.ell_star * math.tan(0.5 * self.beta_star)
            - 4.0 * math.pi
        )


def make_lens(
    c: float,
    lam: float,
    w: float,
    center: np.ndarray | None = None,
    axis: np.ndarray = _Z,
) -> Lens:
    """Lens of half-width w: the two lambda-spheres through the apexes
    center +- w along the axis, inward normals toward the center."""
    if w <= 0.0:
        raise ValueError("half-width must be positive")
    tb = umbilic.blow_up_time(c, lam)
    if w >= tb:
        raise EmptyBodyError(
            f"half-width {w} reaches the lambda-ball inradius {tb:.17g}"
        )
    center = np.zeros(3) if center is None else np.asarray(center, dtype=float)
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    p1, d1 = chart.geodesic_transported(c, center, axis, w)
    p2, d2 = chart.geodesic_transported(c, center, -axis, w)
    b1 = umbilic.sphere_through(c, lam, p1, -d1)
    b2 = umbilic.sphere_through(c, lam, p2, -d2)
    body = build_polyhedron(c, lam, [b1, b2])
    if body.n_facets != 2 or body.n_edges != 1 or body.n_vertices != 0:
        raise DegenerateError(
            f"lens construction produced F={body.n_facets} E={body.n_edges} "
            f"V={body.n_vertices}"
        )
    edge = body.edges[0]
    return Lens(
        c=c,
        lam=lam,
        w=w,
        center=center,
        axis=axis,
        body=body,
        ell_star=measure.edge_length(body, edge),
        beta_star=measure.normal_angle(body, edge),
        area=measure.surface_area(body),
    )


def lens_inradius(L: Lens) -> float:
    return L.w


def lens_area_curve(L: Lens, ts: np.ndarray) -> np.ndarray:
    """f_L(t) = |dL_t| at the given times (each L_t is again a lens)."""
    out = np.empty(len(ts))
    for i, t in enumerate(np.asarray(ts, dtype=float)):
        out[i] = measure.surface_area(flow.inner_parallel(L.body, float(t)))
    return out


def lens_volume(L: Lens, tol: float = 1e-9) -> float:
    """|L| by the coarea integral of the (cheap) two-ball flow."""
    return flow.coarea_volume(L.body, tol=tol)


def lens_for_area(
    c: float, lam: float, S_target: float, tol: float = 1e-10
) -> Lens:
    """The lens with |dL| = S_target, by root finding on the strictly
    monotone map w -> area."""
    if S_target <= 0.0:
        raise UnattainableError("target area must be positive")
    lc = lam * lam + c
    if lc > 0.0 and S_target >= 4.0 * math.pi / lc:
        raise UnattainableError(
            f"target area {S_target} is not below the full lambda-sphere "
            f"area {4.0 * math.pi / lc:.17g}"
        )
    tb = umbilic.blow_up_time(c, lam)

    def area_of(w: float) -> float:
        return make_lens(c, lam, w).area

    # bracket the root
    if math.isfinite(tb):
        hi = tb * (1.0 - 1e-9)
        while True:
            try:
                a_hi = area_of(hi)
                break
            except (DegenerateError, NonCompactError):
                hi *= 1.0 - 1e-6
                if hi < tb * 0.5:
                    raise UnattainableError("no buildable lens near the width limit")
        if a_hi < S_target:
            raise UnattainableError(
                f"target area {S_target} exceeds the widest lens area {a_hi}"
            )
    else:
        # unbounded-width regime: expand until the target is bracketed or
        # compactness fails, then bisect toward the compactness threshold
        hi, good = 1e-2, None
        bad = None
        while bad is None:
            try:
                if area_of(hi) >= S_target:
                    break
                good = hi
            except (NonCompactError, DegenerateError, EmptyBodyError):
                bad = hi
            hi *= 2.0
            if hi > 1e6:
                raise UnattainableError("bracket expansion failed")
        if bad is not None:
            if good is None:
                raise UnattainableError(
                    "no compact lens exists in this curvature regime"
                )
            for _ in range(60):
                mid = 0.5 * (good + bad)
                try:
                    if area_of(mid) >= S_target:
                        hi = mid
                        break
                    good = mid
                except (NonCompactError, DegenerateError, EmptyBodyError):
                    bad = mid
            else:
                raise UnattainableError(
                    f"target area {S_target} exceeds the largest compact "
                    f"lens area {area_of(good)}"
                )
    lo = min(1e-8, 0.5 * hi)
    while area_of(lo) > S_target:
        lo *= 0.5
        if lo < 1e-14:
            raise UnattainableError(f"target area {S_target} is too small")
    w = brentq(lambda w: area_of(w) - S_target, lo, hi, xtol=1e-14, rtol=1e-15)
    L = make_lens(c, lam, float(w))
    if abs(L.area - S_target) > tol * S_target:
        raise UnattainableError(
            f"area match {L.area} vs {S_target} misses tolerance {tol}"
        )
    return L
