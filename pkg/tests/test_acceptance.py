"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

The heavy reverse-isoperimetric batch (criteria 5-8) is computed once in a
module-scoped fixture and shared.  All tolerances are pinned here.
"""

import math
import sys
import time

import numpy as np
import pytest

from umbilic import chart, cli, flow, iso2d, lens, measure, quadrature, umbilic
from umbilic.arrangement import build_polyhedron, random_polyhedron
from umbilic.errors import DegenerateError, EventNearbyError, NonCompactError

CURVATURES = (-1.0, 0.0, 1.0)
# lambda ranges keeping lam^2 + c > 0 and (for c = 1) the body inside the
# open hemisphere of the chart
LAM_RANGE = {-1.0: (1.1, 2.2), 0.0: (0.6, 2.0), 1.0: (0.8, 1.8)}

N_GB = 100          # criterion 1, per curvature
N_GB_HYP = 20       # criterion 1, hyperbolic lam in (0, 1]
N_COAREA = 30       # criterion 3, per curvature
N_VARIATION = 30    # criterion 4, per curvature
N_MAIN = 500        # criteria 5-8, per curvature
N_LENS_INPUTS = 4   # criteria 5-8 equality cases, per curvature
N_POLY2D = 510      # criterion 10
N_TWOGON2D = 10     # criterion 10 equality cases

TOL_GB = 1e-6 * 4.0 * math.pi
TOL_AREA_REL = 1e-6
TOL_VOL_REL = 1e-6
TOL_INRADIUS = 1e-8
TOL_CURVE_REL = 1e-6
TOL_EDGESUM = 1e-6
TOL_FRENET = 1e-6
TOL_GB2 = 1e-6 * 2.0 * math.pi
TOL_ANGLE = 1e-8
TOL_AREA2D = 1e-8


def _progress(msg: str) -> None:
    print(msg, file=sys.__stderr__, flush=True)


def _report(capsys, num: int, name: str, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"[criterion {num:2d}] {name}: {'PASS' if ok else 'FAIL'} ({detail})")


def _gen_body(seed: int, c: float, lam: float, m: int, rho0: float):
    for k in range(6):
        try:
            return random_polyhedron(seed + k * 1_000_003, c, lam, m, rho0)
        except (DegenerateError, NonCompactError):
            continue
    raise DegenerateError(f"no buildable body near seed {seed}")


# -- criterion 1 + 9 batch ----------------------------------------------------

@pytest.fixture(scope="module")
def gb_batch():
    t0 = time.time()
    bodies = []
    for ci, c in enumerate(CURVATURES):
        lo, hi = LAM_RANGE[c]
        for i in range(N_GB):
            seed = (11 << 40) + (ci << 32) + i
            rng = np.random.Generator(np.random.Philox(key=seed))
            lam = float(rng.uniform(lo, hi))
            m = int(rng.integers(4, 17))
            rho0 = float(rng.uniform(0.22, 0.35))
            K = _gen_body(seed, c, lam, m, rho0)
            tb = time.time()
            gb = measure.gauss_bonnet_report(K)
            bodies.append({"K": K, "gb": gb, "gb_seconds": time.time() - tb})
    # hyperbolic horosphere/equidistant regime
    for i in range(N_GB_HYP):
        seed = (12 << 40) + i
        rng = np.random.Generator(np.random.Philox(key=seed))
        lam = float(rng.uniform(0.05, 1.0))
        m = int(rng.integers(6, 17))
        K = _gen_body(seed, -1.0, lam, m, 0.3)
        tb = time.time()
        gb = measure.gauss_bonnet_report(K)
        bodies.append({"K": K, "gb": gb, "gb_seconds": time.time() - tb})
    _progress(f"  gb batch: {len(bodies)} bodies in {time.time() - t0:.0f}s")
    return bodies


def test_criterion_01_gauss_bonnet(gb_batch, capsys):
    residuals = [abs(b["gb"].residual) for b in gb_batch]
    times = [b["gb_seconds"] for b in gb_batch]
    ok = max(residuals) < TOL_GB and max(times) < 5.0
    _report(
        capsys, 1, "Gauss-Bonnet identity",
        ok,
        f"{len(gb_batch)} bodies, max |residual| {max(residuals):.2e} < {TOL_GB:.2e}, "
        f"max {max(times):.2f}s/body",
    )
    assert max(residuals) < TOL_GB
    assert max(times) < 5.0


def test_criterion_02_lambda_sphere_area(capsys):
    pairs = [
        (0.0, 2.0), (1.0, 1.0), (-1.0, 1.5), (-1.0, 2.5), (0.0, 1.0),
        (0.0, 0.5), (1.0, 0.6), (-2.5, 2.0), (0.7, 1.2),
    ]
    worst = 0.0
    for c, lam in pairs:
        if c == 0.0:
            R = 1.0 / lam
        else:
            s = math.sqrt(abs(c))
            R = (
                math.atanh(s / lam) / s if c < 0.0
                else math.atan2(1.0, lam / s) / s
            )
        p, d = chart.geodesic_transported(c, np.zeros(3), np.array([0.0, 0.0, 1.0]), R)
        K = build_polyhedron(c, lam, [umbilic.sphere_through(c, lam, p, -d)])
        got = measure.surface_area(K)
        want = 4.0 * math.pi / (lam * lam + c)
        worst = max(worst, abs(got - want) / want)
    # spot checks named in the contract
    assert 4.0 * math.pi / (0.0 + 4.0) == pytest.approx(math.pi)
    assert 4.0 * math.pi / (1.0 + 1.0) == pytest.approx(2.0 * math.pi)
    ok = worst < TOL_AREA_REL
    _report(capsys, 2, "lambda-sphere area closed form", ok,
            f"9 pairs, max rel err {worst:.2e} < {TOL_AREA_REL:.0e}")
    assert ok


def test_criterion_03_coarea_volume(capsys):
    t0 = time.time()
    worst_ratio = 0.0
    n = 0
    for ci, c in enumerate(CURVATURES):
        lo, hi = LAM_RANGE[c]
        for i in range(N_COAREA):
            seed = (21 << 40) + (ci << 32) + i
            rng = np.random.Generator(np.random.Philox(key=seed))
            lam = float(rng.uniform(lo, hi))
            m = int(rng.integers(4, 11))
            K = _gen_body(seed, c, lam, m, float(rng.uniform(0.25, 0.35)))
            vol = flow.coarea_volume(K, tol=1e-7)
            mc, se = measure.volume_mc(K, n=10**6, seed=seed)
            allowed = max(3.0 * se, 0.01 * mc)
            worst_ratio = max(worst_ratio, abs(vol - mc) / allowed)
            n += 1
        _progress(f"  coarea c={c}: done ({time.time() - t0:.0f}s)")
    ok = worst_ratio < 1.0
    _report(capsys, 3, "coarea volume vs Monte Carlo", ok,
            f"{n} bodies, worst |diff|/allowed {worst_ratio:.3f} < 1")
    assert ok


def test_criterion_04_variation_formula(capsys):
    worst3, worst2 = 0.0, 0.0
    checks3 = checks2 = 0
    for ci, c in enumerate(CURVATURES):
        lo, hi = LAM_RANGE[c]
        for i in range(N_VARIATION):
            seed = (31 << 40) + (ci << 32) + i
            rng = np.random.Generator(np.random.Philox(key=seed))
            lam = float(rng.uniform(lo, hi))
            K = _gen_body(seed, c, lam, int(rng.integers(4, 11)), 0.3)
            r = flow.inradius(K)
            done = 0
            for frac in (0.12, 0.28, 0.44, 0.6, 0.76, 0.2, 0.36, 0.52, 0.68, 0.84):
                if done == 5:
                    break
                try:
                    out = flow.variation_check(K, frac * r, h=1e-4)
                except EventNearbyError:
                    continue
                worst3 = max(worst3, abs(out["residual"] / out["formula"]))
                done += 1
            checks3 += done
            assert done == 5, f"fewer than 5 event-free times for seed {seed}"
    for i in range(N_VARIATION):
        seed = (32 << 40) + i
        rng = np.random.Generator(np.random.Philox(key=seed))
        lam = float(rng.uniform(1.1, 2.2))
        P = iso2d.random_polygon(seed, lam, int(rng.integers(3, 9)), 0.3)
        r = iso2d.inradius_2d(P)
        done = 0
        for frac in (0.12, 0.28, 0.44, 0.6, 0.76, 0.2, 0.36, 0.52, 0.68, 0.84):
            if done == 5:
                break
            try:
                out = iso2d.variation_check_2d(P, frac * r, h=1e-4)
            except EventNearbyError:
                continue
            worst2 = max(worst2, abs(out["residual"] / out["formula"]))
            done += 1
        checks2 += done
        assert done == 5
    ok = worst3 < 1e-3 and worst2 < 1e-3
    _report(capsys, 4, "first-variation formula", ok,
            f"{checks3} checks 3D worst {worst3:.2e}, {checks2} checks 2D worst {worst2:.2e}, tol 1e-3")
    assert ok


# -- criteria 5-8 shared batch ------------------------------------------------

def _volume_from_curve(K, curve, r_K):
    """|K| from the 64-point flow curve: composite Simpson on the uniform
    grid, then adaptive quadrature over the remaining [t_max, r_K) range."""
    ts = curve.ts()
    fs = curve.areas()
    t_max = ts[-1] + (ts[1] - ts[0]) if len(ts) > 1 else r_K
    t_max = min(t_max, r_K * (1.0 - 1e-9))
    f_end = measure.surface_area(flow._build_at(K, t_max))
    grid = np.append(ts, t_max)
    vals = np.append(fs, f_end)
    n_int = len(grid) - 1
    if n_int % 2:  # composite Simpson needs an even interval count
        vol = float(np.trapezoid(vals, grid))
    else:
        h = grid[1] - grid[0]
        vol = float(
            h / 3.0 * (vals[0] + vals[-1] + 4.0 * vals[1:-1:2].sum() + 2.0 * vals[2:-2:2].sum())
        )
    top = r_K - max(1e-5 * r_K, 1e-7)
    if top > t_max + 1e-9:
        def f(tt):
            return np.array(
                [measure.surface_area(flow._build_at(K, float(t))) for t in np.atleast_1d(tt)]
            )
        tail, _ = quadrature.integrate(f, t_max, top, rel_tol=1e-6, abs_tol=0.0, n=8, max_splits=64)
        vol += tail + f(top)[0] * (r_K - top) / 3.0
    return vol


def _run_main_body(c, seed, lens_input=False):
    rng = np.random.Generator(np.random.Philox(key=seed))
    lo, hi = LAM_RANGE[c]
    lam = float(rng.uniform(lo, hi))
    if lens_input:
        w = float(rng.uniform(0.3, 0.7)) * umbilic.blow_up_time(c, lam)
        K = lens.make_lens(c, lam, w).body
    else:
        m = int(rng.integers(4, 11))
        K = _gen_body(seed, c, lam, m, float(rng.uniform(0.25, 0.35)))
    gb = measure.gauss_bonnet_report(K)
    S = gb.term_area / (lam * lam + c)
    edge_sum_K = gb.term_edges / (2.0 * lam)
    L = lens.lens_for_area(c, lam, S)
    r_K = K.inradius_opt()
    t_max = min(L.w, r_K * (1.0 - 1e-9))
    curve = flow.surface_area_curve(K, t_grid=t_max * np.arange(64) / 64.0)
    f_K = curve.areas()
    f_L = lens.lens_area_curve(L, curve.ts())
    if lens_input:
        vol_K = flow.coarea_volume(K, tol=1e-9, curve=curve)
    else:
        vol_K = _volume_from_curve(K, curve, r_K)
    return {
        "c": c,
        "lens_input": lens_input,
        "seed": seed,
        "K": K,
        "area": S,
        "edge_sum": edge_sum_K,
        "lens_edge_term": L.ell_star * math.tan(0.5 * L.beta_star),
        "vol_K": vol_K,
        "vol_L": L.volume,
        "r_K": r_K,
        "r_L": L.inradius,
        "curve_gap_rel": float(np.min((f_K - f_L) / f_L)),
    }


@pytest.fixture(scope="module")
def main_batch():
    t0 = time.time()
    records = []
    for ci, c in enumerate(CURVATURES):
        for i in range(N_MAIN):
            seed = (41 << 40) + (ci << 32) + i
            records.append(_run_main_body(c, seed))
            if (i + 1) % 50 == 0:
                _progress(
                    f"  main batch c={c}: {i + 1}/{N_MAIN} ({time.time() - t0:.0f}s)"
                )
        for i in range(N_LENS_INPUTS):
            seed = (42 << 40) + (ci << 32) + i
            records.append(_run_main_body(c, seed, lens_input=True))
    # cross-check the Simpson-on-curve volume against the adaptive coarea
    # integral on a subsample
    worst = 0.0
    by_c = {}
    for rec in records:
        if not rec["lens_input"] and by_c.setdefault(rec["c"], 0) < 2:
            by_c[rec["c"]] += 1
            full = flow.coarea_volume(rec["K"], tol=1e-8)
            worst = max(worst, abs(rec["vol_K"] - full) / full)
    assert worst < 1e-5, f"curve-based volume off by {worst:.2e} vs adaptive coarea"
    _progress(f"  main batch: {len(records)} bodies in {time.time() - t0:.0f}s")
    return records


def test_criterion_05_main_theorem_volume(main_batch, capsys):
    viol = 0
    min_gap = math.inf
    eq_worst = 0.0
    for rec in main_batch:
        gap = rec["vol_K"] - rec["vol_L"]
        min_gap = min(min_gap, gap / rec["vol_L"])
        if gap < -TOL_VOL_REL * rec["vol_L"]:
            viol += 1
        if rec["lens_input"]:
            eq_worst = max(eq_worst, abs(gap) / rec["vol_L"])
    ok = viol == 0 and eq_worst < TOL_VOL_REL
    _report(capsys, 5, "volume vs area-matched lens", ok,
            f"{len(main_batch)} bodies, {viol} violations, min rel gap {min_gap:.2e}, "
            f"lens-input equality worst {eq_worst:.2e}")
    assert ok


def test_criterion_06_inradius(main_batch, capsys):
    viol = 0
    eq_worst = 0.0
    strict = True
    for rec in main_batch:
        gap = rec["r_K"] - rec["r_L"]
        if gap < -TOL_INRADIUS:
            viol += 1
        if rec["lens_input"]:
            eq_worst = max(eq_worst, abs(gap))
        elif gap <= TOL_INRADIUS:
            strict = False
    ok = viol == 0 and eq_worst <= TOL_INRADIUS and strict
    _report(capsys, 6, "inradius vs matched lens", ok,
            f"{viol} violations, lens-input |gap| max {eq_worst:.2e} <= {TOL_INRADIUS:.0e}, "
            f"strict inequality for non-lens bodies: {strict}")
    assert ok


def test_criterion_07_flow_curve_dominance(main_batch, capsys):
    viol = sum(1 for rec in main_batch if rec["curve_gap_rel"] < -TOL_CURVE_REL)
    worst = min(rec["curve_gap_rel"] for rec in main_batch)
    ok = viol == 0
    _report(capsys, 7, "flow-curve dominance on 64-point grids", ok,
            f"{len(main_batch)} curves, {viol} certified violations, min rel gap {worst:.2e}")
    assert ok


def test_criterion_08_edge_sum(main_batch, capsys):
    viol = 0
    worst = -math.inf
    for rec in main_batch:
        excess = rec["edge_sum"] - rec["lens_edge_term"]
        worst = max(worst, excess)
        if excess > TOL_EDGESUM:
            viol += 1
    ok = viol == 0
    _report(capsys, 8, "edge sum vs matched lens edge term", ok,
            f"{viol} violations, max excess {worst:.2e} <= {TOL_EDGESUM:.0e}")
    assert ok


def test_criterion_09_edge_curvature(gb_batch, capsys):
    worst = 0.0
    n_edges = 0
    for b in gb_batch:
        K = b["K"]
        lam = K.lam
        measure.fill_edge_measurements(K)
        for e in K.edges:
            k = measure.frenet_curvature_fd(K, e)
            worst = max(worst, abs(k * math.cos(0.5 * e.beta) - lam))
            n_edges += 1
    ok = worst < TOL_FRENET
    _report(capsys, 9, "edge Frenet curvature relation", ok,
            f"{n_edges} edges over {len(gb_batch)} bodies, max |k cos(beta/2) - lambda| "
            f"{worst:.2e} < {TOL_FRENET:.0e}")
    assert ok


def test_criterion_10_planar_suite(capsys):
    t0 = time.time()
    worst_gb2 = 0.0
    worst_angle = -math.inf
    min_gap = math.inf
    viol = 0
    strict = True
    eq_worst = 0.0
    for i in range(N_POLY2D):
        seed = (51 << 40) + i
        rng = np.random.Generator(np.random.Philox(key=seed))
        lam = float(rng.uniform(1.1, 2.2))
        P = iso2d.random_polygon(seed, lam, int(rng.integers(3, 9)), float(rng.uniform(0.25, 0.35)))
        worst_gb2 = max(worst_gb2, abs(iso2d.gb2_report(P)["residual"]))
        L = iso2d.twogon_for_perimeter(lam, P.perimeter)
        out = iso2d.angle_bound_check(P, L)
        worst_angle = max(worst_angle, out["max_excess"])
        gap = P.area - L.area
        min_gap = min(min_gap, gap)
        if gap < -TOL_AREA2D:
            viol += 1
        if gap <= TOL_AREA2D:
            strict = False
        if (i + 1) % 200 == 0:
            _progress(f"  2d suite: {i + 1}/{N_POLY2D} ({time.time() - t0:.0f}s)")
    for i in range(N_TWOGON2D):
        seed = (52 << 40) + i
        rng = np.random.Generator(np.random.Philox(key=seed))
        lam = float(rng.uniform(1.1, 2.2))
        w = float(rng.uniform(0.1, 0.6)) * umbilic.blow_up_time(-1.0, lam)
        P = iso2d.make_twogon(lam, w)
        worst_gb2 = max(worst_gb2, abs(iso2d.gb2_report(P)["residual"]))
        L = iso2d.twogon_for_perimeter(lam, P.perimeter)
        eq_worst = max(eq_worst, abs(P.area - L.area))
    ok = (
        worst_gb2 < TOL_GB2 and worst_angle <= TOL_ANGLE and viol == 0
        and strict and eq_worst <= TOL_AREA2D
    )
    _report(capsys, 10, "planar hyperbolic suite", ok,
            f"{N_POLY2D} polygons: max GB2 residual {worst_gb2:.2e} < {TOL_GB2:.2e}, "
            f"max angle excess {worst_angle:.2e} <= {TOL_ANGLE:.0e}, {viol} area violations "
            f"(min gap {min_gap:.2e}); 2-gon equality worst {eq_worst:.2e}")
    assert ok


def test_criterion_11_determinism(tmp_path, capsys):
    args = ["experiment", "--c", "-1", "--lambda", "1.5", "--seed", "77",
            "--bodies", "2", "--facets-min", "4", "--facets-max", "6"]
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    rc1 = cli.main(args + ["--out", str(out1)])
    rc2 = cli.main(args + ["--out", str(out2)])
    same3 = out1.read_bytes() == out2.read_bytes()
    argsp = ["polygon2d", "--lambda", "1.4", "--seed", "9", "--bodies", "3"]
    p1, p2 = tmp_path / "p1.json", tmp_path / "p2.json"
    cli.main(argsp + ["--out", str(p1)])
    cli.main(argsp + ["--out", str(p2)])
    same2 = p1.read_bytes() == p2.read_bytes()
    capsys.readouterr()
    ok = same3 and same2 and rc1 == rc2 == 0
    _report(capsys, 11, "experiment determinism", ok,
            f"3D summary byte-identical: {same3}; 2D summary byte-identical: {same2}")
    assert ok
