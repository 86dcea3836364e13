"""Command-line experiment driver.

Subcommands: gb-check, flow, lens-solve, experiment, polygon2d.  Configs
are flat key=value files; command-line flags override config values.
Summary output is fully deterministic for a fixed config and seed (the
RNG is counter-based, keyed by (master seed, body index); wall-clock
timings go to stderr only).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import arrangement, flow, iso2d, lens, measure
from .errors import UmbilicError

EXIT_OK = 0
EXIT_BUILD = 2
EXIT_VIOLATION = 3

GB_TOL = 1e-6 * 4.0 * math.pi
VOL_TOL = 1e-6
INRADIUS_TOL = 1e-8
CURVE_TOL = 1e-6


@dataclass
class ExperimentConfig:
    c: list[float] = field(default_factory=lambda: [-1.0, 0.0, 1.0])
    lam: list[float] = field(default_factory=lambda: [1.5])
    seed: int = 0
    bodies: int = 10
    facets_min: int = 4
    facets_max: int = 10
    rho0_min: float = 0.2
    rho0_max: float = 0.4
    tol_quad: float = 1e-9
    tol_flow: float = 1e-7
    grid: int = 64
    mc_n: int = 200_000
    out: str = "summary.json"

    def to_text(self) -> str:
        lines = []
        for k, v in asdict(self).items():
            if isinstance(v, list):
                v = ",".join(f"{x:.17g}" for x in v)
            lines.append(f"{k}={v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        cfg = cls()
        for ln in text.splitlines():
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            k, _, v = ln.partition("=")
            k = k.strip()
            v = v.strip()
            if not hasattr(cfg, k):
                raise ValueError(f"unknown config key: {k}")
            cur = getattr(cfg, k)
            if isinstance(cur, list):
                setattr(cfg, k, [float(x) for x in v.split(",") if x])
            elif isinstance(cur, bool):
                setattr(cfg, k, v.lower() in ("1", "true", "yes"))
            elif isinstance(cur, int):
                setattr(cfg, k, int(v))
            elif isinstance(cur, float):
                setattr(cfg, k, float(v))
            else:
                setattr(cfg, k, v)
        return cfg


def _n_workers() -> int:
    env = os.environ.get("UMBILIC_THREADS", "")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _body_seed(master: int, index: int) -> int:
    return (abs(int(master)) << 32) + index


def _load_or_generate(args) -> arrangement.LambdaPolyhedron:
    if args.body:
        with open(args.body) as fh:
            return arrangement.load_body(fh.read())
    rng = np.random.Generator(np.random.Philox(key=_body_seed(args.seed, 0)))
    m = int(rng.integers(args.facets_min, args.facets_max + 1))
    rho0 = float(rng.uniform(args.rho0_min, args.rho0_max))
    return arrangement.random_polyhedron(args.seed, args.c, args.lam, m, rho0)


# -- single-body subcommands --------------------------------------------------

def cmd_gb_check(args) -> int:
    try:
        K = _load_or_generate(args)
        report = measure.body_report(K, tol=args.tol_quad, mc_n=args.mc_n, mc_seed=args.seed)
    except (UmbilicError, ValueError, OSError) as err:
        print(f"build failed: {err}", file=sys.stderr)
        return EXIT_BUILD
    text = measure.report_json(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    if abs(report["gb"]["residual"]) >= GB_TOL:
        print("Gauss-Bonnet residual beyond tolerance", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_flow(args) -> int:
    try:
        K = _load_or_generate(args)
        curve = flow.surface_area_curve(K, n_grid=args.grid, tol=args.tol_quad)
    except (UmbilicError, ValueError, OSError) as err:
        print(f"flow failed: {err}", file=sys.stderr)
        return EXIT_BUILD
    out = args.out or "flow.csv"
    with open(out, "w") as fh:
        fh.write(curve.to_csv())
    with open(out + ".events.json", "w") as fh:
        fh.write(curve.events_json() + "\n")
    print(f"inradius {curve.inradius:.17g}; {len(curve.samples)} samples -> {out}")
    return EXIT_OK


def cmd_lens_solve(args) -> int:
    try:
        L = lens.lens_for_area(args.c, args.lam, args.area, tol=args.tol_quad * 10)
    except (UmbilicError, ValueError) as err:
        print(f"lens solve failed: {err}", file=sys.stderr)
        return EXIT_BUILD
    report = {
        "c": L.c,
        "lambda": L.lam,
        "half_width": L.w,
        "ell_star": L.ell_star,
        "beta_star": L.beta_star,
        "area": L.area,
        "volume": L.volume,
        "inradius": L.inradius,
    }
    print(json.dumps(report, indent=2, sort_keys=True))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(arrangement.dump_body_spec(L.body))
    return EXIT_OK


# -- experiment batches -------------------------------------------------------

def _run_body(task) -> dict:
    c, lam, seed, cfg = task
    rec = {"c": c, "lambda": lam, "seed": seed}
    try:
        rng = np.random.Generator(np.random.Philox(key=seed))
        m = int(rng.integers(cfg["facets_min"], cfg["facets_max"] + 1))
        rho0 = float(rng.uniform(cfg["rho0_min"], cfg["rho0_max"]))
        K = arrangement.random_polyhedron(seed, c, lam, m, rho0)
        gb = measure.gauss_bonnet_report(K, cfg["tol_quad"])
        area = gb.term_area / (lam * lam + c) if lam * lam + c != 0 else measure.surface_area(K)
        rec.update(n_facets=K.n_facets, area=area, gb_residual=gb.residual)
        L = lens.lens_for_area(c, lam, area)
        r_K = K.inradius_opt()
        t_max = min(L.w, r_K * (1.0 - 1e-9))
        curve = flow.surface_area_curve(
            K, tol=cfg["tol_quad"],
            t_grid=t_max * np.arange(cfg["grid"]) / cfg["grid"],
        )
        f_L = lens.lens_area_curve(L, curve.ts())
        gaps = curve.areas() - f_L
        vol_mc, se = measure.volume_mc(K, cfg["mc_n"], seed)
        vol_co = flow.coarea_volume(K, tol=cfg["tol_flow"], curve=curve)
        rec.update(
            volume_mc=vol_mc,
            volume_mc_se=se,
            volume_coarea=vol_co,
            lens_width=L.w,
            lens_volume=L.volume,
            lens_gap=vol_co - L.volume,
            inradius=r_K,
            inradius_gap=r_K - L.inradius,
            min_curve_gap=float(np.min(gaps)),
            min_curve_gap_rel=float(np.min(gaps / f_L)),
        )
        rec["violations"] = {
            "gb": bool(abs(gb.residual) >= GB_TOL),
            "volume": bool(rec["lens_gap"] < -VOL_TOL * L.volume),
            "inradius": bool(rec["inradius_gap"] < -INRADIUS_TOL),
            "curve": bool(rec["min_curve_gap_rel"] < -CURVE_TOL),
        }
    except (UmbilicError, ValueError) as err:
        rec["error"] = f"{type(err).__name__}: {err}"
    return rec


def _run_polygon(task) -> dict:
    lam, seed, cfg = task
    rec = {"c": -1.0, "lambda": lam, "seed": seed}
    try:
        rng = np.random.Generator(np.random.Philox(key=seed))
        m = int(rng.integers(cfg["facets_min"], cfg["facets_max"] + 1))
        rho0 = float(rng.uniform(cfg["rho0_min"], cfg["rho0_max"]))
        P = iso2d.random_polygon(seed, lam, m, rho0)
        gb2 = iso2d.gb2_report(P)
        rr = iso2d.reverse_iso_check_2d(P)
        L = iso2d.twogon_for_perimeter(lam, P.perimeter)
        ab = iso2d.angle_bound_check(P, L)
        rec.update(
            n_sides=P.n_sides,
            perimeter=P.perimeter,
            area=P.area,
            gb2_residual=gb2["residual"],
            area_gap=rr["area_gap"],
            tan_excess=rr["tan_excess"],
            inradius_gap=rr["inradius_gap"],
            max_angle_excess=ab["max_excess"],
        )
        rec["violations"] = {
            "gb2": bool(abs(gb2["residual"]) >= 1e-6 * 2.0 * math.pi),
            "area": bool(rr["area_gap"] < -1e-8),
            "angles": bool(ab["max_excess"] > 1e-8),
            "inradius": bool(rr["inradius_gap"] < -INRADIUS_TOL),
        }
    except (UmbilicError, ValueError) as err:
        rec["error"] = f"{type(err).__name__}: {err}"
    return rec


def _run_batch(tasks, worker) -> list[dict]:
    n = _n_workers()
    if n <= 1 or len(tasks) <= 1:
        return [worker(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(worker, tasks, chunksize=4))


def _summarize(records: list[dict], cfg: ExperimentConfig) -> dict:
    viol_counts: dict[str, int] = {}
    n_errors = 0
    for rec in records:
        if "error" in rec:
            n_errors += 1
            continue
        for k, v in rec.get("violations", {}).items():
            viol_counts[k] = viol_counts.get(k, 0) + (1 if v else 0)
    gaps = [r["area_gap"] if "area_gap" in r else r.get("lens_gap") for r in records]
    gaps = [g for g in gaps if g is not None]
    cfg_echo = "\n".join(
        ln for ln in cfg.to_text().splitlines() if not ln.startswith("out=")
    )
    return {
        "config": cfg_echo,
        "n_bodies": len(records),
        "n_errors": n_errors,
        "violation_counts": viol_counts,
        "min_gap": min(gaps) if gaps else None,
        "records": records,
    }


def cmd_experiment(args, cfg: ExperimentConfig) -> int:
    cfg_d = asdict(cfg)
    tasks = []
    idx = 0
    for c in cfg.c:
        for lam in cfg.lam:
            if lam <= 0.0:
                continue
            for _ in range(cfg.bodies):
                tasks.append((c, lam, _body_seed(cfg.seed, idx), cfg_d))
                idx += 1
    t0 = time.time()
    records = _run_batch(tasks, _run_body)
    summary = _summarize(records, cfg)
    text = json.dumps(summary, indent=2, sort_keys=True)
    with open(cfg.out, "w") as fh:
        fh.write(text + "\n")
    print(f"{len(records)} bodies in {time.time() - t0:.1f}s -> {cfg.out}", file=sys.stderr)
    total_viol = sum(summary["violation_counts"].values())
    print(f"violations: {summary['violation_counts']}", file=sys.stderr)
    return EXIT_VIOLATION if total_viol else EXIT_OK


def cmd_polygon2d(args, cfg: ExperimentConfig) -> int:
    cfg_d = asdict(cfg)
    tasks = [
        (lam, _body_seed(cfg.seed, i), cfg_d)
        for lam in cfg.lam
        for i in range(cfg.bodies)
    ]
    t0 = time.time()
    records = _run_batch(tasks, _run_polygon)
    summary = _summarize(records, cfg)
    text = json.dumps(summary, indent=2, sort_keys=True)
    with open(cfg.out, "w") as fh:
        fh.write(text + "\n")
    print(f"{len(records)} polygons in {time.time() - t0:.1f}s -> {cfg.out}", file=sys.stderr)
    total_viol = sum(summary["violation_counts"].values())
    return EXIT_VIOLATION if total_viol else EXIT_OK


# -- entry point --------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--c", type=float, default=-1.0)
    p.add_argument("--lambda", dest="lam", type=float, default=1.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bodies", type=int)
    p.add_argument("--facets-min", dest="facets_min", type=int, default=4)
    p.add_argument("--facets-max", dest="facets_max", type=int, default=10)
    p.add_argument("--rho0", type=float)
    p.add_argument("--tol-quad", dest="tol_quad", type=float, default=1e-9)
    p.add_argument("--tol-flow", dest="tol_flow", type=float, default=1e-7)
    p.add_argument("--out", type=str, default="")
    p.add_argument("--config", type=str, default="")


def _make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="umbilic",
        description="Experiments on lambda-convex bodies in constant-curvature spaces.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gb-check", help="Gauss-Bonnet identity on one body")
    p.add_argument("body", nargs="?", help="body-spec file (omit to generate)")
    _add_common(p)
    p.add_argument("--mc-n", dest="mc_n", type=int, default=200_000)

    p = sub.add_parser("flow", help="inner-parallel flow curve of one body")
    p.add_argument("body", nargs="?", help="body-spec file (omit to generate)")
    _add_common(p)
    p.add_argument("--grid", type=int, default=64)

    p = sub.add_parser("lens-solve", help="lens matching a target surface area")
    _add_common(p)
    p.add_argument("--area", type=float, required=True)

    p = sub.add_parser("experiment", help="batch reverse-isoperimetric experiment")
    _add_common(p)

    p = sub.add_parser("polygon2d", help="2D hyperbolic polygon batch")
    _add_common(p)
    return ap


def _config_from_args(args) -> ExperimentConfig:
    if args.config:
        with open(args.config) as fh:
            cfg = ExperimentConfig.from_text(fh.read())
    else:
        cfg = ExperimentConfig()
    # flags win over config values
    argv = sys.argv[1:]
    if "--c" in argv:
        cfg.c = [args.c]
    if "--lambda" in argv:
        cfg.lam = [args.lam]
    if "--seed" in argv:
        cfg.seed = args.seed
    if args.bodies is not None:
        cfg.bodies = args.bodies
    if "--facets-min" in argv:
        cfg.facets_min = args.facets_min
    if "--facets-max" in argv:
        cfg.facets_max = args.facets_max
    if args.rho0 is not None:
        cfg.rho0_min = cfg.rho0_max = args.rho0
    if "--tol-quad" in argv:
        cfg.tol_quad = args.tol_quad
    if "--tol-flow" in argv:
        cfg.tol_flow = args.tol_flow
    if args.out:
        cfg.out = args.out
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = _make_parser().parse_args(argv)
    saved_argv = sys.argv
    if argv is not None:
        # keep flag-override detection working when called programmatically
        sys.argv = ["umbilic"] + list(argv)
    try:
        # defaults for generation-capable subcommands
        if getattr(args, "rho0", None) is None:
            args.rho0 = 0.3
        args.rho0_min = args.rho0_max = args.rho0
        if getattr(args, "mc_n", None) is None:
            args.mc_n = 200_000
        if args.command == "gb-check":
            return cmd_gb_check(args)
        if args.command == "flow":
            return cmd_flow(args)
        if args.command == "lens-solve":
            return cmd_lens_solve(args)
        cfg = _config_from_args(args)
        if args.command == "experiment":
            return cmd_experiment(args, cfg)
        if args.command == "polygon2d":
            return cmd_polygon2d(args, cfg)
    finally:
        sys.argv = saved_argv
    raise AssertionError("unreachable")


if __name__ == "__main__":
    raise SystemExit(main())
