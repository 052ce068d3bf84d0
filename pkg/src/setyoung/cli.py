"""Experiment runner: ``setyoung <command> --config FILE [--seed N] [--out DIR] [--strict]``.

Each command reads a JSON config (keys may be overridden with
``--param key=value``), writes ``results.json`` (summary and bound checks,
each numeric claim tagged ``paper_bound``, ``our_constant_choice`` or
``measured``) and ``series.csv``. Exit codes: 0 ok, 1 failed bound check
under ``--strict``, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import aumann, convex_bodies as cb, inclusions, paths, young
from .errors import EmptyFamily, NonConvergence, NumericalFailure, SetYoungError

EXIT_OK, EXIT_STRICT, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


# required keys (None) and defaults per command
SCHEMAS = {
    "steiner": {"vertices": None, "n_samples": 100_000},
    "metrics": {"n_pairs": 200, "dim": 2, "n_dirs": 2000, "segment_angle": 0.05},
    "young": {"H": 0.75, "m": 2**14, "n_seeds": 10, "alpha": 0.6, "beta": 0.7, "n_cases": 20},
    "aumann": {"n_instances": 10, "m": 64, "alpha": 0.6, "beta": 0.7, "r": 6.0, "H": 0.75, "n_measures": 8,
               "n_anchors": 8},
    "discretize": {"m": 256, "steps": [64, 32, 16, 8], "alpha": 0.6, "beta": 0.7, "r": 6.0, "n_measures": 16,
                   "driver": "smooth"},
    "example3": {"n_max": 50, "beta": 0.5, "alpha": 0.75, "r": 10.0, "m": None, "sign": -1.0},
    "inclusion": {"phi": None, "xi": None, "alpha": 0.45, "beta": 0.7, "r": None, "order": 1, "H": 0.75,
                  "m": 256, "T": 1.0, "driver": "fbm"},
    "funnel": {"phi": None, "xi": None, "alpha": 0.45, "beta": 0.7, "r": None, "order": 1, "H": 0.75, "m": 128,
               "T": 1.0, "driver": "fbm", "n_strategies": 6, "anchors": []},
    "fbm-check": {"H": 0.75, "n_seeds": 10_000, "m": 64, "T": 1.0},
}


def _claim(name, measured, bound=None, kind="paper_bound", passed=None):
    d = {"name": name, "measured": measured, "provenance": "measured"}
    if bound is not None:
        d["bound"] = bound
        d["bound_provenance"] = kind
    if passed is not None:
        d["passed"] = bool(passed)
    return d


def _validate(command: str, params: dict) -> dict:
    schema = SCHEMAS[command]
    unknown = sorted(set(params) - set(schema))
    if unknown:
        raise UsageError(f"unknown key {unknown[0]!r} for command {command!r}")
    out = dict(schema)
    out.update(params)
    missing = [k for k, v in schema.items() if v is None and params.get(k) is None and k not in ("r", "m")]
    if missing:
        raise UsageError(f"missing required key {missing[0]!r} for command {command!r}")
    return out


# ---------------------------------------------------------------------------
# commands: each returns (summary dict, list of claims, series header, series rows)


def cmd_steiner(p, seed):
    C = cb.ConvexBody(np.asarray(p["vertices"], dtype=float))
    est = cb.steiner_point(C, int(p["n_samples"]), seed)
    exact = cb.steiner_point_exact(C)
    claims = []
    if exact is not None:
        err = float(np.max(np.abs(est.point - exact) / np.maximum(est.stderr, 1e-300)))
        claims.append(_claim("mc_vs_exact_in_stderr", err, 3.0, "our_constant_choice", err <= 3.0))
    claims.append(_claim("membership_distance", cb.distance_to_set(est.point, C), 1e-9, "our_constant_choice",
                         C.contains(est.point)))
    rows = []
    for n in (1000, 10_000, int(p["n_samples"])):
        e = cb.steiner_point(C, n, seed)
        rows.append([n] + e.point.tolist() + e.stderr.tolist())
    hdr = ["n_samples"] + [f"x{i + 1}" for i in range(C.dim)] + [f"se{i + 1}" for i in range(C.dim)]
    summary = {"point": est.point.tolist(), "stderr": est.stderr.tolist(),
               "exact": None if exact is None else exact.tolist()}
    return summary, claims, hdr, rows


def cmd_metrics(p, seed):
    rng = np.random.default_rng(seed)
    n, k = int(p["dim"]), int(p["n_pairs"])
    worst_tri, worst_sym, worst_dem = 0.0, 0.0, math.inf
    rows = []
    for i in range(k):
        A, B, C = (cb.random_polytope(rng, n) for _ in range(3))
        ab, ba = cb.hausdorff_distance(A, B), cb.hausdorff_distance(B, A)
        ac, cbd = cb.hausdorff_distance(A, C), cb.hausdorff_distance(C, B)
        worst_tri = max(worst_tri, ab - ac - cbd)
        worst_sym = max(worst_sym, abs(ab - ba))
        est = cb.demyanov_estimate(A, B, int(p["n_dirs"]), seed + i)
        worst_dem = min(worst_dem, est.value - est.support_gap)
        rows.append([i, ab, est.value, est.support_gap])
    a = float(p["segment_angle"])
    S0 = cb.ConvexBody(np.array([[-1.0, 0.0], [1.0, 0.0]]))
    S1 = cb.ConvexBody(np.array([[-math.cos(a), -math.sin(a)], [math.cos(a), math.sin(a)]]))
    dd = cb.demyanov_distance(S0, S1, int(p["n_dirs"]), seed)
    dh = cb.hausdorff_distance(S0, S1)
    claims = [
        _claim("triangle_inequality_excess", worst_tri, 1e-9, "our_constant_choice", worst_tri <= 1e-9),
        _claim("symmetry_defect", worst_sym, 1e-9, "our_constant_choice", worst_sym <= 1e-9),
        _claim("demyanov_minus_support_gap_min", worst_dem, 0.0, "paper_bound", worst_dem >= -1e-12),
        _claim("rotating_segment_demyanov", dd, 1.0, "paper_bound", dd >= 0.9),
        _claim("rotating_segment_hausdorff", dh, 2 * math.sin(a / 2), "measured", dh <= 2 * math.sin(a / 2) + 1e-12),
    ]
    return {"n_pairs": k, "dim": n}, claims, ["pair", "hausdorff", "demyanov_est", "support_gap"], rows


def cmd_young(p, seed):
    H, m = float(p["H"]), int(p["m"])
    rows, worst = [], 0.0
    for s in range(int(p["n_seeds"])):
        w = paths.sample_fbm(H, 1.0, m, seed=seed + s)
        val = float(young.young_integral(w, w).values[-1])
        exact = 0.5 * (w.values[-1] ** 2 - w.values[0] ** 2)
        rel = abs(val - exact) / max(abs(exact), 1e-300)
        worst = max(worst, rel)
        rows.append([seed + s, val, exact, rel])
    cfg = young.YoungConfig(float(p["alpha"]), float(p["beta"]))
    rng = np.random.default_rng(seed)
    worst_ratio, all_ok = 0.0, True
    for c in range(int(p["n_cases"])):
        w = paths.sample_fbm(H, 1.0, 256, seed=seed + 1000 + c)
        a = rng.normal(size=3)
        f = paths.SampledPath.from_function(lambda t: a[0] * math.sin(3 * t + a[1]) + a[2] * t, 1.0, 256)
        rep = young.verify_young_love(f, w, cfg, 100, seed + c)
        worst_ratio = max(worst_ratio, rep.worst_ratio, rep.global_ratio)
        all_ok &= rep.satisfied
    claims = [
        _claim("chain_rule_relative_error_max", worst, 1e-3, "our_constant_choice", worst <= 1e-3),
        _claim("young_love_worst_ratio", worst_ratio, 1.0, "paper_bound", all_ok),
        _claim("sewing_constant", cfg.sewing_constant, None),
    ]
    claims[-1]["provenance"] = "paper_bound"
    return {"H": H, "m": m}, claims, ["seed", "integral", "exact", "relative_error"], rows


def _random_instance(rng, m, T=1.0):
    P = cb.random_polytope(rng, 2, 6, 0.5)
    c = rng.normal(size=2)
    om = rng.uniform(0.5, 2.0)
    V = P.vertices - P.vertices.mean(axis=0)

    def F(t):
        R = np.array([[math.cos(om * t), -math.sin(om * t)], [math.sin(om * t), math.cos(om * t)]])
        return cb.ConvexBody(V @ R.T + c * math.sin(t))

    return aumann.SetValuedPath.from_function(F, T, m, shape=(1, 2))


def cmd_aumann(p, seed):
    rng = np.random.default_rng(seed)
    cfg = young.YoungConfig(float(p["alpha"]), float(p["beta"]))
    r, m = float(p["r"]), int(p["m"])
    rows, ok_all = [], True
    worst = 0.0
    for i in range(int(p["n_instances"])):
        F = _random_instance(rng, m)
        w = paths.time_augmented(paths.sample_fbm(float(p["H"]), 1.0, m, seed=seed + i))
        fam = aumann.build_selection_family(
            F, cfg.alpha, r, measures=aumann.default_measures(2, int(p["n_measures"]), seed + i),
            anchors=aumann.default_anchors(F, int(p["n_anchors"]), seed + i), rng_seed=seed + i,
            check_r_min=False,
        )
        res = aumann.aumann_young_integral(F, w, cfg, r, fam)
        ratio = res.hull.norm / res.radius_bound
        worst = max(worst, ratio)
        ok_all &= ratio <= 1.0
        rows.append([i, len(fam), res.hull.norm, res.radius_bound])
    claims = [_claim("hull_norm_over_radius_max", worst, 1.0, "paper_bound", ok_all)]
    return {"n_instances": int(p["n_instances"]), "r": r}, claims, ["instance", "family_size", "hull_norm",
                                                                    "radius_bound"], rows


def _smooth_F(m):
    P = cb.ConvexBody.regular_polygon(5, 0.5)

    def F(t):
        c, s = math.cos(2 * t), math.sin(2 * t)
        return cb.ConvexBody(P.vertices @ np.array([[c, s], [-s, c]]) * (1 + 0.3 * t) + np.array([math.sin(3 * t), t]))

    return aumann.SetValuedPath.from_function(F, 1.0, m, shape=(1, 2))


def cmd_discretize(p, seed):
    m = int(p["m"])
    F = _smooth_F(m)
    if p["driver"] == "smooth":
        w = paths.SampledPath.from_function(lambda t: [t, math.sin(2 * math.pi * t)], 1.0, m)
    else:
        w = paths.time_augmented(paths.sample_fbm(0.75, 1.0, m, seed=seed))
    cfg = young.YoungConfig(float(p["alpha"]), float(p["beta"]))
    r = float(p["r"])
    ms = aumann.default_measures(2, int(p["n_measures"]), seed)
    hulls = []
    for step in p["steps"]:
        Fn = aumann.interpolate_multifunction(F, np.arange(0, m + 1, int(step)))
        fam = aumann.build_selection_family(Fn, cfg.alpha, r, measures=ms, anchors=[], rng_seed=seed,
                                            check_r_min=False)
        hulls.append(aumann.aumann_young_integral(Fn, w, cfg, r, fam).hull)
    gaps = [cb.hausdorff_distance(hulls[i], hulls[i + 1]) for i in range(len(hulls) - 1)]
    dec = all(b < a for a, b in zip(gaps, gaps[1:]))
    rel = gaps[-1] / max(hulls[-1].diameter, 1e-300)
    rows = [[int(s), gaps[i - 1] if i else ""] for i, s in enumerate(p["steps"])]
    claims = [_claim("gaps_strictly_decreasing", dec, None, passed=dec),
              _claim("final_gap_over_diameter", rel, 1e-2, "our_constant_choice", rel <= 1e-2)]
    return {"gaps": gaps}, claims, ["step", "gap_to_previous"], rows


def cmd_example3(p, seed):
    rep = aumann.example3_divergence(float(p["beta"]), int(p["n_max"]), p["m"], float(p["alpha"]), float(p["r"]),
                                     float(p["sign"]), rng_seed=seed)
    I = rep.integrals
    dec = all(b <= a for a, b in zip(I[1:], I[2:]))
    crosses = min(I) < -1.0 if p["sign"] < 0 else max(I) > 1.0
    claims = [
        _claim("eventually_monotone", dec, None, passed=dec),
        _claim("crosses_unit_level", I[-1], -1.0 if p["sign"] < 0 else 1.0, "paper_bound", crosses),
        _claim("bounded_hull_radius", rep.hull_radius, rep.young_love_radius, "paper_bound",
               rep.hull_radius <= rep.young_love_radius),
    ]
    rows = [[n, a, g, b, s] for n, a, g, b, s in zip(rep.n, I, rep.grid_integrals, rep.bound_chain, rep.seminorms)]
    summ = {k: v for k, v in rep.to_dict().items() if k not in ("n", "integrals", "grid_integrals", "bound_chain",
                                                                 "seminorms")}
    return summ, claims, ["n", "integral", "grid_integral", "bound_chain", "seminorm_lower"], rows


def _driver(p, seed, d):
    T, m = float(p["T"]), int(p["m"])
    if p["driver"] == "smooth":
        return paths.SampledPath.from_function(lambda t: [t] + [math.sin(2 * math.pi * t)] * (d - 1), T, m) \
            if d > 1 else paths.SampledPath.from_function(lambda t: t, T, m)
    if d == 1:
        return paths.sample_fbm(float(p["H"]), T, m, seed=seed)
    return paths.time_augmented(paths.sample_fbm(float(p["H"]), T, m, dims=d - 1, seed=seed))


def _problem(p, seed):
    phi = inclusions.make_phi(p["phi"])
    order = int(p["order"])
    w = _driver(p, seed, phi.d if order == 1 else 1)
    return inclusions.InclusionProblem(phi, p["xi"], w, float(p["alpha"]), float(p["beta"]), p["r"], order)


def cmd_inclusion(p, seed):
    prob = _problem(p, seed)
    rep = inclusions.solve(prob, seed=seed)
    conds = rep.window_condition
    claims = [
        _claim("membership_residual", rep.residual, 1e-3, "our_constant_choice", rep.residual <= 1e-3),
        _claim("window_condition_max", max(conds), 1.0, "paper_bound", rep.fallback or max(conds) <= 1.0),
        _claim("iterations", rep.iterations, prob.max_iter, "our_constant_choice", rep.iterations <= prob.max_iter),
    ]
    if rep.ibp_residual is not None:
        claims.append(_claim("integration_by_parts_residual", rep.ibp_residual, 1e-6, "our_constant_choice",
                             rep.ibp_residual <= 1e-6))
    X = rep.path.flat()
    rows = [[t] + x.tolist() for t, x in zip(rep.path.grid, X)]
    summ = rep.to_dict()
    summ["r"] = prob.r
    return summ, claims, ["t"] + [f"x{i + 1}" for i in range(X.shape[1])], rows


def cmd_funnel(p, seed):
    prob = _problem(p, seed)
    n = prob.phi.dim
    strategies = inclusions.default_strategies(n, int(p["n_strategies"]), seed)
    strategies += [inclusions.Strategy("anchor", anchor=tuple(a)) for a in p["anchors"]]
    rep = inclusions.solution_funnel(prob, strategies, seed)
    widths = rep.widths()
    claims = [_claim("max_residual", max(r.residual for r in rep.reports), 1e-3, "our_constant_choice",
                     all(r.residual <= 1e-3 for r in rep.reports))]
    rows = [[t, wd] for t, wd in zip(prob.w.grid, widths)]
    return {"n_solved": len(rep.reports), "failures": rep.failures, "final_width": float(widths[-1])}, claims, \
        ["t", "width"], rows


def cmd_fbm_check(p, seed):
    H, n, m, T = float(p["H"]), int(p["n_seeds"]), int(p["m"]), float(p["T"])
    last = np.array([paths.sample_fbm(H, T, m, seed=seed + s).values[-1] for s in range(n)])
    var = float(np.mean(last**2))
    se = float(np.std(last**2, ddof=1) / math.sqrt(n))
    expected = T ** (2 * H)
    ok = abs(var - expected) <= 3 * se
    claims = [_claim("variance_at_T", var, expected, "paper_bound", ok)]
    claims[0]["stderr"] = se
    rows = [[k, float(np.mean(last[: k] ** 2))] for k in np.unique(np.geomspace(10, n, 12).astype(int))]
    return {"variance": var, "stderr": se, "expected": expected}, claims, ["n_seeds", "running_variance"], rows


COMMANDS = {
    "steiner": cmd_steiner,
    "metrics": cmd_metrics,
    "young": cmd_young,
    "aumann": cmd_aumann,
    "discretize": cmd_discretize,
    "example3": cmd_example3,
    "inclusion": cmd_inclusion,
    "funnel": cmd_funnel,
    "fbm-check": cmd_fbm_check,
}


# ---------------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return x


def _parse_value(s: str):
    try:
        return json.loads(s)
    except json.JSONDecodeError:
        return s


def run(command: str, params: dict, seed: int, out_dir, strict: bool = False) -> int:
    """Run one experiment and write its files; returns the exit status."""
    if command not in COMMANDS:
        raise UsageError(f"unknown command {command!r}")
    p = _validate(command, params)
    summary, claims, header, rows = COMMANDS[command](p, seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    passed = all(c.get("passed", True) for c in claims)
    doc = {"command": command, "seed": seed, "params": p, "summary": summary, "checks": claims, "passed": passed}
    with open(out / "results.json", "w") as fh:
        json.dump(_jsonable(doc), fh, sort_keys=True, indent=2)
        fh.write("\n")
    with open(out / "series.csv", "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(header)
        for row in rows:
            wr.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return EXIT_STRICT if strict and not passed else EXIT_OK


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="setyoung", description="Aumann-Young integral experiments")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", required=True, help="JSON file with command parameters")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--out", default="out")
    ap.add_argument("--strict", action="store_true", help="exit 1 if any bound check fails")
    ap.add_argument("--param", action="append", default=[], metavar="KEY=VALUE", help="override a config key")
    args = ap.parse_args(argv)
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        params = dict(cfg.get("params", cfg))
        seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
        params.pop("seed", None)
        for kv in args.param:
            if "=" not in kv:
                raise UsageError(f"--param expects KEY=VALUE, got {kv!r}")
            k, v = kv.split("=", 1)
            params[k] = _parse_value(v)
        return run(args.command, params, seed, args.out, args.strict)
    except (UsageError, OSError, json.JSONDecodeError) as exc:
        print(f"setyoung: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalFailure, NonConvergence, EmptyFamily) as exc:
        print(f"setyoung: numerical failure in {args.command}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (SetYoungError, ValueError, TypeError, KeyError) as exc:
        print(f"setyoung: invalid parameters for {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
