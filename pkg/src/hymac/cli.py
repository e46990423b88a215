"""Command-line front end.

Subcommands:
  run       simulate a scenario (optionally planning first) and export CSVs
  sweep     evaluate the analytic utility over a parameter grid
  validate  run built-in model self-checks

Exit codes: 0 success, 1 usage error, 2 configuration error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
import yaml

from . import analytics, metrics, optimizer, simulator
from .domain import (
    ConfigError,
    Scenario,
    TimingConstants,
    load_scenario,
    scenario_to_dict,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parse_seeds(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(s) for s in text.split(",") if s)
    except ValueError as exc:
        raise ConfigError(f"bad seed list {text!r}") from exc


def _parse_sweep(text: str) -> dict[str, list[float]]:
    """Parse 'alpha=0.5:0.6:0.7,p_inl=0.1:0.2' into axis -> values."""
    axes: dict[str, list[float]] = {}
    for part in text.split(","):
        if not part:
            continue
        if "=" not in part:
            raise ConfigError(f"bad sweep axis {part!r}, expected name=v1:v2:...")
        name, values = part.split("=", 1)
        try:
            axes[name.strip()] = [float(v) for v in values.split(":") if v]
        except ValueError as exc:
            raise ConfigError(f"bad sweep values in {part!r}") from exc
    return axes


def build_parser() -> _Parser:
    parser = _Parser(prog="hymac", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate a scenario")
    run.add_argument("--scenario", required=True, help="scenario YAML file")
    run.add_argument("--variant", choices=["hybrid", "csma", "tdma", "all"])
    run.add_argument("--frames", type=int, help="override the frame horizon")
    run.add_argument("--seeds", help="comma-separated seed list")
    run.add_argument("--out", help="output directory for CSV exports")
    run.add_argument("--plan", help="reuse a previously exported plan YAML")
    run.add_argument("--trace", action="store_true",
                     help="collect per-frame event traces (hybrid only)")
    run.add_argument("--print-config", action="store_true",
                     help="echo the resolved configuration and exit")

    sweep = sub.add_parser("sweep", help="analytic utility over a parameter grid")
    sweep.add_argument("--scenario", required=True)
    sweep.add_argument("--frames", type=int)
    sweep.add_argument("--sweep", help="axes, e.g. alpha=0.5:1.0,p_inl=0.1:0.2")
    sweep.add_argument("--out", help="CSV file for the utility grid")

    val = sub.add_parser("validate", help="run built-in model self-checks")
    val.add_argument("--scenario", help="optional scenario to type-check")
    return parser


def _apply_overrides(sc: Scenario, args) -> Scenario:
    kw = {}
    if args.variant:
        kw["variant"] = args.variant
    if args.frames:
        kw["horizon"] = args.frames
    if args.seeds:
        kw["seeds"] = _parse_seeds(args.seeds)
    return sc.with_overrides(**kw) if kw else sc


def _run_one(task):
    variant, sc_doc, plan, seed, collect_traces = task
    from .domain import scenario_from_dict
    sc = scenario_from_dict(sc_doc)
    if variant == "hybrid":
        return simulator.run_hybrid(sc.classes, sc.timing, plan, sc.horizon, seed,
                                    escalation=sc.escalation,
                                    collect_traces=collect_traces)
    if variant == "csma":
        return simulator.run_csma(sc.classes, sc.timing, sc.classes.p_inl,
                                  sc.horizon, seed)
    return simulator.run_tdma(sc.classes, sc.timing, sc.horizon, seed)


def _cmd_run(args) -> int:
    sc = _apply_overrides(load_scenario(args.scenario), args)
    if args.print_config:
        yaml.safe_dump(scenario_to_dict(sc), sys.stdout, sort_keys=False)
        return EXIT_OK

    variants = ["hybrid", "csma", "tdma"] if sc.variant == "all" else [sc.variant]
    plan = None
    if "hybrid" in variants:
        if args.plan:
            plan = optimizer.load_plan(args.plan)
            if plan.horizon < sc.horizon:
                raise ConfigError(
                    f"plan covers {plan.horizon} frames, scenario needs {sc.horizon}")
        else:
            plan = optimizer.optimize(sc.classes, sc.timing, sc.horizon)
            print(f"plan: alpha_opt={plan.alpha_opt:g} p_inl_opt={plan.p_inl_opt:g} "
                  f"analytic_utility={plan.utility:.6g}")

    out_dir = Path(args.out) if args.out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
        if plan is not None and not args.plan:
            optimizer.dump_plan(plan, out_dir / "plan.yaml")

    workers = int(os.environ.get("HYMAC_WORKERS", "1"))
    sc_doc = scenario_to_dict(sc)
    for variant in variants:
        tasks = [(variant, sc_doc, plan, seed, args.trace and variant == "hybrid")
                 for seed in sc.seeds]
        if workers > 1 and len(tasks) > 1 and not args.trace:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                reports = list(pool.map(_run_one, tasks))
        else:
            reports = [_run_one(t) for t in tasks]
        summary = metrics.merge_reports(reports)
        line = (f"{variant}: seeds={len(reports)} "
                f"utility={summary['utility_mean']:.6g}"
                f"(+/-{summary['utility_std']:.2g})")
        if "drop_ratio" in summary:
            line += f" drop_ratio={summary['drop_ratio']:.6g}"
        if "avg_delay_frames" in summary:
            line += f" avg_delay={summary['avg_delay_frames']:.6g}f"
        line += f" energy/frame={summary['energy_per_frame_j']:.6g}J"
        print(line)
        if out_dir:
            for rep in reports:
                stem = f"{variant}_seed{rep.seed}"
                metrics.write_frame_csv(rep, out_dir / f"frames_{stem}.csv")
                metrics.write_device_csv(rep, out_dir / f"devices_{stem}.csv")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    sc = load_scenario(args.scenario)
    if args.frames:
        sc = sc.with_overrides(horizon=args.frames)
    axes = dict(sc.sweep)
    if args.sweep:
        axes.update(_parse_sweep(args.sweep))
    alpha_grid = tuple(axes.get("alpha", optimizer.DEFAULT_ALPHA_GRID))
    p_grid = tuple(axes.get("p_inl", optimizer.DEFAULT_P_INL_GRID))
    unknown = set(axes) - {"alpha", "p_inl"}
    if unknown:
        raise ConfigError(f"unknown sweep axes: {sorted(unknown)}")

    grid = optimizer.utility_grid(sc.classes, sc.timing, sc.horizon,
                                  alpha_grid, p_grid)
    best = max(grid, key=lambda key: (grid[key], (-key[0], -key[1])))
    lines = [f"alpha={a:g} p_inl={p:g} utility={grid[(a, p)]:.6g}"
             for a in alpha_grid for p in p_grid]
    print("\n".join(lines))
    print(f"best: alpha={best[0]:g} p_inl={best[1]:g} utility={grid[best]:.6g}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("# hymac-sweep-csv v1\n")
            fh.write("alpha,p_inl,utility\n")
            for a in alpha_grid:
                for p in p_grid:
                    fh.write(f"{a:g},{p:g},{grid[(a, p)]:.9g}\n")
    return EXIT_OK


def _cmd_validate(args) -> int:
    tc = TimingConstants()
    checks: list[tuple[str, bool, str]] = []

    if args.scenario:
        try:
            load_scenario(args.scenario)
            checks.append(("scenario parses and validates", True, ""))
        except ConfigError as exc:
            checks.append(("scenario parses and validates", False, str(exc)))

    # slot probabilities against exhaustive enumeration of a small mixture
    mix = analytics.ContentionMixture(((0.3, 3), (0.6, 2)))
    p0 = (0.7 ** 3) * (0.4 ** 2)
    p1 = (3 * 0.3 * 0.7 ** 2 * 0.4 ** 2) + (2 * 0.6 * 0.4 * 0.7 ** 3)
    ok = (abs(analytics.prob_no_transmission(mix) - p0) < 1e-12
          and abs(analytics.prob_single_transmission(mix) - p1) < 1e-12)
    checks.append(("closed forms match direct enumeration", ok, ""))

    # curvature matrix is symmetric and positive semidefinite in tolerance
    hess = analytics.tcop_hessian(100, 1.0, 0.001, 100_000, tc, normalize=True)
    eig = np.linalg.eigvalsh(hess)
    tol = 1e-8 * abs(np.trace(hess))
    ok = bool(np.allclose(hess, hess.T) and eig.min() >= -tol)
    checks.append(("contention-duration curvature is convex", ok,
                   f"min eigenvalue {eig.min():.3g}"))

    # simulated slot frequencies against the analytic model
    sim = simulator.simulate_cop_slots([(0.05, 20)], tc, n_slots=20_000, seed=7)
    p0_hat = sim.n_idle_slots / sim.n_slots
    p0_ref = analytics.prob_no_transmission(
        analytics.ContentionMixture(((0.05, 20),)))
    se = (p0_ref * (1 - p0_ref) / sim.n_slots) ** 0.5
    ok = abs(p0_hat - p0_ref) < 4 * se
    checks.append(("simulator slot process matches the model", ok,
                   f"idle freq {p0_hat:.4f} vs {p0_ref:.4f}"))

    failed = False
    for name, ok, detail in checks:
        tag = "PASS" if ok else "FAIL"
        suffix = f"  ({detail})" if detail else ""
        print(f"[{tag}] {name}{suffix}")
        failed = failed or not ok
    return EXIT_RUNTIME if failed else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"hymac: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_validate(args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"hymac: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001  - map to a stable exit code
        print(f"hymac: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
