"""Command-line entry point: parse a config document, dispatch an experiment,
and write CSV plot data, a JSON summary, and figures into an output directory.

Exit codes: 0 success, 1 evaluation failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict
from pathlib import Path

from .config import (
    CALIBRATION_DEFAULTS,
    apply_overrides,
    build_chase,
    build_evolution_config,
    build_meta,
    build_objective,
    default_config,
    load_config,
)
from .experiments import (
    bifurcation_sweep,
    compare_variants,
    inner_schedule_fitness,
    meta_optimize,
    run_ensemble,
)
from .model import ConfigurationError, EvaluationError
from .objectives import PerturbationParams
from .report import (
    plot_bifurcation,
    plot_comparison,
    plot_history,
    write_bifurcation_csv,
    write_comparison_csv,
    write_history_csv,
    write_summary,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genderga",
        description="Gender genetic algorithm experiments on the perturbed Rastrigin benchmark",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", type=str, default=None, help="JSON config document")
        p.add_argument("--output-dir", type=str, default="results", help="output directory")
        p.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="dotted-path config override, e.g. engine.variant=GGA",
        )
        p.add_argument("--seed", type=int, default=None, help="override engine and ensemble seeds")
        p.add_argument("--jobs", type=int, default=None, help="max concurrent runs")
        p.add_argument("--no-figures", action="store_true", help="skip figure rendering")

    add_common(sub.add_parser("run", help="single ensemble on one objective/variant"))
    add_common(sub.add_parser("sweep", help="bifurcation sweep over the decay rate"))
    add_common(sub.add_parser("compare", help="compare variants under equal budgets"))
    add_common(sub.add_parser("meta", help="meta-optimize the mutation schedule"))
    sub.add_parser("defaults", help="print the default configuration as JSON")
    return parser


def _resolve(args) -> dict:
    cfg = load_config(args.config)
    cfg = apply_overrides(cfg, args.overrides)
    if args.seed is not None:
        cfg["engine"]["seed"] = int(args.seed)
        cfg["experiment"]["base_seed"] = int(args.seed)
    if args.jobs is not None:
        cfg["experiment"]["jobs"] = int(args.jobs)
    return cfg


def _summary_base(cfg: dict, command: str) -> dict:
    return {
        "command": command,
        "resolved_config": cfg,
        "calibration_defaults": CALIBRATION_DEFAULTS,
    }


def _cmd_run(args) -> int:
    cfg = _resolve(args)
    econfig = build_evolution_config(cfg)
    objective = build_objective(cfg, econfig.max_generation)
    exp = cfg["experiment"]
    chase = build_chase(cfg) if objective.name == "perturbed_rastrigin" else None
    result = run_ensemble(
        econfig, objective, int(exp["n_runs"]), int(exp["base_seed"]), int(exp["jobs"]), chase
    )
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    write_history_csv(result, outdir / "history.csv")
    summary = _summary_base(cfg, "run")
    summary["results"] = {
        "final_mean_best_fitness": float(result.mean_best_fitness[-1]),
        "final_stderr_best_fitness": float(result.stderr_best_fitness[-1]),
        "final_mean_best_point": [float(v) for v in result.mean_best_point[-1]],
        "n_runs": result.n_runs,
    }
    if result.final_labels is not None:
        counts: dict[str, int] = {}
        for lab in result.final_labels:
            counts[lab.value] = counts.get(lab.value, 0) + 1
        summary["results"]["final_label_counts"] = counts
    write_summary(summary, outdir / "summary.json")
    if not args.no_figures:
        plot_history({econfig.variant: result}, outdir / "fitness_history.png")
    print(
        f"run: variant={econfig.variant} objective={objective.name} "
        f"n_runs={result.n_runs} final mean best fitness="
        f"{result.mean_best_fitness[-1]:.6f} +/- {result.stderr_best_fitness[-1]:.6f}"
    )
    print(f"wrote {outdir / 'history.csv'}")
    return 0


def _perturbation_from_cfg(cfg: dict) -> PerturbationParams:
    obj = cfg["objective"]
    if obj["name"] != "perturbed_rastrigin":
        raise ConfigurationError("sweep requires objective.name=perturbed_rastrigin")
    return PerturbationParams(
        amplitude=float(obj["amplitude"]),
        decay_rate=float(obj["decay_rate"]),
        sigma_sq=float(obj["sigma_sq"]),
        center=tuple(float(c) for c in obj["center"]),
    )


def _cmd_sweep(args) -> int:
    cfg = _resolve(args)
    econfig = build_evolution_config(cfg)
    exp = cfg["experiment"]
    report = bifurcation_sweep(
        econfig,
        _perturbation_from_cfg(cfg),
        [float(v) for v in exp["lambda_grid"]],
        int(exp["n_runs"]),
        int(exp["base_seed"]),
        int(exp["jobs"]),
        float(exp["chase_radius"]),
    )
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    write_bifurcation_csv(report, outdir / "bifurcation.csv")
    summary = _summary_base(cfg, "sweep")
    summary["results"] = {
        "lambda_grid": list(report.lambda_grid),
        "switch_fraction": [float(v) for v in report.switch_fraction],
        "switch_stderr": [float(v) for v in report.switch_stderr],
        "bifurcation_lambda": report.bifurcation_lambda,
        "n_runs": report.n_runs,
    }
    write_summary(summary, outdir / "summary.json")
    if not args.no_figures:
        plot_bifurcation(report, outdir / "bifurcation.png")
    lam = report.bifurcation_lambda
    print(
        f"sweep: variant={econfig.variant} bifurcation at "
        f"{'none' if lam is None else f'{lam:g}'} over {len(report.lambda_grid)} grid points"
    )
    print(f"wrote {outdir / 'bifurcation.csv'}")
    return 0


def _cmd_compare(args) -> int:
    cfg = _resolve(args)
    econfig = build_evolution_config(cfg)
    objective = build_objective(cfg, econfig.max_generation)
    exp = cfg["experiment"]
    comparison = compare_variants(
        objective,
        [str(v) for v in exp["variants"]],
        econfig,
        int(exp["n_runs"]),
        int(exp["base_seed"]),
        int(exp["jobs"]),
    )
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    write_comparison_csv(comparison, outdir / "comparison.csv")
    summary = _summary_base(cfg, "compare")
    summary["results"] = {
        "mean_final": comparison.mean_final,
        "stderr_final": comparison.stderr_final,
        "pairwise": [
            {
                "first": t.first,
                "second": t.second,
                "z": t.z,
                "p_first_greater": t.p_first_greater,
            }
            for t in comparison.pairwise
        ],
    }
    write_summary(summary, outdir / "summary.json")
    if not args.no_figures:
        plot_comparison(comparison, outdir / "comparison.png")
    for v in comparison.variants:
        print(
            f"compare: {v}: {comparison.mean_final[v]:.6f} +/- {comparison.stderr_final[v]:.6f}"
        )
    print(f"wrote {outdir / 'comparison.csv'}")
    return 0


def _cmd_meta(args) -> int:
    cfg = _resolve(args)
    econfig = build_evolution_config(cfg)
    meta = build_meta(cfg)
    result = meta_optimize(econfig, meta, int(cfg["experiment"]["base_seed"]))
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    summary = _summary_base(cfg, "meta")
    summary["results"] = {
        "p_f0": result.p_f0,
        "p_m0": result.p_m0,
        "a_f": result.a_f,
        "a_m": result.a_m,
        "inner_mean_final_best_fitness": result.fitness,
        "meta": asdict(meta),
    }
    write_summary(summary, outdir / "summary.json")
    if result.history is not None:
        lines = ["generation,best_inner_fitness"]
        for r in result.history.records:
            lines.append(f"{r.t},{format(r.best_fitness, '.12e')}")
        (outdir / "meta_history.csv").write_text("\n".join(lines) + "\n")
    print(
        f"meta: p_f0={result.p_f0:.4f} p_m0={result.p_m0:.4f} "
        f"a_f={result.a_f:.4f} a_m={result.a_m:.4f} inner fitness={result.fitness:.6f}"
    )
    print(f"wrote {outdir / 'summary.json'}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "defaults":
        import json

        print(json.dumps(default_config(), indent=2, sort_keys=True))
        return 0
    handlers = {
        "run": _cmd_run,
        "sweep": _cmd_sweep,
        "compare": _cmd_compare,
        "meta": _cmd_meta,
    }
    try:
        return handlers[args.command](args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except EvaluationError as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
