"""Report output: delimited plot data (CSV), structured summaries (JSON), and
matplotlib figures rendered alongside the delimited files."""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .experiments import BifurcationReport, EnsembleResult, VariantComparison
from .model import ConfigurationError


def _fmt(value: float) -> str:
    # 13 significant digits: round-trips exactly through float64
    return format(float(value), ".12e")


def write_history_csv(result: EnsembleResult, path: str | Path) -> None:
    """One row per generation of ensemble-mean best fitness and best point."""
    if result.mean_best_point.shape[1] != 2:
        raise ConfigurationError("history CSV schema is two-dimensional")
    lines = ["generation,mean_best_fitness,stderr_best_fitness,mean_best_x,mean_best_y"]
    for g in range(len(result.generations)):
        lines.append(
            ",".join(
                [
                    str(int(result.generations[g])),
                    _fmt(result.mean_best_fitness[g]),
                    _fmt(result.stderr_best_fitness[g]),
                    _fmt(result.mean_best_point[g, 0]),
                    _fmt(result.mean_best_point[g, 1]),
                ]
            )
        )
    Path(path).write_text("\n".join(lines) + "\n")


def read_history_csv(path: str | Path) -> dict:
    lines = Path(path).read_text().strip().split("\n")
    header = lines[0].split(",")
    rows = [[float(v) for v in line.split(",")] for line in lines[1:]]
    cols = list(zip(*rows))
    return {name: np.array(col) for name, col in zip(header, cols)}


def write_bifurcation_csv(report: BifurcationReport, path: str | Path) -> None:
    lines = ["lambda,switch_fraction,n_runs"]
    for lam, frac in zip(report.lambda_grid, report.switch_fraction):
        lines.append(f"{_fmt(lam)},{_fmt(frac)},{report.n_runs}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_comparison_csv(comparison: VariantComparison, path: str | Path) -> None:
    lines = ["variant,mean_final_best_fitness,stderr_final_best_fitness"]
    for v in comparison.variants:
        lines.append(
            f"{v},{_fmt(comparison.mean_final[v])},{_fmt(comparison.stderr_final[v])}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_summary(payload: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def plot_history(
    results: dict[str, EnsembleResult], path: str | Path, title: str = "Best fitness by generation"
) -> None:
    """Ensemble-mean best fitness vs generation, one curve per label."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label, res in results.items():
        gens = res.generations
        ax.plot(gens, res.mean_best_fitness, marker="o", ms=3, label=label)
        ax.fill_between(
            gens,
            res.mean_best_fitness - 2 * res.stderr_best_fitness,
            res.mean_best_fitness + 2 * res.stderr_best_fitness,
            alpha=0.2,
        )
    ax.set_xlabel("generation")
    ax.set_ylabel("mean best fitness")
    ax.set_title(title)
    if len(results) > 1:
        ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_bifurcation(report: BifurcationReport, path: str | Path) -> None:
    """Switch fraction vs decay rate, with the bifurcation point marked."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    grid = np.array(report.lambda_grid)
    ax.errorbar(
        grid,
        report.switch_fraction,
        yerr=2 * report.switch_stderr,
        marker="o",
        capsize=3,
    )
    ax.axhline(0.5, color="gray", ls="--", lw=1)
    if report.bifurcation_lambda is not None:
        ax.axvline(
            report.bifurcation_lambda,
            color="red",
            ls=":",
            label=f"bifurcation at {report.bifurcation_lambda:g}",
        )
        ax.legend()
    ax.set_xlabel("decay rate")
    ax.set_ylabel("fraction of runs ending at the Rastrigin peak")
    ax.set_ylim(-0.05, 1.05)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_comparison(comparison: VariantComparison, path: str | Path) -> None:
    plot_history(
        comparison.results, path, title="Variant comparison: best fitness by generation"
    )
