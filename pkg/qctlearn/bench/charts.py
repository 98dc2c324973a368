"""Standalone SVG charts; CSV files remain the source of truth."""
import math
from pathlib import Path
from typing import Dict, List, Mapping, Sequence, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

PathLike = Union[str, Path]


def _save(fig: "plt.Figure", path: PathLike) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(p, format="svg")
    plt.close(fig)
    return p


def bar_chart(values: Mapping[str, float], path: PathLike, ylabel: str, title: str) -> Path:
    fig, ax = plt.subplots(figsize=(8, 5))
    names = list(values)
    ax.bar(range(len(names)), [values[n] for n in names], alpha=0.8)
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=30, ha="right")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, axis="y", alpha=0.3)
    return _save(fig, path)


def improvement_chart(improvements: Dict[str, List[float]], path: PathLike, baseline: str) -> Path:
    """Per-circuit improvement over the baseline, one histogram per router."""
    fig, ax = plt.subplots(figsize=(8, 5))
    for router, vals in improvements.items():
        if vals:
            ax.hist([100.0 * v for v in vals], bins=10, alpha=0.5, label=router)
    ax.set_xlabel(f"CNOT overhead reduction vs {baseline} (%)")
    ax.set_ylabel("circuits")
    ax.set_title("Improvement per circuit")
    ax.grid(True, alpha=0.3)
    if improvements:
        ax.legend()
    return _save(fig, path)


def series_chart(
    xs: Sequence[float], series: Dict[str, Sequence[float]], path: PathLike, xlabel: str, ylabel: str, title: str
) -> Path:
    fig, ax = plt.subplots(figsize=(8, 5))
    for name, ys in series.items():
        ax.plot(xs, ys, marker="o", label=name)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend()
    return _save(fig, path)


def loglog_chart(
    xs: Sequence[float], ys: Sequence[float], slope: float, intercept: float, path: PathLike
) -> Path:
    """Measured times with the fitted power law ``exp(intercept) * x^slope``."""
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.loglog(xs, ys, "o", label="measured")
    fit = [math.exp(intercept) * x ** slope for x in xs]
    ax.loglog(xs, fit, "--", label=f"fit, exponent {slope:.2f}")
    ax.set_xlabel("number of qubits |V|")
    ax.set_ylabel("seconds per label")
    ax.set_title("Label generation cost")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    return _save(fig, path)
