"""Figures written next to the text/JSON reports of the CLI."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

FIGSIZE = (4.5, 3.2)


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_branch_histogram(report, path, p: int, n: int, title: str | None = None):
    """Observed branch hits against the expected sizes q^(n-i+1) - q^(n-i), ..., 1."""
    hist = report.branch_histogram
    expected = [p ** (n - i + 1) - p ** (n - i) for i in range(1, n + 1)] + [1]
    xs = range(1, len(hist) + 1)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.bar(xs, hist, color="C0", label="observed")
    ax.plot(list(range(1, len(expected) + 1)), expected, "o", color="C3", label="expected")
    ax.set_yscale("log")
    ax.set_xticks(list(xs))
    ax.set_xlabel("branch $i$")
    ax.set_ylabel("hits over one orbit")
    ax.set_title(title or f"p={p}, n={n}, orbit {report.orbit_length}")
    ax.legend(frameon=False)
    return _finish(fig, path)


def plot_bench(report, path):
    """Per-output-coordinate cost of FJ against per-element cost of the ICG."""
    labels = ["FJ / coordinate", "FJ / vector", "ICG / element"]
    values = [report.fj_ns_per_coordinate, report.fj_ns_per_vector, report.icg_ns_per_element]
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.bar(labels, values, color=["C0", "C1", "C2"])
    ax.set_ylabel("median ns")
    ax.set_title(f"p: {report.p.bit_length()} bits, n={report.n}")
    ax.tick_params(axis="x", labelsize=8)
    return _finish(fig, path)
