"""Figure rendering for the separation report.

Uses the Agg backend so figures render headlessly to files next to the CSV.
"""

from __future__ import annotations

from typing import Dict, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_STYLE = {
    "quantum_majority": dict(color="tab:blue", marker="o"),
    "noiseless_classical": dict(color="tab:green", marker="s"),
    "lpn_bruteforce": dict(color="tab:red", marker="^"),
    "lpn_bkw": dict(color="tab:orange", marker="v"),
}


def plot_separation(rows: Sequence[Dict[str, object]], path: str) -> str:
    """Queries-vs-n comparison plot; returns the written path."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    learners = []
    for row in rows:
        if row["learner"] not in learners:
            learners.append(row["learner"])
    for learner in learners:
        pts = [(row["n"], row["mean_queries"]) for row in rows if row["learner"] == learner]
        pts.sort()
        ax.plot(
            [p[0] for p in pts],
            [p[1] for p in pts],
            label=str(learner),
            **_STYLE.get(str(learner), {}),
        )
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("n (input bits)")
    ax.set_ylabel("mean queries / examples consumed")
    ax.set_title("Quantum vs classical query cost under noise")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
