"""Figure rendering for the command-line report paths.

Figures are written straight to files with the Agg backend so the tools
work headless; every plot mirrors a delimited output table.
"""

from __future__ import annotations

from typing import Dict, List, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def save_beat_pattern(taus_ns: Sequence[float], coincidence: Sequence[float], path: str) -> None:
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(taus_ns, coincidence, lw=1.2)
    ax.axhline(1.0, color="gray", lw=0.8, ls="--")
    ax.set_xlabel("delay (ns)")
    ax.set_ylabel("normalized coincidences")
    ax.set_title("Two-photon interference beat pattern")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_g2_curve(taus_ns: Sequence[float], g2: Sequence[float], path: str) -> None:
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(taus_ns, g2, lw=1.2)
    ax.axhline(1.0, color="gray", lw=0.8, ls="--")
    ax.set_xlabel("delay (ns)")
    ax.set_ylabel("g2(tau)")
    ax.set_title("Second-order correlation vs heralding delay")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_herald_stats(
    mus: Sequence[float], triples: Sequence[Tuple[float, float, float]], path: str
) -> None:
    fig, ax = plt.subplots(figsize=(7, 4))
    labels = ("vacuum", "single", "multi")
    for idx, label in enumerate(labels):
        ax.plot(mus, [t[idx] for t in triples], marker="o", ms=3, label=label)
    ax.set_xlabel("mean photon number per mode")
    ax.set_ylabel("heralded probability")
    ax.set_yscale("log")
    ax.set_title("Heralded emission statistics")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_qkd_curves(rows: List[dict], path: str) -> None:
    """Rate vs distance, one line per (source, analysis) group."""
    groups: Dict[Tuple[str, str], List[Tuple[float, float]]] = {}
    for row in rows:
        groups.setdefault((row["source"], row["analysis"]), []).append(
            (row["distance_km"], row["rate"])
        )
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for (source, analysis), points in sorted(groups.items()):
        points.sort()
        distances = [p[0] for p in points]
        rates = [p[1] for p in points]
        style = "-" if analysis == "decoy" else "--"
        ax.plot(distances, rates, style, label=f"{source} ({analysis})")
    ax.set_xlabel("distance (km)")
    ax.set_ylabel("secret key probability per pulse")
    ax.set_yscale("log")
    ax.set_title("BB84 key rate vs distance")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
