"""Figure rendering for report files.

Consumes the delimited reports the runner writes and draws bound vs.
measured sup error plus the relative gaps, one PNG per chart, next to the
report (or into an explicit directory).  Rendering is post-processing: the
experiment code itself never touches matplotlib.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import List, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .errors import ConfigError


def read_report(path: str) -> List[dict]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ConfigError(f"report {path} has no data rows")
    required = {"theorem", "m", "r", "bound", "empirical", "gap"}
    missing = required - set(rows[0])
    if missing:
        raise ConfigError(f"report {path} lacks columns: {', '.join(sorted(missing))}")
    return rows


def _label(row: dict) -> str:
    label = f"{row['theorem']} m={row['m']}"
    if row.get("p"):
        label += f" p={row['p']}"
    if row.get("r") and any(c == "1" for c in row["r"]):
        label += f" r={row['r']}"
    return label


def render_report(report_path: str, out_dir: str | None = None) -> List[Path]:
    """Render bound/empirical bars and gap bars; returns the written paths."""
    rows = read_report(report_path)
    report = Path(report_path)
    target = Path(out_dir) if out_dir else report.parent
    target.mkdir(parents=True, exist_ok=True)

    labels = [_label(r) for r in rows]
    bounds = [float(r["bound"]) for r in rows]
    empirical = [float(r["empirical"]) if r["empirical"] else float("nan") for r in rows]
    gaps = [float(r["gap"]) if r["gap"] else float("nan") for r in rows]
    xs = range(len(rows))

    written: List[Path] = []

    fig, ax = plt.subplots(figsize=(max(4.0, 1.8 * len(rows)), 3.2))
    width = 0.38
    ax.bar([x - width / 2 for x in xs], bounds, width, label="class bound")
    ax.bar([x + width / 2 for x in xs], empirical, width, label="measured sup")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, rotation=20, ha="right", fontsize=8)
    ax.set_ylabel("sup error")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = target / f"{report.stem}_bounds.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(max(4.0, 1.8 * len(rows)), 3.2))
    ax.bar(list(xs), gaps, 0.5, color="#b24d4d")
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, rotation=20, ha="right", fontsize=8)
    ax.set_ylabel("relative gap (measured / bound - 1)")
    fig.tight_layout()
    path = target / f"{report.stem}_gaps.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    return written
