"""Report rendering: figures to files alongside delimited output.

Used by the CLI's stats and graph commands; the service itself only
serves JSON.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import IO

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def write_stats_csv(stats: dict, out: IO[str]) -> None:
    writer = csv.writer(out)
    writer.writerow(["bucket_lo", "bucket_hi", "count"])
    edges = stats["edges"]
    for i, count in enumerate(stats["buckets"]):
        writer.writerow([edges[i], edges[i + 1], count])


def render_histogram(stats: dict, path: str | Path, title: str = "") -> None:
    edges = stats["edges"]
    counts = stats["buckets"]
    centers = [(edges[i] + edges[i + 1]) / 2 for i in range(len(counts))]
    widths = [(edges[i + 1] - edges[i]) * 0.92 for i in range(len(counts))]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(centers, counts, width=widths, color="#4878a8", edgecolor="#2b4a68")
    ax.set_xlabel(stats.get("field", "value"))
    ax.set_ylabel("documents")
    ax.set_title(title or f"distribution of {stats.get('field', 'value')}")
    ax.margins(x=0.02)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_graph_csv(graph: dict, nodes_out: IO[str], edges_out: IO[str]) -> None:
    nodes_writer = csv.writer(nodes_out)
    nodes_writer.writerow(["id", "score"])
    for node in graph["nodes"]:
        nodes_writer.writerow([node["id"], node["score"]])
    edges_writer = csv.writer(edges_out)
    edges_writer.writerow(["src", "dst", "kind", "weight"])
    for edge in graph["edges"]:
        edges_writer.writerow([edge["src"], edge["dst"], edge["kind"], edge["weight"]])


def render_graph(graph: dict, path: str | Path, title: str = "social graph") -> None:
    """Circular layout; node area tracks its centrality score."""
    nodes = graph["nodes"]
    fig, ax = plt.subplots(figsize=(6, 6))
    if nodes:
        n = len(nodes)
        pos = {}
        for i, node in enumerate(nodes):
            angle = 2 * math.pi * i / n
            pos[node["id"]] = (math.cos(angle), math.sin(angle))
        max_weight = max((e["weight"] for e in graph["edges"]), default=1)
        for edge in graph["edges"]:
            (x1, y1), (x2, y2) = pos[edge["src"]], pos[edge["dst"]]
            ax.annotate(
                "",
                xy=(x2, y2),
                xytext=(x1, y1),
                arrowprops=dict(
                    arrowstyle="-|>",
                    color="#888888",
                    alpha=0.4 + 0.6 * edge["weight"] / max_weight,
                    shrinkA=12,
                    shrinkB=12,
                ),
            )
        scores = [node["score"] for node in nodes]
        top = max(scores) or 1.0
        sizes = [300 + 2400 * s / top for s in scores]
        xs = [pos[node["id"]][0] for node in nodes]
        ys = [pos[node["id"]][1] for node in nodes]
        ax.scatter(xs, ys, s=sizes, color="#4878a8", zorder=3, edgecolor="#2b4a68")
        for node in nodes:
            x, y = pos[node["id"]]
            ax.annotate(node["id"], (x, y), ha="center", va="center", zorder=4, fontsize=8, color="white")
    ax.set_title(title)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
