"""Report rendering: tightness metrics as delimited text plus matplotlib
figures, and the synthetic compression sweep used to study join compression.
"""
from __future__ import annotations

import random
from typing import Dict, List, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .expr import Eq, Var  # noqa: E402
from .optimize import join_opt  # noqa: E402
from .oracle import tightness_metrics  # noqa: E402
from .relation import AURelation, Schema  # noqa: E402
from .values import AUMult, RangeValue  # noqa: E402

METRIC_FIELDS = ("rows", "attr_width", "ann_slack", "total_slack")


def metrics_table(metrics: Dict[str, float]) -> str:
    lines = ["metric\tvalue"]
    for key in METRIC_FIELDS:
        lines.append(f"{key}\t{metrics[key]:g}")
    return "\n".join(lines) + "\n"


def plot_metrics(metrics: Dict[str, float], path: str, title: str = "tightness metrics") -> None:
    fig, ax = plt.subplots(figsize=(5, 3.2))
    keys = [k for k in METRIC_FIELDS if k != "total_slack"]
    ax.bar(keys, [metrics[k] for k in keys], color=["#4c72b0", "#dd8452", "#55a868"])
    ax.set_ylabel("value")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def synthetic_join_workload(seed: int, rows: int = 100) -> tuple[AURelation, AURelation]:
    """Two single-attribute relations with ranged join keys, fixed by seed."""
    rng = random.Random(seed)

    def build(attr: str) -> AURelation:
        schema = Schema.of((attr, "int"))
        pairs = []
        for _ in range(rows):
            sg = rng.randint(0, 400)
            lo = sg - rng.randint(0, 12)
            hi = sg + rng.randint(0, 12)
            mult = rng.randint(1, 3)
            pairs.append(
                ((RangeValue(lo, sg, hi),), AUMult(rng.choice((0, mult)), mult, mult + rng.randint(0, 2)))
            )
        return AURelation(schema, pairs)

    return build("A"), build("B")


def compression_sweep(
    seed: int, sizes: Sequence[int] = (1, 4, 16, 64), rows: int = 100
) -> List[Dict[str, float]]:
    """Run the synthetic equi-join at several compression sizes and collect the
    tightness metrics of the result's possible part."""
    left, right = synthetic_join_workload(seed, rows)
    theta = Eq(Var("A"), Var("B"))
    out = []
    for n in sizes:
        result = join_opt(theta, left, right, n)
        possible = AURelation(
            result.schema,
            [(t, AUMult(0, 0, a.ub)) for t, a in result.rows() if a.sg == 0],
        )
        m = tightness_metrics(possible)
        m["size"] = float(n)
        out.append(m)
    return out


def sweep_table(sweep: List[Dict[str, float]]) -> str:
    lines = ["size\trows\tattr_width\tann_slack\ttotal_slack"]
    for m in sweep:
        lines.append(
            f"{m['size']:g}\t{m['rows']:g}\t{m['attr_width']:g}\t{m['ann_slack']:g}\t{m['total_slack']:g}"
        )
    return "\n".join(lines) + "\n"


def plot_sweep(sweep: List[Dict[str, float]], path: str) -> None:
    sizes = [m["size"] for m in sweep]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3.2))
    ax1.plot(sizes, [m["total_slack"] for m in sweep], marker="o", color="#4c72b0")
    ax1.set_xscale("log", base=2)
    ax1.set_xlabel("compression size")
    ax1.set_ylabel("total slack")
    ax1.set_title("slack vs compression")
    ax2.plot(sizes, [m["rows"] for m in sweep], marker="s", color="#dd8452")
    ax2.set_xscale("log", base=2)
    ax2.set_xlabel("compression size")
    ax2.set_ylabel("possible-part rows")
    ax2.set_title("result size")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
