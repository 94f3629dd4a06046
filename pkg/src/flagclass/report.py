"""File-based reports: delimited summaries plus rendered figures.

Figures are presentation only; every number they draw comes from the
exact integer results.  Matplotlib runs on the Agg backend so reports
work headless.
"""
from __future__ import annotations

import csv
from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

plt.rcParams["figure.figsize"] = (5.5, 3.6)
plt.rcParams["figure.dpi"] = 150
plt.rcParams["axes.grid"] = True
plt.rcParams["grid.alpha"] = 0.3

SUMMARY_FIELDS = [
    "d",
    "q",
    "dim_u",
    "order_P",
    "order_L",
    "order_U",
    "k_U",
    "k_PU",
    "commuting_pairs",
]

RECORD_FIELDS = [
    "orbit",
    "rep_key",
    "zero_one_pattern",
    "orbit_size",
    "u_orbit_size",
    "c_P_order",
    "c_U_order",
    "delta_prime",
]


def summary_row(d, q, orders, counts) -> dict:
    return {
        "d": str(d),
        "q": q,
        "dim_u": orders["dim_u"],
        "order_P": orders["order_P"],
        "order_L": orders["order_L"],
        "order_U": orders["order_U"],
        "k_U": counts.k_U,
        "k_PU": counts.k_PU,
        "commuting_pairs": counts.commuting_pairs,
    }


def record_rows(ctx, partition) -> list[dict]:
    rows = []
    for i, rec in enumerate(partition.records):
        pattern = ""
        if rec.zero_one_rep is not None:
            pattern = "".join(str(v) for v in ctx.cross_values(rec.zero_one_rep))
        rows.append(
            {
                "orbit": i,
                "rep_key": ctx.key_of(rec.rep),
                "zero_one_pattern": pattern,
                "orbit_size": rec.orbit_size,
                "u_orbit_size": rec.u_orbit_size,
                "c_P_order": rec.c_P_order,
                "c_U_order": rec.c_U_order,
                "delta_prime": rec.delta_prime,
            }
        )
    return rows


def write_csv(path: Path, fieldnames, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)


def render_counts_figure(path: Path, d, points, poly):
    """Sampled class counts with the interpolated curve through them."""
    qs = [q for q, _ in points]
    vals = [v for _, v in points]
    fig, ax = plt.subplots()
    ax.plot(qs, vals, "o", label="computed k(U)")
    if poly is not None and poly.coefficients:
        lo, hi = min(qs), max(qs)
        xs = [lo + (hi - lo) * i / 200 for i in range(201)]
        ys = [float(poly.evaluate(Fraction(x))) for x in xs]
        ax.plot(xs, ys, "-", lw=1, label="interpolant")
    ax.set_xlabel("q")
    ax.set_ylabel("conjugacy classes of U")
    ax.set_title(f"d = ({d})")
    ax.legend()
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)


def render_orbit_figure(path: Path, d, per_q_sizes):
    """Orbit-size spectrum per q: sorted sizes on a log scale."""
    fig, ax = plt.subplots()
    for q, sizes in sorted(per_q_sizes.items()):
        ordered = sorted(sizes, reverse=True)
        ax.plot(range(1, len(ordered) + 1), ordered, marker=".", lw=1, label=f"q = {q}")
    ax.set_yscale("log")
    ax.set_xlabel("orbit (largest first)")
    ax.set_ylabel("orbit size")
    ax.set_title(f"adjoint orbit sizes, d = ({d})")
    ax.legend()
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
