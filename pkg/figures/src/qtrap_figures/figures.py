"""The five figure renderers.

Every renderer takes the parsed tables and an output path, draws with
matplotlib, and returns the marker values it actually drew (maxima,
boundary abscissae, limiting-circle radius) so tests can hold them against
the table contents.  All numbers are read from the tables; nothing is
recomputed from model parameters.
"""

from __future__ import annotations

import numpy as np

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

from .io import Table, TableError, merge_tables  # noqa: E402

TRAILING_FRACTION = 0.1


def _trailing(values):
    window = max(2, int(round(len(values) * TRAILING_FRACTION)))
    return values[-window:]


def _group_curves(table: Table):
    labels = table.column("label")
    params = table.column("param")
    values = table.column("value")
    if isinstance(labels, list):
        order = dict.fromkeys(labels)  # preserves first-seen order
    else:
        raise TableError(f"{table.path}: label column must be text")
    curves = {}
    for label in order:
        if label == "optimum":
            continue
        mask = np.array([l == label for l in labels])
        curves[label] = (np.asarray(params, float)[mask], np.asarray(values, float)[mask])
    if not curves:
        raise TableError(f"{table.path}: no curve rows")
    return curves


def render_fig1(tables, out_path):
    """3-D Bloch trajectory with the unit sphere and the limiting circle."""
    if len(tables) != 1:
        raise TableError("fig1 takes exactly one trajectory table")
    table = tables[0]
    table.require_columns(["t", "x", "y", "z"])
    x, y, z = table.column("x"), table.column("y"), table.column("z")

    radius = float(np.mean(_trailing(np.hypot(x, y))))
    height = float(np.mean(_trailing(z)))

    fig = plt.figure(figsize=(5.5, 5.5))
    ax = fig.add_subplot(projection="3d")
    u = np.linspace(0.0, 2.0 * np.pi, 24)
    v = np.linspace(0.0, np.pi, 16)
    ax.plot_wireframe(
        np.outer(np.cos(u), np.sin(v)),
        np.outer(np.sin(u), np.sin(v)),
        np.outer(np.ones_like(u), np.cos(v)),
        color="0.8",
        linewidth=0.3,
    )
    ax.plot(x, y, z, color="tab:blue", linewidth=0.7)
    phase = np.linspace(0.0, 2.0 * np.pi, 200)
    ax.plot(
        radius * np.cos(phase),
        radius * np.sin(phase),
        np.full_like(phase, height),
        color="tab:red",
        linewidth=1.8,
        label=f"limit cycle r={radius:.3f}",
    )
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    ax.set_box_aspect((1, 1, 1))
    ax.legend(loc="upper left", fontsize=8)
    fig.savefig(out_path, dpi=160)
    plt.close(fig)
    return {"radius": radius, "height": height}


def render_fig2a(tables, out_path):
    """Trapped population vs coupling with existence-boundary markers."""
    table = merge_tables(tables)
    table.require_columns(["label", "param", "value"])
    curves = _group_curves(table)
    boundaries = table.metadata.get("existence_boundary", {})

    # the drawn maximum is the best tabulated row across all curves
    best_label, best_x, best_y = None, None, -np.inf
    for label, (xs, ys) in curves.items():
        peak = int(np.argmax(ys))
        if ys[peak] > best_y:
            best_label, best_x, best_y = label, float(xs[peak]), float(ys[peak])

    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    for label, (xs, ys) in curves.items():
        ax.plot(xs, ys, label=label)
    for label, boundary in boundaries.items():
        ax.axvline(boundary, color="green", linestyle=":", linewidth=1.2)
    ax.plot([best_x], [best_y], "k*", markersize=9)
    ax.annotate(f"({best_x:.3g}, {best_y:.3g})", (best_x, best_y), textcoords="offset points", xytext=(6, 4), fontsize=8)
    ax.set_xlabel("coupling strength")
    ax.set_ylabel("trapped population")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=160)
    plt.close(fig)
    return {"max": (best_x, best_y), "max_label": best_label, "boundaries": dict(boundaries)}


def render_fig2b(tables, out_path):
    """Trapped population vs Ohmicity exponent for several cutoffs."""
    table = merge_tables(tables)
    table.require_columns(["label", "param", "value"])
    curves = _group_curves(table)
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    maxima = {}
    for label, (xs, ys) in curves.items():
        ax.plot(xs, ys, label=label)
        peak = int(np.argmax(ys))
        maxima[label] = (float(xs[peak]), float(ys[peak]))
    ax.set_xlabel("Ohmicity exponent")
    ax.set_ylabel("trapped population")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=160)
    plt.close(fig)
    return {"maxima": maxima}


def render_fig3a(tables, out_path):
    """Asymptotic discord vs band-gap coupling for several band edges."""
    table = merge_tables(tables)
    table.require_columns(["label", "param", "value"])
    curves = _group_curves(table)
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    finals = {}
    for label, (xs, ys) in curves.items():
        ax.plot(xs, ys, label=label)
        finals[label] = float(ys[-1])
    ax.set_xlabel("coupling strength")
    ax.set_ylabel("asymptotic discord")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=160)
    plt.close(fig)
    return {"finals": finals}


def render_fig3b(tables, out_path):
    """Concurrence and discord along the decay of a Bell pair."""
    if len(tables) != 1:
        raise TableError("fig3b takes exactly one correlation table")
    table = tables[0]
    table.require_columns(["t", "abs_c2", "concurrence", "discord"])
    t = table.column("t")
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.plot(t, table.column("discord"), label="discord")
    ax.plot(t, table.column("concurrence"), label="concurrence")
    ax.plot(t, table.column("abs_c2"), label="excited population", color="0.6", linewidth=0.8)
    ax.set_xlabel("time")
    ax.set_ylabel("correlation")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=160)
    plt.close(fig)
    window = max(2, len(t) // 10)
    return {
        "discord_tail": float(np.mean(table.column("discord")[-window:])),
        "concurrence_tail": float(np.mean(table.column("concurrence")[-window:])),
    }


RENDERERS = {
    "fig1": render_fig1,
    "fig2a": render_fig2a,
    "fig2b": render_fig2b,
    "fig3a": render_fig3a,
    "fig3b": render_fig3b,
}
