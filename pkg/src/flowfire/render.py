"""Rendering of configurations: fixed-width ASCII grids and figure files.

ASCII output prints rows top to bottom (decreasing y) with zero faces left
blank and the marked face bracketed, matching how configurations are drawn
by hand.  Figures are written through matplotlib's object API, so no
backend setup is needed.
"""

from __future__ import annotations

from typing import Sequence

from .grid import ORIGIN, MarkedConfig, support_radius


def ascii_grid(c: MarkedConfig) -> str:
    """Fixed-width character grid of a configuration."""
    radius = max(support_radius(c), 1)
    marked = f"[{c.n}]"
    width = max(len(marked), max((len(str(w)) for w in c.faces.values()), default=1))
    lines = []
    for y in range(radius, -radius - 1, -1):
        cells = []
        for x in range(-radius, radius + 1):
            if (x, y) == ORIGIN:
                cells.append(marked.rjust(width))
            else:
                w = c.faces.get((x, y), 0)
                cells.append(str(w).rjust(width) if w else " " * width)
        lines.append(" ".join(cells).rstrip())
    return "\n".join(lines)


def save_config_figure(c: MarkedConfig, path: str) -> None:
    """Draw the configuration as a colored grid and write it to ``path``.

    The format follows the file extension (.svg, .png, ...).
    """
    from matplotlib.figure import Figure

    radius = max(support_radius(c), 1)
    top = max(max(c.faces.values(), default=0), c.n, 1)
    fig = Figure(figsize=(0.5 * (2 * radius + 1) + 1,) * 2)
    ax = fig.add_subplot()
    cmap = _weight_cmap()
    for y in range(radius, -radius - 1, -1):
        for x in range(-radius, radius + 1):
            w = c.n if (x, y) == ORIGIN else c.faces.get((x, y), 0)
            color = cmap(w / top) if w else "white"
            ax.add_patch(_square(x, y, color))
            if w:
                ax.text(x, y, str(w), ha="center", va="center", fontsize=9)
    ax.add_patch(_square(0, 0, "none", edge="black", lw=2.0))
    ax.set_xlim(-radius - 0.6, radius + 0.6)
    ax.set_ylim(-radius - 0.6, radius + 0.6)
    ax.set_aspect("equal")
    ax.set_xticks([])
    ax.set_yticks([])
    fig.savefig(path, bbox_inches="tight")


def save_bounds_figure(rows: Sequence[dict], path: str) -> None:
    """Chart the regime boundaries against the minimum weight-crossing radius."""
    from matplotlib.figure import Figure

    ns = [row["n"] for row in rows]
    fig = Figure(figsize=(7, 4))
    ax = fig.add_subplot()
    ax.plot(ns, [row["half_ceiling"] for row in rows], "o-", label="ceil(n/2)")
    ax.plot(ns, [row["min_r_exceeding"] for row in rows], "s-", label="min r with heavier pulse")
    ax.plot(ns, [row["unreachable_radius"] for row in rows], "^-", label="ceil(n/sqrt(3)) + 1")
    ax.set_xlabel("n")
    ax.set_ylabel("r")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.savefig(path, bbox_inches="tight")


def _square(x: int, y: int, color, edge="0.6", lw=0.5):
    from matplotlib.patches import Rectangle

    return Rectangle((x - 0.5, y - 0.5), 1.0, 1.0, facecolor=color, edgecolor=edge, linewidth=lw)


def _weight_cmap():
    from matplotlib import colormaps

    return colormaps["viridis"].resampled(256)
