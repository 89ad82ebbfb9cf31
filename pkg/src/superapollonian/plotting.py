"""Matplotlib figures written next to the CSV/JSON outputs."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def density_heatmap(xs: Sequence[float], ys: Sequence[float], values: np.ndarray, path: str | Path,
                    side: str = "B", log: bool = True) -> Path:
    """Heatmap of a density grid; log scale by default since the density blows up at cusps."""
    plt = _pyplot()
    data = np.asarray(values, dtype=float)
    if log:
        data = np.log10(np.where(np.isfinite(data) & (data > 0), data, np.nan))
    fig, ax = plt.subplots(figsize=(6, 5))
    im = ax.imshow(data, origin="lower", extent=(xs[0], xs[-1], ys[0], ys[-1]), aspect="equal",
                   cmap="viridis")
    fig.colorbar(im, ax=ax, label="log10 density" if log else "density")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(f"invariant density, side {side}")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150, metadata={"Software": None})
    plt.close(fig)
    return path


def frequency_bars(observed: dict[str, float], predicted: dict[str, float], path: str | Path,
                   title: str = "") -> Path:
    """Grouped bars of observed against conjectural frequencies."""
    plt = _pyplot()
    names = list(observed)
    x = np.arange(len(names))
    fig, ax = plt.subplots(figsize=(max(5, len(names) * 1.1), 4))
    ax.bar(x - 0.2, [observed[k] for k in names], 0.4, label="observed")
    ax.bar(x + 0.2, [predicted.get(k, np.nan) for k in names], 0.4, label="conjectural")
    ax.set_xticks(x, names, rotation=30, ha="right")
    ax.set_ylabel("frequency")
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150, metadata={"Software": None})
    plt.close(fig)
    return path


def packing_png(elements, viewport: Sequence[float], path: str | Path) -> Path:
    """Raster version of the Farey region outlines drawn by render_svg."""
    from matplotlib.patches import Circle

    plt = _pyplot()
    x0, y0, x1, y1 = (float(v) for v in viewport)
    fig, ax = plt.subplots(figsize=(6, 6))
    for _, kind, c in elements:
        color = "#1f4e9c" if kind == "circle" else "#c0392b"
        if c.is_line:
            # the line b1 x + b2 y = c/2, drawn past the viewport edges
            xs = np.array([x0 - 1, x1 + 1])
            _, _, b1, b2 = (float(v) for v in c.as_row())
            cc = float(c.as_row()[0])
            if abs(b2) > abs(b1):
                ys = (cc / 2 - b1 * xs) / b2
                ax.plot(xs, ys, color=color, lw=0.5)
            else:
                ys = np.array([y0 - 1, y1 + 1])
                ax.plot((cc / 2 - b2 * ys) / b1, ys, color=color, lw=0.5)
        else:
            cx, cy = c.center()
            ax.add_patch(Circle((float(cx), float(cy)), c.radius(), fill=False, color=color, lw=0.5))
    ax.set_xlim(x0, x1)
    ax.set_ylim(y0, y1)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=200, metadata={"Software": None})
    plt.close(fig)
    return path
