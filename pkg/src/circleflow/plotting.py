"""CSV and SVG output of map graphs."""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .pac import PacMap, evaluate_array


def graph_samples(f: PacMap, per_component: int = 400):
    """Rows ``(component, x, target_component, f(x))`` on a uniform grid per source component."""
    rows = []
    for comp, L in enumerate(f.source):
        xs = np.linspace(0.0, float(L), per_component, endpoint=False)
        tgt, ys = evaluate_array(f, xs, comp)
        rows += [(comp, float(x), int(t), float(y)) for x, t, y in zip(xs, tgt, ys)]
    return rows


def write_csv(f: PacMap, path, per_component: int = 400) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["component", "x", "target_component", "fx"])
        w.writerows(graph_samples(f, per_component))


def write_svg(f: PacMap, path, title: str = "", per_component: int = 400) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ncomp = len(f.source)
    fig, axes = plt.subplots(1, ncomp, figsize=(4 * ncomp, 4), squeeze=False)
    breaks = {c: [] for c in range(ncomp)}
    for c, x in f.discontinuities():
        breaks[c].append(float(x))
    for comp, ax in enumerate(axes[0]):
        for p in (p for p in f.pieces if p.comp == comp):
            xs = np.linspace(float(p.start), float(p.end), 50)
            ys = np.mod(p.transform.apply_array(xs), float(f.target[p.target]))
            xs = np.mod(xs, float(f.source[comp]))
            # split where the reduced graph wraps around in either coordinate
            wrap = (np.abs(np.diff(ys)) > float(f.target[p.target]) / 2) | (np.diff(xs) < 0)
            jumps = np.where(wrap)[0]
            for seg_x, seg_y in zip(np.split(xs, jumps + 1), np.split(ys, jumps + 1)):
                ax.plot(seg_x, seg_y, lw=1.5, color=f"C{p.target}")
        for b in breaks[comp]:
            ax.axvline(b, color="grey", lw=0.6, ls=":")
        ax.set_xlim(0, float(f.source[comp]))
        ax.set_xlabel(f"x (component {comp})")
        ax.set_ylabel("f(x)")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(Path(path), format="svg")
    plt.close(fig)
