"""Rendered reports: delimited data plus matplotlib figures on disk.

The CLI ``report`` subcommand lands here.  For a presentation it writes
a vertex table and a potential grid as CSV, and (in one or two moment
dimensions) a polytope figure and a potential figure next to them.
"""

import csv

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .kahler import GuilleminPotential  # noqa: E402
from .polytope import enumerate_vertices  # noqa: E402

__all__ = ["interior_lattice", "write_report"]

FMT = "%.17g"


def interior_lattice(hs, steps, tol=1e-9):
    """Regular lattice over the vertex box, restricted to the interior.

    Axis values split the box into ``steps + 1`` parts, skipping the
    endpoints; for unbounded polyhedra the box is the padded vertex box.
    """
    lo, hi = hs.vertex_box(tol=tol)
    axes = [lo[i] + (hi[i] - lo[i]) * np.arange(1, steps + 1) / (steps + 1)
            for i in range(hs.dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    keep = np.all(hs.affine_forms(pts) > 0.0, axis=-1)
    return pts[keep]


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow([FMT % x if isinstance(x, float) else x
                             for x in row])


def _facet_segments(hs, lo, hi):
    """Each facet line clipped to the box [lo, hi] (2d only)."""
    segments = []
    for j in range(hs.num_facets):
        v = np.array(hs.normals.column(j), dtype=float)
        kap = hs.offsets[j]
        # parametrize the line <v, xi> = kappa by the orthogonal direction
        t = np.array([-v[1], v[0]])
        base = v * kap / (v @ v)
        bounds = []
        for i in range(2):
            if abs(t[i]) > 1e-15:
                cands = sorted(((lo[i] - base[i]) / t[i],
                                (hi[i] - base[i]) / t[i]))
                bounds.append(cands)
        t_lo = max(b[0] for b in bounds)
        t_hi = min(b[1] for b in bounds)
        if t_lo < t_hi:
            segments.append((base + t_lo * t, base + t_hi * t, v))
    return segments


def _polytope_figure(hs, vertices, path, title):
    fig, ax = plt.subplots(figsize=(5, 5))
    pts = np.array([v.xi for v in vertices])
    if hs.dim == 1:
        ax.axhline(0.0, color="0.8", lw=1)
        lo, hi = hs.vertex_box()
        ax.plot([lo[0], hi[0]] if not hs.is_bounded()
                else [pts.min(), pts.max()], [0, 0], "-", lw=3, color="C0")
        ax.plot(pts[:, 0], np.zeros(len(pts)), "o", color="C3")
        ax.set_yticks([])
        ax.set_xlabel(r"$\xi$")
    else:
        lo, hi = hs.vertex_box()
        margin = 0.15 * np.maximum(hi - lo, 1.0)
        lo, hi = lo - margin, hi + margin
        if hs.is_bounded():
            center = pts.mean(axis=0)
            order = np.argsort(np.arctan2(*(pts - center).T[::-1]))
            ax.fill(pts[order, 0], pts[order, 1], color="0.9", zorder=0)
        scale = 0.1 * float(np.max(hi - lo))
        for start, end, normal in _facet_segments(hs, lo, hi):
            ax.plot([start[0], end[0]], [start[1], end[1]],
                    "-", color="C0", lw=1.5)
            mid = 0.5 * (start + end)
            direction = normal / np.linalg.norm(normal)
            ax.annotate("", xy=mid + scale * direction, xytext=mid,
                        arrowprops=dict(arrowstyle="->", color="C2"))
        ax.plot(pts[:, 0], pts[:, 1], "o", color="C3", zorder=3)
        ax.set_xlim(lo[0], hi[0])
        ax.set_ylim(lo[1], hi[1])
        ax.set_xlabel(r"$\xi_1$")
        ax.set_ylabel(r"$\xi_2$")
        ax.set_aspect("equal")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _potential_figure(potential, grid, values, path, title):
    fig, ax = plt.subplots(figsize=(5.5, 4.2))
    if grid.shape[1] == 1:
        order = np.argsort(grid[:, 0])
        ax.plot(grid[order, 0], values[order], "-", color="C0")
        ax.set_xlabel(r"$\xi$")
        ax.set_ylabel("G")
    else:
        sc = ax.scatter(grid[:, 0], grid[:, 1], c=values, s=12,
                        cmap="viridis")
        fig.colorbar(sc, ax=ax, label="G")
        ax.set_xlabel(r"$\xi_1$")
        ax.set_ylabel(r"$\xi_2$")
        ax.set_aspect("equal")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_report(pres, outdir, steps=25, tol=1e-9):
    """Write the report bundle for a presentation; returns written paths."""
    outdir.mkdir(parents=True, exist_ok=True)
    name = pres.name or "presentation"
    hs = pres.halfspaces()
    vertices = enumerate_vertices(hs, tol=tol)
    written = []

    vertex_csv = outdir / f"{name}_vertices.csv"
    header = [f"xi_{i + 1}" for i in range(pres.n)] + ["facets", "degenerate"]
    rows = [[float(x) for x in rec.xi]
            + ["|".join(str(j + 1) for j in rec.J), int(rec.degenerate)]
            for rec in vertices]
    _write_csv(vertex_csv, header, rows)
    written.append(vertex_csv)

    potential = GuilleminPotential(hs)
    grid = interior_lattice(hs, steps, tol=tol)
    values = np.array([potential.G(xi) for xi in grid])
    grid_csv = outdir / f"{name}_grid_G.csv"
    _write_csv(grid_csv, [f"xi_{i + 1}" for i in range(pres.n)] + ["G"],
               [[*map(float, xi), float(g)] for xi, g in zip(grid, values)])
    written.append(grid_csv)

    if pres.n in (1, 2):
        poly_png = outdir / f"{name}_polytope.png"
        _polytope_figure(hs, vertices, poly_png, f"moment polytope: {name}")
        written.append(poly_png)
        pot_png = outdir / f"{name}_potential.png"
        _potential_figure(potential, grid, values, pot_png,
                          f"dual potential G: {name}")
        written.append(pot_png)
    return written
