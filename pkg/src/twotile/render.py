"""Planar drawing of one level: Tutte embedding per panel, SVG output.

The sphere is cut along the invariant boundary curve into two closed
disks (the panels), one per 0-tile. Each panel is drawn with its k base
vertices on a regular polygon and every interior vertex at the average
of its neighbors. With the base vertices placed counterclockwise the
white panel's faces come out positively oriented and the black panel is
the mirror image, matching how the two halves of the pillow face the
reader.

Coordinates are floats; everything else in the package stays exact.
Tolerances: the barycentric solve must reach residual <= 1e-9 or
SolverDidNotConverge is raised; interior vertices closer than 1e-7 of
the panel diameter are only reported via min_separation, not an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diagnostics import DegenerateDrawing, SolverDidNotConverge, UnknownCell
from .rules import BLACK, BoundaryEdge, Corner, TileInterior, WHITE
from .subdivision import LevelComplex

RESIDUAL_TOL = 1e-9


@dataclass
class TutteEmbedding:
    """Coordinates for one panel plus solve quality numbers."""

    panel: str
    coords: dict[str, tuple[float, float]]
    tiles: tuple[str, ...]
    residual: float
    min_separation: float


def boundary_cycle(lc: LevelComplex) -> list[str]:
    """Vertices of the boundary curve in order p0, ..., p0-excluded.

    Walks the level-n subdivision of each 0-edge s_l from corner l to
    corner l+1; the result lists every boundary vertex once, starting at
    p0, oriented the way the white 0-tile's walk runs.
    """
    k = lc.rule.k
    side_edges: dict[int, list[str]] = {l: [] for l in range(k)}
    for e, loc in lc.edge_loc0.items():
        if isinstance(loc, BoundaryEdge):
            side_edges[loc.label].append(e)
    incident: dict[str, list[str]] = {}
    for l in range(k):
        for e in side_edges[l]:
            for v in lc.complex.edges[e]:
                incident.setdefault(v, []).append(e)

    cycle: list[str] = []
    for l in range(k):
        at = f"p{l}"
        stop = f"p{(l + 1) % k}"
        used: set[str] = set()
        while at != stop:
            cycle.append(at)
            options = [
                e
                for e in incident.get(at, ())
                if e not in used and lc.edge_loc0[e] == BoundaryEdge(l)
            ]
            if len(options) != 1:
                raise UnknownCell(f"boundary walk stuck at {at!r} on side {l}")
            step = options[0]
            used.add(step)
            tail, head = lc.complex.edges[step]
            at = head if tail == at else tail
    return cycle


def panel_tiles(lc: LevelComplex, panel: str) -> tuple[str, ...]:
    return tuple(
        sorted(t for t, loc in lc.tile_loc0.items() if loc == TileInterior(panel))
    )


def tutte_embed(lc: LevelComplex, panel: str) -> TutteEmbedding:
    """Barycentric embedding of one panel's subcomplex in the unit disk."""
    if panel not in (WHITE, BLACK):
        raise UnknownCell(f"panel must be a color, got {panel!r}")
    k = lc.rule.k
    cycle = boundary_cycle(lc)
    coords: dict[str, tuple[float, float]] = {}

    # base vertices at the k-th roots of unity, chain vertices spread
    # evenly along each polygon side
    corner_pos = {}
    for i in range(k):
        theta = -math.pi / 2 + 2 * math.pi * i / k
        corner_pos[i] = (math.cos(theta), math.sin(theta))
    side = -1
    runs: dict[int, list[str]] = {}
    for v in cycle:
        if isinstance(lc.vertex_loc0[v], Corner):
            side += 1
            runs[side] = [v]
        else:
            runs[side].append(v)
    for l in range(k):
        vs = runs[l]
        x0, y0 = corner_pos[l]
        x1, y1 = corner_pos[(l + 1) % k]
        for j, v in enumerate(vs):
            t = j / len(vs)
            coords[v] = (x0 + t * (x1 - x0), y0 + t * (y1 - y0))

    interior = sorted(
        v for v, loc in lc.vertex_loc0.items() if loc == TileInterior(panel)
    )
    if interior:
        index = {v: i for i, v in enumerate(interior)}
        n = len(interior)
        a = np.zeros((n, n))
        b = np.zeros((n, 2))
        for v in interior:
            i = index[v]
            neighbors = []
            for e in lc.complex.vertex_cycle(v).edges:
                tail, head = lc.complex.edges[e]
                neighbors.append(head if tail == v else tail)
            a[i, i] = len(neighbors)
            for w in neighbors:
                if w in index:
                    a[i, index[w]] -= 1.0
                else:
                    b[i, 0] += coords[w][0]
                    b[i, 1] += coords[w][1]
        sol = np.linalg.solve(a, b)
        residual = float(np.max(np.abs(a @ sol - b))) if n else 0.0
        if residual > RESIDUAL_TOL:
            raise SolverDidNotConverge(residual)
        for v in interior:
            coords[v] = (float(sol[index[v], 0]), float(sol[index[v], 1]))
        if n > 1:
            pts = sol
            d2 = np.sum((pts[:, None, :] - pts[None, :, :]) ** 2, axis=2)
            np.fill_diagonal(d2, np.inf)
            min_sep = float(math.sqrt(d2.min()))
        else:
            min_sep = math.inf
    else:
        residual = 0.0
        min_sep = math.inf

    tiles = panel_tiles(lc, panel)
    want = 1.0 if panel == WHITE else -1.0
    for t in tiles:
        vs = lc.complex.tile_vertices(t)
        area = 0.0
        for i, v in enumerate(vs):
            x0, y0 = coords[v]
            x1, y1 = coords[vs[(i + 1) % len(vs)]]
            area += x0 * y1 - x1 * y0
        if not area * want > 1e-12:
            raise DegenerateDrawing(
                f"tile {t!r} drawn degenerate or misoriented (area {area:.3e})"
            )
    return TutteEmbedding(panel, coords, tiles, residual, min_sep)


_FILL = {WHITE: "#f2efe9", BLACK: "#475160"}
_PANEL_R = 300.0
_MARGIN = 40.0


def _fmt(x: float) -> str:
    out = f"{x:.4f}"
    return "0.0000" if out == "-0.0000" else out


def render_svg(lc: LevelComplex) -> str:
    """Two-panel SVG of the level, one polygon per tile."""
    width = 4 * _PANEL_R + 3 * _MARGIN
    height = 2 * _PANEL_R + 2 * _MARGIN
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<rect width="{_fmt(width)}" height="{_fmt(height)}" fill="#ffffff"/>',
    ]
    centers = {
        WHITE: (_MARGIN + _PANEL_R, _MARGIN + _PANEL_R),
        BLACK: (2 * _MARGIN + 3 * _PANEL_R, _MARGIN + _PANEL_R),
    }
    for panel in (WHITE, BLACK):
        emb = tutte_embed(lc, panel)
        cx0, cy0 = centers[panel]

        def place(v: str) -> tuple[float, float]:
            x, y = emb.coords[v]
            # svg y grows downward; flip so the panel keeps its sense
            return (cx0 + _PANEL_R * x, cy0 - _PANEL_R * y)

        parts.append(f'<g id="panel-{panel}">')
        for t in emb.tiles:
            pts = " ".join(
                f"{_fmt(px)},{_fmt(py)}"
                for px, py in (place(v) for v in lc.complex.tile_vertices(t))
            )
            fill = _FILL[lc.tile_color[t]]
            parts.append(
                f'<polygon points="{pts}" fill="{fill}" '
                f'stroke="#20242c" stroke-width="0.7"/>'
            )
        for i in range(lc.rule.k):
            px, py = place(f"p{i}")
            parts.append(
                f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="4" fill="#b33939"/>'
            )
        parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
