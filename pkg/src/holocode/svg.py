"""Schematic SVG drawings of tilings and dimer states."""

from __future__ import annotations

import math

import numpy as np
from scipy.sparse import lil_matrix
from scipy.sparse.linalg import spsolve

from holocode.dimer import DimerState
from holocode.tiling import TilingGraph

LAYER_COLORS = ["#fde0c5", "#facba6", "#f8b58b", "#f59e72", "#f2855d", "#ef6a4c", "#eb4a40", "#d33a3a"]
DIMER_FORWARD = "#1f77b4"  # tail < head
DIMER_BACKWARD = "#ff7f0e"


def tutte_layout(graph: TilingGraph) -> np.ndarray:
    """Vertex positions: boundary on the unit circle, interior at neighbour averages."""
    nv = graph.n_vertices
    if graph.n_boundary < 3:
        raise ValueError("layout needs at least three boundary vertices")
    fixed = {}
    bverts = graph.boundary_vertices
    for i, v in enumerate(bverts):
        a = 2 * math.pi * i / len(bverts)
        fixed[v] = (math.cos(a), math.sin(a))
    neighbours: list[set[int]] = [set() for _ in range(nv)]
    for e in graph.edges:
        u, v = e.vertices
        neighbours[u].add(v)
        neighbours[v].add(u)
    free = [v for v in range(nv) if v not in fixed]
    index = {v: i for i, v in enumerate(free)}
    pos = np.zeros((nv, 2))
    for v, p in fixed.items():
        pos[v] = p
    if free:
        A = lil_matrix((len(free), len(free)))
        rhs = np.zeros((len(free), 2))
        for v in free:
            i = index[v]
            A[i, i] = len(neighbours[v])
            for w in neighbours[v]:
                if w in fixed:
                    rhs[i] += fixed[w]
                else:
                    A[i, index[w]] -= 1
        A = A.tocsr()
        for dim in range(2):
            pos[free, dim] = spsolve(A, rhs[:, dim])
    return pos


def tiling_svg(graph: TilingGraph, size: int = 800) -> str:
    pos = tutte_layout(graph)
    half = size / 2

    def xy(v):
        return f"{half + 0.95 * half * pos[v, 0]:.3f},{half - 0.95 * half * pos[v, 1]:.3f}"

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">']
    for t, tile in enumerate(graph.tiles):
        colour = LAYER_COLORS[tile.layer % len(LAYER_COLORS)]
        points = " ".join(xy(v) for v in graph.tile_vertices(t))
        parts.append(f'<polygon points="{points}" fill="{colour}" stroke="#333" stroke-width="0.6"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def dimer_svg(state: DimerState, size: int = 800) -> str:
    """Modes on a circle in embedding order, dimers as chords."""
    n = state.mode_count
    half = size / 2
    radius = 0.9 * half
    where = {m: i for i, m in enumerate(state.embedding)}

    def point(m):
        a = 2 * math.pi * where[m] / n
        return half + radius * math.cos(a), half - radius * math.sin(a)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">']
    parts.append(f'<circle cx="{half}" cy="{half}" r="{radius}" fill="none" stroke="#999"/>')
    for a, b in state.dimers:
        (x1, y1), (x2, y2) = point(a), point(b)
        colour = DIMER_FORWARD if a < b else DIMER_BACKWARD
        parts.append(
            f'<path d="M {x1:.3f} {y1:.3f} Q {half} {half} {x2:.3f} {y2:.3f}" fill="none" '
            f'stroke="{colour}" stroke-width="0.8"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
