"""Regular hyperbolic {n,k} tilings grown by vertex or edge inflation.

The tiling is stored purely combinatorially: tiles are cycles of edge ids
(counterclockwise), edges know their endpoint vertices and incident tiles,
and the outer boundary is a cyclic list of boundary edge ids.

Growth works on the current boundary cycle.  A boundary vertex ``v`` that
already touches ``t(v)`` tiles is missing ``k - t(v)`` of them.  One inflation
step walks around the boundary and emits the next ring of tiles:

* every boundary edge gets a tile glued onto it; consecutive edge tiles merge
  into one tile when the vertex between them is missing exactly one tile;
* in vertex mode the remaining gap around each vertex is filled with
  vertex-only tiles, so that every old boundary vertex becomes interior;
* in edge mode gaps are left open (the vertex stays on the boundary).
"""

from __future__ import annotations

import enum
import json
import os
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from holocode.errors import GeometryError, ResourceLimitError

DEFAULT_MAX_BOUNDARY = 200_000


class Curvature(enum.Enum):
    HYPERBOLIC = "hyperbolic"
    FLAT = "flat"
    SPHERICAL = "spherical"


class Inflation(enum.Enum):
    VERTEX = "vertex"
    EDGE = "edge"


def validate_schlafli(n: int, k: int) -> Curvature:
    """Classify the Schläfli symbol {n,k} by the sign of ``nk - 2(n+k)``."""
    if n < 3 or k < 3:
        raise GeometryError(f"invalid Schläfli symbol {{{n},{k}}}: need n >= 3 and k >= 3")
    f = n * k - 2 * (n + k)
    if f > 0:
        return Curvature.HYPERBOLIC
    if f == 0:
        return Curvature.FLAT
    return Curvature.SPHERICAL


def max_boundary_from_env() -> int:
    value = os.environ.get("HOLOCODE_MAX_BOUNDARY")
    return int(value) if value else DEFAULT_MAX_BOUNDARY


@dataclass(frozen=True)
class TilingSpec:
    n: int
    k: int
    inflation: Inflation = Inflation.VERTEX
    layers: int = 0

    def __post_init__(self):
        if self.layers < 0:
            raise GeometryError("layers must be non-negative")
        if not isinstance(self.inflation, Inflation):
            object.__setattr__(self, "inflation", Inflation(self.inflation))

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "inflation": self.inflation.value, "layers": self.layers}

    @classmethod
    def from_dict(cls, data: dict) -> "TilingSpec":
        return cls(int(data["n"]), int(data["k"]), Inflation(data["inflation"]), int(data["layers"]))


@dataclass(frozen=True)
class Tile:
    edges: tuple[int, ...]
    layer: int


@dataclass(frozen=True)
class Edge:
    tiles: tuple[int, ...]
    vertices: tuple[int, int]

    @property
    def is_boundary(self) -> bool:
        return len(self.tiles) == 1


@dataclass(frozen=True, eq=False)
class TilingGraph:
    """Immutable tiling: tiles, edges, and the ordered outer boundary."""

    spec: TilingSpec
    tiles: tuple[Tile, ...]
    edges: tuple[Edge, ...]
    boundary_order: tuple[int, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __eq__(self, other):
        if not isinstance(other, TilingGraph):
            return NotImplemented
        return (
            self.spec == other.spec
            and self.tiles == other.tiles
            and self.edges == other.edges
            and self.boundary_order == other.boundary_order
        )

    __hash__ = None

    @property
    def n_tiles(self) -> int:
        return len(self.tiles)

    @property
    def n_boundary(self) -> int:
        return len(self.boundary_order)

    def layer_of(self, tile: int) -> int:
        return self.tiles[tile].layer

    @property
    def n_layers(self) -> int:
        return max(t.layer for t in self.tiles) + 1

    @cached_property
    def interior_edges(self) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.edges) if not e.is_boundary)

    @cached_property
    def boundary_position(self) -> dict[int, int]:
        """Map boundary edge id -> position in ``boundary_order``."""
        return {e: i for i, e in enumerate(self.boundary_order)}

    @cached_property
    def n_vertices(self) -> int:
        return 1 + max(max(e.vertices) for e in self.edges)

    @cached_property
    def boundary_vertices(self) -> tuple[int, ...]:
        """Vertex at the start (clockwise end) of each boundary position.

        Boundary edge at position ``i`` runs from ``boundary_vertices[i]`` to
        ``boundary_vertices[i + 1]``.
        """
        m = self.n_boundary
        if m == 1:
            return (self.edges[self.boundary_order[0]].vertices[0],)
        out = []
        for i in range(m):
            a = set(self.edges[self.boundary_order[i - 1]].vertices)
            b = set(self.edges[self.boundary_order[i]].vertices)
            (v,) = a & b
            out.append(v)
        return tuple(out)

    def tile_vertices(self, tile: int) -> tuple[int, ...]:
        """Vertices of a tile in counterclockwise order."""
        edges = self.tiles[tile].edges
        out = []
        for i, e in enumerate(edges):
            nxt = set(self.edges[edges[(i + 1) % len(edges)]].vertices)
            cur = set(self.edges[e].vertices)
            (v,) = cur & nxt
            out.append(v)
        # out[i] is the vertex shared by edges[i] and edges[i+1]
        return tuple(out)

    def vertex_tile_counts(self) -> np.ndarray:
        counts = np.zeros(self.n_vertices, dtype=int)
        for t in range(self.n_tiles):
            for v in set(self.tile_vertices(t)):
                counts[v] += 1
        return counts

    def boundary_distance(self, i: int, j: int) -> int:
        """Cyclic separation of two boundary positions."""
        m = self.n_boundary
        if not (0 <= i < m and 0 <= j < m):
            raise IndexError(f"boundary positions must lie in [0, {m})")
        d = abs(i - j)
        return min(d, m - d)

    # -- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "tiles": [{"edges": list(t.edges), "layer": t.layer} for t in self.tiles],
            "edges": [{"tiles": list(e.tiles), "vertices": list(e.vertices)} for e in self.edges],
            "boundary_order": list(self.boundary_order),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TilingGraph":
        return cls(
            spec=TilingSpec.from_dict(data["spec"]),
            tiles=tuple(Tile(tuple(t["edges"]), int(t["layer"])) for t in data["tiles"]),
            edges=tuple(Edge(tuple(e["tiles"]), tuple(e["vertices"])) for e in data["edges"]),
            boundary_order=tuple(data["boundary_order"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "TilingGraph":
        return cls.from_dict(json.loads(text))

    # -- cut queries -----------------------------------------------------

    def min_cut(self, region: Iterable[int]) -> tuple[int, frozenset[int]]:
        """Minimum edge cut separating boundary ``region`` from the rest.

        ``region`` holds boundary edge ids.  The cut may contain boundary
        edges themselves (cutting an open leg).  Among all minimum cuts the
        one whose sorted edge ids are lexicographically smallest is returned.
        """
        region = set(region)
        boundary = set(self.boundary_order)
        if not region <= boundary:
            raise ValueError(f"region contains non-boundary edges: {sorted(region - boundary)[:5]}")
        if not region or region == boundary:
            return 0, frozenset()
        return _lexicographic_min_cut(self, region)

    def min_cut_size(self, region: Iterable[int]) -> int:
        """Size of the minimum cut only: a single max flow, no tie-break."""
        region = set(region)
        boundary = set(self.boundary_order)
        if not region <= boundary:
            raise ValueError(f"region contains non-boundary edges: {sorted(region - boundary)[:5]}")
        if not region or region == boundary:
            return 0
        s, t, arcs = _flow_network(self, region)
        return _max_flow(self.n_tiles + 2, s, t, arcs, set())[0]

    def interval_cut_table(self) -> np.ndarray:
        """Minimal cut size of every contiguous boundary interval.

        Entry ``[i, j]`` is the cut size of the interval covering boundary
        positions ``i, i+1, ..., j-1`` (cyclically).  Computed as the graph
        distance between the interval's two end vertices in the tiling's
        1-skeleton, which is the planar dual of the tile-adjacency cut.
        """
        if "interval_cuts" not in self._cache:
            nv = self.n_vertices
            rows, cols = [], []
            for e in self.edges:
                u, v = e.vertices
                rows += [u, v]
                cols += [v, u]
            adj = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(nv, nv))
            bverts = np.array(self.boundary_vertices)
            table = np.empty((len(bverts), len(bverts)), dtype=np.int64)
            for lo in range(0, len(bverts), 256):
                dist = shortest_path(adj, unweighted=True, indices=bverts[lo : lo + 256])
                table[lo : lo + 256] = dist[:, bverts].round()
            self._cache["interval_cuts"] = table
        return self._cache["interval_cuts"]

    def interval_edges(self, start: int, length: int) -> list[int]:
        m = self.n_boundary
        return [self.boundary_order[(start + t) % m] for t in range(length)]


# ----------------------------------------------------------------------
# min cut by unit-capacity max flow


def _flow_network(graph: TilingGraph, region: set[int]):
    """Adjacency for max flow: node ids are tiles, plus source S and sink T."""
    s = graph.n_tiles
    t = s + 1
    arcs = []  # (u, v, edge id); each tiling edge becomes one undirected unit edge
    for eid, e in enumerate(graph.edges):
        if e.is_boundary:
            (tile,) = e.tiles
            arcs.append((s if eid in region else t, tile, eid))
        else:
            a, b = e.tiles
            arcs.append((a, b, eid))
    return s, t, arcs


def _max_flow(n_nodes: int, s: int, t: int, arcs, removed: set[int]):
    """Unit-capacity undirected max flow by BFS augmentation.

    Returns the flow value and the flow per edge (+1 means u->v).
    """
    adj: list[list[tuple[int, int, int]]] = [[] for _ in range(n_nodes)]
    for idx, (u, v, eid) in enumerate(arcs):
        if eid in removed:
            continue
        adj[u].append((v, idx, 1))
        adj[v].append((u, idx, -1))
    flow = [0] * len(arcs)
    value = 0
    while True:
        prev = [None] * n_nodes
        prev[s] = (-1, -1, 0)
        queue = deque([s])
        while queue and prev[t] is None:
            x = queue.popleft()
            for y, idx, direction in adj[x]:
                if prev[y] is None and flow[idx] * direction < 1:
                    prev[y] = (x, idx, direction)
                    queue.append(y)
        if prev[t] is None:
            return value, flow, adj
        y = t
        while y != s:
            x, idx, direction = prev[y]
            flow[idx] += direction
            y = x
        value += 1


def _residual_components(n_nodes: int, flow, adj) -> list[int]:
    """Strongly connected component label of every node in the residual graph."""
    g = nx.DiGraph()
    g.add_nodes_from(range(n_nodes))
    for x in range(n_nodes):
        for y, idx, direction in adj[x]:
            if flow[idx] * direction < 1:
                g.add_edge(x, y)
    label = [0] * n_nodes
    for c, comp in enumerate(nx.strongly_connected_components(g)):
        for x in comp:
            label[x] = c
    return label


def _lexicographic_min_cut(graph: TilingGraph, region: set[int]) -> tuple[int, frozenset[int]]:
    s, t, arcs = _flow_network(graph, region)
    n_nodes = graph.n_tiles + 2
    removed: set[int] = set()
    size, flow, adj = _max_flow(n_nodes, s, t, arcs, removed)
    remaining = size
    by_eid = sorted(range(len(arcs)), key=lambda i: arcs[i][2])
    while remaining:
        label = _residual_components(n_nodes, flow, adj)
        for idx in by_eid:
            u, v, eid = arcs[idx]
            if eid in removed or flow[idx] == 0:
                continue
            # a saturated edge lies in some min cut iff its ends sit in
            # different residual strongly connected components
            if label[u] != label[v]:
                removed.add(eid)
                break
        else:  # pragma: no cover - max-flow/min-cut duality guarantees a hit
            raise RuntimeError("no saturated edge found in a min cut")
        value, flow, adj = _max_flow(n_nodes, s, t, arcs, removed)
        remaining -= 1
        assert value == remaining
    return size, frozenset(removed)


# ----------------------------------------------------------------------
# generation


@dataclass
class _Builder:
    n: int
    k: int
    edges_v: list = field(default_factory=list)  # edge id -> [u, v]
    edges_t: list = field(default_factory=list)  # edge id -> list of tiles
    tiles: list = field(default_factory=list)  # (edge ids, layer)
    tcount: list = field(default_factory=list)  # vertex -> incident tiles
    parent: list = field(default_factory=list)  # union-find over vertices

    def new_vertex(self) -> int:
        self.tcount.append(0)
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, v: int) -> int:
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def new_edge(self, u: int, v: int) -> int:
        self.edges_v.append([u, v])
        self.edges_t.append([])
        return len(self.edges_v) - 1

    def add_tile(self, edges: Sequence[int], layer: int) -> int:
        tid = len(self.tiles)
        self.tiles.append((tuple(edges), layer))
        for e in edges:
            self.edges_t[e].append(tid)
        return tid


def _plan_ring(missing: list[int], mode: Inflation):
    """Group boundary edges into the next ring of tiles.

    Returns a list of tiles ``(kind, first_edge, n_old_edges)``, where kind is
    "edge" or "vertex" (a vertex tile sits at boundary vertex ``first_edge``),
    and for each tile the connection type to the next tile ("radial" or
    "notch").
    """
    m = len(missing)
    # vertex i sits between boundary edge i-1 and edge i
    starts = [i for i in range(m) if missing[i] != 1]
    if not starts:
        raise GeometryError("every boundary vertex misses one tile; inflation degenerates")
    if any(x < 1 for x in missing):
        raise GeometryError("boundary vertex already saturated")
    i0 = starts[0]
    tiles: list[list] = []
    links: list[str] = []
    i = i0
    covered = 0
    while covered < m:
        s = 1
        while missing[(i + s) % m] == 1:
            s += 1
        tiles.append(["edge", i % m, s])
        covered += s
        v = (i + s) % m
        gap = missing[v] - 2
        if mode is Inflation.VERTEX:
            links.append("radial")
            for _ in range(gap):
                tiles.append(["vertex", v, 0])
                links.append("radial")
        else:
            links.append("radial" if gap == 0 else "notch")
        i += s
    return tiles, links


def generate(spec: TilingSpec, max_boundary: int | None = None) -> TilingGraph:
    """Grow a tiling with ``spec.layers`` inflation steps around one seed tile."""
    if validate_schlafli(spec.n, spec.k) is not Curvature.HYPERBOLIC:
        raise GeometryError(
            f"{{{spec.n},{spec.k}}} is not hyperbolic: need n*k - 2(n+k) > 0"
        )
    if max_boundary is None:
        max_boundary = max_boundary_from_env()
    n, k = spec.n, spec.k
    b = _Builder(n, k)
    verts = [b.new_vertex() for _ in range(n)]
    bedges = [b.new_edge(verts[i], verts[(i + 1) % n]) for i in range(n)]
    b.add_tile(bedges, 0)
    for v in verts:
        b.tcount[v] += 1
    bverts = verts  # bverts[i] is the start vertex of bedges[i]
    if n > max_boundary:
        raise ResourceLimitError(f"boundary size {n} exceeds ceiling {max_boundary}")

    for layer in range(1, spec.layers + 1):
        m = len(bedges)
        missing = [k - b.tcount[v] for v in bverts]
        ring, links = _plan_ring(missing, spec.inflation)
        projected = 0
        for j, (kind, _, s) in enumerate(ring):
            outer = n - s - 2
            if outer < 0:
                raise GeometryError(f"{{{n},{k}}} inflation closes a tile without side edges")
            projected += outer + (links[j - 1] == "notch") + (links[j] == "notch")
        if projected > max_boundary:
            raise ResourceLimitError(
                f"layer {layer} would have {projected} boundary edges, ceiling is {max_boundary}"
            )

        r = len(ring)
        # vertex at which tile j meets tile j+1
        meet = []
        for kind, first, s in ring:
            meet.append(first if kind == "vertex" else (first + s) % m)
        # side edges: right side of tile j and left side of tile j+1
        right_side: list[int] = [0] * r
        left_side: list[int] = [0] * r
        right_out: list[int] = [0] * r
        left_out: list[int] = [0] * r
        for j in range(r):
            w = bverts[meet[j]]
            if links[j] == "radial":
                x = b.new_vertex()
                e = b.new_edge(w, x)
                right_side[j] = left_side[(j + 1) % r] = e
                right_out[j] = left_out[(j + 1) % r] = x
            else:
                xa, xb = b.new_vertex(), b.new_vertex()
                right_side[j] = b.new_edge(xa, w)
                left_side[(j + 1) % r] = b.new_edge(w, xb)
                right_out[j] = xa
                left_out[(j + 1) % r] = xb

        new_bedges: list[int] = []
        new_bverts: list[int] = []
        pending_tiles = []
        for j, (kind, first, s) in enumerate(ring):
            outer = n - s - 2
            lo, ro = left_out[j], right_out[j]
            path = [lo] + [b.new_vertex() for _ in range(outer - 1)] + [ro] if outer >= 1 else [lo]
            if outer == 0:
                b.parent[b.find(ro)] = b.find(lo)
            outer_edges = [b.new_edge(path[t], path[t + 1]) for t in range(outer)]
            old = [bedges[(first + t) % m] for t in reversed(range(s))]
            tile_edges = old + [left_side[j]] + outer_edges + [right_side[j]]
            pending_tiles.append(tile_edges)
            if links[j - 1] == "notch":
                new_bverts.append(bverts[meet[j - 1]])
                new_bedges.append(left_side[j])
            for t, e in enumerate(outer_edges):
                new_bverts.append(path[t])
                new_bedges.append(e)
            if links[j] == "notch":
                new_bverts.append(ro)
                new_bedges.append(right_side[j])
        for tile_edges in pending_tiles:
            b.add_tile(tile_edges, layer)
            vs = {b.find(v) for e in tile_edges for v in b.edges_v[e]}
            for v in vs:
                b.tcount[v] += 1
        bedges = new_bedges
        bverts = [b.find(v) for v in new_bverts]

    return _freeze(spec, b, bedges)


def _freeze(spec: TilingSpec, b: _Builder, bedges: list[int]) -> TilingGraph:
    roots = sorted({b.find(v) for v in range(len(b.parent))})
    relabel = {r: i for i, r in enumerate(roots)}
    edges = tuple(
        Edge(tuple(ts), (relabel[b.find(u)], relabel[b.find(v)]))
        for (u, v), ts in zip(b.edges_v, b.edges_t)
    )
    tiles = tuple(Tile(es, layer) for es, layer in b.tiles)
    start = bedges.index(min(bedges))
    order = tuple(bedges[start:] + bedges[:start])
    return TilingGraph(spec=spec, tiles=tiles, edges=edges, boundary_order=order)


def growth_ratios(
    n: int, k: int, inflation: Inflation, layers: int, max_boundary: int | None = None
) -> list[float]:
    """Boundary edge count ratios between consecutive inflation layers."""
    counts = [generate(TilingSpec(n, k, inflation, L), max_boundary).n_boundary for L in range(layers + 1)]
    return [counts[i + 1] / counts[i] for i in range(layers)]
