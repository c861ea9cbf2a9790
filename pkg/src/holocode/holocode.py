"""HaPPY pentagon code on a generated tiling and its boundary observables.

Every tile carries the [[5,1,3]] encoding tensor with a fixed logical basis
input, so the boundary state is a Majorana dimer state.  It is built by
gluing tile dimer states layer by layer from the centre outwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from holocode.dimer import (
    HALF_LOG2,
    DimerState,
    Frontier,
    MajoranaMonomial,
    _count_crossings,
    dimer_entropy,
    five_qubit_basis_dimers,
    jordan_wigner,
    monomial_pauli,
    site_modes,
)
from holocode.errors import GeometryError, ResourceLimitError
from holocode.stabilizer import PauliString, five_qubit_code
from holocode.tensor import DenseTensor, contract
from holocode.tiling import TilingGraph, max_boundary_from_env

LOG2 = math.log(2)
TILE_DISTANCE = 3  # distance of the five-qubit tile code
MAX_OPERATOR_WEIGHT = 64


def parse_input(spec: str | Sequence[int], n_tiles: int) -> tuple[int, ...]:
    """Bulk assignment from ``"all-zero"``, ``"all-one"``, ``"random:SEED"`` or a bit list."""
    if isinstance(spec, str):
        if spec == "all-zero":
            return (0,) * n_tiles
        if spec == "all-one":
            return (1,) * n_tiles
        if spec.startswith("random:"):
            try:
                seed = int(spec.split(":", 1)[1])
            except ValueError as exc:
                raise ValueError(f"bad random seed in {spec!r}") from exc
            return tuple(int(b) for b in np.random.default_rng(seed).integers(0, 2, n_tiles))
        raise ValueError(f"unknown input assignment {spec!r}")
    bits = tuple(int(b) for b in spec)
    if len(bits) != n_tiles or any(b not in (0, 1) for b in bits):
        raise ValueError("bulk input needs one bit (0 or 1) per tile")
    return bits


@dataclass(frozen=True, eq=False)
class HolographicCode:
    """Tiling plus a logical basis input on every tile."""

    tiling: TilingGraph
    bulk_input: tuple[int, ...]
    tile_distance: int = TILE_DISTANCE
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        bits = parse_input(self.bulk_input, self.tiling.n_tiles)
        object.__setattr__(self, "bulk_input", bits)

    @classmethod
    def build(cls, tiling: TilingGraph, bulk_input: str | Sequence[int] = "all-zero") -> "HolographicCode":
        return cls(tiling, parse_input(bulk_input, tiling.n_tiles))

    def with_input(self, bulk_input) -> "HolographicCode":
        return HolographicCode.build(self.tiling, bulk_input)

    @property
    def n_boundary(self) -> int:
        return self.tiling.n_boundary

    @property
    def mode_map(self) -> dict[int, tuple[int, int]]:
        """Boundary edge id -> its two Majorana modes (1-based, boundary order)."""
        return {e: (2 * i + 1, 2 * i + 2) for i, e in enumerate(self.tiling.boundary_order)}

    @property
    def state(self) -> DimerState:
        if "state" not in self._cache:
            self._cache["state"] = boundary_state(self)
        return self._cache["state"]


# ----------------------------------------------------------------------
# greedy reconstruction


@dataclass(frozen=True)
class WedgeResult:
    reconstructed_tiles: frozenset[int]
    recovered_interior_edges: frozenset[int]
    residual_tiles: frozenset[int]
    complement_tiles: frozenset[int]

    @property
    def is_isometry(self) -> bool:
        return not self.residual_tiles


class _Greedy:
    """Incremental greedy absorption: known edges only ever grow."""

    def __init__(self, graph: TilingGraph, threshold: int):
        self.graph = graph
        self.threshold = threshold
        self.known = bytearray(len(graph.edges))
        self.count = [0] * graph.n_tiles
        self.absorbed = bytearray(graph.n_tiles)
        self.mask = 0

    def add(self, edge: int) -> None:
        stack = [edge]
        edges, tiles = self.graph.edges, self.graph.tiles
        while stack:
            e = stack.pop()
            if self.known[e]:
                continue
            self.known[e] = 1
            for t in edges[e].tiles:
                self.count[t] += 1
                if not self.absorbed[t] and self.count[t] >= self.threshold:
                    self.absorbed[t] = 1
                    self.mask |= 1 << t
                    stack.extend(f for f in tiles[t].edges if not self.known[f])


def _threshold(code: HolographicCode) -> int:
    return code.tiling.spec.n - (code.tile_distance - 1)


def _wedge_mask(code: HolographicCode, region: Iterable[int]) -> tuple[int, bytearray]:
    g = _Greedy(code.tiling, _threshold(code))
    for e in region:
        g.add(e)
    return g.mask, g.known


def _tiles_of(mask: int) -> frozenset[int]:
    out = []
    t = 0
    while mask:
        if mask & 1:
            out.append(t)
        mask >>= 1
        t += 1
    return frozenset(out)


def greedy_wedge(code: HolographicCode, region: Iterable[int]) -> WedgeResult:
    """Greedy wedge of a set of boundary edges and of its complement."""
    region = set(region)
    boundary = set(code.tiling.boundary_order)
    if not region <= boundary:
        raise ValueError("region must consist of boundary edges")
    mask, known = _wedge_mask(code, region)
    comp_mask, _ = _wedge_mask(code, boundary - region)
    full = (1 << code.tiling.n_tiles) - 1
    residual = full & ~(mask | comp_mask)
    interior = frozenset(e for e in code.tiling.interior_edges if known[e])
    return WedgeResult(_tiles_of(mask), interior, _tiles_of(residual), _tiles_of(comp_mask))


def residual_masks(code: HolographicCode):
    """Yield ``(start, length, mask)`` of residual tiles for every interval.

    For each start, a forward sweep grows ``[start, start+length)`` and a
    backward sweep grows the intervals ending at ``start``; the complement
    of one is a member of the other.  Bit ``t`` of ``mask`` marks tile ``t``.
    """
    g = code.tiling
    m = g.n_boundary
    order = g.boundary_order
    thr = _threshold(code)
    full = (1 << g.n_tiles) - 1
    for start in range(m):
        fwd = _Greedy(g, thr)
        forward = [0]
        for t in range(m):
            fwd.add(order[(start + t) % m])
            forward.append(fwd.mask)
        bwd = _Greedy(g, thr)
        backward = [0]
        for t in range(m):
            bwd.add(order[(start - 1 - t) % m])
            backward.append(bwd.mask)
        for length in range(m + 1):
            yield start, length, full & ~(forward[length] | backward[m - length])


def residual_table(code: HolographicCode) -> np.ndarray:
    """Residual tile count for every interval: entry ``[start, length]``."""
    m = code.n_boundary
    out = np.zeros((m, m + 1), dtype=np.int32)
    for start, length, mask in residual_masks(code):
        out[start, length] = bin(mask).count("1")
    return out


def adjacent_tile_pairs(tiling: TilingGraph) -> set[int]:
    """Masks of tile pairs sharing an edge."""
    return {(1 << e.tiles[0]) | (1 << e.tiles[1]) for e in tiling.edges if len(e.tiles) == 2}


def pathological_intervals(code: HolographicCode) -> list[tuple[int, int, frozenset[int]]]:
    """Intervals whose residual region is exactly two adjacent tiles."""
    pairs = adjacent_tile_pairs(code.tiling)
    return [(s, l, _tiles_of(mask)) for s, l, mask in residual_masks(code) if mask in pairs]


# ----------------------------------------------------------------------
# boundary state


def _tile_state(bit: int, labels: Sequence) -> Frontier:
    return Frontier.from_state(five_qubit_basis_dimers(bit), list(labels))


def contract_patch(
    tile_edges: Sequence[Sequence[int]],
    inputs: Sequence[int],
    order: Sequence[int] | None = None,
) -> Frontier:
    """Glue pentagon dimer states along shared edge ids.

    ``tile_edges`` lists each tile's edges counterclockwise.  Tiles are
    attached in ``order`` (default: as given); each must share a contiguous,
    non-empty run of edges with the tiles already placed.  Sites of the
    result are labelled ``(tile, edge)``.
    """
    order = list(range(len(tile_edges))) if order is None else list(order)
    owner: dict[int, int] = {}
    first = order[0]
    front = _tile_state(inputs[first], [(first, e) for e in tile_edges[first]])
    for e in tile_edges[first]:
        owner[e] = first
    for t in order[1:]:
        edges = list(tile_edges[t])
        n = len(edges)
        attached = [e in owner for e in edges]
        if not any(attached):
            raise GeometryError(f"tile {t} touches no placed tile along an edge")
        if all(attached):
            raise GeometryError(f"tile {t} would close the surface")
        # contiguous run of attached edges, in counterclockwise order
        start = next(i for i in range(n) if attached[i] and not attached[i - 1])
        run = []
        i = start
        while attached[i % n] and len(run) < n:
            run.append(edges[i % n])
            i += 1
        if sum(attached) != len(run):
            raise GeometryError(f"tile {t} meets the placed tiles along a broken run")
        block = _tile_state(inputs[t], [(t, e) for e in edges])
        contact = [(owner[e], e) for e in reversed(run)]
        front.glue(block, contact, [(t, e) for e in reversed(run)])
        for e in run:
            del owner[e]  # contracted away
        for e in edges:
            if e not in run:
                owner[e] = t
    return front


def contraction_order(tiling: TilingGraph) -> list[int]:
    """Centre outwards; each ring starts at a tile sharing an edge inward."""
    by_layer: dict[int, list[int]] = {}
    for t, tile in enumerate(tiling.tiles):
        by_layer.setdefault(tile.layer, []).append(t)
    order = []
    for layer in sorted(by_layer):
        ring = by_layer[layer]
        if layer == 0:
            order += ring
            continue
        lower = set(order)

        def inward(t):
            return any(
                other in lower for e in tiling.tiles[t].edges for other in tiling.edges[e].tiles if other != t
            )

        k = next(i for i, t in enumerate(ring) if inward(t))
        order += ring[k:] + ring[:k]
    return order


def boundary_state(code: HolographicCode) -> DimerState:
    """Dimer state on the boundary, modes numbered in boundary order."""
    g = code.tiling
    if g.spec.n != 5:
        raise GeometryError("the five-qubit tile tensor needs pentagonal tiles")
    ceiling = max_boundary_from_env()
    if g.n_boundary > ceiling:
        raise ResourceLimitError(f"boundary of {g.n_boundary} sites exceeds ceiling {ceiling}")
    front = contract_patch([t.edges for t in g.tiles], code.bulk_input, contraction_order(g))
    target = [(g.edges[e].tiles[0], e) for e in g.boundary_order]
    front.rotate(front.sites.index(target[0]))
    if front.sites != target:
        raise GeometryError("contracted frontier does not follow the boundary order")
    return front.to_state()


def dense_patch_state(
    tile_edges: Sequence[Sequence[int]], inputs: Sequence[int], sites: Sequence[tuple[int, int]]
) -> np.ndarray:
    """Dense contraction of pentagon code states, legs ordered as ``sites``."""
    basis = five_qubit_code().code_space_basis()
    tensors = [
        DenseTensor(basis[:, b].reshape((2,) * 5), tuple((t, e) for e in edges))
        for t, (edges, b) in enumerate(zip(tile_edges, inputs))
    ]
    acc = tensors[0]
    for tensor in tensors[1:]:
        shared = [e for (_, e) in acc.leg_labels if any(e == f for (_, f) in tensor.leg_labels)]
        pairs = [
            ([lab[1] for lab in acc.leg_labels].index(e), [lab[1] for lab in tensor.leg_labels].index(e))
            for e in shared
        ]
        acc = contract(acc, tensor, pairs)
    labels = list(acc.leg_labels)
    perm = [labels.index(tuple(s)) for s in sites]
    vec = np.transpose(acc.amplitudes, perm).reshape(-1)
    return vec / np.linalg.norm(vec)


# ----------------------------------------------------------------------
# entropies


def _check_interval(code: HolographicCode, start: int, length: int) -> tuple[int, int]:
    m = code.n_boundary
    if not 0 <= length <= m:
        raise ValueError(f"interval length must lie in [0, {m}]")
    return start % m, length


def interval_modes(code: HolographicCode, start: int, length: int) -> set[int]:
    m = code.n_boundary
    return site_modes((start + t) % m for t in range(length))


def interval_from_edges(code: HolographicCode, region: Iterable[int]) -> tuple[int, int]:
    """``(start, length)`` of a contiguous set of boundary edges."""
    pos = code.tiling.boundary_position
    region = set(region)
    m = code.n_boundary
    if not region:
        return 0, 0
    try:
        idx = sorted(pos[e] for e in region)
    except KeyError as exc:
        raise ValueError(f"edge {exc.args[0]} is not a boundary edge") from exc
    if len(idx) == m:
        return 0, m
    inside = set(idx)
    starts = [i for i in idx if (i - 1) % m not in inside]
    if len(starts) != 1:
        raise ValueError("region is not a contiguous boundary interval")
    return starts[0], len(idx)


def rt_entropy(code: HolographicCode, region) -> tuple[float, int, int]:
    """Dimer entropy, minimal cut and their integer gap for an interval.

    ``region`` is either ``(start, length)`` in boundary positions or a
    contiguous collection of boundary edge ids.
    """
    if isinstance(region, tuple) and len(region) == 2 and all(isinstance(v, (int, np.integer)) for v in region):
        start, length = _check_interval(code, int(region[0]), int(region[1]))
    else:
        start, length = interval_from_edges(code, region)
    entropy = dimer_entropy(code.state, interval_modes(code, start, length))
    cut, _ = code.tiling.min_cut(code.tiling.interval_edges(start, length))
    correction = cut - round(entropy / LOG2)
    return entropy, cut, correction


def partner_sites(state: DimerState) -> np.ndarray:
    """0-based site of each mode's partner, indexed by 0-based mode."""
    out = np.empty(state.mode_count, dtype=np.int64)
    for a, b in state.dimers:
        out[a - 1] = (b - 1) // 2
        out[b - 1] = (a - 1) // 2
    return out


def interval_dimer_counts(state: DimerState, start: int) -> np.ndarray:
    """Dimers cut by ``[start, start+length)`` for ``length = 0..N``."""
    n = state.n_sites
    ps = partner_sites(state).reshape(n, 2)
    rel_partner = (ps - start) % n
    rel_site = (np.arange(n) - start) % n
    delta = np.sign(rel_partner - rel_site[:, None]).sum(axis=1)
    by_rel = np.zeros(n, dtype=np.int64)
    by_rel[rel_site] = delta
    return np.concatenate(([0], np.cumsum(by_rel)))


def dimer_cut_table(state: DimerState) -> np.ndarray:
    """Entry ``[start, length]``: dimers with one end inside the interval."""
    n = state.n_sites
    return np.stack([interval_dimer_counts(state, s) for s in range(n)])


@dataclass(frozen=True)
class RTReport:
    """Entropy against minimal cut over all proper intervals.

    ``gap`` is ``cut - entropy / log 2``.  An interval is unexplained when
    its gap is positive without residual tiles or vice versa.
    """

    n_intervals: int
    violations: int  # entropy above the cut bound
    corrected: int  # intervals with a positive gap
    unexplained: int
    two_tile_intervals: int  # residual region is two adjacent tiles
    two_tile_mismatch: int  # ... but gap differs from 1
    over_half_residual: int  # gap above half the residual tile count
    gap_histogram: dict

    @property
    def max_correction(self) -> int:
        return max(self.gap_histogram)

    @property
    def multi_gap(self) -> int:
        return sum(v for k, v in self.gap_histogram.items() if k >= 2)


def check_rt(code: HolographicCode, with_residuals: bool = True) -> RTReport:
    """Compare dimer entropy with the minimal cut on every proper interval."""
    cuts = code.tiling.interval_cut_table()
    dimers = dimer_cut_table(code.state)
    m = code.n_boundary
    pairs = adjacent_tile_pairs(code.tiling)
    gaps = np.zeros((m, m + 1), dtype=np.int64)
    for start in range(m):
        ends = (start + np.arange(m + 1)) % m
        if np.any(dimers[start] % 2):
            raise ArithmeticError("odd dimer count across a site-closed cut")
        gaps[start] = cuts[start, ends] - dimers[start] // 2
    inner = gaps[:, 1:m]
    values, counts = np.unique(inner, return_counts=True)
    histogram = {int(v): int(c) for v, c in zip(values, counts)}
    unexplained = two = two_bad = over = 0
    if with_residuals:
        for start, length, mask in residual_masks(code):
            if not 0 < length < m:
                continue
            gap = int(gaps[start, length])
            size = bin(mask).count("1")
            if (gap > 0) != (size > 0):
                unexplained += 1
            if 2 * gap > size and gap > 0:
                over += 1
            if mask in pairs:
                two += 1
                two_bad += gap != 1
    return RTReport(
        n_intervals=int(inner.size),
        violations=int(np.sum(inner < 0)),
        corrected=int(np.sum(inner > 0)),
        unexplained=unexplained,
        two_tile_intervals=two,
        two_tile_mismatch=two_bad,
        over_half_residual=over,
        gap_histogram=histogram,
    )


def entropy_curve(code: HolographicCode, lengths: Sequence[int] | None = None) -> list[tuple[int, float, float, int]]:
    """``(length, mean entropy, stddev, n_intervals)`` over all translates."""
    return state_entropy_curve(code.state, lengths)


def state_entropy_curve(state: DimerState, lengths: Sequence[int] | None = None) -> list[tuple[int, float, float, int]]:
    m = state.n_sites
    if lengths is None:
        lengths = range(1, m // 2 + 1)
    lengths = np.asarray(list(lengths), dtype=np.int64)
    s1 = np.zeros(len(lengths), dtype=np.int64)
    s2 = np.zeros(len(lengths), dtype=np.int64)
    for start in range(m):
        c = interval_dimer_counts(state, start)[lengths]
        s1 += c
        s2 += c * c
    # exact integer moments of the dimer counts, then scale
    mean = s1 / m * HALF_LOG2
    var = np.maximum((s2 * m - s1 * s1) / (m * m), 0) * HALF_LOG2**2
    return [(int(l), float(a), float(math.sqrt(v)), m) for l, a, v in zip(lengths, mean, var)]


def geometric_lengths(n_boundary: int, points: int = 24, smallest: int = 1) -> list[int]:
    top = max(smallest, n_boundary // 2)
    grid = np.geomspace(smallest, top, points)
    return sorted({int(round(v)) for v in grid})


def fit_central_charge(state: DimerState, points: int = 24, smallest: int = 4) -> float:
    """Fit mean interval entropy to ``(c/3) log(length) + const``.

    Lengths below ``smallest`` sit inside a single tile's footprint and
    are dropped from the grid.
    """
    curve = state_entropy_curve(state, geometric_lengths(state.n_sites, points, smallest))
    if len(curve) < 2:
        raise ValueError("too few interval lengths to fit")
    x = np.log([row[0] for row in curve])
    y = np.array([row[1] for row in curve])
    return float(3 * np.polyfit(x, y, 1)[0])


def central_charge_fit(
    code: HolographicCode,
    *,
    min_layers: int = 4,
    points: int = 24,
    smallest: int = 4,
) -> float:
    """Effective central charge from the boundary state's entropy scaling.

    Lengths run over a geometric grid from ``smallest`` to half the
    boundary; each length's entropy is averaged over all translates.
    """
    if code.tiling.spec.layers < min_layers:
        raise ValueError(f"central charge fit needs at least {min_layers} inflation layers")
    return fit_central_charge(code.state, points, smallest)


def central_charge_target(inflation: str) -> float:
    """Asymptotic value for {5,4}: entropy gained per layer over log growth."""
    if inflation == "vertex":
        return 9 * LOG2 / math.log(2 + math.sqrt(3))
    return 6 * LOG2 / math.log((3 + math.sqrt(5)) / 2)


@dataclass(frozen=True)
class Histogram:
    distances: np.ndarray
    counts: np.ndarray
    slope: float | None

    def rows(self) -> list[tuple[int, int]]:
        return [(int(d), int(c)) for d, c in zip(self.distances, self.counts)]


def correlation_histogram(code: HolographicCode) -> Histogram:
    """Dimer counts by endpoint site distance and their log-log slope."""
    return dimer_distance_histogram(code.state, code.tiling)


def dimer_distance_histogram(state: DimerState, tiling: TilingGraph | None = None) -> Histogram:
    """Histogram over distinct nonzero endpoint distances.

    The boundary is quasi-regular, so dimer lengths cluster on a sparse set
    of values.  The slope is a least-squares fit of log(fraction of dimers)
    against log(distance) over the distances that occur; it is refused
    (``None``) below four distinct distances.
    """
    n = state.n_sites
    dist = []
    for a, b in state.dimers:
        i, j = (a - 1) // 2, (b - 1) // 2
        d = tiling.boundary_distance(i, j) if tiling is not None else min(abs(i - j), n - abs(i - j))
        if d > 0:
            dist.append(d)
    values, counts = np.unique(np.array(dist, dtype=np.int64), return_counts=True)
    slope = None
    if len(values) >= 4:
        frac = counts / counts.sum()
        slope = float(np.polyfit(np.log(values), np.log(frac), 1)[0])
    return Histogram(values, counts, slope)


def mutual_information_boundary(code: HolographicCode, a: tuple[int, int], b: tuple[int, int]) -> float:
    """``I(A:B)`` for disjoint intervals, from dimers joining them.

    The value is cross-checked against ``S_A + S_B - S_AB`` from dimer
    counting; the two must agree.
    """
    ma = interval_modes(code, *a)
    mb = interval_modes(code, *b)
    if ma & mb:
        raise ValueError("intervals overlap")
    state = code.state
    joined = sum(1 for x, y in state.dimers if (x in ma and y in mb) or (x in mb and y in ma))
    direct = joined * LOG2
    via = dimer_entropy(state, ma) + dimer_entropy(state, mb) - dimer_entropy(state, ma | mb)
    if abs(direct - via) > 1e-9:
        raise ArithmeticError("mutual information routes disagree")
    return direct


# ----------------------------------------------------------------------
# operators


def majorana_expectation(state: DimerState, monomial: MajoranaMonomial) -> complex:
    """Expectation of a Majorana monomial in a dimer state (Wick, one term)."""
    modes = monomial.modes
    if not modes:
        return monomial.coefficient
    if len(modes) % 2:
        return 0.0
    inside = set(modes)
    partner = state.partner
    if any(partner[m] not in inside for m in modes):
        return 0.0
    index = {m: i for i, m in enumerate(modes)}
    chords = []
    value = 1.0 + 0j
    tails = {a for a, _ in state.dimers}
    for m in modes:
        p = partner[m]
        if m < p:
            chords.append((index[m], index[p]))
            value *= 1j if m in tails else -1j
    pos = {i: i for i in range(len(modes))}
    sign = (-1) ** _count_crossings(chords, pos)
    return monomial.coefficient * sign * value


def pauli_expectation(state: DimerState, pauli: PauliString) -> float:
    """Expectation value of a qubit Pauli string on the boundary sites."""
    value = majorana_expectation(state, jordan_wigner(pauli))
    if abs(value.imag) > 1e-12:
        raise ArithmeticError("Hermitian Pauli string with complex expectation")
    return float(value.real)


def operator_pushing_check(code: HolographicCode, sites: Sequence[int], paulis: Sequence[str]) -> float:
    """``<P_1 P_2 ...>`` with single-site Paulis ``paulis[i]`` on ``sites[i]``."""
    if len(sites) != len(paulis):
        raise ValueError("one Pauli letter per site")
    if len(sites) > MAX_OPERATOR_WEIGHT:
        raise ResourceLimitError(f"operator weight above {MAX_OPERATOR_WEIGHT}")
    n = code.n_boundary
    x = [0] * n
    z = [0] * n
    phase = 0
    for s, letter in zip(sites, paulis):
        if not 0 <= s < n:
            raise IndexError(f"site {s} out of range")
        if x[s] or z[s]:
            raise ValueError(f"site {s} given twice")
        letter = letter.upper()
        if letter == "X":
            x[s] = 1
        elif letter == "Z":
            z[s] = 1
        elif letter == "Y":
            x[s] = z[s] = 1
            phase += 1
        elif letter != "I":
            raise ValueError(f"unknown Pauli letter {letter!r}")
    return pauli_expectation(code.state, PauliString(2, tuple(x), tuple(z), phase % 4))


def dimer_pauli(state: DimerState, dimer: tuple[int, int]) -> PauliString:
    """Spin-picture Pauli string of ``-i g_tail g_head`` for a dimer."""
    p, _ = monomial_pauli(MajoranaMonomial.from_product(list(dimer), phase=3), state.n_sites)
    return p
