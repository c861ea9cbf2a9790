from __future__ import annotations

import itertools
import math
import random

import numpy as np
import pytest

from conftest import code, tiling
from holocode.dimer import five_qubit_basis_dimers, nearest_neighbor_state
from holocode.errors import GeometryError, ResourceLimitError
from holocode.holocode import (
    HolographicCode,
    boundary_state,
    central_charge_fit,
    check_rt,
    contract_patch,
    correlation_histogram,
    dense_patch_state,
    dimer_cut_table,
    dimer_pauli,
    fit_central_charge,
    greedy_wedge,
    interval_dimer_counts,
    mutual_information_boundary,
    operator_pushing_check,
    parse_input,
    pathological_intervals,
    pauli_expectation,
    residual_table,
    rt_entropy,
)
from holocode.stabilizer import PauliString

LOG2 = math.log(2)


def overlap(a, b):
    return abs(np.vdot(a, b)) / (np.linalg.norm(a) * np.linalg.norm(b))


def test_parse_input():
    assert parse_input("all-zero", 3) == (0, 0, 0)
    assert parse_input("random:5", 8) == parse_input("random:5", 8)
    assert parse_input([1, 0], 2) == (1, 0)
    for bad in ("random:x", "sometimes", [0, 2]):
        with pytest.raises(ValueError):
            parse_input(bad, 2)


def test_mode_map_follows_boundary_order():
    c = code("vertex", 1)
    mm = c.mode_map
    assert mm[c.tiling.boundary_order[0]] == (1, 2)
    assert sorted(m for pair in mm.values() for m in pair) == list(range(1, 51))


@pytest.mark.parametrize("bit", [0, 1])
def test_single_tile_state(bit):
    c = HolographicCode.build(tiling(5, 4, "vertex", 0), [bit])
    assert boundary_state(c) == five_qubit_basis_dimers(bit)


def test_two_tiles_match_dense():
    g = tiling(5, 4, "vertex", 1)
    a = 0
    b = next(t for t in g.edges[g.tiles[0].edges[0]].tiles if t != 0)
    edges = [g.tiles[a].edges, g.tiles[b].edges]
    for bits in itertools.product((0, 1), repeat=2):
        front = contract_patch(edges, bits)
        state = front.to_state()
        assert state.mode_count == 16
        assert overlap(state.to_dense(), dense_patch_state(edges, bits, front.sites)) > 1 - 1e-10


def test_boundary_state_requires_pentagons():
    c = HolographicCode.build(tiling(4, 5, "vertex", 1))
    with pytest.raises(GeometryError):
        boundary_state(c)


def test_boundary_state_resource_guard(monkeypatch):
    monkeypatch.setenv("HOLOCODE_MAX_BOUNDARY", "20")
    with pytest.raises(ResourceLimitError):
        boundary_state(HolographicCode.build(tiling(5, 4, "vertex", 1)))


@pytest.mark.parametrize("mode", ["vertex", "edge"])
def test_input_changes_signs_only(mode):
    base = code(mode, 2).state
    rng = np.random.default_rng(1)
    for _ in range(5):
        bits = rng.integers(0, 2, code(mode, 2).tiling.n_tiles)
        other = HolographicCode.build(code(mode, 2).tiling, bits).state
        assert other.support() == base.support()
        assert np.array_equal(np.abs(other.two_point()), np.abs(base.two_point()))
    flipped = HolographicCode.build(code(mode, 2).tiling, [1] + [0] * (code(mode, 2).tiling.n_tiles - 1)).state
    assert flipped != base and flipped.total_parity() == -base.total_parity()


def test_dimers_join_distinct_sites():
    state = code("vertex", 2).state
    assert all((a - 1) // 2 != (b - 1) // 2 for a, b in state.dimers)


# -- greedy wedge ----------------------------------------------------------


def test_greedy_trivial_regions():
    c = code("vertex", 2)
    empty = greedy_wedge(c, [])
    assert not empty.reconstructed_tiles
    full = greedy_wedge(c, c.tiling.boundary_order)
    assert full.reconstructed_tiles == frozenset(range(c.tiling.n_tiles))
    assert full.is_isometry
    with pytest.raises(ValueError):
        greedy_wedge(c, [c.tiling.interior_edges[0]])


def test_pathological_region_has_two_adjacent_residual_tiles():
    c = code("vertex", 1)
    found = pathological_intervals(c)
    assert found
    start, length, tiles = found[0]
    wedge = greedy_wedge(c, c.tiling.interval_edges(start, length))
    assert wedge.residual_tiles == tiles and len(tiles) == 2
    a, b = sorted(tiles)
    assert any(set(e.tiles) == {a, b} for e in c.tiling.edges)
    # each residual tile presents exactly two known edges from either side
    known = wedge.recovered_interior_edges | set(c.tiling.interval_edges(start, length))
    for t in tiles:
        assert sum(e in known for e in c.tiling.tiles[t].edges) == 2
    assert not wedge.is_isometry
    assert not (wedge.reconstructed_tiles & wedge.residual_tiles)


def test_residual_table_matches_single_queries():
    c = code("edge", 2)
    table = residual_table(c)
    m = c.n_boundary
    rng = random.Random(2)
    for _ in range(40):
        s, l = rng.randrange(m), rng.randrange(1, m)
        assert table[s, l] == len(greedy_wedge(c, c.tiling.interval_edges(s, l)).residual_tiles)


# -- entropies ---------------------------------------------------------------


def test_rt_entropy_examples():
    c = code("vertex", 1)
    start, length, _ = pathological_intervals(c)[0]
    entropy, cut, correction = rt_entropy(c, (start, length))
    assert correction == 1 and entropy == pytest.approx((cut - 1) * LOG2)
    entropy, cut, correction = rt_entropy(c, (0, 1))
    assert (entropy, cut, correction) == (pytest.approx(LOG2), 1, 0)
    assert rt_entropy(c, (0, c.n_boundary))[0] == 0
    edges = c.tiling.interval_edges(3, 6)
    assert rt_entropy(c, edges) == rt_entropy(c, (3, 6))
    with pytest.raises(ValueError):
        rt_entropy(c, [c.tiling.boundary_order[0], c.tiling.boundary_order[2]])


@pytest.mark.parametrize("mode", ["vertex", "edge"])
def test_rt_structure_on_small_tilings(mode):
    report = check_rt(code(mode, 2))
    assert report.violations == 0
    assert report.unexplained == 0
    assert report.two_tile_mismatch == 0
    assert report.over_half_residual == 0


def test_complement_symmetry():
    c = code("vertex", 2)
    table = dimer_cut_table(c.state)
    m = c.n_boundary
    for s in range(0, m, 7):
        for l in range(1, m):
            assert table[s, l] == table[(s + l) % m, m - l]


def test_interval_counts_match_direct_counting():
    c = code("edge", 2)
    state = c.state
    counts = interval_dimer_counts(state, 11)
    m = c.n_boundary
    for l in (1, 5, 20, 54):
        sites = {(11 + t) % m for t in range(l)}
        direct = sum(((a - 1) // 2 in sites) != ((b - 1) // 2 in sites) for a, b in state.dimers)
        assert counts[l] == direct


def test_histogram_guard_and_shape():
    single = correlation_histogram(HolographicCode.build(tiling(5, 4, "vertex", 0)))
    assert single.slope is None
    hist = correlation_histogram(code("vertex", 3))
    assert hist.slope is not None and -1.3 < hist.slope < -0.6
    assert hist.counts.sum() == 355  # no same-site dimers


def test_central_charge_guards_and_control():
    with pytest.raises(ValueError):
        central_charge_fit(code("vertex", 2))
    assert abs(fit_central_charge(nearest_neighbor_state(400))) < 1e-9


def test_mutual_information():
    c = code("vertex", 3)
    m = c.n_boundary
    half = m // 2
    a, b = (0, half), (half, m - half)
    s_a = rt_entropy(c, a)[0]
    assert mutual_information_boundary(c, a, b) == pytest.approx(2 * s_a)
    with pytest.raises(ValueError):
        mutual_information_boundary(c, (0, 5), (3, 5))
    # some far-separated short intervals share no dimer
    zeros = [mutual_information_boundary(c, (s, 2), ((s + m // 2) % m, 2)) for s in range(m)]
    assert min(zeros) == 0
    seps = [0, 2, 8, 32, 128]
    means = [np.mean([mutual_information_boundary(c, (s, 8), ((s + 8 + d) % m, 8)) for s in range(m)]) for d in seps]
    assert np.polyfit(np.log1p(seps), means, 1)[0] < 0
    assert means[0] > means[-1]


# -- operators -----------------------------------------------------------------


def test_single_pauli_pairs_vanish():
    c = code("vertex", 2)
    rng = random.Random(0)
    m = c.n_boundary
    for _ in range(200):
        j, k = rng.sample(range(m), 2)
        for pj, pk in itertools.product("XYZ", repeat=2):
            assert operator_pushing_check(c, [j, k], [pj, pk]) == 0


def test_dimer_operators_are_stabilizers():
    c = code("vertex", 2)
    state = c.state
    for dimer in state.dimers[:20]:
        assert pauli_expectation(state, dimer_pauli(state, dimer)) == pytest.approx(1.0)
    assert operator_pushing_check(c, [], []) == 1


def test_pauli_expectation_matches_dense():
    rng = random.Random(4)
    for bit in (0, 1):
        state = five_qubit_basis_dimers(bit)
        vec = state.to_dense()
        for _ in range(60):
            label = "".join(rng.choice("IXYZ") for _ in range(5))
            p = PauliString.from_label(label)
            dense = np.vdot(vec, p.apply(vec)).real
            assert pauli_expectation(state, p) == pytest.approx(dense, abs=1e-12)


def test_operator_input_errors():
    c = code("vertex", 1)
    with pytest.raises(ValueError):
        operator_pushing_check(c, [0, 0], ["X", "Z"])
    with pytest.raises(ValueError):
        operator_pushing_check(c, [0], ["Q"])
    with pytest.raises(IndexError):
        operator_pushing_check(c, [99], ["X"])
