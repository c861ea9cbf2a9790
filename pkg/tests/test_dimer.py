from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holocode.dimer import (
    DimerState,
    Frontier,
    MajoranaMonomial,
    ZeroContractionError,
    bell_pair_state,
    contract_dimers,
    dense_expectation,
    dense_parity,
    dense_two_point,
    dimer_entropy,
    five_qubit_basis_dimers,
    jordan_wigner,
    majorana_pauli,
    monomial_pauli,
    nearest_neighbor_state,
    site_modes,
    total_parity,
    two_point,
    wick_four_point,
)
from holocode.stabilizer import PauliString, five_qubit_code
from holocode.svg import dimer_svg
from holocode.tensor import DenseState, entanglement_entropy


@st.composite
def dimer_states(draw, min_sites=1, max_sites=5):
    n = draw(st.integers(min_sites, max_sites))
    modes = draw(st.permutations(list(range(1, 2 * n + 1))))
    return DimerState(2 * n, tuple((modes[2 * i], modes[2 * i + 1]) for i in range(n)))


def overlap(a, b):
    return abs(np.vdot(a, b)) / (np.linalg.norm(a) * np.linalg.norm(b))


# -- Jordan-Wigner -------------------------------------------------------


def test_jordan_wigner_examples():
    assert jordan_wigner(PauliString.from_label("XIIII")) == MajoranaMonomial((1,))
    assert jordan_wigner(PauliString.from_label("YIIII")) == MajoranaMonomial((2,))
    s1 = jordan_wigner(PauliString.from_label("XZZXI"))
    assert s1.modes == (2, 7) and s1.coefficient == -1j


def test_jordan_wigner_rejects_qudits():
    with pytest.raises(ValueError):
        jordan_wigner(PauliString(3, (1,), (0,)))


@pytest.mark.parametrize("n", [1, 2, 4])
def test_majorana_operators_anticommute(n):
    mats = [majorana_pauli(m, n).to_matrix() for m in range(1, 2 * n + 1)]
    for j, a in enumerate(mats):
        for k, b in enumerate(mats):
            assert np.allclose(a @ b + b @ a, 2 * (j == k) * np.eye(2**n))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from("IXYZ"), min_size=3, max_size=3), st.lists(st.sampled_from("IXYZ"), min_size=3, max_size=3))
def test_jordan_wigner_is_multiplicative(a, b):
    pa, pb = PauliString.from_label("".join(a)), PauliString.from_label("".join(b))
    lhs = jordan_wigner(pa * pb)
    rhs = jordan_wigner(pa) * jordan_wigner(pb)
    assert lhs == rhs
    p, scale = monomial_pauli(lhs, 3)
    assert np.allclose(scale * p.to_matrix(), (pa * pb).to_matrix())


def test_monomial_canonical_sign():
    m = MajoranaMonomial.from_product([3, 1, 2])
    assert m.modes == (1, 2, 3) and m.phase == 0  # two transpositions
    m = MajoranaMonomial.from_product([2, 1])
    assert m.modes == (1, 2) and m.phase == 2
    assert MajoranaMonomial.from_product([4, 4]).modes == ()


# -- basis states --------------------------------------------------------


@pytest.mark.parametrize("bit", [0, 1])
def test_five_qubit_basis_dimers_match_code_space(bit):
    state = five_qubit_basis_dimers(bit)
    assert state.support() == {frozenset(p) for p in [(2, 7), (4, 9), (1, 6), (3, 8), (5, 10)]}
    assert state.total_parity() == (1 if bit == 0 else -1)
    basis = five_qubit_code().code_space_basis()
    assert overlap(basis[:, bit], state.to_dense()) > 1 - 1e-12


def test_five_qubit_stabilizers_have_eigenvalue_one():
    code = five_qubit_code()
    vec = five_qubit_basis_dimers(0).to_dense()
    for g in code.generators:
        assert np.allclose(g.apply(vec), vec)


def test_total_parity_examples():
    assert total_parity(DimerState(2, ((1, 2),))) == 1
    assert total_parity(DimerState(4, ((1, 3), (2, 4)))) == -1
    assert total_parity(DimerState(4, ((2, 1), (3, 4)))) == -1


def test_invalid_matching():
    with pytest.raises(ValueError):
        DimerState(4, ((1, 2), (2, 3)))
    with pytest.raises(ValueError):
        DimerState(3, ((1, 2),))


@settings(max_examples=80, deadline=None)
@given(dimer_states())
def test_parity_formula_matches_dense(state):
    assert dense_parity(state.to_dense(), state.n_sites) == pytest.approx(state.total_parity())


@settings(max_examples=60, deadline=None)
@given(dimer_states())
def test_dimers_are_stabilizers(state):
    vec = state.to_dense()
    for s in state.stabilizers():
        assert np.allclose(s.apply(vec), vec)


# -- correlations --------------------------------------------------------


def test_two_point_examples():
    G = two_point(five_qubit_basis_dimers(0))
    assert G[1, 6] == -1 and G[6, 1] == 1
    assert G[0, 1] == 0
    assert np.array_equal(G, -G.T)


@settings(max_examples=60, deadline=None)
@given(dimer_states())
def test_two_point_matches_dense(state):
    dense = dense_two_point(state.to_dense(), state.n_sites)
    assert np.array_equal(np.round(dense).astype(int), state.two_point())
    assert np.allclose(dense, state.two_point(), atol=1e-12)


def test_wick_simple_cases():
    state = DimerState(4, ((1, 2), (3, 4)))
    G = state.two_point()
    assert wick_four_point(G, 1, 2, 3, 4) == pytest.approx((1j) * (1j))
    assert wick_four_point(G, 1, 3, 2, 4) == pytest.approx(-wick_four_point(G, 1, 2, 3, 4))
    with pytest.raises(ValueError):
        wick_four_point(G, 1, 1, 2, 3)


@pytest.mark.parametrize("bit", [0, 1])
def test_wick_matches_dense_exhaustively(bit):
    state = five_qubit_basis_dimers(bit)
    vec = state.to_dense()
    G = state.two_point()
    for quad in itertools.permutations(range(1, 11), 4):
        if quad[0] > quad[1]:
            continue
        mono = MajoranaMonomial.from_product(list(quad))
        dense = dense_expectation(vec, mono, 5)
        assert wick_four_point(G, *quad) == pytest.approx(dense, abs=1e-12)


# -- entropy -------------------------------------------------------------


def test_dimer_entropy_examples():
    state = five_qubit_basis_dimers(0)
    assert dimer_entropy(state, range(1, 11)) == 0
    assert dimer_entropy(state, {1, 2}) == pytest.approx(math.log(2))
    assert dimer_entropy(state, {1, 2, 3, 4}) == dimer_entropy(state, range(5, 11))
    with pytest.raises(ValueError):
        dimer_entropy(state, {1})


@settings(max_examples=60, deadline=None)
@given(dimer_states(min_sites=2), st.data())
def test_entropy_matches_dense_on_intervals(state, data):
    n = state.n_sites
    start = data.draw(st.integers(0, n - 1))
    length = data.draw(st.integers(1, n - 1))
    sites = [(start + t) % n for t in range(length)]
    dense = entanglement_entropy(DenseState(state.to_dense(), (2,) * n), sites)
    assert dimer_entropy(state, site_modes(sites)) == pytest.approx(dense, abs=1e-10)


# -- contraction engine ----------------------------------------------------


def _moved(vec, n, k):
    return np.moveaxis(vec.reshape((2,) * n), list(range(k)), list(range(n - k, n))).reshape(-1)


@settings(max_examples=60, deadline=None)
@given(dimer_states(), st.data())
def test_rotation_matches_dense(state, data):
    n = state.n_sites
    k = data.draw(st.integers(0, n))
    f = Frontier.from_state(state, list(range(n)))
    f.rotate(k)
    assert overlap(f.to_state().to_dense(), _moved(state.to_dense(), n, k)) > 1 - 1e-10


@settings(max_examples=60, deadline=None)
@given(dimer_states(max_sites=4), dimer_states(max_sites=3), st.data())
def test_insertion_matches_dense(a, b, data):
    n, m = a.n_sites, b.n_sites
    pos = data.draw(st.integers(0, n))
    f = Frontier.from_state(a, [("a", i) for i in range(n)])
    f.insert(pos, Frontier.from_state(b, [("b", i) for i in range(m)]))
    full = np.multiply.outer(a.to_dense().reshape((2,) * n), b.to_dense().reshape((2,) * m))
    order = list(range(pos)) + list(range(n, n + m)) + list(range(pos, n))
    assert overlap(f.to_state().to_dense(), np.transpose(full, order).reshape(-1)) > 1 - 1e-10
    assert f.parity == a.total_parity() * b.total_parity()


@settings(max_examples=150, deadline=None)
@given(dimer_states(min_sites=3, max_sites=6), st.data())
def test_adjacent_contraction_matches_dense(state, data):
    n = state.n_sites
    q = data.draw(st.integers(0, n - 2))
    phi = np.eye(2)
    dense = np.tensordot(state.to_dense().reshape((2,) * n), phi, axes=([q, q + 1], [0, 1])).reshape(-1)
    f = Frontier.from_state(state, list(range(n)))
    try:
        f.contract_adjacent(q)
    except ZeroContractionError:
        assert np.linalg.norm(dense) < 1e-10
        return
    assert np.linalg.norm(dense) > 1e-6
    result = f.to_state()
    assert overlap(result.to_dense(), dense) > 1 - 1e-10
    assert result.total_parity() == state.total_parity() == f.parity


def test_bell_pair_wire_is_identity():
    state = five_qubit_basis_dimers(1)
    out = contract_dimers(state, bell_pair_state(), [(4, 0)])
    # the wire's free end replaces the contracted site
    assert out.n_sites == 5
    assert overlap(out.to_dense(), state.to_dense()) > 1 - 1e-12


def test_two_pentagons_match_dense():
    basis = five_qubit_code().code_space_basis()
    for b0, b1 in itertools.product((0, 1), repeat=2):
        a, b = five_qubit_basis_dimers(b0), five_qubit_basis_dimers(b1)
        out = contract_dimers(a, b, [(4, 0)])
        assert out.mode_count == 16
        # dense: a's sites 0..3, then b's sites 1..4
        dense = np.tensordot(basis[:, b0].reshape((2,) * 5), basis[:, b1].reshape((2,) * 5), axes=([4], [0]))
        assert overlap(out.to_dense(), dense.reshape(-1)) > 1 - 1e-10
        assert out.total_parity() == a.total_parity() * b.total_parity()


def test_full_inner_product():
    a = five_qubit_basis_dimers(0)
    out = contract_dimers(a, a, [(i, 4 - i) for i in range(5)])
    assert out.mode_count == 0
    vec = a.to_dense().reshape((2,) * 5)
    value = np.tensordot(vec, vec, axes=(list(range(5)), list(range(4, -1, -1))))
    assert abs(value) == pytest.approx(1.0)


def test_vanishing_contraction_raises():
    with pytest.raises(ZeroContractionError):
        contract_dimers(five_qubit_basis_dimers(0), five_qubit_basis_dimers(1), [(i, 4 - i) for i in range(5)])


def test_contraction_input_errors():
    a = five_qubit_basis_dimers(0)
    with pytest.raises(ValueError):
        contract_dimers(a, a, [(0, 0), (0, 1)])
    with pytest.raises(ValueError):
        contract_dimers(a, a, [(0, 4), (2, 3)])


def test_json_and_svg_export():
    state = five_qubit_basis_dimers(1)
    assert DimerState.from_json(state.to_json()) == state
    svg = dimer_svg(state)
    assert svg.count("<path") == 5
    assert "#1f77b4" in svg and "#ff7f0e" in svg


def test_nearest_neighbor_state():
    state = nearest_neighbor_state(4)
    assert dimer_entropy(state, site_modes([0, 1])) == 0
    assert state.total_parity() == 1
