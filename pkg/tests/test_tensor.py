from __future__ import annotations

import math

import numpy as np
import pytest

from holocode.errors import ResourceLimitError
from holocode.stabilizer import five_qubit_code, three_qutrit_code
from holocode.tensor import (
    DenseState,
    DenseTensor,
    bell_pair_tensor,
    contract,
    encoding_tensor,
    entanglement_entropy,
    failing_bipartitions,
    is_block_perfect,
    is_perfect,
    isometry_deviation,
    mutual_information,
    reduced_density_matrix,
)


def test_five_qubit_tensor_is_perfect():
    t = encoding_tensor(five_qubit_code())
    assert t.shape == (2,) * 6
    assert is_perfect(t)
    assert is_block_perfect(t)


def test_three_qutrit_tensor_is_perfect():
    assert is_perfect(encoding_tensor(three_qutrit_code()))


def test_bell_pairs_are_not_perfect():
    t = bell_pair_tensor([(0, 1), (2, 3)], 4)
    assert not is_perfect(t)
    assert not is_block_perfect(t)
    # only the split separating the two pairs' partners from each other is fine
    assert failing_bipartitions(t) == [(0, 1), (2, 3)]
    assert isometry_deviation(t, [0, 2]) < 1e-12
    assert isometry_deviation(t, [1, 2]) < 1e-12


def test_isometry_scale_invariance():
    t = encoding_tensor(five_qubit_code())
    scaled = DenseTensor(7.5 * t.amplitudes)
    assert isometry_deviation(scaled, [0, 1, 2]) < 1e-12


def test_contract_identity_wire():
    rng = np.random.default_rng(0)
    a = DenseTensor(rng.normal(size=(2, 3, 2)))
    wire = DenseTensor(np.eye(2))
    out = contract(a, wire, [(2, 0)])
    assert np.allclose(out.amplitudes, a.amplitudes)
    with pytest.raises(ValueError):
        contract(a, wire, [(1, 0)])


def test_size_guard():
    with pytest.raises(ResourceLimitError):
        DenseTensor(np.zeros((2,) * 25))


def test_entropies():
    bell = DenseState(np.array([1, 0, 0, 1]) / math.sqrt(2), (2, 2))
    assert entanglement_entropy(bell, [0]) == pytest.approx(math.log(2))
    assert mutual_information(bell, [0], [1]) == pytest.approx(2 * math.log(2))
    rho = reduced_density_matrix(bell, [0])
    assert np.allclose(rho, np.eye(2) / 2)
    with pytest.raises(ValueError):
        mutual_information(bell, [0], [0, 1])


def test_dump_round_trip():
    t = DenseTensor((np.arange(8) + 1j).reshape(2, 2, 2))
    back = DenseTensor.load(t.dump())
    assert np.allclose(back.amplitudes, t.amplitudes)


def test_state_normalization_check():
    with pytest.raises(ValueError):
        DenseState(np.ones(4), (2, 2))
    assert DenseState(np.ones(4), (2, 2), normalize=True).n_sites == 2
