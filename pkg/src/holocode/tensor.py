"""Dense tensors and states: the brute-force reference for everything else.

Amplitude arrays are plain numpy arrays in row-major leg order.  Sizes are
capped at ``MAX_AMPLITUDES``; this engine exists to check the fast paths on
small networks, not to scale.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from holocode.errors import ResourceLimitError

MAX_AMPLITUDES = 2**24
ISOMETRY_TOL = 1e-10
EIGEN_CUTOFF = 1e-14


def _guard(size: int) -> None:
    if size > MAX_AMPLITUDES:
        raise ResourceLimitError(f"dense tensor of {size} amplitudes exceeds {MAX_AMPLITUDES}")


@dataclass(frozen=True)
class DenseTensor:
    amplitudes: np.ndarray
    leg_labels: tuple | None = None

    def __post_init__(self):
        arr = np.asarray(self.amplitudes, dtype=complex)
        _guard(arr.size)
        if not np.all(np.isfinite(arr)):
            raise ValueError("tensor amplitudes must be finite")
        object.__setattr__(self, "amplitudes", arr)
        if self.leg_labels is not None and len(self.leg_labels) != arr.ndim:
            raise ValueError("one label per leg required")

    @property
    def shape(self) -> tuple[int, ...]:
        return self.amplitudes.shape

    @property
    def n_legs(self) -> int:
        return self.amplitudes.ndim

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def transpose(self, order: Sequence[int]) -> "DenseTensor":
        labels = None if self.leg_labels is None else tuple(self.leg_labels[i] for i in order)
        return DenseTensor(np.transpose(self.amplitudes, order), labels)

    def dump(self) -> bytes:
        """Flat debug dump: ndim, shape (uint32) then complex64 pairs."""
        header = np.array([self.n_legs, *self.shape], dtype=np.uint32).tobytes()
        return header + self.amplitudes.astype(np.complex64).tobytes()

    @classmethod
    def load(cls, blob: bytes) -> "DenseTensor":
        ndim = int(np.frombuffer(blob[:4], dtype=np.uint32)[0])
        shape = tuple(int(s) for s in np.frombuffer(blob[4 : 4 + 4 * ndim], dtype=np.uint32))
        data = np.frombuffer(blob[4 + 4 * ndim :], dtype=np.complex64)
        return cls(data.reshape(shape).astype(complex))


class DenseState(DenseTensor):
    """Normalized state vector on sites with the given local dimensions."""

    def __init__(self, amplitudes, dims: Sequence[int] | None = None, *, normalize: bool = False):
        arr = np.asarray(amplitudes, dtype=complex)
        if dims is not None:
            arr = arr.reshape(tuple(dims))
        if normalize:
            arr = arr / np.linalg.norm(arr)
        super().__init__(arr, None)
        if abs(np.linalg.norm(arr) - 1) > 1e-12:
            raise ValueError("state is not normalized")

    @property
    def dims(self) -> tuple[int, ...]:
        return self.shape

    @property
    def n_sites(self) -> int:
        return self.n_legs

    def vector(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)


def contract(a: DenseTensor, b: DenseTensor, pairs: Sequence[tuple[int, int]]) -> DenseTensor:
    """Sum over paired legs; result legs are a's free legs then b's."""
    axes_a = [p[0] for p in pairs]
    axes_b = [p[1] for p in pairs]
    for i, j in pairs:
        if a.shape[i] != b.shape[j]:
            raise ValueError(f"leg dimension mismatch: a[{i}]={a.shape[i]} vs b[{j}]={b.shape[j]}")
    free_a = [s for i, s in enumerate(a.shape) if i not in axes_a]
    free_b = [s for j, s in enumerate(b.shape) if j not in axes_b]
    _guard(int(np.prod(free_a + free_b, dtype=np.int64)))
    out = np.tensordot(a.amplitudes, b.amplitudes, axes=(axes_a, axes_b))
    labels = None
    if a.leg_labels is not None and b.leg_labels is not None:
        labels = tuple(l for i, l in enumerate(a.leg_labels) if i not in axes_a) + tuple(
            l for j, l in enumerate(b.leg_labels) if j not in axes_b
        )
    return DenseTensor(out, labels)


def _check_state(state: DenseTensor) -> np.ndarray:
    arr = state.amplitudes
    if abs(np.linalg.norm(arr) - 1) > 1e-10:
        raise ValueError("entropy requires a normalized state")
    return arr


def schmidt_values(state: DenseTensor, region: Iterable[int]) -> np.ndarray:
    arr = _check_state(state)
    region = sorted(set(region))
    if any(not 0 <= r < arr.ndim for r in region):
        raise IndexError("region site out of range")
    rest = [i for i in range(arr.ndim) if i not in region]
    rows = int(np.prod([arr.shape[i] for i in region], dtype=np.int64))
    mat = np.transpose(arr, region + rest).reshape(rows, -1)
    return np.linalg.svd(mat, compute_uv=False)


def entanglement_entropy(state: DenseTensor, region: Iterable[int]) -> float:
    """Von Neumann entropy (nats) of the reduced state on ``region``."""
    p = schmidt_values(state, region) ** 2
    p = p[p > EIGEN_CUTOFF]
    return float(-np.sum(p * np.log(p)))


def mutual_information(state: DenseTensor, a: Iterable[int], b: Iterable[int]) -> float:
    a, b = set(a), set(b)
    if a & b:
        raise ValueError("regions overlap")
    return (
        entanglement_entropy(state, a)
        + entanglement_entropy(state, b)
        - entanglement_entropy(state, a | b)
    )


def reduced_density_matrix(state: DenseTensor, region: Iterable[int]) -> np.ndarray:
    arr = _check_state(state)
    region = sorted(set(region))
    rest = [i for i in range(arr.ndim) if i not in region]
    rows = int(np.prod([arr.shape[i] for i in region], dtype=np.int64))
    mat = np.transpose(arr, region + rest).reshape(rows, -1)
    return mat @ mat.conj().T


def encoding_tensor(code) -> DenseTensor:
    """Isometry of a stabilizer code as a tensor: physical legs, then logical."""
    basis = code.code_space_basis()
    d = code.dimension
    gram = basis.conj().T @ basis
    if not np.allclose(gram, np.eye(basis.shape[1]), atol=1e-10):
        raise ValueError("degenerate code space: logical basis is not orthonormal")
    return DenseTensor(basis.reshape((d,) * (code.n + code.k)))


def isometry_deviation(t: DenseTensor, inputs: Sequence[int]) -> float:
    """Relative Frobenius distance of ``M^† M / c`` from the identity.

    ``M`` maps the ``inputs`` legs to the remaining legs and ``c`` is the
    best scalar, so perfection is insensitive to normalization.
    """
    arr = t.amplitudes
    inputs = list(inputs)
    outputs = [i for i in range(arr.ndim) if i not in inputs]
    cols = int(np.prod([arr.shape[i] for i in inputs], dtype=np.int64))
    M = np.transpose(arr, outputs + inputs).reshape(-1, cols)
    gram = M.conj().T @ M
    c = np.trace(gram).real / cols
    if c <= 0:
        return float("inf")
    eye = np.eye(cols)
    return float(np.linalg.norm(gram / c - eye) / np.linalg.norm(eye))


def _bipartitions(n_legs: int, cyclic: bool):
    if cyclic:
        seen = set()
        for start in range(n_legs):
            for length in range(0, n_legs + 1):
                block = frozenset((start + j) % n_legs for j in range(length))
                if block not in seen:
                    seen.add(block)
                    yield block
    else:
        for r in range(n_legs + 1):
            for block in itertools.combinations(range(n_legs), r):
                yield frozenset(block)


def _is_isometric_everywhere(t: DenseTensor, cyclic: bool, tol: float) -> bool:
    n = t.n_legs
    if len(set(t.shape)) > 1:
        raise ValueError("perfection checks need equal leg dimensions")
    for block in _bipartitions(n, cyclic):
        if not block or 2 * len(block) > n:
            continue
        if isometry_deviation(t, sorted(block)) > tol:
            return False
    return True


def failing_bipartitions(t: DenseTensor, cyclic: bool = False, tol: float = ISOMETRY_TOL):
    """Input leg sets (``|inputs| <= |outputs|``) whose map is not isometric."""
    n = t.n_legs
    return [
        tuple(sorted(b))
        for b in _bipartitions(n, cyclic)
        if b and 2 * len(b) <= n and isometry_deviation(t, sorted(b)) > tol
    ]


def is_perfect(t: DenseTensor, tol: float = ISOMETRY_TOL) -> bool:
    """Isometric across every bipartition with no more inputs than outputs."""
    return _is_isometric_everywhere(t, cyclic=False, tol=tol)


def is_block_perfect(t: DenseTensor, tol: float = ISOMETRY_TOL) -> bool:
    """Isometric across every bipartition into cyclically contiguous blocks."""
    return _is_isometric_everywhere(t, cyclic=True, tol=tol)


def bell_pair_tensor(pairs: Sequence[tuple[int, int]], n_legs: int, d: int = 2) -> DenseTensor:
    """Product of unnormalized maximally entangled pairs on the given legs."""
    arr = np.zeros((d,) * n_legs, dtype=complex)
    for values in itertools.product(range(d), repeat=len(pairs)):
        idx = [0] * n_legs
        for (i, j), v in zip(pairs, values):
            idx[i] = idx[j] = v
        arr[tuple(idx)] = 1.0
    return DenseTensor(arr)
