"""Qudit Pauli algebra and small stabilizer codes.

A Pauli string on ``n`` qudits of prime dimension ``d`` is stored as

    omega**phase * prod_j X_j**x_j Z_j**z_j

with ``Z X = w X Z`` (``w = -1`` for qubits, ``w = exp(2 pi i / 3)`` for
qutrits).  For qubits ``omega = i`` and ``phase`` lives mod 4; otherwise
``omega = w`` and ``phase`` lives mod ``d``.  All group arithmetic is exact.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from holocode.errors import CodeSpaceError, SchemaError, SearchLimitError
from holocode.tensor import DenseState, entanglement_entropy

MAX_DISTANCE_QUBITS = 12

_LETTERS = {"I": (0, 0, 0), "X": (1, 0, 0), "Z": (0, 1, 0), "Y": (1, 1, 1)}


def _phase_modulus(d: int) -> int:
    return 4 if d == 2 else d


def _root(d: int) -> complex:
    return 1j if d == 2 else np.exp(2j * np.pi / d)


@dataclass(frozen=True)
class PauliString:
    dimension: int
    x: tuple[int, ...]
    z: tuple[int, ...]
    phase: int = 0

    def __post_init__(self):
        d = self.dimension
        if d not in (2, 3, 5, 7):
            raise ValueError(f"unsupported qudit dimension {d}")
        if len(self.x) != len(self.z):
            raise ValueError("x and z exponent vectors differ in length")
        object.__setattr__(self, "x", tuple(int(a) % d for a in self.x))
        object.__setattr__(self, "z", tuple(int(a) % d for a in self.z))
        object.__setattr__(self, "phase", int(self.phase) % _phase_modulus(d))

    @classmethod
    def from_label(cls, label: str, dimension: int = 2) -> "PauliString":
        """Parse ``"XZZXI"`` (qubits) or exponent tokens like ``"X2Z1"`` per site.

        For qubits, ``Y`` means the Hermitian ``i X Z``.  An optional leading
        ``+``, ``-``, ``i`` or ``-i`` sets the phase.
        """
        label = label.strip()
        phase = 0
        if dimension == 2:
            for prefix, value in (("-i", 3), ("+i", 1), ("i", 1), ("-", 2), ("+", 0)):
                if label.startswith(prefix):
                    phase = value
                    label = label[len(prefix):]
                    break
            x, z = [], []
            for ch in label:
                if ch not in _LETTERS:
                    raise ValueError(f"bad Pauli letter {ch!r} in {label!r}")
                a, b, p = _LETTERS[ch]
                x.append(a)
                z.append(b)
                phase += p
            return cls(2, tuple(x), tuple(z), phase)
        # qudits: sites separated by whitespace, each like I, X, Z2, X1Z2
        x, z = [], []
        for token in label.replace(",", " ").split():
            xa = za = 0
            rest = token
            if rest == "I":
                rest = ""
            while rest:
                letter, rest = rest[0], rest[1:]
                digits = ""
                while rest and rest[0].isdigit():
                    digits, rest = digits + rest[0], rest[1:]
                power = int(digits) if digits else 1
                if letter == "X":
                    xa += power
                elif letter == "Z":
                    za += power
                else:
                    raise ValueError(f"bad qudit token {token!r}")
            x.append(xa)
            z.append(za)
        return cls(dimension, tuple(x), tuple(z), 0)

    @classmethod
    def identity(cls, n: int, dimension: int = 2) -> "PauliString":
        return cls(dimension, (0,) * n, (0,) * n)

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def weight(self) -> int:
        return sum(1 for a, b in zip(self.x, self.z) if a or b)

    @property
    def is_identity(self) -> bool:
        return self.weight == 0

    def label(self) -> str:
        if self.dimension == 2:
            letters = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
            ph = (self.phase - sum(a & b for a, b in zip(self.x, self.z))) % 4
            prefix = ["", "i", "-", "-i"][ph]
            return prefix + "".join(letters[a, b] for a, b in zip(self.x, self.z))
        tokens = []
        for a, b in zip(self.x, self.z):
            t = (f"X{a}" if a else "") + (f"Z{b}" if b else "")
            tokens.append(t or "I")
        prefix = f"w^{self.phase} " if self.phase else ""
        return prefix + " ".join(tokens)

    def __repr__(self):
        return f"PauliString({self.label()!r})"

    def _check(self, other: "PauliString"):
        if self.dimension != other.dimension or self.n != other.n:
            raise ValueError("Pauli strings differ in dimension or length")

    def __mul__(self, other: "PauliString") -> "PauliString":
        self._check(other)
        d = self.dimension
        # (X^a Z^b)(X^c Z^e) = w^(b c) X^(a+c) Z^(b+e)
        cross = sum(b * c for b, c in zip(self.z, other.x))
        step = 2 if d == 2 else 1
        return PauliString(
            d,
            tuple(a + c for a, c in zip(self.x, other.x)),
            tuple(b + e for b, e in zip(self.z, other.z)),
            self.phase + other.phase + step * cross,
        )

    def __pow__(self, power: int) -> "PauliString":
        out = PauliString.identity(self.n, self.dimension)
        for _ in range(power % (2 * self.dimension * 2)):
            out = out * self
        return out

    def scaled(self, phase: int) -> "PauliString":
        return PauliString(self.dimension, self.x, self.z, self.phase + phase)

    def symplectic(self, other: "PauliString") -> int:
        self._check(other)
        d = self.dimension
        return sum(b * c - a * e for a, b, c, e in zip(self.x, self.z, other.x, other.z)) % d

    def commutes(self, other: "PauliString") -> bool:
        return self.symplectic(other) == 0

    def vector(self) -> np.ndarray:
        return np.array(self.x + self.z, dtype=np.int64)

    def coefficient(self) -> complex:
        return _root(self.dimension) ** self.phase

    def to_matrix(self) -> np.ndarray:
        d = self.dimension
        w = np.exp(2j * np.pi / d)
        X = np.roll(np.eye(d), 1, axis=0)
        Z = np.diag(w ** np.arange(d))
        out = np.array([[self.coefficient()]])
        for a, b in zip(self.x, self.z):
            out = np.kron(out, np.linalg.matrix_power(X, a) @ np.linalg.matrix_power(Z, b))
        return out

    def apply(self, state: np.ndarray) -> np.ndarray:
        """Apply to a state vector (or tensor with the qudit legs first)."""
        d, n = self.dimension, self.n
        psi = np.asarray(state, dtype=complex).reshape((d,) * n + (-1,))
        w = np.exp(2j * np.pi / d)
        for j, (a, b) in enumerate(zip(self.x, self.z)):
            if b:
                shape = [1] * (n + 1)
                shape[j] = d
                psi = psi * (w ** (b * np.arange(d))).reshape(shape)
            if a:
                psi = np.roll(psi, a, axis=j)
        return (self.coefficient() * psi).reshape(np.shape(state))


def gf_rank(rows: np.ndarray, p: int) -> int:
    """Rank over GF(p) by Gaussian elimination."""
    m = np.array(rows, dtype=np.int64) % p
    if m.size == 0:
        return 0
    rank = 0
    n_rows, n_cols = m.shape
    for col in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if m[r, col]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        inv = pow(int(m[rank, col]), -1, p)
        m[rank] = (m[rank] * inv) % p
        for r in range(n_rows):
            if r != rank and m[r, col]:
                m[r] = (m[r] - m[r, col] * m[rank]) % p
        rank += 1
        if rank == n_rows:
            break
    return rank


@dataclass(frozen=True)
class StabilizerCode:
    n: int
    k: int
    generators: tuple[PauliString, ...]
    logical_x: tuple[PauliString, ...]
    logical_z: tuple[PauliString, ...]
    name: str = ""
    dimension: int = 2
    _cache: dict = field(default_factory=dict, repr=False, compare=False, hash=False)

    def __post_init__(self):
        for g in self.generators + self.logical_x + self.logical_z:
            if g.n != self.n or g.dimension != self.dimension:
                raise ValueError(f"operator {g} does not act on {self.n} qudits of dim {self.dimension}")
        if len(self.logical_x) != self.k or len(self.logical_z) != self.k:
            raise ValueError("need k logical X and k logical Z operators")

    @cached_property
    def check_matrix(self) -> np.ndarray:
        if not self.generators:
            return np.zeros((0, 2 * self.n), dtype=np.int64)
        return np.array([g.vector() for g in self.generators], dtype=np.int64)

    def validate(self) -> None:
        """Raise ``ValueError`` when the stabilizer structure is inconsistent."""
        gens = self.generators
        for a, b in itertools.combinations(gens, 2):
            if not a.commutes(b):
                raise ValueError(f"generators {a} and {b} do not commute")
        if gf_rank(self.check_matrix, self.dimension) != self.n - self.k:
            raise ValueError("generators are dependent or k is inconsistent with n")
        for lx, lz in zip(self.logical_x, self.logical_z):
            for g in gens:
                if not (lx.commutes(g) and lz.commutes(g)):
                    raise ValueError("logical operator does not commute with the stabilizer")
        for i, lx in enumerate(self.logical_x):
            for j, lz in enumerate(self.logical_z):
                if (lx.symplectic(lz) == 0) != (i != j):
                    raise ValueError("logical operators violate the X/Z commutation pattern")

    def in_stabilizer_span(self, p: PauliString) -> bool:
        """True when ``p`` equals a stabilizer group element up to phase."""
        if p.is_identity:
            return True
        base = gf_rank(self.check_matrix, self.dimension)
        return gf_rank(np.vstack([self.check_matrix, p.vector()]), self.dimension) == base

    def code_space_basis(self) -> np.ndarray:
        """Logical basis states as columns, shape ``(d**n, d**k)``.

        ``|0..0>`` (logical) is the projection of the first computational seed
        state with nonzero overlap onto the stabilizer and logical-Z +1
        eigenspaces; the other basis states follow by logical X powers.
        """
        if "basis" in self._cache:
            return self._cache["basis"]
        d, n, k = self.dimension, self.n, self.k
        dim = d**n

        def project(vec: np.ndarray) -> np.ndarray:
            for g in self.generators + self.logical_z:
                acc = vec.copy()
                term = vec
                for _ in range(d - 1):
                    term = g.apply(term)
                    acc = acc + term
                vec = acc / d
            return vec

        zero = None
        for seed in range(dim):
            vec = np.zeros(dim, dtype=complex)
            vec[seed] = 1.0
            vec = project(vec)
            norm = np.linalg.norm(vec)
            if norm > 1e-8:
                zero = vec / norm
                break
        if zero is None:
            raise CodeSpaceError("degenerate code space: no seed survives projection")
        cols = []
        for digits in itertools.product(range(d), repeat=k):
            vec = zero
            for op, power in zip(self.logical_x, digits):
                for _ in range(power):
                    vec = op.apply(vec)
            cols.append(vec)
        basis = np.array(cols).T
        self._cache["basis"] = basis
        return basis

    def projector_residual(self, state: np.ndarray) -> float:
        """Norm of the component of ``state`` outside the code space."""
        basis = self.code_space_basis()
        v = np.asarray(state, dtype=complex).reshape(-1)
        return float(np.linalg.norm(v - basis @ (basis.conj().T @ v)))

    # -- JSON ------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dimension": self.dimension,
            "n": self.n,
            "k": self.k,
            "generators": [g.label() for g in self.generators],
            "logicals": {
                "x": [g.label() for g in self.logical_x],
                "z": [g.label() for g in self.logical_z],
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StabilizerCode":
        try:
            d = int(data["dimension"])
            n, k = int(data["n"]), int(data["k"])
            gens = tuple(PauliString.from_label(s, d) for s in data["generators"])
            logicals = data.get("logicals", {"x": [], "z": []})
            lx = tuple(PauliString.from_label(s, d) for s in logicals["x"])
            lz = tuple(PauliString.from_label(s, d) for s in logicals["z"])
            code = cls(n, k, gens, lx, lz, name=str(data.get("name", "")), dimension=d)
            code.validate()
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"invalid code definition: {exc}") from exc
        return code

    @classmethod
    def load(cls, path: str | Path) -> "StabilizerCode":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON ({exc})") from exc
        if not isinstance(data, dict):
            raise SchemaError(f"{path}: expected a JSON object")
        return cls.from_dict(data)


def five_qubit_code() -> StabilizerCode:
    """The cyclic [[5,1,3]] code with logical X^5 and Z^5."""
    gens = tuple(PauliString.from_label(s) for s in ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"))
    return StabilizerCode(
        5, 1, gens,
        (PauliString.from_label("XXXXX"),),
        (PauliString.from_label("ZZZZZ"),),
        name="five_qubit",
    )


def three_qutrit_code() -> StabilizerCode:
    gens = (PauliString(3, (1, 1, 1), (0, 0, 0)), PauliString(3, (0, 0, 0), (1, 1, 1)))
    return StabilizerCode(
        3, 1, gens,
        (PauliString(3, (0, 1, 2), (0, 0, 0)),),
        (PauliString(3, (0, 0, 0), (0, 2, 1)),),
        name="three_qutrit",
        dimension=3,
    )


def repetition_code(n: int = 3) -> StabilizerCode:
    """Bit-flip repetition code with Z_i Z_{i+1} checks."""
    gens = tuple(
        PauliString(2, (0,) * n, tuple(int(j in (i, i + 1)) for j in range(n))) for i in range(n - 1)
    )
    return StabilizerCode(
        n, 1, gens,
        (PauliString(2, (1,) * n, (0,) * n),),
        (PauliString(2, (0,) * n, (1,) + (0,) * (n - 1)),),
        name=f"repetition_{n}",
    )


def trivial_code(dimension: int = 2) -> StabilizerCode:
    return StabilizerCode(
        1, 1, (),
        (PauliString(dimension, (1,), (0,)),),
        (PauliString(dimension, (0,), (1,)),),
        name="trivial",
        dimension=dimension,
    )


def multiply_all(paulis: Iterable[PauliString]) -> PauliString:
    paulis = list(paulis)
    out = PauliString.identity(paulis[0].n, paulis[0].dimension)
    for p in paulis:
        out = out * p
    return out


def code_distance(code: StabilizerCode, max_qubits: int = MAX_DISTANCE_QUBITS) -> int:
    """Minimum weight of a Pauli in the normalizer but outside the stabilizer.

    Exhaustive by increasing weight; each weight class is screened
    vectorized, and survivors are tested for stabilizer membership.
    """
    d, n = code.dimension, code.n
    limit = max_qubits if d == 2 else max(1, int(max_qubits * math.log(2) / math.log(d)))
    if n > limit:
        raise SearchLimitError(f"distance search refused: n={n} exceeds guard {limit}")
    H = code.check_matrix
    hx, hz = H[:, :n], H[:, n:]
    local = [(a, b) for a in range(d) for b in range(d) if a or b]
    for w in range(1, n + 1):
        for support in itertools.combinations(range(n), w):
            choices = np.array(list(itertools.product(local, repeat=w)), dtype=np.int64)
            px = np.zeros((len(choices), n), dtype=np.int64)
            pz = np.zeros((len(choices), n), dtype=np.int64)
            px[:, support] = choices[:, :, 0]
            pz[:, support] = choices[:, :, 1]
            if len(H):
                form = (pz @ hx.T - px @ hz.T) % d
                ok = ~form.any(axis=1)
            else:
                ok = np.ones(len(choices), dtype=bool)
            for row in np.flatnonzero(ok):
                p = PauliString(d, tuple(px[row]), tuple(pz[row]))
                if not code.in_stabilizer_span(p):
                    return w
    raise ValueError("code has no nontrivial logical operator")


def quantum_hamming_bound(n: int, k: int, d: int, dimension: int = 2) -> tuple[bool, int, int]:
    """Return (holds, lhs, rhs) for sum_m (q^2-1)^m C(n,m) <= q^(n-k)."""
    if not (n >= k >= 0 and d >= 1):
        raise ValueError("need n >= k >= 0 and d >= 1")
    t = (d - 1) // 2
    lhs = sum((dimension**2 - 1) ** m * math.comb(n, m) for m in range(t + 1))
    rhs = dimension ** (n - k)
    return lhs <= rhs, lhs, rhs


def singleton_bound(n: int, k: int, d: int) -> bool:
    if not (n >= k >= 0 and d >= 1):
        raise ValueError("need n >= k >= 0 and d >= 1")
    return n >= 2 * (d - 1) + k


# ----------------------------------------------------------------------
# 3-qutrit secret sharing


def three_qutrit_basis() -> np.ndarray:
    """Columns |l> = sum_j |j, j+l, j+2l> / sqrt(3) for l = 0, 1, 2."""
    basis = np.zeros((27, 3), dtype=complex)
    for l in range(3):
        for j in range(3):
            a, b, c = j, (j + l) % 3, (j + 2 * l) % 3
            basis[9 * a + 3 * b + c, l] = 1 / np.sqrt(3)
    return basis


def three_qutrit_encode(logical: Sequence[complex]) -> DenseState:
    v = np.asarray(logical, dtype=complex).reshape(-1)
    if v.shape != (3,):
        raise ValueError("logical input must be a 3-vector")
    if abs(np.linalg.norm(v) - 1) > 1e-12:
        raise ValueError("logical input is not normalized")
    return DenseState(three_qutrit_basis() @ v, (3, 3, 3))


def three_qutrit_recovery_unitary(kept: tuple[int, int]) -> np.ndarray:
    """Unitary on the kept pair mapping the code state to logical ⊗ junk.

    Blocks ``M_l`` (kept x lost) of the encoded basis states satisfy
    ``M_l^† M_l' = δ σ``; the vectors ``M_l e_t`` for eigenvectors ``e_t`` of
    ``σ`` span the kept space orthogonally, and the unitary polar factor of
    the matrix sending them to ``|l, t>`` is the recovery map.
    """
    kept = tuple(sorted(kept))
    lost = ({0, 1, 2} - set(kept)).pop()
    tensors = three_qutrit_basis().T.reshape(3, 3, 3, 3)  # logical, q0, q1, q2
    blocks = [np.moveaxis(t, (*kept, lost), (0, 1, 2)).reshape(9, 3) for t in tensors]
    sigma = blocks[0].conj().T @ blocks[0]
    _, evecs = np.linalg.eigh(sigma)
    A = np.zeros((9, 9), dtype=complex)
    for l, M in enumerate(blocks):
        for t in range(3):
            A[3 * l + t] = (M @ evecs[:, t]).conj()
    U, _ = scipy.linalg.polar(A)
    return U


def three_qutrit_recover(state: DenseState, kept: tuple[int, int]) -> np.ndarray:
    """Recover the logical amplitudes from two of the three qutrits.

    The phase is fixed so that the largest-modulus amplitude is real positive.
    """
    if len(set(kept)) != 2 or not set(kept) <= {0, 1, 2}:
        raise ValueError("kept must name two distinct sites among 0, 1, 2")
    code = three_qutrit_code()
    vec = state.vector()
    if code.dimension**code.n != vec.size or np.linalg.norm(vec) == 0:
        raise ValueError("expected a 3-qutrit state")
    vec = vec / np.linalg.norm(vec)
    basis = three_qutrit_basis()
    if np.linalg.norm(vec - basis @ (basis.conj().T @ vec)) > 1e-10:
        raise CodeSpaceError("state lies outside the code space (behind the horizon)")
    kept = tuple(sorted(kept))
    lost = ({0, 1, 2} - set(kept)).pop()
    psi = np.moveaxis(vec.reshape(3, 3, 3), (*kept, lost), (0, 1, 2)).reshape(9, 3)
    out = three_qutrit_recovery_unitary(kept) @ psi  # rows: (logical, junk), cols: lost
    u, s, _ = np.linalg.svd(out.reshape(3, 9))
    logical = u[:, 0]
    logical = logical * np.exp(-1j * np.angle(logical[np.argmax(np.abs(logical))]))
    return logical


def three_qutrit_marginal_entropy(state: DenseState, sites: Iterable[int]) -> float:
    return entanglement_entropy(state, set(sites))
