"""Majorana dimer states and their contraction calculus.

Conventions
-----------
Qubit ``k`` (1-based, in Jordan-Wigner order) carries Majorana modes
``2k-1`` and ``2k``::

    gamma_{2k-1} = Z^(k-1) X_k,    gamma_{2k} = Z^(k-1) Y_k.

A dimer ``j -> k`` means the state is annihilated by ``gamma_j + i gamma_k``,
i.e. ``-i gamma_j gamma_k`` has eigenvalue +1.  Then
``G_jk = (i/2) <[gamma_j, gamma_k]> = -1`` and ``G_kj = +1``.

Contraction of two qubits sitting next to each other in the Jordan-Wigner
order (sites ``q, q+1``) against ``|00> + |11>`` is exact in this picture:
that two-qubit state is itself the dimer pair ``b -> c``, ``a -> d`` on its
modes ``a < b < c < d``.  Chains alternating between state dimers and these
two links fuse into one dimer whose orientation is the product of the link
eigenvalues read along the chain.  A closed chain survives (non-zero
amplitude) only when that product is -1.

Moving a block of sites changes the Jordan-Wigner strings.  Rotating the
first sites to the end multiplies every dimer with exactly one endpoint in
the moved block by ``-P`` (``P`` the total parity); inserting a block of
parity ``p`` multiplies every dimer straddling the insertion point by ``p``.
"""

from __future__ import annotations

import bisect
import heapq
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Sequence

import numpy as np

from holocode.errors import HolocodeError
from holocode.stabilizer import PauliString

HALF_LOG2 = 0.5 * math.log(2)


class ZeroContractionError(HolocodeError, ArithmeticError):
    """A closed dimer loop with mismatched orientation: the contraction vanishes."""


# ----------------------------------------------------------------------
# monomials and Jordan-Wigner


@dataclass(frozen=True)
class MajoranaMonomial:
    """``i**phase * scale * gamma_{m1} gamma_{m2} ...`` with sorted distinct modes."""

    modes: tuple[int, ...]
    phase: int = 0
    scale: float = 1.0

    @classmethod
    def from_product(cls, modes: Sequence[int], phase: int = 0, scale: float = 1.0):
        """Canonicalize a raw product by sorting (with sign) and cancelling squares."""
        seq = list(modes)
        sign = 0
        # insertion sort, counting transpositions
        for i in range(1, len(seq)):
            j = i
            while j > 0 and seq[j - 1] > seq[j]:
                seq[j - 1], seq[j] = seq[j], seq[j - 1]
                sign += 1
                j -= 1
        out: list[int] = []
        for m in seq:
            if out and out[-1] == m:
                out.pop()
            else:
                out.append(m)
        return cls(tuple(out), (phase + 2 * sign) % 4, scale)

    @property
    def coefficient(self) -> complex:
        return self.scale * 1j**self.phase

    def __mul__(self, other: "MajoranaMonomial") -> "MajoranaMonomial":
        a, b = self.modes, other.modes
        swaps = sum(len(a) - bisect.bisect_right(a, m) for m in b)
        modes = tuple(sorted(set(a) ^ set(b)))
        return MajoranaMonomial(modes, (self.phase + other.phase + 2 * swaps) % 4, self.scale * other.scale)

    def __repr__(self):
        coef = ["", "i ", "-", "-i "][self.phase]
        body = " ".join(f"g{m}" for m in self.modes) or "1"
        return f"{coef}{body}" if self.scale == 1 else f"{self.scale}*{coef}{body}"


def _site_monomial(k: int, x: int, z: int) -> MajoranaMonomial:
    """X_k^x Z_k^z for 1-based site k."""
    out = MajoranaMonomial(())
    if x:
        string = []
        for j in range(1, k):
            string += [2 * j - 1, 2 * j]
        # Z_j = -i g_{2j-1} g_{2j}
        out = MajoranaMonomial.from_product(string + [2 * k - 1], phase=3 * (k - 1))
    if z:
        out = out * MajoranaMonomial((2 * k - 1, 2 * k), phase=3)
    return out


def jordan_wigner(p: PauliString) -> MajoranaMonomial:
    """Express a qubit Pauli string as a Majorana monomial."""
    if p.dimension != 2:
        raise ValueError("Jordan-Wigner mapping needs a qubit Pauli string")
    out = MajoranaMonomial((), phase=p.phase)
    for k, (x, z) in enumerate(zip(p.x, p.z), start=1):
        if x or z:
            out = out * _site_monomial(k, x, z)
    return out


def majorana_pauli(mode: int, n_sites: int) -> PauliString:
    """Pauli string of ``gamma_mode`` on ``n_sites`` qubits."""
    k = (mode + 1) // 2
    if not 1 <= k <= n_sites:
        raise ValueError(f"mode {mode} outside {2 * n_sites} modes")
    x = [0] * n_sites
    z = [1] * (k - 1) + [0] * (n_sites - k + 1)
    x[k - 1] = 1
    phase = 0
    if mode % 2 == 0:
        z[k - 1] = 1
        phase = 1  # Y = i X Z
    # Z string stands to the left: Z..Z X_k Z^y commute since different sites
    return PauliString(2, tuple(x), tuple(z), phase)


def monomial_pauli(m: MajoranaMonomial, n_sites: int) -> tuple[PauliString, float]:
    """Pauli string and real scale of a monomial."""
    out = PauliString.identity(n_sites).scaled(m.phase)
    for mode in m.modes:
        out = out * majorana_pauli(mode, n_sites)
    return out, m.scale


# ----------------------------------------------------------------------
# public dimer state (1-based modes in Jordan-Wigner order)


def _count_crossings(pairs: Sequence[tuple[int, int]], position: dict[int, int]) -> int:
    """Number of crossing chord pairs, by a Fenwick sweep over left ends."""
    chords = sorted(tuple(sorted((position[a], position[b]))) for a, b in pairs)
    size = 2 * len(chords) + 2
    tree = [0] * (size + 1)

    def add(i, v):
        i += 1
        while i <= size:
            tree[i] += v
            i += i & -i

    def prefix(i):  # sum over positions < i
        total = 0
        while i > 0:
            total += tree[i]
            i -= i & -i
        return total

    crossings = 0
    # chords open at their left end; a new chord (c, d) crosses each open
    # chord (a, b) with a < c < b < d
    ends = sorted(chords, key=lambda ch: ch[0])
    active_right = []
    for c, d in ends:
        # drop chords that closed before c
        while active_right and active_right[0][0] < c:
            b, _ = heapq.heappop(active_right)
            add(b, -1)
        crossings += prefix(d) - prefix(c)
        heapq.heappush(active_right, (d, c))
        add(d, 1)
    return crossings


@dataclass(frozen=True)
class DimerState:
    """Perfect matching of ``mode_count`` Majorana modes with orientations.

    ``dimers`` holds ordered pairs ``(tail, head)``.  ``embedding`` lists the
    modes in their cyclic order on the circle used for crossing counts
    (default: Jordan-Wigner order).  ``global_phase`` is carried along but
    ignored by equality.
    """

    mode_count: int
    dimers: tuple[tuple[int, int], ...]
    embedding: tuple[int, ...] | None = None
    global_phase: complex = field(default=1.0, compare=False)

    def __post_init__(self):
        if self.mode_count % 2:
            raise ValueError("mode count must be even")
        dimers = tuple(sorted((int(a), int(b)) for a, b in self.dimers))
        seen = [m for d in dimers for m in d]
        if sorted(seen) != list(range(1, self.mode_count + 1)):
            raise ValueError("dimers must form a perfect matching of modes 1..2N")
        object.__setattr__(self, "dimers", tuple(sorted(dimers, key=lambda d: min(d))))
        if self.embedding is None:
            object.__setattr__(self, "embedding", tuple(range(1, self.mode_count + 1)))
        elif sorted(self.embedding) != list(range(1, self.mode_count + 1)):
            raise ValueError("embedding must be a permutation of the modes")

    @property
    def n_sites(self) -> int:
        return self.mode_count // 2

    @cached_property
    def partner(self) -> dict[int, int]:
        out = {}
        for a, b in self.dimers:
            out[a] = b
            out[b] = a
        return out

    def is_tail(self, mode: int) -> bool:
        return any(a == mode for a, _ in self.dimers)

    def support(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(d) for d in self.dimers)

    def dimer_parity(self, dimer: tuple[int, int]) -> int:
        return 1 if dimer[0] < dimer[1] else -1

    def crossing_number(self) -> int:
        pos = {m: i for i, m in enumerate(self.embedding)}
        return _count_crossings(self.dimers, pos)

    def total_parity(self) -> int:
        """``(-1)^crossings`` times the product of dimer parities."""
        p = 1
        for d in self.dimers:
            p *= self.dimer_parity(d)
        return p * (-1) ** self.crossing_number()

    def two_point(self) -> np.ndarray:
        """Integer matrix ``G_jk = (i/2)<[g_j, g_k]>`` (0-based array indices)."""
        n = self.mode_count
        G = np.zeros((n, n), dtype=np.int64)
        for a, b in self.dimers:
            G[a - 1, b - 1] = -1
            G[b - 1, a - 1] = 1
        return G

    def entropy(self, region: Iterable[int]) -> float:
        return dimer_entropy(self, region)

    def to_json(self) -> dict:
        return {
            "mode_count": self.mode_count,
            "dimers": [list(d) for d in self.dimers],
            "embedding": list(self.embedding),
        }

    @classmethod
    def from_json(cls, data: dict) -> "DimerState":
        return cls(int(data["mode_count"]), tuple(tuple(d) for d in data["dimers"]), tuple(data["embedding"]))

    # -- dense representation ------------------------------------------

    def stabilizers(self) -> list[PauliString]:
        """``-i g_tail g_head`` for each dimer, as Pauli strings."""
        n = self.n_sites
        out = []
        for a, b in self.dimers:
            p, _ = monomial_pauli(MajoranaMonomial.from_product([a, b], phase=3), n)
            out.append(p)
        return out

    def to_dense(self) -> np.ndarray:
        """State vector on ``n_sites`` qubits (guarded to 16 sites)."""
        n = self.n_sites
        if n > 16:
            raise ValueError("dense conversion limited to 16 sites")
        stabs = self.stabilizers()
        for seed in range(2**n):
            vec = np.zeros(2**n, dtype=complex)
            vec[seed] = 1
            for s in stabs:
                vec = 0.5 * (vec + s.apply(vec))
            norm = np.linalg.norm(vec)
            if norm > 1e-6:
                vec = vec / norm
                break
        return self.global_phase * vec


def dimer_entropy(state: DimerState, region: Iterable[int]) -> float:
    """Entropy of a site-closed mode region: half log 2 per cut dimer."""
    region = set(region)
    for m in region:
        if not 1 <= m <= state.mode_count:
            raise ValueError(f"mode {m} out of range")
        sibling = m + 1 if m % 2 else m - 1
        if sibling not in region:
            raise ValueError(f"region must contain both modes of each site (mode {m} lacks {sibling})")
    cut = sum(1 for a, b in state.dimers if (a in region) != (b in region))
    return cut * HALF_LOG2


def site_modes(sites: Iterable[int]) -> set[int]:
    """Modes of 0-based sites."""
    out = set()
    for s in sites:
        out |= {2 * s + 1, 2 * s + 2}
    return out


def total_parity(state: DimerState) -> int:
    return state.total_parity()


def two_point(state: DimerState) -> np.ndarray:
    return state.two_point()


def wick_four_point(G: np.ndarray, i: int, j: int, k: int, l: int) -> float:
    """``<g_i g_j g_k g_l>`` of a Gaussian state from its two-point matrix.

    Indices are 1-based modes; ``<g_a g_b> = -i G_ab`` for ``a != b``.
    """
    if len({i, j, k, l}) != 4:
        raise ValueError("four-point function needs distinct modes")

    def pair(a, b):
        return -1j * G[a - 1, b - 1]

    value = pair(i, j) * pair(k, l) - pair(i, k) * pair(j, l) + pair(i, l) * pair(j, k)
    return float(value.real) if abs(value.imag) < 1e-12 else value


def five_qubit_basis_dimers(bit: int) -> DimerState:
    """Dimer form of the [[5,1,3]] logical basis state ``|bit>``."""
    if bit not in (0, 1):
        raise ValueError("bit must be 0 or 1")
    pairs = [(2, 7), (4, 9), (1, 6), (3, 8), (5, 10)]
    if bit:
        # the parity-dressed stabilizers flip with the total parity
        pairs = [(2, 7), (4, 9), (6, 1), (8, 3), (10, 5)]
    return DimerState(10, tuple(pairs))


def nearest_neighbor_state(n_sites: int) -> DimerState:
    """Product state with each site's two modes paired (``Z = +1`` everywhere)."""
    return DimerState(2 * n_sites, tuple((2 * s + 1, 2 * s + 2) for s in range(n_sites)))


def bell_pair_state() -> DimerState:
    """``|00> + |11>`` on two adjacent qubits."""
    return DimerState(4, ((2, 3), (1, 4)))


# ----------------------------------------------------------------------
# contraction engine on labelled sites


class Frontier:
    """Mutable dimer state on labelled sites in Jordan-Wigner order.

    Modes are ``(site_label, 0)`` and ``(site_label, 1)``.  Orientation is
    stored as ``head[tail] = head`` so that contraction needs no positions.
    """

    __slots__ = ("sites", "partner", "tail", "parity")

    def __init__(self, sites: list, partner: dict, tail: set, parity: int):
        self.sites = sites
        self.partner = partner
        self.tail = tail
        self.parity = parity

    @classmethod
    def from_state(cls, state: DimerState, labels: Sequence[Hashable]) -> "Frontier":
        if len(labels) != state.n_sites:
            raise ValueError("one label per site required")

        def mode(m):
            return (labels[(m - 1) // 2], (m - 1) % 2)

        partner, tail = {}, set()
        for a, b in state.dimers:
            partner[mode(a)] = mode(b)
            partner[mode(b)] = mode(a)
            tail.add(mode(a))
        return cls(list(labels), partner, tail, state.total_parity())

    def to_state(self) -> DimerState:
        index = {}
        for i, s in enumerate(self.sites):
            index[(s, 0)] = 2 * i + 1
            index[(s, 1)] = 2 * i + 2
        dimers = []
        for m in self.tail:
            dimers.append((index[m], index[self.partner[m]]))
        return DimerState(2 * len(self.sites), tuple(dimers))

    def copy(self) -> "Frontier":
        return Frontier(list(self.sites), dict(self.partner), set(self.tail), self.parity)

    def _flip(self, u) -> None:
        v = self.partner[u]
        if u in self.tail:
            self.tail.discard(u)
            self.tail.add(v)
        else:
            self.tail.discard(v)
            self.tail.add(u)

    def _flip_straddling(self, inside: set) -> None:
        """Flip every dimer with exactly one endpoint among sites ``inside``."""
        done = set()
        for s in inside:
            for bit in (0, 1):
                u = (s, bit)
                v = self.partner[u]
                if v[0] not in inside and u not in done:
                    self._flip(u)
                    done.add(u)

    def rotate(self, k: int) -> None:
        """Move the first ``k`` sites to the end of the order."""
        k %= max(1, len(self.sites))
        if not k:
            return
        moved = self.sites[:k]
        if self.parity == 1:
            self._flip_straddling(set(moved) if 2 * k <= len(self.sites) else set(self.sites[k:]))
        self.sites = self.sites[k:] + moved

    def insert(self, position: int, block: "Frontier") -> None:
        """Tensor ``block`` into the order before ``position``."""
        if block.parity == -1 and 0 < position < len(self.sites):
            before = self.sites[:position]
            after = self.sites[position:]
            self._flip_straddling(set(before) if len(before) <= len(after) else set(after))
        self.sites[position:position] = block.sites
        self.partner.update(block.partner)
        self.tail |= block.tail
        self.parity *= block.parity

    def _eig(self, u, v) -> int:
        """Eigenvalue of ``-i g_u g_v`` for the stored dimer ``{u, v}``."""
        return 1 if u in self.tail else -1

    def contract_adjacent(self, position: int) -> complex:
        """Contract sites at ``position`` and ``position + 1`` with ``|00>+|11>``.

        Returns the scalar factor contributed by closed loops (always 1 for
        surviving loops up to normalization); raises on a vanishing loop.
        """
        s1, s2 = self.sites[position], self.sites[position + 1]
        a, b, c, d = (s1, 0), (s1, 1), (s2, 0), (s2, 1)
        link = {a: (d, 1), d: (a, -1), b: (c, 1), c: (b, -1)}
        contracted = set(link)
        visited = set()
        new_pairs = []
        for m in (a, b, c, d):
            if m in visited:
                continue
            x = self.partner[m]
            if x in contracted:
                continue
            # open chain x -> m -> link -> ... -> y
            sign = self._eig(x, m)
            cur = m
            while True:
                visited.add(cur)
                nxt, t = link[cur]
                visited.add(nxt)
                sign *= t
                y = self.partner[nxt]
                sign *= self._eig(nxt, y)
                if y not in contracted:
                    break
                cur = y
            new_pairs.append((x, y, sign))
        for m in (a, b, c, d):
            if m in visited:
                continue
            # closed loop inside the contracted modes
            sign = 1
            cur = m
            while cur not in visited:
                visited.add(cur)
                nxt, t = link[cur]
                visited.add(nxt)
                sign *= t
                y = self.partner[nxt]
                sign *= self._eig(nxt, y)
                cur = y
            if sign != -1:
                raise ZeroContractionError("closed dimer loop with inconsistent orientation")
        for m in contracted:
            del self.partner[m]
            self.tail.discard(m)
        for x, y, sign in new_pairs:
            self.tail.discard(x)
            self.tail.discard(y)
            self.partner[x] = y
            self.partner[y] = x
            self.tail.add(x if sign == 1 else y)
        del self.sites[position : position + 2]
        return 1.0

    def glue(self, block: "Frontier", contact: Sequence[Hashable], block_contact: Sequence[Hashable]) -> None:
        """Attach ``block`` along a contiguous run of frontier sites.

        ``contact`` lists frontier sites in frontier order; ``block_contact``
        the matching block sites, which must appear in the block's cyclic
        order reversed.  The block's remaining sites take the contact's place.
        """
        if len(contact) != len(block_contact):
            raise ValueError("contact lists differ in length")
        if not contact:
            raise ValueError("gluing needs at least one contracted pair")
        n = len(self.sites)
        start = self.sites.index(contact[0])
        for t, s in enumerate(contact):
            if self.sites[(start + t) % n] != s:
                raise ValueError("contact sites are not contiguous in frontier order")
        if start + len(contact) > n:
            self.rotate(start)
            start = 0
        # block order must read block_contact[-1], ..., block_contact[0], rest
        bpos = block.sites.index(block_contact[-1])
        block.rotate(bpos)
        for t, s in enumerate(reversed(block_contact)):
            if block.sites[t] != s:
                raise ValueError("block contact is not contiguous in reversed cyclic order")
        end = start + len(contact)
        self.insert(end, block)
        for t in range(len(contact)):
            self.contract_adjacent(end - 1 - t)


def contract_dimers(a: DimerState, b: DimerState, pairs: Sequence[tuple[int, int]]) -> DimerState:
    """Contract 0-based site pairs ``(site in a, site in b)`` with ``|00>+|11>``.

    The a-sites must be cyclically contiguous in a's order and the b-sites
    contiguous in reversed order (planar gluing).  The result lists a's
    surviving sites (cyclically, starting after the contact) followed by b's.
    """
    if not pairs:
        left = Frontier.from_state(a, [("a", i) for i in range(a.n_sites)])
        left.insert(len(left.sites), Frontier.from_state(b, [("b", i) for i in range(b.n_sites)]))
        return left.to_state()
    sa = [p[0] for p in pairs]
    sb = [p[1] for p in pairs]
    if len(set(sa)) != len(sa) or len(set(sb)) != len(sb):
        raise ValueError("a site is contracted twice")
    na = a.n_sites
    # order the a-sites along a's cyclic order
    order = sorted(range(len(pairs)), key=lambda t: sa[t])
    sa = [sa[t] for t in order]
    sb = [sb[t] for t in order]
    # find the cyclic start of the a-run
    k = len(sa)
    for shift in range(k):
        run = sa[shift:] + sa[:shift]
        if all(run[(t + 1)] == (run[t] + 1) % na for t in range(k - 1)):
            sa, sb = run, sb[shift:] + sb[:shift]
            break
    else:
        raise ValueError("a-sites are not cyclically contiguous")
    left = Frontier.from_state(a, [("a", i) for i in range(na)])
    right = Frontier.from_state(b, [("b", i) for i in range(b.n_sites)])
    last = sa[-1]
    left.rotate((last + 1) % na)  # contact now ends the order
    right_contact = [("b", s) for s in sb]
    left.glue(right, [("a", s) for s in sa], right_contact)
    return left.to_state()


# ----------------------------------------------------------------------
# dense reference quantities


def dense_expectation(vector: np.ndarray, monomial: MajoranaMonomial, n_sites: int) -> complex:
    """``<psi| monomial |psi>`` by applying the Pauli form to the vector."""
    pauli, scale = monomial_pauli(monomial, n_sites)
    return complex(scale * np.vdot(vector, pauli.apply(vector)))


def dense_two_point(vector: np.ndarray, n_sites: int) -> np.ndarray:
    """``G_jk = (i/2)<[g_j, g_k]>`` from a state vector (0-based indices).

    With ``v_j = g_j |psi>`` (Majoranas are Hermitian) the off-diagonal
    entries are ``i <v_j | v_k>``.
    """
    n = 2 * n_sites
    vecs = np.array([majorana_pauli(j, n_sites).apply(vector) for j in range(1, n + 1)])
    G = (1j * (vecs.conj() @ vecs.T)).real
    np.fill_diagonal(G, 0.0)
    return G


def dense_parity(vector: np.ndarray, n_sites: int) -> float:
    """``<Z Z ... Z>``."""
    signs = np.array([(-1) ** bin(i).count("1") for i in range(2**n_sites)])
    return float(np.vdot(vector, signs * vector).real)
