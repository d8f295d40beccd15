"""Dense statevector simulation of the QAOA ansatz families.

Qubit ``q`` is bit ``q`` of the basis-state index (qubit 0 is least significant).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import CapacityError, ContractError
from .graphs import Graph

MAX_QUBITS = 14


@dataclass
class Statevector:
    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ContractError(
                f"expected {1 << self.n_qubits} amplitudes, got shape {self.amplitudes.shape}"
            )

    def copy(self) -> "Statevector":
        return Statevector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @classmethod
    def basis(cls, n: int, index: int) -> "Statevector":
        _check_capacity(n)
        amps = np.zeros(1 << n, dtype=complex)
        amps[index] = 1.0
        return cls(n, amps)

    @classmethod
    def from_bitstring(cls, bits: str) -> "Statevector":
        """``bits[q]`` is the value of qubit ``q``."""
        return cls.basis(len(bits), sum(int(b) << q for q, b in enumerate(bits)))


def _check_capacity(n: int):
    if not 1 <= n <= MAX_QUBITS:
        raise CapacityError(f"qubit count must be in [1, {MAX_QUBITS}], got {n}")


def _check_qubit(s: Statevector, *qubits: int):
    for q in qubits:
        if not 0 <= q < s.n_qubits:
            raise IndexError(f"qubit {q} out of range for {s.n_qubits} qubits")
    if len(set(qubits)) != len(qubits):
        raise IndexError(f"qubits must be distinct, got {qubits}")


def plus_state(n: int) -> Statevector:
    _check_capacity(n)
    return Statevector(n, np.full(1 << n, 2.0 ** (-n / 2), dtype=complex))


# ---------------------------------------------------------------------------
# Gate-level operations (in place, return the same Statevector)
# ---------------------------------------------------------------------------

def _apply_1q(s: Statevector, matrix: np.ndarray, q: int) -> Statevector:
    n = s.n_qubits
    axis = n - 1 - q
    psi = s.amplitudes.reshape((2,) * n)
    psi = np.moveaxis(np.tensordot(matrix, psi, axes=([1], [axis])), 0, axis)
    s.amplitudes[:] = psi.reshape(-1)
    return s


def rx_matrix(theta: float) -> np.ndarray:
    c, sn = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * sn], [-1j * sn, c]])


def ry_matrix(theta: float) -> np.ndarray:
    c, sn = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -sn], [sn, c]], dtype=complex)


def apply_rx(s: Statevector, q: int, theta: float) -> Statevector:
    """RX(theta) = exp(-i theta X / 2) on qubit ``q``."""
    _check_qubit(s, q)
    return _apply_1q(s, rx_matrix(theta), q)


def apply_ry(s: Statevector, q: int, theta: float) -> Statevector:
    _check_qubit(s, q)
    return _apply_1q(s, ry_matrix(theta), q)


def apply_rzz(s: Statevector, i: int, j: int, phi: float) -> Statevector:
    """RZZ(phi) = exp(-i phi Z_i Z_j / 2)."""
    _check_qubit(s, i, j)
    idx = np.arange(1 << s.n_qubits)
    parity = ((idx >> i) ^ (idx >> j)) & 1
    s.amplitudes *= np.where(parity == 0, np.exp(-0.5j * phi), np.exp(0.5j * phi))
    return s


def apply_cnot(s: Statevector, control: int, target: int) -> Statevector:
    _check_qubit(s, control, target)
    s.amplitudes[:] = s.amplitudes[_cnot_perm(s.n_qubits, control, target)]
    return s


def _cnot_perm(n: int, control: int, target: int) -> np.ndarray:
    idx = np.arange(1 << n)
    return idx ^ (((idx >> control) & 1) << target)


# ---------------------------------------------------------------------------
# Pauli sums
# ---------------------------------------------------------------------------

PauliSpec = Union[str, dict]


def _parse_pauli(spec: PauliSpec) -> dict[int, str]:
    """Accept ``"Z0 Z1"`` / ``"X3"`` / ``""`` or a ``{qubit: "X"}`` mapping."""
    if isinstance(spec, dict):
        ops = {int(q): str(p).upper() for q, p in spec.items()}
    else:
        ops = {}
        for tok in spec.split():
            q = int(tok[1:])
            if q in ops:
                raise ContractError(f"qubit {q} repeated in Pauli string {spec!r}")
            ops[q] = tok[0].upper()
    for p in ops.values():
        if p not in "IXYZ":
            raise ContractError(f"unknown Pauli {p!r}")
    return {q: p for q, p in ops.items() if p != "I"}


class PauliSum:
    """Weighted sum of Pauli strings, compiled per qubit count.

    Each term becomes a bit-flip mask and a phase vector over output indices;
    terms sharing a mask are merged, so an all-Z Hamiltonian is one diagonal.
    """

    def __init__(self, terms: Iterable[tuple[complex, PauliSpec]]):
        self.terms = [(complex(c), _parse_pauli(p)) for c, p in terms]
        self._compiled: dict[int, list[tuple[int, np.ndarray]]] = {}

    def __len__(self):
        return len(self.terms)

    def max_qubit(self) -> int:
        return max((q for _, ops in self.terms for q in ops), default=-1)

    def compile(self, n: int) -> list[tuple[int, np.ndarray]]:
        if n in self._compiled:
            return self._compiled[n]
        if self.max_qubit() >= n or any(q < 0 for _, ops in self.terms for q in ops):
            raise IndexError(f"Pauli term acts outside {n} qubits")
        idx = np.arange(1 << n)
        merged: dict[int, np.ndarray] = {}
        for coef, ops in self.terms:
            mask = 0
            phase = np.full(1 << n, coef, dtype=complex)
            for q, p in ops.items():
                bit = (idx >> q) & 1
                sign = 1 - 2 * bit
                if p == "X":
                    mask |= 1 << q
                elif p == "Z":
                    phase *= sign
                else:  # Y: out[k] gets -i (-1)^{k_q} psi[k ^ 2^q]
                    mask |= 1 << q
                    phase *= -1j * sign
            merged[mask] = merged[mask] + phase if mask in merged else phase
        compiled = [(m, ph) for m, ph in sorted(merged.items())]
        self._compiled[n] = compiled
        return compiled

    def apply(self, amps: np.ndarray, n: int) -> np.ndarray:
        """Apply to the last axis of ``amps`` (works on stacks of vectors)."""
        idx = np.arange(1 << n)
        out = np.zeros_like(amps, dtype=complex)
        for mask, phase in self.compile(n):
            out += phase * (amps if mask == 0 else amps[..., idx ^ mask])
        return out


def apply_pauli_sum(
    s: Statevector, terms: Union[PauliSum, Iterable[tuple[complex, PauliSpec]]]
) -> np.ndarray:
    """Return ``sum_t c_t P_t |s>`` as a raw (generally unnormalized) array."""
    if not isinstance(terms, PauliSum):
        terms = PauliSum(terms)
    return terms.apply(s.amplitudes, s.n_qubits)


def cost_hamiltonian(g: Graph) -> PauliSum:
    return PauliSum((1.0, {i: "Z", j: "Z"}) for i, j in g.edges)


def x_sum(n: int) -> PauliSum:
    return PauliSum((1.0, {q: "X"}) for q in range(n))


def y_sum(n: int) -> PauliSum:
    return PauliSum((1.0, {q: "Y"}) for q in range(n))


# ---------------------------------------------------------------------------
# Ansatz
# ---------------------------------------------------------------------------

class Mixer(str, Enum):
    RX = "rx"
    RXRY = "rxry"


class EntPattern(str, Enum):
    NONE = "none"
    CYCLIC = "cyclic"
    COMPLETE = "complete"


def entangling_pairs(pattern: EntPattern | str, n: int) -> list[tuple[int, int]]:
    """(control, target) CNOT sequence of one entanglement stage."""
    pattern = EntPattern(pattern)
    if pattern is EntPattern.NONE:
        return []
    if pattern is EntPattern.CYCLIC:
        return [(k, (k + 1) % n) for k in range(n)]
    return [(c, t) for c in range(n) for t in range(c + 1, n)]


@dataclass(frozen=True)
class AnsatzSpec:
    graph: Graph
    depth: int
    mixer: Mixer = Mixer.RX
    ent_pattern: EntPattern = EntPattern.NONE
    ent_stages: int = 0

    def __post_init__(self):
        object.__setattr__(self, "mixer", Mixer(self.mixer))
        object.__setattr__(self, "ent_pattern", EntPattern(self.ent_pattern))
        _check_capacity(self.n_qubits)
        if self.depth < 1:
            raise ContractError(f"depth must be >= 1, got {self.depth}")
        if not 0 <= self.ent_stages <= self.depth:
            raise ContractError(f"ent_stages must be in [0, {self.depth}], got {self.ent_stages}")
        if (self.ent_pattern is EntPattern.NONE) != (self.ent_stages == 0):
            raise ContractError("ent_pattern 'none' must go with ent_stages == 0 and vice versa")
        if self.ent_pattern is EntPattern.CYCLIC and self.n_qubits < 2:
            raise ContractError("cyclic entanglement needs at least 2 qubits")

    @property
    def n_qubits(self) -> int:
        return self.graph.n_nodes

    @property
    def params_per_layer(self) -> int:
        return 2 if self.mixer is Mixer.RX else 3

    @property
    def n_params(self) -> int:
        return self.params_per_layer * self.depth

    def param_kinds(self) -> list[str]:
        """Per-parameter kind: ``gamma``, ``beta_x`` or ``beta_y``."""
        layer = ["gamma", "beta_x"] if self.mixer is Mixer.RX else ["gamma", "beta_x", "beta_y"]
        return layer * self.depth

    def param_labels(self) -> list[str]:
        layer = ["gamma", "beta"] if self.mixer is Mixer.RX else ["gamma", "beta_x", "beta_y"]
        return [f"{name}_{k + 1}" for k in range(self.depth) for name in layer]

    def identifier(self) -> str:
        return (
            f"n={self.n_qubits},topology={self.graph.topology.value},mixer={self.mixer.value},"
            f"depth={self.depth},ent_pattern={self.ent_pattern.value},ent_stages={self.ent_stages}"
        )

    def to_json(self) -> dict:
        return {
            "n": self.n_qubits,
            "depth": self.depth,
            "mixer": self.mixer.value,
            "ent_pattern": self.ent_pattern.value,
            "ent_stages": self.ent_stages,
            "graph": self.graph.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AnsatzSpec":
        graph = Graph.from_json(obj["graph"])
        if int(obj["n"]) != graph.n_nodes:
            raise ContractError("'n' disagrees with the graph node count")
        return cls(graph, int(obj["depth"]), obj["mixer"], obj["ent_pattern"], int(obj["ent_stages"]))


def check_params(spec: AnsatzSpec, params: Sequence[float]) -> np.ndarray:
    params = np.asarray(params, dtype=float)
    if params.shape != (spec.n_params,):
        raise ContractError(f"expected {spec.n_params} parameters, got shape {params.shape}")
    return params


class _Compiled:
    """Precomputed index maps and diagonals for one AnsatzSpec."""

    def __init__(self, spec: AnsatzSpec):
        n = spec.n_qubits
        idx = np.arange(1 << n)
        self.n = n
        self.h_cost = cost_hamiltonian(spec.graph)
        self.h_x = x_sum(n)
        self.h_y = y_sum(n)
        self.cost_diag = np.real(self.h_cost.compile(n)[0][1]) if spec.graph.edges else np.zeros(1 << n)
        self.flips = [idx ^ (1 << q) for q in range(n)]
        self.signs = [1 - 2 * ((idx >> q) & 1) for q in range(n)]
        perm = idx
        for c, t in entangling_pairs(spec.ent_pattern, n):
            perm = perm[_cnot_perm(n, c, t)]
        self.ent_perm = perm

    def rx_all(self, states: np.ndarray, beta: float) -> np.ndarray:
        # exp(-i beta sum X) as a product of RX(2 beta)
        c, s = np.cos(beta), -1j * np.sin(beta)
        for flip in self.flips:
            states = c * states + s * states[..., flip]
        return states

    def ry_all(self, states: np.ndarray, beta: float) -> np.ndarray:
        c, s = np.cos(beta), np.sin(beta)
        for flip, sign in zip(self.flips, self.signs):
            states = c * states - (s * sign) * states[..., flip]
        return states


@lru_cache(maxsize=256)
def _compile(spec: AnsatzSpec) -> _Compiled:
    return _Compiled(spec)


def evolve(
    spec: AnsatzSpec,
    params: Sequence[float],
    *,
    derivatives: bool = False,
    phase: complex = 1.0,
) -> np.ndarray:
    """Run the ansatz; optionally carry every derivative branch along.

    Returns an array of shape ``(1, 2^n)`` or, with ``derivatives=True``,
    ``(1 + m, 2^n)`` whose row ``k + 1`` is the exact derivative of the state
    with respect to parameter ``k``. A derivative branch is spawned from the
    primary state right after the layer its parameter drives, by applying
    ``-i G`` with ``G`` the layer generator; it then follows the rest of the
    circuit alongside the primary state.
    """
    params = check_params(spec, params)
    c = _compile(spec)
    n = spec.n_qubits
    states = np.full((1, 1 << n), phase * 2.0 ** (-n / 2), dtype=complex)

    def branch(states, generator: PauliSum):
        if not derivatives:
            return states
        d = -1j * generator.apply(states[0], n)
        return np.vstack([states, d[None, :]])

    ppl = spec.params_per_layer
    for k in range(spec.depth):
        angles = params[k * ppl:(k + 1) * ppl]
        entangle = k < spec.ent_stages
        states = states * np.exp(-1j * angles[0] * c.cost_diag)
        states = branch(states, c.h_cost)
        if spec.mixer is Mixer.RX:
            if entangle:
                states = states[..., c.ent_perm]
            states = c.rx_all(states, angles[1])
            states = branch(states, c.h_x)
        else:
            states = c.rx_all(states, angles[1])
            states = branch(states, c.h_x)
            if entangle:
                states = states[..., c.ent_perm]
            states = c.ry_all(states, angles[2])
            states = branch(states, c.h_y)
    return states


def prepare_state(spec: AnsatzSpec, params: Sequence[float]) -> Statevector:
    return Statevector(spec.n_qubits, evolve(spec, params)[0])


def prepare_state_gatewise(spec: AnsatzSpec, params: Sequence[float]) -> Statevector:
    """Same circuit built gate by gate from the public gate functions.

    Slow; kept as a readable reference for the compiled path.
    """
    params = check_params(spec, params)
    n = spec.n_qubits
    s = plus_state(n)
    pairs = entangling_pairs(spec.ent_pattern, n)
    ppl = spec.params_per_layer

    def entangle():
        for ctl, tgt in pairs:
            apply_cnot(s, ctl, tgt)

    for k in range(spec.depth):
        angles = params[k * ppl:(k + 1) * ppl]
        for i, j in spec.graph.edges:
            apply_rzz(s, i, j, 2 * angles[0])
        if spec.mixer is Mixer.RX:
            if k < spec.ent_stages:
                entangle()
            for q in range(n):
                apply_rx(s, q, 2 * angles[1])
        else:
            for q in range(n):
                apply_rx(s, q, 2 * angles[1])
            if k < spec.ent_stages:
                entangle()
            for q in range(n):
                apply_ry(s, q, 2 * angles[2])
    return s


def cost_diagonal(spec_or_graph: Union[AnsatzSpec, Graph]) -> np.ndarray:
    """Diagonal of the ZZ cost Hamiltonian in the computational basis."""
    if isinstance(spec_or_graph, AnsatzSpec):
        return _compile(spec_or_graph).cost_diag
    g = spec_or_graph
    if not g.edges:
        return np.zeros(1 << g.n_nodes)
    return np.real(cost_hamiltonian(g).compile(g.n_nodes)[0][1])
