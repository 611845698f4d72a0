"""Exact statevector and density-matrix simulation of layered circuits.

Amplitude ordering: basis index b carries qubit k in bit k of b, matching
the Pauli-mask convention. Soft caps: 24 qubits for statevectors, 10 for
density matrices.

RNG: all sampling uses the counter-based Philox generator. Independent
streams are derived from (seed, stream) key pairs; parallel workers use
their stream id as the second key word.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import cos, sin, sqrt

import numpy as np

from .circuits import Gate, QuantumCircuit
from .pauli import Observable, PauliString

MAX_STATEVECTOR_QUBITS = 24
MAX_DENSITY_QUBITS = 10

_SQ2 = 1 / sqrt(2)

_FIXED_1Q = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "h": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "s": np.array([[1, 0], [0, 1j]], dtype=complex),
    "sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
}

# two-qubit matrices in the local basis (bit 0 = first listed qubit)
_CX = np.eye(4, dtype=complex)[[0, 3, 2, 1]]  # control = local bit 0
_SWAP = np.eye(4, dtype=complex)[[0, 2, 1, 3]]
_XX = np.kron(_FIXED_1Q["x"], _FIXED_1Q["x"])
_YY = np.kron(_FIXED_1Q["y"], _FIXED_1Q["y"])
_ZZ = np.kron(_FIXED_1Q["z"], _FIXED_1Q["z"])


def philox_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based RNG; (seed, stream) selects an independent stream."""
    key = np.array([seed % 2**64, stream % 2**64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def gate_matrix(gate: Gate) -> np.ndarray:
    if gate.name == "u":
        return gate.matrix
    if gate.name in _FIXED_1Q:
        return _FIXED_1Q[gate.name]
    t = gate.param
    if gate.name == "rx":
        c, s = cos(t / 2), sin(t / 2)
        return np.array([[c, -1j * s], [-1j * s, c]])
    if gate.name == "ry":
        c, s = cos(t / 2), sin(t / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if gate.name == "rz":
        return np.array([[np.exp(-1j * t / 2), 0], [0, np.exp(1j * t / 2)]])
    if gate.name == "cx":
        return _CX
    if gate.name == "swap":
        return _SWAP
    if gate.name in ("rxx", "ryy", "rzz"):
        pp = {"rxx": _XX, "ryy": _YY, "rzz": _ZZ}[gate.name]
        return cos(t / 2) * np.eye(4) - 1j * sin(t / 2) * pp
    raise ValueError("unknown gate %r" % gate.name)


def _apply_unitary(arr: np.ndarray, mat: np.ndarray, qubits: tuple[int, ...], n: int) -> np.ndarray:
    """Apply a 1- or 2-qubit unitary to axis 0 of arr (length 2**n)."""
    m = len(qubits)
    batch = arr.shape[1:]
    tensor = arr.reshape((2,) * n + batch)
    # axis of qubit k is (n - 1 - k); local bit j of the gate is qubits[j]
    axes_in = [n - 1 - q for q in reversed(qubits)]  # gate dims MSB..LSB
    mt = mat.reshape((2,) * (2 * m))
    out = np.tensordot(mt, tensor, axes=(list(range(m, 2 * m)), axes_in))
    # tensordot puts the gate output axes first (MSB..LSB); restore positions
    out = np.moveaxis(out, list(range(m)), axes_in)
    return np.ascontiguousarray(out).reshape((2 ** n,) + batch)


def _popcount(values: np.ndarray) -> np.ndarray:
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(values)
    v = values.astype(np.uint64)
    count = np.zeros_like(v)
    while v.any():
        count += v & 1
        v >>= np.uint64(1)
    return count


def apply_pauli_array(arr: np.ndarray, p: PauliString) -> np.ndarray:
    """P|psi> including the canonical phase i^(popcount(x & z))."""
    n = p.n_qubits
    idx = np.arange(2 ** n)
    signs = 1.0 - 2.0 * (_popcount(idx & p.z_mask) & 1)
    phase = 1j ** ((p.x_mask & p.z_mask).bit_count() % 4)
    out = np.empty_like(arr)
    out[idx ^ p.x_mask] = (phase * signs) * arr[idx] if arr.ndim == 1 else (
        phase * signs
    )[:, None] * arr[idx]
    return out


def pauli_matrix(p: PauliString) -> np.ndarray:
    n = p.n_qubits
    idx = np.arange(2 ** n)
    signs = 1.0 - 2.0 * (_popcount(idx & p.z_mask) & 1)
    phase = 1j ** ((p.x_mask & p.z_mask).bit_count() % 4)
    mat = np.zeros((2 ** n, 2 ** n), dtype=complex)
    mat[idx ^ p.x_mask, idx] = phase * signs
    return mat


def observable_matrix(obs: Observable) -> np.ndarray:
    mat = np.zeros((2 ** obs.n_qubits,) * 2, dtype=complex)
    for coeff, p in obs.terms:
        mat += coeff * pauli_matrix(p)
    return mat


@dataclass(frozen=True)
class Statevector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n_qubits > MAX_STATEVECTOR_QUBITS:
            raise ValueError("statevector capped at %d qubits" % MAX_STATEVECTOR_QUBITS)
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (2 ** self.n_qubits,):
            raise ValueError("amplitude vector has wrong length")
        if abs(np.linalg.norm(amps) - 1.0) > 1e-10:
            raise ValueError("state is not normalized")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def zero(cls, n_qubits: int) -> "Statevector":
        amps = np.zeros(2 ** n_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(n_qubits, amps)

    @classmethod
    def basis(cls, n_qubits: int, index: int) -> "Statevector":
        amps = np.zeros(2 ** n_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(n_qubits, amps)

    def fidelity(self, other: "Statevector") -> float:
        return abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2

    def to_csv(self) -> str:
        """Amplitude dump (index, re, im) for debugging."""
        lines = ["index,re,im"]
        for b, a in enumerate(self.amplitudes):
            lines.append("%d,%r,%r" % (b, float(a.real), float(a.imag)))
        return "\n".join(lines) + "\n"


def apply_gate(state: Statevector, gate: Gate) -> Statevector:
    amps = _apply_unitary(state.amplitudes, gate_matrix(gate), gate.qubits, state.n_qubits)
    return Statevector(state.n_qubits, amps)


def run_array(circuit: QuantumCircuit, amps: np.ndarray) -> np.ndarray:
    """Gate application on a raw amplitude array (no per-gate norm checks)."""
    n = circuit.n_qubits
    for layer in circuit.layers:
        for gate in layer.gates:
            amps = _apply_unitary(amps, gate_matrix(gate), gate.qubits, n)
    return amps


def run(circuit: QuantumCircuit, initial: Statevector | None = None) -> Statevector:
    if initial is None:
        initial = Statevector.zero(circuit.n_qubits)
    if initial.n_qubits != circuit.n_qubits:
        raise ValueError("state and circuit sizes differ")
    state = initial
    for layer in circuit.layers:
        for gate in layer.gates:
            state = apply_gate(state, gate)
    return state


def expectation(state: Statevector, obs: Observable) -> float:
    if state.n_qubits != obs.n_qubits:
        raise ValueError("state and observable sizes differ")
    return expectation_array(state.amplitudes, obs)


def expectation_array(amps: np.ndarray, obs: Observable) -> float:
    total = 0j
    for coeff, p in obs.terms:
        total += coeff * np.vdot(amps, apply_pauli_array(amps, p))
    if abs(total.imag) > 1e-10:
        raise ValueError("expectation has non-negligible imaginary part")
    return float(total.real)


def evolve_exact(hamiltonian: Observable, state: Statevector, t: float) -> Statevector:
    if hamiltonian.n_qubits > 12:
        raise ValueError("exact evolution capped at 12 qubits")
    if state.n_qubits != hamiltonian.n_qubits:
        raise ValueError("state and Hamiltonian sizes differ")
    mat = observable_matrix(hamiltonian)
    evals, evecs = np.linalg.eigh(mat)
    phases = np.exp(-1j * t * evals)
    amps = evecs @ (phases * (evecs.conj().T @ state.amplitudes))
    return Statevector(state.n_qubits, amps)


def sample_counts(state: Statevector, shots: int, seed: int, stream: int = 0) -> dict[str, int]:
    """Multinomial bitstring sample; qubit 0 is the leftmost character."""
    if shots <= 0:
        raise ValueError("shots must be positive")
    probs = np.abs(state.amplitudes) ** 2
    probs = probs / probs.sum()
    rng = philox_rng(seed, stream)
    draws = rng.multinomial(shots, probs)
    n = state.n_qubits
    counts = {}
    for b in np.nonzero(draws)[0]:
        key = "".join(str((int(b) >> k) & 1) for k in range(n))
        counts[key] = int(draws[b])
    return counts


@dataclass(frozen=True)
class DensityMatrix:
    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        if self.n_qubits > MAX_DENSITY_QUBITS:
            raise ValueError("density matrix capped at %d qubits" % MAX_DENSITY_QUBITS)
        mat = np.asarray(self.matrix, dtype=complex)
        dim = 2 ** self.n_qubits
        if mat.shape != (dim, dim):
            raise ValueError("density matrix has wrong shape")
        if np.abs(mat - mat.conj().T).max() > 1e-10:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(mat).real - 1.0) > 1e-10:
            raise ValueError("density matrix trace is not 1")
        if np.linalg.eigvalsh(mat).min() < -1e-9:
            raise ValueError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def from_statevector(cls, state: Statevector) -> "DensityMatrix":
        return cls(state.n_qubits, np.outer(state.amplitudes, state.amplitudes.conj()))

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def expectation(self, obs: Observable) -> float:
        total = 0j
        for coeff, p in obs.terms:
            total += coeff * np.trace(pauli_matrix(p) @ self.matrix)
        if abs(total.imag) > 1e-10:
            raise ValueError("expectation has non-negligible imaginary part")
        return float(total.real)


def _conjugate_matrix(mat_rho: np.ndarray, u: np.ndarray, qubits, n: int) -> np.ndarray:
    # rho -> U rho U^dag, applying U to columns then rows
    out = _apply_unitary(mat_rho, u, qubits, n)
    out = _apply_unitary(out.conj().T, u, qubits, n)
    return out.conj().T


def density_run(circuit: QuantumCircuit, rho0: DensityMatrix, channels=None) -> DensityMatrix:
    """Run unitary layers on a density matrix; `channels` maps a layer index
    to a callable applied to the raw matrix after that layer."""
    if circuit.n_qubits != rho0.n_qubits:
        raise ValueError("state and circuit sizes differ")
    n = circuit.n_qubits
    mat = rho0.matrix
    channels = channels or {}
    for i, layer in enumerate(circuit.layers):
        for gate in layer.gates:
            mat = _conjugate_matrix(mat, gate_matrix(gate), gate.qubits, n)
        if i in channels:
            mat = channels[i](mat)
            if abs(np.trace(mat).real - 1.0) > 1e-10:
                raise ValueError("channel did not preserve the trace")
    return DensityMatrix(n, mat)
