"""Sparse Pauli-Lindblad noise channels: construction, exact and stochastic
application, Pauli fidelities, decay-based rate learning, and virtual
distillation.

The channel factorizes over generators because each generator acts
diagonally in the Pauli basis: generator (P, lam) maps
rho -> w rho + (1 - w) P rho P with w = (1 + exp(-2 lam)) / 2.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import nnls

from .pauli import Observable, PauliString, format_pauli, parse_pauli
from .simulator import (
    DensityMatrix,
    Statevector,
    apply_pauli_array,
    pauli_matrix,
    philox_rng,
)


class UnidentifiableModelError(ValueError):
    """Probe set cannot distinguish all candidate generators."""

    def __init__(self, null_space: np.ndarray):
        self.null_space = null_space
        super().__init__(
            "anticommutation matrix is rank deficient; %d unidentifiable direction(s)"
            % null_space.shape[1]
        )


@dataclass(frozen=True)
class PauliLindbladModel:
    """Generators (P_i, lam_i) with lam_i >= 0; duplicates merged by summing."""

    n_qubits: int
    generators: tuple[tuple[PauliString, float], ...]

    def __post_init__(self):
        merged: dict[tuple[int, int], float] = {}
        order = []
        for p, lam in self.generators:
            if p.n_qubits != self.n_qubits:
                raise ValueError("generator acts on wrong number of qubits")
            if p.is_identity:
                raise ValueError("identity generator is not allowed")
            if lam < 0:
                raise ValueError("rates must be nonnegative")
            key = (p.x_mask, p.z_mask)
            if key not in merged:
                merged[key] = 0.0
                order.append(key)
            merged[key] += float(lam)
        normalized = tuple(
            (PauliString(self.n_qubits, k[0], k[1]), merged[k]) for k in order
        )
        object.__setattr__(self, "generators", normalized)

    @property
    def total_rate(self) -> float:
        return sum(lam for _, lam in self.generators)

    def scaled(self, factor: float) -> "PauliLindbladModel":
        if factor < 0:
            raise ValueError("scale factor must be nonnegative")
        return PauliLindbladModel(
            self.n_qubits, tuple((p, lam * factor) for p, lam in self.generators)
        )

    def apply_to_matrix(self, mat: np.ndarray) -> np.ndarray:
        """Exact channel action on a raw density matrix."""
        for p, lam in self.generators:
            w = (1.0 + np.exp(-2.0 * lam)) / 2.0
            pm = pauli_matrix(p)
            mat = w * mat + (1.0 - w) * (pm @ mat @ pm.conj().T)
        return mat


def pauli_fidelity(model: PauliLindbladModel, q: PauliString) -> float:
    """Channel eigenvalue on Pauli q: exp(-2 sum of anticommuting rates)."""
    if q.n_qubits != model.n_qubits:
        raise ValueError("Pauli acts on wrong number of qubits")
    exponent = sum(lam for p, lam in model.generators if not p.commutes(q))
    return float(np.exp(-2.0 * exponent))


def stochastic_insertions(model: PauliLindbladModel, rng: np.random.Generator) -> list[PauliString]:
    """One channel realization: generator i inserted with probability
    (1 - exp(-2 lam_i)) / 2, independently."""
    inserted = []
    for p, lam in model.generators:
        if rng.random() < (1.0 - np.exp(-2.0 * lam)) / 2.0:
            inserted.append(p)
    return inserted


def apply_stochastic(
    state: Statevector, model: PauliLindbladModel, rng: np.random.Generator
) -> tuple[Statevector, list[PauliString]]:
    inserted = stochastic_insertions(model, rng)
    amps = state.amplitudes
    for p in inserted:
        amps = apply_pauli_array(amps, p)
    return Statevector(state.n_qubits, amps), inserted


def apply_exact(rho: DensityMatrix, model: PauliLindbladModel) -> DensityMatrix:
    if rho.n_qubits > 6:
        raise ValueError("exact channel application capped at 6 qubits")
    if rho.n_qubits != model.n_qubits:
        raise ValueError("state and model sizes differ")
    return DensityMatrix(rho.n_qubits, model.apply_to_matrix(rho.matrix))


def virtual_distillation_expectation(rho: DensityMatrix, obs: Observable) -> float:
    """Tr(O rho^2) / Tr(rho^2)."""
    purity = rho.purity()
    if purity < 1e-12:
        raise ValueError("state purity too small for virtual distillation")
    rho2 = rho.matrix @ rho.matrix
    total = 0j
    for coeff, p in obs.terms:
        total += coeff * np.trace(pauli_matrix(p) @ rho2)
    return float(total.real) / purity


# ---------------------------------------------------------------------------
# rate learning from decay data

DEFAULT_DEPTHS = (1, 2, 4, 8, 16)

_TWO_QUBIT_LABELS = (("X", "X"), ("Y", "Y"), ("Z", "Z"), ("X", "Z"), ("Z", "X"))


def default_probes(n_qubits: int, edges) -> list[PauliString]:
    """Weight-1 Paulis on every qubit plus weight-2 Paulis
    {XX, YY, ZZ, XZ, ZX} on every coupling-graph edge."""
    probes = []
    for q in range(n_qubits):
        for kind in "XYZ":
            probes.append(PauliString.single(n_qubits, q, kind))
    for a, b in edges:
        for ka, kb in _TWO_QUBIT_LABELS:
            pa = PauliString.single(n_qubits, a, ka)
            pb = PauliString.single(n_qubits, b, kb)
            pab, _ = pa.multiply(pb)
            probes.append(pab)
    return probes


def line_edges(n_qubits: int) -> list[tuple[int, int]]:
    return [(j, j + 1) for j in range(n_qubits - 1)]


def synthesize_decay_data(
    model: PauliLindbladModel,
    probes,
    depths=DEFAULT_DEPTHS,
    shots: int | None = None,
    seed: int = 0,
):
    """Decay curves <Q>_d for each probe: prepare a +1 eigenstate of Q and
    apply the channel d times, so <Q>_d = f(Q)^d exactly. With `shots` the
    +-1 measurement outcomes are sampled binomially (per-probe RNG stream).
    """
    data = {}
    for idx, q in enumerate(probes):
        f = pauli_fidelity(model, q)
        rng = philox_rng(seed, idx) if shots else None
        points = []
        for d in depths:
            value = f ** d
            if shots:
                k = rng.binomial(shots, (1.0 + value) / 2.0)
                value = 2.0 * k / shots - 1.0
            points.append((d, value))
        data[q] = points
    return data


def anticommutation_matrix(probes, candidates) -> np.ndarray:
    a = np.zeros((len(probes), len(candidates)))
    for i, q in enumerate(probes):
        for j, p in enumerate(candidates):
            if not p.commutes(q):
                a[i, j] = 1.0
    return a


def learn_rates(decay_data, candidates, n_qubits: int):
    """Fit per-probe decays log<Q>_d = d log f by least squares, then solve
    -1/2 log f = A lam by nonnegative least squares.

    Returns (model, residuals) where residuals maps each probe to the
    per-probe misfit A lam - b. Depths with nonpositive expectations are
    dropped; a probe with fewer than two usable depths is an error.
    """
    probes = list(decay_data.keys())
    a = anticommutation_matrix(probes, candidates)
    rank = np.linalg.matrix_rank(a)
    if rank < len(candidates):
        _, sv, vt = np.linalg.svd(a)
        null = vt[rank:].T
        raise UnidentifiableModelError(null)
    b = np.zeros(len(probes))
    for i, q in enumerate(probes):
        usable = [(d, v) for d, v in decay_data[q] if v > 0.0]
        if len(usable) < 2:
            raise ValueError(
                "probe %s has fewer than 2 usable depths" % format_pauli(q)
            )
        ds = np.array([d for d, _ in usable], dtype=float)
        logs = np.log([v for _, v in usable])
        slope = float(ds @ logs) / float(ds @ ds)
        b[i] = -0.5 * slope
    rates, _ = nnls(a, b)
    misfit = a @ rates - b
    residuals = {q: float(misfit[i]) for i, q in enumerate(probes)}
    model = PauliLindbladModel(
        n_qubits,
        tuple((p, float(lam)) for p, lam in zip(candidates, rates)),
    )
    return model, residuals


def learn_rates_from_model(
    model: PauliLindbladModel,
    probes=None,
    candidates=None,
    depths=DEFAULT_DEPTHS,
    shots: int | None = None,
    seed: int = 0,
):
    """End-to-end learning round trip against a planted model."""
    n = model.n_qubits
    if probes is None:
        probes = default_probes(n, line_edges(n))
    if candidates is None:
        candidates = default_probes(n, line_edges(n))
    data = synthesize_decay_data(model, probes, depths, shots=shots, seed=seed)
    return learn_rates(data, candidates, n)


# ---------------------------------------------------------------------------
# noise model files

def dumps(model: PauliLindbladModel) -> str:
    """Serialize as one `<label> <rate>` record per generator; rates are
    shortest round-trip decimals."""
    lines = ["qubits %d" % model.n_qubits]
    for p, lam in model.generators:
        lines.append("%s %r" % (format_pauli(p), lam))
    return "\n".join(lines) + "\n"


def loads(text: str) -> PauliLindbladModel:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("qubits "):
        raise ValueError("noise model file must start with 'qubits <n>'")
    try:
        n = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise ValueError("bad qubit count in noise model header") from None
    generators = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError("bad noise model record: %r" % ln)
        p = parse_pauli(parts[0], n)
        generators.append((p, float(parts[1])))
    return PauliLindbladModel(n, tuple(generators))
