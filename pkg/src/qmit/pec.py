"""Probabilistic error cancellation: quasi-probability channel inversion,
the sampled estimator, overhead and runtime cost models, and zero-noise
extrapolation.

Sampling is deterministic and worker-count independent: samples are split
into fixed-size chunks, chunk c draws from Philox stream (seed, c), and
chunk results are merged in chunk order.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .circuits import QuantumCircuit
from .noise import PauliLindbladModel
from .pauli import Observable, PauliString
from .simulator import (
    DensityMatrix,
    _apply_unitary,
    apply_pauli_array,
    density_run,
    expectation_array,
    gate_matrix,
    philox_rng,
)

CHUNK_SIZE = 1024


@dataclass(frozen=True)
class QuasiProbabilityDecomposition:
    """Signed inverse of a Pauli-Lindblad channel.

    Per generator: weight a_i = (1 + e^{2 lam}) / 2 for "do nothing" and
    b_i = (1 - e^{2 lam}) / 2 <= 0 for "insert P_i"; a_i + b_i = 1 and
    gamma_i = |a_i| + |b_i| = e^{2 lam}.
    """

    model: PauliLindbladModel
    entries: tuple[tuple[PauliString, float, float], ...]  # (pauli, a, b)

    @property
    def gamma_total(self) -> float:
        return float(np.exp(2.0 * self.model.total_rate))


def invert_channel(model: PauliLindbladModel) -> QuasiProbabilityDecomposition:
    entries = []
    for p, lam in model.generators:
        e = np.exp(2.0 * lam)
        entries.append((p, (1.0 + e) / 2.0, (1.0 - e) / 2.0))
    return QuasiProbabilityDecomposition(model, tuple(entries))


def gamma_total(per_layer_models) -> float:
    return float(np.exp(2.0 * sum(m.total_rate for m in per_layer_models)))


@dataclass(frozen=True)
class MitigatedEstimate:
    value: float
    std_error: float
    samples: int
    gamma_total: float
    mode: str


def _compile(circuit: QuantumCircuit, per_layer_models):
    """Flatten the circuit into per-layer gate ops plus the noise/inverse
    insertion table attached to each two-qubit layer."""
    two_q = circuit.two_qubit_layer_indices()
    if len(per_layer_models) != len(two_q):
        raise ValueError(
            "expected %d per-layer models, got %d" % (len(two_q), len(per_layer_models))
        )
    model_for_layer = dict(zip(two_q, per_layer_models))
    compiled = []
    for i, layer in enumerate(circuit.layers):
        ops = [(gate_matrix(g), g.qubits) for g in layer.gates]
        gens = None
        if i in model_for_layer:
            gens = [
                (p, (1.0 - np.exp(-2.0 * lam)) / 2.0)
                for p, lam in model_for_layer[i].generators
            ]
        compiled.append((ops, gens))
    return compiled


def _one_sample(compiled, n, obs, mode, rng):
    amps = np.zeros(2 ** n, dtype=complex)
    amps[0] = 1.0
    sign = 1.0
    for ops, gens in compiled:
        for mat, qubits in ops:
            amps = _apply_unitary(amps, mat, qubits, n)
        if gens is None:
            continue
        draws = rng.random(2 * len(gens))
        x = z = 0
        for k, (p, q_ins) in enumerate(gens):
            if draws[k] < q_ins:  # stochastic noise realization
                x ^= p.x_mask
                z ^= p.z_mask
            if draws[len(gens) + k] < q_ins:  # signed inverse sample
                x ^= p.x_mask
                z ^= p.z_mask
                sign = -sign
        if x or z:
            amps = apply_pauli_array(amps, PauliString(n, x, z))
    if mode == "analytic":
        return sign * expectation_array(amps, obs)
    # shot mode: one +-1 eigenvalue draw per observable term
    value = 0.0
    for coeff, p in obs.terms:
        ev = float(np.vdot(amps, apply_pauli_array(amps, p)).real)
        outcome = 1.0 if rng.random() < (1.0 + ev) / 2.0 else -1.0
        value += coeff * outcome
    return sign * value


def _pec_chunk(args):
    compiled, n, obs, mode, seed, chunk_index, count = args
    rng = philox_rng(seed, chunk_index)
    out = np.empty(count)
    for i in range(count):
        out[i] = _one_sample(compiled, n, obs, mode, rng)
    return chunk_index, out


def pec_estimate(
    circuit: QuantumCircuit,
    per_layer_models,
    observable: Observable,
    samples: int,
    seed: int,
    mode: str = "analytic",
    workers: int = 1,
) -> MitigatedEstimate:
    """Unbiased PEC estimator: gamma_total times the mean of signed
    per-sample observable records."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if mode not in ("analytic", "shot"):
        raise ValueError("mode must be 'analytic' or 'shot'")
    compiled = _compile(circuit, per_layer_models)
    n = circuit.n_qubits
    gamma = gamma_total(per_layer_models)
    chunks = []
    start = 0
    index = 0
    while start < samples:
        count = min(CHUNK_SIZE, samples - start)
        chunks.append((compiled, n, observable, mode, seed, index, count))
        start += count
        index += 1
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_pec_chunk, chunks))
        results.sort(key=lambda item: item[0])
        values = np.concatenate([arr for _, arr in results])
    else:
        values = np.concatenate([_pec_chunk(c)[1] for c in chunks])
    mean = float(values.mean())
    if samples > 1:
        std = float(values.std(ddof=1))
        std_error = gamma * std / np.sqrt(samples)
    else:
        std_error = 0.0
    return MitigatedEstimate(
        value=gamma * mean,
        std_error=std_error,
        samples=samples,
        gamma_total=gamma,
        mode=mode,
    )


def enumerate_signed(
    circuit: QuantumCircuit, per_layer_models, observable: Observable
) -> float:
    """Exhaustive signed enumeration of every noise/inverse insertion
    pattern, weighted by its signed probability. Equals the noiseless
    expectation (estimator unbiasedness); exponential in generator count."""
    compiled = _compile(circuit, per_layer_models)
    n = circuit.n_qubits

    def recurse(layer_idx, amps, weight):
        if layer_idx == len(compiled):
            return weight * expectation_array(amps, observable)
        ops, gens = compiled[layer_idx]
        for mat, qubits in ops:
            amps = _apply_unitary(amps, mat, qubits, n)
        if gens is None:
            return recurse(layer_idx + 1, amps, weight)

        # branch over (noise inserted?, inverse inserted?) per generator
        def gen_branch(k, amps_k, w_k):
            if k == len(gens):
                return recurse(layer_idx + 1, amps_k, w_k)
            p, q_ins = gens[k]
            e2l = 1.0 - 2.0 * q_ins  # e^{-2 lam}
            a = (1.0 + 1.0 / e2l) / 2.0  # signed inverse weight, "do nothing"
            b = (1.0 - 1.0 / e2l) / 2.0  # signed inverse weight, "insert P"
            sub = 0.0
            flipped = apply_pauli_array(amps_k, p)
            for noise_p, noise_amp in ((1.0 - q_ins, amps_k), (q_ins, flipped)):
                sub += gen_branch(k + 1, noise_amp, w_k * noise_p * a)
                sub += gen_branch(
                    k + 1, apply_pauli_array(noise_amp, p), w_k * noise_p * b
                )
            return sub

        return gen_branch(0, amps, weight)

    initial = np.zeros(2 ** n, dtype=complex)
    initial[0] = 1.0
    return recurse(0, initial, 1.0)


def sampling_overhead(per_layer_models, eps: float) -> float:
    """Circuit instances needed for precision eps: gamma_total^2 / eps^2."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    return gamma_total(per_layer_models) ** 2 / eps ** 2


def runtime_estimate(n: int, d: int, lambda_bar: float, beta: float) -> float:
    """Total runtime d * (e^{4 lambda_bar})^{d n} * beta in units of beta."""
    if n < 0 or d < 0 or lambda_bar < 0 or beta < 0:
        raise ValueError("inputs must be nonnegative")
    gamma_bar = np.exp(4.0 * lambda_bar)
    return float(d * gamma_bar ** (d * n) * beta)


def overhead_table(
    n: int,
    trotter_steps_list,
    lambda_grid,
    eps: float = 1.0,
    layers_per_step: int = 2,
):
    """Required circuit instances per (steps, lambda) cell; lambda is the
    per-qubit per-layer average rate."""
    steps_list = list(trotter_steps_list)
    grid = list(lambda_grid)
    if not steps_list or not grid:
        raise ValueError("grids must be nonempty")
    if eps <= 0:
        raise ValueError("eps must be positive")
    rows = []
    for steps in steps_list:
        for lam in grid:
            d = layers_per_step * steps
            instances = float(np.exp(4.0 * lam * d * n)) / eps ** 2
            rows.append({"lambda": lam, "steps": steps, "layers": d, "instances": instances})
    return rows


def noisy_expectation(
    circuit: QuantumCircuit, per_layer_models, observable: Observable
) -> float:
    """Exact (density-matrix) expectation with the channel applied after
    every two-qubit layer."""
    if isinstance(per_layer_models, PauliLindbladModel):
        per_layer_models = [per_layer_models] * len(circuit.two_qubit_layer_indices())
    two_q = circuit.two_qubit_layer_indices()
    if len(per_layer_models) != len(two_q):
        raise ValueError("one model per two-qubit layer required")
    channels = {
        i: model.apply_to_matrix for i, model in zip(two_q, per_layer_models)
    }
    n = circuit.n_qubits
    rho0 = np.zeros((2 ** n, 2 ** n), dtype=complex)
    rho0[0, 0] = 1.0
    rho = density_run(circuit, DensityMatrix(n, rho0), channels)
    return rho.expectation(observable)


def zne_estimate(
    circuit: QuantumCircuit,
    model: PauliLindbladModel,
    observable: Observable,
    scale_factors=(1.0, 2.0, 3.0),
    order: int = 1,
) -> float:
    """Richardson-style extrapolation: evaluate the noisy expectation with
    all rates scaled by c, fit a degree-`order` polynomial in c, return the
    c = 0 intercept."""
    cs = [float(c) for c in scale_factors]
    if len(set(cs)) != len(cs):
        raise ValueError("scale factors must be distinct")
    if any(c < 1.0 for c in cs):
        raise ValueError("scale factors must be >= 1")
    if 1.0 not in cs:
        raise ValueError("scale factors must include 1")
    if len(cs) < order + 1:
        raise ValueError("need at least order + 1 scale factors")
    values = [noisy_expectation(circuit, model.scaled(c), observable) for c in cs]
    coeffs = np.polyfit(cs, values, order)
    return float(np.polyval(coeffs, 0.0))
