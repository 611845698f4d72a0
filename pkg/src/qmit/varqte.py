"""Variational quantum time evolution.

The ansatz is an ordered list of parameterized Pauli rotations
exp(-i theta_p G_p / 2) interleaved with fixed gates.  Projecting the
Schroedinger equation onto the ansatz manifold gives a linear system in
theta-dot; two variants are provided:

* ``tdvp``: M theta-dot = V with M_pq = Im<d_p phi|d_q phi> and
  V_p = -Re<d_p phi|H|phi>.  M is antisymmetric, hence singular for odd
  parameter counts and degenerate on simple real ansaetze.
* ``mclachlan`` (default): A theta-dot = C obtained by minimizing the
  norm of the projected residual (1 - |phi><phi|)(d/dt + iH)|phi>, which
  fixes the global-phase gauge:

      A_pq = Re<d_p|d_q> - b_p b_q,
      C_p  = Im<d_p|H|phi> - b_p <H>,       b_p = Im<d_p phi|phi>.

  A is the real Gram matrix of the projected derivative vectors, so it is
  symmetric positive semidefinite.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import cos, sin

import numpy as np

from .circuits import Gate
from .pauli import Observable, PauliString
from .simulator import (
    Statevector,
    _apply_unitary,
    apply_pauli_array,
    evolve_exact,
    expectation_array,
    gate_matrix,
)


@dataclass(frozen=True)
class RotationElement:
    """exp(-i theta[param_index] * generator / 2)."""

    generator: PauliString
    param_index: int


@dataclass(frozen=True)
class FixedElement:
    gate: Gate


@dataclass(frozen=True)
class Ansatz:
    """Ordered rotation/fixed elements on ``n_qubits`` qubits.

    Parameters may be tied: several rotations can share a param_index, in
    which case derivatives follow the chain rule (insertion sums).
    """

    n_qubits: int
    elements: tuple

    def __post_init__(self):
        indices = sorted({e.param_index for e in self.elements
                          if isinstance(e, RotationElement)})
        if not indices:
            raise ValueError("ansatz has no rotation elements")
        if indices != list(range(len(indices))):
            raise ValueError("parameter indices must be 0..k-1 with no gaps")
        for e in self.elements:
            if isinstance(e, RotationElement):
                if e.generator.n_qubits != self.n_qubits:
                    raise ValueError("generator acts on wrong number of qubits")
                if e.generator.is_identity:
                    raise ValueError("identity generator has no effect")
            elif isinstance(e, FixedElement):
                if any(q >= self.n_qubits for q in e.gate.qubits):
                    raise ValueError("fixed gate qubit out of range")
            else:
                raise ValueError("unknown ansatz element %r" % (e,))

    @property
    def n_params(self) -> int:
        return 1 + max(e.param_index for e in self.elements
                       if isinstance(e, RotationElement))


def _apply_element(amps: np.ndarray, element, theta) -> np.ndarray:
    if isinstance(element, FixedElement):
        g = element.gate
        return _apply_unitary(amps, gate_matrix(g), g.qubits, int(np.log2(amps.size)))
    t = theta[element.param_index]
    return cos(t / 2) * amps - 1j * sin(t / 2) * apply_pauli_array(amps, element.generator)


def state_and_derivatives(ansatz: Ansatz, theta):
    """|phi(theta)> and the exact derivative vectors d|phi>/d theta_p.

    Each rotation contributes (-i G/2) inserted at its own position;
    contributions for a tied parameter are summed.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (ansatz.n_params,):
        raise ValueError(
            "expected %d parameters, got shape %r" % (ansatz.n_params, theta.shape)
        )
    n = ansatz.n_qubits
    amps = np.zeros(2 ** n, dtype=complex)
    amps[0] = 1.0
    prefixes = [amps]
    for element in ansatz.elements:
        amps = _apply_element(amps, element, theta)
        prefixes.append(amps)
    derivs = [np.zeros(2 ** n, dtype=complex) for _ in range(ansatz.n_params)]
    for j, element in enumerate(ansatz.elements):
        if not isinstance(element, RotationElement):
            continue
        vec = -0.5j * apply_pauli_array(prefixes[j + 1], element.generator)
        for rest in ansatz.elements[j + 1:]:
            vec = _apply_element(vec, rest, theta)
        derivs[element.param_index] += vec
    return Statevector(n, prefixes[-1]), derivs


def _obs_apply(obs: Observable, amps: np.ndarray) -> np.ndarray:
    out = np.zeros_like(amps)
    for coeff, p in obs.terms:
        out += coeff * apply_pauli_array(amps, p)
    return out


def compute_M(derivs) -> np.ndarray:
    """M_pq = Im<d_p phi | d_q phi>; antisymmetric."""
    k = len(derivs)
    m = np.zeros((k, k))
    for p in range(k):
        for q in range(k):
            m[p, q] = np.vdot(derivs[p], derivs[q]).imag
    return m


def compute_V(derivs, state: Statevector, hamiltonian: Observable) -> np.ndarray:
    """V_p = -Re<d_p phi | H | phi>."""
    h_phi = _obs_apply(hamiltonian, state.amplitudes)
    return np.array([-np.vdot(d, h_phi).real for d in derivs])


def compute_mclachlan(derivs, state: Statevector, hamiltonian: Observable):
    """Global-phase-corrected real-time McLachlan system (A, C)."""
    k = len(derivs)
    amps = state.amplitudes
    b = np.array([np.vdot(d, amps).imag for d in derivs])
    a = np.zeros((k, k))
    for p in range(k):
        for q in range(p, k):
            a[p, q] = a[q, p] = np.vdot(derivs[p], derivs[q]).real - b[p] * b[q]
    h_phi = _obs_apply(hamiltonian, amps)
    energy = np.vdot(amps, h_phi).real
    c = np.array([np.vdot(d, h_phi).imag - b[p] * energy
                  for p, d in enumerate(derivs)])
    return a, c


@dataclass
class VarQTETrajectory:
    times: np.ndarray
    thetas: np.ndarray  # shape (len(times), n_params)
    residuals: np.ndarray  # per-step ||A theta_dot - C|| at the step start
    fidelities: np.ndarray | None = None  # vs exact evolution, n <= 12

    def __post_init__(self):
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("time grid must be strictly increasing")
        if self.fidelities is not None and np.any(
            (self.fidelities < 0) | (self.fidelities > 1 + 1e-9)
        ):
            raise ValueError("fidelity outside [0, 1]")


def _theta_dot(ansatz, theta, hamiltonian, method, regularization):
    state, derivs = state_and_derivatives(ansatz, theta)
    if method == "tdvp":
        lhs = compute_M(derivs)
        rhs = compute_V(derivs, state, hamiltonian)
    else:
        lhs, rhs = compute_mclachlan(derivs, state, hamiltonian)
    solve = np.linalg.pinv(lhs + regularization * np.eye(len(rhs)), rcond=1e-10)
    dot = solve @ rhs
    residual = float(np.linalg.norm(lhs @ dot - rhs))
    return dot, residual


def evolve(
    ansatz: Ansatz,
    theta0,
    hamiltonian: Observable,
    t_final: float,
    dt: float,
    method: str = "mclachlan",
    regularization: float = 1e-6,
    residual_abort: float = np.inf,
) -> VarQTETrajectory:
    """Fixed-step RK4 integration of the variational equations of motion.

    The per-step linear system is solved by Tikhonov-regularized least
    squares (ridge on the diagonal, pseudo-inverse cutoff 1e-10).
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if regularization < 0:
        raise ValueError("regularization must be nonnegative")
    if method not in ("mclachlan", "tdvp"):
        raise ValueError("method must be 'mclachlan' or 'tdvp'")
    theta = np.array(theta0, dtype=float)
    if theta.shape != (ansatz.n_params,):
        raise ValueError("theta0 has wrong length")
    steps = max(0, int(round(t_final / dt)))
    times = [0.0]
    thetas = [theta.copy()]
    residuals = []
    for step in range(steps):
        k1, res = _theta_dot(ansatz, theta, hamiltonian, method, regularization)
        if res > residual_abort:
            raise RuntimeError("linear solve residual %.3g exceeds abort threshold" % res)
        k2, _ = _theta_dot(ansatz, theta + 0.5 * dt * k1, hamiltonian, method, regularization)
        k3, _ = _theta_dot(ansatz, theta + 0.5 * dt * k2, hamiltonian, method, regularization)
        k4, _ = _theta_dot(ansatz, theta + dt * k3, hamiltonian, method, regularization)
        theta = theta + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(theta)):
            raise RuntimeError("NaN in parameter vector at step %d" % step)
        times.append((step + 1) * dt)
        thetas.append(theta.copy())
        residuals.append(res)
    residuals.append(0.0 if not residuals else residuals[-1])
    fidelities = None
    if ansatz.n_qubits <= 12:
        fids = []
        psi0, _ = state_and_derivatives(ansatz, thetas[0])
        for t, th in zip(times, thetas):
            state, _ = state_and_derivatives(ansatz, th)
            exact = evolve_exact(hamiltonian, psi0, t)
            fids.append(min(1.0, abs(np.vdot(exact.amplitudes, state.amplitudes)) ** 2))
        fidelities = np.array(fids)
    return VarQTETrajectory(
        times=np.array(times),
        thetas=np.array(thetas),
        residuals=np.array(residuals),
        fidelities=fidelities,
    )


def hardware_efficient_ansatz(n_qubits: int, entangling_layers: int) -> Ansatz:
    """RY/RZ rotation layers separated by CNOT chains; every rotation has
    its own parameter."""
    if n_qubits < 1 or entangling_layers < 0:
        raise ValueError("bad ansatz shape")
    elements = []
    index = 0
    for layer in range(entangling_layers + 1):
        for q in range(n_qubits):
            elements.append(RotationElement(PauliString.single(n_qubits, q, "Y"), index))
            index += 1
        for q in range(n_qubits):
            elements.append(RotationElement(PauliString.single(n_qubits, q, "Z"), index))
            index += 1
        if layer < entangling_layers:
            for q in range(n_qubits - 1):
                elements.append(FixedElement(Gate("cx", (q, q + 1))))
    return Ansatz(n_qubits, tuple(elements))
