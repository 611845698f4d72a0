import numpy as np
import pytest

from qmit.circuits import Gate, Layer, QuantumCircuit
from qmit.noise import PauliLindbladModel
from qmit.pauli import Observable, parse_pauli


def benchmark_circuit() -> QuantumCircuit:
    """4 qubits, 4 two-qubit layers, with a well-polarized ZIIZ observable."""
    return QuantumCircuit(4, [
        Layer([Gate("ry", (0,), 0.3), Gate("ry", (1,), 0.4),
               Gate("ry", (2,), 0.2), Gate("ry", (3,), 0.5)]),
        Layer([Gate("cx", (0, 1)), Gate("cx", (2, 3))]),
        Layer([Gate("rz", (0,), 0.3), Gate("ry", (2,), -0.5)]),
        Layer([Gate("cx", (1, 2))]),
        Layer([Gate("rx", (1,), 0.2), Gate("rz", (3,), 1.1)]),
        Layer([Gate("cx", (0, 1)), Gate("cx", (2, 3))]),
        Layer([Gate("cx", (1, 2))]),
    ])


def benchmark_model(total_rate: float) -> PauliLindbladModel:
    gens = ["XIII", "IYII", "IIXI", "IIIX", "XXII"]
    lam = total_rate / len(gens)
    return PauliLindbladModel(4, tuple((parse_pauli(g), lam) for g in gens))


def benchmark_observable() -> Observable:
    return Observable.from_label("ZIIZ")


def bell_circuit() -> QuantumCircuit:
    return QuantumCircuit(2, [Layer([Gate("h", (0,))]),
                              Layer([Gate("cx", (0, 1))])])


def random_circuit(rng: np.random.Generator, n_qubits: int,
                   n_layers: int) -> QuantumCircuit:
    one_q = ["h", "s", "sdg", "x", "y", "z"]
    rot_1q = ["rx", "ry", "rz"]
    rot_2q = ["rxx", "ryy", "rzz"]
    layers = []
    for _ in range(n_layers):
        free = list(range(n_qubits))
        rng.shuffle(free)
        gates = []
        while free:
            if len(free) >= 2 and rng.random() < 0.4:
                a, b = free.pop(), free.pop()
                name = rng.choice(["cx", "swap"] + rot_2q)
                param = float(rng.uniform(-np.pi, np.pi)) if name in rot_2q else None
                gates.append(Gate(name, (a, b), param))
            else:
                q = free.pop()
                if rng.random() < 0.5:
                    gates.append(Gate(str(rng.choice(one_q)), (q,)))
                else:
                    gates.append(Gate(str(rng.choice(rot_1q)), (q,),
                                      float(rng.uniform(-np.pi, np.pi))))
        layers.append(Layer(gates))
    return QuantumCircuit(n_qubits, layers)
