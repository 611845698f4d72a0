import numpy as np
import pytest
from scipy.linalg import expm

from qmit.circuits import Layer, QuantumCircuit
from qmit.hamiltonian import (
    SpinChainHamiltonian,
    _bond_template,
    build,
    choose_steps,
    commutator_norm_sum,
    trotter_bound_order1,
    trotter_circuit,
)
from qmit.pauli import Observable, parse_pauli
from qmit.simulator import observable_matrix, run_array


def circuit_unitary(circuit: QuantumCircuit) -> np.ndarray:
    return run_array(circuit, np.eye(2 ** circuit.n_qubits, dtype=complex))


def heisenberg_bond() -> np.ndarray:
    return sum(observable_matrix(
        Observable.from_label(lab)) for lab in ("XX", "YY", "ZZ"))


@pytest.mark.parametrize("theta", [0.0, 0.3, -0.7, 1.9, np.pi])
def test_bond_template_exact(theta):
    circuit = QuantumCircuit(2, [Layer(g) for g in _bond_template(0, 1, theta)])
    u = circuit_unitary(circuit)
    expected = expm(-1j * theta * heisenberg_bond())
    # exact including global phase
    assert np.abs(u - expected).max() < 1e-12


def test_build_field_terms():
    chain = build(2, fields=(0.0, 0.0))
    assert len(chain.observable()) == 3  # zero fields dropped
    chain = build(3, seed=4)
    assert len(chain.observable()) == 2 * 3 + 3  # 3 bond kinds per bond + fields
    assert all(abs(h) <= 1 for h in chain.fields)


def test_build_deterministic():
    assert build(5, seed=9).fields == build(5, seed=9).fields


def test_chain_validation():
    with pytest.raises(ValueError):
        SpinChainHamiltonian(1, (0.0,))
    with pytest.raises(ValueError):
        SpinChainHamiltonian(2, (0.0, 1.5))


def test_cnot_count_formula():
    # 3 CNOTs per bond exponential, n-1 bonds, once per step
    chain = build(100)
    circuit = trotter_circuit(chain, 1.0, 100, order=1)
    assert circuit.cnot_count() == 3 * 99 * 100 == 29700
    chain = build(5, seed=1)
    for r in (1, 3):
        for order in (1, 2):
            assert trotter_circuit(chain, 1.0, r, order).cnot_count() == 3 * 4 * r


def test_trotter_error_below_bound_and_monotone():
    chain = build(6, seed=3)
    exact = expm(-1j * observable_matrix(chain.observable()))
    prev = np.inf
    for r in (2, 4, 8, 16):
        u = circuit_unitary(trotter_circuit(chain, 1.0, r, order=1))
        err = np.linalg.norm(u - exact, 2)
        assert err <= trotter_bound_order1(chain, 1.0, r)
        assert err < prev
        prev = err


def test_order2_beats_order1():
    chain = build(5, seed=8)
    exact = expm(-1j * observable_matrix(chain.observable()))
    for r in (8, 16):
        e1 = np.linalg.norm(circuit_unitary(trotter_circuit(chain, 1.0, r, 1)) - exact, 2)
        e2 = np.linalg.norm(circuit_unitary(trotter_circuit(chain, 1.0, r, 2)) - exact, 2)
        assert e2 <= e1


def test_order2_second_order_convergence():
    chain = build(5, seed=8)
    exact = expm(-1j * observable_matrix(chain.observable()))
    errs = [np.linalg.norm(circuit_unitary(trotter_circuit(chain, 1.0, r, 2)) - exact, 2)
            for r in (16, 32)]
    assert errs[0] / errs[1] > 3.0  # ~4x per step doubling


def test_bound_scales_inverse_in_steps():
    chain = build(4, seed=2)
    b2 = trotter_bound_order1(chain, 1.0, 2)
    b4 = trotter_bound_order1(chain, 1.0, 4)
    assert b4 == pytest.approx(b2 / 2)


def test_choose_steps_minimal():
    chain = build(4, seed=2)
    eps = 0.5
    r = choose_steps(chain, 1.0, eps)
    assert trotter_bound_order1(chain, 1.0, r) <= eps
    if r > 1:
        assert trotter_bound_order1(chain, 1.0, r - 1) > eps


def test_commutator_sum_skips_disjoint_and_commuting():
    # ZZ terms all commute with each other and the fields
    chain = build(3, fields=(0.0, 0.0, 0.0))
    obs = Observable.from_terms(
        3, [(1.0, parse_pauli("ZZI")), (1.0, parse_pauli("IZZ"))])
    assert commutator_norm_sum(obs) == 0.0


def test_invalid_args():
    chain = build(3)
    with pytest.raises(ValueError):
        trotter_circuit(chain, 1.0, 0)
    with pytest.raises(ValueError):
        trotter_circuit(chain, 1.0, 1, order=3)
    with pytest.raises(ValueError):
        choose_steps(chain, 1.0, 0.0)
