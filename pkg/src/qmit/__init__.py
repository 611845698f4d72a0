"""qmit: a desk-scale quantum error-mitigation testbed.

Exact Pauli algebra and statevector/density simulation, a Heisenberg-chain
Trotter benchmark, sparse Pauli-Lindblad noise with rate learning,
probabilistic error cancellation and zero-noise extrapolation, wire-cut
circuit knitting, variational quantum time evolution, and closed-form
fault-tolerance/modularity cost models, all behind one CLI.
"""

__version__ = "0.1.0"

from .pauli import Observable, PauliString, format_pauli, parse_pauli
from .circuits import Gate, Layer, QuantumCircuit
from .simulator import (
    DensityMatrix,
    Statevector,
    evolve_exact,
    expectation,
    philox_rng,
    run,
    sample_counts,
)
from .hamiltonian import (
    SpinChainHamiltonian,
    build,
    choose_steps,
    trotter_bound_order1,
    trotter_circuit,
)
from .noise import (
    PauliLindbladModel,
    UnidentifiableModelError,
    learn_rates,
    learn_rates_from_model,
    pauli_fidelity,
    virtual_distillation_expectation,
)
from .pec import (
    MitigatedEstimate,
    QuasiProbabilityDecomposition,
    gamma_total,
    invert_channel,
    noisy_expectation,
    overhead_table,
    pec_estimate,
    runtime_estimate,
    sampling_overhead,
    zne_estimate,
)
from .knit import CutPlan, execute_plan, plan_wire_cut
from .varqte import (
    Ansatz,
    FixedElement,
    RotationElement,
    VarQTETrajectory,
    compute_M,
    compute_V,
    compute_mclachlan,
    evolve,
    hardware_efficient_ansatz,
    state_and_derivatives,
)
from .resources import (
    FtOverheadReport,
    ModularSystem,
    cnot_volume,
    ft_report,
    modular_scale,
    t_volume,
)
from .circuit_io import ParseError, parse, serialize

__all__ = [
    "__version__",
    "Observable", "PauliString", "format_pauli", "parse_pauli",
    "Gate", "Layer", "QuantumCircuit",
    "DensityMatrix", "Statevector", "evolve_exact", "expectation",
    "philox_rng", "run", "sample_counts",
    "SpinChainHamiltonian", "build", "choose_steps",
    "trotter_bound_order1", "trotter_circuit",
    "PauliLindbladModel", "UnidentifiableModelError", "learn_rates",
    "learn_rates_from_model", "pauli_fidelity",
    "virtual_distillation_expectation",
    "MitigatedEstimate", "QuasiProbabilityDecomposition", "gamma_total",
    "invert_channel", "noisy_expectation", "overhead_table", "pec_estimate",
    "runtime_estimate", "sampling_overhead", "zne_estimate",
    "CutPlan", "execute_plan", "plan_wire_cut",
    "Ansatz", "FixedElement", "RotationElement", "VarQTETrajectory",
    "compute_M", "compute_V", "compute_mclachlan", "evolve",
    "hardware_efficient_ansatz", "state_and_derivatives",
    "FtOverheadReport", "ModularSystem", "cnot_volume", "ft_report",
    "modular_scale", "t_volume",
    "ParseError", "parse", "serialize",
]
