"""Closed-form resource calculators: surface-code space-time volumes per
logical gate and the modular-system scale formula.

The per-gate volume fits (physical qubits x syndrome cycles, as a function
of total logical circuit size N) are

    cnot_volume(N) = 1610 + 45 (log10 N)^2.77
    t_volume(N)    = 3.13 + 3220 (log10 N)^3.20

Both are evaluated literally; outputs stay real (the fits are approximate,
so rounding to integer qubits would be false precision).
"""
from __future__ import annotations

import math
from dataclasses import dataclass


def cnot_volume(n: float) -> float:
    """Space-time volume of one logical CNOT in a circuit of size N."""
    if n < 1:
        raise ValueError("circuit size N must be >= 1")
    return 1610.0 + 45.0 * math.log10(n) ** 2.77


def t_volume(n: float) -> float:
    """Space-time volume of one logical T gate in a circuit of size N."""
    if n < 1:
        raise ValueError("circuit size N must be >= 1")
    return 3.13 + 3220.0 * math.log10(n) ** 3.20


@dataclass(frozen=True)
class FtOverheadReport:
    n_cnot: float
    n_t: float
    circuit_size: float  # N used in the per-gate fits
    cnot_volume: float  # per gate
    t_volume: float  # per gate
    total_cnot_volume: float
    total_t_volume: float

    @property
    def total_volume(self) -> float:
        return self.total_cnot_volume + self.total_t_volume


def ft_report(n_cnot_logical: float, n_t_logical: float,
              circuit_size: float | None = None) -> FtOverheadReport:
    """Totals = counts x per-gate volumes at N = total circuit size.

    Because the per-gate volumes depend on N, totals are not additive
    across reports; they only grow with the counts.  The fits assume all
    logical error budgets at their defaults, so real circuits with tighter
    fidelity targets cost more.
    """
    if n_cnot_logical < 0 or n_t_logical < 0:
        raise ValueError("gate counts must be nonnegative")
    n = circuit_size if circuit_size is not None else n_cnot_logical + n_t_logical
    if n < 1:
        n = 1.0
    vc = cnot_volume(n)
    vt = t_volume(n)
    return FtOverheadReport(
        n_cnot=n_cnot_logical,
        n_t=n_t_logical,
        circuit_size=n,
        cnot_volume=vc,
        t_volume=vt,
        total_cnot_volume=n_cnot_logical * vc,
        total_t_volume=n_t_logical * vt,
    )


@dataclass(frozen=True)
class ModularSystem:
    """q qubits/chip, m chips/QPU, l microwave-linked QPUs, t optically
    linked groups, p-fold classical parallelization."""

    q: int
    m: int
    l: int
    t: int
    p: int

    def __post_init__(self):
        for name in ("q", "m", "l", "t", "p"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValueError("factor %s must be an integer >= 1" % name)


def modular_scale(system: ModularSystem) -> int:
    """Total effective qubit count n = q * m * l * t * p."""
    return system.q * system.m * system.l * system.t * system.p
