"""Compile Pauli-string Hamiltonians into measurement-based simulation patterns.

The pipeline is: parse a Hamiltonian (:mod:`mbqspat.pauli`), group its
terms into commuting subsets (:mod:`mbqspat.grouping`), synthesize circuits
(:mod:`mbqspat.circuit`), transpile them to measurement patterns
(:mod:`mbqspat.transpile`), derive flow-based metrics (:mod:`mbqspat.flow`),
validate by simulation (:mod:`mbqspat.sim`), compactify
(:mod:`mbqspat.compactify`) and store libraries (:mod:`mbqspat.io`).
"""

__version__ = "0.1.0"

from .angle import AngleExpr, parse_angle
from .circuit import Circuit, Gate, circuit_depth, optimize, synth_string_exponential, synth_subset_circuit
from .flow import FlowLayering, Metrics, compute_metrics, find_causal_flow
from .grouping import Strategy, SubsetPartition, group, validate_partition
from .pattern import OpenGraph, Pattern, concat, graph_of, shift_signals, standardize
from .pauli import Hamiltonian, PauliString, commutes, load_hamiltonian, parse_hamiltonian, parse_pauli
from .transpile import circuit_to_pattern

__all__ = [
    "AngleExpr",
    "Circuit",
    "FlowLayering",
    "Gate",
    "Hamiltonian",
    "Metrics",
    "OpenGraph",
    "Pattern",
    "PauliString",
    "Strategy",
    "SubsetPartition",
    "circuit_depth",
    "circuit_to_pattern",
    "commutes",
    "compute_metrics",
    "concat",
    "find_causal_flow",
    "graph_of",
    "group",
    "load_hamiltonian",
    "optimize",
    "parse_angle",
    "parse_hamiltonian",
    "parse_pauli",
    "shift_signals",
    "standardize",
    "synth_string_exponential",
    "synth_subset_circuit",
    "validate_partition",
]
