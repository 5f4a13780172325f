"""Bundled reference data."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .pauli import Hamiltonian, load_hamiltonian

BE2_SUBSET32_COEFFICIENT = 0.011922474


def data_path(name: str) -> Path:
    return Path(str(resources.files("mbqspat") / "data" / name))


def be2() -> Hamiltonian:
    """Be2 in a 6-qubit active space, 62 terms."""
    return load_hamiltonian(data_path("be2.txt"))


def h2() -> Hamiltonian:
    """H2 / 6-31G, 8 qubits, 185 terms."""
    return load_hamiltonian(data_path("h2.txt"))


def subset32_entry() -> dict:
    """The reference library entry for Be2 subset 32 (one-to-one strategy)."""
    with open(data_path("be2_oo_subset32.jsonl"), encoding="utf-8") as fh:
        return json.loads(fh.readline())
