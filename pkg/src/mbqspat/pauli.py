"""Phase-free Pauli strings and qubit Hamiltonians.

Letter ``k`` of a Pauli word acts on qubit ``k``.  Strings are stored as two
bit-vectors in symplectic form::

    I = (0, 0)   X = (1, 0)   Y = (1, 1)   Z = (0, 1)
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}


class PauliParseError(ValueError):
    """Raised for malformed Pauli words or Hamiltonian files."""


@dataclass(frozen=True)
class PauliString:
    """An ``n_q``-qubit Pauli word without phase.

    Attributes
    ----------
    x, z : tuple of int
        Symplectic bit-vectors, one entry per qubit.
    """

    x: tuple[int, ...]
    z: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.x) != len(self.z):
            raise ValueError("x and z bit-vectors differ in length")
        if not self.x:
            raise ValueError("a Pauli string needs at least one qubit")

    @property
    def n_q(self) -> int:
        return len(self.x)

    @classmethod
    def identity(cls, n_q: int) -> PauliString:
        return cls((0,) * n_q, (0,) * n_q)

    def letter(self, k: int) -> str:
        return _BITS_LETTER[(self.x[k], self.z[k])]

    @property
    def support(self) -> tuple[int, ...]:
        """Qubits carrying a non-identity letter, ascending."""
        return tuple(k for k in range(self.n_q) if self.x[k] or self.z[k])

    def is_identity(self) -> bool:
        return not any(self.x) and not any(self.z)

    def is_diagonal(self) -> bool:
        """True for strings made only of I and Z."""
        return not any(self.x)

    def __str__(self) -> str:
        return "".join(self.letter(k) for k in range(self.n_q))

    def __repr__(self) -> str:
        return f"PauliString({str(self)!r})"

    def to_matrix(self) -> np.ndarray:
        """Dense ``2**n_q`` matrix; qubit 0 is the most significant tensor factor."""
        out = np.array([[1.0 + 0j]])
        for k in range(self.n_q):
            out = np.kron(out, PAULI_MATRICES[self.letter(k)])
        return out


PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def parse_pauli(text: str, n_q: int | None = None) -> PauliString:
    """Parse a word over ``{I, X, Y, Z}``.

    Raises
    ------
    PauliParseError
        On an illegal character or when ``len(text) != n_q``.
    """
    text = text.strip()
    if n_q is not None and len(text) != n_q:
        raise PauliParseError(f"expected {n_q} letters, got {len(text)} in {text!r}")
    try:
        bits = [_LETTER_BITS[ch] for ch in text]
    except KeyError as exc:
        raise PauliParseError(f"illegal Pauli letter {exc.args[0]!r} in {text!r}") from None
    if not bits:
        raise PauliParseError("empty Pauli string")
    return PauliString(tuple(b[0] for b in bits), tuple(b[1] for b in bits))


def commutes(a: PauliString, b: PauliString) -> bool:
    """Symplectic commutation test: even number of anticommuting positions."""
    if a.n_q != b.n_q:
        raise ValueError(f"qubit counts differ: {a.n_q} vs {b.n_q}")
    acc = 0
    for xa, za, xb, zb in zip(a.x, a.z, b.x, b.z):
        acc ^= (xa & zb) ^ (za & xb)
    return acc == 0


@dataclass(frozen=True)
class Term:
    index: int
    coefficient: float
    pauli: PauliString


@dataclass(frozen=True)
class Hamiltonian:
    """``H = sum_s c_s P_s`` with contiguous term indices ``0..n_s-1``."""

    terms: tuple[Term, ...]
    name: str = ""

    def __post_init__(self) -> None:
        if not self.terms:
            raise ValueError("Hamiltonian has no terms")
        n_q = self.terms[0].pauli.n_q
        for pos, t in enumerate(self.terms):
            if t.index != pos:
                raise ValueError(f"term indices must be 0..n_s-1 in order; found {t.index} at {pos}")
            if t.pauli.n_q != n_q:
                raise ValueError(f"term {t.index} acts on {t.pauli.n_q} qubits, expected {n_q}")
            if not math.isfinite(t.coefficient):
                raise ValueError(f"term {t.index} has non-finite coefficient")

    @property
    def n_q(self) -> int:
        return self.terms[0].pauli.n_q

    @property
    def n_s(self) -> int:
        return len(self.terms)

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([t.coefficient for t in self.terms])

    @property
    def strings(self) -> list[PauliString]:
        return [t.pauli for t in self.terms]

    def __getitem__(self, s: int) -> Term:
        return self.terms[s]

    def __len__(self) -> int:
        return len(self.terms)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[float, str | PauliString]], name: str = "") -> Hamiltonian:
        built = []
        for s, (c, p) in enumerate(terms):
            built.append(Term(s, float(c), p if isinstance(p, PauliString) else parse_pauli(p)))
        return cls(tuple(built), name)

    def to_text(self) -> str:
        lines = [f"{t.index} {t.coefficient!r} {t.pauli}" for t in self.terms]
        return "\n".join(lines) + "\n"

    def to_matrix(self) -> np.ndarray:
        return sum(t.coefficient * t.pauli.to_matrix() for t in self.terms)


def parse_hamiltonian(source: str | IO[str], name: str = "") -> Hamiltonian:
    """Read ``<index> <coefficient> <string>`` lines.

    Blank lines and ``#`` comments are skipped.  Lines may appear in any
    order; the indices must cover ``0..n_s-1`` exactly once.
    """
    stream = io.StringIO(source) if isinstance(source, str) else source
    found: dict[int, Term] = {}
    n_q = None
    for lineno, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise PauliParseError(f"line {lineno}: expected '<index> <coefficient> <string>'")
        try:
            index = int(parts[0])
        except ValueError:
            raise PauliParseError(f"line {lineno}: bad index {parts[0]!r}") from None
        try:
            coeff = float(parts[1])
        except ValueError:
            raise PauliParseError(f"line {lineno}: unparseable coefficient {parts[1]!r}") from None
        if not math.isfinite(coeff):
            raise PauliParseError(f"line {lineno}: non-finite coefficient")
        pauli = parse_pauli(parts[2], n_q)
        n_q = pauli.n_q
        if index in found:
            raise PauliParseError(f"line {lineno}: duplicate index {index}")
        found[index] = Term(index, coeff, pauli)
    if not found:
        raise PauliParseError("no terms found")
    if sorted(found) != list(range(len(found))):
        raise PauliParseError("term indices are not contiguous from 0")
    return Hamiltonian(tuple(found[s] for s in range(len(found))), name)


def load_hamiltonian(path: str | Path) -> Hamiltonian:
    path = Path(path)
    with path.open() as fh:
        return parse_hamiltonian(fh, name=path.stem)


def trotter_leading_error_term(h: Hamiltonian) -> float:
    """Largest ``||c_a c_b [P_a, P_b]||`` over term pairs.

    Anticommuting Pauli strings give ``[P_a, P_b] = 2 P_a P_b`` with unit
    spectral norm, so the pair value is ``2 |c_a c_b|``.  The ``t**2 / p_c``
    scaling is left to the caller.
    """
    best = 0.0
    for a, b in combinations(h.terms, 2):
        if not commutes(a.pauli, b.pauli):
            best = max(best, 2.0 * abs(a.coefficient * b.coefficient))
    return best


@dataclass(frozen=True)
class TrotterPlan:
    """Ordering of Hamiltonian terms for one first-order Trotter step."""

    ordering: tuple[int, ...]
    steps: int = 1
    delta_t: float = 1.0

    def __post_init__(self) -> None:
        if sorted(self.ordering) != list(range(len(self.ordering))):
            raise ValueError("ordering is not a permutation of 0..n_s-1")
        if self.steps < 1:
            raise ValueError("need at least one Trotter step")

    @classmethod
    def identity(cls, n_s: int, steps: int = 1) -> TrotterPlan:
        return cls(tuple(range(n_s)), steps)


def trotter_step_unitary(h: Hamiltonian, ordering: Sequence[int] | None = None, delta_t: float = 1.0) -> np.ndarray:
    """Dense ``prod_s exp(-i dt c_s P_s)`` applied in ``ordering`` (first factor acts first)."""
    from scipy.linalg import expm

    order = range(h.n_s) if ordering is None else ordering
    u = np.eye(2**h.n_q, dtype=complex)
    for s in order:
        t = h[s]
        u = expm(-1j * delta_t * t.coefficient * t.pauli.to_matrix()) @ u
    return u


def pauli_exponential(p: PauliString, c: float) -> np.ndarray:
    """Dense ``exp(-i c P)`` via ``cos(c) I - i sin(c) P`` (valid since ``P**2 = I``)."""
    m = p.to_matrix()
    return math.cos(c) * np.eye(m.shape[0]) - 1j * math.sin(c) * m


def all_pauli_strings(n_q: int) -> list[PauliString]:
    """All ``4**n_q`` words in lexicographic ``IXYZ`` order."""
    from itertools import product

    return [parse_pauli("".join(w)) for w in product("IXYZ", repeat=n_q)]
