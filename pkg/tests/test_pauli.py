import io
import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mbqspat.pauli import (
    Hamiltonian,
    PauliParseError,
    TrotterPlan,
    all_pauli_strings,
    commutes,
    parse_hamiltonian,
    parse_pauli,
    pauli_exponential,
    trotter_leading_error_term,
    trotter_step_unitary,
)

words = st.integers(1, 6).flatmap(lambda n: st.text("IXYZ", min_size=n, max_size=n))


def dense_commute(a, b):
    ma, mb = a.to_matrix(), b.to_matrix()
    return np.allclose(ma @ mb, mb @ ma)


def test_parse_table_row_32():
    p = parse_pauli("IXYYXI", 6)
    assert p.x == (0, 1, 1, 1, 1, 0)
    assert p.z == (0, 0, 1, 1, 0, 0)
    assert str(p) == "IXYYXI"


def test_parse_identity_and_letters():
    assert parse_pauli("IIIIII", 6).is_identity()
    p = parse_pauli("XZ", 2)
    assert (p.x, p.z) == ((1, 0), (0, 1))


@pytest.mark.parametrize("text, n", [("XYZ", 2), ("XQ", 2), ("", None)])
def test_parse_errors(text, n):
    with pytest.raises(PauliParseError):
        parse_pauli(text, n)


def test_commutes_examples():
    assert commutes(parse_pauli("XXYYII"), parse_pauli("XYYXII"))
    assert dense_commute(parse_pauli("XXYYII"), parse_pauli("XYYXII"))
    assert not commutes(parse_pauli("XI"), parse_pauli("ZI"))
    with pytest.raises(ValueError):
        commutes(parse_pauli("X"), parse_pauli("XX"))


@pytest.mark.parametrize("n", [1, 2])
def test_commutes_matches_dense_exhaustive(n):
    strings = all_pauli_strings(n)
    for a, b in itertools.product(strings, repeat=2):
        assert commutes(a, b) == dense_commute(a, b)


def test_commutes_matches_dense_three_and_four_qubits():
    for n in (3, 4):
        strings = all_pauli_strings(n)
        mats = {str(p): p.to_matrix() for p in strings}
        for a, b in itertools.product(strings, repeat=2):
            ma, mb = mats[str(a)], mats[str(b)]
            assert commutes(a, b) == bool(np.allclose(ma @ mb, mb @ ma))


def test_commutes_random_six_qubit(rng):
    for _ in range(500):
        a = parse_pauli("".join(rng.choice(list("IXYZ"), 6)))
        b = parse_pauli("".join(rng.choice(list("IXYZ"), 6)))
        assert commutes(a, b) == dense_commute(a, b)


def test_round_trip_all_words_up_to_four_qubits():
    for n in range(1, 5):
        for p in all_pauli_strings(n):
            assert parse_pauli(str(p)) == p


@given(words)
def test_round_trip_property(w):
    assert str(parse_pauli(w)) == w


def test_parse_hamiltonian_fixture(be2_ham):
    assert be2_ham.n_q == 6 and be2_ham.n_s == 62
    t = be2_ham[32]
    assert t.coefficient == 0.011922474
    assert str(t.pauli) == "IXYYXI"


def test_parse_hamiltonian_small_and_errors():
    h = parse_hamiltonian("0 1.0 Z")
    assert (h.n_q, h.n_s) == (1, 1)
    with pytest.raises(PauliParseError):
        parse_hamiltonian("0 1.0 ZZ\n1 0.5 Z\n")
    with pytest.raises(PauliParseError):
        parse_hamiltonian("0 1.0 Z\n0 0.5 X\n")
    with pytest.raises(PauliParseError):
        parse_hamiltonian("0 abc Z\n")
    with pytest.raises(PauliParseError):
        parse_hamiltonian("0 1.0 Z\n2 1.0 X\n")


def test_parse_hamiltonian_comments_and_stream():
    text = "# header\n\n1 0.5 X  # trailing\n0 0.25 Z\n"
    h = parse_hamiltonian(io.StringIO(text))
    assert [str(p) for p in h.strings] == ["Z", "X"]


def test_leading_error_examples():
    h = Hamiltonian.from_terms([(0.5, "X"), (0.25, "Z")])
    assert trotter_leading_error_term(h) == pytest.approx(0.25)
    # oracle: spectral norm of the dense commutator
    a, b = 0.5 * parse_pauli("X").to_matrix(), 0.25 * parse_pauli("Z").to_matrix()
    assert np.linalg.norm(a @ b - b @ a, 2) == pytest.approx(0.25)
    assert trotter_leading_error_term(Hamiltonian.from_terms([(1.0, "ZZ"), (2.0, "ZI")])) == 0.0


def test_leading_error_be2_brute_force(be2_ham):
    best = 0.0
    for a, b in itertools.combinations(be2_ham.terms, 2):
        ma, mb = a.coefficient * a.pauli.to_matrix(), b.coefficient * b.pauli.to_matrix()
        comm = ma @ mb - mb @ ma
        if np.abs(comm).max() > 0:
            best = max(best, np.linalg.norm(comm, 2))
    assert trotter_leading_error_term(be2_ham) == pytest.approx(best, rel=1e-12)


def test_leading_error_symmetry_and_scaling(rng):
    terms = [(float(rng.normal()), "".join(rng.choice(list("IXYZ"), 3))) for _ in range(8)]
    h = Hamiltonian.from_terms(terms)
    perm = rng.permutation(len(terms))
    h2 = Hamiltonian.from_terms([terms[k] for k in perm])
    assert trotter_leading_error_term(h) == pytest.approx(trotter_leading_error_term(h2))
    h3 = Hamiltonian.from_terms([(3.0 * c, s) for c, s in terms])
    assert trotter_leading_error_term(h3) == pytest.approx(9.0 * trotter_leading_error_term(h))


def test_pauli_exponential_and_trotter_step():
    from scipy.linalg import expm

    p = parse_pauli("XY")
    assert np.allclose(pauli_exponential(p, 0.3), expm(-0.3j * p.to_matrix()))
    h = Hamiltonian.from_terms([(0.2, "XI"), (0.7, "ZZ")])
    want = expm(-0.7j * h[1].pauli.to_matrix()) @ expm(-0.2j * h[0].pauli.to_matrix())
    assert np.allclose(trotter_step_unitary(h), want)
    assert np.allclose(trotter_step_unitary(h, [1, 0]), expm(-0.2j * h[0].pauli.to_matrix()) @ expm(-0.7j * h[1].pauli.to_matrix()))


def test_trotter_plan_validation():
    assert TrotterPlan.identity(3).ordering == (0, 1, 2)
    with pytest.raises(ValueError):
        TrotterPlan((0, 0, 1))


@settings(max_examples=25)
@given(words)
def test_text_round_trip_hamiltonian(w):
    h = Hamiltonian.from_terms([(0.5, w), (-1.25, "I" * len(w))])
    assert parse_hamiltonian(h.to_text()).strings == h.strings
