"""Regenerate ``src/mbqspat/data/h2.txt``: H2 / 6-31G, 8 qubits, Jordan-Wigner.

Offline helper, not part of the package.  Needs pyscf.  Spin orbitals are
interleaved (alpha_0, beta_0, alpha_1, ...); letter k of each string acts on
qubit k.  Coefficients are physical (no time step folded in).

    python tools/make_h2_fixture.py [bond_length_angstrom]
"""

import sys
from itertools import product
from pathlib import Path

import numpy as np
from pyscf import ao2mo, gto, scf

bond = float(sys.argv[1]) if len(sys.argv) > 1 else 0.74
mol = gto.M(atom=f"H 0 0 0; H 0 0 {bond}", basis="6-31g", verbose=0)
mf = scf.RHF(mol).run()
c = mf.mo_coeff
h1 = c.T @ mf.get_hcore() @ c
eri = ao2mo.restore(1, ao2mo.kernel(mol, c), mol.nao)  # chemist (pq|rs)
n_orb = h1.shape[0]
n_q = 2 * n_orb

I2 = np.eye(2)
Z = np.diag([1.0, -1.0])
lower = np.array([[0.0, 1.0], [0.0, 0.0]])  # |0><1|: annihilates an occupied (|1>) mode


def annihilator(j):
    ops = [Z] * j + [lower] + [I2] * (n_q - j - 1)
    out = np.array([[1.0]])
    for o in ops:
        out = np.kron(out, o)
    return out


a = [annihilator(j) for j in range(n_q)]
ad = [m.T.conj() for m in a]
H = mol.energy_nuc() * np.eye(2**n_q)
for p, q in product(range(n_orb), repeat=2):
    for sp in range(2):
        H += h1[p, q] * ad[2 * p + sp] @ a[2 * q + sp]
for p, q, r, s in product(range(n_orb), repeat=4):
    v = eri[p, q, r, s]
    if abs(v) < 1e-14:
        continue
    for s1, s2 in product(range(2), repeat=2):
        H += 0.5 * v * ad[2 * p + s1] @ ad[2 * r + s2] @ a[2 * s + s2] @ a[2 * q + s1]

paulis = {"I": I2, "X": np.array([[0, 1], [1, 0]]), "Y": np.array([[0, -1j], [1j, 0]]), "Z": Z}
dim = 2**n_q
idx = np.arange(dim)
terms = []
for word in product("IXYZ", repeat=n_q):
    # P is a signed permutation: P[i, perm(i)] = phase(i)
    xmask = sum(1 << (n_q - 1 - k) for k, ch in enumerate(word) if ch in "XY")
    perm = idx ^ xmask
    phase = np.ones(dim, dtype=complex)
    for k, ch in enumerate(word):
        bit = (perm >> (n_q - 1 - k)) & 1  # column bit
        if ch == "Z":
            phase *= 1 - 2 * bit
        elif ch == "Y":
            phase *= np.where(bit == 0, 1j, -1j)
    coeff = np.sum(phase * H[perm, idx]) / dim
    if abs(coeff) > 1e-10:
        assert abs(coeff.imag) < 1e-10
        terms.append(("".join(word), float(coeff.real)))

# identity first, then Z-only strings, then the rest, each lexicographic
terms.sort(key=lambda t: (t[0] != "I" * n_q, not set(t[0]) <= {"I", "Z"}, t[0][::-1]))
out = Path(__file__).resolve().parents[1] / "src" / "mbqspat" / "data" / "h2.txt"
with out.open("w") as fh:
    fh.write(f"# H2 / 6-31G at {bond} A, {n_q} qubits, Jordan-Wigner (interleaved spin orbitals)\n")
    fh.write("# generated by tools/make_h2_fixture.py; <index> <coefficient> <pauli string>\n")
    for k, (w, v) in enumerate(terms):
        fh.write(f"{k} {v:.10g} {w}\n")
print(f"{len(terms)} terms, E_HF = {mf.e_tot:.8f}, wrote {out}")
