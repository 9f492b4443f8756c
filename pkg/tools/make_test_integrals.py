"""Generate the bundled test-molecule integral files.

Self-contained restricted Hartree-Fock engine for s-orbital STO-3G systems
(H and He centers only). Produces molecular-orbital integrals in chemist
notation (pq|rs) and writes them as FCIDUMP files under src/qsimcost/data/.

This is a development tool, not package code: the package's scope excludes
integral generation. The generated files are frozen test inputs, and the
test suite cross-checks them against published AO/MO integral values.

All quantities in Hartree atomic units.
"""

from __future__ import annotations

import math
import os

import numpy as np

# STO-3G s-shell parameters: exponents and contraction coefficients for
# normalized primitives.
STO3G = {
    "H": (
        [3.42525091, 0.62391373, 0.16885540],
        [0.15432897, 0.53532814, 0.44463454],
    ),
    "He": (
        [6.36242139, 1.15892300, 0.31364979],
        [0.15432897, 0.53532814, 0.44463454],
    ),
}

CHARGE = {"H": 1.0, "He": 2.0}

ANGSTROM = 1.8897261254578281  # Bohr per Angstrom


def boys0(x):
    """Boys function F0(x) for s-orbital Coulomb integrals."""
    if x < 1e-10:
        return 1.0 - x / 3.0 + x * x / 10.0
    sx = math.sqrt(x)
    return 0.5 * math.sqrt(math.pi / x) * math.erf(sx)


def prim_norm(a):
    return (2.0 * a / math.pi) ** 0.75


def overlap_prim(a, ra, b, rb):
    p = a + b
    ab2 = float(np.dot(ra - rb, ra - rb))
    return prim_norm(a) * prim_norm(b) * (math.pi / p) ** 1.5 * math.exp(-a * b / p * ab2)


def kinetic_prim(a, ra, b, rb):
    p = a + b
    mu = a * b / p
    ab2 = float(np.dot(ra - rb, ra - rb))
    pref = prim_norm(a) * prim_norm(b) * (math.pi / p) ** 1.5 * math.exp(-mu * ab2)
    return pref * mu * (3.0 - 2.0 * mu * ab2)


def attraction_prim(a, ra, b, rb, rc):
    p = a + b
    ab2 = float(np.dot(ra - rb, ra - rb))
    rp = (a * ra + b * rb) / p
    pc2 = float(np.dot(rp - rc, rp - rc))
    pref = prim_norm(a) * prim_norm(b) * (2.0 * math.pi / p) * math.exp(-a * b / p * ab2)
    return pref * boys0(p * pc2)


def eri_prim(a, ra, b, rb, c, rc, d, rd):
    p = a + b
    q = c + d
    ab2 = float(np.dot(ra - rb, ra - rb))
    cd2 = float(np.dot(rc - rd, rc - rd))
    rp = (a * ra + b * rb) / p
    rq = (c * rc + d * rd) / q
    pq2 = float(np.dot(rp - rq, rp - rq))
    pref = (
        prim_norm(a) * prim_norm(b) * prim_norm(c) * prim_norm(d)
        * 2.0 * math.pi ** 2.5
        / (p * q * math.sqrt(p + q))
        * math.exp(-a * b / p * ab2 - c * d / q * cd2)
    )
    return pref * boys0(p * q / (p + q) * pq2)


class Molecule:
    def __init__(self, label, atoms, charge):
        # atoms: list of (element, xyz array in Bohr)
        self.label = label
        self.atoms = [(el, np.asarray(xyz, dtype=float)) for el, xyz in atoms]
        self.charge = charge
        self.n_electrons = int(sum(CHARGE[el] for el, _ in self.atoms) - charge)
        # one contracted s function per atom
        self.shells = []
        for el, xyz in self.atoms:
            exps, coefs = STO3G[el]
            self.shells.append((list(exps), list(coefs), xyz))

    @property
    def nbf(self):
        return len(self.shells)

    def nuclear_repulsion(self):
        e = 0.0
        for i, (eli, ri) in enumerate(self.atoms):
            for j in range(i + 1, len(self.atoms)):
                elj, rj = self.atoms[j]
                e += CHARGE[eli] * CHARGE[elj] / float(np.linalg.norm(ri - rj))
        return e


def contracted(mol, prim_fn):
    """Contract a primitive-pair integral over the shell pair lists."""
    n = mol.nbf
    out = np.zeros((n, n))
    for i, (ei, ci, ri) in enumerate(mol.shells):
        for j, (ej, cj, rj) in enumerate(mol.shells):
            s = 0.0
            for a, ca in zip(ei, ci):
                for b, cb in zip(ej, cj):
                    s += ca * cb * prim_fn(a, ri, b, rj)
            out[i, j] = s
    return out


def ao_integrals(mol):
    n = mol.nbf
    s = contracted(mol, overlap_prim)
    # renormalize contracted functions to unit self-overlap
    norms = 1.0 / np.sqrt(np.diag(s))
    for i, (ei, ci, ri) in enumerate(mol.shells):
        mol.shells[i] = (ei, [c * norms[i] for c in ci], ri)
    s = contracted(mol, overlap_prim)
    t = contracted(mol, kinetic_prim)
    v = np.zeros((n, n))
    for el, rc in mol.atoms:
        v -= CHARGE[el] * contracted(
            mol, lambda a, ra, b, rb, rc=rc: attraction_prim(a, ra, b, rb, rc)
        )
    eri = np.zeros((n, n, n, n))
    for i in range(n):
        ei, ci, ri = mol.shells[i]
        for j in range(n):
            ej, cj, rj = mol.shells[j]
            for k in range(n):
                ek, ck, rk = mol.shells[k]
                for l in range(n):
                    el_, cl, rl = mol.shells[l]
                    val = 0.0
                    for a, ca in zip(ei, ci):
                        for b, cb in zip(ej, cj):
                            for c, cc in zip(ek, ck):
                                for d, cd in zip(el_, cl):
                                    val += ca * cb * cc * cd * eri_prim(
                                        a, ri, b, rj, c, rk, d, rl
                                    )
                    eri[i, j, k, l] = val
    return s, t + v, eri


def rhf(mol, s, hcore, eri, max_iter=200, tol=1e-12):
    n = mol.nbf
    nocc = mol.n_electrons // 2
    assert mol.n_electrons % 2 == 0, "closed-shell molecules only"
    evals, evecs = np.linalg.eigh(s)
    x = evecs @ np.diag(evals ** -0.5) @ evecs.T
    d = np.zeros((n, n))
    e_old = 0.0
    for _ in range(max_iter):
        j = np.einsum("pqrs,rs->pq", eri, d)
        k = np.einsum("prqs,rs->pq", eri, d)
        f = hcore + 2.0 * j - k
        fp = x.T @ f @ x
        mo_e, cp = np.linalg.eigh(fp)
        c = x @ cp
        cocc = c[:, :nocc]
        d = cocc @ cocc.T
        e_elec = float(np.sum(d * (hcore + f)))
        if abs(e_elec - e_old) < tol:
            break
        e_old = e_elec
    return e_elec, mo_e, c


def mo_integrals(hcore, eri, c):
    h_mo = c.T @ hcore @ c
    eri_mo = np.einsum("pqrs,pi,qj,rk,sl->ijkl", eri, c, c, c, c, optimize=True)
    return h_mo, eri_mo


def write_fcidump(path, h_mo, eri_mo, e_core, n_electrons, thresh=1e-12):
    n = h_mo.shape[0]
    lines = []
    lines.append(f" &FCI NORB={n:3d},NELEC={n_electrons:3d},MS2=0,")
    lines.append("  ORBSYM=" + "1," * n)
    lines.append("  ISYM=1,")
    lines.append(" &END")

    def emit(v, p, q, r, s):
        lines.append(f"  {v: .16E} {p:4d} {q:4d} {r:4d} {s:4d}")

    for p in range(n):
        for q in range(p + 1):
            pq = p * (p + 1) // 2 + q
            for r in range(n):
                for s in range(r + 1):
                    rs = r * (r + 1) // 2 + s
                    if rs > pq:
                        continue
                    v = eri_mo[p, q, r, s]
                    if abs(v) > thresh:
                        emit(v, p + 1, q + 1, r + 1, s + 1)
    for p in range(n):
        for q in range(p + 1):
            v = h_mo[p, q]
            if abs(v) > thresh:
                emit(v, p + 1, q + 1, 0, 0)
    emit(e_core, 0, 0, 0, 0)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def build(label, atoms, charge):
    mol = Molecule(label, atoms, charge)
    s, hcore, eri = ao_integrals(mol)
    e_elec, mo_e, c = rhf(mol, s, hcore, eri)
    # fix MO phases: largest-magnitude coefficient positive
    for i in range(c.shape[1]):
        k = int(np.argmax(np.abs(c[:, i])))
        if c[k, i] < 0:
            c[:, i] = -c[:, i]
    e_nuc = mol.nuclear_repulsion()
    h_mo, eri_mo = mo_integrals(hcore, eri, c)
    print(f"{label}: E_HF = {e_elec + e_nuc:.9f} Ha (elec {e_elec:.9f}, nuc {e_nuc:.9f})")
    print(f"  MO energies: {np.array2string(mo_e, precision=6)}")
    return mol, h_mo, eri_mo, e_nuc


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    out_dir = os.path.join(here, "..", "src", "qsimcost", "data")
    os.makedirs(out_dir, exist_ok=True)

    r_h2 = 0.7414 * ANGSTROM

    systems = [
        ("h2_sto3g", [("H", [0, 0, 0]), ("H", [0, 0, r_h2])], 0),
        ("h2_stretched", [("H", [0, 0, 0]), ("H", [0, 0, 4.0 * r_h2])], 0),
        ("heh_plus", [("He", [0, 0, 0]), ("H", [0, 0, 1.4632])], 1),
        (
            "h3_plus",
            [
                ("H", [0, 0, 0]),
                ("H", [1.65, 0, 0]),
                ("H", [0.825, 1.65 * math.sqrt(3) / 2, 0]),
            ],
            1,
        ),
        (
            "h4_chain",
            [("H", [0, 0, z * 1.5]) for z in range(4)],
            0,
        ),
    ]

    for label, atoms, charge in systems:
        mol, h_mo, eri_mo, e_nuc = build(label, atoms, charge)
        path = os.path.join(out_dir, label + ".fcidump")
        write_fcidump(path, h_mo, eri_mo, e_nuc, mol.n_electrons)
        print(f"  wrote {os.path.normpath(path)}")
        if label == "h2_sto3g":
            print("  h11 = %.9f  h22 = %.9f" % (h_mo[0, 0], h_mo[1, 1]))
            print(
                "  (11|11) = %.9f  (22|22) = %.9f  (11|22) = %.9f  (12|12) = %.9f"
                % (eri_mo[0, 0, 0, 0], eri_mo[1, 1, 1, 1], eri_mo[0, 0, 1, 1], eri_mo[0, 1, 0, 1])
            )


if __name__ == "__main__":
    main()
