#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Regenerate the STO-6G FCIDUMP fixtures shipped in fixtures/.

Requires pyscf. Orbitals are canonical RHF (convergence 1e-10 on the energy,
tighter on the density). Chains lie on the z axis with uniform spacing.
"""
import argparse
import os

import numpy as np
from pyscf import ao2mo, fci, gto, scf
from pyscf.tools import fcidump


def chain(n, r, offset=0.0):
    return [("H", (0.0, 0.0, offset + i * r)) for i in range(n)]


def beh2(r):
    return [("H", (0.0, 0.0, -r)), ("Be", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, r))]


def rhf(atoms, symmetry=True):
    mol = gto.M(atom=atoms, basis="sto-6g", unit="Angstrom", symmetry=symmetry, verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.conv_tol_grad = 1e-10
    mf.kernel()
    assert mf.converged
    return mol, mf


def write_scf(path, atoms):
    mol, mf = rhf(atoms)
    fcidump.from_scf(mf, path, tol=1e-16)
    e_fci, _ = fci.FCI(mf).kernel()
    return mf.e_tot, e_fci


def write_composite(path, frag_a, frag_b):
    """Composite of two far-apart fragments using fragment-local RHF orbitals.

    Orbitals are ordered by fragment orbital energy so the Aufbau reference is
    the product of the fragment references.
    """
    mol_a, mf_a = rhf(frag_a, symmetry=False)
    mol_b, mf_b = rhf(frag_b, symmetry=False)
    mol = gto.M(atom=frag_a + frag_b, basis="sto-6g", unit="Angstrom", verbose=0)
    na, nb = mol_a.nao, mol_b.nao
    coeff = np.zeros((na + nb, na + nb))
    coeff[:na, :na] = mf_a.mo_coeff
    coeff[na:, na:] = mf_b.mo_coeff
    energies = np.concatenate([mf_a.mo_energy, mf_b.mo_energy])
    order = np.argsort(energies, kind="stable")
    coeff = coeff[:, order]
    hcore = mol.intor("int1e_kin") + mol.intor("int1e_nuc")
    h1 = coeff.T @ hcore @ coeff
    eri = ao2mo.full(mol, coeff)
    nelec = mol_a.nelectron + mol_b.nelectron
    fcidump.from_integrals(path, h1, eri, na + nb, nelec, mol.energy_nuc(), 0, tol=1e-16)
    e_fci, _ = fci.direct_spin1.kernel(h1, ao2mo.restore(1, eri, na + nb), na + nb, nelec,
                                       ecore=mol.energy_nuc(), conv_tol=1e-12)
    return None, e_fci


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "fixtures"))
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    jobs = {
        "h2_0.75": lambda p: write_scf(p, chain(2, 0.75)),
        "h4_0.75": lambda p: write_scf(p, chain(4, 0.75)),
        "h4_1.00": lambda p: write_scf(p, chain(4, 1.00)),
        "h4_1.50": lambda p: write_scf(p, chain(4, 1.50)),
        "beh2_1.00": lambda p: write_scf(p, beh2(1.0)),
        "beh2_2.00": lambda p: write_scf(p, beh2(2.0)),
        "h4_h2_1000": lambda p: write_composite(p, chain(4, 0.75), chain(2, 0.75, offset=1000.0)),
    }
    for r in ("0.50", "1.00", "1.50", "2.00"):
        jobs["h6_" + r] = lambda p, r=float(r): write_scf(p, chain(6, r))
    for name, job in jobs.items():
        path = os.path.join(args.out, name + ".fcidump")
        e_hf, e_fci = job(path)
        print(f"{name:12s} E_HF={e_hf} E_FCI={e_fci:.10f}")


if __name__ == "__main__":
    main()
