"""From integral file to classified term list.

Every cost downstream starts here: the FCIDUMP is parsed into an
integral table, the table is expanded into second-quantized terms, and
each term is classified by its index pattern (PP, PQ, PQQP, PQQR,
PQRS). The class decides which commutators vanish in the Trotter error
bound, and the term count M multiplies the whole T-gate budget.
"""

from qsimcost import bundled_molecules, enumerate_terms, load_molecule

for name in bundled_molecules():
    table = load_molecule(name)
    terms = enumerate_terms(table)
    tally = {cls: len(idx) for cls, idx in terms.by_class().items() if idx}
    one_norm = sum(t.norm for t in terms)
    print(f"{name}")
    print(
        f"  {table.n_spatial} spatial orbitals -> "
        f"{terms.n_spin_orbitals} spin orbitals, "
        f"{table.n_electrons} electrons, core {table.core_energy:+.6f} Ha"
    )
    print(f"  {len(terms)} merged terms: " + ", ".join(
        f"{cls} x{count}" for cls, count in sorted(tally.items())
    ))
    print(f"  coefficient one-norm {one_norm:.4f} Ha")

# the largest bundled molecule, term by term for the strongest few
terms = enumerate_terms(load_molecule("h4_chain"))
print("\nlargest-norm terms of h4_chain:")
for term in sorted(terms, key=lambda t: -t.norm)[:5]:
    orbitals = ",".join(str(i) for i in term.spin_orbitals)
    print(f"  {term.term_class:>5} ({orbitals})  coefficient {term.coefficient:+.6f}")
