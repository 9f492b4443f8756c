"""The two parallel execution strategies: PAR cascades and nesting.

A PAR cascade burns T gates eagerly (n levels of pre-synthesized
rotations per use) to cut the wall-clock time per rotation to a couple
of T-gate times; its closed-form expectation is checked here against a
Monte Carlo of the geometric retry process. Nesting instead runs
disjoint-support term exponentials simultaneously inside a Trotter
step, and its speedup is the mean batch size of a greedy packing.
"""

from qsimcost import (
    ParParams,
    enumerate_terms,
    load_molecule,
    nesting_batches,
    nesting_parallelism,
    par_expected_rotations,
    par_factory_time_per_rotation,
    par_rotation_factories,
    simulate_par_factory_time,
    simulate_par_rotations,
)

print("PAR cascade, closed form vs Monte Carlo (1e6 trials):")
for n, m, c in ((1, 2, 10), (5, 100, 40), (9, 1, 199)):
    rot = ParParams(n, m)
    mc_rot, se_rot = simulate_par_rotations(rot, trials=10**6, seed=3)
    fac = ParParams(n, 1, c)
    mc_time, se_time = simulate_par_factory_time(fac, trials=10**6, seed=4)
    print(
        f"  n={n}, M={m}, C={c}: rotations "
        f"{par_expected_rotations(rot):.4f} vs {mc_rot:.4f} (+-{se_rot:.4f}), "
        f"factory time {par_factory_time_per_rotation(fac):.4f} vs "
        f"{mc_time:.4f} (+-{se_time:.4f}) T-gate times"
    )

# the headline cascade: nine levels, worst-case synthesis cost 199
params = ParParams(9, 1, 199)
print(
    f"\nheadline cascade n=9, C=199: {par_factory_time_per_rotation(params):.4f} "
    f"T-gate times per rotation, {par_rotation_factories(params)} rotation factories"
)

print("\nnesting on the bundled molecules (greedy disjoint-support packing):")
for name in ("h2_sto3g", "h3_plus", "h4_chain"):
    terms = enumerate_terms(load_molecule(name))
    sizes = nesting_batches(terms)
    parallelism = nesting_parallelism(terms)
    print(
        f"  {name:>9}: {len(terms)} terms in {len(sizes)} batches, "
        f"mean parallelism {parallelism:.2f} "
        f"(largest batch {max(sizes)}, register cap {terms.n_spin_orbitals // 2})"
    )
