"""Logical cost table: budget optimization to strategy rows.

For each reference structure the pipeline optimizes the split of the
energy-error tolerance across phase estimation, Trotter truncation, and
rotation synthesis, evaluates the T-count formula at the optimum, and
re-derives the row under each execution strategy. The bundled presets
also carry the published anchor rows, so the gap between this model's
optimum and the published numbers is printed rather than hidden.
"""

from qsimcost import (
    ParParams,
    PhaseEstimationModel,
    SynthesisModel,
    evaluate_cost,
    load_presets,
    optimize_budget,
    reference_logical_report,
    strategy_report,
)

PE = PhaseEstimationModel.preset("optimal_surrogate")
SYN = SynthesisModel.preset("fallback_average")


def human(seconds):
    if seconds >= 2 * 86400:
        return f"{seconds / 86400:.3g} days"
    if seconds >= 7200:
        return f"{seconds / 3600:.3g} hours"
    return f"{seconds:.3g} s"


presets = load_presets()
for structure in ("struct-1", "struct-2"):
    entry = presets["structures"][structure]
    m, beta = entry["m_terms"], entry["beta"]["rescaled"]
    print(f"{entry['label']}: M = {m:.2g} terms, beta = {beta:g}, "
          f"{entry['n_spin_orbitals']} spin orbitals")
    for eps in (1e-4, 1e-3):
        budget = optimize_budget(m, eps, beta, PE, SYN, "variance")
        base = evaluate_cost(m, budget, beta, PE, SYN)
        print(f"  target {eps * 1e3:g} mHa: budget "
              f"(pe {budget.epsilon1_pe:.2e}, trotter {budget.epsilon2_trotter:.2e}, "
              f"synth {budget.epsilon3_synth:.2e})")
        rows = {
            "serial": strategy_report(
                base, "serial", n_spin_orbitals=entry["n_spin_orbitals"]
            ),
            "nesting": strategy_report(
                base, "nesting",
                parallelism=entry["nesting_parallelism"],
                n_spin_orbitals=entry["n_spin_orbitals"],
            ),
            "par": strategy_report(
                base, "par",
                par_params=ParParams(**entry["par"]),
                n_spin_orbitals=entry["n_spin_orbitals"],
            ),
        }
        for name, row in rows.items():
            print(
                f"    {name:>7}: T = {row.t_count:.2e}, "
                f"Cliffords = {row.clifford_count:.2e}, "
                f"time = {human(row.wall_time):>10}, "
                f"qubits = {row.logical_qubits}"
            )
    print()

# published anchors ship with the presets; the model optimum lands a
# factor of a few above them because their rounding and optimizer are
# not documented precisely enough to replay
anchor = reference_logical_report("struct-1", "serial", 1e-4)
budget = optimize_budget(6.1e6, 1e-4, 166.0, PE, SYN, "variance")
mine = evaluate_cost(6.1e6, budget, 166.0, PE, SYN).t_count
print(f"published anchor (struct-1 serial, 0.1 mHa): T = {anchor.t_count:.1e}")
print(f"model optimum at the same parameters:        T = {mine:.1e} "
      f"({mine / anchor.t_count:.2f}x)")
