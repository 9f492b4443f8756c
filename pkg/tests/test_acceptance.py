"""Release acceptance gate: ten checks, one printed line each.

Every test pins its tolerance inline and records a single PASS/FAIL
line through conftest, so the checklist survives in the terminal
summary of a plain pytest run. The checks cover the cost formula
against arbitrary-precision arithmetic, the budget optimizer against a
grid oracle, the internal consistencies and magnitudes of the published
reference tables, the Trotter bound against the exact oracle, the
sampled estimator, the PAR closed forms, the fault-tolerance table fit,
accuracy-target scaling, and the exact-diagonalization sanity points.
"""

import math

import mpmath
import numpy as np

from conftest import ACCEPTANCE_LINES
from test_surface_code import REFERENCE_MATRIX, reference_logical

from qsimcost import (
    ErrorBudget,
    FTParams,
    ParParams,
    PhaseEstimationModel,
    Scenario,
    SynthesisModel,
    enumerate_terms,
    estimate_error_constant,
    evaluate_cost,
    hartree_fock_overlap,
    load_molecule,
    load_presets,
    optimize_budget,
    par_expected_rotations,
    par_factory_time_per_rotation,
    physical_report,
    qubits_per_logical,
    reference_logical_report,
    run_scenario,
    simulate_par_factory_time,
    simulate_par_rotations,
    strang_error_scan,
    strategy_report,
    t_factory_footprint,
)
from qsimcost.datasets import MOLECULES

PE = PhaseEstimationModel.preset("optimal_surrogate")
SYN = SynthesisModel.preset("fallback_average")

# headline serial reference point: problem size, Trotter number, T count
M_REF = 6.1e6
BETA_REF = 166.0
T_REF = 1.1e15


def record(number, passed, detail):
    line = f"criterion {number:>2} {'PASS' if passed else 'FAIL'}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert passed, line


def mp_cost(m, e1, e2, e3, eps, alpha, beta, gamma, delta):
    # independent 50-digit rebuild of the ceiled cost formula; the
    # ceiling arguments are evaluated in double precision first so both
    # sides round integer boundaries identically
    with mpmath.workdps(50):
        pe = mpmath.ceil(mpmath.mpf(float(alpha / e1)))
        steps = mpmath.ceil(mpmath.mpf(float(beta * math.sqrt(eps / e2))))
        arg = 2 * mpmath.mpf(m) * steps / mpmath.mpf(e3)
        synth = mpmath.mpf(gamma) * mpmath.log(arg, 2) + mpmath.mpf(delta)
        return float(2 * mpmath.mpf(m) * pe * steps * synth)


def test_criterion_01_formula_regression():
    rng = np.random.default_rng(1001)
    worst = 0.0
    for _ in range(50):
        m = float(10 ** rng.uniform(2, 7))
        eps = float(10 ** rng.uniform(-5, -2))
        shares = rng.dirichlet((1.0, 1.0, 1.0)) * 0.999
        e1, e2, e3 = (float(eps * s) for s in shares)
        alpha = float(10 ** rng.uniform(-0.5, 1.5))
        beta = float(10 ** rng.uniform(0.5, 4))
        gamma = float(rng.uniform(0.5, 5.0))
        delta = float(rng.uniform(5.0, 15.0))
        budget = ErrorBudget(eps, e1, e2, e3, "worst_case")
        got = evaluate_cost(
            m, budget, beta,
            PhaseEstimationModel("random", alpha),
            SynthesisModel("random", gamma, delta),
        ).t_count
        want = mp_cost(m, e1, e2, e3, eps, alpha, beta, gamma, delta)
        worst = max(worst, abs(got - want) / want)
    record(
        1, worst < 1e-12,
        f"T-count formula vs 50-digit arithmetic on 50 random parameter "
        f"sets, max rel err {worst:.2e} (tolerance 1e-12)",
    )


def grid_minimum(m, eps, beta, pe, syn, combination, points=200):
    # exhaustive oracle: 200 log-spaced values per budget axis, ceilings
    # and the log-argument domain applied exactly as in evaluate_cost
    axis = np.geomspace(eps * 1e-7, eps, points)
    e1, e3 = np.meshgrid(axis, axis, indexing="ij")
    best = math.inf
    for e2 in axis:
        if combination == "worst_case":
            feasible = e1 + e2 + e3 <= eps
        else:
            feasible = e2 + np.sqrt(e1**2 + e3**2) <= eps
        if not feasible.any():
            continue
        steps = np.ceil(beta * np.sqrt(eps / e2))
        pe_reps = np.ceil(pe.alpha / e1)
        arg = 2.0 * m * steps / e3
        with np.errstate(invalid="ignore"):
            synth = syn.gamma * np.log2(arg) + syn.delta
        cost = np.where(
            feasible & (arg > 1.0), 2.0 * m * pe_reps * steps * synth, np.inf
        )
        best = min(best, float(cost.min()))
    return best


def test_criterion_02_optimizer_oracle():
    rng = np.random.default_rng(1002)
    synths = (SYN, SynthesisModel.preset("deterministic_worst_case"))
    worst = 0.0
    for i in range(10):
        m = float(10 ** rng.uniform(3, 7))
        eps = float(10 ** rng.uniform(-5, -2))
        beta = float(10 ** rng.uniform(1, 3.5))
        syn = synths[i % 2]
        for combination in ("worst_case", "variance"):
            budget = optimize_budget(m, eps, beta, PE, syn, combination)
            got = evaluate_cost(m, budget, beta, PE, syn).t_count
            worst = max(worst, got / grid_minimum(m, eps, beta, PE, syn, combination))
    record(
        2, worst <= 1.001,
        f"optimizer vs exhaustive 200^3 log-grid on 10 random instances x "
        f"2 combination rules, worst ratio {worst:.6f} (tolerance 1.001)",
    )


def test_criterion_03_reference_table_internal_consistencies():
    presets = load_presets()
    # six serial rows: the four published anchors plus the two
    # pessimistic-budget variants, wall time == T count x 10 ns exactly
    rows = [
        reference_logical_report(structure, "serial", eps, presets)
        for structure in ("struct-1", "struct-2")
        for eps in (1e-4, 1e-3)
    ]
    for structure, beta in (("struct-1", 1075.0), ("struct-2", 1233.0)):
        entry = presets["structures"][structure]
        budget = optimize_budget(entry["m_terms"], 1e-4, beta, PE, SYN, "variance")
        base = evaluate_cost(entry["m_terms"], budget, beta, PE, SYN)
        rows.append(
            strategy_report(
                base, "serial", n_spin_orbitals=entry["n_spin_orbitals"]
            )
        )
    wall_exact = sum(r.wall_time == r.t_count * r.t_gate_time for r in rows)

    # the six strategy rows at the 0.1 mHa target obey their wall-time
    # identities exactly as well
    identity_rows = 0
    for structure in ("struct-1", "struct-2"):
        serial = reference_logical_report(structure, "serial", 1e-4, presets)
        identity_rows += serial.wall_time == serial.t_count * serial.t_gate_time
        nest = reference_logical_report(structure, "nesting", 1e-4, presets)
        identity_rows += nest.wall_time == (
            nest.t_count * nest.t_gate_time / nest.parallelism
        )
        par_row = reference_logical_report(structure, "par", 1e-4, presets)
        rotations = par_row.t_count / par_row.t_per_rotation
        identity_rows += par_row.wall_time == (
            rotations
            * par_factory_time_per_rotation(par_row.par_params)
            * par_row.t_gate_time
        )

    # nesting/serial T ratio: deterministic over average synthesis at the
    # shared precision, and inside the published bracket either way
    entry = presets["structures"]["struct-1"]
    budget = optimize_budget(entry["m_terms"], 1e-4, BETA_REF, PE, SYN, "variance")
    base = evaluate_cost(entry["m_terms"], budget, BETA_REF, PE, SYN)
    bits = base.synthesis_bits
    formula = (4.0 * bits + 11.0) / (1.15 * bits + 9.2)
    nest = strategy_report(
        base, "nesting", parallelism=entry["nesting_parallelism"]
    )
    model_ratio = nest.t_count / base.t_count
    published_ratio = 3.5e15 / T_REF
    ratio_ok = (
        abs(model_ratio - formula) < 1e-12
        and 3.0 <= formula <= 3.4
        and 3.0 <= published_ratio <= 3.4
    )

    # PAR wall time from the factory-time formula at the published T count
    par = reference_logical_report("struct-1", "par", 1e-4, presets)
    rotations = par.t_count / (9 * 199)
    wall = rotations * par_factory_time_per_rotation(ParParams(9, 1, 199)) * 1e-8
    hours = wall / 3600.0
    par_ok = abs(hours / 110.0 - 1.0) <= 0.15 and par.wall_time == wall

    record(
        3, wall_exact == 6 and identity_rows == 6 and ratio_ok and par_ok,
        f"serial wall = T x 10 ns exact on {wall_exact}/6 serial rows, wall "
        f"identities exact on {identity_rows}/6 strategy rows; "
        f"nesting/serial ratio {model_ratio:.4f} = (4L+11)/(1.15L+9.2), "
        f"published {published_ratio:.4f}, both in [3.0, 3.4]; PAR wall "
        f"{hours:.1f} h vs 110 h ({abs(hours / 110 - 1):.1%}, tolerance 15%)",
    )


def test_criterion_04_headline_magnitude():
    budget = optimize_budget(M_REF, 1e-4, BETA_REF, PE, SYN, "variance")
    t_count = evaluate_cost(M_REF, budget, BETA_REF, PE, SYN).t_count
    gap = t_count / T_REF
    record(
        4, 0.2 <= gap <= 5.0,
        f"optimized serial T count {t_count:.3e} vs reference 1.1e15, gap "
        f"{gap:.2f}x (tolerance factor 5; the reference rounding and "
        f"optimizer are under-documented, exact reproduction out of scope)",
    )


def test_criterion_05_bound_dominates_exact_error():
    grid = np.geomspace(1e-3, 0.2, 20)
    molecules = ("h2_sto3g", "heh_plus", "h3_plus", "h4_chain")
    total = violations = wrapped = 0
    min_margin = math.inf
    for name in molecules:
        terms = enumerate_terms(load_molecule(name))
        h_bound = estimate_error_constant(terms, method="exhaustive").value
        for row in strang_error_scan(terms, grid):
            wrapped += row.phase_wrapped
            total += 1
            bound = h_bound * row.t**2
            if bound < row.delta_e:
                violations += 1
            min_margin = min(min_margin, bound / max(row.delta_e, 1e-300))
    record(
        5, violations == 0 and wrapped == 0 and total == 80,
        f"h t^2 >= exact Strang error at {total - violations}/{total} grid "
        f"points over {len(molecules)} molecules, no wrapped phases, "
        f"smallest headroom {min_margin:.3g}x",
    )


def test_criterion_06_estimator_convergence():
    passed = True
    details = []
    for name in MOLECULES:
        terms = enumerate_terms(load_molecule(name))
        if len(terms) > 200:
            continue
        exact = estimate_error_constant(terms, method="exhaustive")
        sampled = estimate_error_constant(
            terms, method="stratified", samples_per_stratum=25, seed=11
        )
        again = estimate_error_constant(
            terms, method="stratified", samples_per_stratum=25, seed=11
        )
        passed &= sampled.value == again.value
        gap = abs(sampled.value - exact.value)
        if sampled.std_error == 0.0:
            passed &= gap == 0.0
            details.append(f"{name} enumerated")
        else:
            passed &= gap <= 3.0 * sampled.std_error
            details.append(f"{name} {gap / sampled.std_error:.2f} SE")
    record(
        6, passed,
        "stratified h within 3 SE of exhaustive and bitwise reproducible "
        "under a fixed seed: " + ", ".join(details),
    )


def test_criterion_07_par_closed_forms():
    passed = True
    worst = 0.0
    for n in (1, 2, 5, 9):
        for m in (1, 2, 10, 100):
            rot = ParParams(n, m)
            mean, se = simulate_par_rotations(rot, trials=10**6, seed=12)
            exact = par_expected_rotations(rot)
            if se == 0.0:
                passed &= mean == exact
            else:
                worst = max(worst, abs(mean - exact) / se)
                passed &= abs(mean - exact) <= 3.0 * se
            fac = ParParams(n, 1, m)
            mean, se = simulate_par_factory_time(fac, trials=10**6, seed=13)
            exact = par_factory_time_per_rotation(fac)
            if se == 0.0:
                passed &= mean == exact
            else:
                worst = max(worst, abs(mean - exact) / se)
                passed &= abs(mean - exact) <= 3.0 * se
    enumerated = par_expected_rotations(ParParams(1, 2))
    passed &= enumerated == 0.5 * 1 + 0.5 * 2
    record(
        7, passed,
        f"Monte Carlo (1e6 trials) matches both closed forms on 16 (n, M) "
        f"configurations, worst deviation {worst:.2f} SE (tolerance 3); "
        f"n=1, M=2 enumeration = {enumerated} exactly",
    )


def test_criterion_08_fault_tolerance_table_fit():
    qpl = [qubits_per_logical(d) for d in (5, 9, 17, 35, 37)]
    qpl_ok = qpl == [313, 1013, 3613, 15313, 17113]

    # footprint targets quoted to two significant figures: agreement
    # within one unit in the second significant digit
    footprints = (
        (1, [9], 1.7e4),
        (2, [5, 9], 7.5e4),
        (2, [17, 35], 8.7e5),
        (2, [3, 9], 2.7e4),
    )
    fp_ok = all(
        abs(t_factory_footprint(rounds, dists) - published)
        <= 10.0 ** (math.floor(math.log10(published)) - 1)
        for rounds, dists, published in footprints
    )

    rounds_ok = distances_ok = counts_ok = sums_ok = True
    worst_count = 0.0
    for (strategy, p), (dists, count, _, _) in REFERENCE_MATRIX.items():
        report = physical_report(reference_logical(strategy), FTParams(p_clifford=p))
        mine = report.code_distances[:-1]
        rounds_ok &= report.distillation_rounds == len(dists)
        distances_ok &= len(mine) == len(dists) and all(
            abs(a - b) <= 2 for a, b in zip(mine, dists)
        )
        tolerance = 0.20 if strategy == "par" else 0.15
        gap = abs(report.t_factory_count - count) / count
        worst_count = max(worst_count, gap)
        counts_ok &= gap <= tolerance
        sums_ok &= report.total_physical_qubits == (
            report.processor_qubits
            + report.rotation_factory_qubits
            + report.t_factory_qubits
        )
    record(
        8, qpl_ok and fp_ok and rounds_ok and distances_ok and counts_ok and sums_ok,
        f"qubits per logical {qpl} exact; footprints at 2 significant "
        f"figures; rounds, distances (+-2) and factory counts (worst gap "
        f"{worst_count:.1%}, tolerance 15%/20%) across all nine reference "
        f"scenarios; block totals sum exactly",
    )


def test_criterion_09_accuracy_target_scaling():
    scenario = Scenario(
        structure="struct-1",
        strategies=("serial", "nesting", "par"),
        epsilon_targets=(1e-4, 1e-3),
    )
    bundle = run_scenario(scenario)
    t_counts = {(pt.strategy, pt.epsilon): pt.logical.t_count for pt in bundle.points}
    ratios = {
        strategy: t_counts[(strategy, 1e-4)] / t_counts[(strategy, 1e-3)]
        for strategy in scenario.strategies
    }
    record(
        9, all(8.0 <= r <= 35.0 for r in ratios.values()),
        "0.1 -> 1 mHa optimized T-count ratios "
        + ", ".join(f"{s} {r:.2f}" for s, r in ratios.items())
        + " (tolerance [8, 35])",
    )


def test_criterion_10_oracle_sanity():
    h2 = hartree_fock_overlap(enumerate_terms(load_molecule("h2_sto3g")))
    # reference energy computed independently of this package
    fci_gap = abs(h2.energy - (-1.137284))
    overlaps = {
        name: hartree_fock_overlap(enumerate_terms(load_molecule(name))).overlap
        for name, (_, equilibrium, _) in MOLECULES.items()
        if equilibrium
    }
    record(
        10, fci_gap <= 1e-3 and all(v >= 0.89 for v in overlaps.values()),
        f"H2 FCI energy {h2.energy:.6f} within {fci_gap:.1e} of the "
        f"independent reference (tolerance 1e-3 Ha); equilibrium overlaps "
        + ", ".join(f"{k} {v:.3f}" for k, v in overlaps.items())
        + " all >= 0.89",
    )
