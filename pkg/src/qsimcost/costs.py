"""Logical gate-count model and error-budget optimization.

The total T-gate cost of one phase-estimation run splits into four factors:

    C = 2M * ceil(alpha / e1) * ceil(beta * sqrt(e / e2))
           * (gamma * log2(2M * steps / e3) + delta)

where M is the merged term count, alpha the phase-estimation repetition
constant, beta the Trotter number at the full accuracy budget e, and
(gamma, delta) the per-rotation synthesis line. e1, e2, e3 are the portions
of e allotted to phase estimation, Trotter truncation, and rotation
synthesis. Two combination rules tie them to e: worst_case adds them
linearly; variance adds the two unbiased-error components in quadrature
before the systematic Trotter term.

The execution strategies differ only downstream of the rotation count:
serial synthesizes rotations one by one with the average-cost line, nesting
runs disjoint-support rotations concurrently with worst-case deterministic
synthesis, and PAR trades T-count for wall time through cached-rotation
cascades.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .par import ParParams, par_factory_time_per_rotation, par_rotation_factories

__all__ = [
    "T_GATE_TIME",
    "CLIFFORD_T_RATIO",
    "PhaseEstimationModel",
    "SynthesisModel",
    "ErrorBudget",
    "LogicalCostReport",
    "evaluate_cost",
    "evaluate_cost_smooth",
    "approx_optimal_budget",
    "optimize_budget",
    "strategy_report",
    "logical_qubit_count",
]

T_GATE_TIME = 1e-8

# Clifford-to-T ratios used when no term list is available to count from;
# PAR performs its Cliffords inside the cascade, so only the teleportation
# overhead of roughly one Clifford per T remains
CLIFFORD_T_RATIO = {"serial": 1.55, "nesting": 1.55, "par": 1.00}

_PE_PRESETS = {
    "standard_qpe": 8.0 * math.pi,
    "rfpe": 2.3,
    "optimal_surrogate": math.pi / 2.0,
}

_SYNTHESIS_PRESETS = {
    "deterministic_worst_case": (4.0, 11.0),
    "fallback_average": (1.15, 9.2),
}


@dataclasses.dataclass(frozen=True)
class PhaseEstimationModel:
    """Phase-estimation repetition model: repetitions = ceil(alpha / e1).

    Attributes:
        name: preset label or free-form description.
        alpha: dimensionless repetition constant.
    """

    name: str
    alpha: float

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    @classmethod
    def preset(cls, name):
        try:
            return cls(name=name, alpha=_PE_PRESETS[name])
        except KeyError:
            raise ValueError(
                f"unknown phase-estimation preset {name!r}; "
                f"available: {', '.join(_PE_PRESETS)}"
            ) from None


@dataclasses.dataclass(frozen=True)
class SynthesisModel:
    """Per-rotation T-count line: gamma * bits + delta.

    Attributes:
        name: preset label or free-form description.
        gamma: slope against the required precision bits.
        delta: constant offset.
    """

    name: str
    gamma: float
    delta: float

    @classmethod
    def preset(cls, name):
        try:
            gamma, delta = _SYNTHESIS_PRESETS[name]
        except KeyError:
            raise ValueError(
                f"unknown synthesis preset {name!r}; "
                f"available: {', '.join(_SYNTHESIS_PRESETS)}"
            ) from None
        return cls(name=name, gamma=gamma, delta=delta)

    def t_per_rotation(self, bits):
        """T gates for one rotation at the given precision bits."""
        return self.gamma * bits + self.delta

    def meets_worst_case_lower_bound(self, bits):
        """Check against the 4 log2(1/eps) - 9 worst-case synthesis floor.

        Average-cost models may dip below the floor; deterministic models
        must not.
        """
        return self.t_per_rotation(bits) >= 4.0 * bits - 9.0


@dataclasses.dataclass(frozen=True)
class ErrorBudget:
    """Split of the total energy-error tolerance, all in Hartree.

    Attributes:
        epsilon_total: overall accuracy target.
        epsilon1_pe: phase-estimation share.
        epsilon2_trotter: Trotter-truncation share.
        epsilon3_synth: rotation-synthesis share.
        combination: "worst_case" (linear sum) or "variance" (the two
            unbiased components combine in quadrature).
    """

    epsilon_total: float
    epsilon1_pe: float
    epsilon2_trotter: float
    epsilon3_synth: float
    combination: str = "worst_case"

    def __post_init__(self):
        self.validate()

    def combined(self):
        """The left-hand side of the budget constraint."""
        if self.combination == "worst_case":
            return self.epsilon1_pe + self.epsilon2_trotter + self.epsilon3_synth
        if self.combination == "variance":
            return self.epsilon2_trotter + math.hypot(
                self.epsilon1_pe, self.epsilon3_synth
            )
        raise ValueError(f"unknown combination rule {self.combination!r}")

    def validate(self):
        parts = (
            self.epsilon_total,
            self.epsilon1_pe,
            self.epsilon2_trotter,
            self.epsilon3_synth,
        )
        if any(p <= 0 for p in parts):
            raise ValueError(f"error budget components must be positive: {self}")
        if self.combined() > self.epsilon_total * (1.0 + 1e-12):
            raise ValueError(
                f"budget violates the {self.combination} constraint: "
                f"combined {self.combined():.6e} > total {self.epsilon_total:.6e}"
            )


@dataclasses.dataclass(frozen=True)
class LogicalCostReport:
    """Logical-level cost of one phase-estimation run.

    Attributes:
        strategy: "serial", "nesting", or "par".
        t_count: total T gates.
        clifford_count: total Clifford gates (counted or ratio-derived).
        rotation_count: arbitrary-angle rotations executed.
        trotter_steps_per_unit_time: second-order steps per inverse Hartree.
        pe_repetitions: phase-estimation repetitions.
        logical_qubits: processor logical qubits, None if the register
            width was not supplied.
        wall_time: seconds.
        budget: the ErrorBudget the run was evaluated at.
        m_terms: merged Hamiltonian term count M.
        pe: phase-estimation model used.
        synthesis: synthesis model used for this strategy.
        synthesis_bits: precision bits of each rotation, log2(2M steps/e3).
        t_per_rotation: T gates per rotation under this strategy.
        clifford_mode: "counted" when derived from a term list,
            "ratio_calibrated" when derived from the T-count.
        t_gate_time: seconds per logical T gate.
        parallelism: nesting parallelism in force, if any.
        par_params: ParParams in force for the PAR strategy, if any.
    """

    strategy: str
    t_count: float
    clifford_count: float
    rotation_count: float
    trotter_steps_per_unit_time: int
    pe_repetitions: int
    logical_qubits: int | None
    wall_time: float
    budget: ErrorBudget
    m_terms: float
    pe: PhaseEstimationModel
    synthesis: SynthesisModel
    synthesis_bits: float
    t_per_rotation: float
    clifford_mode: str
    t_gate_time: float
    parallelism: float | None = None
    par_params: ParParams | None = None


def _core_counts(m_terms, budget, beta, pe):
    if m_terms < 1:
        raise ValueError(f"need at least one term, got {m_terms}")
    if beta < 1:
        raise ValueError(f"need beta >= 1, got {beta}")
    steps = math.ceil(
        beta * math.sqrt(budget.epsilon_total / budget.epsilon2_trotter)
    )
    pe_reps = math.ceil(pe.alpha / budget.epsilon1_pe)
    log_arg = 2.0 * m_terms * steps / budget.epsilon3_synth
    if log_arg <= 1.0:
        raise ValueError(
            f"degenerate budget: synthesis log argument {log_arg:g} <= 1"
        )
    return steps, pe_reps, math.log2(log_arg)


def evaluate_cost(m_terms, budget, beta, pe, synth, strategy="serial",
                  n_spin_orbitals=None, clifford_per_step=None,
                  t_gate_time=T_GATE_TIME):
    """Evaluate the logical cost formula at a fixed budget.

    Args:
        m_terms: merged Hamiltonian term count M.
        budget: ErrorBudget (already validated by construction).
        beta: Trotter number at the full budget epsilon_total.
        pe: PhaseEstimationModel.
        synth: SynthesisModel for the per-rotation T line.
        strategy: label recorded on the report; the serial wall-time
            identity wall = t_count * t_gate_time is applied here, so use
            strategy_report for nesting and PAR timing.
        n_spin_orbitals: register width for the logical-qubit count.
        clifford_per_step: CliffordStepCount from a real term list; when
            given, Clifford totals are counted rather than ratio-derived.
        t_gate_time: seconds per logical T gate.

    Returns:
        LogicalCostReport.
    """
    steps, pe_reps, bits = _core_counts(m_terms, budget, beta, pe)
    rotations = 2.0 * m_terms * steps * pe_reps
    per_rotation = synth.t_per_rotation(bits)
    t_count = rotations * per_rotation
    if clifford_per_step is not None:
        clifford = float(clifford_per_step.total_clifford) * steps * pe_reps
        clifford_mode = "counted"
    else:
        clifford = CLIFFORD_T_RATIO[strategy] * t_count
        clifford_mode = "ratio_calibrated"
    qubits = (
        logical_qubit_count(n_spin_orbitals, "serial")
        if n_spin_orbitals is not None
        else None
    )
    return LogicalCostReport(
        strategy=strategy,
        t_count=t_count,
        clifford_count=clifford,
        rotation_count=rotations,
        trotter_steps_per_unit_time=steps,
        pe_repetitions=pe_reps,
        logical_qubits=qubits,
        wall_time=t_count * t_gate_time,
        budget=budget,
        m_terms=float(m_terms),
        pe=pe,
        synthesis=synth,
        synthesis_bits=bits,
        t_per_rotation=per_rotation,
        clifford_mode=clifford_mode,
        t_gate_time=t_gate_time,
    )


def evaluate_cost_smooth(m_terms, e1, e2, e3, epsilon_total, beta, pe, synth):
    """The cost formula without ceilings; used for optimization and
    monotonicity analysis. Returns inf for infeasible components."""
    if min(e1, e2, e3) <= 0:
        return math.inf
    steps = beta * math.sqrt(epsilon_total / e2)
    log_arg = 2.0 * m_terms * steps / e3
    if log_arg <= 1.0:
        return math.inf
    per_rotation = synth.t_per_rotation(math.log2(log_arg))
    return 2.0 * m_terms * (pe.alpha / e1) * steps * per_rotation


def _budget_or_none(epsilon_total, e1, e2, e3, combination):
    try:
        return ErrorBudget(
            epsilon_total=epsilon_total,
            epsilon1_pe=e1,
            epsilon2_trotter=e2,
            epsilon3_synth=e3,
            combination=combination,
        )
    except ValueError:
        return None


def _true_cost(m_terms, budget, beta, pe, synth):
    if budget is None:
        return math.inf
    try:
        return evaluate_cost(m_terms, budget, beta, pe, synth).t_count
    except ValueError:
        return math.inf


def _e2_from_rule(epsilon_total, e1, e3, combination):
    if combination == "worst_case":
        return epsilon_total - e1 - e3
    return epsilon_total - math.hypot(e1, e3)


def approx_optimal_budget(m_terms, epsilon_total, beta, pe, synth,
                          combination="worst_case", grid=120):
    """Closed-form-guided seed for the budget optimizer.

    For the worst_case rule the smooth cost with a constant synthesis term
    is stationary at e1 = 2 * e2, so the seed scans e3 and splits the
    remainder that way. For the variance rule the seed is a coarse 2-D grid
    minimum of the smooth cost. The budget constraint is saturated in both
    cases since the cost is monotone decreasing in every component.
    """
    lo = epsilon_total * 1e-9
    hi = epsilon_total * (1.0 - 1e-9)
    best = (math.inf, None)
    if combination == "worst_case":
        for e3 in np.geomspace(lo, hi, grid):
            rest = epsilon_total - e3
            if rest <= 0:
                continue
            e1, e2 = 2.0 * rest / 3.0, rest / 3.0
            value = evaluate_cost_smooth(
                m_terms, e1, e2, e3, epsilon_total, beta, pe, synth
            )
            if value < best[0]:
                best = (value, (e1, e2, e3))
    else:
        for e1 in np.geomspace(lo, hi, grid):
            for e3 in np.geomspace(lo, hi, grid):
                e2 = _e2_from_rule(epsilon_total, e1, e3, combination)
                if e2 <= 0:
                    continue
                value = evaluate_cost_smooth(
                    m_terms, e1, e2, e3, epsilon_total, beta, pe, synth
                )
                if value < best[0]:
                    best = (value, (e1, e2, e3))
    if best[1] is None:
        raise ValueError("no feasible budget found; epsilon_total too small")
    e1, e2, e3 = best[1]
    return _budget_or_none(epsilon_total, e1, e2, e3, combination)


def optimize_budget(m_terms, epsilon_total, beta, pe, synth,
                    combination="worst_case"):
    """Minimize the ceiled cost formula over the budget split.

    Seeds from approx_optimal_budget plus an equal-split fallback, then
    refines with shrinking local log grids over (e1, e3), deriving e2 from
    the saturated combination rule and scoring the exact ceiled cost.

    Args:
        m_terms, epsilon_total, beta, pe, synth: as in evaluate_cost.
        combination: budget rule; see ErrorBudget.

    Returns:
        The best ErrorBudget found.
    """
    if epsilon_total <= 0:
        raise ValueError(f"epsilon_total must be positive, got {epsilon_total}")

    def score(e1, e3):
        e2 = _e2_from_rule(epsilon_total, e1, e3, combination)
        if e2 <= 0:
            return math.inf, None
        budget = _budget_or_none(epsilon_total, e1, e2, e3, combination)
        return _true_cost(m_terms, budget, beta, pe, synth), budget

    candidates = []
    seed = approx_optimal_budget(
        m_terms, epsilon_total, beta, pe, synth, combination
    )
    if seed is not None:
        candidates.append((seed.epsilon1_pe, seed.epsilon3_synth))
    if combination == "worst_case":
        third = epsilon_total / 3.0
        candidates.append((third, third))
    else:
        candidates.append((epsilon_total / (2.0 * math.sqrt(2.0)),) * 2)

    best_cost, best_budget, best_point = math.inf, None, None
    for e1, e3 in candidates:
        cost, budget = score(e1, e3)
        if cost < best_cost:
            best_cost, best_budget, best_point = cost, budget, (e1, e3)
    if best_budget is None:
        raise ValueError("no feasible budget found; epsilon_total too small")

    for span in (30.0, 6.0, 1.6, 1.15, 1.03):
        e1_c, e3_c = best_point
        grid1 = np.geomspace(e1_c / span, min(e1_c * span, epsilon_total), 17)
        grid3 = np.geomspace(e3_c / span, min(e3_c * span, epsilon_total), 17)
        for e1 in grid1:
            for e3 in grid3:
                cost, budget = score(float(e1), float(e3))
                if cost < best_cost:
                    best_cost, best_budget, best_point = cost, budget, (e1, e3)
    return best_budget


def logical_qubit_count(n_spin_orbitals, strategy, parallelism=None,
                        par_ancillas=None):
    """Processor logical qubits for a strategy.

    The additive constants (system register plus phase-estimation and
    scratch ancillas) are calibrated, not derived: serial and nesting carry
    3 extra logical qubits, PAR carries 2 plus its rotation-factory block.
    """
    if n_spin_orbitals < 1:
        raise ValueError(f"need a positive register, got {n_spin_orbitals}")
    if strategy == "serial":
        return n_spin_orbitals + 3
    if strategy == "nesting":
        if parallelism is None or parallelism < 1:
            raise ValueError("nesting needs parallelism >= 1")
        return n_spin_orbitals + 3 + math.ceil(parallelism)
    if strategy == "par":
        if par_ancillas is None or par_ancillas < 0:
            raise ValueError("par needs a nonnegative ancilla count")
        return n_spin_orbitals + 2 + int(par_ancillas)
    raise ValueError(f"unknown strategy {strategy!r}")


def strategy_report(base, strategy, parallelism=None, par_params=None,
                    n_spin_orbitals=None, clifford_per_step=None):
    """Re-derive a logical report under an execution strategy.

    Args:
        base: LogicalCostReport carrying the problem size and budget.
        strategy: "serial", "nesting", or "par".
        parallelism: mean simultaneous rotations (nesting only).
        par_params: ParParams for the PAR cascade; synthesis_cost defaults
            to the deterministic per-rotation count at this budget's
            precision when the given value is 0.
        n_spin_orbitals: register width; falls back to the base report.
        clifford_per_step: optional counted Clifford totals per step.

    Returns:
        LogicalCostReport for the strategy.
    """
    bits = base.synthesis_bits
    rotations = base.rotation_count
    steps = base.trotter_steps_per_unit_time
    pe_reps = base.pe_repetitions
    t_gate = base.t_gate_time

    if strategy == "serial":
        synth = SynthesisModel.preset("fallback_average")
        per_rotation = synth.t_per_rotation(bits)
        t_count = rotations * per_rotation
        wall = t_count * t_gate
        qubits = (
            logical_qubit_count(n_spin_orbitals, "serial")
            if n_spin_orbitals
            else base.logical_qubits
        )
        par_out = None
    elif strategy == "nesting":
        if parallelism is None or parallelism < 1:
            raise ValueError("nesting needs parallelism >= 1")
        synth = SynthesisModel.preset("deterministic_worst_case")
        per_rotation = synth.t_per_rotation(bits)
        t_count = rotations * per_rotation
        wall = t_count * t_gate / parallelism
        qubits = (
            logical_qubit_count(n_spin_orbitals, "nesting", parallelism)
            if n_spin_orbitals
            else None
        )
        par_out = None
    elif strategy == "par":
        if par_params is None:
            raise ValueError("par needs ParParams")
        synth = SynthesisModel.preset("deterministic_worst_case")
        c_det = par_params.synthesis_cost
        if c_det == 0:
            c_det = math.ceil(synth.t_per_rotation(bits))
            par_params = dataclasses.replace(par_params, synthesis_cost=c_det)
        per_rotation = float(par_params.n_levels * c_det)
        t_count = rotations * per_rotation
        wall = rotations * par_factory_time_per_rotation(par_params) * t_gate
        qubits = (
            logical_qubit_count(
                n_spin_orbitals, "par",
                par_ancillas=par_rotation_factories(par_params),
            )
            if n_spin_orbitals
            else None
        )
        par_out = par_params
    else:
        raise ValueError(f"unknown strategy {strategy!r}")

    if clifford_per_step is not None:
        clifford = float(clifford_per_step.total_clifford) * steps * pe_reps
        clifford_mode = "counted"
    else:
        clifford = CLIFFORD_T_RATIO[strategy] * t_count
        clifford_mode = "ratio_calibrated"

    return LogicalCostReport(
        strategy=strategy,
        t_count=t_count,
        clifford_count=clifford,
        rotation_count=rotations,
        trotter_steps_per_unit_time=steps,
        pe_repetitions=pe_reps,
        logical_qubits=qubits,
        wall_time=wall,
        budget=base.budget,
        m_terms=base.m_terms,
        pe=base.pe,
        synthesis=synth,
        synthesis_bits=bits,
        t_per_rotation=per_rotation,
        clifford_mode=clifford_mode,
        t_gate_time=t_gate,
        parallelism=parallelism,
        par_params=par_out,
    )
