"""
Invariant suite behind `verify`: analytic spectra against finite differences,
level deletion, isospectral residuals, PT defects, closed-form comparators and
the pseudo-supercharge algebra, plus the broken-regime reference case.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .config import BrokenReferenceConfig, RunConfig, VerificationConfig
from .darboux import (
    broken_partner_report,
    closed_form_ground_state,
    closed_form_partner,
    factorization_defect,
    make_seed,
    partner_potential,
    partner_spectrum,
    pseudo_adjoint_observation,
    supercharge_algebra_check,
    transformed_eigenfunction,
)
from .export import Table
from .grid import Grid
from .numerics import (
    assemble_hamiltonian,
    eigen_spectrum,
    gaussian_bumps,
    match_spectra,
    nearest_gap,
    numeric_bound_levels,
    ode_residual,
    pt_defect,
    richardson_levels,
)
from .scarf2 import Branch, RegimeClass, ScarfModel, SpectrumEntry, conjugate_pair_shorthand
from .utils import sample_axis

log = logging.getLogger(__name__)

REAL_LEVEL_TOL = 1e-6
BROKEN_PT_FLOOR = 0.1
CONVERGENCE_BAND = (3.5, 4.5)
PT_GRID = Grid(5.0, 2001)


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool
    relation: str = "<="


@dataclass(frozen=True)
class Note:
    name: str
    value: float
    message: str


@dataclass
class VerificationReport:
    checks: List[Check] = field(default_factory=list)
    notes: List[Note] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def at_most(self, name: str, value: float, tolerance: float) -> Check:
        check = Check(name, float(value), tolerance, bool(value <= tolerance), "<=")
        self._record(check)
        return check

    def above(self, name: str, value: float, bound: float) -> Check:
        check = Check(name, float(value), bound, bool(value > bound), ">")
        self._record(check)
        return check

    def within(self, name: str, value: float, band: Sequence[float]) -> Check:
        lo, hi = band
        check = Check(name, float(value), hi, bool(lo <= value <= hi), f"in [{lo}, {hi}]")
        self._record(check)
        return check

    def note(self, name: str, value: float, message: str) -> None:
        self.notes.append(Note(name, float(value), message))
        log.info("note %s: %s", name, message)

    def _record(self, check: Check) -> None:
        self.checks.append(check)
        level = logging.INFO if check.passed else logging.WARNING
        log.log(level, "%s %s = %.3e (%s %.3e)", "PASS" if check.passed else "FAIL", check.name, check.value, check.relation, check.tolerance)

    def to_table(self) -> Table:
        table = Table(["name", "kind", "value", "tolerance", "relation", "passed", "message"])
        for c in self.checks:
            table.add_row([c.name, "check", c.value, c.tolerance, c.relation, c.passed, None])
        for n in self.notes:
            table.add_row([n.name, "note", n.value, None, None, None, n.message])
        table.meta = {
            "passed": self.passed,
            "failures": [c.name for c in self.failures],
            "notes": {n.name: n.message for n in self.notes},
        }
        return table


def worst_gap(analytic: Sequence[complex], numeric: Sequence[complex], tol: float) -> float:
    """Largest matched gap, or the nearest-neighbour gap of any unmatched level."""
    report = match_spectra(analytic, numeric, tol)
    gaps = [m.gap for m in report.matches] + [nearest_gap(a, numeric) for a in report.unmatched]
    return max(gaps, default=0.0)


def _convergence_ratio(model: ScarfModel, grid: Grid) -> float:
    target = model.energy(0)
    errors = []
    for g in (grid, grid.refined()):
        values = eigen_spectrum(assemble_hamiltonian(model.potential, g), vectors=False).eigenvalues
        errors.append(float(np.min(np.abs(values - target))))
    return errors[0] / errors[1] if errors[1] > 0 else math.inf


def _model_checks(report: VerificationReport, model: ScarfModel, grid: Grid, vcfg: VerificationConfig) -> None:
    analytic = [e.energy for e in model.spectrum()]
    numeric = numeric_bound_levels(model.potential, grid, vcfg.edge_tol)
    report.at_most("model.spectrum_gap", worst_gap(analytic, numeric, vcfg.level_tol), vcfg.level_tol)
    report.at_most("model.pt_defect", pt_defect(model.potential, PT_GRID), vcfg.pt_tol)
    if model.regime == RegimeClass.UNBROKEN_PT:
        imag = max((abs(e.imag) for e in numeric), default=0.0)
        report.at_most("model.bound_levels_real", imag, REAL_LEVEL_TOL)
        explained = analytic + [e.energy for e in model.second_series()]
        spurious = match_spectra(explained, numeric, vcfg.match_tol).spurious
        report.at_most("model.unexplained_levels", float(spurious), 0.0)
        ratio = _convergence_ratio(model, vcfg.convergence_grid.grid())
        report.within("model.convergence_ratio", ratio, CONVERGENCE_BAND)
    _second_series_notes(report, "model", model.second_series(), numeric)


def _partner_checks(
    report: VerificationReport,
    model: ScarfModel,
    m: int,
    grid: Grid,
    vcfg: VerificationConfig,
    branch: Optional[Branch] = None,
) -> None:
    seed = make_seed(model, m, branch)
    tag = f"partner_m{m}" if seed.branch == Branch.SINGLE else f"partner_m{m}_{seed.branch.value}"
    partner = partner_potential(model, seed)
    kept, deleted = partner_spectrum(model, m, seed.branch)
    unbroken = model.regime == RegimeClass.UNBROKEN_PT

    x_sym = PT_GRID.nodes
    if unbroken:
        report.at_most(f"{tag}.pt_defect", pt_defect(partner.u, PT_GRID), vcfg.pt_tol)
        w = np.asarray(seed.w(x_sym))
        report.at_most(f"{tag}.seed_pt_antisymmetry", float(np.max(np.abs(np.conj(w[::-1]) + w))), vcfg.pt_tol)

    if vcfg.richardson:
        numeric = richardson_levels(partner.u, grid, vcfg.edge_tol)
    else:
        numeric = numeric_bound_levels(partner.u, grid, vcfg.edge_tol)
    report.at_most(f"{tag}.spectrum_gap", worst_gap([e.energy for e in kept], numeric, vcfg.level_tol), vcfg.level_tol)
    report.above(f"{tag}.deleted_level_gap", nearest_gap(deleted.energy, numeric), vcfg.deletion_gap)
    _second_series_notes(report, tag, model.second_series(), numeric)

    x8 = sample_axis(-8.0, 8.0, 200)
    residuals = [
        ode_residual(partner.u, e.energy, transformed_eigenfunction(model, seed, e.n), x8) for e in kept
    ]
    report.at_most(f"{tag}.ode_residual", max(residuals, default=0.0), vcfg.residual_tol)
    factor = max(factorization_defect(model, seed, n, x8) for n in range(model.n_max))
    report.at_most(f"{tag}.factorization", factor, vcfg.residual_tol)

    if unbroken and m <= 2:
        x5 = sample_axis(-5.0, 5.0, 200)
        deviation = float(np.max(np.abs(partner.u(x5) - closed_form_partner(model, m, x5))))
        if m == 0:
            report.at_most(f"{tag}.closed_form", deviation, vcfg.closed_form_tol)
        else:
            report.note(
                f"{tag}.closed_form",
                deviation,
                f"tabulated m={m} partner deviates from the generic construction by {deviation:.3e} (sup on [-5,5])",
            )

    op_grid = Grid.from_step(vcfg.operator_half_width, vcfg.operator_step)
    bumps = gaussian_bumps(op_grid, vcfg.bumps, vcfg.bump_seed)
    algebra = supercharge_algebra_check(seed, bumps)
    report.at_most(f"{tag}.q_squared", algebra.q_squared, 0.0)
    report.at_most(f"{tag}.q_sharp_squared", algebra.q_sharp_squared, 0.0)
    report.at_most(f"{tag}.anticommutator_block", algebra.anticommutator_block, vcfg.block_tol)
    report.at_most(f"{tag}.anticommutator_hamiltonian", algebra.anticommutator_hamiltonian, vcfg.intertwining_tol)
    report.at_most(f"{tag}.commutator_q", algebra.commutator_q, vcfg.intertwining_tol)
    report.at_most(f"{tag}.commutator_q_sharp", algebra.commutator_q_sharp, vcfg.intertwining_tol)
    if unbroken:
        eta = pseudo_adjoint_observation(seed, bumps)
        report.note(
            f"{tag}.pseudo_adjoint",
            eta,
            f"P A^dagger P + B has relative size {eta:.3e}: the parity-conjugated adjoint of A equals -B",
        )


def _second_series_notes(
    report: VerificationReport, tag: str, entries: Sequence[SpectrumEntry], numeric: Sequence[complex]
) -> None:
    for entry in entries:
        gap = nearest_gap(entry.energy, numeric)
        report.note(
            f"{tag}.second_series_n{entry.n}",
            gap,
            f"other quasi-parity level E={entry.energy.real:.6g}: nearest FD bound level at {gap:.3e}",
        )


def _ground_state_note(report: VerificationReport, model: ScarfModel) -> None:
    if model.regime != RegimeClass.UNBROKEN_PT or model.n_max < 2:
        return
    x = sample_axis(-5.0, 5.0, 200)
    phi = transformed_eigenfunction(model, make_seed(model, 1), 0)
    ratio = closed_form_ground_state(model, 1, x) / np.asarray(phi.value(x))
    spread = float(np.max(np.abs(ratio - ratio[len(ratio) // 2])) / abs(ratio[len(ratio) // 2]))
    report.note(
        "partner_m1.closed_form_ground_state",
        spread,
        f"tabulated m=1 ground state over A psi_0 varies by {spread:.3e} relative; "
        "a constant ratio needs the denominator -(p-q) + i(1/2-p-q) sinh x",
    )


def _broken_checks(report: VerificationReport, ref: BrokenReferenceConfig, vcfg: VerificationConfig) -> None:
    model = ScarfModel.from_couplings(ref.v1, ref.v2)
    grid = ref.grid.grid()
    tag = "broken"
    numeric = numeric_bound_levels(model.potential, grid, vcfg.edge_tol)
    analytic = [e.energy for e in model.spectrum()]
    report.at_most(f"{tag}.spectrum_gap", worst_gap(analytic, numeric, ref.level_tol), ref.level_tol)

    analysis = broken_partner_report(model, ref.m, ref.branch)
    partner_numeric = numeric_bound_levels(analysis.partner.u, grid, vcfg.edge_tol)
    kept = [e.energy for e in analysis.expected_spectrum]
    report.at_most(f"{tag}.partner_spectrum_gap", worst_gap(kept, partner_numeric, ref.level_tol), ref.level_tol)
    report.above(f"{tag}.deleted_level_gap", nearest_gap(analysis.deleted.energy, partner_numeric), vcfg.deletion_gap)
    report.above(f"{tag}.partner_pt_defect", pt_defect(analysis.partner.u, PT_GRID), BROKEN_PT_FLOOR)
    if analysis.closed_form_deviation is not None:
        report.at_most(f"{tag}.closed_form", analysis.closed_form_deviation, vcfg.closed_form_tol)

    x8 = sample_axis(-8.0, 8.0, 200)
    seed = analysis.partner.seed
    residuals = [
        ode_residual(analysis.partner.u, e.energy, transformed_eigenfunction(model, seed, e.n), x8)
        for e in analysis.expected_spectrum
    ]
    report.at_most(f"{tag}.ode_residual", max(residuals, default=0.0), vcfg.residual_tol)

    for level in analysis.opposite_levels:
        gap = nearest_gap(level.entry.energy, partner_numeric)
        report.note(
            f"{tag}.opposite_n{level.entry.n}",
            gap,
            f"{level.entry.branch.value}-branch E_{level.entry.n}={level.entry.energy:.6g}: nearest partner FD "
            f"eigenvalue at {gap:.3e}, A psi tail ratio {level.tail_ratio:.2e}, ODE residual {level.ode_residual:.2e}",
        )

    entry = analysis.deleted
    shorthand = conjugate_pair_shorthand(model.sp, entry.n, entry.branch)
    diff = abs(entry.energy - shorthand)
    report.note(
        f"{tag}.conjugate_pair_shorthand",
        diff,
        f"-mu^2 +/- i mu s differs from -(n-p-q)^2 by {diff:.6g}; s^2/4 = {model.sp.s ** 2 / 4.0:.6g}",
    )


def run_verification(cfg: RunConfig, include_broken: Optional[bool] = None) -> VerificationReport:
    report = VerificationReport()
    model = ScarfModel(cfg.model.params())
    grid = cfg.grid.grid()
    vcfg = cfg.verification
    log.info("Verifying v1=%s v2=%s (%s) on L=%s N=%d", model.params.v1, model.params.v2, model.regime.value, grid.half_width, grid.n_points)
    _model_checks(report, model, grid, vcfg)
    for m in vcfg.m_values:
        if m >= model.n_max:
            report.note(f"partner_m{m}.skipped", float(m), f"m={m} is not below n_max={model.n_max}")
            continue
        _partner_checks(report, model, m, grid, vcfg, cfg.model.branch)
    _ground_state_note(report, model)
    broken = vcfg.broken_reference
    if (broken.enabled if include_broken is None else include_broken):
        _broken_checks(report, broken, vcfg)
    log.info("Verification %s: %d checks, %d failures", "passed" if report.passed else "FAILED", len(report.checks), len(report.failures))
    return report
