"""
Darboux transformation engine.

A seed eigenfunction psi_m gives W_m = -psi_m'/psi_m and the partner

    U^(m) = W_m^2 + W_m' - beta_m,   beta_m = (p + q - m)^2 = -E_m,

which keeps the original absolute energies E_n for every n != m. The first-order
operators A = d/dx + W_m and B = -d/dx + W_m intertwine H_- = BA and H_+ = AB.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import LevelError, NodeError, RegimeError
from .grid import Grid, SampledFunction
from .numerics import STENCIL_TRIM, first_derivative, ode_residual, second_derivative
from .scarf2 import Branch, RegimeClass, ScarfModel, SpectralParams, SpectrumEntry, WaveFunction
from .special_fn import JacobiIndex, hyp2f1_terminating, hyp2f1_terminating_derivative, jacobi_p
from .utils import relative_sup, sample_axis, sech, tanh

log = logging.getLogger(__name__)

ComplexFn = Callable[[ArrayLike], NDArray[np.complex128]]

NODE_REL_TOL = 1e-12
NODE_SCAN_HALF_WIDTH = 10.0
NODE_SCAN_POINTS = 4001


@dataclass(frozen=True)
class LogDerivativeSeed:
    m: int
    branch: Branch
    w: ComplexFn
    w_prime: ComplexFn
    w_second: Optional[ComplexFn]
    wavefunction: WaveFunction


@dataclass(frozen=True)
class PartnerPotential:
    m: int
    branch: Branch
    beta_m: complex
    u: ComplexFn
    seed: LogDerivativeSeed

    def __call__(self, x: ArrayLike) -> NDArray[np.complex128]:
        return self.u(x)


def beta(sp: SpectralParams, m: int, branch: Branch = Branch.SINGLE) -> complex:
    if m < 0:
        raise LevelError(f"seed index must be >= 0, got {m}")
    return (sp.p + sp.q(branch) - m) ** 2


def beta_expanded(sp: SpectralParams, m: int, branch: Branch = Branch.SINGLE) -> complex:
    s = sp.p + sp.q(branch)
    return s * s - 2 * m * s + m * m


def scan_for_nodes(
    wf: WaveFunction, half_width: float = NODE_SCAN_HALF_WIDTH, points: int = NODE_SCAN_POINTS
) -> float:
    """
    Smallest interior local minimum of |psi| relative to its peak on [-L, L].
    Raises NodeError below NODE_REL_TOL. Monotone tails are not local minima.
    """
    x = sample_axis(-half_width, half_width, points)
    mag = np.abs(np.asarray(wf.value(x)))
    peak = float(np.max(mag))
    dips = (mag[1:-1] < mag[:-2]) & (mag[1:-1] < mag[2:])
    if not dips.any():
        return 1.0
    depth = float(np.min(mag[1:-1][dips])) / peak
    if depth < NODE_REL_TOL:
        i = int(np.argmin(np.where(dips, mag[1:-1], np.inf))) + 1
        raise NodeError(
            f"seed psi_{wf.n} has a near-node at x={x[i]:.6g} (|psi|/max={depth:.3g}); W_{wf.n} would be singular"
        )
    return depth


def seed_from_wavefunction(wf: WaveFunction, m: int, branch: Branch) -> LogDerivativeSeed:
    scan_for_nodes(wf)

    def _ratios(x: ArrayLike):
        psi = np.asarray(wf.value(x))
        return np.asarray(wf.deriv(x)) / psi, np.asarray(wf.deriv2(x)) / psi, psi

    def w(x: ArrayLike) -> NDArray[np.complex128]:
        r1, _, _ = _ratios(x)
        return -r1

    def w_prime(x: ArrayLike) -> NDArray[np.complex128]:
        r1, r2, _ = _ratios(x)
        return r1 * r1 - r2

    w_second = None
    if wf.deriv3 is not None:
        d3 = wf.deriv3

        def w_second(x: ArrayLike) -> NDArray[np.complex128]:
            r1, r2, psi = _ratios(x)
            r3 = np.asarray(d3(x)) / psi
            return 3.0 * r1 * r2 - 2.0 * r1**3 - r3

    return LogDerivativeSeed(m, branch, w, w_prime, w_second, wf)


def make_seed(model: ScarfModel, m: int, branch: Optional[Branch] = None) -> LogDerivativeSeed:
    branch = model.resolve_branch(branch)
    wf = model.eigenfunction(m, branch)
    seed = seed_from_wavefunction(wf, m, branch)
    log.debug("Seed W_%d (%s) built for v1=%s v2=%s", m, branch.value, model.params.v1, model.params.v2)
    return seed


def partner_potential(model: ScarfModel, seed: LogDerivativeSeed) -> PartnerPotential:
    shift = beta(model.sp, seed.m, seed.branch)

    def u(x: ArrayLike) -> NDArray[np.complex128]:
        w = np.asarray(seed.w(x))
        return w * w + np.asarray(seed.w_prime(x)) - shift

    return PartnerPotential(seed.m, seed.branch, shift, u, seed)


def build_partner(model: ScarfModel, m: int, branch: Optional[Branch] = None) -> PartnerPotential:
    return partner_potential(model, make_seed(model, m, branch))


def partner_spectrum(model: ScarfModel, m: int, branch: Optional[Branch] = None) -> Tuple[List[SpectrumEntry], SpectrumEntry]:
    """Seed-branch levels kept by the partner, and the deleted seed level."""
    branch = model.resolve_branch(branch)
    kept = [SpectrumEntry(n, branch, model.energy(n, branch)) for n in range(model.n_max) if n != m]
    deleted = SpectrumEntry(m, branch, model.energy(m, branch))
    return kept, deleted


def reindexed_energy(model: ScarfModel, m: int, k: int, branch: Optional[Branch] = None) -> complex:
    """Energy of the k-th partner level counted from the partner's own ground state."""
    n = k if k < m else k + 1
    return model.energy(n, branch)


# -- closed forms (comparators) ----------------------------------------------


def _require_unbroken(model: ScarfModel) -> Tuple[float, float]:
    if model.regime != RegimeClass.UNBROKEN_PT:
        raise RegimeError("closed-form partners are tabulated for the unbroken regime only")
    return model.sp.p.real, model.sp.q_plus.real


def _satellite(p: complex, q: complex, x: NDArray[np.float64]) -> NDArray[np.complex128]:
    sh, th = sech(x), tanh(x)
    return -(2.0 * (p * p + q * q) - (p + q)) * sh * sh - 1j * (p - q) * (2.0 * (p + q) - 1.0) * sh * th


def first_partner_polynomial(p: float, q: float, x: ArrayLike) -> NDArray[np.complex128]:
    xx = np.asarray(x, dtype=float)
    return -(p - q) + 0.5j * (1.0 - 2.0 * p - 2.0 * q) * np.sinh(xx)


def second_partner_polynomial(p: float, q: float, x: ArrayLike) -> Tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    """F(-2, 2-2p-2q; -2p+1/2; z) and its x-derivative, z = (1 - i sinh x)/2."""
    xx = np.asarray(x, dtype=float)
    z = (1.0 - 1j * np.sinh(xx)) / 2.0
    b, c = 2.0 - 2.0 * p - 2.0 * q, 0.5 - 2.0 * p
    f = np.asarray(hyp2f1_terminating(2, b, c, z))
    df = np.asarray(hyp2f1_terminating_derivative(2, b, c, z)) * (-0.5j * np.cosh(xx))
    return f, df


def sigma_coefficient(p: float, q: float) -> float:
    lead = (-2.0 * p - 2.0 * q + 2.0) / ((-2.0 * p + 0.5) * (-2.0 * p + 1.5))
    inner = (
        2.0 * (p - q) ** 2
        - (-2.0 * q + 1.5) * (-2.0 * p + 1.5) / (-2.0 * p - 2.0 * q + 2.0)
        + 0.5 * (3.0 + 2.0 * p + 2.0 * q) * (3.0 - 2.0 * p - 2.0 * q)
    )
    return lead * inner


def closed_form_partner(model: ScarfModel, m: int, x: ArrayLike) -> NDArray[np.complex128]:
    """
    Tabulated partners for m in {0, 1, 2}, transcribed term by term. Only m=0 is
    expected to agree with the generic construction.
    """
    p, q = _require_unbroken(model)
    xx = np.asarray(x, dtype=float)
    base = _satellite(p, q, xx)
    if m == 0:
        return base
    if m == 1:
        f1 = first_partner_polynomial(p, q, xx)
        df1 = 0.5j * (1.0 - 2.0 * p - 2.0 * q) * np.cosh(xx)
        return base + 2.0 * (df1 / f1) ** 2 - 2.0 * (p - q) / f1 - 2.0
    if m == 2:
        f2, df2 = second_partner_polynomial(p, q, xx)
        sigma = sigma_coefficient(p, q)
        return base + 2.0 * (df2 / f2) ** 2 + (sigma - 6.0j * (p - q) * np.sinh(xx)) / f2 - 8.0
    raise LevelError(f"closed forms exist for m in {{0, 1, 2}}, got m={m}")


def closed_form_ground_state(model: ScarfModel, m: int, x: ArrayLike) -> NDArray[np.complex128]:
    """Partner ground state up to normalization, for m in {0, 1} (m=1 as tabulated)."""
    p, q = _require_unbroken(model)
    xx = np.asarray(x, dtype=float)
    ish = 1j * np.sinh(xx)
    envelope = np.exp(-(p - 0.5) * np.log((1.0 - ish) / 2.0) - (q - 0.5) * np.log((1.0 + ish) / 2.0))
    if m == 0:
        return envelope
    if m == 1:
        lead = 2j * (0.5 - p - q)
        return lead / ((-p - q) + 1j * (0.5 - p - q) * np.sinh(xx)) * envelope
    raise LevelError(f"closed-form ground states exist for m in {{0, 1}}, got m={m}")


def broken_closed_form_partner(model: ScarfModel, x: ArrayLike, branch: Branch = Branch.MINUS) -> NDArray[np.complex128]:
    """Broken-regime m=0 partner with its complex sech^2 and sech*tanh couplings."""
    if model.regime != RegimeClass.BROKEN_PT:
        raise RegimeError("the complex-coupling m=0 partner applies to the broken regime")
    p, s = model.sp.p.real, model.sp.s
    sign = 1.0 if branch == Branch.MINUS else -1.0
    xx = np.asarray(x, dtype=float)
    if model.sp.mirrored:
        xx = -xx
    sh, th = sech(xx), tanh(xx)
    a = 2.0 * p * p - p - 0.5 * s * s + 0.375
    b = 2.0 * p * p - p + 0.5 * s * s - 0.375
    return -(a + 1j * sign * s) * sh * sh - (1j * b + sign * s) * sh * th


def singlet_shorthand(model: ScarfModel, k: int, branch: Branch = Branch.MINUS) -> complex:
    """Tabulated singlet energy -mu_{k+1}^2 -/+ i mu_{k+1} s of the m=0 broken partner."""
    if model.regime != RegimeClass.BROKEN_PT:
        raise RegimeError("singlet energies apply to the broken regime")
    mu = k + 1 - model.sp.p.real + 0.25
    sign = -1.0 if branch == Branch.MINUS else 1.0
    return complex(-mu * mu, sign * mu * model.sp.s)


# -- transformed eigenfunctions ----------------------------------------------


def transformed_eigenfunction(
    model: ScarfModel, seed: LogDerivativeSeed, n: int, branch: Optional[Branch] = None
) -> WaveFunction:
    """
    phi_n = A psi_n = psi_n' + W_m psi_n with exact first and second derivatives;
    it solves the partner equation at the original energy E_n.
    """
    branch = seed.branch if branch is None else model.resolve_branch(branch)
    if n == seed.m and branch == seed.branch:
        raise LevelError(f"level n={n} is the seed level and is deleted from the partner")
    psi = model.eigenfunction(n, branch)
    if psi.deriv3 is None or seed.w_second is None:
        raise LevelError("transformed eigenfunctions need third derivatives of the seed and target")
    w, w1, w2 = seed.w, seed.w_prime, seed.w_second
    d3 = psi.deriv3

    def value(x: ArrayLike) -> NDArray[np.complex128]:
        return np.asarray(psi.deriv(x)) + np.asarray(w(x)) * np.asarray(psi.value(x))

    def deriv(x: ArrayLike) -> NDArray[np.complex128]:
        f0, f1, f2 = np.asarray(psi.value(x)), np.asarray(psi.deriv(x)), np.asarray(psi.deriv2(x))
        return f2 + np.asarray(w1(x)) * f0 + np.asarray(w(x)) * f1

    def deriv2(x: ArrayLike) -> NDArray[np.complex128]:
        f0, f1, f2 = np.asarray(psi.value(x)), np.asarray(psi.deriv(x)), np.asarray(psi.deriv2(x))
        return (
            np.asarray(d3(x))
            + np.asarray(w2(x)) * f0
            + 2.0 * np.asarray(w1(x)) * f1
            + np.asarray(w(x)) * f2
        )

    return WaveFunction(n, psi.energy, value, deriv, deriv2, None, branch)


def polynomial_form_eigenfunction(model: ScarfModel, m: int, n: int) -> ComplexFn:
    """
    ((P_m P_n' - P_m' P_n) / P_m) psi_0 with x-derivatives of P_k(i sinh x);
    proportional to transformed_eigenfunction by the constant N_n / N_0.
    """
    branch = model.default_branch()
    p, q = model.sp.p, model.sp.q(branch)
    alpha, beta_ = -2.0 * p - 0.5, -2.0 * q - 0.5
    ground = model.eigenfunction(0, branch)
    pm_idx, pn_idx = JacobiIndex(m, alpha, beta_), JacobiIndex(n, alpha, beta_)

    def _jet(idx: JacobiIndex, xx: NDArray[np.float64]):
        y = 1j * np.sinh(xx)
        value = np.asarray(jacobi_p(idx, y))
        if idx.n == 0:
            return value, np.zeros_like(value)
        slope = 0.5 * (idx.n + idx.alpha + idx.beta + 1.0) * np.asarray(jacobi_p(idx.shifted(1), y))
        return value, slope * 1j * np.cosh(xx)

    def phi(x: ArrayLike) -> NDArray[np.complex128]:
        xx = np.asarray(x, dtype=float)
        # mirrored models: A psi_n(x) = -(A psi_n)(-x) of the v2 > 0 model
        yy, sign = (-xx, -1.0) if model.sp.mirrored else (xx, 1.0)
        pm, dpm = _jet(pm_idx, yy)
        pn, dpn = _jet(pn_idx, yy)
        return sign * (pm * dpn - dpm * pn) / pm * np.asarray(ground.value(xx))

    return phi


# -- intertwiners and pseudo-supersymmetry -----------------------------------


@dataclass(frozen=True)
class FirstOrderOperator:
    """sign * d/dx + W_m; sign = +1 gives A, sign = -1 gives B."""

    sign: float
    w: ComplexFn
    w_prime: ComplexFn

    def apply(self, x: ArrayLike, f: ArrayLike, df: ArrayLike) -> NDArray[np.complex128]:
        return self.sign * np.asarray(df) + np.asarray(self.w(x)) * np.asarray(f)

    def apply_jet(
        self, x: ArrayLike, f: ArrayLike, df: ArrayLike, d2f: ArrayLike
    ) -> Tuple[NDArray[np.complex128], NDArray[np.complex128]]:
        f, df, d2f = np.asarray(f), np.asarray(df), np.asarray(d2f)
        w = np.asarray(self.w(x))
        value = self.sign * df + w * f
        slope = self.sign * d2f + np.asarray(self.w_prime(x)) * f + w * df
        return value, slope

    def apply_sampled(self, values: NDArray[np.complex128], grid: Grid) -> NDArray[np.complex128]:
        return self.sign * first_derivative(values, grid.step) + np.asarray(self.w(grid.nodes)) * values


@dataclass(frozen=True)
class IntertwinerPair:
    a_op: FirstOrderOperator
    b_op: FirstOrderOperator


def intertwiners(seed: LogDerivativeSeed) -> IntertwinerPair:
    return IntertwinerPair(
        FirstOrderOperator(1.0, seed.w, seed.w_prime),
        FirstOrderOperator(-1.0, seed.w, seed.w_prime),
    )


def factorization_defect(model: ScarfModel, seed: LogDerivativeSeed, n: int, x: ArrayLike) -> float:
    """
    Defect of B A psi_n = (E_n + beta_m) psi_n evaluated analytically, relative to
    max|psi_n| * max(1, |E_n + beta_m|) so the seed level (eigenvalue 0) is covered.
    """
    pair = intertwiners(seed)
    psi = model.eigenfunction(n, seed.branch)
    xx = np.asarray(x, dtype=float)
    f0, f1, f2 = psi.value(xx), psi.deriv(xx), psi.deriv2(xx)
    a_val, a_slope = pair.a_op.apply_jet(xx, f0, f1, f2)
    ba = pair.b_op.apply(xx, a_val, a_slope)
    shifted = psi.energy + beta(model.sp, seed.m, seed.branch)
    expected = shifted * np.asarray(f0)
    scale = float(np.max(np.abs(f0))) * max(1.0, abs(shifted))
    return float(np.max(np.abs(ba - expected))) / scale


@dataclass(frozen=True)
class SuperchargeAlgebraReport:
    q_squared: float
    q_sharp_squared: float
    anticommutator_block: float
    anticommutator_hamiltonian: float
    commutator_q: float
    commutator_q_sharp: float
    step: float
    test_functions: int

    def to_dict(self) -> dict:
        return {
            "q_squared": self.q_squared,
            "q_sharp_squared": self.q_sharp_squared,
            "anticommutator_block": self.anticommutator_block,
            "anticommutator_hamiltonian": self.anticommutator_hamiltonian,
            "commutator_q": self.commutator_q,
            "commutator_q_sharp": self.commutator_q_sharp,
            "step": self.step,
            "test_functions": self.test_functions,
        }


@dataclass
class _SampledSusy:
    """A, B, H+ and H- as finite-difference operators on one grid."""

    grid: Grid
    pair: IntertwinerPair
    w: NDArray[np.complex128] = field(init=False)
    w1: NDArray[np.complex128] = field(init=False)

    def __post_init__(self) -> None:
        self.w = np.asarray(self.pair.a_op.w(self.grid.nodes))
        self.w1 = np.asarray(self.pair.a_op.w_prime(self.grid.nodes))

    def a(self, f):
        return self.pair.a_op.apply_sampled(f, self.grid)

    def b(self, f):
        return self.pair.b_op.apply_sampled(f, self.grid)

    def h_plus(self, f):
        return -second_derivative(f, self.grid.step) + (self.w * self.w + self.w1) * f

    def h_minus(self, f):
        return -second_derivative(f, self.grid.step) + (self.w * self.w - self.w1) * f

    def q(self, pair):
        return self.a(pair[1]), np.zeros_like(pair[0])

    def q_sharp(self, pair):
        return np.zeros_like(pair[1]), self.b(pair[0])

    def ham(self, pair):
        return self.h_plus(pair[0]), self.h_minus(pair[1])


def _block_defect(lhs, rhs, window: slice) -> float:
    res = max(float(np.max(np.abs(l[window] - r[window]))) for l, r in zip(lhs, rhs))
    ref = max(float(np.max(np.abs(v[window]))) for v in (*lhs, *rhs))
    return res / ref if ref > 0 else res


def supercharge_algebra_check(seed: LogDerivativeSeed, test_suite: Sequence[SampledFunction]) -> SuperchargeAlgebraReport:
    """
    Q = [[0, A], [0, 0]], Q# = [[0, 0], [B, 0]], H = diag(H+, H-) applied to
    two-component test functions (consecutive bumps of the suite). Residuals are
    relative sup norms over nodes where every stencil is valid.
    """
    if not test_suite:
        raise ValueError("supercharge check needs at least one test function")
    grid = test_suite[0].grid
    ops = _SampledSusy(grid, intertwiners(seed))
    window = slice(2 * STENCIL_TRIM, -2 * STENCIL_TRIM)
    worst = dict.fromkeys(
        ("q2", "qs2", "block", "ham", "cq", "cqs"), 0.0
    )
    for i, bump in enumerate(test_suite):
        other = test_suite[(i + 1) % len(test_suite)]
        pair = (bump.values, other.values)
        q2 = ops.q(ops.q(pair))
        qs2 = ops.q_sharp(ops.q_sharp(pair))
        worst["q2"] = max(worst["q2"], max(float(np.max(np.abs(c))) for c in q2))
        worst["qs2"] = max(worst["qs2"], max(float(np.max(np.abs(c))) for c in qs2))
        qqs, qsq = ops.q(ops.q_sharp(pair)), ops.q_sharp(ops.q(pair))
        anti = (qqs[0] + qsq[0], qqs[1] + qsq[1])
        block = (ops.a(ops.b(pair[0])), ops.b(ops.a(pair[1])))
        worst["block"] = max(worst["block"], _block_defect(anti, block, window))
        worst["ham"] = max(worst["ham"], _block_defect(anti, ops.ham(pair), window))
        qh, hq = ops.q(ops.ham(pair)), ops.ham(ops.q(pair))
        worst["cq"] = max(worst["cq"], _block_defect(qh, hq, window))
        qsh, hqs = ops.q_sharp(ops.ham(pair)), ops.ham(ops.q_sharp(pair))
        worst["cqs"] = max(worst["cqs"], _block_defect(qsh, hqs, window))
    report = SuperchargeAlgebraReport(
        q_squared=worst["q2"],
        q_sharp_squared=worst["qs2"],
        anticommutator_block=worst["block"],
        anticommutator_hamiltonian=worst["ham"],
        commutator_q=worst["cq"],
        commutator_q_sharp=worst["cqs"],
        step=grid.step,
        test_functions=len(test_suite),
    )
    log.debug("Supercharge algebra for m=%d: %s", seed.m, report)
    return report


def pseudo_adjoint_observation(seed: LogDerivativeSeed, test_suite: Sequence[SampledFunction]) -> float:
    """
    Relative size of (P A^dagger P + B) f with the formal L2 adjoint
    A^dagger = -d/dx + conj(W); a value near 0 means P A^dagger P = -B.
    """
    grid = test_suite[0].grid
    h = grid.step
    w = np.asarray(seed.w(grid.nodes))
    pair = intertwiners(seed)
    window = slice(STENCIL_TRIM, -STENCIL_TRIM)
    worst = 0.0
    for bump in test_suite:
        g = bump.values[::-1]
        adj = -first_derivative(g, h) + np.conj(w) * g
        conjugated = adj[::-1]
        bf = pair.b_op.apply_sampled(bump.values, grid)
        worst = max(worst, relative_sup((conjugated + bf)[window], bf[window]))
    return worst


# -- broken regime -------------------------------------------------------------


@dataclass(frozen=True)
class OppositeLevel:
    entry: SpectrumEntry
    tail_ratio: float
    ode_residual: float


@dataclass(frozen=True)
class BrokenPartnerReport:
    partner: PartnerPotential
    expected_spectrum: List[SpectrumEntry]
    deleted: SpectrumEntry
    opposite_levels: List[OppositeLevel]
    closed_form_deviation: Optional[float]
    pt_defect: float


def tail_ratio(wf: WaveFunction, edge: float = 25.0, core: float = 5.0) -> float:
    core_peak = float(np.max(np.abs(np.asarray(wf.value(sample_axis(-core, core, 401))))))
    tails = np.abs(np.asarray(wf.value(np.array([-edge, edge]))))
    return float(np.max(tails)) / core_peak


def broken_partner_report(
    model: ScarfModel, m: int = 0, branch: Branch = Branch.MINUS, samples: Optional[ArrayLike] = None
) -> BrokenPartnerReport:
    if model.regime != RegimeClass.BROKEN_PT:
        raise RegimeError(f"broken-partner analysis needs the BrokenPT regime, got {model.regime.value}")
    x = sample_axis(-8.0, 8.0, 200) if samples is None else np.asarray(samples, dtype=float)
    partner = build_partner(model, m, branch)
    kept, deleted = partner_spectrum(model, m, branch)
    opposite = Branch.PLUS if branch == Branch.MINUS else Branch.MINUS
    levels = []
    for n in range(model.n_max):
        phi = transformed_eigenfunction(model, partner.seed, n, opposite)
        levels.append(
            OppositeLevel(
                SpectrumEntry(n, opposite, phi.energy),
                tail_ratio(phi),
                ode_residual(partner.u, phi.energy, phi, x),
            )
        )
    deviation = None
    if m == 0:
        deviation = float(np.max(np.abs(partner.u(x) - broken_closed_form_partner(model, x, branch))))
    symmetric = np.concatenate([-x[::-1], x])
    values = partner.u(symmetric)
    defect = float(np.max(np.abs(np.conj(values[::-1]) - values)))
    return BrokenPartnerReport(partner, kept, deleted, levels, deviation, defect)
