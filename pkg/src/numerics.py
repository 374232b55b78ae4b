"""
Finite-difference verification backend: dense Hamiltonians for complex
potentials, non-Hermitian eigen-solves, bound-state filtering and the residual
and matching metrics used to check the analytic constructions.
"""
import logging
import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray

from .errors import EigensolverError, PotentialValueError
from .grid import Grid, SampledFunction

log = logging.getLogger(__name__)

PotentialFn = Callable[[ArrayLike], NDArray[np.complex128]]

DEFAULT_EDGE_TOL = 1e-4
STENCIL_TRIM = 2


@dataclass(frozen=True)
class HamiltonianMatrix:
    matrix: NDArray[np.complex128]
    grid: Grid

    @property
    def order(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: NDArray[np.complex128]
    eigenvectors: Optional[NDArray[np.complex128]] = None


@dataclass(frozen=True)
class BoundState:
    energy: complex
    vector: NDArray[np.complex128]
    edge_ratio: float


@dataclass(frozen=True)
class Match:
    analytic: complex
    numeric: complex
    gap: float


@dataclass
class MatchReport:
    matches: List[Match] = field(default_factory=list)
    unmatched: List[complex] = field(default_factory=list)
    spurious: int = 0

    @property
    def max_gap(self) -> float:
        return max((m.gap for m in self.matches), default=0.0)

    @property
    def complete(self) -> bool:
        return not self.unmatched


def assemble_hamiltonian(potential_fn: PotentialFn, grid: Grid) -> HamiltonianMatrix:
    """
    -d^2/dx^2 + V on interior nodes, 3-point stencil, Dirichlet at +-L.
    The result equals its plain transpose for any complex V.
    """
    x = grid.interior
    v = np.asarray(potential_fn(x), dtype=np.complex128)
    bad = ~np.isfinite(v)
    if bad.any():
        i = int(np.argmax(bad))
        raise PotentialValueError(f"potential is not finite at x={x[i]!r} (interior node {i + 1}): {v[i]}")
    h2 = grid.step**2
    order = len(x)
    matrix = np.zeros((order, order), dtype=np.complex128)
    diag = np.arange(order)
    matrix[diag, diag] = 2.0 / h2 + v
    matrix[diag[:-1], diag[1:]] = -1.0 / h2
    matrix[diag[1:], diag[:-1]] = -1.0 / h2
    return HamiltonianMatrix(matrix, grid)


def eigen_spectrum(ham: HamiltonianMatrix, vectors: bool = True) -> Spectrum:
    m = ham.matrix
    started = time.perf_counter()
    try:
        if np.array_equal(m, m.conj().T):
            if vectors:
                w, v = scipy.linalg.eigh(m)
            else:
                w, v = scipy.linalg.eigh(m, eigvals_only=True), None
        elif vectors:
            w, v = scipy.linalg.eig(m)
        else:
            w, v = scipy.linalg.eigvals(m), None
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigensolverError(f"dense eigen-solve failed for order {ham.order} (h={ham.grid.step}): {exc}") from exc
    w = np.asarray(w, dtype=np.complex128)
    order = np.lexsort((w.imag, w.real))
    w = w[order]
    if v is not None:
        v = np.asarray(v, dtype=np.complex128)[:, order]
    log.debug("Eigen-solve of order %d took %.2fs", ham.order, time.perf_counter() - started)
    return Spectrum(w, v)


def bound_state_filter(spectrum: Spectrum, edge_tol: float = DEFAULT_EDGE_TOL) -> List[BoundState]:
    """
    Keep eigenpairs whose first/last interior amplitudes are below edge_tol of
    the vector's peak; box-continuum states reach the Dirichlet walls.
    """
    if spectrum.eigenvectors is None:
        raise EigensolverError("bound-state filtering needs eigenvectors")
    kept: List[BoundState] = []
    for k, energy in enumerate(spectrum.eigenvalues):
        vec = spectrum.eigenvectors[:, k]
        peak = float(np.max(np.abs(vec)))
        if peak == 0.0:
            continue
        edge = max(abs(vec[0]), abs(vec[-1])) / peak
        if edge <= edge_tol:
            kept.append(BoundState(complex(energy), vec, float(edge)))
    return kept


def numeric_bound_levels(
    potential_fn: PotentialFn, grid: Grid, edge_tol: float = DEFAULT_EDGE_TOL
) -> List[complex]:
    started = time.perf_counter()
    spectrum = eigen_spectrum(assemble_hamiltonian(potential_fn, grid))
    levels = [b.energy for b in bound_state_filter(spectrum, edge_tol)]
    log.info(
        "FD solve L=%.3g N=%d: %d bound levels in %.1fs",
        grid.half_width,
        grid.n_points,
        len(levels),
        time.perf_counter() - started,
    )
    return levels


def ode_residual(potential_fn: PotentialFn, energy: complex, wavefunction, samples: ArrayLike) -> float:
    """
    max |-phi'' + (U - E) phi| / (max |phi| * max(1, |E|)) over the samples.
    """
    x = np.asarray(samples, dtype=float)
    phi = np.asarray(wavefunction.value(x))
    residual = -np.asarray(wavefunction.deriv2(x)) + (np.asarray(potential_fn(x)) - energy) * phi
    scale = float(np.max(np.abs(phi))) * max(1.0, abs(energy))
    return float(np.max(np.abs(residual))) / scale


def pt_defect(potential_fn: PotentialFn, grid: Grid) -> float:
    values = np.asarray(potential_fn(grid.nodes), dtype=np.complex128)
    return float(np.max(np.abs(np.conj(values[::-1]) - values)))


def nearest_gap(value: complex, numeric: Sequence[complex]) -> float:
    if len(numeric) == 0:
        return float("inf")
    return float(np.min(np.abs(np.asarray(numeric, dtype=np.complex128) - value)))


def match_spectra(analytic: Sequence[complex], numeric: Sequence[complex], tol: float) -> MatchReport:
    """
    Greedy nearest-neighbour matching in the complex plane: closest pairs are
    taken first and every numeric value is consumed at most once.
    """
    pairs = sorted(
        (abs(complex(a) - complex(b)), i, j)
        for i, a in enumerate(analytic)
        for j, b in enumerate(numeric)
    )
    used_a: set = set()
    used_n: set = set()
    found = {}
    for gap, i, j in pairs:
        if gap > tol:
            break
        if i in used_a or j in used_n:
            continue
        used_a.add(i)
        used_n.add(j)
        found[i] = Match(complex(analytic[i]), complex(numeric[j]), gap)
    report = MatchReport()
    for i, a in enumerate(analytic):
        if i in found:
            report.matches.append(found[i])
        else:
            report.unmatched.append(complex(a))
    report.spurious = len(numeric) - len(used_n)
    return report


def richardson_extrapolate(coarse: Sequence[complex], fine: Sequence[complex], tol: float = 0.05) -> List[complex]:
    """
    (4 E_{h/2} - E_h)/3 on levels matched between an (N, 2N-1) grid pair.
    """
    report = match_spectra(coarse, fine, tol)
    return [(4.0 * m.numeric - m.analytic) / 3.0 for m in report.matches]


def richardson_levels(potential_fn: PotentialFn, grid: Grid, edge_tol: float = DEFAULT_EDGE_TOL) -> List[complex]:
    """
    Bound levels picked on grid, each extrapolated with its nearest eigenvalue
    on grid.refined(); the fine solve skips eigenvectors.
    """
    coarse = numeric_bound_levels(potential_fn, grid, edge_tol)
    fine = eigen_spectrum(assemble_hamiltonian(potential_fn, grid.refined()), vectors=False).eigenvalues
    levels = richardson_extrapolate(coarse, list(fine))
    log.info("Richardson pair N=%d/%d: %d of %d levels extrapolated", grid.n_points, grid.refined().n_points, len(levels), len(coarse))
    return levels


def first_derivative(values: ArrayLike, h: float) -> NDArray[np.complex128]:
    """Fourth-order central difference; the 2 edge nodes per side are left at 0."""
    f = np.asarray(values, dtype=np.complex128)
    out = np.zeros_like(f)
    out[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)
    return out


def second_derivative(values: ArrayLike, h: float) -> NDArray[np.complex128]:
    f = np.asarray(values, dtype=np.complex128)
    out = np.zeros_like(f)
    out[2:-2] = (-f[:-4] + 16.0 * f[1:-3] - 30.0 * f[2:-2] + 16.0 * f[3:-1] - f[4:]) / (12.0 * h * h)
    return out


def gaussian_bumps(
    grid: Grid,
    count: int,
    seed: int,
    centers: tuple = (-2.0, 2.0),
    widths: tuple = (0.5, 1.0),
) -> List[SampledFunction]:
    rng = np.random.default_rng(seed)
    x = grid.nodes
    bumps = []
    for _ in range(count):
        c = rng.uniform(*centers)
        w = rng.uniform(*widths)
        amp = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
        bumps.append(SampledFunction(grid, amp * np.exp(-((x - c) ** 2) / (2.0 * w * w))))
    return bumps
