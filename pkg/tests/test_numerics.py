import numpy as np
import pytest

from src.darboux import build_partner
from src.errors import EigensolverError, ParameterError, PotentialValueError
from src.grid import Grid, SampledFunction
from src.numerics import (
    HamiltonianMatrix,
    Spectrum,
    assemble_hamiltonian,
    bound_state_filter,
    eigen_spectrum,
    first_derivative,
    gaussian_bumps,
    match_spectra,
    nearest_gap,
    numeric_bound_levels,
    ode_residual,
    pt_defect,
    richardson_extrapolate,
    richardson_levels,
    second_derivative,
)
from src.scarf2 import Branch, PotentialParams, potential
from src.utils import sample_axis

REFERENCE_LEVELS = [-16, -9, -4, -1]
SECOND_SERIES = [-2.25, -0.25]


def _zero(x):
    return np.zeros_like(np.asarray(x, dtype=float), dtype=complex)


@pytest.fixture(scope="module")
def reference_levels(model, fd_grid):
    return numeric_bound_levels(model.potential, fd_grid)



class TestGrid:
    def test_nodes_are_symmetric(self):
        grid = Grid(12.0, 1201)
        nodes = grid.nodes
        assert grid.step == pytest.approx(0.02)
        assert nodes[600] == 0.0
        assert np.array_equal(nodes, -nodes[::-1])
        assert len(grid.interior) == 1199

    @pytest.mark.parametrize("n_points", [4, 1200, 3])
    def test_node_count_must_be_odd(self, n_points):
        with pytest.raises(ParameterError):
            Grid(1.0, n_points)

    def test_half_width_must_be_positive(self):
        with pytest.raises(ParameterError):
            Grid(0.0, 11)

    def test_from_step_and_refined(self):
        grid = Grid.from_step(6.0, 0.01)
        assert grid.n_points == 1201
        assert grid.refined().step == pytest.approx(grid.step / 2)
        assert Grid.from_dict(grid.to_dict()) == grid

    def test_sampled_function_length(self):
        with pytest.raises(ParameterError):
            SampledFunction(Grid(1.0, 11), np.zeros(10, dtype=complex))


class TestAssembly:
    def test_stencil(self):
        grid = Grid(1.0, 5)
        ham = assemble_hamiltonian(lambda x: 3.0 * np.ones_like(x, dtype=complex), grid)
        h2 = grid.step**2
        expected = np.diag([2 / h2 + 3] * 3) + np.diag([-1 / h2] * 2, 1) + np.diag([-1 / h2] * 2, -1)
        assert np.allclose(ham.matrix, expected)

    def test_complex_symmetric(self, model):
        m = assemble_hamiltonian(model.potential, Grid(5.0, 201)).matrix
        assert np.array_equal(m, m.T)
        assert not np.array_equal(m, m.conj().T)

    def test_real_potential_is_hermitian(self):
        params = PotentialParams(3.0, 4j)
        ham = assemble_hamiltonian(lambda x: potential(params, x), Grid(8.0, 401))
        assert np.all(ham.matrix.imag == 0)
        values = eigen_spectrum(ham, vectors=False).eigenvalues
        assert np.max(np.abs(values.imag)) <= 1e-10

    def test_non_finite_potential(self):
        def bad(x):
            v = np.zeros_like(x, dtype=complex)
            v[len(v) // 2] = np.nan
            return v

        with pytest.raises(PotentialValueError, match="not finite at x="):
            assemble_hamiltonian(bad, Grid(1.0, 11))

    def test_box_ground_state(self):
        grid = Grid(5.0, 401)
        values = eigen_spectrum(assemble_hamiltonian(_zero, grid), vectors=False).eigenvalues
        expected = (np.pi / (2 * grid.half_width)) ** 2
        assert values[0].real == pytest.approx(expected, rel=1e-3)


class TestEigenSpectrum:
    def test_rotation(self):
        ham = HamiltonianMatrix(np.array([[0, 1], [-1, 0]], dtype=complex), Grid(1.0, 5))
        values = eigen_spectrum(ham).eigenvalues
        assert np.allclose(sorted(values, key=lambda v: v.imag), [-1j, 1j])

    def test_diagonal(self):
        diag = np.array([3.0, -1.0 + 2j, 0.5])
        ham = HamiltonianMatrix(np.diag(diag), Grid(1.0, 5))
        assert np.allclose(eigen_spectrum(ham, vectors=False).eigenvalues, np.sort_complex(diag))

    def test_non_finite_matrix(self):
        ham = HamiltonianMatrix(np.array([[np.inf, 1], [0, 1]], dtype=complex), Grid(1.0, 5))
        with pytest.raises(EigensolverError):
            eigen_spectrum(ham)

    def test_filter_needs_vectors(self):
        with pytest.raises(EigensolverError):
            bound_state_filter(Spectrum(np.array([1.0 + 0j])))

    @pytest.mark.slow
    def test_reference_levels(self, reference_levels):
        # four main levels plus -2.25 and -0.25 of the other quasi-parity
        assert len(reference_levels) == 6
        report = match_spectra(REFERENCE_LEVELS, reference_levels, 5e-3)
        assert report.complete
        assert report.spurious == 2
        second = match_spectra(SECOND_SERIES, reference_levels, 5e-3)
        assert second.complete
        assert report.max_gap <= 5e-3
        assert max(abs(e.imag) for e in reference_levels) <= 1e-6

    def test_unbroken_complex_eigenvalues_pair_up(self, model):
        values = eigen_spectrum(assemble_hamiltonian(model.potential, Grid(8.0, 401)), vectors=False).eigenvalues
        for v in values[np.abs(values.imag) > 1e-8]:
            assert np.min(np.abs(values - np.conj(v))) <= 1e-8 * max(1.0, abs(v))

    def test_free_particle_has_no_bound_states(self):
        assert numeric_bound_levels(_zero, Grid(12.0, 601)) == []

    @pytest.mark.slow
    def test_broken_regime_levels(self, broken_model, broken_grid):
        levels = numeric_bound_levels(broken_model.potential, broken_grid)
        assert len(levels) == 4
        analytic = [e.energy for e in broken_model.spectrum()]
        report = match_spectra(analytic, levels, 1e-2)
        assert report.complete

    def test_convergence_order(self, model):
        errors = []
        for grid in (Grid(8.0, 401), Grid(8.0, 801)):
            values = eigen_spectrum(assemble_hamiltonian(model.potential, grid), vectors=False).eigenvalues
            errors.append(np.min(np.abs(values + 16)))
        assert 3.5 <= errors[0] / errors[1] <= 4.5

    @pytest.mark.slow
    def test_richardson_sharpens_ground_level(self, model):
        grid = Grid(8.0, 401)
        fine = numeric_bound_levels(model.potential, grid.refined())
        extrapolated = richardson_levels(model.potential, grid)
        assert nearest_gap(-16, extrapolated) < nearest_gap(-16, fine) / 10


class TestResiduals:
    def test_exact_and_detuned(self, model):
        psi = model.eigenfunction(2)
        x = sample_axis(-8.0, 8.0, 200)
        assert ode_residual(model.potential, psi.energy, psi, x) <= 1e-9
        assert ode_residual(model.potential, psi.energy + 0.1, psi, x) >= 0.01

    def test_pt_defects(self, model, broken_model):
        grid = Grid(5.0, 2001)
        assert pt_defect(model.potential, grid) <= 1e-14
        assert pt_defect(build_partner(model, 1).u, grid) <= 1e-10
        assert pt_defect(build_partner(broken_model, 0, Branch.MINUS).u, grid) > 0.1


class TestMatching:
    def test_identical_lists(self):
        report = match_spectra(REFERENCE_LEVELS, REFERENCE_LEVELS, 1e-3)
        assert report.complete
        assert report.max_gap == 0
        assert report.spurious == 0

    def test_each_numeric_value_used_once(self):
        report = match_spectra([0.0, 0.01], [0.005], 0.1)
        assert len(report.matches) == 1
        assert len(report.unmatched) == 1
        numeric_used = [m.numeric for m in report.matches]
        assert len(numeric_used) == len(set(numeric_used))

    def test_closest_pair_wins(self):
        report = match_spectra([1.0, 1.2], [1.15, 0.9], 0.5)
        pairs = {m.analytic: m.numeric for m in report.matches}
        assert pairs == {1.2: 1.15, 1.0: 0.9}

    def test_spurious_count(self):
        report = match_spectra([-1.0], [-1.0, 3.0, 4.0], 1e-6)
        assert report.spurious == 2

    def test_complex_plane_distance(self):
        report = match_spectra([1 + 1j], [1 - 1j, 1 + 1.01j], 0.1)
        assert report.matches[0].numeric == 1 + 1.01j

    @pytest.mark.slow
    def test_partner_loses_seed_level(self, model, fd_grid):
        partner = build_partner(model, 1).u
        # plain N=1201 is off by ~2e-2 at E=-1; the extrapolated pair is not
        assert nearest_gap(-1, numeric_bound_levels(partner, fd_grid)) > 5e-3
        levels = richardson_levels(partner, fd_grid)
        report = match_spectra([-16, -4, -1], levels, 5e-3)
        assert report.complete
        assert match_spectra(SECOND_SERIES, levels, 5e-3).complete
        assert nearest_gap(-9, levels) > 0.1

    def test_richardson_formula(self):
        assert richardson_extrapolate([-15.96], [-15.99]) == [pytest.approx(-16.0)]

    def test_nearest_gap_of_empty(self):
        assert nearest_gap(1.0, []) == float("inf")


class TestDifferenceStencils:
    def test_exact_on_low_degree_polynomials(self):
        grid = Grid(2.0, 41)
        x = grid.nodes
        f = x**4 - 2 * x**3 + x
        d1 = first_derivative(f, grid.step)
        d2 = second_derivative(f, grid.step)
        assert np.allclose(d1[2:-2], (4 * x**3 - 6 * x**2 + 1)[2:-2], atol=1e-10)
        assert np.allclose(d2[2:-2], (12 * x**2 - 12 * x)[2:-2], atol=1e-9)
        assert np.all(d1[:2] == 0) and np.all(d2[-2:] == 0)

    def test_fourth_order(self):
        errors = []
        for n_points in (101, 201):
            grid = Grid(3.0, n_points)
            err = first_derivative(np.sin(grid.nodes), grid.step) - np.cos(grid.nodes)
            errors.append(np.max(np.abs(err[2:-2])))
        assert errors[0] / errors[1] == pytest.approx(16, rel=0.1)


class TestBumps:
    def test_deterministic(self):
        grid = Grid.from_step(6.0, 0.01)
        first = gaussian_bumps(grid, 3, seed=5)
        second = gaussian_bumps(grid, 3, seed=5)
        assert all(np.array_equal(a.values, b.values) for a, b in zip(first, second))
        other = gaussian_bumps(grid, 3, seed=6)
        assert not np.array_equal(first[0].values, other[0].values)

    def test_shape(self):
        grid = Grid.from_step(6.0, 0.01)
        bumps = gaussian_bumps(grid, 10, seed=0)
        assert len(bumps) == 10
        for bump in bumps:
            assert bump.values.shape == (grid.n_points,)
            assert np.max(np.abs(bump.values)) == pytest.approx(1.0, abs=1e-3)
