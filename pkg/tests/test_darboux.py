import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from src.darboux import (
    beta,
    beta_expanded,
    broken_closed_form_partner,
    broken_partner_report,
    build_partner,
    closed_form_ground_state,
    closed_form_partner,
    factorization_defect,
    first_partner_polynomial,
    intertwiners,
    make_seed,
    partner_potential,
    partner_spectrum,
    polynomial_form_eigenfunction,
    pseudo_adjoint_observation,
    reindexed_energy,
    second_partner_polynomial,
    seed_from_wavefunction,
    singlet_shorthand,
    supercharge_algebra_check,
    tail_ratio,
    transformed_eigenfunction,
)
from src.errors import LevelError, NodeError, RegimeError
from src.grid import Grid
from src.numerics import gaussian_bumps, ode_residual, pt_defect
from src.scarf2 import Branch, ScarfModel, WaveFunction
from src.special_fn import JacobiIndex, jacobi_p
from src.utils import sample_axis, sech, tanh

X5 = sample_axis(-5.0, 5.0, 200)
X8 = sample_axis(-8.0, 8.0, 200)
PT_GRID = Grid(5.0, 2001)


def _constant_ratio_spread(a, b):
    ratio = np.asarray(a) / np.asarray(b)
    ref = ratio[len(ratio) // 2]
    return float(np.max(np.abs(ratio - ref)) / abs(ref))


@pytest.fixture(scope="module")
def operator_suite():
    grid = Grid.from_step(6.0, 0.01)
    return gaussian_bumps(grid, 10, seed=7)


class TestSeed:
    def test_ground_seed_closed_form(self, model):
        seed = make_seed(model, 0)
        assert seed.w(0.0) == pytest.approx(-2j, abs=1e-13)
        expected = 4 * tanh(X5) - 2j * sech(X5)
        assert np.max(np.abs(seed.w(X5) - expected)) <= 1e-12

    @pytest.mark.parametrize("m", range(4))
    def test_a_annihilates_seed(self, model, m):
        seed = make_seed(model, m)
        psi = seed.wavefunction
        image = intertwiners(seed).a_op.apply(X8, psi.value(X8), psi.deriv(X8))
        assert np.max(np.abs(image)) <= 1e-10 * np.max(np.abs(psi.deriv(X8)))

    def test_w_matches_finite_difference(self, model):
        seed = make_seed(model, 1)
        psi = seed.wavefunction.value
        x, h = sample_axis(-4.0, 4.0, 100), 1e-5
        fd = -(psi(x + h) - psi(x - h)) / (2 * h * psi(x))
        assert np.max(np.abs(fd - seed.w(x))) <= 1e-7 * np.max(np.abs(seed.w(x)))

    @pytest.mark.parametrize("m", range(3))
    def test_w_derivatives_match_finite_differences(self, model, m):
        seed = make_seed(model, m)
        x, h = sample_axis(-4.0, 4.0, 50), 1e-5
        for lower, upper in ((seed.w, seed.w_prime), (seed.w_prime, seed.w_second)):
            fd = (lower(x + h) - lower(x - h)) / (2 * h)
            assert np.max(np.abs(fd - upper(x))) <= 1e-6 * np.max(np.abs(upper(x)))

    @pytest.mark.parametrize("m", range(4))
    def test_seed_is_pt_antisymmetric(self, model, m):
        w = make_seed(model, m).w(PT_GRID.nodes)
        assert np.max(np.abs(np.conj(w[::-1]) + w)) <= 1e-12

    def test_out_of_range_seed(self, model):
        with pytest.raises(LevelError):
            make_seed(model, 4)

    def test_node_is_rejected(self):
        def value(x):
            x = np.asarray(x, dtype=float)
            return (x * np.exp(-x * x)).astype(complex)

        wf = WaveFunction(1, 0j, value, value, value)
        with pytest.raises(NodeError, match="near-node"):
            seed_from_wavefunction(wf, 1, Branch.SINGLE)


class TestBeta:
    @pytest.mark.parametrize("m, expected", [(0, 16), (1, 9), (2, 4), (4, 0)])
    def test_values(self, model, m, expected):
        assert beta(model.sp, m) == expected

    @pytest.mark.parametrize("m", range(6))
    def test_expanded_form_agrees(self, model, broken_model, m):
        assert beta_expanded(model.sp, m) == pytest.approx(beta(model.sp, m), abs=1e-12)
        for branch in (Branch.PLUS, Branch.MINUS):
            assert beta_expanded(broken_model.sp, m, branch) == pytest.approx(
                beta(broken_model.sp, m, branch), abs=1e-12
            )

    def test_beta_is_minus_seed_energy(self, broken_model):
        for n in range(broken_model.n_max):
            assert beta(broken_model.sp, n, Branch.MINUS) == pytest.approx(-broken_model.energy(n, Branch.MINUS))

    def test_negative_index(self, model):
        with pytest.raises(LevelError):
            beta(model.sp, -1)


class TestPartnerPotential:
    def test_satellite_partner(self, model):
        partner = build_partner(model, 0)
        assert partner.u(0.0) == pytest.approx(-16, abs=1e-12)
        expected = -16 * sech(X5) ** 2 - 14j * sech(X5) * tanh(X5)
        assert np.max(np.abs(partner.u(X5) - expected)) <= 1e-10
        assert np.max(np.abs(partner.u(X5) - closed_form_partner(model, 0, X5))) <= 1e-10

    @pytest.mark.parametrize("m", range(4))
    def test_pt_covariance(self, model, m):
        assert pt_defect(build_partner(model, m).u, PT_GRID) <= 1e-12

    def test_first_partner_against_finite_difference(self, model):
        seed = make_seed(model, 1)
        u = partner_potential(model, seed).u
        x, h = sample_axis(-4.0, 4.0, 100), 1e-5
        w_fd = (seed.w(x + h) - seed.w(x - h)) / (2 * h)
        reference = seed.w(x) ** 2 + w_fd - 9
        assert np.max(np.abs(u(x) - reference)) <= 1e-6 * np.max(np.abs(reference))

    def test_partner_finite_on_wide_range(self, model):
        x = sample_axis(-40.0, 40.0, 801)
        for m in range(4):
            assert np.all(np.isfinite(build_partner(model, m).u(x)))

    def test_partner_spectrum_marks_deleted_level(self, model):
        kept, deleted = partner_spectrum(model, 1)
        assert deleted.energy == -9
        assert [e.energy for e in kept] == [-16, -4, -1]

    @given(
        st.floats(min_value=1.0, max_value=40.0, allow_nan=False),
        st.floats(min_value=0.05, max_value=1.0, allow_nan=False),
    )
    def test_satellite_identity_holds_across_couplings(self, v1, ratio):
        v2 = ratio * (v1 + 0.25)
        assume(v2 > 0.05)
        model = ScarfModel.from_couplings(v1, v2)
        u = build_partner(model, 0).u(X5)
        expected = closed_form_partner(model, 0, X5)
        assert np.max(np.abs(u - expected)) <= 1e-9 * max(1.0, np.max(np.abs(expected)))


class TestClosedForms:
    def test_first_polynomial_is_jacobi(self, model):
        p, q = 3.0, 1.0
        assert first_partner_polynomial(p, q, 0.0) == -2
        p1 = jacobi_p(JacobiIndex(1, -2 * p - 0.5, -2 * q - 0.5), 1j * np.sinh(X5))
        assert np.max(np.abs(first_partner_polynomial(p, q, X5) - p1)) <= 1e-12 * np.max(np.abs(p1))

    def test_second_polynomial_is_proportional_to_jacobi(self, model):
        f2, _ = second_partner_polynomial(3.0, 1.0, X5)
        p2 = jacobi_p(JacobiIndex(2, -6.5, -2.5), 1j * np.sinh(X5))
        assert _constant_ratio_spread(f2, p2) <= 1e-12

    @pytest.mark.parametrize("m", [1, 2])
    def test_tabulated_partners_are_finite(self, model, m):
        values = closed_form_partner(model, m, X5)
        assert values.shape == X5.shape
        assert np.all(np.isfinite(values))

    def test_closed_form_limits(self, model, broken_model):
        with pytest.raises(LevelError):
            closed_form_partner(model, 3, X5)
        with pytest.raises(RegimeError):
            closed_form_partner(broken_model, 0, X5)
        with pytest.raises(RegimeError):
            broken_closed_form_partner(model, X5)

    def test_satellite_ground_state(self, model):
        phi = transformed_eigenfunction(model, make_seed(model, 0), 1)
        assert _constant_ratio_spread(closed_form_ground_state(model, 0, X5), phi.value(X5)) <= 1e-10

    def test_first_partner_ground_state_uses_p_minus_q(self, model):
        phi = transformed_eigenfunction(model, make_seed(model, 1), 0)
        envelope = closed_form_ground_state(model, 0, X5)
        corrected = envelope / first_partner_polynomial(3.0, 1.0, X5)
        assert _constant_ratio_spread(corrected, phi.value(X5)) <= 1e-10
        # the tabulated denominator -(p+q) gives a different function
        assert _constant_ratio_spread(closed_form_ground_state(model, 1, X5), phi.value(X5)) > 1e-3

    def test_closed_form_ground_state_limits(self, model):
        with pytest.raises(LevelError):
            closed_form_ground_state(model, 2, X5)


class TestTransformedEigenfunction:
    @pytest.mark.parametrize("m, n", [(m, n) for m in range(3) for n in range(4) if n != m])
    def test_isospectral_residual(self, model, m, n):
        seed = make_seed(model, m)
        u = partner_potential(model, seed).u
        phi = transformed_eigenfunction(model, seed, n)
        assert phi.energy == model.energy(n)
        assert ode_residual(u, phi.energy, phi, X8) <= 1e-8

    def test_first_partner_ground_energy(self, model):
        phi = transformed_eigenfunction(model, make_seed(model, 1), 0)
        assert phi.energy == -16 == -(model.p_plus_q() ** 2)

    def test_is_the_action_of_a(self, model):
        seed = make_seed(model, 0)
        psi = model.eigenfunction(1)
        direct = intertwiners(seed).a_op.apply(X5, psi.value(X5), psi.deriv(X5))
        phi = transformed_eigenfunction(model, seed, 1)
        assert _constant_ratio_spread(phi.value(X5), direct) <= 1e-10

    def test_tail_decay(self, model):
        phi = transformed_eigenfunction(model, make_seed(model, 2), 3)
        assert tail_ratio(phi, edge=25.0) <= 1e-6

    @pytest.mark.parametrize("m, n", [(0, 2), (1, 3), (2, 0)])
    def test_derivatives_match_finite_differences(self, model, m, n):
        phi = transformed_eigenfunction(model, make_seed(model, m), n)
        x, h = sample_axis(-3.0, 3.0, 40), 1e-5
        for lower, upper in ((phi.value, phi.deriv), (phi.deriv, phi.deriv2)):
            fd = (lower(x + h) - lower(x - h)) / (2 * h)
            assert np.max(np.abs(fd - upper(x))) <= 1e-6 * np.max(np.abs(upper(x)))

    def test_seed_level_is_deleted(self, model):
        seed = make_seed(model, 1)
        with pytest.raises(LevelError, match="deleted"):
            transformed_eigenfunction(model, seed, 1)

    @pytest.mark.parametrize("m, n", [(1, 0), (1, 2), (1, 3), (2, 3), (0, 1)])
    def test_polynomial_form_is_proportional(self, model, m, n):
        phi = transformed_eigenfunction(model, make_seed(model, m), n)
        poly = polynomial_form_eigenfunction(model, m, n)
        assert _constant_ratio_spread(poly(X5), phi.value(X5)) <= 1e-10


class TestReindexing:
    @pytest.mark.parametrize("k", range(3))
    def test_satellite_levels(self, model, k):
        assert reindexed_energy(model, 0, k) == -((k + 1 - model.p_plus_q()) ** 2)

    def test_first_partner_levels(self, model):
        assert reindexed_energy(model, 1, 0) == -(model.p_plus_q() ** 2)
        for k in (1, 2):
            assert reindexed_energy(model, 1, k) == -((k + 1 - model.p_plus_q()) ** 2)


class TestIntertwiners:
    def test_constant_function(self, model):
        pair = intertwiners(make_seed(model, 0))
        ones, zeros = np.ones_like(X5), np.zeros_like(X5)
        w = make_seed(model, 0).w(X5)
        assert np.allclose(pair.a_op.apply(X5, ones, zeros), w)
        assert np.allclose(pair.b_op.apply(X5, ones, zeros), w)

    @pytest.mark.parametrize("m", range(3))
    def test_factorization(self, model, m):
        seed = make_seed(model, m)
        for n in range(model.n_max):
            assert factorization_defect(model, seed, n, X8) <= 1e-8

    @pytest.mark.parametrize("m", range(3))
    def test_supercharge_algebra(self, model, operator_suite, m):
        report = supercharge_algebra_check(make_seed(model, m), operator_suite)
        assert report.q_squared == 0
        assert report.q_sharp_squared == 0
        assert report.anticommutator_block <= 1e-8
        assert report.anticommutator_hamiltonian <= 1e-6
        assert report.commutator_q <= 1e-6
        assert report.commutator_q_sharp <= 1e-6
        assert report.test_functions == 10

    def test_broken_seed_algebra(self, broken_model, operator_suite):
        report = supercharge_algebra_check(make_seed(broken_model, 0), operator_suite)
        assert report.q_squared == 0
        assert report.anticommutator_block <= 1e-8
        assert report.commutator_q <= 1e-6

    def test_empty_suite(self, model):
        with pytest.raises(ValueError):
            supercharge_algebra_check(make_seed(model, 0), [])

    def test_parity_conjugated_adjoint_is_minus_b(self, model, operator_suite):
        assert pseudo_adjoint_observation(make_seed(model, 0), operator_suite) <= 1e-12


@pytest.fixture(scope="module")
def report(broken_model):
    return broken_partner_report(broken_model, 0, Branch.MINUS)


class TestBrokenPartner:
    def test_expected_spectrum_is_a_single_singlet(self, report, broken_model):
        assert [(e.n, e.branch) for e in report.expected_spectrum] == [(1, Branch.MINUS)]
        assert report.expected_spectrum[0].energy == broken_model.energy(1, Branch.MINUS)
        assert report.deleted.energy == broken_model.energy(0, Branch.MINUS)

    def test_closed_form_agrees(self, report):
        assert report.closed_form_deviation <= 1e-10

    def test_partner_is_not_pt_symmetric(self, report):
        assert report.pt_defect > 0.1
        assert pt_defect(report.partner.u, PT_GRID) > 0.1

    def test_opposite_branch_images_stay_normalizable(self, report):
        assert [lvl.entry.branch for lvl in report.opposite_levels] == [Branch.PLUS, Branch.PLUS]
        for level in report.opposite_levels:
            assert level.tail_ratio < 1e-3
            assert level.ode_residual <= 1e-8

    def test_plus_branch_closed_form(self, broken_model):
        partner = build_partner(broken_model, 0, Branch.PLUS)
        expected = broken_closed_form_partner(broken_model, X5, Branch.PLUS)
        assert np.max(np.abs(partner.u(X5) - expected)) <= 1e-10

    def test_singlet_shorthand(self, broken_model):
        s = broken_model.sp.s
        exact = broken_model.energy(1, Branch.MINUS)
        assert exact - singlet_shorthand(broken_model, 0, Branch.MINUS) == pytest.approx(s * s / 4, abs=1e-12)

    def test_requires_broken_regime(self, model):
        with pytest.raises(RegimeError):
            broken_partner_report(model, 0)

    def test_mirrored_coupling_reflects_partner(self, broken_model):
        mirror = ScarfModel.from_couplings(6.0, -8.0)
        partner = build_partner(mirror, 0, Branch.MINUS)
        reference = build_partner(broken_model, 0, Branch.MINUS)
        assert np.max(np.abs(partner.u(X5) - reference.u(-X5))) <= 1e-10
        expected = broken_closed_form_partner(mirror, X5, Branch.MINUS)
        assert np.max(np.abs(partner.u(X5) - expected)) <= 1e-10
