import math

import numpy as np
import pytest

from gdicke import (
    MeanFieldConfiguration,
    ModelParams,
    Phase,
    analytic_branches,
    boundary_chis,
    classify_phase,
    mean_field_energy,
    mean_field_gradient,
    order_parameters,
)

# closed-form ferromagnetic-superradiant energy at Omega=omega=1, chi=-1, lam=0.3:
# -(1/2)(1/1.36 + 1.36) = -1781/1700
E_SUPERRADIANT_EXAMPLE = -1781.0 / 1700.0


def fd_gradient(params, config, h=1e-6):
    """Central finite differences of the energy, the independent oracle."""
    base = (config.theta1, config.theta2, config.alpha)
    grad = []
    for i in range(3):
        plus = list(base)
        minus = list(base)
        plus[i] += h
        minus[i] -= h
        ep = mean_field_energy(params, MeanFieldConfiguration(*plus))
        em = mean_field_energy(params, MeanFieldConfiguration(*minus))
        grad.append((ep - em) / (2 * h))
    return np.array(grad)


class TestEnergy:
    def test_decoupled_ground_energy(self):
        p = ModelParams(Omega=1, omega=1, chi=0, lam=0)
        assert mean_field_energy(p, MeanFieldConfiguration(0, 0, 0)) == -1.0

    def test_only_spin_spin_term_survives_at_right_angles(self):
        # theta1 = theta2 = pi/2 kills the lam term (alpha=0) and leaves chi/2
        # plus an O(1e-16) cos(pi/2) remnant of the Omega term
        for chi in (-1.7, 0.4, 3.0):
            p = ModelParams(Omega=1, omega=1, chi=chi, lam=0)
            e = mean_field_energy(p, MeanFieldConfiguration(math.pi / 2, math.pi / 2, 0))
            assert e == pytest.approx(chi / 2, abs=1e-15)

    def test_superradiant_branch_closed_form(self):
        p = ModelParams(Omega=1, omega=1, chi=-1, lam=0.3)
        theta = math.acos(1 / 1.36)
        alpha = math.sqrt(2) * 0.3 * math.sin(theta)
        e = mean_field_energy(p, MeanFieldConfiguration(theta, theta, alpha))
        assert e == pytest.approx(E_SUPERRADIANT_EXAMPLE, abs=1e-14)

    def test_parity_symmetry_of_energy(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            p = ModelParams(Omega=rng.uniform(0.2, 3), omega=rng.uniform(0.2, 3),
                            chi=rng.uniform(-3, 3), lam=rng.uniform(0, 1.5))
            c = MeanFieldConfiguration(rng.uniform(-math.pi, math.pi),
                                       rng.uniform(-math.pi, math.pi),
                                       rng.uniform(-2, 2))
            assert mean_field_energy(p, c) == pytest.approx(
                mean_field_energy(p, c.negated()), rel=1e-14, abs=1e-14)


class TestGradient:
    def test_trivial_stationary_point(self):
        p = ModelParams(Omega=1, omega=1, chi=0, lam=0)
        assert np.all(mean_field_gradient(p, MeanFieldConfiguration(0, 0, 0)) == 0.0)

    def test_antiferromagnetic_branch_is_stationary(self):
        p = ModelParams(Omega=1, omega=1, chi=2, lam=0.3)
        theta = math.acos(0.5)
        g = mean_field_gradient(p, MeanFieldConfiguration(theta, -theta, 0.0))
        assert np.abs(g).max() < 1e-15

    def test_matches_finite_differences_on_random_configurations(self):
        rng = np.random.default_rng(42)
        for _ in range(1000):
            p = ModelParams(Omega=rng.uniform(0.2, 3), omega=rng.uniform(0.2, 3),
                            chi=rng.uniform(-3, 3), lam=rng.uniform(0, 1.5))
            c = MeanFieldConfiguration(rng.uniform(-math.pi, math.pi),
                                       rng.uniform(-math.pi, math.pi),
                                       rng.uniform(-2, 2))
            assert np.abs(mean_field_gradient(p, c) - fd_gradient(p, c)).max() < 1e-6


class TestAnalyticBranches:
    def test_deep_paramagnetic_has_only_trivial_branch(self):
        branches = analytic_branches(ModelParams(Omega=1, omega=1, chi=0, lam=0))
        assert branches == [MeanFieldConfiguration(0.0, 0.0, 0.0)]

    def test_strong_boson_coupling_branch_angle(self):
        branches = analytic_branches(ModelParams(Omega=1, omega=1, chi=0, lam=0.6))
        sym = [b for b in branches if b.theta1 == b.theta2 and b.theta1 > 0]
        assert len(sym) == 1
        assert math.cos(sym[0].theta1) == pytest.approx(1 / 1.44, abs=1e-15)
        assert sym[0].alpha == pytest.approx(math.sqrt(2) * 0.6 * math.sin(sym[0].theta1), abs=1e-15)

    def test_spin_only_limit_branch_angle(self):
        branches = analytic_branches(ModelParams(Omega=1, omega=1, chi=2, lam=0))
        anti = [b for b in branches if b.theta1 == -b.theta2 and b.theta1 > 0]
        assert len(anti) == 1
        assert math.cos(anti[0].theta1) == pytest.approx(0.5, abs=1e-15)
        assert anti[0].alpha == 0.0

    def test_every_branch_is_stationary(self):
        rng = np.random.default_rng(7)
        for _ in range(300):
            p = ModelParams(Omega=rng.uniform(0.2, 3), omega=rng.uniform(0.2, 3),
                            chi=rng.uniform(-4, 4), lam=rng.uniform(0, 1.5))
            for b in analytic_branches(p):
                assert np.linalg.norm(mean_field_gradient(p, b)) < 1e-10

    def test_parity_pairing_with_equal_energy(self):
        rng = np.random.default_rng(8)
        for _ in range(300):
            p = ModelParams(Omega=rng.uniform(0.2, 3), omega=rng.uniform(0.2, 3),
                            chi=rng.uniform(-4, 4), lam=rng.uniform(0, 1.5))
            branches = analytic_branches(p)
            for b in branches:
                mirror = b.negated()
                match = [o for o in branches
                         if abs(o.theta1 - mirror.theta1) < 1e-14
                         and abs(o.theta2 - mirror.theta2) < 1e-14
                         and abs(o.alpha - mirror.alpha) < 1e-14]
                assert match, f"missing parity partner of {b}"
                assert mean_field_energy(p, b) == pytest.approx(
                    mean_field_energy(p, match[0]), rel=1e-14, abs=1e-14)

    def test_positive_theta1_listed_first(self):
        p = ModelParams(Omega=1, omega=1, chi=-1, lam=0.3)
        nontrivial = [b for b in analytic_branches(p) if b.theta1 != 0]
        assert nontrivial[0].theta1 > 0


class TestClassifyPhase:
    def test_weak_couplings_are_paramagnetic_normal(self):
        assert classify_phase(ModelParams(chi=0, lam=0)).variant is Phase.PARAMAGNETIC_NORMAL

    def test_boundary_crossing_at_superradiant_onset(self):
        assert classify_phase(ModelParams(chi=-0.64 + 1e-6, lam=0.3)).variant is Phase.PARAMAGNETIC_NORMAL
        assert classify_phase(ModelParams(chi=-0.64 - 1e-6, lam=0.3)).variant is Phase.FERROMAGNETIC_SUPERRADIANT

    def test_strong_antiferromagnetic_coupling(self):
        assert classify_phase(ModelParams(chi=2, lam=0.3)).variant is Phase.ANTIFERROMAGNETIC_NORMAL

    def test_boundary_tie_goes_to_lower_chi_phase(self):
        # exactly on each active boundary segment
        assert classify_phase(ModelParams(chi=-0.64, lam=0.3)).variant is Phase.FERROMAGNETIC_SUPERRADIANT
        assert classify_phase(ModelParams(chi=1.0, lam=0.3)).variant is Phase.PARAMAGNETIC_NORMAL
        assert classify_phase(ModelParams(chi=1.62, lam=0.9)).variant is Phase.FERROMAGNETIC_SUPERRADIANT

    def test_boundary_distances_signs_match_variant(self):
        rng = np.random.default_rng(9)
        for _ in range(500):
            p = ModelParams(Omega=rng.uniform(0.2, 3), omega=rng.uniform(0.2, 3),
                            chi=rng.uniform(-4, 4), lam=rng.uniform(0, 1.5))
            label = classify_phase(p)
            d = label.boundary_distances
            b12, b13, b23 = boundary_chis(p)
            assert d.i_ii == p.chi - b12
            assert d.i_iii == p.chi - b13
            assert d.ii_iii == p.chi - b23
            tol = 1e-12
            if label.variant is Phase.PARAMAGNETIC_NORMAL:
                assert d.i_ii > -tol and d.i_iii < tol
            elif label.variant is Phase.FERROMAGNETIC_SUPERRADIANT:
                assert d.i_ii < tol and d.ii_iii < tol
            else:
                assert d.i_iii > -tol and d.ii_iii > -tol

    def test_invariant_under_joint_coupling_rescaling(self):
        # all three boundary inequalities are homogeneous of degree one in
        # (Omega, omega, chi, lam), i.e. lam^2 -> s^2 lam^2
        rng = np.random.default_rng(10)
        for _ in range(500):
            p = ModelParams(Omega=rng.uniform(0.2, 3), omega=rng.uniform(0.2, 3),
                            chi=rng.uniform(-4, 4), lam=rng.uniform(0, 1.5))
            s = rng.uniform(0.1, 10)
            scaled = ModelParams(Omega=s * p.Omega, omega=s * p.omega,
                                 chi=s * p.chi, lam=s * p.lam)
            assert classify_phase(scaled).variant is classify_phase(p).variant

    def test_superradiant_branch_degenerates_to_trivial_on_boundary(self):
        # exactly on the I-II boundary the branch angle collapses and its
        # energy equals the paramagnetic value -Omega
        for lam in (0.2, 0.3, 0.5):
            chi_b = boundary_chis(ModelParams(lam=lam))[0]
            p = ModelParams(chi=chi_b, lam=lam)
            mu = 4 * lam**2 - p.chi * p.omega
            theta = math.acos(min(1.0, p.Omega * p.omega / mu))
            assert abs(theta) < 1e-7
            config = MeanFieldConfiguration(theta, theta, math.sqrt(2) * lam * math.sin(theta))
            assert mean_field_energy(p, config) == pytest.approx(-p.Omega, abs=1e-13)


class TestOrderParameters:
    def test_symmetric_phase_is_dark(self):
        op = order_parameters(ModelParams(), MeanFieldConfiguration(0, 0, 0))
        assert (op.jx1, op.jx2, op.b, op.ns1, op.ns2, op.nb) == (0, 0, 0, 0, 0, 0)

    def test_antiferromagnetic_branch_values(self):
        p = ModelParams(chi=2, lam=0.3)
        theta = math.acos(0.5)
        op = order_parameters(p, MeanFieldConfiguration(theta, -theta, 0))
        assert op.jx1 == pytest.approx(-math.sqrt(3) / 2, abs=1e-15)
        assert op.jx2 == pytest.approx(math.sqrt(3) / 2, abs=1e-15)
        assert op.b == 0.0

    def test_superradiant_branch_values(self):
        p = ModelParams(chi=-1, lam=0.3)
        branch = [b for b in analytic_branches(p) if b.theta1 > 0][0]
        op = order_parameters(p, branch)
        assert op.jx1 == op.jx2 != 0
        assert op.nb > 0
        assert op.nb == pytest.approx(branch.alpha**2, abs=1e-15)


class TestDomainTypes:
    def test_params_validation(self):
        with pytest.raises(ValueError):
            ModelParams(Omega=0.0)
        with pytest.raises(ValueError):
            ModelParams(omega=-1.0)
        with pytest.raises(ValueError):
            ModelParams(lam=-0.1)
        ModelParams(chi=-5.0)  # chi unrestricted

    def test_angles_canonicalized(self):
        c = MeanFieldConfiguration(2 * math.pi + 0.3, -2 * math.pi - 0.4, 1.0)
        assert c.theta1 == pytest.approx(0.3, abs=1e-12)
        assert c.theta2 == pytest.approx(-0.4, abs=1e-12)
        # already-canonical values pass through untouched
        c2 = MeanFieldConfiguration(math.pi, -math.pi, 0.0)
        assert (c2.theta1, c2.theta2) == (math.pi, -math.pi)
