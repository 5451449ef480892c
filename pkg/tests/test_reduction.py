"""Chart, reduced Hamiltonians, reconstruction, and consolidation."""

from __future__ import annotations

import math

import numpy as np
import pytest

from uwvstab.model import NUMERIC_BODY, ChartDomainError, hamiltonian_full
from uwvstab.reduction import (ConsolidatedParams, MomentumLevel, NotInGapError,
                               Q_MAX, ReducedState, attitude_matrix,
                               consolidate_params, consolidated_hamiltonian,
                               derived_coeffs, reconstruct_full, reduced_field,
                               reduced_gradient, reduced_hamiltonian,
                               reduced_hamiltonian_vertical, so2_momentum)
from conftest import random_state, rotate_state


class TestAttitude:
    def test_identity_at_origin(self):
        assert attitude_matrix(0.0, 0.0) == pytest.approx(np.eye(3))

    def test_example_column(self):
        A = attitude_matrix(0.5, 0.0)
        assert A.T @ A == pytest.approx(np.eye(3), abs=1e-14)
        assert A.T @ [0.0, 0.0, 1.0] == pytest.approx(
            [0.5, 0.0, math.sqrt(0.75)], abs=1e-14
        )

    def test_rotation_near_chart_edge(self, rng):
        for _ in range(10):
            phi = rng.uniform(0.0, 2 * math.pi)
            A = attitude_matrix(0.9 * math.cos(phi), 0.9 * math.sin(phi))
            assert A.T @ A == pytest.approx(np.eye(3), abs=1e-12)
            assert np.linalg.det(A) == pytest.approx(1.0, abs=1e-12)

    def test_f_solves_chart_quadratic(self, rng):
        for _ in range(20):
            q1, q2 = rng.uniform(-0.7, 0.7, 2)
            x = q1 * q1 + q2 * q2
            if x >= 1.0:
                continue
            f = 1.0 / (1.0 + math.sqrt(1.0 - x))
            assert x * f * f - 2.0 * f + 1.0 == pytest.approx(0.0, abs=1e-14)

    def test_chart_guard(self):
        with pytest.raises(ChartDomainError):
            attitude_matrix(Q_MAX + 1e-4, 0.0)
        with pytest.raises(ChartDomainError):
            ReducedState(1.0, 0.0)


class TestReducedHamiltonian:
    def test_vertical_form_matches_general(self, body, rng):
        """The (Fp, Fq, Fl) form differs from the general one only by the
        constant it subtracts at the origin."""
        Pe, Se = 1.5, 6.0
        lvl = MomentumLevel((0.0, 0.0, Pe), Se)
        c0 = (reduced_hamiltonian(body, lvl, ReducedState(0.0, 0.0))
              - reduced_hamiltonian_vertical(body, Pe, Se, ReducedState(0.0, 0.0)))
        for _ in range(30):
            s = random_state(rng)
            lhs = reduced_hamiltonian(body, lvl, s)
            rhs = reduced_hamiltonian_vertical(body, Pe, Se, s) + c0
            assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_vertical_form_zero_at_origin(self, body):
        h0 = reduced_hamiltonian_vertical(body, 1.5, 6.0, ReducedState(0.0, 0.0))
        assert h0 == 0.0

    def test_matches_full_model_through_reconstruction(self, body, general_level, rng):
        """H_red and the full energy of the rebuilt state differ by a
        state-independent constant on the momentum level."""
        origin = ReducedState(0.0, 0.0)
        c0 = (reduced_hamiltonian(body, general_level, origin)
              - hamiltonian_full(body, reconstruct_full(body, general_level, origin)))
        for _ in range(30):
            s = random_state(rng)
            lhs = reduced_hamiltonian(body, general_level, s)
            rhs = hamiltonian_full(
                body, reconstruct_full(body, general_level, s)
            ) + c0
            assert lhs == pytest.approx(rhs, abs=1e-10)

    def test_so2_invariance_vertical(self, body, vertical_level, rng):
        for _ in range(15):
            s = random_state(rng)
            h0 = reduced_hamiltonian(body, vertical_level, s)
            for angle in (0.4, 1.3, 2.9):
                h1 = reduced_hamiltonian(body, vertical_level,
                                         rotate_state(s, angle))
                assert h1 == pytest.approx(h0, abs=1e-12)

    def test_so2_invariance_broken_off_axis(self, body, general_level):
        s = ReducedState(0.3, -0.2, 0.4, 0.1)
        h0 = reduced_hamiltonian(body, general_level, s)
        h1 = reduced_hamiltonian(body, general_level, rotate_state(s, 1.0))
        assert abs(h1 - h0) > 1e-6

    def test_chart_guard(self, body, vertical_level):
        with pytest.raises(ChartDomainError):
            reduced_hamiltonian(body, vertical_level, ReducedState(0.9995, 0.0))


class TestGradient:
    def test_matches_finite_differences(self, body, general_level, rng):
        h = 1e-6
        for _ in range(15):
            s = random_state(rng)
            grad = reduced_gradient(body, general_level, s)
            z = [s.q1, s.q2, s.p1, s.p2]
            for i in range(4):
                zp, zm = z.copy(), z.copy()
                zp[i] += h
                zm[i] -= h
                fd = (reduced_hamiltonian(body, general_level, ReducedState(*zp))
                      - reduced_hamiltonian(body, general_level,
                                            ReducedState(*zm))) / (2 * h)
                assert grad[i] == pytest.approx(fd, abs=5e-6)

    def test_zero_at_origin_vertical(self, body, vertical_level):
        grad = reduced_gradient(body, vertical_level, ReducedState(0.0, 0.0))
        assert max(map(abs, grad)) < 1e-14

    def test_so2_equivariance_vertical(self, body, vertical_level, rng):
        """grad H(Rz) = R grad H(z) for the diagonal rotation R."""
        for _ in range(10):
            s = random_state(rng)
            angle = rng.uniform(0.0, 2 * math.pi)
            c, sn = math.cos(angle), math.sin(angle)
            g = reduced_gradient(body, vertical_level, s)
            gr = reduced_gradient(body, vertical_level, rotate_state(s, angle))
            expected = (c * g[0] - sn * g[1], sn * g[0] + c * g[1],
                        c * g[2] - sn * g[3], sn * g[2] + c * g[3])
            assert gr == pytest.approx(expected, abs=1e-10)

    def test_field_is_canonical(self, body, general_level, rng):
        s = random_state(rng)
        gq1, gq2, gp1, gp2 = reduced_gradient(body, general_level, s)
        assert reduced_field(body, general_level, s) == pytest.approx(
            (gp1, gp2, -gq1, -gq2)
        )


class TestReconstruction:
    def test_origin_vertical(self, body, vertical_level):
        fs = reconstruct_full(body, vertical_level, ReducedState(0.0, 0.0))
        assert fs.P == pytest.approx((0.0, 0.0, 1.5))
        assert fs.Gamma == pytest.approx((0.0, 0.0, 1.0))
        assert fs.Pi[2] == pytest.approx(-vertical_level.nu_theta)

    def test_level_values_preserved(self, body, general_level, rng):
        nu = np.asarray(general_level.nu_a)
        for _ in range(15):
            s = random_state(rng)
            fs = reconstruct_full(body, general_level, s)
            assert sum(x * x for x in fs.P) == pytest.approx(
                float(nu @ nu), rel=1e-14
            )
            assert sum(a * b for a, b in zip(fs.P, fs.Gamma)) == pytest.approx(
                nu[2], rel=1e-12
            )
            assert sum(x * x for x in fs.Gamma) == pytest.approx(1.0, abs=1e-14)
            assert fs.Gamma[:2] == pytest.approx((s.q1, s.q2))

    def test_so2_momentum_identity_vertical(self, body, vertical_level, rng):
        """q1 p2 - q2 p1 equals Pi.Gamma + nu_theta on the rebuilt state."""
        for _ in range(15):
            s = random_state(rng)
            fs = reconstruct_full(body, vertical_level, s)
            pidotgamma = sum(a * b for a, b in zip(fs.Pi, fs.Gamma))
            assert so2_momentum(s) == pytest.approx(
                pidotgamma + vertical_level.nu_theta, abs=1e-12
            )

    def test_so2_momentum_value(self):
        assert so2_momentum(ReducedState(0.2, -0.3, 0.5, 0.1)) == pytest.approx(
            0.2 * 0.1 - (-0.3) * 0.5
        )


class TestConsolidation:
    def test_derived_coeffs_example(self, body):
        d = derived_coeffs(body, 1.5)
        assert d.Fp == pytest.approx(1.0 / 3.0)
        assert d.Fq == pytest.approx(-1.25)
        assert d.Fl == pytest.approx(1.5)

    def test_example_frequencies(self, body):
        d = derived_coeffs(body, 1.5)
        cp = consolidate_params(d, 6.0, body.mgl)
        assert cp.f1 == pytest.approx(1.76376261582597, abs=1e-12)
        assert cp.f2 == pytest.approx(0.236237384174027, abs=1e-12)
        assert cp.mu == pytest.approx(-1.0 / 6.0)

    def test_frequency_relations(self, body):
        Se = 1.0
        d = derived_coeffs(body, math.sqrt(1.04))
        cp = consolidate_params(d, Se, body.mgl)
        assert cp.f1 + cp.f2 == pytest.approx(d.Fp * Se, rel=1e-12)
        assert cp.f1 * cp.f2 == pytest.approx(-d.Fp * d.Fq, rel=1e-12)

    def test_rejects_outside_gap(self, body):
        with pytest.raises(NotInGapError):
            consolidate_params(derived_coeffs(body, 0.5), 6.0, body.mgl)

    def test_value_at_origin(self):
        cp = ConsolidatedParams(f1=2.0, f2=0.5, mu=-0.25)
        assert consolidated_hamiltonian(cp, 0.0, 0.0, 0.0, 0.0) == pytest.approx(
            cp.mu
        )

    def test_momentum_shift_matches_vertical_form(self, body, rng):
        """At Se = 1 the testbed Hamiltonian is the vertical reduced one
        under p = u - Fl q / Gamma3, up to its value at the origin."""
        Se, Pe = 1.0, math.sqrt(1.04)
        d = derived_coeffs(body, Pe)
        cp = consolidate_params(d, Se, body.mgl)
        for _ in range(30):
            q1, q2 = rng.uniform(-0.4, 0.4, 2)
            u1, u2 = rng.uniform(-0.5, 0.5, 2)
            g3 = math.sqrt(1.0 - q1 * q1 - q2 * q2)
            s = ReducedState(q1, q2, u1 - d.Fl * q1 / g3, u2 - d.Fl * q2 / g3)
            hv = reduced_hamiltonian_vertical(body, Pe, Se, s)
            hc = consolidated_hamiltonian(cp, q1, q2, u1, u2)
            assert hv + cp.mu == pytest.approx(hc, abs=1e-12)

    def test_linear_frequencies(self):
        """Eigenvalues of the linearization at the origin are +-i f1, +-i f2."""
        cp = ConsolidatedParams(f1=math.sqrt(5) / 2, f2=1.0, mu=0.5)
        h = 1e-4
        hess = np.empty((4, 4))
        for i in range(4):
            for j in range(4):
                def val(si, sj):
                    z = [0.0, 0.0, 0.0, 0.0]
                    z[i] += si * h
                    z[j] += sj * h
                    return consolidated_hamiltonian(cp, *z)
                hess[i, j] = (val(1, 1) - val(1, -1) - val(-1, 1) + val(-1, -1)
                              ) / (4 * h * h)
        J = np.array([[0.0, 0.0, 1.0, 0.0],
                      [0.0, 0.0, 0.0, 1.0],
                      [-1.0, 0.0, 0.0, 0.0],
                      [0.0, -1.0, 0.0, 0.0]])
        freqs = np.sort(np.abs(np.imag(np.linalg.eigvals(J @ hess))))
        assert freqs == pytest.approx(
            [cp.f2, cp.f2, cp.f1, cp.f1], abs=1e-5
        )

    def test_rejects_bad_frequencies(self):
        with pytest.raises(ValueError):
            ConsolidatedParams(f1=1.0, f2=2.0, mu=0.1)


class TestAxialInertiaIndependence:
    def test_reduced_values_bitwise_equal(self, rng):
        """The reduced dynamics never touches I3."""
        from dataclasses import replace

        body_a = NUMERIC_BODY
        body_b = replace(NUMERIC_BODY, I3=7.0)
        lvl = MomentumLevel((0.0025, 0.0, 1.5), 6.0)
        for _ in range(10):
            s = random_state(rng)
            assert (reduced_hamiltonian(body_a, lvl, s)
                    == reduced_hamiltonian(body_b, lvl, s))
            assert (reduced_field(body_a, lvl, s)
                    == reduced_field(body_b, lvl, s))
