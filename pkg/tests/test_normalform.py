"""Closed-form normal-form tables against the exact Lie-series engine."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest

from uwvstab.normalform import (ExpansionOrderError, ResonanceError,
                                lie_normalize, nf_coefficients,
                                normal_form_terms, printed_coefficients,
                                taylor_invariant_expansion,
                                twist_determinants, twist_polynomials)
from uwvstab.reduction import ConsolidatedParams, consolidated_hamiltonian
from uwvstab.wpoly import InvariantPoly, QSqrt2, W1, W2, W3

TABLE_CP = ConsolidatedParams(f1=math.sqrt(5.0) / 2.0, f2=1.0, mu=0.5)


def w_from_chart(cp, q1, q2, u1, u2):
    """Invert the invariant dictionary on a chart point."""
    s, d = cp.f1 + cp.f2, cp.f1 - cp.f2
    Xq = (q1 * q1 + q2 * q2) / (8 * s * s)
    Xu = (u1 * u1 + u2 * u2) / (2 * d * d)
    Sw = (q2 * u1 - q1 * u2) / (4 * d * s)
    Dt = (q1 * u1 + q2 * u2) / (-4 * math.sqrt(2.0) * d * s)
    wsum = 0.5 * (Xq + Xu)
    return (0.5 * (wsum + Sw), 0.5 * (wsum - Sw), Dt,
            (Xq - Xu) / (2 * math.sqrt(2.0)))


def _coeff_equals(value, expected) -> bool:
    v = QSqrt2(0) + value
    return v == QSqrt2(0) + expected


class TestPrintedCoefficients:
    def test_example_entry(self):
        assert printed_coefficients(2, 1, 0)["A20"] == 3

    def test_exact_over_fractions(self):
        A = printed_coefficients(Fraction(3, 2), Fraction(1, 2), Fraction(1, 3))
        assert all(isinstance(v, Fraction) for v in A.values())

    def test_frequency_ratio(self):
        c = nf_coefficients(TABLE_CP)
        assert c.omega1 / c.omega2 == pytest.approx(
            TABLE_CP.f1 / TABLE_CP.f2, rel=1e-14
        )

    def test_unit_multiplier_at_table_point(self):
        """4 (f1 - f2)(f1 + f2) = 1 at the tabulated parameters, so the
        normal-form frequencies coincide with (f1, f2)."""
        c = nf_coefficients(TABLE_CP)
        assert c.omega1 == pytest.approx(TABLE_CP.f1, rel=1e-14)
        assert c.omega2 == pytest.approx(TABLE_CP.f2, rel=1e-14)

    def test_order_validation(self):
        with pytest.raises(ValueError):
            normal_form_terms(2.0, 1.0, 0.5, order=3)

    def test_quadratic_order_only_has_linear_terms(self):
        terms = normal_form_terms(2.0, 1.0, 0.5, order=2)
        assert set(terms) == {(1, 0), (0, 1)}


class TestTwist:
    def test_first_determinant_nonzero_at_table_point(self):
        rep = twist_determinants(TABLE_CP)
        assert rep.first_nonzero == 2
        assert rep.D4 != 0.0

    def test_example_values(self):
        """The determinants for the worked vehicle at Pe = 1.5, Se = 6."""
        from uwvstab.model import NUMERIC_BODY
        from uwvstab.reduction import consolidate_params, derived_coeffs

        cp = consolidate_params(derived_coeffs(NUMERIC_BODY, 1.5), 6.0,
                                NUMERIC_BODY.mgl)
        rep = twist_determinants(cp)
        assert rep.D4 == pytest.approx(44600.8888888889, rel=1e-10)
        assert rep.D6 == pytest.approx(-27822579.0161441, rel=1e-10)
        assert rep.D8 == pytest.approx(31024774763.4568, rel=1e-10)

    def test_d4_root_detected(self):
        """D4 is linear in mu; at its root the report falls through to D6."""
        f1, f2 = Fraction(3, 2), Fraction(1, 2)
        s = f1 + f2
        mustar = ((f1 ** 2 + 10 * f1 * f2 + f2 ** 2) * f1 * f2
                  / (s * (f1 ** 2 + 4 * f1 * f2 + f2 ** 2)))
        assert twist_polynomials(f1, f2, mustar)[0][0] == 0
        rep = twist_determinants(
            ConsolidatedParams(float(f1), float(f2), float(mustar))
        )
        assert rep.first_nonzero == 3
        scale4 = twist_polynomials(float(f1), float(f2), float(mustar))[0][1]
        assert abs(rep.D4) <= 1e-9 * scale4

    def test_homogeneity_degrees(self):
        """(f1, f2, mu) -> 2(f1, f2, mu) scales D4, D6, D8 by 2^11, 2^16,
        2^21."""
        args = (Fraction(3, 2), Fraction(1, 2), Fraction(1, 3))
        base = twist_polynomials(*args)
        doubled = twist_polynomials(*(2 * a for a in args))
        for (lo, _), (hi, _), deg in zip(base, doubled, (11, 16, 21)):
            assert hi == 2 ** deg * lo


class TestEngine:
    def test_matches_closed_form_exactly(self):
        """Expansion plus normalization reproduces the coefficient tables
        in exact rational arithmetic."""
        cp = ConsolidatedParams(Fraction(3, 2), Fraction(1, 2), Fraction(1, 3))
        Hnf, gens = lie_normalize(taylor_invariant_expansion(cp, 4), 4)
        expected = normal_form_terms(cp.f1, cp.f2, cp.mu, order=8)
        for (a, b, c, e), v in Hnf.terms.items():
            assert c == 0 and e == 0
            assert _coeff_equals(v, expected[(a, b)])
        for (i, j), v in expected.items():
            if v:
                assert (i, j, 0, 0) in Hnf.terms
        assert len(gens) == 3
        assert any(bool(g) for g in gens)

    def test_matches_closed_form_at_float_point(self):
        Hnf, _ = lie_normalize(taylor_invariant_expansion(TABLE_CP, 3), 3)
        expected = normal_form_terms(TABLE_CP.f1, TABLE_CP.f2, TABLE_CP.mu,
                                     order=6)
        for (a, b, c, e), v in Hnf.terms.items():
            assert float(QSqrt2(0) + v) == pytest.approx(
                expected[(a, b)], rel=1e-9
            )

    def test_pure_input_is_a_fixed_point(self):
        H = W1.scale(2) - W2 + (W1 * W2).scale(3)
        Hnf, gens = lie_normalize(H, 3)
        assert Hnf == H
        assert all(not g for g in gens)

    def test_resonant_frequencies_rejected(self):
        with pytest.raises(ResonanceError):
            lie_normalize(W1 - W2 + W3 * W3, 2)

    def test_impure_quadratic_rejected(self):
        with pytest.raises(ValueError):
            lie_normalize(W3 + W1 * W1, 2)


class TestTaylorExpansion:
    def test_linear_part_is_the_frequency_pair(self):
        T = taylor_invariant_expansion(TABLE_CP, 2)
        lin = T.degree_part(1)
        c = nf_coefficients(TABLE_CP)
        assert set(lin.terms) == {(1, 0, 0, 0), (0, 1, 0, 0)}
        assert float(QSqrt2(0) + lin.terms[(1, 0, 0, 0)]) == pytest.approx(
            c.omega1, rel=1e-12
        )
        assert float(QSqrt2(0) + lin.terms[(0, 1, 0, 0)]) == pytest.approx(
            -c.omega2, rel=1e-12
        )

    def test_residual_has_the_omitted_order(self):
        """Truncating at invariant degree 3 leaves a phase-space order-8
        remainder: scaling the point by 1/2 divides it by about 2^8."""
        T = taylor_invariant_expansion(TABLE_CP, 3)
        z0 = (0.31, -0.22, 0.17, 0.26)
        res = []
        for t in (0.5, 0.25):
            z = tuple(t * x for x in z0)
            lhs = consolidated_hamiltonian(TABLE_CP, *z) - TABLE_CP.mu
            res.append(abs(lhs - T.evaluate(*w_from_chart(TABLE_CP, *z))))
        assert res[0] < 1e-6
        assert 180.0 < res[0] / res[1] < 360.0

    def test_order_guard(self):
        with pytest.raises(ExpansionOrderError):
            taylor_invariant_expansion(TABLE_CP, 6)
        with pytest.raises(ExpansionOrderError):
            taylor_invariant_expansion(TABLE_CP, 0)
