"""Exact invariant-polynomial algebra and its Poisson bracket."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uwvstab.wpoly import (InvariantPoly, QSqrt2, SQRT2, W1, W2, W3, W4,
                           invariants_from_phase, poisson_bracket_w)

rational = st.fractions(
    min_value=Fraction(-50), max_value=Fraction(50), max_denominator=12
)
qsqrt2 = st.builds(QSqrt2, rational, rational)


def random_poly(rng, max_deg=3, n_terms=4):
    terms = {}
    for _ in range(n_terms):
        while True:
            k = tuple(int(x) for x in rng.integers(0, max_deg + 1, 4))
            if sum(k) <= max_deg:
                break
        terms[k] = QSqrt2(Fraction(int(rng.integers(-9, 10)), 2),
                          Fraction(int(rng.integers(-9, 10)), 3))
    return InvariantPoly(terms)


class TestQSqrt2:
    @given(qsqrt2, qsqrt2)
    def test_sub_inverts_add(self, x, y):
        assert (x + y) - y == x

    @given(qsqrt2, qsqrt2)
    @settings(max_examples=60)
    def test_div_inverts_mul(self, x, y):
        if not y:
            return
        assert (x * y) / y == x

    def test_float_lowering(self):
        assert float(QSqrt2(1, 1)) == pytest.approx(1.0 + math.sqrt(2.0))
        assert float(SQRT2) ** 2 == pytest.approx(2.0)

    def test_coercion_from_int(self):
        assert QSqrt2(3) + 2 == QSqrt2(5)
        assert 1 / SQRT2 == QSqrt2(0, Fraction(1, 2))


class TestCanonicalForm:
    def test_w3_square_rewrites(self):
        assert W3 * W3 == 2 * (W1 * W2) - W4 * W4

    def test_w3_exponent_stays_low(self, rng):
        for _ in range(10):
            f = random_poly(rng)
            g = random_poly(rng)
            prod = f * g * f
            assert all(k[2] in (0, 1) for k in prod.terms)

    def test_reduction_preserves_values_on_variety(self, rng):
        """Canonicalization only rewrites modulo the relation, so values
        at genuine phase-space images are untouched."""
        for _ in range(10):
            raw = {(0, 0, 2, 0): 1.0, (0, 0, 3, 1): -0.5, (1, 0, 2, 2): 2.0}
            f = InvariantPoly(raw)
            z = rng.uniform(-1.5, 1.5, 4)
            w = invariants_from_phase(*z)
            direct = sum(
                co * w[0] ** a * w[1] ** b * w[2] ** c * w[3] ** e
                for (a, b, c, e), co in raw.items()
            )
            assert f.evaluate(*w) == pytest.approx(direct, abs=1e-12)

    def test_degree_helpers(self):
        f = W1 * W2 + W3 + InvariantPoly.monomial((0, 0, 0, 3), QSqrt2(2))
        assert f.max_degree() == 3
        assert f.degree_part(1) == W3
        assert f.truncate(2) == W1 * W2 + W3
        assert not f.is_pure()
        assert (W1 * W1 + W2).is_pure()


class TestBracket:
    @pytest.mark.parametrize("f, g, expected", [
        (W1, W2, InvariantPoly.zero()),
        (W1, W3, W4),
        (W1, W4, -W3),
        (W2, W3, W4),
        (W2, W4, -W3),
        (W3, W4, -(W1 + W2)),
    ])
    def test_table(self, f, g, expected):
        assert poisson_bracket_w(f, g) == expected
        assert poisson_bracket_w(g, f) == -expected

    def test_relation_is_casimir(self):
        rel = 2 * (W1 * W2) - W3 * W3 - W4 * W4
        for w in (W1, W2, W3, W4):
            assert poisson_bracket_w(rel, w) == InvariantPoly.zero()

    def test_antisymmetry(self, rng):
        for _ in range(5):
            f, g = random_poly(rng), random_poly(rng)
            assert poisson_bracket_w(f, g) == -poisson_bracket_w(g, f)
            assert poisson_bracket_w(f, f) == InvariantPoly.zero()

    def test_leibniz(self, rng):
        for _ in range(5):
            f, g, h = (random_poly(rng, max_deg=2) for _ in range(3))
            lhs = poisson_bracket_w(f, g * h)
            rhs = poisson_bracket_w(f, g) * h + g * poisson_bracket_w(f, h)
            assert lhs == rhs

    def test_jacobi(self, rng):
        for _ in range(5):
            f, g, h = (random_poly(rng, max_deg=2, n_terms=3)
                       for _ in range(3))
            total = poisson_bracket_w(f, poisson_bracket_w(g, h))
            total = total + poisson_bracket_w(g, poisson_bracket_w(h, f))
            total = total + poisson_bracket_w(h, poisson_bracket_w(f, g))
            assert total == InvariantPoly.zero()

    def test_pointwise_against_phase_space(self, rng):
        """The closed bracket agrees with the canonical one computed by
        the chain rule through w(Q1, P1, Q2, P2)."""

        def phase_gradient(f, z):
            Q1, P1, Q2, P2 = z
            s2 = math.sqrt(2.0)
            dw = np.array([
                [Q1, P1, 0.0, 0.0],
                [0.0, 0.0, Q2, P2],
                [Q2 / s2, -P2 / s2, Q1 / s2, -P1 / s2],
                [P2 / s2, Q2 / s2, P1 / s2, Q1 / s2],
            ])
            w = invariants_from_phase(*z)
            fw = np.array([f.diff(i).evaluate(*w) for i in range(4)])
            return fw @ dw

        for _ in range(8):
            f, g = random_poly(rng), random_poly(rng)
            z = rng.uniform(-1.2, 1.2, 4)
            gf, gg = phase_gradient(f, z), phase_gradient(g, z)
            canonical = (gf[1] * gg[0] - gf[0] * gg[1]
                         + gf[3] * gg[2] - gf[2] * gg[3])
            w = invariants_from_phase(*z)
            closed = poisson_bracket_w(f, g).evaluate(*w)
            assert closed == pytest.approx(canonical, rel=1e-10, abs=1e-9)


class TestPhaseInvariants:
    def test_relation_holds(self, rng):
        for _ in range(20):
            z = rng.uniform(-2.0, 2.0, 4)
            w1, w2, w3, w4 = invariants_from_phase(*z)
            assert 2 * w1 * w2 - w3 ** 2 - w4 ** 2 == pytest.approx(
                0.0, abs=1e-12
            )
            assert w1 >= 0.0 and w2 >= 0.0

    def test_invariant_under_opposite_rotations(self, rng):
        for _ in range(10):
            Q1, P1, Q2, P2 = rng.uniform(-1.5, 1.5, 4)
            th = rng.uniform(0.0, 2 * math.pi)
            c, s = math.cos(th), math.sin(th)
            rotated = (c * Q1 - s * P1, s * Q1 + c * P1,
                       c * Q2 + s * P2, -s * Q2 + c * P2)
            assert invariants_from_phase(*rotated) == pytest.approx(
                invariants_from_phase(Q1, P1, Q2, P2), abs=1e-12
            )
