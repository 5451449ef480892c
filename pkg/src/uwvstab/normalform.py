"""Birkhoff normal form of the consolidated oscillator in the SO(2)
invariants.

Two independent routes to the same object live here.  The closed-form
route (`nf_coefficients`, `normal_form_terms`, `twist_determinants`)
evaluates explicit polynomial tables in (f1, f2, mu).  The engine route
(`taylor_invariant_expansion` followed by `lie_normalize`) expands the
consolidated Hamiltonian in the invariant algebra and removes the
non-(w1, w2) terms degree by degree through the homological equation.
Both run in exact arithmetic when handed exact inputs, so the tables can
be cross-checked against the engine to equality, not to a tolerance.

Degrees here are invariant degrees: degree k in w corresponds to phase
space order 2k.  The quadratic part is omega1 w1 - omega2 w2 with
omega_i = 4 (f1 - f2)(f1 + f2) f_i, which is nonresonant whenever
f1 != f2, and the normal form through invariant degree 4 (phase-space
order 8) is a polynomial in (w1, w2) alone.

Period predictions and the measured-period oracle built on these tables
are in the periods module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .reduction import ConsolidatedParams
from .wpoly import (SQRT2, W1, W2, W3, W4, InvariantPoly, QSqrt2,
                    poisson_bracket_w)

MAX_EXPANSION_DEGREE = 5


class ExpansionOrderError(ValueError):
    """Requested Taylor order exceeds what the expander supports."""


class ResonanceError(ValueError):
    """The quadratic frequencies coincide; the homological equation is
    singular and the normal form is not unique."""


def printed_coefficients(f1, f2, mu) -> dict:
    """Closed-form normal-form coefficients A20..A42 at (f1, f2, mu).

    Generic over the scalar type: Fraction inputs give exact Fractions,
    floats give floats.  The cross coefficients of the mixed monomials
    (A21, A31, A32, A41, A42) and the edge coefficients (A20, A30, A40)
    assemble into the normal form via `normal_form_terms`.
    """
    s = f1 + f2
    A20 = -s * mu + s * f2
    A21 = -4 * s * mu + 8 * f1 * f2
    A30 = (2 * s**2 * mu**2 - 2 * s * (3 * f1 + f2) * mu * f2
           + 4 * s * f1 * f2**2)
    A31 = (15 * s**2 * mu**2
           - s * (5 * f1**2 + 44 * f1 * f2 + 11 * f2**2) * mu
           + (5 * f1**2 + 38 * f1 * f2 + 17 * f2**2) * f1 * f2)
    A32 = (15 * s**2 * mu**2
           - s * (11 * f1**2 + 44 * f1 * f2 + 5 * f2**2) * mu
           + (17 * f1**2 + 38 * f1 * f2 + 5 * f2**2) * f1 * f2)
    A40 = (-16 * s**3 * mu**3
           + 2 * (f1**2 + 36 * f1 * f2 + 11 * f2**2) * s**2 * mu**2
           - 2 * s * (2 * f1**3 + 55 * f1**2 * f2 + 36 * f1 * f2**2
                      + 3 * f2**3) * mu * f2
           + 2 * s * (f1**2 + 26 * f1 * f2 + 5 * f2**2) * f1 * f2**2)
    A41 = (-182 * s**3 * mu**3
           + 26 * (3 * f1**2 + 31 * f1 * f2 + 8 * f2**2) * s**2 * mu**2
           - 2 * (13 * f1 + f2) * s * (8 * f1**2 + 49 * f1 * f2
                                       + 21 * f2**2) * mu * f2
           + 2 * (65 * f1**3 + 367 * f1**2 * f2 + 267 * f1 * f2**2
                  + 29 * f2**3) * f1 * f2**2)
    A42 = (-354 * s**3 * mu**3
           + 3 * (95 * f1**2 + 518 * f1 * f2 + 95 * f2**2) * s**2 * mu**2
           - 3 * s * (9 * f1**4 + 274 * f1**3 * f2 + 850 * f1**2 * f2**2
                      + 274 * f1 * f2**3 + 9 * f2**4) * mu
           + 3 * (9 * f1**4 + 204 * f1**3 * f2 + 518 * f1**2 * f2**2
                  + 204 * f1 * f2**3 + 9 * f2**4) * f1 * f2)
    return dict(A20=A20, A21=A21, A30=A30, A31=A31, A32=A32,
                A40=A40, A41=A41, A42=A42)


def normal_form_terms(f1, f2, mu, order: int = 8) -> dict:
    """Coefficient map {(i, j): c} of Hnf = sum c_ij w1^i w2^j through
    the given phase-space order (2, 4, 6, or 8).

    Generic over the scalar type.  The degree-k coefficients carry the
    prefactors 8 s^3, -32 s^5/d^2, and 64 s^7/d^4 for k = 2, 3, 4, with
    s = f1 + f2 and d = f1 - f2; within each degree the coefficient of
    w1^i w2^j for i > j is the (f1 <-> f2)-swap of the coefficient of
    w1^j w2^i.
    """
    if order not in (2, 4, 6, 8):
        raise ValueError(f"order must be one of 2, 4, 6, 8, got {order}")
    s = f1 + f2
    d = f1 - f2
    kappa = 4 * d * s
    terms = {(1, 0): kappa * f1, (0, 1): -kappa * f2}
    if order >= 4:
        A = printed_coefficients(f1, f2, mu)
        Asw = printed_coefficients(f2, f1, mu)
        pre4 = 8 * s**3
        terms.update({
            (2, 0): pre4 * Asw["A20"],
            (1, 1): pre4 * A["A21"],
            (0, 2): pre4 * A["A20"],
        })
    if order >= 6:
        pre6 = -32 * s**5 / d**2
        terms.update({
            (3, 0): pre6 * Asw["A30"],
            (2, 1): pre6 * A["A32"],
            (1, 2): pre6 * A["A31"],
            (0, 3): pre6 * A["A30"],
        })
    if order >= 8:
        pre8 = 64 * s**7 / d**4
        terms.update({
            (4, 0): pre8 * Asw["A40"],
            (3, 1): pre8 * Asw["A41"],
            (2, 2): pre8 * A["A42"],
            (1, 3): pre8 * A["A41"],
            (0, 4): pre8 * A["A40"],
        })
    return terms


@dataclass(frozen=True)
class NormalFormCoeffs:
    """Normal-form data at one parameter point: the frequencies of the
    quadratic part and the closed-form coefficients with their per-degree
    prefactors."""

    omega1: float
    omega2: float
    A20: float
    A21: float
    A30: float
    A31: float
    A32: float
    A40: float
    A41: float
    A42: float
    pre4: float
    pre6: float
    pre8: float


def nf_coefficients(cp: ConsolidatedParams) -> NormalFormCoeffs:
    """Evaluate the closed-form coefficient tables at cp."""
    f1, f2, mu = cp.f1, cp.f2, cp.mu
    s = f1 + f2
    d = f1 - f2
    kappa = 4 * d * s
    A = printed_coefficients(f1, f2, mu)
    return NormalFormCoeffs(
        omega1=kappa * f1, omega2=kappa * f2,
        pre4=8 * s**3, pre6=-32 * s**5 / d**2, pre8=64 * s**7 / d**4,
        **A,
    )


def twist_polynomials(f1, f2, mu):
    """((D4, scale4), (D6, scale6), (D8, scale8)): the twist determinants
    together with incoherent magnitude estimates (sums of the absolute
    values of the contributing terms), generic over the scalar type."""
    s = f1 + f2
    d = f1 - f2
    t4 = [
        -128 * d**2 * s**6 * (f1**2 + 4 * f1 * f2 + f2**2) * mu,
        128 * d**2 * s**5 * (f1**2 + 10 * f1 * f2 + f2**2) * f1 * f2,
    ]
    t6 = [
        -2048 * s**11 * d * (2 * f1**2 + 13 * f1 * f2 + 2 * f2**2) * mu**2,
        2048 * s**10 * d * (11 * f1**2 + 46 * f1 * f2 + 11 * f2**2)
        * mu * f1 * f2,
        -2048 * s**9 * d * (9 * f1**2 + 50 * f1 * f2 + 9 * f2**2)
        * f1**2 * f2**2,
    ]
    t8 = [
        -32768 * s**14 * (8 * f1**4 + 91 * f1**3 * f2 + 177 * f1**2 * f2**2
                          + 91 * f1 * f2**3 + 8 * f2**4) * mu**3,
        16384 * s**13 * (2 * f1**6 + 150 * f1**5 * f2 + 1113 * f1**4 * f2**2
                         + 1970 * f1**3 * f2**3 + 1113 * f1**2 * f2**4
                         + 150 * f1 * f2**5 + 2 * f2**6) * mu**2,
        -16384 * s**12 * (4 * f1**6 + 345 * f1**5 * f2 + 2226 * f1**4 * f2**2
                          + 3850 * f1**3 * f2**3 + 2226 * f1**2 * f2**4
                          + 345 * f1 * f2**5 + 4 * f2**6) * mu * f1 * f2,
        16384 * s**11 * (2 * f1**6 + 211 * f1**5 * f2 + 1466 * f1**4 * f2**2
                         + 2642 * f1**3 * f2**3 + 1466 * f1**2 * f2**4
                         + 211 * f1 * f2**5 + 2 * f2**6) * f1**2 * f2**2,
    ]
    out = []
    for terms in (t4, t6, t8):
        out.append((sum(terms), sum(abs(t) for t in terms)))
    return tuple(out)


@dataclass(frozen=True)
class TwistReport:
    """Twist determinants D_{2k} of the normal form restricted to the
    resonant energy line, and the smallest k (2, 3, or 4) at which the
    determinant is resolvably nonzero.  Any nonzero D_{2k} certifies the
    nondegeneracy that KAM confinement needs."""

    D4: float
    D6: float
    D8: float
    first_nonzero: int | None


_TWIST_RTOL = 1e-9


def twist_determinants(cp: ConsolidatedParams) -> TwistReport:
    """Evaluate the twist determinants at cp.

    A determinant counts as nonzero when it exceeds 1e-9 of the sum of
    the magnitudes of its constituent terms, so cancellation down to
    rounding noise registers as zero.
    """
    pairs = twist_polynomials(cp.f1, cp.f2, cp.mu)
    first = None
    for k, (val, scale) in zip((2, 3, 4), pairs):
        if abs(val) > _TWIST_RTOL * scale and first is None:
            first = k
    return TwistReport(D4=pairs[0][0], D6=pairs[1][0], D8=pairs[2][0],
                       first_nonzero=first)


def _sqrt1mx_series(n: int) -> list[Fraction]:
    """Taylor coefficients of sqrt(1 - x) through x^n."""
    coeffs = [Fraction(1)]
    term = Fraction(1)
    for k in range(1, n + 1):
        term = term * (Fraction(1, 2) - (k - 1)) / k
        coeffs.append(term * (-1) ** k)
    return coeffs

def _chart_factor_series(n: int) -> list[Fraction]:
    """Taylor coefficients of f(x) = (1 - sqrt(1 - x)) / x through x^n."""
    cs = _sqrt1mx_series(n + 1)
    return [-cs[k + 1] for k in range(n + 1)]


def taylor_invariant_expansion(cp: ConsolidatedParams,
                               max_degree: int) -> InvariantPoly:
    """Expand the consolidated Hamiltonian (minus its value at the
    origin) through invariant degree max_degree.

    The normal-mode coordinates diagonalizing the quadratic part send
    the chart functions to linear combinations of the invariants:

        |q|^2        = 8 s^2 (w1 + w2 + sqrt(2) w4),
        |u|^2        = 2 d^2 (w1 + w2 - sqrt(2) w4),
        q2 u1 - q1 u2 = 4 d s (w1 - w2),
        q1 u1 + q2 u2 = -4 sqrt(2) d s w3,

    so the Taylor expansion happens directly in the invariant algebra.
    Exact throughout: float inputs are converted to the rationals they
    represent.  Odd phase-space orders vanish by construction.  The
    degree-1 part is omega1 w1 - omega2 w2.
    """
    if not 1 <= max_degree <= MAX_EXPANSION_DEGREE:
        raise ExpansionOrderError(
            f"max_degree must be in [1, {MAX_EXPANSION_DEGREE}], "
            f"got {max_degree}"
        )
    f1, f2, mu = (Fraction(cp.f1), Fraction(cp.f2), Fraction(cp.mu))
    s = f1 + f2
    d = f1 - f2
    kappa = 4 * d * s

    x = (W1 + W2 + W4.scale(SQRT2)).scale(QSqrt2(8 * s * s))
    u_sq = (W1 + W2 - W4.scale(SQRT2)).scale(QSqrt2(2 * d * d))
    swirl = (W1 - W2).scale(QSqrt2(kappa))
    q_dot_u = W3.scale(-SQRT2 * QSqrt2(kappa))

    fx = InvariantPoly.zero()
    x_pow = InvariantPoly.monomial((0, 0, 0, 0), QSqrt2(1))
    for k, c in enumerate(_chart_factor_series(max_degree)):
        if k > 0:
            x_pow = (x_pow * x).truncate(max_degree)
        fx = fx + x_pow.scale(QSqrt2(c))

    # H - mu = (s/2)(|u|^2 + 2 f swirl + f^2 x) - (s/2)(q.u)^2
    #          - (f1 f2 / 2s) x - (mu/2) f^2 x^2
    fx_sq = (fx * fx).truncate(max_degree)
    out = u_sq.scale(QSqrt2(s / 2))
    out = out + (fx * swirl).truncate(max_degree).scale(QSqrt2(s))
    out = out + (fx_sq * x).truncate(max_degree).scale(QSqrt2(s / 2))
    out = out - (q_dot_u * q_dot_u).truncate(max_degree).scale(QSqrt2(s / 2))
    out = out - x.scale(QSqrt2(f1 * f2 / (2 * s)))
    x_sq = (x * x).truncate(max_degree)
    out = out - (fx_sq * x_sq).truncate(max_degree).scale(QSqrt2(mu / 2))
    return out.truncate(max_degree)


def _monomial_basis(degree: int) -> list[tuple[int, int, int, int]]:
    """Canonical-form monomial exponents of the given invariant degree."""
    out = []
    for a in range(degree + 1):
        for b in range(degree + 1 - a):
            for c in (0, 1):
                e = degree - a - b - c
                if e >= 0:
                    out.append((a, b, c, e))
    return out


def _pivot_weight(x) -> float:
    try:
        return abs(float(x))
    except OverflowError:
        return math.inf


def _solve_linear(M: list[list], rhs: list) -> list:
    """Gaussian elimination with max-weight pivoting, generic over any
    field whose elements support + - * / and bool."""
    n = len(M)
    A = [row[:] + [rhs[i]] for i, row in enumerate(M)]
    for col in range(n):
        live = [r for r in range(col, n) if A[r][col]]
        if not live:
            raise ArithmeticError("singular homological system")
        piv = max(live, key=lambda r: _pivot_weight(A[r][col]))
        A[col], A[piv] = A[piv], A[col]
        pv = A[col][col]
        A[col] = [entry / pv for entry in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                fac = A[r][col]
                A[r] = [entry - fac * lead
                        for entry, lead in zip(A[r], A[col])]
    return [A[i][n] for i in range(n)]


def lie_normalize(H: InvariantPoly, max_degree: int
                  ) -> tuple[InvariantPoly, list[InvariantPoly]]:
    """Normalize H degree by degree; return (Hnf, generators).

    H must have quadratic part omega1 w1 - omega2 w2 with distinct
    frequencies (degree 1 in the invariants).  For each degree n from 2
    through max_degree the homological equation

        Hnf_n = H_n + {G_n, H2}

    is solved for the generator G_n killing everything outside the
    (w1, w2) subalgebra, and exp(ad_{G_n}) is applied to the whole
    Hamiltonian before moving to the next degree.  An input that is
    already a polynomial in (w1, w2) comes back unchanged with zero
    generators.  Exact when the coefficients are exact.
    """
    h2 = H.degree_part(1)
    omega1 = h2.terms.get((1, 0, 0, 0), QSqrt2(0))
    omega2 = -h2.terms.get((0, 1, 0, 0), QSqrt2(0))
    if not h2.is_pure():
        raise ValueError("quadratic part is not omega1 w1 - omega2 w2")
    if omega1 == omega2:
        raise ResonanceError(
            "equal frequencies: the normal form at a 1:1 resonance is "
            "outside this normalizer's kernel characterization"
        )

    current = H
    generators: list[InvariantPoly] = []
    for degree in range(2, max_degree + 1):
        h_n = current.degree_part(degree)
        basis = _monomial_basis(degree)
        nonpure = [k for k in basis if k[2] + k[3] > 0]
        pure = [k for k in basis if k[2] + k[3] == 0]
        index = {k: i for i, k in enumerate(basis)}
        size = len(basis)
        zero = omega1 - omega1
        M = [[zero for _ in range(size)] for _ in range(size)]
        for j, key in enumerate(nonpure):
            image = poisson_bracket_w(InvariantPoly.monomial(key, 1), h2)
            for kk, v in image.terms.items():
                M[index[kk]][j] = M[index[kk]][j] + v
        for j, key in enumerate(pure):
            col = len(nonpure) + j
            M[index[key]][col] = M[index[key]][col] - 1
        rhs = [zero for _ in range(size)]
        for kk, v in h_n.terms.items():
            rhs[index[kk]] = -v
        solution = _solve_linear(M, rhs)
        gen = InvariantPoly(
            {k: solution[j] for j, k in enumerate(nonpure) if solution[j]},
            _canonical=True,
        )
        generators.append(gen)

        transformed = InvariantPoly.zero()
        term = current
        k_factorial = 0
        while term:
            transformed = transformed + term
            k_factorial += 1
            term = poisson_bracket_w(gen, term).truncate(max_degree)
            term = term.map_coeffs(lambda v: v * Fraction(1, k_factorial))
        current = transformed
        if not current.degree_part(degree).is_pure():
            raise ArithmeticError(
                f"degree {degree} component failed to normalize"
            )
    return current, generators
