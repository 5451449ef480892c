"""Closed-form stability criteria and linear-symplectic diagnostics.

The axis-aligned steady motion is governed by two thresholds in the
squared axial impulse Pe^2: below C1 the reduced energy is definite and
confinement gives nonlinear stability; between C1 and C2 the energy is
indefinite but a multiple of the diagonal SO(2) momentum restores
definiteness (formal stability) and the spectrum stays on the imaginary
axis; above C2 a pair of eigenvalues leaves the axis through a
Hamiltonian-Hopf collision.  Everything is closed-form; the dense
eigenvalue and definiteness routines exist to cross-check the formulas
and to serve the generic 4-dimensional tests.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .model import BodyParams, validate_params
from .reduction import DerivedCoeffs, derived_coeffs

__all__ = [
    "StabilityClass",
    "SpectrumReport",
    "derived_coeffs",
    "thresholds",
    "classify",
    "linear_spectrum",
    "quadratic_hessian",
    "linearization_matrix",
    "formal_stability_lambda_search",
    "resonance_formal_stability",
    "resonance_witness",
    "hopf_discriminant",
    "hopf_eigenvalues",
    "kirchhoff_hopf_block",
    "krein_signature",
]

BOUNDARY_TOL = 1e-12


class StabilityClass(enum.Enum):
    EMRegion = "EMRegion"
    Gap = "Gap"
    SpectrallyUnstable = "SpectrallyUnstable"
    BoundaryC1 = "BoundaryC1"
    BoundaryC2 = "BoundaryC2"

    def __str__(self) -> str:  # CSV-friendly
        return self.value


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalues of the reduced linearization at the origin.

    frequencies holds (f1, f2) with f1 >= f2 when the spectrum is
    elliptic (purely imaginary, nonzero), else None.
    """

    eigenvalues: tuple[complex, complex, complex, complex]
    max_real_part: float
    frequencies: tuple[float, float] | None


def thresholds(p: BodyParams, Se: float) -> tuple[float, float]:
    """Squared-impulse thresholds (C1, C2).

    Pe^2 < C1 gives energy-momentum confinement; C1 < Pe^2 < C2 is the
    formally stable gap.  When M1 <= M3 the confinement inequality holds
    for every Pe and both thresholds are reported as +inf.
    """
    validate_params(p)
    if p.M1 <= p.M3:
        return math.inf, math.inf
    base = p.M1 * p.M3 / (p.M1 - p.M3)
    C1 = base * p.mgl
    C2 = C1 + base * p.M1 * Se ** 2 / (4.0 * p.D)
    return C1, C2


def classify(p: BodyParams, Pe: float, Se: float) -> StabilityClass:
    """Total classification of (body, Pe, Se) by the two thresholds."""
    C1, C2 = thresholds(p, Se)
    x = Pe ** 2
    if math.isfinite(C1) and abs(x - C1) <= BOUNDARY_TOL:
        return StabilityClass.BoundaryC1
    if math.isfinite(C2) and abs(x - C2) <= BOUNDARY_TOL:
        return StabilityClass.BoundaryC2
    if x < C1:
        return StabilityClass.EMRegion
    if x < C2:
        return StabilityClass.Gap
    return StabilityClass.SpectrallyUnstable


def linear_spectrum(p: BodyParams, Pe: float, Se: float) -> SpectrumReport:
    """Closed-form eigenvalues of the reduced linearization.

    The quartic factors over the rotating frame into
    lambda = (-i Fp Se +- sqrt(-(Fp Se)^2 - 4 Fp Fq))/2 and conjugates.
    """
    validate_params(p)
    d = derived_coeffs(p, Pe)
    gyro = d.Fp * Se
    rad = cmath.sqrt(complex(-(gyro ** 2) - 4.0 * d.Fp * d.Fq, 0.0))
    lam_plus = 0.5 * (-1j * gyro + rad)
    lam_minus = 0.5 * (-1j * gyro - rad)
    eigs = (lam_plus, lam_minus, lam_plus.conjugate(), lam_minus.conjugate())
    max_re = max(z.real for z in eigs)
    elliptic = all(abs(z.real) <= 1e-10 for z in eigs) and all(
        abs(z) > 0.0 for z in eigs
    )
    freqs: tuple[float, float] | None = None
    if elliptic:
        mags = sorted((abs(lam_plus.imag), abs(lam_minus.imag)), reverse=True)
        freqs = (mags[0], mags[1])
    return SpectrumReport(eigenvalues=eigs, max_real_part=max_re, frequencies=freqs)


def quadratic_hessian(p: BodyParams, Pe: float, Se: float) -> np.ndarray:
    """Hessian at the origin of the vertical reduced Hamiltonian, in the
    (q1, q2, p1, p2) basis: Fp C^T C + Fq diag(1,1,0,0) with the linear
    forms C z = (p1 + Fl q1 + (Se/2) q2, p2 + Fl q2 - (Se/2) q1)."""
    d = derived_coeffs(p, Pe)
    s = 0.5 * Se
    C = np.array([
        [d.Fl, s, 1.0, 0.0],
        [-s, d.Fl, 0.0, 1.0],
    ])
    H = d.Fp * (C.T @ C)
    H[0, 0] += d.Fq
    H[1, 1] += d.Fq
    return H


_J4 = np.block([
    [np.zeros((2, 2)), np.eye(2)],
    [-np.eye(2), np.zeros((2, 2))],
])

_SO2_HESSIAN = np.array([
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0, 0.0],
    [0.0, -1.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0],
])


def linearization_matrix(p: BodyParams, Pe: float, Se: float) -> np.ndarray:
    """J grad^2 H: the 4x4 linearized reduced vector field at the origin."""
    return _J4 @ quadratic_hessian(p, Pe, Se)


def formal_stability_lambda_search(
    p: BodyParams, Pe: float, Se: float,
    lam_span: float | None = None, n_lambda: int = 2001,
) -> tuple[bool, float | None]:
    """Search for lambda making grad^2(H + lambda J_so2) definite.

    A dense scan over a symmetric lambda interval; returns (found,
    witness).  The interval default covers several multiples of the
    gyroscopic scale Fp*Se, which bounds where the definite window can
    sit.  Kept deliberately independent of the closed-form criterion so
    the two can be compared as separate routes.
    """
    H = quadratic_hessian(p, Pe, Se)
    d = derived_coeffs(p, Pe)
    if lam_span is None:
        lam_span = 3.0 * max(1.0, abs(d.Fp * Se))
    for lam in np.linspace(-lam_span, lam_span, n_lambda):
        w = np.linalg.eigvalsh(H + lam * _SO2_HESSIAN)
        if w[0] > 1e-12 or w[-1] < -1e-12:
            return True, float(lam)
    return False, None


def resonance_formal_stability(omega1: float, omega2: float,
                               n1: int, n2: int) -> bool:
    """Formal stability of omega1 w1 + omega2 w2 on the resonance (n1, n2).

    With Krein-signed frequencies omega1 < 0 < omega2 the obstruction is
    the single line omega1 n2 - omega2 n1 = 0; off it some multiple of
    the momentum n1 w1 + n2 w2 restores definiteness.
    """
    if not (omega1 < 0.0 < omega2):
        raise ValueError(
            f"need omega1 < 0 < omega2, got ({omega1!r}, {omega2!r})"
        )
    if n1 == 0 and n2 == 0:
        raise ValueError("(n1, n2) must not be (0, 0)")
    det = omega1 * n2 - omega2 * n1
    scale = abs(omega1 * n2) + abs(omega2 * n1)
    return abs(det) > 1e-12 * max(scale, 1.0)


def resonance_witness(omega1: float, omega2: float,
                      n1: int, n2: int) -> float | None:
    """An explicit lambda with (omega1 + lambda n1, omega2 + lambda n2)
    of one strict sign, or None when the resonance obstructs it."""
    if not resonance_formal_stability(omega1, omega2, n1, n2):
        return None
    crits = sorted(
        -w / n for w, n in ((omega1, n1), (omega2, n2)) if n != 0
    )
    candidates = [crits[0] - 1.0, crits[-1] + 1.0]
    candidates += [0.5 * (a + b) for a, b in zip(crits, crits[1:])]
    for lam in candidates:
        a = omega1 + lam * n1
        b = omega2 + lam * n2
        if (a > 0 and b > 0) or (a < 0 and b < 0):
            return lam
    return None


def hopf_discriminant(a: complex, b: float, c: float) -> float:
    """Discriminant D = Re(a)^2 + b c of the equivariant 2x2 block
    [[a, b], [c, a]]; positive D means a real eigenvalue pair split."""
    return a.real ** 2 + b * c


def hopf_eigenvalues(a: complex, b: float, c: float) -> tuple[complex, complex]:
    """Eigenvalues i Im(a) +- sqrt(D) of the equivariant block."""
    root = cmath.sqrt(complex(hopf_discriminant(a, b, c), 0.0))
    center = 1j * a.imag
    return center + root, center - root


def kirchhoff_hopf_block(p: BodyParams, Pe: float, Se: float
                         ) -> tuple[complex, float, float]:
    """Equivariant block entries (a, b, c) of the reduced linearization.

    In the complex chart z = q1 + i q2 the linearization is similar to
    [[a, b], [c, a]] with a = -i Fp Se / 2, b = Fp and
    c = -Fq - Fp Se^2/4, so D = Fp(-Fq - Fp Se^2/4) changes sign exactly
    at the spectral threshold Pe^2 = C2.
    """
    d = derived_coeffs(p, Pe)
    a = complex(0.0, -0.5 * d.Fp * Se)
    b = d.Fp
    c = -d.Fq - d.Fp * Se ** 2 / 4.0
    return a, b, c


def krein_signature(p: BodyParams, Pe: float, Se: float
                    ) -> list[tuple[float, int]]:
    """Krein signs of the elliptic modes, from the energy form restricted
    to each real eigenspace; [(frequency, sign)] sorted by frequency
    descending.  Raises if the spectrum is not elliptic."""
    rep = linear_spectrum(p, Pe, Se)
    if rep.frequencies is None:
        raise ValueError("spectrum is not elliptic; no Krein signs")
    H = quadratic_hessian(p, Pe, Se)
    A = _J4 @ H
    vals, vecs = np.linalg.eig(A)
    out: list[tuple[float, int]] = []
    for omega in rep.frequencies:
        idx = int(np.argmin(np.abs(vals - 1j * omega)))
        u = vecs[:, idx]
        basis = np.stack([u.real, u.imag], axis=1)
        restricted = basis.T @ H @ basis
        sign = 1 if np.trace(restricted) > 0 else -1
        out.append((float(omega), sign))
    return out
