"""Symmetry-reduced canonical dynamics in the attitude chart.

After quotienting the full impulse model by rotations about the vertical
and the body axis and fixing the momentum level (nu_a, nu_theta), what
remains is a two-degree-of-freedom canonical system in chart coordinates
(q1, q2) on the upper hemisphere of Gamma, with conjugate momenta
(p1, p2).  This module holds:

  * the chart and the orthogonal attitude matrix it parametrizes,
  * the reduced Hamiltonian at a general momentum level and its
    specialization at vertical momentum (nu_a parallel to e3), where the
    system keeps an extra diagonal SO(2) symmetry,
  * analytic gradients of the reduced Hamiltonian (the vector field used
    by the Newton continuation and by the integrator oracles),
  * the reconstruction map back to the full impulse state, and
  * the consolidated two-parameter family used by the normal-form
    machinery, in which the frequencies (f1, f2) of the linearized modes
    appear as the parameters themselves.

Sign conventions were fixed by a single decisive oracle: the reduced
Hamiltonian must equal the full Hamiltonian composed with reconstruction
up to a state-independent constant.  In particular the momentum-coupling
terms carry nu . Gamma^- with Gamma^- = (q1, q2, -Gamma3), which is the
reading consistent with P3 = nu . (A e3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import BodyParams, ChartDomainError, FullState, Vec3

Q_MAX = 0.999
"""Chart guard: operations refuse states with |q| above this radius."""


@dataclass(frozen=True)
class ReducedState:
    """Canonical chart state (q1, q2, p1, p2); q must satisfy |q| < 1."""

    q1: float
    q2: float
    p1: float = 0.0
    p2: float = 0.0

    def __post_init__(self) -> None:
        if self.q1 ** 2 + self.q2 ** 2 >= 1.0:
            raise ChartDomainError(
                f"|q| = {math.hypot(self.q1, self.q2)!r} is outside the chart"
            )

    @property
    def r(self) -> float:
        return math.hypot(self.q1, self.q2)


@dataclass(frozen=True)
class MomentumLevel:
    """Momentum level: linear impulse level nu_a and spin level nu_theta."""

    nu_a: Vec3
    nu_theta: float

    def __post_init__(self) -> None:
        a, b, c = self.nu_a
        object.__setattr__(self, "nu_a", (float(a), float(b), float(c)))

    @property
    def is_vertical(self) -> bool:
        """True iff nu_a is exactly parallel to e3 (extra SO(2) survives)."""
        return self.nu_a[0] == 0.0 and self.nu_a[1] == 0.0


@dataclass(frozen=True)
class DerivedCoeffs:
    """The three coefficient combinations the reduced dynamics runs on.

    Fp = M1/(I1 M1 - m^2 l^2) scales the kinetic block, Fq is the
    effective restoring stiffness at axial impulse nu3, and Fl couples
    the radial momentum to the chart radius.
    """

    Fp: float
    Fq: float
    Fl: float


@dataclass(frozen=True)
class ConsolidatedParams:
    """Normal-form testbed parameters: mode frequencies f1 > f2 > 0 and
    the rescaled restoring weight mu."""

    f1: float
    f2: float
    mu: float

    def __post_init__(self) -> None:
        if not (self.f1 > self.f2 > 0.0):
            raise ValueError(
                f"need f1 > f2 > 0, got f1={self.f1!r}, f2={self.f2!r}"
            )


def _require_chart(q1: float, q2: float) -> None:
    if q1 * q1 + q2 * q2 > Q_MAX * Q_MAX:
        raise ChartDomainError(
            f"|q| = {math.hypot(q1, q2)!r} exceeds the chart guard {Q_MAX}"
        )


def _gamma3(q1: float, q2: float) -> float:
    return math.sqrt(1.0 - q1 * q1 - q2 * q2)


def attitude_matrix(q1: float, q2: float) -> np.ndarray:
    """Orthogonal attitude A with A^T e3 = (q1, q2, Gamma3).

    A = id + hat(x) + f hat(x)^2 with x = -e3 x q = (q2, -q1, 0) and
    f = 1/(1 + Gamma3); f solves |q|^2 f^2 - 2 f + 1 = 0, which makes the
    Cayley-like combination orthogonal.
    """
    _require_chart(q1, q2)
    g3 = _gamma3(q1, q2)
    f = 1.0 / (1.0 + g3)
    x = np.array([q2, -q1, 0.0])
    hx = np.array([
        [0.0, 0.0, -q1],
        [0.0, 0.0, -q2],
        [q1, q2, 0.0],
    ])
    return np.eye(3) + hx + f * (hx @ hx)


def so2_momentum(s: ReducedState) -> float:
    """Conserved diagonal-rotation momentum q1 p2 - q2 p1 (vertical levels)."""
    return s.q1 * s.p2 - s.q2 * s.p1


def derived_coeffs(p: BodyParams, Pe: float) -> DerivedCoeffs:
    """Closed-form (Fp, Fq, Fl) at axial linear impulse Pe."""
    D = p.D
    return DerivedCoeffs(
        Fp=p.M1 / D,
        Fq=p.mgl - Pe ** 2 * (1.0 / p.M3 - 1.0 / p.M1),
        Fl=p.m * p.l * Pe / p.M1,
    )


def _shifted_momenta(p: BodyParams, nu: MomentumLevel, s: ReducedState,
                     f: float) -> tuple[float, float]:
    beta = p.m * p.l / p.M1
    n = nu.nu_a
    pt1 = s.p2 - f * s.q1 * nu.nu_theta - beta * n[1]
    pt2 = -s.p1 - f * s.q2 * nu.nu_theta + beta * n[0]
    return pt1, pt2


def reduced_hamiltonian(p: BodyParams, nu: MomentumLevel, s: ReducedState) -> float:
    """Reduced Hamiltonian at a general momentum level.

    The three blocks are the transverse kinetic form in the shifted
    momenta, the axial kinetic form in G = nu . Gamma^-, and the
    buoyancy-offset coupling; the potential is -mgl Gamma3.
    """
    _require_chart(s.q1, s.q2)
    g3 = _gamma3(s.q1, s.q2)
    f = 1.0 / (1.0 + g3)
    Fp = p.M1 / p.D
    beta = p.m * p.l / p.M1
    B = 1.0 / p.M3 - p.I1 / p.D
    n = nu.nu_a
    pt1, pt2 = _shifted_momenta(p, nu, s, f)
    S = s.q2 * pt1 - s.q1 * pt2
    G = n[0] * s.q1 + n[1] * s.q2 - n[2] * g3
    return (
        Fp / 2.0 * (pt1 * pt1 + pt2 * pt2 - S * S)
        + B / 2.0 * G * G
        + beta * Fp * (-S * G + n[1] * pt1 - n[0] * pt2)
        - p.mgl * g3
    )


def reduced_hamiltonian_vertical(p: BodyParams, nu3: float, nu_theta: float,
                                 s: ReducedState) -> float:
    """Reduced Hamiltonian at vertical momentum nu_a = nu3 e3, written in
    the coefficient combinations (Fp, Fq, Fl); zero at the origin."""
    _require_chart(s.q1, s.q2)
    g3 = _gamma3(s.q1, s.q2)
    f = 1.0 / (1.0 + g3)
    x = s.q1 * s.q1 + s.q2 * s.q2
    d = derived_coeffs(p, nu3)
    a1 = s.p1 + d.Fl * g3 * s.q1 + nu_theta * f * s.q2
    a2 = s.p2 + d.Fl * g3 * s.q2 - nu_theta * f * s.q1
    qp = s.q1 * s.p1 + s.q2 * s.p2
    return (
        d.Fp / 2.0 * (a1 * a1 - qp * qp + a2 * a2)
        + d.Fq / 2.0 * x
        + p.mgl * (f - 0.5) * x
        + 0.5 * d.Fp * d.Fl ** 2 * x * x
    )


def reduced_gradient(p: BodyParams, nu: MomentumLevel, s: ReducedState
                     ) -> tuple[float, float, float, float]:
    """Analytic (dH/dq1, dH/dq2, dH/dp1, dH/dp2) of reduced_hamiltonian."""
    _require_chart(s.q1, s.q2)
    q1, q2 = s.q1, s.q2
    g3 = _gamma3(q1, q2)
    f = 1.0 / (1.0 + g3)
    Fp = p.M1 / p.D
    beta = p.m * p.l / p.M1
    B = 1.0 / p.M3 - p.I1 / p.D
    n = nu.nu_a
    nth = nu.nu_theta
    pt1, pt2 = _shifted_momenta(p, nu, s, f)
    S = q2 * pt1 - q1 * pt2
    G = n[0] * q1 + n[1] * q2 - n[2] * g3

    # dH/dp: dS/dp = q, d(pt1)/dp2 = 1, d(pt2)/dp1 = -1
    dHp1 = Fp * (-pt2 - S * q1) + beta * Fp * (-q1 * G + n[0])
    dHp2 = Fp * (pt1 - S * q2) + beta * Fp * (-q2 * G + n[1])

    dfdq = (f * f / g3)  # df/dq_i = this * q_i
    out_q = []
    for i, qi in enumerate((q1, q2)):
        dpt1 = -nth * ((f if i == 0 else 0.0) + q1 * dfdq * qi)
        dpt2 = -nth * ((f if i == 1 else 0.0) + q2 * dfdq * qi)
        dS = ((pt1 if i == 1 else 0.0) - (pt2 if i == 0 else 0.0)
              + q2 * dpt1 - q1 * dpt2)
        dG = n[i] + n[2] * qi / g3
        dH = (
            Fp * (pt1 * dpt1 + pt2 * dpt2 - S * dS)
            + B * G * dG
            + beta * Fp * (-dS * G - S * dG + n[1] * dpt1 - n[0] * dpt2)
            + p.mgl * qi / g3
        )
        out_q.append(dH)
    return out_q[0], out_q[1], dHp1, dHp2


def reduced_field(p: BodyParams, nu: MomentumLevel, s: ReducedState
                  ) -> tuple[float, float, float, float]:
    """Hamiltonian vector field (q1', q2', p1', p2') of reduced_hamiltonian."""
    gq1, gq2, gp1, gp2 = reduced_gradient(p, nu, s)
    return gp1, gp2, -gq1, -gq2


def reconstruct_full(p: BodyParams, nu: MomentumLevel, s: ReducedState) -> FullState:
    """Rebuild the full impulse state on the momentum level.

    Gamma = (q1, q2, Gamma3), P = A^T nu_a, and the transverse angular
    impulse comes from the shifted momenta via
    Pi = -e3 x (A^T (e3 x pt)) - nu_theta e3, so Pi3 = -nu_theta.
    """
    _require_chart(s.q1, s.q2)
    g3 = _gamma3(s.q1, s.q2)
    f = 1.0 / (1.0 + g3)
    A = attitude_matrix(s.q1, s.q2)
    pt1, pt2 = _shifted_momenta(p, nu, s, f)
    e3 = np.array([0.0, 0.0, 1.0])
    pt = np.array([pt1, pt2, 0.0])
    Pi = -np.cross(e3, A.T @ np.cross(e3, pt)) - nu.nu_theta * e3
    P = A.T @ np.asarray(nu.nu_a)
    return FullState(
        Pi=tuple(Pi),
        P=tuple(P),
        Gamma=(s.q1, s.q2, g3),
    )


def consolidated_hamiltonian(cp: ConsolidatedParams, q1: float, q2: float,
                             u1: float, u2: float) -> float:
    """Two-frequency testbed Hamiltonian; equals mu at the origin.

    This is the vertical reduced Hamiltonian after absorbing the radial
    coupling by a momentum shift and rescaling energy and momenta so the
    linear modes have frequencies exactly (f1, f2).
    """
    _require_chart(q1, q2)
    g3 = _gamma3(q1, q2)
    f = 1.0 / (1.0 + g3)
    x = q1 * q1 + q2 * q2
    su = cp.f1 + cp.f2
    a1 = u1 + f * q2
    a2 = u2 - f * q1
    qu = q1 * u1 + q2 * u2
    return (
        su / 2.0 * (a1 * a1 - qu * qu + a2 * a2)
        - cp.f1 * cp.f2 / (2.0 * su) * x
        + cp.mu * (g3 + 0.5 * x)
    )


class NotInGapError(ValueError):
    """Consolidation requested outside the two-positive-frequency regime."""


def consolidate_params(d: DerivedCoeffs, Se: float, mgl: float) -> ConsolidatedParams:
    """Map (Fp, Fq, Fl; Se) to the testbed parameters (f1, f2, mu).

    Requires the gap regime Fq < 0 and Fp^2 Se^2 + 4 Fp Fq > 0, where both
    mode frequencies f = (Fp Se +- sqrt(disc))/2 are positive.  mu is the
    restoring weight -mgl rescaled by the 1/Se energy normalization.
    """
    disc = (d.Fp * Se) ** 2 + 4.0 * d.Fp * d.Fq
    if d.Fq >= 0.0 or disc <= 0.0:
        raise NotInGapError(
            f"no frequency gap at Fq={d.Fq!r}, disc={disc!r}; "
            "need Fq < 0 and Fp^2 Se^2 + 4 Fp Fq > 0"
        )
    root = math.sqrt(disc)
    f1 = 0.5 * (d.Fp * Se + root)
    f2 = 0.5 * (d.Fp * Se - root)
    return ConsolidatedParams(f1=f1, f2=f2, mu=-mgl / Se)
