"""Rigid body in an ideal fluid: impulse-variable model on se(3)* x S^2.

An axisymmetric, bottom-heavy vehicle moving through unbounded ideal fluid
carries effective (added) inertia I = diag(I1, I1, I3) and added mass
M = diag(M1, M1, M3), with the center of buoyancy displaced a distance l
along the symmetry axis from the center of gravity.  The state is the
angular impulse Pi, the linear impulse P, and the unit vector Gamma giving
the direction of gravity in the body frame.

Everything here is a pure function of plain tuples of doubles.  The Poisson
structure itself is never materialized (tests rebuild it as a 9x9 matrix to
cross-check the vector field); the flow only needs the closed-form field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

Vec3 = tuple[float, float, float]

_E3: Vec3 = (0.0, 0.0, 1.0)


class ParameterError(ValueError):
    """A body-parameter inequality failed."""


class ChartDomainError(ValueError):
    """A state left the attitude chart (|q| too close to 1)."""


@dataclass(frozen=True)
class BodyParams:
    """Added inertia, added mass, and buoyancy offset of the vehicle.

    I1, I3 are the transverse and axial effective moments of inertia,
    M1, M3 the transverse and axial effective masses, m the (net) mass
    driving the restoring moment, l the gravity-to-buoyancy offset and
    g the gravitational acceleration.  The transverse block is only
    invertible when I1*M1 - (m*l)^2 > 0, which validate_params enforces.
    """

    I1: float
    I3: float = 1.0
    M1: float = 1.0
    M3: float = 0.5
    m: float = 1.0
    l: float = 1.0
    g: float = 1.0

    @property
    def D(self) -> float:
        """Determinant I1*M1 - m^2 l^2 of the transverse inertia block."""
        return self.I1 * self.M1 - (self.m * self.l) ** 2

    @property
    def mgl(self) -> float:
        return self.m * self.g * self.l


def validate_params(p: BodyParams) -> None:
    """Raise ParameterError naming the first violated inequality."""
    if not p.I1 > 0:
        raise ParameterError("I1 > 0 violated")
    if not p.I3 > 0:
        raise ParameterError("I3 > 0 violated")
    if not p.M1 > 0:
        raise ParameterError("M1 > 0 violated")
    if not p.M3 > 0:
        raise ParameterError("M3 > 0 violated")
    if not p.D > 0:
        raise ParameterError("I1·M1 − m²l² > 0 violated")


@dataclass(frozen=True)
class FullState:
    """Impulse-variable state (Pi, P, Gamma) with Gamma on the unit sphere."""

    Pi: Vec3
    P: Vec3
    Gamma: Vec3

    def __post_init__(self) -> None:
        object.__setattr__(self, "Pi", _as_vec3(self.Pi))
        object.__setattr__(self, "P", _as_vec3(self.P))
        object.__setattr__(self, "Gamma", _as_vec3(self.Gamma))
        n = _norm(self.Gamma)
        if abs(n - 1.0) > 1e-9:
            raise ValueError(f"|Gamma| = {n!r} is not 1 within 1e-9")


@dataclass(frozen=True)
class EquilibriumSpec:
    """Axis-aligned steady motion: spin rate impulse Se, axial impulse Pe."""

    Pe: float
    Se: float


def _as_vec3(v) -> Vec3:
    a, b, c = v
    return (float(a), float(b), float(c))


def _norm(v: Vec3) -> float:
    return math.sqrt(v[0] ** 2 + v[1] ** 2 + v[2] ** 2)


def _cross(a: Vec3, b: Vec3) -> Vec3:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def velocities_from_momenta(p: BodyParams, Pi: Vec3, P: Vec3) -> tuple[Vec3, Vec3]:
    """Invert the impulse map: body angular velocity Omega and velocity v.

    The transverse components mix through the buoyancy offset: the 2x2
    blocks (Pi1, P2) and (Pi2, P1) are coupled with off-diagonal m*l.
    """
    D = p.D
    ml = p.m * p.l
    Omega = (
        (p.M1 * Pi[0] + ml * P[1]) / D,
        (p.M1 * Pi[1] - ml * P[0]) / D,
        Pi[2] / p.I3,
    )
    v = (
        (p.I1 * P[0] - ml * Pi[1]) / D,
        (p.I1 * P[1] + ml * Pi[0]) / D,
        P[2] / p.M3,
    )
    return Omega, v


def momenta_from_velocities(p: BodyParams, Omega: Vec3, v: Vec3) -> tuple[Vec3, Vec3]:
    """Forward impulse map, the inverse of velocities_from_momenta."""
    ml = p.m * p.l
    Pi = (
        p.I1 * Omega[0] - ml * v[1],
        p.I1 * Omega[1] + ml * v[0],
        p.I3 * Omega[2],
    )
    P = (
        ml * Omega[1] + p.M1 * v[0],
        -ml * Omega[0] + p.M1 * v[1],
        p.M3 * v[2],
    )
    return Pi, P


def hamiltonian_full(p: BodyParams, s: FullState) -> float:
    """Total energy: kinetic quadratic form in (Pi, P) plus -mgl*Gamma3."""
    Pi, P = s.Pi, s.P
    D = p.D
    return (
        p.M1 / (2 * D) * (Pi[0] ** 2 + Pi[1] ** 2)
        + Pi[2] ** 2 / (2 * p.I3)
        + p.I1 / (2 * D) * (P[0] ** 2 + P[1] ** 2)
        + P[2] ** 2 / (2 * p.M3)
        + p.m * p.l / D * (Pi[0] * P[1] - Pi[1] * P[0])
        - p.mgl * s.Gamma[2]
    )


def full_vector_field(p: BodyParams, s: FullState) -> tuple[Vec3, Vec3, Vec3]:
    """Equations of motion (dPi/dt, dP/dt, dGamma/dt) in the body frame.

    Pi' = Pi x Omega + P x v - mgl Gamma x e3,  P' = P x Omega,
    Gamma' = Gamma x Omega, with (Omega, v) = velocities_from_momenta.
    """
    Omega, v = velocities_from_momenta(p, s.Pi, s.P)
    torque = _cross(s.Gamma, _E3)
    dPi = _cross(s.Pi, Omega)
    dPv = _cross(s.P, v)
    dPi = (
        dPi[0] + dPv[0] - p.mgl * torque[0],
        dPi[1] + dPv[1] - p.mgl * torque[1],
        dPi[2] + dPv[2] - p.mgl * torque[2],
    )
    dP = _cross(s.P, Omega)
    dGamma = _cross(s.Gamma, Omega)
    return dPi, dP, dGamma


def full_field_flat(p: BodyParams, y) -> list[float]:
    """full_vector_field on a flat 9-sequence (Pi, P, Gamma); plumbing for
    generic one-step integrators, with no unit-sphere check on Gamma."""
    Pi = (y[0], y[1], y[2])
    P = (y[3], y[4], y[5])
    Gamma = (y[6], y[7], y[8])
    Omega, v = velocities_from_momenta(p, Pi, P)
    t1 = _cross(Pi, Omega)
    t2 = _cross(P, v)
    t3 = _cross(Gamma, _E3)
    dPi = (
        t1[0] + t2[0] - p.mgl * t3[0],
        t1[1] + t2[1] - p.mgl * t3[1],
        t1[2] + t2[2] - p.mgl * t3[2],
    )
    dP = _cross(P, Omega)
    dG = _cross(Gamma, Omega)
    return [*dPi, *dP, *dG]


def casimirs(s: FullState) -> tuple[float, float, float]:
    """The three conserved functions of the bracket alone:
    |P|^2, P.Gamma, |Gamma|^2."""
    P, G = s.P, s.Gamma
    return (
        P[0] ** 2 + P[1] ** 2 + P[2] ** 2,
        P[0] * G[0] + P[1] * G[1] + P[2] * G[2],
        G[0] ** 2 + G[1] ** 2 + G[2] ** 2,
    )


def relative_equilibrium_state(eq: EquilibriumSpec) -> FullState:
    """The axis-aligned steady state: Pi = Se e3, P = Pe e3, Gamma = e3."""
    return FullState(
        Pi=(0.0, 0.0, eq.Se),
        P=(0.0, 0.0, eq.Pe),
        Gamma=(0.0, 0.0, 1.0),
    )


NUMERIC_BODY = BodyParams(I1=4.0, I3=1.0, M1=1.0, M3=0.5, m=1.0, l=1.0, g=1.0)
"""The body used throughout the worked examples and experiments."""
