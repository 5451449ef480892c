"""Splitting integrator for the reduced vehicle dynamics.

The reduced Hamiltonian splits exactly into four pieces with closed-form
flows: H0 = H(q, 0) (a kick in p), H1 = (Fp/2)(|p|^2 - (q.p)^2) (free
motion on the unit sphere seen through the disk chart), H2 =
Fp Fl (q.p) Gamma3 (motion along radial lines), and H3 =
-Fp nu_theta f(r^2) (q1 p2 - q2 p1) (a rotation with an amplitude-
dependent rate).  Momentum-preserving dissipation pushes p along q and
also integrates in closed form.  The palindromic composition

    G_{dt/2} F0_{dt/2} F3_{dt/2} F2_{dt/2} F1_{dt}
    F2_{dt/2} F3_{dt/2} F0_{dt/2} G_{dt/2}

is a second-order one-step method, symplectic at eps = 0, and at
vertical momentum every stage separately conserves q1 p2 - q2 p1.

The split identity and each closed form hold at general (nonvertical)
momentum levels: the p-quadratic, p-linear, and p-free parts of the
reduced Hamiltonian are exactly H1, H2 + H3, and H0 for any nu, and the
dissipation law dissipates energy for any nu as well.

This module is the plain-Python reference; _kernel holds a compiled
twin used by the long experiment runs, cross-checked in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import BodyParams, ChartDomainError
from .reduction import (Q_MAX, MomentumLevel, ReducedState, reduced_gradient,
                        reduced_hamiltonian, so2_momentum)

_COS_GUARD = math.sqrt(1.0 - Q_MAX * Q_MAX)


@dataclass(frozen=True)
class SplitCoeffs:
    """Everything the sub-flows need, precomputed from a body and a
    momentum level."""

    body: BodyParams
    level: MomentumLevel
    Fp: float
    Fl: float
    nu_theta: float

    @classmethod
    def build(cls, body: BodyParams, level: MomentumLevel) -> "SplitCoeffs":
        ml = body.m * body.l
        return cls(
            body=body,
            level=level,
            Fp=body.M1 / body.D,
            Fl=ml * level.nu_a[2] / body.M1,
            nu_theta=level.nu_theta,
        )


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float
    eps: float = 0.0
    r_stop: float = 0.5
    q_max: float = Q_MAX
    sample_stride: int = 1

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        if self.eps < 0:
            raise ValueError(f"eps must be nonnegative, got {self.eps!r}")
        if not 0 < self.r_stop < self.q_max < 1:
            raise ValueError(
                f"need 0 < r_stop < q_max < 1, got r_stop={self.r_stop!r}, "
                f"q_max={self.q_max!r}"
            )
        if self.sample_stride < 1:
            raise ValueError("sample_stride must be at least 1")


@dataclass(frozen=True)
class TrajectoryRecord:
    """Sampled output of integrate: times, states, the radius, the energy
    change from the start, the SO(2) momentum q1 p2 - q2 p1, and why the
    run ended."""

    times: np.ndarray
    states: list[ReducedState]
    r: np.ndarray
    dH: np.ndarray
    so2_momentum: np.ndarray
    termination: str


def flow_h0(t: float, s: ReducedState, coeffs: SplitCoeffs) -> ReducedState:
    """Kick: p -> p - t * grad_q H(q, 0).  q is unchanged, so H0 is
    conserved exactly."""
    dq1, dq2, _, _ = reduced_gradient(
        coeffs.body, coeffs.level, ReducedState(s.q1, s.q2, 0.0, 0.0)
    )
    return ReducedState(s.q1, s.q2, s.p1 - t * dq1, s.p2 - t * dq2)


def flow_h1(t: float, s: ReducedState, coeffs: SplitCoeffs) -> ReducedState:
    """Free motion on the unit sphere: lift the chart point to
    x = (q1, q2, Gamma3), advance along the great circle with the
    conserved speed, and read p back through the chart metric."""
    q1, q2, p1, p2 = s.q1, s.q2, s.p1, s.p2
    Fp = coeffs.Fp
    qp = q1 * p1 + q2 * p2
    dq1 = Fp * (p1 - qp * q1)
    dq2 = Fp * (p2 - qp * q2)
    if dq1 == 0.0 and dq2 == 0.0:
        return s
    g3 = math.sqrt(1.0 - q1 * q1 - q2 * q2)
    x = np.array([q1, q2, g3])
    xdot = np.array([dq1, dq2, -(q1 * dq1 + q2 * dq2) / g3])
    omega = math.sqrt(float(xdot @ xdot))
    if omega == 0.0:
        return s
    _check_arc(x[2], xdot[2], omega, t)
    c, sn = math.cos(omega * t), math.sin(omega * t)
    x_new = x * c + (xdot / omega) * sn
    xdot_new = -x * omega * sn + xdot * c
    nq1, nq2, ng3 = float(x_new[0]), float(x_new[1]), float(x_new[2])
    if ng3 < _COS_GUARD:
        raise ChartDomainError(
            f"geodesic endpoint leaves the chart: Gamma3 = {ng3!r}"
        )
    # p = G(q) qdot with G the chart metric (inverse of Fp(I - q q^T)).
    scale = 1.0 / (Fp * ng3 * ng3)
    np1 = scale * ((1.0 - nq2 * nq2) * xdot_new[0] + nq1 * nq2 * xdot_new[1])
    np2 = scale * (nq1 * nq2 * xdot_new[0] + (1.0 - nq1 * nq1) * xdot_new[1])
    return ReducedState(nq1, nq2, float(np1), float(np2))


def _check_arc(x3: float, x3dot: float, omega: float, t: float) -> None:
    """Raise when the great-circle arc from phase 0 to omega*t dips below
    the chart guard.  x3 along the arc is A cos(omega tau - psi)."""
    amp = math.hypot(x3, x3dot / omega)
    psi = math.atan2(x3dot / omega, x3)
    ph1, ph2 = sorted((-psi, omega * t - psi))
    # odd multiples of pi in [ph1, ph2] are the minima of cos
    k_lo = math.ceil((ph1 - math.pi) / (2.0 * math.pi))
    k_hi = math.floor((ph2 - math.pi) / (2.0 * math.pi))
    x3_min = -amp if k_lo <= k_hi else min(
        amp * math.cos(ph1), amp * math.cos(ph2)
    )
    if x3_min < _COS_GUARD:
        raise ChartDomainError(
            f"great-circle arc leaves the chart: min Gamma3 = {x3_min!r}"
        )


def flow_h2(t: float, s: ReducedState, coeffs: SplitCoeffs) -> ReducedState:
    """Radial-line motion: the stereographic radius r/(1 + Gamma3) grows
    exponentially at rate Fp*Fl, the direction of q is fixed, and p is
    recovered from conservation of H2 and of q1 p2 - q2 p1."""
    c = coeffs.Fp * coeffs.Fl
    if c == 0.0 or t == 0.0:
        return s
    q1, q2, p1, p2 = s.q1, s.q2, s.p1, s.p2
    r0 = math.hypot(q1, q2)
    decay = math.exp(-c * t)
    if r0 == 0.0:
        return ReducedState(0.0, 0.0, p1 * decay, p2 * decay)
    g30 = math.sqrt(1.0 - r0 * r0)
    u = r0 / (1.0 + g30) / decay
    if u >= 1.0:
        raise ChartDomainError(
            "radial flow reaches the equator of the chart"
        )
    r1 = 2.0 * u / (1.0 + u * u)
    if r1 >= Q_MAX:
        raise ChartDomainError(
            f"radial flow leaves the chart: r = {r1!r}"
        )
    g31 = (1.0 - u * u) / (1.0 + u * u)
    e1, e2 = q1 / r0, q2 / r0
    p_rad = (q1 * p1 + q2 * p2) / r0
    p_tan = e1 * p2 - e2 * p1
    p_rad_new = p_rad * (r0 * g30) / (r1 * g31)
    p_tan_new = p_tan * r0 / r1
    return ReducedState(
        e1 * r1, e2 * r1,
        p_rad_new * e1 - p_tan_new * e2,
        p_rad_new * e2 + p_tan_new * e1,
    )


def flow_h3(t: float, s: ReducedState, coeffs: SplitCoeffs) -> ReducedState:
    """Rotation at the amplitude-dependent rate -Fp nu_theta f(r^2),
    plus a shear along q fed by the conserved momentum q1 p2 - q2 p1.
    |q| is frozen, so the equations are linear and solve in closed
    form."""
    b = coeffs.Fp * coeffs.nu_theta
    if b == 0.0 or t == 0.0:
        return s
    q1, q2, p1, p2 = s.q1, s.q2, s.p1, s.p2
    x = q1 * q1 + q2 * q2
    g3 = math.sqrt(1.0 - x)
    f = 1.0 / (1.0 + g3)
    fprime = f * f / (2.0 * g3)
    momentum = q1 * p2 - q2 * p1
    shear = 2.0 * b * fprime * momentum * t
    phi = -b * f * t
    c, sn = math.cos(phi), math.sin(phi)
    s1, s2 = p1 + shear * q1, p2 + shear * q2
    return ReducedState(
        c * q1 - sn * q2, sn * q1 + c * q2,
        c * s1 - sn * s2, sn * s1 + c * s2,
    )


def flow_dissipation(t: float, s: ReducedState, coeffs: SplitCoeffs,
                     eps: float) -> ReducedState:
    """Exact flow of the momentum-preserving dissipation field
    pdot = eps(-(q.p) Gamma3 - Fl r^2) q: the component of p along q
    follows a scalar linear law, the orthogonal component and q itself
    are untouched, so q1 p2 - q2 p1 is conserved exactly."""
    if eps == 0.0 or t == 0.0:
        return s
    q1, q2, p1, p2 = s.q1, s.q2, s.p1, s.p2
    r2 = q1 * q1 + q2 * q2
    if r2 == 0.0:
        return s
    g3 = math.sqrt(1.0 - r2)
    a = eps * g3 * r2
    b = eps * coeffs.Fl * r2 * r2
    y0 = q1 * p1 + q2 * p2
    y = (y0 + b / a) * math.exp(-a * t) - b / a
    shift = (y - y0) / r2
    return ReducedState(q1, q2, p1 + shift * q1, p2 + shift * q2)


_STAGES = ("dissipation", "h0", "h3", "h2", "h1", "h2", "h3", "h0",
           "dissipation")


def step(s: ReducedState, cfg: IntegratorConfig,
         coeffs: SplitCoeffs) -> ReducedState:
    """One step of the palindromic composition.  Chart violations from a
    sub-flow are re-raised with the offending stage named."""
    dt = cfg.dt
    half = 0.5 * dt
    plan = (
        ("dissipation", lambda st: flow_dissipation(half, st, coeffs, cfg.eps)),
        ("h0", lambda st: flow_h0(half, st, coeffs)),
        ("h3", lambda st: flow_h3(half, st, coeffs)),
        ("h2", lambda st: flow_h2(half, st, coeffs)),
        ("h1", lambda st: flow_h1(dt, st, coeffs)),
        ("h2", lambda st: flow_h2(half, st, coeffs)),
        ("h3", lambda st: flow_h3(half, st, coeffs)),
        ("h0", lambda st: flow_h0(half, st, coeffs)),
        ("dissipation", lambda st: flow_dissipation(half, st, coeffs, cfg.eps)),
    )
    for name, stage in plan:
        try:
            s = stage(s)
        except ChartDomainError as exc:
            raise ChartDomainError(f"in sub-flow {name}: {exc}") from exc
    return s


def integrate(s0: ReducedState, cfg: IntegratorConfig, coeffs: SplitCoeffs,
              n_steps: int) -> TrajectoryRecord:
    """Iterate step, sampling every cfg.sample_stride steps; the initial
    and final states are always sampled.  Stops early with termination
    'escaped' when r exceeds cfg.r_stop, or 'chart_violation' when a
    sub-flow runs out of the chart or |q| passes cfg.q_max."""
    h0 = reduced_hamiltonian(coeffs.body, coeffs.level, s0)
    times = [0.0]
    states = [s0]
    radii = [s0.r]
    dH = [0.0]
    so2 = [so2_momentum(s0)]
    termination = "completed"
    s = s0
    for k in range(1, n_steps + 1):
        try:
            s = step(s, cfg, coeffs)
        except ChartDomainError:
            termination = "chart_violation"
            if times[-1] != (k - 1) * cfg.dt:
                # flag the last intact state as the final row
                times.append((k - 1) * cfg.dt)
                states.append(s)
                radii.append(s.r)
                dH.append(
                    reduced_hamiltonian(coeffs.body, coeffs.level, s) - h0
                )
                so2.append(so2_momentum(s))
            break
        r = s.r
        if (k % cfg.sample_stride == 0 or r > cfg.r_stop
                or r >= cfg.q_max or k == n_steps):
            times.append(k * cfg.dt)
            states.append(s)
            radii.append(r)
            dH.append(
                reduced_hamiltonian(coeffs.body, coeffs.level, s) - h0
            )
            so2.append(so2_momentum(s))
        if r >= cfg.q_max:
            termination = "chart_violation"
            break
        if r > cfg.r_stop:
            termination = "escaped"
            break
    return TrajectoryRecord(
        times=np.array(times), states=states, r=np.array(radii),
        dH=np.array(dH), so2_momentum=np.array(so2),
        termination=termination,
    )


def rk4_reference(field, s, dt: float):
    """Classical RK4 one-step on any field taking and returning a flat
    state sequence; the oracle integrator for the exact-flow tests."""
    y = np.asarray(s, dtype=float)
    k1 = np.asarray(field(y))
    k2 = np.asarray(field(y + 0.5 * dt * k1))
    k3 = np.asarray(field(y + 0.5 * dt * k2))
    k4 = np.asarray(field(y + dt * k3))
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
