"""Anharmonic periods of the consolidated oscillator, two ways.

The measured side integrates the consolidated Hamiltonian field in
extended precision (numpy longdouble RK4), tracks the phase angle of the
invariant pair (w3, w4), and reports the time for a full clockwise turn,
Newton-refined at the crossing and Richardson-extrapolated over three
nested meshes.  The normal-form side evaluates the closed-form normal
form of degree 4, 6, or 8 at actions matched to the orbit's energy and
angular momentum; mpmath supplies the working precision there because
the actions are quadratically small in the orbit amplitude.

The two must agree to O(amplitude^order), which is both the point of the
comparison and the basis of the convergence-rate checks.
"""

from __future__ import annotations

import math

import numpy as np
from mpmath import mp

from .normalform import normal_form_terms
from .reduction import ChartDomainError, ConsolidatedParams, Q_MAX

_LD = np.longdouble
_PI = _LD("3.14159265358979323846264338327950288")
_NF_DPS = 40


class NonPeriodicError(RuntimeError):
    """The tracked phase angle failed to complete a clockwise turn."""


class ZeroFrequencyError(ArithmeticError):
    """The normal-form frequency vanishes at the requested actions."""


def angular_momentum(q1: float, q2: float, u1: float, u2: float) -> float:
    """SO(2) momentum q1 u2 - q2 u1 of the consolidated system."""
    return q1 * u2 - q2 * u1


def relative_energy(cp: ConsolidatedParams,
                    q1: float, q2: float, u1: float, u2: float) -> float:
    """Consolidated energy minus its equilibrium value, evaluated in a
    form with no leading-order cancellation (the equilibrium constant is
    never formed, so the result is accurate for tiny amplitudes)."""
    f1, f2, mu = _LD(cp.f1), _LD(cp.f2), _LD(cp.mu)
    s = f1 + f2
    q1, q2, u1, u2 = _LD(q1), _LD(q2), _LD(u1), _LD(u2)
    x = q1 * q1 + q2 * q2
    g3 = np.sqrt(1 - x)
    f = 1 / (1 + g3)
    a1 = u1 + f * q2
    a2 = u2 - f * q1
    qu = q1 * u1 + q2 * u2
    val = (s / 2 * (a1 * a1 - qu * qu + a2 * a2)
           - f1 * f2 / (2 * s) * x - mu / 2 * f * f * x * x)
    return float(val)


def _field(z, f1, f2, mu, s):
    q1, q2, u1, u2 = z
    x = q1 * q1 + q2 * q2
    g3 = np.sqrt(1 - x)
    f = 1 / (1 + g3)
    fp = f * f / (2 * g3)
    a1 = u1 + f * q2
    a2 = u2 - f * q1
    qu = q1 * u1 + q2 * u2
    dq1 = s * (a1 - qu * q1)
    dq2 = s * (a2 - qu * q2)
    hq1 = (s * (a1 * (2 * q1 * q2 * fp) + a2 * (-f - 2 * q1 * q1 * fp)
                - qu * u1)
           - (f1 * f2 / s) * q1 + mu * q1 * (1 - 1 / g3))
    hq2 = (s * (a1 * (f + 2 * q2 * q2 * fp) + a2 * (-2 * q1 * q2 * fp)
                - qu * u2)
           - (f1 * f2 / s) * q2 + mu * q2 * (1 - 1 / g3))
    return np.array([dq1, dq2, -hq1, -hq2], dtype=_LD)


def _rk4(z, h, f1, f2, mu, s):
    k1 = _field(z, f1, f2, mu, s)
    k2 = _field(z + 0.5 * h * k1, f1, f2, mu, s)
    k3 = _field(z + 0.5 * h * k2, f1, f2, mu, s)
    k4 = _field(z + h * k3, f1, f2, mu, s)
    return z + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)


def _normal_modes(z, s, d):
    """(Q1, P1, Q2, P2) from (q1, q2, u1, u2)."""
    q1, q2, u1, u2 = z
    a = q1 / (2 * s)
    b = q2 / (2 * s)
    c = u1 / d
    e = u2 / d
    return (a - e) / 2, (b + c) / 2, (b - c) / 2, (a + e) / 2


def _w34(z, s, d):
    Q1, P1, Q2, P2 = _normal_modes(z, s, d)
    r2 = np.sqrt(_LD(2))
    return (Q1 * Q2 - P1 * P2) / r2, (Q1 * P2 + Q2 * P1) / r2


def _theta_dot(z, f1, f2, mu, s, d):
    """d/dt of atan2(w4, w3) along the flow, by the chain rule (a finite
    difference underflows at the amplitudes this module works at)."""
    zdot = _field(z, f1, f2, mu, s)
    Q1, P1, Q2, P2 = _normal_modes(z, s, d)
    dQ1, dP1, dQ2, dP2 = _normal_modes(zdot, s, d)
    r2 = np.sqrt(_LD(2))
    w3 = (Q1 * Q2 - P1 * P2) / r2
    w4 = (Q1 * P2 + Q2 * P1) / r2
    dw3 = (dQ1 * Q2 + Q1 * dQ2 - dP1 * P2 - P1 * dP2) / r2
    dw4 = (dQ1 * P2 + Q1 * dP2 + dQ2 * P1 + Q2 * dP1) / r2
    return (w3 * dw4 - w4 * dw3) / (w3 * w3 + w4 * w4)


def _wrap(dth):
    while dth > _PI:
        dth -= 2 * _PI
    while dth < -_PI:
        dth += 2 * _PI
    return dth


def _crossing_time(z0, f1, f2, mu, steps_per_turn):
    """Time for the (w3, w4) angle to advance by -2*pi on one mesh."""
    s = f1 + f2
    d = f1 - f2
    T0 = 2 * _PI / (4 * d * d * s)
    h = T0 / _LD(steps_per_turn)
    z = z0.copy()
    w3, w4 = _w34(z, s, d)
    th_prev = np.arctan2(w4, w3)
    acc = _LD(0)
    t = _LD(0)
    for _ in range(int(steps_per_turn) * 3):
        zn = _rk4(z, h, f1, f2, mu, s)
        w3, w4 = _w34(zn, s, d)
        th = np.arctan2(w4, w3)
        dth = _wrap(th - th_prev)
        if acc + dth <= -2 * _PI:
            delta = h * (-2 * _PI - acc) / dth
            for _ in range(60):
                zc = _rk4(z, delta, f1, f2, mu, s)
                w3c, w4c = _w34(zc, s, d)
                residual = acc + _wrap(np.arctan2(w4c, w3c) - th_prev) + 2 * _PI
                step = -residual / _theta_dot(zc, f1, f2, mu, s, d)
                delta += step
                if abs(step) < _LD(1e-25) * T0:
                    break
            return t + delta
        acc += dth
        if acc > _PI:
            raise NonPeriodicError(
                "phase angle of (w3, w4) is advancing counterclockwise; "
                "no clockwise turn to time"
            )
        th_prev = th
        z = zn
        t += h
    raise NonPeriodicError(
        "phase angle of (w3, w4) did not complete a turn within three "
        "nominal periods"
    )


def measure_period(cp: ConsolidatedParams, q0: tuple[float, float],
                   u0: tuple[float, float], epsilon: float,
                   base_steps: int = 2000) -> float:
    """Measured anharmonic period of the orbit of the consolidated
    Hamiltonian through epsilon * (q0, u0).

    Integrates with fixed-step RK4 at T0/base_steps and two refinements
    (half and quarter step), Newton-refines the angle crossing on each
    mesh, and Richardson-extrapolates the order-4 and order-5 error
    terms away.  Relative accuracy is ~1e-10 or better at the default
    mesh for amplitudes up to a few times 1e-3.
    """
    scaled_r2 = (epsilon * q0[0]) ** 2 + (epsilon * q0[1]) ** 2
    if scaled_r2 >= Q_MAX * Q_MAX:
        raise ChartDomainError(
            f"|epsilon * q0| = {math.sqrt(scaled_r2)!r} exceeds the "
            f"chart guard {Q_MAX}"
        )
    f1, f2, mu = _LD(cp.f1), _LD(cp.f2), _LD(cp.mu)
    eps = _LD(epsilon)
    z0 = np.array([eps * _LD(q0[0]), eps * _LD(q0[1]),
                   eps * _LD(u0[0]), eps * _LD(u0[1])], dtype=_LD)
    meshes = (base_steps, 2 * base_steps, 4 * base_steps)
    T = [_crossing_time(z0, f1, f2, mu, n) for n in meshes]
    R1 = [(16 * T[i + 1] - T[i]) / 15 for i in range(2)]
    return float((32 * R1[1] - R1[0]) / 31)


def linear_period(cp: ConsolidatedParams) -> float:
    """T0 = 2*pi / (omega1 - omega2), the zero-amplitude limit."""
    d = cp.f1 - cp.f2
    s = cp.f1 + cp.f2
    return float(2 * _PI / (4 * _LD(d) * _LD(d) * _LD(s)))


def _nf_gradient_sum(cp: ConsolidatedParams, w1, w2, order: int):
    """Hnf and d/dw1 + d/dw2 at (w1, w2), in mpmath arithmetic."""
    terms = normal_form_terms(mp.mpf(cp.f1), mp.mpf(cp.f2), mp.mpf(cp.mu),
                              order)
    h = mp.mpf(0)
    g = mp.mpf(0)
    for (i, j), c in terms.items():
        h += c * w1 ** i * w2 ** j
        if i:
            g += c * i * w1 ** (i - 1) * w2 ** j
        if j:
            g += c * j * w1 ** i * w2 ** (j - 1)
    return h, g


def nf_period(cp: ConsolidatedParams, w1: float, w2: float,
              order: int) -> float:
    """Normal-form period 2*pi / |dHnf/dw1 + dHnf/dw2| at the actions
    (w1, w2), using the normal form through the given phase-space order
    (4, 6, or 8).  At w1 = w2 = 0 this is the linear period T0."""
    if order not in (4, 6, 8):
        raise ValueError(f"order must be 4, 6, or 8, got {order}")
    if w1 < 0 or w2 < 0:
        raise ValueError(f"actions must be nonnegative, got ({w1}, {w2})")
    with mp.workdps(_NF_DPS):
        _, g = _nf_gradient_sum(cp, mp.mpf(w1), mp.mpf(w2), order)
        if g == 0:
            raise ZeroFrequencyError(
                f"normal-form frequency vanishes at ({w1}, {w2})"
            )
        return float(2 * mp.pi / abs(g))


def match_actions(cp: ConsolidatedParams, energy: float, momentum: float,
                  order: int) -> tuple[float, float]:
    """Actions (w1, w2) with Hnf(w1, w2) = energy on the momentum line
    w2 - w1 = momentum / kappa, by Newton from the linear-order seed.

    This is how a measured orbit's (energy, momentum) pair is mapped to
    the arguments of nf_period for a like-for-like comparison.
    """
    if order not in (4, 6, 8):
        raise ValueError(f"order must be 4, 6, or 8, got {order}")
    with mp.workdps(_NF_DPS):
        f1, f2 = mp.mpf(cp.f1), mp.mpf(cp.f2)
        s, d = f1 + f2, f1 - f2
        kappa = 4 * d * s
        om1, om2 = kappa * f1, kappa * f2
        E = mp.mpf(energy)
        shift = mp.mpf(momentum) / kappa
        w1 = (E + om2 * shift) / (om1 - om2)
        for _ in range(80):
            w2 = w1 + shift
            h, g = _nf_gradient_sum(cp, w1, w2, order)
            if g == 0:
                raise ZeroFrequencyError(
                    f"normal-form frequency vanishes at ({w1}, {w2})"
                )
            step = -(h - E) / g
            w1 += step
            if abs(step) < mp.mpf("1e-34") + mp.mpf("1e-30") * abs(w1):
                break
        else:
            raise ArithmeticError("action matching did not converge")
        return float(w1), float(w1 + shift)
