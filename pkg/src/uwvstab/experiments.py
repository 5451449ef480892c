"""Batch experiment commands and their config/CSV plumbing.

Each cmd_* function takes an ExperimentConfig and returns a result
object carrying both structured rows and ready-to-write CSV text (15
significant digits, header row mandatory); file and figure output stays
in the CLI layer.  Identical configs produce byte-identical CSV.

Run recipes:

* simulate: start at (q1_0, 0, 0, 0) on the momentum level
  nu_a = (nua1_0, 0, Pe), nu_theta = Se, with dt = T_lin/80 where T_lin
  is the linear period 2 pi / max |Im lambda|.
* sweep: same start per Pe with dt = T_lin/40, recording the maximum
  radius over every step.
* continue: Newton iteration for equilibria of the combined
  (conservative + dissipative) reduced field from q = p = 0, with
  central-difference Jacobians and a two-step sign check on the
  spectrum.
* nf-check: period-comparison table for the fixed consolidated
  parameter block (f1, f2, mu) = (sqrt(5)/2, 1, 1/2) along the initial
  ray (0.5, 1.0, -0.75, 0) scaled by each amplitude in the eps list.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from os import cpu_count

import numpy as np
import yaml

from . import _kernel
from .integrator import IntegratorConfig, SplitCoeffs
from .model import BodyParams, validate_params
from .normalform import TwistReport, twist_determinants
from .periods import (NonPeriodicError, angular_momentum, linear_period,
                      match_actions, measure_period, nf_period,
                      relative_energy)
from .reduction import (ConsolidatedParams, MomentumLevel, ReducedState,
                        consolidate_params, derived_coeffs,
                        reduced_field, reduced_hamiltonian)
from .stability import SpectrumReport, StabilityClass, classify, \
    linear_spectrum, thresholds

__all__ = [
    "ConfigError", "ExperimentConfig", "PRESETS", "load_config",
    "build_config", "ClassifyReport", "SimulateResult", "SweepRow",
    "SweepResult", "ContinueRow", "ContinueResult", "NfCheckRow",
    "NfCheckResult", "cmd_classify", "cmd_simulate", "cmd_sweep",
    "cmd_continue", "cmd_nfcheck",
]

CONFIG_KEYS = ("I1", "I3", "M1", "M3", "m", "l", "g", "Se", "Pe", "eps",
               "q1_0", "nua1_0", "periods", "dt_per_period", "seed")

#: Default amplitude column of the period-comparison table.
NF_CHECK_AMPLITUDES = (1e-4, 2e-4, 4e-4, 8e-4, 1.6e-3)

#: Consolidated parameters and initial ray baked into nf-check.
NF_CHECK_PARAMS = ConsolidatedParams(f1=math.sqrt(5.0) / 2.0, f2=1.0, mu=0.5)
NF_CHECK_RAY = (0.5, 1.0, -0.75, 0.0)
NF_CHECK_BASE_STEPS = 4000

#: Target number of CSV rows for simulate (stride picked to hit it).
SAMPLE_TARGET = 2000

_TERMINATION_NAMES = {
    _kernel.COMPLETED: "completed",
    _kernel.ESCAPED: "escaped",
    _kernel.CHART_VIOLATION: "chart_violation",
}

#: Real parts within this band count as zero in the two-step sign check.
SIGN_BAND = 1e-8


class ConfigError(ValueError):
    """Malformed experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved parameters for one experiment run.

    Pe is a scalar or a (min, max, count) grid; eps is a scalar
    dissipation strength for simulate/sweep/continue and an amplitude
    list for nf-check.  dt_per_period None means the per-command default
    (80, or 40 for sweep).  The seed is stored for config round-tripping
    but no current command draws random numbers.
    """

    body: BodyParams
    Se: float = 6.0
    Pe: float | tuple[float, float, int] = 1.5
    eps: float | tuple[float, ...] = 0.0
    q1_0: float = 0.0125
    nua1_0: float = 0.0025
    periods: float = 1e4
    dt_per_period: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        validate_params(self.body)
        if not self.periods > 0:
            raise ConfigError(f"periods must be positive, got {self.periods!r}")
        if self.dt_per_period is not None and self.dt_per_period < 1:
            raise ConfigError(
                f"dt_per_period must be a positive integer, got "
                f"{self.dt_per_period!r}"
            )
        if isinstance(self.Pe, tuple):
            lo, hi, count = self.Pe
            if count < 1:
                raise ConfigError("Pe grid needs at least one point")
            if count > 1 and not hi > lo:
                raise ConfigError("Pe grid needs max > min")
        if isinstance(self.eps, tuple) and not self.eps:
            raise ConfigError("eps list must be nonempty")

    def pe_values(self) -> tuple[float, ...]:
        if isinstance(self.Pe, tuple):
            lo, hi, count = self.Pe
            return tuple(float(v) for v in np.linspace(lo, hi, count))
        return (float(self.Pe),)

    def scalar_pe(self) -> float:
        if isinstance(self.Pe, tuple):
            raise ConfigError("this command needs a scalar Pe, not a grid")
        return float(self.Pe)

    def scalar_eps(self) -> float:
        if isinstance(self.eps, tuple):
            raise ConfigError("this command needs a scalar eps, not a list")
        return float(self.eps)

    def eps_values(self) -> tuple[float, ...]:
        if isinstance(self.eps, tuple):
            return self.eps
        return (float(self.eps),)


_DEFAULTS: dict = {
    "I1": 4.0, "I3": 1.0, "M1": 1.0, "M3": 0.5, "m": 1.0, "l": 1.0,
    "g": 1.0, "Se": 6.0, "Pe": 1.5, "eps": 0.0, "q1_0": 0.0125,
    "nua1_0": 0.0025, "periods": 1e4, "dt_per_period": None, "seed": 0,
}

#: Named profiles mirroring the published experiment setups: the two
#: long dissipation runs, the Pe sweep, and the period table.
PRESETS: dict[str, dict] = {
    "paper-fig1-top": {
        "Pe": 1.5, "eps": 0.05, "q1_0": 0.05, "nua1_0": 0.01,
        "periods": 3e5, "dt_per_period": 80,
    },
    "paper-fig1-bottom": {
        "Pe": 0.5, "eps": 0.1, "q1_0": 0.05 / math.sqrt(2.0),
        "nua1_0": 0.01 / math.sqrt(2.0), "periods": 1.2e6,
        "dt_per_period": 80,
    },
    "paper-fig2": {
        "Pe": [0.8, 2.2, 71], "eps": 0.05, "q1_0": 0.0125,
        "nua1_0": 0.0025, "periods": 1.2e6, "dt_per_period": 40,
    },
    "paper-table1": {
        "eps": list(NF_CHECK_AMPLITUDES),
    },
}


def _check_keys(mapping: dict, source: str) -> None:
    unknown = sorted(set(mapping) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigError(
            f"unknown config key(s) in {source}: {', '.join(unknown)}"
        )


def load_config(path: str) -> dict:
    """Read a YAML config file and validate its key set."""
    with open(path, encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a mapping")
    _check_keys(data, path)
    return data


def _coerce_pe(value) -> float | tuple[float, float, int]:
    if isinstance(value, (list, tuple)):
        if len(value) != 3:
            raise ConfigError(
                f"Pe grid must be [min, max, count], got {value!r}"
            )
        lo, hi, count = value
        if not float(count).is_integer():
            raise ConfigError(f"Pe grid count must be an integer, got {count!r}")
        return (float(lo), float(hi), int(count))
    return float(value)


def _coerce_eps(value) -> float | tuple[float, ...]:
    if isinstance(value, (list, tuple)):
        return tuple(float(v) for v in value)
    return float(value)


def build_config(preset: str | None = None, config_path: str | None = None,
                 overrides: dict | None = None) -> ExperimentConfig:
    """Merge defaults, a named preset, a config file, and overrides.

    Later sources win.  Unknown keys raise ConfigError at every layer.
    """
    merged = dict(_DEFAULTS)
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {preset!r} (have {', '.join(sorted(PRESETS))})"
            )
        merged.update(PRESETS[preset])
    if config_path is not None:
        merged.update(load_config(config_path))
    if overrides:
        _check_keys(overrides, "overrides")
        merged.update(overrides)
    body = BodyParams(
        I1=float(merged["I1"]), I3=float(merged["I3"]),
        M1=float(merged["M1"]), M3=float(merged["M3"]),
        m=float(merged["m"]), l=float(merged["l"]), g=float(merged["g"]),
    )
    dtpp = merged["dt_per_period"]
    return ExperimentConfig(
        body=body,
        Se=float(merged["Se"]),
        Pe=_coerce_pe(merged["Pe"]),
        eps=_coerce_eps(merged["eps"]),
        q1_0=float(merged["q1_0"]),
        nua1_0=float(merged["nua1_0"]),
        periods=float(merged["periods"]),
        dt_per_period=None if dtpp is None else int(dtpp),
        seed=int(merged["seed"]),
    )


def _fmt(x: float) -> str:
    return format(float(x), ".15g")


def _csv(header: str, rows: list[tuple]) -> str:
    lines = [header]
    for row in rows:
        lines.append(",".join("" if v is None else _fmt(v) if
                              isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


def _gyration_period(body: BodyParams, Pe: float, Se: float) -> float:
    """Linear period 2 pi / max |Im lambda| at the vertical equilibrium."""
    spec = linear_spectrum(body, Pe, Se)
    top = max(abs(z.imag) for z in spec.eigenvalues)
    if top == 0.0:
        raise ArithmeticError(
            f"no oscillatory linear mode at Pe={Pe!r}; cannot set dt"
        )
    return 2.0 * math.pi / top


def _level(cfg: ExperimentConfig, Pe: float) -> MomentumLevel:
    return MomentumLevel(nu_a=(cfg.nua1_0, 0.0, Pe), nu_theta=cfg.Se)


def _pool_map(fn, items):
    if len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(len(items),
                                            cpu_count() or 1)) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# classify


@dataclass(frozen=True)
class ClassifyReport:
    """Region classification with thresholds, spectrum, and, inside the
    gap, the twist determinants and the KAM verdict they certify."""

    Pe: float
    Se: float
    C1: float
    C2: float
    region: StabilityClass
    spectrum: SpectrumReport
    twist: TwistReport | None
    verdict: str

    def as_text(self) -> str:
        lines = [
            f"Pe: {_fmt(self.Pe)}",
            f"Se: {_fmt(self.Se)}",
            f"C1: {_fmt(self.C1)}",
            f"C2: {_fmt(self.C2)}",
            f"Pe^2: {_fmt(self.Pe ** 2)}",
            f"region: {self.region.name}",
        ]
        eigs = ", ".join(
            f"{_fmt(z.real)}{z.imag:+.15g}i" for z in self.spectrum.eigenvalues
        )
        lines.append(f"eigenvalues: {eigs}")
        lines.append(f"max_real_part: {_fmt(self.spectrum.max_real_part)}")
        if self.spectrum.frequencies is not None:
            f1, f2 = self.spectrum.frequencies
            lines.append(f"frequencies: {_fmt(f1)}, {_fmt(f2)}")
        if self.twist is not None:
            lines.append(f"D4: {_fmt(self.twist.D4)}")
            lines.append(f"D6: {_fmt(self.twist.D6)}")
            lines.append(f"D8: {_fmt(self.twist.D8)}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines) + "\n"


def cmd_classify(cfg: ExperimentConfig) -> ClassifyReport:
    """Classify (body, Pe, Se), attaching twist data inside the gap."""
    Pe = cfg.scalar_pe()
    C1, C2 = thresholds(cfg.body, cfg.Se)
    region = classify(cfg.body, Pe, cfg.Se)
    spectrum = linear_spectrum(cfg.body, Pe, cfg.Se)
    twist = None
    if region is StabilityClass.EMRegion:
        verdict = "stable (energy-momentum confinement)"
    elif region is StabilityClass.Gap:
        d = derived_coeffs(cfg.body, Pe)
        cp = consolidate_params(d, cfg.Se, cfg.body.mgl)
        twist = twist_determinants(cp)
        if twist.first_nonzero is not None:
            verdict = (
                f"KAM-stable (twist determinant D{2 * twist.first_nonzero}"
                " is nonzero)"
            )
        else:
            verdict = "inconclusive (computed twist determinants all vanish)"
    elif region is StabilityClass.SpectrallyUnstable:
        verdict = "unstable (eigenvalues with positive real part)"
    else:
        verdict = "boundary case (threshold crossing)"
    return ClassifyReport(Pe=Pe, Se=cfg.Se, C1=C1, C2=C2, region=region,
                          spectrum=spectrum, twist=twist, verdict=verdict)


# ---------------------------------------------------------------------------
# simulate


@dataclass(frozen=True)
class SimulateResult:
    """Sampled trajectory columns plus run outcome and CSV text."""

    times: np.ndarray
    q1: np.ndarray
    q2: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    r: np.ndarray
    dH: np.ndarray
    so2_momentum: np.ndarray
    max_r: float
    termination: str
    csv_text: str


SIMULATE_HEADER = "t,q1,q2,p1,p2,r,dH,so2_momentum"


def _run_setup(cfg: ExperimentConfig, Pe: float, steps_per_period: int
               ) -> tuple[MomentumLevel, SplitCoeffs, float, int]:
    level = _level(cfg, Pe)
    coeffs = SplitCoeffs.build(cfg.body, level)
    dt = _gyration_period(cfg.body, Pe, cfg.Se) / steps_per_period
    n_steps = round(cfg.periods * steps_per_period)
    return level, coeffs, dt, n_steps


def cmd_simulate(cfg: ExperimentConfig) -> SimulateResult:
    """Long dissipation run from the standard perturbed start."""
    Pe = cfg.scalar_pe()
    eps = cfg.scalar_eps()
    steps_per_period = cfg.dt_per_period or 80
    level, coeffs, dt, n_steps = _run_setup(cfg, Pe, steps_per_period)
    stride = max(1, n_steps // SAMPLE_TARGET)
    icfg = IntegratorConfig(dt=dt, eps=eps, sample_stride=stride)
    s0 = ReducedState(cfg.q1_0, 0.0, 0.0, 0.0)
    t, q1, q2, p1, p2, max_r, status = _kernel.run_trajectory(
        s0, icfg, coeffs, n_steps
    )
    r = np.hypot(q1, q2)
    so2 = q1 * p2 - q2 * p1
    h0 = reduced_hamiltonian(cfg.body, level, s0)
    dH = np.array([
        reduced_hamiltonian(cfg.body, level,
                            ReducedState(a, b, c, e)) - h0
        for a, b, c, e in zip(q1, q2, p1, p2)
    ])
    rows = [
        (float(t[i]), float(q1[i]), float(q2[i]), float(p1[i]),
         float(p2[i]), float(r[i]), float(dH[i]), float(so2[i]))
        for i in range(len(t))
    ]
    return SimulateResult(
        times=t, q1=q1, q2=q2, p1=p1, p2=p2, r=r, dH=dH, so2_momentum=so2,
        max_r=float(max_r), termination=_TERMINATION_NAMES[status],
        csv_text=_csv(SIMULATE_HEADER, rows),
    )


# ---------------------------------------------------------------------------
# sweep


@dataclass(frozen=True)
class SweepRow:
    """One Pe sample of the long-run radius sweep."""

    Pe: float
    max_r: float
    termination: str
    max_real_part: float
    elapsed: float


@dataclass(frozen=True)
class SweepResult:
    rows: list[SweepRow]
    csv_text: str


SWEEP_HEADER = "Pe,max_r,max_real_part,termination"


def cmd_sweep(cfg: ExperimentConfig) -> SweepResult:
    """Maximum radius over a Pe grid; failed rows are recorded and the
    sweep keeps going."""
    eps = cfg.scalar_eps()
    steps_per_period = cfg.dt_per_period or 40

    def one(Pe: float) -> SweepRow:
        try:
            level, coeffs, dt, n_steps = _run_setup(cfg, Pe, steps_per_period)
            icfg = IntegratorConfig(dt=dt, eps=eps, sample_stride=n_steps)
            s0 = ReducedState(cfg.q1_0, 0.0, 0.0, 0.0)
            t, *_rest, max_r, status = _kernel.run_trajectory(
                s0, icfg, coeffs, n_steps
            )
            return SweepRow(
                Pe=Pe, max_r=float(max_r),
                termination=_TERMINATION_NAMES[status],
                max_real_part=linear_spectrum(cfg.body, Pe,
                                              cfg.Se).max_real_part,
                elapsed=float(t[-1]),
            )
        except Exception:
            return SweepRow(Pe=Pe, max_r=math.nan, termination="failed",
                            max_real_part=math.nan, elapsed=0.0)

    rows = _pool_map(one, list(cfg.pe_values()))
    csv_rows = [(r.Pe, r.max_r, r.max_real_part, r.termination)
                for r in rows]
    return SweepResult(rows=rows, csv_text=_csv(SWEEP_HEADER, csv_rows))


# ---------------------------------------------------------------------------
# continue


@dataclass(frozen=True)
class ContinueRow:
    """Newton-continued equilibrium and its spectrum at one Pe."""

    Pe: float
    state: tuple[float, float, float, float]
    real_parts: tuple[float, float, float, float]
    iterations: int
    status: str


@dataclass(frozen=True)
class ContinueResult:
    rows: list[ContinueRow]
    csv_text: str


CONTINUE_HEADER = "Pe,q1,q2,p1,p2,re1,re2,re3,re4,status"

NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 50
JACOBIAN_STEP = 1e-7
JACOBIAN_CHECK_STEP = 1e-6


def combined_field(body: BodyParams, level: MomentumLevel, eps: float,
                   z: np.ndarray) -> np.ndarray:
    """Reduced Hamiltonian field plus the radial momentum damping."""
    s = ReducedState(float(z[0]), float(z[1]), float(z[2]), float(z[3]))
    dq1, dq2, dp1, dp2 = reduced_field(body, level, s)
    if eps != 0.0:
        r2 = s.q1 ** 2 + s.q2 ** 2
        g3 = math.sqrt(1.0 - r2)
        Fl = body.m * body.l * level.nu_a[2] / body.M1
        factor = eps * (-(s.q1 * s.p1 + s.q2 * s.p2) * g3 - Fl * r2)
        dp1 += factor * s.q1
        dp2 += factor * s.q2
    return np.array([dq1, dq2, dp1, dp2])


def _fd_jacobian(fn, z: np.ndarray, h: float) -> np.ndarray:
    J = np.empty((4, 4))
    for j in range(4):
        zp = z.copy()
        zm = z.copy()
        zp[j] += h
        zm[j] -= h
        J[:, j] = (fn(zp) - fn(zm)) / (2.0 * h)
    return J


def _sign_class(x: float) -> int:
    if x > SIGN_BAND:
        return 1
    if x < -SIGN_BAND:
        return -1
    return 0


def _continue_one(body: BodyParams, level: MomentumLevel, eps: float,
                  Pe: float) -> ContinueRow:
    fn = lambda z: combined_field(body, level, eps, z)
    z = np.zeros(4)
    status = "newton_diverged"
    iterations = NEWTON_MAX_ITER
    for it in range(1, NEWTON_MAX_ITER + 1):
        F = fn(z)
        if np.max(np.abs(F)) <= NEWTON_TOL:
            status = "ok"
            iterations = it
            break
        J = _fd_jacobian(fn, z, JACOBIAN_STEP)
        try:
            dz = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            break
        z = z + dz
        if not np.all(np.isfinite(z)):
            break
    if status != "ok":
        nan4 = (math.nan,) * 4
        return ContinueRow(Pe=Pe, state=nan4, real_parts=nan4,
                           iterations=iterations, status=status)
    eigs = np.linalg.eigvals(_fd_jacobian(fn, z, JACOBIAN_STEP))
    reals = tuple(sorted((float(v.real) for v in eigs), reverse=True))
    check = np.linalg.eigvals(_fd_jacobian(fn, z, JACOBIAN_CHECK_STEP))
    if _sign_class(max(v.real for v in eigs)) != _sign_class(
            max(v.real for v in check)):
        status = "sign_mismatch"
    return ContinueRow(Pe=Pe, state=tuple(float(v) for v in z),
                       real_parts=reals, iterations=iterations,
                       status=status)


def cmd_continue(cfg: ExperimentConfig) -> ContinueResult:
    """Trace the perturbed equilibrium and its spectrum over the Pe grid."""
    eps = cfg.scalar_eps()

    def one(Pe: float) -> ContinueRow:
        return _continue_one(cfg.body, _level(cfg, Pe), eps, Pe)

    rows = _pool_map(one, list(cfg.pe_values()))
    csv_rows = [
        (r.Pe, *r.state, *r.real_parts, r.status) for r in rows
    ]
    return ContinueResult(rows=rows, csv_text=_csv(CONTINUE_HEADER, csv_rows))


# ---------------------------------------------------------------------------
# nf-check


@dataclass(frozen=True)
class NfCheckRow:
    """One amplitude row of the period-comparison table.

    Ratios are against the linear period T0; r-columns hold the observed
    convergence order from the (2 eps, eps) pair and are None when the
    doubled amplitude is not part of the run.
    """

    eps: float
    T_ratio: float
    Tnf4_ratio: float
    r4: float | None
    Tnf6_ratio: float
    r6: float | None
    Tnf8_ratio: float
    r8: float | None


@dataclass(frozen=True)
class NfCheckResult:
    rows: list[NfCheckRow]
    csv_text: str


NF_CHECK_HEADER = "eps,T_ratio,Tnf4_ratio,r4,Tnf6_ratio,r6,Tnf8_ratio,r8"


def _nf_ratios(cp: ConsolidatedParams, amplitude: float
               ) -> tuple[float, float, float, float]:
    """(measured, order-4, order-6, order-8) period ratios at one
    amplitude; the normal-form columns match actions per column so each
    truncation order is evaluated on its own energy-momentum inversion."""
    a1, a2, b1, b2 = NF_CHECK_RAY
    T0 = linear_period(cp)
    T = measure_period(cp, (a1, a2), (b1, b2), amplitude,
                       base_steps=NF_CHECK_BASE_STEPS)
    energy = relative_energy(cp, amplitude * a1, amplitude * a2,
                             amplitude * b1, amplitude * b2)
    momentum = angular_momentum(amplitude * a1, amplitude * a2,
                                amplitude * b1, amplitude * b2)
    out = [T / T0]
    for order in (4, 6, 8):
        w1, w2 = match_actions(cp, energy, momentum, order)
        out.append(nf_period(cp, w1, w2, order) / T0)
    return tuple(out)


def _order_estimate(coarse_err: float, fine_err: float) -> float | None:
    if fine_err == 0.0 or coarse_err == 0.0:
        return None
    return math.log2(abs(coarse_err) / abs(fine_err))


def cmd_nfcheck(cfg: ExperimentConfig) -> NfCheckResult:
    """Period-comparison table over the configured amplitude list."""
    amplitudes = sorted(cfg.eps_values())
    cp = NF_CHECK_PARAMS
    ratio_at = {}
    for a in amplitudes:
        try:
            ratio_at[a] = _nf_ratios(cp, a)
        except (ValueError, NonPeriodicError) as exc:
            raise ValueError(
                f"period check failed at amplitude {a:g} "
                f"(the testbed stays periodic for amplitudes up to a few "
                f"times 1e-3): {exc}"
            ) from exc
    rows = []
    for a in amplitudes:
        T, t4, t6, t8 = ratio_at[a]
        double = next(
            (b for b in amplitudes if math.isclose(b, 2.0 * a, rel_tol=1e-9)),
            None,
        )
        orders: list[float | None] = [None, None, None]
        if double is not None:
            Td, d4, d6, d8 = ratio_at[double]
            orders = [
                _order_estimate(dd - Td, tt - T)
                for dd, tt in ((d4, t4), (d6, t6), (d8, t8))
            ]
        rows.append(NfCheckRow(eps=a, T_ratio=T, Tnf4_ratio=t4, r4=orders[0],
                               Tnf6_ratio=t6, r6=orders[1],
                               Tnf8_ratio=t8, r8=orders[2]))
    csv_rows = [
        (r.eps, r.T_ratio, r.Tnf4_ratio, r.r4, r.Tnf6_ratio, r.r6,
         r.Tnf8_ratio, r.r8)
        for r in rows
    ]
    return NfCheckResult(rows=rows, csv_text=_csv(NF_CHECK_HEADER, csv_rows))
