"""Headless matplotlib rendering for the report commands.

One function per CSV-producing command; each takes the command's result
object and writes a PNG next to the delimited output.  The Agg backend
is forced so rendering works without a display.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .experiments import (ContinueResult, NfCheckResult, SimulateResult,
                          SweepResult)

__all__ = ["plot_simulate", "plot_sweep", "plot_continue", "plot_nfcheck"]

_DPI = 130


def _save(fig, path: str) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def plot_simulate(result: SimulateResult, path: str) -> None:
    """Radius history of one run."""
    fig, ax = plt.subplots(figsize=(7.0, 3.2))
    ax.plot(result.times, result.r, lw=0.7)
    ax.set_xlabel("t")
    ax.set_ylabel("r")
    ax.set_title(f"termination: {result.termination}, "
                 f"max r = {result.max_r:.3g}")
    _save(fig, path)


def plot_sweep(result: SweepResult, path: str) -> None:
    """Maximum radius against Pe."""
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    pe = [row.Pe for row in result.rows]
    ax.plot(pe, [row.max_r for row in result.rows], ".-", ms=4, lw=0.8)
    ax.set_xlabel("Pe")
    ax.set_ylabel("max r")
    _save(fig, path)


def plot_continue(result: ContinueResult, path: str) -> None:
    """Spectrum real parts along the continuation."""
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    for row in result.rows:
        ax.plot([row.Pe] * len(row.real_parts), row.real_parts, "k.", ms=4)
    ax.axhline(0.0, color="0.7", lw=0.7)
    ax.set_xlabel("Pe")
    ax.set_ylabel("Re lambda")
    _save(fig, path)


def plot_nfcheck(result: NfCheckResult, path: str) -> None:
    """Per-order period error against amplitude, log-log."""
    fig, ax = plt.subplots(figsize=(5.4, 4.0))
    eps = [row.eps for row in result.rows]
    for label, pick in (("order 4", lambda r: r.Tnf4_ratio),
                        ("order 6", lambda r: r.Tnf6_ratio),
                        ("order 8", lambda r: r.Tnf8_ratio)):
        err = [abs(pick(r) - r.T_ratio) for r in result.rows]
        ax.loglog(eps, err, ".-", ms=5, lw=0.8, label=label)
    ax.set_xlabel("amplitude")
    ax.set_ylabel("|period ratio error|")
    ax.legend()
    _save(fig, path)
