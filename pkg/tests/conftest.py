"""Shared fixtures and helpers for the test suite."""

from __future__ import annotations

import math

import numpy as np
import pytest

from uwvstab.model import NUMERIC_BODY, BodyParams
from uwvstab.reduction import MomentumLevel, ReducedState


@pytest.fixture
def body() -> BodyParams:
    return NUMERIC_BODY


@pytest.fixture
def vertical_level() -> MomentumLevel:
    return MomentumLevel(nu_a=(0.0, 0.0, 1.5), nu_theta=6.0)


@pytest.fixture
def general_level() -> MomentumLevel:
    return MomentumLevel(nu_a=(0.0025, 0.0, 1.5), nu_theta=6.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


def random_state(rng: np.random.Generator, q_scale: float = 0.4,
                 p_scale: float = 0.5) -> ReducedState:
    while True:
        q1, q2 = rng.uniform(-q_scale, q_scale, 2)
        if q1 * q1 + q2 * q2 < 0.8:
            break
    p1, p2 = rng.uniform(-p_scale, p_scale, 2)
    return ReducedState(q1, q2, p1, p2)


def rotate_state(s: ReducedState, angle: float) -> ReducedState:
    c, sn = math.cos(angle), math.sin(angle)
    return ReducedState(
        c * s.q1 - sn * s.q2, sn * s.q1 + c * s.q2,
        c * s.p1 - sn * s.p2, sn * s.p1 + c * s.p2,
    )
