"""Analytical per-state gate fidelities and their grid averages.

The expressions are kept in the shape they are usually printed in: a
complex bracket whose real part is the fidelity. No algebra has been done on
them, so a transcription slip shows up against the simulation instead of
being mirrored in both.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

from .channels import ADParams, Channel, PDParams
from .grid import BlochGrid, grid_angles


class MeasurementFactors(NamedTuple):
    """``p(t_i)`` (amplitude damping) or ``L(t_i)`` (dephasing) for i = 1..4."""

    f1: float
    f2: float
    f3: float
    f4: float


def _amplitudes(theta, phi):
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    alpha = np.cos(theta / 2)
    beta = np.exp(1j * phi) * np.sin(theta / 2)
    return alpha, beta


def fm_ad_complex(theta, phi, factors: Sequence[float]):
    p1, p2, p3, p4 = factors
    a, b = _amplitudes(theta, phi)
    bb = np.abs(b) ** 2
    s24 = math.sqrt(p2 * p4)
    s134 = math.sqrt(p1 * p3 * p4)
    return 0.5 * (
        a**2
        * (
            a**2 * (p4 * s24 + 1)
            + 2 * bb * (s24 * (s134 - p4) + s134 + 1)
            + (-(b**2) - np.conj(b) ** 2) * (s24 - 1) * s134
        )
        + bb**2 * (p4 * s24 + 1)
    )


def fm_pd_complex(theta, phi, factors: Sequence[float]):
    L1, L2, L3, L4 = factors
    a, b = _amplitudes(theta, phi)
    bb = np.abs(b) ** 2
    return 0.5 * (
        (L2 * L4 + 1) * (a**4 + bb**2)
        + 2 * a**2 * bb * (L2 * L4 * (L1 * L3 * L4 - 1) + L1 * L3 * L4 + 1)
        + a**2 * L1 * L3 * L4 * (b**2 + np.conj(b) ** 2) * (1 - L2 * L4)
    )


def fm_ad(theta, phi, factors: Sequence[float]):
    """Outcome-averaged fidelity of one input state under amplitude damping."""
    return np.real(fm_ad_complex(theta, phi, factors))


def fm_pd(theta, phi, factors: Sequence[float]):
    """Outcome-averaged fidelity of one input state under dephasing."""
    return np.real(fm_pd_complex(theta, phi, factors))


def fpd_second_measurement(t2: float, tau: float = 30.0) -> float:
    """Approximate dephasing gate fidelity as a function of the second measurement time.

    Valid with the first measurement at pi and the last two at 3pi/2, for
    ``pi <= t2 <= 3pi/2``.
    """
    if not math.pi - 1e-12 <= t2 <= 1.5 * math.pi + 1e-12:
        raise ValueError(f"t2 must lie in [pi, 3pi/2], got {t2}")
    return 0.25 + (0.25 + math.exp(-2 * math.pi / tau) / 8) * (
        1 - math.cos(2 * t2) * math.exp(-(2 * t2 + 3 * math.pi) / (4 * tau))
    )


def measurement_factors(channel: Channel, times: Sequence[float]) -> MeasurementFactors:
    if len(times) != 4:
        raise ValueError("closed forms take four measurement times")
    return MeasurementFactors(*(channel.factor(t) for t in times))


def closed_form_per_state(channel: Channel, times: Sequence[float], theta, phi) -> np.ndarray:
    factors = measurement_factors(channel, times)
    if isinstance(channel, ADParams):
        return fm_ad(theta, phi, factors)
    if isinstance(channel, PDParams):
        return fm_pd(theta, phi, factors)
    raise TypeError(f"unknown channel {channel!r}")


def closed_form_average(channel: Channel, schedule, grid: BlochGrid | None = None) -> float:
    """Grid average of the closed-form fidelity; every pure input carries weight 1."""
    times = getattr(schedule, "times", schedule)
    if any(b < a for a, b in zip(times, times[1:])):
        raise ValueError(f"measurement times must be nondecreasing: {tuple(times)}")
    theta, phi = grid_angles(grid or BlochGrid())
    return float(np.mean(closed_form_per_state(channel, times, theta, phi)))
