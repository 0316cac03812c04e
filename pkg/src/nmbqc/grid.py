"""Sets of input states covering the Bloch sphere."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cluster import InputState

SCHEMES = ("angles", "sphere")


@dataclass(frozen=True)
class BlochGrid:
    """``theta_count x phi_count`` inputs.

    ``angles``: theta evenly spaced on [0, pi] including both ends, phi evenly
    spaced on [0, 2pi) excluding 2pi. The default 101 x 100 grid holds 10100
    states.

    ``sphere``: the same number of points laid on a Fibonacci spiral, which
    gives approximately equal area per point.
    """

    theta_count: int = 101
    phi_count: int = 100
    scheme: str = "angles"

    def __post_init__(self):
        if self.theta_count < 1 or self.phi_count < 1:
            raise ValueError("grid counts must be >= 1")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")

    @property
    def size(self) -> int:
        return self.theta_count * self.phi_count

    def echo(self) -> dict:
        return {"theta_count": self.theta_count, "phi_count": self.phi_count, "scheme": self.scheme}


def grid_angles(grid: BlochGrid) -> tuple[np.ndarray, np.ndarray]:
    """Flat ``(theta, phi)`` arrays, theta-major for the angle scheme."""
    if grid.scheme == "angles":
        theta = np.linspace(0.0, math.pi, grid.theta_count)
        phi = 2 * math.pi * np.arange(grid.phi_count) / grid.phi_count
        th, ph = np.meshgrid(theta, phi, indexing="ij")
        return th.ravel(), ph.ravel()
    n = grid.size
    k = np.arange(n) + 0.5
    theta = np.arccos(np.clip(1 - 2 * k / n, -1.0, 1.0))
    phi = np.mod(math.pi * (1 + math.sqrt(5)) * k, 2 * math.pi)
    return theta, phi


def grid_kets(grid: BlochGrid) -> np.ndarray:
    theta, phi = grid_angles(grid)
    return np.stack([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)], axis=1)


def bloch_states(grid: BlochGrid) -> list[InputState]:
    theta, phi = grid_angles(grid)
    return [InputState(float(t), float(p)) for t, p in zip(theta, phi)]
