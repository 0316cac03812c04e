"""Time-indexed single-qubit Kraus pairs for non-Markovian damping.

Both channels are evaluated in one shot from time 0 to ``t``: the map at
time ``t`` is a single Kraus application with ``p(t)`` or ``L(t)``. These
maps are not divisible, so two shorter applications never equal one long
one; nothing in the package composes them.

Amplitude damping (Lorentzian bath, rates ``lam`` and ``gamma0``)::

    p(t) = exp(-lam t) [ (lam/d) sin(d t / 2) + cos(d t / 2) ]^2,
    d = sqrt(2 gamma0 lam - lam^2)

Phase damping (colored noise, coupling ``a``, time scale ``tau``)::

    L(t) = exp(-t / 2 tau) [ sin(u t / 2 tau) / u + cos(u t / 2 tau) ],
    u = sqrt(16 a^2 tau^2 - 1)

Only the oscillatory regimes (real ``d`` and ``u``) are accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .qstate import I2, SIGMA_Z

COMPLETENESS_TOL = 1e-12
_RANGE_SLACK = 1e-12


class KrausPair(NamedTuple):
    e1: np.ndarray
    e2: np.ndarray
    time: float

    def as_array(self) -> np.ndarray:
        return np.stack([self.e1, self.e2])

    def completeness_error(self) -> float:
        s = self.e1.conj().T @ self.e1 + self.e2.conj().T @ self.e2
        return float(np.max(np.abs(s - I2)))


@dataclass(frozen=True)
class ADParams:
    """Amplitude-damping bath: ``lam`` ~ 1/tau_B, ``gamma0`` ~ 1/tau_R."""

    lam: float = 1e-3
    gamma0: float = 10.0

    kind = "ad"

    def __post_init__(self):
        if not (self.lam > 0 and self.gamma0 > 0):
            raise ValueError("lam and gamma0 must be positive")
        if 2 * self.gamma0 * self.lam - self.lam**2 <= 0:
            raise ValueError(
                f"overdamped regime (2*gamma0*lam - lam^2 <= 0) for lam={self.lam}, gamma0={self.gamma0}"
            )

    @property
    def d(self) -> float:
        return math.sqrt(2 * self.gamma0 * self.lam - self.lam**2)

    @property
    def time_unit(self) -> float:
        """pi/d; the peak/valley times are integer multiples of it."""
        return math.pi / self.d

    def factor(self, t: float) -> float:
        return ad_p(t, self)

    def kraus(self, t: float) -> KrausPair:
        return ad_kraus(t, self)

    def code_time(self, code: int) -> float:
        # 1 -> first peak 2pi/d, 2 -> valley 3pi/d, 3 -> second peak 4pi/d
        _check_code(code)
        return (code + 1) * self.time_unit

    def echo(self) -> dict:
        return {"channel": "ad", "lambda": self.lam, "gamma0": self.gamma0}


@dataclass(frozen=True)
class PDParams:
    """Dephasing bath: coupling ``a`` and preferred-frequency time scale ``tau``."""

    a: float = 1.0
    tau: float = 30.0

    kind = "pd"

    def __post_init__(self):
        if not (self.a > 0 and self.tau > 0):
            raise ValueError("a and tau must be positive")
        if 16 * self.a**2 * self.tau**2 - 1 <= 0:
            raise ValueError(f"non-oscillatory regime (16 a^2 tau^2 <= 1) for a={self.a}, tau={self.tau}")

    @property
    def u(self) -> float:
        return math.sqrt(16 * self.a**2 * self.tau**2 - 1)

    @property
    def time_unit(self) -> float:
        return math.pi

    def factor(self, t: float) -> float:
        return pd_L(t, self)

    def kraus(self, t: float) -> KrausPair:
        return pd_kraus(t, self)

    def code_time(self, code: int) -> float:
        # 1 -> pi, 2 -> 3pi/2, 3 -> 2pi
        _check_code(code)
        return (code + 1) * math.pi / 2

    def echo(self) -> dict:
        return {"channel": "pd", "a": self.a, "tau": self.tau}


Channel = Union[ADParams, PDParams]


def _check_code(code: int) -> None:
    if code not in (1, 2, 3):
        raise ValueError(f"measurement-time code must be 1, 2 or 3, got {code!r}")


def _check_time(t: float) -> None:
    if not t >= 0:
        raise ValueError(f"time must be >= 0, got {t!r}")


def ad_p(t: float, params: ADParams) -> float:
    """Excited-state survival factor ``p(t)`` of the amplitude-damping channel."""
    _check_time(t)
    lam, d = params.lam, params.d
    val = math.exp(-lam * t) * (lam / d * math.sin(d * t / 2) + math.cos(d * t / 2)) ** 2
    if val > 1 + _RANGE_SLACK:
        raise ArithmeticError(f"p({t}) = {val} exceeds 1")
    return min(val, 1.0)


def pd_L(t: float, params: PDParams) -> float:
    """Coherence factor ``L(t)`` of the dephasing channel, in [-1, 1]."""
    _check_time(t)
    u, tau = params.u, params.tau
    x = u * t / (2 * tau)
    val = math.exp(-t / (2 * tau)) * (math.sin(x) / u + math.cos(x))
    if abs(val) > 1 + _RANGE_SLACK:
        raise ArithmeticError(f"L({t}) = {val} outside [-1, 1]")
    return max(-1.0, min(val, 1.0))


def ad_kraus_from_p(p: float, t: float = float("nan")) -> KrausPair:
    e1 = np.array([[1, 0], [0, math.sqrt(p)]], dtype=complex)
    e2 = np.array([[0, math.sqrt(1 - p)], [0, 0]], dtype=complex)
    return KrausPair(e1, e2, t)


def pd_kraus_from_L(L: float, t: float = float("nan")) -> KrausPair:
    e1 = math.sqrt((L + 1) / 2) * I2
    e2 = math.sqrt((1 - L) / 2) * SIGMA_Z
    return KrausPair(e1, e2, t)


def ad_kraus(t: float, params: ADParams) -> KrausPair:
    return ad_kraus_from_p(ad_p(t, params), t)


def pd_kraus(t: float, params: PDParams) -> KrausPair:
    return pd_kraus_from_L(pd_L(t, params), t)


def apply_kraus(rho, pair: KrausPair) -> np.ndarray:
    """Apply a single-qubit Kraus pair to a 2x2 density matrix."""
    rho = np.asarray(rho, dtype=complex)
    return sum(e @ rho @ e.conj().T for e in (pair.e1, pair.e2))


def identity_pair(t: float = 0.0) -> KrausPair:
    return KrausPair(I2.copy(), np.zeros((2, 2), dtype=complex), t)
