"""Closed-form second-order template and the ISE/ITSE fitting objectives.

The template is tau^2 y'' + 2 tau xi y' + y = u with natural frequency
omega = 1/tau.  Step and impulse responses are evaluated in closed form for
any damping ratio xi > 0: the classic damped-sinusoid expressions below
critical damping, and a numerically stable two-real-pole form at and above it
(the poles are p = (-xi +- sqrt(xi^2 - 1))/tau; near-coincident poles use a
short series in the pole gap to avoid cancellation).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

import numpy as np

if TYPE_CHECKING:
    from .fosystems import TimeSeries

__all__ = ["SecondOrderParams", "FitCriterion", "so_step", "so_impulse", "error_index"]

_trapezoid = getattr(np, "trapezoid", None) or np.trapz

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class SecondOrderParams:
    """Time constant tau and damping ratio xi of the second-order template."""

    tau: float
    xi: float

    def __post_init__(self):
        if not (self.tau > 0):
            raise ValueError(f"tau must be > 0, got {self.tau}")
        if not (self.xi > 0):
            raise ValueError(f"xi must be > 0, got {self.xi}")

    @property
    def omega(self) -> float:
        return 1.0 / self.tau


class FitCriterion(enum.Enum):
    ISE = "ise"
    ITSE = "itse"


# pole-gap * t below this uses the series form of sinh(d t)/d and cosh(d t)
_SMALL_GAP = 1e-5


def _check_t(t: ArrayLike) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be >= 0")
    return t


def so_step(p: SecondOrderParams, t: ArrayLike) -> ArrayLike:
    """Unit-step response y(t) of the template, y(0) = 0, y(inf) = 1."""
    t = _check_t(t)
    w = p.omega
    xi = p.xi
    if xi < 1.0:
        wd = w * math.sqrt(1.0 - xi * xi)
        phi = math.atan2(math.sqrt(1.0 - xi * xi), xi)
        y = 1.0 - np.exp(-xi * w * t) / math.sqrt(1.0 - xi * xi) * np.sin(wd * t + phi)
    else:
        m = -xi * w
        d = math.sqrt(xi * xi - 1.0) * w
        if d * float(np.max(t, initial=0.0)) < _SMALL_GAP:
            dt2 = (d * t) ** 2
            sinhc = t * (1.0 + dt2 / 6.0 + dt2 * dt2 / 120.0)
            cosh = 1.0 + dt2 / 2.0 + dt2 * dt2 / 24.0
            y = 1.0 + np.exp(m * t) * (m * sinhc - cosh)
        else:
            # e^{mt} sinh(dt) and e^{mt} cosh(dt) via the two (negative) poles
            ep1 = np.exp((m + d) * t)
            ep2 = np.exp((m - d) * t)
            y = 1.0 + m * (ep1 - ep2) / (2.0 * d) - (ep1 + ep2) / 2.0
    return float(y) if np.ndim(y) == 0 else y


def so_impulse(p: SecondOrderParams, t: ArrayLike) -> ArrayLike:
    """Unit-impulse response of the template; the derivative of so_step."""
    t = _check_t(t)
    w = p.omega
    xi = p.xi
    if xi < 1.0:
        wd = w * math.sqrt(1.0 - xi * xi)
        y = w * np.exp(-xi * w * t) / math.sqrt(1.0 - xi * xi) * np.sin(wd * t)
    else:
        m = -xi * w
        d = math.sqrt(xi * xi - 1.0) * w
        if d * float(np.max(t, initial=0.0)) < _SMALL_GAP:
            dt2 = (d * t) ** 2
            y = w * w * np.exp(m * t) * t * (1.0 + dt2 / 6.0 + dt2 * dt2 / 120.0)
        else:
            ep1 = np.exp((m + d) * t)
            ep2 = np.exp((m - d) * t)
            y = w * w * (ep1 - ep2) / (2.0 * d)
    return float(y) if np.ndim(y) == 0 else y


def error_index(fo: "TimeSeries", p: SecondOrderParams, c: FitCriterion) -> float:
    """ISE or ITSE between a step-response series and the template's step.

    Trapezoidal quadrature of e^2(t) (ISE) or t*e^2(t) (ITSE) on the series'
    own grid, e(t) being the pointwise response mismatch.
    """
    ts = fo.grid.times()
    if len(ts) < 2:
        raise ValueError("error_index needs a series with at least two samples")
    if len(fo.values) != len(ts):
        raise ValueError("series values do not match its grid")
    e2 = (np.asarray(fo.values) - so_step(p, ts)) ** 2
    if c is FitCriterion.ITSE:
        e2 = ts * e2
    return float(_trapezoid(e2, ts))
