"""The three oscillatory fractional-order plant classes and their responses.

With the pole frequency normalized to unity (b = 1) the classes are

* pseudo-damped:            1 / (s^alpha + b)
* meta-damped, leading 1:   1 / (s^alpha + b)^(1/alpha)
* meta-damped, leading 2:   1 / (s^alpha + b)^(2/alpha)

for alpha strictly inside (1, 2).  Responses are generated sample by sample
from the inverse-Laplace series in `specfun`; the per-sample reliability flags
roll up into a `reliable_up_to` horizon.  The series degrade past roughly
30 s (25 s for the leading-order-2 class), which is why response grids are
capped by default.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, TextIO, Union

import numpy as np

from .specfun import SeriesQuery, g_series, mittag_leffler, r_series

__all__ = [
    "SystemClass",
    "FractionalSystem",
    "ExcitationKind",
    "TimeGrid",
    "TimeSeries",
    "HorizonError",
    "DEFAULT_FIT_GRID",
    "fo_response",
    "green_impulse_pseudo",
]


class HorizonError(ValueError):
    """Grid extends past the class's reliable simulation horizon."""


class SystemClass(enum.Enum):
    PSEUDO = "pseudo"
    META_LEAD1 = "meta1"
    META_LEAD2 = "meta2"


# largest t_max accepted without an explicit override
HORIZON_S = {
    SystemClass.PSEUDO: 30.0,
    SystemClass.META_LEAD1: 30.0,
    SystemClass.META_LEAD2: 25.0,
}


@dataclass(frozen=True)
class FractionalSystem:
    """One plant instance: class, base order alpha in (1, 2), pole coefficient b."""

    klass: SystemClass
    alpha: float
    b: float = 1.0

    def __post_init__(self):
        if not (1.0 < self.alpha < 2.0):
            raise ValueError(f"alpha must lie strictly inside (1, 2), got {self.alpha}")
        if not (self.b > 0):
            raise ValueError(f"b must be > 0, got {self.b}")

    @property
    def r(self) -> Optional[float]:
        """Pole multiplicity exponent; None for the simple-pole class."""
        if self.klass is SystemClass.PSEUDO:
            return None
        if self.klass is SystemClass.META_LEAD1:
            return 1.0 / self.alpha
        return 2.0 / self.alpha

    @property
    def leading_order(self) -> float:
        # integral by construction for the meta classes (r = k/alpha)
        if self.klass is SystemClass.PSEUDO:
            return self.alpha
        return 1.0 if self.klass is SystemClass.META_LEAD1 else 2.0


class ExcitationKind(enum.Enum):
    STEP = "step"
    IMPULSE = "impulse"

    @property
    def nu(self) -> float:
        """Laplace numerator power used by the series."""
        return -1.0 if self is ExcitationKind.STEP else 0.0


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid t_i = i*dt covering [0, t_max]."""

    dt: float
    t_max: float

    def __post_init__(self):
        if not (self.dt > 0):
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if not (self.t_max > 0):
            raise ValueError(f"t_max must be > 0, got {self.t_max}")

    @property
    def samples(self) -> int:
        return int(math.floor(self.t_max / self.dt + 1e-9)) + 1

    def times(self) -> np.ndarray:
        return np.arange(self.samples) * self.dt


DEFAULT_FIT_GRID = TimeGrid(dt=0.01, t_max=25.0)


@dataclass(frozen=True)
class TimeSeries:
    """Sampled response with per-sample series diagnostics."""

    grid: TimeGrid
    values: np.ndarray
    sample_reliable: np.ndarray
    reliable_up_to: float

    def __post_init__(self):
        if len(self.values) != self.grid.samples:
            raise ValueError("values length does not match the grid")
        if len(self.sample_reliable) != self.grid.samples:
            raise ValueError("sample_reliable length does not match the grid")

    def write_csv(self, out: TextIO) -> None:
        """CSV rows `t,y` at 9 significant digits, then the reliability horizon."""
        out.write("t,y\n")
        for t, y in zip(self.grid.times(), self.values):
            out.write(f"{t:.9g},{y:.9g}\n")
        out.write(f"# reliable_up_to={self.reliable_up_to:.9g}\n")


def _impulse_start(system: FractionalSystem) -> float:
    # limit of the leading series term at t -> 0+: t^(leading-1)/Gamma(leading)
    return 1.0 if system.leading_order == 1.0 else 0.0


def fo_response(
    system: FractionalSystem,
    excitation: ExcitationKind,
    grid: TimeGrid,
    allow_beyond_horizon: bool = False,
) -> TimeSeries:
    """Step or impulse response of a fractional-order plant on a time grid.

    The t = 0 sample is set analytically (0 for step; the leading-term limit
    for impulse).  Raises `HorizonError` when the grid extends past the
    class's reliable horizon unless `allow_beyond_horizon` is set.
    """
    horizon = HORIZON_S[system.klass]
    if grid.t_max > horizon and not allow_beyond_horizon:
        raise HorizonError(
            f"t_max={grid.t_max} exceeds the {horizon:.0f} s horizon for "
            f"{system.klass.value}; pass allow_beyond_horizon=True to force"
        )

    ts = grid.times()
    values = np.empty(len(ts))
    reliable = np.ones(len(ts), dtype=bool)
    values[0] = 0.0 if excitation is ExcitationKind.STEP else _impulse_start(system)

    nu = excitation.nu
    r = system.r
    a = -system.b
    for i in range(1, len(ts)):
        q = SeriesQuery(alpha=system.alpha, nu=nu, a=a, t=float(ts[i]), r=r)
        res = r_series(q) if r is None else g_series(q)
        values[i] = res.value
        reliable[i] = res.reliable

    if reliable.all():
        reliable_up_to = float(ts[-1])
    else:
        first_bad = int(np.argmin(reliable))
        reliable_up_to = float(ts[first_bad - 1]) if first_bad > 0 else 0.0
    return TimeSeries(grid=grid, values=values, sample_reliable=reliable,
                      reliable_up_to=reliable_up_to)


def green_impulse_pseudo(alpha: float, a_coef: float, b_coef: float, t: float) -> float:
    """Impulse response of 1/(a s^alpha + b): (1/a) t^(alpha-1) E_{alpha,alpha}(-(b/a) t^alpha).

    Independent of the series route used by `fo_response`; serves as a
    cross-check for the simple-pole class.
    """
    if not (a_coef > 0) or not (b_coef > 0):
        raise ValueError("a_coef and b_coef must be > 0")
    if not (t > 0):
        raise ValueError("t must be > 0")
    z = -(b_coef / a_coef) * math.pow(t, alpha)
    ml = mittag_leffler(alpha, alpha, z)
    return math.pow(t, alpha - 1.0) * ml.value / a_coef
