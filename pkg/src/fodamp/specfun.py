"""Special functions behind fractional-order time responses.

Everything here is a convergent power series evaluated at a single point:
the two-parameter Mittag-Leffler function

    E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha*k + beta),

and the inverse-Laplace series of s^nu/(s^alpha - a) and s^nu/(s^alpha - a)^r,
whose terms share the shape  C_n * t^e_n / Gamma(g_n)  with exponents stepping
by alpha.  These series are alternating with terms that grow enormously before
they decay, so every result carries truncation and cancellation diagnostics
(`SeriesResult`): once the largest intermediate term exceeds
``BREAKDOWN_THRESHOLD``, double precision retains roughly four significant
digits of the sum and the result is flagged unreliable.

Term evaluation is tiered for accuracy:

* exponents all integral (integer-order degenerations): double-double
  arithmetic with exact factorials, giving near-correctly-rounded sums;
* fractional exponents: direct ``pow``/``gamma`` evaluation (per-term error
  a couple of ulp, which is what the cancellation floor assumes);
* arguments past the overflow range of ``pow``/``gamma``: log-magnitude form
  via ``lgamma`` with the sign tracked separately.

Summation is always compensated (Neumaier), so accumulation adds no error
beyond the terms themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

__all__ = [
    "BREAKDOWN_THRESHOLD",
    "TERM_CAP",
    "TRUNCATION_TOL",
    "DomainError",
    "SeriesResult",
    "SeriesQuery",
    "log_gamma",
    "mittag_leffler",
    "r_series",
    "g_series",
]

BREAKDOWN_THRESHOLD = 1e12
TERM_CAP = 600
TRUNCATION_TOL = 1e-10
_TRUNCATION_STREAK = 3

# limits of the direct / double-double term paths
_GAMMA_DIRECT_MAX = 171.0   # math.gamma overflows just above this
_FACT_DD_MAX = 150          # keeps factorials clear of the Dekker-split range
_DD_MAG_MAX = 1e280
_LOG_EXP_MAX = 700.0


class DomainError(ValueError):
    """Argument outside the mathematical domain of a special function."""


@dataclass(frozen=True)
class SeriesResult:
    """One series evaluation plus its convergence diagnostics.

    ``reliable`` is False when the largest intermediate term exceeded
    ``BREAKDOWN_THRESHOLD`` (catastrophic cancellation) or the term cap was
    reached before the truncation rule fired.
    """

    value: float
    terms_used: int
    max_term_magnitude: float
    reliable: bool


@dataclass(frozen=True)
class SeriesQuery:
    """Point query for the inverse-Laplace series of s^nu/(s^alpha - a)^r.

    ``nu`` is the Laplace numerator power (-1 for step, 0 for impulse
    excitation), ``a`` the pole location parameter, ``r`` the pole
    multiplicity exponent (absent for the simple-pole series).
    """

    alpha: float
    nu: float
    a: float
    t: float
    r: Optional[float] = None

    def __post_init__(self):
        if not (self.alpha > 0):
            raise DomainError(f"alpha must be > 0, got {self.alpha}")
        if not (self.t > 0):
            raise DomainError(f"t must be > 0, got {self.t}")
        if self.r is not None and not (self.r > 0):
            raise DomainError(f"r must be > 0 when present, got {self.r}")


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if math.isnan(x) or x <= 0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


# ---------------------------------------------------------------------------
# double-double primitives (Dekker/Knuth error-free transforms)

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    ca = _SPLITTER * a
    ah = ca - (ca - a)
    al = a - ah
    cb = _SPLITTER * b
    bh = cb - (cb - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_mul(xh: float, xl: float, yh: float, yl: float) -> tuple[float, float]:
    ph, pl = _two_prod(xh, yh)
    pl += xh * yl + xl * yh
    return _two_sum(ph, pl)


def _dd_div(xh: float, xl: float, yh: float, yl: float) -> tuple[float, float]:
    q1 = xh / yh
    ph, pl = _two_prod(q1, yh)
    pl += q1 * yl
    rh = xh - ph
    rl = xl - pl
    return _two_sum(q1, (rh + rl) / yh)


def _dd_ipow(base: float, n: int) -> tuple[float, float]:
    rh, rl = 1.0, 0.0
    bh, bl = base, 0.0
    while n:
        if n & 1:
            rh, rl = _dd_mul(rh, rl, bh, bl)
        n >>= 1
        if n:
            bh, bl = _dd_mul(bh, bl, bh, bl)
    return rh, rl


def _dd_from_int(v: int) -> tuple[float, float]:
    hi = float(v)
    return hi, float(v - int(hi))


# ---------------------------------------------------------------------------
# shared series engine


class _Accumulator:
    """Neumaier-compensated sum with the truncation/breakdown bookkeeping."""

    __slots__ = ("s", "c", "count", "max_mag", "prev_mag", "streak", "overflowed")

    def __init__(self):
        self.s = 0.0
        self.c = 0.0
        self.count = 0
        self.max_mag = 0.0
        self.prev_mag = math.inf
        self.streak = 0
        self.overflowed = False

    def _add_part(self, x: float) -> None:
        t = self.s + x
        if abs(self.s) >= abs(x):
            self.c += (self.s - t) + x
        else:
            self.c += (x - t) + self.s
        self.s = t

    def add(self, hi: float, lo: float = 0.0) -> bool:
        """Add one term; True means the truncation rule has fired."""
        if not math.isfinite(hi):
            self.overflowed = True
            return True
        self._add_part(hi)
        if lo != 0.0:
            self._add_part(lo)
        self.count += 1
        mag = abs(hi)
        if mag > self.max_mag:
            self.max_mag = mag
        if mag < TRUNCATION_TOL and mag <= self.prev_mag:
            self.streak += 1
        else:
            self.streak = 0
        self.prev_mag = mag
        return self.streak >= _TRUNCATION_STREAK

    def result(self) -> SeriesResult:
        converged = self.streak >= _TRUNCATION_STREAK and not self.overflowed
        reliable = converged and self.max_mag <= BREAKDOWN_THRESHOLD
        return SeriesResult(self.s + self.c, max(self.count, 1), self.max_mag, reliable)


def _sum_series(
    t: float,
    e0: float,
    g0: float,
    alpha: float,
    step_coeff: Callable[[int, float, float], tuple[float, float]],
    integral: bool,
) -> SeriesResult:
    """Sum C_n * t^(e0 + n*alpha) / Gamma(g0 + n*alpha) for n >= 0.

    ``step_coeff(n, ch, cl)`` advances the double-double coefficient from term
    n to n+1.  ``integral`` selects the extended-precision path and requires
    e0, g0, alpha to be non-negative integers (as floats).
    """
    acc = _Accumulator()
    log_t = math.log(t)
    ch, cl = 1.0, 0.0
    dd = integral
    if dd:
        ph, pl = _dd_ipow(t, int(e0))
        vh, vl = _dd_ipow(t, int(alpha))

    for n in range(TERM_CAP):
        e = e0 + n * alpha
        g = g0 + n * alpha
        if abs(ch) > _DD_MAG_MAX:
            acc.overflowed = True
            break
        if dd and (g > _FACT_DD_MAX or abs(ph) > _DD_MAG_MAX):
            dd = False
        if dd:
            fh, fl = _dd_from_int(math.factorial(int(g) - 1))
            nh, nl = _dd_mul(ch, cl, ph, pl)
            th, tl = _dd_div(nh, nl, fh, fl)
            done = acc.add(th, tl)
            ph, pl = _dd_mul(ph, pl, vh, vl)
        else:
            term = None
            if g <= _GAMMA_DIRECT_MAX:
                try:
                    term = ch * math.pow(t, e) / math.gamma(g)
                except OverflowError:
                    term = None
            if term is None:
                if ch == 0.0:
                    term = 0.0
                else:
                    lm = math.log(abs(ch)) + e * log_t - math.lgamma(g)
                    if lm > _LOG_EXP_MAX:
                        acc.overflowed = True
                        break
                    term = math.copysign(math.exp(lm), ch)
            done = acc.add(term)
        if done:
            break
        ch, cl = step_coeff(n, ch, cl)
    return acc.result()


# ---------------------------------------------------------------------------
# public series


def mittag_leffler(alpha: float, beta: float, z: float) -> SeriesResult:
    """Two-parameter Mittag-Leffler function E_{alpha,beta}(z).

    Reduces to exp(z) at alpha = beta = 1; E_{2,1}(-t^2) = cos t.
    """
    if not (alpha > 0) or math.isnan(alpha):
        raise DomainError(f"alpha must be > 0, got {alpha}")
    if not (beta > 0) or math.isnan(beta):
        raise DomainError(f"beta must be > 0, got {beta}")

    def step(n: int, ch: float, cl: float) -> tuple[float, float]:
        return _dd_mul(ch, cl, z, 0.0)

    integral = float(alpha).is_integer() and float(beta).is_integer()
    return _sum_series(1.0, 0.0, beta, alpha, step, integral)


def r_series(q: SeriesQuery) -> SeriesResult:
    """Inverse Laplace transform of s^nu/(s^alpha - a) at time t.

        sum_n a^n * t^((n+1)alpha - 1 - nu) / Gamma((n+1)alpha - nu)
    """
    if q.r is not None and q.r != 1:
        raise DomainError("r_series requires r absent (or 1); use g_series")
    if q.alpha - q.nu <= 0:
        raise DomainError("requires alpha - nu > 0 so all gamma arguments are positive")

    def step(n: int, ch: float, cl: float) -> tuple[float, float]:
        return _dd_mul(ch, cl, q.a, 0.0)

    e0 = q.alpha - 1.0 - q.nu
    g0 = q.alpha - q.nu
    integral = (
        float(q.alpha).is_integer()
        and float(q.nu).is_integer()
        and e0 >= 0.0
    )
    return _sum_series(q.t, e0, g0, q.alpha, step, integral)


def _g_coeff_step(r: float, a: float, j: int, ch: float, cl: float) -> tuple[float, float]:
    """Advance the multiple-pole coefficient c_j to c_{j+1} in double-double."""
    k = j + 1
    # (1 - k - r) held in two exact parts
    mh, ml = _two_sum(float(1 - k), -r)
    ch, cl = _dd_mul(ch, cl, mh, ml)
    ch, cl = _dd_mul(ch, cl, -a, 0.0)
    return _dd_div(ch, cl, float(k), 0.0)


def _g_coefficients(r: float, a: float, count: int) -> list[float]:
    """The first `count` coefficients c_j of the multiple-pole series."""
    out = [1.0]
    ch, cl = 1.0, 0.0
    for j in range(count - 1):
        ch, cl = _g_coeff_step(r, a, j, ch, cl)
        out.append(ch + cl)
    return out


def g_series(q: SeriesQuery) -> SeriesResult:
    """Inverse Laplace transform of s^nu/(s^alpha - a)^r at time t.

        sum_j c_j * t^((r+j)alpha - nu - 1) / Gamma((r+j)alpha - nu)

    with c_0 = 1 and c_j = c_{j-1} * (1 - j - r) * (-a) / j, which carries the
    product (-r)(-1-r)...(1-j-r) * (-a)^j / j! of the multiple-pole expansion.
    """
    if q.r is None:
        raise DomainError("g_series requires the pole multiplicity r")
    r = q.r
    if r * q.alpha - q.nu <= 0:
        raise DomainError("requires r*alpha - nu > 0 so all gamma arguments are positive")

    def step(j: int, ch: float, cl: float) -> tuple[float, float]:
        return _g_coeff_step(r, q.a, j, ch, cl)

    e0 = r * q.alpha - q.nu - 1.0
    g0 = r * q.alpha - q.nu
    integral = (
        float(q.alpha).is_integer()
        and float(q.nu).is_integer()
        and float(r).is_integer()
        and e0 >= 0.0
    )
    return _sum_series(q.t, e0, g0, q.alpha, step, integral)
