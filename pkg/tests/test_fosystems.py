import io
import math

import numpy as np
import pytest

from fodamp.fosystems import (
    DEFAULT_FIT_GRID,
    ExcitationKind,
    FractionalSystem,
    HorizonError,
    SystemClass,
    TimeGrid,
    fo_response,
    green_impulse_pseudo,
)
from fodamp.specfun import SeriesQuery, r_series

# step response of 1/(s^1.5 + 1): t^a E_{a,a+1}(-t^a) in 60-digit arithmetic
PSEUDO_STEP_15 = [
    (0.5, 0.2459511961306430563),
    (1.0, 0.6033706346819119155),
    (2.5, 1.2696687890102939672),
    (5.0, 1.0644473089503670773),
    (10.0, 1.0153005150308931512),
    (17.5, 1.0040240107181053274),
    (25.0, 1.0022595650554803690),
]


def peaks(values):
    """Local maxima of a sampled curve, as (index, value) pairs."""
    out = []
    for i in range(1, len(values) - 1):
        if values[i] > values[i - 1] and values[i] >= values[i + 1]:
            out.append((i, values[i]))
    return out


class TestTypes:
    def test_alpha_domain(self):
        for bad in (1.0, 2.0, 0.5, 2.3):
            with pytest.raises(ValueError):
                FractionalSystem(SystemClass.PSEUDO, bad)

    def test_pole_coefficient_domain(self):
        with pytest.raises(ValueError):
            FractionalSystem(SystemClass.PSEUDO, 1.5, b=0.0)

    def test_multiplicity_exponent(self):
        assert FractionalSystem(SystemClass.PSEUDO, 1.5).r is None
        assert FractionalSystem(SystemClass.META_LEAD1, 1.6).r == pytest.approx(1 / 1.6)
        assert FractionalSystem(SystemClass.META_LEAD2, 1.6).r == pytest.approx(2 / 1.6)

    def test_leading_order(self):
        assert FractionalSystem(SystemClass.META_LEAD1, 1.7).leading_order == pytest.approx(1.0)
        assert FractionalSystem(SystemClass.META_LEAD2, 1.7).leading_order == pytest.approx(2.0)
        assert FractionalSystem(SystemClass.PSEUDO, 1.7).leading_order == 1.7

    def test_grid_sample_count(self):
        assert TimeGrid(0.01, 25.0).samples == 2501
        assert TimeGrid(0.1, 0.3).samples == 4
        assert TimeGrid(1.0, 30.0).samples == 31

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            TimeGrid(0.0, 1.0)
        with pytest.raises(ValueError):
            TimeGrid(0.1, -1.0)


class TestResponses:
    def test_pseudo_step_certified_samples(self):
        fo = fo_response(FractionalSystem(SystemClass.PSEUDO, 1.5), ExcitationKind.STEP,
                         DEFAULT_FIT_GRID)
        ts = fo.grid.times()
        for t_ref, y_ref in PSEUDO_STEP_15:
            i = int(round(t_ref / 0.01))
            assert ts[i] == pytest.approx(t_ref, abs=1e-9)
            assert fo.values[i] == pytest.approx(y_ref, abs=1e-6)

    def test_pseudo_step_damped_oscillation_shape(self):
        fo = fo_response(FractionalSystem(SystemClass.PSEUDO, 1.5), ExcitationKind.STEP,
                         DEFAULT_FIT_GRID)
        ps = peaks(fo.values)
        assert ps[0][1] > 1.0
        overshoots = [abs(v - 1.0) for _, v in ps[:4]]
        assert all(a > b for a, b in zip(overshoots, overshoots[1:]))

    def test_meta2_near_integer_limit(self):
        # alpha just above 1 approaches the repeated real pole, t e^{-t}
        sys_near = FractionalSystem(SystemClass.META_LEAD2, 1.0 + 1e-6)
        fo = fo_response(sys_near, ExcitationKind.IMPULSE, TimeGrid(0.5, 2.0))
        assert fo.values[2] == pytest.approx(math.exp(-1.0), abs=1e-4)

    def test_meta1_impulse_starts_at_unity(self):
        for alpha in (1.1, 1.5, 1.9):
            fo = fo_response(FractionalSystem(SystemClass.META_LEAD1, alpha),
                             ExcitationKind.IMPULSE, TimeGrid(0.01, 1.0))
            assert fo.values[0] == 1.0
            assert fo.values[1] == pytest.approx(1.0, abs=0.02)

    def test_meta2_impulse_starts_at_zero(self):
        for alpha in (1.1, 1.5, 1.9):
            fo = fo_response(FractionalSystem(SystemClass.META_LEAD2, alpha),
                             ExcitationKind.IMPULSE, TimeGrid(0.01, 1.0))
            assert fo.values[0] == 0.0
            assert abs(fo.values[1]) < 0.05

    def test_step_starts_at_zero(self):
        for klass in SystemClass:
            fo = fo_response(FractionalSystem(klass, 1.4), ExcitationKind.STEP,
                             TimeGrid(0.1, 1.0))
            assert fo.values[0] == 0.0

    @pytest.mark.parametrize("klass", list(SystemClass))
    @pytest.mark.parametrize("alpha", [1.1, 1.5, 1.9])
    def test_step_impulse_derivative_consistency(self, klass, alpha):
        # skip the first 0.1 s: the power-law kink at t=0 has unbounded higher
        # derivatives, which breaks the central-difference oracle, not the series
        grid = TimeGrid(1e-3, 5.0)
        step = fo_response(FractionalSystem(klass, alpha), ExcitationKind.STEP, grid)
        imp = fo_response(FractionalSystem(klass, alpha), ExcitationKind.IMPULSE, grid)
        dstep = (step.values[2:] - step.values[:-2]) / (2e-3)
        err = np.abs(dstep - imp.values[1:-1])
        assert np.max(err[99:]) < 1e-3

    @pytest.mark.parametrize("klass", list(SystemClass))
    def test_dc_gain(self, klass):
        for alpha in (1.1, 1.5, 1.9):
            fo = fo_response(FractionalSystem(klass, alpha), ExcitationKind.STEP,
                             DEFAULT_FIT_GRID)
            overshoot = max(abs(v - 1.0) for v in fo.values[1:])
            i_rel = int(round(fo.reliable_up_to / fo.grid.dt))
            assert abs(fo.values[i_rel] - 1.0) < overshoot

    def test_pseudo_overshoot_grows_with_alpha(self):
        overshoots = []
        for alpha in np.arange(1.1, 1.95, 0.1):
            fo = fo_response(FractionalSystem(SystemClass.PSEUDO, round(float(alpha), 9)),
                             ExcitationKind.STEP, DEFAULT_FIT_GRID)
            overshoots.append(float(np.max(fo.values)) - 1.0)
        assert all(a < b for a, b in zip(overshoots, overshoots[1:]))


class TestHorizon:
    def test_meta2_capped_at_25(self):
        with pytest.raises(HorizonError):
            fo_response(FractionalSystem(SystemClass.META_LEAD2, 1.5), ExcitationKind.STEP,
                        TimeGrid(0.5, 26.0))

    def test_pseudo_capped_at_30(self):
        with pytest.raises(HorizonError):
            fo_response(FractionalSystem(SystemClass.PSEUDO, 1.5), ExcitationKind.STEP,
                        TimeGrid(0.5, 31.0))
        fo = fo_response(FractionalSystem(SystemClass.PSEUDO, 1.5), ExcitationKind.STEP,
                         TimeGrid(0.5, 30.0))
        assert fo.reliable_up_to == 30.0

    def test_override_runs_and_flags(self):
        fo = fo_response(FractionalSystem(SystemClass.PSEUDO, 1.5), ExcitationKind.STEP,
                         TimeGrid(0.25, 40.0), allow_beyond_horizon=True)
        assert not fo.sample_reliable.all()
        assert fo.reliable_up_to < 40.0
        assert fo.reliable_up_to >= 25.0  # breakdown starts past the nominal horizon
        first_bad = int(np.argmin(fo.sample_reliable))
        assert fo.reliable_up_to == pytest.approx(fo.grid.times()[first_bad - 1])


class TestGreenFunction:
    def test_integer_order_exponential(self):
        assert green_impulse_pseudo(1.0, 1.0, 1.0, 1.0) == pytest.approx(math.exp(-1), abs=1e-12)

    def test_undamped_sine(self):
        assert green_impulse_pseudo(2.0, 1.0, 1.0, math.pi / 2) == pytest.approx(1.0, abs=1e-9)

    def test_cross_oracle_with_series(self):
        got = green_impulse_pseudo(1.5, 1.0, 1.0, 2.0)
        ref = r_series(SeriesQuery(alpha=1.5, nu=0.0, a=-1.0, t=2.0)).value
        assert got == pytest.approx(ref, abs=1e-6)

    def test_general_coefficients(self):
        # 1/(2 s^1.2 + 3): scale and pole location both exercised
        got = green_impulse_pseudo(1.2, 2.0, 3.0, 1.0)
        ref = r_series(SeriesQuery(alpha=1.2, nu=0.0, a=-1.5, t=1.0)).value / 2.0
        assert got == pytest.approx(ref, abs=1e-9)

    def test_validation(self):
        with pytest.raises(ValueError):
            green_impulse_pseudo(1.5, 0.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            green_impulse_pseudo(1.5, 1.0, 1.0, 0.0)


class TestCsvExport:
    def test_format(self):
        fo = fo_response(FractionalSystem(SystemClass.PSEUDO, 1.5), ExcitationKind.STEP,
                         TimeGrid(0.5, 2.0))
        buf = io.StringIO()
        fo.write_csv(buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "t,y"
        assert len(lines) == 1 + fo.grid.samples + 1
        assert lines[-1] == f"# reliable_up_to={fo.reliable_up_to:.9g}"
        t, y = lines[2].split(",")
        assert float(t) == 0.5
        assert len(y.replace("-", "").replace(".", "").lstrip("0")) <= 10
