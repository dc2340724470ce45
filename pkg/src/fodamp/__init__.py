"""Oscillatory fractional-order systems: pseudo/meta-damping simulation,
GA-based second-order equivalents, and neural prediction of optimal damping."""

__version__ = "0.1.0"

from .fosystems import (
    DEFAULT_FIT_GRID,
    ExcitationKind,
    FractionalSystem,
    HorizonError,
    SystemClass,
    TimeGrid,
    TimeSeries,
    fo_response,
    green_impulse_pseudo,
)
from .gafit import FitResult, GAConfig, UnreliableSeriesError, fit_system, fit_table, ga_minimize
from .neuralpredictor import (
    Dataset,
    NetworkSpec,
    NetworkWeights,
    TrainingReport,
    forward,
    load_model,
    predict_table,
    save_model,
    sweep,
    train,
)
from .refmodel import FitCriterion, SecondOrderParams, error_index, so_impulse, so_step
from .specfun import (
    DomainError,
    SeriesQuery,
    SeriesResult,
    g_series,
    log_gamma,
    mittag_leffler,
    r_series,
)

__all__ = [
    "__version__",
    "DEFAULT_FIT_GRID",
    "Dataset",
    "DomainError",
    "ExcitationKind",
    "FitCriterion",
    "FitResult",
    "FractionalSystem",
    "GAConfig",
    "HorizonError",
    "NetworkSpec",
    "NetworkWeights",
    "SecondOrderParams",
    "SeriesQuery",
    "SeriesResult",
    "SystemClass",
    "TimeGrid",
    "TimeSeries",
    "TrainingReport",
    "UnreliableSeriesError",
    "error_index",
    "fit_system",
    "fit_table",
    "fo_response",
    "forward",
    "g_series",
    "ga_minimize",
    "green_impulse_pseudo",
    "load_model",
    "log_gamma",
    "mittag_leffler",
    "predict_table",
    "r_series",
    "save_model",
    "so_impulse",
    "so_step",
    "sweep",
    "train",
]
