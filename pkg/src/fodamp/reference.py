"""Reference results that the `reproduce` workflows regenerate and check.

Two kinds of targets per system class: genetic-algorithm fits (J_min, tau,
xi at each fractional order, under both ISE and ITSE) and the neural
predictor's (tau, xi) table with its best-of-25 training MSE.  The ITSE
columns double as the canonical training datasets for the predictor.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fosystems import SystemClass
from .neuralpredictor import Dataset
from .refmodel import FitCriterion

__all__ = [
    "RefFit",
    "GA_RESULTS",
    "PREDICTOR_MIN_MSE",
    "PREDICTOR_RESULTS",
    "TABLE_CLASSES",
    "CANONICAL_ALPHAS",
    "itse_dataset",
]

CANONICAL_ALPHAS = (1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9)

# reproduce --table N for N in 1..3 maps to these classes
TABLE_CLASSES = {
    1: SystemClass.PSEUDO,
    2: SystemClass.META_LEAD1,
    3: SystemClass.META_LEAD2,
}


@dataclass(frozen=True)
class RefFit:
    alpha: float
    j_min: float
    tau: float
    xi: float


def _rows(raw) -> tuple[RefFit, ...]:
    return tuple(RefFit(*row) for row in raw)


GA_RESULTS: dict[tuple[SystemClass, FitCriterion], tuple[RefFit, ...]] = {
    (SystemClass.PSEUDO, FitCriterion.ISE): _rows([
        (1.1, 0.0054, 0.3485, 1.3152),
        (1.2, 0.0168, 0.5246, 0.8094),
        (1.3, 0.0287, 0.6587, 0.596),
        (1.4, 0.0379, 0.7634, 0.4672),
        (1.5, 0.0429, 0.8432, 0.374),
        (1.6, 0.0429, 0.9029, 0.2965),
        (1.7, 0.0378, 0.9463, 0.2247),
        (1.8, 0.0277, 0.976, 0.1527),
        (1.9, 0.0127, 0.993, 0.0771),
    ]),
    (SystemClass.PSEUDO, FitCriterion.ITSE): _rows([
        (1.1, 0.0235, 0.47, 0.9848),
        (1.2, 0.0647, 0.6467, 0.6887),
        (1.3, 0.0979, 0.7659, 0.5537),
        (1.4, 0.1153, 0.8457, 0.4635),
        (1.5, 0.1176, 0.8998, 0.3878),
        (1.6, 0.1085, 0.9374, 0.3146),
        (1.7, 0.0927, 0.9647, 0.239),
        (1.8, 0.074, 0.9837, 0.1597),
        (1.9, 0.0448, 0.9947, 0.0786),
    ]),
    (SystemClass.META_LEAD1, FitCriterion.ISE): _rows([
        (1.1, 0.0057, 0.3463, 1.1946),
        (1.2, 0.0147, 0.342, 1.067),
        (1.3, 0.0273, 0.4182, 0.7884),
        (1.4, 0.0415, 0.4793, 0.6322),
        (1.5, 0.0571, 0.5317, 0.5308),
        (1.6, 0.0748, 0.5996, 0.4393),
        (1.7, 0.097, 0.6597, 0.3708),
        (1.8, 0.13, 0.7233, 0.3086),
        (1.9, 0.1996, 0.7959, 0.2422),
    ]),
    (SystemClass.META_LEAD1, FitCriterion.ITSE): _rows([
        (1.1, 0.02, 0.4006, 1.0538),
        (1.2, 0.0512, 0.4933, 0.7747),
        (1.3, 0.0769, 0.5761, 0.6247),
        (1.4, 0.0956, 0.6399, 0.5336),
        (1.5, 0.1105, 0.6906, 0.4667),
        (1.6, 0.1271, 0.7352, 0.4091),
        (1.7, 0.1568, 0.7784, 0.3529),
        (1.8, 0.2382, 0.8253, 0.2913),
        (1.9, 0.5806, 0.8828, 0.2131),
    ]),
    (SystemClass.META_LEAD2, FitCriterion.ISE): _rows([
        (1.1, 0.005, 1.0426, 0.7299),
        (1.2, 0.0138, 1.0499, 0.574),
        (1.3, 0.0215, 1.0452, 0.4668),
        (1.4, 0.0266, 1.0362, 0.3845),
        (1.5, 0.0291, 1.0263, 0.3153),
        (1.6, 0.029, 1.0171, 0.2529),
        (1.7, 0.0266, 1.0094, 0.1931),
        (1.8, 0.0217, 1.0042, 0.1325),
        (1.9, 0.0119, 1.0012, 0.0679),
    ]),
    (SystemClass.META_LEAD2, FitCriterion.ITSE): _rows([
        (1.1, 0.0462, 1.0837, 0.712),
        (1.2, 0.1053, 1.0939, 0.5732),
        (1.3, 0.1359, 1.0809, 0.4809),
        (1.4, 0.1407, 1.0609, 0.4066),
        (1.5, 0.1315, 1.0409, 0.3395),
        (1.6, 0.117, 1.0241, 0.2741),
        (1.7, 0.1038, 1.012, 0.2083),
        (1.8, 0.0935, 1.0047, 0.1405),
        (1.9, 0.0657, 1.0012, 0.0701),
    ]),
}

# best-of-25 training MSE of the 1x5 logsig predictor, per class
PREDICTOR_MIN_MSE: dict[SystemClass, float] = {
    SystemClass.PSEUDO: 6.1938e-4,
    SystemClass.META_LEAD1: 9.6422e-5,
    SystemClass.META_LEAD2: 1.4428e-5,
}

# predicted (alpha, tau, xi) of that model, per class
PREDICTOR_RESULTS: dict[SystemClass, tuple[tuple[float, float, float], ...]] = {
    SystemClass.PSEUDO: (
        (1.1, 0.469965, 0.984699),
        (1.2, 0.69043, 0.673145),
        (1.3, 0.760275, 0.595913),
        (1.4, 0.819033, 0.531421),
        (1.5, 0.898188, 0.387535),
        (1.6, 0.937233, 0.314444),
        (1.7, 0.966328, 0.242967),
        (1.8, 1.009048, 0.130724),
        (1.9, 0.986992, 0.061456),
    ),
    SystemClass.META_LEAD1: (
        (1.1, 0.400597, 1.053798),
        (1.2, 0.495297, 0.751861),
        (1.3, 0.576102, 0.624702),
        (1.4, 0.639898, 0.5336),
        (1.5, 0.688546, 0.46988),
        (1.6, 0.7352, 0.4091),
        (1.7, 0.779042, 0.350727),
        (1.8, 0.8253, 0.2913),
        (1.9, 0.916861, 0.207589),
    ),
    SystemClass.META_LEAD2: (
        (1.1, 1.091173, 0.707394),
        (1.2, 1.088813, 0.573404),
        (1.3, 1.076325, 0.4878),
        (1.4, 1.062211, 0.402436),
        (1.5, 1.040513, 0.339679),
        (1.6, 1.019453, 0.278533),
        (1.7, 1.012378, 0.208497),
        (1.8, 1.006116, 0.13578),
        (1.9, 1.002982, 0.070353),
    ),
}


def itse_dataset(klass: SystemClass) -> Dataset:
    """Canonical predictor training data: the class's ITSE (alpha, tau, xi) rows."""
    rows = GA_RESULTS[(klass, FitCriterion.ITSE)]
    return Dataset.from_rows(
        [(r.alpha, r.tau, r.xi) for r in rows],
        provenance=f"{klass.value}/itse",
    )
