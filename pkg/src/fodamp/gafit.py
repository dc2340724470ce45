"""Real-coded genetic algorithm fitting (tau, xi) to fractional responses.

The search minimizes the ISE or ITSE mismatch between a precomputed
fractional-order step response and the second-order template, over a box in
(tau, xi).  Operators are the standard real-coded set: tournament selection
of size 2, BLX-0.5 blend crossover, per-gene Gaussian mutation with sigma at
5% of the bound width, one elite individual.  Everything is driven by a
single seeded generator, so results are bit-reproducible.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence, TextIO

import numpy as np

from .fosystems import (
    DEFAULT_FIT_GRID,
    ExcitationKind,
    FractionalSystem,
    SystemClass,
    TimeGrid,
    fo_response,
)
from .refmodel import FitCriterion, SecondOrderParams, error_index

__all__ = [
    "GAConfig",
    "FitResult",
    "UnreliableSeriesError",
    "ga_minimize",
    "fit_system",
    "fit_table",
    "write_fit_csv",
]

log = logging.getLogger(__name__)

Bounds = Sequence[tuple[float, float]]


class UnreliableSeriesError(RuntimeError):
    """The fractional response broke down inside the fitting horizon."""


@dataclass(frozen=True)
class GAConfig:
    population: int = 20
    crossover_fraction: float = 0.8
    mutation_fraction: float = 0.2
    max_generations: int = 150
    stall_generations: int = 30
    stall_tolerance: float = 1e-8
    bounds: tuple[tuple[float, float], ...] = ((0.05, 3.0), (0.01, 2.0))
    seed: int = 42

    def __post_init__(self):
        if self.population < 4:
            raise ValueError("population must be >= 4")
        for name in ("crossover_fraction", "mutation_fraction"):
            f = getattr(self, name)
            if not (0.0 <= f <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {f}")
        for lo, hi in self.bounds:
            if not (lo < hi):
                raise ValueError(f"degenerate bound ({lo}, {hi})")


@dataclass(frozen=True)
class FitResult:
    """One fitted row: the optimal (tau, xi) for a system under one criterion."""

    alpha: float
    klass: SystemClass
    criterion: FitCriterion
    j_min: float
    tau: float
    xi: float
    generations_used: int
    horizon: float


def _guarded(objective: Callable[[np.ndarray], float]) -> Callable[[np.ndarray], float]:
    def run(x: np.ndarray) -> float:
        v = float(objective(x))
        return v if math.isfinite(v) else math.inf

    return run


def ga_minimize(
    objective: Callable[[np.ndarray], float],
    bounds: Bounds,
    config: GAConfig,
) -> tuple[np.ndarray, float, int]:
    """Minimize over a box; returns (best_vector, best_value, generations_used).

    Non-finite objective values are treated as worst fitness rather than
    aborting the run.  Deterministic for a given config.seed.
    """
    rng = np.random.default_rng(config.seed)
    lo = np.array([b[0] for b in bounds], dtype=float)
    hi = np.array([b[1] for b in bounds], dtype=float)
    width = hi - lo
    n, dim = config.population, len(lo)
    f = _guarded(objective)

    pop = lo + rng.random((n, dim)) * width
    fitness = np.array([f(x) for x in pop])
    best_i = int(np.argmin(fitness))
    best_x = pop[best_i].copy()
    best_v = float(fitness[best_i])
    history = [best_v]

    sigma = 0.05 * width
    generations = 0
    for gen in range(1, config.max_generations + 1):
        children = np.empty_like(pop)
        children[0] = best_x  # elite
        for i in range(1, n):
            p1 = _tournament(rng, pop, fitness)
            p2 = _tournament(rng, pop, fitness)
            if rng.random() < config.crossover_fraction:
                c_lo = np.minimum(p1, p2)
                c_hi = np.maximum(p1, p2)
                spread = c_hi - c_lo
                child = rng.uniform(c_lo - 0.5 * spread, c_hi + 0.5 * spread)
            else:
                child = p1.copy()
            mask = rng.random(dim) < config.mutation_fraction
            if mask.any():
                child = child + mask * rng.normal(0.0, sigma)
            children[i] = np.clip(child, lo, hi)

        pop = children
        fitness = np.array([f(x) for x in pop])
        gen_best = int(np.argmin(fitness))
        if fitness[gen_best] < best_v:
            best_v = float(fitness[gen_best])
            best_x = pop[gen_best].copy()
        generations = gen
        assert best_v <= history[-1], "elitism broke best-value monotonicity"
        history.append(best_v)
        if (
            gen >= config.stall_generations
            and history[-1 - config.stall_generations] - best_v < config.stall_tolerance
        ):
            break
    return best_x, best_v, generations


def _tournament(rng: np.random.Generator, pop: np.ndarray, fitness: np.ndarray) -> np.ndarray:
    i, j = rng.integers(0, len(pop), size=2)
    return pop[i] if fitness[i] <= fitness[j] else pop[j]


def fit_system(
    system: FractionalSystem,
    criterion: FitCriterion,
    config: GAConfig | None = None,
    grid: TimeGrid = DEFAULT_FIT_GRID,
) -> FitResult:
    """GA fit of (tau, xi) against one system's step response.

    The fractional response is computed once on the fitting grid and shared
    by every objective evaluation.
    """
    config = config or GAConfig()
    fo = fo_response(system, ExcitationKind.STEP, grid)
    t_end = float(fo.grid.times()[-1])
    if fo.reliable_up_to < t_end:
        raise UnreliableSeriesError(
            f"{system.klass.value} alpha={system.alpha}: series reliable only to "
            f"{fo.reliable_up_to:.2f} s of the {t_end:.2f} s fitting horizon"
        )

    def objective(v: np.ndarray) -> float:
        return error_index(fo, SecondOrderParams(float(v[0]), float(v[1])), criterion)

    best, _, generations = ga_minimize(objective, config.bounds, config)
    tau, xi = float(best[0]), float(best[1])
    j_min = error_index(fo, SecondOrderParams(tau, xi), criterion)
    return FitResult(
        alpha=system.alpha,
        klass=system.klass,
        criterion=criterion,
        j_min=j_min,
        tau=tau,
        xi=xi,
        generations_used=generations,
        horizon=t_end,
    )


def fit_table(
    klass: SystemClass,
    criterion: FitCriterion,
    alphas: Iterable[float],
    config: GAConfig | None = None,
    grid: TimeGrid = DEFAULT_FIT_GRID,
) -> list[FitResult]:
    """One fit per alpha, in alpha order, each row seeded config.seed + row index.

    A failing row is logged and skipped; remaining rows are still computed.
    """
    config = config or GAConfig()
    results: list[FitResult] = []
    for i, alpha in enumerate(sorted(alphas)):
        row_cfg = replace(config, seed=config.seed + i)
        try:
            results.append(fit_system(FractionalSystem(klass, alpha), criterion, row_cfg, grid))
        except (ValueError, UnreliableSeriesError) as exc:
            log.warning("fit row alpha=%s failed: %s", alpha, exc)
    return results


def write_fit_csv(results: Iterable[FitResult], out: TextIO) -> None:
    out.write("alpha,class,criterion,jmin,tau,xi,generations,horizon_s\n")
    for r in results:
        out.write(
            f"{r.alpha:.9g},{r.klass.value},{r.criterion.value},{r.j_min:.9g},"
            f"{r.tau:.9g},{r.xi:.9g},{r.generations_used},{r.horizon:.9g}\n"
        )
