"""Monte Carlo studies of size and power on the two canned four-part scenarios.

Scenario 1 compares Dir(0.148, 0.222, 0.296, 0.333) with the mixture 0.3 Dir(0.889, 1.333, 1.778, 2.000) +
0.7 Dir(1.481, 2.222, 2.963, 3.333); under the alternative the single Dirichlet is moved by
(-d/3, -d/3, -d/3, +d). Scenario 2 compares a logistic normal with 0.3 Dir(0.483, 0.249, 0.163, 0.105) +
0.7 Dir(3.381, 1.743, 1.141, 0.735); under the alternative the mixture is moved by (+d, -d/3, -d/3, -d/3).

Shifted Dirichlet populations keep their precision (sum of parameters) and only move their mean.

Repetition r of grid point g draws its samples from the streams (seed, g, r, 0) and (seed, g, r, 1); the bootstrap
of the k-th requested test branches from (seed, g, r, 2 + k). Results therefore do not depend on the worker count.
"""

from __future__ import annotations

import logging
import math
import time
from collections.abc import Mapping
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, ClassVar, Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from compmean.bootstrap import BootstrapConfig
from compmean.compositional import Composition, helmert_transform
from compmean.config import get_alpha, get_reps, get_seed, get_threads
from compmean.distributions import (
    DirichletMixture,
    DirichletParams,
    LogisticNormalParams,
    RngStream,
    sample_dirichlet,
    sample_dirichlet_mixture,
    sample_logistic_normal,
)
from compmean.errors import CompmeanError, CompositionError
from compmean.procedures import check_pair, label, run_test

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import NDArray

    from compmean.compositional import CompositionalSample

logger = logging.getLogger(__name__)

Population = DirichletParams | DirichletMixture | LogisticNormalParams
StudyKind = Literal["type1", "power"]

SCENARIO_1_DIRICHLET = (0.148, 0.222, 0.296, 0.333)
SCENARIO_1_MIXTURE = ((0.3, (0.889, 1.333, 1.778, 2.000)), (0.7, (1.481, 2.222, 2.963, 3.333)))
SCENARIO_2_MU = (1.548, 0.747, -0.052)
SCENARIO_2_SIGMA = (
    (0.083, 0.185, -0.169),
    (0.185, 0.547, -0.671),
    (-0.169, -0.671, 1.110),
)
SCENARIO_2_MIXTURE = ((0.3, (0.483, 0.249, 0.163, 0.105)), (0.7, (3.381, 1.743, 1.141, 0.735)))

DEFAULT_DELTA_GRID: tuple[float, ...] = tuple(round(0.03 * k, 2) for k in range(-7, 8) if k != 0)
_Z_95 = 1.96
_Z_99 = 2.576

ReferenceRates = Mapping[tuple[str, str, float], float]


def mc_confidence_interval(p: float, reps: int) -> tuple[float, float]:
    """95% Monte Carlo interval p +- 1.96 sqrt(p (1 - p) / reps) for a rejection probability."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"Probability must lie in (0, 1), got {p}")
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    half = _Z_95 * math.sqrt(p * (1.0 - p) / reps)
    return p - half, p + half


def mc_agreement(rate: float, reps: int, reference: float, reference_reps: int, z: float = _Z_99) -> bool:
    """Whether two independent Monte Carlo rejection rates differ by no more than z combined standard errors."""
    if reps < 1 or reference_reps < 1:
        raise ValueError(f"Repetition counts must be >= 1, got {reps} and {reference_reps}")
    variance = rate * (1.0 - rate) / reps + reference * (1.0 - reference) / reference_reps
    return abs(rate - reference) <= z * math.sqrt(variance)


def _interval_around(p: float, reps: int) -> tuple[float, float]:
    if p in (0.0, 1.0):
        return p, p
    return mc_confidence_interval(p, reps)


def shift_mean(mu: Composition, delta: float, scenario_id: int) -> Composition:
    """Move a four-part mean along the scenario's direction: one part by +delta, the other three by -delta/3."""
    if mu.D != 4:
        raise CompositionError(f"Scenario shifts are defined for 4-part compositions, got D = {mu.D}")
    target = {1: 3, 2: 0}.get(scenario_id)
    if target is None:
        raise ValueError(f"Unknown scenario {scenario_id}; choose 1 or 2")
    direction = np.full(4, -delta / 3.0)
    direction[target] = delta
    shifted = mu.values + direction
    if np.any(shifted <= 0.0) or np.any(shifted >= 1.0):
        raise CompositionError(f"Shift delta={delta:g} moves the mean {shifted.tolist()} outside the open simplex")
    return Composition(shifted / math.fsum(shifted))


def _shift_dirichlet(params: DirichletParams, delta: float, scenario_id: int) -> DirichletParams:
    mean = shift_mean(Composition(params.mean()), delta, scenario_id)
    return DirichletParams(params.precision * mean.values)


def _mixture(spec: tuple[tuple[float, tuple[float, ...]], ...]) -> DirichletMixture:
    return DirichletMixture([w for w, _ in spec], tuple(DirichletParams(alpha) for _, alpha in spec))


@dataclass(frozen=True)
class ScenarioConfig:
    scenario_id: int
    n1: int
    n2: int
    delta: float = 0.0

    def __post_init__(self) -> None:
        if self.scenario_id not in (1, 2):
            raise ValueError(f"Unknown scenario {self.scenario_id}; choose 1 or 2")
        if self.n1 < 2 or self.n2 < 2:
            raise ValueError(f"Sample sizes must be >= 2, got n1={self.n1}, n2={self.n2}")

    def with_delta(self, delta: float) -> ScenarioConfig:
        return ScenarioConfig(self.scenario_id, self.n1, self.n2, delta)


@dataclass(frozen=True)
class Sampler:
    population: Population
    n: int

    def draw(self, rng: RngStream) -> CompositionalSample:
        if isinstance(self.population, DirichletParams):
            return sample_dirichlet(self.population, self.n, rng)
        if isinstance(self.population, DirichletMixture):
            return sample_dirichlet_mixture(self.population, self.n, rng)
        return sample_logistic_normal(self.population, self.n, rng)


def scenario_populations(cfg: ScenarioConfig) -> tuple[Sampler, Sampler]:
    """Samplers for both populations of a scenario, the shifted one already moved by ``cfg.delta``."""
    if cfg.scenario_id == 1:
        first: Population = _shift_dirichlet(DirichletParams(SCENARIO_1_DIRICHLET), cfg.delta, 1)
        second: Population = _mixture(SCENARIO_1_MIXTURE)
    else:
        first = LogisticNormalParams(SCENARIO_2_MU, SCENARIO_2_SIGMA)
        mixture = _mixture(SCENARIO_2_MIXTURE)
        if cfg.delta != 0.0:
            mixture = DirichletMixture(
                mixture.weights, tuple(_shift_dirichlet(c, cfg.delta, 2) for c in mixture.components)
            )
        second = mixture
    return Sampler(first, cfg.n1), Sampler(second, cfg.n2)


def population_mean(population: Population, rng: RngStream | None = None, draws: int = 1_000_000) -> NDArray:
    """Mean on the simplex; the logistic normal has no closed form and is estimated from ``draws`` samples."""
    if isinstance(population, (DirichletParams, DirichletMixture)):
        return population.mean()
    stream = rng if rng is not None else RngStream(get_seed())
    return sample_logistic_normal(population, draws, stream).data.mean(axis=0)


def requires_heavy(test: str, calibration: str) -> bool:
    """Bootstrap-calibrated likelihood tests re-solve an optimisation per replicate."""
    return test in ("el", "eel") and calibration == "bootstrap"


class CellResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    test: str
    calibration: str
    label: str
    scenario: int
    delta: float
    n1: int
    n2: int
    reps: int
    B: int | None
    seed: int
    successes: int
    rejections: int
    failures: int
    rate: float | None
    reference: float | None
    ci_low: float | None
    ci_high: float | None
    within_ci: bool | None


class StudyReport(BaseModel):
    kind: StudyKind
    scenario: int
    alpha: float
    reps: int
    seed: int
    B: int | None
    n1: int
    n2: int
    deltas: list[float]
    cells: list[CellResult] = Field(default_factory=list)
    runtime_seconds: float | None = None

    COLUMNS: ClassVar[tuple[str, ...]] = (
        "test",
        "calibration",
        "label",
        "scenario",
        "delta",
        "n1",
        "n2",
        "reps",
        "B",
        "seed",
        "successes",
        "rejections",
        "failures",
        "rate",
        "reference",
        "ci_low",
        "ci_high",
        "within_ci",
    )

    def to_frame(self) -> pd.DataFrame:
        rows = [cell.model_dump() for cell in self.cells]
        return pd.DataFrame(rows, columns=list(self.COLUMNS))

    def write_csv(self, path: str | Path) -> None:
        self.to_frame().to_csv(path, index=False, encoding="utf-8", lineterminator="\n", float_format="%.10g")

    def write_json(self, path: str | Path, include_runtime: bool = False) -> None:
        exclude = None if include_runtime else {"runtime_seconds"}
        text = self.model_dump_json(indent=2, exclude=exclude)
        Path(path).write_text(text + "\n", encoding="utf-8", newline="\n")

    def power_series(self) -> dict[str, pd.DataFrame]:
        """Two-column (delta, power) series per test label, sorted by delta."""
        frame = self.to_frame()
        return {
            name: group[["delta", "rate"]].rename(columns={"rate": "power"}).sort_values("delta").reset_index(drop=True)
            for name, group in frame.groupby("label", sort=False)
        }

    def write_series(self, directory: str | Path) -> list[Path]:
        """One two-column CSV per (test, calibration), named after both."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        written = []
        pairs = dict.fromkeys((cell.test, cell.calibration) for cell in self.cells)
        series = self.power_series()
        for test, calibration in pairs:
            path = directory / f"power_{test}_{calibration}.csv"
            series[label(test, calibration)].to_csv(
                path, index=False, encoding="utf-8", lineterminator="\n", float_format="%.10g"
            )
            written.append(path)
        return written

    def summary_table(self) -> str:
        """Rejection rates with tests as rows and shifts as columns; '*' marks cells outside the nominal interval."""
        if not self.cells:
            return "(no cells)"
        deltas = sorted({cell.delta for cell in self.cells})
        header = f"Scenario {self.scenario}, n1={self.n1}, n2={self.n2}, reps={self.reps}"
        if self.B is not None:
            header += f", B={self.B}"
        by_label: dict[str, dict[float, CellResult]] = {}
        for cell in self.cells:
            by_label.setdefault(cell.label, {})[cell.delta] = cell
        width = max(len(name) for name in by_label) + 2
        lines = [header, "".ljust(width) + "".join(f"{d:>9.2f}" for d in deltas)]
        for name, row in by_label.items():
            texts = []
            for d in deltas:
                cell = row.get(d)
                if cell is None or cell.rate is None:
                    texts.append("-".rjust(8) + " ")
                else:
                    texts.append(f"{cell.rate:8.3f}" + ("*" if cell.within_ci is False else " "))
            lines.append(name.ljust(width) + "".join(texts))
        return "\n".join(lines)


@dataclass(frozen=True)
class _RepTask:
    cfg: ScenarioConfig
    pairs: tuple[tuple[str, str], ...]
    alpha: float
    master_seed: int
    grid_index: int
    rep: int
    bootstrap: BootstrapConfig | None


def _run_rep(task: _RepTask) -> list[bool | None]:
    """Rejection decision per requested test for one repetition; None where the test could not be computed."""
    sampler1, sampler2 = scenario_populations(task.cfg)
    stream = RngStream(task.master_seed, (task.grid_index, task.rep))
    y1 = helmert_transform(sampler1.draw(stream.substream(0)))
    y2 = helmert_transform(sampler2.draw(stream.substream(1)))
    decisions: list[bool | None] = []
    for k, (test, calibration) in enumerate(task.pairs):
        boot = None
        if task.bootstrap is not None:
            boot = task.bootstrap.with_stream(task.grid_index, task.rep, 2 + k)
        try:
            decisions.append(run_test(test, y1, y2, calibration, boot).reject(task.alpha))
        except CompmeanError as e:
            logger.debug("Repetition %d of %s(%s) failed: %s", task.rep, test, calibration, e)
            decisions.append(None)
    return decisions


def _cell(
    test: str,
    calibration: str,
    cfg: ScenarioConfig,
    reps: int,
    decisions: Sequence[bool | None],
    alpha: float,
    seed: int,
    B: int | None,
    reference: float | None = None,
) -> CellResult:
    """Size cells are judged against the interval around alpha, power cells against the one around ``reference``."""
    successes = sum(1 for x in decisions if x is not None)
    rejections = sum(1 for x in decisions if x)
    rate = rejections / successes if successes else None
    ci_low = ci_high = None
    within = None
    target = alpha if cfg.delta == 0.0 else reference
    if target is not None and successes:
        ci_low, ci_high = _interval_around(target, successes)
        within = bool(ci_low <= rate <= ci_high)
    elif rate is not None and 0.0 < rate < 1.0:
        ci_low, ci_high = mc_confidence_interval(rate, successes)
    return CellResult(
        test=test,
        calibration=calibration,
        label=label(test, calibration),
        scenario=cfg.scenario_id,
        delta=cfg.delta,
        n1=cfg.n1,
        n2=cfg.n2,
        reps=reps,
        B=B if calibration == "bootstrap" else None,
        seed=seed,
        successes=successes,
        rejections=rejections,
        failures=reps - successes,
        rate=rate,
        reference=target,
        ci_low=ci_low,
        ci_high=ci_high,
        within_ci=within,
    )


def _check_references(
    references: ReferenceRates, pairs: Sequence[tuple[str, str]], deltas: Sequence[float]
) -> dict[tuple[str, str, float], float]:
    checked = {}
    for (test, calibration, delta), value in references.items():
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"Reference rate for {label(test, calibration)} at delta={delta:g} must lie in [0, 1]")
        if (test, calibration) not in pairs or float(delta) not in deltas:
            logger.warning("Reference for %s at delta=%g matches no cell", label(test, calibration), delta)
        checked[(test, calibration, float(delta))] = float(value)
    return checked


def _run_grid(
    kind: StudyKind,
    cfg: ScenarioConfig,
    tests: Sequence[tuple[str, str]],
    deltas: Sequence[float],
    reps: int | None,
    cfg_boot: BootstrapConfig | None,
    master_seed: int | None,
    alpha: float | None,
    threads: int | None,
    references: ReferenceRates | None = None,
) -> StudyReport:
    reps = get_reps(reps)
    seed = get_seed(master_seed)
    alpha = get_alpha(alpha)
    workers = get_threads(threads)
    pairs = tuple(check_pair(test, calibration) for test, calibration in tests)
    if not pairs:
        raise ValueError("At least one (test, calibration) pair is required")
    needs_bootstrap = any(calibration == "bootstrap" for _, calibration in pairs)
    if needs_bootstrap and cfg_boot is None:
        cfg_boot = BootstrapConfig.from_config(seed=seed)
    # Repetitions are the parallel unit; each bootstrap inside one runs serially.
    boot = cfg_boot.with_stream(max_parallelism=1) if cfg_boot is not None else None
    B = boot.B if boot is not None and needs_bootstrap else None
    refs = _check_references(references or {}, pairs, deltas)

    started = time.perf_counter()
    cells: list[CellResult] = []
    for g, delta in enumerate(deltas):
        point = cfg.with_delta(float(delta))
        scenario_populations(point)  # invalid shifts fail before any work is scheduled
        tasks = [_RepTask(point, pairs, alpha, seed, g, r, boot) for r in range(reps)]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                outcomes = list(executor.map(_run_rep, tasks, chunksize=max(1, reps // (4 * workers))))
        else:
            outcomes = [_run_rep(task) for task in tasks]
        for k, (test, calibration) in enumerate(pairs):
            decisions = [o[k] for o in outcomes]
            reference = refs.get((test, calibration, point.delta))
            cell = _cell(test, calibration, point, reps, decisions, alpha, seed, B, reference)
            logger.info("%s delta=%+.2f: rate %s over %d successes", cell.label, delta, cell.rate, cell.successes)
            cells.append(cell)
    runtime = time.perf_counter() - started
    logger.info("%s study on scenario %d finished in %.1f s", kind, cfg.scenario_id, runtime)
    return StudyReport(
        kind=kind,
        scenario=cfg.scenario_id,
        alpha=alpha,
        reps=reps,
        seed=seed,
        B=B,
        n1=cfg.n1,
        n2=cfg.n2,
        deltas=[float(d) for d in deltas],
        cells=cells,
        runtime_seconds=runtime,
    )


def run_type1_study(
    cfg: ScenarioConfig,
    tests: Sequence[tuple[str, str]],
    reps: int | None = None,
    cfg_boot: BootstrapConfig | None = None,
    master_seed: int | None = None,
    alpha: float | None = None,
    threads: int | None = None,
) -> StudyReport:
    """Estimated probability of a Type I error for each (test, calibration), with equal population means."""
    if cfg.delta != 0.0:
        raise ValueError(f"A Type I error study needs delta = 0, got {cfg.delta}")
    return _run_grid("type1", cfg, tests, (0.0,), reps, cfg_boot, master_seed, alpha, threads)


def run_power_study(
    cfg: ScenarioConfig,
    tests: Sequence[tuple[str, str]],
    delta_grid: Sequence[float] = DEFAULT_DELTA_GRID,
    reps: int | None = None,
    cfg_boot: BootstrapConfig | None = None,
    master_seed: int | None = None,
    alpha: float | None = None,
    threads: int | None = None,
    references: ReferenceRates | None = None,
) -> StudyReport:
    """Estimated power for each (test, calibration) at every shift of the grid.

    ``references`` maps (test, calibration, delta) to a known power, e.g. a published value; those cells get
    ``within_ci`` against the Monte Carlo interval around it.
    """
    deltas = [float(d) for d in delta_grid]
    if not deltas:
        raise ValueError("The delta grid is empty")
    if len(set(deltas)) != len(deltas):
        raise ValueError(f"The delta grid has repeated values: {deltas}")
    return _run_grid("power", cfg, tests, deltas, reps, cfg_boot, master_seed, alpha, threads, references)

