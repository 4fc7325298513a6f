"""Command line interface: ``compmean test``, ``compmean simulate`` and ``compmean power``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import TYPE_CHECKING, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from compmean.bootstrap import BootstrapConfig
from compmean.compositional import helmert_transform, load_sample
from compmean.config import get_alpha, get_bootstrap_replicates, get_reps, get_seed, get_threads
from compmean.errors import CompmeanError, ConvexHullError, InvalidDimensionError
from compmean.procedures import label, parse_test_spec, run_test
from compmean.simulation import (
    DEFAULT_DELTA_GRID,
    ScenarioConfig,
    StudyReport,
    requires_heavy,
    run_power_study,
    run_type1_study,
)

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1

HEAVY_DEFAULT_REPS = 200
_HULL_HINT = "use james, or hotelling/james with bootstrap calibration, which do not need the hull condition"

Command = Literal["test", "simulate", "power"]


class RunConfig(BaseModel):
    """Everything one CLI invocation needs, after defaults from pyproject.toml are applied."""

    model_config = ConfigDict(frozen=True)

    command: Command
    tests: list[tuple[str, str]]
    B: int = Field(ge=1)
    reps: int = Field(ge=1)
    seed: int = Field(ge=0)
    alpha: float = Field(gt=0.0, lt=1.0)
    threads: int = Field(ge=1)
    inputs: list[Path] = Field(default_factory=list)
    output: Path | None = None
    json_output: Path | None = None
    series_dir: Path | None = None
    scenario: int | None = None
    n1: int | None = None
    n2: int | None = None
    delta_grid: list[float] = Field(default_factory=lambda: list(DEFAULT_DELTA_GRID))
    heavy: bool = False
    header: bool | None = None

    @field_validator("tests")
    @classmethod
    def _known_pairs(cls, value: list[tuple[str, str]]) -> list[tuple[str, str]]:
        if not value:
            raise ValueError("at least one test is required")
        return [parse_test_spec(f"{test}:{calibration}") for test, calibration in value]

    @model_validator(mode="after")
    def _command_arguments(self) -> RunConfig:
        if self.command == "test" and len(self.inputs) != 2:
            raise ValueError("the test command needs exactly two input files")
        if self.command != "test":
            if self.scenario not in (1, 2):
                raise ValueError("--scenario must be 1 or 2")
            if self.n1 is None or self.n2 is None or min(self.n1, self.n2) < 2:
                raise ValueError("sample sizes must be >= 2")
            heavy = [f"{t}:{c}" for t, c in self.tests if requires_heavy(t, c)]
            if heavy and not self.heavy:
                raise ValueError(f"{', '.join(heavy)} re-solve an optimisation per bootstrap replicate; pass --heavy")
        return self

    def bootstrap_config(self) -> BootstrapConfig:
        return BootstrapConfig.from_config(B=self.B, seed=self.seed, max_parallelism=self.threads)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _delta_grid(text: str) -> list[float]:
    if text.strip().lower() == "default":
        return list(DEFAULT_DELTA_GRID)
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'default' or comma-separated numbers, got {text!r}") from None


def _tests(text: str) -> list[tuple[str, str]]:
    try:
        return [parse_test_spec(part) for part in text.split(",") if part.strip()]
    except CompmeanError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="compmean",
        description="Two-sample mean tests for compositional data.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for solver detail")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--tests",
        type=_tests,
        help="comma-separated test[:calibration] list, e.g. hotelling:f,james:bootstrap,el:chi2",
    )
    common.add_argument("-B", "--bootstraps", dest="B", type=_positive_int, help="bootstrap replicates (default 299)")
    common.add_argument("--seed", type=int, help="master seed (default: $COMPMEAN_SEED or pyproject.toml)")
    common.add_argument("--alpha", type=float, help="significance level (default 0.05)")
    common.add_argument("--threads", type=_positive_int, help="worker cap; results do not depend on it")
    common.add_argument("--json", dest="json_output", type=Path, help="also write a JSON report here")

    test = sub.add_parser("test", parents=[common], help="test two CSV files of compositions")
    test.add_argument("file1", type=Path)
    test.add_argument("file2", type=Path)
    test.add_argument(
        "--header",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="first CSV line is (--header) or is not (--no-header) a row of part names; guessed when omitted",
    )

    for name, help_text in (("simulate", "Type I error study"), ("power", "power study over a grid of shifts")):
        study = sub.add_parser(name, parents=[common], help=help_text)
        study.add_argument("--scenario", type=int, choices=(1, 2), required=True)
        study.add_argument("--n", type=_positive_int, help="common sample size")
        study.add_argument("--n1", type=_positive_int)
        study.add_argument("--n2", type=_positive_int)
        study.add_argument("--reps", type=_positive_int, help="Monte Carlo repetitions (default 1000)")
        study.add_argument("--heavy", action="store_true", help="allow EL/EEL with bootstrap calibration")
        study.add_argument("-o", "--output", type=Path, help="report CSV")
        if name == "power":
            study.add_argument("--delta-grid", type=_delta_grid, default=list(DEFAULT_DELTA_GRID))
            study.add_argument("--series-dir", type=Path, help="write one delta/power CSV per test here")
    return parser


_DEFAULT_TESTS = {
    "test": [("hotelling", "f"), ("james", "corrected-chi2")],
    "simulate": [("hotelling", "f"), ("james", "corrected-chi2"), ("james", "f")],
    "power": [("hotelling", "bootstrap"), ("james", "bootstrap")],
}


def make_run_config(args: argparse.Namespace) -> RunConfig:
    """Merge parsed arguments with configuration defaults."""
    tests = args.tests or _DEFAULT_TESTS[args.command]
    heavy = bool(getattr(args, "heavy", False))
    reps = getattr(args, "reps", None)
    if reps is None and heavy and any(requires_heavy(t, c) for t, c in tests):
        reps = HEAVY_DEFAULT_REPS
    n1 = getattr(args, "n1", None) or getattr(args, "n", None)
    n2 = getattr(args, "n2", None) or getattr(args, "n", None)
    return RunConfig(
        command=args.command,
        tests=tests,
        B=get_bootstrap_replicates(args.B),
        reps=get_reps(reps),
        seed=get_seed(args.seed),
        alpha=get_alpha(args.alpha),
        threads=get_threads(args.threads),
        inputs=[args.file1, args.file2] if args.command == "test" else [],
        output=getattr(args, "output", None),
        json_output=args.json_output,
        series_dir=getattr(args, "series_dir", None),
        scenario=getattr(args, "scenario", None),
        n1=n1,
        n2=n2,
        delta_grid=getattr(args, "delta_grid", list(DEFAULT_DELTA_GRID)),
        heavy=heavy,
        header=getattr(args, "header", None),
    )


def _json_default(value: object) -> object:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def _error_record(test: str, calibration: str, error: CompmeanError, cfg: RunConfig) -> dict[str, object]:
    record: dict[str, object] = {
        "test": test,
        "calibration": calibration,
        "label": label(test, calibration),
        "error": type(error).__name__,
        "message": str(error),
        "seed": cfg.seed,
    }
    if isinstance(error, ConvexHullError):
        record["hint"] = _HULL_HINT
    return record


def cmd_test(cfg: RunConfig) -> int:
    """Run every requested test; one test failing does not stop the others or the JSON report."""
    file1, file2 = cfg.inputs
    sample1, sample2 = load_sample(file1, header=cfg.header), load_sample(file2, header=cfg.header)
    if sample1.D != sample2.D:
        raise InvalidDimensionError(f"{file1} has {sample1.D} parts but {file2} has {sample2.D}")
    y1, y2 = helmert_transform(sample1), helmert_transform(sample2)
    boot = cfg.bootstrap_config()

    records: list[dict[str, object]] = []
    failed = 0
    print(f"n1={sample1.n}  n2={sample2.n}  D={sample1.D}  alpha={cfg.alpha:g}")
    for test, calibration in cfg.tests:
        try:
            result = run_test(test, y1, y2, calibration, boot)
        except CompmeanError as e:
            failed += 1
            logger.warning("%s failed: %s", label(test, calibration), e)
            record = _error_record(test, calibration, e, cfg)
            print(f"{record['label']:<24} error: {e}")
            if "hint" in record:
                print(f"    hint: {record['hint']}")
            records.append(record)
            continue
        decision = "reject" if result.reject(cfg.alpha) else "do not reject"
        print(f"{result.label:<24} statistic={result.statistic:.6g}  p-value={result.p_value:.6g}  {decision}")
        for key, value in sorted(result.diagnostics.items()):
            print(f"    {key}: {value}")
        records.append(
            {
                "test": result.test,
                "calibration": result.calibration,
                "label": result.label,
                "statistic": result.statistic,
                "p_value": result.p_value,
                "reject": result.reject(cfg.alpha),
                "n1": result.n1,
                "n2": result.n2,
                "B": cfg.B if calibration == "bootstrap" else None,
                "seed": cfg.seed,
                "diagnostics": result.diagnostics,
            }
        )
    if cfg.json_output is not None:
        payload = {"alpha": cfg.alpha, "inputs": [str(p) for p in cfg.inputs], "results": records}
        text = json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False, default=_json_default)
        cfg.json_output.write_text(text + "\n", encoding="utf-8", newline="\n")
    return EXIT_FAILURE if failed else EXIT_OK


def _write_report(report: StudyReport, cfg: RunConfig) -> None:
    if cfg.output is not None:
        report.write_csv(cfg.output)
    if cfg.json_output is not None:
        report.write_json(cfg.json_output)
    if cfg.series_dir is not None:
        report.write_series(cfg.series_dir)
    print(report.summary_table())


def cmd_simulate(cfg: RunConfig) -> int:
    scenario = ScenarioConfig(cfg.scenario or 1, cfg.n1 or 2, cfg.n2 or 2)
    report = run_type1_study(
        scenario, cfg.tests, cfg.reps, cfg.bootstrap_config(), cfg.seed, cfg.alpha, threads=cfg.threads
    )
    _write_report(report, cfg)
    return EXIT_OK


def cmd_power(cfg: RunConfig) -> int:
    scenario = ScenarioConfig(cfg.scenario or 1, cfg.n1 or 2, cfg.n2 or 2)
    report = run_power_study(
        scenario, cfg.tests, cfg.delta_grid, cfg.reps, cfg.bootstrap_config(), cfg.seed, cfg.alpha, cfg.threads
    )
    _write_report(report, cfg)
    return EXIT_OK


_COMMANDS = {"test": cmd_test, "simulate": cmd_simulate, "power": cmd_power}


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    try:
        cfg = make_run_config(args)
    except ValidationError as e:
        messages = "; ".join(err["msg"] for err in e.errors())
        parser.error(messages)
    except ValueError as e:
        parser.error(str(e))

    try:
        return _COMMANDS[cfg.command](cfg)
    except (CompmeanError, OSError) as e:
        print(f"compmean: error: {e}", file=sys.stderr)
    return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
