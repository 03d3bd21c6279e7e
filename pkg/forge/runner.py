"""
Experiment runner.

``run(subcommand, config)`` validates a configuration, runs one subcommand over
the library and renders its artifacts: a JSON document (JSON lines for family
scans) embedding the configuration and a version stamp, plus optional CSV files.
Artifacts are rendered completely before anything is written and each file is
replaced atomically, so a failed run leaves no partial output.

Exit codes: 0 success, 1 domain error, 2 configuration error.
"""

import csv
import io
import json
import logging
import math
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple

from django.core.management.base import BaseCommand, CommandError

from arithmetic.census import split_census
from arithmetic.curvezeta import count_points, specialize_curve, validate_weil, zeta_numerator
from arithmetic.errors import ConfigError, ForgeError
from arithmetic.weylcert import certify_weyl
from config.timing import timed

from . import __version__
from .experiment import ExperimentConfig
from .family import (
    ASYMPTOTIC,
    CandidateRecord,
    LocalCondition,
    SequenceParams,
    build_sequence,
    equidistribution_table,
    json_int,
    scan_family,
)
from .models import save_run
from .selftest import run_checks
from .sympstat import coset_type_distribution

logger = logging.getLogger(__name__)

STDOUT = "stdout"

CSV_HEADERS = {
    "census": ("p", "type"),
    "census_curve": ("X", "N_K(X)", "X/(d log X)"),
    "haar": ("type", "weight", "weight_float"),
    "equidist": ("n", "gamma", "tv", "tv_regular", "family_split_mass", "error_constant"),
}


class Report(NamedTuple):
    """What a subcommand produced, before rendering."""

    result: dict | None = None
    lines: list[dict] | None = None  # JSON-lines body
    csv_rows: list[tuple] | None = None
    curve_rows: list[tuple] | None = None
    records: list[tuple[int, CandidateRecord]] = []
    passed: bool = True


class RunResult(NamedTuple):
    exit_code: int
    artifacts: dict[str, str]
    error: dict | None = None
    records: list[tuple[int, CandidateRecord]] = []


# =============================================================================
# Subcommands
# =============================================================================


def _zeta(config: ExperimentConfig) -> Report:
    budget = config.enumeration_budget
    curve = specialize_curve(config.g, config.q, config.n, config.t, budget=budget)
    weil = zeta_numerator(curve, budget=budget)
    return Report(
        result={
            "curve": {
                "g": curve.g,
                "q": curve.q,
                "n": curve.n,
                "t": curve.t.serialize(),
                "f": [c.serialize() for c in curve.f_coeffs],
            },
            "counts": [count_points(curve, m, budget=budget) for m in range(1, curve.g + 1)],
            "h": [json_int(c) for c in weil.h_coeffs],
            "reciprocal": [json_int(c) for c in weil.reciprocal],
            "validation": validate_weil(weil).to_dict(),
        }
    )


def _certify(config: ExperimentConfig) -> Report:
    use_oracle = True if config.use_oracle is None else config.use_oracle
    certificate = certify_weyl(config.h, config.q, config.n, config.prime_budget, use_oracle=use_oracle)
    return Report(result={"h": [json_int(c) for c in config.h], "certificate": certificate.to_dict()})


def _default_checkpoints(bound: int) -> list[int]:
    points = [10**k for k in range(1, int(math.log10(bound)) + 1)] if bound >= 10 else []
    return sorted(set(points + [bound]))


def _census(config: ExperimentConfig) -> Report:
    report = split_census(config.h, None, config.bound, prime_cap=config.prime_cap)
    checkpoints = config.checkpoints or _default_checkpoints(config.bound)
    return Report(
        result=report.to_dict(),
        csv_rows=report.csv_rows(),
        curve_rows=[(x, count, f"{reference:.6f}") for x, count, reference in report.counting_curve(checkpoints)],
    )


def _haar(config: ExperimentConfig) -> Report:
    distribution = coset_type_distribution(
        config.g,
        config.l,
        config.gamma,
        mode=config.mode or "exact",
        samples=config.samples,
        seed=config.seed,
        walk_length=config.walk_length,
        alternative_representative=bool(config.alternative_representative),
    )
    result = {"g": config.g, "l": config.l, "gamma": config.gamma, "distribution": distribution.to_dict()}
    return Report(result=result, csv_rows=distribution.csv_rows())


def _equidist(config: ExperimentConfig) -> Report:
    rows = equidistribution_table(
        config.q,
        config.g,
        config.l,
        config.n_list,
        mode=config.mode or "exact",
        samples=config.samples,
        seed=config.seed,
        budget=config.enumeration_budget,
    )
    csv_rows = [
        (row.n, row.gamma, str(row.tv), str(row.tv_regular), str(row.family_split_mass), f"{row.error_constant:.6g}")
        for row in rows
    ]
    return Report(
        result={
            "rows": [row.to_dict() for row in rows],
            "max_error_constant": max((row.error_constant for row in rows), default=0.0),
        },
        csv_rows=csv_rows,
    )


def _forge(config: ExperimentConfig) -> Report:
    constraints = [LocalCondition.parse(text) for text in config.constraints or []]
    records = scan_family(
        config.q,
        config.n,
        config.g,
        constraints,
        certify=bool(config.certify),
        census_bound=config.census_bound,
        prime_budget=config.prime_budget,
        budget=config.enumeration_budget,
        stride=config.stride or 1,
    )
    return Report(lines=[r.to_dict() for r in records], records=[(config.n, r) for r in records])


def _sequence(config: ExperimentConfig) -> Report:
    params = SequenceParams(
        preset=config.preset or ASYMPTOTIC,
        ramify_exponent=config.fraction("ramify_exponent"),
        c_g=1.0 if config.c_g is None else config.c_g,
        c1=config.fraction("c1") or Fraction(1),
        c2=config.fraction("c2") or Fraction(1),
        prime_budget=config.prime_budget,
        census_cap=config.census_cap or SequenceParams.census_cap,
    )
    entries = build_sequence(config.q, config.g, config.n_list, params, budget=config.enumeration_budget)
    return Report(
        result={"params": params.to_dict(config.g), "entries": [e.to_dict() for e in entries]},
        records=[(e.n, e.record) for e in entries if e.record is not None],
    )


def _selftest(config: ExperimentConfig) -> Report:
    checks = run_checks()
    failed = [c for c in checks if not c["passed"]]
    return Report(result={"checks": checks, "passed": len(checks) - len(failed), "failed": len(failed)}, passed=not failed)


HANDLERS = {
    "zeta": _zeta,
    "certify": _certify,
    "census": _census,
    "haar": _haar,
    "equidist": _equidist,
    "forge": _forge,
    "sequence": _sequence,
    "selftest": _selftest,
}


# =============================================================================
# Rendering and writing
# =============================================================================


def _dump(document) -> str:
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def _csv_text(header: tuple, rows: list[tuple]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def render(subcommand: str, config: ExperimentConfig, report: Report) -> dict[str, str]:
    """Artifact texts keyed by destination path (STDOUT when no output path is set)."""
    stamp = {"version": __version__, "subcommand": subcommand, "config": config.to_dict()}
    if report.lines is not None:
        header = json.dumps(stamp, sort_keys=True)
        body = "".join(json.dumps(line, sort_keys=True) + "\n" for line in report.lines)
        main = header + "\n" + body
    else:
        main = _dump({**stamp, "result": report.result})

    artifacts = {config.output or STDOUT: main}
    if config.csv and report.csv_rows is not None:
        artifacts[config.csv] = _csv_text(CSV_HEADERS[subcommand], report.csv_rows)
    if config.curve_csv and report.curve_rows is not None:
        artifacts[config.curve_csv] = _csv_text(CSV_HEADERS["census_curve"], report.curve_rows)
    return artifacts


def write_atomic(path: str, text: str):
    """Write through a temporary file in the target directory and rename over the target."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, temporary = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(temporary, target)
    except BaseException:
        if os.path.exists(temporary):
            os.unlink(temporary)
        raise


def _coerce_config(subcommand: str, config) -> ExperimentConfig:
    if isinstance(config, ExperimentConfig):
        data = config.to_dict()
    elif isinstance(config, str):
        data = json.loads(config) if config.strip() else {}
    else:
        data = dict(config or {})
    data.setdefault("subcommand", subcommand)
    if data["subcommand"] != subcommand:
        raise ConfigError(f"configuration is for {data['subcommand']}, not {subcommand}")
    return ExperimentConfig.from_dict(data)


def run(subcommand: str, config, write: bool = True) -> RunResult:
    """
    Run one subcommand.

    Args:
        subcommand: One of the SUBCOMMANDS
        config: ExperimentConfig, dict, or canonical JSON text
        write: Write file artifacts (the STDOUT artifact is always only returned)

    Returns:
        RunResult with exit code, artifacts and, on failure, a structured error
    """
    try:
        config = _coerce_config(subcommand, config)
    except (ConfigError, json.JSONDecodeError, TypeError) as e:
        error = e.to_dict() if isinstance(e, ForgeError) else {"error": ConfigError.__name__, "message": str(e)}
        logger.warning(f"Rejected configuration for {subcommand}: {error['message']}")
        return RunResult(exit_code=2, artifacts={}, error=error)

    try:
        with timed(f"run {subcommand}", subcommand=subcommand):
            report = HANDLERS[subcommand](config)
        artifacts = render(subcommand, config, report)
    except ConfigError as e:
        return RunResult(exit_code=2, artifacts={}, error=e.to_dict())
    except ForgeError as e:
        logger.info(f"{subcommand} failed with {e.code}: {e}")
        return RunResult(exit_code=1, artifacts={}, error=e.to_dict())

    if write:
        for path, text in artifacts.items():
            if path != STDOUT:
                write_atomic(path, text)

    if not report.passed:
        return RunResult(
            exit_code=1,
            artifacts=artifacts,
            error={"error": "SelftestFailed", "message": "one or more oracle checks failed"},
            records=report.records,
        )
    return RunResult(exit_code=0, artifacts=artifacts, records=report.records)


# =============================================================================
# Management command base
# =============================================================================


def int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def index_or_coefficients(text: str):
    """A field element given as an index ("7") or little-endian coefficients ("2,1")."""
    return int_list(text) if "," in text else int(text)


class ExperimentCommand(BaseCommand):
    """Shared flags and error reporting for the experiment subcommands."""

    subcommand = ""
    arguments: list[tuple[str, dict]] = []
    savable = False

    def add_arguments(self, parser):
        parser.add_argument("--config", help="Canonical JSON configuration file; flags override its fields")
        parser.add_argument("--output", help="Write the main artifact here instead of stdout")
        parser.add_argument("--seed", dest="master_seed", type=int, help="Master seed (64-bit)")
        parser.add_argument("--enumeration-budget", dest="enumeration_budget", type=int)
        parser.add_argument("--prime-cap", dest="prime_cap", type=int)
        for flag, kwargs in self.arguments:
            parser.add_argument(flag, **kwargs)
        if self.savable:
            parser.add_argument("--save", action="store_true", help="Index the selected records in the database")

    def build_config(self, options) -> dict:
        data = {"subcommand": self.subcommand}
        if options.get("config"):
            try:
                data = ExperimentConfig.load(options["config"]).to_dict()
            except ConfigError as e:
                raise CommandError(json.dumps(e.to_dict(), sort_keys=True), returncode=2) from e
        for name in ExperimentConfig.field_names():
            value = options.get(name)
            if value is not None:
                data[name] = value
        return data

    def handle(self, *args, **options):
        result = run(self.subcommand, self.build_config(options))
        if result.exit_code:
            raise CommandError(json.dumps(result.error, sort_keys=True), returncode=result.exit_code)

        if options.get("save"):
            run_row = save_run(self.subcommand, _coerce_config(self.subcommand, self.build_config(options)), result)
            self.stderr.write(f"Saved run {run_row.pk} with {run_row.candidates.count()} candidates")

        if STDOUT in result.artifacts:
            self.stdout.write(result.artifacts[STDOUT], ending="")
        written = [path for path in result.artifacts if path != STDOUT]
        if written:
            self.stdout.write(self.style.SUCCESS(f"Wrote {', '.join(written)}"))
