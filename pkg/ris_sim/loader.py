"""
Reading scenario files.

A config file is YAML (or JSON when the suffix is .json) with a `scenario` section
and an optional `sweep` section. A file without a `scenario` key is read as a bare
scenario. Parse errors carry the line and column; schema errors carry the dotted
field path.
"""
import json
import logging
from pathlib import Path
from typing import Optional, Tuple, Union

import yaml
from pydantic import ValidationError

from .channel import scenario_notes, validate_scenario
from .config import PhaseMode, PhaseStrategy, ScenarioConfig, SweepSpec
from .errors import ConfigError, ScenarioValidationError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _read_document(path: Path) -> dict:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config: {e.strerror or e}", str(path)) from e

    if path.suffix.lower() == ".json":
        try:
            document = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(e.msg, str(path), f"{e.lineno}:{e.colno}") from e
    else:
        try:
            document = yaml.safe_load(text)
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            location = f"{mark.line + 1}:{mark.column + 1}" if mark is not None else None
            problem = getattr(e, "problem", None) or str(e)
            raise ConfigError(problem, str(path), location) from e

    if document is None:
        document = {}
    if not isinstance(document, dict):
        raise ConfigError(f"top level must be a mapping, got {type(document).__name__}", str(path))
    return document


def _schema_error(e: ValidationError, path: Path, prefix: str) -> ConfigError:
    problems = []
    for error in e.errors():
        location = ".".join(str(part) for part in (prefix, *error["loc"]) if part != "")
        problems.append(f"{location}: {error['msg']}")
    first = e.errors()[0]["loc"] if e.errors() else ()
    location = ".".join(str(part) for part in (prefix, *first) if part != "")
    return ConfigError("; ".join(problems), str(path), location or None)


def parse_config(document: dict, path: PathLike = "<config>") -> Tuple[ScenarioConfig, SweepSpec]:
    """Build the models from an already-parsed mapping."""
    path = Path(path)
    if "scenario" in document:
        unknown = set(document) - {"scenario", "sweep"}
        if unknown:
            raise ConfigError(f"unknown top-level key(s): {', '.join(sorted(unknown))}", str(path))
        scenario_doc, sweep_doc, prefix = document["scenario"] or {}, document.get("sweep") or {}, "scenario"
    else:
        scenario_doc, sweep_doc, prefix = document, {}, ""

    try:
        scenario = ScenarioConfig.model_validate(scenario_doc)
    except ValidationError as e:
        raise _schema_error(e, path, prefix) from e

    if not isinstance(sweep_doc, dict):
        raise ConfigError("sweep section must be a mapping", str(path), "sweep")
    try:
        spec = SweepSpec.model_validate({**sweep_doc, "scenario": scenario})
    except ValidationError as e:
        raise _schema_error(e, path, "sweep") from e
    return scenario, spec


def load_config(path: PathLike, allow_invalid: bool = False) -> Tuple[ScenarioConfig, SweepSpec]:
    """
    Load, default and validate a config file.

    Deployment-rule violations raise ScenarioValidationError listing all of them,
    unless allow_invalid is set, in which case they are only logged.
    """
    path = Path(path)
    scenario, spec = parse_config(_read_document(path), path)

    violations = validate_scenario(scenario)
    if violations:
        if not allow_invalid:
            raise ScenarioValidationError(violations)
        for violation in violations:
            logger.warning("Ignoring scenario violation: %s", violation)
    for note in scenario_notes(scenario):
        logger.info("Note: %s", note)

    logger.info("Loaded %s (%s, %g GHz, M = %d)", path, scenario.environment.value, scenario.frequency_GHz, scenario.realizations)
    return scenario, spec


def dump_canonical_config(spec: SweepSpec) -> str:
    """Canonical JSON of the fully-defaulted config; loading it back reproduces the digest."""
    sweep = spec.model_dump(mode="json")
    scenario = sweep.pop("scenario")
    return json.dumps({"scenario": scenario, "sweep": sweep}, sort_keys=True, indent=2) + "\n"


def with_overrides(
    spec: SweepSpec,
    seed: Optional[int] = None,
    power_dBm: Optional[float] = None,
    strategy: Optional[str] = None,
    phase_mode: Optional[str] = None,
) -> SweepSpec:
    """Apply command-line overrides, re-validating the result."""
    scenario = spec.scenario.model_dump()
    sweep = spec.model_dump(exclude={"scenario"})
    if seed is not None:
        scenario["master_seed"] = seed
    if power_dBm is not None:
        scenario["pt_dBm"] = power_dBm
    if strategy is not None:
        sweep["strategy"] = PhaseStrategy(strategy.lower())
    if phase_mode is not None:
        scenario["phase_mode"] = PhaseMode(phase_mode.lower())
        sweep["phase_mode"] = None
    try:
        return SweepSpec.model_validate({**sweep, "scenario": ScenarioConfig.model_validate(scenario)})
    except ValidationError as e:
        raise _schema_error(e, Path("<command line>"), "") from e
