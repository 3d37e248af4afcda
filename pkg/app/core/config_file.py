"""
Benchmark file parser.

The file is a line-oriented document of ``[section]`` headers and
``key = value`` lines; ``#`` starts a comment. Sections: ``dataset``,
``learner``, ``oracle`` (optional), ``strategy`` (repeatable), ``protocol``
and ``output``. Values are validated by the pydantic models they feed.
"""

import logging
import re
from pathlib import Path
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, ValidationError

from app.core.config import settings
from app.core.exceptions import ConfigFileError, DatasetError
from app.models.dataset import MixtureSpec
from app.models.learner import LearnerConfig
from app.models.run import BenchmarkPlan, DatasetSource, Metric, Overrides, RunConfig, RunMode
from app.models.strategy import StrategyConfig, StrategyName
from app.pooldata.generators import PRESET_COLLAPSE, PRESETS, grid_mixture_spec

logger = logging.getLogger(__name__)

SECTION_PATTERN = re.compile(r"^\[\s*([A-Za-z_]+)\s*\]$")
KEY_PATTERN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*)$")

MIXTURE_KEYS = {
    "class_count", "dims", "per_class_counts", "stddev", "spacing", "seed", "name", "class_means",
}
SOURCE_KEYS = set(DatasetSource.model_fields) - {"mixture"}
PROTOCOL_KEYS = {"budget_fraction", "cycles", "seeds", "seed_count", "metric", "collapse_map", "mode"}

SECTION_KEYS = {
    "dataset": SOURCE_KEYS | MIXTURE_KEYS,
    "learner": set(LearnerConfig.model_fields),
    "oracle": set(LearnerConfig.model_fields),
    "strategy": set(StrategyConfig.model_fields),
    "protocol": PROTOCOL_KEYS,
    "output": {"dir"},
}
REPEATABLE = {"strategy"}


class _Section:
    """Raw key/value pairs of one section with the line of every key"""

    def __init__(self, name: str, line: int):
        self.name = name
        self.line = line
        self.values: Dict[str, str] = {}
        self.lines: Dict[str, int] = {}

    def line_of(self, key: Optional[str]) -> int:
        return self.lines.get(key, self.line)


def _split_sections(text: str) -> List[_Section]:
    sections: List[_Section] = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue

        header = SECTION_PATTERN.match(line)
        if header:
            name = header.group(1).lower()
            if name not in SECTION_KEYS:
                raise ConfigFileError(f"unknown section [{name}]", line_number)
            if name not in REPEATABLE and any(section.name == name for section in sections):
                raise ConfigFileError(f"section [{name}] given twice", line_number)
            sections.append(_Section(name, line_number))
            continue

        entry = KEY_PATTERN.match(line)
        if not entry:
            raise ConfigFileError(f"expected 'key = value', got '{line}'", line_number)
        if not sections:
            raise ConfigFileError("key outside of any section", line_number)
        section = sections[-1]
        key, value = entry.group(1), entry.group(2).strip()
        if key not in SECTION_KEYS[section.name]:
            raise ConfigFileError(f"unknown key '{key}' in [{section.name}]", line_number)
        if key in section.values:
            raise ConfigFileError(f"key '{key}' given twice in [{section.name}]", line_number)
        if not value:
            raise ConfigFileError(f"key '{key}' has no value", line_number)
        section.values[key] = value
        section.lines[key] = line_number
    return sections


def _int_list(section: _Section, key: str) -> List[int]:
    try:
        return [int(item) for item in section.values[key].split(",") if item.strip()]
    except ValueError:
        raise ConfigFileError(f"'{key}' must be a comma-separated list of integers", section.line_of(key))


def _int_map(section: _Section, key: str) -> Dict[int, int]:
    mapping = {}
    for item in section.values[key].split(","):
        source, _, target = item.partition(":")
        try:
            mapping[int(source)] = int(target)
        except ValueError:
            raise ConfigFileError(f"'{key}' must look like '0:0, 1:1, 2:1'", section.line_of(key))
    return mapping


def _validated(model: type, values: dict, section: _Section, aliases: Optional[Dict[str, str]] = None) -> BaseModel:
    try:
        return model(**values)
    except ValidationError as error:
        first = error.errors()[0]
        field = str(first["loc"][0]) if first["loc"] else None
        key = (aliases or {}).get(field, field)
        raise ConfigFileError(f"[{section.name}] {key}: {first['msg']}", section.line_of(key))


def _mixture(section: _Section) -> MixtureSpec:
    values = section.values
    if "class_count" not in values or "dims" not in values or "per_class_counts" not in values:
        raise ConfigFileError(
            "a generated dataset needs class_count, dims and per_class_counts", section.line
        )
    if not values["class_count"].isdigit():
        raise ConfigFileError("class_count must be a positive integer", section.line_of("class_count"))
    class_count = int(values["class_count"])
    counts = _int_list(section, "per_class_counts")
    # a single count applies to every class
    if len(counts) == 1:
        counts = counts * class_count

    if "class_means" in values:
        try:
            means = [[float(value) for value in row.split(",")] for row in values["class_means"].split(";")]
        except ValueError:
            raise ConfigFileError("'class_means' rows are ';'-separated lists of reals", section.line_of("class_means"))
        fields = {
            "class_count": class_count,
            "dims": values["dims"],
            "per_class_counts": counts,
            "class_means": means,
            "class_stddev": values.get("stddev", "1.0"),
            "seed": values.get("seed", "0"),
            "name": values.get("name", "mixture"),
        }
        return _validated(MixtureSpec, fields, section, aliases={"class_stddev": "stddev"})

    try:
        return grid_mixture_spec(
            class_count=class_count,
            dims=int(values["dims"]),
            per_class_counts=counts,
            stddev=float(values.get("stddev", "0.5")),
            spacing=float(values.get("spacing", "1.0")),
            seed=int(values.get("seed", "0")),
            name=values.get("name", "grid-mixture"),
        )
    except (ValueError, DatasetError) as error:
        raise ConfigFileError(f"[dataset] invalid mixture: {error}", section.line)


def _dataset(section: _Section) -> DatasetSource:
    fields = {key: value for key, value in section.values.items() if key in SOURCE_KEYS}
    if "preset" in fields and fields["preset"] not in PRESETS:
        raise ConfigFileError(
            f"unknown preset '{fields['preset']}', expected one of {sorted(PRESETS)}", section.line_of("preset")
        )
    if MIXTURE_KEYS & set(section.values):
        fields["mixture"] = _mixture(section)
    return _validated(DatasetSource, fields, section)


def _protocol(section: Optional[_Section]) -> dict:
    if section is None:
        return {"seeds": list(range(settings.DEFAULT_SEED_COUNT))}
    values = dict(section.values)
    if "seeds" in values and "seed_count" in values:
        raise ConfigFileError("give either seeds or seed_count", section.line_of("seed_count"))

    protocol = {key: value for key, value in values.items() if key not in ("seeds", "seed_count", "collapse_map")}
    if "seeds" in values:
        protocol["seeds"] = _int_list(section, "seeds")
    else:
        count = values.get("seed_count", str(settings.DEFAULT_SEED_COUNT))
        if not count.isdigit() or int(count) < 1:
            raise ConfigFileError("seed_count must be a positive integer", section.line_of("seed_count"))
        protocol["seeds"] = list(range(int(count)))
    if "collapse_map" in values:
        protocol["collapse_map"] = _int_map(section, "collapse_map")
    return protocol


def parse_config_text(text: str) -> BenchmarkPlan:
    """Parse a benchmark document; every error names its line"""
    sections = _split_sections(text)
    by_name: Dict[str, _Section] = {}
    strategy_sections = []
    for section in sections:
        if section.name == "strategy":
            strategy_sections.append(section)
        else:
            by_name[section.name] = section

    if "dataset" not in by_name:
        raise ConfigFileError("missing [dataset] section")
    if not strategy_sections:
        raise ConfigFileError("at least one [strategy] section is required")

    strategies = []
    for section in strategy_sections:
        values = dict(section.values)
        values.setdefault("mc_T", settings.DEFAULT_MC_ITERATIONS)
        strategy = _validated(StrategyConfig, values, section)
        if any(existing.name == strategy.name for existing in strategies):
            raise ConfigFileError(f"strategy '{strategy.name.value}' listed twice", section.line_of("name"))
        strategies.append(strategy)

    learner = _validated(LearnerConfig, by_name["learner"].values, by_name["learner"]) if "learner" in by_name else LearnerConfig()
    oracle = _validated(LearnerConfig, by_name["oracle"].values, by_name["oracle"]) if "oracle" in by_name else None
    protocol_section = by_name.get("protocol")

    plan = BenchmarkPlan(
        dataset=_dataset(by_name["dataset"]),
        learner=learner,
        oracle_learner=oracle,
        strategies=strategies,
        protocol=_protocol(protocol_section),
        output_dir=by_name["output"].values.get("dir") if "output" in by_name else None,
    )

    # validate the protocol once so errors point at their line
    if protocol_section is not None:
        _validated(RunConfig, _run_fields(plan, plan.strategies[0], plan.protocol), protocol_section)
    return plan


def parse_config_file(path: Union[str, Path]) -> BenchmarkPlan:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigFileError(f"config file not found: {path}")
    except (OSError, UnicodeDecodeError) as error:
        raise ConfigFileError(f"cannot read {path}: {error}")
    logger.info("Loaded benchmark file", extra={"path": str(path)})
    return parse_config_text(text)


def _run_fields(plan: BenchmarkPlan, strategy: StrategyConfig, protocol: dict) -> dict:
    fields = {
        "dataset": plan.dataset,
        "strategy": strategy,
        "learner": plan.learner,
        "oracle_learner": plan.oracle_learner,
        **protocol,
    }
    preset = plan.dataset.preset
    if fields.get("metric") == Metric.F1_BINARY.value and "collapse_map" not in fields and preset in PRESET_COLLAPSE:
        fields["collapse_map"] = PRESET_COLLAPSE[preset]
    return fields


def build_run_configs(
    plan: BenchmarkPlan,
    overrides: Optional[Overrides] = None,
    mode: Optional[RunMode] = None,
) -> List[RunConfig]:
    """One RunConfig per strategy; command-line overrides win over the file"""
    overrides = overrides or Overrides()
    protocol = dict(plan.protocol)
    if overrides.seeds is not None:
        protocol["seeds"] = overrides.seeds
    if overrides.cycles is not None:
        protocol["cycles"] = overrides.cycles
    if overrides.budget_fraction is not None:
        protocol["budget_fraction"] = overrides.budget_fraction
    if mode is not None:
        protocol["mode"] = mode

    strategies = plan.strategies
    if overrides.strategies:
        configured = {strategy.name: strategy for strategy in plan.strategies}
        strategies = []
        for name in overrides.strategies:
            strategy_name = StrategyName(name)
            strategies.append(
                configured.get(strategy_name)
                or StrategyConfig(name=strategy_name, mc_T=settings.DEFAULT_MC_ITERATIONS)
            )

    return [RunConfig(**_run_fields(plan, strategy, protocol)) for strategy in strategies]
