"""Run configuration: dotted config keys with defaults, a key=value config
file format, and precedence CLI flag > config file > built-in default.

The environment variable PROC2BPMN_CONFIG names a fallback config file.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, fields

from .corpus import DataError
from .preprocess import DEFAULT_STRIP_CHARS

ENV_CONFIG = "PROC2BPMN_CONFIG"


class ConfigError(DataError):
    pass


@dataclass
class RunConfig:
    preprocess_strip_chars: str = DEFAULT_STRIP_CHARS
    ner_l2: float = 0.1
    ner_max_iter: int = 100
    ner_tol: float = 1e-4
    ner_optimizer: str = "lbfgs"
    relex_neg_rate: float = 5.0
    relex_ros_multiplier: float = 2.0
    relex_head: str = "last"
    relex_neighbors: str = "mention"
    resolve_exact_match: bool = True
    resolve_head_match: bool = True
    resolve_pronouns: bool = True
    bpmn_events: bool = True
    bpmn_close_gateways: bool = True
    bpmn_contract_conditions: bool = True
    eval_relaxed_spans: bool = False
    eval_exclude_o: bool = False
    seed: int = 0
    paths_corpus: str = ""
    paths_ner_model: str = ""
    paths_re_model: str = ""
    paths_output_dir: str = ""


#: dotted config key -> RunConfig field
CONFIG_KEYS: dict[str, str] = {
    "preprocess.strip_chars": "preprocess_strip_chars",
    "ner.l2": "ner_l2",
    "ner.max_iter": "ner_max_iter",
    "ner.tol": "ner_tol",
    "ner.optimizer": "ner_optimizer",
    "relex.neg_rate": "relex_neg_rate",
    "relex.ros_multiplier": "relex_ros_multiplier",
    "relex.head": "relex_head",
    "relex.neighbors": "relex_neighbors",
    "resolve.exact_match": "resolve_exact_match",
    "resolve.head_match": "resolve_head_match",
    "resolve.pronouns": "resolve_pronouns",
    "bpmn.events": "bpmn_events",
    "bpmn.close_gateways": "bpmn_close_gateways",
    "bpmn.contract_conditions": "bpmn_contract_conditions",
    "eval.relaxed_spans": "eval_relaxed_spans",
    "eval.exclude_O": "eval_exclude_o",
    "seed": "seed",
    "paths.corpus": "paths_corpus",
    "paths.ner_model": "paths_ner_model",
    "paths.re_model": "paths_re_model",
    "paths.output_dir": "paths_output_dir",
}

_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _parse_value(key: str, raw: str):
    ftype = _FIELD_TYPES[CONFIG_KEYS[key]]
    raw = raw.strip()
    if ftype == "bool":
        low = raw.lower()
        if low in ("true", "1", "yes", "on"):
            return True
        if low in ("false", "0", "no", "off"):
            return False
        raise ConfigError(f"config key {key!r}: {raw!r} is not a boolean")
    if ftype == "int":
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"config key {key!r}: {raw!r} is not an integer") from None
    if ftype == "float":
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"config key {key!r}: {raw!r} is not a number") from None
    return raw


def load_config_file(path) -> dict[str, object]:
    """Parse a key=value config file; unknown keys are rejected."""
    values: dict[str, object] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, _, raw = line.partition("=")
        key = key.strip()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        values[CONFIG_KEYS[key]] = _parse_value(key, raw)
    return values


def resolve_config(config_path: str | None = None,
                   overrides: dict[str, object] | None = None) -> RunConfig:
    """Defaults, overlaid with a config file (explicit path or the
    PROC2BPMN_CONFIG fallback), overlaid with CLI overrides."""
    cfg = RunConfig()
    path = config_path or os.environ.get(ENV_CONFIG)
    if path:
        for name, value in load_config_file(path).items():
            setattr(cfg, name, value)
    for name, value in (overrides or {}).items():
        if value is not None:
            setattr(cfg, name, value)
    return cfg


def describe_keys() -> str:
    """One line per config key with its default, for --help output."""
    defaults = RunConfig()
    lines = []
    for key, name in CONFIG_KEYS.items():
        lines.append(f"  {key} = {getattr(defaults, name)!r}")
    return "\n".join(lines)


def format_config(cfg: RunConfig) -> str:
    return "\n".join(
        f"{key} = {getattr(cfg, name)!r}" for key, name in CONFIG_KEYS.items()
    )
