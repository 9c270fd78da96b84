"""
Configuration utilities for womac.

Centralizes run-config loading, environment resolution and the resolved
config echo written next to every output.
"""
import os
import re
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import yaml

from womac.constants import DEFAULT_OUTPUT_DIR, DEFAULT_SEED, THREADS_ENV
from womac.errors import InputIOError, ValidationError
from womac.logger import logger as console


def resolve_env_vars(value: Any) -> Any:
    """
    Recursively resolves environment variables in configuration values.

    Replaces ${VAR_NAME} patterns with os.environ.get("VAR_NAME").
    Works with strings, dicts, and lists.

    Args:
        value: Configuration value (string, dict, list, or other)

    Returns:
        Value with environment variables resolved
    """
    if isinstance(value, str):
        pattern = r'\$\{([^}]+)\}'

        def replace_env(match):
            var_name = match.group(1)
            env_value = os.environ.get(var_name)
            if env_value is None:
                console.warning(f"Environment variable '{var_name}' not found, leaving as-is")
                return match.group(0)  # Return original if not found
            return env_value

        return re.sub(pattern, replace_env, value)
    elif isinstance(value, dict):
        return {k: resolve_env_vars(v) for k, v in value.items()}
    elif isinstance(value, list):
        return [resolve_env_vars(item) for item in value]
    else:
        return value


def load_run_config(path: Optional[str]) -> Dict[str, Any]:
    """
    Loads a run config file (JSON, or YAML which is a superset of JSON).

    Args:
        path: Config file path. None yields an empty config.

    Returns:
        Parsed configuration with ${VAR} references resolved.

    Raises:
        InputIOError: the file cannot be read
        ValidationError: the file does not parse to a mapping
    """
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as f:
            config = yaml.safe_load(f) or {}
    except (IOError, OSError) as e:
        raise InputIOError(f"Could not read config file '{path}': {e}", path=path)
    except yaml.YAMLError as e:
        raise ValidationError(f"Could not parse config file '{path}': {e}", path=path)
    if not isinstance(config, dict):
        raise ValidationError(f"Config file '{path}' must contain a mapping", path=path)
    return resolve_env_vars(config)


def resolve_threads(threads: Optional[int]) -> int:
    """Worker count from --threads, falling back to WOMAC_THREADS, then 1."""
    if threads is None:
        raw = os.environ.get(THREADS_ENV)
        if raw is None:
            return 1
        try:
            threads = int(raw)
        except ValueError:
            raise ValidationError(f"{THREADS_ENV} must be an integer, got '{raw}'")
    if threads < 1:
        raise ValidationError(f"threads must be at least 1, got {threads}")
    return threads


def parse_overrides(pairs) -> Dict[str, Any]:
    """Turn KEY=VALUE strings into a dict, parsing values as YAML scalars or lists."""
    overrides: Dict[str, Any] = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValidationError(f"override '{pair}' must look like KEY=VALUE")
        key, raw = pair.split("=", 1)
        try:
            overrides[key.strip().replace("-", "_")] = yaml.safe_load(raw)
        except yaml.YAMLError as e:
            raise ValidationError(f"could not parse override '{pair}': {e}")
    return overrides


@dataclass
class RunConfig:
    """Fully resolved parameters of one CLI run; serialized next to its outputs."""

    command: str
    seed: int = DEFAULT_SEED
    output_dir: str = DEFAULT_OUTPUT_DIR
    params: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        # Thread count and output location are left out: neither changes results.
        return {"command": self.command, "seed": self.seed, "params": self.params}

    @classmethod
    def from_dict(cls, data: Dict[str, Any], output_dir: str = DEFAULT_OUTPUT_DIR) -> "RunConfig":
        if "command" not in data:
            raise ValidationError("run config is missing 'command'")
        return cls(data["command"], int(data.get("seed", DEFAULT_SEED)), output_dir, dict(data.get("params", {})))
