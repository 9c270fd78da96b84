"""Utility modules for womac CLI."""

from womac.utils.config import (
    load_run_config,
    resolve_env_vars,
    resolve_threads,
    parse_overrides,
    RunConfig,
)
from womac.utils.output import write_json, write_csv, ensure_dir

__all__ = [
    'load_run_config',
    'resolve_env_vars',
    'resolve_threads',
    'parse_overrides',
    'RunConfig',
    'write_json',
    'write_csv',
    'ensure_dir',
]
