"""
Shared plumbing for the womac commands: option resolution, config echo and
the error-to-exit-code mapping.
"""
import functools
import json
import os
import sys
import traceback
from typing import Any, Callable, Dict, Optional, Tuple

import click

from womac.constants import CONFIG_JSON, EXIT_INTERNAL, EXIT_IO, EXIT_VALIDATION, THREADS_ENV
from womac.errors import ValidationError, WomacError
from womac.logger import logger as console
from womac.utils.config import RunConfig, load_run_config
from womac.utils.output import ensure_dir, write_json

threads_option = click.option(
    "--threads",
    type=int,
    default=None,
    envvar=THREADS_ENV,
    help="Worker threads (also WOMAC_THREADS). Never changes results.",
)
out_option = click.option("--out", "out_dir", default=None, help="Output directory.")
config_option = click.option(
    "--config", "config_path", default=None, help="JSON run config; a written config.json reproduces its run."
)
seed_option = click.option("--seed", type=int, default=None, help="Global seed for every random draw.")


def exit_code_for(error: BaseException) -> int:
    if isinstance(error, ValidationError):
        return EXIT_VALIDATION
    if isinstance(error, OSError):
        return EXIT_IO
    return EXIT_INTERNAL


def error_payload(error: BaseException) -> Dict[str, Any]:
    if isinstance(error, WomacError):
        return error.to_dict()
    if isinstance(error, OSError):
        return {"error": "io", "message": str(error)}
    return {"error": "internal", "message": f"{type(error).__name__}: {error}"}


def guarded(command: str) -> Callable:
    """Run a command body, turning any failure into error JSON and an exit code."""

    def decorate(fn: Callable) -> Callable:
        @functools.wraps(fn)
        def wrapper(*args: Any, **kwargs: Any) -> None:
            try:
                fn(*args, **kwargs)
            except click.exceptions.Exit:
                raise
            except Exception as e:
                payload = error_payload(e)
                click.echo(json.dumps(payload, sort_keys=True))
                console.error(f"{command.capitalize()}: {payload['message']}")
                if os.environ.get("WOMAC_DEBUG"):
                    traceback.print_exc()
                sys.exit(exit_code_for(e))

        return wrapper

    return decorate


def load_params(config_path: Optional[str], command: str) -> Tuple[Dict[str, Any], Optional[int]]:
    """
    Parameters and seed from a config file.

    Accepts either a bare parameter mapping or a config.json echo written by
    a previous run of the same command.
    """
    config = load_run_config(config_path)
    if "command" in config and "params" in config:
        echo = RunConfig.from_dict(config)
        if echo.command != command:
            raise ValidationError(
                f"config file was written by '{echo.command}', not '{command}'", path=config_path
            )
        return dict(echo.params), echo.seed
    seed = config.pop("seed", None)
    return config, None if seed is None else int(seed)


def pick(flag: Any, params: Dict[str, Any], key: str, default: Any) -> Any:
    """Flag value if given, else the config value, else the default."""
    if flag is not None:
        return flag
    return params.get(key, default)


def check_known(params: Dict[str, Any], known, command: str) -> None:
    unknown = sorted(set(params) - set(known))
    if unknown:
        raise ValidationError(f"unknown {command} config key(s): {', '.join(unknown)}")


def write_config(out_dir: str, run_config: RunConfig) -> str:
    ensure_dir(out_dir)
    path = os.path.join(out_dir, CONFIG_JSON)
    write_json(path, run_config.to_dict())
    return path
