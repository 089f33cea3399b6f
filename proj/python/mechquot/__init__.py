"""Exact checks for mechanical quotients of affine connection control systems."""

import json

from ._core import CommandResult, Error, InputError, canonical, commands, equal, run_command

__all__ = [
    "CommandResult",
    "Error",
    "InputError",
    "canonical",
    "commands",
    "equal",
    "run",
    "run_command",
]


def run(command, path, **options):
    """Run a command and return (exit_code, report) with the report parsed from JSON."""
    result = run_command(command, str(path), **options)
    return result.exit_code, json.loads(result.machine)
