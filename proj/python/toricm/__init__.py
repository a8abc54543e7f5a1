"""Python front end for the toricm C++ core."""

import json

from ._core import ToricmError, __version__, exit_code_for, preset_names, selftest
from . import _core

__all__ = [
    "ToricmError",
    "__version__",
    "constants",
    "count",
    "error_code",
    "exit_code_for",
    "invariants",
    "preset_config",
    "preset_names",
    "selftest",
]


def _config_text(config):
    if config is None:
        return ""
    return config if isinstance(config, str) else json.dumps(config)


def error_code(exc):
    """The stable code carried by a ToricmError, e.g. 'NotQuasiProper'."""
    return str(exc).split(":", 1)[0]


def preset_config(name):
    return json.loads(_core.preset_config(name))


def invariants(preset="", config=None):
    return json.loads(_core.invariants_json(preset, _config_text(config)))


def constants(preset="", config=None, prime_limit=0, threads=1):
    return json.loads(_core.constants_json(preset, _config_text(config), prime_limit, threads))


def count(preset="", config=None, B=(), budget=2e9, threads=1):
    return json.loads(_core.count_json(preset, _config_text(config), list(B), budget, threads))["rows"]
