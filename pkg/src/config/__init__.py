"""
Run Configuration

YAML run descriptions validated with pydantic.
"""
from .run_config import (
    AdversarySpec,
    ConfigError,
    OutputPaths,
    RunConfig,
    load_run_config,
    parse_run_config,
)

__all__ = [
    'AdversarySpec',
    'ConfigError',
    'OutputPaths',
    'RunConfig',
    'load_run_config',
    'parse_run_config',
]
