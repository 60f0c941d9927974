"""
CLI Module

Command-line surface of the toolkit.

Modules:
- app: argparse entry point and subcommands
- config: JSON / YAML config documents
- plots: residual-norm figures
"""

from .app import build_parser, main
from .config import ConfigDocument, ConfigError, EvalSettings, load_config, parse_config, preset_document, save_config

__all__ = [
    "build_parser",
    "main",
    "ConfigDocument",
    "ConfigError",
    "EvalSettings",
    "load_config",
    "parse_config",
    "preset_document",
    "save_config",
]
