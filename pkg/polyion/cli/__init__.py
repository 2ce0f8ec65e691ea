"""
CLI Module

This module contains the command-line surface: run configuration,
validation, experiment dispatch and the argparse entry point.
"""

from .runner import EXPERIMENTS, RUNNERS, RunConfig, preparation_target, run, validate
from .main import build_parser, main

__all__ = [
    'EXPERIMENTS',
    'RUNNERS',
    'RunConfig',
    'preparation_target',
    'run',
    'validate',
    'build_parser',
    'main',
]
