"""
Command line interface for steinpp.
"""

from .main import cli, main, run_cli

__all__ = ['cli', 'main', 'run_cli']
