"""
Configuration loader for steinpp.
Loads experiment configurations from JSON or YAML and validates them.
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from pydantic import ValidationError as PydanticValidationError

from ..carrier import Configuration
from ..exceptions import ConfigError, SteinppError
from .schema import ExperimentConfig

logger = logging.getLogger(__name__)

DEFAULTS_PATH = Path(__file__).parent / "defaults.json"


class ConfigLoader:
    """Loads experiment and configuration files, merging package defaults."""

    def __init__(self, config_dir: Optional[str] = None):
        self.config_dir = Path(config_dir) if config_dir else Path(".")

    def _substitute_env_vars(self, data: Any) -> Any:
        """Replace "${VAR}" strings by the environment value, if set."""
        if isinstance(data, dict):
            return {k: self._substitute_env_vars(v) for k, v in data.items()}
        if isinstance(data, list):
            return [self._substitute_env_vars(item) for item in data]
        if isinstance(data, str) and data.startswith("${") and data.endswith("}"):
            return os.environ.get(data[2:-1], data)
        return data

    def _resolve(self, path: Union[str, Path]) -> Path:
        candidate = Path(path)
        if not candidate.is_absolute() and not candidate.exists():
            candidate = self.config_dir / candidate
        if not candidate.exists():
            raise ConfigError(f"Configuration file not found: {path}")
        return candidate

    def read(self, path: Union[str, Path]) -> Any:
        """Parse a JSON or YAML file with environment substitution."""
        resolved = self._resolve(path)
        try:
            with open(resolved, "r") as f:
                if resolved.suffix in (".yaml", ".yml"):
                    data = yaml.safe_load(f)
                elif resolved.suffix == ".json":
                    data = json.load(f)
                else:
                    raise ConfigError(f"Unsupported configuration format: {resolved.suffix}")
        except (OSError, json.JSONDecodeError, yaml.YAMLError) as e:
            logger.error(f"Error reading {resolved}: {str(e)}")
            raise ConfigError(f"Failed to read {resolved}: {str(e)}")
        return self._substitute_env_vars(data)

    def load_defaults(self) -> Dict[str, Any]:
        """Load the packaged default configuration."""
        try:
            with open(DEFAULTS_PATH, "r") as f:
                return json.load(f)["default_config"]
        except (OSError, KeyError, json.JSONDecodeError) as e:
            logger.error(f"Error loading default config: {str(e)}")
            return {}

    def load_experiment(self, path: Union[str, Path], seed: Optional[int] = None,
                        output_dir: Optional[str] = None) -> ExperimentConfig:
        """Load an experiment config; `seed` and `output_dir` override the file."""
        data = self.read(path)
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected a mapping at the top level")
        defaults = self.load_defaults()
        data = dict(data)
        kind = data.get("experiment")
        param_defaults = defaults.get("experiments", {}).get(kind, {})
        data["params"] = {**param_defaults, **(data.get("params") or {})}
        data["verification"] = {**defaults.get("verification", {}), **(data.get("verification") or {})}
        if seed is not None:
            data["seed"] = seed
        if output_dir is not None:
            data["output_dir"] = output_dir
        try:
            config = ExperimentConfig.model_validate(data)
        except (PydanticValidationError, SteinppError, ValueError) as e:
            logger.error(f"Invalid experiment config {path}: {str(e)}")
            raise ConfigError(f"Invalid experiment config {path}: {str(e)}")
        logger.info(f"Loaded {config.experiment.value} experiment from {path}")
        return config

    def load_configuration(self, path: Union[str, Path]) -> Configuration:
        """Read a configuration stored as [[position, multiplicity], ...]."""
        data = self.read(path)
        try:
            return Configuration.from_json(json.dumps(data))
        except SteinppError as e:
            logger.error(f"Invalid configuration file {path}: {str(e)}")
            raise ConfigError(f"Invalid configuration file {path}: {str(e)}")
