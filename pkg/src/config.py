"""
Centralized configuration loader from config.json
Settings come from config.json; the process environment only fills ${VAR} slots
"""

import os
import re
import sys
from pathlib import Path
from typing import Any, Dict, Optional

import orjson

_ENV_PATTERN = re.compile(r'\$\{([A-Z_][A-Z0-9_]*)(?::-([^}]*))?\}')


class Config:
    """Configuration manager - loads settings from config.json"""

    def __init__(self, environment: str = None, config_path: Optional[Path] = None):
        """
        Initialize configuration

        Args:
            environment: Environment name (development, testing, benchmark)
                        If not provided, reads from ENVIRONMENT env var
            config_path: Alternate config file (defaults to config/config.json)
        """
        self.environment = environment or os.environ.get('ENVIRONMENT')

        if not self.environment:
            raise ValueError(
                "ENVIRONMENT not set. Must be one of: development, testing, benchmark"
            )

        config_path = config_path or Path(__file__).parent.parent / 'config' / 'config.json'
        if not config_path.exists():
            raise FileNotFoundError(f"Configuration file not found: {config_path}")

        all_config = orjson.loads(config_path.read_bytes())

        if self.environment not in all_config:
            raise ValueError(
                f"Environment '{self.environment}' not found in config.json. "
                f"Available: {list(all_config.keys())}"
            )

        self._config = self._substitute_env_vars(all_config[self.environment])

        log(f"✓ Configuration loaded for environment: {self.environment}", self)

    def _substitute_env_vars(self, obj: Any) -> Any:
        """
        Recursively substitute ${VAR_NAME} and ${VAR_NAME:-default}

        A string that is exactly one reference to a numeric or boolean value is
        converted back to that type, so "${LSTAR_DEFAULT_BUDGET:-10000}" yields
        an int.
        """
        if isinstance(obj, dict):
            return {k: self._substitute_env_vars(v) for k, v in obj.items()}
        elif isinstance(obj, list):
            return [self._substitute_env_vars(item) for item in obj]
        elif isinstance(obj, str):
            def replace(match: re.Match) -> str:
                var_name, default = match.group(1), match.group(2)
                env_value = os.environ.get(var_name)
                if env_value is None:
                    if default is None:
                        raise ValueError(
                            f"Environment variable '{var_name}' not set. "
                            f"Required by config for environment: {self.environment}"
                        )
                    return default
                return env_value

            result = _ENV_PATTERN.sub(replace, obj)
            if result != obj:
                return _coerce_scalar(result)
            return result
        else:
            return obj

    def get(self, *keys: str, default: Any = None) -> Any:
        """
        Get configuration value by nested keys

        Args:
            *keys: Nested keys (e.g., 'search', 'default_budget')
            default: Default value if key not found (use sparingly)

        Returns:
            Configuration value

        Examples:
            config.get('search', 'default_budget')
            config.get('semantics', 'enumeration_ceiling')
        """
        value = self._config
        for key in keys:
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                if default is None:
                    raise KeyError(
                        f"Configuration key not found: {'.'.join(keys)} "
                        f"in environment: {self.environment}"
                    )
                return default
        return value

    @property
    def search(self) -> Dict[str, Any]:
        """Get proof search configuration"""
        return self.get('search')

    @property
    def semantics(self) -> Dict[str, Any]:
        return self.get('semantics')

    @property
    def enrichment(self) -> Dict[str, Any]:
        return self.get('enrichment')

    @property
    def bench(self) -> Dict[str, Any]:
        """Get benchmark configuration"""
        return self.get('bench')

    @property
    def output(self) -> Dict[str, Any]:
        return self.get('output')

    @property
    def verbose(self) -> bool:
        return bool(self.get('logging', 'verbose', default=False)) or _force_verbose


def _coerce_scalar(text: str) -> Any:
    lowered = text.strip().lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    try:
        return int(text)
    except ValueError:
        return text


# Global config instance - initialized on first use
_config_instance = None
_force_verbose = False


def get_config() -> Config:
    """
    Get or create global configuration instance

    Returns:
        Config instance
    """
    global _config_instance
    if _config_instance is None:
        _config_instance = Config()
    return _config_instance


def reset_config() -> None:
    """Drop the cached instance so the next get_config() reloads"""
    global _config_instance
    _config_instance = None


def set_verbose(enabled: bool) -> None:
    global _force_verbose
    _force_verbose = enabled


def log(message: str, config: Optional[Config] = None) -> None:
    """Status line on stderr, printed only in verbose mode"""
    try:
        verbose = (config or get_config()).verbose
    except (ValueError, FileNotFoundError):
        verbose = _force_verbose
    if verbose:
        print(message, file=sys.stderr)


# Convenience accessors
def default_budget() -> int:
    return int(get_config().get('search', 'default_budget'))


def enumeration_ceiling() -> int:
    return int(get_config().get('semantics', 'enumeration_ceiling'))


def default_seed() -> int:
    return int(get_config().get('random', 'seed'))
