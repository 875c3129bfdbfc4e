"""Configuration management for colored-scatter runs."""

import logging
from pathlib import Path
from typing import Any, Optional

import yaml
from pydantic import ValidationError

from colored_scatter.errors import ConfigurationError, InvalidConfigError

from .settings import UNHASHED_FIELDS, EnvSettings, RunConfig

logger = logging.getLogger(__name__)

DEFAULTS_FILE = Path(__file__).parent / "defaults.yaml"

# Preset applied by --full-scale, before explicit flags.
FULL_SCALE = {"grid_k": 2048, "trials": 10000}


def _normalize_key(key: str) -> str:
    """Flag names ("grid-k", "--snr-db") to field names ("grid_k", "snr_db")."""
    return str(key).strip().lstrip("-").replace("-", "_").lower()


def _normalize_keys(data: dict[str, Any], source: str) -> dict[str, Any]:
    known = set(RunConfig.model_fields)
    result = {}
    for key, value in data.items():
        name = _normalize_key(key)
        if name not in known:
            raise InvalidConfigError(str(key), value, f"unknown setting in {source}")
        result[name] = value
    return result


def _load_yaml_file(path: Path) -> dict:
    """Load a YAML file and return its contents."""
    if not path.exists():
        return {}
    try:
        with open(path, "r", encoding="utf-8") as f:
            content = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigurationError(f"Cannot parse {path}: {e}", code="CONFIG_PARSE") from e
    if content is None:
        return {}
    if not isinstance(content, dict):
        raise ConfigurationError(
            f"{path} must hold key: value pairs, got {type(content).__name__}",
            code="CONFIG_PARSE",
        )
    return content


def _first_error(error: ValidationError, env_prefix: str = "") -> InvalidConfigError:
    detail = error.errors()[0]
    field = ".".join(str(part) for part in detail.get("loc", ())) or "config"
    if env_prefix:
        field = env_prefix + field.upper()
    reason = str(detail.get("msg", "invalid value")).removeprefix("Value error, ")
    return InvalidConfigError(field, detail.get("input"), reason)


def parse_config(
    config_path: Optional[Path] = None,
    flags: Optional[dict[str, Any]] = None,
) -> RunConfig:
    """
    Build the effective configuration.

    Priority, lowest first: packaged defaults, COLORED_SCATTER_SEED, the
    config file, the --full-scale preset, explicit flags. Flags set to
    None are treated as absent.

    Args:
        config_path: Optional flat YAML file keyed by flag names
        flags: Flag values keyed by flag or field name

    Returns:
        Validated RunConfig

    Raises:
        ConfigurationError: If the config file is missing or malformed
        InvalidConfigError: If a value fails validation
    """
    merged = _normalize_keys(_load_yaml_file(DEFAULTS_FILE), "defaults")

    try:
        env = EnvSettings()
    except ValidationError as e:
        raise _first_error(e, env_prefix=EnvSettings.model_config["env_prefix"]) from e
    if env.seed is not None:
        merged["seed"] = env.seed

    if config_path is not None:
        path = Path(config_path)
        if not path.exists():
            raise ConfigurationError(f"Config file not found: {path}", code="CONFIG_NOT_FOUND")
        merged.update(_normalize_keys(_load_yaml_file(path), str(path)))

    overrides = _normalize_keys(
        {k: v for k, v in (flags or {}).items() if v is not None}, "flags"
    )
    if overrides.get("full_scale", merged.get("full_scale", False)):
        merged.update(FULL_SCALE)
        merged["full_scale"] = True
        logger.warning(
            f"Full scale: K={FULL_SCALE['grid_k']}, trials={FULL_SCALE['trials']}; "
            "expect hours of compute"
        )
    merged.update(overrides)

    try:
        return RunConfig.model_validate(merged)
    except ValidationError as e:
        raise _first_error(e) from e


def write_config(config: RunConfig, path: Path) -> None:
    """Write the flat echo of a config so that parse_config(path) reproduces it."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        yaml.safe_dump(config.echo(), f, sort_keys=False)


__all__ = [
    "DEFAULTS_FILE",
    "FULL_SCALE",
    "UNHASHED_FIELDS",
    "EnvSettings",
    "RunConfig",
    "parse_config",
    "write_config",
]
