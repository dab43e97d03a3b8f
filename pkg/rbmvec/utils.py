"""Core file and config helpers."""

import re
from pathlib import Path
from typing import Any, Dict

import yaml

from rbmvec.errors import ConfigError


_ASSIGNMENT = re.compile(r"^\s*([A-Za-z_]\w*)\s*=(.*)$")


def _parse_assignments(config_path: Path, text: str) -> Dict[str, Any]:
    """``key = value`` lines; values are typed as YAML scalars."""
    data: Dict[str, Any] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        match = _ASSIGNMENT.match(line)
        if match is None:
            raise ConfigError(f"{config_path}, line {number}: expected key = value", module="cli")
        key, raw = match.group(1), match.group(2).strip()
        if key in data:
            raise ConfigError(f"{config_path}, line {number}: duplicate key {key!r}", module="cli")
        try:
            value = yaml.safe_load(raw) if raw else None
        except yaml.YAMLError as exc:
            raise ConfigError(f"{config_path}, line {number}: bad value {raw!r}", module="cli") from exc
        if value is None:
            raise ConfigError(f"{config_path}, line {number}: {key} has no value", module="cli")
        data[key] = value
    return data


def load_config(config_path: Path) -> Dict[str, Any]:
    """Load a flat config file: ``key = value`` lines or a YAML mapping.

    A missing file is an error, and so are nested values.
    """
    config_path = Path(config_path)
    if not config_path.exists():
        raise ConfigError(f"config file not found: {config_path}", module="cli")
    text = config_path.read_text(encoding="utf-8")
    content = [line for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if content and _ASSIGNMENT.match(content[0]):
        data: Any = _parse_assignments(config_path, text)
    else:
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse {config_path}: {exc}", module="cli") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{config_path} must hold key = value lines or a key: value mapping", module="cli")
    nested = [k for k, v in data.items() if isinstance(v, dict)]
    if nested:
        raise ConfigError(f"{config_path}: nested keys not allowed ({', '.join(nested)})", module="cli")
    return data


def save_config(config_path: Path, config: Dict[str, Any]) -> None:
    """Save configuration as YAML."""
    write_file(config_path, yaml.safe_dump(config, default_flow_style=False, sort_keys=False))


def write_file(path: Path, content: str) -> None:
    """Write text, creating parent directories; newlines are written verbatim."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(content)


def fmt_float(value: float) -> str:
    """Shortest text that parses back to the same double."""
    return repr(float(value))
