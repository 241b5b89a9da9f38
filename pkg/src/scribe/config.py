"""Project configuration: scribe.toml at the project root plus CLI overrides."""

from __future__ import annotations

import sys
from dataclasses import dataclass, replace
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError
from .gateway import BACKEND_KINDS, BackendConfig

CONFIG_FILENAME = "scribe.toml"

_BACKEND_KEYS = {
    "kind": str,
    "model_name": str,
    "endpoint_url": str,
    "max_tokens": int,
    "batch_size": int,
    "temperature": (int, float),
    "top_p": (int, float),
    "auth_token_env_var": str,
    "export_path": str,
}


@dataclass
class GlobalConfig:
    project_root: Path
    backend: BackendConfig
    template_path: Path | None = None
    out_dir: Path | None = None
    force_overwrite: bool = False
    report_path: Path | None = None


def load_backend_config(root: Path) -> BackendConfig:
    """Backend defaults from scribe.toml; plain mock config when absent."""
    path = Path(root) / CONFIG_FILENAME
    if not path.exists():
        return BackendConfig()
    try:
        data = tomllib.loads(path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed {path}: {exc}")
    section = data.get("backend", {})
    if not isinstance(section, dict):
        raise ConfigError(f"{path}: [backend] must be a table")

    kwargs: dict = {}
    for key, value in section.items():
        if key == "local_command":
            if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
                raise ConfigError(f"{path}: backend.local_command must be a list of strings")
            kwargs[key] = tuple(value)
            continue
        expected = _BACKEND_KEYS.get(key)
        if expected is None:
            raise ConfigError(f"{path}: unknown key backend.{key}")
        if not isinstance(value, expected):
            raise ConfigError(f"{path}: backend.{key} has the wrong type")
        kwargs[key] = value
    if "kind" in kwargs and kwargs["kind"] not in BACKEND_KINDS:
        raise ConfigError(
            f"{path}: backend.kind must be one of {BACKEND_KINDS}, got {kwargs['kind']!r}"
        )
    return BackendConfig(**kwargs)


def load_translate_defaults(root: Path) -> dict:
    """Optional [translate] table: template path and output directory."""
    path = Path(root) / CONFIG_FILENAME
    if not path.exists():
        return {}
    data = tomllib.loads(path.read_text(encoding="utf-8"))
    section = data.get("translate", {})
    out: dict = {}
    if isinstance(section, dict):
        if isinstance(section.get("template"), str):
            out["template"] = Path(root) / section["template"]
        if isinstance(section.get("out_dir"), str):
            out["out_dir"] = Path(root) / section["out_dir"]
    return out


def apply_backend_overrides(cfg: BackendConfig, *, kind: str | None = None,
                            model: str | None = None,
                            export_path: str | None = None) -> BackendConfig:
    updates: dict = {}
    if kind:
        updates["kind"] = kind
    if model:
        updates["model_name"] = model
    if export_path:
        updates["export_path"] = export_path
    return replace(cfg, **updates) if updates else cfg
