"""Top-level YAML configuration.

One file configures the whole toolkit; the schema is documented in the
README. Unknown keys are rejected by name (including their path, e.g.
``backend.retrys``) so typos never silently fall back to defaults.
Relative paths resolve against the config file's directory. CLI flags
override file values.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import yaml

from .errors import InvalidConfig, IoError
from .experiment import CategorySpec, ExperimentConfig
from .generation import BackendConfig
from .methods import Method
from .metrics import FsimConfig

__all__ = ["SurveySettings", "TopLevelConfig", "load_config"]

DEFAULT_SURVEY_PORT = 8765


@dataclass
class SurveySettings:
    pool: Path | None = None
    port: int = DEFAULT_SURVEY_PORT
    seed: int = 0
    admin: bool = False
    store: Path = Path("ratings.ndjson")
    static_dir: Path | None = None


@dataclass
class TopLevelConfig:
    experiment: ExperimentConfig | None
    survey: SurveySettings
    path: Path

    def require_experiment(self) -> ExperimentConfig:
        if self.experiment is None:
            raise InvalidConfig(
                f"{self.path} has no categories section; nothing to generate or evaluate"
            )
        return self.experiment


class _Section:
    """Dict wrapper that tracks consumed keys and names the leftovers."""

    def __init__(self, data: dict, path: str):
        if not isinstance(data, dict):
            raise InvalidConfig(f"config section '{path or '<root>'}' must be a mapping")
        self.data = data
        self.path = path
        self.consumed: set = set()

    def take(self, key: str, default=None):
        self.consumed.add(key)
        return self.data.get(key, default)

    def has(self, key: str) -> bool:
        return key in self.data

    def finish(self) -> None:
        unknown = set(self.data) - self.consumed
        if unknown:
            name = sorted(unknown)[0]
            full = f"{self.path}.{name}" if self.path else name
            raise InvalidConfig(f"unknown config key: {full}")

    def child(self, key: str) -> "_Section | None":
        raw = self.take(key)
        if raw is None:
            return None
        return _Section(raw, f"{self.path}.{key}" if self.path else key)


def load_config(path) -> TopLevelConfig:
    config_path = Path(path)
    try:
        text = config_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read config file {config_path}: {exc}") from exc
    try:
        raw = yaml.safe_load(text) or {}
    except yaml.YAMLError as exc:
        raise InvalidConfig(f"config file {config_path} is not valid YAML: {exc}") from exc

    base = config_path.parent
    root = _Section(raw, "")

    experiment = _parse_experiment(root, base)
    survey = _parse_survey(root.child("survey"), base)
    root.finish()
    return TopLevelConfig(experiment=experiment, survey=survey, path=config_path)


def _resolve(base: Path, value) -> Path:
    p = Path(value)
    return p if p.is_absolute() else base / p


def _parse_experiment(root: _Section, base: Path) -> ExperimentConfig | None:
    categories_raw = root.take("categories")
    seed = int(root.take("seed", 0))
    output_dir = _resolve(base, root.take("output_dir", "out"))
    images_per_method = int(root.take("images_per_method", 4))
    image_size = int(root.take("image_size", 1024))
    workers = int(root.take("workers", 4))
    cache_dir = root.take("cache_dir")
    methods_raw = root.take("methods")
    backend = _parse_backend(root.child("backend"))
    fsim_cfg = _parse_fsim(root.child("fsim"))

    if categories_raw is None:
        return None
    if not isinstance(categories_raw, list) or not categories_raw:
        raise InvalidConfig("categories must be a non-empty list")

    categories = []
    for index, entry in enumerate(categories_raw):
        section = _Section(entry, f"categories[{index}]")
        name = section.take("name")
        if not name:
            raise InvalidConfig(f"categories[{index}] needs a name")
        gt = section.take("ground_truth")
        if not gt:
            raise InvalidConfig(f"categories[{index}] ({name}) needs a ground_truth path")
        prompt = section.take("prompt", "")
        section.finish()
        categories.append(
            CategorySpec(name=str(name), ground_truth_path=_resolve(base, gt), prompt=str(prompt or ""))
        )

    methods = None
    if methods_raw is not None:
        try:
            methods = tuple(Method(m) for m in methods_raw)
        except ValueError as exc:
            raise InvalidConfig(f"bad methods list: {exc}") from exc

    kwargs = dict(
        categories=categories,
        output_dir=output_dir,
        images_per_method=images_per_method,
        image_size=image_size,
        seed=seed,
        backend=backend,
        workers=workers,
        fsim=fsim_cfg or FsimConfig(),
    )
    if methods is not None:
        kwargs["methods"] = methods
    if cache_dir is not None:
        kwargs["cache_dir"] = _resolve(base, cache_dir)
    return ExperimentConfig(**kwargs)


def _parse_backend(section: _Section | None) -> BackendConfig | None:
    if section is None:
        return None
    kind = section.take("kind", "remote")
    if kind == "stub":
        section.finish()
        return None
    if kind != "remote":
        raise InvalidConfig(f"backend.kind must be 'stub' or 'remote', got {kind!r}")
    base_url = section.take("base_url")
    if not base_url:
        raise InvalidConfig("backend.base_url is required for a remote backend")
    config = BackendConfig(
        base_url=str(base_url),
        api_key_env=str(section.take("api_key_env", "GENERATOR_API_KEY")),
        timeout=float(section.take("timeout", 30.0)),
        max_retries=int(section.take("max_retries", 3)),
        requests_per_minute=int(section.take("requests_per_minute", 60)),
    )
    section.finish()
    return config


def _parse_fsim(section: _Section | None) -> FsimConfig | None:
    if section is None:
        return None
    kwargs = {}
    simple = {
        "scales": int,
        "canny_low": float,
        "canny_high": float,
        "canny_sigma": float,
        "kernel_size": int,
        "gabor_sigma": float,
        "gabor_gamma": float,
        "luminance_stabilizer": float,
        "contrast_stabilizer": float,
        "structure_stabilizer": float,
    }
    for key, cast in simple.items():
        if section.has(key):
            kwargs[key] = cast(section.take(key))
        else:
            section.take(key)
    for key in ("scale_weights", "orientations", "wavelengths"):
        if section.has(key):
            kwargs[key] = tuple(float(v) for v in section.take(key))
        else:
            section.take(key)
    section.finish()
    config = FsimConfig(**kwargs)
    config.validate()
    return config


def _parse_survey(section: _Section | None, base: Path) -> SurveySettings:
    if section is None:
        return SurveySettings()
    pool = section.take("pool")
    static_dir = section.take("static_dir")
    settings = SurveySettings(
        pool=_resolve(base, pool) if pool else None,
        port=int(section.take("port", DEFAULT_SURVEY_PORT)),
        seed=int(section.take("seed", 0)),
        admin=bool(section.take("admin", False)),
        store=_resolve(base, section.take("store", "ratings.ndjson")),
        static_dir=_resolve(base, static_dir) if static_dir else None,
    )
    section.finish()
    return settings
