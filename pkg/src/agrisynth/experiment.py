"""End-to-end experiment orchestration.

For every fruit-crop category: generate images by each configured method,
preprocess generated and ground-truth images identically (grayscale, then
bilinear resize to 256x256), score each generated image against its
category's ground truth, and aggregate the scores into summary artifacts
(records.csv, summary.json, heatmap.csv).

Every generated image is compared only against the single ground-truth
image of its own category. A self-check lane scores each ground truth
against itself and is reported separately (self_check.csv), never mixed
into the summary statistics.
"""

from __future__ import annotations

import json
import math
import shutil
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import BackendUnavailable, EmptyInput, IoError, MissingGroundTruth
from .generation import (
    BackendConfig,
    GenerationJob,
    RemoteBackend,
    StubBackend,
    generate_to_files,
)
from .image_core import ImagePlane, RgbImage, load_image, resize_bilinear, to_grayscale
from .methods import GENERATION_METHODS, Method
from .metrics import FSIM_INPUT_SIZE, FsimConfig, MetricRecord, fsim, mse, psnr

__all__ = [
    "CategorySpec",
    "ExperimentConfig",
    "ExperimentReport",
    "SummaryTable",
    "preprocess",
    "generate_dataset",
    "evaluate_dataset",
    "run_experiment",
    "aggregate_metrics",
    "render_report",
    "load_summary",
    "read_records_csv",
]

PROMPT_TEMPLATE = "{name} in the field for harvesting"
METRIC_NAMES = ("mse", "psnr", "fsim")
RECORDS_HEADER = "category,method,image_id,mse,psnr,fsim"


@dataclass(frozen=True)
class CategorySpec:
    name: str
    ground_truth_path: Path
    prompt: str = ""

    def resolved_prompt(self) -> str:
        return self.prompt or PROMPT_TEMPLATE.format(name=self.name)


@dataclass
class ExperimentConfig:
    categories: list[CategorySpec]
    output_dir: Path
    methods: tuple[Method, ...] = GENERATION_METHODS
    images_per_method: int = 4
    image_size: int = 1024
    seed: int = 0
    fsim: FsimConfig = field(default_factory=FsimConfig)
    backend: BackendConfig | None = None  # None selects the offline stub
    cache_dir: Path | None = None  # default: {output_dir}/cache
    workers: int = 4

    def __post_init__(self):
        self.output_dir = Path(self.output_dir)
        if self.cache_dir is None:
            self.cache_dir = self.output_dir / "cache"
        self.cache_dir = Path(self.cache_dir)
        self.methods = tuple(Method(m) for m in self.methods)

    def images_dir(self) -> Path:
        return self.output_dir / "images"

    def build_backend(self):
        if self.backend is None:
            return StubBackend(seed=self.seed)
        return RemoteBackend(self.backend)


@dataclass
class SummaryTable:
    """Order statistics per (category, method, metric) plus the relative
    change of the variation method's grand means against the text method's."""

    rows: dict
    percent_changes: dict
    excluded_infinite_psnr: int = 0

    def to_json_dict(self) -> dict:
        nested: dict = {}
        for (category, method, metric), stats in self.rows.items():
            nested.setdefault(category, {}).setdefault(str(method), {})[metric] = stats
        return {
            "rows": nested,
            "percent_changes": self.percent_changes,
            "excluded_infinite_psnr": self.excluded_infinite_psnr,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "SummaryTable":
        rows = {}
        for category, methods in data["rows"].items():
            for method, metrics in methods.items():
                for metric, stats in metrics.items():
                    rows[(category, Method(method), metric)] = stats
        return cls(
            rows=rows,
            percent_changes=data["percent_changes"],
            excluded_infinite_psnr=data["excluded_infinite_psnr"],
        )


@dataclass
class ExperimentReport:
    records: list[MetricRecord]
    self_check: list[MetricRecord]
    summary: SummaryTable | None
    complete: bool
    error: str | None = None


def preprocess(image: RgbImage) -> ImagePlane:
    """The standard metric preprocessing: grayscale then 256x256 resize."""
    return resize_bilinear(to_grayscale(image), FSIM_INPUT_SIZE, FSIM_INPUT_SIZE)


def _check_ground_truth(cfg: ExperimentConfig) -> None:
    if not cfg.categories:
        raise EmptyInput("experiment config names no categories")
    for cat in cfg.categories:
        if not Path(cat.ground_truth_path).is_file():
            raise MissingGroundTruth(f"ground truth missing: {cat.ground_truth_path}")


def generate_dataset(
    cfg: ExperimentConfig,
    dataset_root: Path | None = None,
    methods: tuple[Method, ...] | None = None,
    categories: list[str] | None = None,
) -> dict:
    """Generate every (category, method) image set into the dataset layout
    ``{root}/{category}/{method}/{index:03d}.png``. Returns paths per pair.

    Fails fast on missing ground truth. Jobs run concurrently up to
    ``cfg.workers``; outputs are cached so reruns are free.
    """
    _check_ground_truth(cfg)
    root = Path(dataset_root) if dataset_root is not None else cfg.images_dir()
    wanted_methods = methods or cfg.methods
    wanted = [
        c for c in cfg.categories if categories is None or c.name in categories
    ]
    backend = cfg.build_backend()

    def produce(cat: CategorySpec, method: Method) -> list[Path]:
        if method is Method.TEXT_TO_IMAGE:
            job = GenerationJob(
                kind=method,
                prompt=cat.resolved_prompt(),
                count=cfg.images_per_method,
                size=cfg.image_size,
                backend_id=backend.backend_id,
            )
        else:
            job = GenerationJob(
                kind=method,
                source_image=load_image(cat.ground_truth_path),
                count=cfg.images_per_method,
                size=cfg.image_size,
                backend_id=backend.backend_id,
            )
        cached = generate_to_files(job, backend, cfg.cache_dir)
        out_dir = root / cat.name / method.value
        out_dir.mkdir(parents=True, exist_ok=True)
        paths = []
        for index, source in enumerate(cached):
            path = out_dir / f"{index:03d}.png"
            shutil.copyfile(source, path)
            paths.append(path)
        return paths

    pairs = [(cat, method) for cat in wanted for method in wanted_methods]
    results: dict = {}
    with ThreadPoolExecutor(max_workers=max(1, cfg.workers)) as pool:
        futures = [(cat, method, pool.submit(produce, cat, method)) for cat, method in pairs]
        error: BackendUnavailable | None = None
        for cat, method, future in futures:
            try:
                results[(cat.name, method)] = future.result()
            except BackendUnavailable as exc:
                error = exc
    if error is not None:
        raise error
    return results


def evaluate_dataset(
    cfg: ExperimentConfig, dataset_root: Path | None = None, write: bool = True
) -> ExperimentReport:
    """Score every dataset image against its category's ground truth."""
    _check_ground_truth(cfg)
    root = Path(dataset_root) if dataset_root is not None else cfg.images_dir()

    records: list[MetricRecord] = []
    self_check: list[MetricRecord] = []
    try:
        for cat in cfg.categories:
            gt_plane = preprocess(load_image(cat.ground_truth_path))
            self_check.append(
                _score(cat.name, Method.GROUND_TRUTH, f"{cat.name}/ground_truth", gt_plane, gt_plane, cfg.fsim)
            )
            for method in cfg.methods:
                directory = root / cat.name / method.value
                if not directory.is_dir():
                    continue
                for path in sorted(directory.glob("*.png")):
                    plane = preprocess(load_image(path))
                    image_id = f"{cat.name}/{method.value}/{path.stem}"
                    records.append(_score(cat.name, method, image_id, gt_plane, plane, cfg.fsim))
    except KeyboardInterrupt:
        # flush whatever was scored before the interrupt, mark incomplete
        if write and records:
            partial = ExperimentReport(
                records=records,
                self_check=self_check,
                summary=aggregate_metrics(records),
                complete=False,
                error="interrupted",
            )
            render_report(partial.summary, records, "csv", cfg.output_dir, self_check=self_check)
            _write_run_status(cfg.output_dir, partial)
        raise

    if not records:
        raise EmptyInput(f"no dataset images found under {root}")

    summary = aggregate_metrics(records)
    report = ExperimentReport(records=records, self_check=self_check, summary=summary, complete=True)
    if write:
        render_report(summary, records, "csv", cfg.output_dir, self_check=self_check)
        _write_run_status(cfg.output_dir, report)
    return report


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Generate, score, aggregate, and persist. On backend failure the
    already-generated images are still scored and flushed, the run status
    is marked incomplete, and the error propagates."""
    _check_ground_truth(cfg)
    try:
        generate_dataset(cfg)
    except BackendUnavailable as exc:
        partial: ExperimentReport
        try:
            partial = evaluate_dataset(cfg, write=False)
        except EmptyInput:
            partial = ExperimentReport([], [], None, complete=False, error=str(exc))
        partial.complete = False
        partial.error = str(exc)
        if partial.summary is not None:
            render_report(partial.summary, partial.records, "csv", cfg.output_dir, self_check=partial.self_check)
        _write_run_status(cfg.output_dir, partial)
        raise
    return evaluate_dataset(cfg)


def _score(category, method, image_id, gt_plane, plane, fsim_cfg) -> MetricRecord:
    return MetricRecord(
        category=category,
        method=method,
        image_id=image_id,
        mse=mse(gt_plane, plane),
        psnr=psnr(gt_plane, plane),
        fsim=fsim(gt_plane, plane, fsim_cfg),
    )


# --- aggregation ------------------------------------------------------------


def aggregate_metrics(records: list[MetricRecord]) -> SummaryTable:
    """Order statistics per (category, method, metric); quartiles use the
    linear-interpolation convention. Infinite PSNR values are excluded from
    all statistics and counted in ``excluded_infinite_psnr``; the percent
    change per metric compares grand means (all categories pooled) of the
    variation method against the text method."""
    if not records:
        raise EmptyInput("no records to aggregate")

    groups: dict = {}
    excluded = 0
    for record in records:
        for metric in METRIC_NAMES:
            value = getattr(record, metric)
            if metric == "psnr" and math.isinf(value):
                excluded += 1
                continue
            groups.setdefault((record.category, record.method, metric), []).append(value)

    rows = {}
    for key, values in groups.items():
        # sorting first makes every statistic independent of record order
        data = np.sort(np.asarray(values, dtype=np.float64))
        rows[key] = {
            "mean": float(data.mean()),
            "min": float(data[0]),
            "q1": float(np.quantile(data, 0.25, method="linear")),
            "median": float(np.quantile(data, 0.50, method="linear")),
            "q3": float(np.quantile(data, 0.75, method="linear")),
            "max": float(data[-1]),
            "n": int(data.size),
        }

    percent_changes = {}
    for metric in METRIC_NAMES:
        text_values = [
            v
            for (category, method, m), values in groups.items()
            if m == metric and method is Method.TEXT_TO_IMAGE
            for v in values
        ]
        variation_values = [
            v
            for (category, method, m), values in groups.items()
            if m == metric and method is Method.IMAGE_VARIATION
            for v in values
        ]
        if text_values and variation_values:
            mean_text = sum(sorted(text_values)) / len(text_values)
            mean_variation = sum(sorted(variation_values)) / len(variation_values)
            percent_changes[metric] = 100.0 * (mean_variation - mean_text) / mean_text

    return SummaryTable(rows=rows, percent_changes=percent_changes, excluded_infinite_psnr=excluded)


# --- rendering --------------------------------------------------------------


def render_report(
    table: SummaryTable,
    records: list[MetricRecord],
    format: str = "csv",
    output_dir: Path | None = None,
    self_check: list[MetricRecord] | None = None,
) -> list[Path]:
    """Write records, summary, and heatmap files; returns the paths.

    ``format`` selects the tabular encoding (csv or json) for records and
    heatmap; the summary is always JSON. Output is byte-deterministic for
    identical inputs.
    """
    if not table.rows:
        raise EmptyInput("summary table has no rows")
    if format not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {format}")
    out = Path(output_dir) if output_dir is not None else Path(".")
    try:
        out.mkdir(parents=True, exist_ok=True)
        written = []

        if format == "csv":
            records_path = out / "records.csv"
            records_path.write_text(_records_csv(records), encoding="utf-8")
            heatmap_path = out / "heatmap.csv"
            heatmap_path.write_text(_heatmap_csv(table, records), encoding="utf-8")
        else:
            records_path = out / "records.json"
            records_path.write_text(_records_json(records), encoding="utf-8")
            heatmap_path = out / "heatmap.json"
            heatmap_path.write_text(_heatmap_json(table, records), encoding="utf-8")
        written.extend([records_path, heatmap_path])

        summary_path = out / "summary.json"
        summary_path.write_text(
            json.dumps(table.to_json_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        written.append(summary_path)

        if self_check:
            check_path = out / "self_check.csv"
            check_path.write_text(_records_csv(self_check), encoding="utf-8")
            written.append(check_path)
        return written
    except OSError as exc:
        raise IoError(f"cannot write report files to {out}: {exc}") from exc


def load_summary(path) -> SummaryTable:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return SummaryTable.from_json_dict(data)


def read_records_csv(path) -> list[MetricRecord]:
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise IoError(f"cannot read records from {path}: {exc}") from exc
    if not lines or lines[0] != RECORDS_HEADER:
        raise EmptyInput(f"{path} is not a records file (missing header)")
    records = []
    for line in lines[1:]:
        if not line:
            continue
        category, method, image_id, mse_s, psnr_s, fsim_s = line.split(",")
        records.append(
            MetricRecord(
                category=category,
                method=Method(method),
                image_id=image_id,
                mse=float(mse_s),
                psnr=float(psnr_s),
                fsim=float(fsim_s),
            )
        )
    if not records:
        raise EmptyInput(f"{path} holds no records")
    return records


def _format_value(value: float) -> str:
    return "inf" if math.isinf(value) else repr(float(value))


def _records_csv(records: list[MetricRecord]) -> str:
    lines = [RECORDS_HEADER]
    for r in records:
        lines.append(
            f"{r.category},{r.method.value},{r.image_id},"
            f"{_format_value(r.mse)},{_format_value(r.psnr)},{_format_value(r.fsim)}"
        )
    return "\n".join(lines) + "\n"


def _records_json(records: list[MetricRecord]) -> str:
    payload = [
        {
            "category": r.category,
            "method": r.method.value,
            "image_id": r.image_id,
            "mse": r.mse if math.isfinite(r.mse) else "inf",
            "psnr": r.psnr if math.isfinite(r.psnr) else "inf",
            "fsim": r.fsim,
        }
        for r in records
    ]
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _heatmap_cells(table: SummaryTable, records: list[MetricRecord]):
    categories = list(dict.fromkeys(r.category for r in records))
    methods = [m for m in GENERATION_METHODS if any(key[1] is m for key in table.rows)]
    columns = [(method, metric) for method in methods for metric in METRIC_NAMES]
    cells = []
    for category in categories:
        row = []
        for method, metric in columns:
            stats = table.rows.get((category, method, metric))
            row.append(stats["mean"] if stats else None)
        cells.append((category, row))
    return columns, cells


def _heatmap_csv(table: SummaryTable, records: list[MetricRecord]) -> str:
    columns, cells = _heatmap_cells(table, records)
    header = "category," + ",".join(f"{m.value}_{metric}" for m, metric in columns)
    lines = [header]
    for category, row in cells:
        rendered = [category] + ["" if v is None else repr(v) for v in row]
        lines.append(",".join(rendered))
    return "\n".join(lines) + "\n"


def _heatmap_json(table: SummaryTable, records: list[MetricRecord]) -> str:
    columns, cells = _heatmap_cells(table, records)
    payload = {
        "columns": [f"{m.value}_{metric}" for m, metric in columns],
        "rows": {category: row for category, row in cells},
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _write_run_status(output_dir: Path, report: ExperimentReport) -> None:
    output_dir.mkdir(parents=True, exist_ok=True)
    status = {
        "complete": report.complete,
        "records": len(report.records),
        "error": report.error,
    }
    (output_dir / "run.json").write_text(
        json.dumps(status, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
