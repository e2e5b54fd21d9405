"""On-disk cache of generated images.

Layout: ``{root}/{digest}/{index}.png`` plus a ``job.json`` manifest.
The manifest is written last (write-to-temp-then-rename), so its presence
marks a complete entry; readers treat anything else as a miss.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

from ..errors import DecodeError
from ..image_core import RgbImage, decode_image, encode_png
from ..methods import Method
from .jobs import GenerationJob, cache_key, source_payload

__all__ = ["load_cached", "cached_paths", "store_results", "entry_dir"]

MANIFEST_NAME = "job.json"


def entry_dir(root, job: GenerationJob) -> Path:
    return Path(root) / cache_key(job)


def cached_paths(root, job: GenerationJob) -> list[Path] | None:
    """PNG paths of a complete cache entry, or None on a miss.

    Completeness is judged by the manifest (written last) plus file
    presence; pixels are not decoded.
    """
    entry = entry_dir(root, job)
    manifest = entry / MANIFEST_NAME
    if not manifest.is_file():
        return None
    try:
        meta = json.loads(manifest.read_text(encoding="utf-8"))
        count = int(meta["count"])
    except (OSError, ValueError, KeyError):
        return None  # damaged entry: regenerate rather than fail
    paths = [entry / f"{index}.png" for index in range(count)]
    if not all(path.is_file() for path in paths):
        return None
    return paths


def load_cached(root, job: GenerationJob) -> list[RgbImage] | None:
    """Return the cached images for a job, or None on a miss."""
    paths = cached_paths(root, job)
    if paths is None:
        return None
    try:
        return [decode_image(path.read_bytes()) for path in paths]
    except (OSError, DecodeError):
        return None


def store_results(root, job: GenerationJob, images: list[RgbImage]) -> Path:
    """Persist a job's outputs atomically; returns the entry directory."""
    entry = entry_dir(root, job)
    entry.mkdir(parents=True, exist_ok=True)
    for index, image in enumerate(images):
        _write_atomic(entry / f"{index}.png", encode_png(image))

    manifest = {
        "digest": cache_key(job),
        "kind": job.kind.value,
        "count": job.count,
        "size": job.size,
        "backend_id": job.backend_id,
    }
    if job.kind is Method.TEXT_TO_IMAGE:
        manifest["prompt"] = job.prompt
    else:
        manifest["source_sha256"] = hashlib.sha256(
            source_payload(job.source_image)
        ).hexdigest()
    _write_atomic(
        entry / MANIFEST_NAME,
        json.dumps(manifest, indent=2, sort_keys=True).encode("utf-8"),
    )
    return entry


def _write_atomic(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)
