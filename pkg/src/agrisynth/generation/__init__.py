"""Pluggable image generation: offline stub or remote HTTP backend, with a
content-addressed on-disk cache in front of both."""

from __future__ import annotations

from dataclasses import replace

from pathlib import Path

from ..errors import BackendUnavailable, DecodeError, InvalidJob, InvalidSourceImage
from ..image_core import RgbImage, decode_image
from ..methods import Method
from .cache import cached_paths, load_cached, store_results
from .jobs import BackendConfig, GenerationJob, cache_key
from .remote import RemoteBackend
from .stub import StubBackend

__all__ = [
    "GenerationJob",
    "BackendConfig",
    "StubBackend",
    "RemoteBackend",
    "cache_key",
    "generate_text_to_image",
    "generate_variations",
    "generate_to_files",
]


def generate_text_to_image(job: GenerationJob, backend, cache_root) -> list[RgbImage]:
    """Produce (or recall from cache) the images for a text job.

    Results are written to the cache under the job's key before returning;
    a warm cache never touches the backend.
    """
    job.validate()
    if job.kind is not Method.TEXT_TO_IMAGE:
        raise InvalidJob(f"expected a text_to_image job, got {job.kind}")
    cached = load_cached(cache_root, job)
    if cached is not None:
        return cached
    images = backend.text_to_image(job)
    _check_contract(images, job)
    store_results(cache_root, job, images)
    return images


def generate_variations(job: GenerationJob, backend, cache_root) -> list[RgbImage]:
    """Produce (or recall from cache) the variations of a source image."""
    job = _checked_variation_job(job)
    cached = load_cached(cache_root, job)
    if cached is not None:
        return cached
    images = backend.variations(job)
    _check_contract(images, job)
    store_results(cache_root, job, images)
    return images


def generate_to_files(job: GenerationJob, backend, cache_root) -> list[Path]:
    """Like the generate functions, but hands back the cached PNG paths
    instead of decoded pixels (callers that only move files around skip a
    decode/encode round trip)."""
    if job.kind is Method.IMAGE_VARIATION:
        job = _checked_variation_job(job)
    else:
        job.validate()
    existing = cached_paths(cache_root, job)
    if existing is not None:
        return existing
    if job.kind is Method.TEXT_TO_IMAGE:
        images = backend.text_to_image(job)
    else:
        images = backend.variations(job)
    _check_contract(images, job)
    store_results(cache_root, job, images)
    paths = cached_paths(cache_root, job)
    assert paths is not None, "store_results must leave a complete entry"
    return paths


def _checked_variation_job(job: GenerationJob) -> GenerationJob:
    job.validate()
    if job.kind is not Method.IMAGE_VARIATION:
        raise InvalidJob(f"expected an image_variation job, got {job.kind}")
    if isinstance(job.source_image, bytes):
        try:
            job = replace(job, source_image=decode_image(job.source_image))
        except DecodeError as exc:
            raise InvalidSourceImage(f"variation source is not decodable: {exc}") from exc
    return job


def _check_contract(images: list[RgbImage], job: GenerationJob) -> None:
    if len(images) != job.count:
        raise BackendUnavailable(
            f"backend produced {len(images)} images for a count-{job.count} job"
        )
    for image in images:
        if (image.width, image.height) != (job.size, job.size):
            raise BackendUnavailable(
                f"backend produced {image.width}x{image.height}, wanted {job.size}"
            )
