"""Generation job descriptions and their cache keys."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from ..errors import InvalidConfig, InvalidJob
from ..image_core import RgbImage, decode_image
from ..methods import GENERATION_METHODS, Method

__all__ = ["GenerationJob", "BackendConfig", "cache_key", "VALID_SIZES"]

VALID_SIZES = (256, 512, 1024)
MAX_COUNT = 10


@dataclass(frozen=True)
class GenerationJob:
    """One unit of generator work: a prompt or a source image, plus knobs.

    Text jobs carry a non-empty ``prompt`` and no source; variation jobs
    carry a ``source_image`` (an :class:`RgbImage`, or raw encoded bytes
    that the generator will decode) and no prompt.
    """

    kind: Method
    prompt: str = ""
    source_image: RgbImage | bytes | None = None
    count: int = 4
    size: int = 1024
    backend_id: str = "stub"

    def __post_init__(self):
        object.__setattr__(self, "kind", Method(self.kind))

    def validate(self) -> None:
        if self.kind not in GENERATION_METHODS:
            raise InvalidJob(f"not a generation method: {self.kind}")
        if self.count < 1 or self.count > MAX_COUNT:
            raise InvalidJob(f"count must be in 1..{MAX_COUNT}, got {self.count}")
        if self.size not in VALID_SIZES:
            raise InvalidJob(f"size must be one of {VALID_SIZES}, got {self.size}")
        if self.kind is Method.TEXT_TO_IMAGE:
            if not self.prompt:
                raise InvalidJob("text job needs a non-empty prompt")
            if self.source_image is not None:
                raise InvalidJob("text job must not carry a source image")
        else:
            if self.prompt:
                raise InvalidJob("variation job must not carry a prompt")
            if self.source_image is None:
                raise InvalidJob("variation job needs a source image")


@dataclass(frozen=True)
class BackendConfig:
    """Connection settings for a remote generation service.

    The API key is read from the environment variable named by
    ``api_key_env`` at request time; it is never stored or serialized.
    """

    base_url: str
    api_key_env: str = "GENERATOR_API_KEY"
    timeout: float = 30.0
    max_retries: int = 3
    requests_per_minute: int = 60

    def __post_init__(self):
        if self.max_retries < 0:
            raise InvalidConfig(f"max_retries must be >= 0, got {self.max_retries}")
        if self.requests_per_minute < 1:
            raise InvalidConfig(
                f"requests_per_minute must be >= 1, got {self.requests_per_minute}"
            )
        if self.timeout <= 0:
            raise InvalidConfig(f"timeout must be positive, got {self.timeout}")


def cache_key(job: GenerationJob) -> str:
    """Stable SHA-256 hex digest identifying a job's outputs.

    Byte serialization (NUL-separated, hashed with SHA-256):

        kind \\x00 payload \\x00 count \\x00 size \\x00 backend_id

    where ``payload`` is the UTF-8 prompt for text jobs, and for variation
    jobs the decoded source pixels as
    ``b"rgb8:{width}x{height}:" + row-major RGB bytes``.
    """
    if job.kind is Method.TEXT_TO_IMAGE:
        payload = job.prompt.encode("utf-8")
    else:
        payload = source_payload(job.source_image)
    parts = [
        job.kind.value.encode("ascii"),
        payload,
        str(job.count).encode("ascii"),
        str(job.size).encode("ascii"),
        job.backend_id.encode("utf-8"),
    ]
    return hashlib.sha256(b"\x00".join(parts)).hexdigest()


def source_payload(source) -> bytes:
    """Canonical bytes of a variation source for hashing purposes."""
    if isinstance(source, RgbImage):
        header = f"rgb8:{source.width}x{source.height}:".encode("ascii")
        return header + source.pixels.tobytes()
    if isinstance(source, bytes):
        return source_payload(decode_image(source))
    raise InvalidJob(f"variation source must be RgbImage or bytes, got {type(source)}")
