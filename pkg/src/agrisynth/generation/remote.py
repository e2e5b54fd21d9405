"""HTTP client for remote image-generation services.

Wire contract (compatible with the public DALL-E 2 style API, but the
base URL is configurable so any conforming service works):

* text:       POST {base_url}/images/generations
              JSON {"prompt", "n", "size": "WxH", "response_format": "b64_json"}
* variations: POST {base_url}/images/variations
              multipart with an ``image`` PNG part plus ``n`` and ``size``

Responses carry ``{"data": [{"b64_json": ...}, ...]}``. Authentication is
a bearer token read from the environment at request time; the key is
never stored on the client, logged, or serialized.

Failure policy: 429 and 5xx responses, timeouts, and transport errors are
retried with exponential backoff (base 1 s, factor 2) up to
``max_retries`` extra attempts; 401/403 raise immediately. Requests
(including retries) are spaced to honor ``requests_per_minute``.
"""

from __future__ import annotations

import base64
import os
import threading
import time

import httpx

from ..errors import AuthError, BackendUnavailable, DecodeError, RateLimited
from ..image_core import RgbImage, decode_image, encode_png
from .jobs import BackendConfig, GenerationJob

__all__ = ["RemoteBackend"]

_RETRYABLE_STATUS = {429, 500, 502, 503, 504}
_BACKOFF_BASE = 1.0
_BACKOFF_FACTOR = 2.0


class _RateLimiter:
    """Serializes request starts to at most one per interval."""

    def __init__(self, requests_per_minute: int, clock, sleep):
        self._interval = 60.0 / requests_per_minute
        self._clock = clock
        self._sleep = sleep
        self._lock = threading.Lock()
        self._next_allowed = None

    def wait(self) -> None:
        with self._lock:
            now = self._clock()
            if self._next_allowed is not None and now < self._next_allowed:
                self._sleep(self._next_allowed - now)
                now = self._next_allowed
            self._next_allowed = now + self._interval


class RemoteBackend:
    def __init__(
        self,
        config: BackendConfig,
        backend_id: str = "remote",
        client: httpx.Client | None = None,
        sleep=time.sleep,
        clock=time.monotonic,
    ):
        self.config = config
        self.backend_id = backend_id
        self._client = client or httpx.Client(timeout=config.timeout)
        self._sleep = sleep
        self._limiter = _RateLimiter(config.requests_per_minute, clock, sleep)

    def text_to_image(self, job: GenerationJob) -> list[RgbImage]:
        response = self._request_with_retry(
            "POST",
            f"{self.config.base_url.rstrip('/')}/images/generations",
            json={
                "prompt": job.prompt,
                "n": job.count,
                "size": f"{job.size}x{job.size}",
                "response_format": "b64_json",
            },
        )
        return self._decode_payload(response, job)

    def variations(self, job: GenerationJob) -> list[RgbImage]:
        assert isinstance(job.source_image, RgbImage)
        response = self._request_with_retry(
            "POST",
            f"{self.config.base_url.rstrip('/')}/images/variations",
            files={"image": ("source.png", encode_png(job.source_image), "image/png")},
            data={
                "n": str(job.count),
                "size": f"{job.size}x{job.size}",
                "response_format": "b64_json",
            },
        )
        return self._decode_payload(response, job)

    def _request_with_retry(self, method: str, url: str, **kwargs) -> httpx.Response:
        headers = {"Authorization": f"Bearer {self._api_key()}"}
        attempts = self.config.max_retries + 1
        last_status = None
        last_error = None
        for attempt in range(attempts):
            if attempt > 0:
                self._sleep(_BACKOFF_BASE * _BACKOFF_FACTOR ** (attempt - 1))
            self._limiter.wait()
            try:
                response = self._client.request(method, url, headers=headers, **kwargs)
            except httpx.HTTPError as exc:
                last_error = exc
                last_status = None
                continue
            if response.status_code in (401, 403):
                raise AuthError(f"backend rejected the API key (HTTP {response.status_code})")
            if response.status_code in _RETRYABLE_STATUS:
                last_status = response.status_code
                last_error = None
                continue
            if response.status_code >= 400:
                raise BackendUnavailable(
                    f"backend returned HTTP {response.status_code}: {response.text[:200]}"
                )
            return response

        if last_status == 429:
            raise RateLimited(f"backend kept responding 429 across {attempts} attempts")
        if last_status is not None:
            raise BackendUnavailable(
                f"backend returned HTTP {last_status} across {attempts} attempts"
            )
        raise BackendUnavailable(f"backend unreachable after {attempts} attempts: {last_error}")

    def _decode_payload(self, response: httpx.Response, job: GenerationJob) -> list[RgbImage]:
        try:
            items = response.json()["data"]
            images = [decode_image(base64.b64decode(item["b64_json"])) for item in items]
        except (KeyError, ValueError, TypeError, DecodeError) as exc:
            raise BackendUnavailable(f"malformed backend response: {exc}") from exc
        if len(images) != job.count:
            raise BackendUnavailable(
                f"backend returned {len(images)} images, expected {job.count}"
            )
        return images

    def _api_key(self) -> str:
        key = os.environ.get(self.config.api_key_env)
        if not key:
            raise AuthError(
                f"no API key: set the {self.config.api_key_env} environment variable"
            )
        return key
