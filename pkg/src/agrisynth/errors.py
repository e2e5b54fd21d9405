"""Exception hierarchy shared across the toolkit.

Everything raised on purpose derives from :class:`AgrisynthError` so the CLI
can map failures to a single nonzero exit code.
"""


class AgrisynthError(Exception):
    """Base class for all toolkit errors."""


class IoError(AgrisynthError):
    """A file is missing, unreadable, or unwritable."""


class DecodeError(AgrisynthError):
    """An image payload is corrupt or in an unsupported format."""


class InvalidDimension(AgrisynthError):
    """A requested image dimension is out of range (e.g. zero)."""


class DimensionMismatch(AgrisynthError):
    """Two planes that must agree in shape (or dynamic range) do not."""


class InvalidConfig(AgrisynthError):
    """A configuration value violates its documented constraints."""


class TooSmall(AgrisynthError):
    """An input plane is too small for the requested operation."""


class InvalidJob(AgrisynthError):
    """A generation job violates its contract (bad count, missing prompt...)."""


class InvalidSourceImage(AgrisynthError):
    """A variation job's source image is missing or undecodable."""


class BackendUnavailable(AgrisynthError):
    """The generation backend could not be reached after retries."""


class RateLimited(AgrisynthError):
    """The backend kept responding 429 past the retry budget."""


class AuthError(AgrisynthError):
    """The backend rejected (or we could not find) the API credential."""


class MissingGroundTruth(AgrisynthError):
    """An experiment references a ground-truth file that does not exist."""


class EmptyInput(AgrisynthError):
    """An aggregation was asked to summarize zero records."""


class EmptyPool(AgrisynthError):
    """A survey session was requested over an empty image pool."""


class UnknownSession(AgrisynthError):
    """A rating referenced a session id the service does not know."""


class UnknownItem(AgrisynthError):
    """A rating referenced an item id outside the survey pool."""


class ScoreOutOfRange(AgrisynthError):
    """A survey score fell outside the 1-5 scale."""


class DuplicateRating(AgrisynthError):
    """A (session, item) pair was rated twice; re-rating is rejected."""
