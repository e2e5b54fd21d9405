"""Canonical labels for how an image came to exist."""

from enum import Enum


class Method(str, Enum):
    """Provenance of an image: generated from text, varied from a source
    image, or captured in the field."""

    TEXT_TO_IMAGE = "text_to_image"
    IMAGE_VARIATION = "image_variation"
    GROUND_TRUTH = "ground_truth"

    def __str__(self) -> str:  # so f-strings render the wire value
        return self.value


GENERATION_METHODS = (Method.TEXT_TO_IMAGE, Method.IMAGE_VARIATION)
