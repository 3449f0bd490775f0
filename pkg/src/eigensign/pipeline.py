"""Image -> FeatureSet: skin filter, smoothing, biggest blob, crop, eigen-features."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .config import PipelineConfig
from .cropper import BoundingBox, bounding_box, crop_resize, wrist_side
from .errors import PipelineError
from .features import FeatureSet, extract_features
from .imaging import BinaryMask, RgbImage, hsv_preview, mask_to_gray, mask_to_rgb
from .segmenter import biggest_blob, median_smooth, skin_mask

__all__ = ["PipelineResult", "run_pipeline", "features_of", "STAGE_FILES"]

# debug dump names, in pipeline order
STAGE_FILES = (
    "01-rgb.ppm",
    "02-hsv.ppm",
    "03-filtered.pbm",
    "04-smoothed.pbm",
    "05-binary.pgm",
    "06-blob.pbm",
    "07-crop.pbm",
)


@dataclass(frozen=True)
class PipelineResult:
    blob: BinaryMask
    box: BoundingBox
    wrist: str
    crop: BinaryMask
    features: FeatureSet


def run_pipeline(image, config: PipelineConfig = PipelineConfig(),
                 on_stage: Optional[Callable[[str, object], None]] = None) -> PipelineResult:
    """Run every stage on ``image``.

    An :class:`RgbImage` is skin-filtered; a :class:`BinaryMask` is taken as
    an already-filtered skin mask. ``on_stage(filename, raster)`` is called
    for each intermediate raster as soon as it exists.
    """
    emit = on_stage or (lambda name, raster: None)
    if isinstance(image, RgbImage):
        emit(STAGE_FILES[0], image)
        emit(STAGE_FILES[1], hsv_preview(image))
        skin = skin_mask(image, config.skin)
    elif isinstance(image, BinaryMask):
        emit(STAGE_FILES[0], mask_to_rgb(image))
        emit(STAGE_FILES[1], hsv_preview(mask_to_rgb(image)))
        skin = image
    else:
        raise PipelineError(f"cannot segment a {type(image).__name__}; need a color image or a mask")
    emit(STAGE_FILES[2], skin)
    smoothed = median_smooth(skin, config.smooth_radius)
    emit(STAGE_FILES[3], smoothed)
    emit(STAGE_FILES[4], mask_to_gray(smoothed))
    blob = biggest_blob(smoothed)
    emit(STAGE_FILES[5], blob)
    box = bounding_box(blob)
    crop = crop_resize(blob, box, config.crop_side)
    emit(STAGE_FILES[6], crop)
    feats = extract_features(crop, config.eigen_count, config.crop_side)
    return PipelineResult(blob, box, wrist_side(blob, box), crop, feats)


def features_of(image, config: PipelineConfig = PipelineConfig()) -> FeatureSet:
    return run_pipeline(image, config).features
