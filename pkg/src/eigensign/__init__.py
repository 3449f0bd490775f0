"""Static hand-gesture alphabet recognition.

Skin filtering in HSV, biggest-blob hand cropping, per-image eigen-features
and a two-level eigenvector distance classifier.
"""

__version__ = "0.1.0"

from .classifier import ClassificationResult, DistanceRow, Template, classify
from .config import PipelineConfig
from .features import FeatureSet, extract_features
from .imaging import BinaryMask, GrayImage, Hsv, RgbImage, read_pnm, rgb_to_hsv, write_pnm
from .model_store import TemplateDb, load_db, save_db
from .pipeline import features_of, run_pipeline
from .segmenter import SkinRange

__all__ = [
    "BinaryMask",
    "ClassificationResult",
    "DistanceRow",
    "FeatureSet",
    "GrayImage",
    "Hsv",
    "PipelineConfig",
    "RgbImage",
    "SkinRange",
    "Template",
    "TemplateDb",
    "classify",
    "extract_features",
    "features_of",
    "load_db",
    "read_pnm",
    "rgb_to_hsv",
    "run_pipeline",
    "save_db",
    "write_pnm",
]
