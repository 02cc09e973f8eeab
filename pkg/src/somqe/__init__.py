"""Change detection in image series via self-organizing map quantization error."""

from .imageio import FeatureMode, ImageBuffer, decode_image, encode_image, extract_samples
from .persist import load_map, save_map
from .series import QeSeriesReport, SeriesConfig, compare_series, run_series
from .som import (GridIndex, SomMap, TrainConfig, bmu, decay, init_map, neighborhood_weight,
                  quantization_error, train)

__version__ = "0.1.0"

__all__ = [
    "FeatureMode", "GridIndex", "ImageBuffer", "QeSeriesReport", "SeriesConfig", "SomMap",
    "TrainConfig", "bmu", "compare_series", "decay", "decode_image", "encode_image",
    "extract_samples", "init_map", "load_map", "neighborhood_weight", "quantization_error",
    "run_series", "save_map", "train",
]
