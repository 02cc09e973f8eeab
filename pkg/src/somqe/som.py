"""Kohonen self-organizing map: training, BMU search and quantization error.

The map is a rectangular grid of ``rows x cols`` weight vectors stored
row-major in a ``(rows * cols, dim)`` float64 array.  Training is the classic
online rule with linearly decaying radius and learning rate.  All randomness
comes from a single PCG64 stream seeded by :attr:`TrainConfig.seed`: first
``rows * cols`` sample indices for initialization, then one index per
training step.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels

NEIGHBORHOODS = ("gaussian", "bubble")
TOPOLOGIES = ("rectangular", "hexagonal")


class GridIndex(NamedTuple):
    row: int
    col: int


@dataclass(frozen=True)
class TrainConfig:
    rows: int = 16
    cols: int = 16
    radius0: float = 5.0
    radius_final: float = 1.0
    alpha0: float = 0.2
    alpha_final: float = 0.01
    iterations: int = 10000
    neighborhood: str = "gaussian"
    topology: str = "rectangular"
    seed: int = 0
    # checked against the data when set; None means "take it from the data"
    dim: int | None = None

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"map size must be positive, got {self.rows}x{self.cols}")
        if self.dim is not None and self.dim < 1:
            raise ValueError(f"dim must be positive, got {self.dim}")
        if not (0 < self.radius_final <= self.radius0):
            raise ValueError("need 0 < radius_final <= radius0")
        if not (0 < self.alpha_final <= self.alpha0 <= 1):
            raise ValueError("need 0 < alpha_final <= alpha0 <= 1")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.neighborhood not in NEIGHBORHOODS:
            raise ValueError(f"unknown neighborhood {self.neighborhood!r}")
        if self.topology not in TOPOLOGIES:
            raise ValueError(f"unknown topology {self.topology!r}")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must be a 64-bit unsigned integer")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(eq=False)
class SomMap:
    rows: int
    cols: int
    weights: np.ndarray
    topology: str = "rectangular"

    def __post_init__(self):
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != self.rows * self.cols or w.shape[1] < 1:
            raise ValueError(
                f"weights must have shape ({self.rows * self.cols}, dim), got {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        self.weights = w

    @property
    def dim(self) -> int:
        return self.weights.shape[1]

    def node(self, index: GridIndex) -> np.ndarray:
        return self.weights[index[0] * self.cols + index[1]]

    def coords(self) -> np.ndarray:
        return grid_coords(self.rows, self.cols, self.topology)

    def __eq__(self, other):
        if not isinstance(other, SomMap):
            return NotImplemented
        return (self.rows == other.rows and self.cols == other.cols
                and self.weights.shape == other.weights.shape
                and self.weights.tobytes() == other.weights.tobytes())


def as_samples(data, dim: int | None = None) -> np.ndarray:
    """Coerce ``data`` to a contiguous ``(n, dim)`` float64 sample array."""
    x = np.asarray(data, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise ValueError(f"samples must be 2-D (n, dim), got shape {x.shape}")
    if x.shape[0] < 1:
        raise ValueError("sample set is empty")
    if dim is not None and x.shape[1] != dim:
        raise ValueError(f"dimension mismatch: samples have dim {x.shape[1]}, expected {dim}")
    if not np.all(np.isfinite(x)):
        raise ValueError("samples must be finite")
    return np.ascontiguousarray(x)


def grid_coords(rows: int, cols: int, topology: str = "rectangular") -> np.ndarray:
    """Planar position of every node, row-major, shape ``(rows * cols, 2)``.

    Hexagonal grids shift odd rows by half a cell and compress row spacing to
    sqrt(3)/2 so all six neighbours sit at distance 1.
    """
    r, c = np.divmod(np.arange(rows * cols), cols)
    if topology == "rectangular":
        return np.column_stack([r, c]).astype(np.float64)
    if topology == "hexagonal":
        return np.column_stack([r * (math.sqrt(3) / 2), c + 0.5 * (r % 2)])
    raise ValueError(f"unknown topology {topology!r}")


def decay(t: int, total: int, start: float, end: float) -> float:
    """Linear schedule from ``start`` at ``t = 0`` to ``end`` at ``t = total``."""
    if total < 1:
        raise ValueError("total must be >= 1")
    if not 0 <= t <= total:
        raise ValueError(f"t={t} outside [0, {total}]")
    return start + (end - start) * t / total


def neighborhood_weight(grid_distance_sq: float, sigma: float, kind: str = "gaussian") -> float:
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if grid_distance_sq < 0:
        raise ValueError("squared distance must be non-negative")
    if kind == "gaussian":
        return math.exp(-grid_distance_sq / (2.0 * sigma * sigma))
    if kind == "bubble":
        return 1.0 if grid_distance_sq <= sigma * sigma else 0.0
    raise ValueError(f"unknown neighborhood {kind!r}")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _check_dim(config: TrainConfig, x: np.ndarray) -> None:
    if config.dim is not None and config.dim != x.shape[1]:
        raise ValueError(f"dimension mismatch: config dim {config.dim}, data dim {x.shape[1]}")


def init_map(config: TrainConfig, data) -> SomMap:
    """Initial map whose nodes are copies of randomly drawn samples."""
    x = as_samples(data)
    _check_dim(config, x)
    picks = _rng(config.seed).integers(0, x.shape[0], size=config.rows * config.cols)
    return SomMap(config.rows, config.cols, x[picks].copy(), config.topology)


def train(config: TrainConfig, data) -> SomMap:
    """Train a map with the online rule; bit-reproducible for a given seed."""
    x = as_samples(data)
    _check_dim(config, x)
    rng = _rng(config.seed)
    n_nodes = config.rows * config.cols
    weights = x[rng.integers(0, x.shape[0], size=n_nodes)].copy()
    draws = rng.integers(0, x.shape[0], size=config.iterations)
    coords = grid_coords(config.rows, config.cols, config.topology)
    _kernels.train_online(weights, coords, x, draws,
                          float(config.radius0), float(config.radius_final),
                          float(config.alpha0), float(config.alpha_final),
                          config.neighborhood == "bubble")
    return SomMap(config.rows, config.cols, weights, config.topology)


def bmu(som: SomMap, x) -> GridIndex:
    """Grid position of the node nearest to ``x`` (Euclidean)."""
    v = np.ascontiguousarray(x, dtype=np.float64).reshape(-1)
    if v.shape[0] != som.dim:
        raise ValueError(f"dimension mismatch: vector has {v.shape[0]}, map has {som.dim}")
    i = int(_kernels.bmu_index(som.weights, v))
    return GridIndex(*divmod(i, som.cols))


def bmu_distances(som: SomMap, data) -> tuple[np.ndarray, np.ndarray]:
    """Linear BMU index and BMU distance for every sample."""
    x = as_samples(data, som.dim)
    return _kernels.bmu_distances(som.weights, x)


def quantization_error(som: SomMap, data) -> float:
    """Mean Euclidean distance between each sample and its BMU weight.

    The sum runs through :func:`math.fsum`, which is exactly rounded, so the
    result does not depend on sample order.
    """
    _, dist = bmu_distances(som, data)
    return math.fsum(dist.tolist()) / dist.shape[0]
