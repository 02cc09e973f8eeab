"""Synthetic image manipulations: elliptical lesions, Poisson noise, dot fields.

Also provides :func:`phantom`, a smooth textured grayscale image used as the
base corpus for the lesion and noise reproductions.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .imageio import ImageBuffer

# Poisson draws switch from Knuth's product method to a rounded normal here
KNUTH_LIMIT = 30.0


@dataclass(frozen=True)
class LesionSpec:
    center: tuple[int, int]
    semi_axis_a: int = 22
    semi_axis_b: int = 13
    pattern: str = "checker2"
    gray_levels: tuple[int, int] = (96, 160)

    def __post_init__(self):
        if self.semi_axis_a < 1 or self.semi_axis_b < 1:
            raise ValueError("semi-axes must be positive")
        if self.pattern not in ("checker2", "solid"):
            raise ValueError(f"unknown pattern {self.pattern!r}")

    def manifest(self) -> dict:
        return {"kind": "lesion", "center": f"{self.center[0]},{self.center[1]}",
                "semi_axis_a": self.semi_axis_a, "semi_axis_b": self.semi_axis_b,
                "pattern": self.pattern,
                "gray_levels": f"{self.gray_levels[0]},{self.gray_levels[1]}"}


@dataclass(frozen=True)
class DotFieldSpec:
    width: int = 512
    height: int = 512
    n_dots: int = 50
    base_radius: float = 5.0
    background: int = 255
    michelson: float = 0.7
    target_index: int = 0
    scale: float = 1.0
    # placement reserves room for the target at this scale, so every scale
    # up to it shares the same layout
    max_scale: float = 1.3
    min_gap: float = 2.0

    def __post_init__(self):
        if self.width < 1 or self.height < 1 or self.n_dots < 1:
            raise ValueError("width, height and n_dots must be positive")
        if self.base_radius <= 0:
            raise ValueError("base_radius must be positive")
        if not 0 < self.michelson < 1:
            raise ValueError("michelson contrast must lie in (0, 1)")
        if not 0 <= self.target_index < self.n_dots:
            raise ValueError("target_index out of range")
        if not 1.0 <= self.scale <= self.max_scale:
            raise ValueError(f"scale must lie in [1, {self.max_scale}]")
        if not 0 <= self.background <= 255:
            raise ValueError("background must be an 8-bit intensity")

    def manifest(self) -> dict:
        return {"kind": "dots", **asdict(self)}


def ellipse_mask(height: int, width: int, spec: LesionSpec) -> np.ndarray:
    cx, cy = spec.center
    y, x = np.mgrid[0:height, 0:width]
    return ((x - cx) / spec.semi_axis_a) ** 2 + ((y - cy) / spec.semi_axis_b) ** 2 <= 1.0


def inject_lesion(img: ImageBuffer, spec: LesionSpec) -> ImageBuffer:
    """Overwrite the ellipse interior with the lesion pattern.

    ``checker2`` alternates the two gray levels in 2x2 pixel blocks.
    """
    if img.channels != 1:
        raise ValueError("lesions can only be injected into grayscale images")
    cx, cy = spec.center
    a, b = spec.semi_axis_a, spec.semi_axis_b
    if cx - a < 0 or cy - b < 0 or cx + a >= img.width or cy + b >= img.height:
        raise ValueError(
            f"lesion at {spec.center} with semi-axes {a}x{b} does not fit a "
            f"{img.width}x{img.height} image")
    lo, hi = spec.gray_levels
    if not (0 <= lo <= img.maxval and 0 <= hi <= img.maxval):
        raise ValueError("lesion gray levels exceed the image range")
    mask = ellipse_mask(img.height, img.width, spec)
    if spec.pattern == "checker2":
        y, x = np.mgrid[0:img.height, 0:img.width]
        fill = np.where(((x // 2) + (y // 2)) % 2 == 0, lo, hi)
    else:
        fill = np.full((img.height, img.width), lo)
    out = img.pixels.copy()
    out[:, :, 0][mask] = fill[mask]
    return ImageBuffer(out, img.bit_depth)


def poisson_draws(lam: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Poisson variates with per-element mean ``lam``.

    Means below ``KNUTH_LIMIT`` use Knuth's multiplication method; larger means
    use ``round(lam + sqrt(lam) * z)`` clamped at zero.
    """
    lam = np.asarray(lam, dtype=np.float64)
    flat = lam.reshape(-1)
    out = np.zeros(flat.shape, dtype=np.int64)

    small = np.flatnonzero((flat > 0) & (flat < KNUTH_LIMIT))
    large = np.flatnonzero(flat >= KNUTH_LIMIT)

    if small.size:
        limit = np.exp(-flat[small])
        prod = np.ones(small.size)
        count = np.full(small.size, -1, dtype=np.int64)
        active = np.ones(small.size, dtype=bool)
        while active.any():
            count[active] += 1
            prod[active] *= rng.random(int(active.sum()))
            active &= prod > limit
        out[small] = count

    if large.size:
        z = rng.standard_normal(large.size)
        out[large] = np.maximum(np.rint(flat[large] + np.sqrt(flat[large]) * z), 0)

    return out.reshape(lam.shape)


def add_poisson_noise(img: ImageBuffer, seed: int) -> ImageBuffer:
    """Replace each pixel by a Poisson draw whose mean is the pixel value."""
    rng = np.random.Generator(np.random.PCG64(seed))
    noisy = np.clip(poisson_draws(img.pixels, rng), 0, img.maxval)
    return ImageBuffer(noisy, img.bit_depth)


def dot_intensity(background: float, michelson: float) -> int:
    """Dark dot level d with (background - d) / (background + d) == michelson."""
    return int(round(background * (1 - michelson) / (1 + michelson)))


def place_dots(spec: DotFieldSpec, seed: int, max_attempts: int = 100000) -> np.ndarray:
    """Non-overlapping dot centres ``(n_dots, 2)`` as (x, y), independent of scale."""
    rng = np.random.Generator(np.random.PCG64(seed))
    radii = np.full(spec.n_dots, spec.base_radius)
    radii[spec.target_index] *= spec.max_scale
    centers = np.empty((spec.n_dots, 2))
    attempts = 0
    for i, r in enumerate(radii):
        if 2 * r >= min(spec.width, spec.height) - 1:
            raise ValueError("dot radius too large for the field")
        while True:
            if attempts >= max_attempts:
                raise ValueError(
                    f"could not place {spec.n_dots} dots within {max_attempts} attempts")
            attempts += 1
            c = rng.uniform((r, r), (spec.width - 1 - r, spec.height - 1 - r))
            if i == 0:
                break
            gaps = np.hypot(*(centers[:i] - c).T) - radii[:i] - r
            if gaps.min() >= spec.min_gap:
                break
        centers[i] = c
    return centers


def generate_dot_field(spec: DotFieldSpec, seed: int) -> ImageBuffer:
    """Dark filled circles on a light background; the target dot is scaled."""
    centers = place_dots(spec, seed)
    level = dot_intensity(spec.background, spec.michelson)
    out = np.full((spec.height, spec.width), spec.background, dtype=np.uint8)
    for i, (cx, cy) in enumerate(centers):
        r = spec.base_radius * (spec.scale if i == spec.target_index else 1.0)
        x0, x1 = int(math.floor(cx - r)), int(math.ceil(cx + r))
        y0, y1 = int(math.floor(cy - r)), int(math.ceil(cy + r))
        y, x = np.mgrid[y0:y1 + 1, x0:x1 + 1]
        inside = (x - cx) ** 2 + (y - cy) ** 2 <= r * r
        out[y0:y1 + 1, x0:x1 + 1][inside] = level
    return ImageBuffer(out, 8)


@dataclass(frozen=True)
class PhantomSpec:
    """Smooth organ-like blob on a dark, slightly noisy background."""

    width: int = 128
    height: int = 128
    background: float = 12.0
    tissue: tuple[float, float] = (170.0, 235.0)
    n_blobs: int = 6
    noise_sd: float = 3.0


def phantom(spec: PhantomSpec, seed: int) -> ImageBuffer:
    rng = np.random.Generator(np.random.PCG64(seed))
    h, w = spec.height, spec.width
    y, x = np.mgrid[0:h, 0:w].astype(np.float64)
    cx, cy = w / 2 + rng.normal(0, w * 0.02), h / 2 + rng.normal(0, h * 0.02)
    ax, ay = w * rng.uniform(0.40, 0.46), h * rng.uniform(0.34, 0.42)
    body = ((x - cx) / ax) ** 2 + ((y - cy) / ay) ** 2
    # soft edge over a few pixels
    inside = 1.0 / (1.0 + np.exp((np.sqrt(body) - 1.0) * 25.0))

    lo, hi = spec.tissue
    texture = np.zeros((h, w))
    for _ in range(spec.n_blobs):
        bx, by = rng.uniform(0, w), rng.uniform(0, h)
        s = rng.uniform(0.1, 0.3) * w
        texture += rng.uniform(-1, 1) * np.exp(-((x - bx) ** 2 + (y - by) ** 2) / (2 * s * s))
    span = np.ptp(texture) or 1.0
    texture = (texture - texture.min()) / span
    tissue = lo + (hi - lo) * texture

    img = spec.background + inside * (tissue - spec.background)
    img += rng.normal(0, spec.noise_sd, size=(h, w))
    return ImageBuffer(np.clip(np.rint(img), 0, 255).astype(np.uint8), 8)
