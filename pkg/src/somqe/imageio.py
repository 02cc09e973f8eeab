"""Raster decode/encode (binary PGM/PPM, 8-bit PNG) and sample extraction."""

from __future__ import annotations

import io
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError

FORMATS = ("pgm", "ppm", "png")


@dataclass(eq=False)
class ImageBuffer:
    """Decoded raster, ``pixels`` has shape ``(height, width, channels)``."""

    pixels: np.ndarray
    bit_depth: int = 8

    def __post_init__(self):
        p = np.asarray(self.pixels)
        if p.ndim == 2:
            p = p[:, :, None]
        if p.ndim != 3 or p.shape[2] not in (1, 3) or p.shape[0] < 1 or p.shape[1] < 1:
            raise ValueError(f"pixels must be (height, width, 1|3), got {p.shape}")
        if self.bit_depth not in (8, 16):
            raise ValueError(f"bit_depth must be 8 or 16, got {self.bit_depth}")
        if p.size and (p.min() < 0 or p.max() > self.maxval):
            raise ValueError(f"intensities outside [0, {self.maxval}]")
        self.pixels = np.ascontiguousarray(p, dtype=np.uint8 if self.bit_depth == 8 else np.uint16)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def channels(self) -> int:
        return self.pixels.shape[2]

    @property
    def maxval(self) -> int:
        return (1 << self.bit_depth) - 1

    def gray(self) -> np.ndarray:
        """2-D view of a single-channel image."""
        if self.channels != 1:
            raise ValueError("image is not grayscale")
        return self.pixels[:, :, 0]

    def copy(self) -> ImageBuffer:
        return ImageBuffer(self.pixels.copy(), self.bit_depth)

    def __eq__(self, other):
        if not isinstance(other, ImageBuffer):
            return NotImplemented
        return (self.bit_depth == other.bit_depth
                and self.pixels.shape == other.pixels.shape
                and np.array_equal(self.pixels, other.pixels))


@dataclass(frozen=True)
class FeatureMode:
    kind: str = "pixel"
    patch_side: int = 1
    normalize: str = "none"

    def __post_init__(self):
        if self.kind not in ("pixel", "patch"):
            raise ValueError(f"unknown feature kind {self.kind!r}")
        if self.patch_side < 1 or self.patch_side % 2 == 0:
            raise ValueError("patch_side must be odd and >= 1")
        if self.normalize not in ("none", "unit_range"):
            raise ValueError(f"unknown normalization {self.normalize!r}")

    @classmethod
    def parse(cls, text: str, normalize: str = "none") -> FeatureMode:
        """Parse ``pixel`` or ``patch:K``."""
        if text == "pixel":
            return cls("pixel", 1, normalize)
        kind, _, side = text.partition(":")
        if kind != "patch" or not side.isdigit():
            raise ValueError(f"feature must be 'pixel' or 'patch:K', got {text!r}")
        return cls("patch", int(side), normalize)

    def label(self) -> str:
        return "pixel" if self.kind == "pixel" else f"patch:{self.patch_side}"


# --- PNM -------------------------------------------------------------------

def _pnm_header(data: bytes):
    """Parse magic, width, height, maxval; return them plus the payload offset."""
    fields = []
    pos = 0
    n = len(data)
    while len(fields) < 4:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos < n and data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        if pos >= n:
            raise FormatError(f"truncated header at byte {pos}")
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        fields.append((data[start:pos], start))
    if pos >= n or not data[pos:pos + 1].isspace():
        raise FormatError(f"missing whitespace after maxval at byte {pos}")
    magic, off = fields[0]
    if magic not in (b"P5", b"P6"):
        raise FormatError(f"unsupported PNM variant {magic[:8]!r} at byte {off}")
    values = []
    for raw, off in fields[1:]:
        if not raw.isdigit():
            raise FormatError(f"malformed header field {raw[:16]!r} at byte {off}")
        values.append((int(raw), off))
    (width, _), (height, _), (maxval, max_off) = values
    if width < 1 or height < 1:
        raise FormatError(f"non-positive image size {width}x{height}")
    if maxval not in (255, 65535):
        raise FormatError(f"unsupported maxval {maxval} at byte {max_off} (need 255 or 65535)")
    return magic.decode(), width, height, maxval, pos + 1


def _decode_pnm(data: bytes) -> ImageBuffer:
    magic, width, height, maxval, offset = _pnm_header(data)
    channels = 1 if magic == "P5" else 3
    bps = 1 if maxval == 255 else 2
    need = width * height * channels * bps
    payload = data[offset:offset + need]
    if len(payload) < need:
        raise FormatError(
            f"truncated payload at byte {offset}: {len(payload)} of {need} bytes present")
    dtype = np.uint8 if bps == 1 else np.dtype(">u2")
    pix = np.frombuffer(payload, dtype=dtype).reshape(height, width, channels)
    return ImageBuffer(pix.astype(np.uint8 if bps == 1 else np.uint16), 8 * bps)


def _encode_pnm(img: ImageBuffer, fmt: str) -> bytes:
    want = 1 if fmt == "pgm" else 3
    if img.channels != want:
        raise ValueError(f"{fmt.upper()} needs {want} channel(s), image has {img.channels}")
    magic = "P5" if fmt == "pgm" else "P6"
    header = f"{magic}\n{img.width} {img.height}\n{img.maxval}\n".encode("ascii")
    dtype = np.uint8 if img.bit_depth == 8 else np.dtype(">u2")
    return header + img.pixels.astype(dtype).tobytes()


# --- PNG (via Pillow) ------------------------------------------------------

def _decode_png(data: bytes) -> ImageBuffer:
    from PIL import Image

    try:
        im = Image.open(io.BytesIO(data))
        im.load()
    except Exception as exc:
        raise FormatError(f"cannot decode PNG: {exc}") from None
    if im.mode == "L":
        return ImageBuffer(np.asarray(im), 8)
    if im.mode == "RGB":
        return ImageBuffer(np.asarray(im), 8)
    raise FormatError(f"unsupported PNG mode {im.mode!r} (need 8-bit L or RGB)")


def _encode_png(img: ImageBuffer) -> bytes:
    from PIL import Image

    if img.bit_depth != 8:
        raise ValueError("PNG encoding supports 8-bit images only")
    arr = img.gray() if img.channels == 1 else img.pixels
    buf = io.BytesIO()
    Image.fromarray(arr, mode="L" if img.channels == 1 else "RGB").save(buf, format="PNG")
    return buf.getvalue()


def decode_image(data: bytes, fmt: str) -> ImageBuffer:
    if fmt in ("pgm", "ppm"):
        img = _decode_pnm(data)
        if (fmt == "pgm") != (img.channels == 1):
            raise FormatError(f"file content does not match format {fmt!r}")
        return img
    if fmt == "png":
        return _decode_png(data)
    raise ValueError(f"unknown format {fmt!r}")


def encode_image(img: ImageBuffer, fmt: str) -> bytes:
    if fmt in ("pgm", "ppm"):
        return _encode_pnm(img, fmt)
    if fmt == "png":
        return _encode_png(img)
    raise ValueError(f"unknown format {fmt!r}")


def format_for(path: str | os.PathLike) -> str:
    ext = Path(path).suffix.lower().lstrip(".")
    if ext == "pnm":
        return "pgm"
    if ext not in FORMATS:
        raise FormatError(f"{path}: unrecognized image extension {ext!r}")
    return ext


def read_image(path: str | os.PathLike) -> ImageBuffer:
    data = Path(path).read_bytes()
    fmt = format_for(path)
    if fmt == "pgm" and data[:2] == b"P6":
        fmt = "ppm"
    try:
        return decode_image(data, fmt)
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from None


def write_image(img: ImageBuffer, path: str | os.PathLike) -> None:
    Path(path).write_bytes(encode_image(img, format_for(path)))


# --- features --------------------------------------------------------------

def extract_samples(img: ImageBuffer, mode: FeatureMode = FeatureMode()) -> np.ndarray:
    """One feature vector per pixel, row-major, as an ``(N, dim)`` float array.

    Patch features are the ``K x K`` neighbourhood (edges clamped) flattened
    row-major with channels contiguous per pixel.
    """
    pix = img.pixels.astype(np.float64)
    h, w, c = pix.shape
    if mode.kind == "pixel":
        out = pix.reshape(h * w, c)
    else:
        r = mode.patch_side // 2
        padded = np.pad(pix, ((r, r), (r, r), (0, 0)), mode="edge")
        win = np.lib.stride_tricks.sliding_window_view(padded, (mode.patch_side, mode.patch_side),
                                                       axis=(0, 1))
        # (h, w, c, k, k) -> (h, w, k, k, c)
        out = win.transpose(0, 1, 3, 4, 2).reshape(h * w, -1)
    if mode.normalize == "unit_range":
        out = out / img.maxval
    return np.ascontiguousarray(out)
