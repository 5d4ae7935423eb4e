"""Binary 8-bit PGM (P5) reading and writing."""

from __future__ import annotations

import os
from typing import Union

import numpy as np

from .errors import PGMError

PathLike = Union[str, "os.PathLike[str]"]


def _tokens(data: bytes, count: int):
    """Yield ``count`` header tokens and the offset just past the last one."""
    pos = 0
    found = []
    n = len(data)
    while len(found) < count:
        while pos < n and data[pos : pos + 1].isspace():
            pos += 1
        if pos < n and data[pos : pos + 1] == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise PGMError("truncated PGM header")
        found.append(data[start:pos])
    # exactly one whitespace byte separates the header from the raster
    if pos >= n or not data[pos : pos + 1].isspace():
        raise PGMError("missing whitespace after PGM header")
    return found, pos + 1


def decode_pgm(data: bytes) -> np.ndarray:
    if not data.startswith(b"P5"):
        raise PGMError("not a binary PGM (expected magic 'P5')")
    (magic, w, h, maxval), offset = _tokens(data, 4)
    try:
        width, height, maxv = int(w), int(h), int(maxval)
    except ValueError as exc:
        raise PGMError(f"non-numeric PGM header field: {exc}") from None
    if width <= 0 or height <= 0:
        raise PGMError(f"invalid PGM size {width}x{height}")
    if maxv != 255:
        raise PGMError(f"only 8-bit PGM (maxval 255) is supported, got {maxv}")
    raster = data[offset : offset + width * height]
    if len(raster) != width * height:
        raise PGMError(f"PGM raster truncated: expected {width * height} bytes, got {len(raster)}")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()


def encode_pgm(img: np.ndarray) -> bytes:
    img = np.asarray(img)
    if img.ndim != 2:
        raise PGMError("PGM images must be 2-D")
    if img.dtype != np.uint8:
        if img.size and (img.min() < 0 or img.max() > 255):
            raise PGMError("pixel values outside [0, 255]")
        img = img.astype(np.uint8)
    height, width = img.shape
    return b"P5\n%d %d\n255\n" % (width, height) + np.ascontiguousarray(img).tobytes()


def read_pgm(path: PathLike) -> np.ndarray:
    with open(path, "rb") as fh:
        return decode_pgm(fh.read())


def write_pgm(path: PathLike, img: np.ndarray) -> None:
    with open(path, "wb") as fh:
        fh.write(encode_pgm(img))
