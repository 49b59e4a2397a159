"""Binary PPM (P6, maxval 255) reader/writer.

The writer emits a fixed header layout so identical images produce
byte-identical files; the reader accepts any legal amount of whitespace and
``#`` comments in the header.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .codec import RgbImage


class PpmFormatError(Exception):
    """The file is not a P6 PPM this module can read."""


def _read_token(buf: bytes, pos: int) -> tuple[bytes, int]:
    # skip whitespace and # comments, then collect one token
    n = len(buf)
    while pos < n:
        c = buf[pos:pos + 1]
        if c == b"#":
            while pos < n and buf[pos:pos + 1] != b"\n":
                pos += 1
        elif c.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not buf[pos:pos + 1].isspace():
        pos += 1
    if start == pos:
        raise PpmFormatError("unexpected end of header")
    return buf[start:pos], pos


def read_ppm(path) -> RgbImage:
    """Read a binary P6 PPM with maxval 255."""
    buf = Path(path).read_bytes()
    try:
        magic, pos = _read_token(buf, 0)
        if magic != b"P6":
            raise PpmFormatError(f"not a P6 PPM (magic {magic!r})")
        width_tok, pos = _read_token(buf, pos)
        height_tok, pos = _read_token(buf, pos)
        maxval_tok, pos = _read_token(buf, pos)
        width, height, maxval = int(width_tok), int(height_tok), int(maxval_tok)
    except ValueError as exc:
        raise PpmFormatError(f"malformed PPM header: {exc}") from exc
    if maxval != 255:
        raise PpmFormatError(f"only maxval 255 is supported, got {maxval}")
    pos += 1  # exactly one whitespace byte separates header and raster
    expected = width * height * 3
    raster = buf[pos:pos + expected]
    if len(raster) != expected:
        raise PpmFormatError(
            f"truncated raster: expected {expected} bytes, got {len(raster)}")
    samples = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3)
    # odd dimensions surface as a ValueError from RgbImage: a validation
    # problem with the image, not a malformed file
    return RgbImage(samples.copy())


def write_ppm(path, img: RgbImage) -> None:
    """Write an image as binary P6, deterministically."""
    header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + img.samples.tobytes())
