"""Irreversible codec path around the transform: level offset, color transform,
dead-zone quantization, and the ratio-to-step-size mapping.

The forward path mirrors a lossy JPEG2000 encoder up to the point where
coefficients would enter the block coder: 8-bit RGB samples are centred by a
level offset of 128, mapped to YCbCr by the irreversible color transform,
wavelet-transformed per channel, and dead-zone quantized.  ``decode_tail`` is
the mirror-image work a decoder performs after dequantization (inverse
transform, inverse color map, offset) — exactly the computation a
coefficient-domain consumer gets to skip.
"""

from __future__ import annotations

import math
import shutil
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .wavelet import CoeffPlane, TransformPair, dwt2d, idwt2d

LEVEL_OFFSET = 128.0

# Irreversible color transform (RGB applied after the level offset).
ICT_FORWARD = np.array([
    [0.299, 0.587, 0.114],
    [-0.168736, -0.331264, 0.5],
    [0.5, -0.418688, -0.081312],
])
# True matrix inverse rather than the rounded textbook constants, so the
# precoding round trip is exact to floating-point rounding.
ICT_INVERSE = np.linalg.inv(ICT_FORWARD)

DEQUANT_BIAS = 0.5  # reconstruct at bin midpoints


class CodecUnavailableError(Exception):
    """An external codec command is not configured, not installed, or failed."""


@dataclass(frozen=True)
class RgbImage:
    """8-bit interleaved RGB samples with even width and height."""

    samples: np.ndarray  # (height, width, 3) uint8

    def __post_init__(self):
        s = np.asarray(self.samples)
        if s.ndim != 3 or s.shape[2] != 3:
            raise ValueError(f"expected (h, w, 3) samples, got shape {s.shape}")
        if s.shape[0] % 2 != 0 or s.shape[1] % 2 != 0:
            raise ValueError(f"image dimensions must be even, got {s.shape[1]}x{s.shape[0]}")
        if s.dtype != np.uint8:
            if np.issubdtype(s.dtype, np.floating) and not np.isfinite(s).all():
                raise ValueError("samples contain non-finite values")
            if s.min() < 0 or s.max() > 255:
                raise ValueError("samples must lie in [0, 255]")
            s = s.astype(np.uint8)
        object.__setattr__(self, "samples", s)

    @property
    def height(self) -> int:
        return self.samples.shape[0]

    @property
    def width(self) -> int:
        return self.samples.shape[1]


@dataclass(frozen=True)
class YcbcrPlanes:
    """Level-offset YCbCr planes (float, centred near zero)."""

    y: np.ndarray
    cb: np.ndarray
    cr: np.ndarray

    def __post_init__(self):
        if not (self.y.shape == self.cb.shape == self.cr.shape):
            raise ValueError("Y/Cb/Cr planes must share one shape")


@dataclass(frozen=True)
class QuantizedPlane:
    """Signed quantizer indices plus the step they were produced with."""

    data: np.ndarray  # (n, n) int32
    step: float
    ratio: float | None = None
    level: int = 1

    def __post_init__(self):
        if self.step <= 0 or not math.isfinite(self.step):
            raise ValueError(f"quantizer step must be positive and finite, got {self.step}")
        object.__setattr__(self, "data", np.asarray(self.data, dtype=np.int32))


def forward_precoding(img: RgbImage) -> YcbcrPlanes:
    """Offset samples by -128 and map to YCbCr."""
    offset = img.samples.astype(np.float64) - LEVEL_OFFSET
    ycc = offset @ ICT_FORWARD.T
    return YcbcrPlanes(y=ycc[..., 0], cb=ycc[..., 1], cr=ycc[..., 2])


def inverse_precoding(planes: YcbcrPlanes) -> RgbImage:
    """Map back to RGB, undo the offset, round half away from zero, clamp."""
    ycc = np.stack([planes.y, planes.cb, planes.cr], axis=-1)
    rgb = ycc @ ICT_INVERSE.T + LEVEL_OFFSET
    rounded = np.sign(rgb) * np.floor(np.abs(rgb) + 0.5)
    return RgbImage(np.clip(rounded, 0, 255).astype(np.uint8))


def step_size_for_ratio(r: float) -> float | None:
    """Map the compression parameter to a quantizer step.

    ``r = 0`` means no compression and returns ``None``, the quantization
    bypass sentinel.  For ``r > 0`` the step is ``2**(r / 5)``, a strictly
    increasing dyadic stand-in for a rate allocator: r = 5, 10, 15 give
    steps 2, 4, 8.
    """
    if r < 0:
        raise ValueError(f"compression parameter must be >= 0, got {r}")
    if r == 0:
        return None
    return float(2.0 ** (r / 5.0))


def quantize_values(y, step: float) -> np.ndarray:
    """Dead-zone quantizer: q = sign(y) * floor(|y| / step)."""
    if step <= 0:
        raise ValueError(f"quantizer step must be positive, got {step}")
    y = np.asarray(y, dtype=np.float64)
    return (np.sign(y) * np.floor(np.abs(y) / step)).astype(np.int32)


def dequantize_values(q, step: float, bias: float = DEQUANT_BIAS) -> np.ndarray:
    """Midpoint reconstruction: 0 stays 0, else sign(q) * (|q| + bias) * step.

    Computed as ``step * (q + bias * sign(q))``, which is the same function
    with one pass fewer over the data.
    """
    q = np.asarray(q)
    return step * (q + bias * np.sign(q, dtype=np.float64))


def deadzone_quantize(w: CoeffPlane, step: float, ratio: float | None = None) -> QuantizedPlane:
    """Quantize a coefficient plane with the double-width zero bin."""
    return QuantizedPlane(quantize_values(w.data, step), step=step, ratio=ratio, level=w.level)


def dequantize(q: QuantizedPlane, bias: float = DEQUANT_BIAS) -> CoeffPlane:
    """Reconstruct coefficients from quantizer indices."""
    return CoeffPlane(dequantize_values(q.data, q.step, bias), level=q.level)


def compress_planes(img: RgbImage, r: float, pair: TransformPair,
                    ) -> tuple[CoeffPlane, CoeffPlane, CoeffPlane]:
    """Run the forward path and return the three dequantized coefficient planes.

    At ``r = 0`` quantization is bypassed and the planes are the exact
    transform output; otherwise each plane goes through quantize/dequantize
    at the step implied by ``r``.
    """
    if img.width != pair.n or img.height != pair.n:
        raise ValueError(f"image is {img.width}x{img.height}, transform expects {pair.n}x{pair.n}")
    ycc = forward_precoding(img)
    step = step_size_for_ratio(r)
    out = []
    for channel in (ycc.y, ycc.cb, ycc.cr):
        plane = dwt2d(channel, pair)
        if step is not None:
            plane = dequantize(deadzone_quantize(plane, step, ratio=r))
        out.append(plane)
    return out[0], out[1], out[2]


def decode_tail(planes: tuple[CoeffPlane, CoeffPlane, CoeffPlane],
                pair: TransformPair) -> RgbImage:
    """The decoder work after dequantization: inverse transform per channel,
    inverse color map, offset.  This is the computation skipped by
    coefficient-domain consumers and is what the reconstruction-gain
    benchmark times."""
    y, cb, cr = planes
    if not (y.n == cb.n == cr.n):
        raise ValueError(f"channel planes disagree in size: {y.n}, {cb.n}, {cr.n}")
    ycc = YcbcrPlanes(y=idwt2d(y, pair), cb=idwt2d(cb, pair), cr=idwt2d(cr, pair))
    return inverse_precoding(ycc)


def psnr(a: RgbImage, b: RgbImage) -> float:
    """Peak signal-to-noise ratio in dB between two 8-bit images (inf if equal)."""
    if a.samples.shape != b.samples.shape:
        raise ValueError("images must share one shape")
    diff = a.samples.astype(np.float64) - b.samples.astype(np.float64)
    mse = np.mean(diff * diff)
    if mse == 0:
        return math.inf
    return 10.0 * math.log10(255.0 ** 2 / mse)


@dataclass(frozen=True)
class CodecCommands:
    """Shell templates for an external encoder/decoder.

    Templates receive ``{in}``, ``{out}`` and ``{ratio}`` placeholders, e.g.
    ``opj_compress -i {in} -o {out} -r {ratio}``.
    """

    encode_cmd: str
    decode_cmd: str


def external_codec_roundtrip(img: RgbImage, r: float, commands: CodecCommands,
                             timeout: float = 120.0) -> RgbImage:
    """Encode and decode through an external codec, returning the decoded image.

    Used only for cross-validation against a real codec; the in-process
    pipeline never depends on it.  Raises :class:`CodecUnavailableError` when
    the commands are missing or fail, leaving no partial files behind.
    """
    from .ppm import read_ppm, write_ppm

    if not commands.encode_cmd or not commands.decode_cmd:
        raise CodecUnavailableError("external codec commands are not configured")
    tool = commands.encode_cmd.split()[0]
    if shutil.which(tool) is None and not Path(tool).exists():
        raise CodecUnavailableError(f"external codec tool not found: {tool}")
    with tempfile.TemporaryDirectory(prefix="wavecoef-codec-") as tmp:
        src = Path(tmp) / "source.ppm"
        enc = Path(tmp) / "encoded.j2k"
        dec = Path(tmp) / "decoded.ppm"
        write_ppm(src, img)
        for template, args in ((commands.encode_cmd, {"in": src, "out": enc}),
                               (commands.decode_cmd, {"in": enc, "out": dec})):
            cmd = template.format(**{**args, "ratio": r})
            try:
                proc = subprocess.run(cmd, shell=True, capture_output=True, timeout=timeout)
            except (OSError, subprocess.TimeoutExpired) as exc:
                raise CodecUnavailableError(f"external codec failed: {exc}") from exc
            if proc.returncode != 0:
                stderr = proc.stderr.decode(errors="replace").strip()
                raise CodecUnavailableError(
                    f"external codec command exited {proc.returncode}: {stderr}")
        if not dec.exists():
            raise CodecUnavailableError("external codec produced no output file")
        return read_ppm(dec)
