"""Subband tensor packing and the WCT on-disk container.

Three level-1 coefficient planes (Y, Cb, Cr) become one 12-channel tensor at
half the image resolution.  Channel order is fixed so files written by
different producers stay interchangeable:

    0..3   Y  LL, HL, LH, HH
    4..7   Cb LL, HL, LH, HH
    8..11  Cr LL, HL, LH, HH

WCT files carry batches of such tensors (or any channel-major float32
tensors) with a fixed little-endian header:

    magic "WCT1" | version u16 | dtype u8 (0 = IEEE-754 binary32) | flags u8
    | height u32 | width u32 | channels u32 | count u32 | payload

Payload is count * channels * height * width values, channel-major,
row-major within a channel.  Labels ride in a sidecar file of bare u16
little-endian values, one per tensor, conventionally at ``<stem>.lbl``.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .wavelet import CoeffPlane, merge_subbands, split_subbands

WCT_MAGIC = b"WCT1"
WCT_VERSION = 1
WCT_DTYPE_F32 = 0
_HEADER = struct.Struct("<4sHBBIIII")

SUBBAND_ORDER = ("LL", "HL", "LH", "HH")
CHANNEL_ORDER = tuple(f"{c}-{b}" for c in ("Y", "Cb", "Cr") for b in SUBBAND_ORDER)


class WctFormatError(Exception):
    """The bytes do not form a readable WCT file."""


@dataclass(frozen=True)
class PackedTensor:
    """12-channel half-resolution tensor in the fixed channel order above."""

    data: np.ndarray  # (12, h, w)

    def __post_init__(self):
        d = np.asarray(self.data)
        if d.ndim != 3 or d.shape[0] != len(CHANNEL_ORDER):
            raise ValueError(f"expected ({len(CHANNEL_ORDER)}, h, w) data, got shape {d.shape}")
        if d.shape[1] != d.shape[2]:
            raise ValueError(f"expected square channels, got shape {d.shape}")
        object.__setattr__(self, "data", d)

    @property
    def h(self) -> int:
        return self.data.shape[1]

    @property
    def w(self) -> int:
        return self.data.shape[2]


def pack_subbands(y: CoeffPlane, cb: CoeffPlane, cr: CoeffPlane) -> PackedTensor:
    """Slice three equal-size planes into the 12-channel tensor."""
    if not (y.n == cb.n == cr.n):
        raise ValueError(f"channel planes disagree in size: {y.n}, {cb.n}, {cr.n}")
    channels = []
    for plane in (y, cb, cr):
        channels.extend(split_subbands(plane))
    return PackedTensor(np.stack(channels, axis=0))


def unpack_subbands(t: PackedTensor) -> tuple[CoeffPlane, CoeffPlane, CoeffPlane]:
    """Exact inverse of :func:`pack_subbands`."""
    d = t.data
    planes = []
    for c in range(0, 12, 4):
        planes.append(merge_subbands(d[c], d[c + 1], d[c + 2], d[c + 3], level=1))
    return planes[0], planes[1], planes[2]


@dataclass(frozen=True)
class WctFile:
    """A decoded WCT container: the tensor batch plus its header flags."""

    data: np.ndarray  # (count, channels, height, width) float32
    flags: int = 0
    version: int = WCT_VERSION


def _as_batch(tensors) -> np.ndarray:
    if isinstance(tensors, PackedTensor):
        tensors = [tensors]
    if isinstance(tensors, (list, tuple)):
        if len(tensors) == 0:
            raise ValueError("cannot write an empty batch")
        if isinstance(tensors[0], PackedTensor):
            arrays = [t.data for t in tensors]
        else:
            arrays = [np.asarray(t) for t in tensors]
        shapes = {a.shape for a in arrays}
        if len(shapes) != 1:
            raise ValueError(f"batch tensors disagree in shape: {sorted(shapes)}")
        batch = np.stack(arrays, axis=0)
    else:
        batch = np.asarray(tensors)
    if batch.ndim != 4:
        raise ValueError(f"expected (count, channels, h, w) data, got shape {batch.shape}")
    return batch


def write_wct(path, tensors, flags: int = 0) -> None:
    """Write a batch of tensors (float32 payload), byte-for-byte deterministic.

    ``tensors`` may be an array of shape (count, channels, h, w), a list of
    such 3-D tensors, or PackedTensor instances.
    """
    batch = _as_batch(tensors).astype(np.float32)
    if not 0 <= flags <= 0xFF:
        raise ValueError(f"flags must fit one byte, got {flags}")
    count, channels, height, width = batch.shape
    header = _HEADER.pack(WCT_MAGIC, WCT_VERSION, WCT_DTYPE_F32, flags,
                          height, width, channels, count)
    with open(path, "wb") as f:
        f.write(header)
        f.write(np.ascontiguousarray(batch, dtype="<f4").tobytes())


def read_wct(path) -> WctFile:
    """Read a WCT container, verifying magic, version, dtype and payload size."""
    buf = Path(path).read_bytes()
    if len(buf) < _HEADER.size:
        raise WctFormatError(f"file too short for a WCT header ({len(buf)} bytes)")
    magic, version, dtype, flags, height, width, channels, count = _HEADER.unpack_from(buf)
    if magic != WCT_MAGIC:
        raise WctFormatError(f"bad magic {magic!r}, expected {WCT_MAGIC!r}")
    if version != WCT_VERSION:
        raise WctFormatError(f"unsupported WCT version {version}")
    if dtype != WCT_DTYPE_F32:
        raise WctFormatError(f"unknown dtype code {dtype}")
    expected = count * channels * height * width * 4
    payload = buf[_HEADER.size:]
    if len(payload) != expected:
        raise WctFormatError(
            f"payload is {len(payload)} bytes but header declares {expected}")
    data = np.frombuffer(payload, dtype="<f4").reshape(count, channels, height, width)
    return WctFile(data=data.copy(), flags=flags, version=version)


def write_labels(path, labels) -> None:
    """Write the u16 little-endian label sidecar."""
    arr = np.asarray(labels)
    if arr.ndim != 1:
        raise ValueError(f"labels must be a flat sequence, got shape {arr.shape}")
    if arr.size and (arr.min() < 0 or arr.max() > 0xFFFF):
        raise ValueError("labels must fit in an unsigned 16-bit value")
    Path(path).write_bytes(arr.astype("<u2").tobytes())


def read_labels(path, expected_count: int | None = None) -> np.ndarray:
    """Read a label sidecar; optionally verify it matches the tensor count."""
    buf = Path(path).read_bytes()
    if len(buf) % 2 != 0:
        raise WctFormatError(f"label sidecar has odd byte length {len(buf)}")
    labels = np.frombuffer(buf, dtype="<u2").copy()
    if expected_count is not None and labels.size != expected_count:
        raise WctFormatError(
            f"label count {labels.size} does not match tensor count {expected_count}")
    return labels


def label_path(wct_path) -> Path:
    """Conventional sidecar location: the WCT path with a .lbl suffix."""
    return Path(wct_path).with_suffix(".lbl")
