import struct

import numpy as np
import pytest

from wavecoef import (
    CHANNEL_ORDER,
    CoeffPlane,
    PackedTensor,
    WctFormatError,
    build_transform_pair,
    compress_planes,
    decode_tail,
    label_path,
    pack_subbands,
    read_labels,
    read_wct,
    unpack_subbands,
    write_labels,
    write_wct,
)

from conftest import natural_image


def random_planes(rng, n=32):
    return tuple(CoeffPlane(rng.normal(size=(n, n))) for _ in range(3))


class TestPacking:
    def test_channel_order_constant(self):
        assert CHANNEL_ORDER[0] == "Y-LL"
        assert CHANNEL_ORDER[1] == "Y-HL"
        assert len(CHANNEL_ORDER) == 12

    def test_shape(self, rng):
        t = pack_subbands(*random_planes(rng, 32))
        assert t.data.shape == (12, 16, 16)

    def test_pack_unpack_identity(self, rng):
        planes = random_planes(rng)
        y, cb, cr = unpack_subbands(pack_subbands(*planes))
        for out, src in zip((y, cb, cr), planes):
            assert np.array_equal(out.data, src.data)

    def test_impulse_probing_pins_every_channel(self):
        # an impulse in one quadrant of one plane must land in exactly one channel
        n, h = 8, 4
        quadrant_origin = {"LL": (0, 0), "HL": (0, h), "LH": (h, 0), "HH": (h, h)}
        for ch, name in enumerate(CHANNEL_ORDER):
            color, band = name.split("-")
            planes = [np.zeros((n, n)) for _ in range(3)]
            r0, c0 = quadrant_origin[band]
            planes[("Y", "Cb", "Cr").index(color)][r0 + 1, c0 + 2] = 5.0
            t = pack_subbands(*(CoeffPlane(p) for p in planes))
            hot = [c for c in range(12) if np.abs(t.data[c]).max() > 0]
            assert hot == [ch]
            assert t.data[ch][1, 2] == 5.0

    def test_mismatched_sizes_rejected(self, rng):
        a = CoeffPlane(rng.normal(size=(16, 16)))
        b = CoeffPlane(rng.normal(size=(8, 8)))
        with pytest.raises(ValueError):
            pack_subbands(a, a, b)

    def test_tensor_channel_count_enforced(self):
        with pytest.raises(ValueError):
            PackedTensor(np.zeros((3, 4, 4)))

    def test_gray_image_pipeline_is_all_zero(self):
        img_samples = np.full((32, 32, 3), 128, dtype=np.uint8)
        from wavecoef import RgbImage
        pair = build_transform_pair(32)
        planes = compress_planes(RgbImage(img_samples), 0, pair)
        t = pack_subbands(*planes)
        assert np.abs(t.data[0]).max() < 1e-9   # Y-LL: offset zeroes gray
        assert np.abs(t.data[1:]).max() < 1e-9

    def test_unpack_then_decode_recovers_image(self):
        img = natural_image(32, seed=5)
        pair = build_transform_pair(32)
        t = pack_subbands(*compress_planes(img, 0, pair))
        out = decode_tail(unpack_subbands(t), pair)
        assert np.array_equal(out.samples, img.samples)


class TestWctFile:
    def test_roundtrip_bit_identical(self, tmp_path, rng):
        tensors = rng.normal(size=(10, 12, 16, 16)).astype(np.float32)
        path = tmp_path / "batch.wct"
        write_wct(path, tensors, flags=1)
        back = read_wct(path)
        assert back.flags == 1
        assert back.data.dtype == np.float32
        assert np.array_equal(back.data, tensors)

    def test_write_is_deterministic(self, tmp_path, rng):
        tensors = rng.normal(size=(3, 12, 8, 8)).astype(np.float32)
        a, b = tmp_path / "a.wct", tmp_path / "b.wct"
        write_wct(a, tensors)
        write_wct(b, tensors)
        assert a.read_bytes() == b.read_bytes()

    def test_accepts_packed_tensor_list(self, tmp_path, rng):
        t = PackedTensor(rng.normal(size=(12, 8, 8)).astype(np.float32))
        path = tmp_path / "one.wct"
        write_wct(path, [t, t])
        assert read_wct(path).data.shape == (2, 12, 8, 8)

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "bad.wct"
        path.write_bytes(b"XXXX" + b"\0" * 40)
        with pytest.raises(WctFormatError, match="magic"):
            read_wct(path)

    def test_truncated_payload_rejected(self, tmp_path, rng):
        path = tmp_path / "trunc.wct"
        write_wct(path, rng.normal(size=(1, 12, 8, 8)).astype(np.float32))
        buf = bytearray(path.read_bytes())
        # header claims count=2 but only one tensor of payload follows
        struct.pack_into("<I", buf, 20, 2)
        path.write_bytes(bytes(buf))
        with pytest.raises(WctFormatError, match="payload"):
            read_wct(path)

    def test_unknown_version_rejected(self, tmp_path, rng):
        path = tmp_path / "ver.wct"
        write_wct(path, rng.normal(size=(1, 2, 4, 4)).astype(np.float32))
        buf = bytearray(path.read_bytes())
        struct.pack_into("<H", buf, 4, 9)
        path.write_bytes(bytes(buf))
        with pytest.raises(WctFormatError, match="version"):
            read_wct(path)

    def test_unknown_dtype_rejected(self, tmp_path, rng):
        path = tmp_path / "dt.wct"
        write_wct(path, rng.normal(size=(1, 2, 4, 4)).astype(np.float32))
        buf = bytearray(path.read_bytes())
        buf[6] = 7
        path.write_bytes(bytes(buf))
        with pytest.raises(WctFormatError, match="dtype"):
            read_wct(path)

    def test_short_file_rejected(self, tmp_path):
        path = tmp_path / "short.wct"
        path.write_bytes(b"WCT1\x01\x00")
        with pytest.raises(WctFormatError, match="short"):
            read_wct(path)

    def test_empty_batch_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            write_wct(tmp_path / "x.wct", [])

    def test_mismatched_batch_shapes_rejected(self, tmp_path, rng):
        tensors = [rng.normal(size=(12, 8, 8)), rng.normal(size=(12, 4, 4))]
        with pytest.raises(ValueError):
            write_wct(tmp_path / "x.wct", tensors)


class TestLabels:
    def test_roundtrip(self, tmp_path):
        path = tmp_path / "d.lbl"
        write_labels(path, [0, 3, 9, 65535])
        assert read_labels(path).tolist() == [0, 3, 9, 65535]

    def test_count_check(self, tmp_path):
        path = tmp_path / "d.lbl"
        write_labels(path, [1, 2, 3])
        with pytest.raises(WctFormatError, match="count"):
            read_labels(path, expected_count=5)

    def test_out_of_range_label_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            write_labels(tmp_path / "d.lbl", [70000])

    def test_odd_length_sidecar_rejected(self, tmp_path):
        path = tmp_path / "d.lbl"
        path.write_bytes(b"\x01\x00\x02")
        with pytest.raises(WctFormatError):
            read_labels(path)

    def test_sidecar_path_convention(self):
        assert str(label_path("data/train.wct")).endswith("train.lbl")
