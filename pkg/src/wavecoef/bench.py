"""Timing harnesses for reconstruction gain and batch transform throughput.

All timings are medians over at least :data:`MIN_ITERATIONS` samples with
warmup passes excluded, and every timed path is checked against an oracle
before the clock starts so a broken fast path can never produce a report.
The reconstruction-gain denominator here is the in-process decode tail
(dequantize, inverse transform, color map, offset), not a full entropy
decoder, so the percentages are a trend to compare against codec-level
measurements, not a reproduction of them.
"""

from __future__ import annotations

import contextlib
import math
import platform
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

try:
    from threadpoolctl import threadpool_limits
except ImportError:  # timings are noisier but still valid without it
    threadpool_limits = None

from . import codec
from .codec import RgbImage, decode_tail, deadzone_quantize, dequantize
from .wavelet import build_transform_pair, dwt1d_lifting_reference, dwt2d, dwt2d_batch, idwt2d

MIN_ITERATIONS = 30
_WARMUP = 3


@dataclass
class BenchReport:
    """Structured benchmark output: one dict per row plus environment metadata."""

    kind: str
    rows: list[dict]
    environment: str
    timestamp: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    def records(self) -> list[str]:
        """Line-delimited `key=value` records, one per row."""
        out = []
        for row in self.rows:
            out.append(" ".join(f"{k}={_fmt(v)}" for k, v in row.items()))
        return out

    def to_csv(self, path) -> None:
        keys = list(self.rows[0].keys())
        lines = [",".join(keys)]
        lines += [",".join(_fmt(row[k]) for k in keys) for row in self.rows]
        with open(path, "w") as f:
            f.write("\n".join(lines) + "\n")


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.4f}"
    return str(v)


def _environment_note(iterations: int) -> str:
    cpu = platform.processor() or platform.machine()
    return f"{cpu}; {platform.system()} {platform.release()}; python {platform.python_version()}; {iterations} iterations/median"


def _single_thread():
    """Pin library thread pools to one thread while timing, when possible."""
    if threadpool_limits is None:
        return contextlib.nullcontext()
    return threadpool_limits(limits=1)


def _calibrate_repeats(fn, min_sample_s: float) -> int:
    t0 = time.perf_counter()
    fn()
    estimate = max(time.perf_counter() - t0, 1e-9)
    return min(max(1, math.ceil(min_sample_s / estimate)), 10_000)


def _timed_block_ms(fn, repeats: int) -> float:
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats * 1e3


def _median_ms(fn, iterations: int, min_sample_s: float = 2e-3) -> float:
    """Median wall time of one fn() call in ms, warmup discarded.

    Calls cheaper than ``min_sample_s`` are timed in calibrated inner-repeat
    blocks so a sample always spans enough wall time to be trustworthy.
    """
    for _ in range(_WARMUP):
        fn()
    repeats = _calibrate_repeats(fn, min_sample_s)
    samples = [_timed_block_ms(fn, repeats) for _ in range(iterations)]
    return float(np.median(samples))


def _paired_share_ms(fn_a, fn_b, iterations: int,
                     min_sample_s: float = 2e-3) -> tuple[float, float, float]:
    """Time two closures back-to-back per iteration; return (median_a_ms,
    median_b_ms, median of per-iteration a/b ratios).

    Pairing makes the ratio robust to machine-state drift (frequency
    scaling, noisy neighbours): a slow stretch inflates both samples of a
    pair together instead of one closure's entire block, and the per-pair
    ratio is taken before the median.
    """
    for _ in range(_WARMUP):
        fn_a()
        fn_b()
    repeats_a = _calibrate_repeats(fn_a, min_sample_s)
    repeats_b = _calibrate_repeats(fn_b, min_sample_s)
    a_samples = np.empty(iterations)
    b_samples = np.empty(iterations)
    for i in range(iterations):
        a_samples[i] = _timed_block_ms(fn_a, repeats_a)
        b_samples[i] = _timed_block_ms(fn_b, repeats_b)
    ratio = float(np.median(a_samples / b_samples))
    return float(np.median(a_samples)), float(np.median(b_samples)), ratio


def _test_image(n: int, rng) -> RgbImage:
    # smooth ramps plus mild noise: enough detail energy to keep the
    # quantizer busy without being pure noise
    t = np.linspace(0.0, 1.0, n)
    base = 90 * np.outer(np.sin(3.1 * t + 0.3), np.cos(2.3 * t)) + 120
    img = np.stack([base + 20 * np.sin(7 * t)[None, :],
                    base + rng.normal(scale=6.0, size=(n, n)),
                    base + 25 * np.cos(5 * t)[:, None]], axis=-1)
    return RgbImage(np.clip(img, 0, 255).astype(np.uint8))


def _verify_decode_tail(pair, img: RgbImage) -> None:
    # timed path must be exact on the bypass pipeline before it is timed
    planes = codec.compress_planes(img, 0, pair)
    rebuilt = decode_tail(planes, pair)
    if not np.array_equal(rebuilt.samples, img.samples):
        raise AssertionError("decode tail failed the lossless round-trip oracle")
    q = codec.quantize_values(np.array([-3.2, 0.7, 2.0]), 1.0)
    if q.tolist() != [-3, 0, 2]:
        raise AssertionError("quantizer disagrees with its defining formula")


def _make_decode_closures(n: int, rng):
    """Build the (dequantize-only, full-tail) closure pair for one size and
    verify the tail against the public plane-level path."""
    pair = build_transform_pair(n)
    img = _test_image(n, rng)
    _verify_decode_tail(pair, img)
    ycc = codec.forward_precoding(img)
    step = 2.0
    quantized = [deadzone_quantize(dwt2d(ch, pair), step, ratio=5.0)
                 for ch in (ycc.y, ycc.cb, ycc.cr)]
    q_stack = np.stack([q.data for q in quantized])
    a_inv = pair.A_inv
    ict_t = codec.ICT_INVERSE.T

    def dequant_only():
        return codec.dequantize_values(q_stack, step)

    def full_tail():
        coeffs = codec.dequantize_values(q_stack, step)
        spatial = np.matmul(a_inv.T, np.matmul(coeffs, a_inv))
        rgb = np.moveaxis(spatial, 0, -1) @ ict_t + codec.LEVEL_OFFSET
        rounded = np.sign(rgb) * np.floor(np.abs(rgb) + 0.5)
        return np.clip(rounded, 0, 255).astype(np.uint8)

    # the stacked closure must reproduce the plane-level decode exactly
    reference = decode_tail(tuple(dequantize(q) for q in quantized), pair)
    if not np.array_equal(full_tail(), reference.samples):
        raise AssertionError("stacked decode tail disagrees with the public path")
    return dequant_only, full_tail


def bench_recon_gain(sizes=(32, 64, 224), iterations: int = 50, seed: int = 0,
                     rounds: int = 3) -> BenchReport:
    """Time the decode tail against dequantization alone at each image size.

    ``gain`` is the share of decode-tail time spent on work a
    coefficient-domain consumer skips (inverse transform, color map,
    offset); dequantization is the part both consumers pay.  Timing runs
    single-threaded; each iteration samples the two closures back-to-back,
    and the sizes are measured round-robin over ``rounds`` passes with
    per-size medians taken across passes, so neither clock drift nor a
    transient machine regime can bias one size's entire measurement.
    """
    if iterations < MIN_ITERATIONS:
        raise ValueError(f"iterations must be >= {MIN_ITERATIONS}, got {iterations}")
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    rng = np.random.default_rng(seed)
    closures = {}
    for n in sizes:
        if n % 2 != 0:
            raise ValueError(f"sizes must be even, got {n}")
        closures[n] = _make_decode_closures(n, rng)
    per_round = max(MIN_ITERATIONS, iterations // rounds)
    results: dict[int, list[tuple[float, float]]] = {n: [] for n in sizes}
    with _single_thread():
        for _ in range(rounds):
            for n in sizes:
                dequant_only, full_tail = closures[n]
                _, total_ms, kept_share = _paired_share_ms(
                    dequant_only, full_tail, per_round)
                results[n].append((total_ms, kept_share))
    rows = []
    for n in sizes:
        total_ms = float(np.median([r[0] for r in results[n]]))
        kept_share = float(np.median([r[1] for r in results[n]]))
        gain_pct = max(100.0 * (1.0 - kept_share), 0.0)
        gain_ms = gain_pct / 100.0 * total_ms
        rows.append({"size": n, "total_ms": total_ms, "gain_ms": gain_ms,
                     "gain_pct": gain_pct})
    return BenchReport(kind="recon_gain", rows=rows,
                       environment=_environment_note(iterations))


def bench_batch_dwt(count: int, side: int = 32, iterations: int = MIN_ITERATIONS,
                    seed: int = 0, sample_fraction: float = 0.01) -> BenchReport:
    """Time the precomputed-matrix batch transform of ``count`` RGB-sized
    image stacks, and the loop-based lifting path on a small subsample.

    The lifting path is timed per plane over at least :data:`MIN_ITERATIONS`
    samples and extrapolated to the full workload; the reported ``speedup``
    is that extrapolation divided by the measured batch time.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if iterations < MIN_ITERATIONS:
        raise ValueError(f"iterations must be >= {MIN_ITERATIONS}, got {iterations}")
    pair = build_transform_pair(side)
    rng = np.random.default_rng(seed)
    stack = rng.uniform(-128.0, 128.0, size=(count * 3, side, side)).astype(np.float32)

    # oracle gate: the batched matrix path must agree with the lifting loops
    probe = stack[0].astype(np.float64)
    ref = np.empty_like(probe)
    for r in range(side):
        ref[r, :] = dwt1d_lifting_reference(probe[r, :])
    for c in range(side):
        ref[:, c] = dwt1d_lifting_reference(ref[:, c])
    fast = dwt2d_batch(stack[:1], pair)[0]
    if np.abs(fast - ref).max() > 1e-2:
        raise AssertionError("batched matrix path disagrees with the lifting oracle")

    with _single_thread():
        matrix_ms = _median_ms(lambda: dwt2d_batch(stack, pair), iterations)

    sample = max(1, round(count * sample_fraction))
    planes = stack[:min(sample * 3, stack.shape[0])].astype(np.float64)
    n_planes = planes.shape[0]
    samples_ms = []
    for i in range(max(MIN_ITERATIONS, n_planes)):
        plane = planes[i % n_planes]
        t0 = time.perf_counter()
        work = np.empty_like(plane)
        for r in range(side):
            work[r, :] = dwt1d_lifting_reference(plane[r, :])
        for c in range(side):
            work[:, c] = dwt1d_lifting_reference(work[:, c])
        samples_ms.append((time.perf_counter() - t0) * 1e3)
    per_plane_ms = float(np.median(samples_ms))
    lifting_est_ms = per_plane_ms * count * 3
    speedup = lifting_est_ms / matrix_ms if matrix_ms > 0 else float("inf")
    rows = [{"count": count, "size": side, "matrix_ms": matrix_ms,
             "lifting_est_ms": lifting_est_ms, "speedup": speedup}]
    return BenchReport(kind="batch_dwt", rows=rows,
                       environment=_environment_note(iterations))
