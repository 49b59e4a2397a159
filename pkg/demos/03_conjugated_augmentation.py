"""Why flipping coefficients like pixels breaks, and how conjugation fixes it.

A horizontal flip of the image is a right-multiplication by the
anti-diagonal permutation J.  Applied directly to the coefficient grid it
scrambles the reconstruction; conjugated through the transform
(A^-1 J A) it commutes exactly.

Run:  python demos/03_conjugated_augmentation.py
Writes the three reconstructions to demos/out/.
"""

from pathlib import Path

import numpy as np

from wavecoef import (
    RgbImage,
    apply_augmentation,
    build_transform_pair,
    dwt2d,
    flip_matrix,
    idwt2d,
    make_operator,
    naive_subband_flip,
    write_ppm,
)

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

n = 64
rng = np.random.default_rng(4)
t = np.linspace(0, 1, n)
plane = (120 * np.outer(np.sin(2.1 * np.pi * t + 0.5), np.cos(1.3 * np.pi * t))
         + 60 * np.add.outer(t, t) + 8 * rng.standard_normal((n, n)) + 90)
plane = np.clip(plane, 0, 255)

pair = build_transform_pair(n)
coeffs = dwt2d(plane, pair)
target = plane @ flip_matrix(n)  # ground truth: flip in the pixel domain

# naive: flip each subband's columns as if they were pixels
naive = idwt2d(naive_subband_flip(coeffs), pair)
# conjugated: apply A^-1 J A to the coefficients
op = make_operator(pair, hflip=True)
conjugated = idwt2d(apply_augmentation(coeffs, op), pair)

print("max |reconstruction - true flipped image|")
print(f"  naive subband flip: {np.abs(naive - target).max():10.3f}   (visibly broken)")
print(f"  conjugated flip:    {np.abs(conjugated - target).max():10.3e}  (exact)")


def to_gray_ppm(path, gray):
    g = np.clip(gray, 0, 255).astype(np.uint8)
    write_ppm(path, RgbImage(np.stack([g, g, g], axis=-1)))


to_gray_ppm(OUT / "flip_target.ppm", target)
to_gray_ppm(OUT / "flip_naive.ppm", naive)
to_gray_ppm(OUT / "flip_conjugated.ppm", conjugated)
print("\nwrote flip_target.ppm / flip_naive.ppm / flip_conjugated.ppm to", OUT)

# shifts and vertical flips conjugate the same way, on the left side
for kwargs, label in [(dict(dx=3), "shift right 3"),
                      (dict(vflip=True), "vertical flip"),
                      (dict(hflip=True, dy=-2), "flip + shift up 2")]:
    op = make_operator(pair, **kwargs)
    rec = idwt2d(apply_augmentation(coeffs, op), pair)
    spatial = op.G @ plane @ op.H
    print(f"{label:<18} commutation error: {np.abs(rec - spatial).max():.3e}")
