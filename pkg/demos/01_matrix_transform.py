"""Walk through the transform machinery: lifting factors, the assembled
matrix, perfect reconstruction, and the equivalent filter taps.

Run:  python demos/01_matrix_transform.py
"""

import numpy as np

from wavecoef import (
    analysis_filters,
    build_transform_pair,
    dwt1d_lifting_reference,
    dwt2d,
    idwt2d,
)

np.set_printoptions(precision=3, suppress=True, linewidth=120)

# ---------------------------------------------------------------------------
# 1. The transform is a product of six sparse factors.
# ---------------------------------------------------------------------------
pair = build_transform_pair(8)
print("predict-1 factor (alpha enters odd columns):")
print(pair.factors.p1)
print("\nde-interleave permutation S (evens first, odds last):")
print(pair.factors.s.astype(int))

recomposed = pair.factors.product()
print("\n|P1 U1 P2 U2 Sc S - A|_max =", np.abs(recomposed - pair.A).max())

# ---------------------------------------------------------------------------
# 2. The stored inverse is exact: every factor inverts in closed form.
# ---------------------------------------------------------------------------
print("|A A_inv - I|_max =", np.abs(pair.A @ pair.A_inv - np.eye(8)).max())

# ---------------------------------------------------------------------------
# 3. One matrix product equals five lifting loops.
# ---------------------------------------------------------------------------
rng = np.random.default_rng(0)
signal = rng.uniform(-100, 100, 8)
print("\nmatrix path:   ", signal @ pair.A)
print("lifting loops: ", dwt1d_lifting_reference(signal))

# ---------------------------------------------------------------------------
# 4. 2D: transform both axes, reconstruct, check the error floor.
# ---------------------------------------------------------------------------
pair32 = build_transform_pair(32)
image = rng.uniform(0, 255, (32, 32))
coeffs = dwt2d(image, pair32)
print("\n2D round-trip error:", np.abs(idwt2d(coeffs, pair32) - image).max())

# a flat image puts everything into the LL quadrant
flat = dwt2d(np.full((32, 32), 128.0), pair32)
print("flat image: LL mean = %.6f, detail max = %.2e"
      % (flat.data[:16, :16].mean(), np.abs(flat.data[16:, 16:]).max()))

# ---------------------------------------------------------------------------
# 5. The lifting weights imply a 9-tap/7-tap filter bank.
# ---------------------------------------------------------------------------
h0, h1 = analysis_filters()
print("\nlow-pass taps: ", h0)
print("  sum =", h0.sum())
print("high-pass taps:", h1)
print("  sum =", h1.sum())
