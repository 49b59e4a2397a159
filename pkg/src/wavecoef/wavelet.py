"""CDF 9/7 discrete wavelet transform, as lifting loops and as a matrix product.

The forward 1-D transform of an even-length signal interleaves two predict
sweeps (odd samples accumulate weighted even neighbours) with two update
sweeps (even samples accumulate weighted odd neighbours), scales the two
phases, and finally de-interleaves low/high coefficients into contiguous
halves.  Every sweep is a banded linear map, so the whole transform is a
single matrix

    A = P1 @ U1 @ P2 @ U2 @ scaling @ S

composed for right-multiplication: ``row_coeffs = row_signal @ A``.  The 2-D
separable transform of a square plane X is then ``A.T @ X @ A``, which yields
the familiar quadrant layout (LL top-left, HL top-right, LH bottom-left,
HH bottom-right).

Each lifting factor is unipotent (its strictly off-diagonal part squares to
zero), so its inverse is obtained exactly by negating the lifting weight.
The stored synthesis matrix is built from those exact factor inverses rather
than from a numerical matrix inversion.

Boundaries use whole-sample symmetric reflection: the missing neighbour of an
edge sample is the one available neighbour, doubled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

# Irreversible 9/7 lifting weights (lossy JPEG2000 path).  Full-precision
# values; the 9-digit constants seen in codec sources are truncations of
# these.  The derived analysis filters have DC gains of exactly 1 (low) and
# 0 (high), which the test suite asserts.
ALPHA = -1.586134342059924
BETA = -0.052980118572961
GAMMA = 0.882911075530934
DELTA = 0.443506852043971
K_SCALE = 1.230174104914001


@dataclass(frozen=True)
class LiftingParams:
    """The five scalars that define the irreversible 9/7 lifting scheme."""

    alpha: float = ALPHA
    beta: float = BETA
    gamma: float = GAMMA
    delta: float = DELTA
    k_scale: float = K_SCALE

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta", "k_scale"):
            v = getattr(self, name)
            if not math.isfinite(v) or v == 0.0:
                raise ValueError(f"lifting parameter {name} must be finite and nonzero, got {v!r}")


DEFAULT_PARAMS = LiftingParams()


class LiftingFactors(NamedTuple):
    """The ordered factor matrices of the analysis transform."""

    p1: np.ndarray
    u1: np.ndarray
    p2: np.ndarray
    u2: np.ndarray
    scaling: np.ndarray
    s: np.ndarray

    def product(self) -> np.ndarray:
        return self.p1 @ self.u1 @ self.p2 @ self.u2 @ self.scaling @ self.s


@dataclass(frozen=True)
class TransformPair:
    """Analysis matrix A, its exact synthesis inverse, and the stored factors."""

    n: int
    A: np.ndarray
    A_inv: np.ndarray
    factors: LiftingFactors
    params: LiftingParams = DEFAULT_PARAMS


@dataclass(frozen=True)
class CoeffPlane:
    """A square subband-arranged coefficient grid.

    ``data`` holds the four quadrants of one decomposition step: LL top-left,
    HL top-right, LH bottom-left, HH bottom-right, each of side ``n // 2``.
    ``level`` records which decomposition step produced this grid (a level-2
    plane has half the side length of the level-1 plane of the same image).
    """

    data: np.ndarray
    level: int = 1

    def __post_init__(self):
        d = np.asarray(self.data)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError(f"coefficient plane must be square, got shape {d.shape}")
        if d.shape[0] % 2 != 0:
            raise ValueError(f"coefficient plane side must be even, got {d.shape[0]}")
        if self.level < 1:
            raise ValueError(f"level must be >= 1, got {self.level}")
        if not np.isfinite(d).all():
            raise ValueError("coefficient plane contains non-finite values")
        object.__setattr__(self, "data", d)

    @property
    def n(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True)
class CoeffPyramid:
    """Multi-level decomposition: deepest LL plus per-level detail triples.

    ``details[k]`` holds the (HL, LH, HH) bands of level ``k + 1``, finest
    first, each of side ``n / 2**(k+1)``.  ``ll`` is the approximation left
    after ``levels`` steps.  Total coefficient count equals ``n**2``.
    """

    n: int
    levels: int
    ll: np.ndarray
    details: tuple[tuple[np.ndarray, np.ndarray, np.ndarray], ...]

    def __post_init__(self):
        if self.levels < 1:
            raise ValueError(f"pyramid must have >= 1 level, got {self.levels}")
        if self.n % (1 << self.levels) != 0:
            raise ValueError(f"side {self.n} not divisible by 2^{self.levels}")
        if len(self.details) != self.levels:
            raise ValueError("detail triple count must equal level count")
        count = self.ll.size + sum(b.size for triple in self.details for b in triple)
        if count != self.n * self.n:
            raise ValueError(f"coefficient count {count} != n^2 = {self.n * self.n}")


def _validate_length(n: int) -> None:
    if n % 2 != 0 or n < 4:
        raise ValueError(f"signal length must be even and >= 4, got {n}")


def _predict_matrix(n: int, weight: float) -> np.ndarray:
    # column j odd: out[j] = x[j] + w*(x[j-1] + x[j+1]); the last odd sample
    # has no right neighbour and doubles the left one instead.
    m = np.eye(n)
    for j in range(1, n, 2):
        right = j + 1 if j + 1 < n else j - 1
        m[j - 1, j] += weight
        m[right, j] += weight
    return m


def _update_matrix(n: int, weight: float) -> np.ndarray:
    # column j even: out[j] = x[j] + w*(x[j-1] + x[j+1]); the first even
    # sample has no left neighbour and doubles the right one.
    m = np.eye(n)
    for j in range(0, n, 2):
        left = j - 1 if j - 1 >= 0 else j + 1
        m[left, j] += weight
        m[j + 1, j] += weight
    return m


def _scaling_matrix(n: int, k: float) -> np.ndarray:
    d = np.empty(n)
    d[0::2] = 1.0 / k
    d[1::2] = k
    return np.diag(d)


def _deinterleave_matrix(n: int) -> np.ndarray:
    s = np.zeros((n, n))
    half = n // 2
    for i in range(half):
        s[2 * i, i] = 1.0
        s[2 * i + 1, half + i] = 1.0
    return s


def build_transform_pair(n: int, params: LiftingParams = DEFAULT_PARAMS) -> TransformPair:
    """Construct the n-point analysis matrix and its exact inverse.

    ``n`` must be even and >= 4.  The analysis matrix right-multiplies row
    signals; the returned pair also keeps the six individual factors so the
    factorization itself can be inspected or re-validated.
    """
    _validate_length(n)
    factors = LiftingFactors(
        p1=_predict_matrix(n, params.alpha),
        u1=_update_matrix(n, params.beta),
        p2=_predict_matrix(n, params.gamma),
        u2=_update_matrix(n, params.delta),
        scaling=_scaling_matrix(n, params.k_scale),
        s=_deinterleave_matrix(n),
    )
    a = factors.product()
    # invert by undoing each step: S^T re-interleaves, each unipotent factor
    # inverts by weight negation, the diagonal by reciprocal.
    a_inv = (
        factors.s.T
        @ _scaling_matrix(n, 1.0 / params.k_scale)
        @ _update_matrix(n, -params.delta)
        @ _predict_matrix(n, -params.gamma)
        @ _update_matrix(n, -params.beta)
        @ _predict_matrix(n, -params.alpha)
    )
    return TransformPair(n=n, A=a, A_inv=a_inv, factors=factors, params=params)


def dwt1d_lifting_reference(signal, params: LiftingParams = DEFAULT_PARAMS) -> np.ndarray:
    """Reference forward 1-D transform as explicit per-sample lifting loops.

    Deliberately loop-based and independent of the matrix path; it is the
    oracle the matrix construction is checked against.  Returns the
    de-interleaved coefficient vector (low half then high half).
    """
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"expected a 1-D signal, got shape {x.shape}")
    n = x.size
    _validate_length(n)
    half = n // 2
    s = x[0::2].copy()
    d = x[1::2].copy()
    for i in range(half):  # predict 1
        s_right = s[i + 1] if i + 1 < half else s[i]
        d[i] += params.alpha * (s[i] + s_right)
    for i in range(half):  # update 1
        d_left = d[i - 1] if i - 1 >= 0 else d[i]
        s[i] += params.beta * (d_left + d[i])
    for i in range(half):  # predict 2
        s_right = s[i + 1] if i + 1 < half else s[i]
        d[i] += params.gamma * (s[i] + s_right)
    for i in range(half):  # update 2
        d_left = d[i - 1] if i - 1 >= 0 else d[i]
        s[i] += params.delta * (d_left + d[i])
    out = np.empty(n)
    for i in range(half):  # scale + de-interleave
        out[i] = s[i] / params.k_scale
        out[half + i] = d[i] * params.k_scale
    return out


def dwt2d_lifting_reference(x, params: LiftingParams = DEFAULT_PARAMS) -> CoeffPlane:
    """2-D forward transform via the loop reference applied to rows, then columns."""
    x = np.asarray(x, dtype=np.float64)
    _check_square(x)
    out = np.empty_like(x)
    for r in range(x.shape[0]):
        out[r, :] = dwt1d_lifting_reference(x[r, :], params)
    for c in range(x.shape[1]):
        out[:, c] = dwt1d_lifting_reference(out[:, c], params)
    return CoeffPlane(out, level=1)


def _check_square(x: np.ndarray) -> None:
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValueError(f"expected a square plane, got shape {x.shape}")


def _check_pair(n: int, pair: TransformPair) -> None:
    if n != pair.n:
        raise ValueError(f"plane side {n} does not match transform size {pair.n}")


def dwt2d(x, pair: TransformPair, level: int = 1) -> CoeffPlane:
    """Forward 2-D transform ``A.T @ x @ A`` in subband-arranged layout."""
    x = np.asarray(x, dtype=np.float64)
    _check_square(x)
    _check_pair(x.shape[0], pair)
    return CoeffPlane(pair.A.T @ x @ pair.A, level=level)


def idwt2d(w: CoeffPlane, pair: TransformPair) -> np.ndarray:
    """Inverse 2-D transform ``A^-T @ w @ A^-1`` back to the spatial plane."""
    _check_pair(w.n, pair)
    return pair.A_inv.T @ w.data @ pair.A_inv


def dwt2d_batch(stack, pair: TransformPair) -> np.ndarray:
    """Forward-transform a stack of planes (m, n, n) in one matrix product."""
    stack = np.asarray(stack)
    if stack.ndim != 3 or stack.shape[1] != stack.shape[2]:
        raise ValueError(f"expected a stack of square planes, got shape {stack.shape}")
    _check_pair(stack.shape[1], pair)
    a = pair.A.astype(stack.dtype, copy=False)
    return np.matmul(a.T, np.matmul(stack, a))


def split_subbands(plane: CoeffPlane) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Return (LL, HL, LH, HH) quadrant views of a subband-arranged plane."""
    h = plane.n // 2
    d = plane.data
    return d[:h, :h], d[:h, h:], d[h:, :h], d[h:, h:]


def merge_subbands(ll, hl, lh, hh, level: int = 1) -> CoeffPlane:
    """Assemble four equal quadrants back into one subband-arranged plane."""
    ll, hl, lh, hh = (np.asarray(b) for b in (ll, hl, lh, hh))
    if not (ll.shape == hl.shape == lh.shape == hh.shape):
        raise ValueError("subband quadrants must share one shape")
    return CoeffPlane(np.block([[ll, hl], [lh, hh]]), level=level)


def dwt_multilevel(x, levels: int, params: LiftingParams = DEFAULT_PARAMS) -> CoeffPyramid:
    """Decompose a plane ``levels`` times, re-transforming the LL band each step."""
    x = np.asarray(x, dtype=np.float64)
    _check_square(x)
    n = x.shape[0]
    if levels < 1:
        raise ValueError(f"level count must be >= 1, got {levels}")
    if n % (1 << levels) != 0:
        raise ValueError(f"side {n} is not divisible by 2^{levels}")
    details = []
    approx = x
    for lvl in range(1, levels + 1):
        pair = build_transform_pair(approx.shape[0], params)
        plane = dwt2d(approx, pair, level=lvl)
        ll, hl, lh, hh = split_subbands(plane)
        details.append((hl.copy(), lh.copy(), hh.copy()))
        approx = ll.copy()
    return CoeffPyramid(n=n, levels=levels, ll=approx, details=tuple(details))


def idwt_partial(pyramid: CoeffPyramid, target_level: int,
                 params: LiftingParams = DEFAULT_PARAMS) -> CoeffPlane:
    """Invert levels ``pyramid.levels .. target_level + 1`` and stop.

    Returns the subband-arranged plane at ``target_level``; with
    ``target_level == pyramid.levels`` this is just the deepest plane, with
    ``target_level == 1`` the full-size level-1 grid.
    """
    if not 1 <= target_level <= pyramid.levels:
        raise ValueError(
            f"target level {target_level} out of range 1..{pyramid.levels}")
    hl, lh, hh = pyramid.details[pyramid.levels - 1]
    plane = merge_subbands(pyramid.ll, hl, lh, hh, level=pyramid.levels)
    for lvl in range(pyramid.levels, target_level, -1):
        pair = build_transform_pair(plane.n, params)
        approx = idwt2d(plane, pair)
        hl, lh, hh = pyramid.details[lvl - 2]
        plane = merge_subbands(approx, hl, lh, hh, level=lvl - 1)
    return plane


def idwt_multilevel(pyramid: CoeffPyramid, params: LiftingParams = DEFAULT_PARAMS) -> np.ndarray:
    """Fully invert a pyramid back to the spatial plane."""
    plane = idwt_partial(pyramid, 1, params)
    return idwt2d(plane, build_transform_pair(plane.n, params))


def pyramid_to_plane(pyramid: CoeffPyramid) -> np.ndarray:
    """Nest a pyramid into one n-by-n grid (deepest LL in the top-left corner)."""
    out = np.empty((pyramid.n, pyramid.n))
    side = pyramid.n >> pyramid.levels
    out[:side, :side] = pyramid.ll
    for lvl in range(pyramid.levels, 0, -1):
        hl, lh, hh = pyramid.details[lvl - 1]
        s = side
        out[:s, s:2 * s] = hl
        out[s:2 * s, :s] = lh
        out[s:2 * s, s:2 * s] = hh
        side *= 2
    return out


def plane_to_pyramid(grid, levels: int) -> CoeffPyramid:
    """Rebuild a pyramid from its nested n-by-n grid form."""
    grid = np.asarray(grid, dtype=np.float64)
    _check_square(grid)
    n = grid.shape[0]
    if levels < 1 or n % (1 << levels) != 0:
        raise ValueError(f"side {n} does not admit {levels} levels")
    details = []
    for lvl in range(1, levels + 1):
        s = n >> lvl
        details.append((grid[:s, s:2 * s].copy(),
                        grid[s:2 * s, :s].copy(),
                        grid[s:2 * s, s:2 * s].copy()))
    side = n >> levels
    return CoeffPyramid(n=n, levels=levels, ll=grid[:side, :side].copy(),
                        details=tuple(details))


def analysis_filters(params: LiftingParams = DEFAULT_PARAMS) -> tuple[np.ndarray, np.ndarray]:
    """Derive the equivalent 9-tap low / 7-tap high analysis filters.

    Expands the lifting recurrences symbolically on an unbounded signal, so
    boundary handling never enters.  Useful for validating parameter sets:
    the low taps must sum to the DC gain (1 for the defaults) and the high
    taps to 0.
    """
    def combine(parts):
        out: dict[int, float] = {}
        for coeffs, w in parts:
            for k, v in coeffs.items():
                out[k] = out.get(k, 0.0) + w * v
        return out

    d1 = {i: combine([({2 * i + 1: 1.0}, 1.0), ({2 * i: 1.0}, params.alpha),
                      ({2 * i + 2: 1.0}, params.alpha)]) for i in range(-8, 9)}
    s1 = {i: combine([({2 * i: 1.0}, 1.0), (d1[i - 1], params.beta), (d1[i], params.beta)])
          for i in range(-7, 8)}
    d2 = {i: combine([(d1[i], 1.0), (s1[i], params.gamma), (s1[i + 1], params.gamma)])
          for i in range(-6, 7)}
    s2 = {i: combine([(s1[i], 1.0), (d2[i - 1], params.delta), (d2[i], params.delta)])
          for i in range(-5, 6)}
    low = {k: v / params.k_scale for k, v in s2[0].items()}
    high = {k: v * params.k_scale for k, v in d2[0].items()}
    h0 = np.array([low.get(k, 0.0) for k in range(-4, 5)])
    h1 = np.array([high.get(k, 0.0) for k in range(-2, 5)])  # centered on sample 1
    return h0, h1
