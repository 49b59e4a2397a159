"""Geometric augmentation applied directly to wavelet coefficient planes.

A spatial augmentation acting on an image X as ``G @ X @ H`` (G permutes or
mixes rows, H columns) has an exact coefficient-domain counterpart.  Writing
the transform as ``W = A.T @ X @ A``:

    right side:  H_conj = A_inv @ H @ A
    left side:   G_conj = A.T @ G @ A_inv.T

so that ``G_conj @ W @ H_conj`` is precisely the transform of the augmented
image.  Flipping or shifting coefficients as if they were pixels does NOT
have this property; ``naive_subband_flip`` below reproduces that broken
shortcut as a negative control.

Conjugated matrices cost two n-by-n products each, so operators are cached
per (transform, kind, arguments) and reused across a sampling run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .wavelet import CoeffPlane, TransformPair

FILL_MODES = ("zero", "circular")


@dataclass(frozen=True)
class AugOperator:
    """A spatial (G, H) pair together with its coefficient-domain conjugates."""

    kind: str
    H: np.ndarray
    G: np.ndarray
    H_conj: np.ndarray
    G_conj: np.ndarray

    @property
    def n(self) -> int:
        return self.H.shape[0]


@dataclass(frozen=True)
class AugPolicy:
    """Sampling configuration: flip probability, shift range, fill rule, seed."""

    seed: int = 0
    p_hflip: float = 0.5
    max_shift: int = 0
    fill: str = "zero"

    def __post_init__(self):
        if not 0.0 <= self.p_hflip <= 1.0:
            raise ValueError(f"p_hflip must lie in [0, 1], got {self.p_hflip}")
        if self.max_shift < 0:
            raise ValueError(f"max_shift must be >= 0, got {self.max_shift}")
        if self.fill not in FILL_MODES:
            raise ValueError(f"fill must be one of {FILL_MODES}, got {self.fill!r}")


def flip_matrix(n: int) -> np.ndarray:
    """Anti-diagonal permutation: reverses columns on the right, rows on the left."""
    return np.eye(n)[:, ::-1].copy()


def shift_matrix(n: int, s: int, fill: str = "zero") -> np.ndarray:
    """Right-side shift-by-s operator (columns move by s; ``fill`` rules the gap).

    For the left side (rows moving by s) use the transpose.
    """
    if abs(s) >= n:
        raise ValueError(f"shift magnitude {abs(s)} must be smaller than size {n}")
    if fill not in FILL_MODES:
        raise ValueError(f"fill must be one of {FILL_MODES}, got {fill!r}")
    m = np.zeros((n, n))
    for i in range(n):
        j = i + s
        if fill == "circular":
            m[i, j % n] = 1.0
        elif 0 <= j < n:
            m[i, j] = 1.0
    return m


def spatial_operator(kind: str, n: int, shift: int = 0, matrix=None,
                     fill: str = "zero") -> np.ndarray:
    """Build one spatial operator matrix.

    ``hflip``/``hshift`` yield right-multiplication matrices (column action),
    ``vflip``/``vshift`` the left-multiplication analogues, ``custom`` passes
    ``matrix`` through after a shape check.
    """
    if n % 2 != 0:
        raise ValueError(f"operator size must be even, got {n}")
    if kind in ("hflip", "vflip"):
        return flip_matrix(n)
    if kind == "hshift":
        return shift_matrix(n, shift, fill)
    if kind == "vshift":
        # rows move by `shift`: left operator is the transpose of the column form
        return shift_matrix(n, shift, fill).T
    if kind == "custom":
        m = np.asarray(matrix, dtype=np.float64)
        if m.shape != (n, n):
            raise ValueError(f"custom operator must be {n}x{n}, got {m.shape}")
        return m
    raise ValueError(f"unknown operator kind {kind!r}")


def conjugate(m, pair: TransformPair, side: str = "right") -> np.ndarray:
    """Map a spatial operator into the coefficient domain.

    ``side='right'`` conjugates a column-action operator (A_inv @ H @ A);
    ``side='left'`` a row-action operator (A.T @ G @ A_inv.T).
    """
    m = np.asarray(m, dtype=np.float64)
    if m.shape != (pair.n, pair.n):
        raise ValueError(f"operator shape {m.shape} does not match transform size {pair.n}")
    if side == "right":
        return pair.A_inv @ m @ pair.A
    if side == "left":
        return pair.A.T @ m @ pair.A_inv.T
    raise ValueError(f"side must be 'right' or 'left', got {side!r}")


def make_operator(pair: TransformPair, hflip: bool = False, vflip: bool = False,
                  dx: int = 0, dy: int = 0, fill: str = "zero",
                  H=None, G=None) -> AugOperator:
    """Compose flips and shifts (or explicit custom matrices) into one operator.

    Application order is flip first, then shift.  ``dx`` moves columns,
    ``dy`` moves rows.  ``H``/``G`` override the built-ins for custom
    operators.
    """
    n = pair.n
    if H is not None or G is not None:
        h = spatial_operator("custom", n, matrix=H) if H is not None else np.eye(n)
        g = spatial_operator("custom", n, matrix=G) if G is not None else np.eye(n)
        kind = "custom"
    else:
        h = np.eye(n)
        g = np.eye(n)
        parts = []
        if hflip:
            h = h @ spatial_operator("hflip", n)
            parts.append("hflip")
        if vflip:
            g = spatial_operator("vflip", n) @ g
            parts.append("vflip")
        if dx:
            h = h @ spatial_operator("hshift", n, shift=dx, fill=fill)
            parts.append(f"hshift({dx})")
        if dy:
            g = spatial_operator("vshift", n, shift=dy, fill=fill) @ g
            parts.append(f"vshift({dy})")
        kind = "+".join(parts) if parts else "identity"
    return AugOperator(kind=kind, H=h, G=g,
                       H_conj=conjugate(h, pair, "right"),
                       G_conj=conjugate(g, pair, "left"))


def apply_augmentation(w: CoeffPlane, op: AugOperator) -> CoeffPlane:
    """Apply a conjugated operator pair to a coefficient plane."""
    if w.n != op.n:
        raise ValueError(f"plane side {w.n} does not match operator size {op.n}")
    return CoeffPlane(op.G_conj @ w.data @ op.H_conj, level=w.level)


def apply_spatial(x: np.ndarray, op: AugOperator) -> np.ndarray:
    """Apply the same operator in the spatial domain: ``G @ x @ H``."""
    return op.G @ np.asarray(x, dtype=np.float64) @ op.H


def naive_subband_flip(w: CoeffPlane) -> CoeffPlane:
    """Flip each subband's columns as if coefficients were pixels.

    This is the shortcut a standard augmentation pipeline takes on a packed
    coefficient tensor.  It is NOT equivalent to flipping the image; the
    reconstruction comes back visibly distorted, which the tests assert.
    """
    h = w.n // 2
    out = w.data.copy()
    for r0, c0 in ((0, 0), (0, h), (h, 0), (h, h)):
        out[r0:r0 + h, c0:c0 + h] = out[r0:r0 + h, c0:c0 + h][:, ::-1]
    return CoeffPlane(out, level=w.level)


class OperatorCache:
    """Memoizes conjugated operators per (flip/shift arguments) for one pair."""

    def __init__(self, pair: TransformPair):
        self.pair = pair
        self._ops: dict[tuple, AugOperator] = {}

    def get(self, hflip: bool = False, vflip: bool = False, dx: int = 0, dy: int = 0,
            fill: str = "zero") -> AugOperator:
        key = (bool(hflip), bool(vflip), int(dx), int(dy), fill)
        op = self._ops.get(key)
        if op is None:
            op = make_operator(self.pair, hflip=hflip, vflip=vflip, dx=dx, dy=dy, fill=fill)
            self._ops[key] = op
        return op

    def __len__(self) -> int:
        return len(self._ops)


def sample_policy(policy: AugPolicy, count: int, pair: TransformPair,
                  cache: OperatorCache | None = None) -> list[AugOperator]:
    """Draw ``count`` operators: flip with probability p_hflip, shifts uniform
    in [-max_shift, max_shift].  Deterministic in (seed, policy, count); the
    conjugated forms are built once per distinct draw via the cache."""
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    if policy.max_shift >= pair.n // 2 and policy.max_shift > 0:
        raise ValueError(f"max_shift {policy.max_shift} must be < n/2 = {pair.n // 2}")
    if cache is None:
        cache = OperatorCache(pair)
    rng = np.random.default_rng(policy.seed)
    ops = []
    for _ in range(count):
        flip = bool(rng.random() < policy.p_hflip)
        dx = int(rng.integers(-policy.max_shift, policy.max_shift + 1)) if policy.max_shift else 0
        dy = int(rng.integers(-policy.max_shift, policy.max_shift + 1)) if policy.max_shift else 0
        ops.append(cache.get(hflip=flip, dx=dx, dy=dy, fill=policy.fill))
    return ops
