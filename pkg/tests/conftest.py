import numpy as np
import pytest

from wavecoef import RgbImage


def natural_plane(n: int, seed: int = 0, scale: float = 255.0) -> np.ndarray:
    """Deterministic plane with natural-image statistics: smooth ramps,
    oriented waves, and mild texture, spanning roughly [0, scale]."""
    rng = np.random.default_rng(seed)
    t = np.linspace(0.0, 1.0, n)
    plane = (
        0.35 * np.outer(np.sin(2.7 * np.pi * t + 0.4), np.cos(1.9 * np.pi * t))
        + 0.25 * np.add.outer(t, t)
        + 0.12 * np.sin(9.0 * np.pi * t)[None, :]
        + 0.05 * rng.standard_normal((n, n))
        + 0.5
    )
    return np.clip(plane, 0.0, 1.0) * scale


def natural_image(n: int, seed: int = 0) -> RgbImage:
    """Deterministic RGB test image built from three offset natural planes."""
    channels = [natural_plane(n, seed=seed + k) for k in range(3)]
    return RgbImage(np.clip(np.stack(channels, axis=-1), 0, 255).astype(np.uint8))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
