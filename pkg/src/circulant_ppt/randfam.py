"""Seeded random block families (G G^H from complex Gaussians, unit trace)."""

from __future__ import annotations

import numpy as np

from .assembly import BigBlockFamily, SmallBlockFamily, normalize
from .geometry import Scheme, all_dinaries
from .linalg import DimsProfile


def random_psd(m: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    return g @ g.conj().T


def random_small_family(dims: DimsProfile, rng: np.random.Generator) -> SmallBlockFamily:
    blocks = {mu: random_psd(dims.d, rng) for mu in all_dinaries(dims.d, dims.n - 1)}
    return normalize(SmallBlockFamily(dims, blocks))


def random_big_family(dims: DimsProfile, scheme: Scheme, rng: np.random.Generator) -> BigBlockFamily:
    m = dims.d ** (dims.n - 1)
    blocks = [random_psd(m, rng) for _ in range(dims.d)]
    return normalize(BigBlockFamily.from_scheme(dims, scheme, blocks))
