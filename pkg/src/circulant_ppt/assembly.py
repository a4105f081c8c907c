"""Block families, their dense assembly, and structure-preserving reductions."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence, Union

import numpy as np

from .geometry import (
    BigLayout,
    Dinary,
    Scheme,
    all_dinaries,
    delta_basis,
    delta_basis_transposed,
    small_support_index,
)
from .linalg import DimsProfile, as_matrix, check_hermitian, is_psd, partial_trace

STRUCTURE_RTOL = 1e-13


class NotCirculantError(ValueError):
    """A dense matrix has weight outside every Delta_mu x Delta_mu block."""

    def __init__(self, row: int, col: int, magnitude: float):
        self.row, self.col, self.magnitude = row, col, magnitude
        super().__init__(
            f"entry ({row}, {col}) with |value| = {magnitude:.3e} lies outside the circulant support"
        )


@dataclass(frozen=True, eq=False)
class SmallBlockFamily:
    """One ``d x d`` block per label mu, supported on Delta_mu^[twist].

    ``twist`` is the binary mask of the Pi-twisted decomposition the blocks
    refer to; it is all zeros for ordinary circulant families.
    """

    dims: DimsProfile
    blocks: Mapping[Dinary, np.ndarray]
    twist: Dinary = None

    def __post_init__(self):
        twist = self.twist if self.twist is not None else (0,) * (self.dims.n - 1)
        object.__setattr__(self, "twist", tuple(twist))
        d = self.dims.d
        clean = {}
        for mu, x in self.blocks.items():
            x = as_matrix(x)
            if x.shape != (d, d):
                raise ValueError(f"block {mu} has shape {x.shape}, expected {(d, d)}")
            clean[tuple(mu)] = x
        object.__setattr__(self, "blocks", clean)

    @classmethod
    def from_blocks(cls, dims: DimsProfile, blocks: Mapping, twist=None) -> "SmallBlockFamily":
        """Fill every label missing from ``blocks`` with a zero block."""
        full = {mu: np.zeros((dims.d, dims.d), dtype=np.complex128)
                for mu in all_dinaries(dims.d, dims.n - 1)}
        full.update({tuple(k): v for k, v in blocks.items()})
        return cls(dims, full, twist)

    def labels(self) -> list[Dinary]:
        return all_dinaries(self.dims.d, self.dims.n - 1)

    def trace(self) -> float:
        return float(sum(np.trace(x).real for x in self.blocks.values()))

    def scaled(self, factor: float) -> "SmallBlockFamily":
        return replace(self, blocks={mu: factor * x for mu, x in self.blocks.items()})


@dataclass(frozen=True, eq=False)
class BigBlockFamily:
    """One ``d**(n-1)``-square block per class alpha of a :class:`BigLayout`."""

    layout: BigLayout
    blocks: tuple
    scheme: Scheme | None = None

    def __post_init__(self):
        m = self.layout.block_size
        blocks = tuple(as_matrix(b) for b in self.blocks)
        if len(blocks) != self.layout.d:
            raise ValueError(f"need {self.layout.d} blocks, got {len(blocks)}")
        for b in blocks:
            if b.shape != (m, m):
                raise ValueError(f"block shape {b.shape}, expected {(m, m)}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_scheme(cls, dims: DimsProfile, scheme: Scheme, blocks: Sequence) -> "BigBlockFamily":
        return cls(BigLayout.from_scheme(dims, scheme), tuple(blocks), scheme)

    @property
    def dims(self) -> DimsProfile:
        return self.layout.dims

    def trace(self) -> float:
        return float(sum(np.trace(b).real for b in self.blocks))

    def scaled(self, factor: float) -> "BigBlockFamily":
        return replace(self, blocks=tuple(factor * b for b in self.blocks))


Family = Union[SmallBlockFamily, BigBlockFamily]


@dataclass(frozen=True, eq=False)
class CirculantState:
    """A circulant operator stored as its block family."""

    payload: Family
    normalized: bool = False
    name: str | None = None
    params: dict = field(default_factory=dict)

    @property
    def dims(self) -> DimsProfile:
        return self.payload.dims

    @property
    def scheme_tag(self) -> str:
        if isinstance(self.payload, SmallBlockFamily):
            return "small"
        return str(self.payload.scheme) if self.payload.scheme else "layout"

    def dense(self) -> np.ndarray:
        return assemble(self.payload)

    def trace(self) -> float:
        return self.payload.trace()


def assemble_small(fam: SmallBlockFamily) -> np.ndarray:
    """Dense operator sum_mu sum_ij x^(mu)_ij |v^mu_i><v^mu_j|."""
    dims = fam.dims
    rho = np.zeros((dims.total, dims.total), dtype=np.complex128)
    for mu in fam.labels():
        if mu not in fam.blocks:
            raise KeyError(f"missing block for label {mu}")
        idx = np.array(delta_basis_transposed(dims, mu, fam.twist))
        rho[np.ix_(idx, idx)] = fam.blocks[mu]
    return rho


def assemble_big(fam: BigBlockFamily) -> np.ndarray:
    layout = fam.layout
    total = layout.d**layout.n
    rho = np.zeros((total, total), dtype=np.complex128)
    for alpha, block in enumerate(fam.blocks):
        idx = layout.basis(alpha)
        rho[np.ix_(idx, idx)] = block
    return rho


def assemble(fam: Family) -> np.ndarray:
    if isinstance(fam, CirculantState):
        fam = fam.payload
    if isinstance(fam, SmallBlockFamily):
        return assemble_small(fam)
    return assemble_big(fam)


def extract_small(rho, dims: DimsProfile, twist: Sequence[int] | None = None) -> SmallBlockFamily:
    """Recover the small-block family of a dense circulant operator.

    Entries with ``|value| <= 1e-13 * max|rho|`` count as zero when checking
    the support.  Raises :class:`NotCirculantError` naming the largest
    offending entry otherwise.
    """
    rho = check_hermitian(rho)
    if rho.shape != (dims.total, dims.total):
        raise ValueError(f"matrix shape {rho.shape} does not match {dims}")
    twist = tuple(twist) if twist is not None else (0,) * (dims.n - 1)
    label, _ = small_support_index(dims, twist)
    outside = label[:, None] != label[None, :]
    mags = np.where(outside, np.abs(rho), 0.0)
    cutoff = STRUCTURE_RTOL * float(np.max(np.abs(rho), initial=0.0))
    worst = np.unravel_index(np.argmax(mags), mags.shape)
    if mags[worst] > cutoff:
        raise NotCirculantError(int(worst[0]), int(worst[1]), float(mags[worst]))
    blocks = {}
    for mu in all_dinaries(dims.d, dims.n - 1):
        idx = np.array(delta_basis_transposed(dims, mu, twist))
        blocks[mu] = rho[np.ix_(idx, idx)].copy()
    return SmallBlockFamily(dims, blocks, twist)


def normalize(state):
    """Scale blocks to unit total trace; accepts states or bare families."""
    fam = state.payload if isinstance(state, CirculantState) else state
    tr = fam.trace()
    if not tr > 0:
        raise ValueError(f"cannot normalize a family with trace {tr}")
    fam = fam.scaled(1.0 / tr)
    if isinstance(state, CirculantState):
        return replace(state, payload=fam, normalized=True)
    return fam


def is_valid_state(state: CirculantState, rtol: float = 1e-10) -> bool:
    """Blocks Hermitian and PSD; unit trace when the normalized flag is set."""
    fam = state.payload
    blocks = fam.blocks.values() if isinstance(fam, SmallBlockFamily) else fam.blocks
    for b in blocks:
        try:
            ok, _ = is_psd(b, rtol)
        except ValueError:
            return False
        if not ok:
            return False
    return not state.normalized or abs(fam.trace() - 1.0) <= 1e-12


def embed_small(fam: SmallBlockFamily, scheme: Scheme) -> BigBlockFamily:
    """Rewrite a small-block family as a big-block family of ``scheme``.

    Every Delta_mu sits inside one class of the scheme, so each block x^(mu)
    is copied into the rows/columns its basis vectors occupy there.
    """
    if any(fam.twist):
        raise ValueError("only untwisted families can be embedded")
    dims = fam.dims
    layout = BigLayout.from_scheme(dims, scheme)
    m = layout.block_size
    pos = np.empty(dims.total, dtype=np.int64)
    for alpha in range(dims.d):
        pos[layout.basis(alpha)] = np.arange(m)
    blocks = [np.zeros((m, m), dtype=np.complex128) for _ in range(dims.d)]
    for mu, x in fam.blocks.items():
        idx = np.array(delta_basis(dims, mu))
        alpha = layout.class_of(int(idx[0]))
        p = pos[idx]
        blocks[alpha][np.ix_(p, p)] = x
    return BigBlockFamily(layout, tuple(blocks), scheme)


def reduce_circulant(state, drop: Sequence[int]):
    """Partial trace over middle factors, staying inside the big-block class.

    ``drop`` holds 0-based factor indices.  The first and last factors, the
    pivot, and any factor entering the pivot rule cannot be dropped.
    """
    fam = state.payload if isinstance(state, CirculantState) else state
    if not isinstance(fam, BigBlockFamily):
        raise TypeError("reduce_circulant needs a big-block (xi) family")
    layout = fam.layout
    drop = sorted(set(drop))
    if not drop:
        return state
    n = layout.n
    if n - len(drop) < 2:
        raise ValueError("at least two factors must remain")
    for k in drop:
        if not 0 <= k < n:
            raise IndexError(f"factor {k} out of range")
        if k in (0, n - 1):
            raise ValueError(f"dropping factor {k} destroys the circulant structure")
        if k == layout.pivot or layout.weights[k]:
            raise ValueError(f"factor {k} enters the pivot rule of this layout")
    others = layout.others
    inner = [others.index(k) for k in drop]
    block_dims = DimsProfile(layout.d, n - 1)
    blocks = tuple(partial_trace(b, block_dims, inner) for b in fam.blocks)
    keep = [k for k in range(n) if k not in drop]
    new_layout = BigLayout(
        layout.d, len(keep), keep.index(layout.pivot), tuple(layout.weights[k] for k in keep)
    )
    scheme = None
    if fam.scheme is not None and fam.scheme.kind == "xi":
        scheme = Scheme.xi(new_layout.pivot)
    reduced = BigBlockFamily(new_layout, blocks, scheme)
    if isinstance(state, CirculantState):
        return replace(state, payload=reduced)
    return reduced
