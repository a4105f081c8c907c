"""Partial transposition of circulant families in block form.

Small families: under the mask ``sigma`` the block of label mu becomes

    y^(mu) = sum_k x^(mu + k*sigma) o (Pi S^k)

supported on the twisted subspaces Delta_mu^[sigma].  Applied to an already
twisted family the step ``sigma`` picks up the sign -1 on twisted factors.

Big families: the mask splits into its pivot bit ``s`` and the bits on the
block factors.  Block factors whose bit equals ``s`` are plain partial
transposes inside each block; the others mix classes through the Hadamard
masks ``M_beta[R, C] = [beta + sum_{k in F} w_k (R_k + C_k) = 0 mod d]`` with
F the factors whose bit differs from ``s``:

    c'^(alpha) = sum_beta tau(c^(alpha + beta)) o M_beta.

For the xi(n-1) scheme F is just the first factor and ``M_beta`` is
``Pi S^beta x ones^(n-2)``.  The resulting layout flips the sign of the
weights of the factors in F.  Every rule is checked against the dense
partial transpose by :func:`oracle_compare`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .assembly import BigBlockFamily, CirculantState, Family, SmallBlockFamily, assemble
from .geometry import all_dinaries, format_label, pi_matrix, shift_matrix
from .linalg import PSD_RTOL, DimsProfile, hadamard, hermitian_eigenvalues, is_psd, partial_transpose

ORACLE_MAX_DIM = 256
ORACLE_TOL = 1e-12


def all_masks(n: int) -> list[tuple[int, ...]]:
    return all_dinaries(2, n - 1)


def _payload(state) -> Family:
    return state.payload if isinstance(state, CirculantState) else state


def _check_mask(dims: DimsProfile, mask) -> tuple[int, ...]:
    mask = tuple(int(x) for x in mask)
    if len(mask) != dims.n - 1 or any(x not in (0, 1) for x in mask):
        raise ValueError(f"mask must be a binary vector of length {dims.n - 1}, got {mask}")
    return mask


def transform_small(fam: SmallBlockFamily, mask) -> SmallBlockFamily:
    dims = fam.dims
    mask = _check_mask(dims, mask)
    d = dims.d
    step = np.array([(1 - 2 * t) * s for t, s in zip(fam.twist, mask)], dtype=np.int64)
    pi = pi_matrix(d)
    patterns = [pi @ shift_matrix(d, k) for k in range(d)]
    out = {}
    for mu in fam.labels():
        base = np.array(mu, dtype=np.int64)
        y = np.zeros((d, d), dtype=np.complex128)
        for k in range(d):
            src = tuple(int(x) for x in (base + k * step) % d)
            y += hadamard(fam.blocks[src], patterns[k])
        out[mu] = y
    twist = tuple(t ^ s for t, s in zip(fam.twist, mask))
    return SmallBlockFamily(dims, out, twist)


def mixing_masks(layout, full_mask) -> list[np.ndarray]:
    """Hadamard masks M_beta mixing the classes of a big family."""
    d = layout.d
    s = full_mask[layout.pivot]
    digits = layout.block_digits()
    shift = np.zeros(len(digits), dtype=np.int64)
    weights = layout.block_weights()
    for col, k in enumerate(layout.others):
        if full_mask[k] != s:
            shift = shift + weights[col] * digits[:, col]
    total = (shift[:, None] + shift[None, :]) % d
    return [((total + beta) % d == 0).astype(np.complex128) for beta in range(d)]


def transform_big(fam: BigBlockFamily, mask) -> BigBlockFamily:
    layout = fam.layout
    mask = _check_mask(layout.dims, mask)
    full = (0,) + mask
    d = layout.d
    block_dims = DimsProfile(d, layout.n - 1)
    inner = [full[k] for k in layout.others]
    tau = [partial_transpose(b, block_dims, inner) for b in fam.blocks]
    masks = mixing_masks(layout, full)
    blocks = []
    for alpha in range(d):
        acc = np.zeros_like(tau[0])
        for beta in range(d):
            acc += hadamard(tau[(alpha + beta) % d], masks[beta])
        blocks.append(acc)
    return BigBlockFamily(layout.transposed(full), tuple(blocks), None)


def transform(fam, mask) -> Family:
    fam = _payload(fam)
    if isinstance(fam, SmallBlockFamily):
        return transform_small(fam, mask)
    return transform_big(fam, mask)


def _labelled_blocks(fam: Family):
    if isinstance(fam, SmallBlockFamily):
        return [(format_label(mu), x) for mu, x in fam.blocks.items()]
    return [(str(alpha), b) for alpha, b in enumerate(fam.blocks)]


def block_spectrum(fam) -> np.ndarray:
    """Sorted union of the block spectra of a family."""
    fam = _payload(fam)
    return np.sort(np.concatenate([hermitian_eigenvalues(b) for _, b in _labelled_blocks(fam)]))


@dataclass
class MaskResult:
    mask: tuple[int, ...]
    ppt: bool
    min_eigenvalue: float
    block_min_eigenvalues: dict = field(default_factory=dict)
    oracle_deviation: float | None = None

    def to_dict(self) -> dict:
        out = {
            "mask": "".join(map(str, self.mask)),
            "ppt": self.ppt,
            "min_eigenvalue": self.min_eigenvalue,
            "block_min_eigenvalues": self.block_min_eigenvalues,
        }
        if self.oracle_deviation is not None:
            out["oracle_deviation"] = self.oracle_deviation
        return out


@dataclass
class PptReport:
    dims: DimsProfile
    scheme: str
    results: list[MaskResult]
    rtol: float = PSD_RTOL

    @property
    def fully_ppt(self) -> bool:
        return all(r.ppt for r in self.results if any(r.mask))

    @property
    def min_eigenvalue(self) -> float:
        """Smallest eigenvalue over the nontrivial masks."""
        vals = [r.min_eigenvalue for r in self.results if any(r.mask)]
        return min(vals) if vals else float("inf")

    def result(self, mask) -> MaskResult:
        mask = tuple(mask)
        for r in self.results:
            if r.mask == mask:
                return r
        raise KeyError(mask)

    def to_dict(self) -> dict:
        return {
            "d": self.dims.d,
            "n": self.dims.n,
            "scheme": self.scheme,
            "psd_rtol": self.rtol,
            "fully_ppt": self.fully_ppt,
            "min_eigenvalue": self.min_eigenvalue,
            "masks": [r.to_dict() for r in self.results],
        }


def check_mask(state, mask, rtol: float = PSD_RTOL, oracle: bool = False) -> MaskResult:
    fam = _payload(state)
    mask = _check_mask(fam.dims, mask)
    transformed = transform(fam, mask)
    per_block = {}
    verdict = True
    for label, b in _labelled_blocks(transformed):
        ok, lam = is_psd(b, rtol)
        per_block[label] = lam
        verdict &= ok
    deviation = oracle_compare(fam, mask) if oracle else None
    return MaskResult(mask, verdict, min(per_block.values()), per_block, deviation)


def ppt_check(state, mask, rtol: float = PSD_RTOL) -> tuple[bool, float]:
    """Block-wise PPT verdict and minimum eigenvalue for one mask."""
    r = check_mask(state, mask, rtol)
    return r.ppt, r.min_eigenvalue


def ppt_check_all(state, rtol: float = PSD_RTOL, oracle: bool = False, masks=None) -> PptReport:
    fam = _payload(state)
    if masks is None:
        masks = all_masks(fam.dims.n)
    results = [check_mask(fam, m, rtol, oracle) for m in masks]
    tag = state.scheme_tag if isinstance(state, CirculantState) else (
        "small" if isinstance(fam, SmallBlockFamily) else str(fam.scheme or "layout")
    )
    return PptReport(fam.dims, tag, results, rtol)


def oracle_compare(state, mask) -> float:
    """Max entrywise gap between the block rule and the dense partial transpose."""
    fam = _payload(state)
    dims = fam.dims
    if dims.total > ORACLE_MAX_DIM:
        raise ValueError(f"oracle limited to d^n <= {ORACLE_MAX_DIM}, got {dims.total}")
    mask = _check_mask(dims, mask)
    via_blocks = assemble(transform(fam, mask))
    dense = partial_transpose(assemble(fam), dims, (0,) + mask)
    return float(np.max(np.abs(via_blocks - dense)))


def dense_ppt_check(rho, dims: DimsProfile, mask, rtol: float = PSD_RTOL) -> tuple[bool, float]:
    """PPT verdict straight from the dense partial transpose (no block structure)."""
    mask = _check_mask(dims, mask)
    return is_psd(partial_transpose(rho, dims, (0,) + mask), rtol)
