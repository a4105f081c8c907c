"""Dense complex matrix kernel for multi-qudit operators.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Composite
indices follow the convention e_{i1} x ... x e_{in} <-> i1*d**(n-1) + ... + in,
i.e. the first tensor factor is the most significant digit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

HERMITIAN_RTOL = 1e-12
PSD_RTOL = 1e-10


class NotHermitianError(ValueError):
    """Raised when an operation requiring a Hermitian matrix receives another one."""


@dataclass(frozen=True)
class DimsProfile:
    """``n`` tensor factors, each of local dimension ``d``."""

    d: int
    n: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"local dimension must be >= 2, got {self.d}")
        if self.n < 1:
            raise ValueError(f"factor count must be >= 1, got {self.n}")

    @property
    def total(self) -> int:
        return self.d**self.n


def as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def kron(a, b) -> np.ndarray:
    """Kronecker product: ``out[i*r + k, j*s + l] = a[i, j] * b[k, l]``."""
    a, b = as_matrix(a), as_matrix(b)
    p, q = a.shape
    r, s = b.shape
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(p * r, q * s)


def kron_all(mats: Iterable) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for m in mats:
        out = kron(out, m)
    return out


def hadamard(a, b) -> np.ndarray:
    """Entrywise (Hadamard) product of two equally shaped matrices."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a * b


def hermiticity_defect(a) -> float:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return float("inf")
    return float(np.max(np.abs(a - a.conj().T), initial=0.0))


def is_hermitian(a, rtol: float = HERMITIAN_RTOL) -> bool:
    a = as_matrix(a)
    scale = max(1.0, float(np.max(np.abs(a), initial=0.0)))
    return hermiticity_defect(a) <= rtol * scale


def check_hermitian(a, rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    a = as_matrix(a)
    if not is_hermitian(a, rtol):
        raise NotHermitianError(
            f"matrix is not Hermitian (max |A - A^H| = {hermiticity_defect(a):.3e})"
        )
    return a


def _check_square(rho: np.ndarray, dims: DimsProfile):
    if rho.shape != (dims.total, dims.total):
        raise ValueError(
            f"matrix of shape {rho.shape} does not match {dims.n} factors of dimension {dims.d}"
        )


def partial_transpose(rho, dims: DimsProfile, mask: Sequence[int]) -> np.ndarray:
    """Transpose the tensor factors selected by ``mask`` (one 0/1 entry per factor).

    Examples
    --------
    >>> import numpy as np
    >>> rho = np.arange(16).reshape(4, 4)
    >>> partial_transpose(rho, DimsProfile(2, 2), (0, 1)).real.astype(int)[0].tolist()
    [0, 4, 2, 6]
    """
    rho = as_matrix(rho)
    _check_square(rho, dims)
    if len(mask) != dims.n:
        raise ValueError(f"mask length {len(mask)} != factor count {dims.n}")
    n = dims.n
    axes = list(range(2 * n))
    for k, bit in enumerate(mask):
        if bit:
            axes[k], axes[n + k] = n + k, k
    t = rho.reshape((dims.d,) * (2 * n)).transpose(axes)
    return np.ascontiguousarray(t).reshape(dims.total, dims.total)


def partial_trace(rho, dims: DimsProfile, drop: Iterable[int]) -> np.ndarray:
    """Trace out the factors listed in ``drop`` (0-based).

    Dropping every factor yields the 1x1 matrix ``[[Tr rho]]``.
    """
    rho = as_matrix(rho)
    _check_square(rho, dims)
    drop = sorted(set(drop))
    if any(k < 0 or k >= dims.n for k in drop):
        raise IndexError(f"factor index out of range in {drop} for n={dims.n}")
    n, d = dims.n, dims.d
    keep = [k for k in range(n) if k not in drop]
    t = rho.reshape((d,) * (2 * n))
    # einsum letters: row index k -> chr(97+k), column index k -> chr(65+k)
    row = [chr(97 + k) for k in range(n)]
    col = [chr(65 + k) if k in keep else chr(97 + k) for k in range(n)]
    out = "".join(row[k] for k in keep) + "".join(col[k] for k in keep)
    t = np.einsum("".join(row) + "".join(col) + "->" + out, t)
    m = d ** len(keep)
    return np.ascontiguousarray(t).reshape(m, m)


def hermitian_eigenvalues(a, method: str = "lapack") -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix.

    ``method="lapack"`` uses the divide-and-conquer tridiagonal solver behind
    :func:`numpy.linalg.eigvalsh`; ``method="jacobi"`` uses the cyclic complex
    Jacobi iteration in :func:`jacobi_eigenvalues`.  Both are deterministic.
    """
    a = check_hermitian(a)
    if method == "lapack":
        return np.linalg.eigvalsh(a)
    if method == "jacobi":
        return jacobi_eigenvalues(a)
    raise ValueError(f"unknown eigensolver {method!r}")


def jacobi_eigenvalues(a, tol: float = 1e-15, max_sweeps: int = 60) -> np.ndarray:
    """Cyclic Jacobi eigenvalue iteration for complex Hermitian matrices.

    Each rotation zeroes one off-diagonal pair with the unitary
    ``diag(1, conj(e)) @ [[c, s], [-s, c]]`` where ``e`` is the phase of the
    pivot.  Intended for the small blocks this package produces; cost per
    sweep is O(n^3).
    """
    a = check_hermitian(a).copy()
    a = (a + a.conj().T) / 2
    n = a.shape[0]
    if n == 1:
        return np.array([a[0, 0].real])
    scale = max(float(np.linalg.norm(a)), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.sqrt(max(0.0, np.sum(np.abs(a) ** 2) - np.sum(np.abs(np.diag(a)) ** 2)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= tol * scale * 1e-3:
                    continue
                e = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                u = np.array([[c, s], [-s * np.conj(e), c * np.conj(e)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ u
                a[idx, :] = u.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
    return np.sort(np.diag(a).real)


def psd_tolerance(lam_max: float, rtol: float = PSD_RTOL) -> float:
    return rtol * max(1.0, lam_max)


def is_psd(a, rtol: float = PSD_RTOL) -> tuple[bool, float]:
    """PSD verdict and smallest eigenvalue.

    The matrix counts as positive semi-definite when
    ``lambda_min >= -rtol * max(1, lambda_max)``.
    """
    lam = hermitian_eigenvalues(a)
    lam_min, lam_max = float(lam[0]), float(lam[-1])
    return lam_min >= -psd_tolerance(lam_max, rtol), lam_min
