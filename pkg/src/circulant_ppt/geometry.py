"""Structural matrices and cyclic subspace decompositions of (C^d)^{x n}.

Labels ("dinary vectors") are tuples of base-``d`` digits, leftmost digit most
significant.  Subspace bases are tuples of composite basis indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .linalg import DimsProfile

Dinary = tuple[int, ...]


def to_digits(value: int, d: int, length: int) -> Dinary:
    if not 0 <= value < d**length:
        raise ValueError(f"{value} does not fit in {length} base-{d} digits")
    out = []
    for _ in range(length):
        value, r = divmod(value, d)
        out.append(r)
    return tuple(reversed(out))


def from_digits(digits: Sequence[int], d: int) -> int:
    value = 0
    for x in digits:
        if not 0 <= x < d:
            raise ValueError(f"digit {x} out of range for base {d}")
        value = value * d + x
    return value


def all_dinaries(d: int, length: int) -> list[Dinary]:
    return list(itertools.product(range(d), repeat=length))


def parse_label(text: str, d: int) -> Dinary:
    digits = tuple(int(ch, d) for ch in text.strip())
    if any(x >= d for x in digits):
        raise ValueError(f"label {text!r} is not base {d}")
    return digits


def format_label(digits: Sequence[int]) -> str:
    return "".join(np.base_repr(x, 36).lower() for x in digits)


def _check_label(dims: DimsProfile, mu: Sequence[int], name: str = "label"):
    if len(mu) != dims.n - 1:
        raise ValueError(f"{name} must have {dims.n - 1} digits, got {len(mu)}")
    if any(not 0 <= x < dims.d for x in mu):
        raise ValueError(f"{name} {tuple(mu)} has digits outside base {dims.d}")


def _check_mask(dims: DimsProfile, sigma: Sequence[int]):
    if len(sigma) != dims.n - 1:
        raise ValueError(f"mask must have {dims.n - 1} entries, got {len(sigma)}")
    if any(x not in (0, 1) for x in sigma):
        raise ValueError(f"mask {tuple(sigma)} is not binary")


# -- structural matrices ----------------------------------------------------


def shift_matrix(d: int, m: int = 1) -> np.ndarray:
    """Cyclic shift ``S^m``: ``S^m e_j = e_{j+m mod d}``."""
    out = np.zeros((d, d), dtype=np.complex128)
    j = np.arange(d)
    out[(j + m) % d, j] = 1.0
    return out


def pi_matrix(d: int) -> np.ndarray:
    """Involutive permutation fixing e_0 and sending e_k to e_{d-k}."""
    out = np.zeros((d, d), dtype=np.complex128)
    j = np.arange(d)
    out[(-j) % d, j] = 1.0
    return out


def phase_matrix(d: int, alpha: int = 1) -> np.ndarray:
    """Diagonal clock operator ``Omega^alpha`` with ``Omega e_k = w^k e_k``, w = exp(2 pi i/d)."""
    k = np.arange(d)
    return np.diag(np.exp(2j * np.pi * ((alpha * k) % d) / d))


def all_ones_matrix(d: int) -> np.ndarray:
    return np.ones((d, d), dtype=np.complex128)


def omega_tilde(d: int) -> np.ndarray:
    """Rank-one matrix with entries ``w^(j - i)``."""
    k = np.arange(d)
    return np.exp(2j * np.pi * ((k[None, :] - k[:, None]) % d) / d)


# -- small subspaces ----------------------------------------------------------


def delta_basis(dims: DimsProfile, mu: Sequence[int]) -> tuple[int, ...]:
    """Basis of Delta_mu: k-th vector is e_k x e_{k+mu_1} x ... x e_{k+mu_{n-1}}."""
    return delta_basis_transposed(dims, mu, (0,) * (dims.n - 1))


def delta_basis_transposed(
    dims: DimsProfile, mu: Sequence[int], sigma: Sequence[int]
) -> tuple[int, ...]:
    """Basis of (1 x S^mu)(1 x Pi^sigma) Delta_0, ordered by the leading index.

    Factor ``m`` of the k-th vector carries digit ``mu_m + k`` where
    ``sigma_m = 0`` and ``mu_m - k`` where ``sigma_m = 1``.
    """
    _check_label(dims, mu)
    _check_mask(dims, sigma)
    d = dims.d
    out = []
    for k in range(d):
        digits = [k] + [(m + (-k if s else k)) % d for m, s in zip(mu, sigma)]
        out.append(from_digits(digits, d))
    return tuple(out)


def small_support_index(dims: DimsProfile, sigma: Sequence[int] | None = None):
    """Arrays ``(label, position)`` giving, for every composite index, the
    Delta^[sigma] subspace that contains it and its place in that basis."""
    if sigma is None:
        sigma = (0,) * (dims.n - 1)
    d, n = dims.d, dims.n
    digits = np.array(all_dinaries(d, n), dtype=np.int64)
    lead = digits[:, 0]
    sign = 1 - 2 * np.asarray(sigma, dtype=np.int64)
    mu = (digits[:, 1:] - sign[None, :] * lead[:, None]) % d
    weights = d ** np.arange(n - 2, -1, -1, dtype=np.int64)
    return mu @ weights, lead


# -- groupings and big subspaces --------------------------------------------


@dataclass(frozen=True)
class Scheme:
    """Grouping of the Delta_mu into ``d`` big subspaces.

    ``kind="sigma"``: class alpha collects mu with digit sum = alpha (mod d).
    ``kind="xi"``: class alpha collects mu with ``mu_k = alpha`` (k is 1-based).
    """

    kind: str
    k: int | None = None

    def __post_init__(self):
        if self.kind not in ("sigma", "xi"):
            raise ValueError(f"unknown scheme {self.kind!r}")
        if self.kind == "xi" and (self.k is None or self.k < 1):
            raise ValueError("xi scheme needs k >= 1")

    @classmethod
    def sigma(cls) -> "Scheme":
        return cls("sigma")

    @classmethod
    def xi(cls, k: int) -> "Scheme":
        return cls("xi", k)

    def validate(self, dims: DimsProfile):
        if dims.n < 2:
            raise ValueError("big-block schemes need at least 2 factors")
        if self.kind == "xi" and not 1 <= self.k <= dims.n - 1:
            raise ValueError(f"xi index k={self.k} outside 1..{dims.n - 1}")

    def label_class(self, mu: Sequence[int], d: int) -> int:
        if self.kind == "sigma":
            return sum(mu) % d
        return mu[self.k - 1]

    def __str__(self):
        return "sigma" if self.kind == "sigma" else f"xi({self.k})"


def grouping(dims: DimsProfile, scheme: Scheme) -> list[list[Dinary]]:
    """Partition of all labels into ``d`` classes, in ascending label order."""
    scheme.validate(dims)
    classes: list[list[Dinary]] = [[] for _ in range(dims.d)]
    for mu in all_dinaries(dims.d, dims.n - 1):
        classes[scheme.label_class(mu, dims.d)].append(mu)
    return classes


@dataclass(frozen=True)
class BigLayout:
    """Decomposition into ``d`` subspaces of dimension ``d**(n-1)``.

    One factor, the *pivot*, is determined by the others:
    ``t_pivot = alpha + sum_k weights[k] * t_k (mod d)``.  A block of the
    corresponding family is indexed by the remaining ``n - 1`` digits in factor
    order.  For every layout derived from the sigma and xi schemes this is
    also ascending composite index inside the subspace.

    The untransposed sigma and xi(k) schemes are layouts; so are the
    decompositions reached from them by partial transpositions.
    """

    d: int
    n: int
    pivot: int
    weights: tuple[int, ...]

    def __post_init__(self):
        if not 0 < self.pivot < self.n:
            raise ValueError("pivot must be a factor other than the first")
        if len(self.weights) != self.n:
            raise ValueError("one weight per factor required")
        w = tuple(x % self.d for x in self.weights)
        if w[self.pivot] != 0:
            raise ValueError("pivot weight must be zero")
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_scheme(cls, dims: DimsProfile, scheme: Scheme) -> "BigLayout":
        scheme.validate(dims)
        d, n = dims.d, dims.n
        w = [0] * n
        if scheme.kind == "xi":
            pivot = scheme.k
            w[0] = 1
        else:
            pivot = n - 1
            w[0] = (n - 1) % d
            for k in range(1, n - 1):
                w[k] = d - 1
        return cls(d, n, pivot, tuple(w))

    @property
    def dims(self) -> DimsProfile:
        return DimsProfile(self.d, self.n)

    @property
    def block_size(self) -> int:
        return self.d ** (self.n - 1)

    @property
    def others(self) -> tuple[int, ...]:
        """Non-pivot factors, i.e. the tensor structure of each block."""
        return tuple(k for k in range(self.n) if k != self.pivot)

    @cached_property
    def _block_digits(self) -> np.ndarray:
        return np.array(all_dinaries(self.d, self.n - 1), dtype=np.int64)

    def block_digits(self) -> np.ndarray:
        """(d**(n-1), n-1) array of the non-pivot digits of each block row."""
        return self._block_digits

    def block_weights(self) -> np.ndarray:
        return np.array([self.weights[k] for k in self.others], dtype=np.int64)

    def basis(self, alpha: int) -> np.ndarray:
        """Composite indices of subspace ``alpha`` in block-row order."""
        d, n = self.d, self.n
        rest = self._block_digits
        pivot_digit = (alpha + rest @ self.block_weights()) % d
        full = np.insert(rest, self.pivot, pivot_digit, axis=1)
        return full @ (d ** np.arange(n - 1, -1, -1, dtype=np.int64))

    def class_of(self, index: int) -> int:
        t = to_digits(index, self.d, self.n)
        return (t[self.pivot] - sum(w * x for w, x in zip(self.weights, t))) % self.d

    def contains_deltas(self) -> bool:
        """True when every Delta_mu lies inside a single class."""
        return (1 - sum(self.weights)) % self.d == 0

    def transposed(self, mask: Sequence[int]) -> "BigLayout":
        """Layout of the partially transposed operator for a full-length mask."""
        s = mask[self.pivot]
        w = tuple(
            x if mask[k] == s else -x for k, x in enumerate(self.weights)
        )
        return BigLayout(self.d, self.n, self.pivot, w)

    def describe(self) -> dict:
        return {"pivot": self.pivot, "weights": list(self.weights)}


def check_direct_sum(bases: Sequence[Sequence[int]], total: int) -> bool:
    """True when the bases are pairwise disjoint and jointly cover range(total)."""
    seen = [i for b in bases for i in b]
    return len(seen) == total and set(seen) == set(range(total))
