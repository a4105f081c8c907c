"""Named circulant families with their known PPT boundaries."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .assembly import CirculantState, SmallBlockFamily
from .geometry import all_dinaries, all_ones_matrix, from_digits, to_digits
from .linalg import DimsProfile

RANGE_SLACK = 1e-12


def _in_range(name: str, value: float, lo: float, hi: float):
    if not lo - RANGE_SLACK <= value <= hi + RANGE_SLACK:
        raise ValueError(f"{name}={value} outside [{lo}, {hi}]")


def _state(dims, blocks, name, **params) -> CirculantState:
    fam = SmallBlockFamily.from_blocks(dims, blocks)
    return CirculantState(fam, normalized=True, name=name, params=params)


def werner(p: float) -> CirculantState:
    """Two-qubit Werner state, -1/3 <= p <= 1."""
    _in_range("p", p, -1 / 3, 1)
    a = np.diag([1 - p, 1 - p]) / 4
    b = np.array([[1 + p, -2 * p], [-2 * p, 1 + p]]) / 4
    return _state(DimsProfile(2, 2), {(0,): a, (1,): b}, "werner", p=p)


def isotropic2(p: float) -> CirculantState:
    """Two-qubit isotropic state, -1/3 <= p <= 1."""
    _in_range("p", p, -1 / 3, 1)
    a = np.array([[1 + p, 2 * p], [2 * p, 1 + p]]) / 4
    b = np.diag([1 - p, 1 - p]) / 4
    return _state(DimsProfile(2, 2), {(0,): a, (1,): b}, "isotropic2", p=p)


def o2_state(a: float, b: float, c: float | None = None) -> CirculantState:
    """O(2) x O(2)-invariant two-qubit state; ``c`` defaults to ``1 - a - b``."""
    if c is None:
        c = 1.0 - a - b
    for name, v in (("a", a), ("b", b), ("c", c)):
        _in_range(name, v, 0, 1)
    if abs(a + b + c - 1) > RANGE_SLACK:
        raise ValueError(f"a + b + c must be 1, got {a + b + c}")
    x0 = np.array([[a + 2 * b, 2 * b - a], [2 * b - a, a + 2 * b]]) / 4
    x1 = np.array([[a + 2 * c, a - 2 * c], [a - 2 * c, a + 2 * c]]) / 4
    return _state(DimsProfile(2, 2), {(0,): x0, (1,): x1}, "o2", a=a, b=b, c=c)


def ghz(d: int, n: int) -> CirculantState:
    dims = DimsProfile(d, n)
    return _state(dims, {(0,) * (n - 1): all_ones_matrix(d) / d}, "ghz", d=d, n=n)


def _check_nu(d: int, n: int, nu) -> tuple[int, ...]:
    if isinstance(nu, (int, np.integer)):
        nu = (nu,)
    nu = tuple(int(x) for x in nu)
    if len(nu) != n - 1 or any(not 0 <= x < d for x in nu):
        raise ValueError(f"nu must be {n - 1} base-{d} digits, got {nu}")
    return nu


def bell_state(d: int, n: int, alpha: int, nu) -> CirculantState:
    """Projector onto (Omega^alpha x S^nu)|GHZ>; its only block sits at label nu.

    The block is ``x_ij = w^(alpha (i - j)) / d`` with w = exp(2 pi i / d).
    """
    if not 0 <= alpha < d:
        raise ValueError(f"alpha must lie in 0..{d - 1}")
    nu = _check_nu(d, n, nu)
    k = np.arange(d)
    x = np.exp(2j * np.pi * ((alpha * (k[:, None] - k[None, :])) % d) / d) / d
    return _state(DimsProfile(d, n), {nu: x}, "bell", d=d, n=n, alpha=alpha, nu=nu)


def bell_vector(d: int, n: int, alpha: int, nu) -> np.ndarray:
    """State vector (Omega^alpha x S^nu)|GHZ>, built directly in the product basis."""
    nu = _check_nu(d, n, nu)
    psi = np.zeros(d**n, dtype=np.complex128)
    for i in range(d):
        digits = [i] + [(i + m) % d for m in nu]
        psi[from_digits(digits, d)] = np.exp(2j * np.pi * ((alpha * i) % d) / d)
    return psi / np.sqrt(d)


def ghz_isotropic(d: int, n: int, s: float) -> CirculantState:
    """(1 - s)/d^n * identity + s |GHZ><GHZ|, with -1/(d^n - 1) <= s <= 1."""
    dims = DimsProfile(d, n)
    _in_range("s", s, -1 / (dims.total - 1), 1)
    eye = np.eye(d) * (1 - s) / dims.total
    blocks = {mu: eye for mu in all_dinaries(d, n - 1)}
    blocks[(0,) * (n - 1)] = eye + s * all_ones_matrix(d) / d
    return _state(dims, blocks, "ghz_isotropic", d=d, n=n, s=s)


def two_param(n: int, c: float, d: float) -> CirculantState:
    """N-qubit family with blocks [[1, 1], [1, 1]], [[1, c], [c, 1]], [[1, d], [d, 1]] (/2^n).

    Labels below 2^(n-2) carry the all-ones block, the all-ones label
    2^(n-1) - 1 carries the ``d`` block and the remaining labels the ``c``
    block.  For n = 3 this is the familiar 8x8 matrix with ``c`` at (2, 5)
    and ``d`` at (3, 4).
    """
    if n < 3:
        raise ValueError("two_param needs n >= 3")
    bound = 1 / 2**n
    _in_range("c", c, -bound, bound)
    _in_range("d", d, -bound, bound)
    dims = DimsProfile(2, n)
    blocks = {}
    for v in range(2 ** (n - 1)):
        if v < 2 ** (n - 2):
            off = 1.0
        elif v < 2 ** (n - 1) - 1:
            off = c
        else:
            off = d
        blocks[to_digits(v, 2, n - 1)] = np.array([[1, off], [off, 1]]) / 2**n
    return _state(dims, blocks, "two_param", n=n, c=c, d=d)


def w_state() -> np.ndarray:
    """Dense projector onto (|001> + |010> + |100>)/sqrt(3); not circulant."""
    psi = np.zeros(8, dtype=np.complex128)
    psi[[1, 2, 4]] = 1 / np.sqrt(3)
    return np.outer(psi, psi.conj())


@dataclass(frozen=True)
class FamilySpec:
    """Registry entry: how to build a family and where its PPT boundary lies."""

    name: str
    builder: Callable[..., CirculantState]
    params: tuple[str, ...]
    defaults: dict = field(default_factory=dict)
    optional: tuple[str, ...] = ()
    dims_params: tuple[str, ...] = ()
    text_params: tuple[str, ...] = ()
    threshold_param: str | None = None
    bracket: tuple[float, float] | None = None
    threshold: Callable[..., float] | None = None
    note: str = ""

    def build(self, **params) -> CirculantState:
        kwargs = dict(self.defaults)
        kwargs.update(params)
        unknown = set(kwargs) - set(self.params)
        if unknown:
            raise ValueError(f"{self.name} has no parameter(s) {sorted(unknown)}")
        missing = [p for p in self.params if p not in kwargs and p not in self.optional]
        if missing:
            raise ValueError(f"{self.name} needs parameter(s) {missing}")
        return self.builder(**kwargs)

    def expected_threshold(self, **params) -> float | None:
        if self.threshold is None:
            return None
        return self.threshold(**{**self.defaults, **params})


ZOO: dict[str, FamilySpec] = {
    spec.name: spec
    for spec in [
        FamilySpec("werner", werner, ("p",), threshold_param="p", bracket=(0.0, 1.0),
                   threshold=lambda **_: 1 / 3, note="PPT iff p <= 1/3"),
        FamilySpec("isotropic2", isotropic2, ("p",), threshold_param="p", bracket=(0.0, 1.0),
                   threshold=lambda **_: 1 / 3, note="PPT iff p <= 1/3"),
        FamilySpec("o2", o2_state, ("a", "b", "c"), optional=("c",),
                   note="PPT iff b <= 1/2 and c <= 1/2"),
        FamilySpec("ghz", ghz, ("d", "n"), defaults={"d": 2, "n": 3}, dims_params=("d", "n")),
        FamilySpec("bell", bell_state, ("d", "n", "alpha", "nu"),
                   defaults={"d": 2, "n": 2, "alpha": 0}, dims_params=("d", "n"),
                   text_params=("nu",)),
        FamilySpec("ghz_isotropic", ghz_isotropic, ("d", "n", "s"), defaults={"d": 2, "n": 3},
                   dims_params=("d", "n"), threshold_param="s", bracket=(0.0, 1.0),
                   threshold=lambda d, n, **_: 1 / (d ** (n - 1) + 1),
                   note="PPT iff s <= 1/(d^(n-1) + 1)"),
        FamilySpec("two_param", two_param, ("n", "c", "d"), defaults={"n": 3}, dims_params=("n",),
                   note="claimed: PPT iff c = d"),
    ]
}


def build(name: str, **params) -> CirculantState:
    try:
        spec = ZOO[name]
    except KeyError:
        raise ValueError(f"unknown zoo family {name!r}; choose from {sorted(ZOO)}") from None
    return spec.build(**params)
