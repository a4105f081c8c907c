"""Batch drivers behind the command line: bisection, sweeps and oracle suites.

Every task here is a pure function of its arguments, so batches can be farmed
out to a process pool and merged back by task index.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .assembly import CirculantState
from .geometry import Scheme
from .linalg import PSD_RTOL, DimsProfile
from .ppt import ORACLE_MAX_DIM, ORACLE_TOL, all_masks, oracle_compare, ppt_check_all
from .randfam import random_big_family, random_small_family
from .zoo import build

WORKERS_ENV = "CIRCULANT_PPT_MAX_WORKERS"
BISECT_XTOL = 1e-8


def max_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None


def run_tasks(fn: Callable, tasks: Sequence, workers: int | None = None) -> list:
    """Map ``fn`` over ``tasks``; results come back in task order."""
    workers = max_workers() if workers is None else workers
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(fn, tasks))


def min_eigenvalue(state: CirculantState, rtol: float = PSD_RTOL) -> float:
    """Smallest eigenvalue over every nontrivial partial transpose."""
    return ppt_check_all(state, rtol).min_eigenvalue


@dataclass(frozen=True)
class BisectionResult:
    estimate: float
    residual: float
    lo: float
    hi: float
    iterations: int

    def to_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "residual": self.residual,
            "bracket": [self.lo, self.hi],
            "iterations": self.iterations,
        }


def bisect(f: Callable[[float], float], lo: float, hi: float, xtol: float = BISECT_XTOL) -> BisectionResult:
    """Locate the sign change of ``f`` on ``[lo, hi]``.

    ``f >= 0`` and ``f < 0`` are the two sides, so an exact zero counts as
    nonnegative.  The bracket is halved until it is at most ``xtol`` wide.
    """
    if not lo < hi:
        raise ValueError(f"empty bracket [{lo}, {hi}]")
    f_lo, f_hi = f(lo), f(hi)
    side_lo = f_lo >= 0
    if side_lo == (f_hi >= 0):
        raise ValueError(f"no sign change on [{lo}, {hi}]: f = {f_lo:.3e}, {f_hi:.3e}")
    iterations = 0
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if (f(mid) >= 0) == side_lo:
            lo = mid
        else:
            hi = mid
        iterations += 1
    est = 0.5 * (lo + hi)
    return BisectionResult(est, f(est), lo, hi, iterations)


def zoo_threshold(name: str, param: str, lo: float, hi: float, fixed: dict | None = None,
                  rtol: float = PSD_RTOL, xtol: float = BISECT_XTOL) -> BisectionResult:
    fixed = dict(fixed or {})
    return bisect(lambda v: min_eigenvalue(build(name, **fixed, **{param: v}), rtol), lo, hi, xtol)


def parse_grid(text: str) -> tuple[str, list[float]]:
    """``name=lo:hi:count`` (inclusive endpoints) or ``name=v1,v2,...``."""
    name, sep, body = text.partition("=")
    if not sep or not name:
        raise ValueError(f"grid axis must look like name=lo:hi:count, got {text!r}")
    if ":" in body:
        parts = body.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid axis must look like name=lo:hi:count, got {text!r}")
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ValueError("grid count must be positive")
        values = [lo] if count == 1 else [lo + (hi - lo) * i / (count - 1) for i in range(count)]
    else:
        values = [float(v) for v in body.split(",") if v]
    return name.strip(), values


def grid_points(grids: Sequence[tuple[str, list[float]]]) -> list[dict]:
    names = [g[0] for g in grids]
    return [dict(zip(names, combo)) for combo in itertools.product(*(g[1] for g in grids))]


def _sweep_task(task) -> dict:
    name, fixed, point, rtol = task
    row = dict(point)
    try:
        report = ppt_check_all(build(name, **fixed, **point), rtol)
    except ValueError as exc:
        row.update(fully_ppt=None, min_eigenvalue=None, error=str(exc))
        return row
    row.update(fully_ppt=report.fully_ppt, min_eigenvalue=report.min_eigenvalue, error=None)
    return row


def sweep(name: str, points: Sequence[dict], fixed: dict | None = None, rtol: float = PSD_RTOL,
          workers: int | None = None) -> list[dict]:
    """PPT verdict and minimum eigenvalue at every grid point; invalid points carry ``error``."""
    tasks = [(name, dict(fixed or {}), dict(p), rtol) for p in points]
    return run_tasks(_sweep_task, tasks, workers)


def oracle_schemes(n: int, which: str) -> list[Scheme | None]:
    """``None`` stands for small-block families."""
    if which == "small":
        return [None]
    if which == "sigma":
        return [Scheme.sigma()]
    if which == "xi":
        return [Scheme.xi(n - 1)]
    if which == "all":
        return [None, Scheme.sigma()] + [Scheme.xi(k) for k in range(1, n)]
    raise ValueError(f"unknown scheme selection {which!r}")


def _oracle_task(task) -> float:
    d, n, scheme_desc, seed, index = task
    dims = DimsProfile(d, n)
    rng = np.random.default_rng([seed, index])
    if scheme_desc is None:
        fam = random_small_family(dims, rng)
    else:
        kind, k = scheme_desc
        fam = random_big_family(dims, Scheme.sigma() if kind == "sigma" else Scheme.xi(k), rng)
    return max(oracle_compare(fam, m) for m in all_masks(n))


@dataclass(frozen=True)
class OracleSummary:
    d: int
    n: int
    scheme: str
    count: int
    seed: int
    max_deviation: float
    tol: float = ORACLE_TOL

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tol

    def to_dict(self) -> dict:
        return {
            "d": self.d, "n": self.n, "scheme": self.scheme, "count": self.count,
            "seed": self.seed, "masks": 2 ** (self.n - 1), "max_deviation": self.max_deviation,
            "tol": self.tol, "passed": self.passed,
        }


def oracle_suite(d: int, n: int, count: int, seed: int, scheme: Scheme | None = None,
                 workers: int | None = None) -> OracleSummary:
    """Compare block rules with the dense transpose on ``count`` seeded families x all masks."""
    if d**n > ORACLE_MAX_DIM:
        raise ValueError(f"oracle limited to d^n <= {ORACLE_MAX_DIM}, got {d**n}")
    if n < 2:
        raise ValueError("need at least two factors")
    desc = None if scheme is None else (scheme.kind, scheme.k)
    if scheme is not None:
        scheme.validate(DimsProfile(d, n))
    tasks = [(d, n, desc, seed, i) for i in range(count)]
    devs = run_tasks(_oracle_task, tasks, workers)
    return OracleSummary(d, n, "small" if scheme is None else str(scheme), count, seed,
                         max(devs, default=0.0))
