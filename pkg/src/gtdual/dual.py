"""Posterior values as a signed sum over test-side variables.

For the reduced problem (all kept tests positive) the posterior value
``a^(b)(ell)`` equals::

    sum over w in {0,1}^m of
        prod_i (-1)^(w_i * (|alpha(i)| + 1)) * prod_j Delta_j(w restricted to beta(j))

with ``Delta_j(y) = 1`` if ``y == 0`` and ``(-1)^|y| * P_j(0)`` otherwise for a
non-pivot object, and ``P_ell(b)`` / ``(-1)^|y| * P_ell(0) * [b == 0]`` for the
pivot. The sum has ``2^m`` terms instead of the ``2^n`` of brute force.

``w`` is enumerated as an ascending bitmask, bit ``i`` standing for test ``i``.
The w-space is cut into fixed contiguous blocks whose size depends only on
``(n, m)``; each block is reduced with :func:`math.fsum` and block partials
are merged in ascending order, so the result does not depend on ``workers``.

Terms carry alternating signs and can cancel heavily. Precision therefore
degrades as ``m`` grows; values whose magnitude is below the accumulated
rounding bound of their terms are reported as exactly 0.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidParameter, LengthMismatch, ProblemTooLarge
from .graph import ReducedProblem

DUAL_CAP = 28
_EPS = np.finfo(np.float64).eps
_TARGET_CELLS = 1 << 20


def _parity(x: np.ndarray) -> np.ndarray:
    return (np.bitwise_count(x) & 1).astype(bool)


@dataclass(frozen=True)
class DualWorkspace:
    """Per-problem tables for the w-sum."""

    m: int
    sign_exponents: tuple[int, ...]
    beta: tuple[tuple[int, ...], ...]
    beta_masks: np.ndarray
    p0: np.ndarray
    p1: np.ndarray

    @classmethod
    def from_problem(cls, rp: ReducedProblem, cap: int = DUAL_CAP) -> "DualWorkspace":
        if rp.m > cap:
            raise ProblemTooLarge(f"dual sum over {rp.m} tests exceeds the cap of {cap}")
        q = np.asarray(rp.priors.q, dtype=np.float64)
        return cls(
            m=rp.m,
            sign_exponents=tuple((len(a) + 1) % 2 for a in rp.alpha),
            beta=rp.beta,
            beta_masks=np.asarray(rp.beta_masks, dtype=np.int64),
            p0=1.0 - q,
            p1=q,
        )

    @property
    def n(self) -> int:
        return len(self.beta)

    @property
    def sign_mask(self) -> int:
        return sum(1 << i for i, e in enumerate(self.sign_exponents) if e)

    def block_rows(self) -> int:
        total = 1 << self.m
        rows = 1 << max(10, (_TARGET_CELLS // max(self.n, 1)).bit_length() - 1)
        return min(rows, total)

    def blocks(self) -> list[tuple[int, int]]:
        total = 1 << self.m
        step = self.block_rows()
        return [(s, min(s + step, total)) for s in range(0, total, step)]

    def signs(self, w: np.ndarray) -> np.ndarray:
        return np.where(_parity(w & self.sign_mask), -1.0, 1.0)


def delta(rp: ReducedProblem, j: int, ell: int, b: int, y: Sequence[int]) -> float:
    """Grouped per-object factor evaluated at the bits ``y`` of the tests in ``beta(j)``."""
    if len(y) != len(rp.beta[j]):
        raise LengthMismatch(f"object {j} is in {len(rp.beta[j])} tests, got {len(y)} bits")
    p0 = rp.priors.p0(j)
    all_zero = not any(y)
    sign = -1.0 if sum(y) % 2 else 1.0
    if j != ell:
        return 1.0 if all_zero else sign * p0
    if all_zero:
        return rp.priors.prob(j, b)
    return sign * p0 if b == 0 else 0.0


def sign_factor(ws: DualWorkspace, w: int) -> int:
    """``prod_i (-1)^(w_i * (|alpha(i)| + 1))`` for the bitmask ``w``."""
    if not 0 <= w < (1 << ws.m):
        raise InvalidParameter(f"w = {w} is not an {ws.m}-bit mask")
    return -1 if bin(w & ws.sign_mask).count("1") % 2 else 1


def _base_factors(ws: DualWorkspace, w: np.ndarray):
    inter = w[:, None] & ws.beta_masks[None, :]
    zero = inter == 0
    odd = _parity(inter)
    signed_p0 = np.where(odd, -ws.p0[None, :], ws.p0[None, :])
    return np.where(zero, 1.0, signed_p0), zero, signed_p0


def _pivot_terms(ws: DualWorkspace, ell: int, b: int, lo: int, hi: int) -> np.ndarray:
    w = np.arange(lo, hi, dtype=np.int64)
    base, zero, signed_p0 = _base_factors(ws, w)
    if b == 1:
        pivot = np.where(zero[:, ell], ws.p1[ell], 0.0)
    else:
        pivot = signed_p0[:, ell]
    others = np.delete(base, ell, axis=1)
    return ws.signs(w) * np.prod(others, axis=1) * pivot


def _snap(value: float, abs_sum: float, n: int) -> float:
    if abs(value) <= 2.0 * (n + 2) * _EPS * abs_sum:
        return 0.0
    return value


def _map_blocks(fn, blocks, workers: int):
    if workers <= 1 or len(blocks) == 1:
        return [fn(blk) for blk in blocks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, blocks))


def dual_terms(rp: ReducedProblem, ell: int, b: int, cap: int = DUAL_CAP) -> np.ndarray:
    """All ``2^m`` summands for one ``(ell, b)``, indexed by ``w``."""
    ws = DualWorkspace.from_problem(rp, cap)
    _check_target(rp, ell, b)
    return _pivot_terms(ws, ell, b, 0, 1 << ws.m)


def _check_target(rp: ReducedProblem, ell: int, b: int) -> None:
    if not 0 <= ell < rp.n:
        raise InvalidParameter(f"object index {ell} outside [0, {rp.n})")
    if b not in (0, 1):
        raise InvalidParameter(f"b must be 0 or 1, got {b}")


def dual_posterior_value(rp: ReducedProblem, ell: int, b: int, cap: int = DUAL_CAP, workers: int = 1) -> float:
    """One posterior value by the w-sum, product over objects taken directly."""
    ws = DualWorkspace.from_problem(rp, cap)
    _check_target(rp, ell, b)

    def run(block):
        terms = _pivot_terms(ws, ell, b, *block)
        return math.fsum(terms.tolist()), float(np.abs(terms).sum())

    parts = _map_blocks(run, ws.blocks(), workers)
    value = math.fsum(p for p, _ in parts)
    return _snap(value, sum(a for _, a in parts), ws.n)


def dual_all_posteriors(rp: ReducedProblem, cap: int = DUAL_CAP, workers: int = 1) -> list[tuple[float, float]]:
    """``(a0, a1)`` per kept object, one independent w-sum per value."""
    return [
        (dual_posterior_value(rp, ell, 0, cap, workers), dual_posterior_value(rp, ell, 1, cap, workers))
        for ell in range(rp.n)
    ]


def _fast_block(ws: DualWorkspace, lo: int, hi: int):
    w = np.arange(lo, hi, dtype=np.int64)
    base, zero, signed_p0 = _base_factors(ws, w)
    rows, n = base.shape
    # leave-one-out products: prefix over k < j times suffix over k > j
    prefix = np.ones((rows, n))
    suffix = np.ones((rows, n))
    if n > 1:
        prefix[:, 1:] = np.cumprod(base[:, :-1], axis=1)
        suffix[:, :-1] = np.cumprod(base[:, :0:-1], axis=1)[:, ::-1]
    loo = ws.signs(w)[:, None] * prefix * suffix
    t0 = loo * signed_p0
    t1 = loo * np.where(zero, ws.p1[None, :], 0.0)
    s0 = [math.fsum(col) for col in t0.T.tolist()]
    s1 = [math.fsum(col) for col in t1.T.tolist()]
    return s0, s1, np.abs(t0).sum(axis=0), np.abs(t1).sum(axis=0)


def dual_all_posteriors_fast(rp: ReducedProblem, cap: int = DUAL_CAP, workers: int = 1) -> list[tuple[float, float]]:
    """``(a0, a1)`` for every kept object in ``O(n 2^m)`` using prefix/suffix products."""
    ws = DualWorkspace.from_problem(rp, cap)
    if ws.n == 0:
        return []
    parts = _map_blocks(lambda blk: _fast_block(ws, *blk), ws.blocks(), workers)
    abs0 = np.sum([p[2] for p in parts], axis=0)
    abs1 = np.sum([p[3] for p in parts], axis=0)
    out = []
    for ell in range(ws.n):
        a0 = math.fsum(p[0][ell] for p in parts)
        a1 = math.fsum(p[1][ell] for p in parts)
        out.append((_snap(a0, abs0[ell], ws.n), _snap(a1, abs1[ell], ws.n)))
    return out
