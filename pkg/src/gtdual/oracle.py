"""Brute-force posterior values, the reference for the dual engine.

Two independent enumerations are provided: the direct sum over object
states ``x in {0,1}^n`` and the edge-variable form in which every edge of
the reduced graph carries its own bit and equality factors tie the copies of
an object together. States are visited in ascending bitmask order in fixed
blocks and every accumulator uses :func:`math.fsum`, so results are
reproducible to the last bit.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidParameter, ProblemTooLarge, ZeroEvidence
from .graph import ReducedProblem

NAIVE_CAP = 20
FINER_CAP = 24
_BLOCK_BITS = 16


def _check_target(rp: ReducedProblem, ell: int, b: int) -> None:
    if not 0 <= ell < rp.n:
        raise InvalidParameter(f"object index {ell} outside [0, {rp.n})")
    if b not in (0, 1):
        raise InvalidParameter(f"b must be 0 or 1, got {b}")


def _state_blocks(nbits: int):
    """Yield ``(states, bits)`` covering ``0 .. 2**nbits - 1`` in ascending order."""
    total = 1 << nbits
    step = 1 << min(nbits, _BLOCK_BITS)
    shifts = np.arange(nbits, dtype=np.int64)
    for start in range(0, total, step):
        states = np.arange(start, min(start + step, total), dtype=np.int64)
        bits = ((states[:, None] >> shifts[None, :]) & 1).astype(bool)
        yield states, bits


def _joint_terms(rp: ReducedProblem, states: np.ndarray, bits: np.ndarray) -> np.ndarray:
    """Prior weight times the all-tests-positive indicator, per state."""
    q = np.asarray(rp.priors.q, dtype=np.float64)
    weight = np.prod(np.where(bits, q[None, :], 1.0 - q[None, :]), axis=1)
    ok = np.ones(len(states), dtype=bool)
    for mask in rp.alpha_masks:
        ok &= (states & mask) != 0
    return np.where(ok, weight, 0.0)


def _check_naive_cap(rp: ReducedProblem, cap: int) -> None:
    if rp.n > cap:
        raise ProblemTooLarge(f"naive enumeration over {rp.n} objects exceeds the cap of {cap}")


def naive_posterior_value(rp: ReducedProblem, ell: int, b: int, cap: int = NAIVE_CAP) -> float:
    """Sum of prior mass over states consistent with all-positive tests and ``x_ell = b``."""
    _check_target(rp, ell, b)
    _check_naive_cap(rp, cap)
    partials = []
    for states, bits in _state_blocks(rp.n):
        terms = _joint_terms(rp, states, bits)
        sel = bits[:, ell] if b else ~bits[:, ell]
        partials.append(math.fsum(terms[sel].tolist()))
    return math.fsum(partials)


def naive_all_posteriors(rp: ReducedProblem, cap: int = NAIVE_CAP) -> list[tuple[float, float]]:
    """``(a0, a1)`` for every kept object from a single pass over all states."""
    _check_naive_cap(rp, cap)
    part0: list[list[float]] = [[] for _ in range(rp.n)]
    part1: list[list[float]] = [[] for _ in range(rp.n)]
    part_z = []
    for states, bits in _state_blocks(rp.n):
        terms = _joint_terms(rp, states, bits)
        part_z.append(math.fsum(terms.tolist()))
        for ell in range(rp.n):
            col = bits[:, ell]
            part1[ell].append(math.fsum(terms[col].tolist()))
            part0[ell].append(math.fsum(terms[~col].tolist()))
    if math.fsum(part_z) <= 0.0:
        raise ZeroEvidence("all states are excluded by the observation")
    return [(math.fsum(p0), math.fsum(p1)) for p0, p1 in zip(part0, part1)]


def finer_posterior_value(rp: ReducedProblem, ell: int, b: int, cap: int = FINER_CAP) -> float:
    """Posterior value from the edge-variable expansion.

    Every edge ``(i, j)`` gets its own bit ``x_ij``; test ``i`` contributes
    ``OR`` over its edge bits, object ``j`` contributes
    ``EQ(x_ij for i in beta(j), u_j) * phi_j(u_j)`` where ``phi_j`` is the
    prior, additionally restricted to ``u_ell = b`` at the pivot.
    """
    _check_target(rp, ell, b)
    edges = [(i, j) for i, members in enumerate(rp.alpha) for j in members]
    nbits = rp.n + len(edges)
    if nbits > cap:
        raise ProblemTooLarge(f"edge-variable form needs {nbits} summation bits, cap is {cap}")

    edge_col = {e: rp.n + k for k, e in enumerate(edges)}
    test_cols = [[edge_col[(i, j)] for j in members] for i, members in enumerate(rp.alpha)]
    obj_cols = [[edge_col[(i, j)] for i in rp.beta[j]] for j in range(rp.n)]
    q = rp.priors.q

    partials = []
    for _, bits in _state_blocks(nbits):
        alive = np.ones(len(bits), dtype=bool)
        for cols in test_cols:
            alive &= bits[:, cols].any(axis=1)
        factor = np.ones(len(bits), dtype=np.float64)
        for j in range(rp.n):
            u = bits[:, j]
            for c in obj_cols[j]:
                alive &= bits[:, c] == u
            phi = np.where(u, q[j], 1.0 - q[j])
            if j == ell:
                phi = np.where(u == bool(b), phi, 0.0)
            factor *= phi
        partials.append(math.fsum(factor[alive].tolist()))
    return math.fsum(partials)
