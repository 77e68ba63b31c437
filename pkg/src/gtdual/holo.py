"""Exhaustive numeric checks of the local identities behind the dual sum.

``THETA`` and ``ETA`` are the 2x2 tables (row = first argument) inserted on
each object/test edge. Contracting them over their shared index gives the
equality function, which is why inserting the pair leaves every sum-product
value unchanged. Absorbing the ``THETA`` copies into an OR factor yields a
signed equality function, and absorbing the ``ETA`` copies into an object's
equality factor and prior yields the per-object factor used by
:mod:`gtdual.dual`.

Integer-valued identities are checked in exact integer arithmetic; only the
checks involving priors use floats. Every check reads the module tables at
call time unless explicit tables are passed.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .errors import EmptyInput, InvalidParameter
from .dual import DualWorkspace, delta, dual_posterior_value, sign_factor
from .graph import ReducedProblem
from .model import PriorVector

THETA = ((0, -1), (1, 1))
ETA = ((1, 1), (-1, 0))

SEQ_MAX_R = 10
DELTA_MAX_R = 8
PRIOR_GRID = (0.1, 0.3, 0.5, 0.7, 0.9)


def _table(t, default) -> np.ndarray:
    return np.asarray(default if t is None else t, dtype=np.int64)


def _bit_matrix(r: int) -> np.ndarray:
    """``(2^r, r)`` matrix whose row ``v`` holds the bits of ``v``, bit 0 first."""
    v = np.arange(1 << r, dtype=np.int64)
    return (v[:, None] >> np.arange(r)[None, :]) & 1


def check_duality(theta=None, eta=None) -> bool:
    """``sum_y theta(x, y) * eta(y, w) == EQ(x, w)`` for all four ``(x, w)``."""
    th, et = _table(theta, THETA), _table(eta, ETA)
    for x in (0, 1):
        for w in (0, 1):
            if int(th[x, 0] * et[0, w] + th[x, 1] * et[1, w]) != int(x == w):
                return False
    return True


def seq(y) -> int:
    """Signed equality: ``(-1)^(y_1 * (r + 1)) * EQ(y_1, ..., y_r)``."""
    y = [int(v) for v in y]
    if not y:
        raise EmptyInput("seq needs at least one argument")
    if any(v != y[0] for v in y):
        return 0
    return -1 if (y[0] * (len(y) + 1)) % 2 else 1


def or_theta_contraction(r: int, theta=None) -> np.ndarray:
    """``sum_x OR(x) * prod_i theta(x_i, y_i)`` for every ``y``, indexed by bitmask."""
    th = _table(theta, THETA)
    bits = _bit_matrix(r)
    prod = np.ones((1 << r, 1 << r), dtype=np.int64)
    for i in range(r):
        prod *= th[bits[:, i][:, None], bits[:, i][None, :]]
    or_x = (np.arange(1 << r) != 0).astype(np.int64)
    return or_x @ prod


def check_seq_lemma(r: int, theta=None) -> bool:
    if not 1 <= r <= SEQ_MAX_R:
        raise InvalidParameter(f"r must be in [1, {SEQ_MAX_R}], got {r}")
    lhs = or_theta_contraction(r, theta)
    bits = _bit_matrix(r)
    return all(int(lhs[v]) == seq(bits[v]) for v in range(1 << r))


def _single_object_problem(r: int, prior_q: float) -> ReducedProblem:
    # object 0 carries all r tests; object 1 is an untested bystander
    return ReducedProblem.from_alpha(2, [[0]] * r, PriorVector((prior_q, 0.5)))


def closed_form_delta(y, pivot: bool, b: int, prior_q: float) -> float:
    """The per-object factor in closed form, for an object in ``len(y)`` tests."""
    rp = _single_object_problem(len(y), prior_q)
    return delta(rp, 0, 0 if pivot else 1, b, list(y))


def eq_eta_contraction(r: int, pivot: bool, b: int, prior_q: float, eta=None) -> np.ndarray:
    """``sum_u sum_w EQ(u, w) * phi(u) * prod_k eta(y_k, w_k)`` for every ``y``.

    ``phi`` is the prior, restricted to ``u == b`` for the pivot. All
    ``2^(r+1)`` pairs ``(u, w)`` are enumerated.
    """
    et = _table(eta, ETA)
    bits = _bit_matrix(r)
    prod = np.ones((1 << r, 1 << r), dtype=np.int64)
    for k in range(r):
        prod *= et[bits[:, k][:, None], bits[:, k][None, :]]
    out = np.zeros(1 << r)
    for u in (0, 1):
        phi = prior_q if u else 1.0 - prior_q
        if pivot and u != b:
            phi = 0.0
        eq = np.all(bits == u, axis=1).astype(np.float64)
        out += phi * (prod @ eq)
    return out


def check_delta_lemma(r: int, j_is_pivot: bool, b: int, prior_q: float, eta=None, atol: float = 1e-14) -> bool:
    if not 1 <= r <= DELTA_MAX_R:
        raise InvalidParameter(f"r must be in [1, {DELTA_MAX_R}], got {r}")
    if not 0.0 < prior_q < 1.0:
        raise InvalidParameter(f"prior_q must be in (0, 1), got {prior_q}")
    if b not in (0, 1):
        raise InvalidParameter(f"b must be 0 or 1, got {b}")
    lhs = eq_eta_contraction(r, j_is_pivot, b, prior_q, eta)
    rp = _single_object_problem(r, prior_q)
    ell = 0 if j_is_pivot else 1
    bits = _bit_matrix(r)
    for v in range(1 << r):
        rhs = delta(rp, 0, ell, b, bits[v].tolist())
        if not abs(lhs[v] - rhs) <= atol:
            return False
    return True


# Worked instance: three objects, tests {0,1} and {1,2}, all priors 0.1,
# pivot object 1. Rows are (w, product for b=0, product for b=1, sign).
WORKED_TABLE = (
    ((0, 0), (1.0, 0.9, 1.0), (1.0, 0.1, 1.0), +1),
    ((0, 1), (1.0, -0.9, -0.9), (1.0, 0.0, -0.9), -1),
    ((1, 0), (-0.9, -0.9, 1.0), (-0.9, 0.0, 1.0), -1),
    ((1, 1), (-0.9, 0.9, -0.9), (-0.9, 0.0, -0.9), +1),
)
WORKED_SUMS = (0.009, 0.1)


def worked_instance() -> ReducedProblem:
    return ReducedProblem.from_alpha(3, [[0, 1], [1, 2]], PriorVector.uniform(3, 0.1))


def check_worked_example(diffs: Optional[list] = None, atol: float = 1e-12) -> bool:
    """Rebuild the three-object worked example factor by factor.

    Mismatches are appended to ``diffs`` as readable strings when given.
    """
    diffs = [] if diffs is None else diffs
    start = len(diffs)
    rp = worked_instance()
    ws = DualWorkspace.from_problem(rp)
    ell = 1
    for (w1, w2), factors0, factors1, sigma in WORKED_TABLE:
        w = w1 | (w2 << 1)
        got_sigma = sign_factor(ws, w)
        if got_sigma != sigma:
            diffs.append(f"w={w1}{w2}: sign {got_sigma} != {sigma}")
        for b, expected in ((0, factors0), (1, factors1)):
            got = [delta(rp, j, ell, b, [(w >> i) & 1 for i in rp.beta[j]]) for j in range(rp.n)]
            if any(abs(g - e) > atol for g, e in zip(got, expected)):
                diffs.append(f"w={w1}{w2}, b={b}: factors {got} != {list(expected)}")
            if abs(math.prod(got) - math.prod(expected)) > atol:
                diffs.append(f"w={w1}{w2}, b={b}: product {math.prod(got)} != {math.prod(expected)}")
    for b, expected in zip((0, 1), WORKED_SUMS):
        got = dual_posterior_value(rp, ell, b)
        if abs(got - expected) > atol:
            diffs.append(f"a^({b})(1) = {got} != {expected}")
    return len(diffs) == start


def run_all(seq_max_r: int = SEQ_MAX_R, delta_max_r: int = DELTA_MAX_R, priors=PRIOR_GRID) -> list[dict]:
    """Every check as ``{"name", "passed", ...}`` records, in a fixed order."""
    results = [{"name": "duality", "passed": check_duality()}]
    for r in range(1, seq_max_r + 1):
        results.append({"name": f"seq_lemma[r={r}]", "passed": check_seq_lemma(r)})
    for r in range(1, delta_max_r + 1):
        for pivot in (False, True):
            for b in (0, 1):
                ok = all(check_delta_lemma(r, pivot, b, q) for q in priors)
                kind = "pivot" if pivot else "other"
                results.append({"name": f"delta_lemma[r={r},{kind},b={b}]", "passed": ok})
    diffs: list[str] = []
    results.append({"name": "worked_example", "passed": check_worked_example(diffs), "diffs": diffs})
    return results
