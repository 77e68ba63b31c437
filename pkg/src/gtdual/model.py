"""Priors, state sampling and the noiseless OR test channel.

Random draws use :func:`numpy.random.default_rng` (PCG64) seeded with the
caller's integer seed. A state bit ``s_j`` is 1 iff the j-th uniform draw
from that generator is below ``q_j``. This mapping is part of the contract:
the same seed always yields the same states.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from .errors import EmptyInput, InvalidParameter, LengthMismatch

if TYPE_CHECKING:
    from .graph import PoolingGraph


def _as_bits(values: Iterable[int], what: str) -> tuple[int, ...]:
    bits = tuple(int(v) for v in values)
    for v in bits:
        if v not in (0, 1):
            raise InvalidParameter(f"{what} must contain only 0/1, got {v}")
    return bits


@dataclass(frozen=True)
class PriorVector:
    """Per-object positivity probabilities ``q_j = P(S_j = 1)``."""

    q: tuple[float, ...]

    def __post_init__(self):
        q = tuple(float(v) for v in self.q)
        for j, v in enumerate(q):
            if not 0.0 < v < 1.0:
                raise InvalidParameter(f"prior q[{j}] = {v!r} is not in the open interval (0, 1)")
        object.__setattr__(self, "q", q)

    @classmethod
    def uniform(cls, num_objects: int, q: float) -> "PriorVector":
        return cls((q,) * num_objects)

    def __len__(self) -> int:
        return len(self.q)

    def p0(self, j: int) -> float:
        return 1.0 - self.q[j]

    def p1(self, j: int) -> float:
        return self.q[j]

    def prob(self, j: int, bit: int) -> float:
        return self.q[j] if bit else 1.0 - self.q[j]

    def restrict(self, indices: Sequence[int]) -> "PriorVector":
        return PriorVector(tuple(self.q[j] for j in indices))


@dataclass(frozen=True)
class Observation:
    """Binary test-result vector ``t``."""

    results: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "results", _as_bits(self.results, "observation"))

    def __len__(self) -> int:
        return len(self.results)

    def to_dict(self) -> dict:
        return {"results": list(self.results)}


@dataclass(frozen=True)
class StateVector:
    """Binary object states ``s``."""

    s: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "s", _as_bits(self.s, "state vector"))

    def __len__(self) -> int:
        return len(self.s)

    def to_dict(self) -> dict:
        return {"states": list(self.s)}


def or_fn(bits: Iterable[int]) -> int:
    """Logical OR; the empty disjunction is 0."""
    return int(any(bits))


def eq_fn(bits: Sequence[int]) -> int:
    """1 iff all inputs are equal."""
    bits = list(bits)
    if not bits:
        raise EmptyInput("eq_fn needs at least one input")
    return int(all(b == bits[0] for b in bits))


def sample_states(priors: PriorVector, seed: int) -> StateVector:
    """Draw one state vector with independent Bernoulli(q_j) bits."""
    u = np.random.default_rng(seed).random(len(priors))
    return StateVector(tuple(int(x) for x in u < np.asarray(priors.q)))


def sample_states_batch(priors: PriorVector, size: int, seed: int) -> np.ndarray:
    """Draw ``size`` state vectors at once; returns a ``(size, N)`` uint8 array.

    Row 0 of the batch does not coincide with :func:`sample_states` for the
    same seed; use this for Monte Carlo work only.
    """
    u = np.random.default_rng(seed).random((size, len(priors)))
    return (u < np.asarray(priors.q)[None, :]).astype(np.uint8)


def run_tests(graph: "PoolingGraph", states: StateVector) -> Observation:
    """Evaluate every pooled test on ``states``: ``t_i = OR(s_k, k in group i)``."""
    if len(states) != graph.num_objects:
        raise LengthMismatch(
            f"state vector has length {len(states)}, graph has {graph.num_objects} objects"
        )
    return Observation(tuple(or_fn(states.s[k] for k in group) for group in graph.groups))


def run_tests_batch(graph: "PoolingGraph", states: np.ndarray) -> np.ndarray:
    """Vectorized :func:`run_tests` over the rows of a ``(k, N)`` 0/1 array."""
    states = np.asarray(states)
    if states.ndim != 2 or states.shape[1] != graph.num_objects:
        raise LengthMismatch(f"expected shape (k, {graph.num_objects}), got {states.shape}")
    return (states.astype(np.int64) @ graph.incidence().T > 0).astype(np.uint8)
