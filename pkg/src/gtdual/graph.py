"""Pooling graphs and their reduction by negative test results.

Indices are 0-based throughout. A negative test certifies all of its members
negative, so inference only needs the subgraph induced by the positive tests
and the objects that appear in no negative test. :func:`reduce` builds that
subgraph, renumbers it densely and records the maps back to the original.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DuplicateMember,
    EmptyGroup,
    InconsistentObservation,
    IndexOutOfRange,
    InvalidParameter,
    LengthMismatch,
)
from .model import Observation, PriorVector


def _validate_groups(num_objects: int, groups: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    if int(num_objects) < 1:
        raise InvalidParameter(f"num_objects must be >= 1, got {num_objects}")
    out = []
    for i, group in enumerate(groups):
        members = [int(k) for k in group]
        if not members:
            raise EmptyGroup(f"group {i} is empty")
        for k in members:
            if not 0 <= k < num_objects:
                raise IndexOutOfRange(f"group {i} contains {k}, outside [0, {num_objects})")
        if len(set(members)) != len(members):
            raise DuplicateMember(f"group {i} lists an object more than once: {members}")
        out.append(tuple(sorted(members)))
    return tuple(out)


@dataclass(frozen=True)
class PoolingGraph:
    """Bipartite object/test structure; ``groups[i]`` is the member set of test i."""

    num_objects: int
    groups: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "num_objects", int(self.num_objects))
        object.__setattr__(self, "groups", _validate_groups(self.num_objects, self.groups))

    @property
    def num_tests(self) -> int:
        return len(self.groups)

    @cached_property
    def object_tests(self) -> tuple[tuple[int, ...], ...]:
        """For each object, the ascending list of tests that contain it."""
        adj: list[list[int]] = [[] for _ in range(self.num_objects)]
        for i, group in enumerate(self.groups):
            for k in group:
                adj[k].append(i)
        return tuple(tuple(a) for a in adj)

    def incidence(self) -> np.ndarray:
        """Dense ``(M, N)`` 0/1 membership matrix."""
        a = np.zeros((self.num_tests, self.num_objects), dtype=np.int64)
        for i, group in enumerate(self.groups):
            a[i, list(group)] = 1
        return a

    @classmethod
    def from_incidence(cls, matrix) -> "PoolingGraph":
        a = np.asarray(matrix)
        if a.ndim != 2:
            raise InvalidParameter(f"incidence matrix must be 2-D, got shape {a.shape}")
        return build_pooling_graph(a.shape[1], [np.flatnonzero(row).tolist() for row in a])

    def to_dict(self) -> dict:
        return {"num_objects": self.num_objects, "tests": [list(g) for g in self.groups]}


def build_pooling_graph(num_objects: int, groups: Iterable[Iterable[int]]) -> PoolingGraph:
    return PoolingGraph(num_objects, tuple(tuple(g) for g in groups))


def random_pooling_graph(num_objects: int, num_tests: int, group_size: int, seed: int = 0) -> PoolingGraph:
    """Draw ``num_tests`` uniform random ``group_size``-subsets of the objects.

    Uses ``numpy.random.default_rng(seed).choice(..., replace=False)`` per
    test, in test order.
    """
    if num_objects < 1 or num_tests < 0 or group_size < 1:
        raise InvalidParameter(
            f"need num_objects >= 1, num_tests >= 0, group_size >= 1; "
            f"got {num_objects}, {num_tests}, {group_size}"
        )
    if group_size > num_objects:
        raise InvalidParameter(f"group_size {group_size} exceeds num_objects {num_objects}")
    rng = np.random.default_rng(seed)
    groups = [rng.choice(num_objects, size=group_size, replace=False).tolist() for _ in range(num_tests)]
    return build_pooling_graph(num_objects, groups)


@dataclass(frozen=True)
class ReducedProblem:
    """Induced subgraph on the positive tests and the not-certainly-negative objects.

    ``alpha[i]`` lists the kept objects of kept test ``i``; ``beta[j]`` lists
    the kept tests of kept object ``j``. Both use the renumbered indices.
    """

    n: int
    m: int
    alpha: tuple[tuple[int, ...], ...]
    beta: tuple[tuple[int, ...], ...]
    kept_objects: tuple[int, ...]
    kept_tests: tuple[int, ...]
    forced_zero: frozenset[int]
    priors: PriorVector

    @classmethod
    def from_alpha(cls, n: int, alpha: Sequence[Iterable[int]], priors: PriorVector | Sequence[float]) -> "ReducedProblem":
        """Build a problem directly from positive-test groups, every test observed positive."""
        if not isinstance(priors, PriorVector):
            priors = PriorVector(tuple(priors))
        graph = build_pooling_graph(n, alpha)
        return reduce(graph, Observation((1,) * graph.num_tests), priors)

    @cached_property
    def beta_masks(self) -> tuple[int, ...]:
        """Bitmask over kept tests for each kept object (bit i set iff i in beta[j])."""
        return tuple(sum(1 << i for i in b) for b in self.beta)

    @cached_property
    def alpha_masks(self) -> tuple[int, ...]:
        """Bitmask over kept objects for each kept test."""
        return tuple(sum(1 << j for j in a) for a in self.alpha)

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.alpha)


def reduce(graph: PoolingGraph, observation: Observation, priors: PriorVector) -> ReducedProblem:
    """Eliminate objects certified negative by some test with result 0."""
    if len(observation) != graph.num_tests:
        raise LengthMismatch(f"observation has length {len(observation)}, graph has {graph.num_tests} tests")
    if len(priors) != graph.num_objects:
        raise LengthMismatch(f"priors have length {len(priors)}, graph has {graph.num_objects} objects")

    forced = set()
    for group, t in zip(graph.groups, observation.results):
        if t == 0:
            forced.update(group)
    kept_objects = tuple(j for j in range(graph.num_objects) if j not in forced)
    kept_tests = tuple(i for i, t in enumerate(observation.results) if t == 1)
    new_index = {j: k for k, j in enumerate(kept_objects)}

    alpha = []
    for i in kept_tests:
        members = tuple(new_index[k] for k in graph.groups[i] if k in new_index)
        if not members:
            raise InconsistentObservation(
                f"inconsistent observation: test {i} is positive but all its members are in negative tests"
            )
        alpha.append(members)

    beta: list[list[int]] = [[] for _ in kept_objects]
    for i, members in enumerate(alpha):
        for j in members:
            beta[j].append(i)

    return ReducedProblem(
        n=len(kept_objects),
        m=len(kept_tests),
        alpha=tuple(alpha),
        beta=tuple(tuple(b) for b in beta),
        kept_objects=kept_objects,
        kept_tests=kept_tests,
        forced_zero=frozenset(forced),
        priors=priors.restrict(kept_objects),
    )
