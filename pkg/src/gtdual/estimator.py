"""scikit-learn style front end.

``fit`` takes the pooling design as an ``(M, N)`` 0/1 matrix (row i marks
the members of test i) or a :class:`PoolingGraph`. Observations are the
samples: ``predict_proba(T)`` maps a ``(k, M)`` array of test outcomes to a
``(k, N)`` array of posterior positivity probabilities.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from . import dual, oracle
from .errors import InvalidParameter
from .graph import PoolingGraph
from .model import Observation, PriorVector
from .report import METHODS, PosteriorReport, posterior_report


def _check_binary(a: np.ndarray, what: str) -> np.ndarray:
    if a.size and not np.isin(a, (0, 1)).all():
        raise InvalidParameter(f"{what} must be a 0/1 array")
    return a.astype(np.int64)


class BitwiseMAPDecoder(BaseEstimator):
    """Exact bitwise-MAP decoder for noiseless non-adaptive group testing.

    Parameters
    ----------
    prior : float or array-like of shape (n_objects,), default=0.01
        Prior probability that each object is positive.
    method : {"dual-fast", "dual", "naive"}, default="dual-fast"
        Inference engine. ``"naive"`` enumerates object states and is only
        feasible for small reduced problems.
    workers : int, default=1
        Threads used to split the dual sum. Results do not depend on it.
    naive_cap, dual_cap : int
        Largest reduced problem (objects resp. positive tests) each engine
        accepts before raising :class:`~gtdual.errors.ProblemTooLarge`.
    """

    def __init__(self, prior=0.01, method="dual-fast", workers=1, naive_cap=oracle.NAIVE_CAP, dual_cap=dual.DUAL_CAP):
        self.prior = prior
        self.method = method
        self.workers = workers
        self.naive_cap = naive_cap
        self.dual_cap = dual_cap

    def fit(self, X, y=None):
        if self.method not in METHODS:
            raise InvalidParameter(f"unknown method {self.method!r}")
        if isinstance(X, PoolingGraph):
            graph = X
        else:
            a = check_array(X, dtype=None, ensure_min_samples=0, ensure_all_finite=True)
            graph = PoolingGraph.from_incidence(_check_binary(a, "pooling matrix"))
        q = np.broadcast_to(np.asarray(self.prior, dtype=np.float64), (graph.num_objects,))
        self.graph_ = graph
        self.priors_ = PriorVector(tuple(q.tolist()))
        self.n_objects_ = graph.num_objects
        self.n_tests_ = graph.num_tests
        return self

    def _validate_observations(self, T) -> np.ndarray:
        check_is_fitted(self, "graph_")
        t = np.asarray(T)
        if t.ndim == 1:
            t = t[None, :]
        if self.n_tests_ == 0:
            if t.shape[-1] != 0:
                raise InvalidParameter(f"expected 0 test results per row, got {t.shape[-1]}")
            return t.reshape(len(t), 0).astype(np.int64)
        t = check_array(t, dtype=None)
        if t.shape[1] != self.n_tests_:
            raise InvalidParameter(f"expected {self.n_tests_} test results per row, got {t.shape[1]}")
        return _check_binary(t, "observations")

    def report(self, t) -> PosteriorReport:
        """Full per-object report for a single observation vector."""
        check_is_fitted(self, "graph_")
        return posterior_report(
            self.graph_,
            self.priors_,
            Observation(tuple(int(v) for v in np.ravel(t))),
            method=self.method,
            workers=self.workers,
            naive_cap=self.naive_cap,
            dual_cap=self.dual_cap,
        )

    def _reports(self, T) -> list[PosteriorReport]:
        return [self.report(row) for row in self._validate_observations(T)]

    def predict_proba(self, T) -> np.ndarray:
        """Posterior ``P(S_j = 1 | t)`` per observation row and object."""
        return np.array([r.p_positive for r in self._reports(T)], dtype=np.float64).reshape(-1, self.n_objects_)

    def decision_function(self, T) -> np.ndarray:
        """Log posterior ratios ``ln P(S_j = 1 | t) / P(S_j = 0 | t)``; may be +-inf."""
        return np.array([r.log_ratios for r in self._reports(T)], dtype=np.float64).reshape(-1, self.n_objects_)

    def predict(self, T) -> np.ndarray:
        """Bitwise MAP estimate; a zero log ratio decides positive."""
        return np.array([r.map_bits for r in self._reports(T)], dtype=np.int64).reshape(-1, self.n_objects_)
