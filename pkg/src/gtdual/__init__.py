"""Exact bitwise-MAP inference for noiseless non-adaptive group testing."""

from .dual import dual_all_posteriors, dual_all_posteriors_fast, dual_posterior_value
from .errors import (
    DuplicateMember,
    EmptyGroup,
    EmptyInput,
    GroupTestingError,
    InconsistentObservation,
    IndexOutOfRange,
    InvalidParameter,
    LengthMismatch,
    ProblemTooLarge,
    ZeroEvidence,
)
from .estimator import BitwiseMAPDecoder
from .graph import PoolingGraph, ReducedProblem, build_pooling_graph, random_pooling_graph, reduce
from .model import Observation, PriorVector, StateVector, run_tests, sample_states
from .oracle import finer_posterior_value, naive_all_posteriors, naive_posterior_value
from .report import PosteriorReport, posterior_report

__version__ = "0.1.0"
