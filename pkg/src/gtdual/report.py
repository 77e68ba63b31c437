"""Per-object posterior reports over the original object indices."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

from . import dual, oracle
from .errors import InvalidParameter
from .graph import PoolingGraph, ReducedProblem, reduce
from .model import Observation, PriorVector

METHODS = ("naive", "dual", "dual-fast")

FORCED_NEGATIVE = "forced_negative"
ISOLATED = "isolated"
COMPUTED = "computed"


@dataclass(frozen=True)
class ExtendedReal:
    """A real number or one of the two infinities, tagged for JSON."""

    tag: str
    value: Optional[float] = None

    NEG = "neg_infinite"
    FINITE = "finite"
    POS = "pos_infinite"

    def __post_init__(self):
        if self.tag not in (self.NEG, self.FINITE, self.POS):
            raise InvalidParameter(f"unknown extended-real tag {self.tag!r}")
        if (self.tag == self.FINITE) != (self.value is not None):
            raise InvalidParameter("a value is required for, and only for, finite numbers")

    @classmethod
    def neg_infinite(cls) -> "ExtendedReal":
        return cls(cls.NEG)

    @classmethod
    def pos_infinite(cls) -> "ExtendedReal":
        return cls(cls.POS)

    @classmethod
    def finite(cls, x: float) -> "ExtendedReal":
        return cls(cls.FINITE, float(x))

    @classmethod
    def log_ratio(cls, a1: float, a0: float) -> "ExtendedReal":
        """``ln(a1 / a0)`` with the zero cases mapped to the infinities."""
        if a0 <= 0.0 and a1 <= 0.0:
            raise InvalidParameter("log ratio of two zero posterior values is undefined")
        if a0 <= 0.0:
            return cls.pos_infinite()
        if a1 <= 0.0:
            return cls.neg_infinite()
        return cls.finite(math.log(a1) - math.log(a0))

    def __float__(self) -> float:
        if self.tag == self.NEG:
            return -math.inf
        if self.tag == self.POS:
            return math.inf
        return self.value

    def is_nonnegative(self) -> bool:
        return self.tag == self.POS or (self.tag == self.FINITE and self.value >= 0.0)

    def to_dict(self) -> dict:
        if self.tag == self.FINITE:
            return {"tag": self.tag, "value": self.value}
        return {"tag": self.tag}

    @classmethod
    def from_dict(cls, d: dict) -> "ExtendedReal":
        return cls(d["tag"], d.get("value"))


@dataclass(frozen=True)
class ObjectPosterior:
    index: int
    status: str
    p_positive: float
    log_ratio: ExtendedReal
    map_bit: int

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "status": self.status,
            "p_positive": self.p_positive,
            "log_ratio": self.log_ratio.to_dict(),
            "map": self.map_bit,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ObjectPosterior":
        return cls(d["index"], d["status"], d["p_positive"], ExtendedReal.from_dict(d["log_ratio"]), d["map"])


@dataclass(frozen=True)
class PosteriorReport:
    method: str
    Z: float
    objects: tuple[ObjectPosterior, ...]

    @property
    def p_positive(self) -> list[float]:
        return [o.p_positive for o in self.objects]

    @property
    def map_bits(self) -> list[int]:
        return [o.map_bit for o in self.objects]

    @property
    def log_ratios(self) -> list[float]:
        return [float(o.log_ratio) for o in self.objects]

    def to_dict(self) -> dict:
        return {"method": self.method, "Z": self.Z, "objects": [o.to_dict() for o in self.objects]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "PosteriorReport":
        return cls(d["method"], d["Z"], tuple(ObjectPosterior.from_dict(o) for o in d["objects"]))


def compute_posteriors(
    rp: ReducedProblem,
    method: str = "dual-fast",
    workers: int = 1,
    naive_cap: int = oracle.NAIVE_CAP,
    dual_cap: int = dual.DUAL_CAP,
) -> list[tuple[float, float]]:
    """Dispatch to one engine; returns ``(a0, a1)`` per kept object."""
    if method == "naive":
        return oracle.naive_all_posteriors(rp, cap=naive_cap)
    if method == "dual":
        return dual.dual_all_posteriors(rp, cap=dual_cap, workers=workers)
    if method == "dual-fast":
        return dual.dual_all_posteriors_fast(rp, cap=dual_cap, workers=workers)
    raise InvalidParameter(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")


def posterior_report(
    graph: PoolingGraph,
    priors: PriorVector,
    observation: Observation,
    method: str = "dual-fast",
    workers: int = 1,
    naive_cap: int = oracle.NAIVE_CAP,
    dual_cap: int = dual.DUAL_CAP,
) -> PosteriorReport:
    """Reduce, run the chosen engine and map results back to every original object.

    The MAP bit is 1 iff the log ratio is >= 0, so an exact tie decides positive.
    """
    rp = reduce(graph, observation, priors)
    values = compute_posteriors(rp, method, workers, naive_cap, dual_cap)
    z = values[0][0] + values[0][1] if values else 1.0

    position = {j: k for k, j in enumerate(rp.kept_objects)}
    objects = []
    for j in range(graph.num_objects):
        if j in rp.forced_zero:
            objects.append(ObjectPosterior(j, FORCED_NEGATIVE, 0.0, ExtendedReal.neg_infinite(), 0))
            continue
        k = position[j]
        if not rp.beta[k]:
            q = priors.q[j]
            lr = ExtendedReal.log_ratio(q, 1.0 - q)
            objects.append(ObjectPosterior(j, ISOLATED, q, lr, int(lr.is_nonnegative())))
            continue
        a0, a1 = values[k]
        lr = ExtendedReal.log_ratio(a1, a0)
        objects.append(ObjectPosterior(j, COMPUTED, a1 / (a0 + a1), lr, int(lr.is_nonnegative())))
    return PosteriorReport(method, z, tuple(objects))
