"""JSON file formats. ``-`` as a path means stdin/stdout."""

from __future__ import annotations

import json
import sys
from typing import Any

from .errors import InvalidParameter
from .graph import PoolingGraph, build_pooling_graph
from .model import Observation, PriorVector, StateVector


def read_json(path: str) -> Any:
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_json(obj: Any, path: str = "-") -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _field(d: dict, key: str, what: str):
    if not isinstance(d, dict) or key not in d:
        raise InvalidParameter(f"{what} JSON is missing the {key!r} field")
    return d[key]


def instance_to_dict(graph: PoolingGraph, priors: PriorVector) -> dict:
    return {"num_objects": graph.num_objects, "tests": [list(g) for g in graph.groups], "priors": list(priors.q)}


def instance_from_dict(d: dict) -> tuple[PoolingGraph, PriorVector]:
    graph = build_pooling_graph(_field(d, "num_objects", "graph"), _field(d, "tests", "graph"))
    priors = PriorVector(tuple(_field(d, "priors", "graph")))
    if len(priors) != graph.num_objects:
        raise InvalidParameter(f"graph has {graph.num_objects} objects but {len(priors)} priors")
    return graph, priors


def observation_from_dict(d: dict) -> Observation:
    return Observation(tuple(_field(d, "results", "observation")))


def states_from_dict(d: dict) -> StateVector:
    return StateVector(tuple(_field(d, "states", "state")))
