#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import absolute_import
from __future__ import unicode_literals
from __future__ import division
from __future__ import print_function

from typing import Dict, Any, Optional

from .weighted_graph import WeightedGraph

NOTE_FINITE = "the working graph is finite, so it has no infinite path and condition (A) holds trivially; " \
              "L = L^max on it. measure_min is the inf_x m(x) > 0 witness the infinite graph would need."


def essential_self_adjointness_assumptions(g: WeightedGraph, metric: Optional[Any] = None) -> Dict[str, Any]:
    """
    reports the two sufficient conditions for L = L^max on the working graph.
    (A) every infinite path has infinite measure. a finite graph has no infinite path.
    (B) a path metric on a locally finite graph; informational, depends on the metric kind only.
    the self-adjointness results themselves are assumed, not verified.
    """
    rule = getattr(metric, "edge_length_rule", None)
    ret = {
        "condition_a": True,
        "condition_a_basis": "finite graph",
        "measure_min": float(g.measure.min()),
        "condition_b": rule in ("natural", "huang"),
        "metric_rule": rule,
        "locally_finite": True,
        "operator": "L",
        "note": NOTE_FINITE
    }
    return ret
