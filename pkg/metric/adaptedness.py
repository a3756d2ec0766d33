#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import absolute_import
from __future__ import unicode_literals
from __future__ import division
from __future__ import print_function

from typing import Union, Tuple, Dict, Any
import logging
import numpy as np

from graph.weighted_graph import WeightedGraph
from graph.exceptions import ParameterError
from .pseudo_metric import PseudoMetric, Lengths, CONVENTIONS, _check_lengths

logger = logging.getLogger(__name__)

ADAPTED_TOLERANCE = 1E-12


def _as_lengths(g: WeightedGraph, lengths: Union[Lengths, PseudoMetric], strictly_positive: bool) -> np.ndarray:
    if isinstance(lengths, PseudoMetric):
        lengths = lengths.lengths
    return _check_lengths(g, lengths, strictly_positive=strictly_positive)


class AdaptednessReport(object):

    def __init__(self, ok: bool, worst_vertex: int, worst_ratio: float, convention: str):
        self.ok = ok
        self.worst_vertex = worst_vertex
        self.worst_ratio = worst_ratio
        self.convention = convention

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "worst_vertex": self.worst_vertex,
            "worst_ratio": self.worst_ratio,
            "convention": self.convention
        }

    def __repr__(self):
        return f"AdaptednessReport({self.to_dict()})"


def adaptedness_ratios(g: WeightedGraph, lengths: Union[Lengths, PseudoMetric], convention: str) -> np.ndarray:
    """
    per-vertex c * sum_y b(x,y) rho(x,y)^2 / m(x), c = 1/2 (half) or 1 (full).
    """
    if convention not in CONVENTIONS:
        raise ParameterError(f"unsupported convention: {convention}")
    vec_l = _as_lengths(g, lengths, strictly_positive=False)
    coef = 0.5 if convention == "half" else 1.0
    vec_wl2 = g.edge_weights * vec_l ** 2
    n = g.n_vertices
    vec_sum = np.bincount(g.edge_sources, weights=vec_wl2, minlength=n) \
              + np.bincount(g.edge_targets, weights=vec_wl2, minlength=n)
    return coef * vec_sum / g.measure


def verify_adapted(g: WeightedGraph, lengths: Union[Lengths, PseudoMetric], convention: str) -> AdaptednessReport:
    """
    checks the intrinsic-metric inequality vertex by vertex. failure is reported, never raised.
    ok iff worst_ratio <= 1 + 1e-12.
    """
    vec_ratio = adaptedness_ratios(g, lengths, convention)
    worst_vertex = int(np.argmax(vec_ratio))
    worst_ratio = float(vec_ratio[worst_vertex])
    ok = worst_ratio <= 1.0 + ADAPTED_TOLERANCE
    if not ok:
        logger.info(f"metric is not adapted under the {convention} convention: "
                    f"ratio {worst_ratio:.6g} at vertex {worst_vertex}")
    return AdaptednessReport(ok=ok, worst_vertex=worst_vertex, worst_ratio=worst_ratio, convention=convention)


class JumpSize(object):
    """
    extremal edge lengths [delta_min, delta_max] over the edge set.
    """

    def __init__(self, delta_min: float, delta_max: float):
        if not (0.0 < delta_min <= delta_max):
            raise ParameterError(f"invalid jump size range: [{delta_min}, {delta_max}]")
        self.delta_min = float(delta_min)
        self.delta_max = float(delta_max)

    def refined_delta(self) -> float:
        """
        lower end of the range clipped to [0, 1]; meaningful once delta_max <= 1.
        """
        return float(min(max(self.delta_min, 0.0), 1.0))

    def to_dict(self) -> Dict[str, Any]:
        return {"delta_min": self.delta_min, "delta_max": self.delta_max}

    def __repr__(self):
        return f"JumpSize([{self.delta_min}, {self.delta_max}])"


def jump_size(g: WeightedGraph, lengths: Union[Lengths, PseudoMetric]) -> JumpSize:
    if g.n_edges == 0:
        raise ParameterError("jump size is undefined on a graph without edges.")
    vec_l = _as_lengths(g, lengths, strictly_positive=True)
    return JumpSize(delta_min=vec_l.min(), delta_max=vec_l.max())


def rescale(lengths: Lengths, t: float) -> np.ndarray:
    if not (t > 0.0 and np.isfinite(t)):
        raise ParameterError(f"scale factor must be positive and finite: {t}")
    return np.asarray(lengths, dtype=np.float64) * t


def normalize_jump(g: WeightedGraph, lengths: Union[Lengths, PseudoMetric]) -> Tuple[np.ndarray, float, JumpSize]:
    """
    brings the jump size into [delta, 1]: when delta_max > 1 the lengths are divided by delta_max.
    growth rates measured under the original lengths map as mu -> mu / t under the returned factor t.

    @return: (lengths, t, jump size of the returned lengths)
    """
    vec_l = _as_lengths(g, lengths, strictly_positive=True)
    jump = jump_size(g, vec_l)
    if jump.delta_max <= 1.0:
        return vec_l, 1.0, jump
    t = 1.0 / jump.delta_max
    vec_l = rescale(vec_l, t)
    # the maximum becomes exactly 1
    vec_l = np.minimum(vec_l, 1.0)
    logger.info(f"lengths rescaled by {t:.6g} so the jump size fits in [delta, 1]")
    return vec_l, t, jump_size(g, vec_l)
