#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import absolute_import
from __future__ import unicode_literals
from __future__ import division
from __future__ import print_function

from typing import Tuple, Optional
import numpy as np

from .exceptions import ParameterError
from .weighted_graph import WeightedGraph


def random_connected_graph(n: int, edge_probability: float = 0.1, seed: Optional[int] = None,
                           weight_range: Tuple[float, float] = (1.0, 1.0),
                           measure_range: Tuple[float, float] = (1.0, 1.0)) -> WeightedGraph:
    """
    random spanning tree (each vertex k >= 1 attaches to a uniform earlier vertex under a random relabeling)
    plus independent extra edges with probability `edge_probability`. deterministic given `seed`.

    @param weight_range: edge weights are drawn uniformly from [low, high]
    @param measure_range: vertex measures are drawn uniformly from [low, high]
    """
    if n < 1:
        raise ParameterError(f"vertex count must be positive: {n}")
    if not (0.0 <= edge_probability <= 1.0):
        raise ParameterError(f"invalid edge probability: {edge_probability}")
    for name, (low, high) in (("weight_range", weight_range), ("measure_range", measure_range)):
        if not (0.0 < low <= high):
            raise ParameterError(f"invalid {name}: {(low, high)}")

    rng = np.random.default_rng(seed)
    permutation = rng.permutation(n)
    dict_pairs = {}
    for k in range(1, n):
        parent = int(rng.integers(0, k))
        a, b = int(permutation[k]), int(permutation[parent])
        dict_pairs[(min(a, b), max(a, b))] = None

    if n > 1 and edge_probability > 0.0:
        iu, ju = np.triu_indices(n, k=1)
        mask = rng.random(iu.size) < edge_probability
        for a, b in zip(iu[mask], ju[mask]):
            dict_pairs[(int(a), int(b))] = None

    lst_pairs = sorted(dict_pairs.keys())
    vec_u = np.array([pair[0] for pair in lst_pairs], dtype=np.int64)
    vec_v = np.array([pair[1] for pair in lst_pairs], dtype=np.int64)
    vec_w = rng.uniform(weight_range[0], weight_range[1], size=len(lst_pairs))
    measure = rng.uniform(measure_range[0], measure_range[1], size=n)

    return WeightedGraph(n=n, vec_u=vec_u, vec_v=vec_v, vec_w=vec_w, measure=measure,
                         description=f"random connected graph (n={n}, p={edge_probability}, seed={seed})")
