#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import absolute_import
from __future__ import unicode_literals
from __future__ import division
from __future__ import print_function

from typing import Optional, Union, Sequence, Dict, Any
import logging
import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from config_files import resource_limits
from graph.weighted_graph import WeightedGraph
from graph.exceptions import ParameterError, DanglingIndexError, ResourceCapError

logger = logging.getLogger(__name__)

Lengths = Union[np.ndarray, Sequence[float]]

EDGE_LENGTH_RULES = ("natural", "huang", "custom")
CONVENTIONS = ("half", "full")


class PseudoMetric(object):
    """
    distances from a root under a per-edge length rule.
    `lengths` is aligned with the graph's edge arrays; `dist` may hold np.inf on unreachable components.
    """

    def __init__(self, root: int, dist: np.ndarray, lengths: np.ndarray, edge_length_rule: str, convention: str):
        if edge_length_rule not in EDGE_LENGTH_RULES:
            raise ParameterError(f"unsupported edge length rule: {edge_length_rule}")
        if convention not in CONVENTIONS:
            raise ParameterError(f"unsupported convention: {convention}; use one of {', '.join(CONVENTIONS)}")
        self._root = int(root)
        self._dist = np.asarray(dist, dtype=np.float64)
        self._dist.setflags(write=False)
        self._lengths = np.asarray(lengths, dtype=np.float64)
        self._lengths.setflags(write=False)
        self._edge_length_rule = edge_length_rule
        self._convention = convention

    @property
    def root(self) -> int:
        return self._root

    @property
    def dist(self) -> np.ndarray:
        return self._dist

    @property
    def lengths(self) -> np.ndarray:
        return self._lengths

    @property
    def edge_length_rule(self) -> str:
        return self._edge_length_rule

    @property
    def convention(self) -> str:
        return self._convention

    @property
    def metric_id(self) -> str:
        return f"{self._edge_length_rule}@{self._root}"

    @property
    def n_vertices(self) -> int:
        return self._dist.size

    @property
    def finite_max(self) -> float:
        vec_finite = self._dist[np.isfinite(self._dist)]
        return float(vec_finite.max()) if vec_finite.size > 0 else 0.0

    def scaled(self, t: float) -> "PseudoMetric":
        """
        metric t*rho. distances scale exactly since shortest paths are homogeneous in the lengths.
        """
        if not (t > 0.0):
            raise ParameterError(f"scale factor must be positive: {t}")
        return PseudoMetric(root=self._root, dist=self._dist * t, lengths=self._lengths * t,
                            edge_length_rule="custom" if t != 1.0 else self._edge_length_rule,
                            convention=self._convention)

    def ball(self, r: float) -> np.ndarray:
        return np.flatnonzero(self._dist <= r)

    @property
    def verbose(self) -> Dict[str, Any]:
        return {
            "root": self._root,
            "edge_length_rule": self._edge_length_rule,
            "convention": self._convention,
            "dist_max_finite": self.finite_max,
            "n_unreachable": int(np.sum(~np.isfinite(self._dist)))
        }

    def __repr__(self):
        return f"PseudoMetric(root={self._root}, rule={self._edge_length_rule}, convention={self._convention})"


def _check_root(g: WeightedGraph, root: int):
    if not (0 <= int(root) < g.n_vertices):
        raise DanglingIndexError(f"root vertex out of range: {root} (n={g.n_vertices})", vertex=int(root))


def _check_lengths(g: WeightedGraph, lengths: Lengths, strictly_positive: bool = True) -> np.ndarray:
    vec_l = np.asarray(lengths, dtype=np.float64)
    if vec_l.shape != (g.n_edges,):
        raise ParameterError(f"lengths must have one entry per edge: expected {g.n_edges}, got {vec_l.size}")
    if strictly_positive:
        bad = np.flatnonzero(~(np.isfinite(vec_l) & (vec_l > 0.0)))
    else:
        bad = np.flatnonzero(~(np.isfinite(vec_l) & (vec_l >= 0.0)))
    if bad.size > 0:
        e = int(bad[0])
        raise ParameterError(f"invalid length {vec_l[e]} on edge {e} "
                             f"({int(g.edge_sources[e])}, {int(g.edge_targets[e])})", position=e)
    return vec_l


def length_matrix(g: WeightedGraph, lengths: Lengths) -> sparse.csr_matrix:
    """
    upper-triangular CSR of edge lengths; csgraph routines read it as undirected.
    """
    vec_l = _check_lengths(g, lengths)
    n = g.n_vertices
    return sparse.csr_matrix((vec_l, (g.edge_sources, g.edge_targets)), shape=(n, n))


def natural_distance(g: WeightedGraph, root: int, convention: str = "half") -> PseudoMetric:
    """
    hop distances via breadth-first search; unreachable vertices get np.inf.
    """
    _check_root(g, root)
    dist = csgraph.shortest_path(g.adjacency, method="D", directed=False, unweighted=True, indices=int(root))
    return PseudoMetric(root=root, dist=dist, lengths=np.ones(g.n_edges), edge_length_rule="natural",
                        convention=convention)


def huang_lengths(g: WeightedGraph) -> np.ndarray:
    """
    per-edge length min{Deg(x)^{-1/2}, Deg(y)^{-1/2}} with Deg = n/m.
    """
    vec_deg = g.generalized_degree()
    vec_deg_max = np.maximum(vec_deg[g.edge_sources], vec_deg[g.edge_targets])
    return 1.0 / np.sqrt(vec_deg_max)


def path_metric(g: WeightedGraph, lengths: Lengths, root: int,
                edge_length_rule: str = "custom", convention: str = "half") -> PseudoMetric:
    """
    single-source shortest paths over the given positive per-edge lengths (Dijkstra).
    """
    _check_root(g, root)
    vec_l = _check_lengths(g, lengths)
    dist = csgraph.dijkstra(length_matrix(g, vec_l), directed=False, indices=int(root))
    return PseudoMetric(root=root, dist=dist, lengths=vec_l, edge_length_rule=edge_length_rule,
                        convention=convention)


def huang_metric(g: WeightedGraph, root: int) -> PseudoMetric:
    return path_metric(g, huang_lengths(g), root=root, edge_length_rule="huang", convention="full")


def build_metric(g: WeightedGraph, rule: str, root: int = 0, lengths: Optional[Lengths] = None,
                 convention: Optional[str] = None) -> PseudoMetric:
    if rule == "natural":
        return natural_distance(g, root=root, convention="half" if convention is None else convention)
    elif rule == "huang":
        metric = huang_metric(g, root=root)
        if convention is not None and convention != metric.convention:
            logger.warning(f"huang metric is recorded under the full convention; ignoring convention={convention}")
        return metric
    elif rule == "custom":
        if lengths is None:
            raise ParameterError("custom metric requires per-edge lengths.")
        return path_metric(g, lengths, root=root, edge_length_rule="custom",
                           convention="half" if convention is None else convention)
    else:
        raise ParameterError(f"unsupported edge length rule: {rule}")


def distances_from_roots(g: WeightedGraph, lengths: Lengths, roots: Sequence[int]) -> np.ndarray:
    """
    rows of shortest-path distances, one per root, in the given order.
    """
    for root in roots:
        _check_root(g, root)
    mat_l = length_matrix(g, lengths)
    mat_dist = csgraph.dijkstra(mat_l, directed=False, indices=np.asarray(roots, dtype=np.int64))
    return np.atleast_2d(mat_dist)


def all_pairs_distance(g: WeightedGraph, lengths: Lengths,
                       max_vertices: int = resource_limits.MAX_VERTICES_ALL_PAIRS) -> np.ndarray:
    """
    dense (n, n) shortest-path matrix. guarded since the output is quadratic in n.
    """
    if g.n_vertices > max_vertices:
        raise ResourceCapError(f"all-pairs distances need a dense {g.n_vertices}x{g.n_vertices} matrix; "
                               f"cap is {max_vertices} vertices.", n_vertices=g.n_vertices, max_vertices=max_vertices)
    mat_l = length_matrix(g, lengths)
    return csgraph.shortest_path(mat_l, method="D", directed=False)
