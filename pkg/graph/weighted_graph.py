#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import absolute_import
from __future__ import unicode_literals
from __future__ import division
from __future__ import print_function

import io, os, json
from typing import Optional, Iterable, Tuple, List, Dict, Union, Sequence, Any
import logging
import numpy as np
import networkx as nx
from scipy import sparse
from scipy.sparse import csgraph

from .exceptions import DuplicateEdgeError, SelfLoopError, NonPositiveWeightError, NonPositiveMeasureError, \
    DanglingIndexError, DisconnectedGraphError, IsolatedVertexError, GraphFormatError

logger = logging.getLogger(__name__)

Edge = Tuple[int, int, float]


def _freeze(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class WeightedGraph(object):
    """
    finite weighted graph (X, b, m) over dense vertex indices 0..n-1.
    edges are stored once as (u, v, w) with u < v; b(u,v) = b(v,u) = w.
    instances are immutable after construction.
    """

    def __init__(self, n: int, vec_u: np.ndarray, vec_v: np.ndarray, vec_w: np.ndarray, measure: np.ndarray,
                 boundary: Optional[Iterable[int]] = None,
                 sphere_index: Optional[np.ndarray] = None,
                 allow_disconnected: bool = False,
                 description: str = ""):

        self._n = int(n)
        self._u = _freeze(np.asarray(vec_u, dtype=np.int64))
        self._v = _freeze(np.asarray(vec_v, dtype=np.int64))
        self._w = _freeze(np.asarray(vec_w, dtype=np.float64))
        self._measure = _freeze(np.asarray(measure, dtype=np.float64))
        boundary_mask = np.zeros(self._n, dtype=bool)
        if boundary is not None:
            boundary_mask[np.fromiter(boundary, dtype=np.int64)] = True
        self._boundary_mask = _freeze(boundary_mask)
        self._sphere_index = None if sphere_index is None else _freeze(np.asarray(sphere_index, dtype=np.int64))
        self._allow_disconnected = allow_disconnected
        self.description = description

        self._adjacency = None
        self._weighted_degree = None
        self._component_labels = None

        if not allow_disconnected and not self.is_connected():
            n_components = self.n_components
            raise DisconnectedGraphError(f"graph has {n_components} connected components; "
                                         f"enable per-component analysis to accept it.", n_components=n_components)

    @property
    def n_vertices(self) -> int:
        return self._n

    @property
    def n_edges(self) -> int:
        return self._u.size

    @property
    def edge_sources(self) -> np.ndarray:
        return self._u

    @property
    def edge_targets(self) -> np.ndarray:
        return self._v

    @property
    def edge_weights(self) -> np.ndarray:
        return self._w

    @property
    def measure(self) -> np.ndarray:
        return self._measure

    @property
    def boundary_mask(self) -> np.ndarray:
        return self._boundary_mask

    @property
    def boundary(self) -> List[int]:
        return np.flatnonzero(self._boundary_mask).tolist()

    @property
    def interior_mask(self) -> np.ndarray:
        return ~self._boundary_mask

    @property
    def sphere_index(self) -> Optional[np.ndarray]:
        return self._sphere_index

    @property
    def allow_disconnected(self) -> bool:
        return self._allow_disconnected

    def edges(self) -> List[Edge]:
        return [(int(u), int(v), float(w)) for u, v, w in zip(self._u, self._v, self._w)]

    @property
    def adjacency(self) -> sparse.csr_matrix:
        """
        symmetric CSR matrix of b. both orientations are materialized.
        """
        if self._adjacency is None:
            n = self._n
            rows = np.concatenate((self._u, self._v))
            cols = np.concatenate((self._v, self._u))
            data = np.concatenate((self._w, self._w))
            self._adjacency = sparse.csr_matrix((data, (rows, cols)), shape=(n, n))
        return self._adjacency

    def weighted_degree(self, x: Optional[int] = None) -> Union[float, np.ndarray]:
        """
        n(x) = \sum_y b(x,y). returns the whole vector if x is omitted.
        """
        if self._weighted_degree is None:
            vec_n = np.bincount(self._u, weights=self._w, minlength=self._n) \
                    + np.bincount(self._v, weights=self._w, minlength=self._n)
            self._weighted_degree = _freeze(vec_n)
        if x is None:
            return self._weighted_degree
        self._check_vertex(x)
        return float(self._weighted_degree[x])

    def generalized_degree(self, x: Optional[int] = None) -> Union[float, np.ndarray]:
        """
        Deg(x) = n(x)/m(x). isolated vertices are rejected since Deg^{-1/2} is undefined there.
        """
        vec_n = self.weighted_degree()
        if x is None:
            isolated = np.flatnonzero(vec_n <= 0.0)
            if isolated.size > 0:
                raise IsolatedVertexError(f"vertex {int(isolated[0])} is isolated (n(x)=0).", vertex=int(isolated[0]))
            return vec_n / self._measure
        self._check_vertex(x)
        if vec_n[x] <= 0.0:
            raise IsolatedVertexError(f"vertex {x} is isolated (n(x)=0).", vertex=int(x))
        return float(vec_n[x] / self._measure[x])

    def neighbors(self, x: int) -> np.ndarray:
        self._check_vertex(x)
        adj = self.adjacency
        return adj.indices[adj.indptr[x]:adj.indptr[x+1]]

    def _check_vertex(self, x: int):
        if not (0 <= int(x) < self._n):
            raise DanglingIndexError(f"vertex index out of range: {x} (n={self._n})", vertex=int(x))

    def _components(self):
        if self._component_labels is None:
            n_components, labels = csgraph.connected_components(self.adjacency, directed=False)
            self._component_labels = (n_components, _freeze(labels))
        return self._component_labels

    @property
    def n_components(self) -> int:
        return self._components()[0]

    @property
    def component_labels(self) -> np.ndarray:
        return self._components()[1]

    def is_connected(self) -> bool:
        if self._n <= 1:
            return True
        return self.n_components == 1

    def components(self) -> List[np.ndarray]:
        """
        vertex index arrays of the connected components, ordered by smallest member.
        """
        n_components, labels = self._components()
        lst_ret = [np.flatnonzero(labels == c) for c in range(n_components)]
        lst_ret.sort(key=lambda vertices: int(vertices[0]))
        return lst_ret

    def subgraph(self, vertices: Sequence[int], allow_disconnected: Optional[bool] = None) -> "WeightedGraph":
        """
        induced subgraph on `vertices`, relabeled in the given order.
        """
        vertices = np.asarray(vertices, dtype=np.int64)
        relabel = np.full(self._n, -1, dtype=np.int64)
        relabel[vertices] = np.arange(vertices.size)
        keep = (relabel[self._u] >= 0) & (relabel[self._v] >= 0)
        u, v = relabel[self._u[keep]], relabel[self._v[keep]]
        vec_u, vec_v = np.minimum(u, v), np.maximum(u, v)
        boundary = np.flatnonzero(self._boundary_mask[vertices])
        sphere_index = None if self._sphere_index is None else self._sphere_index[vertices]
        allow_disconnected = self._allow_disconnected if allow_disconnected is None else allow_disconnected
        return WeightedGraph(n=vertices.size, vec_u=vec_u, vec_v=vec_v, vec_w=self._w[keep],
                             measure=self._measure[vertices], boundary=boundary, sphere_index=sphere_index,
                             allow_disconnected=allow_disconnected, description=self.description)

    def with_measure(self, measure: np.ndarray, description: Optional[str] = None) -> "WeightedGraph":
        measure = np.asarray(measure, dtype=np.float64)
        _validate_measure(measure, self._n)
        return WeightedGraph(n=self._n, vec_u=self._u, vec_v=self._v, vec_w=self._w, measure=measure,
                             boundary=self.boundary, sphere_index=self._sphere_index,
                             allow_disconnected=self._allow_disconnected,
                             description=self.description if description is None else description)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        for x in range(self._n):
            graph.add_node(x, measure=float(self._measure[x]), boundary=bool(self._boundary_mask[x]))
        graph.add_weighted_edges_from(self.edges(), weight="weight")
        return graph

    @property
    def verbose(self) -> Dict[str, Any]:
        vec_n = self.weighted_degree()
        ret = {
            "description": self.description,
            "n_vertices": self._n,
            "n_edges": self.n_edges,
            "n_boundary": int(self._boundary_mask.sum()),
            "n_components": self.n_components,
            "measure_min": float(self._measure.min()) if self._n > 0 else None,
            "measure_max": float(self._measure.max()) if self._n > 0 else None,
            "weighted_degree_max": float(vec_n.max()) if self._n > 0 else None,
            "total_measure": float(self._measure.sum())
        }
        if self._sphere_index is not None and self._n > 0:
            ret["n_spheres"] = int(self._sphere_index.max()) + 1
        return ret

    def __len__(self):
        return self._n

    def __repr__(self):
        return f"WeightedGraph(n={self._n}, n_edges={self.n_edges}, description={self.description!r})"


def _validate_measure(measure: np.ndarray, n: int):
    if measure.shape != (n,):
        raise GraphFormatError(f"measure must have {n} entries, got {measure.size}.")
    bad = np.flatnonzero(~(np.isfinite(measure) & (measure > 0.0)))
    if bad.size > 0:
        x = int(bad[0])
        raise NonPositiveMeasureError(f"measure[{x}] = {measure[x]} must be positive and finite.", vertex=x)


def build_from_parts(n: int, edges: Iterable[Sequence[float]], measure: Sequence[float],
                     boundary: Optional[Iterable[int]] = None,
                     allow_disconnected: bool = False,
                     description: str = "") -> WeightedGraph:
    """
    validates raw parts and returns a WeightedGraph.
    edges may be given in either orientation; each unordered pair may appear only once.

    @param n: vertex count
    @param edges: iterable of (u, v, w)
    @param measure: per-vertex positive reals
    @param boundary: optional truncation boundary
    """
    n = int(n)
    if n < 1:
        raise GraphFormatError(f"vertex count must be positive: {n}")

    lst_edges = [tuple(edge) for edge in edges]
    for position, edge in enumerate(lst_edges):
        if len(edge) != 3:
            raise GraphFormatError(f"edges[{position}] must be (u, v, w): {edge}", position=position)

    measure = np.asarray(measure, dtype=np.float64)
    _validate_measure(measure, n)

    n_edges = len(lst_edges)
    vec_u = np.empty(n_edges, dtype=np.int64)
    vec_v = np.empty(n_edges, dtype=np.int64)
    vec_w = np.empty(n_edges, dtype=np.float64)
    set_pairs = set()
    for position, (u, v, w) in enumerate(lst_edges):
        if int(u) != u or int(v) != v:
            raise GraphFormatError(f"edges[{position}] has non-integer endpoints: {(u, v)}", position=position)
        u, v, w = int(u), int(v), float(w)
        for endpoint in (u, v):
            if not (0 <= endpoint < n):
                raise DanglingIndexError(f"edges[{position}] references vertex {endpoint} outside 0..{n-1}",
                                         position=position, vertex=endpoint)
        if u == v:
            raise SelfLoopError(f"edges[{position}] is a self-loop at vertex {u}", position=position, vertex=u)
        if not (np.isfinite(w) and w > 0.0):
            raise NonPositiveWeightError(f"edges[{position}] has non-positive weight {w}", position=position)
        pair = (min(u, v), max(u, v))
        if pair in set_pairs:
            raise DuplicateEdgeError(f"edges[{position}] duplicates edge {pair}", position=position)
        set_pairs.add(pair)
        vec_u[position], vec_v[position], vec_w[position] = pair[0], pair[1], w

    lst_boundary = None
    if boundary is not None:
        lst_boundary = [int(x) for x in boundary]
        for position, x in enumerate(lst_boundary):
            if not (0 <= x < n):
                raise DanglingIndexError(f"boundary[{position}] references vertex {x} outside 0..{n-1}",
                                         position=position, vertex=x)

    return WeightedGraph(n=n, vec_u=vec_u, vec_v=vec_v, vec_w=vec_w, measure=measure, boundary=lst_boundary,
                         allow_disconnected=allow_disconnected, description=description)


def from_networkx(graph: nx.Graph, weight: str = "weight", measure: str = "measure",
                  allow_disconnected: bool = False) -> WeightedGraph:
    """
    nodes are relabeled to 0..n-1 in iteration order. missing weights/measures default to 1.
    """
    nodes = list(graph.nodes)
    index = {node: idx for idx, node in enumerate(nodes)}
    vec_m = [graph.nodes[node].get(measure, 1.0) for node in nodes]
    boundary = [index[node] for node in nodes if graph.nodes[node].get("boundary", False)]
    edges = [(index[a], index[b], data.get(weight, 1.0)) for a, b, data in graph.edges(data=True)]
    return build_from_parts(len(nodes), edges, vec_m, boundary=boundary, allow_disconnected=allow_disconnected)


def weighted_degree(g: WeightedGraph, x: int) -> float:
    return g.weighted_degree(x)


def generalized_degree(g: WeightedGraph, x: int) -> float:
    return g.generalized_degree(x)


def read_graph(path: str, allow_disconnected: bool = False) -> WeightedGraph:
    """
    reads the JSON graph format: {"n": int, "measure": [float;n], "edges": [[u,v,w],...], "boundary": [int]}
    """
    if not os.path.exists(path):
        raise GraphFormatError(f"invalid path specified: {path}")
    with io.open(path, mode="r", encoding="utf-8") as ifs:
        try:
            obj = json.load(ifs)
        except json.JSONDecodeError as e:
            raise GraphFormatError(f"{path}: malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}")

    if not isinstance(obj, dict):
        raise GraphFormatError(f"{path}: top-level value must be an object.")
    for key in ("n", "measure", "edges"):
        if key not in obj:
            raise GraphFormatError(f"{path}: missing key `{key}`.")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise GraphFormatError(f"{path}: `n` must be an integer: {n!r}")
    if not isinstance(obj["measure"], list):
        raise GraphFormatError(f"{path}: `measure` must be a list.")

    edges = obj["edges"]
    if not isinstance(edges, list):
        raise GraphFormatError(f"{path}: `edges` must be a list.")
    for position, edge in enumerate(edges):
        if not (isinstance(edge, list) and len(edge) == 3):
            raise GraphFormatError(f"{path}: edges[{position}] must be [u, v, w]: {edge!r}", position=position)
        u, v, _ = edge
        if not (isinstance(u, int) and isinstance(v, int)):
            raise GraphFormatError(f"{path}: edges[{position}] endpoints must be integers: {edge!r}", position=position)
        if u > v:
            raise GraphFormatError(f"{path}: edges[{position}] must satisfy u < v: {edge!r}", position=position)

    return build_from_parts(n, edges, obj["measure"], boundary=obj.get("boundary", None),
                            allow_disconnected=allow_disconnected, description=obj.get("description", os.path.basename(path)))


def graph_to_dict(g: WeightedGraph) -> Dict[str, Any]:
    ret = {
        "n": g.n_vertices,
        "measure": g.measure.tolist(),
        "edges": [[u, v, w] for u, v, w in g.edges()]
    }
    if g.boundary_mask.any():
        ret["boundary"] = g.boundary
    if g.description:
        ret["description"] = g.description
    return ret


def write_graph(g: WeightedGraph, path: str):
    dir_name = os.path.dirname(os.path.abspath(path))
    os.makedirs(dir_name, exist_ok=True)
    with io.open(path, mode="w", encoding="utf-8") as ofs:
        json.dump(graph_to_dict(g), ofs)
        ofs.write("\n")
    logger.info(f"graph written: {path} (n={g.n_vertices}, n_edges={g.n_edges})")
