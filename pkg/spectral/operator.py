#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import absolute_import
from __future__ import unicode_literals
from __future__ import division
from __future__ import print_function

from typing import Sequence, Optional
import numpy as np
from scipy import sparse

from graph.weighted_graph import WeightedGraph
from graph.exceptions import ParameterError, DanglingIndexError


def energy(g: WeightedGraph, u: np.ndarray) -> float:
    """
    E(u) = 1/2 sum_{x,y} b(x,y)(u(x)-u(y))^2, i.e. one term per stored edge.
    """
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (g.n_vertices,):
        raise ParameterError(f"function must have {g.n_vertices} entries, got {u.size}")
    if not np.all(np.isfinite(u)):
        raise ParameterError("function values must be finite.")
    vec_diff = u[g.edge_sources] - u[g.edge_targets]
    return float(np.sum(g.edge_weights * vec_diff * vec_diff))


def norm_squared(g: WeightedGraph, u: np.ndarray) -> float:
    u = np.asarray(u, dtype=np.float64)
    return float(np.sum(u * u * g.measure))


def rayleigh(g: WeightedGraph, u: np.ndarray) -> float:
    denominator = norm_squared(g, u)
    if not (denominator > 0.0):
        raise ParameterError("rayleigh quotient is undefined for the zero function.")
    return energy(g, u) / denominator


class DirichletOperator(object):
    """
    (Lu)(x) = 1/m(x) sum_y b(x,y)(u(x)-u(y)) for x in the domain, with u = 0 outside the domain.
    the degree n(x) counts every edge of the host graph, including edges leaving the domain.
    vectors passed to apply() live on the domain, indexed in the order of `domain`.
    """

    def __init__(self, g: WeightedGraph, domain: Optional[Sequence[int]] = None):
        self._graph = g
        if domain is None:
            domain = np.arange(g.n_vertices)
        vec_domain = np.asarray(domain, dtype=np.int64).ravel()
        if vec_domain.size == 0:
            raise ParameterError("Dirichlet domain must be nonempty.")
        if vec_domain.min() < 0 or vec_domain.max() >= g.n_vertices:
            bad = int(vec_domain[(vec_domain < 0) | (vec_domain >= g.n_vertices)][0])
            raise DanglingIndexError(f"domain vertex out of range: {bad} (n={g.n_vertices})", vertex=bad)
        if np.unique(vec_domain).size != vec_domain.size:
            raise ParameterError("Dirichlet domain contains repeated vertices.")
        self._domain = vec_domain
        self._domain.setflags(write=False)

        self._degree = g.weighted_degree()[vec_domain]
        self._measure = g.measure[vec_domain]
        self._adjacency = g.adjacency[vec_domain][:, vec_domain].tocsr()
        self._symmetric = None

    @property
    def graph(self) -> WeightedGraph:
        return self._graph

    @property
    def domain(self) -> np.ndarray:
        return self._domain

    @property
    def size(self) -> int:
        return self._domain.size

    @property
    def measure(self) -> np.ndarray:
        return self._measure

    def stiffness(self) -> sparse.csr_matrix:
        """
        D - A restricted to the domain; u^T (D - A) u = E(u) for u supported in the domain.
        """
        return (sparse.diags(self._degree) - self._adjacency).tocsr()

    def symmetric_matrix(self) -> sparse.csr_matrix:
        """
        M^{-1/2} (D - A) M^{-1/2}: same spectrum as L, symmetric in the euclidean inner product.
        """
        if self._symmetric is None:
            scale = sparse.diags(1.0 / np.sqrt(self._measure))
            self._symmetric = (scale @ self.stiffness() @ scale).tocsr()
        return self._symmetric

    def apply(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=np.float64)
        return (self._degree * u - self._adjacency @ u) / self._measure

    def quadratic_form(self, u: np.ndarray) -> float:
        """
        <u, Lu>_m.
        """
        u = np.asarray(u, dtype=np.float64)
        return float(np.dot(u * self._measure, self.apply(u)))

    def extend(self, u: np.ndarray) -> np.ndarray:
        """
        zero extension of a domain vector to the host graph.
        """
        ret = np.zeros(self._graph.n_vertices, dtype=np.float64)
        ret[self._domain] = u
        return ret

    def restrict(self, u: np.ndarray) -> np.ndarray:
        return np.asarray(u, dtype=np.float64)[self._domain]

    def from_symmetric(self, v: np.ndarray) -> np.ndarray:
        """
        maps a euclidean-normalized eigenvector of the symmetric matrix to an m-normalized one of L.
        """
        return np.asarray(v, dtype=np.float64) / np.sqrt(self._measure)

    def residual_norm(self, u: np.ndarray, eigenvalue: float) -> float:
        """
        ||Lu - lambda u||_m / ||u||_m.
        """
        u = np.asarray(u, dtype=np.float64)
        vec_r = self.apply(u) - eigenvalue * u
        norm_u = np.sqrt(np.sum(u * u * self._measure))
        return float(np.sqrt(np.sum(vec_r * vec_r * self._measure)) / norm_u)

    def __repr__(self):
        return f"DirichletOperator(domain size={self.size}, host n={self._graph.n_vertices})"


def ball_domain(dist: np.ndarray, radius: float, inner_radius: Optional[float] = None) -> np.ndarray:
    """
    vertices with inner_radius < dist <= radius (the whole ball when inner_radius is None).
    """
    dist = np.asarray(dist, dtype=np.float64)
    mask = dist <= radius
    if inner_radius is not None:
        mask &= dist > inner_radius
    return np.flatnonzero(mask)

