#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import absolute_import
from __future__ import unicode_literals
from __future__ import division
from __future__ import print_function

import numpy as np
import networkx as nx
from scipy import linalg


def dense_laplacian(g):
    """
    dense matrix of (Lu)(x) = 1/m(x) sum_y b(x,y)(u(x)-u(y)) over all vertices of g.
    """
    n = g.n_vertices
    mat_b = np.zeros((n, n))
    for u, v, w in g.edges():
        mat_b[u, v] = w
        mat_b[v, u] = w
    mat_l = np.diag(mat_b.sum(axis=1)) - mat_b
    return mat_l / g.measure[:, None]


def dirichlet_eigenvalues(g, domain):
    """
    all Dirichlet eigenvalues on `domain`, ascending, through the generalized symmetric problem (D-A) u = lambda M u.
    """
    domain = np.asarray(domain)
    n = g.n_vertices
    mat_b = np.zeros((n, n))
    for u, v, w in g.edges():
        mat_b[u, v] = w
        mat_b[v, u] = w
    mat_k = np.diag(mat_b.sum(axis=1)) - mat_b
    mat_k = mat_k[np.ix_(domain, domain)]
    mat_m = np.diag(g.measure[domain])
    return linalg.eigh(mat_k, mat_m, eigvals_only=True)


def bfs_distance(g, root):
    graph = g.to_networkx()
    dict_dist = nx.single_source_shortest_path_length(graph, root)
    return np.array([dict_dist.get(x, np.inf) for x in range(g.n_vertices)], dtype=np.float64)


def dijkstra_distance(g, lengths, root):
    graph = nx.Graph()
    graph.add_nodes_from(range(g.n_vertices))
    for (u, v, _), length in zip(g.edges(), lengths):
        graph.add_edge(u, v, length=float(length))
    dict_dist = nx.single_source_dijkstra_path_length(graph, root, weight="length")
    return np.array([dict_dist.get(x, np.inf) for x in range(g.n_vertices)], dtype=np.float64)


def brute_force_ball(vec_dist, measure, r):
    count, volume = 0, 0.0
    for d, m in zip(vec_dist, measure):
        if d <= r:
            count += 1
            volume += m
    return count, volume


def path_dirichlet_eigenvalue(n):
    """
    lowest Dirichlet eigenvalue of the unit path on n interior vertices.
    """
    return 2.0 - 2.0 * np.cos(np.pi / (n + 1))
