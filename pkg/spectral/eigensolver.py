#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import absolute_import
from __future__ import unicode_literals
from __future__ import division
from __future__ import print_function

from typing import Optional, Sequence, List, Dict, Any
import logging
import numpy as np
from scipy import linalg, sparse
from scipy.sparse import linalg as sparse_linalg

from config_files import resource_limits
from graph.weighted_graph import WeightedGraph
from graph.exceptions import ParameterError, ResourceCapError, SolverNonConvergenceError
from .operator import DirichletOperator

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1E-10
# domains up to this size are solved densely
DENSE_SIZE = 16
# krylov subspace sizes tried in turn
_NCV_SCHEDULE = (20, 40, 80)
# ARPACK shift below the nonnegative spectrum
_SHIFT = -1.0


class EigenResult(object):

    def __init__(self, eigenvalue: float, residual: float, iterations: int, vector: np.ndarray, method: str,
                 trace: Optional[List[Dict[str, Any]]] = None):
        self.eigenvalue = eigenvalue
        self.residual = residual
        self.iterations = iterations
        self.vector = vector
        self.method = method
        self.trace = trace

    def __iter__(self):
        # unpacks as (eigenvalue, residual, iterations)
        yield self.eigenvalue
        yield self.residual
        yield self.iterations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "eigenvalue": self.eigenvalue,
            "residual": self.residual,
            "iterations": self.iterations,
            "method": self.method
        }

    def __repr__(self):
        return f"EigenResult(eigenvalue={self.eigenvalue}, residual={self.residual}, iterations={self.iterations})"


def _relative_residual(operator: DirichletOperator, u: np.ndarray, eigenvalue: float) -> float:
    return operator.residual_norm(u, eigenvalue) / max(abs(eigenvalue), 1.0)


def _positive_orientation(u: np.ndarray) -> np.ndarray:
    return -u if u.sum() < 0.0 else u


def dense_lowest(g: WeightedGraph, domain: Optional[Sequence[int]] = None,
                 max_size: int = resource_limits.MAX_VERTICES_DENSE) -> EigenResult:
    """
    smallest Dirichlet eigenvalue by a dense symmetric eigensolver. used as oracle and for tiny domains.
    """
    operator = DirichletOperator(g, domain)
    return _dense_lowest(operator, max_size=max_size)


def _dense_lowest(operator: DirichletOperator, max_size: int = resource_limits.MAX_VERTICES_DENSE) -> EigenResult:
    if operator.size > max_size:
        raise ResourceCapError(f"dense eigensolver refuses a domain of {operator.size} vertices; cap is {max_size}.",
                               n_vertices=operator.size, max_vertices=max_size)
    mat_s = operator.symmetric_matrix().toarray()
    vec_values, mat_vectors = linalg.eigh(mat_s, subset_by_index=[0, 0])
    eigenvalue = float(vec_values[0])
    u = _positive_orientation(operator.from_symmetric(mat_vectors[:, 0]))
    residual = _relative_residual(operator, u, eigenvalue)
    return EigenResult(eigenvalue=eigenvalue, residual=residual, iterations=1, vector=operator.extend(u),
                       method="dense")


class _CountingInverse(object):
    """
    solves (S - sigma I) x = b through one sparse LU factorization and counts the solves.
    """

    def __init__(self, mat_s, sigma: float):
        n = mat_s.shape[0]
        mat_shifted = (mat_s - sigma * sparse.identity(n, format="csr")).tocsc()
        self._lu = sparse_linalg.splu(mat_shifted)
        self.n_solves = 0
        self.operator = sparse_linalg.LinearOperator(shape=(n, n), matvec=self._solve, dtype=np.float64)

    def _solve(self, b: np.ndarray) -> np.ndarray:
        self.n_solves += 1
        return self._lu.solve(np.asarray(b, dtype=np.float64).ravel())


def dirichlet_lowest(g: WeightedGraph, domain: Optional[Sequence[int]] = None, tol: float = DEFAULT_TOL,
                     seed: int = 0, maxiter: Optional[int] = None, dense_size: int = DENSE_SIZE,
                     trace: bool = False) -> EigenResult:
    """
    smallest eigenvalue of the Dirichlet operator on `domain` by shift-inverted Lanczos (ARPACK) on the
    symmetrized sparse operator. the starting vector is drawn from a seeded generator, so results are
    reproducible. contract: relative residual ||Lu - lambda u||_m / max(|lambda|, 1) <= tol.

    @param trace: keep one record (attempt, ncv, iterations, eigenvalue, residual) per solver attempt
    @return: EigenResult; unpacks as (eigenvalue, residual, iterations)
    """
    if not (tol > 0.0):
        raise ParameterError(f"tolerance must be positive: {tol}")
    operator = DirichletOperator(g, domain)
    n = operator.size
    if n <= dense_size:
        ret = _dense_lowest(operator)
        if trace:
            ret.trace = [{"attempt": 0, "ncv": n, "iterations": 1, "eigenvalue": ret.eigenvalue,
                          "residual": ret.residual}]
        return ret

    mat_s = operator.symmetric_matrix()
    rng = np.random.default_rng(seed)
    v0 = rng.uniform(0.5, 1.5, size=n)
    inverse = _CountingInverse(mat_s, sigma=_SHIFT)

    lst_trace = []
    best = None
    for attempt, ncv in enumerate(_NCV_SCHEDULE):
        ncv = min(n, ncv)
        try:
            vec_values, mat_vectors = sparse_linalg.eigsh(mat_s, k=1, sigma=_SHIFT, which="LM", v0=v0, ncv=ncv,
                                                          maxiter=maxiter, tol=tol * 1E-2,
                                                          OPinv=inverse.operator)
            eigenvalue, vec_v = float(vec_values[0]), mat_vectors[:, 0]
        except sparse_linalg.ArpackNoConvergence as e:
            if len(e.eigenvalues) == 0:
                lst_trace.append({"attempt": attempt, "ncv": ncv, "iterations": inverse.n_solves,
                                  "eigenvalue": None, "residual": None})
                continue
            eigenvalue, vec_v = float(e.eigenvalues[0]), e.eigenvectors[:, 0]

        u = _positive_orientation(operator.from_symmetric(vec_v))
        residual = _relative_residual(operator, u, eigenvalue)
        lst_trace.append({"attempt": attempt, "ncv": ncv, "iterations": inverse.n_solves,
                          "eigenvalue": eigenvalue, "residual": residual})
        if best is None or residual < best[1]:
            best = (eigenvalue, residual, u)
        if residual <= tol:
            break
        logger.debug(f"attempt {attempt}: residual {residual:.3g} > tol {tol:.3g}; enlarging the krylov subspace")

    if best is None or best[1] > tol:
        if n <= resource_limits.MAX_VERTICES_DENSE:
            logger.info(f"iterative solver missed tol={tol} on {n} vertices; falling back to the dense solver")
            ret = _dense_lowest(operator)
            ret.iterations = inverse.n_solves
            ret.trace = lst_trace if trace else None
            return ret
        eigenvalue, residual = (None, None) if best is None else (best[0], best[1])
        raise SolverNonConvergenceError(f"smallest Dirichlet eigenvalue did not converge on {n} vertices "
                                        f"(best residual {residual}, tol {tol}).",
                                        eigenvalue=eigenvalue, residual=residual, iterations=inverse.n_solves)

    eigenvalue, residual, u = best
    return EigenResult(eigenvalue=eigenvalue, residual=residual, iterations=inverse.n_solves,
                       vector=operator.extend(u), method="lanczos-shift-invert", trace=lst_trace if trace else None)
