#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import absolute_import
from __future__ import unicode_literals
from __future__ import division
from __future__ import print_function

from typing import Optional, Sequence, List, Dict, Any, Tuple
from concurrent.futures import ThreadPoolExecutor
import logging
import warnings
import numpy as np

from graph.weighted_graph import WeightedGraph
from graph.families import SphericallySymmetricFamily, truncate, radial_quotient
from graph.exceptions import ParameterError, NumericalCaveatWarning
from metric.pseudo_metric import PseudoMetric
from .operator import DirichletOperator, rayleigh
from .eigensolver import dirichlet_lowest, DEFAULT_TOL
from .cutoff import cutoff_pair, admissible_radius, candidate_pairs, MAX_EXPONENT

logger = logging.getLogger(__name__)

EXHAUSTION_MODES = ("auto", "full", "radial")
# auto mode materializes truncations up to these sizes and uses the radial quotient beyond
AUTO_FULL_MAX_VERTICES = 200_000
AUTO_FULL_MAX_EDGES = 2_000_000
# domain monotonicity is checked up to this slack on top of the solver tolerance
_MONOTONE_SLACK = 1E-9


def _map(function, lst_args: list, n_jobs: int) -> list:
    """
    order-preserving map, threaded when n_jobs > 1.
    """
    if n_jobs <= 1 or len(lst_args) <= 1:
        return [function(arg) for arg in lst_args]
    with ThreadPoolExecutor(max_workers=n_jobs) as executor:
        return list(executor.map(function, lst_args))


class VariationalResult(object):

    def __init__(self, rayleigh: float, alpha: float, r: float, n_evaluated: int, n_excluded: int):
        self.rayleigh = rayleigh
        self.alpha = alpha
        self.r = r
        self.n_evaluated = n_evaluated
        self.n_excluded = n_excluded

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rayleigh": self.rayleigh,
            "alpha": self.alpha,
            "r": self.r,
            "n_evaluated": self.n_evaluated,
            "n_excluded": self.n_excluded
        }

    def __repr__(self):
        return f"VariationalResult(rayleigh={self.rayleigh}, alpha={self.alpha}, r={self.r})"


def variational_bound(g: WeightedGraph, metric: PseudoMetric, alpha_grid: Sequence[float],
                      r_grid: Sequence[float], n_jobs: int = 1) -> VariationalResult:
    """
    minimum Rayleigh quotient of f_{r, x0, alpha} over the grid. pairs whose B_2r reaches the truncation
    boundary layer, or with alpha * r above the overflow cap, are excluded with a warning.
    """
    if len(alpha_grid) == 0 or len(r_grid) == 0:
        raise ParameterError("alpha and radius grids must be nonempty.")
    r_admissible = admissible_radius(g, metric)
    lst_pairs, n_excluded = [], 0
    for alpha, r in candidate_pairs(alpha_grid, r_grid):
        if r <= 0.0 or alpha <= 0.0 or r > r_admissible + 1E-12 or alpha * r > MAX_EXPONENT:
            n_excluded += 1
            continue
        lst_pairs.append((alpha, r))
    if n_excluded > 0:
        warnings.warn(f"{n_excluded} test-function pairs excluded (support reaches the truncation boundary, "
                      f"or alpha*r > {MAX_EXPONENT}); admissible radius {r_admissible:.6g}", NumericalCaveatWarning)

    def _evaluate(alpha_r: Tuple[float, float]) -> Optional[float]:
        alpha, r = alpha_r
        pair = cutoff_pair(metric, r, alpha)
        if not np.any(pair.f != 0.0):
            return None
        return rayleigh(g, pair.f)

    lst_values = _map(_evaluate, lst_pairs, n_jobs)
    lst_valid = [(value, alpha_r) for value, alpha_r in zip(lst_values, lst_pairs) if value is not None]
    if len(lst_valid) == 0:
        raise ParameterError("all test-function candidates are degenerate or excluded.",
                             n_excluded=n_excluded, admissible_radius=r_admissible)
    # first minimum in grid order
    best_value, (best_alpha, best_r) = min(lst_valid, key=lambda item: item[0])
    return VariationalResult(rayleigh=best_value, alpha=best_alpha, r=best_r, n_evaluated=len(lst_valid),
                             n_excluded=n_excluded + len(lst_pairs) - len(lst_valid))


def default_alpha_grid(mu_hat: float, n_points: int = 12, width: float = 2.0) -> np.ndarray:
    """
    n_points values spanning (max(mu/2, 1e-3), mu/2 + width].
    """
    low = max(mu_hat / 2.0, 1E-3)
    high = mu_hat / 2.0 + width
    return np.linspace(low, high, n_points + 1)[1:]


def _choose_mode(family: SphericallySymmetricFamily, R: int, mode: str) -> str:
    if mode not in EXHAUSTION_MODES:
        raise ParameterError(f"unsupported exhaustion mode: {mode}")
    if mode != "auto":
        return mode
    if family.n_vertices(R) <= AUTO_FULL_MAX_VERTICES and family.n_edges(R) <= AUTO_FULL_MAX_EDGES:
        return "full"
    return "radial"


def _family_domain_lowest(family: SphericallySymmetricFamily, r_in: Optional[int], r_out: int, tol: float,
                          mode: str, seed: int) -> Dict[str, Any]:
    """
    Dirichlet ground energy on spheres r_in+1..r_out (all of B_{r_out} when r_in is None), with the host
    truncated one sphere further so that the edges to sphere r_out+1 count in the degree.
    """
    mode = _choose_mode(family, r_out + 1, mode)
    r_lo = -1 if r_in is None else r_in
    if mode == "full":
        host = truncate(family, r_out + 1)
        sphere_index = host.sphere_index
    else:
        host = radial_quotient(family, r_out)
        sphere_index = host.sphere_index
    domain = np.flatnonzero((sphere_index > r_lo) & (sphere_index <= r_out))
    result = dirichlet_lowest(host, domain, tol=tol, seed=seed)
    return {"eigenvalue": result.eigenvalue, "residual": result.residual, "iterations": result.iterations,
            "mode": mode, "domain_size": int(domain.size)}


def lambda0_exhaustion(family: SphericallySymmetricFamily, radii: Sequence[int], tol: float = DEFAULT_TOL,
                       mode: str = "auto", seed: int = 0, n_jobs: int = 1) -> List[Dict[str, Any]]:
    """
    lambda_0(B_R) for each R: nonincreasing upper bounds of lambda_0(L).
    `radial` solves on the radial quotient, which has the same ground energy on spherically symmetric families.
    """
    lst_radii = [int(R) for R in radii]
    if len(lst_radii) == 0:
        raise ParameterError("radii must be nonempty.")
    if any(R < 0 for R in lst_radii) or any(b <= a for a, b in zip(lst_radii, lst_radii[1:])):
        raise ParameterError(f"radii must be nonnegative and strictly increasing: {lst_radii}")

    lst_results = _map(lambda R: _family_domain_lowest(family, None, R, tol, mode, seed), lst_radii, n_jobs)
    lst_ret = []
    for R, result in zip(lst_radii, lst_results):
        result["R"] = R
        lst_ret.append(result)
        logger.info(f"lambda_0(B_{R}) = {result['eigenvalue']:.10g} ({result['mode']}, residual {result['residual']:.2g})")
    _warn_if_increasing(lst_ret, tol, label="exhaustion")
    return lst_ret


def _warn_if_increasing(lst_rows: List[Dict[str, Any]], tol: float, label: str):
    for previous, current in zip(lst_rows, lst_rows[1:]):
        if current["eigenvalue"] > previous["eigenvalue"] + tol + _MONOTONE_SLACK:
            warnings.warn(f"{label} values increase: {previous['eigenvalue']} -> {current['eigenvalue']}",
                          NumericalCaveatWarning)


def lambda_ess_bracket(family: SphericallySymmetricFamily, R_in: Sequence[int], R_out: int,
                       tol: float = DEFAULT_TOL, mode: str = "auto", seed: int = 0,
                       n_jobs: int = 1) -> List[Dict[str, Any]]:
    """
    Dirichlet ground energies of the annuli B_{R_out} minus B_{R_in}. these are finite-R_out surrogates
    (brackets) for the exterior ground energy, not certified bounds on lambda_0^ess.
    """
    lst_r_in = [int(r) for r in R_in]
    for r_in in lst_r_in:
        if not (0 <= r_in < R_out):
            raise ParameterError(f"empty annulus: R_in={r_in}, R_out={R_out}", R_in=r_in, R_out=R_out)
    lst_results = _map(lambda r_in: _family_domain_lowest(family, r_in, R_out, tol, mode, seed), lst_r_in, n_jobs)
    lst_ret = []
    for r_in, result in zip(lst_r_in, lst_results):
        result["R_in"] = r_in
        result["R_out"] = R_out
        lst_ret.append(result)
    warnings.warn("annulus ground energies are brackets for lambda_0^ess at finite R_out, not bounds",
                  NumericalCaveatWarning)
    return lst_ret


def graph_exhaustion(g: WeightedGraph, metric: PseudoMetric, radii: Sequence[float], tol: float = DEFAULT_TOL,
                     seed: int = 0, n_jobs: int = 1) -> List[Dict[str, Any]]:
    """
    lambda_0 of the Dirichlet restriction to metric balls B_R of an arbitrary graph.
    once the ball covers a graph without boundary the value is the exact lambda_0 = 0.
    """
    lst_radii = sorted(float(R) for R in radii)

    def _solve(R: float) -> Dict[str, Any]:
        domain = np.flatnonzero(metric.dist <= R)
        result = dirichlet_lowest(g, domain, tol=tol, seed=seed)
        return {"R": R, "eigenvalue": result.eigenvalue, "residual": result.residual,
                "iterations": result.iterations, "mode": "full", "domain_size": int(domain.size)}

    lst_ret = _map(_solve, lst_radii, n_jobs)
    _warn_if_increasing(lst_ret, tol, label="exhaustion")
    return lst_ret


def supersolution_check(g: WeightedGraph, phi: np.ndarray, lam: float,
                        skip: Optional[Sequence[int]] = None, tol: float = 1E-12) -> Dict[str, Any]:
    """
    (L phi)(x) >= lam phi(x) for every x outside `skip` (default: the truncation boundary).
    reports the minimum of (L phi - lam phi)/phi over the checked vertices.
    """
    phi = np.asarray(phi, dtype=np.float64)
    if phi.shape != (g.n_vertices,):
        raise ParameterError(f"phi must have {g.n_vertices} entries, got {phi.size}")
    mask = np.ones(g.n_vertices, dtype=bool)
    if skip is None:
        mask &= g.interior_mask
    else:
        mask[np.asarray(list(skip), dtype=np.int64)] = False
    checked = np.flatnonzero(mask)
    if checked.size == 0:
        raise ParameterError("no vertex left to check after skipping.")
    bad = checked[~(phi[checked] > 0.0)]
    if bad.size > 0:
        raise ParameterError(f"phi must be positive on checked vertices; phi[{int(bad[0])}] = {phi[bad[0]]}",
                             vertex=int(bad[0]))

    vec_l_phi = (g.weighted_degree() * phi - g.adjacency @ phi) / g.measure
    vec_residual = vec_l_phi[checked] - lam * phi[checked]
    vec_relative = vec_residual / phi[checked]
    idx = int(np.argmin(vec_relative))
    return {
        "ok": bool(np.min(vec_residual) >= -tol),
        "lambda": lam,
        "min_residual": float(vec_relative[idx]),
        "worst_vertex": int(checked[idx]),
        "max_abs_residual": float(np.max(np.abs(vec_residual))),
        "n_checked": int(checked.size)
    }


def antitree_supersolution(g: WeightedGraph) -> np.ndarray:
    """
    phi = (k+1)^{-2} on sphere k, the positive supersolution of the cubic antitree.
    """
    if g.sphere_index is None:
        raise ParameterError("graph carries no sphere index.")
    return 1.0 / (g.sphere_index.astype(np.float64) + 1.0) ** 2


def degree_comparison(g: WeightedGraph, domain: Optional[Sequence[int]] = None, tol: float = DEFAULT_TOL,
                      seed: int = 0) -> Dict[str, Any]:
    """
    Dirichlet ground energies of the unit-measure operator (m = 1) and the degree-normalized operator (m = n)
    on the same domain. their ratio lies in [min n, max n] over the domain.
    """
    operator = DirichletOperator(g, domain)
    vec_n = g.weighted_degree()
    graph_unit = g.with_measure(np.ones(g.n_vertices))
    graph_normalized = g.with_measure(vec_n)
    lambda_unit = dirichlet_lowest(graph_unit, operator.domain, tol=tol, seed=seed).eigenvalue
    lambda_normalized = dirichlet_lowest(graph_normalized, operator.domain, tol=tol, seed=seed).eigenvalue
    k_min, k_max = float(vec_n[operator.domain].min()), float(vec_n[operator.domain].max())
    slack = tol * max(1.0, lambda_unit)
    ok = (k_min * lambda_normalized <= lambda_unit + slack) and (lambda_unit <= k_max * lambda_normalized + slack)
    return {
        "lambda_unit": lambda_unit,
        "lambda_normalized": lambda_normalized,
        "degree_min": k_min,
        "degree_max": k_max,
        "ok": bool(ok)
    }


class SpectralReport(object):

    def __init__(self):
        self.variational = None
        self.exhaustion = []
        self.annulus = []
        self.supersolution = None
        self.degree_comparison = None
        self.bounds = None
        self.flags = {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "variational": None if self.variational is None else self.variational.to_dict(),
            "exhaustion": self.exhaustion,
            "annulus": self.annulus,
            "supersolution": self.supersolution,
            "degree_comparison": self.degree_comparison,
            "bounds": self.bounds,
            "flags": self.flags
        }

    def __repr__(self):
        return f"SpectralReport(n_exhaustion={len(self.exhaustion)}, n_annulus={len(self.annulus)})"
