#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import absolute_import
from __future__ import unicode_literals
from __future__ import division
from __future__ import print_function

from typing import Optional, Sequence, List, Dict, Any, Tuple
import logging
import numpy as np

from graph.weighted_graph import WeightedGraph
from graph.exceptions import ParameterError
from metric.pseudo_metric import PseudoMetric, all_pairs_distance
from metric.adaptedness import AdaptednessReport, verify_adapted, jump_size
from .operator import energy, norm_squared

logger = logging.getLogger(__name__)

# exp(700) is close to the largest finite double
MAX_EXPONENT = 700.0
SLACK_TOLERANCE = 1E-12


def lipschitz_constant(alpha: float) -> float:
    return alpha * alpha / 2.0


def refined_lipschitz_constant(alpha: float, rho: np.ndarray) -> np.ndarray:
    """
    (e^alpha - 1)^2 / (rho^2 e^{2 alpha} + 1), valid for rho <= 1.
    """
    rho = np.asarray(rho, dtype=np.float64)
    return np.expm1(alpha) ** 2 / (rho * rho * np.exp(2.0 * alpha) + 1.0)


def relative_slack(lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    return (rhs - lhs) / np.maximum(1.0, rhs)


class CutoffPair(object):
    """
    f = e^{alpha r} - 1 on B_r, e^{alpha (2r - rho)} - 1 on B_2r minus B_r, 0 outside B_2r; g = (f + 2) 1_{B_2r}.
    """
    def __init__(self, r: float, root: int, alpha: float, f: np.ndarray, g: np.ndarray):
        self.r = r
        self.root = root
        self.alpha = alpha
        self.f = f
        self.g = g

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.f != 0.0)

    def __repr__(self):
        return f"CutoffPair(r={self.r}, alpha={self.alpha}, root={self.root})"


def cutoff_pair(metric: PseudoMetric, r: float, alpha: float) -> CutoffPair:
    if not (r > 0.0):
        raise ParameterError(f"radius must be positive: {r}")
    if not (alpha > 0.0):
        raise ParameterError(f"alpha must be positive: {alpha}")
    if alpha * r > MAX_EXPONENT:
        raise ParameterError(f"alpha * r = {alpha * r:.6g} exceeds {MAX_EXPONENT}; rescale the metric or lower alpha.",
                             alpha=alpha, r=r)
    dist = metric.dist
    vec_f = np.zeros(dist.size, dtype=np.float64)
    inner = dist <= r
    outer = (dist > r) & (dist <= 2.0 * r)
    vec_f[inner] = np.expm1(alpha * r)
    vec_f[outer] = np.expm1(alpha * (2.0 * r - dist[outer]))
    vec_g = np.where(dist <= 2.0 * r, vec_f + 2.0, 0.0)
    return CutoffPair(r=r, root=metric.root, alpha=alpha, f=vec_f, g=vec_g)


class CheckReport(object):

    def __init__(self, name: str, ok: bool, worst_slack: float, **details):
        self.name = name
        self.ok = ok
        self.worst_slack = worst_slack
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        ret = {"check": self.name, "ok": self.ok, "worst_slack": self.worst_slack}
        ret.update(self.details)
        return ret

    def __repr__(self):
        return f"CheckReport({self.to_dict()})"


def lipschitz_check(g: WeightedGraph, metric: PseudoMetric, pair: CutoffPair, all_pairs: bool = False,
                    refined: bool = True, lengths: Optional[np.ndarray] = None) -> CheckReport:
    """
    (f(x)-f(y))^2 <= c (g(x)^2 + g(y)^2) rho(x,y)^2 with c = alpha^2/2, and with the refined constant
    c(alpha, rho) where rho(x,y) <= 1. edge mode takes rho as the edge length, all-pairs mode as the
    shortest-path distance. slack is relative: (rhs - lhs) / max(1, rhs).
    """
    if metric.n_vertices != g.n_vertices or pair.f.size != g.n_vertices:
        raise ParameterError("metric, pair and graph must share the vertex set.")
    vec_l = metric.lengths if lengths is None else np.asarray(lengths, dtype=np.float64)
    if all_pairs:
        mat_dist = all_pairs_distance(g, vec_l)
        vec_x, vec_y = np.triu_indices(g.n_vertices, k=1)
        vec_rho = mat_dist[vec_x, vec_y]
        finite = np.isfinite(vec_rho)
        vec_x, vec_y, vec_rho = vec_x[finite], vec_y[finite], vec_rho[finite]
    else:
        vec_x, vec_y, vec_rho = g.edge_sources, g.edge_targets, vec_l

    vec_lhs = (pair.f[vec_x] - pair.f[vec_y]) ** 2
    vec_g2 = pair.g[vec_x] ** 2 + pair.g[vec_y] ** 2
    vec_rhs = lipschitz_constant(pair.alpha) * vec_g2 * vec_rho ** 2
    vec_slack = relative_slack(vec_lhs, vec_rhs)
    idx = int(np.argmin(vec_slack)) if vec_slack.size > 0 else None
    worst_slack = float(vec_slack[idx]) if idx is not None else np.inf

    worst_refined = np.inf
    if refined:
        near = vec_rho <= 1.0
        if near.any():
            vec_rhs_refined = refined_lipschitz_constant(pair.alpha, vec_rho[near]) * vec_g2[near] * vec_rho[near] ** 2
            worst_refined = float(np.min(relative_slack(vec_lhs[near], vec_rhs_refined)))

    ok = min(worst_slack, worst_refined) >= -SLACK_TOLERANCE
    worst_pair = None if idx is None else [int(vec_x[idx]), int(vec_y[idx])]
    return CheckReport(name="lipschitz", ok=bool(ok), worst_slack=worst_slack, worst_pair=worst_pair,
                       worst_slack_refined=worst_refined, mode="all_pairs" if all_pairs else "edges",
                       n_pairs=int(vec_lhs.size))


def energy_bound_check(g: WeightedGraph, metric: PseudoMetric, pair: CutoffPair,
                       adaptedness: Optional[AdaptednessReport] = None,
                       delta: Optional[float] = None) -> CheckReport:
    """
    E(f) <= alpha^2 ||g||^2 under the half convention, halved under the full convention. with jump size
    in [delta, 1] also E(f) <= 2 c(alpha, delta) ||g||^2 (halved likewise).
    """
    adaptedness = verify_adapted(g, metric.lengths, metric.convention) if adaptedness is None else adaptedness
    if not adaptedness.ok:
        raise ParameterError(f"energy bound requires an adapted metric; worst ratio {adaptedness.worst_ratio:.6g} "
                             f"at vertex {adaptedness.worst_vertex} under the {adaptedness.convention} convention.",
                             stage="energy_bound")
    halving = 0.5 if adaptedness.convention == "full" else 1.0
    value = energy(g, pair.f)
    norm_g = norm_squared(g, pair.g)
    bound = halving * 2.0 * lipschitz_constant(pair.alpha) * norm_g
    slack = float(relative_slack(value, bound))

    if delta is None and g.n_edges > 0:
        jump = jump_size(g, metric.lengths)
        if jump.delta_max <= 1.0:
            delta = jump.refined_delta()
    refined_bound, refined_slack = None, None
    if delta is not None:
        if not (0.0 <= delta <= 1.0):
            raise ParameterError(f"delta must lie in [0, 1]: {delta}")
        refined_bound = halving * 2.0 * float(refined_lipschitz_constant(pair.alpha, delta)) * norm_g
        refined_slack = float(relative_slack(value, refined_bound))

    ok = slack >= -SLACK_TOLERANCE and (refined_slack is None or refined_slack >= -SLACK_TOLERANCE)
    return CheckReport(name="energy_bound", ok=bool(ok), worst_slack=slack, energy=value, bound=bound,
                       refined_bound=refined_bound, refined_slack=refined_slack, delta=delta,
                       convention=adaptedness.convention)


def elementary_ratio(alpha: np.ndarray, R: np.ndarray) -> np.ndarray:
    """
    (e^{alpha R} - 1)^2 / (e^{2 alpha R} + 1).
    """
    x = np.asarray(alpha, dtype=np.float64) * np.asarray(R, dtype=np.float64)
    return np.expm1(x) ** 2 / (np.exp(2.0 * x) + 1.0)


def elementary_inequality_check(alpha_grid: Sequence[float], R_grid: Sequence[float]) -> Dict[str, CheckReport]:
    """
    F(R) <= alpha^2 R^2 / 2 on the whole grid, and F(R) <= c(alpha, R) R^2 on the part with R <= 1.
    """
    mat_alpha, mat_R = np.meshgrid(np.asarray(alpha_grid, dtype=np.float64), np.asarray(R_grid, dtype=np.float64),
                                   indexing="ij")
    if np.any(mat_alpha <= 0.0) or np.any(mat_R < 0.0):
        raise ParameterError("alpha must be positive and R nonnegative.")
    if np.any(mat_alpha * mat_R > MAX_EXPONENT / 2.0):
        raise ParameterError(f"alpha * R must stay below {MAX_EXPONENT / 2.0}.")
    mat_f = elementary_ratio(mat_alpha, mat_R)

    mat_slack = relative_slack(mat_f, mat_alpha ** 2 * mat_R ** 2 / 2.0)
    idx = np.unravel_index(np.argmin(mat_slack), mat_slack.shape)
    report_quadratic = CheckReport(name="elementary_quadratic", ok=bool(mat_slack[idx] >= -SLACK_TOLERANCE),
                                   worst_slack=float(mat_slack[idx]),
                                   worst_point=[float(mat_alpha[idx]), float(mat_R[idx])])

    near = mat_R <= 1.0
    if near.any():
        vec_alpha, vec_R = mat_alpha[near], mat_R[near]
        vec_rhs = refined_lipschitz_constant(vec_alpha, vec_R) * vec_R ** 2
        vec_slack = relative_slack(mat_f[near], vec_rhs)
        jdx = int(np.argmin(vec_slack))
        report_refined = CheckReport(name="elementary_refined", ok=bool(vec_slack[jdx] >= -SLACK_TOLERANCE),
                                     worst_slack=float(vec_slack[jdx]),
                                     worst_point=[float(vec_alpha[jdx]), float(vec_R[jdx])])
    else:
        report_refined = CheckReport(name="elementary_refined", ok=True, worst_slack=np.inf, worst_point=None)
    return {"quadratic": report_quadratic, "refined": report_refined}



def norm_ratio_trend(g: WeightedGraph, metric: PseudoMetric, alpha: float, r_grid: Sequence[float],
                     tol: float = 1E-12) -> Dict[str, Any]:
    """
    ||g_r|| / ||f_r|| along increasing r and whether the sequence is nonincreasing (a trend check, not a limit).
    """
    lst_rows = []
    for r in sorted(r_grid):
        pair = cutoff_pair(metric, r, alpha)
        norm_f = norm_squared(g, pair.f)
        if not (norm_f > 0.0):
            continue
        lst_rows.append((float(r), float(np.sqrt(norm_squared(g, pair.g) / norm_f))))
    vec_ratio = np.array([row[1] for row in lst_rows])
    decreasing = bool(vec_ratio.size < 2 or np.all(np.diff(vec_ratio) <= tol))
    return {"alpha": alpha, "rows": lst_rows, "decreasing": decreasing,
            "last_ratio": float(vec_ratio[-1]) if vec_ratio.size > 0 else None}


def admissible_radius(g: WeightedGraph, metric: PseudoMetric) -> float:
    """
    largest r whose pairs are admitted on a truncation: 2r + (largest edge length) <= distance to the boundary.
    with the natural distance this reads 2r + 1 <= R_trunc.
    """
    boundary = g.boundary_mask
    if not boundary.any():
        return np.inf
    d_boundary = float(np.min(metric.dist[boundary]))
    step = float(metric.lengths.max()) if metric.lengths.size > 0 else 0.0
    return (d_boundary - step) / 2.0


def candidate_pairs(alpha_grid: Sequence[float], r_grid: Sequence[float]) -> List[Tuple[float, float]]:
    return [(float(alpha), float(r)) for alpha in alpha_grid for r in r_grid]
