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
from scipy import stats
from scipy.sparse import csgraph

from graph.weighted_graph import WeightedGraph
from graph.exceptions import ParameterError, NumericalCaveatWarning
from metric.pseudo_metric import Lengths, length_matrix, distances_from_roots
from metric.adaptedness import jump_size
from .ball_table import BallTable, Window, radius_grid, ball_counts

logger = logging.getLogger(__name__)

MU_METHODS = ("pointwise", "secant")
MAX_CENTERS = 256
DEFAULT_CUBIC_BAND = 0.15


class GrowthEstimate(object):

    def __init__(self, mu_hat: float, window: Window, method: str,
                 mu_tilde_hat: Optional[float] = None,
                 beta_hat: Optional[float] = None,
                 mu_limsup_hat: Optional[float] = None,
                 cubic_ratio_max: Optional[float] = None,
                 centers: Optional[List[int]] = None,
                 beta_window: Optional[Window] = None):
        assert window[0] <= window[1], f"empty window: {window}"
        self.mu_hat = mu_hat
        self.mu_tilde_hat = mu_tilde_hat
        self.beta_hat = beta_hat
        self.mu_limsup_hat = mu_limsup_hat
        self.cubic_ratio_max = cubic_ratio_max
        self.window = window
        self.beta_window = beta_window
        self.method = method
        self.centers = centers

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mu_hat": self.mu_hat,
            "mu_tilde_hat": self.mu_tilde_hat,
            "beta_hat": self.beta_hat,
            "mu_limsup_hat": self.mu_limsup_hat,
            "cubic_ratio_max": self.cubic_ratio_max,
            "window": list(self.window),
            "beta_window": None if self.beta_window is None else list(self.beta_window),
            "method": self.method,
            "n_centers": None if self.centers is None else len(self.centers),
            "centers": self.centers
        }

    def __repr__(self):
        return f"GrowthEstimate(mu_hat={self.mu_hat}, mu_tilde_hat={self.mu_tilde_hat}, beta_hat={self.beta_hat})"


def _log_rate_curve(table: BallTable, window: Window, method: str) -> Tuple[np.ndarray, np.ndarray]:
    if method not in MU_METHODS:
        raise NotImplementedError(f"unsupported method: {method}")
    mask = table.window_mask(window)
    vec_r, vec_v = table.radii[mask], table.volumes[mask]
    if np.any(vec_v <= 0.0):
        raise ParameterError(f"volumes must be positive on the window {window}.")
    if method == "pointwise":
        keep = vec_r > 0.0
        if not keep.any():
            raise ParameterError(f"window {window} has no positive radius.")
        return vec_r[keep], np.log(vec_v[keep]) / vec_r[keep]
    else:
        if vec_r.size < 2:
            raise ParameterError(f"secant method needs at least two grid points in the window {window}.")
        return vec_r[1:], (np.log(vec_v[1:]) - np.log(vec_v[0])) / (vec_r[1:] - vec_r[0])


def mu_estimate(table: BallTable, window: Optional[Window] = None, method: str = "pointwise") -> float:
    """
    liminf surrogate of the exponential growth rate: min over the window of (1/r) log m(B_r).
    method `secant` uses (log m(B_r) - log m(B_{r_lo})) / (r - r_lo) instead, which cancels constant prefactors.
    """
    window = table.default_window() if window is None else window
    _, vec_rate = _log_rate_curve(table, window, method)
    return float(max(vec_rate.min(), 0.0))


def mu_limsup_estimate(table: BallTable, window: Optional[Window] = None, method: str = "pointwise") -> float:
    window = table.default_window() if window is None else window
    _, vec_rate = _log_rate_curve(table, window, method)
    return float(max(vec_rate.max(), 0.0))


def _boundary_distance(g: WeightedGraph, lengths: np.ndarray) -> np.ndarray:
    boundary = g.boundary
    if len(boundary) == 0:
        return np.full(g.n_vertices, np.inf)
    mat_l = length_matrix(g, lengths)
    return csgraph.dijkstra(mat_l, directed=False, indices=boundary, min_only=True)


def select_centers(g: WeightedGraph, lengths: Lengths, r_max: float,
                   centers: Optional[Sequence[int]] = None,
                   max_centers: Optional[int] = MAX_CENTERS) -> List[int]:
    """
    centers whose r_max-ball stays inside the truncation (distance to boundary >= r_max).
    explicit centers that do not fit are skipped with a warning; the default sample is every fitting vertex,
    thinned by a deterministic index stride when it exceeds `max_centers` (None: exhaustive).
    """
    vec_l = np.asarray(lengths, dtype=np.float64)
    vec_d_boundary = _boundary_distance(g, vec_l)
    fits = vec_d_boundary >= r_max - 1E-12

    if centers is None:
        lst_centers = np.flatnonzero(fits).tolist()
        if max_centers is not None and len(lst_centers) > max_centers:
            stride = int(np.ceil(len(lst_centers) / max_centers))
            lst_centers = lst_centers[::stride][:max_centers]
    else:
        lst_centers = []
        lst_skipped = []
        for x in centers:
            if not (0 <= int(x) < g.n_vertices):
                raise ParameterError(f"center out of range: {x}")
            (lst_centers if fits[int(x)] else lst_skipped).append(int(x))
        if len(lst_skipped) > 0:
            warnings.warn(f"{len(lst_skipped)} centers skipped: their {r_max}-balls reach the truncation boundary "
                          f"(first skipped: {lst_skipped[:5]})", NumericalCaveatWarning)

    if len(lst_centers) == 0:
        raise ParameterError(f"no center has its {r_max}-ball inside the truncation.", r_max=r_max)
    return lst_centers


def _center_log_ratios(g: WeightedGraph, lengths: np.ndarray, centers: List[int], vec_r: np.ndarray) -> np.ndarray:
    mat_dist = distances_from_roots(g, lengths, centers)
    mat_ret = np.empty((len(centers), vec_r.size), dtype=np.float64)
    for idx, vec_dist in enumerate(mat_dist):
        _, vec_volume = ball_counts(vec_dist, g.measure, vec_r)
        _, vec_unit = ball_counts(vec_dist, g.measure, np.array([1.0]))
        mat_ret[idx] = np.log(vec_volume / vec_unit[0]) / vec_r
    return mat_ret


def mu_tilde_estimate(g: WeightedGraph, lengths: Lengths, centers: Optional[Sequence[int]] = None,
                      r_max: Optional[float] = None, window: Optional[Window] = None,
                      step: Optional[float] = None, max_centers: Optional[int] = MAX_CENTERS,
                      n_jobs: int = 1) -> Tuple[float, List[int]]:
    """
    minimal growth rate surrogate: min over window of inf over centers of log(m(B_r(x))/m(B_1(x)))/r.
    the infimum over all vertices is approximated by the sampled centers.

    @return: (mu_tilde_hat, centers used)
    """
    vec_l = np.asarray(lengths, dtype=np.float64)
    step = jump_size(g, vec_l).delta_min / 2.0 if step is None else float(step)
    if r_max is None:
        if window is None:
            raise ParameterError("either r_max or window must be given.")
        r_max = window[1]
    window = (r_max / 2.0, r_max) if window is None else window
    if window[1] > r_max or window[0] > window[1]:
        raise ParameterError(f"window {window} must lie inside [0, r_max={r_max}].")

    vec_r = radius_grid(r_max, step)
    mask = (vec_r >= window[0] - 1E-9) & (vec_r <= window[1] + 1E-9) & (vec_r > 0.0)
    if not mask.any():
        raise ParameterError(f"window {window} contains no positive grid point.")
    vec_r = vec_r[mask]

    lst_centers = select_centers(g, vec_l, r_max, centers=centers, max_centers=max_centers)
    n_jobs = max(1, int(n_jobs))
    n_chunks = min(n_jobs, len(lst_centers))
    lst_chunks = [chunk.tolist() for chunk in np.array_split(np.asarray(lst_centers), n_chunks)]
    if n_jobs == 1:
        lst_results = [_center_log_ratios(g, vec_l, chunk, vec_r) for chunk in lst_chunks]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as executor:
            lst_results = list(executor.map(lambda chunk: _center_log_ratios(g, vec_l, chunk, vec_r), lst_chunks))
    mat_ratio = np.vstack(lst_results)

    vec_inf_over_centers = mat_ratio.min(axis=0)
    mu_tilde_hat = float(max(vec_inf_over_centers.min(), 0.0))
    logger.debug(f"mu_tilde over {len(lst_centers)} centers, window {window}: {mu_tilde_hat:.6g}")
    return mu_tilde_hat, lst_centers


def beta_estimate(table: BallTable, window: Window) -> float:
    """
    least-squares slope of log|B_r| against log r over the window.
    """
    if window[0] < 2:
        raise ParameterError(f"polynomial exponent needs r_lo >= 2: {window}")
    mask = table.window_mask(window)
    vec_r, vec_count = table.radii[mask], table.counts[mask]
    if vec_r.size < 3:
        raise ParameterError(f"degenerate window {window}: {vec_r.size} rows, at least 3 are required.")
    if np.any(vec_count < 1):
        raise ParameterError(f"ball counts must be >= 1 on the window {window}.")
    result = stats.linregress(np.log(vec_r), np.log(vec_count))
    return float(max(result.slope, 0.0))


def limsup_cubic_ratio(table: BallTable, window: Window) -> float:
    """
    max over the window of |B_r| / r^3.
    """
    mask = table.window_mask(window) & (table.radii > 0.0)
    if not mask.any():
        raise ParameterError(f"window {window} has no positive radius.")
    return float(np.max(table.counts[mask] / table.radii[mask] ** 3))


def rho_exponent_bound(beta: float) -> float:
    """
    polynomial growth exponent of the degree-path metric implied by exponent beta of the natural distance.
    """
    if beta < 0.0:
        raise ParameterError(f"growth exponent must be nonnegative: {beta}")
    if beta >= 3.0:
        return np.inf
    beta = max(beta, 1.0)
    return 2.0 * beta / (3.0 - beta)


def classify_cubic_threshold(beta_hat: float, band: float = DEFAULT_CUBIC_BAND) -> str:
    if band < 0.0:
        raise ParameterError(f"band must be nonnegative: {band}")
    if beta_hat < 3.0 - band:
        return "subcubic"
    elif beta_hat <= 3.0 + band:
        return "cubic"
    else:
        return "supercubic"


def estimate_growth(table: BallTable, window: Optional[Window] = None, method: str = "pointwise",
                    g: Optional[WeightedGraph] = None, lengths: Optional[Lengths] = None,
                    centers: Optional[Sequence[int]] = None, max_centers: Optional[int] = MAX_CENTERS,
                    beta_table: Optional[BallTable] = None, beta_window: Optional[Window] = None,
                    n_jobs: int = 1) -> GrowthEstimate:
    """
    assembles a GrowthEstimate. mu_tilde is computed when a graph with lengths is given and some center
    has its ball inside the truncation (skipped with a warning otherwise),
    beta when the (natural distance) beta table holds a window with r_lo >= 2.
    """
    window = table.default_window() if window is None else window
    mu_hat = mu_estimate(table, window, method=method)
    mu_limsup_hat = mu_limsup_estimate(table, window, method=method)

    mu_tilde_hat, lst_centers = None, None
    if g is not None and lengths is not None:
        try:
            lst_fitting = select_centers(g, lengths, window[1], centers=centers, max_centers=max_centers)
        except ParameterError as e:
            warnings.warn(f"mu_tilde skipped: {e.message}", NumericalCaveatWarning)
            lst_fitting = None
        if lst_fitting is not None:
            mu_tilde_hat, lst_centers = mu_tilde_estimate(g, lengths, centers=lst_fitting, r_max=window[1],
                                                          window=window, step=table.step, max_centers=None,
                                                          n_jobs=n_jobs)

    beta_hat, cubic_ratio_max = None, None
    beta_table = table if beta_table is None else beta_table
    if beta_window is None:
        beta_window = (max(2.0, beta_table.r_max / 4.0), beta_table.r_max)
    if beta_window[0] < beta_window[1] and beta_table.r_max >= 4:
        beta_hat = beta_estimate(beta_table, beta_window)
        cubic_ratio_max = limsup_cubic_ratio(beta_table, beta_window)

    method_tag = f"{method}-min;window=[{window[0]:g},{window[1]:g}]"
    if mu_tilde_hat is not None:
        method_tag += f";mu_tilde=sampled({len(lst_centers)} centers)"
    if beta_hat is not None:
        method_tag += ";beta=least-squares"
    return GrowthEstimate(mu_hat=mu_hat, mu_tilde_hat=mu_tilde_hat, beta_hat=beta_hat, mu_limsup_hat=mu_limsup_hat,
                          cubic_ratio_max=cubic_ratio_max, window=window, method=method_tag, centers=lst_centers,
                          beta_window=beta_window if beta_hat is not None else None)
