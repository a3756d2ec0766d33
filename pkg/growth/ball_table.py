#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import absolute_import
from __future__ import unicode_literals
from __future__ import division
from __future__ import print_function

from typing import Optional, Tuple, List, Iterator
import logging
import numpy as np

from graph.weighted_graph import WeightedGraph
from graph.families import SphericallySymmetricFamily, sphere_volumes
from graph.exceptions import ParameterError
from metric.pseudo_metric import PseudoMetric
from metric.adaptedness import jump_size

logger = logging.getLogger(__name__)

# grid points are k*step; this absorbs rounding of r_max/step
_GRID_EPS = 1E-9

Window = Tuple[float, float]


def radius_grid(r_max: float, step: float) -> np.ndarray:
    if not (step > 0.0):
        raise ParameterError(f"grid step must be positive: {step}")
    if r_max < 0.0:
        raise ParameterError(f"r_max must be nonnegative: {r_max}")
    n_steps = int(np.floor(r_max / step + _GRID_EPS))
    return np.arange(n_steps + 1, dtype=np.float64) * step


def ball_counts(vec_dist: np.ndarray, measure: np.ndarray, vec_r: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    |B_r| and m(B_r) for every grid value r by thresholding dist <= r.
    """
    order = np.argsort(vec_dist, kind="stable")
    vec_sorted = vec_dist[order]
    vec_cum_measure = np.concatenate(([0.0], np.cumsum(measure[order])))
    vec_count = np.searchsorted(vec_sorted, vec_r, side="right")
    return vec_count.astype(np.int64), vec_cum_measure[vec_count]


class BallTable(object):
    """
    rows (r, |B_r|, m(B_r)) over a radius grid.
    """

    def __init__(self, metric_id: str, vec_r: np.ndarray, vec_count: np.ndarray, vec_volume: np.ndarray,
                 step: float):
        self.metric_id = metric_id
        self.step = float(step)
        self._r = np.asarray(vec_r, dtype=np.float64)
        self._count = np.asarray(vec_count, dtype=np.float64)
        self._volume = np.asarray(vec_volume, dtype=np.float64)
        assert self._r.size == self._count.size == self._volume.size, "rows must have equal length."

    @property
    def radii(self) -> np.ndarray:
        return self._r

    @property
    def counts(self) -> np.ndarray:
        return self._count

    @property
    def volumes(self) -> np.ndarray:
        return self._volume

    @property
    def r_max(self) -> float:
        return float(self._r[-1])

    def __len__(self):
        return self._r.size

    def __iter__(self) -> Iterator[Tuple[float, float, float]]:
        for r, count, volume in zip(self._r, self._count, self._volume):
            yield float(r), float(count), float(volume)

    def rows(self) -> List[Tuple[float, float, float]]:
        return list(iter(self))

    def window_mask(self, window: Window) -> np.ndarray:
        r_lo, r_hi = window
        if r_lo > r_hi:
            raise ParameterError(f"empty window: [{r_lo}, {r_hi}]")
        if r_lo < self._r[0] - _GRID_EPS or r_hi > self._r[-1] + _GRID_EPS:
            raise ParameterError(f"window [{r_lo}, {r_hi}] outside table range [{self._r[0]}, {self._r[-1]}]",
                                 window=[r_lo, r_hi])
        mask = (self._r >= r_lo - _GRID_EPS) & (self._r <= r_hi + _GRID_EPS)
        if not mask.any():
            raise ParameterError(f"window [{r_lo}, {r_hi}] contains no grid point.", window=[r_lo, r_hi])
        return mask

    def default_window(self) -> Window:
        """
        tail window [r_max/2, r_max] snapped to the grid.
        """
        r_lo = self._r[np.searchsorted(self._r, self.r_max / 2.0 - _GRID_EPS)]
        return float(max(r_lo, self._r[min(1, self._r.size - 1)])), self.r_max

    def volume_at(self, r: float) -> float:
        idx = np.searchsorted(self._r, r + _GRID_EPS, side="right") - 1
        if idx < 0:
            raise ParameterError(f"radius {r} below the table range.")
        return float(self._volume[idx])

    def is_monotone(self) -> bool:
        return bool(np.all(np.diff(self._volume) >= 0.0) and np.all(np.diff(self._count) >= 0.0))

    def __repr__(self):
        return f"BallTable(metric_id={self.metric_id}, n_rows={len(self)}, r_max={self.r_max})"


def default_step(g: WeightedGraph, metric: PseudoMetric) -> float:
    if metric.edge_length_rule == "natural":
        return 1.0
    return jump_size(g, metric.lengths).delta_min / 2.0


def ball_table(g: WeightedGraph, metric: PseudoMetric, r_max: Optional[float] = None,
               step: Optional[float] = None) -> BallTable:
    """
    cumulative counts and volumes of the balls around metric.root.
    the grid is integral for the natural distance and uses step = delta_min/2 otherwise.

    @param r_max: largest grid radius; defaults to the largest finite distance
    """
    if metric.n_vertices != g.n_vertices:
        raise ParameterError(f"metric has {metric.n_vertices} vertices, graph has {g.n_vertices}.")
    step = default_step(g, metric) if step is None else float(step)
    r_max = metric.finite_max if r_max is None else float(r_max)
    vec_r = radius_grid(r_max, step)
    vec_count, vec_volume = ball_counts(metric.dist, g.measure, vec_r)
    return BallTable(metric_id=metric.metric_id, vec_r=vec_r, vec_count=vec_count, vec_volume=vec_volume, step=step)


def sphere_table(family: SphericallySymmetricFamily, R: int) -> BallTable:
    """
    ball table of the natural distance around the root built from analytic sphere volumes.
    """
    lst_rows = sphere_volumes(family, R)
    vec_r = np.array([row[0] for row in lst_rows], dtype=np.float64)
    vec_count = np.cumsum([float(row[1]) for row in lst_rows])
    vec_volume = np.array([row[2] for row in lst_rows], dtype=np.float64)
    return BallTable(metric_id=f"natural@root:{family.label}", vec_r=vec_r, vec_count=vec_count,
                     vec_volume=vec_volume, step=1.0)
