#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import absolute_import
from __future__ import unicode_literals
from __future__ import division
from __future__ import print_function

from abc import ABCMeta, abstractmethod
from typing import Optional, Union, Sequence
import numpy as np

from graph.exceptions import ParameterError


class BaseGrid(object, metaclass=ABCMeta):

    def __init__(self, begin: float, end: float, n_points: int, **kwargs):
        if n_points < 1:
            raise ParameterError(f"grid needs at least one point: {n_points}")
        if end < begin:
            raise ParameterError(f"grid end must not precede its begin: [{begin}, {end}]")
        self._begin = begin
        self._end = end
        self._n_points = int(n_points)
        for k, v in kwargs.items():
            setattr(self, k, v)

    @property
    def begin(self):
        return self._begin

    @property
    def end(self):
        return self._end

    @property
    def n_points(self):
        return self._n_points

    @abstractmethod
    def _eval(self, x: np.ndarray) -> np.ndarray:
        """
        returns grid values. when x=0, then y=begin. similarly, when x=1, then y=end.

        @param x: progress values. x lies in [0,1].
        @return: y
        """

    def __call__(self) -> np.ndarray:
        if self._n_points == 1:
            return np.array([self._begin], dtype=np.float64)
        x = np.linspace(0.0, 1.0, self._n_points)
        return self._eval(x)

    def __repr__(self):
        return f"{self.__class__.__name__}(begin={self._begin}, end={self._end}, n_points={self._n_points})"


class LinearGrid(BaseGrid):

    def _eval(self, x: np.ndarray) -> np.ndarray:
        c = self._end - self._begin
        b = self._begin
        y = c*x + b
        return y


class GeometricGrid(BaseGrid):

    def __init__(self, begin: float, end: float, n_points: int, **kwargs):

        if not ((begin > 0) and (end > 0)):
            raise ParameterError(f"both `begin` and `end` must be positive: [{begin}, {end}]")

        super().__init__(begin, end, n_points, **kwargs)

    def _eval(self, x: np.ndarray) -> np.ndarray:
        c = np.log(self._end) - np.log(self._begin)
        d = self._begin
        y = d*np.exp(c*x)
        return y


class ExplicitGrid(BaseGrid):

    def __init__(self, values: Sequence[float], **kwargs):
        vec_values = np.asarray(values, dtype=np.float64).ravel()
        if vec_values.size == 0:
            raise ParameterError("explicit grid is empty.")
        self._values = vec_values
        super().__init__(float(vec_values.min()), float(vec_values.max()), vec_values.size, **kwargs)

    def _eval(self, x: np.ndarray) -> np.ndarray:
        return self._values

    def __call__(self) -> np.ndarray:
        return self._values.copy()


def parse_grid(spec: Union[str, Sequence[float], None]) -> Optional[BaseGrid]:
    """
    grid spec mini-grammar: `lin:BEGIN:END:N`, `geom:BEGIN:END:N` or comma separated values.
    `auto` and None return None; the caller then derives the grid from the data.
    """
    if spec is None:
        return None
    if not isinstance(spec, str):
        return ExplicitGrid(spec)
    spec = spec.strip()
    if spec == "auto":
        return None
    kind, _, body = spec.partition(":")
    if kind in ("lin", "geom"):
        lst_parts = body.split(":")
        if len(lst_parts) != 3:
            raise ParameterError(f"invalid grid spec: {spec}; expected {kind}:BEGIN:END:N")
        try:
            begin, end, n_points = float(lst_parts[0]), float(lst_parts[1]), int(lst_parts[2])
        except ValueError:
            raise ParameterError(f"invalid grid spec: {spec}")
        grid_class = LinearGrid if kind == "lin" else GeometricGrid
        return grid_class(begin, end, n_points)
    try:
        lst_values = [float(token) for token in spec.split(",") if token.strip() != ""]
    except ValueError:
        raise ParameterError(f"invalid grid spec: {spec}")
    return ExplicitGrid(lst_values)
