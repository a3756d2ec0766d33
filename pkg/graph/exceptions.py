#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import absolute_import
from __future__ import unicode_literals
from __future__ import division
from __future__ import print_function

from typing import Optional, Dict, Any


class NumericalCaveatWarning(UserWarning):
    """
    finite-scale caveats: skipped centers, excluded test-function pairs, surrogate brackets.
    """
    pass


class SpecGrowthError(Exception):

    exit_code = 1

    def __init__(self, message: str, stage: Optional[str] = None, **details):
        super().__init__(message)
        self.message = message
        self.stage = stage
        self.details = details

    def with_stage(self, stage: str):
        if self.stage is None:
            self.stage = stage
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": self.__class__.__name__,
            "stage": self.stage,
            "message": self.message,
            "exit_code": self.exit_code,
            "details": self.details
        }


class GraphValidationError(SpecGrowthError, ValueError):
    pass


class DuplicateEdgeError(GraphValidationError):
    pass


class SelfLoopError(GraphValidationError):
    pass


class NonPositiveWeightError(GraphValidationError):
    pass


class NonPositiveMeasureError(GraphValidationError):
    pass


class DanglingIndexError(GraphValidationError):
    pass


class DisconnectedGraphError(GraphValidationError):
    pass


class IsolatedVertexError(GraphValidationError):
    pass


class InvalidSphereProfileError(GraphValidationError):
    pass


class GraphFormatError(GraphValidationError):
    pass


class ParameterError(SpecGrowthError, ValueError):
    pass


class ResourceCapError(SpecGrowthError):

    exit_code = 2


class SolverNonConvergenceError(SpecGrowthError):

    exit_code = 3

    def __init__(self, message: str, stage: Optional[str] = None,
                 eigenvalue: Optional[float] = None, residual: Optional[float] = None,
                 iterations: Optional[int] = None, **details):
        super().__init__(message, stage, eigenvalue=eigenvalue, residual=residual, iterations=iterations, **details)
        self.eigenvalue = eigenvalue
        self.residual = residual
        self.iterations = iterations
