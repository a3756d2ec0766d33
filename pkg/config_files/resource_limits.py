#!/usr/bin/env python
# -*- coding:utf-8 -*-

import os

from graph.exceptions import ParameterError

ENV_MAX_VERTICES = "SPECGROWTH_MAX_VERTICES"
ENV_MAX_EDGES = "SPECGROWTH_MAX_EDGES"

DEFAULT_MAX_VERTICES = 5_000_000
DEFAULT_MAX_EDGES = 50_000_000

# all-pairs distance matrices are dense
MAX_VERTICES_ALL_PAIRS = 2000
# dense eigen-oracle
MAX_VERTICES_DENSE = 4000


def _read_int_env(name: str, default: int) -> int:
    value = os.environ.get(name, None)
    if value is None or value.strip() == "":
        return default
    try:
        ret = int(float(value))
    except (ValueError, OverflowError):
        raise ParameterError(f"invalid value in environment variable {name}: {value!r}", key=name)
    if ret <= 0:
        raise ParameterError(f"{name} must be a positive integer: {value!r}", key=name)
    return ret


def max_vertices() -> int:
    return _read_int_env(ENV_MAX_VERTICES, DEFAULT_MAX_VERTICES)


def max_edges() -> int:
    return _read_int_env(ENV_MAX_EDGES, DEFAULT_MAX_EDGES)
