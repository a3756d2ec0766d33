#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import absolute_import
from __future__ import unicode_literals
from __future__ import division
from __future__ import print_function

from typing import Any, Dict, List, Sequence, Optional, Iterable
import os, io
import csv
import json
import logging
import numpy as np

from growth.ball_table import BallTable

logger = logging.getLogger(__name__)


def to_jsonable(obj: Any) -> Any:
    """
    converts numpy scalars/arrays and objects with `to_dict` into plain JSON values.
    non-finite floats are written as the strings "inf", "-inf" and "nan".
    """
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(key): to_jsonable(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(value) for value in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(value) for value in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if np.isnan(value):
            return "nan"
        if np.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False)


def write_json(obj: Any, path: Optional[str] = None, stream=None):
    """
    writes to `path`, or to `stream` (e.g. sys.stdout) when no path is given.
    """
    s_json = dumps(obj)
    if path is None:
        stream.write(s_json + "\n")
        return
    _make_parent(path)
    with io.open(path, mode="w", encoding="utf-8") as ofs:
        ofs.write(s_json + "\n")
    logger.info(f"report written: {path}")


def error_line(error: Exception) -> str:
    """
    single-line JSON error record for stderr.
    """
    if hasattr(error, "to_dict"):
        obj = error.to_dict()
    else:
        obj = {"error": error.__class__.__name__, "stage": None, "message": str(error), "exit_code": 1}
    return json.dumps(to_jsonable(obj), sort_keys=True)


def _make_parent(path: str):
    dir_name = os.path.dirname(os.path.abspath(path))
    os.makedirs(dir_name, exist_ok=True)


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]):
    _make_parent(path)
    with io.open(path, mode="w", encoding="utf-8", newline="") as ofs:
        writer = csv.writer(ofs)
        writer.writerow(header)
        for row in rows:
            writer.writerow([to_jsonable(value) for value in row])
    logger.debug(f"csv written: {path}")


def write_distances_csv(path: str, dist: np.ndarray):
    write_csv(path, ("vertex", "dist"), enumerate(np.asarray(dist, dtype=np.float64).tolist()))


def write_ball_table_csv(path: str, table: BallTable):
    write_csv(path, ("r", "count", "volume"), ((r, int(count), volume) for r, count, volume in table.rows()))


def write_rows_csv(path: str, lst_rows: List[Dict[str, Any]], columns: Sequence[str]):
    write_csv(path, columns, ([row.get(column, None) for column in columns] for row in lst_rows))


def emit_csv(dir_name: str, dict_tables: Dict[str, Any]) -> List[str]:
    """
    writes each table of the report into `dir_name` and returns the written paths.
    keys: `distances` (vector), `ball_table` (BallTable), `exhaustion`, `annulus`, `solver_trace`
    (lists of row dicts).
    """
    os.makedirs(dir_name, exist_ok=True)
    lst_paths = []
    for name, table in dict_tables.items():
        if table is None:
            continue
        path = os.path.join(dir_name, f"{name}.csv")
        if name == "distances":
            write_distances_csv(path, table)
        elif name == "ball_table":
            write_ball_table_csv(path, table)
        elif name == "solver_trace":
            write_rows_csv(path, table, ("attempt", "ncv", "iterations", "eigenvalue", "residual"))
        elif name == "exhaustion":
            write_rows_csv(path, table, ("R", "eigenvalue", "residual", "iterations", "mode", "domain_size"))
        elif name == "annulus":
            write_rows_csv(path, table, ("R_in", "R_out", "eigenvalue", "residual", "iterations", "mode",
                                         "domain_size"))
        else:
            raise NotImplementedError(f"unsupported table: {name}")
        lst_paths.append(path)
    return lst_paths
