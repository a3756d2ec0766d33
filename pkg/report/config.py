#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import absolute_import
from __future__ import unicode_literals
from __future__ import division
from __future__ import print_function

from typing import Optional, Union, Sequence, Dict, Any, Tuple, List
import os
import copy
import importlib.util
import pydash

from config_files.template_analysis import analysis_parameters
from graph.exceptions import ParameterError
from metric.pseudo_metric import CONVENTIONS
from growth.estimator import MU_METHODS
from spectral.exhaustion import EXHAUSTION_MODES
from .grids import parse_grid, BaseGrid

CODE_VERSION = "0.3.0"

GRAPH_SOURCES = ("file", "generator")
FAMILIES = ("antitree", "tree", "line")
METRIC_RULES = ("natural", "huang")

Window = Tuple[float, float]


def load_config_file(path: str, variable: str = "analysis_parameters") -> Dict[str, Any]:
    """
    executes a python config file and returns the dict bound to `variable`.
    """
    path_config = os.path.abspath(path)
    if not os.path.exists(path_config):
        raise ParameterError(f"config file not found: {path}")
    spec = importlib.util.spec_from_file_location("config", path_config)
    config = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(config)
    if not hasattr(config, variable):
        raise ParameterError(f"config file {path} does not define `{variable}`.")
    return getattr(config, variable)


def parse_window(spec: Union[str, Sequence[float], None]) -> Optional[Window]:
    """
    `LO:HI` -> (LO, HI) with 0 <= LO <= HI.
    """
    if spec is None:
        return None
    if isinstance(spec, str):
        lst_parts = spec.split(":")
        if len(lst_parts) != 2:
            raise ParameterError(f"invalid window: {spec}; expected LO:HI")
        try:
            spec = (float(lst_parts[0]), float(lst_parts[1]))
        except ValueError:
            raise ParameterError(f"invalid window: {spec}")
    if len(spec) != 2:
        raise ParameterError(f"invalid window: {spec}")
    r_lo, r_hi = float(spec[0]), float(spec[1])
    if not (0.0 <= r_lo <= r_hi):
        raise ParameterError(f"window must satisfy 0 <= LO <= HI: {spec}")
    return (r_lo, r_hi)


def parse_radii(spec: Union[str, Sequence[float], None]) -> Optional[List[int]]:
    """
    `5,10,20` -> [5, 10, 20]. radii are nonnegative integers (sphere indices of the exhaustion).
    """
    if spec is None:
        return None
    if isinstance(spec, str):
        try:
            spec = [float(token) for token in spec.split(",") if token.strip() != ""]
        except ValueError:
            raise ParameterError(f"invalid radii list: {spec}")
    lst_radii = []
    for value in spec:
        if float(value) < 0 or float(value) != int(float(value)):
            raise ParameterError(f"radii must be nonnegative integers: {spec}")
        lst_radii.append(int(float(value)))
    if len(lst_radii) == 0:
        raise ParameterError("radii list is empty.")
    return lst_radii


def _replace_sequences(obj_value, src_value, *args):
    # lists are replaced as a whole, never merged index by index
    if isinstance(src_value, (list, tuple)):
        return list(src_value)
    return None


class RunConfig(object):
    """
    nested run configuration (sections graph, metric, growth, bounds, spectral, verify, runtime).
    missing keys fall back to config_files/template_analysis.py; ranges are validated on construction.
    """

    def __init__(self, parameters: Optional[Dict[str, Any]] = None, validate: bool = True):
        self._parameters = copy.deepcopy(analysis_parameters)
        if parameters is not None:
            self._parameters = pydash.objects.merge_with(self._parameters, copy.deepcopy(parameters),
                                                         _replace_sequences)
        if validate:
            self.validate()

    @classmethod
    def from_file(cls, path: str, overrides: Optional[Dict[str, Any]] = None) -> "RunConfig":
        ret = cls(load_config_file(path), validate=False)
        for key_path, value in (overrides or {}).items():
            ret.set(key_path, value)
        ret.validate()
        return ret

    def get(self, key_path: str, default: Any = None) -> Any:
        return pydash.objects.get(self._parameters, key_path, default)

    def set(self, key_path: str, value: Any) -> "RunConfig":
        pydash.objects.set_(self._parameters, key_path, value)
        return self

    def override(self, dict_overrides: Dict[str, Any]) -> "RunConfig":
        """
        applies {key path: value} pairs whose value is not None and validates again.
        """
        for key_path, value in dict_overrides.items():
            if value is not None:
                self.set(key_path, value)
        self.validate()
        return self

    @property
    def seed(self) -> int:
        return int(self.get("runtime.seed"))

    @property
    def n_jobs(self) -> int:
        return int(self.get("runtime.n_jobs"))

    @property
    def window(self) -> Optional[Window]:
        return parse_window(self.get("growth.window"))

    @property
    def beta_window(self) -> Optional[Window]:
        return parse_window(self.get("growth.beta_window"))

    @property
    def radii(self) -> List[int]:
        return parse_radii(self.get("spectral.radii"))

    @property
    def annulus_inner_radii(self) -> List[int]:
        return parse_radii(self.get("spectral.R_in"))

    @property
    def alpha_grid(self) -> Optional[BaseGrid]:
        return parse_grid(self.get("spectral.alpha_grid"))

    @property
    def r_grid(self) -> Optional[BaseGrid]:
        return parse_grid(self.get("spectral.r_grid"))

    def _check_choice(self, key_path: str, choices: Sequence[str], allow_none: bool = False):
        value = self.get(key_path)
        if value is None and allow_none:
            return
        if value not in choices:
            raise ParameterError(f"invalid value for {key_path}: {value}; choose from {', '.join(choices)}",
                                 key=key_path)

    def _check_number(self, key_path: str, lower: float, strict: bool = False, allow_none: bool = False,
                      integer: bool = False):
        value = self.get(key_path)
        if value is None and allow_none:
            return
        try:
            number = float(value)
        except (TypeError, ValueError):
            raise ParameterError(f"invalid value for {key_path}: {value}", key=key_path)
        if integer and number != int(number):
            raise ParameterError(f"{key_path} must be an integer: {value}", key=key_path)
        if (number <= lower) if strict else (number < lower):
            relation = ">" if strict else ">="
            raise ParameterError(f"{key_path} must be {relation} {lower}: {value}", key=key_path)

    def validate(self) -> "RunConfig":
        self._check_choice("graph.source", GRAPH_SOURCES)
        if self.get("graph.source") == "file" and self.get("graph.path") is None:
            raise ParameterError("graph.path is required when graph.source is `file`.", key="graph.path")
        if self.get("graph.source") == "generator":
            self._check_choice("graph.family", FAMILIES)
            self._check_number("graph.radius", 1, integer=True)
        self._check_choice("metric.rule", METRIC_RULES)
        self._check_choice("metric.convention", CONVENTIONS)
        self._check_number("metric.root", 0, integer=True)

        self._check_number("growth.r_max", 0.0, strict=True, allow_none=True)
        self._check_choice("growth.method", MU_METHODS)
        self._check_number("growth.step", 0.0, strict=True, allow_none=True)
        self._check_number("growth.max_centers", 1, integer=True, allow_none=True)
        self._check_number("growth.beta_radius", 4, integer=True)
        self._check_number("growth.cubic_band", 0.0)
        window, r_max = self.window, self.get("growth.r_max")
        if window is not None and r_max is not None and window[1] > r_max:
            raise ParameterError(f"growth.window {window} exceeds growth.r_max={r_max}", key="growth.window")
        parse_window(self.get("growth.beta_window"))

        self._check_number("bounds.mu", 0.0, allow_none=True)
        self._check_number("bounds.mu_tilde", 0.0, allow_none=True)
        delta = self.get("bounds.delta")
        if delta is not None and not (0.0 <= float(delta) <= 1.0):
            raise ParameterError(f"bounds.delta must lie in [0, 1]: {delta}", key="bounds.delta")

        self._check_number("spectral.tol", 0.0, strict=True)
        self._check_choice("spectral.exhaustion_mode", EXHAUSTION_MODES)
        self._check_number("spectral.R_out", 1, integer=True)
        self._check_number("spectral.supersolution_lambda", 0.0)
        for r_in in self.annulus_inner_radii:
            if r_in >= int(self.get("spectral.R_out")):
                raise ParameterError(f"empty annulus: R_in={r_in}, R_out={self.get('spectral.R_out')}",
                                     key="spectral.R_in")
        parse_radii(self.get("spectral.radii"))
        parse_grid(self.get("spectral.alpha_grid"))
        parse_grid(self.get("spectral.r_grid"))

        for key_path in ("verify.n_graphs", "verify.n_instances", "verify.max_vertices",
                         "verify.oracle_max_vertices"):
            self._check_number(key_path, 1, integer=True)
        probability = float(self.get("verify.edge_probability"))
        if not (0.0 <= probability <= 1.0):
            raise ParameterError(f"verify.edge_probability must lie in [0, 1]: {probability}",
                                 key="verify.edge_probability")

        self._check_number("runtime.seed", 0, integer=True)
        self._check_number("runtime.n_jobs", 1, integer=True)
        return self

    def to_dict(self) -> Dict[str, Any]:
        return copy.deepcopy(self._parameters)

    def __repr__(self):
        return f"RunConfig(source={self.get('graph.source')}, metric={self.get('metric.rule')}, seed={self.seed})"
