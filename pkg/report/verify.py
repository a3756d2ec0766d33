#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import absolute_import
from __future__ import unicode_literals
from __future__ import division
from __future__ import print_function

from abc import ABCMeta, abstractmethod
from typing import Dict, Any, List, Optional
import logging
import numpy as np

from config_files.reference_families import examples
from graph.families import family_from_spec, truncate, antitree
from graph.generators import random_connected_graph
from metric.pseudo_metric import natural_distance, huang_metric
from metric.adaptedness import verify_adapted
from bounds.brooks import brooks_bound, jump_bound, normalized_bound
from spectral.cutoff import cutoff_pair, lipschitz_check, energy_bound_check, elementary_inequality_check, \
    CheckReport, SLACK_TOLERANCE
from spectral.eigensolver import dirichlet_lowest, dense_lowest
from .config import RunConfig

logger = logging.getLogger(__name__)

ENERGY_TOLERANCE = 1E-9
ORACLE_TOLERANCE = 1E-8
IDENTITY_TOLERANCE = 1E-12


class BaseSuite(object, metaclass=ABCMeta):

    name = None

    def __init__(self, config: RunConfig):
        self._config = config
        self._seed = config.seed

    @abstractmethod
    def evaluate(self) -> CheckReport:
        pass


class _RandomInstances(object):
    """
    random (graph, alpha, r, root) instances, deterministic given the seed.
    the measure is the weighted degree, so that the natural distance is adapted under both conventions.
    """

    def __init__(self, n_instances: int, max_vertices: int, edge_probability: float, seed: int):
        self._n_instances = n_instances
        self._max_vertices = max_vertices
        self._edge_probability = edge_probability
        self._seed = seed

    def __iter__(self):
        rng = np.random.default_rng(self._seed)
        for idx in range(self._n_instances):
            n = int(rng.integers(2, self._max_vertices + 1))
            g = random_connected_graph(n, edge_probability=self._edge_probability, seed=int(rng.integers(2**31)))
            g = g.with_measure(g.weighted_degree())
            alpha = float(rng.uniform(1E-3, 3.0))
            r = int(rng.integers(1, 6))
            root = int(rng.integers(0, n))
            yield g, alpha, r, root


class LipschitzSuite(BaseSuite):

    name = "lipschitz"

    def evaluate(self) -> CheckReport:
        cfg = self._config
        worst_slack, n_failed, n_cases = np.inf, 0, 0
        for g, alpha, r, root in _RandomInstances(int(cfg.get("verify.n_instances")), int(cfg.get("verify.max_vertices")),
                                                  float(cfg.get("verify.edge_probability")), self._seed):
            metric = natural_distance(g, root)
            report = lipschitz_check(g, metric, cutoff_pair(metric, r, alpha), all_pairs=True)
            worst_slack = min(worst_slack, report.worst_slack)
            n_failed += 0 if report.ok else 1
            n_cases += 1
        return CheckReport(name=self.name, ok=n_failed == 0, worst_slack=worst_slack, n_cases=n_cases,
                           n_failed=n_failed)


def _energy_slack(report: CheckReport) -> float:
    refined_slack = report.details.get("refined_slack", None)
    return report.worst_slack if refined_slack is None else min(report.worst_slack, refined_slack)


class EnergySuite(BaseSuite):
    """
    E(f) <= alpha^2 ||g||^2 under the half convention on the random instances, and
    E(f) <= alpha^2/2 ||g||^2 for the Huang metric (full convention) on integer-line truncations.
    """

    name = "energy_bound"

    def evaluate(self) -> CheckReport:
        cfg = self._config
        worst_slack, n_failed, n_cases = np.inf, 0, 0
        for g, alpha, r, root in _RandomInstances(int(cfg.get("verify.n_instances")), int(cfg.get("verify.max_vertices")),
                                                  float(cfg.get("verify.edge_probability")), self._seed):
            metric = natural_distance(g, root, convention="half")
            report = energy_bound_check(g, metric, cutoff_pair(metric, r, alpha))
            slack = _energy_slack(report)
            worst_slack = min(worst_slack, slack)
            n_failed += 0 if slack >= -ENERGY_TOLERANCE else 1
            n_cases += 1

        line = family_from_spec("line")
        for radius in (5, 10, 20):
            g = truncate(line, radius)
            metric = huang_metric(g, root=0)
            for alpha in (0.25, 1.0, 2.0):
                for r in (1.0, radius / 4.0):
                    report = energy_bound_check(g, metric, cutoff_pair(metric, r, alpha))
                    slack = _energy_slack(report)
                    worst_slack = min(worst_slack, slack)
                    n_failed += 0 if slack >= -ENERGY_TOLERANCE else 1
                    n_cases += 1
        return CheckReport(name=self.name, ok=n_failed == 0, worst_slack=worst_slack, n_cases=n_cases,
                           n_failed=n_failed)


class ElementarySuite(BaseSuite):

    name = "elementary_inequalities"

    def evaluate(self) -> CheckReport:
        dict_reports = elementary_inequality_check(alpha_grid=np.linspace(0.05, 5.0, 100),
                                                   R_grid=np.linspace(0.0, 10.0, 201))
        # equality of the refined inequality at R = 1
        vec_alpha = np.linspace(0.05, 5.0, 100)
        dict_at_one = elementary_inequality_check(alpha_grid=vec_alpha, R_grid=[1.0])
        ok = all(report.ok for report in dict_reports.values()) and dict_at_one["refined"].ok
        equality_gap = abs(dict_at_one["refined"].worst_slack)
        return CheckReport(name=self.name, ok=bool(ok and equality_gap <= SLACK_TOLERANCE * 10),
                           worst_slack=min(report.worst_slack for report in dict_reports.values()),
                           quadratic=dict_reports["quadratic"].to_dict(), refined=dict_reports["refined"].to_dict(),
                           equality_gap_at_one=equality_gap)


class BoundIdentitySuite(BaseSuite):
    """
    normalized_bound(mu) = jump_bound(mu, 1)/2 and monotonicity of every bound in mu.
    """

    name = "bound_identities"

    def evaluate(self) -> CheckReport:
        vec_mu = np.linspace(0.0, 10.0, 1000)
        vec_normalized = np.array([normalized_bound(mu) for mu in vec_mu])
        vec_jump_unit = np.array([jump_bound(mu, 1.0) for mu in vec_mu])
        vec_relative = np.abs(vec_normalized - vec_jump_unit / 2.0) / np.maximum(np.abs(vec_normalized), 1E-300)
        identity_error = float(vec_relative.max())

        dict_curves = {
            "brooks": np.array([brooks_bound(mu) for mu in vec_mu]),
            "brooks_halved": np.array([brooks_bound(mu, halved=True) for mu in vec_mu]),
            "jump_half": np.array([jump_bound(mu, 0.5) for mu in vec_mu]),
            "jump_unit": vec_jump_unit,
            "normalized": vec_normalized
        }
        lst_not_monotone = [name for name, curve in dict_curves.items() if np.any(np.diff(curve) < 0.0)]
        ok = identity_error <= IDENTITY_TOLERANCE and len(lst_not_monotone) == 0
        return CheckReport(name=self.name, ok=bool(ok), worst_slack=-identity_error, identity_error=identity_error,
                           not_monotone=lst_not_monotone, n_points=int(vec_mu.size))


class OracleSuite(BaseSuite):
    """
    iterative Dirichlet eigensolver against the dense oracle on random graphs with random domains,
    and against 2 - 2cos(pi/(N+1)) on paths.
    """

    name = "oracle_equivalence"

    def _random_cases(self):
        cfg = self._config
        rng = np.random.default_rng(self._seed + 1)
        max_vertices = int(cfg.get("verify.oracle_max_vertices"))
        for idx in range(int(cfg.get("verify.n_graphs"))):
            n = int(rng.integers(max(2, max_vertices // 4), max_vertices + 1))
            g = random_connected_graph(n, edge_probability=min(1.0, 4.0 / n), seed=int(rng.integers(2**31)),
                                       weight_range=(0.5, 2.0), measure_range=(0.5, 2.0))
            n_outside = int(rng.integers(1, max(2, n // 5)))
            outside = rng.choice(n, size=n_outside, replace=False)
            domain = np.setdiff1d(np.arange(n), outside)
            yield g, domain

    def evaluate(self) -> CheckReport:
        tol = float(self._config.get("spectral.tol"))
        worst_error, n_failed, n_cases = 0.0, 0, 0
        for g, domain in self._random_cases():
            expected = dense_lowest(g, domain).eigenvalue
            actual = dirichlet_lowest(g, domain, tol=tol, seed=self._seed).eigenvalue
            error = abs(actual - expected) / max(1.0, abs(expected))
            worst_error = max(worst_error, error)
            n_failed += 0 if error <= ORACLE_TOLERANCE else 1
            n_cases += 1

        half_line = antitree("poly:0")
        for n_path in (10, 50, 200):
            g = truncate(half_line, n_path + 1)
            domain = np.arange(1, n_path + 1)
            expected = 2.0 - 2.0 * np.cos(np.pi / (n_path + 1))
            actual = dirichlet_lowest(g, domain, tol=tol, seed=self._seed).eigenvalue
            error = abs(actual - expected)
            worst_error = max(worst_error, error)
            n_failed += 0 if error <= ORACLE_TOLERANCE else 1
            n_cases += 1
        return CheckReport(name=self.name, ok=n_failed == 0, worst_slack=-worst_error, worst_error=worst_error,
                           n_cases=n_cases, n_failed=n_failed)


class AdaptednessSuite(BaseSuite):
    """
    Huang metrics are adapted under the full convention on every reference family truncation.
    """

    name = "huang_adaptedness"

    def evaluate(self) -> CheckReport:
        worst_ratio, lst_failed = 0.0, []
        for example_name, cfg_example in sorted(examples.items()):
            family = family_from_spec(kind=cfg_example["family"], spheres=cfg_example["spheres"],
                                      measure_rule=cfg_example["measure_rule"])
            g = truncate(family, 6)
            report = verify_adapted(g, huang_metric(g, root=0), "full")
            worst_ratio = max(worst_ratio, report.worst_ratio)
            if not report.ok:
                lst_failed.append(example_name)
        return CheckReport(name=self.name, ok=len(lst_failed) == 0, worst_slack=1.0 - worst_ratio,
                           worst_ratio=worst_ratio, failed=lst_failed, n_cases=len(examples))


SUITES = (LipschitzSuite, EnergySuite, ElementarySuite, BoundIdentitySuite, OracleSuite, AdaptednessSuite)


def cmd_verify(config: RunConfig, suites: Optional[List[str]] = None) -> Dict[str, Any]:
    """
    runs the property suites. failures are results, not errors.

    @param suites: names of the suites to run; None runs all of them
    """
    dict_results = {}
    for suite_class in SUITES:
        if suites is not None and suite_class.name not in suites:
            continue
        report = suite_class(config).evaluate()
        logger.info(f"{suite_class.name}: ok={report.ok}, worst slack {report.worst_slack:.3g}")
        dict_results[suite_class.name] = report.to_dict()
    return {
        "ok": all(result["ok"] for result in dict_results.values()),
        "suites": dict_results
    }
