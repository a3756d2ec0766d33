#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import absolute_import
from __future__ import unicode_literals
from __future__ import division
from __future__ import print_function

from typing import Optional, Tuple, Dict, Any, List
from contextlib import contextmanager
import datetime
import logging
import warnings
import numpy as np

from graph.weighted_graph import WeightedGraph, read_graph, write_graph
from graph.families import SphericallySymmetricFamily, family_from_spec, truncate, family_summary
from graph.assumptions import essential_self_adjointness_assumptions
from graph.exceptions import SpecGrowthError, ParameterError, NumericalCaveatWarning
from metric.pseudo_metric import PseudoMetric, build_metric, natural_distance
from metric.adaptedness import verify_adapted, normalize_jump, AdaptednessReport, JumpSize
from growth.ball_table import ball_table, sphere_table, BallTable
from growth.estimator import estimate_growth, classify_cubic_threshold, rho_exponent_bound, GrowthEstimate
from bounds.brooks import bound_set, bound_set_pair
from spectral.eigensolver import dirichlet_lowest
from spectral.exhaustion import variational_bound, default_alpha_grid, lambda0_exhaustion, lambda_ess_bracket, \
    graph_exhaustion, supersolution_check, antitree_supersolution, degree_comparison, SpectralReport
from spectral.cutoff import admissible_radius
from .config import RunConfig, CODE_VERSION

logger = logging.getLogger(__name__)

CONCLUSIONS = {
    "subcubic": "zero-spectrum-bottom",
    "cubic": "finite-ess",
    "supercubic": "no-conclusion"
}

NOTE_PAIRING = "the normalized-Laplacian corollary pairs mu with lambda_0 and mu_tilde with lambda_0^ess, " \
               "the general bound pairs them the other way round; bounds are reported for both rates."
NOTE_SUPERCUBIC = "growth above cubic gives no conclusion here; for antitrees lambda_0 > 0 and an empty " \
                  "essential spectrum are expected (informational)."
NOTE_CUBIC = "at most cubic growth with finite limsup |B_r|/r^3 bounds lambda_0^ess by a finite constant; " \
             "cubic_ratio_max is the finite-window surrogate of that limsup."
NOTE_SUBCUBIC = "below cubic growth lambda_0 = lambda_0^ess = 0; the exhaustion values should decrease towards 0."
NOTE_BRACKET = "annulus ground energies are finite-radius brackets for lambda_0^ess, not certified bounds."
NOTE_COMPONENTS = "the graph is disconnected: `metric` is measured on the whole graph and is infinite off the " \
                  "component of the root; every component is measured on its own under `components`."

PIPELINE_LEVELS = ("metric", "growth", "bounds", "spectral", "analyze")


@contextmanager
def stage(name: str):
    """
    tags errors raised inside the block with the pipeline stage.
    """
    try:
        yield
    except SpecGrowthError as e:
        raise e.with_stage(name)


class WarningLog(object):
    """
    collects NumericalCaveatWarning messages so that they can be copied into the report.
    """

    def __init__(self):
        self.lst_messages = []
        self._context = None

    def __enter__(self):
        self._context = warnings.catch_warnings(record=True)
        self._records = self._context.__enter__()
        warnings.simplefilter("always", NumericalCaveatWarning)
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        self._context.__exit__(exc_type, exc_value, traceback)
        for record in self._records:
            if issubclass(record.category, NumericalCaveatWarning):
                message = str(record.message)
                if message not in self.lst_messages:
                    self.lst_messages.append(message)
                    logger.warning(message)
            else:
                warnings.warn_explicit(record.message, record.category, record.filename, record.lineno)
        return False


def family_of(config: RunConfig) -> Optional[SphericallySymmetricFamily]:
    if config.get("graph.source") != "generator":
        return None
    return family_from_spec(kind=config.get("graph.family"), spheres=config.get("graph.spheres"),
                            measure_rule=config.get("graph.measure_rule"))


def load_graph(config: RunConfig) -> Tuple[WeightedGraph, Optional[SphericallySymmetricFamily], int]:
    """
    graph under analysis: a generated truncation or a graph file.
    a graph file may be disconnected when graph.allow_disconnected is set.

    @return: (graph, family or None, root)
    """
    family = family_of(config)
    if family is not None:
        radius = int(config.get("graph.radius"))
        g = truncate(family, radius)
    else:
        g = read_graph(config.get("graph.path"), allow_disconnected=bool(config.get("graph.allow_disconnected")))

    root = int(config.get("metric.root"))
    if not (0 <= root < g.n_vertices):
        raise ParameterError(f"root out of range: {root} (n={g.n_vertices})", key="metric.root")
    return g, family, root


def component_of(g: WeightedGraph, x: int) -> Tuple[WeightedGraph, np.ndarray]:
    """
    connected component of x, relabeled so that x is vertex 0.

    @return: (component, original vertex ids in the new order)
    """
    labels = g.component_labels
    vertices = np.flatnonzero(labels == labels[x])
    vertices = np.concatenate(([x], vertices[vertices != x]))
    return g.subgraph(vertices, allow_disconnected=False), vertices


def cmd_generate(config: RunConfig, path_out: str) -> Dict[str, Any]:
    """
    writes the truncation of the configured family as a graph JSON file.
    """
    with stage("generate"):
        family = family_of(config)
        if family is None:
            raise ParameterError("generate requires graph.source = `generator`.", key="graph.source")
        radius = int(config.get("graph.radius"))
        g = truncate(family, radius)
        write_graph(g, path_out)
    ret = family_summary(family, radius)
    ret["path"] = path_out
    return ret


class MetricStage(object):

    def __init__(self, metric: PseudoMetric, adaptedness: AdaptednessReport, jump: Optional[JumpSize],
                 scale: float):
        self.metric = metric
        self.adaptedness = adaptedness
        self.jump = jump
        self.scale = scale

    @property
    def halved(self) -> bool:
        return self.metric.convention == "full" and self.adaptedness.ok

    @property
    def delta(self) -> Optional[float]:
        if self.jump is None or self.jump.delta_max > 1.0:
            return None
        return self.jump.refined_delta()

    def to_dict(self) -> Dict[str, Any]:
        ret = self.metric.verbose
        ret["metric_id"] = self.metric.metric_id
        ret["scale"] = self.scale
        return ret


def run_metric(g: WeightedGraph, config: RunConfig, root: Optional[int] = None) -> MetricStage:
    """
    builds the metric, brings its jump size into [delta, 1] and checks adaptedness.
    """
    with stage("metric"):
        rule = config.get("metric.rule")
        # the Huang metric is intrinsic under the full convention
        convention = config.get("metric.convention") if rule != "huang" else None
        root = int(config.get("metric.root")) if root is None else root
        metric = build_metric(g, rule, root=root, convention=convention)
        jump, scale = None, 1.0
        if g.n_edges > 0:
            _, scale, jump = normalize_jump(g, metric)
            if scale != 1.0:
                metric = metric.scaled(scale)
        adaptedness = verify_adapted(g, metric, metric.convention)
    logger.info(f"metric {metric.metric_id}: adapted={adaptedness.ok} ({metric.convention} convention), "
                f"worst ratio {adaptedness.worst_ratio:.6g}")
    return MetricStage(metric=metric, adaptedness=adaptedness, jump=jump, scale=scale)


def run_components(g: WeightedGraph, config: RunConfig, root: int) -> List[Dict[str, Any]]:
    """
    metric and adaptedness on every connected component, rooted at the configured root on its own
    component and at the smallest vertex id elsewhere.
    """
    labels = g.component_labels
    lst_components = []
    for label in range(g.n_components):
        vertices = np.flatnonzero(labels == label)
        x = root if labels[root] == label else int(vertices[0])
        component, vertices = component_of(g, x)
        with stage(f"components.{label}"):
            metric_stage = run_metric(component, config, 0)
        lst_components.append({
            "component": label,
            "n_vertices": component.n_vertices,
            "root": x,
            "contains_root": bool(x == root),
            "metric": metric_stage.to_dict(),
            "adaptedness": metric_stage.adaptedness.to_dict()
        })
    return lst_components


def _beta_table(g: WeightedGraph, family: Optional[SphericallySymmetricFamily], metric_stage: MetricStage,
                config: RunConfig) -> BallTable:
    if family is not None:
        return sphere_table(family, int(config.get("growth.beta_radius")))
    if metric_stage.metric.edge_length_rule == "natural":
        return ball_table(g, metric_stage.metric)
    return ball_table(g, natural_distance(g, root=metric_stage.metric.root))


def run_growth(g: WeightedGraph, family: Optional[SphericallySymmetricFamily], metric_stage: MetricStage,
               config: RunConfig) -> Tuple[GrowthEstimate, BallTable]:
    with stage("growth"):
        metric = metric_stage.metric
        table = ball_table(g, metric, r_max=config.get("growth.r_max"), step=config.get("growth.step"))
        if not table.is_monotone():
            raise ParameterError("ball volumes are not monotone in r.", metric=metric.metric_id)
        beta_table = _beta_table(g, family, metric_stage, config)
        estimate = estimate_growth(table, window=config.window, method=config.get("growth.method"),
                                   g=g, lengths=metric.lengths, max_centers=config.get("growth.max_centers"),
                                   beta_table=beta_table, beta_window=config.beta_window, n_jobs=config.n_jobs)
    logger.info(f"growth: {estimate}")
    return estimate, table


def run_bounds(estimate: GrowthEstimate, metric_stage: MetricStage) -> Dict[str, Any]:
    with stage("bounds"):
        ret = bound_set_pair(estimate.mu_hat, estimate.mu_tilde_hat, delta=metric_stage.delta,
                             halved=metric_stage.halved)
    ret["metric_adapted"] = metric_stage.adaptedness.ok
    if not metric_stage.adaptedness.ok:
        ret["caveat"] = f"the metric is not adapted under the {metric_stage.metric.convention} convention; " \
                        f"the bounds are evaluated but not implied."
    return ret


def run_bounds_from_rates(config: RunConfig) -> Dict[str, Any]:
    """
    bounds for explicitly configured rates, without a graph.
    """
    with stage("bounds"):
        mu = float(config.get("bounds.mu"))
        mu_tilde = config.get("bounds.mu_tilde")
        delta = config.get("bounds.delta")
        delta = None if delta is None else float(delta)
        halved = bool(config.get("bounds.halved"))
        ret = bound_set_pair(mu, None if mu_tilde is None else float(mu_tilde), delta=delta, halved=halved)
        ret["normalized_only"] = bound_set(mu, label="mu").normalized
    return ret


def _alpha_grid(config: RunConfig, estimate: Optional[GrowthEstimate]) -> np.ndarray:
    grid = config.alpha_grid
    if grid is not None:
        return grid()
    mu_hat = 0.0 if estimate is None else estimate.mu_hat
    return default_alpha_grid(mu_hat)


def _r_grid(g: WeightedGraph, metric: PseudoMetric, config: RunConfig) -> np.ndarray:
    grid = config.r_grid
    if grid is not None:
        return grid()
    r_admissible = admissible_radius(g, metric)
    if not np.isfinite(r_admissible):
        r_admissible = metric.finite_max / 2.0
    if metric.edge_length_rule == "natural":
        return np.arange(1.0, np.floor(r_admissible + 1E-12) + 1.0)
    if r_admissible <= 0.0:
        return np.zeros(0)
    return np.linspace(r_admissible / 8.0, r_admissible, 8)


def is_cubic_antitree(family: Optional[SphericallySymmetricFamily], R: int) -> bool:
    """
    unit-measure antitree with s_r = (r+1)^2, where phi = (k+1)^{-2} is a supersolution.
    """
    if family is None or family.kind != "antitree" or family.measure_rule != "unit":
        return False
    return family.sphere_sizes(R) == [(r + 1) ** 2 for r in range(R + 1)]


def run_spectral(g: WeightedGraph, family: Optional[SphericallySymmetricFamily], metric_stage: MetricStage,
                 estimate: Optional[GrowthEstimate], config: RunConfig,
                 bounds: Optional[Dict[str, Any]] = None) -> SpectralReport:
    metric = metric_stage.metric
    tol = float(config.get("spectral.tol"))
    seed, n_jobs = config.seed, config.n_jobs
    mode = config.get("spectral.exhaustion_mode")
    report = SpectralReport()
    report.bounds = bounds

    with stage("spectral.variational"):
        vec_r = _r_grid(g, metric, config)
        if vec_r.size == 0:
            warnings.warn("no admissible test-function radius; variational bound skipped", NumericalCaveatWarning)
        else:
            report.variational = variational_bound(g, metric, _alpha_grid(config, estimate), vec_r, n_jobs=n_jobs)

    with stage("spectral.exhaustion"):
        if family is not None:
            report.exhaustion = lambda0_exhaustion(family, config.radii, tol=tol, mode=mode, seed=seed,
                                                   n_jobs=n_jobs)
            report.annulus = lambda_ess_bracket(family, config.annulus_inner_radii, int(config.get("spectral.R_out")),
                                                tol=tol, mode=mode, seed=seed, n_jobs=n_jobs)
        else:
            report.exhaustion = graph_exhaustion(g, metric, config.radii, tol=tol, seed=seed, n_jobs=n_jobs)

    with stage("spectral.supersolution"):
        if is_cubic_antitree(family, int(config.get("graph.radius"))):
            report.supersolution = supersolution_check(g, antitree_supersolution(g),
                                                       float(config.get("spectral.supersolution_lambda")))
        else:
            logger.info("supersolution check skipped: it only applies to the unit-measure cubic antitree.")

    with stage("spectral.degree_comparison"):
        domain = np.flatnonzero(g.interior_mask) if g.boundary_mask.any() else None
        report.degree_comparison = degree_comparison(g, domain, tol=tol, seed=seed)

    lst_values = [row["eigenvalue"] for row in report.exhaustion]
    report.flags["exhaustion_nonincreasing"] = bool(all(b <= a + tol for a, b in zip(lst_values, lst_values[1:])))
    if report.supersolution is not None and report.supersolution["ok"] and len(lst_values) > 0:
        report.flags["exhaustion_above_supersolution_lambda"] = bool(
            min(lst_values) >= report.supersolution["lambda"] - 1E-8)
    if report.variational is not None and bounds is not None:
        rate = bounds["pairing"]["lambda0"]
        brooks = bounds[rate]["brooks"]
        report.flags["variational_below_brooks"] = bool(report.variational.rayleigh <= brooks + 1E-12)
    return report


def classify(estimate: GrowthEstimate, config: RunConfig, g: WeightedGraph) -> Dict[str, Any]:
    """
    cubic-threshold classification from the polynomial exponent of the natural distance.
    """
    if estimate.beta_hat is None:
        return {"beta_hat": None, "class": None, "conclusion": None, "rho_exponent_bound": None,
                "applies_to_graph_laplacian": None}
    label = classify_cubic_threshold(estimate.beta_hat, band=float(config.get("growth.cubic_band")))
    return {
        "beta_hat": estimate.beta_hat,
        "beta_window": None if estimate.beta_window is None else list(estimate.beta_window),
        "class": label,
        "conclusion": CONCLUSIONS[label],
        "cubic_ratio_max": estimate.cubic_ratio_max,
        "rho_exponent_bound": rho_exponent_bound(estimate.beta_hat),
        "applies_to_graph_laplacian": bool(np.all(g.measure == 1.0) and np.all(g.edge_weights == 1.0))
    }


def _notes(classification: Dict[str, Any], family: Optional[SphericallySymmetricFamily]) -> List[str]:
    lst_notes = [NOTE_PAIRING]
    label = classification.get("class", None)
    if label == "subcubic":
        lst_notes.append(NOTE_SUBCUBIC)
    elif label == "cubic":
        lst_notes.append(NOTE_CUBIC)
    elif label == "supercubic":
        lst_notes.append(NOTE_SUPERCUBIC)
    if family is not None:
        lst_notes.append(NOTE_BRACKET)
    return lst_notes


def _header(config: RunConfig) -> Dict[str, Any]:
    return {
        "version": CODE_VERSION,
        "seed": config.seed,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
        "config": config.to_dict()
    }


def _graph_summary(g: WeightedGraph, family: Optional[SphericallySymmetricFamily],
                   config: RunConfig) -> Dict[str, Any]:
    ret = g.verbose
    if family is not None:
        ret["family"] = family_summary(family, int(config.get("graph.radius")))
    return ret


def _spectral_tables(g: WeightedGraph, report: SpectralReport, config: RunConfig) -> Dict[str, Any]:
    with stage("spectral.trace"):
        domain = np.flatnonzero(g.interior_mask) if g.boundary_mask.any() else None
        result = dirichlet_lowest(g, domain, tol=float(config.get("spectral.tol")), seed=config.seed, trace=True)
    return {"exhaustion": report.exhaustion, "annulus": report.annulus or None, "solver_trace": result.trace}


def _run(config: RunConfig, upto: str, with_tables: bool) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    """
    runs the pipeline stages in order and stops after `upto`.
    """
    if upto not in PIPELINE_LEVELS:
        raise NotImplementedError(f"unsupported pipeline level: {upto}")
    level = PIPELINE_LEVELS.index(upto)
    ret, dict_tables = {}, {}

    with WarningLog() as log:
        lst_notes = []
        with stage("graph"):
            g, family, root = load_graph(config)
        metric_stage = run_metric(g, config, root)
        ret.update({
            "graph": _graph_summary(g, family, config),
            "metric": metric_stage.to_dict(),
            "adaptedness": metric_stage.adaptedness.to_dict(),
            "jump_size": None if metric_stage.jump is None else metric_stage.jump.to_dict()
        })
        if with_tables:
            dict_tables["distances"] = metric_stage.metric.dist

        if not g.is_connected():
            ret["components"] = run_components(g, config, root)
            lst_notes.append(NOTE_COMPONENTS)
            if level > PIPELINE_LEVELS.index("metric"):
                with stage("graph"):
                    g, vertices = component_of(g, root)
                lst_notes.append(f"graph has {len(ret['components'])} components; growth and spectral stages run on "
                                 f"the component of root {root} ({vertices.size} vertices), relabeled with the root "
                                 f"as vertex 0.")
                root = 0
                metric_stage = run_metric(g, config, root)

        if level >= PIPELINE_LEVELS.index("growth"):
            estimate, table = run_growth(g, family, metric_stage, config)
            classification = classify(estimate, config, g)
            ret["growth"] = estimate.to_dict()
            ret["classification"] = classification
            if with_tables:
                dict_tables["ball_table"] = table

        if level >= PIPELINE_LEVELS.index("bounds"):
            ret["bounds"] = run_bounds(estimate, metric_stage)

        if level >= PIPELINE_LEVELS.index("spectral"):
            report = run_spectral(g, family, metric_stage, estimate, config, bounds=ret["bounds"])
            ret["spectral"] = report.to_dict()
            if with_tables:
                dict_tables.update(_spectral_tables(g, report, config))

        if level >= PIPELINE_LEVELS.index("analyze"):
            with stage("assumptions"):
                ret["assumptions"] = essential_self_adjointness_assumptions(g, metric_stage.metric)
            lst_notes = lst_notes + _notes(classification, family) + [ret["assumptions"]["note"]]
            logger.info(f"analysis finished: class={classification['class']}, mu_hat={estimate.mu_hat:.6g}")

    ret["notes"] = lst_notes
    ret["warnings"] = log.lst_messages
    ret.update(_header(config))
    return ret, dict_tables


def cmd_metric(config: RunConfig, with_tables: bool = False) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    return _run(config, "metric", with_tables)


def cmd_growth(config: RunConfig, with_tables: bool = False) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    return _run(config, "growth", with_tables)


def cmd_bounds(config: RunConfig, with_tables: bool = False) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    """
    bounds for configured rates (bounds.mu) without a graph, otherwise for the rates estimated on the graph.
    """
    if config.get("bounds.mu") is None:
        return _run(config, "bounds", with_tables)
    ret = {"bounds": run_bounds_from_rates(config), "notes": [NOTE_PAIRING], "warnings": []}
    ret.update(_header(config))
    return ret, {}


def cmd_spectrum(config: RunConfig, with_tables: bool = False) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    return _run(config, "spectral", with_tables)


def cmd_analyze(config: RunConfig, with_tables: bool = False) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    """
    full pipeline: graph, metric and adaptedness, jump size, growth, bounds, spectral report, the
    cubic-threshold classification and the self-adjointness assumptions, as one JSON-ready dict.
    """
    return _run(config, "analyze", with_tables)
