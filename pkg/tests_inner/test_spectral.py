#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import absolute_import
from __future__ import unicode_literals
from __future__ import division
from __future__ import print_function

import unittest
import warnings
import numpy as np
from hypothesis import given, settings, strategies as st

from graph.weighted_graph import build_from_parts
from graph.families import antitree, tree, integer_line, truncate
from graph.generators import random_connected_graph
from graph.exceptions import ParameterError, NumericalCaveatWarning, DanglingIndexError
from metric.pseudo_metric import natural_distance, huang_metric
from spectral.operator import DirichletOperator, energy, norm_squared, rayleigh, ball_domain
from spectral.eigensolver import dirichlet_lowest, dense_lowest
from spectral.exhaustion import variational_bound, default_alpha_grid, lambda0_exhaustion, lambda_ess_bracket, \
    graph_exhaustion, supersolution_check, antitree_supersolution, degree_comparison
from spectral import cutoff
from . import utils


class OperatorTestCases(unittest.TestCase):

    def test_energy_and_norm(self):
        g = build_from_parts(3, [(0, 1, 2.0), (1, 2, 1.0)], [1.0, 2.0, 3.0])
        u = np.array([1.0, 0.0, 2.0])
        self.assertEqual(energy(g, u), 2.0 * 1.0 + 1.0 * 4.0)
        self.assertEqual(norm_squared(g, u), 1.0 + 12.0)
        self.assertAlmostEqual(rayleigh(g, u), 6.0 / 13.0)
        with self.assertRaises(ParameterError):
            rayleigh(g, np.zeros(3))
        with self.assertRaises(ParameterError):
            energy(g, np.array([1.0, np.inf, 0.0]))

    @settings(derandomize=True, deadline=None, max_examples=30)
    @given(n=st.integers(min_value=3, max_value=40), seed=st.integers(min_value=0, max_value=10000))
    def test_apply_matches_dense_matrix(self, n, seed):
        g = random_connected_graph(n, edge_probability=0.2, seed=seed, weight_range=(0.5, 2.0),
                                   measure_range=(0.5, 2.0))
        rng = np.random.default_rng(seed)
        domain = np.sort(rng.choice(n, size=max(1, n - 2), replace=False))
        operator = DirichletOperator(g, domain)
        u = rng.normal(size=domain.size)
        mat_l = utils.dense_laplacian(g)
        np.testing.assert_allclose(operator.apply(u), mat_l[np.ix_(domain, domain)] @ u, atol=1E-10)
        # <u, Lu>_m is the energy of the zero extension
        self.assertAlmostEqual(operator.quadratic_form(u), energy(g, operator.extend(u)), places=8)

    def test_invalid_domains(self):
        g = truncate(integer_line(), 3)
        with self.assertRaises(ParameterError):
            DirichletOperator(g, [])
        with self.assertRaises(ParameterError):
            DirichletOperator(g, [1, 1])
        with self.assertRaises(DanglingIndexError):
            DirichletOperator(g, [0, 100])

    def test_ball_domain(self):
        vec_dist = np.array([0.0, 1.0, 1.0, 2.0, 3.0])
        np.testing.assert_array_equal(ball_domain(vec_dist, 2.0), [0, 1, 2, 3])
        np.testing.assert_array_equal(ball_domain(vec_dist, 3.0, inner_radius=1.0), [3, 4])


class EigensolverTestCases(unittest.TestCase):

    _TOL = 1E-10

    def test_path_eigenvalues(self):
        half_line = antitree("poly:0")
        for n_path in (10, 50, 200):
            with self.subTest(n=n_path):
                g = truncate(half_line, n_path + 1)
                result = dirichlet_lowest(g, np.arange(1, n_path + 1), tol=self._TOL)
                self.assertAlmostEqual(result.eigenvalue, utils.path_dirichlet_eigenvalue(n_path), delta=1E-8)
                self.assertLessEqual(result.residual, self._TOL)

    def test_random_graphs_against_dense_oracle(self):
        rng = np.random.default_rng(11)
        for idx in range(10):
            n = int(rng.integers(30, 121))
            g = random_connected_graph(n, edge_probability=4.0 / n, seed=idx, weight_range=(0.5, 2.0),
                                       measure_range=(0.5, 2.0))
            outside = rng.choice(n, size=int(rng.integers(1, n // 5)), replace=False)
            domain = np.setdiff1d(np.arange(n), outside)
            with self.subTest(n=n, idx=idx):
                expected = utils.dirichlet_eigenvalues(g, domain)[0]
                result = dirichlet_lowest(g, domain, tol=self._TOL, seed=idx, dense_size=0)
                self.assertLessEqual(abs(result.eigenvalue - expected), 1E-8 * max(1.0, expected))
                self.assertLessEqual(result.residual, self._TOL)
                self.assertAlmostEqual(dense_lowest(g, domain).eigenvalue, expected, places=10)

    def test_whole_graph_without_boundary(self):
        g = random_connected_graph(60, edge_probability=0.1, seed=5)
        result = dirichlet_lowest(g, tol=self._TOL, dense_size=0)
        self.assertAlmostEqual(result.eigenvalue, 0.0, delta=1E-8)

    def test_result(self):
        g = truncate(integer_line(), 20)
        domain = np.flatnonzero(g.interior_mask)
        result = dirichlet_lowest(g, domain, trace=True, dense_size=0)
        eigenvalue, residual, iterations = result
        self.assertEqual(eigenvalue, result.eigenvalue)
        self.assertGreater(iterations, 0)
        self.assertGreaterEqual(len(result.trace), 1)
        self.assertSetEqual(set(result.trace[0].keys()), {"attempt", "ncv", "iterations", "eigenvalue", "residual"})
        # ground states are positive and vanish outside the domain
        self.assertTrue(np.all(result.vector[domain] > 0.0))
        self.assertTrue(np.all(result.vector[g.boundary_mask] == 0.0))

        small = dirichlet_lowest(g, domain[:5], trace=True)
        self.assertEqual(small.method, "dense")
        self.assertEqual(len(small.trace), 1)

    def test_reproducible(self):
        g = random_connected_graph(80, edge_probability=0.05, seed=3)
        domain = np.arange(1, 80)
        first = dirichlet_lowest(g, domain, seed=4, dense_size=0)
        second = dirichlet_lowest(g, domain, seed=4, dense_size=0)
        self.assertEqual(first.eigenvalue, second.eigenvalue)

    def test_invalid_tolerance(self):
        g = truncate(integer_line(), 3)
        with self.assertRaises(ParameterError):
            dirichlet_lowest(g, tol=0.0)


class CutoffTestCases(unittest.TestCase):

    def test_cutoff_pair(self):
        g = truncate(integer_line(), 6)
        metric = natural_distance(g, 0)
        pair = cutoff.cutoff_pair(metric, 2.0, 0.5)
        vec_expected = np.expm1(0.5 * np.clip(4.0 - g.sphere_index, 0.0, 2.0))
        np.testing.assert_allclose(pair.f, vec_expected)
        np.testing.assert_allclose(pair.g, np.where(g.sphere_index <= 4, vec_expected + 2.0, 0.0))
        np.testing.assert_array_equal(pair.support, np.flatnonzero(g.sphere_index <= 3))

    def test_cutoff_pair_parameters(self):
        g = truncate(integer_line(), 3)
        metric = natural_distance(g, 0)
        for r, alpha in ((0.0, 1.0), (1.0, 0.0), (800.0, 1.0)):
            with self.subTest(r=r, alpha=alpha):
                with self.assertRaises(ParameterError):
                    cutoff.cutoff_pair(metric, r, alpha)

    def test_refined_constant(self):
        self.assertAlmostEqual(cutoff.lipschitz_constant(2.0), 2.0)
        for alpha in (0.1, 1.0, 4.0):
            with self.subTest(alpha=alpha):
                self.assertLessEqual(float(cutoff.refined_lipschitz_constant(alpha, 1.0)),
                                     cutoff.lipschitz_constant(alpha))

    @settings(derandomize=True, deadline=None, max_examples=40)
    @given(n=st.integers(min_value=2, max_value=30), seed=st.integers(min_value=0, max_value=10000),
           alpha=st.floats(min_value=1E-3, max_value=3.0), r=st.integers(min_value=1, max_value=5))
    def test_lipschitz(self, n, seed, alpha, r):
        g = random_connected_graph(n, edge_probability=0.15, seed=seed)
        metric = natural_distance(g, seed % n)
        pair = cutoff.cutoff_pair(metric, r, alpha)
        report = cutoff.lipschitz_check(g, metric, pair, all_pairs=True)
        self.assertTrue(report.ok, msg=report)
        self.assertTrue(cutoff.lipschitz_check(g, metric, pair).ok)

    @settings(derandomize=True, deadline=None, max_examples=40)
    @given(n=st.integers(min_value=2, max_value=30), seed=st.integers(min_value=0, max_value=10000),
           alpha=st.floats(min_value=1E-3, max_value=3.0), r=st.integers(min_value=1, max_value=5))
    def test_energy_bound(self, n, seed, alpha, r):
        g = random_connected_graph(n, edge_probability=0.15, seed=seed, weight_range=(0.5, 2.0))
        g = g.with_measure(g.weighted_degree())
        metric = natural_distance(g, seed % n, convention="half")
        report = cutoff.energy_bound_check(g, metric, cutoff.cutoff_pair(metric, r, alpha))
        self.assertTrue(report.ok, msg=report)
        self.assertIsNotNone(report.details["refined_slack"])
        self.assertLessEqual(report.details["refined_bound"], report.details["bound"] * (1.0 + 1E-12))

    def test_energy_bound_huang(self):
        g = truncate(integer_line(), 10)
        metric = huang_metric(g, 0)
        for alpha in (0.25, 1.0, 2.0):
            with self.subTest(alpha=alpha):
                report = cutoff.energy_bound_check(g, metric, cutoff.cutoff_pair(metric, 2.0, alpha))
                self.assertTrue(report.ok)
                self.assertEqual(report.details["convention"], "full")

    def test_energy_bound_requires_adapted_metric(self):
        g = truncate(tree("geom:2"), 4)
        metric = natural_distance(g, 0)
        with self.assertRaises(ParameterError):
            cutoff.energy_bound_check(g, metric, cutoff.cutoff_pair(metric, 1.0, 1.0))

    def test_elementary_inequalities(self):
        dict_reports = cutoff.elementary_inequality_check(np.linspace(0.05, 5.0, 100), np.linspace(0.0, 10.0, 201))
        self.assertTrue(dict_reports["quadratic"].ok)
        self.assertTrue(dict_reports["refined"].ok)
        # equality at R = 1
        dict_at_one = cutoff.elementary_inequality_check([0.5, 1.0, 2.0], [1.0])
        self.assertAlmostEqual(dict_at_one["refined"].worst_slack, 0.0, places=12)
        with self.assertRaises(ParameterError):
            cutoff.elementary_inequality_check([0.0], [1.0])

    def test_norm_ratio_trend(self):
        g = truncate(integer_line(), 40)
        metric = natural_distance(g, 0)
        ret = cutoff.norm_ratio_trend(g, metric, 0.5, [8, 2, 4])
        self.assertListEqual([row[0] for row in ret["rows"]], [2.0, 4.0, 8.0])
        self.assertTrue(all(row[1] > 1.0 for row in ret["rows"]))

    def test_admissible_radius(self):
        g = truncate(integer_line(), 10)
        self.assertEqual(cutoff.admissible_radius(g, natural_distance(g, 0)), 4.5)
        h = random_connected_graph(10, seed=0)
        self.assertTrue(np.isinf(cutoff.admissible_radius(h, natural_distance(h, 0))))
        self.assertEqual(len(cutoff.candidate_pairs([0.1, 0.2], [1, 2, 3])), 6)


class VariationalTestCases(unittest.TestCase):

    @classmethod
    def setUpClass(cls) -> None:
        cls._family = tree("regular:4", measure_rule="weighted-degree")
        cls._graph = truncate(cls._family, 8)
        cls._metric = natural_distance(cls._graph, 0, convention="full")

    def test_regular_tree(self):
        with self.assertWarns(NumericalCaveatWarning):
            result = variational_bound(self._graph, self._metric, np.linspace(0.3, 1.0, 15), [1, 2, 3, 4])
        self.assertEqual(result.n_excluded, 15)
        self.assertEqual(result.r, 3.0)
        # the Rayleigh quotient bounds the Dirichlet ground energy of any ball containing its support
        lambda_ball = lambda0_exhaustion(self._family, [7])[0]["eigenvalue"]
        self.assertGreaterEqual(result.rayleigh, lambda_ball - 1E-9)
        self.assertLess(result.rayleigh, 0.3)

    def test_all_excluded(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NumericalCaveatWarning)
            with self.assertRaises(ParameterError):
                variational_bound(self._graph, self._metric, [0.5], [10])

    def test_default_alpha_grid(self):
        vec_alpha = default_alpha_grid(1.0, n_points=4, width=2.0)
        np.testing.assert_allclose(vec_alpha, [1.0, 1.5, 2.0, 2.5])
        self.assertGreater(default_alpha_grid(0.0)[0], 0.0)


class DeepRegularTreeTestCases(unittest.TestCase):

    @classmethod
    def setUpClass(cls) -> None:
        cls._family = tree("regular:4", measure_rule="weighted-degree")
        cls._graph = truncate(cls._family, 12)
        cls._metric = natural_distance(cls._graph, 0, convention="full")

    def test_variational_bound(self):
        self.assertEqual(self._graph.n_vertices, 2 * 3 ** 12 - 1)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NumericalCaveatWarning)
            result = variational_bound(self._graph, self._metric, np.linspace(0.3, 1.0, 15), [1, 2, 3, 4, 5])
        self.assertEqual(result.r, 5.0)
        self.assertLessEqual(result.rayleigh, 0.25)
        lambda_ball = lambda0_exhaustion(self._family, [12])[0]["eigenvalue"]
        self.assertGreaterEqual(result.rayleigh, lambda_ball - 1E-9)

    def test_ground_energy_range(self):
        value = lambda0_exhaustion(self._family, [12])[0]["eigenvalue"]
        self.assertGreaterEqual(value, 0.134)
        self.assertLessEqual(value, 0.20)


class ExhaustionTestCases(unittest.TestCase):

    def test_regular_tree(self):
        family = tree("regular:4", measure_rule="weighted-degree")
        lst_rows = lambda0_exhaustion(family, [4, 8, 12])
        vec_lambda = [row["eigenvalue"] for row in lst_rows]
        self.assertTrue(all(b < a for a, b in zip(vec_lambda, vec_lambda[1:])))
        # 1 - sqrt(3)/2 is the bottom of the spectrum of the infinite tree
        self.assertGreater(vec_lambda[-1], 1.0 - np.sqrt(3.0) / 2.0)
        self.assertAlmostEqual(vec_lambda[-1], 0.153, delta=3E-3)
        self.assertEqual(lst_rows[-1]["mode"], "radial")

    def test_full_and_radial_modes_agree(self):
        for family in (antitree("poly:2"), tree("geom:2", measure_rule="weighted-degree")):
            with self.subTest(family=family.label):
                full = lambda0_exhaustion(family, [3, 5], mode="full")
                radial = lambda0_exhaustion(family, [3, 5], mode="radial")
                for row_full, row_radial in zip(full, radial):
                    self.assertAlmostEqual(row_full["eigenvalue"], row_radial["eigenvalue"], delta=1E-8)

    def test_invalid_radii(self):
        family = antitree("poly:1")
        for radii in ([], [3, 2], [-1, 2]):
            with self.subTest(radii=radii):
                with self.assertRaises(ParameterError):
                    lambda0_exhaustion(family, radii)
        with self.assertRaises(ParameterError):
            lambda0_exhaustion(family, [2], mode="cylinder")

    def test_cubic_antitree_stays_above_supersolution_level(self):
        lst_rows = lambda0_exhaustion(antitree("poly:2"), [3, 6], mode="full")
        for row in lst_rows:
            self.assertGreaterEqual(row["eigenvalue"], 2.0 - 1E-8)

    def test_cubic_antitree_reference_radii(self):
        lst_values = [row["eigenvalue"] for row in lambda0_exhaustion(antitree("poly:2"), [5, 10, 15])]
        for R, value, expected in zip((5, 10, 15), lst_values, (2.867, 2.709, 2.639)):
            with self.subTest(R=R):
                self.assertGreaterEqual(value, 2.0 - 1E-8)
                self.assertAlmostEqual(value, expected, delta=5E-3)
        self.assertTrue(all(b <= a for a, b in zip(lst_values, lst_values[1:])))

    def test_subcubic_antitree_decays(self):
        lst_values = [row["eigenvalue"] for row in lambda0_exhaustion(antitree("poly:1"), [10, 20, 40])]
        self.assertGreater(lst_values[0], lst_values[1])
        self.assertGreater(lst_values[1], lst_values[2])
        self.assertLess(lst_values[2], 0.5 * lst_values[0])

    def test_annulus(self):
        family = antitree("poly:1")
        with self.assertWarns(NumericalCaveatWarning):
            lst_rows = lambda_ess_bracket(family, [1, 3], 6)
        ball = lambda0_exhaustion(family, [6])[0]["eigenvalue"]
        for row in lst_rows:
            self.assertGreaterEqual(row["eigenvalue"], ball - 1E-9)
        # a smaller annulus has the larger ground energy
        self.assertGreater(lst_rows[1]["eigenvalue"], lst_rows[0]["eigenvalue"])
        self.assertEqual(lst_rows[1]["R_in"], 3)
        with self.assertRaises(ParameterError):
            lambda_ess_bracket(family, [6], 6)

    def test_graph_exhaustion(self):
        g = truncate(integer_line(), 30)
        metric = natural_distance(g, 0)
        lst_rows = graph_exhaustion(g, metric, [20, 5, 10])
        self.assertListEqual([row["R"] for row in lst_rows], [5.0, 10.0, 20.0])
        vec_lambda = [row["eigenvalue"] for row in lst_rows]
        self.assertTrue(all(b <= a for a, b in zip(vec_lambda, vec_lambda[1:])))
        # the ball of radius R is a path of 2R + 1 vertices with Dirichlet ends
        self.assertAlmostEqual(vec_lambda[0], utils.path_dirichlet_eigenvalue(11), delta=1E-8)

        h = random_connected_graph(40, edge_probability=0.1, seed=2)
        metric = natural_distance(h, 0)
        lst_rows = graph_exhaustion(h, metric, [metric.finite_max])
        self.assertAlmostEqual(lst_rows[0]["eigenvalue"], 0.0, delta=1E-8)


class CertificateTestCases(unittest.TestCase):

    def test_antitree_supersolution(self):
        g = truncate(antitree("poly:2"), 10)
        phi = antitree_supersolution(g)
        ret = supersolution_check(g, phi, 2.0)
        self.assertTrue(ret["ok"])
        self.assertAlmostEqual(ret["min_residual"], 0.0, places=9)
        self.assertEqual(ret["n_checked"], g.n_vertices - len(g.boundary))
        self.assertFalse(supersolution_check(g, phi, 2.1)["ok"])

    def test_supersolution_requires_positive_function(self):
        g = truncate(antitree("poly:2"), 3)
        phi = antitree_supersolution(g)
        phi[0] = 0.0
        with self.assertRaises(ParameterError):
            supersolution_check(g, phi, 1.0)
        with self.assertRaises(ParameterError):
            antitree_supersolution(random_connected_graph(5, seed=0))

    def test_degree_comparison(self):
        for family in (antitree("poly:2"), tree("geom:3")):
            with self.subTest(family=family.label):
                g = truncate(family, 5)
                ret = degree_comparison(g, np.flatnonzero(g.interior_mask))
                self.assertTrue(ret["ok"])
                self.assertLessEqual(ret["degree_min"] * ret["lambda_normalized"], ret["lambda_unit"] + 1E-9)
                self.assertLessEqual(ret["lambda_unit"], ret["degree_max"] * ret["lambda_normalized"] + 1E-9)
