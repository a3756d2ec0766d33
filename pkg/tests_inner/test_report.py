#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import absolute_import
from __future__ import unicode_literals
from __future__ import division
from __future__ import print_function

import os
import io
import json
import shutil
import tempfile
import unittest
from unittest import mock
import numpy as np

import specgrowth
from graph.exceptions import ParameterError, ResourceCapError, DisconnectedGraphError
from graph.families import antitree, tree, truncate
from graph.weighted_graph import write_graph, read_graph
from report.grids import LinearGrid, GeometricGrid, ExplicitGrid, parse_grid
from report.config import RunConfig, parse_window, parse_radii
from report.serialization import to_jsonable, dumps, error_line, emit_csv
from report.pipeline import cmd_generate, cmd_metric, cmd_growth, cmd_bounds, cmd_spectrum, cmd_analyze, load_graph, \
    is_cubic_antitree
from report.verify import cmd_verify, SUITES

_SMALL_ANALYSIS = {
    "graph": {"family": "antitree", "spheres": "poly:2", "radius": 8},
    "spectral": {"radii": [3, 5], "R_in": [2], "R_out": 6},
}

_SMALL_VERIFY = {
    "verify": {"n_graphs": 3, "n_instances": 10, "max_vertices": 20, "oracle_max_vertices": 40}
}


class GridTestCases(unittest.TestCase):

    def test_grids(self):
        np.testing.assert_allclose(LinearGrid(0.0, 1.0, 5)(), [0.0, 0.25, 0.5, 0.75, 1.0])
        np.testing.assert_allclose(GeometricGrid(1.0, 100.0, 3)(), [1.0, 10.0, 100.0])
        np.testing.assert_allclose(LinearGrid(0.5, 2.0, 1)(), [0.5])
        np.testing.assert_allclose(ExplicitGrid([3.0, 1.0])(), [3.0, 1.0])

    def test_invalid_grids(self):
        with self.assertRaises(ParameterError):
            GeometricGrid(0.0, 1.0, 3)
        with self.assertRaises(ParameterError):
            LinearGrid(2.0, 1.0, 3)
        with self.assertRaises(ParameterError):
            LinearGrid(0.0, 1.0, 0)

    def test_parse_grid(self):
        self.assertIsNone(parse_grid(None))
        self.assertIsNone(parse_grid("auto"))
        self.assertIsInstance(parse_grid("lin:0.1:1:10"), LinearGrid)
        np.testing.assert_allclose(parse_grid("geom:1:100:3")(), [1.0, 10.0, 100.0])
        np.testing.assert_allclose(parse_grid("0.5, 1, 2")(), [0.5, 1.0, 2.0])
        np.testing.assert_allclose(parse_grid([0.5, 1.0])(), [0.5, 1.0])
        for spec in ("lin:0:1", "geom:a:b:3", "x,y"):
            with self.subTest(spec=spec):
                with self.assertRaises(ParameterError):
                    parse_grid(spec)


class RunConfigTestCases(unittest.TestCase):

    def test_defaults(self):
        config = RunConfig()
        self.assertEqual(config.seed, 0)
        self.assertEqual(config.get("metric.rule"), "natural")
        self.assertListEqual(config.radii, [5, 10, 15])
        self.assertIsNone(config.alpha_grid)
        self.assertIsNone(config.window)

    def test_merge_replaces_lists(self):
        config = RunConfig({"spectral": {"radii": [2]}})
        self.assertListEqual(config.radii, [2])
        self.assertEqual(config.get("spectral.R_out"), 20)

    def test_override(self):
        config = RunConfig()
        config.override({"growth.window": "2:6", "growth.r_max": 8.0, "metric.rule": None})
        self.assertEqual(config.window, (2.0, 6.0))
        self.assertEqual(config.get("metric.rule"), "natural")

    def test_validation(self):
        cases = {
            "rule": {"metric": {"rule": "euclidean"}},
            "convention": {"metric": {"convention": "quarter"}},
            "radius": {"graph": {"radius": 0}},
            "file_without_path": {"graph": {"source": "file"}},
            "window_beyond_r_max": {"growth": {"window": "2:10", "r_max": 5}},
            "delta": {"bounds": {"delta": 1.5}},
            "negative_mu": {"bounds": {"mu": -1.0}},
            "empty_annulus": {"spectral": {"R_in": [20], "R_out": 20}},
            "tolerance": {"spectral": {"tol": 0.0}},
            "alpha_grid": {"spectral": {"alpha_grid": "lin:1:0:3"}},
            "seed": {"runtime": {"seed": -1}},
            "n_jobs": {"runtime": {"n_jobs": 0}},
        }
        for name, parameters in cases.items():
            with self.subTest(name=name):
                with self.assertRaises(ParameterError):
                    RunConfig(parameters)

    def test_parsers(self):
        self.assertEqual(parse_window("10:20"), (10.0, 20.0))
        self.assertIsNone(parse_window(None))
        self.assertListEqual(parse_radii("5,10"), [5, 10])
        for spec in ("10", "20:10", "a:b"):
            with self.subTest(window=spec):
                with self.assertRaises(ParameterError):
                    parse_window(spec)
        for spec in ("1.5", "-1", ""):
            with self.subTest(radii=spec):
                with self.assertRaises(ParameterError):
                    parse_radii(spec)

    def test_from_file(self):
        path = os.path.join(os.path.dirname(specgrowth.__file__), "config_files", "template_analysis.py")
        config = RunConfig.from_file(path, overrides={"runtime.seed": 3})
        self.assertEqual(config.seed, 3)
        with self.assertRaises(ParameterError):
            RunConfig.from_file("/nonexistent/config.py")


class SerializationTestCases(unittest.TestCase):

    def test_to_jsonable(self):
        obj = {"a": np.float64(np.inf), "b": [np.int64(3), np.nan], "c": np.array([1.0, 2.0]), "d": np.bool_(True),
               "e": (1, -np.inf)}
        self.assertDictEqual(to_jsonable(obj), {"a": "inf", "b": [3, "nan"], "c": [1.0, 2.0], "d": True,
                                                "e": [1, "-inf"]})
        self.assertEqual(json.loads(dumps({"b": 1, "a": 2})), {"a": 2, "b": 1})

    def test_error_line(self):
        record = json.loads(error_line(ResourceCapError("too large", stage="generate", n_vertices=10)))
        self.assertEqual(record["error"], "ResourceCapError")
        self.assertEqual(record["exit_code"], 2)
        self.assertEqual(record["stage"], "generate")
        self.assertEqual(record["details"], {"n_vertices": 10})
        self.assertNotIn("\n", error_line(ValueError("plain")))

    def test_emit_csv(self):
        dir_name = tempfile.mkdtemp()
        self.addCleanup(shutil.rmtree, dir_name)
        lst_paths = emit_csv(dir_name, {"distances": np.array([0.0, 1.0, np.inf]), "annulus": None,
                                        "exhaustion": [{"R": 3, "eigenvalue": 2.5, "residual": 1E-12}]})
        self.assertEqual(len(lst_paths), 2)
        with io.open(os.path.join(dir_name, "distances.csv"), mode="r") as ifs:
            lst_lines = ifs.read().splitlines()
        self.assertListEqual(lst_lines, ["vertex,dist", "0,0.0", "1,1.0", "2,inf"])
        with self.assertRaises(NotImplementedError):
            emit_csv(dir_name, {"histogram": []})


class PipelineTestCases(unittest.TestCase):

    @classmethod
    def setUpClass(cls) -> None:
        cls._config = RunConfig(_SMALL_ANALYSIS)
        cls._result, cls._tables = cmd_analyze(cls._config, with_tables=True)
        cls._dir = tempfile.mkdtemp()

    @classmethod
    def tearDownClass(cls) -> None:
        shutil.rmtree(cls._dir)

    def test_report_sections(self):
        for key in ("graph", "metric", "adaptedness", "jump_size", "growth", "classification", "bounds", "spectral",
                    "assumptions", "notes", "warnings", "version", "seed", "timestamp", "config"):
            with self.subTest(key=key):
                self.assertIn(key, self._result)
        self.assertEqual(self._result["graph"]["n_vertices"], 285)
        self.assertEqual(self._result["graph"]["family"]["n_vertices"], 285)
        json.loads(dumps(self._result))

    def test_classification(self):
        classification = self._result["classification"]
        self.assertEqual(classification["class"], "cubic")
        self.assertEqual(classification["conclusion"], "finite-ess")
        self.assertTrue(classification["applies_to_graph_laplacian"])
        self.assertTrue(any("cubic" in note for note in self._result["notes"]))

    def test_growth_and_bounds(self):
        growth = self._result["growth"]
        self.assertListEqual(growth["window"], [4.0, 8.0])
        self.assertListEqual(growth["centers"], [0])
        bounds = self._result["bounds"]
        self.assertEqual(bounds["pairing"]["lambda0"], "mu_tilde")
        # unit measure with many neighbours: the natural distance is not adapted
        self.assertFalse(bounds["metric_adapted"])
        self.assertIn("caveat", bounds)

    def test_spectral(self):
        spectral = self._result["spectral"]
        self.assertListEqual([row["R"] for row in spectral["exhaustion"]], [3, 5])
        self.assertEqual(spectral["annulus"][0]["R_in"], 2)
        self.assertTrue(spectral["supersolution"]["ok"])
        self.assertTrue(spectral["flags"]["exhaustion_nonincreasing"])
        self.assertTrue(spectral["flags"]["exhaustion_above_supersolution_lambda"])
        self.assertTrue(spectral["degree_comparison"]["ok"])
        self.assertIsNotNone(spectral["variational"])
        self.assertTrue(any("bracket" in message for message in self._result["warnings"]))

    def test_supersolution_only_for_cubic_antitree(self):
        self.assertTrue(is_cubic_antitree(antitree("poly:2"), 8))
        for family in (antitree("poly:1"), antitree("poly:3"), antitree("poly:2", measure_rule="weighted-degree"),
                       tree("geom:2"), None):
            with self.subTest(family=None if family is None else family.label):
                self.assertFalse(is_cubic_antitree(family, 8))

        config = RunConfig({"graph": {"family": "antitree", "spheres": "poly:1", "radius": 8},
                            "spectral": {"radii": [3, 5], "R_in": [2], "R_out": 6}})
        result, _ = cmd_spectrum(config)
        self.assertIsNone(result["spectral"]["supersolution"])
        self.assertNotIn("exhaustion_above_supersolution_lambda", result["spectral"]["flags"])

    def test_assumptions_note(self):
        self.assertEqual(self._result["assumptions"]["operator"], "L")
        self.assertIn(self._result["assumptions"]["note"], self._result["notes"])

    def test_tables(self):
        lst_paths = emit_csv(self._dir, self._tables)
        lst_names = sorted(os.path.basename(path) for path in lst_paths)
        self.assertListEqual(lst_names, ["annulus.csv", "ball_table.csv", "distances.csv", "exhaustion.csv",
                                         "solver_trace.csv"])

    def test_generate(self):
        path = os.path.join(self._dir, "tree.json")
        ret = cmd_generate(RunConfig({"graph": {"family": "tree", "spheres": "geom:3", "radius": 4}}), path)
        self.assertEqual(ret["n_vertices"], 121)
        self.assertEqual(read_graph(path).n_vertices, 121)

    def test_graph_file_with_huang_metric(self):
        path = os.path.join(self._dir, "antitree.json")
        write_graph(truncate(antitree("poly:1"), 6), path)
        config = RunConfig({"graph": {"source": "file", "path": path}, "metric": {"rule": "huang"}})
        result, _ = cmd_growth(config)
        self.assertTrue(result["adaptedness"]["ok"])
        self.assertEqual(result["metric"]["convention"], "full")
        self.assertGreaterEqual(result["growth"]["mu_hat"], 0.0)
        self.assertIsNotNone(result["classification"]["beta_hat"])

    def test_disconnected_graph_file(self):
        path = os.path.join(self._dir, "two_parts.json")
        with io.open(path, mode="w") as ofs:
            json.dump({"n": 5, "measure": [1, 1, 1, 1, 1], "edges": [[0, 1, 1.0], [2, 3, 1.0], [3, 4, 1.0]]}, ofs)
        config = RunConfig({"graph": {"source": "file", "path": path}, "metric": {"root": 3}})
        with self.assertRaises(DisconnectedGraphError):
            load_graph(config)

        config = RunConfig({"graph": {"source": "file", "path": path, "allow_disconnected": True},
                            "metric": {"root": 3}})
        g, family, root = load_graph(config)
        self.assertIsNone(family)
        self.assertEqual((g.n_vertices, root), (5, 3))

        result, dict_tables = cmd_metric(config, with_tables=True)
        self.assertEqual(result["metric"]["dist_max_finite"], 1.0)
        self.assertEqual(result["metric"]["n_unreachable"], 2)
        vec_dist = np.asarray(dict_tables["distances"])
        self.assertTrue(np.all(np.isinf(vec_dist[[0, 1]])))
        np.testing.assert_array_equal(vec_dist[[2, 3, 4]], [1.0, 0.0, 1.0])

        lst_components = result["components"]
        self.assertEqual(len(lst_components), 2)
        self.assertListEqual(sorted((c["root"], c["n_vertices"]) for c in lst_components), [(0, 2), (3, 3)])
        for component in lst_components:
            with self.subTest(root=component["root"]):
                self.assertEqual(component["contains_root"], component["root"] == 3)
                self.assertEqual(component["metric"]["n_unreachable"], 0)
                self.assertEqual(component["metric"]["dist_max_finite"], 1.0)
        self.assertTrue(any("disconnected" in note for note in result["notes"]))

    def test_bounds_from_rates(self):
        result, dict_tables = cmd_bounds(RunConfig({"bounds": {"mu": 2.0, "mu_tilde": 1.0, "delta": 1.0}}))
        self.assertEqual(result["bounds"]["mu"]["brooks"], 1.0)
        self.assertEqual(result["bounds"]["mu_tilde"]["brooks"], 0.25)
        self.assertAlmostEqual(result["bounds"]["normalized_only"], 1.0 - 2.0 * np.e / (1.0 + np.e ** 2))
        self.assertDictEqual(dict_tables, {})

    def test_stage_tag(self):
        config = RunConfig({"graph": {"radius": 3}, "growth": {"window": "5:6"}})
        with self.assertRaises(ParameterError) as context:
            cmd_growth(config)
        self.assertEqual(context.exception.stage, "growth")


class VerifyTestCases(unittest.TestCase):

    def test_all_suites(self):
        result = cmd_verify(RunConfig(_SMALL_VERIFY))
        self.assertSetEqual(set(result["suites"].keys()), {suite.name for suite in SUITES})
        for name, report in result["suites"].items():
            with self.subTest(suite=name):
                self.assertTrue(report["ok"], msg=report)
        self.assertTrue(result["ok"])

    def test_subset(self):
        result = cmd_verify(RunConfig(_SMALL_VERIFY), suites=["bound_identities"])
        self.assertListEqual(list(result["suites"].keys()), ["bound_identities"])
        self.assertLessEqual(result["suites"]["bound_identities"]["identity_error"], 1E-12)


class CommandLineTestCases(unittest.TestCase):

    def setUp(self) -> None:
        self._dir = tempfile.mkdtemp()
        self.addCleanup(shutil.rmtree, self._dir)

    def test_generate(self):
        path = os.path.join(self._dir, "tree.json")
        with mock.patch("sys.stdout", new_callable=io.StringIO) as stdout:
            exit_code = specgrowth.main(["generate", "tree", "--branching", "3", "--depth", "4", "--out", path])
        self.assertEqual(exit_code, 0)
        self.assertEqual(json.loads(stdout.getvalue())["n_vertices"], 121)
        self.assertEqual(read_graph(path).n_vertices, 121)

    def test_generate_example(self):
        path = os.path.join(self._dir, "line.json")
        with mock.patch("sys.stdout", new_callable=io.StringIO):
            exit_code = specgrowth.main(["generate", "--example", "integer-line", "--radius", "5", "--out", path])
        self.assertEqual(exit_code, 0)
        self.assertEqual(read_graph(path).n_vertices, 11)

    def test_bounds(self):
        path = os.path.join(self._dir, "bounds.json")
        exit_code = specgrowth.main(["bounds", "--mu", "2.0", "--out", path])
        self.assertEqual(exit_code, 0)
        with io.open(path, mode="r") as ifs:
            result = json.load(ifs)
        self.assertEqual(result["bounds"]["mu"]["brooks"], 1.0)
        self.assertEqual(result["seed"], 0)

    def test_exit_codes(self):
        with mock.patch("sys.stderr", new_callable=io.StringIO) as stderr:
            exit_code = specgrowth.main(["metric", "--graph", os.path.join(self._dir, "missing.json")])
        self.assertEqual(exit_code, 1)
        self.assertEqual(json.loads(stderr.getvalue().strip().splitlines()[-1])["error"], "GraphFormatError")

        with mock.patch.dict(os.environ, {"SPECGROWTH_MAX_VERTICES": "100"}):
            with mock.patch("sys.stderr", new_callable=io.StringIO) as stderr:
                exit_code = specgrowth.main(["generate", "--example", "antitree-cubic", "--radius", "40",
                                             "--out", os.path.join(self._dir, "big.json")])
        self.assertEqual(exit_code, 2)
        record = json.loads(stderr.getvalue().strip().splitlines()[-1])
        self.assertEqual(record["error"], "ResourceCapError")
        self.assertEqual(record["stage"], "generate")

        with mock.patch.dict(os.environ, {"SPECGROWTH_MAX_VERTICES": "abc"}):
            with mock.patch("sys.stderr", new_callable=io.StringIO) as stderr:
                exit_code = specgrowth.main(["generate", "--example", "integer-line", "--radius", "3",
                                             "--out", os.path.join(self._dir, "line.json")])
        self.assertEqual(exit_code, 1)
        record = json.loads(stderr.getvalue().strip().splitlines()[-1])
        self.assertEqual(record["error"], "ParameterError")
        self.assertEqual(record["details"]["key"], "SPECGROWTH_MAX_VERTICES")

    def test_disconnected_graph(self):
        path = os.path.join(self._dir, "two_parts.json")
        with io.open(path, mode="w") as ofs:
            json.dump({"n": 4, "measure": [1, 1, 1, 1], "edges": [[0, 1, 1.0], [2, 3, 1.0]]}, ofs)
        with mock.patch("sys.stderr", new_callable=io.StringIO) as stderr:
            exit_code = specgrowth.main(["metric", "--graph", path])
        self.assertEqual(exit_code, 1)
        self.assertEqual(json.loads(stderr.getvalue().strip().splitlines()[-1])["error"], "DisconnectedGraphError")

        path_out = os.path.join(self._dir, "metric.json")
        exit_code = specgrowth.main(["metric", "--graph", path, "--allow-disconnected", "--out", path_out])
        self.assertEqual(exit_code, 0)
        with io.open(path_out, mode="r") as ifs:
            result = json.load(ifs)
        self.assertEqual(result["metric"]["n_unreachable"], 2)
        self.assertEqual(len(result["components"]), 2)
        self.assertTrue(result["config"]["graph"]["allow_disconnected"])

    def test_verify_subset(self):
        path = os.path.join(self._dir, "verify.json")
        exit_code = specgrowth.main(["verify", "--suite", "bound_identities", "--suite", "elementary_inequalities",
                                     "--out", path])
        self.assertEqual(exit_code, 0)
        with io.open(path, mode="r") as ifs:
            result = json.load(ifs)
        self.assertTrue(result["ok"])
        self.assertEqual(len(result["suites"]), 2)
