#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import absolute_import
from __future__ import unicode_literals
from __future__ import division
from __future__ import print_function

import unittest
import numpy as np
from hypothesis import given, settings, strategies as st

from graph.exceptions import ParameterError
from bounds.brooks import brooks_bound, jump_bound, normalized_bound, bound_set, bound_set_pair, BoundSet

_mu = st.floats(min_value=0.0, max_value=50.0, allow_nan=False)


class BrooksBoundTestCases(unittest.TestCase):

    def test_values(self):
        self.assertEqual(brooks_bound(2.0), 1.0)
        self.assertEqual(brooks_bound(2.0, halved=True), 0.5)
        self.assertEqual(brooks_bound(0.0), 0.0)
        self.assertTrue(np.isinf(brooks_bound(np.inf)))

    def test_invalid_rate(self):
        for mu in (-1.0, np.nan):
            with self.subTest(mu=mu):
                with self.assertRaises(ParameterError):
                    brooks_bound(mu)


class JumpBoundTestCases(unittest.TestCase):

    def test_closed_form(self):
        for mu in (0.1, 1.0, 3.0, 10.0):
            for delta in (0.25, 0.5, 1.0):
                with self.subTest(mu=mu, delta=delta):
                    expected = 2.0 * (np.exp(mu / 2.0) - 1.0) ** 2 / (delta ** 2 * np.exp(mu) + 1.0)
                    self.assertAlmostEqual(jump_bound(mu, delta), expected, delta=1E-12 * max(1.0, expected))
                    self.assertAlmostEqual(jump_bound(mu, delta, halved=True), expected / 2.0,
                                           delta=1E-12 * max(1.0, expected))

    def test_large_rate_saturates(self):
        self.assertAlmostEqual(jump_bound(2000.0, 0.5), 2.0 / 0.25)
        self.assertTrue(np.isinf(jump_bound(np.inf, 0.5)))

    def test_zero_delta(self):
        self.assertAlmostEqual(jump_bound(2.0, 0.0), 2.0 * (np.e - 1.0) ** 2)

    def test_invalid_delta(self):
        for delta in (-0.1, 1.5):
            with self.subTest(delta=delta):
                with self.assertRaises(ParameterError):
                    jump_bound(1.0, delta)

    @settings(derandomize=True, deadline=None, max_examples=100)
    @given(mu=_mu, delta=st.floats(min_value=0.01, max_value=1.0))
    def test_below_two_over_delta_squared(self, mu, delta):
        self.assertLessEqual(jump_bound(mu, delta), 2.0 / delta ** 2 * (1.0 + 1E-12))

    @settings(derandomize=True, deadline=None, max_examples=200)
    @given(mu=st.floats(min_value=1E-6, max_value=10.0))
    def test_unit_jump_below_brooks(self, mu):
        # 1 - sech(x) <= x^2/2
        self.assertLessEqual(jump_bound(mu, 1.0), brooks_bound(mu) * (1.0 + 1E-12))

    @settings(derandomize=True, deadline=None, max_examples=100)
    @given(mu=_mu, step=st.floats(min_value=0.0, max_value=5.0), delta=st.floats(min_value=0.0, max_value=1.0))
    def test_monotone_in_rate(self, mu, step, delta):
        self.assertLessEqual(jump_bound(mu, delta), jump_bound(mu + step, delta) * (1.0 + 1E-12))


class NormalizedBoundTestCases(unittest.TestCase):

    def test_values(self):
        self.assertAlmostEqual(normalized_bound(np.log(3.0)), 1.0 - np.sqrt(3.0) / 2.0, places=14)
        self.assertEqual(normalized_bound(0.0), 0.0)
        self.assertEqual(normalized_bound(np.inf), 1.0)
        # 1 - 2e^{mu/2}/(1+e^mu) ~ mu^2/8 near zero
        self.assertAlmostEqual(normalized_bound(1E-6) / (1E-12 / 8.0), 1.0, places=6)

    @settings(derandomize=True, deadline=None, max_examples=200)
    @given(mu=_mu)
    def test_half_of_unit_jump_bound(self, mu):
        expected = jump_bound(mu, 1.0) / 2.0
        self.assertLessEqual(abs(normalized_bound(mu) - expected), 1E-12 * max(expected, 1E-300))

    @settings(derandomize=True, deadline=None, max_examples=100)
    @given(mu=_mu)
    def test_range(self, mu):
        value = normalized_bound(mu)
        self.assertGreaterEqual(value, 0.0)
        self.assertLessEqual(value, 1.0)


class BoundSetTestCases(unittest.TestCase):

    def test_bound_set(self):
        ret = bound_set(2.0, delta=1.0).to_dict()
        self.assertEqual(ret["brooks"], 1.0)
        self.assertAlmostEqual(ret["jump_refined"], 2.0 * normalized_bound(2.0))
        self.assertDictEqual(ret["inputs"], {"mu": 2.0, "rate": "mu", "delta": 1.0})
        self.assertIsNone(bound_set(2.0).jump_refined)
        with self.assertRaises(ParameterError):
            BoundSet(1.0, label="nu", delta=None, halved=False)

    def test_pairing(self):
        ret = bound_set_pair(1.0, 0.5, delta=0.5)
        self.assertEqual(ret["pairing"]["lambda0"], "mu_tilde")
        self.assertEqual(ret["pairing"]["lambda0_ess"], "mu")
        self.assertEqual(ret["pairing"]["normalized_corollary_reading"], {"lambda0": "mu", "lambda0_ess": "mu_tilde"})
        self.assertEqual(ret["mu_tilde"]["brooks"], 0.0625)
        self.assertEqual(ret["mu"]["brooks"], 0.25)

        ret = bound_set_pair(1.0, None)
        self.assertIsNone(ret["mu_tilde"])
        self.assertEqual(ret["pairing"]["lambda0"], "mu")

    def test_subexponential(self):
        ret = bound_set_pair(0.0, 0.0)
        self.assertTrue(ret["subexponential"]["lambda0_is_zero"])
        self.assertTrue(ret["subexponential"]["lambda0_ess_is_zero"])
        self.assertEqual(ret["mu"]["brooks"], 0.0)
        self.assertEqual(ret["mu"]["normalized"], 0.0)
