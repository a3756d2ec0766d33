#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import absolute_import
from __future__ import unicode_literals
from __future__ import division
from __future__ import print_function

from typing import Optional, Dict, Any
import numpy as np

from graph.exceptions import ParameterError

RATE_LABELS = ("mu", "mu_tilde")


def _check_mu(mu: float):
    if np.isnan(mu) or mu < 0.0:
        raise ParameterError(f"growth rate must be nonnegative: {mu}")


def brooks_bound(mu: float, halved: bool = False) -> float:
    """
    mu^2/4, divided by 2 when the metric is intrinsic under the full convention.
    """
    _check_mu(mu)
    if np.isinf(mu):
        return np.inf
    ret = mu * mu / 4.0
    return ret / 2.0 if halved else ret


def jump_bound(mu: float, delta: float, halved: bool = False) -> float:
    """
    refined bound 2(e^{mu/2}-1)^2 / (delta^2 e^mu + 1) for jump size in [delta, 1].
    evaluated as 2 (1 - e^{-mu/2})^2 / (delta^2 + e^{-mu}) so that large mu does not overflow.
    """
    _check_mu(mu)
    if not (0.0 <= delta <= 1.0):
        raise ParameterError(f"delta must lie in [0, 1]; rescale the lengths first: {delta}")
    if np.isinf(mu):
        return np.inf
    if delta == 0.0:
        ret = 2.0 * np.expm1(mu / 2.0) ** 2
    else:
        ret = 2.0 * (-np.expm1(-mu / 2.0)) ** 2 / (delta * delta + np.exp(-mu))
    return float(ret / 2.0 if halved else ret)


def normalized_bound(mu: float) -> float:
    """
    1 - 2e^{mu/2}/(1+e^mu), evaluated as (1 - e^{-mu/2})^2 / (1 + e^{-mu}) to avoid cancellation near 0.
    """
    _check_mu(mu)
    if np.isinf(mu):
        return 1.0
    return float(np.expm1(-mu / 2.0) ** 2 / (1.0 + np.exp(-mu)))


class BoundSet(object):

    def __init__(self, mu: float, label: str, delta: Optional[float], halved: bool):
        if label not in RATE_LABELS:
            raise ParameterError(f"unsupported rate label: {label}")
        self.mu = mu
        self.label = label
        self.delta = delta
        self.halved = halved
        self.brooks = brooks_bound(mu, halved=halved)
        self.jump_refined = None if delta is None else jump_bound(mu, delta, halved=halved)
        self.normalized = normalized_bound(mu)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "brooks": self.brooks,
            "jump_refined": self.jump_refined,
            "normalized": self.normalized,
            "halved": self.halved,
            "inputs": {"mu": self.mu, "rate": self.label, "delta": self.delta}
        }

    def __repr__(self):
        return f"BoundSet({self.label}={self.mu}, brooks={self.brooks}, jump_refined={self.jump_refined}, " \
               f"normalized={self.normalized})"


def bound_set(mu: float, delta: Optional[float] = None, halved: bool = False, label: str = "mu") -> BoundSet:
    return BoundSet(mu=mu, label=label, delta=delta, halved=halved)


def bound_set_pair(mu_hat: float, mu_tilde_hat: Optional[float], delta: Optional[float] = None,
                   halved: bool = False) -> Dict[str, Any]:
    """
    bounds from both growth rates. mu_tilde bounds lambda_0 and mu bounds lambda_0^ess; the normalized-Laplacian
    corollary states the transposed pairing, so both readings are reported.
    """
    set_mu = bound_set(mu_hat, delta=delta, halved=halved, label="mu")
    set_mu_tilde = None if mu_tilde_hat is None else bound_set(mu_tilde_hat, delta=delta, halved=halved,
                                                              label="mu_tilde")
    ret = {
        "mu": set_mu.to_dict(),
        "mu_tilde": None if set_mu_tilde is None else set_mu_tilde.to_dict(),
        "pairing": {
            "lambda0": "mu_tilde" if set_mu_tilde is not None else "mu",
            "lambda0_ess": "mu",
            "normalized_corollary_reading": {"lambda0": "mu", "lambda0_ess": "mu_tilde"}
        },
        "subexponential": {
            "lambda0_is_zero": set_mu_tilde is not None and mu_tilde_hat == 0.0,
            "lambda0_ess_is_zero": mu_hat == 0.0
        }
    }
    return ret
