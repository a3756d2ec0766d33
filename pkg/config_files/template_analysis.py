#!/usr/bin/env python
# -*- coding:utf-8 -*-

# default run configuration. command-line flags override single keys (see specgrowth.py).

analysis_parameters = {
    "graph": {
        # "file" reads --graph; "generator" builds a truncation of a spherically symmetric family
        "source": "generator",
        "path": None,
        "family": "antitree",
        "spheres": "poly:2",
        "measure_rule": "unit",
        "radius": 20,
        "allow_disconnected": False
    },
    "metric": {
        "rule": "natural",
        "convention": "half",
        "root": 0
    },
    "growth": {
        "r_max": None, # None: largest finite distance
        "window": None, # None: [r_max/2, r_max]
        "method": "pointwise",
        "step": None, # None: 1 for the natural distance, delta_min/2 otherwise
        "max_centers": 256,
        "beta_window": None, # None: [max(2, r_max/4), r_max] on the natural distance
        "beta_radius": 200, # analytic volumes of generated families reach this radius
        "cubic_band": 0.15
    },
    "bounds": {
        # explicit rates for `specgrowth.py bounds` without a graph; None: estimated from the graph
        "mu": None,
        "mu_tilde": None,
        "delta": None,
        "halved": False
    },
    "spectral": {
        "alpha_grid": "auto", # auto | lin:BEGIN:END:N | geom:BEGIN:END:N | comma separated values
        "r_grid": None, # None: 1..admissible radius
        "radii": [5, 10, 15],
        "R_in": [3, 6],
        "R_out": 20,
        "tol": 1E-10,
        "exhaustion_mode": "auto",
        "supersolution_lambda": 2.0
    },
    "verify": {
        "n_graphs": 50,
        "n_instances": 200,
        "max_vertices": 50,
        "oracle_max_vertices": 200,
        "edge_probability": 0.15
    },
    "runtime": {
        "seed": 0,
        "n_jobs": 1
    }
}
