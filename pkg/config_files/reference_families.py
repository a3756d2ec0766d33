#!/usr/bin/env python
# -*- coding:utf-8 -*-

# generator settings of the reference families. keys are accepted by `specgrowth.py generate --example`.

examples = {
    "antitree-cubic": {"family": "antitree", "spheres": "poly:2", "measure_rule": "unit"},
    "antitree-subcubic": {"family": "antitree", "spheres": "poly:1", "measure_rule": "unit"},
    "antitree-supercubic": {"family": "antitree", "spheres": "poly:3", "measure_rule": "unit"},
    "half-line": {"family": "antitree", "spheres": "poly:0", "measure_rule": "unit"},
    "integer-line": {"family": "line", "spheres": None, "measure_rule": "unit"},
    "binary-tree": {"family": "tree", "spheres": "geom:2", "measure_rule": "unit"},
    "regular-tree-4": {"family": "tree", "spheres": "regular:4", "measure_rule": "weighted-degree"}
}
