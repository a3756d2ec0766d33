#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import absolute_import
from __future__ import unicode_literals
from __future__ import division
from __future__ import print_function

from typing import Optional, Callable, Union, List, Tuple, Dict, Any
import json
import logging
import numpy as np

from config_files import resource_limits
from .exceptions import InvalidSphereProfileError, ResourceCapError, ParameterError
from .weighted_graph import WeightedGraph

logger = logging.getLogger(__name__)

SphereSizeRule = Callable[[int], int]

_KINDS = ("antitree", "tree", "line")
_MEASURE_RULES = ("unit", "weighted-degree")
# profiles are rules over all r; they are checked eagerly on this prefix and again on every truncation range.
_PROFILE_CHECK_DEPTH = 32


class SphereProfile(object):
    """
    sphere-size rule r -> s_r parsed from the mini-grammar.

    poly:k      s_r = (r+1)^k
    const:c     s_0 = 1, s_r = c for r >= 1
    geom:q      s_r = q^r
    regular:d   s_0 = 1, s_r = d(d-1)^(r-1)  (d-regular tree)
    list:[..]   explicit sizes, the last value is repeated
    """

    def __init__(self, rule: SphereSizeRule, label: str):
        self._rule = rule
        self.label = label

    @classmethod
    def parse(cls, spec: str) -> "SphereProfile":
        spec = spec.strip()
        if ":" not in spec:
            raise InvalidSphereProfileError(f"malformed sphere profile `{spec}`: expected `kind:value`.")
        kind, value = spec.split(":", 1)
        kind = kind.strip().lower()
        if kind not in ("poly", "const", "geom", "regular", "list"):
            raise InvalidSphereProfileError(f"unsupported sphere profile kind `{kind}` in `{spec}`; "
                                            f"use one of poly, const, geom, regular, list.")
        try:
            if kind == "poly":
                k = int(value)
                assert k >= 0
                rule = lambda r: (r + 1) ** k
            elif kind == "const":
                c = int(value)
                assert c >= 1
                rule = lambda r: 1 if r == 0 else c
            elif kind == "geom":
                q = int(value)
                assert q >= 1
                rule = lambda r: q ** r
            elif kind == "regular":
                d = int(value)
                assert d >= 2
                rule = lambda r: 1 if r == 0 else d * (d - 1) ** (r - 1)
            elif kind == "list":
                lst_sizes = json.loads(value)
                assert isinstance(lst_sizes, list) and len(lst_sizes) > 0
                lst_sizes = [int(s) for s in lst_sizes]
                rule = lambda r: lst_sizes[min(r, len(lst_sizes) - 1)]
        except (ValueError, AssertionError, json.JSONDecodeError):
            raise InvalidSphereProfileError(f"malformed sphere profile `{spec}`.")
        return cls(rule=rule, label=f"{kind}:{value.strip()}")

    def __call__(self, r: int) -> int:
        return int(self._rule(int(r)))

    def __repr__(self):
        return f"SphereProfile({self.label})"


class SphericallySymmetricFamily(object):
    """
    rule-based infinite graph with root sphere S_0 = {x_0}, unit edge weights and analytic sphere sizes.
    vertices are ordered sphere by sphere, in creation order inside a sphere.
    """

    def __init__(self, kind: str, sphere_size: Union[str, SphereSizeRule, SphereProfile],
                 measure_rule: str = "unit"):

        if kind not in _KINDS:
            raise ParameterError(f"unsupported family kind: {kind}")
        if measure_rule not in _MEASURE_RULES:
            raise ParameterError(f"unsupported measure rule: {measure_rule}; use one of {', '.join(_MEASURE_RULES)}")

        if isinstance(sphere_size, str):
            sphere_size = SphereProfile.parse(sphere_size)
        elif not isinstance(sphere_size, SphereProfile):
            sphere_size = SphereProfile(rule=sphere_size, label=getattr(sphere_size, "__name__", "custom"))

        self._kind = kind
        self._profile = sphere_size
        self._measure_rule = measure_rule
        self._sizes_cache = []
        self.validate_profile(_PROFILE_CHECK_DEPTH)

    @property
    def kind(self) -> str:
        return self._kind

    @property
    def measure_rule(self) -> str:
        return self._measure_rule

    @property
    def profile(self) -> SphereProfile:
        return self._profile

    @property
    def label(self) -> str:
        return f"{self._kind}({self._profile.label}, m={self._measure_rule})"

    def with_measure_rule(self, measure_rule: str) -> "SphericallySymmetricFamily":
        return SphericallySymmetricFamily(kind=self._kind, sphere_size=self._profile, measure_rule=measure_rule)

    def sphere_size(self, r: int) -> int:
        if r < 0:
            return 0
        while len(self._sizes_cache) <= r:
            self._sizes_cache.append(self._profile(len(self._sizes_cache)))
        return self._sizes_cache[r]

    def sphere_sizes(self, R: int) -> List[int]:
        return [self.sphere_size(r) for r in range(R + 1)]

    def validate_profile(self, R: int):
        if self.sphere_size(0) != 1:
            raise InvalidSphereProfileError(f"{self.label}: s_0 must be 1, got {self.sphere_size(0)}.")
        for r in range(1, R + 2):
            s_r = self.sphere_size(r)
            if s_r < 1:
                raise InvalidSphereProfileError(f"{self.label}: s_{r} = {s_r} must be >= 1.", radius=r)
            if self._kind == "tree" and s_r % self.sphere_size(r - 1) != 0:
                raise InvalidSphereProfileError(f"{self.label}: tree profile requires s_{r-1} | s_{r}, "
                                                f"got s_{r-1}={self.sphere_size(r-1)}, s_{r}={s_r}.", radius=r)
            if self._kind == "line" and s_r != 2:
                raise InvalidSphereProfileError(f"{self.label}: the integer line has s_r = 2 for r >= 1.", radius=r)

    def edges_between(self, r: int) -> int:
        """
        number of edges joining S_r and S_{r+1}.
        """
        if r < 0:
            return 0
        if self._kind == "antitree":
            return self.sphere_size(r) * self.sphere_size(r + 1)
        elif self._kind == "tree":
            return self.sphere_size(r + 1)
        else:
            return 2

    def sphere_degree(self, r: int) -> float:
        """
        weighted degree n(x) of a vertex of S_r in the infinite graph.
        """
        s_r = self.sphere_size(r)
        return (self.edges_between(r - 1) + self.edges_between(r)) / s_r

    def sphere_measure(self, r: int) -> float:
        if self._measure_rule == "unit":
            return 1.0
        return self.sphere_degree(r)

    def n_vertices(self, R: int) -> int:
        return sum(self.sphere_sizes(R))

    def n_edges(self, R: int) -> int:
        return sum(self.edges_between(r) for r in range(R))

    def __repr__(self):
        return f"SphericallySymmetricFamily({self.label})"


def antitree(sphere_size: Union[str, SphereSizeRule], measure_rule: str = "unit") -> SphericallySymmetricFamily:
    return SphericallySymmetricFamily(kind="antitree", sphere_size=sphere_size, measure_rule=measure_rule)


def tree(sphere_size: Union[str, SphereSizeRule], measure_rule: str = "unit") -> SphericallySymmetricFamily:
    return SphericallySymmetricFamily(kind="tree", sphere_size=sphere_size, measure_rule=measure_rule)


def integer_line(measure_rule: str = "unit") -> SphericallySymmetricFamily:
    return SphericallySymmetricFamily(kind="line", sphere_size="const:2", measure_rule=measure_rule)


def family_from_spec(kind: str, spheres: Optional[str] = None, measure_rule: str = "unit") -> SphericallySymmetricFamily:
    if kind == "line":
        return integer_line(measure_rule=measure_rule)
    if spheres is None:
        raise ParameterError(f"family `{kind}` requires a sphere profile.")
    return SphericallySymmetricFamily(kind=kind, sphere_size=spheres, measure_rule=measure_rule)


def _check_resources(family: SphericallySymmetricFamily, R: int,
                     max_vertices: Optional[int], max_edges: Optional[int]):
    max_vertices = resource_limits.max_vertices() if max_vertices is None else max_vertices
    max_edges = resource_limits.max_edges() if max_edges is None else max_edges
    n_vertices = family.n_vertices(R)
    n_edges = family.n_edges(R)
    if n_vertices > max_vertices or n_edges > max_edges:
        raise ResourceCapError(f"truncation of {family.label} at R={R} needs {n_vertices} vertices and {n_edges} edges; "
                               f"caps are {max_vertices} vertices and {max_edges} edges.",
                               n_vertices=n_vertices, n_edges=n_edges, max_vertices=max_vertices, max_edges=max_edges)


def truncate(family: SphericallySymmetricFamily, R: int,
             max_vertices: Optional[int] = None, max_edges: Optional[int] = None) -> WeightedGraph:
    """
    materializes spheres 0..R with all internal edges. sphere R is marked as boundary.
    b = 1 on edges; m follows the family's measure rule evaluated on the infinite graph.
    """
    if R < 0:
        raise ParameterError(f"truncation radius must be nonnegative: {R}")
    family.validate_profile(R)
    _check_resources(family, R, max_vertices, max_edges)

    vec_sizes = np.array(family.sphere_sizes(R), dtype=np.int64)
    vec_offsets = np.concatenate(([0], np.cumsum(vec_sizes)))
    n = int(vec_offsets[-1])

    lst_u, lst_v = [], []
    for r in range(R):
        s_r, s_next = int(vec_sizes[r]), int(vec_sizes[r+1])
        begin, begin_next = int(vec_offsets[r]), int(vec_offsets[r+1])
        if family.kind == "antitree":
            u = np.repeat(np.arange(begin, begin + s_r), s_next)
            v = np.tile(np.arange(begin_next, begin_next + s_next), s_r)
        elif family.kind == "tree":
            n_children = s_next // s_r
            v = np.arange(begin_next, begin_next + s_next)
            u = begin + np.arange(s_next) // n_children
        else:
            # S_r = (+r, -r) for r >= 1, the root fans out to both
            v = np.arange(begin_next, begin_next + 2)
            u = np.full(2, begin) if r == 0 else np.arange(begin, begin + 2)
        lst_u.append(u)
        lst_v.append(v)

    vec_u = np.concatenate(lst_u) if lst_u else np.zeros(0, dtype=np.int64)
    vec_v = np.concatenate(lst_v) if lst_v else np.zeros(0, dtype=np.int64)
    vec_w = np.ones(vec_u.size, dtype=np.float64)
    sphere_index = np.repeat(np.arange(R + 1), vec_sizes)
    vec_sphere_measure = np.array([family.sphere_measure(r) for r in range(R + 1)], dtype=np.float64)
    measure = vec_sphere_measure[sphere_index]
    boundary = np.arange(int(vec_offsets[R]), n)

    logger.debug(f"truncated {family.label} at R={R}: n={n}, n_edges={vec_u.size}")
    return WeightedGraph(n=n, vec_u=vec_u, vec_v=vec_v, vec_w=vec_w, measure=measure,
                         boundary=boundary, sphere_index=sphere_index,
                         description=f"{family.label} truncated at R={R}")


def sphere_volumes(family: SphericallySymmetricFamily, R: int) -> List[Tuple[int, int, float]]:
    """
    analytic table of (r, s_r, m(B_r)) for r = 0..R without materializing the graph.
    """
    if R < 0:
        raise ParameterError(f"radius must be nonnegative: {R}")
    lst_rows = []
    volume = 0.0
    for r in range(R + 1):
        s_r = family.sphere_size(r)
        volume += s_r * family.sphere_measure(r)
        lst_rows.append((r, s_r, volume))
    return lst_rows


def radial_quotient(family: SphericallySymmetricFamily, R: int) -> WeightedGraph:
    """
    path graph on nodes 0..R+1 where node r stands for the sphere S_r:
    measure s_r m_r, edge (r, r+1) weighted by the number of edges between S_r and S_{r+1}.
    radial functions have the same energy and norm on the family and on the quotient, so the
    Dirichlet ground energy of B_R equals that of the quotient on nodes 0..R. node R+1 is the boundary.
    """
    if R < 0:
        raise ParameterError(f"radius must be nonnegative: {R}")
    family.validate_profile(R + 1)
    n = R + 2
    vec_u = np.arange(R + 1)
    vec_v = vec_u + 1
    vec_w = np.array([family.edges_between(r) for r in range(R + 1)], dtype=np.float64)
    measure = np.array([family.sphere_size(r) * family.sphere_measure(r) for r in range(n)], dtype=np.float64)
    return WeightedGraph(n=n, vec_u=vec_u, vec_v=vec_v, vec_w=vec_w, measure=measure,
                         boundary=[R + 1], sphere_index=np.arange(n),
                         description=f"radial quotient of {family.label} at R={R}")


def family_summary(family: SphericallySymmetricFamily, R: int) -> Dict[str, Any]:
    return {
        "kind": family.kind,
        "profile": family.profile.label,
        "measure_rule": family.measure_rule,
        "radius": R,
        "n_vertices": family.n_vertices(R),
        "n_edges": family.n_edges(R),
        "sphere_sizes_head": family.sphere_sizes(min(R, 8))
    }
