# coding=utf-8
"""
晶格与规范场模块
"""

from tpst.model.lattice import (
    FLAVORS,
    SUBLATTICES,
    LINK_TYPES,
    ROW_SPACING,
    Geometry,
    Site,
    Link,
    Plaquette,
    DanglingPair,
    Lattice,
    build_lattice,
    boundary_cycles,
    dangling_pairs,
)
from tpst.model.gauge import (
    GaugeConfig,
    FluxPattern,
    DualPath,
    ground_gauge,
    flux_pattern,
    gauge_transform,
    reverse_triangle_fluxes,
    dual_path,
    insert_vortex_pair,
    is_translation_invariant,
)

__all__ = [
    "FLAVORS",
    "SUBLATTICES",
    "LINK_TYPES",
    "ROW_SPACING",
    "Geometry",
    "Site",
    "Link",
    "Plaquette",
    "DanglingPair",
    "Lattice",
    "build_lattice",
    "boundary_cycles",
    "dangling_pairs",
    "GaugeConfig",
    "FluxPattern",
    "DualPath",
    "ground_gauge",
    "flux_pattern",
    "gauge_transform",
    "reverse_triangle_fluxes",
    "dual_path",
    "insert_vortex_pair",
    "is_translation_invariant",
]
