"""Combinatorial engine for two-tile subdivision rules on the sphere.

The package splits into layers: cells (oriented 2-complexes and their
validator), rules (labeled subdivision rules), subdivision (level
generation and symbolic addresses), expansion / measure (invariants),
curves (invariant-curve search and iteration), export / render / cli
(artifacts).
"""

from .cells import DirectedEdgeRef, OrientedComplex, build_complex, parse_signed
from .curves import (
    Curve,
    CurveTower,
    ReplacementSpec,
    boundary_curve,
    curve_hausdorff_proxy,
    expansion_for_spec,
    find_candidate_curves,
    identity_spec,
    iterate_curve,
    make_replacement_spec,
    parse_replacement_spec,
    serialize_replacement_spec,
    spec_from_curve,
)
from .diagnostics import Diagnostic, EngineError, InvalidComplex, InvalidRule
from .expansion import (
    ExpansionReport,
    OrbitReport,
    brute_force_Dn,
    chain_distance,
    chain_distances_from,
    compute_Dn,
    expansion_report,
    flower,
    joins_opposite_sides,
    m_value,
    orbit_report,
    vertex_m_value,
)
from .export import (
    LoadedComplex,
    complex_export,
    dump_complex,
    load_complex,
    sft_to_dot,
    sft_to_json,
)
from .fixtures import RULE_FIXTURES, fixture
from .measure import (
    EntropyReport,
    MeasureModel,
    closed_form_counts,
    correlation,
    entropy_report,
    measure_model,
    tile_mass,
)
from .render import TutteEmbedding, render_svg, tutte_embed
from .rules import (
    BaseFlag,
    BoundaryEdge,
    Corner,
    LabeledSkeleton,
    SubdivisionRule,
    TileInterior,
    derive_labeling,
    make_rule,
    parse_rule,
    serialize_rule,
)
from .subdivision import (
    Address,
    LevelComplex,
    SftMatrix,
    address_of,
    count_paths,
    generate,
    sft_matrix,
    tile_at,
)

__version__ = "0.1.0"

__all__ = [
    "Address",
    "BaseFlag",
    "BoundaryEdge",
    "Corner",
    "Curve",
    "CurveTower",
    "Diagnostic",
    "DirectedEdgeRef",
    "EngineError",
    "EntropyReport",
    "ExpansionReport",
    "InvalidComplex",
    "InvalidRule",
    "LabeledSkeleton",
    "LevelComplex",
    "LoadedComplex",
    "MeasureModel",
    "OrbitReport",
    "OrientedComplex",
    "ReplacementSpec",
    "RULE_FIXTURES",
    "SftMatrix",
    "SubdivisionRule",
    "TileInterior",
    "TutteEmbedding",
    "address_of",
    "boundary_curve",
    "brute_force_Dn",
    "build_complex",
    "chain_distance",
    "chain_distances_from",
    "closed_form_counts",
    "complex_export",
    "compute_Dn",
    "correlation",
    "count_paths",
    "curve_hausdorff_proxy",
    "derive_labeling",
    "dump_complex",
    "entropy_report",
    "expansion_for_spec",
    "expansion_report",
    "find_candidate_curves",
    "fixture",
    "flower",
    "generate",
    "identity_spec",
    "iterate_curve",
    "joins_opposite_sides",
    "load_complex",
    "m_value",
    "make_replacement_spec",
    "make_rule",
    "measure_model",
    "orbit_report",
    "parse_replacement_spec",
    "parse_rule",
    "parse_signed",
    "render_svg",
    "serialize_replacement_spec",
    "serialize_rule",
    "sft_matrix",
    "sft_to_dot",
    "sft_to_json",
    "spec_from_curve",
    "tile_at",
    "tile_mass",
    "tutte_embed",
    "vertex_m_value",
]
