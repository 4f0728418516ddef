from .exactpoly import (
    INFINITY,
    Polynomial,
    RationalFunction,
    count_real_roots,
    isolate_real_roots,
    sign_on_circle,
    sturm_sequence,
    validate_g,
)
from .bundle import (
    BaseCurve,
    CircleData,
    ConicBundleSpec,
    SurfaceState,
    Transformation,
    apply_blowup,
    apply_elm,
    build_minimal_surface,
    component_census,
    realize,
)
from .cohom import (
    CohomologyLattice,
    GroupInvariants,
    LatticeElement,
    algebraic_generators,
    gamma,
    is_member,
    lattice_of,
    quotient_group,
    restriction_table,
    smith_normal_form,
)
from .decide import (
    ClosedSurface,
    CRationalSurfaceKind,
    MapDescriptor,
    RationalTargetDescriptor,
    canonical_class_vanishes,
    decide_approx_rational_target,
    decide_approx_sphere,
    decide_by_criterion,
    gamma_c_rational,
    to_lattice_element,
)
from .oracle import numeric_component_count, numeric_root_count
from .io import SpecDocument, parse_spec, read_spec, serialize_spec, write_spec
from .report import ConicBundleSummaryNamespace, Report, analyze, analyze_directory
from .config import AnalysisOptions


__version__ = "0.1.0"

__all__ = [
    "INFINITY",
    "Polynomial",
    "RationalFunction",
    "count_real_roots",
    "isolate_real_roots",
    "sign_on_circle",
    "sturm_sequence",
    "validate_g",
    "BaseCurve",
    "CircleData",
    "ConicBundleSpec",
    "SurfaceState",
    "Transformation",
    "apply_blowup",
    "apply_elm",
    "build_minimal_surface",
    "component_census",
    "realize",
    "CohomologyLattice",
    "GroupInvariants",
    "LatticeElement",
    "algebraic_generators",
    "gamma",
    "is_member",
    "lattice_of",
    "quotient_group",
    "restriction_table",
    "smith_normal_form",
    "ClosedSurface",
    "CRationalSurfaceKind",
    "MapDescriptor",
    "RationalTargetDescriptor",
    "canonical_class_vanishes",
    "decide_approx_rational_target",
    "decide_approx_sphere",
    "decide_by_criterion",
    "gamma_c_rational",
    "to_lattice_element",
    "numeric_component_count",
    "numeric_root_count",
    "SpecDocument",
    "parse_spec",
    "read_spec",
    "serialize_spec",
    "write_spec",
    "ConicBundleSummaryNamespace",
    "Report",
    "analyze",
    "analyze_directory",
    "AnalysisOptions",
]
