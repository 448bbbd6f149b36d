"""Finite bands and the free idempotent generated semigroups IG(B) over them."""

from .band import (
    Band,
    BandClassification,
    BandError,
    BandSyntaxError,
    DClassDecomposition,
    PreconditionError,
    StructureMorphisms,
    build_strong_semilattice,
    classify,
    decompose,
    format_band,
    is_basic_pair,
    parse_band,
    parse_strong_semilattice,
    restrict,
    structure_morphisms,
)
from .bundled import BUNDLED, load
from .decide import (
    EqualityVerdict,
    equal,
    equal_locally_large,
    equal_normal_component,
    equal_rectangular,
    equal_semilattice,
    project_component,
)
from .greens import (
    ConditionPViolation,
    NonAbundanceWitness,
    falsify_condition_p,
    regularity_witness,
    search_nonabundance,
    tilde_idempotent,
    tilde_related,
    verify_nonabundance,
)
from .igword import AlmostNormalForm, SignificantProfile, anf, anf_multiply, significant_indices, y_projection
from .rewrite import (
    Budget,
    ConfluenceReport,
    RewriteCertificate,
    RewriteStep,
    bfs_equal,
    check_certificate,
    check_local_confluence,
    contract,
    expansions,
    normal_form,
    parse_word,
)

__all__ = [
    "AlmostNormalForm",
    "anf",
    "anf_multiply",
    "Band",
    "BandClassification",
    "BandError",
    "BandSyntaxError",
    "bfs_equal",
    "Budget",
    "build_strong_semilattice",
    "BUNDLED",
    "check_certificate",
    "check_local_confluence",
    "classify",
    "ConditionPViolation",
    "ConfluenceReport",
    "contract",
    "DClassDecomposition",
    "decompose",
    "equal",
    "equal_locally_large",
    "equal_normal_component",
    "equal_rectangular",
    "equal_semilattice",
    "EqualityVerdict",
    "expansions",
    "falsify_condition_p",
    "format_band",
    "is_basic_pair",
    "load",
    "NonAbundanceWitness",
    "normal_form",
    "parse_band",
    "parse_strong_semilattice",
    "parse_word",
    "PreconditionError",
    "project_component",
    "regularity_witness",
    "restrict",
    "RewriteCertificate",
    "RewriteStep",
    "search_nonabundance",
    "significant_indices",
    "SignificantProfile",
    "structure_morphisms",
    "StructureMorphisms",
    "tilde_idempotent",
    "tilde_related",
    "verify_nonabundance",
    "y_projection",
]
