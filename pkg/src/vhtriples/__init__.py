"""Discretely valued hyperfields K/(1+m^i), Deligne triples and the functors Tr, U, psi."""
from .errors import *  # noqa: F401,F403
from .exactnum import (
    INF,
    GaloisRingQuot,
    PolyQuot,
    RingHom,
    TdvrDescriptor,
    TdvrElem,
    ZpQuot,
    finite_field,
    tdvr_enumerate,
    tdvr_length,
    tdvr_ring_ops,
    tdvr_unit_decompose,
    tdvr_valuation,
)
from .functors import (
    USet,
    flat_finite_check,
    hyperfield_iso_exponent_check,
    lift_morphism,
    psi_check,
    realize_triple,
    tr_morphism,
    tr_object_closed_form,
    tr_object_generic,
    u_morphism,
    u_object,
    vh_iso_search,
)
from .hyperfield import FiniteHyperfield, hf_builtin, hf_quotient, hf_sum, hf_verify_axioms
from .report import Report, emit_report
from .triple import Triple, TensorElem, TripleMorphism, eps_rs, tensor_mul, tensor_v, triple_morphism_validate
from .valued import (
    VH,
    ZERO,
    Ball,
    EqualChar,
    MixedUnram,
    VHElem,
    VHMorphism,
    vh_embedding_morphism,
    vh_make,
    vh_mul,
    vh_rescale,
    vh_sum,
    vh_verify_axioms,
)

__version__ = "0.1.0"
