"""Involutory biracks, birack counting invariants of unoriented framed tangles,
and their quantum and braid-weight enhancements, with exact arithmetic."""

__version__ = "0.1.0"

from .birack import Birack, birack_from_map, birack_from_matrix, constant_action, tsr_birack
from .bweight import BraidWeight, evaluate_braid, phi_mw, verify_braid_weight
from .errors import (
    AxiomViolation,
    BirackForgeError,
    InvalidConstantAction,
    InvalidTSR,
    LabelMismatch,
    NotAUnit,
    NotALink,
    NotInvertibleOverRing,
    ParseError,
    PatternMismatch,
    RefusedBudget,
    ShapeError,
    UnsupportedSize,
    VariableMismatch,
)
from .labeling import Labeling, count_labelings, enumerate_labelings, phi_basic, phi_integral
from .qweight import (
    QuantumWeight,
    classify_weight,
    evaluate,
    evaluate_dense,
    normalize,
    phi_q_polynomial,
    phi_qm,
    verify_weight,
)
from .ring import LaurentPoly, ModMatrix, RingMatrix, parse_poly, render_poly
from .search import enumerate_biracks, search_braid_weights, search_quantum_weights
from .tangle import (
    BraidWord,
    SlicedDiagram,
    apply_framed_move,
    braid_closure,
    braid_tangle,
    insert_kinks,
    parse_braid,
    parse_diagram,
    trace_components,
)
