"""Entanglement geometry of pure three-qubit states.

Observables (Bloch norms, entropies, concurrences, tangle), the canonical
five-coefficient decomposition, polytope regions and tangle bound curves,
and four exactly solvable 3-site spin chains with closed-form oracles.
"""
from __future__ import annotations

from .canonical import (
    SLOCC_CLASSES,
    TYPE_KINDS,
    ZERO_TOL,
    CanonicalForm,
    DetZeroBranches,
    EntLabel,
    canonical_decompose,
    classify,
    det_zero_solutions,
    reconstruct,
)
from .chains import (
    CROSSINGS,
    MODELS,
    SWEEP_FIELDS,
    W_KET,
    WT1_KET,
    WT2_KET,
    X3W_KET,
    X3WT1_KET,
    X3WT2_KET,
    ChainModel,
    SuperpositionParams,
    SweepRecord,
    SymmetryLabels,
    build_hamiltonian,
    closed_form_eigenstate,
    closed_form_spectrum,
    closed_form_tangle,
    degenerate_bloch_family,
    eigensystem,
    merge_levels,
    pauli_string,
    sweep,
    symmetry_labels,
)
from .entanglement import (
    PAIRS,
    BlochTriple,
    Qubit1Density,
    bloch_triple,
    concurrence_one_vs_rest,
    concurrence_pair,
    entropy_from_norm,
    hyperdeterminant,
    reduce_one,
    tangle,
)
from .errors import (
    BadNormalization,
    ComplexTau,
    ConvergenceFailure,
    CrossingPoint,
    NeedParams,
    NegativeRadicand,
    NonUnitary,
    NotDegenerate,
    NumericalError,
    OutOfDomain,
    OutOfRange,
    TriqentError,
    UnknownModel,
    UnknownRegion,
    UnknownType,
    UnsupportedType,
    ValidationError,
    ZeroVector,
)
from .polytope import (
    CURVE_KINDS,
    FACE_SIGNS,
    R_STAR,
    R_W,
    REGION_KINDS,
    BoundCurve,
    Region,
    ansatz_tau,
    big_r,
    big_r_from_cf,
    bound_curve,
    dist_to_diagonal,
    f_lowest_order,
    lambda3_star,
    membership,
    tau_surface,
)
from .qstate import (
    QUBITS,
    TYPE_IDS,
    LocalUnitary,
    PureState3,
    SliceTensors,
    apply_local_unitary,
    normalize,
    reassemble,
    sample_haar,
    sample_type,
    slice_state,
)
from .verify import CheckResult, check_names, run_checks

__version__ = "0.1.0"

__all__ = [
    "BadNormalization", "BlochTriple", "BoundCurve", "CROSSINGS",
    "CURVE_KINDS", "CanonicalForm", "ChainModel", "CheckResult", "ComplexTau",
    "ConvergenceFailure", "CrossingPoint", "DetZeroBranches", "EntLabel",
    "FACE_SIGNS", "LocalUnitary", "MODELS", "NeedParams", "NegativeRadicand",
    "NonUnitary", "NotDegenerate", "NumericalError", "OutOfDomain",
    "OutOfRange", "PAIRS", "PureState3", "QUBITS", "Qubit1Density", "R_STAR",
    "R_W", "REGION_KINDS", "Region", "SLOCC_CLASSES", "SWEEP_FIELDS",
    "SliceTensors", "SuperpositionParams", "SweepRecord", "SymmetryLabels",
    "TYPE_IDS", "TYPE_KINDS", "TriqentError", "UnknownModel", "UnknownRegion",
    "UnknownType", "UnsupportedType", "ValidationError", "W_KET", "WT1_KET",
    "WT2_KET", "X3W_KET", "X3WT1_KET", "X3WT2_KET", "ZERO_TOL", "ZeroVector",
    "ansatz_tau", "apply_local_unitary", "big_r", "big_r_from_cf",
    "bloch_triple", "bound_curve", "build_hamiltonian", "canonical_decompose",
    "check_names", "classify", "closed_form_eigenstate",
    "closed_form_spectrum", "closed_form_tangle", "concurrence_one_vs_rest",
    "concurrence_pair", "degenerate_bloch_family", "det_zero_solutions",
    "dist_to_diagonal", "eigensystem", "entropy_from_norm", "f_lowest_order",
    "hyperdeterminant", "lambda3_star", "membership", "merge_levels",
    "normalize", "pauli_string", "reassemble", "reconstruct", "reduce_one",
    "run_checks", "sample_haar", "sample_type", "slice_state", "sweep",
    "symmetry_labels", "tangle", "tau_surface",
]
