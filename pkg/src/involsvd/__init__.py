"""Structure-revealing SVDs of (skew-)involutory and (skew-)coninvolutory
matrices: reciprocal singular-value pairing, coupling matrices, condensed
canonical forms, (con)eigendecompositions, and projector factorizations."""

from .errors import (
    CouplingError,
    DimensionError,
    InvalidInputError,
    InvalidSpecError,
    InvolSvdError,
    MatrixFormatError,
    NumericalError,
    PairingError,
    StructureViolationError,
    WrongClassError,
)
from .kernel import (
    SvdResult,
    hermitian_eig,
    j_matrix,
    matexp_skewfactor,
    qr_column_pivoted,
    skew_pair_unitary,
    svd,
    takagi_symmetric_unitary,
)
from .structures import ClassificationReport, GeneratorSpec, StructureClass, classify
from .structured_svd import (
    PAIRED_ONE,
    RECIPROCAL_PAIR,
    SINGLE_ONE,
    StructureCounts,
    StructuredSvd,
    TripletBlock,
    coupling_residual,
    extract_T,
    paired_one_display,
    pairing_spectrum_check,
    reconstruction_residual,
    restructure,
)
from .generators import gen_consim, gen_structured, haar_unitary
from .canonical import (
    CanonicalForm,
    EigenDecomposition,
    canonical_form,
    canonical_residual,
    coneigen_singles,
    consim_to_identity,
    consim_to_minusJ,
    consimilarity_residual,
    eigen_residual,
    eigendecompose,
    minusj_residual,
)
from .projector import (
    ProjectorConstruction,
    ProjectorSvd,
    householder_singular_values,
    idempotency_residual,
    projector,
    projector_svd,
)
from .mmio import read_matrix, write_matrix, write_values

__version__ = "0.1.0"

__all__ = [
    "CanonicalForm",
    "ClassificationReport",
    "CouplingError",
    "DimensionError",
    "EigenDecomposition",
    "GeneratorSpec",
    "InvalidInputError",
    "InvalidSpecError",
    "InvolSvdError",
    "MatrixFormatError",
    "NumericalError",
    "PAIRED_ONE",
    "PairingError",
    "ProjectorConstruction",
    "ProjectorSvd",
    "RECIPROCAL_PAIR",
    "SINGLE_ONE",
    "StructureClass",
    "StructureCounts",
    "StructureViolationError",
    "StructuredSvd",
    "SvdResult",
    "TripletBlock",
    "WrongClassError",
    "canonical_form",
    "canonical_residual",
    "classify",
    "coneigen_singles",
    "consim_to_identity",
    "consim_to_minusJ",
    "consimilarity_residual",
    "coupling_residual",
    "eigen_residual",
    "eigendecompose",
    "extract_T",
    "gen_consim",
    "gen_structured",
    "haar_unitary",
    "hermitian_eig",
    "householder_singular_values",
    "idempotency_residual",
    "j_matrix",
    "matexp_skewfactor",
    "paired_one_display",
    "pairing_spectrum_check",
    "projector",
    "projector_svd",
    "qr_column_pivoted",
    "read_matrix",
    "reconstruction_residual",
    "restructure",
    "skew_pair_unitary",
    "svd",
    "takagi_symmetric_unitary",
    "write_matrix",
    "write_values",
]
