"""Core-EP decomposition, generalized inverses and matrix order relations."""

from .decomp import (
    CanonicalForm,
    CoreEPParts,
    CoreNilpotentParts,
    canonical_form,
    core_ep_decompose,
    core_form,
    core_nilpotent_decompose,
    index,
)
from .errors import (
    CharacterizationDisagreement,
    CoreEPError,
    IndexTooLarge,
    InfeasibleSpec,
    NonOrthonormalInput,
    ParseError,
    RaggedRows,
    ResidualTooLarge,
    RouteDisagreement,
    ShapeMismatch,
)
from .inverses import InverseResult, core, core_ep, core_ep_projector, drazin, group, moore_penrose
from .gen import GenSpec, matrix_with_structure, order_pair, random_unitary
from .kernels import BACKEND
from .matfile import emit_matrix, parse_matrix
from .numkernel import (
    DEFAULT_TOL,
    ToleranceContext,
    approx_eq,
    as_matrix,
    range_basis,
    rank,
    scaled_power,
    unitary_complete,
)
from .orders import (
    OrderVerdict,
    Relation,
    compare,
    le_cn,
    le_core,
    le_core_ep,
    le_core_minus,
    le_drazin,
    le_minus,
    le_sharp,
)

__version__ = "0.1.0"
