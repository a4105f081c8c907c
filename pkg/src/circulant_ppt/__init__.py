"""PPT analysis of multipartite circulant states through their block structure."""

__version__ = "0.1.0"

from .assembly import (
    BigBlockFamily,
    CirculantState,
    NotCirculantError,
    SmallBlockFamily,
    assemble,
    embed_small,
    extract_small,
    normalize,
    reduce_circulant,
)
from .geometry import BigLayout, Scheme, delta_basis, delta_basis_transposed, grouping
from .linalg import DimsProfile, hermitian_eigenvalues, is_psd, partial_trace, partial_transpose
from .ppt import PptReport, block_spectrum, oracle_compare, ppt_check, ppt_check_all, transform
from .statefile import read_state, write_state
from .zoo import ZOO, build

__all__ = [
    "BigBlockFamily", "BigLayout", "CirculantState", "DimsProfile", "NotCirculantError",
    "PptReport", "Scheme", "SmallBlockFamily", "ZOO", "assemble", "block_spectrum", "build",
    "delta_basis", "delta_basis_transposed", "embed_small", "extract_small", "grouping",
    "hermitian_eigenvalues", "is_psd", "normalize", "oracle_compare", "partial_trace",
    "partial_transpose", "ppt_check", "ppt_check_all", "read_state", "reduce_circulant",
    "transform", "write_state",
]
