"""Exact generalized word-length patterns of mixed-level fractions and of
orthogonal arrays with removed runs."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .core import DesignSpace, Fraction, GwlpExact, Ordering, Run, gma_compare, gma_key
from .errors import (
    CapacityError,
    InternalConsistencyError,
    OagwlpError,
    ParseError,
    StructuralError,
    UnsupportedDesignError,
)
from .oafile import format_oa_file, parse_oa_file, read_oa_file
from .removal import (
    RemovalReport,
    RemovalSubset,
    exhaustive_search,
    greedy_sequential,
    gwlp_after_removal,
    rank_single_removals,
)
from .wstack import (
    WStack,
    build_wstack,
    gwlp,
    gwlp_from_wstack,
    singleton_gwlp,
    twolevel_wstack,
    union_gwlp,
    w_marginal,
)
