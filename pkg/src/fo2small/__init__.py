"""Small models for two-variable logic.

Any satisfiable sentence using only the variables x and y has a model of
size at most 2^(4n+5m), where n and m count its unary and binary
predicates.  This package makes that constructive: it normalizes sentences,
views finite models as edge-colored tournaments, rebuilds those tournaments
at a bounded size while preserving everything the sentence can see, and
decides satisfiability by brute-force search under the resulting bound.
"""

from ._kernel import BACKEND as kernel_backend
from .compressor import (
    CompressionConfig,
    PartitionPlan,
    PropertyReport,
    compress,
    compress_structure,
    verify_properties,
)
from .formula import (
    Formula,
    ScottNormalForm,
    Vocabulary,
    pad_vocabulary,
    parse_formula,
    print_formula,
    to_scott_normal_form,
)
from .satengine import (
    SizeBound,
    brute_force_sat,
    decide_sat,
    random_sentence,
    random_structure,
    random_tournament,
    size_bound,
    snf_of_structure,
)
from .tournament import (
    ColoredTournament,
    TypedTournament,
    edge_colors_between,
    from_structure,
    king_colors,
    profile_of,
    to_structure,
    validate,
)
from .typespace import (
    OneType,
    Structure,
    TwoType,
    check_snf,
    evaluate,
    invert,
    one_type_of,
    project_x,
    project_y,
    realized_one_types,
    realized_two_types,
    two_type_of,
)

__version__ = "0.1.0"
