"""repkit: dictionary-compression measures and parsing algorithms.

Computes and cross-checks repetitiveness measures of a text: BWT runs (r),
Lempel-Ziv (z, z_no), the lex-parse (v), greedy parses under arbitrary
suffix orders, run-length grammars, collage systems, and bidirectional
copy schemes — with small-scale exhaustive oracles for all of them.
"""

from .brute import (
    NAIVE_SA_BUDGET,
    PARSE_BUDGET,
    SCHEME_BUDGET,
    SearchBudget,
    min_ordered_parse,
    naive_suffix_structures,
    smallest_bidirectional,
    smallest_rotation,
)
from .collage import (
    CollageBuilder,
    CollageSystem,
    check_internal,
    collage_to_scheme,
    expand_collage,
    lz_to_collage,
    read_collage,
    write_collage,
)
from .errors import (
    BudgetExceeded,
    CyclicScheme,
    EmptyInput,
    InvalidParameter,
    InvalidParse,
    InvariantViolation,
    LengthMismatch,
    NonExtensibleOrder,
    NotATiling,
    NotInternal,
    OrderViolation,
    OutOfRange,
    RepkitError,
    SentinelCollision,
    SizeLimit,
    TruncationOutOfRange,
)
from .grammars import (
    GrammarTree,
    Rlslp,
    RlslpBuilder,
    build_rlslp,
    expand,
    grammar_to_parse,
    grammar_tree,
    lcp_round,
    read_rlslp,
    write_rlslp,
)
from .parsers import (
    METHOD_GRAMMAR,
    METHOD_LEX,
    METHOD_LZ,
    METHOD_LZ_NO,
    METHOD_NAIVE,
    METHOD_ORDERED,
    ParseResult,
    greedy_naive,
    greedy_ordered,
    lex_parse,
    lz_parse,
)
from .report import MeasureReport, measures, report
from .schemes import (
    Phrase,
    Scheme,
    ValidationReport,
    bwt_scheme,
    check_ordered,
    copy_phrase,
    decode,
    explicit,
    fibonacci_scheme,
    make_scheme,
    read_scheme,
    scheme_to_order,
    validate,
    write_scheme,
)
from .suffix import (
    RmqIndex,
    SuffixContext,
    build_context,
    build_rmq,
    invert_bwt,
    lf,
    lf_array,
    phi,
    phi_array,
)
from .text import (
    BYTE_BUDGET,
    SENTINEL,
    FamilySpec,
    Text,
    de_bruijn,
    fib_number,
    fibonacci_word,
    load_text,
    planted_text,
    render,
)

__version__ = "0.1.0"
