"""Python front end for the opmetric checks.

Reports come back as plain dicts with the same layout as the CLI's JSON output.
"""

from ._opmetric import (
    InvalidInput,
    NumericalError,
    OpmetricError,
    ParseError,
    RankDeficient,
    ShapeError,
    UnsupportedLevel,
    Space,
    __version__,
    catalog,
    check,
    corpus_names,
    load_space,
    load_space_file,
    op_norm,
    run_corpus,
    t_gadget,
    trace_norm,
    verify_formulas,
)

__all__ = [
    "InvalidInput",
    "NumericalError",
    "OpmetricError",
    "ParseError",
    "RankDeficient",
    "ShapeError",
    "UnsupportedLevel",
    "Space",
    "__version__",
    "catalog",
    "check",
    "corpus_names",
    "load_space",
    "load_space_file",
    "op_norm",
    "run_corpus",
    "t_gadget",
    "trace_norm",
    "verify_formulas",
]
