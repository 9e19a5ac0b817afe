"""First-order formulas: AST, text syntax and three-valued evaluation."""

from .ast import *  # noqa: F401,F403
from .evaluate import (  # noqa: F401
    DuplicateSetName,
    Environment,
    ProvenFalse,
    ProvenTrue,
    RegisteredSet,
    UnboundName,
    UnknownSetName,
    UnknownUpTo,
    Verdict,
    eval_formula,
    eval_term,
    negate,
    register_set,
    verdict_to_json,
)
from .parse import UnboundVariable, parse_formula  # noqa: F401
