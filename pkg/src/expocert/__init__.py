"""Certified positivity of mixed exponential polynomials.

Everything is exact rational arithmetic end to end: inequalities between
polynomial-exponential expressions are reduced, by parity-matched
Maclaurin bounds, to polynomial positivity questions that Sturm chains
decide, and each success is recorded as a certificate an independent
checker can replay.
"""

from .arith import (
    ConstExpr,
    RationalInterval,
    decimal_str,
    enclose_const,
    enclose_exp_neg,
    exp_enclosure,
)
from .errors import (
    BudgetExceededError,
    DegenerateInputError,
    DenominatorSignUnknownError,
    DivisionByPossiblyZeroError,
    EndpointValidationError,
    ExpocertError,
    LoweringError,
    MalformedCertificateError,
    MonotonicityUnprovenError,
    ParseError,
    PreconditionError,
    SearchExhaustedError,
    SignIndeterminateError,
    ZeroPolynomialError,
)
from .expr import (
    InequalityAst,
    Node,
    node_text,
    parse_expression,
    parse_inequality,
    to_const,
    to_exp_rational,
)
from .mep import (
    ExpRational,
    Mep,
    MepTerm,
    differentiate_quotient,
    eval_enclosure,
    normalize,
    rescale_rational_q,
)
from .poly import (
    Polynomial,
    SturmChain,
    count_roots_open,
    is_positive_on,
    isolate_root,
    squarefree_part,
)
from .prover import (
    Certificate,
    NegativeWitness,
    bounding_units,
    falsify,
    lower_bound_poly,
    minimize_assignment,
    prove_positive,
    upper_bound_poly,
    verify_certificate,
    verify_certificate_report,
)
from .stratify import (
    AffineFamily,
    CascadeReport,
    FamilyReport,
    GridReport,
    ParamExpFamily,
    ParamTerm,
    analyze_affine_family,
    cascade_check,
    grid_check,
    isolate_crossing,
    substitute_alpha,
)
from .taylor import OddRootRecord, TaylorBound, gap_enclosure, maclaurin, odd_root, select_order

__all__ = [
    "AffineFamily",
    "BudgetExceededError",
    "CascadeReport",
    "Certificate",
    "ConstExpr",
    "DegenerateInputError",
    "DenominatorSignUnknownError",
    "DivisionByPossiblyZeroError",
    "EndpointValidationError",
    "ExpRational",
    "ExpocertError",
    "FamilyReport",
    "GridReport",
    "InequalityAst",
    "LoweringError",
    "MalformedCertificateError",
    "Mep",
    "MepTerm",
    "MonotonicityUnprovenError",
    "NegativeWitness",
    "Node",
    "OddRootRecord",
    "ParamExpFamily",
    "ParamTerm",
    "ParseError",
    "Polynomial",
    "PreconditionError",
    "RationalInterval",
    "SearchExhaustedError",
    "SignIndeterminateError",
    "SturmChain",
    "TaylorBound",
    "ZeroPolynomialError",
    "analyze_affine_family",
    "bounding_units",
    "cascade_check",
    "count_roots_open",
    "decimal_str",
    "differentiate_quotient",
    "enclose_const",
    "enclose_exp_neg",
    "eval_enclosure",
    "exp_enclosure",
    "falsify",
    "grid_check",
    "is_positive_on",
    "isolate_crossing",
    "isolate_root",
    "lower_bound_poly",
    "maclaurin",
    "minimize_assignment",
    "node_text",
    "normalize",
    "odd_root",
    "parse_expression",
    "parse_inequality",
    "prove_positive",
    "rescale_rational_q",
    "select_order",
    "squarefree_part",
    "substitute_alpha",
    "to_const",
    "to_exp_rational",
    "upper_bound_poly",
    "verify_certificate",
    "verify_certificate_report",
]
