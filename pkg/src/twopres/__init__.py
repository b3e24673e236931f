"""Presented 2-categories: free constructions, congruence closure,
weak composition and quotients of categories by monoidal actions."""

from .action import (ActionPresentation, Candidate, Factorization, HomCategoryFragment,
                     MonoidalPresentation, QuotientPresentation, TwoCategoryTable,
                     UniversalResult, build_quotient, candidate_from_fragment,
                     emit_quotient_presentation, hom_category, scan_quotient_laws,
                     validate_action, validate_monoidal, verify_universal)
from .bicat import BicatFragment, build_2cat, eq2_term, pasting_composite, unit_eta
from .congruence import (Decision, Partition, QuotientFragment, RelationSet, Verdict,
                         close_p0p3, close_staged, collapse_preorder, decide_equal,
                         naive_fixpoint, quotient_1cells)
from .errors import (BoundError, CompositionError, DuplicateError, InconsistencyError,
                     InputError, ParseError, PresError, UnresolvedError)
from .graded import (AxiomReport, CompositionTable, FiniteCategory, GradedSetTable,
                     Violation, check_graded, check_pre_n, check_strict_n, make_table)
from .presio import PresentationDocument, load_fragment, parse, print_document
from .terms import GeneratingData, Term, TermAlgebra, compose, enumerate_free, strata

__version__ = "0.1.0"

__all__ = [
    "ActionPresentation",
    "Candidate",
    "Factorization",
    "HomCategoryFragment",
    "MonoidalPresentation",
    "QuotientPresentation",
    "TwoCategoryTable",
    "UniversalResult",
    "build_quotient",
    "candidate_from_fragment",
    "emit_quotient_presentation",
    "hom_category",
    "scan_quotient_laws",
    "validate_action",
    "validate_monoidal",
    "verify_universal",
    "BicatFragment",
    "build_2cat",
    "eq2_term",
    "pasting_composite",
    "unit_eta",
    "Decision",
    "Partition",
    "QuotientFragment",
    "RelationSet",
    "Verdict",
    "close_p0p3",
    "close_staged",
    "collapse_preorder",
    "decide_equal",
    "naive_fixpoint",
    "quotient_1cells",
    "BoundError",
    "CompositionError",
    "DuplicateError",
    "InconsistencyError",
    "InputError",
    "ParseError",
    "PresError",
    "UnresolvedError",
    "AxiomReport",
    "CompositionTable",
    "FiniteCategory",
    "GradedSetTable",
    "Violation",
    "check_graded",
    "check_pre_n",
    "check_strict_n",
    "make_table",
    "PresentationDocument",
    "load_fragment",
    "parse",
    "print_document",
    "GeneratingData",
    "Term",
    "TermAlgebra",
    "compose",
    "enumerate_free",
    "strata",
]
