"""Bi-invariant rational metrics on free groups generated by finite tables."""
from .errors import GraevError, InconclusiveCertificate
from .words import GElem, SWord, Word, XGen, decompose, format_word, parse_sword, parse_word, project, rho
from .matches import Match, find_match, validate_match
from .table import MetricTable, stage1_table, validate_table
from .fgmetric import (
    EvalResult,
    Exact,
    ExactUnderCap,
    check_self_consistency,
    eval_delta,
    eval_delta_bruteforce,
    positivity_lower_bound,
)
from .extension import ExtensionSpec, KatetovFn, build_extension_table, extend_katetov_domain, validate_katetov, verify_extension
from .builder import (
    BuildScript,
    ExplicitKatetov,
    FallbackStep,
    RandomKatetov,
    Stage,
    check_one_point_property,
    export_matrix,
    init_stage1,
    run_build,
    step_stage,
)

__version__ = "0.1.0"
