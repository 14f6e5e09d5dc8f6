"""Wang tiles to entropy constraint systems: compiler, witnesses, refuter."""

from .expressions import AffineConstraint, InfoExpr, ci_expr
from .joint import (
    FactoredJoint,
    Seed,
    Variable,
    entropic_vector,
    eval_expression,
    subset_entropy,
    uniform_seed,
)
from .logbounds import pick_alpha, pick_log_bounds
from .systems import ConstraintSystem, conjoin, exists_extend, lint_system
from .gadgets import GadgetRef, instantiate_gadget
from .tiling import PeriodicTiling, TileSet, find_periodic_tiling, validate_tiling
from .compiler import (
    SparseAffineSystem,
    compile_ttori,
    emit_statement,
    flatten,
    slackify,
)
from .ci import (
    CISystem,
    binary_implication_instance,
    disjointify,
    to_cardinality_implication,
    to_ci_only,
)
from .witness import (
    VerificationReport,
    WitnessRefusal,
    build_witness,
    extend_witness_for_slack,
    tiling_to_colored_tori,
    verify,
)
from .refuter import LPOutcome, elemental_inequalities, refute

__all__ = [
    "AffineConstraint",
    "CISystem",
    "ConstraintSystem",
    "FactoredJoint",
    "GadgetRef",
    "InfoExpr",
    "LPOutcome",
    "PeriodicTiling",
    "Seed",
    "SparseAffineSystem",
    "TileSet",
    "Variable",
    "VerificationReport",
    "WitnessRefusal",
    "binary_implication_instance",
    "build_witness",
    "ci_expr",
    "compile_ttori",
    "conjoin",
    "disjointify",
    "elemental_inequalities",
    "emit_statement",
    "entropic_vector",
    "eval_expression",
    "exists_extend",
    "extend_witness_for_slack",
    "find_periodic_tiling",
    "flatten",
    "instantiate_gadget",
    "lint_system",
    "pick_alpha",
    "pick_log_bounds",
    "refute",
    "slackify",
    "subset_entropy",
    "tiling_to_colored_tori",
    "to_cardinality_implication",
    "to_ci_only",
    "uniform_seed",
    "validate_tiling",
    "verify",
]
