"""Exact solvers for latency-bounded target set selection.

Pick a seed set so that a threshold cascade activates what you need
within a bounded number of rounds.  The package provides the cascade
simulator, an exact solver for graphs given by clique-width
construction expressions, a linear-time solver for trees, and
brute-force oracles for differential testing.
"""

from .graphs import (
    ActivationTrace,
    Graph,
    Instance,
    connected_components,
    is_forest,
    is_tree,
    normalize_thresholds,
    path_graph,
    random_tree,
    simulate,
    star_graph,
    verify_solution,
)
from .kexpr import (
    Eta,
    IrredundancyError,
    IrredundancyViolation,
    KExpr,
    KExprError,
    LabeledGraph,
    Leaf,
    ParseError,
    PartialRedundancyError,
    Rho,
    Union,
    canonicalize_names,
    check_irredundant,
    cograph_expression,
    evaluate,
    leaf_names,
    lift_targets,
    normalize_irredundant,
    parse,
    path_expression,
    star_expression,
    tree_expression,
    unparse,
    validate,
    width,
)
from .cliquewidth import (
    CliqueWidthSolver,
    decide,
    decide_targets,
    select,
    select_targets,
    verify_schedule,
    zero_counts,
    zero_reductions,
)
from .trees import (
    RootedTree,
    TreeAudit,
    TreeSolveResult,
    audit,
    root_and_order,
    select_tth_smallest,
    solve_detailed,
)
from .trees import solve as solve_tree
from .oracle import (
    brute_decision,
    brute_min_target,
    brute_select_targets,
    cascade,
    neighbor_masks,
)

__version__ = "0.1.0"

__all__ = [
    "ActivationTrace",
    "CliqueWidthSolver",
    "Eta",
    "Graph",
    "Instance",
    "IrredundancyError",
    "IrredundancyViolation",
    "KExpr",
    "KExprError",
    "LabeledGraph",
    "Leaf",
    "ParseError",
    "PartialRedundancyError",
    "Rho",
    "RootedTree",
    "TreeAudit",
    "TreeSolveResult",
    "Union",
    "audit",
    "brute_decision",
    "brute_min_target",
    "brute_select_targets",
    "canonicalize_names",
    "cascade",
    "check_irredundant",
    "cograph_expression",
    "connected_components",
    "decide",
    "decide_targets",
    "evaluate",
    "is_forest",
    "is_tree",
    "leaf_names",
    "lift_targets",
    "neighbor_masks",
    "normalize_irredundant",
    "normalize_thresholds",
    "parse",
    "path_expression",
    "path_graph",
    "random_tree",
    "root_and_order",
    "select",
    "select_targets",
    "select_tth_smallest",
    "simulate",
    "solve_detailed",
    "solve_tree",
    "star_expression",
    "star_graph",
    "tree_expression",
    "unparse",
    "validate",
    "verify_schedule",
    "verify_solution",
    "width",
    "zero_counts",
    "zero_reductions",
]
