#!/usr/bin/env python3
"""Cross-check every solver on a random corpus of small trees.

For each instance the script compares the tree solver's optimum, the
clique-width solver driven through budgets, and brute force; decision
queries are swept over all budget/requirement pairs.  Any disagreement
is printed with a reproducer.

Usage:
    python scripts/crosscheck_solvers.py --instances 50 --max-n 6 --seed 1
"""

import argparse
import random
import sys

from latss.cliquewidth import CliqueWidthSolver, select_targets
from latss.graphs import Instance, random_tree, verify_solution
from latss.kexpr import evaluate, tree_expression
from latss.oracle import brute_decision, brute_min_target
from latss.trees import solve


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--instances", type=int, default=50)
    parser.add_argument("--max-n", type=int, default=6)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    mismatches = 0
    decisions = 0
    minima = 0
    for index in range(args.instances):
        n = rng.randint(2, args.max_n)
        tree = random_tree(n, rng)
        thresholds = tuple(rng.randint(1, tree.degree(v)) for v in range(n))
        latency = rng.randint(1, 2)
        targets = frozenset(v for v in range(n) if rng.random() < 0.5)

        expr = tree_expression(tree)
        names = evaluate(expr).names
        to_expr = {int(name): vid for vid, name in enumerate(names)}
        expr_thresholds = tuple(
            thresholds[int(names[vid])] for vid in range(n)
        )

        # minimum seed set for the target set
        tree_answer = solve(tree, thresholds, latency, targets)
        brute_answer = brute_min_target(tree, thresholds, latency, targets)
        cwd_answer = None
        for budget in range(n + 1):
            chosen = select_targets(
                expr,
                expr_thresholds,
                latency,
                budget,
                {to_expr[v] for v in targets},
            )
            if chosen is not None:
                cwd_answer = frozenset(int(names[v]) for v in chosen)
                break
        minima += 1
        sizes = {len(tree_answer), len(brute_answer), len(cwd_answer)}
        if len(sizes) != 1:
            mismatches += 1
            print(
                f"[{index}] minimum mismatch: tree={sorted(tree_answer)} "
                f"brute={sorted(brute_answer)} cwd={sorted(cwd_answer)} "
                f"edges={sorted(tree.edges)} t={thresholds} lam={latency} "
                f"targets={sorted(targets)}"
            )
        else:
            instance = Instance(tree, thresholds, latency, targets=targets)
            for answer in (tree_answer, brute_answer, cwd_answer):
                assert verify_solution(instance, answer)

        # decision sweep
        solver = CliqueWidthSolver(expr, expr_thresholds, latency)
        for budget in range(n + 1):
            for requirement in range(n + 1):
                want, _ = brute_decision(
                    tree, thresholds, latency, budget, requirement
                )
                got = solver.decide(budget, requirement)
                decisions += 1
                if want != got:
                    mismatches += 1
                    print(
                        f"[{index}] decision mismatch beta={budget} "
                        f"alpha={requirement}: cwd={got} brute={want}"
                    )

    print(
        f"checked {minima} minimum-seed instances and {decisions} decisions: "
        f"{mismatches} mismatches"
    )
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
