"""Exact solver for bounded clique-width graphs given as expressions.

The solver walks the expression tree of an irredundant k-expression.
For a tree node whose labeled subgraph is H, a query is a pair of
matrices ``(counts, reductions)``:

* ``counts[i][l]`` — how many label-(l+1) vertices must become active at
  round i (row 0 is the seed round), for i in 0..latency;
* ``reductions[i-1][l]`` — how much the thresholds of label-(l+1)
  vertices are lowered at round i, for i in 1..latency.

A query is satisfiable iff H admits a monotone process S[0] ⊆ ... ⊆
S[latency] that activates exactly the demanded per-label counts each
round under the reduced thresholds.  Satisfiability recurses over the
four node kinds; queries are evaluated top-down with per-node
memoization, so only pairs reachable from the root are ever computed.
The root is queried with the all-zero reduction matrix only, where the
process coincides with the real cascade and row sums translate directly
into seed budgets and activation totals.

Reduction entries are clamped at the largest threshold: any value at or
above every threshold behaves identically in the activation rule, so
the clamp merges equivalent queries without changing satisfiability.

A solver owns its mutable memo tables; distinct solver instances can
run concurrently on shared inputs.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Iterator, Sequence

from .graphs import normalize_thresholds, simulate
from .kexpr import (
    Eta,
    IrredundancyError,
    KExpr,
    LabeledGraph,
    Leaf,
    Union,
    _postorder,
    check_irredundant,
    evaluate,
    lift_targets,
    validate,
    width,
)

CountMatrix = tuple[tuple[int, ...], ...]
ReductionMatrix = tuple[tuple[int, ...], ...]


def zero_counts(latency: int, k: int) -> CountMatrix:
    return tuple((0,) * k for _ in range(latency + 1))


def zero_reductions(latency: int, k: int) -> ReductionMatrix:
    return tuple((0,) * k for _ in range(latency))


def verify_schedule(
    labeled: LabeledGraph,
    thresholds: Sequence[int],
    counts: CountMatrix,
    reductions: ReductionMatrix,
    process: Sequence[Iterable[int]],
) -> bool:
    """Check a process against a (counts, reductions) query, from scratch.

    Verifies the three defining conditions directly on the labeled
    graph: per-round per-label activation sets must equal the
    reduced-threshold rule applied to the previous round, and the
    per-label cardinalities must match ``counts`` exactly.  Dimension
    mismatches raise; anything else merely fails.
    """
    latency = len(reductions)
    k = len(counts[0]) if counts else 0
    if len(counts) != latency + 1:
        raise ValueError("counts must have latency+1 rows")
    if any(len(row) != k for row in counts) or any(
        len(row) != k for row in reductions
    ):
        raise ValueError("ragged matrix rows")
    if len(process) != latency + 1:
        raise ValueError("process must have latency+1 rounds")
    graph = labeled.graph
    if any(not 1 <= lab <= k for lab in labeled.labels):
        raise ValueError(f"graph labels exceed k={k}")
    if len(thresholds) != graph.n:
        raise ValueError("thresholds do not match the graph")

    rounds = [frozenset(s) for s in process]
    universe = frozenset(range(graph.n))
    prev = rounds[0]
    if not prev <= universe:
        return False
    for cur in rounds[1:]:
        if not prev <= cur <= universe:
            return False
        prev = cur

    classes: dict[int, set[int]] = {lab: set() for lab in range(1, k + 1)}
    for v, lab in enumerate(labeled.labels):
        classes[lab].add(v)

    for lab in range(1, k + 1):
        if len(rounds[0] & classes[lab]) != counts[0][lab - 1]:
            return False
    for i in range(1, latency + 1):
        delta = rounds[i] - rounds[i - 1]
        for lab in range(1, k + 1):
            cls = classes[lab]
            if len(delta & cls) != counts[i][lab - 1]:
                return False
            reduced = {
                u
                for u in cls - rounds[i - 1]
                if len(set(graph.adjacency[u]) & rounds[i - 1])
                >= thresholds[u] - reductions[i - 1][lab - 1]
            }
            if delta & cls != reduced:
                return False
    return True


class CliqueWidthSolver:
    """Memoized query evaluator over one expression/thresholds/latency triple.

    Reuse a single instance when asking many budget/requirement
    combinations about the same instance: the memo tables are shared
    across calls.
    """

    def __init__(
        self, expr: KExpr, thresholds: Sequence[int], latency: int
    ) -> None:
        validate(expr)
        violations = check_irredundant(expr)
        if violations:
            raise IrredundancyError(violations)
        if latency < 0:
            raise ValueError("latency must be non-negative")
        self.expr = expr
        self.latency = latency
        self.k = width(expr)
        self.labeled = evaluate(expr)
        self.thresholds = normalize_thresholds(
            self.labeled.graph, thresholds
        )
        self.rcap = max(self.thresholds, default=0)
        self._name_to_vid = {
            name: v for v, name in enumerate(self.labeled.names)
        }
        self._build_nodes()
        self._memo: list[dict] = [{} for _ in self._kind]

    # -- expression-tree tables ------------------------------------------

    def _build_nodes(self) -> None:
        post = _postorder(self.expr)
        k = self.k
        kind: list[str] = []
        info: list[tuple] = []
        label_counts: list[tuple[int, ...]] = []
        stack: list[int] = []
        vid = 0
        for idx, node in enumerate(post):
            if isinstance(node, Leaf):
                kind.append("leaf")
                info.append((vid, node.label - 1))
                one_hot = [0] * k
                one_hot[node.label - 1] = 1
                label_counts.append(tuple(one_hot))
                vid += 1
            elif isinstance(node, Union):
                right = stack.pop()
                left = stack.pop()
                kind.append("union")
                info.append((left, right))
                label_counts.append(
                    tuple(
                        x + y
                        for x, y in zip(label_counts[left], label_counts[right])
                    )
                )
            elif isinstance(node, Eta):
                child = stack.pop()
                kind.append("eta")
                info.append((child, node.a - 1, node.b - 1))
                label_counts.append(label_counts[child])
            else:
                child = stack.pop()
                kind.append("rho")
                info.append((child, node.a - 1, node.b - 1))
                merged = list(label_counts[child])
                merged[node.b - 1] += merged[node.a - 1]
                merged[node.a - 1] = 0
                label_counts.append(tuple(merged))
            stack.append(idx)
        self._nodes = post
        self._kind = kind
        self._info = info
        self._label_counts = label_counts
        self.root_index = len(post) - 1

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    def subgraph(
        self, node: int
    ) -> tuple[LabeledGraph, tuple[int, ...], dict[int, int]]:
        """Labeled subgraph at a node, its thresholds, and a global->local id map."""
        local = evaluate(self._nodes[node])
        locals_thr = tuple(
            self.thresholds[self._name_to_vid[name]] for name in local.names
        )
        to_local = {
            self._name_to_vid[name]: i for i, name in enumerate(local.names)
        }
        return local, locals_thr, to_local

    def queries(self, node: int) -> list[tuple[CountMatrix, ReductionMatrix]]:
        """All (counts, reductions) pairs evaluated so far at a node."""
        return list(self._memo[node].keys())

    def witnessed_entries(
        self,
    ) -> Iterator[tuple[int, CountMatrix, ReductionMatrix]]:
        """Every satisfiable memo entry, across all nodes."""
        for idx, memo in enumerate(self._memo):
            for (counts, reds), value in list(memo.items()):
                if value:
                    yield idx, counts, reds

    # -- the recursion ----------------------------------------------------

    def _gamma(self, node: int, counts: CountMatrix, reds: ReductionMatrix):
        memo = self._memo[node]
        key = (counts, reds)
        cached = memo.get(key)
        if cached is not None:
            return cached
        caps = self._label_counts[node]
        for l in range(self.k):
            if sum(row[l] for row in counts) > caps[l]:
                memo[key] = False
                return False
        kind = self._kind[node]
        result: tuple | bool = False
        if kind == "leaf":
            result = self._gamma_leaf(node, counts, reds)
        elif kind == "union":
            left, right = self._info[node]
            for counts1, counts2 in self._union_splits(counts, left, right):
                if self._gamma(left, counts1, reds) and self._gamma(
                    right, counts2, reds
                ):
                    result = ("union", counts1, counts2)
                    break
        elif kind == "eta":
            child, la, lb = self._info[node]
            reds1 = self._eta_reductions(counts, reds, la, lb)
            if self._gamma(child, counts, reds1):
                result = ("eta", reds1)
        else:
            child, la, lb = self._info[node]
            if all(row[la] == 0 for row in counts):
                reds1 = tuple(
                    tuple(
                        row[lb] if l == la else row[l] for l in range(self.k)
                    )
                    for row in reds
                )
                for counts1 in self._rho_splits(counts, child, la, lb):
                    if self._gamma(child, counts1, reds1):
                        result = ("rho", counts1, reds1)
                        break
        memo[key] = result
        return result

    def _gamma_leaf(self, node, counts, reds):
        vid, l0 = self._info[node]
        t = self.thresholds[vid]
        total = sum(row[l0] for row in counts)
        if total == 0:
            # the vertex must stay inactive: no round may cancel its threshold
            if all(reds[i][l0] < t for i in range(self.latency)):
                return ("leaf", None)
            return False
        istar = next(i for i, row in enumerate(counts) if row[l0] == 1)
        if istar == 0:
            return ("leaf", 0)
        fires = next(
            (i + 1 for i in range(self.latency) if reds[i][l0] >= t), None
        )
        return ("leaf", istar) if fires == istar else False

    def _eta_reductions(self, counts, reds, la, lb):
        rcap = self.rcap
        out = []
        seen_a = 0
        seen_b = 0
        for i in range(1, self.latency + 1):
            seen_a += counts[i - 1][la]
            seen_b += counts[i - 1][lb]
            row = list(reds[i - 1])
            # every already-active vertex of the opposite class is a new neighbour
            row[la] = min(rcap, row[la] + seen_b)
            row[lb] = min(rcap, row[lb] + seen_a)
            out.append(tuple(row))
        return tuple(out)

    def _union_splits(self, counts, left, right):
        rows = self.latency + 1
        k = self.k
        caps_l = self._label_counts[left]
        caps_r = self._label_counts[right]
        per_col = []
        for l in range(k):
            col = tuple(counts[i][l] for i in range(rows))
            total = sum(col)
            lo = max(0, total - caps_r[l])
            hi = min(total, caps_l[l])
            if lo > hi:
                return
            options = [
                split
                for split in product(*(range(c + 1) for c in col))
                if lo <= sum(split) <= hi
            ]
            per_col.append(options)
        for combo in product(*per_col):
            counts1 = tuple(
                tuple(combo[l][i] for l in range(k)) for i in range(rows)
            )
            counts2 = tuple(
                tuple(counts[i][l] - counts1[i][l] for l in range(k))
                for i in range(rows)
            )
            yield counts1, counts2

    def _rho_splits(self, counts, child, la, lb):
        rows = self.latency + 1
        k = self.k
        cap_a = self._label_counts[child][la]
        cap_b = self._label_counts[child][lb]
        merged = [counts[i][lb] for i in range(rows)]
        for to_a in product(*(range(c + 1) for c in merged)):
            if sum(to_a) > cap_a:
                continue
            if sum(merged) - sum(to_a) > cap_b:
                continue
            yield tuple(
                tuple(
                    to_a[i]
                    if l == la
                    else (merged[i] - to_a[i] if l == lb else counts[i][l])
                    for l in range(k)
                )
                for i in range(rows)
            )

    # -- root-side scanning -------------------------------------------------

    def _root_counts(
        self,
        seed_cap: int | None = None,
        min_total: int | None = None,
        target_cols: Sequence[int] = (),
        target_exact: int | None = None,
    ) -> Iterator[CountMatrix]:
        """All admissible root count matrices, in lexicographic (row-major) order.

        Column sums are bounded by the root's label-class sizes; the
        optional arguments prune on the seed-row total, the grand total,
        and an exact total over the given columns.
        """
        caps = self._label_counts[self.root_index]
        rows = self.latency + 1
        k = self.k
        tset = frozenset(target_cols)
        cur = [[0] * k for _ in range(rows)]
        used = [0] * k

        def capacity(cols: Iterable[int]) -> int:
            return sum(caps[l] - used[l] for l in cols)

        def rec(cell: int, seed_used: int, total_used: int, target_used: int):
            if cell == rows * k:
                if target_exact is not None and target_used != target_exact:
                    return
                if min_total is not None and total_used < min_total:
                    return
                yield tuple(tuple(row) for row in cur)
                return
            i, l = divmod(cell, k)
            cap = caps[l] - used[l]
            if seed_cap is not None and i == 0:
                cap = min(cap, seed_cap - seed_used)
            if target_exact is not None and l in tset:
                cap = min(cap, target_exact - target_used)
            for val in range(cap + 1):
                cur[i][l] = val
                used[l] += val
                if min_total is None or total_used + val + capacity(
                    range(k)
                ) >= min_total:
                    if (
                        target_exact is None
                        or target_used
                        + (val if l in tset else 0)
                        + capacity(tset)
                        >= target_exact
                    ):
                        yield from rec(
                            cell + 1,
                            seed_used + (val if i == 0 else 0),
                            total_used + val,
                            target_used + (val if l in tset else 0),
                        )
                used[l] -= val
            cur[i][l] = 0

        yield from rec(0, 0, 0, 0)

    def query(self, counts: CountMatrix, reductions: ReductionMatrix) -> bool:
        """Satisfiability of one query at the root node."""
        self._check_dims(counts, reductions)
        return bool(self._gamma(self.root_index, counts, reductions))

    def _check_dims(self, counts, reductions) -> None:
        if len(counts) != self.latency + 1 or len(reductions) != self.latency:
            raise ValueError("matrix rows do not match the latency bound")
        for row in (*counts, *reductions):
            if len(row) != self.k:
                raise ValueError(f"matrix rows must have width {self.k}")
            if any(x < 0 for x in row):
                raise ValueError("matrix entries must be non-negative")

    def decide(self, budget: int, requirement: int) -> bool:
        """Is there a seed set within budget activating at least the requirement?"""
        zero = zero_reductions(self.latency, self.k)
        for counts in self._root_counts(seed_cap=budget, min_total=requirement):
            if self._gamma(self.root_index, counts, zero):
                return True
        return False

    def select(self, budget: int, requirement: int) -> frozenset[int] | None:
        """A witness seed set for :meth:`decide`, or None when infeasible."""
        zero = zero_reductions(self.latency, self.k)
        for counts in self._root_counts(seed_cap=budget, min_total=requirement):
            if self._gamma(self.root_index, counts, zero):
                process = self.reconstruct(counts, zero)
                seeds = process[0]
                final = simulate(
                    self.labeled.graph, self.thresholds, seeds, self.latency
                ).final
                assert len(seeds) <= budget and len(final) >= requirement
                return seeds
        return None

    def reconstruct(
        self,
        counts: CountMatrix,
        reductions: ReductionMatrix,
        node: int | None = None,
    ) -> list[frozenset[int]]:
        """Materialize a witness process for a satisfiable query.

        Vertex ids refer to the full evaluated graph.  Raises when the
        query is unsatisfiable.
        """
        if node is None:
            node = self.root_index
        witness = self._gamma(node, counts, reductions)
        if not witness:
            raise ValueError("query is not satisfiable; nothing to reconstruct")
        kind = witness[0]
        if kind == "leaf":
            vid = self._info[node][0]
            istar = witness[1]
            if istar is None:
                return [frozenset()] * (self.latency + 1)
            return [
                frozenset({vid}) if i >= istar else frozenset()
                for i in range(self.latency + 1)
            ]
        if kind == "union":
            left, right = self._info[node]
            p1 = self.reconstruct(witness[1], reductions, left)
            p2 = self.reconstruct(witness[2], reductions, right)
            return [a | b for a, b in zip(p1, p2)]
        child = self._info[node][0]
        if kind == "eta":
            return self.reconstruct(counts, witness[1], child)
        return self.reconstruct(witness[1], witness[2], child)


# ---------------------------------------------------------------------------
# module-level fronts


def decide(
    expr: KExpr,
    thresholds: Sequence[int],
    latency: int,
    budget: int,
    requirement: int,
) -> bool:
    return CliqueWidthSolver(expr, thresholds, latency).decide(
        budget, requirement
    )


def select(
    expr: KExpr,
    thresholds: Sequence[int],
    latency: int,
    budget: int,
    requirement: int,
) -> frozenset[int] | None:
    return CliqueWidthSolver(expr, thresholds, latency).select(
        budget, requirement
    )


def _lifted_solver(
    expr: KExpr,
    thresholds: Sequence[int],
    latency: int,
    targets: Iterable[int],
) -> tuple[CliqueWidthSolver, tuple[int, ...], int]:
    base_k = width(expr)
    labeled = evaluate(expr)
    target_set = frozenset(targets)
    for v in target_set:
        if not 0 <= v < labeled.graph.n:
            raise ValueError(f"target vertex {v} out of range")
    names = {labeled.names[v] for v in target_set}
    lifted = lift_targets(expr, names, base_k)
    solver = CliqueWidthSolver(lifted, thresholds, latency)
    distinguished = tuple(range(base_k, solver.k))
    return solver, distinguished, len(target_set)


def decide_targets(
    expr: KExpr,
    thresholds: Sequence[int],
    latency: int,
    budget: int,
    targets: Iterable[int],
) -> bool:
    """Can every target be activated within latency using at most budget seeds?

    Runs the same recursion on the lifted expression, whose labels above
    the original width carry exactly the target vertices; a root count
    matrix is accepted when its seed row stays within budget and its
    distinguished columns sum to the number of targets.
    """
    solver, tcols, count = _lifted_solver(expr, thresholds, latency, targets)
    zero = zero_reductions(solver.latency, solver.k)
    for counts in solver._root_counts(
        seed_cap=budget, target_cols=tcols, target_exact=count
    ):
        if solver._gamma(solver.root_index, counts, zero):
            return True
    return False


def select_targets(
    expr: KExpr,
    thresholds: Sequence[int],
    latency: int,
    budget: int,
    targets: Iterable[int],
) -> frozenset[int] | None:
    """A witness seed set for :func:`decide_targets`, or None."""
    solver, tcols, count = _lifted_solver(expr, thresholds, latency, targets)
    target_set = frozenset(targets)
    zero = zero_reductions(solver.latency, solver.k)
    for counts in solver._root_counts(
        seed_cap=budget, target_cols=tcols, target_exact=count
    ):
        if solver._gamma(solver.root_index, counts, zero):
            process = solver.reconstruct(counts, zero)
            seeds = process[0]
            final = simulate(
                solver.labeled.graph, solver.thresholds, seeds, latency
            ).final
            assert len(seeds) <= budget and target_set <= final
            return seeds
    return None
