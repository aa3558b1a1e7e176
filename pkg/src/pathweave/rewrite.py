"""Cost-directed rewriting of path expressions using the algebra's identities.

Rules are (lhs, rhs) pattern pairs over the expression AST with
metavariables for subexpressions, vertex names, thresholds, and scale
factors. Every rule is semantics preserving under its guard;
``verify_rule`` checks that empirically, exhaustively over 2x2 boolean
matrices where the pattern has at most two matrix metavariables.

``simplify`` runs a best-first search over single-step rewrites, bounded by
a rule-application budget of at most node_count^2 and a small cost
allowance above the input (several derivations pass through a one-step
hill, e.g. rewriting a row filter to a transposed column filter before
fusing transposes). The returned expression always costs no more than the
input under the weighted node count (matrix product 4, filter product 2,
everything else 1); ties prefer more shared subtrees, then the shorter
rendering, so chains come out left-associated.

Boolean-valuedness guards are syntactic: slices, filters, and the
clip/not/vout/vin results count as {0,1}-valued; products, sums, and
scalings do not, even if their value happens to be boolean.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from . import kernels
from .expr import (
    Add,
    Clip,
    Filter,
    Hadamard,
    MatMul,
    Not,
    Scale,
    SliceRef,
    Transpose,
    VIn,
    VOut,
    children,
    format_expr,
    is_boolean_expr,
    node_count,
    replace_at,
    subexpr_at,
    walk,
    weighted_cost,
)

# -- pattern metavariables ----------------------------------------------------


@dataclass(frozen=True, slots=True)
class EVar:
    """Matches any subexpression; with boolean=True only syntactically
    {0,1}-valued ones."""

    name: str
    boolean: bool = False


@dataclass(frozen=True, slots=True)
class NVar:
    """Matches a vertex name inside a row/col/entry filter."""

    name: str


@dataclass(frozen=True, slots=True)
class PVar:
    """Matches a vertex-function threshold."""

    name: str


@dataclass(frozen=True, slots=True)
class LVar:
    """Matches a scale factor."""

    name: str


def _match_scalar(pat, value, kind, bnd) -> bool:
    if isinstance(pat, (NVar, PVar, LVar)):
        if pat.name in bnd:
            return bnd[pat.name] == value
        if not isinstance(pat, kind):
            return False
        bnd[pat.name] = value
        return True
    return pat == value


def match(pat, e, bnd) -> bool:
    """Structural match; repeated metavariables must bind equal values."""
    if isinstance(pat, EVar):
        if pat.name in bnd:
            return bnd[pat.name] == e
        if pat.boolean and not is_boolean_expr(e):
            return False
        bnd[pat.name] = e
        return True
    if type(pat) is not type(e):
        return False
    if isinstance(pat, SliceRef):
        return pat.label == e.label
    if isinstance(pat, Filter):
        return (
            pat.kind == e.kind
            and _match_scalar(pat.a, e.a, NVar, bnd)
            and _match_scalar(pat.b, e.b, NVar, bnd)
        )
    if isinstance(pat, Scale):
        return _match_scalar(pat.coef, e.coef, LVar, bnd) and match(pat.child, e.child, bnd)
    if isinstance(pat, (VOut, VIn)):
        return _match_scalar(pat.p, e.p, PVar, bnd) and match(pat.child, e.child, bnd)
    pk, ek = children(pat), children(e)
    return all(match(p, c, bnd) for p, c in zip(pk, ek))


def instantiate(template, bnd):
    if callable(template) and not isinstance(template, type):
        return template(bnd)
    return _subst(template, bnd)


def _subst(pat, bnd):
    if isinstance(pat, EVar):
        return bnd[pat.name]
    if isinstance(pat, (SliceRef,)):
        return pat
    if isinstance(pat, Filter):
        a = bnd[pat.a.name] if isinstance(pat.a, NVar) else pat.a
        b = bnd[pat.b.name] if isinstance(pat.b, NVar) else pat.b
        return Filter(pat.kind, a, b)
    if isinstance(pat, Scale):
        coef = bnd[pat.coef.name] if isinstance(pat.coef, LVar) else pat.coef
        return Scale(coef, _subst(pat.child, bnd))
    if isinstance(pat, (VOut, VIn)):
        p = bnd[pat.p.name] if isinstance(pat.p, PVar) else pat.p
        return type(pat)(_subst(pat.child, bnd), p)
    kids = children(pat)
    if not kids:
        return pat
    if isinstance(pat, (MatMul, Hadamard, Add)):
        return type(pat)(_subst(kids[0], bnd), _subst(kids[1], bnd))
    return type(pat)(_subst(kids[0], bnd))


@dataclass(frozen=True)
class RewriteRule:
    """One algebraic identity, oriented; `guard` further constrains bindings
    (e.g. distinct filter indices, zero threshold). `search=False` rules are
    kept for the evaluator's planner and for verification but stay out of
    the simplifier's search."""

    name: str
    cite: str
    lhs: object
    rhs: object
    guard: object = None
    search: bool = True

    def apply(self, e):
        bnd: dict = {}
        if not match(self.lhs, e, bnd):
            return None
        if self.guard is not None and not self.guard(bnd):
            return None
        return instantiate(self.rhs, bnd)


# -- the rule set ---------------------------------------------------------------

_a, _b, _c = EVar("a"), EVar("b"), EVar("c")
_A, _B = EVar("a", boolean=True), EVar("b", boolean=True)
_z = EVar("z")
_i, _j = NVar("i"), NVar("j")
_p, _q = PVar("p"), PVar("q")
_l, _m = LVar("l"), LVar("m")
_ONES, _ZERO, _I = Filter("ones"), Filter("zeros"), Filter("identity")
_R = Filter("row", _i)
_C = Filter("col", _i)
_E = Filter("entry", _i, _j)


def _rules():
    r = []

    def rule(name, cite, lhs, rhs, guard=None, search=True):
        r.append(RewriteRule(name, cite, lhs, rhs, guard, search))

    # Hadamard properties
    rule("had-unit", "A o 1 = A", Hadamard(_a, _ONES), _a)
    rule("had-unit-comm", "A o 1 = A", Hadamard(_ONES, _a), _a)
    rule("had-zero", "A o 0 = 0", Hadamard(_a, _ZERO), _ZERO)
    rule("had-zero-comm", "A o 0 = 0", Hadamard(_ZERO, _a), _ZERO)
    # verified but not searched: free commuting floods the frontier with
    # equal-cost permutations; rules that need a swapped operand order carry
    # explicit orientation variants instead
    rule("had-commute", "A o B = B o A", Hadamard(_a, _b), Hadamard(_b, _a), search=False)
    rule(
        "had-distribute",
        "A o (B + C) = (A o B) + (A o C)",
        Hadamard(_a, Add(_b, _c)),
        Add(Hadamard(_a, _b), Hadamard(_a, _c)),
    )
    rule(
        "had-factor",
        "A o (B + C) = (A o B) + (A o C)",
        Add(Hadamard(_a, _c), Hadamard(_b, _c)),
        Hadamard(Add(_a, _b), _c),
    )
    rule(
        "had-factor-left",
        "A o (B + C) = (A o B) + (A o C)",
        Add(Hadamard(_c, _a), Hadamard(_c, _b)),
        Hadamard(_c, Add(_a, _b)),
    )
    rule(
        "had-scalar-out",
        "A o lB = l(A o B)",
        Hadamard(_a, Scale(_l, _b)),
        Scale(_l, Hadamard(_a, _b)),
    )
    rule(
        "had-scalar-out-left",
        "A o lB = l(A o B)",
        Hadamard(Scale(_l, _a), _b),
        Scale(_l, Hadamard(_a, _b)),
    )
    rule(
        "scale-into-had",
        "A o lB = l(A o B)",
        Scale(_l, Hadamard(_a, _b)),
        Hadamard(Scale(_l, _a), _b),
    )
    rule(
        "had-transpose-fuse",
        "A' o B' = (A o B)'",
        Hadamard(Transpose(_a), Transpose(_b)),
        Transpose(Hadamard(_a, _b)),
    )
    rule(
        "had-transpose-fuse-swap",
        "A' o B' = (B o A)'",
        Hadamard(Transpose(_a), Transpose(_b)),
        Transpose(Hadamard(_b, _a)),
    )
    rule(
        "transpose-over-had",
        "A' o B' = (A o B)'",
        Transpose(Hadamard(_a, _b)),
        Hadamard(Transpose(_a), Transpose(_b)),
    )
    rule("had-idempotent", "A o A = A for boolean A", Hadamard(_A, EVar("a")), _a)
    rule(
        "had-assoc",
        "entrywise product is associative",
        Hadamard(Hadamard(_a, _b), _c),
        Hadamard(_a, Hadamard(_b, _c)),
    )
    rule(
        "had-assoc-left",
        "entrywise product is associative",
        Hadamard(_a, Hadamard(_b, _c)),
        Hadamard(Hadamard(_a, _b), _c),
    )

    # not
    rule("not-not", "n(n(A)) = A", Not(Not(_A)), _a)
    rule("had-not-zero", "A o n(A) = 0", Hadamard(_A, Not(EVar("a"))), _ZERO)
    rule("had-not-zero-comm", "A o n(A) = 0", Hadamard(Not(_A), EVar("a")), _ZERO)

    # clip
    rule("clip-boolean", "c(A) = A for boolean A", Clip(_A), _a)
    rule(
        "clip-split",
        "c(Y o Z) = c(Y) o c(Z)",
        Clip(Hadamard(_a, _b)),
        Hadamard(Clip(_a), Clip(_b)),
    )
    rule(
        "clip-merge",
        "c(Y o Z) = c(Y) o c(Z)",
        Hadamard(Clip(_a), Clip(_b)),
        Clip(Hadamard(_a, _b)),
    )
    rule(
        "clip-split-boolean",
        "c(Y o B) = c(Y) o B for boolean B",
        Clip(Hadamard(_a, _B)),
        Hadamard(Clip(_a), _b),
    )
    rule(
        "clip-split-boolean-left",
        "c(B o Y) = B o c(Y) for boolean B",
        Clip(Hadamard(_A, _b)),
        Hadamard(_a, Clip(_b)),
    )
    rule(
        "demorgan-and",
        "n(A o B) = c(n(A) + n(B))",
        Not(Hadamard(_A, _B)),
        Clip(Add(Not(_a), Not(_b))),
    )
    rule(
        "demorgan-and-merge",
        "n(A o B) = c(n(A) + n(B))",
        Clip(Add(Not(_A), Not(_B))),
        Not(Hadamard(_a, _b)),
    )
    rule(
        "demorgan-or",
        "n(c(A + B)) = n(A) o n(B)",
        Not(Clip(Add(_A, _B))),
        Hadamard(Not(_a), Not(_b)),
    )
    # verified but kept out of the search: merging two complement filters
    # into one clip-of-sum is cheaper under the cost weights, which would
    # steer the simplifier away from the canonical two-filter forms
    rule(
        "demorgan-or-merge",
        "n(c(A + B)) = n(A) o n(B)",
        Hadamard(Not(_A), Not(_B)),
        Not(Clip(Add(_a, _b))),
        search=False,
    )
    # fused: outside B's support the complement of A o B agrees with the
    # complement of A; chains the clip product rule, c(B) = B,
    # distributivity, and A o n(A) = 0
    for nm, lhs, rhs in (
        ("not-masked", Hadamard(Not(Hadamard(_A, _B)), EVar("b")), Hadamard(Not(_a), _b)),
        ("not-masked-comm", Hadamard(Not(Hadamard(_B, _A)), EVar("b")), Hadamard(Not(_a), _b)),
        ("not-masked-right", Hadamard(_B, Not(Hadamard(_A, EVar("b")))), Hadamard(_b, Not(_a))),
        ("not-masked-right-comm", Hadamard(_B, Not(Hadamard(EVar("b"), _A))), Hadamard(_b, Not(_a))),
    ):
        rule(nm, "n(A o B) o B = n(A) o B (clip product rule, De Morgan, A o n(A) = 0)", lhs, rhs)

    # vertex-specific filters
    rule(
        "row-row-zero",
        "R_i o R_j = 0 for i != j",
        Hadamard(Filter("row", _i), Filter("row", _j)),
        _ZERO,
        guard=lambda bnd: bnd["i"] != bnd["j"],
    )
    rule(
        "col-col-zero",
        "C_i o C_j = 0 for i != j",
        Hadamard(Filter("col", _i), Filter("col", _j)),
        _ZERO,
        guard=lambda bnd: bnd["i"] != bnd["j"],
    )
    rule(
        "row-col-entry",
        "R_i o C_j = E_ij",
        Hadamard(Filter("row", _i), Filter("col", _j)),
        Filter("entry", _i, _j),
    )
    rule(
        "col-row-entry",
        "R_i o C_j = E_ij",
        Hadamard(Filter("col", _j), Filter("row", _i)),
        Filter("entry", _i, _j),
    )
    rule("row-transpose", "R_i = C_i'", Transpose(Filter("col", _i)), Filter("row", _i))
    rule("col-transpose", "C_i = R_i'", Transpose(Filter("row", _i)), Filter("col", _i))
    rule("entry-transpose", "E_ij = E_ji'", Transpose(_E), Filter("entry", _j, _i))
    rule("row-intro-transpose", "R_i = C_i'", Filter("row", _i), Transpose(Filter("col", _i)))
    rule("col-intro-transpose", "C_i = R_i'", Filter("col", _i), Transpose(Filter("row", _i)))
    rule("identity-transpose", "I' = I", Transpose(_I), _I)
    rule("ones-transpose", "1' = 1", Transpose(_ONES), _ONES)
    rule("zeros-transpose", "0' = 0", Transpose(_ZERO), _ZERO)

    # vertex functions
    zerop = lambda bnd: bnd["p"] == 0
    rule("vout-row", "v-(R_i) = R_i", VOut(_R, _p), _R, guard=zerop)
    rule("vin-col", "v+(C_i) = C_i", VIn(_C, _p), _C, guard=zerop)
    rule(
        "vin-vout-entry",
        "v+(E_ij) o v-(E_ij) = E_ij",
        Hadamard(VIn(_E, _p), VOut(Filter("entry", _i, _j), _q)),
        _E,
        guard=lambda bnd: bnd["p"] == 0 and bnd["q"] == 0,
    )
    rule(
        "vout-entry-vin",
        "v+(E_ij) o v-(E_ij) = E_ij",
        Hadamard(VOut(_E, _p), VIn(Filter("entry", _i, _j), _q)),
        _E,
        guard=lambda bnd: bnd["p"] == 0 and bnd["q"] == 0,
    )
    rule(
        "vout-row-mask",
        "v-(Z o R_i) = v-(Z) o R_i",
        VOut(Hadamard(_z, _R), _p),
        Hadamard(VOut(_z, _p), _R),
    )
    rule(
        "vout-row-mask-comm",
        "v-(Z o R_i) = v-(Z) o R_i",
        VOut(Hadamard(_R, _z), _p),
        Hadamard(VOut(_z, _p), _R),
    )
    rule(
        "vin-col-mask",
        "v+(Z o C_i) = v+(Z) o C_i",
        VIn(Hadamard(_z, _C), _p),
        Hadamard(VIn(_z, _p), _C),
    )
    rule(
        "vin-col-mask-comm",
        "v+(Z o C_i) = v+(Z) o C_i",
        VIn(Hadamard(_C, _z), _p),
        Hadamard(VIn(_z, _p), _C),
    )
    rule(
        "vout-transpose",
        "v-(Z', p) = v+(Z, p)'",
        VOut(Transpose(_z), _p),
        Transpose(VIn(_z, _p)),
    )
    rule(
        "vin-transpose",
        "v+(Z', p) = v-(Z, p)'",
        VIn(Transpose(_z), _p),
        Transpose(VOut(_z, _p)),
    )
    rule(
        "transpose-vout",
        "v-(Z, p)' = v+(Z', p)",
        Transpose(VOut(_z, _p)),
        VIn(Transpose(_z), _p),
    )
    rule(
        "transpose-vin",
        "v+(Z, p)' = v-(Z', p)",
        Transpose(VIn(_z, _p)),
        VOut(Transpose(_z), _p),
    )

    # transpose, merge, scale plumbing (guard-free standard identities)
    rule("transpose-transpose", "(A')' = A", Transpose(Transpose(_a)), _a)
    rule(
        "transpose-over-matmul",
        "(A . B)' = B' . A'",
        Transpose(MatMul(_a, _b)),
        MatMul(Transpose(_b), Transpose(_a)),
    )
    rule(
        "matmul-transpose-fuse",
        "(A . B)' = B' . A'",
        MatMul(Transpose(_a), Transpose(_b)),
        Transpose(MatMul(_b, _a)),
    )
    rule(
        "add-transpose-fuse",
        "(A + B)' = A' + B'",
        Add(Transpose(_a), Transpose(_b)),
        Transpose(Add(_a, _b)),
    )
    rule("add-zero", "A + 0 = A", Add(_a, _ZERO), _a)
    rule("add-zero-comm", "A + 0 = A", Add(_ZERO, _a), _a)
    rule("add-commute", "A + B = B + A", Add(_a, _b), Add(_b, _a), search=False)
    rule("matmul-zero", "A . 0 = 0", MatMul(_a, _ZERO), _ZERO)
    rule("matmul-zero-left", "0 . A = 0", MatMul(_ZERO, _a), _ZERO)
    rule("matmul-identity", "A . I = A", MatMul(_a, _I), _a)
    rule("matmul-identity-left", "I . A = A", MatMul(_I, _a), _a)
    rule("scale-one", "1A = A", Scale(_l, _a), _a, guard=lambda bnd: bnd["l"] == 1)
    rule("scale-zero", "0A = 0", Scale(_l, _a), _ZERO, guard=lambda bnd: bnd["l"] == 0)
    rule(
        "scale-fuse",
        "l(mA) = (lm)A",
        Scale(_l, Scale(_m, _a)),
        lambda bnd: Scale(bnd["l"] * bnd["m"], bnd["a"]),
    )

    # planner-only commutations: masking a product's rows (columns) equals
    # masking the left (right) factor first
    rule(
        "row-mask-into-product",
        "(A . B) o R_i = (A o R_i) . B",
        Hadamard(MatMul(_a, _b), Filter("row", _i)),
        MatMul(Hadamard(_a, Filter("row", _i)), _b),
        search=False,
    )
    rule(
        "col-mask-into-product",
        "(A . B) o C_j = A . (B o C_j)",
        Hadamard(MatMul(_a, _b), Filter("col", _j)),
        MatMul(_a, Hadamard(_b, Filter("col", _j))),
        search=False,
    )
    return tuple(r)


RULES = _rules()
RULES_BY_NAME = {r.name: r for r in RULES}


# -- the trace -------------------------------------------------------------------


@dataclass(frozen=True)
class TraceStep:
    rule: str
    cite: str
    path: tuple
    before: object
    after: object


@dataclass(frozen=True)
class RuleTrace:
    steps: tuple

    def replay(self, start):
        """Re-apply the recorded steps; returns the final expression."""
        e = start
        for step in self.steps:
            if subexpr_at(e, step.path) != step.before:
                raise ValueError(f"trace does not replay at step {step.rule!r}")
            e = replace_at(e, step.path, step.after)
        return e

    def __len__(self):
        return len(self.steps)


def derivation_table(start, trace: RuleTrace):
    """Two-column derivation rows: (whole expression, justification)."""
    rows = [(format_expr(start), "")]
    e = start
    for step in trace.steps:
        e = replace_at(e, step.path, step.after)
        rows.append((format_expr(e), f"{step.rule}: {step.cite}"))
    return rows


# -- simplification ---------------------------------------------------------------


def _dag_size(e) -> int:
    return len({node for _, node in walk(e)})


def _tie_key(e):
    # ties prefer shared subtrees, then shorter renderings (left-assoc
    # chains need no parentheses); remaining ties keep the first-discovered
    # expression, i.e. the one fewest steps from the input
    return (weighted_cost(e), _dag_size(e), len(format_expr(e)))


def _rules_by_root(rules):
    grouped: dict = {}
    for rule in rules:
        grouped.setdefault(type(rule.lhs), []).append(rule)
    return grouped


def _single_steps(e, grouped_rules):
    """All (rule, path, rewritten-whole-expression) single-step successors,
    in deterministic preorder/rule order."""
    out = []
    for path, node in walk(e):
        for rule in grouped_rules.get(type(node), ()):
            new_sub = rule.apply(node)
            if new_sub is not None and new_sub != node:
                out.append((rule, path, node, new_sub, replace_at(e, path, new_sub)))
    return out


HILL_ALLOWANCE = 2


def simplify(e, budget: int | None = None):
    """Rewrite toward minimal weighted cost; returns (expression, RuleTrace).

    Never worse than the input; terminates within node_count^2 retained rule
    applications (or the supplied budget).
    """
    grouped = _rules_by_root([r for r in RULES if r.search])
    if budget is None:
        budget = min(node_count(e) ** 2, 400)
    cap = weighted_cost(e) + HILL_ALLOWANCE
    seen = {e: None}
    best, best_key = e, _tie_key(e)
    counter = 0
    frontier = [(weighted_cost(e), counter, e)]
    applications = 0
    while frontier and applications < budget:
        _, _, current = heapq.heappop(frontier)
        for rule, path, before, after, new_expr in _single_steps(current, grouped):
            if new_expr in seen:
                continue
            cost = weighted_cost(new_expr)
            if cost > cap:
                continue
            applications += 1
            seen[new_expr] = (current, rule, path, before, after)
            counter += 1
            heapq.heappush(frontier, (cost, counter, new_expr))
            key = _tie_key(new_expr)
            if key < best_key:
                best, best_key = new_expr, key
            if applications >= budget:
                break
    steps = []
    node = best
    while seen[node] is not None:
        parent, rule, path, before, after = seen[node]
        steps.append(TraceStep(rule.name, rule.cite, path, before, after))
        node = parent
    return best, RuleTrace(tuple(reversed(steps)))


# -- empirical rule verification ----------------------------------------------------


def _collect_vars(pat, acc):
    if isinstance(pat, EVar):
        acc.setdefault(pat.name, pat)
        return
    if isinstance(pat, Filter):
        for f in (pat.a, pat.b):
            if isinstance(f, NVar):
                acc.setdefault(f.name, f)
        return
    if isinstance(pat, Scale):
        if isinstance(pat.coef, LVar):
            acc.setdefault(pat.coef.name, pat.coef)
        _collect_vars(pat.child, acc)
        return
    if isinstance(pat, (VOut, VIn)):
        if isinstance(pat.p, PVar):
            acc.setdefault(pat.p.name, pat.p)
        _collect_vars(pat.child, acc)
        return
    for kid in children(pat):
        _collect_vars(kid, acc)


def _eval_pattern(pat, bnd, n):
    """Evaluate a pattern with metavariables bound to concrete matrices,
    indices, thresholds, and scale factors."""
    if isinstance(pat, kernels.PathMatrix):
        return pat
    if isinstance(pat, EVar):
        return bnd[pat.name]
    if isinstance(pat, Filter):
        i = bnd[pat.a.name] if isinstance(pat.a, NVar) else pat.a
        j = bnd[pat.b.name] if isinstance(pat.b, NVar) else pat.b
        return kernels.materialize_filter(kernels.FilterSpec(pat.kind, i, j), n)
    if isinstance(pat, MatMul):
        return kernels.matmul(_eval_pattern(pat.left, bnd, n), _eval_pattern(pat.right, bnd, n))
    if isinstance(pat, Hadamard):
        return kernels.hadamard(_eval_pattern(pat.left, bnd, n), _eval_pattern(pat.right, bnd, n))
    if isinstance(pat, Add):
        return kernels.add(_eval_pattern(pat.left, bnd, n), _eval_pattern(pat.right, bnd, n))
    if isinstance(pat, Transpose):
        return kernels.transpose(_eval_pattern(pat.child, bnd, n))
    if isinstance(pat, Not):
        return kernels.not_(_eval_pattern(pat.child, bnd, n))
    if isinstance(pat, Clip):
        return kernels.clip(_eval_pattern(pat.child, bnd, n))
    if isinstance(pat, VOut):
        p = bnd[pat.p.name] if isinstance(pat.p, PVar) else pat.p
        return kernels.vertex_out(_eval_pattern(pat.child, bnd, n), p)
    if isinstance(pat, VIn):
        p = bnd[pat.p.name] if isinstance(pat.p, PVar) else pat.p
        return kernels.vertex_in(_eval_pattern(pat.child, bnd, n), p)
    if isinstance(pat, Scale):
        lam = bnd[pat.coef.name] if isinstance(pat.coef, LVar) else pat.coef
        return kernels.scale(_eval_pattern(pat.child, bnd, n), lam)
    raise TypeError(f"cannot evaluate pattern node {pat!r}")


def _rhs_for_verification(rule, bnd):
    if callable(rule.rhs) and not isinstance(rule.rhs, type):
        return rule.rhs(bnd)
    return rule.rhs


def _boolean_2x2():
    import itertools

    return [
        kernels.PathMatrix.from_dense(np.array(bits, dtype=np.int64).reshape(2, 2))
        for bits in itertools.product((0, 1), repeat=4)
    ]


def _sides_equal(rule, bnd, n) -> bool:
    lhs = _eval_pattern(rule.lhs, bnd, n).to_dense().astype(float)
    rhs_pat = _rhs_for_verification(rule, bnd)
    rhs = (
        rhs_pat.to_dense().astype(float)
        if isinstance(rhs_pat, kernels.PathMatrix)
        else _eval_pattern(rhs_pat, bnd, n).to_dense().astype(float)
    )
    return np.allclose(lhs, rhs, rtol=0, atol=1e-9)


def verify_rule(rule: RewriteRule, trials: int = 200, rng=None) -> bool:
    """Empirical soundness: the two sides evaluate identically on random
    operands satisfying the guard; exhaustive over 2x2 boolean matrices when
    the pattern has at most two matrix metavariables."""
    rng = rng if rng is not None else np.random.default_rng(7)
    acc: dict = {}
    _collect_vars(rule.lhs, acc)
    evars = [v for v in acc.values() if isinstance(v, EVar)]
    nvars = [v for v in acc.values() if isinstance(v, NVar)]
    pvars = [v for v in acc.values() if isinstance(v, PVar)]
    lvars = [v for v in acc.values() if isinstance(v, LVar)]

    def scalar_rounds(n, rng):
        bnd = {}
        for v in nvars:
            bnd[v.name] = int(rng.integers(0, n))
        for v in pvars:
            bnd[v.name] = int(rng.integers(0, 3))
        for v in lvars:
            bnd[v.name] = float(rng.choice([0.0, 0.5, 1.0, 2.0]))
        return bnd

    if len(evars) <= 2:
        import itertools

        mats = _boolean_2x2()
        n = 2
        for combo in itertools.product(mats, repeat=len(evars)):
            bnd = scalar_rounds(n, rng)
            for var, mat in zip(evars, combo):
                bnd[var.name] = mat
            if rule.guard is not None and not rule.guard(bnd):
                continue
            if not _sides_equal(rule, bnd, n):
                return False
    for _ in range(trials):
        n = int(rng.integers(2, 9))
        bnd = scalar_rounds(n, rng)
        for var in evars:
            if var.boolean or rng.random() < 0.5:
                arr = (rng.random((n, n)) < 0.35).astype(np.int64)
            else:
                arr = rng.random((n, n)) * (rng.random((n, n)) < 0.35)
            bnd[var.name] = kernels.PathMatrix.from_dense(arr)
        if rule.guard is not None and not rule.guard(bnd):
            continue
        if not _sides_equal(rule, bnd, n):
            return False
    return True
