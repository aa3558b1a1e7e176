"""Execute path expressions against a tensor, with light evaluation planning.

Planning does two things, neither of which can change the result:

* matrix-product chains of three or more factors are reassociated by
  dynamic programming over estimated flops derived from nnz row/column
  profiles (counts are associative, so any order is sound);
* a row (column) filter applied to a product is pushed onto the left
  (right) factor, using the planner-only commutations from the rule set.

The plan also records the representation each node will take, which is how
`not(I)`-style complements stay unmaterialized through an evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import EvalError
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
    format_expr,
    walk,
)
from .rewrite import RULES_BY_NAME

_PUSH_RULES = (RULES_BY_NAME["row-mask-into-product"], RULES_BY_NAME["col-mask-into-product"])


def _filter_spec(node: Filter, tensor) -> kernels.FilterSpec:
    def resolve(name):
        if name is None:
            return None
        idx = tensor.vertices.index.get(str(name))
        if idx is None:
            raise EvalError(f"unknown vertex name {name!r} in filter")
        return idx

    return kernels.FilterSpec(node.kind, resolve(node.a), resolve(node.b))


def _eval(e, tensor) -> kernels.PathMatrix:
    if isinstance(e, SliceRef):
        return tensor.matrix(e.label)
    if isinstance(e, Filter):
        return kernels.materialize_filter(_filter_spec(e, tensor), tensor.n)
    if isinstance(e, MatMul):
        return kernels.matmul(_eval(e.left, tensor), _eval(e.right, tensor))
    if isinstance(e, Hadamard):
        return kernels.hadamard(_eval(e.left, tensor), _eval(e.right, tensor))
    if isinstance(e, Add):
        return kernels.add(_eval(e.left, tensor), _eval(e.right, tensor))
    if isinstance(e, Transpose):
        return kernels.transpose(_eval(e.child, tensor))
    if isinstance(e, Not):
        return kernels.not_(_eval(e.child, tensor))
    if isinstance(e, Clip):
        return kernels.clip(_eval(e.child, tensor))
    if isinstance(e, VOut):
        return kernels.vertex_out(_eval(e.child, tensor), e.p)
    if isinstance(e, VIn):
        return kernels.vertex_in(_eval(e.child, tensor), e.p)
    if isinstance(e, Scale):
        return kernels.scale(_eval(e.child, tensor), e.coef)
    raise EvalError(f"cannot evaluate {e!r}")


def evaluate(e, tensor, use_plan: bool = True) -> kernels.PathMatrix:
    """Evaluate an expression to a path matrix; identical with or without
    planning."""
    if use_plan:
        return _eval(plan(e, tensor).tree, tensor)
    return _eval(e, tensor)


# -- planning -----------------------------------------------------------------


@dataclass(frozen=True)
class PlanStep:
    op: str
    detail: str
    repr: str
    est_flops: float


@dataclass(frozen=True)
class EvalPlan:
    tree: object
    steps: tuple
    est_flops: float
    naive_flops: float


def _repr_of(e) -> str:
    """Representation the kernels will choose for this node's value."""
    if isinstance(e, Not):
        return "complement"
    if isinstance(e, Filter) and e.kind == "ones":
        return "complement"
    if isinstance(e, (Transpose, Clip)):
        return _repr_of(e.child)
    if isinstance(e, Hadamard):
        if _repr_of(e.left) == "complement" and _repr_of(e.right) == "complement":
            return "complement"
        return "sparse"
    if isinstance(e, Scale):
        return _repr_of(e.child) if e.coef == 1 else "sparse"
    return "sparse"


def _profiles(e, tensor):
    """Estimated per-row/per-column nonzero counts, never evaluated."""
    n = tensor.n
    if isinstance(e, SliceRef):
        mat = tensor.slice(e.label)
        rows = np.bincount(mat.tails, minlength=n).astype(float)
        cols = np.bincount(mat.heads, minlength=n).astype(float)
        return rows, cols
    if isinstance(e, Filter):
        rows = np.zeros(n)
        cols = np.zeros(n)
        if e.kind == "row":
            rows[:] = 0.0
            idx = tensor.vertices.index.get(str(e.a), 0)
            rows[idx] = n
            cols[:] = 1.0
        elif e.kind == "col":
            idx = tensor.vertices.index.get(str(e.a), 0)
            cols[idx] = n
            rows[:] = 1.0
        elif e.kind == "entry":
            i = tensor.vertices.index.get(str(e.a), 0)
            j = tensor.vertices.index.get(str(e.b), 0)
            rows[i] = 1.0
            cols[j] = 1.0
        elif e.kind == "identity":
            rows[:] = 1.0
            cols[:] = 1.0
        elif e.kind == "ones":
            rows[:] = n
            cols[:] = n
        return rows, cols
    if isinstance(e, Transpose):
        rows, cols = _profiles(e.child, tensor)
        return cols, rows
    if isinstance(e, (Clip, Scale)):
        return _profiles(e.child, tensor)
    if isinstance(e, Not):
        rows, cols = _profiles(e.child, tensor)
        return n - rows, n - cols
    if isinstance(e, (VOut, VIn)):
        rows, cols = _profiles(e.child, tensor)
        if isinstance(e, VOut):
            selected = rows > 0
            return np.where(selected, float(n), 0.0), np.full(n, float(selected.sum()))
        selected = cols > 0
        return np.full(n, float(selected.sum())), np.where(selected, float(n), 0.0)
    if isinstance(e, Hadamard):
        lr, lc = _profiles(e.left, tensor)
        rr, rc = _profiles(e.right, tensor)
        return np.minimum(lr, rr), np.minimum(lc, rc)
    if isinstance(e, Add):
        lr, lc = _profiles(e.left, tensor)
        rr, rc = _profiles(e.right, tensor)
        return np.minimum(lr + rr, n), np.minimum(lc + rc, n)
    if isinstance(e, MatMul):
        return _product_profile(_profiles(e.left, tensor), _profiles(e.right, tensor), n)
    raise EvalError(f"cannot profile {e!r}")


def _product_profile(left, right, n):
    lrows, lcols = left
    rrows, rcols = right
    # a product row can hold at most one entry per nonzero column of the
    # right factor, and a column at most one per nonzero row of the left
    mean_right = max(float(rrows.sum()) / n if n else 0.0, 1.0)
    nz_cols_right = float((rcols > 0).sum())
    rows = np.where(
        lrows > 0, np.minimum(np.minimum(lrows * mean_right, nz_cols_right), n), 0.0
    )
    mean_left = max(float(lcols.sum()) / n if n else 0.0, 1.0)
    nz_rows_left = float((lrows > 0).sum())
    cols = np.where(
        rcols > 0, np.minimum(np.minimum(rcols * mean_left, nz_rows_left), n), 0.0
    )
    return rows, cols


def _pair_flops(left, right):
    lcols = left[1]
    rrows = right[0]
    return float(np.dot(lcols, rrows))


def _flatten_chain(e):
    if isinstance(e, MatMul):
        return _flatten_chain(e.left) + _flatten_chain(e.right)
    return [e]


def _chain_order(factors, tensor):
    """Matrix-chain DP over estimated flops; returns (tree, est_flops)."""
    k = len(factors)
    profs = [_profiles(f, tensor) for f in factors]
    best = [[(0.0, None)] * k for _ in range(k)]
    span_prof = [[None] * k for _ in range(k)]
    for i in range(k):
        span_prof[i][i] = profs[i]
    n = tensor.n
    for width in range(2, k + 1):
        for i in range(0, k - width + 1):
            j = i + width - 1
            options = []
            for split in range(i, j):
                cost = (
                    best[i][split][0]
                    + best[split + 1][j][0]
                    + _pair_flops(span_prof[i][split], span_prof[split + 1][j])
                )
                options.append((cost, split))
            cost, split = min(options)
            best[i][j] = (cost, split)
            span_prof[i][j] = _product_profile(
                span_prof[i][split], span_prof[split + 1][j], n
            )

    def build(i, j):
        if i == j:
            return factors[i]
        split = best[i][j][1]
        return MatMul(build(i, split), build(split + 1, j))

    return build(0, k - 1), best[0][k - 1][0]


def _naive_flops(e, tensor):
    total = 0.0
    if isinstance(e, MatMul):
        total += _naive_flops(e.left, tensor) + _naive_flops(e.right, tensor)
        total += _pair_flops(_profiles(e.left, tensor), _profiles(e.right, tensor))
        return total
    for kid in (getattr(e, "left", None), getattr(e, "right", None), getattr(e, "child", None)):
        if kid is not None:
            total += _naive_flops(kid, tensor)
    return total


def _push_filters(e):
    """Apply the planner commutations bottom-up: masking a product's rows or
    columns becomes masking the matching factor."""
    kids = [_push_filters(k) for k in _children_of(e)]
    node = _rebuild(e, kids)
    changed = True
    while changed:
        changed = False
        for rule in _PUSH_RULES:
            out = rule.apply(node)
            if out is not None:
                node = _rebuild(out, [_push_filters(k) for k in _children_of(out)])
                changed = True
    return node


def _children_of(e):
    from .expr import children

    return children(e)


def _rebuild(e, kids):
    from .expr import with_children

    return with_children(e, tuple(kids))


def _reassociate(e, tensor):
    kids = [_reassociate(k, tensor) for k in _children_of(e)]
    node = _rebuild(e, kids)
    if isinstance(node, MatMul):
        factors = _flatten_chain(node)
        if len(factors) >= 3:
            node, _ = _chain_order(factors, tensor)
    return node


def plan(e, tensor) -> EvalPlan:
    """Choose association and filter placement; record per-node choices."""
    tree = _reassociate(_push_filters(e), tensor)
    steps = []
    total = 0.0
    for _, node in sorted(walk(tree), key=lambda pn: (len(pn[0]), pn[0]), reverse=True):
        if isinstance(node, MatMul):
            est = _pair_flops(_profiles(node.left, tensor), _profiles(node.right, tensor))
            total += est
            steps.append(
                PlanStep("matmul", format_expr(node), _repr_of(node), est)
            )
        elif not _children_of(node):
            steps.append(PlanStep("load", format_expr(node), _repr_of(node), 0.0))
        else:
            op = type(node).__name__.lower()
            steps.append(PlanStep(op, format_expr(node), _repr_of(node), 0.0))
    return EvalPlan(
        tree=tree,
        steps=tuple(steps),
        est_flops=total,
        naive_flops=_naive_flops(e, tensor),
    )
