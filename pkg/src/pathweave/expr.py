"""Textual DSL for path expressions: AST, parser, printer, signature checker.

Grammar (loosest to tightest): `+` merges, `&` is the entrywise filter
product, `.` is the matrix product, `NUMBER *` scales, postfix `'`
transposes. Atoms are `A[label]`, the constant filters `I`, `ONES`, `ZERO`,
vertex filters `R(name)`, `C(name)`, `E(name,name)`, and the functions
`not(e)`, `clip(e)`, `vout(e[,p])`, `vin(e[,p])`. Vertex names resolve
through the dictionary at evaluation time, keeping expressions portable
across ingests.

Infix `.` and `&` replace the overloaded composition symbol of the printed
notation so products and filters can never be confused.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ExprSyntaxError

FILTER_KINDS = ("row", "col", "entry", "identity", "ones", "zeros")


@dataclass(frozen=True, slots=True)
class SliceRef:
    label: str


@dataclass(frozen=True, slots=True)
class Filter:
    kind: str
    a: object = None
    b: object = None


@dataclass(frozen=True, slots=True)
class MatMul:
    left: object
    right: object


@dataclass(frozen=True, slots=True)
class Hadamard:
    left: object
    right: object


@dataclass(frozen=True, slots=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True, slots=True)
class Transpose:
    child: object


@dataclass(frozen=True, slots=True)
class Not:
    child: object


@dataclass(frozen=True, slots=True)
class Clip:
    child: object


@dataclass(frozen=True, slots=True)
class VOut:
    child: object
    p: object = 0


@dataclass(frozen=True, slots=True)
class VIn:
    child: object
    p: object = 0


@dataclass(frozen=True, slots=True)
class Scale:
    coef: object
    child: object


_BINARY = (MatMul, Hadamard, Add)
_UNARY = (Transpose, Not, Clip, VOut, VIn, Scale)


def children(e) -> tuple:
    if isinstance(e, _BINARY):
        return (e.left, e.right)
    if isinstance(e, Scale):
        return (e.child,)
    if isinstance(e, _UNARY):
        return (e.child,)
    return ()


def with_children(e, kids: tuple):
    if isinstance(e, _BINARY):
        return type(e)(kids[0], kids[1])
    if isinstance(e, Scale):
        return Scale(e.coef, kids[0])
    if isinstance(e, (VOut, VIn)):
        return type(e)(kids[0], e.p)
    if isinstance(e, _UNARY):
        return type(e)(kids[0])
    return e


def walk(e):
    """Preorder iterator of (path, node)."""
    stack = [((), e)]
    while stack:
        path, node = stack.pop()
        yield path, node
        kids = children(node)
        for idx in range(len(kids) - 1, -1, -1):
            stack.append((path + (idx,), kids[idx]))


def subexpr_at(e, path: tuple):
    for idx in path:
        e = children(e)[idx]
    return e


def replace_at(e, path: tuple, new):
    if not path:
        return new
    kids = list(children(e))
    kids[path[0]] = replace_at(kids[path[0]], path[1:], new)
    return with_children(e, tuple(kids))


def node_count(e) -> int:
    return sum(1 for _ in walk(e))


def weighted_cost(e) -> int:
    """Node count with matrix products weighted 4 and filter products 2."""
    total = 0
    for _, node in walk(e):
        if isinstance(node, MatMul):
            total += 4
        elif isinstance(node, Hadamard):
            total += 2
        else:
            total += 1
    return total


def is_boolean_expr(e) -> bool:
    """Conservative syntactic {0,1}-valuedness.

    Slices are boolean by construction of the tensor; filters and the
    clip/not/vout/vin results are boolean by definition; a product of
    booleans is not (counts exceed 1), nor is a sum or a scaling.
    """
    if isinstance(e, (Filter, Not, Clip, VOut, VIn, SliceRef)):
        return True
    if isinstance(e, Transpose):
        return is_boolean_expr(e.child)
    if isinstance(e, Hadamard):
        return is_boolean_expr(e.left) and is_boolean_expr(e.right)
    return False


# -- parsing -----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<number>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_\-]*)
      | (?P<op>['.&+*()\[\],=])
    """,
    re.VERBOSE,
)

_FUNCTIONS = {"not", "clip", "vout", "vin"}
_RESERVED = {"I", "ONES", "ZERO", "R", "C", "E", "A", "let"} | _FUNCTIONS


@dataclass(frozen=True)
class _Token:
    kind: str
    value: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            out.append(_Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    out.append(_Token("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, tokens: list[_Token], env: dict | None):
        self.toks = tokens
        self.i = 0
        self.env = env or {}

    def peek(self) -> _Token:
        return self.toks[self.i]

    def take(self) -> _Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> _Token:
        tok = self.peek()
        if tok.kind == "op" and tok.value == value:
            return self.take()
        shown = tok.value or "end of input"
        raise ExprSyntaxError(f"expected {value!r}, found {shown!r}", tok.pos)

    def at_op(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.value == value

    def parse_expr(self):
        node = self.parse_hadamard()
        while self.at_op("+"):
            self.take()
            node = Add(node, self.parse_hadamard())
        return node

    def parse_hadamard(self):
        node = self.parse_product()
        while self.at_op("&"):
            self.take()
            node = Hadamard(node, self.parse_product())
        return node

    def parse_product(self):
        node = self.parse_unary()
        while self.at_op("."):
            self.take()
            node = MatMul(node, self.parse_unary())
        return node

    def parse_unary(self):
        tok = self.peek()
        if tok.kind == "number":
            self.take()
            self.expect("*")
            return Scale(float(tok.value), self.parse_unary())
        return self.parse_postfix()

    def parse_postfix(self):
        node = self.parse_atom()
        while self.at_op("'"):
            self.take()
            node = Transpose(node)
        return node

    def parse_atom(self):
        tok = self.peek()
        if tok.kind == "op" and tok.value == "(":
            self.take()
            node = self.parse_expr()
            self.expect(")")
            return node
        if tok.kind != "ident":
            shown = tok.value or "end of input"
            raise ExprSyntaxError(f"expected an expression, found {shown!r}", tok.pos)
        name = tok.value
        if name == "A" and self.toks[self.i + 1].value == "[":
            self.take()
            self.take()
            label = self.peek()
            if label.kind != "ident":
                raise ExprSyntaxError("expected a slice label", label.pos)
            self.take()
            self.expect("]")
            return SliceRef(label.value)
        if name == "I":
            self.take()
            return Filter("identity")
        if name == "ONES":
            self.take()
            return Filter("ones")
        if name == "ZERO":
            self.take()
            return Filter("zeros")
        if name in ("R", "C") and self.toks[self.i + 1].value == "(":
            self.take()
            self.take()
            vertex = self._vertex_name()
            self.expect(")")
            return Filter("row" if name == "R" else "col", vertex)
        if name == "E" and self.toks[self.i + 1].value == "(":
            self.take()
            self.take()
            a = self._vertex_name()
            self.expect(",")
            b = self._vertex_name()
            self.expect(")")
            return Filter("entry", a, b)
        if name in _FUNCTIONS and self.toks[self.i + 1].value == "(":
            self.take()
            self.take()
            inner = self.parse_expr()
            if name in ("vout", "vin"):
                p = 0
                if self.at_op(","):
                    self.take()
                    ptok = self.peek()
                    if ptok.kind != "number" or not ptok.value.isdigit():
                        raise ExprSyntaxError(
                            "vertex threshold must be a nonnegative integer", ptok.pos
                        )
                    self.take()
                    p = int(ptok.value)
                self.expect(")")
                return VOut(inner, p) if name == "vout" else VIn(inner, p)
            self.expect(")")
            return Not(inner) if name == "not" else Clip(inner)
        if self.toks[self.i + 1].value == "(":
            raise ExprSyntaxError(f"unknown function {name!r}", tok.pos)
        if name in self.env:
            self.take()
            return self.env[name]
        raise ExprSyntaxError(f"unknown name {name!r}", tok.pos)

    def _vertex_name(self) -> str:
        tok = self.peek()
        if tok.kind not in ("ident", "number"):
            raise ExprSyntaxError("expected a vertex name", tok.pos)
        self.take()
        return tok.value


def parse(text: str, env: dict | None = None):
    """Parse one expression; raises ExprSyntaxError with the failing offset."""
    if not text.strip():
        raise ExprSyntaxError("empty expression", 0)
    parser = _Parser(_tokenize(text), env)
    node = parser.parse_expr()
    tok = parser.peek()
    if tok.kind != "eof":
        raise ExprSyntaxError(f"unexpected trailing input {tok.value!r}", tok.pos)
    return node


def parse_program(text: str):
    """Parse an expression file: `#` comments, optional `let name = expr`
    bindings, last binding (or a trailing bare expression) is the result."""
    stripped = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    tokens = _tokenize(stripped)
    parser = _Parser(tokens, {})
    result = None
    while parser.peek().kind != "eof":
        tok = parser.peek()
        if tok.kind == "ident" and tok.value == "let":
            parser.take()
            name_tok = parser.take()
            if name_tok.kind != "ident" or name_tok.value in _RESERVED:
                raise ExprSyntaxError("expected a binding name after 'let'", name_tok.pos)
            eq = parser.take()
            if eq.value != "=":
                raise ExprSyntaxError("expected '=' in let binding", eq.pos)
            bound = parser.parse_expr()
            parser.env[name_tok.value] = bound
            result = bound
        else:
            result = parser.parse_expr()
            tail = parser.peek()
            if tail.kind == "eof":
                break
            if not (tail.kind == "ident" and tail.value == "let"):
                raise ExprSyntaxError(f"unexpected trailing input {tail.value!r}", tail.pos)
    if result is None:
        raise ExprSyntaxError("empty expression file", 0)
    return result


# -- printing ----------------------------------------------------------------

_LEVEL_ADD, _LEVEL_HAD, _LEVEL_MUL, _LEVEL_SCALE, _LEVEL_POSTFIX = range(5)


def _fmt_number(x) -> str:
    if isinstance(x, float) and x.is_integer() and abs(x) < 1e15:
        return repr(x)
    return repr(float(x))


def format_expr(e) -> str:
    """Render so that parse(format_expr(e)) reproduces the tree exactly."""
    return _fmt(e, _LEVEL_ADD)


def _paren(text: str, needed: bool) -> str:
    return f"({text})" if needed else text


def _fmt(e, level: int) -> str:
    if isinstance(e, SliceRef):
        return f"A[{e.label}]"
    if isinstance(e, Filter):
        if e.kind == "identity":
            return "I"
        if e.kind == "ones":
            return "ONES"
        if e.kind == "zeros":
            return "ZERO"
        if e.kind == "row":
            return f"R({e.a})"
        if e.kind == "col":
            return f"C({e.a})"
        return f"E({e.a},{e.b})"
    if isinstance(e, Add):
        text = f"{_fmt(e.left, _LEVEL_ADD)} + {_fmt(e.right, _LEVEL_HAD)}"
        return _paren(text, level > _LEVEL_ADD)
    if isinstance(e, Hadamard):
        text = f"{_fmt(e.left, _LEVEL_HAD)} & {_fmt(e.right, _LEVEL_MUL)}"
        return _paren(text, level > _LEVEL_HAD)
    if isinstance(e, MatMul):
        text = f"{_fmt(e.left, _LEVEL_MUL)} . {_fmt(e.right, _LEVEL_SCALE)}"
        return _paren(text, level > _LEVEL_MUL)
    if isinstance(e, Scale):
        text = f"{_fmt_number(e.coef)} * {_fmt(e.child, _LEVEL_SCALE)}"
        return _paren(text, level > _LEVEL_SCALE)
    if isinstance(e, Transpose):
        return f"{_fmt(e.child, _LEVEL_POSTFIX)}'"
    if isinstance(e, Not):
        return f"not({_fmt(e.child, _LEVEL_ADD)})"
    if isinstance(e, Clip):
        return f"clip({_fmt(e.child, _LEVEL_ADD)})"
    if isinstance(e, VOut):
        inner = _fmt(e.child, _LEVEL_ADD)
        return f"vout({inner})" if e.p == 0 else f"vout({inner}, {e.p})"
    if isinstance(e, VIn):
        inner = _fmt(e.child, _LEVEL_ADD)
        return f"vin({inner})" if e.p == 0 else f"vin({inner}, {e.p})"
    raise TypeError(f"not a path expression: {e!r}")


# -- signature checking --------------------------------------------------------


@dataclass(frozen=True)
class SignatureViolation:
    subexpr: str
    expected: str
    found: str


@dataclass(frozen=True)
class SignatureReport:
    ok: bool
    derived: tuple
    violations: tuple

    def __bool__(self):
        return self.ok


def check_signatures(e, tensor) -> SignatureReport:
    """Derive the (domainClass, rangeClass) of an expression and collect
    violations where a product composes a range with a mismatched domain or
    a merge/filter combines unequal signatures.

    Advisory only: a mis-typed composition evaluates to zero paths rather
    than failing, so violations are reported as data.
    """
    violations: list[SignatureViolation] = []

    def sig(node):
        if isinstance(node, SliceRef):
            s = tensor.slices.get(node.label)
            return s.signature if s is not None and s.signature else (None, None)
        if isinstance(node, Filter):
            return (None, None)
        if isinstance(node, Transpose):
            d, r = sig(node.child)
            return (r, d)
        if isinstance(node, (Not, Clip, VOut, VIn)):
            return sig(node.child)
        if isinstance(node, Scale):
            return sig(node.child)
        if isinstance(node, MatMul):
            ld, lr = sig(node.left)
            rd, rr = sig(node.right)
            if lr is not None and rd is not None and lr != rd:
                violations.append(SignatureViolation(format_expr(node), lr, rd))
            return (ld, rr)
        if isinstance(node, (Hadamard, Add)):
            left = sig(node.left)
            right = sig(node.right)
            if None in left:
                return right if None not in right else tuple(
                    l if l is not None else r for l, r in zip(left, right)
                )
            if None not in right and left != right:
                violations.append(
                    SignatureViolation(format_expr(node), f"{left[0]}->{left[1]}", f"{right[0]}->{right[1]}")
                )
            return left
        raise TypeError(f"not a path expression: {node!r}")

    derived = sig(e)
    return SignatureReport(ok=not violations, derived=derived, violations=tuple(violations))
