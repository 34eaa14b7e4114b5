"""S-expression query language: tokenizer, parser and canonical printer.

Plan grammar (names are case-sensitive identifiers):

    (table R)
    (select <expr> <plan>)
    (project ((<expr> <name>) ...) <plan>)
    (cross <plan> <plan>)
    (join <expr> <plan> <plan>)
    (union <plan> <plan>)
    (diff <plan> <plan>)
    (aggregate (<attr> ...) ((<fn> <expr-or-*> [<name>]) ...) <plan>)
    (rename ((<old> <new>) ...) <plan>)
    (combine <plan>)
    (compress <attr> <n> <plan>)

Expressions: (and a b) (or a b) (not a) (= a b) (!= a b) (<= a b) (< a b)
(>= a b) (> a b) (+ a b) (- a b) (* a b) (recip a) (if c a b)
(mkuncert lb sg ub); atoms are integers, reals, true/false, "strings" and
identifiers (attribute references).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Tuple, Union

from . import expr as ex
from . import plan as p
from .aggregation import AVG, COUNT, MAX, MIN, SUM, AggSpec
from .errors import ParseError

_TOKEN = re.compile(
    r"""\s*(?:(?P<lpar>\()|(?P<rpar>\))|(?P<string>"(?:[^"\\]|\\.)*")|"""
    r"""(?P<atom>[^\s()"]+))""",
    re.DOTALL,
)


@dataclass(frozen=True)
class Token:
    text: str
    offset: int
    is_string: bool = False


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            break
        pos = m.end()
        if m.group("lpar"):
            tokens.append(Token("(", m.start("lpar")))
        elif m.group("rpar"):
            tokens.append(Token(")", m.start("rpar")))
        elif m.group("string") is not None:
            tokens.append(Token(m.group("string"), m.start("string"), is_string=True))
        else:
            tokens.append(Token(m.group("atom"), m.start("atom")))
    return tokens


Node = Union[Token, list]


def _read(tokens: List[Token], i: int) -> Tuple[Node, int]:
    if i >= len(tokens):
        raise ParseError("unexpected end of input")
    tok = tokens[i]
    if tok.text == "(":
        items = []
        i += 1
        while True:
            if i >= len(tokens):
                raise ParseError("missing closing parenthesis", tok.offset)
            if tokens[i].text == ")":
                return items, i + 1
            node, i = _read(tokens, i)
            items.append(node)
    if tok.text == ")":
        raise ParseError("unbalanced closing parenthesis", tok.offset)
    return tok, i + 1


def read_sexpr(text: str) -> Node:
    tokens = tokenize(text)
    node, i = _read(tokens, 0)
    if i != len(tokens):
        raise ParseError("trailing input after expression", tokens[i].offset)
    return node


_INT = re.compile(r"[+-]?\d+$")
_REAL = re.compile(r"[+-]?(\d+\.\d*|\.\d+|\d+([eE][+-]?\d+))$|[+-]?\d+\.\d*[eE][+-]?\d+$")


def _atom_expr(tok: Token) -> ex.Expr:
    if tok.is_string:
        try:
            body = tok.text[1:-1].encode().decode("unicode_escape")
        except UnicodeDecodeError:
            raise ParseError(f"bad string literal {tok.text}", tok.offset) from None
        return ex.Const(body)
    t = tok.text
    if t == "true":
        return ex.Const(True)
    if t == "false":
        return ex.Const(False)
    if _INT.match(t):
        return ex.Const(int(t))
    try:
        if any(c in t for c in ".eE") and not t[0].isalpha():
            return ex.Const(float(t))
    except ValueError:
        pass
    if re.match(r"[A-Za-z_][A-Za-z_0-9]*$", t):
        return ex.Var(t)
    raise ParseError(f"cannot read atom {t!r}", tok.offset)


_BINARY = {
    "and": ex.And,
    "or": ex.Or,
    "=": ex.Eq,
    "<=": ex.Leq,
    "+": ex.Plus,
    "*": ex.Times,
}
_SUGAR = {"!=": ex.neq, "<": ex.lt, ">=": ex.geq, ">": ex.gt, "-": ex.minus}


def build_expr(node: Node) -> ex.Expr:
    if isinstance(node, Token):
        return _atom_expr(node)
    if not node:
        raise ParseError("empty expression")
    head = node[0]
    if not isinstance(head, Token):
        raise ParseError("expression head must be an operator")
    op = head.text
    args = node[1:]

    def need(n: int):
        if len(args) != n:
            raise ParseError(f"operator {op!r} takes {n} arguments, got {len(args)}", head.offset)

    if op in _BINARY:
        need(2)
        return _BINARY[op](build_expr(args[0]), build_expr(args[1]))
    if op in _SUGAR:
        need(2)
        return _SUGAR[op](build_expr(args[0]), build_expr(args[1]))
    if op == "not":
        need(1)
        return ex.Not(build_expr(args[0]))
    if op == "recip":
        need(1)
        return ex.Recip(build_expr(args[0]))
    if op == "if":
        need(3)
        return ex.IfThenElse(build_expr(args[0]), build_expr(args[1]), build_expr(args[2]))
    if op == "mkuncert":
        need(3)
        children = [build_expr(a) for a in args]
        for c in children:
            _check_mkuncert_child(c, head.offset)
        return ex.MakeUncertain(*children)
    raise ParseError(f"unknown operator {op!r}", head.offset)


def _check_mkuncert_child(e: ex.Expr, offset: int) -> None:
    # mkuncert children are deterministic value constructors: variables,
    # constants and arithmetic only.
    if isinstance(e, (ex.Var, ex.Const)):
        return
    if isinstance(e, (ex.Plus, ex.Times)):
        _check_mkuncert_child(e.left, offset)
        _check_mkuncert_child(e.right, offset)
        return
    if isinstance(e, ex.Recip):
        _check_mkuncert_child(e.child, offset)
        return
    raise ParseError("mkuncert children must be variables, constants or arithmetic", offset)


def _ident(node: Node, what: str) -> str:
    if isinstance(node, Token) and re.match(r"[A-Za-z_][A-Za-z_0-9]*$", node.text):
        return node.text
    offset = node.offset if isinstance(node, Token) else None
    raise ParseError(f"expected {what}", offset)


_AGG_FNS = {SUM, MIN, MAX, COUNT, AVG}


def _build_agg(node: Node, index: int) -> AggSpec:
    if not isinstance(node, list) or not node:
        raise ParseError("aggregate spec must be a list like (sum A)")
    head = node[0]
    fn = _ident(head, "aggregate function")
    if fn not in _AGG_FNS:
        raise ParseError(f"unknown aggregate function {fn!r}", head.offset)
    rest = node[1:]
    name = None
    if len(rest) == 2:
        name = _ident(rest[1], "aggregate output name")
        rest = rest[:1]
    if len(rest) != 1:
        raise ParseError(f"aggregate {fn} takes one input", head.offset)
    arg = rest[0]
    if isinstance(arg, Token) and arg.text == "*":
        if fn != COUNT:
            raise ParseError("only count accepts *", arg.offset)
        expr = None
    else:
        expr = build_expr(arg)
        if fn == COUNT:
            expr = None  # count ignores its input expression
    if name is None:
        if isinstance(expr, ex.Var):
            name = f"{fn}_{expr.name}"
        elif expr is None:
            name = "count"
        else:
            name = f"{fn}_{index}"
    return AggSpec(fn, expr, name)


def build_plan(node: Node) -> p.Plan:
    if isinstance(node, Token):
        raise ParseError("expected a plan list", node.offset)
    if not node:
        raise ParseError("empty plan")
    head = node[0]
    op = _ident(head, "plan operator")
    args = node[1:]

    def need(n: int):
        if len(args) != n:
            raise ParseError(f"{op} takes {n} arguments, got {len(args)}", head.offset)

    if op == "table":
        need(1)
        return p.Table(_ident(args[0], "table name"))
    if op == "select":
        need(2)
        return p.Select(build_expr(args[0]), build_plan(args[1]))
    if op == "project":
        need(2)
        if not isinstance(args[0], list):
            raise ParseError("project needs a list of (expr name) items", head.offset)
        items = []
        for item in args[0]:
            if isinstance(item, Token):
                # bare attribute shorthand
                items.append((ex.Var(_ident(item, "attribute")), item.text))
            elif isinstance(item, list) and len(item) == 2:
                items.append((build_expr(item[0]), _ident(item[1], "output name")))
            else:
                raise ParseError("project item must be (expr name) or an attribute", head.offset)
        return p.Project(tuple(items), build_plan(args[1]))
    if op == "cross":
        need(2)
        return p.Cross(build_plan(args[0]), build_plan(args[1]))
    if op == "join":
        need(3)
        return p.Join(build_expr(args[0]), build_plan(args[1]), build_plan(args[2]))
    if op == "union":
        need(2)
        return p.Union(build_plan(args[0]), build_plan(args[1]))
    if op == "diff":
        need(2)
        return p.Diff(build_plan(args[0]), build_plan(args[1]))
    if op == "aggregate":
        need(3)
        if not isinstance(args[0], list) or not isinstance(args[1], list):
            raise ParseError("aggregate needs (group...) and (aggs...) lists", head.offset)
        group = tuple(_ident(a, "group-by attribute") for a in args[0])
        aggs = tuple(_build_agg(a, i) for i, a in enumerate(args[1]))
        if not aggs:
            raise ParseError("aggregate needs at least one aggregate", head.offset)
        return p.Aggregate(group, aggs, build_plan(args[2]))
    if op == "rename":
        need(2)
        if not isinstance(args[0], list):
            raise ParseError("rename needs a list of (old new) pairs", head.offset)
        mapping = []
        for item in args[0]:
            if not (isinstance(item, list) and len(item) == 2):
                raise ParseError("rename item must be (old new)", head.offset)
            mapping.append((_ident(item[0], "attribute"), _ident(item[1], "attribute")))
        return p.Rename(tuple(mapping), build_plan(args[1]))
    if op == "combine":
        need(1)
        return p.Combine(build_plan(args[0]))
    if op == "compress":
        need(3)
        attr = _ident(args[0], "attribute")
        size_tok = args[1]
        if not (isinstance(size_tok, Token) and _INT.match(size_tok.text)):
            raise ParseError("compress size must be an integer", head.offset)
        return p.Compress(attr, int(size_tok.text), build_plan(args[2]))
    raise ParseError(f"unknown plan operator {op!r}", head.offset)


def parse_query(text: str) -> p.Plan:
    return build_plan(read_sexpr(text))


def parse_expr(text: str) -> ex.Expr:
    return build_expr(read_sexpr(text))


def _print_const(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return repr(value)


def print_expr(e: ex.Expr) -> str:
    if isinstance(e, ex.Var):
        return e.name
    if isinstance(e, ex.Const):
        return _print_const(e.value)
    if isinstance(e, ex.And):
        return f"(and {print_expr(e.left)} {print_expr(e.right)})"
    if isinstance(e, ex.Or):
        return f"(or {print_expr(e.left)} {print_expr(e.right)})"
    if isinstance(e, ex.Not):
        return f"(not {print_expr(e.child)})"
    if isinstance(e, ex.Eq):
        return f"(= {print_expr(e.left)} {print_expr(e.right)})"
    if isinstance(e, ex.Leq):
        return f"(<= {print_expr(e.left)} {print_expr(e.right)})"
    if isinstance(e, ex.Plus):
        return f"(+ {print_expr(e.left)} {print_expr(e.right)})"
    if isinstance(e, ex.Times):
        return f"(* {print_expr(e.left)} {print_expr(e.right)})"
    if isinstance(e, ex.Recip):
        return f"(recip {print_expr(e.child)})"
    if isinstance(e, ex.IfThenElse):
        return f"(if {print_expr(e.cond)} {print_expr(e.then)} {print_expr(e.other)})"
    if isinstance(e, ex.MakeUncertain):
        return f"(mkuncert {print_expr(e.lb)} {print_expr(e.sg)} {print_expr(e.ub)})"
    raise ParseError(f"cannot print expression {e!r}")


def print_plan(plan: p.Plan) -> str:
    if isinstance(plan, p.Table):
        return f"(table {plan.name})"
    if isinstance(plan, p.Select):
        return f"(select {print_expr(plan.pred)} {print_plan(plan.child)})"
    if isinstance(plan, p.Project):
        items = " ".join(f"({print_expr(e)} {name})" for e, name in plan.items)
        return f"(project ({items}) {print_plan(plan.child)})"
    if isinstance(plan, p.Cross):
        return f"(cross {print_plan(plan.left)} {print_plan(plan.right)})"
    if isinstance(plan, p.Join):
        return f"(join {print_expr(plan.pred)} {print_plan(plan.left)} {print_plan(plan.right)})"
    if isinstance(plan, p.Union):
        return f"(union {print_plan(plan.left)} {print_plan(plan.right)})"
    if isinstance(plan, p.Diff):
        return f"(diff {print_plan(plan.left)} {print_plan(plan.right)})"
    if isinstance(plan, p.Aggregate):
        group = " ".join(plan.group)
        aggs = " ".join(
            f"({s.fn} {'*' if s.expr is None else print_expr(s.expr)} {s.name})"
            for s in plan.aggs
        )
        return f"(aggregate ({group}) ({aggs}) {print_plan(plan.child)})"
    if isinstance(plan, p.Rename):
        pairs = " ".join(f"({old} {new})" for old, new in plan.mapping)
        return f"(rename ({pairs}) {print_plan(plan.child)})"
    if isinstance(plan, p.Combine):
        return f"(combine {print_plan(plan.child)})"
    if isinstance(plan, p.Compress):
        return f"(compress {plan.attr} {plan.size} {print_plan(plan.child)})"
    raise ParseError(f"cannot print plan {plan!r}")
