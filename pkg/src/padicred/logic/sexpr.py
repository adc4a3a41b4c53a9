"""Concrete s-expression syntax for formulas: parser and printer.

Grammar (one formula per text)::

    formula := (= term term) | (REL term ...) | (not formula)
             | (and formula ...) | (or formula ...) | (implies formula formula)
             | (exists ((VAR SORT) ...) formula) | (forall ((VAR SORT) ...) formula)
    term    := VAR | CONST | INT | (num SORT INT) | (times INT term) | (pow term INT)
             | (FUN term ...)

A bare integer literal is a numeral whose sort is taken from its context.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .signature import Signature
from .syntax import (
    And, App, Const, Eq, Exists, Forall, Formula, Implies, Not, Num, Or, Pow, Rel,
    SortError, Term, Times, Var, check_formula,
)

KEYWORDS = frozenset({"=", "not", "and", "or", "implies", "exists", "forall", "num", "times", "pow"})


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        super().__init__(f"{line}:{col}: {msg}" if line else msg)


class UnknownSymbolError(ParseError):
    pass


# ------------------------------------------------------------------------- reading


@dataclass(frozen=True)
class _Atom:
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class _List:
    items: tuple
    line: int
    col: int


_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s();]+")


def _read(text: str):
    stack: list[list] = [[]]
    opens: list[tuple[int, int]] = []
    line, line_start = 1, 0
    for m in _TOKEN.finditer(text):
        tok = m.group()
        col = m.start() - line_start + 1
        if tok == "(":
            stack.append([])
            opens.append((line, col))
        elif tok == ")":
            if not opens:
                raise ParseError("unexpected ')'", line, col)
            items = stack.pop()
            ln, cl = opens.pop()
            stack[-1].append(_List(tuple(items), ln, cl))
        elif tok[0].isspace() or tok[0] == ";":
            pass
        else:
            stack[-1].append(_Atom(tok, line, col))
        nl = tok.count("\n")
        if nl:
            line += nl
            line_start = m.start() + tok.rfind("\n") + 1
    if opens:
        ln, cl = opens[-1]
        raise ParseError("unclosed '('", ln, cl)
    top = stack[0]
    if not top:
        raise ParseError("empty input", 1, 1)
    if len(top) > 1:
        extra = top[1]
        raise ParseError("trailing input after formula", extra.line, extra.col)
    return top[0]


def _int(node) -> int | None:
    if isinstance(node, _Atom) and re.fullmatch(r"[0-9]+", node.text):
        return int(node.text)
    return None


# -------------------------------------------------------------------------- typing


class _Parser:
    def __init__(self, sig: Signature):
        self.sig = sig

    def formula(self, node, scope: dict[str, Var]) -> Formula:
        if isinstance(node, _Atom):
            raise ParseError(f"expected a formula, found {node.text!r}", node.line, node.col)
        if not node.items:
            raise ParseError("empty list where a formula was expected", node.line, node.col)
        head, *rest = node.items
        if not isinstance(head, _Atom):
            raise ParseError("formula head must be a symbol", head.line, head.col)
        h = head.text
        if h == "=":
            if len(rest) != 2:
                raise ParseError(f"'=' takes exactly 2 arguments, got {len(rest)}", node.line, node.col)
            return self.equation(rest[0], rest[1], scope)
        if h == "not":
            self._arity(node, rest, 1)
            return Not(self.formula(rest[0], scope))
        if h in ("and", "or"):
            parts = tuple(self.formula(r, scope) for r in rest)
            return And(parts) if h == "and" else Or(parts)
        if h == "implies":
            self._arity(node, rest, 2)
            return Implies(self.formula(rest[0], scope), self.formula(rest[1], scope))
        if h in ("exists", "forall"):
            self._arity(node, rest, 2)
            binders = self.binders(rest[0])
            inner = dict(scope)
            for v in binders:
                inner[v.name] = v
            body = self.formula(rest[1], inner)
            q = Exists if h == "exists" else Forall
            for v in reversed(binders):
                body = q(v, body)
            return body
        if h in self.sig.relations:
            want = self.sig.relations[h]
            if len(want) != len(rest):
                raise ParseError(f"relation {h!r} takes {len(want)} arguments, got {len(rest)}",
                                 node.line, node.col)
            return Rel(h, tuple(self.term(r, scope, s) for r, s in zip(rest, want)))
        if h in KEYWORDS or h in self.sig.functions or h in self.sig.constants:
            raise ParseError(f"{h!r} is not a relation symbol or connective", head.line, head.col)
        raise UnknownSymbolError(f"unknown relation symbol {h!r}", head.line, head.col)

    def _arity(self, node, rest, k):
        if len(rest) != k:
            raise ParseError(f"{node.items[0].text!r} takes {k} argument(s), got {len(rest)}",
                             node.line, node.col)

    def binders(self, node) -> list[Var]:
        if not isinstance(node, _List) or not node.items:
            raise ParseError("expected a binder list ((VAR SORT) ...)", node.line, node.col)
        out = []
        for b in node.items:
            if not (isinstance(b, _List) and len(b.items) == 2
                    and all(isinstance(x, _Atom) for x in b.items)):
                raise ParseError("binder must have the form (VAR SORT)", b.line, b.col)
            name, sort = b.items[0].text, b.items[1].text
            if name in KEYWORDS or _int(b.items[0]) is not None:
                raise ParseError(f"{name!r} cannot be used as a variable name", b.line, b.col)
            if sort not in self.sig.sorts:
                raise SortError(f"binder {name!r} uses undeclared sort {sort!r}")
            out.append(Var(name, sort))
        return out

    def equation(self, a, b, scope) -> Formula:
        sa, sb = self.synth(a, scope), self.synth(b, scope)
        if sa is None and sb is None:
            raise SortError("cannot infer the sort of an equation between numerals; "
                            "annotate one side as (num SORT n)")
        if sa is not None and sb is not None and sa != sb:
            raise SortError(f"sort mismatch: {self._describe(a)} has sort {sa} "
                            f"but {self._describe(b)} has sort {sb}")
        sort = sa if sa is not None else sb
        return Eq(self.term(a, scope, sort), self.term(b, scope, sort))

    @staticmethod
    def _describe(node) -> str:
        if isinstance(node, _Atom):
            return repr(node.text)
        head = node.items[0] if node.items else None
        return f"({head.text} ...)" if isinstance(head, _Atom) else "term"

    def synth(self, node, scope) -> str | None:
        """Sort of a term when it can be determined without context."""
        if isinstance(node, _Atom):
            if _int(node) is not None:
                return None
            if node.text in scope:
                return scope[node.text].sort
            if node.text in self.sig.constants:
                return self.sig.constants[node.text]
            raise UnknownSymbolError(f"unknown symbol {node.text!r}", node.line, node.col)
        if not node.items or not isinstance(node.items[0], _Atom):
            raise ParseError("expected a term", node.line, node.col)
        h = node.items[0].text
        if h == "num":
            if len(node.items) != 3:
                raise ParseError("'num' takes a sort and an integer", node.line, node.col)
            return node.items[1].text
        if h == "times":
            if len(node.items) != 3:
                raise ParseError("'times' takes an integer and a term", node.line, node.col)
            return self.synth(node.items[2], scope)
        if h == "pow":
            if len(node.items) != 3:
                raise ParseError("'pow' takes a term and an integer", node.line, node.col)
            return self.synth(node.items[1], scope)
        if h in self.sig.functions:
            return self.sig.functions[h][1]
        if h in self.sig.relations or h in KEYWORDS:
            raise ParseError(f"{h!r} cannot be used as a function", node.line, node.col)
        raise UnknownSymbolError(f"unknown function symbol {h!r}", node.line, node.col)

    def term(self, node, scope, expected: str | None) -> Term:
        if isinstance(node, _Atom):
            v = _int(node)
            if v is not None:
                if expected is None:
                    raise SortError(f"cannot infer the sort of numeral {v}")
                return self._num(v, expected, node)
            t = node.text
            if t in scope:
                got: Term = scope[t]
            elif t in self.sig.constants:
                got = Const(t, self.sig.constants[t])
            else:
                raise UnknownSymbolError(f"unknown symbol {t!r}", node.line, node.col)
            self._expect(got.sort, expected, repr(t))
            return got
        h = node.items[0].text
        if h == "num":
            sort = node.items[1].text
            v = _int(node.items[2])
            if v is None:
                raise ParseError("'num' needs a non-negative integer", node.line, node.col)
            self._expect(sort, expected, f"(num {sort} {v})")
            return self._num(v, sort, node)
        if h == "times":
            k = _int(node.items[1])
            if k is None:
                raise ParseError("'times' needs a non-negative integer factor", node.line, node.col)
            arg = self.term(node.items[2], scope, expected or self.synth(node.items[2], scope))
            self._arith(arg.sort, "times", node)
            return Times(k, arg)
        if h == "pow":
            k = _int(node.items[2])
            if k is None:
                raise ParseError("'pow' needs a non-negative integer exponent", node.line, node.col)
            base = self.term(node.items[1], scope, expected or self.synth(node.items[1], scope))
            ar = self._arith(base.sort, "pow", node)
            if ar.mul is None or ar.one is None:
                raise SortError(f"'pow' is not available in sort {base.sort}")
            return Pow(base, k)
        arg_sorts, res = self.sig.functions[h]
        args = node.items[1:]
        if len(args) != len(arg_sorts):
            raise ParseError(f"function {h!r} takes {len(arg_sorts)} arguments, got {len(args)}",
                             node.line, node.col)
        self._expect(res, expected, f"function {h!r}")
        return App(h, tuple(self.term(a, scope, s) for a, s in zip(args, arg_sorts)), res)

    def _arith(self, sort, what, node):
        ar = self.sig.arith.get(sort)
        if ar is None:
            raise SortError(f"{what!r} is not available in sort {sort}")
        return ar

    def _num(self, v: int, sort: str, node) -> Num:
        ar = self.sig.arith.get(sort)
        if ar is None or (v > 0 and ar.one is None):
            raise SortError(f"numeral {v} is not available in sort {sort}")
        return Num(v, sort)

    @staticmethod
    def _expect(got: str, expected: str | None, what: str):
        if expected is not None and got != expected:
            raise SortError(f"sort mismatch: {what} has sort {got}, expected {expected}")


def parse_formula(text: str, sig: Signature, free: dict[str, str] | None = None) -> Formula:
    """Parse and sort-check a formula over ``sig``.

    ``free`` declares the sorts of variables allowed to occur free.
    """
    scope = {n: Var(n, s) for n, s in (free or {}).items()}
    phi = _Parser(sig).formula(_read(text), scope)
    check_formula(phi, sig)
    return phi


def parse_term(text: str, sig: Signature, scope: dict[str, Var] | None = None,
               sort: str | None = None) -> Term:
    p = _Parser(sig)
    node = _read(text)
    scope = scope or {}
    return p.term(node, scope, sort or p.synth(node, scope))


# ------------------------------------------------------------------------ printing


def _ambiguous(t: Term) -> bool:
    if isinstance(t, Num):
        return True
    if isinstance(t, Times):
        return _ambiguous(t.arg)
    if isinstance(t, Pow):
        return _ambiguous(t.base)
    return False


def term_to_sexpr(t: Term, annotate: bool = False) -> str:
    if isinstance(t, (Var, Const)):
        return t.name
    if isinstance(t, Num):
        return f"(num {t.sort} {t.value})" if annotate else str(t.value)
    if isinstance(t, Times):
        return f"(times {t.factor} {term_to_sexpr(t.arg, annotate)})"
    if isinstance(t, Pow):
        return f"(pow {term_to_sexpr(t.base, annotate)} {t.exponent})"
    if isinstance(t, App):
        return "(" + " ".join([t.fn, *(term_to_sexpr(a) for a in t.args)]) + ")"
    raise TypeError(f"not a term: {t!r}")


def to_sexpr(phi: Formula) -> str:
    """Render ``phi`` in the concrete syntax; ``parse_formula`` inverts it exactly."""
    out: list[str] = []
    _emit(phi, out)
    return "".join(out)


def _emit(phi: Formula, out: list[str]) -> None:
    # iterative over long conjunction chains would be nicer, but formulas stay shallow
    if isinstance(phi, Eq):
        both = _ambiguous(phi.lhs) and _ambiguous(phi.rhs)
        out.append(f"(= {term_to_sexpr(phi.lhs, both)} {term_to_sexpr(phi.rhs)})")
    elif isinstance(phi, Rel):
        out.append("(" + " ".join([phi.name, *(term_to_sexpr(a) for a in phi.args)]) + ")")
    elif isinstance(phi, Not):
        out.append("(not ")
        _emit(phi.body, out)
        out.append(")")
    elif isinstance(phi, (And, Or)):
        out.append("(and" if isinstance(phi, And) else "(or")
        for p in phi.parts:
            out.append(" ")
            _emit(p, out)
        out.append(")")
    elif isinstance(phi, Implies):
        out.append("(implies ")
        _emit(phi.lhs, out)
        out.append(" ")
        _emit(phi.rhs, out)
        out.append(")")
    elif isinstance(phi, (Exists, Forall)):
        kind = type(phi)
        binders = []
        body: Formula = phi
        while isinstance(body, kind):
            binders.append(f"({body.var.name} {body.var.sort})")
            body = body.body
        out.append(f"({'exists' if kind is Exists else 'forall'} ({' '.join(binders)}) ")
        _emit(body, out)
        out.append(")")
    else:
        raise TypeError(f"not a formula: {phi!r}")


def pretty(phi: Formula, indent: int = 2) -> str:
    """Multi-line rendering for reports; parses back to the same formula."""
    lines: list[str] = []

    def go(f: Formula, depth: int):
        pad = " " * (indent * depth)
        flat = to_sexpr(f)
        if len(flat) + len(pad) <= 100 or isinstance(f, (Eq, Rel)):
            lines.append(pad + flat)
            return
        if isinstance(f, (Exists, Forall)):
            kind = type(f)
            binders = []
            body: Formula = f
            while isinstance(body, kind):
                binders.append(f"({body.var.name} {body.var.sort})")
                body = body.body
            lines.append(f"{pad}({'exists' if kind is Exists else 'forall'} ({' '.join(binders)})")
            go(body, depth + 1)
        else:
            head = {Not: "not", And: "and", Or: "or", Implies: "implies"}[type(f)]
            lines.append(f"{pad}({head}")
            kids = (f.body,) if isinstance(f, Not) else (
                (f.lhs, f.rhs) if isinstance(f, Implies) else f.parts)
            for k in kids:
                go(k, depth + 1)
        lines[-1] += ")"

    go(phi, 0)
    return "\n".join(lines)
