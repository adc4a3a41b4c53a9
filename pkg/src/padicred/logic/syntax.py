"""Formula and term ASTs for many-sorted first-order logic.

All nodes are frozen dataclasses, so formulas are hashable values and can be
compared structurally.  Sugar nodes (``Num``, ``Times``, ``Pow``) stand for
iterated sums/products and are expanded by :func:`padicred.logic.transform.expand_sugar`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .signature import Signature


class SortError(TypeError):
    """A term or formula violates the sort discipline of its signature."""


class FreeVariableError(ValueError):
    pass


# ----------------------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var:
    name: str
    sort: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    name: str
    sort: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple["Term", ...]
    sort: str


@dataclass(frozen=True)
class Num:
    """The numeral ``value`` = 1 + 1 + ... + 1 in ``sort``."""

    value: int
    sort: str


@dataclass(frozen=True)
class Times:
    """The scalar multiple ``factor``·arg = arg + ... + arg."""

    factor: int
    arg: "Term"

    @property
    def sort(self) -> str:
        return self.arg.sort


@dataclass(frozen=True)
class Pow:
    base: "Term"
    exponent: int

    @property
    def sort(self) -> str:
        return self.base.sort


Term = Union[Var, Const, App, Num, Times, Pow]


# -------------------------------------------------------------------------- formulas


@dataclass(frozen=True)
class Eq:
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Rel:
    name: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Implies:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Exists:
    var: Var
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: Var
    body: "Formula"


Formula = Union[Eq, Rel, Not, And, Or, Implies, Exists, Forall]
Quantifier = (Exists, Forall)
Atomic = (Eq, Rel)

TRUE = And(())
FALSE = Or(())


# --------------------------------------------------------------------- constructors


def conj(*parts: Formula) -> Formula:
    """Conjunction that flattens nested ``And`` nodes and drops ``TRUE``."""
    flat: list[Formula] = []
    for p in parts:
        if isinstance(p, And):
            flat.extend(p.parts)
        else:
            flat.append(p)
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*parts: Formula) -> Formula:
    flat: list[Formula] = []
    for p in parts:
        if isinstance(p, Or):
            flat.extend(p.parts)
        else:
            flat.append(p)
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def exists(vars_: list[Var] | tuple[Var, ...], body: Formula) -> Formula:
    for v in reversed(vars_):
        body = Exists(v, body)
    return body


def forall(vars_: list[Var] | tuple[Var, ...], body: Formula) -> Formula:
    for v in reversed(vars_):
        body = Forall(v, body)
    return body


def neq(a: Term, b: Term) -> Formula:
    return Not(Eq(a, b))


# --------------------------------------------------------------------------- queries


def term_children(t: Term) -> tuple[Term, ...]:
    if isinstance(t, App):
        return t.args
    if isinstance(t, Times):
        return (t.arg,)
    if isinstance(t, Pow):
        return (t.base,)
    return ()


def iter_terms(t: Term) -> Iterator[Term]:
    yield t
    for c in term_children(t):
        yield from iter_terms(c)


def term_vars(t: Term) -> set[Var]:
    return {s for s in iter_terms(t) if isinstance(s, Var)}


def atom_terms(phi: Formula) -> tuple[Term, ...]:
    if isinstance(phi, Eq):
        return (phi.lhs, phi.rhs)
    if isinstance(phi, Rel):
        return phi.args
    raise TypeError(f"not an atomic formula: {phi!r}")


def subformulas(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, (Eq, Rel)):
        return ()
    if isinstance(phi, Not):
        return (phi.body,)
    if isinstance(phi, (And, Or)):
        return phi.parts
    if isinstance(phi, Implies):
        return (phi.lhs, phi.rhs)
    if isinstance(phi, (Exists, Forall)):
        return (phi.body,)
    raise TypeError(f"not a formula: {phi!r}")


def iter_atoms(phi: Formula) -> Iterator[Formula]:
    if isinstance(phi, (Eq, Rel)):
        yield phi
        return
    for s in subformulas(phi):
        yield from iter_atoms(s)


def free_vars(phi: Formula) -> set[Var]:
    if isinstance(phi, (Eq, Rel)):
        out: set[Var] = set()
        for t in atom_terms(phi):
            out |= term_vars(t)
        return out
    if isinstance(phi, (Exists, Forall)):
        return free_vars(phi.body) - {phi.var}
    out = set()
    for s in subformulas(phi):
        out |= free_vars(s)
    return out


def bound_vars(phi: Formula) -> set[Var]:
    out: set[Var] = set()
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, (Exists, Forall)):
            out.add(f.var)
        stack.extend(subformulas(f))
    return out


def all_names(phi: Formula) -> set[str]:
    """Every variable name occurring (free or bound) in ``phi``."""
    names = {v.name for v in bound_vars(phi)}
    for a in iter_atoms(phi):
        for t in atom_terms(a):
            names |= {v.name for v in term_vars(t)}
    return names


def is_sentence(phi: Formula) -> bool:
    return not free_vars(phi)


def quantifier_depth(phi: Formula) -> int:
    if isinstance(phi, (Eq, Rel)):
        return 0
    inner = max((quantifier_depth(s) for s in subformulas(phi)), default=0)
    return inner + 1 if isinstance(phi, (Exists, Forall)) else inner


def is_quantifier_free(phi: Formula) -> bool:
    return quantifier_depth(phi) == 0


def size(phi: Formula) -> int:
    return 1 + sum(size(s) for s in subformulas(phi))


# -------------------------------------------------------------------- sort checking


def check_term(t: Term, sig: Signature) -> str:
    """Return the sort of ``t`` after checking it against ``sig``."""
    if isinstance(t, Var):
        if t.sort not in sig.sorts:
            raise SortError(f"variable {t.name!r} has undeclared sort {t.sort!r}")
        return t.sort
    if isinstance(t, Const):
        if sig.constants.get(t.name) != t.sort:
            raise SortError(f"constant {t.name!r} is not declared with sort {t.sort!r}")
        return t.sort
    if isinstance(t, App):
        if t.fn not in sig.functions:
            raise SortError(f"undeclared function {t.fn!r}")
        arg_sorts, res = sig.functions[t.fn]
        if len(arg_sorts) != len(t.args):
            raise SortError(f"function {t.fn!r} expects {len(arg_sorts)} arguments, got {len(t.args)}")
        for want, a in zip(arg_sorts, t.args):
            got = check_term(a, sig)
            if got != want:
                raise SortError(f"function {t.fn!r} expects an argument of sort {want}, got {got}")
        if res != t.sort:
            raise SortError(f"function {t.fn!r} produces sort {res}, term is tagged {t.sort}")
        return res
    if isinstance(t, Num):
        ar = sig.arith.get(t.sort)
        if ar is None or t.value < 0 or (t.value > 0 and ar.one is None):
            raise SortError(f"numeral {t.value} is not available in sort {t.sort!r}")
        return t.sort
    if isinstance(t, Times):
        s = check_term(t.arg, sig)
        if s not in sig.arith or t.factor < 0:
            raise SortError(f"scalar multiple 'times' is not available in sort {s!r}")
        return s
    if isinstance(t, Pow):
        s = check_term(t.base, sig)
        ar = sig.arith.get(s)
        if ar is None or ar.mul is None or ar.one is None or t.exponent < 0:
            raise SortError(f"power 'pow' is not available in sort {s!r}")
        return s
    raise SortError(f"not a term: {t!r}")


def check_formula(phi: Formula, sig: Signature) -> None:
    if isinstance(phi, Eq):
        a, b = check_term(phi.lhs, sig), check_term(phi.rhs, sig)
        if a != b:
            raise SortError(f"equation compares sort {a} with sort {b}")
        return
    if isinstance(phi, Rel):
        if phi.name not in sig.relations:
            raise SortError(f"undeclared relation {phi.name!r}")
        want = sig.relations[phi.name]
        if len(want) != len(phi.args):
            raise SortError(f"relation {phi.name!r} expects {len(want)} arguments, got {len(phi.args)}")
        for w, a in zip(want, phi.args):
            got = check_term(a, sig)
            if got != w:
                raise SortError(f"relation {phi.name!r} expects an argument of sort {w}, got {got}")
        return
    if isinstance(phi, (Exists, Forall)):
        if phi.var.sort not in sig.sorts:
            raise SortError(f"quantified variable {phi.var.name!r} has undeclared sort {phi.var.sort!r}")
    for s in subformulas(phi):
        check_formula(s, sig)
