"""Syntactic transformations: sugar expansion, unnesting, NNF and prenexing."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .signature import SIGNATURES, Arith, Signature
from .syntax import (
    And, App, Const, Eq, Exists, Forall, FreeVariableError, Formula, Implies, Not, Num,
    Or, Pow, Rel, Term, Times, Var, all_names, atom_terms, conj, disj, exists, free_vars,
    subformulas, term_vars,
)


# --------------------------------------------------------------------- fresh names


class FreshNames:
    """Deterministic supply of variable names ``u0, u1, ...`` avoiding a used set."""

    def __init__(self, avoid: Iterable[str] = (), prefix: str = "u"):
        self.avoid = set(avoid)
        self.prefix = prefix
        self.counter = 0

    def name(self, hint: str | None = None) -> str:
        if hint is not None and hint not in self.avoid:
            self.avoid.add(hint)
            return hint
        while True:
            cand = f"{self.prefix}{self.counter}"
            self.counter += 1
            if cand not in self.avoid:
                self.avoid.add(cand)
                return cand

    def var(self, sort: str, hint: str | None = None) -> Var:
        return Var(self.name(hint), sort)


def reserved_names(sig: Signature | None) -> set[str]:
    return sig.symbols() if sig is not None else set()


def fresh_for(*formulas: Formula, sig: Signature | None = None, prefix: str = "u") -> FreshNames:
    avoid = reserved_names(sig)
    for f in formulas:
        avoid |= all_names(f)
    return FreshNames(avoid, prefix)


# ------------------------------------------------------------------ sugar expansion


def _default_arith(sort: str) -> Arith:
    for sig in SIGNATURES.values():
        if sort in sig.arith:
            return sig.arith[sort]
    raise ValueError(f"no arithmetic declared for sort {sort!r}; pass the signature explicitly")


def _arith(sort: str, sig: Signature | None) -> Arith:
    if sig is not None and sort in sig.arith:
        return sig.arith[sort]
    return _default_arith(sort)


def _chain(fn: str, items: list[Term], sort: str) -> Term:
    acc = items[0]
    for it in items[1:]:
        acc = App(fn, (acc, it), sort)
    return acc


def expand_term(t: Term, sig: Signature | None = None) -> Term:
    """Replace numerals, scalar multiples and powers by iterated ``add``/``mul``."""
    if isinstance(t, (Var, Const)):
        return t
    if isinstance(t, App):
        return App(t.fn, tuple(expand_term(a, sig) for a in t.args), t.sort)
    if isinstance(t, Num):
        ar = _arith(t.sort, sig)
        if t.value == 0:
            return Const(ar.zero, t.sort)
        return _chain(ar.add, [Const(ar.one, t.sort)] * t.value, t.sort)
    if isinstance(t, Times):
        arg = expand_term(t.arg, sig)
        ar = _arith(arg.sort, sig)
        if t.factor == 0:
            return Const(ar.zero, arg.sort)
        return _chain(ar.add, [arg] * t.factor, arg.sort)
    if isinstance(t, Pow):
        base = expand_term(t.base, sig)
        ar = _arith(base.sort, sig)
        if t.exponent == 0:
            return Const(ar.one, base.sort)
        return _chain(ar.mul, [base] * t.exponent, base.sort)
    raise TypeError(f"not a term: {t!r}")


def map_atoms(phi: Formula, fn) -> Formula:
    if isinstance(phi, (Eq, Rel)):
        return fn(phi)
    if isinstance(phi, Not):
        return Not(map_atoms(phi.body, fn))
    if isinstance(phi, And):
        return And(tuple(map_atoms(p, fn) for p in phi.parts))
    if isinstance(phi, Or):
        return Or(tuple(map_atoms(p, fn) for p in phi.parts))
    if isinstance(phi, Implies):
        return Implies(map_atoms(phi.lhs, fn), map_atoms(phi.rhs, fn))
    if isinstance(phi, Exists):
        return Exists(phi.var, map_atoms(phi.body, fn))
    if isinstance(phi, Forall):
        return Forall(phi.var, map_atoms(phi.body, fn))
    raise TypeError(f"not a formula: {phi!r}")


def expand_sugar(phi: Formula, sig: Signature | None = None) -> Formula:
    def atom(a):
        if isinstance(a, Eq):
            return Eq(expand_term(a.lhs, sig), expand_term(a.rhs, sig))
        return Rel(a.name, tuple(expand_term(t, sig) for t in a.args))
    return map_atoms(phi, atom)


# ------------------------------------------------------------------------ unnesting


def is_unnested_atom(phi: Formula, allow_sugar: bool = False) -> bool:
    """True for the shapes x=y, x=c, F(x̄)=y and R x̄ (variables only)."""
    if isinstance(phi, Rel):
        return all(isinstance(a, Var) for a in phi.args)
    if not isinstance(phi, Eq):
        return False
    lhs, rhs = phi.lhs, phi.rhs
    if isinstance(lhs, Var):
        return isinstance(rhs, (Var, Const)) or (allow_sugar and isinstance(rhs, Num))
    if not isinstance(rhs, Var):
        return False
    if isinstance(lhs, App):
        return all(isinstance(a, Var) for a in lhs.args)
    if allow_sugar and isinstance(lhs, Times):
        return isinstance(lhs.arg, Var)
    if allow_sugar and isinstance(lhs, Pow):
        return isinstance(lhs.base, Var)
    return False


class _Unnester:
    def __init__(self, fresh: FreshNames, keep_sugar: bool, sig: Signature | None):
        self.fresh, self.keep_sugar, self.sig = fresh, keep_sugar, sig

    def name(self, t: Term, defs: list[Formula], new: list[Var]) -> Var:
        if isinstance(t, Var):
            return t
        if isinstance(t, (Const, Num)):
            v = self.fresh.var(t.sort)
            defs.append(Eq(v, t))
        else:
            v_core = self.head(t, defs, new)
            v = self.fresh.var(t.sort)
            defs.append(Eq(v_core, v))
        new.append(v)
        return v

    def head(self, t: Term, defs, new) -> Term:
        """``t`` with its immediate subterms replaced by variables."""
        if isinstance(t, App):
            return App(t.fn, tuple(self.name(a, defs, new) for a in t.args), t.sort)
        if isinstance(t, Times):
            return Times(t.factor, self.name(t.arg, defs, new))
        if isinstance(t, Pow):
            return Pow(self.name(t.base, defs, new), t.exponent)
        raise TypeError(f"cannot take the head of {t!r}")

    def with_var(self, t: Term, v: Var, defs, new) -> Formula:
        """The unnested atom asserting ``t = v``."""
        if isinstance(t, Var):
            return Eq(v, t)
        if isinstance(t, (Const, Num)):
            return Eq(v, t)
        return Eq(self.head(t, defs, new), v)

    def atom(self, a: Formula) -> Formula:
        if not self.keep_sugar:
            a = expand_sugar(a, self.sig)
        if is_unnested_atom(a, self.keep_sugar):
            return a
        defs: list[Formula] = []
        new: list[Var] = []
        if isinstance(a, Rel):
            core: Formula = Rel(a.name, tuple(self.name(t, defs, new) for t in a.args))
        else:
            lhs, rhs = a.lhs, a.rhs
            if isinstance(lhs, Var):
                core = self.with_var(rhs, lhs, defs, new)
            elif isinstance(rhs, Var):
                core = self.with_var(lhs, rhs, defs, new)
            else:
                v = self.name(rhs, defs, new)
                core = self.with_var(lhs, v, defs, new)
        if not new:
            return core
        return exists(new, conj(*defs, core))

    def formula(self, phi: Formula) -> Formula:
        return map_atoms(phi, self.atom)


def unnest(phi: Formula, sig: Signature | None = None, keep_sugar: bool = False,
           fresh: FreshNames | None = None) -> Formula:
    """Equivalent formula whose atomic subformulas are all unnested.

    Subterms are named by fresh existentially quantified variables, defining
    conjuncts first (innermost subterm first), the residual atom last.
    """
    fresh = fresh or fresh_for(phi, sig=sig)
    return _Unnester(fresh, keep_sugar, sig).formula(phi)


def is_unnested(phi: Formula, allow_sugar: bool = False) -> bool:
    from .syntax import iter_atoms
    return all(is_unnested_atom(a, allow_sugar) for a in iter_atoms(phi))


# ------------------------------------------------------------------- substitution


def substitute_term(t: Term, mapping: Mapping[Var, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t, t)
    if isinstance(t, App):
        return App(t.fn, tuple(substitute_term(a, mapping) for a in t.args), t.sort)
    if isinstance(t, Times):
        return Times(t.factor, substitute_term(t.arg, mapping))
    if isinstance(t, Pow):
        return Pow(substitute_term(t.base, mapping), t.exponent)
    return t


def substitute(phi: Formula, mapping: Mapping[Var, Term], fresh: FreshNames | None = None) -> Formula:
    """Capture-avoiding simultaneous substitution of terms for free variables."""
    if fresh is None:
        avoid = all_names(phi)
        for t in mapping.values():
            avoid |= {v.name for v in term_vars(t)}
        fresh = FreshNames(avoid)
    return _subst(phi, dict(mapping), fresh)


def _subst(phi: Formula, mapping: dict[Var, Term], fresh: FreshNames) -> Formula:
    if not mapping:
        return phi
    if isinstance(phi, Eq):
        return Eq(substitute_term(phi.lhs, mapping), substitute_term(phi.rhs, mapping))
    if isinstance(phi, Rel):
        return Rel(phi.name, tuple(substitute_term(a, mapping) for a in phi.args))
    if isinstance(phi, Not):
        return Not(_subst(phi.body, mapping, fresh))
    if isinstance(phi, And):
        return And(tuple(_subst(p, mapping, fresh) for p in phi.parts))
    if isinstance(phi, Or):
        return Or(tuple(_subst(p, mapping, fresh) for p in phi.parts))
    if isinstance(phi, Implies):
        return Implies(_subst(phi.lhs, mapping, fresh), _subst(phi.rhs, mapping, fresh))
    if isinstance(phi, (Exists, Forall)):
        v = phi.var
        inner = {k: t for k, t in mapping.items() if k != v and k in free_vars(phi.body)}
        if not inner:
            return phi
        captured = any(v.name == w.name for t in inner.values() for w in term_vars(t))
        if captured:
            nv = fresh.var(v.sort)
            inner[v] = nv
            v = nv
        return type(phi)(v, _subst(phi.body, inner, fresh))
    raise TypeError(f"not a formula: {phi!r}")


def rename_free(phi: Formula, names: Mapping[str, str]) -> Formula:
    """Rename free variables by name, keeping their sorts."""
    mapping = {v: Var(names[v.name], v.sort) for v in free_vars(phi) if v.name in names}
    return substitute(phi, mapping)


# ------------------------------------------------------------------------------ NNF


def nnf(phi: Formula, negate: bool = False) -> Formula:
    """Negation normal form; ``implies`` is eliminated, negations sit on atoms."""
    if isinstance(phi, (Eq, Rel)):
        return Not(phi) if negate else phi
    if isinstance(phi, Not):
        return nnf(phi.body, not negate)
    if isinstance(phi, Implies):
        if negate:
            return conj(nnf(phi.lhs), nnf(phi.rhs, True))
        return disj(nnf(phi.lhs, True), nnf(phi.rhs))
    if isinstance(phi, And):
        parts = [nnf(p, negate) for p in phi.parts]
        return disj(*parts) if negate else conj(*parts) if parts else (Or(()) if negate else And(()))
    if isinstance(phi, Or):
        parts = [nnf(p, negate) for p in phi.parts]
        return conj(*parts) if negate else disj(*parts) if parts else (And(()) if negate else Or(()))
    if isinstance(phi, Exists):
        return (Forall if negate else Exists)(phi.var, nnf(phi.body, negate))
    if isinstance(phi, Forall):
        return (Exists if negate else Forall)(phi.var, nnf(phi.body, negate))
    raise TypeError(f"not a formula: {phi!r}")


# --------------------------------------------------------------------------- prenex


@dataclass(frozen=True, eq=False)
class PrenexClass:
    """Collapsed quantifier-alternation word over E (exists) and A (forall)."""

    word: str

    def __post_init__(self):
        if any(c not in "EA" for c in self.word):
            raise ValueError(f"bad prenex word {self.word!r}")
        collapsed = "".join(c for i, c in enumerate(self.word) if i == 0 or self.word[i - 1] != c)
        object.__setattr__(self, "word", collapsed)

    @classmethod
    def parse(cls, text: str) -> PrenexClass:
        if text in ("qf", ""):
            return cls("")
        return cls(text.replace("∃", "E").replace("∀", "A"))

    @property
    def symbols(self) -> str:
        return self.word.replace("E", "∃").replace("A", "∀") or "qf"

    def __str__(self):
        return self.word or "qf"

    def __repr__(self):
        return f"PrenexClass({self.symbols!r})"

    def __eq__(self, other):
        if isinstance(other, str):
            other = PrenexClass.parse(other)
        if not isinstance(other, PrenexClass):
            return NotImplemented
        return self.word == other.word

    def __hash__(self):
        return hash(self.word)

    def within(self, other: PrenexClass | str) -> bool:
        """True if every prefix of this class embeds in ``other`` (e.g. E, A, qf within EA)."""
        if isinstance(other, str):
            other = PrenexClass.parse(other)
        it = iter(other.word)
        return all(c in it for c in self.word)


def rename_apart(phi: Formula, fresh: FreshNames | None = None) -> Formula:
    """Rename bound variables so that no name is bound twice or both free and bound."""
    fresh = fresh or fresh_for(phi)
    seen: set[str] = {v.name for v in free_vars(phi)}

    def go(f: Formula) -> Formula:
        if isinstance(f, (Eq, Rel)):
            return f
        if isinstance(f, Not):
            return Not(go(f.body))
        if isinstance(f, And):
            return And(tuple(go(p) for p in f.parts))
        if isinstance(f, Or):
            return Or(tuple(go(p) for p in f.parts))
        if isinstance(f, Implies):
            return Implies(go(f.lhs), go(f.rhs))
        v, body = f.var, f.body
        if v.name in seen:
            nv = fresh.var(v.sort)
            body = substitute(body, {v: nv}, fresh)
            v = nv
        seen.add(v.name)
        return type(f)(v, go(body))

    return go(phi)


@dataclass
class _QNode:
    kind: str  # "E" or "A"
    var: Var
    children: list


def _strip(phi: Formula, out: list[_QNode]) -> Formula:
    """Remove quantifiers from an NNF formula, recording the quantifier forest."""
    if isinstance(phi, (Eq, Rel, Not)):
        return phi
    if isinstance(phi, (And, Or)):
        return type(phi)(tuple(_strip(p, out) for p in phi.parts))
    node = _QNode("E" if isinstance(phi, Exists) else "A", phi.var, [])
    out.append(node)
    return _strip(phi.body, node.children)


def _linearize(roots: list[_QNode], first: str) -> list[_QNode]:
    order: list[_QNode] = []
    avail = list(roots)
    letter = first
    while avail:
        took = False
        i = 0
        while i < len(avail):
            if avail[i].kind == letter:
                node = avail.pop(i)
                order.append(node)
                avail[i:i] = node.children
                took = True
                i = 0
            else:
                i += 1
        if not took or avail:
            letter = "A" if letter == "E" else "E"
    return order


def _word(order: list[_QNode]) -> str:
    return PrenexClass("".join(n.kind for n in order)).word


def prenex(phi: Formula, fresh: FreshNames | None = None) -> Formula:
    psi = rename_apart(nnf(phi), fresh)
    roots: list[_QNode] = []
    matrix = _strip(psi, roots)
    best = None
    for first in ("E", "A"):  # ties go to the existential-first ordering
        order = _linearize(roots, first)
        if best is None or len(_word(order)) < len(_word(best)):
            best = order
    out = matrix
    for node in reversed(best):
        out = (Exists if node.kind == "E" else Forall)(node.var, out)
    return out


def prefix_class(phi: Formula) -> PrenexClass:
    """Class of a prenex formula, read off its quantifier prefix."""
    word = []
    while isinstance(phi, (Exists, Forall)):
        word.append("E" if isinstance(phi, Exists) else "A")
        phi = phi.body
    from .syntax import is_quantifier_free
    if not is_quantifier_free(phi):
        raise ValueError("formula is not in prenex form")
    return PrenexClass("".join(word))


def prenex_classify(phi: Formula, fresh: FreshNames | None = None) -> tuple[Formula, PrenexClass]:
    """Prenex form of a sentence together with its quantifier-alternation class."""
    fv = free_vars(phi)
    if fv:
        names = ", ".join(sorted(v.name for v in fv))
        raise FreeVariableError(f"not a sentence: free variable(s) {names}")
    out = prenex(phi, fresh)
    return out, prefix_class(out)


def classify(phi: Formula) -> PrenexClass:
    """Alternation class of the best prenex form, without free-variable restriction."""
    return prefix_class(prenex(phi))


def is_existential(phi: Formula) -> bool:
    return "A" not in classify(phi).word


def is_positive_existential(phi: Formula) -> bool:
    def ok(f: Formula) -> bool:
        if isinstance(f, (Eq, Rel)):
            return True
        if isinstance(f, (Not, Implies, Forall)):
            return False
        return all(ok(s) for s in subformulas(f))
    return ok(phi)
