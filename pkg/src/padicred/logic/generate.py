"""Seeded random terms, formulas and sentences over a signature (test fodder)."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .signature import Signature
from .syntax import (
    And, App, Const, Eq, Exists, Forall, Formula, Implies, Not, Num, Or, Pow, Rel, Term, Times, Var,
)


@dataclass(frozen=True)
class GenConfig:
    max_qdepth: int = 2
    max_quantifiers: int = 3
    term_depth: int = 2
    connective_depth: int = 3
    sugar: bool = True
    max_numeral: int = 4
    max_power: int = 3
    var_names: str = "xyzwvu"


class FormulaGenerator:
    def __init__(self, sig: Signature, seed: int | random.Random = 0, config: GenConfig = GenConfig()):
        self.sig = sig
        self.rng = seed if isinstance(seed, random.Random) else random.Random(seed)
        self.cfg = config
        self._counter = 0

    # -- terms
    def term(self, sort: str, scope: list[Var], depth: int | None = None) -> Term:
        r, sig, cfg = self.rng, self.sig, self.cfg
        depth = cfg.term_depth if depth is None else depth
        vars_ = [v for v in scope if v.sort == sort]
        consts = [c for c, s in sig.constants.items() if s == sort]
        funcs = [f for f, (_, res) in sig.functions.items() if res == sort]
        ar = sig.arith.get(sort)
        leaves: list = [("var", v) for v in vars_] + [("const", c) for c in consts]
        if cfg.sugar and ar is not None and ar.one is not None:
            leaves.append(("num", None))
        if depth <= 0 or (leaves and r.random() < 0.45):
            if not leaves:
                raise ValueError(f"no closed term of sort {sort}")
            kind, x = r.choice(leaves)
            if kind == "var":
                return x
            if kind == "const":
                return Const(x, sort)
            return Num(r.randint(0, cfg.max_numeral), sort)
        options = [("app", f) for f in funcs]
        if cfg.sugar and ar is not None:
            options.append(("times", None))
            if ar.mul is not None:
                options.append(("pow", None))
        if not options:
            return self.term(sort, scope, 0)
        kind, f = r.choice(options)
        if kind == "app":
            args, _ = sig.functions[f]
            return App(f, tuple(self.term(s, scope, depth - 1) for s in args), sort)
        if kind == "times":
            return Times(r.randint(0, cfg.max_numeral), self.term(sort, scope, depth - 1))
        return Pow(self.term(sort, scope, depth - 1), r.randint(0, cfg.max_power))

    # -- formulas
    def atom(self, scope: list[Var]) -> Formula:
        r, sig = self.rng, self.sig
        sorts = [s for s in sig.sorts if self._has_terms(s, scope)]
        rels = [name for name, args in sig.relations.items() if all(s in sorts for s in args)]
        if rels and r.random() < 0.35:
            name = r.choice(rels)
            return Rel(name, tuple(self.term(s, scope) for s in sig.relations[name]))
        s = r.choice(sorts)
        return Eq(self.term(s, scope), self.term(s, scope))

    def _has_terms(self, sort: str, scope) -> bool:
        sig = self.sig
        return (any(v.sort == sort for v in scope) or any(s == sort for s in sig.constants.values())
                or (sort in sig.arith and sig.arith[sort].one is not None and self.cfg.sugar))

    def fresh_var(self, sort: str) -> Var:
        names = self.cfg.var_names
        i = self._counter
        self._counter += 1
        base = names[i % len(names)]
        return Var(base if i < len(names) else f"{base}{i // len(names)}", sort)

    def formula(self, scope: list[Var], qdepth: int, conn: int, budget: list[int],
                existential: bool = False) -> Formula:
        r = self.rng
        choices = ["atom"]
        if conn > 0:
            choices += ["not", "and", "or"] + ([] if existential else ["implies"])
        if qdepth > 0 and budget[0] > 0:
            choices += ["exists", "exists"] + ([] if existential else ["forall"])
        kind = r.choice(choices)
        if kind == "atom":
            return self.atom(scope)
        if kind == "not":
            if existential:
                return Not(self.atom(scope))
            return Not(self.formula(scope, qdepth, conn - 1, budget))
        if kind in ("and", "or"):
            parts = tuple(self.formula(scope, qdepth, conn - 1, budget, existential) for _ in range(2))
            return And(parts) if kind == "and" else Or(parts)
        if kind == "implies":
            return Implies(self.formula(scope, qdepth, conn - 1, budget),
                           self.formula(scope, qdepth, conn - 1, budget))
        budget[0] -= 1
        v = self.fresh_var(r.choice(self.sig.sorts))
        body = self.formula(scope + [v], qdepth - 1, conn, budget, existential)
        return (Exists if kind == "exists" else Forall)(v, body)

    def sentence(self, existential: bool = False) -> Formula:
        """A random sentence; with ``existential`` it is an ∃-prefixed sentence
        whose matrix negates atoms only."""
        self._counter = 0
        cfg = self.cfg
        budget = [cfg.max_quantifiers]
        if existential or self.rng.random() < 0.8:
            # start with a quantifier so most sentences are not closed-term noise
            budget[0] -= 1
            v = self.fresh_var(self.rng.choice(self.sig.sorts))
            body = self.formula([v], cfg.max_qdepth - 1, cfg.connective_depth, budget, existential)
            q = Exists if existential or self.rng.random() < 0.5 else Forall
            return q(v, body)
        return self.formula([], cfg.max_qdepth, cfg.connective_depth, budget, existential)

    def open_formula(self, free: list[Var]) -> Formula:
        self._counter = len(self.cfg.var_names)  # avoid the plain names used by ``free``
        return self.formula(list(free), self.cfg.max_qdepth, self.cfg.connective_depth,
                            [self.cfg.max_quantifiers])


def random_sentences(sig: Signature, count: int, seed: int = 0, config: GenConfig = GenConfig(),
                     existential: bool = False) -> list[Formula]:
    g = FormulaGenerator(sig, seed, config)
    return [g.sentence(existential) for _ in range(count)]
