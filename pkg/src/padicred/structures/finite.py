"""Finite structures and the reference (scalar) Tarskian evaluator."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

from ..logic.signature import Signature
from ..logic.syntax import (
    And, App, Const, Eq, Exists, Forall, Formula, FreeVariableError, Implies, Not, Num, Or,
    Pow, Rel, Term, Times, Var, check_formula, free_vars,
)

INF = math.inf

DEFAULT_BUDGET = 1 << 20


class BudgetExceeded(RuntimeError):
    def __init__(self, needed: int | float, budget: int, what: str = "enumeration"):
        self.needed, self.budget = needed, budget
        super().__init__(f"{what} needs {needed} steps, budget is {budget}")


class InfiniteSortError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteStructure:
    """A structure for ``signature`` with finite, explicitly enumerable sorts.

    ``functions`` and ``relations`` map symbol names to Python callables on
    domain values; ``equal`` may override value equality per sort.
    """

    signature: Signature
    domains: Mapping[str, Sequence[Any]]
    constants: Mapping[str, Any]
    functions: Mapping[str, Callable[..., Any]]
    relations: Mapping[str, Callable[..., bool]]
    equal: Mapping[str, Callable[[Any, Any], bool]] = field(default_factory=dict)
    name: str = "structure"

    def __post_init__(self):
        sig = self.signature
        missing = [c for c in sig.constants if c not in self.constants]
        missing += [f for f in sig.functions if f not in self.functions]
        missing += [r for r in sig.relations if r not in self.relations]
        if missing:
            raise ValueError(f"{self.name}: no interpretation for {', '.join(missing)}")

    def domain(self, sort: str) -> Sequence[Any]:
        try:
            return self.domains[sort]
        except KeyError:
            raise InfiniteSortError(f"{self.name}: sort {sort!r} has no finite domain") from None

    def eq(self, sort: str, a, b) -> bool:
        f = self.equal.get(sort)
        return f(a, b) if f else a == b

    def vector_backend(self):
        """Vectorised backend for the broadcast evaluator, or ``None``."""
        return None

    def __repr__(self):
        return f"<{self.name}>"


# ---------------------------------------------------------------------- term values


def _double_and_add(op, unit, x, k: int):
    """x ∘ x ∘ ... ∘ x (k times) for an associative op, ``unit`` when k = 0."""
    result = None
    base = x
    while k:
        if k & 1:
            result = base if result is None else op(result, base)
        k >>= 1
        if k:
            base = op(base, base)
    return unit if result is None else result


class ScalarEvaluator:
    """Literal Tarskian semantics by exhaustive enumeration of quantifier domains.

    ``budget`` bounds the total number of quantifier instances visited.
    """

    def __init__(self, structure: FiniteStructure, budget: int = DEFAULT_BUDGET):
        self.S = structure
        self.budget = budget
        self.steps = 0

    def term(self, t: Term, env: Mapping[Var, Any]):
        S = self.S
        if isinstance(t, Var):
            try:
                return env[t]
            except KeyError:
                raise FreeVariableError(f"variable {t.name} is not assigned") from None
        if isinstance(t, Const):
            return S.constants[t.name]
        if isinstance(t, App):
            return S.functions[t.fn](*(self.term(a, env) for a in t.args))
        ar = S.signature.arith
        if isinstance(t, Num):
            a = ar[t.sort]
            if t.value == 0:
                return S.constants[a.zero]
            return _double_and_add(S.functions[a.add], None, S.constants[a.one], t.value)
        if isinstance(t, Times):
            x = self.term(t.arg, env)
            a = ar[t.sort]
            return _double_and_add(S.functions[a.add], S.constants[a.zero], x, t.factor)
        if isinstance(t, Pow):
            x = self.term(t.base, env)
            a = ar[t.sort]
            return _double_and_add(S.functions[a.mul], S.constants[a.one], x, t.exponent)
        raise TypeError(f"not a term: {t!r}")

    def holds(self, phi: Formula, env: Mapping[Var, Any] | None = None) -> bool:
        env = dict(env or {})
        return self._holds(phi, env)

    def _holds(self, phi: Formula, env: dict) -> bool:
        if isinstance(phi, Eq):
            return self.S.eq(phi.lhs.sort, self.term(phi.lhs, env), self.term(phi.rhs, env))
        if isinstance(phi, Rel):
            return bool(self.S.relations[phi.name](*(self.term(a, env) for a in phi.args)))
        if isinstance(phi, Not):
            return not self._holds(phi.body, env)
        if isinstance(phi, And):
            return all(self._holds(p, env) for p in phi.parts)
        if isinstance(phi, Or):
            return any(self._holds(p, env) for p in phi.parts)
        if isinstance(phi, Implies):
            return (not self._holds(phi.lhs, env)) or self._holds(phi.rhs, env)
        if isinstance(phi, (Exists, Forall)):
            want = isinstance(phi, Exists)
            v = phi.var
            saved = env.get(v, _MISSING)
            dom = self.S.domain(v.sort)
            try:
                for a in dom:
                    self.steps += 1
                    if self.steps > self.budget:
                        raise BudgetExceeded(f">{self.budget}", self.budget, "scalar evaluation")
                    env[v] = a
                    if self._holds(phi.body, env) == want:
                        return want
                return not want
            finally:
                if saved is _MISSING:
                    env.pop(v, None)
                else:
                    env[v] = saved
        raise TypeError(f"not a formula: {phi!r}")


_MISSING = object()


def eval_sentence(S: FiniteStructure, phi: Formula, engine: str = "auto",
                  budget: int = DEFAULT_BUDGET, check: bool = True) -> bool:
    """Truth of the sentence ``phi`` in the finite structure ``S``.

    ``engine`` is ``"scalar"`` (literal enumeration), ``"vector"`` (numpy
    broadcast evaluator; requires a vector backend) or ``"auto"``.
    """
    if check:
        check_formula(phi, S.signature)
    fv = free_vars(phi)
    if fv:
        raise FreeVariableError(f"not a sentence: free variable(s) {', '.join(sorted(v.name for v in fv))}")
    backend = S.vector_backend() if engine in ("auto", "vector") else None
    if engine == "vector" and backend is None:
        raise ValueError(f"{S.name} has no vector backend")
    if backend is not None:
        from .vector import VectorEvaluator
        return VectorEvaluator(backend).sentence(phi)
    return ScalarEvaluator(S, budget).holds(phi)
