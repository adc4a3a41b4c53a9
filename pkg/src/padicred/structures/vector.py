"""Broadcast evaluator: each bound variable owns one numpy axis.

A formula is evaluated to a boolean array over all assignments at once.
Quantifiers reduce their axis with ``any``/``all``.  Three rewrites avoid
enumerating a full domain when the formula shape allows it:

* one-point rule: ``∃u(... ∧ u = τ ∧ ...)`` binds ``u := τ`` (dually for ∀);
* guard rule: ``∃u(R(u) ∧ ...)`` ranges ``u`` over the extension of unary ``R``;
* backend rules: a backend may decide a quantifier shape directly
  (the p-adic backend solves linear witness equations).

Every rewrite is an equivalence, so verdicts coincide with literal
enumeration; the test-suite cross-checks both engines.
"""

from __future__ import annotations

import itertools
from typing import Any, Mapping, Sequence

import numpy as np

from ..logic.syntax import (
    And, App, Const, Eq, Exists, Forall, Formula, FreeVariableError, Implies, Not, Num, Or,
    Pow, Rel, Term, Times, Var, free_vars, term_vars,
)
from .finite import BudgetExceeded, FiniteStructure

MAX_CELLS = 1 << 22
DEFAULT_WORK_BUDGET = 1 << 36


class Backend:
    """Vectorised semantics of a signature.  Values of a sort are arrays whose
    trailing ``elem_ndim(sort)`` axes hold one element."""

    signature = None

    def elem_ndim(self, sort: str) -> int:
        return 0

    def elem_size(self, sort: str) -> int:
        return 1

    def domain(self, sort: str) -> np.ndarray:
        raise NotImplementedError

    def domain_size(self, sort: str) -> int:
        return len(self.domain(sort))

    def const(self, name: str) -> np.ndarray:
        raise NotImplementedError

    def func(self, name: str, args: Sequence[np.ndarray]) -> np.ndarray:
        raise NotImplementedError

    def rel(self, name: str, args: Sequence[np.ndarray]) -> np.ndarray:
        raise NotImplementedError

    def eq(self, sort: str, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.elem_ndim(sort):
            axes = tuple(range(-self.elem_ndim(sort), 0))
            return np.all(a == b, axis=axes)
        return a == b

    def extension(self, rel: str) -> np.ndarray | None:
        """Elements satisfying a unary relation, if cheaply enumerable."""
        return None

    def special(self, engine: "VectorEvaluator", phi: Formula, env: dict, level: int):
        """Decide a quantified formula directly, or return ``None``."""
        return None

    def special_cost(self, phi: Formula) -> int | None:
        return None

    # -- arithmetic sugar via double-and-add on the declared operations
    def _arith(self, sort):
        return self.signature.arith[sort]

    def num(self, sort: str, value: int) -> np.ndarray:
        ar = self._arith(sort)
        if value == 0:
            return self.const(ar.zero)
        return self._repeat(ar.add, self.const(ar.one), value, None)

    def times(self, sort: str, k: int, x: np.ndarray) -> np.ndarray:
        ar = self._arith(sort)
        return self._repeat(ar.add, x, k, ar.zero)

    def power(self, sort: str, x: np.ndarray, e: int) -> np.ndarray:
        ar = self._arith(sort)
        return self._repeat(ar.mul, x, e, ar.one)

    def _repeat(self, fn: str, x, k: int, unit: str | None):
        result = None
        base = x
        while k:
            if k & 1:
                result = base if result is None else self.func(fn, [result, base])
            k >>= 1
            if k:
                base = self.func(fn, [base, base])
        if result is None:
            u = self.const(unit)
            return np.broadcast_to(u, x.shape[: x.ndim - u.ndim] + u.shape) if x.ndim > u.ndim else u
        return result

    # -- conversion between scalar values and arrays
    def to_vector(self, sort: str, values: Sequence[Any]) -> np.ndarray:
        raise NotImplementedError

    def from_vector(self, sort: str, arr: np.ndarray) -> list:
        raise NotImplementedError


class TableBackend(Backend):
    """Backend for an arbitrary small :class:`FiniteStructure`: elements are
    coded by their index in the domain and operations by lookup tables."""

    def __init__(self, S: FiniteStructure, max_table: int = 1 << 22):
        self.S = S
        self.signature = S.signature
        self.max_table = max_table
        self._values = {s: list(S.domain(s)) for s in S.signature.sorts}
        self._codes = {s: {v: i for i, v in enumerate(vals)} for s, vals in self._values.items()}
        for s, vals in self._values.items():
            if len(self._codes[s]) != len(vals):
                raise ValueError(f"domain of sort {s} has repeated elements")
        self._ftab: dict[str, np.ndarray] = {}
        self._rtab: dict[str, np.ndarray] = {}

    def domain(self, sort):
        return np.arange(len(self._values[sort]), dtype=np.int64)

    def domain_size(self, sort):
        return len(self._values[sort])

    def code(self, sort, value) -> int:
        try:
            return self._codes[sort][value]
        except KeyError:
            for i, v in enumerate(self._values[sort]):
                if self.S.eq(sort, v, value):
                    return i
            raise ValueError(f"{value!r} is not an element of sort {sort}") from None

    def const(self, name):
        return np.array(self.code(self.signature.constants[name], self.S.constants[name]), dtype=np.int64)

    def _table(self, name, arg_sorts, fn, result_sort=None):
        dims = [len(self._values[s]) for s in arg_sorts]
        if int(np.prod(dims)) > self.max_table:
            raise BudgetExceeded(int(np.prod(dims)), self.max_table, f"table for {name}")
        dtype = np.int64 if result_sort is not None else bool
        tab = np.zeros(dims, dtype=dtype)
        for idx in itertools.product(*(range(d) for d in dims)):
            args = [self._values[s][i] for s, i in zip(arg_sorts, idx)]
            r = fn(*args)
            tab[idx] = self.code(result_sort, r) if result_sort is not None else bool(r)
        return tab

    def func(self, name, args):
        tab = self._ftab.get(name)
        if tab is None:
            arg_sorts, res = self.signature.functions[name]
            tab = self._ftab[name] = self._table(name, arg_sorts, self.S.functions[name], res)
        return tab[tuple(args)]

    def rel(self, name, args):
        tab = self._rtab.get(name)
        if tab is None:
            tab = self._rtab[name] = self._table(name, self.signature.relations[name], self.S.relations[name])
        return tab[tuple(args)]

    def extension(self, rel):
        if len(self.signature.relations.get(rel, ())) != 1:
            return None
        self.rel(rel, [np.zeros((), dtype=np.int64)])
        return np.flatnonzero(self._rtab[rel]).astype(np.int64)

    def to_vector(self, sort, values):
        return np.array([self.code(sort, v) for v in values], dtype=np.int64)

    def from_vector(self, sort, arr):
        return [self._values[sort][int(i)] for i in np.asarray(arr).reshape(-1)]


# ------------------------------------------------------------------------ rewrites


def _conjuncts(phi: Formula) -> list[Formula]:
    if isinstance(phi, And):
        out = []
        for p in phi.parts:
            out.extend(_conjuncts(p))
        return out
    return [phi]


def find_binding(v: Var, phi: Formula, blocked: frozenset = frozenset()) -> Term | None:
    """A term τ such that ``phi`` implies ``v = τ`` through conjunctions and
    existentials, with τ free of ``v`` and of the variables bound on the way."""
    if isinstance(phi, Eq):
        for a, b in ((phi.lhs, phi.rhs), (phi.rhs, phi.lhs)):
            if a == v:
                tv = term_vars(b)
                if v not in tv and not (tv & blocked):
                    return b
        return None
    if isinstance(phi, And):
        for p in phi.parts:
            r = find_binding(v, p, blocked)
            if r is not None:
                return r
        return None
    if isinstance(phi, Exists) and phi.var != v and phi.var.name != v.name:
        return find_binding(v, phi.body, blocked | {phi.var})
    return None


def _forall_binding(v: Var, body: Formula) -> Term | None:
    if isinstance(body, Implies):
        return find_binding(v, body.lhs)
    if isinstance(body, Or):
        for p in body.parts:
            if isinstance(p, Not):
                r = find_binding(v, p.body)
                if r is not None:
                    return r
    return None


def _guard(v: Var, phi: Formula, positive: bool) -> str | None:
    """Name of a unary relation R with ∃v(R v ∧ ...) / ∀v(R v → ...)."""
    if positive:
        cands = _conjuncts(phi)
    elif isinstance(phi, Implies):
        cands = _conjuncts(phi.lhs)
    elif isinstance(phi, Or):
        cands = [p.body for p in phi.parts if isinstance(p, Not)]
    else:
        return None
    for c in cands:
        if isinstance(c, Rel) and len(c.args) == 1 and c.args[0] == v:
            return c.name
    return None


# ---------------------------------------------------------------------- evaluator


class VectorEvaluator:
    def __init__(self, backend: Backend, max_cells: int = MAX_CELLS,
                 budget: int = DEFAULT_WORK_BUDGET):
        self.B = backend
        self.max_cells = max_cells
        self.budget = budget
        self.work = 0
        self._cost: dict[int, int] = {}
        self._plans: dict[int, tuple] = {}
        self._ext: dict[str, np.ndarray | None] = {}

    # -- public entry points
    def sentence(self, phi: Formula) -> bool:
        fv = free_vars(phi)
        if fv:
            raise FreeVariableError(f"free variable(s) {', '.join(sorted(v.name for v in fv))}")
        return bool(np.all(self.evaluate(phi, {}, ())))

    def evaluate(self, phi: Formula, env: Mapping[Var, np.ndarray], base_shape: tuple) -> np.ndarray:
        """Truth values of ``phi`` over a batch of assignments.

        Each ``env[v]`` has shape ``(*b, *elem)`` with ``b`` broadcastable to
        ``base_shape``; the result has shape ``base_shape``.
        """
        nb = len(base_shape)
        q = self.axes_needed(phi)
        self.D = nb + q
        local = {}
        for v, arr in env.items():
            arr = np.asarray(arr)
            en = self.B.elem_ndim(v.sort)
            lead = arr.shape[: arr.ndim - en]
            if len(lead) != nb:
                raise ValueError(f"assignment for {v.name} has {len(lead)} batch axes, expected {nb}")
            local[v] = arr.reshape(lead + (1,) * q + arr.shape[arr.ndim - en:])
        missing = free_vars(phi) - set(local)
        if missing:
            raise FreeVariableError(f"unassigned variable(s) {', '.join(sorted(v.name for v in missing))}")
        res = self._f(phi, local, nb)
        res = res.reshape(res.shape[:nb]) if res.ndim > nb else res
        return np.broadcast_to(res, base_shape)

    # -- helpers
    def _place(self, vals: np.ndarray, sort: str, axis: int) -> np.ndarray:
        en = self.B.elem_ndim(sort)
        k = vals.shape[0]
        shape = (1,) * axis + (k,) + (1,) * (self.D - axis - 1) + vals.shape[1:]
        assert len(vals.shape) == 1 + en
        return vals.reshape(shape)

    def _lift(self, arr: np.ndarray, en: int) -> np.ndarray:
        """Pad a bare element (or batch) to the full evaluator rank."""
        want = self.D + en
        if arr.ndim < want:
            arr = arr.reshape((1,) * (want - arr.ndim) + arr.shape)
        return arr

    def _truth(self, value: bool) -> np.ndarray:
        return np.full((1,) * self.D, value, dtype=bool)

    def term(self, t: Term, env: dict) -> np.ndarray:
        B = self.B
        if isinstance(t, Var):
            try:
                return env[t]
            except KeyError:
                raise FreeVariableError(f"variable {t.name} is not assigned") from None
        if isinstance(t, Const):
            return self._lift(B.const(t.name), B.elem_ndim(t.sort))
        if isinstance(t, App):
            return self._lift(B.func(t.fn, [self.term(a, env) for a in t.args]), B.elem_ndim(t.sort))
        if isinstance(t, Num):
            return self._lift(B.num(t.sort, t.value), B.elem_ndim(t.sort))
        if isinstance(t, Times):
            return self._lift(B.times(t.sort, t.factor, self.term(t.arg, env)), B.elem_ndim(t.sort))
        if isinstance(t, Pow):
            return self._lift(B.power(t.sort, self.term(t.base, env), t.exponent), B.elem_ndim(t.sort))
        raise TypeError(f"not a term: {t!r}")

    def _extension(self, rel: str):
        if rel not in self._ext:
            self._ext[rel] = self.B.extension(rel)
        return self._ext[rel]

    # -- static cost model (cells of the largest intermediate, per outer assignment)
    def cost(self, phi: Formula) -> int:
        key = id(phi)
        c = self._cost.get(key)
        if c is not None and c[0] is phi:
            return c[1]
        if isinstance(phi, (Eq, Rel)):
            c = 1
        elif isinstance(phi, Not):
            c = self.cost(phi.body)
        elif isinstance(phi, (And, Or)):
            c = max((self.cost(p) for p in phi.parts), default=1)
        elif isinstance(phi, Implies):
            c = max(self.cost(phi.lhs), self.cost(phi.rhs))
        else:
            c = self._domain_plan(phi)[2] * self.cost(phi.body)
        self._cost[key] = (phi, c)
        return c

    def _domain_plan(self, phi):
        """(kind, payload, size) for a quantifier node."""
        key = id(phi)
        plan = self._plans.get(key)
        if plan is None or plan[0] is not phi:
            plan = self._plans[key] = (phi, self._make_plan(phi))
        return plan[1]

    def _make_plan(self, phi):
        v, body = phi.var, phi.body
        positive = isinstance(phi, Exists)
        sc = self.B.special_cost(phi)
        if sc is not None:
            return ("special", None, sc)
        tau = find_binding(v, body) if positive else _forall_binding(v, body)
        if tau is not None:
            return ("bind", tau, 1)
        g = _guard(v, body, positive)
        if g is not None:
            ext = self._extension(g)
            if ext is not None:
                return ("guard", ext, len(ext))
        return ("full", None, self.B.domain_size(v.sort))

    def axes_needed(self, phi: Formula) -> int:
        """Nesting depth of the quantifiers that enumerate (each needs an axis)."""
        if isinstance(phi, (Eq, Rel)):
            return 0
        if isinstance(phi, Not):
            return self.axes_needed(phi.body)
        if isinstance(phi, (And, Or)):
            return max((self.axes_needed(p) for p in phi.parts), default=0)
        if isinstance(phi, Implies):
            return max(self.axes_needed(phi.lhs), self.axes_needed(phi.rhs))
        kind = self._domain_plan(phi)[0]
        return (kind in ("full", "guard")) + self.axes_needed(phi.body)

    # -- recursive evaluation; results have rank self.D
    def _f(self, phi: Formula, env: dict, level: int) -> np.ndarray:
        if isinstance(phi, Eq):
            a, b = self.term(phi.lhs, env), self.term(phi.rhs, env)
            return self._lift(self.B.eq(phi.lhs.sort, a, b), 0)
        if isinstance(phi, Rel):
            return self._lift(self.B.rel(phi.name, [self.term(a, env) for a in phi.args]), 0)
        if isinstance(phi, Not):
            return ~self._f(phi.body, env, level)
        if isinstance(phi, And):
            acc = self._truth(True)
            for p in phi.parts:
                acc = acc & self._f(p, env, level)
                if not acc.any():
                    return self._truth(False)
            return acc
        if isinstance(phi, Or):
            acc = self._truth(False)
            for p in phi.parts:
                acc = acc | self._f(p, env, level)
                if acc.all():
                    return self._truth(True)
            return acc
        if isinstance(phi, Implies):
            a = self._f(phi.lhs, env, level)
            if not a.any():
                return self._truth(True)
            return ~a | self._f(phi.rhs, env, level)
        if isinstance(phi, (Exists, Forall)):
            return self._quant(phi, env, level)
        raise TypeError(f"not a formula: {phi!r}")

    def _outer_cells(self, env: dict) -> int:
        shapes = []
        for v, arr in env.items():
            en = self.B.elem_ndim(v.sort)
            shapes.append(arr.shape[: arr.ndim - en])
        if not shapes:
            return 1
        return int(np.prod(np.broadcast_shapes(*shapes), dtype=np.int64))

    def _quant(self, phi, env: dict, level: int) -> np.ndarray:
        positive = isinstance(phi, Exists)
        v, body = phi.var, phi.body
        kind, payload, size = self._domain_plan(phi)
        if kind == "special":
            res = self.B.special(self, phi, env, level)
            if res is None:
                raise RuntimeError("backend declined a quantifier it claimed to handle")
            return self._lift(res, 0)
        inner = dict(env)
        if kind == "bind":
            inner[v] = np.asarray(self.term(payload, env))
            return self._f(body, inner, level)
        vals = payload if kind == "guard" else self.B.domain(v.sort)
        outer = self._outer_cells(env)
        per = max(1, self.cost(body)) * self.B.elem_size(v.sort) * 4
        work = outer * size * max(1, self.cost(body))
        self.work += work
        if self.work > self.budget:
            raise BudgetExceeded(self.work, self.budget, "vector evaluation")
        chunk = max(1, self.max_cells // max(1, outer * per))
        acc = None
        for lo in range(0, size, chunk):
            inner[v] = self._place(vals[lo: lo + chunk], v.sort, level)
            r = self._f(body, inner, level + 1)
            r = r.any(axis=level, keepdims=True) if positive else r.all(axis=level, keepdims=True)
            acc = r if acc is None else (acc | r if positive else acc & r)
            if (positive and acc.all()) or (not positive and not acc.any()):
                break
        if acc is None:  # empty domain
            return self._truth(not positive)
        return acc
