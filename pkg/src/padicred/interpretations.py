"""One-dimensional interpretations, the reduction map they induce, and their
verification against finite models.

An :class:`Interpretation` of a source signature L in a target signature L'
consists of a domain formula ∂(x), one target formula per unnested atomic
shape of L, and a coordinate map f from ∂-points onto the source domain.
:func:`reduce_formula` extends the atomic table to all formulas;
:func:`verify_interpretation` checks the truth-transfer condition
``source ⊨ φ(f(ā)) ⟺ target ⊨ φ'(ā)`` atom by atom.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .logic.signature import L_PDIV, L_TP, L_VAL_X, Signature
from .logic.sexpr import to_sexpr
from .logic.syntax import (
    And, App, Const, Eq, Exists, Forall, Formula, Implies, Not, Num, Or, Pow, Rel, Term, Times, Var,
    check_formula, conj, free_vars, iter_atoms, iter_terms, atom_terms,
)
from .logic.transform import (
    FreshNames, PrenexClass, _Unnester, all_names, classify, is_existential, is_unnested_atom, nnf,
    prenex_classify, substitute,
)
from .structures.finite import FiniteStructure
from .structures.models import IModel, TruncPolyRingModel, power_to_index
from .structures.truncpoly import TruncPoly
from .structures.vector import VectorEvaluator


class TranslationError(ValueError):
    pass


class ComplexityError(ValueError):
    pass


# ------------------------------------------------------------------ data types


@dataclass(frozen=True)
class Entry:
    """Target formula for one atomic shape; ``params`` are its free placeholders,
    in the positional order of the source atom's variables."""

    params: tuple[Var, ...]
    formula: Formula


def shape_keys(sig: Signature) -> list[tuple[str, str]]:
    keys = [("eq", s) for s in sig.sorts]
    keys += [("const", c) for c in sig.constants]
    keys += [("func", f) for f in sig.functions]
    keys += [("rel", r) for r in sig.relations]
    return keys


_PLACEHOLDERS = "xyzw"


def source_params(sig: Signature, key: tuple[str, str]) -> tuple[Var, ...]:
    """Positional variables of the source atom for ``key``."""
    kind, name = key
    if kind == "eq":
        sorts = [name, name]
    elif kind == "const":
        sorts = [sig.constants[name]]
    elif kind == "func":
        args, res = sig.functions[name]
        sorts = list(args) + [res]
    else:
        sorts = list(sig.relations[name])
    names = _PLACEHOLDERS if len(sorts) <= 4 else [f"x{i}" for i in range(len(sorts))]
    return tuple(Var(names[i], s) for i, s in enumerate(sorts))


def source_atom(sig: Signature, key: tuple[str, str]) -> Formula:
    kind, name = key
    xs = source_params(sig, key)
    if kind == "eq":
        return Eq(xs[0], xs[1])
    if kind == "const":
        return Eq(xs[0], Const(name, sig.constants[name]))
    if kind == "func":
        return Eq(App(name, xs[:-1], sig.functions[name][1]), xs[-1])
    return Rel(name, xs)


@dataclass(frozen=True, eq=False)
class Interpretation:
    name: str
    source: Signature
    target: Signature
    sort_map: Mapping[str, str]
    domain: Mapping[str, Entry]
    table: Mapping[tuple[str, str], Entry]
    coordinate_map: Callable
    points: str = "domain"  # how verification enumerates ∂-points: "domain" | "residues"
    shortcut: Callable[[Formula], tuple[Var, Formula] | None] | None = None
    dimension: int = 1

    def __post_init__(self):
        if self.dimension != 1:
            raise NotImplementedError("only one-dimensional interpretations are supported")
        missing = [k for k in shape_keys(self.source) if k not in self.table]
        if missing:
            raise TranslationError(f"{self.name}: table misses shapes {missing}")
        for s in self.source.sorts:
            if s not in self.domain:
                raise TranslationError(f"{self.name}: no domain formula for sort {s}")
        for key, e in list(self.table.items()) + [(("dom", s), d) for s, d in self.domain.items()]:
            check_formula(e.formula, self.target)
            extra = free_vars(e.formula) - set(e.params)
            if extra:
                raise TranslationError(f"{self.name}: entry {key} has stray free variables {extra}")

    def entry(self, key) -> Entry:
        try:
            return self.table[key]
        except KeyError:
            raise TranslationError(f"{self.name}: no translation for atomic shape {key}") from None


def serialize_table(G: Interpretation) -> str:
    """Canonical text of ∂ and the table; equal text means identical translations."""
    lines = [f"interpretation {G.name}: {G.source.name} -> {G.target.name}"]
    for s in sorted(G.domain):
        e = G.domain[s]
        lines.append(f"dom {s} ({' '.join(v.name for v in e.params)}) {to_sexpr(e.formula)}")
    for key in shape_keys(G.source):
        e = G.table[key]
        lines.append(f"{key[0]} {key[1]} ({' '.join(v.name for v in e.params)}) {to_sexpr(e.formula)}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------- reduction map


class _Reducer:
    def __init__(self, G: Interpretation, fresh: FreshNames, shortcut: bool):
        self.G, self.fresh, self.use_shortcut = G, fresh, shortcut
        self.unnester = _Unnester(fresh, False, G.source)
        self.reserved = G.target.symbols()

    def tvar(self, v: Var, env: dict) -> Var:
        try:
            return env[v]
        except KeyError:
            if v.name in self.reserved:
                raise TranslationError(f"free variable {v.name} clashes with a target symbol") from None
            return Var(v.name, self.G.sort_map[v.sort])

    def instantiate(self, e: Entry, args: tuple[Var, ...]) -> Formula:
        mapping = dict(zip(e.params, args))
        return substitute(e.formula, mapping, self.fresh)

    def atom(self, a: Formula, env: dict) -> Formula:
        G = self.G
        if self.use_shortcut and G.shortcut is not None:
            hit = G.shortcut(a)
            if hit is not None:
                (v, tmpl) = hit
                return substitute(tmpl, {Var("x", G.sort_map[v.sort]): self.tvar(v, env)}, self.fresh)
        if not is_unnested_atom(a):
            return self.formula(self.unnester.atom(a), env)
        if isinstance(a, Rel):
            return self.instantiate(G.entry(("rel", a.name)), tuple(self.tvar(x, env) for x in a.args))
        lhs, rhs = a.lhs, a.rhs
        if isinstance(lhs, Var) and isinstance(rhs, Var):
            return self.instantiate(G.entry(("eq", lhs.sort)), (self.tvar(lhs, env), self.tvar(rhs, env)))
        if isinstance(lhs, Var) and isinstance(rhs, Const):
            return self.instantiate(G.entry(("const", rhs.name)), (self.tvar(lhs, env),))
        app, y = (lhs, rhs) if isinstance(lhs, App) else (rhs, lhs)
        args = tuple(self.tvar(x, env) for x in app.args) + (self.tvar(y, env),)
        return self.instantiate(G.entry(("func", app.fn)), args)

    def formula(self, phi: Formula, env: dict) -> Formula:
        if isinstance(phi, (Eq, Rel)):
            return self.atom(phi, env)
        if isinstance(phi, Not):
            return Not(self.formula(phi.body, env))
        if isinstance(phi, And):
            return And(tuple(self.formula(p, env) for p in phi.parts))
        if isinstance(phi, Or):
            return Or(tuple(self.formula(p, env) for p in phi.parts))
        if isinstance(phi, Implies):
            return Implies(self.formula(phi.lhs, env), self.formula(phi.rhs, env))
        if isinstance(phi, (Exists, Forall)):
            v = phi.var
            name = v.name if v.name not in self.reserved else self.fresh.name()
            tv = Var(name, self.G.sort_map[v.sort])
            inner = dict(env)
            inner[v] = tv
            dom = self.instantiate(self.G.domain[v.sort], (tv,))
            body = self.formula(phi.body, inner)
            if isinstance(phi, Exists):
                return Exists(tv, conj(dom, body))
            return Forall(tv, Implies(dom, body))
        raise TypeError(f"not a formula: {phi!r}")


def reduce_formula(G: Interpretation, phi: Formula, shortcut: bool = False,
                   fresh: FreshNames | None = None) -> Formula:
    """The reduction map φ ↦ φ_G.

    Atoms are unnested on the fly (fresh ∃-variables, which are then
    relativised like any other quantifier) and replaced by their table entries.
    ``shortcut`` lets the interpretation translate recognised sugar atoms as a
    unit (for Γ: ``N·x = ∞`` becomes ``x^N = 0``).
    """
    check_formula(phi, G.source)
    if fresh is None:
        fresh = FreshNames(all_names(phi) | G.source.symbols() | G.target.symbols())
    return _Reducer(G, fresh, shortcut).formula(phi, {})


# -------------------------------------------------------------------- Γ table


def _pow(t: Term, e: int) -> Term:
    return t if e == 1 else Pow(t, e)


def _mul(*ts: Term) -> Term:
    out = ts[0]
    for t in ts[1:]:
        out = App("mul", (out, t), "R")
    return out


def _add(a: Term, b: Term, sort: str = "R") -> Term:
    return App("add", (a, b), sort)


def pheidas_formula(p: int, x: Term, y: Term, z: Var) -> Formula:
    """∃z ( z^p·x + x·y·z^{p-1} = x·y + z^p·y ∧ z^{3p} ≠ 0 ).

    This is z^p(x - y) = x·y(1 - z^{p-1}) with both sides moved into the
    subtraction-free language of rings.
    """
    zero = Const("zero", "R")
    lhs = _add(_mul(_pow(z, p), x), _mul(x, y, _pow(z, p - 1)))
    rhs = _add(_mul(x, y), _mul(_pow(z, p), y))
    return Exists(z, conj(Eq(lhs, rhs), Not(Eq(Pow(z, 3 * p), zero))))


GAMMA_VARIANTS = ("guarded", "literal")


def gamma_interpretation(p: int, variant: str = "guarded") -> Interpretation:
    """Γ: I_n interpreted in F_p[t]/(t^n) on the set P, uniformly in n.

    ``literal`` uses the bare identity for x |_p y; ``guarded`` (default) adds
    the side conditions x ≠ 1, y^3 ≠ 0 and ∃w∈P (x·w = y) that the identity
    needs to characterise |_p on I_n (without them, e.g. x = y = 0 satisfies
    the identity although ∞ |_p ∞ fails).
    """
    if variant not in GAMMA_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from {GAMMA_VARIANTS}")
    R = "R"
    x, y, z, w = (Var(n, R) for n in "xyzw")
    zero, one, t = Const("zero", R), Const("one", R), Const("t", R)
    divp = pheidas_formula(p, x, y, z)
    if variant == "guarded":
        divp = conj(divp, Not(Eq(x, one)), Not(Eq(Pow(y, 3), zero)),
                    Exists(w, conj(Rel("P", (w,)), Eq(_mul(x, w), y))))
    table = {
        ("eq", "D"): Entry((x, y), Eq(x, y)),
        ("const", "zero"): Entry((x,), Eq(x, one)),
        ("const", "one"): Entry((x,), Eq(x, t)),
        ("const", "inf"): Entry((x,), Eq(x, zero)),
        ("func", "add"): Entry((x, y, z), Eq(_mul(x, y), z)),
        ("rel", "divp"): Entry((x, y), divp),
    }
    return Interpretation(
        name=f"gamma(p={p})" + ("" if variant == "guarded" else f"[{variant}]"),
        source=L_PDIV, target=L_TP, sort_map={"D": R},
        domain={"D": Entry((x,), Rel("P", (x,)))},
        table=table, coordinate_map=power_to_index, points="domain",
        shortcut=_gamma_shortcut,
    )


def _gamma_shortcut(a: Formula):
    """``N·x = ∞`` ↦ ``x^N = 0`` (template over placeholder x)."""
    if not isinstance(a, Eq):
        return None
    for lhs, rhs in ((a.lhs, a.rhs), (a.rhs, a.lhs)):
        if isinstance(lhs, Times) and isinstance(lhs.arg, Var) and rhs == Const("inf", "D"):
            x = Var("x", "R")
            return lhs.arg, Eq(Pow(x, lhs.factor), Const("zero", "R"))
    return None


# -------------------------------------------------------------------- Δ table

DELTA_VARIANTS = ("lift-invariant", "literal")


def in_O(x: Term) -> Formula:
    """x ∈ O, i.e. v(x) ≥ 0."""
    return Not(Rel("lt", (App("v", (x,), "G"), Const("zero_G", "G"))))


def min_positive(g: Var, d: Var) -> Formula:
    """γ is the least positive element: 0 < γ ∧ ∀δ (0 < δ → ¬ δ < γ)."""
    zG = Const("zero_G", "G")
    return conj(Rel("lt", (zG, g)), Forall(d, Implies(Rel("lt", (zG, d)), Not(Rel("lt", (d, g))))))


def delta_interpretation(p: int, variant: str = "lift-invariant") -> Interpretation:
    """Δ: F_p[t]/(t^n) interpreted in K (any K/Q_p totally ramified of degree n) on O.

    Every entry says "equal modulo p".  ``literal`` states the t and P entries
    as exact equalities x = s(γ); those hold at residue representatives but
    are not invariant under lifting (π + p satisfies the t relation mod p
    without being a power of π), so ``lift-invariant`` (default) states them
    modulo p as well.
    """
    if variant not in DELTA_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from {DELTA_VARIANTS}")
    K, G = "K", "G"
    x, y, z, w = (Var(n, K) for n in "xyzw")
    g, d = Var("g", G), Var("d", G)
    P = Num(p, K)
    zero_G = Const("zero_G", G)

    def mod_p(lhs: Term, rhs: Term, u: Var) -> Formula:
        """∃u∈O (lhs = rhs + p·u)."""
        body = App("mul", (P, u), K) if rhs is None else _add(rhs, App("mul", (P, u), K), K)
        return Exists(u, conj(in_O(u), Eq(lhs, body)))

    s_g = App("s", (g,), K)
    if variant == "literal":
        t_body, P_body = Eq(x, s_g), Eq(x, s_g)
    else:
        t_body, P_body = mod_p(x, s_g, z), mod_p(x, s_g, z)
    table = {
        ("eq", "R"): Entry((x, y), mod_p(x, y, z)),
        ("const", "zero"): Entry((x,), mod_p(x, None, y)),
        ("const", "one"): Entry((x,), mod_p(x, Const("one", K), y)),
        ("const", "t"): Entry((x,), Exists(g, conj(min_positive(g, d), t_body))),
        ("func", "add"): Entry((x, y, z), mod_p(_add(x, y, K), z, w)),
        ("func", "mul"): Entry((x, y, z), mod_p(App("mul", (x, y), K), z, w)),
        ("rel", "P"): Entry((x,), Exists(g, conj(Not(Rel("lt", (g, zero_G))), P_body))),
    }
    return Interpretation(
        name=f"delta(p={p})" + ("" if variant == "lift-invariant" else f"[{variant}]"),
        source=L_TP, target=L_VAL_X, sort_map={"R": K},
        domain={"R": Entry((x,), in_O(x))},
        table=table, coordinate_map=_reduce_mod_p(p), points="residues",
    )


def _reduce_mod_p(p: int):
    def f(value) -> TruncPoly:
        shift, coords = value if isinstance(value, tuple) else (0, value.coords)
        if shift != 0:
            raise ValueError("coordinate map is defined on O_K only")
        return TruncPoly(p, len(coords), tuple(c % p for c in coords))
    return f


# ---------------------------------------------------------------- verification


@dataclass(frozen=True)
class EntryVerdict:
    key: tuple[str, str]
    passed: bool
    checked: int
    counterexample: tuple | None = None  # ((target values), (source values), source, target)
    lifts_checked: int = 0


@dataclass(frozen=True)
class ReductionReport:
    interpretation: str
    source: str
    target: str
    mode: str
    entries: tuple[EntryVerdict, ...]
    surjective: bool
    points: int
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.surjective and all(e.passed for e in self.entries)

    def failures(self) -> list[EntryVerdict]:
        return [e for e in self.entries if not e.passed]

    def lines(self) -> list[str]:
        out = []
        for e in self.entries:
            tag = "PASS" if e.passed else "FAIL"
            extra = f" lifts={e.lifts_checked}" if e.lifts_checked else ""
            line = f"{tag} {e.key[0]} {e.key[1]} tuples={e.checked}{extra}"
            if e.counterexample is not None:
                tv, sv, s_truth, t_truth = e.counterexample
                line += (f" counterexample target={_fmt(tv)} source={_fmt(sv)}"
                         f" source_holds={s_truth} target_holds={t_truth}")
            out.append(line)
        out.append(f"{'PASS' if self.surjective else 'FAIL'} surjective points={self.points}")
        return out


def _fmt(vals) -> str:
    return "(" + ", ".join(str(v) for v in vals) + ")"


def _grid_env(params, arrays, backend, lo, hi):
    """Each parameter on its own axis; the first axis restricted to [lo, hi)."""
    r = len(params)
    env = {}
    for i, (v, arr) in enumerate(zip(params, arrays)):
        a = arr[lo:hi] if i == 0 else arr
        shape = [1] * r
        shape[i] = a.shape[0]
        env[v] = a.reshape(tuple(shape) + a.shape[1:])
    return env


def _points(G: Interpretation, target: FiniteStructure, sort: str):
    """∂-points of the target as an array (plus a flag telling residue mode)."""
    B = target.vector_backend()
    tsort = G.sort_map[sort]
    if G.points == "residues":
        M = target
        import itertools
        reps = np.array(list(itertools.product(range(M.p), repeat=M.n)), dtype=np.int64)
        return B.kval(reps)
    dom = B.domain(tsort)
    e = G.domain[sort]
    ev = VectorEvaluator(B)
    mask = ev.evaluate(e.formula, {e.params[0]: dom}, (dom.shape[0],))
    return dom[mask]


def _map_points(G, sort, tB, sB, pts):
    tvals = tB.from_vector(G.sort_map[sort], pts)
    svals = [G.coordinate_map(v) for v in tvals]
    return tvals, svals, sB.to_vector(sort, svals)


def verify_interpretation(G: Interpretation, source: FiniteStructure, target: FiniteStructure,
                          mode: str = "exhaustive", lifts: int = 100, samples: int = 2000,
                          seed: int = 0, max_cells: int = 1 << 22) -> ReductionReport:
    """Check ``source ⊨ φ(f(ā)) ⟺ target ⊨ φ_G(ā)`` for every atomic shape φ.

    ``exhaustive`` runs over all tuples of ∂-points, ``sampled`` over
    ``samples`` random tuples.  For residue-level interpretations, each entry
    is additionally checked on ``lifts`` random tuples of arbitrary lifts.
    """
    if mode not in ("exhaustive", "sampled"):
        raise ValueError("mode must be 'exhaustive' or 'sampled'")
    start = time.perf_counter()
    tB, sB = target.vector_backend(), source.vector_backend()
    if tB is None or sB is None:
        raise ValueError("verification needs vector backends on both structures")
    rng = np.random.default_rng(seed)
    pts, tvals, svals, scodes = {}, {}, {}, {}
    for s in G.source.sorts:
        pts[s] = _points(G, target, s)
        tvals[s], svals[s], scodes[s] = _map_points(G, s, tB, sB, pts[s])
    # surjectivity
    surjective = True
    for s in G.source.sorts:
        dom = sB.domain(s)
        hit = VectorEvaluator(sB).evaluate(
            Eq(Var("a", s), Var("b", s)), {Var("a", s): dom[:, None] if dom.ndim == 1 else dom[:, None, :],
                                          Var("b", s): scodes[s][None] if scodes[s].ndim == 1 else scodes[s][None, :, :]},
            (dom.shape[0], scodes[s].shape[0]))
        surjective &= bool(hit.any(axis=1).all())

    verdicts = []
    for key in shape_keys(G.source):
        sparams = source_params(G.source, key)
        satom = source_atom(G.source, key)
        entry = G.table[key]
        sorts = [v.sort for v in sparams]
        tev = VectorEvaluator(tB, max_cells=max_cells)
        sev = VectorEvaluator(sB, max_cells=max_cells)
        bad = None
        checked = 0
        if mode == "exhaustive":
            sizes = [pts[s].shape[0] for s in sorts]
            rest = int(np.prod(sizes[1:], dtype=np.int64)) if len(sizes) > 1 else 1
            chunk = max(1, max_cells // (rest * max(1, tB.elem_size(G.sort_map[sorts[0]]))))
            for lo in range(0, sizes[0], chunk):
                hi = min(sizes[0], lo + chunk)
                base = (hi - lo,) + tuple(sizes[1:])
                tenv = _grid_env(entry.params, [pts[s] for s in sorts], tB, lo, hi)
                senv = _grid_env(sparams, [scodes[s] for s in sorts], sB, lo, hi)
                tt = tev.evaluate(entry.formula, tenv, base)
                ss = sev.evaluate(satom, senv, base)
                checked += tt.size
                diff = np.argwhere(tt != ss)
                if diff.size:
                    idx = tuple(int(i) for i in diff[0])
                    idx = (idx[0] + lo,) + idx[1:]
                    bad = (tuple(tvals[s][i] for s, i in zip(sorts, idx)),
                           tuple(svals[s][i] for s, i in zip(sorts, idx)),
                           bool(ss[tuple(diff[0])]), bool(tt[tuple(diff[0])]))
                    break
        else:
            idx = [rng.integers(0, pts[s].shape[0], samples) for s in sorts]
            bad, checked = _batch_check(G, tev, sev, entry, sparams, satom, sorts,
                                        [pts[s][i] for s, i in zip(sorts, idx)],
                                        [[tvals[s][j] for j in i] for s, i in zip(sorts, idx)],
                                        tB, sB)
        nl = 0
        if bad is None and G.points == "residues" and lifts:
            lifted = [_random_lifts(target, rng, lifts) for _ in sorts]
            tl = [tB.from_vector(G.sort_map[s], a) for s, a in zip(sorts, lifted)]
            bad, nl = _batch_check(G, tev, sev, entry, sparams, satom, sorts, lifted, tl, tB, sB)
        verdicts.append(EntryVerdict(key, bad is None, checked, bad, nl))
    n_points = sum(pts[s].shape[0] for s in G.source.sorts)
    return ReductionReport(G.name, getattr(source, "name", "source"), getattr(target, "name", "target"),
                           mode, tuple(verdicts), surjective, n_points, time.perf_counter() - start)


def _random_lifts(M, rng, count) -> np.ndarray:
    """Random elements of O_K/p^k: uniformly random lifts of random residues."""
    coords = rng.integers(0, M.q, size=(count, M.n))
    return M.vector_backend().kval(coords)


def _batch_check(G, tev, sev, entry, sparams, satom, sorts, tarrays, tscalars, tB, sB):
    m = tarrays[0].shape[0]
    svals = [[G.coordinate_map(v) for v in col] for col in tscalars]
    senv = {v: sB.to_vector(s, col) for v, s, col in zip(sparams, sorts, svals)}
    tenv = dict(zip(entry.params, tarrays))
    tt = tev.evaluate(entry.formula, tenv, (m,))
    ss = sev.evaluate(satom, senv, (m,))
    diff = np.flatnonzero(tt != ss)
    if diff.size:
        i = int(diff[0])
        return ((tuple(col[i] for col in tscalars), tuple(col[i] for col in svals),
                 bool(ss[i]), bool(tt[i])), m)
    return None, m


# ---------------------------------------------------------- ∃∀ normalisation


def _mentions_t(a: Formula) -> bool:
    return any(isinstance(s, Const) and s.name == "t" for term in atom_terms(a) for s in iter_terms(term))


def _replace_t(t: Term, y: Var) -> Term:
    if isinstance(t, Const) and t.name == "t":
        return y
    if isinstance(t, App):
        return App(t.fn, tuple(_replace_t(a, y) for a in t.args), t.sort)
    if isinstance(t, Times):
        return Times(t.factor, _replace_t(t.arg, y))
    if isinstance(t, Pow):
        return Pow(_replace_t(t.base, y), t.exponent)
    return t


def extract_t(phi: Formula, fresh: FreshNames) -> Formula:
    """In an NNF formula, replace each negated atom ¬A(t) by ∃y (y = t ∧ ¬A(y))."""
    if isinstance(phi, Not):
        a = phi.body
        if _mentions_t(a):
            y = fresh.var("R", "y")
            if isinstance(a, Eq):
                body = Eq(_replace_t(a.lhs, y), _replace_t(a.rhs, y))
            else:
                body = Rel(a.name, tuple(_replace_t(x, y) for x in a.args))
            return Exists(y, conj(Eq(y, Const("t", "R")), Not(body)))
        return phi
    if isinstance(phi, (Eq, Rel)):
        return phi
    if isinstance(phi, And):
        return And(tuple(extract_t(p, fresh) for p in phi.parts))
    if isinstance(phi, Or):
        return Or(tuple(extract_t(p, fresh) for p in phi.parts))
    if isinstance(phi, Exists):
        return Exists(phi.var, extract_t(phi.body, fresh))
    raise ValueError("extract_t expects an existential formula in negation normal form")


def exists_to_EA(phi: Formula, D: Interpretation | None = None, p: int = 2) -> Formula:
    """An ∃∀ L_val,×-sentence equivalent (in every K) to the Δ-translation of
    the existential L_t∪P-sentence ``phi``."""
    D = D or delta_interpretation(p)
    if D.source is not L_TP and D.source != L_TP:
        raise ValueError("exists_to_EA needs an interpretation of L_t∪P")
    check_formula(phi, L_TP)
    if free_vars(phi):
        raise ValueError("exists_to_EA needs a sentence")
    if not is_existential(phi):
        raise ComplexityError(f"input is not existential (class {classify(phi).symbols})")
    fresh = FreshNames(all_names(phi) | L_TP.symbols() | D.target.symbols())
    psi = extract_t(nnf(phi), fresh)
    image = reduce_formula(D, psi, fresh=fresh)
    out, cls = prenex_classify(image, fresh)
    return out
