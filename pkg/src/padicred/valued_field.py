"""Totally ramified extensions K = Q_p(π) at finite precision.

An Eisenstein polynomial E of degree n presents O_K = Z_p[π] with
π^n = -(a_{n-1}π^{n-1} + ... + a_0).  Elements are stored modulo p^k as
coordinate vectors in the basis 1, π, ..., π^{n-1}; the valuation is
normalised by v(π) = 1, so v(p) = n and p^k O_K = π^{nk} O_K.

Inside the evaluator a K-value is ``π^shift · u`` with ``u`` in O_K/p^k:
the shift slot only becomes negative through s(γ) for γ < 0.  Everything
a quantifier ranges over has shift 0, i.e. K-quantifiers range over O_K.
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import kernels
from .logic.signature import L_VAL_X
from .logic.syntax import (
    App, Const, Eq, Exists, Forall, Formula, Implies, Not, Or, And, Rel, Term, Var, term_vars,
)
from .structures.finite import FiniteStructure, INF as PY_INF
from .structures.truncpoly import TruncPoly
from .structures.vector import Backend, VectorEvaluator

INF = 1 << 40  # ∞ in the value-group arrays
DEFAULT_PRECISION = 2


class NotEisensteinError(ValueError):
    pass


class PrecisionExhausted(ArithmeticError):
    """The element is 0 modulo π^{nk}; its valuation is not determined."""


class FieldMismatch(ValueError):
    pass


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


@dataclass(frozen=True)
class EisensteinPoly:
    """Monic E(t) = t^n + a_{n-1}t^{n-1} + ... + a_0 with ``coeffs = (a_0, ..., a_{n-1})``."""

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not _is_prime(self.p):
            raise NotEisensteinError(f"p={self.p} is not prime")
        if not self.coeffs:
            raise NotEisensteinError("degree must be at least 1")
        for i, a in enumerate(self.coeffs):
            if a % self.p:
                raise NotEisensteinError(f"a_{i}={a} not divisible by {self.p}")
        if self.coeffs[0] % (self.p * self.p) == 0:
            raise NotEisensteinError(f"a_0={self.coeffs[0]} divisible by {self.p}^2")

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @classmethod
    def standard(cls, p: int, n: int) -> EisensteinPoly:
        """t^n - p."""
        return cls(p, (-p,) + (0,) * (n - 1))

    def __str__(self):
        terms = [f"t^{self.n}"]
        for i in range(self.n - 1, -1, -1):
            a = self.coeffs[i]
            if a:
                mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
                mag = abs(a)
                body = f"{mag}{'*' + mono if mono else ''}" if (mag != 1 or not mono) else mono
                terms.append(("- " if a < 0 else "+ ") + body)
        return " ".join(terms)


_POLY_TERM = re.compile(r"([+-]?)(\d*)\*?(t(?:\^(\d+))?)?")


def parse_eisenstein(text: str, p: int) -> EisensteinPoly:
    """``"t^2-2"``, ``"[-2, 0]"`` or ``"-2,0"`` (lower coefficients a_0..a_{n-1})."""
    s = text.replace(" ", "").replace("−", "-")
    if not s:
        raise ValueError("empty polynomial")
    if "t" not in s:
        body = s.strip("[]")
        try:
            coeffs = tuple(int(c) for c in body.split(",") if c)
        except ValueError:
            raise ValueError(f"cannot read coefficient list {text!r}") from None
        return EisensteinPoly(p, coeffs)
    powers: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _POLY_TERM.match(s, pos)
        if not m or m.end() == pos or (not m.group(2) and not m.group(3)):
            raise ValueError(f"cannot read polynomial {text!r} at position {pos}")
        sign = -1 if m.group(1) == "-" else 1
        c = int(m.group(2)) if m.group(2) else 1
        e = 0 if not m.group(3) else (int(m.group(4)) if m.group(4) else 1)
        powers[e] = powers.get(e, 0) + sign * c
        pos = m.end()
    n = max(powers)
    if powers[n] != 1:
        raise NotEisensteinError(f"leading coefficient {powers[n]} is not 1 (E must be monic)")
    return EisensteinPoly(p, tuple(powers.get(i, 0) for i in range(n)))


# ------------------------------------------------------------------ the model


@dataclass(frozen=True, eq=False)
class OKElement:
    """Element of O_K/p^k in the basis 1, π, ..., π^{n-1}."""

    field: "PadicModel"
    coords: tuple[int, ...]

    def __post_init__(self):
        M = self.field
        if len(self.coords) != M.n:
            raise ValueError(f"expected {M.n} coordinates, got {len(self.coords)}")
        if any(not 0 <= c < M.q for c in self.coords):
            raise ValueError(f"coordinates must be reduced mod {M.q}")

    @property
    def k(self) -> int:
        return self.field.k

    def __add__(self, other: OKElement) -> OKElement:
        return ok_arith("add", self, other)

    def __mul__(self, other: OKElement) -> OKElement:
        return ok_arith("mul", self, other)

    def __pow__(self, e: int) -> OKElement:
        acc = self.field.one()
        for _ in range(e):
            acc = acc * self
        return acc

    def __eq__(self, other):
        return (isinstance(other, OKElement) and self.field.same_field(other.field)
                and self.coords == other.coords)

    def __hash__(self):
        return hash((self.field.E, self.field.k, self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __repr__(self):
        return f"OKElement({self.coords} mod {self.field.p}^{self.k})"


class PadicModel(FiniteStructure):
    """Bounded L_val,× structure for K = Q_p[t]/(E).

    K-sort: O_K/p^k; Γ-sort: the window [-B, B] ∪ {∞}; k-sort: F_p.
    """

    def __init__(self, E: EisensteinPoly, k: int = DEFAULT_PRECISION, window: int | None = None):
        if k < 1:
            raise ValueError("precision k must be at least 1")
        n, p = E.n, E.p
        B = n * k - 1 if window is None else window
        if B < 1:
            raise ValueError("value-group window must contain 1")
        for name, val in (("E", E), ("k", k), ("B", B), ("p", p), ("n", n), ("q", p ** k)):
            object.__setattr__(self, name, val)
        object.__setattr__(self, "red", tuple((-a) % (p ** k) for a in E.coeffs))
        ops = _ScalarOps(self)
        super().__init__(
            signature=L_VAL_X,
            domains=_Domains(self),
            constants={"zero": ops.zero, "one": ops.one, "zero_k": 0, "one_k": 1 % p,
                       "zero_G": 0, "inf": PY_INF},
            functions={"add": ops.add, "mul": ops.mul, "add_k": lambda a, b: (a + b) % p,
                       "mul_k": lambda a, b: (a * b) % p, "add_G": _g_add,
                       "v": ops.v, "res": ops.res, "s": ops.s},
            relations={"lt": lambda a, b: a < b},
            equal={"K": ops.eq},
            name=f"K=Q_{p}[t]/({E}) mod p^{k}, Γ-window {B}",
        )
        object.__setattr__(self, "ops", ops)

    def same_field(self, other: PadicModel) -> bool:
        return self.E == other.E and self.k == other.k

    # -- elements
    def element(self, coords: Sequence[int]) -> OKElement:
        cs = [int(c) % self.q for c in coords]
        return OKElement(self, tuple(cs + [0] * (self.n - len(cs))))

    def zero(self) -> OKElement:
        return self.element(())

    def one(self) -> OKElement:
        return self.element((1,))

    def pi(self) -> OKElement:
        return self.element((0, 1)) if self.n > 1 else self.element(self.red)

    def integer(self, a: int) -> OKElement:
        return self.element((a,))

    @cached_property
    def _backend(self):
        return PadicBackend(self)

    def vector_backend(self):
        return self._backend


class _Domains(dict):
    def __init__(self, M: PadicModel):
        super().__init__()
        self.M = M

    def __getitem__(self, sort):
        M = self.M
        if sort == "K":
            import itertools
            return [(0, c) for c in itertools.product(range(M.q), repeat=M.n)]
        if sort == "G":
            return list(range(-M.B, M.B + 1)) + [PY_INF]
        if sort == "k":
            return list(range(M.p))
        raise KeyError(sort)

    def __contains__(self, sort):
        return sort in ("K", "G", "k")


def make_field(p: int, E: EisensteinPoly | Sequence[int] | str | None = None,
               k: int = DEFAULT_PRECISION, window: int | None = None, n: int | None = None) -> PadicModel:
    """Build the model; ``E`` defaults to t^n - p."""
    if E is None:
        if n is None:
            raise ValueError("give E or n")
        E = EisensteinPoly.standard(p, n)
    elif isinstance(E, str):
        E = parse_eisenstein(E, p)
    elif not isinstance(E, EisensteinPoly):
        E = EisensteinPoly(p, tuple(int(a) for a in E))
    if E.p != p:
        raise NotEisensteinError(f"polynomial was checked at p={E.p}, not {p}")
    return PadicModel(E, k, window)


def ok_arith(op: str, x: OKElement, y: OKElement) -> OKElement:
    if not (isinstance(x, OKElement) and isinstance(y, OKElement)):
        raise TypeError("ok_arith expects OKElement operands")
    if not x.field.same_field(y.field):
        raise FieldMismatch("operands belong to different fields or precisions")
    M = x.field
    if op == "add":
        return OKElement(M, tuple((a + b) % M.q for a, b in zip(x.coords, y.coords)))
    if op == "mul":
        return OKElement(M, kernels.ok_mul(x.coords, y.coords, M.red, M.q))
    raise ValueError(f"unknown operation {op!r}")


def mod_p_reduce(x: OKElement) -> TruncPoly:
    """O_K/(p) ≅ F_p[t]/(t^n), π ↦ t."""
    M = x.field
    return TruncPoly(M.p, M.n, tuple(c % M.p for c in x.coords))


def _vp(c: int, p: int) -> int:
    v = 0
    while c % p == 0:
        c //= p
        v += 1
    return v


def valuation(x: OKElement) -> int:
    M = x.field
    vals = [M.n * _vp(c, M.p) + i for i, c in enumerate(x.coords) if c]
    if not vals:
        raise PrecisionExhausted(f"element is 0 modulo π^{M.n * M.k}; valuation undetermined")
    return min(vals)


def cross_section(M: PadicModel, gamma) -> OKElement:
    """s(γ) = π^γ for 0 ≤ γ < nk, and s(∞) = 0."""
    if gamma == PY_INF or gamma == INF:
        return M.zero()
    if not isinstance(gamma, int) or gamma < 0:
        raise ValueError("only γ ≥ 0 has s(γ) in O_K")
    if gamma >= M.n * M.k:
        raise PrecisionExhausted(f"π^{gamma} is 0 modulo p^{M.k}")
    return M.pi() ** gamma


def cross_section_valuation(M: PadicModel, arg):
    """Dispatch: an :class:`OKElement` gives v(x), a value-group element gives s(γ)."""
    if isinstance(arg, OKElement):
        return valuation(arg)
    return cross_section(M, arg)


# --------------------------------------------------------------- scalar semantics


def _g_add(a, b):
    return a + b  # math.inf absorbs


class _ScalarOps:
    """Pure-Python K-sort operations on pairs (shift, coords) meaning π^shift·u."""

    def __init__(self, M: PadicModel):
        self.M = M
        n = M.n
        self.zero = (0, (0,) * n)
        self.one = (0, (1 % M.q,) + (0,) * (n - 1))
        pi = (0, 1) + (0,) * (n - 2) if n > 1 else M.red
        self.pi = tuple(pi)

    def _pi_pow(self, e: int) -> tuple:
        M = self.M
        acc = self.one[1]
        for _ in range(min(e, M.n * M.k)):
            acc = kernels.ok_mul(acc, self.pi, M.red, M.q)
        return acc

    def _align(self, x, d):
        s, u = x
        return kernels.ok_mul(u, self._pi_pow(s - d), self.M.red, self.M.q)

    def add(self, x, y):
        d = min(x[0], y[0])
        a, b = self._align(x, d), self._align(y, d)
        return (d, tuple((i + j) % self.M.q for i, j in zip(a, b)))

    def mul(self, x, y):
        return (x[0] + y[0], kernels.ok_mul(x[1], y[1], self.M.red, self.M.q))

    def eq(self, x, y):
        d = min(x[0], y[0])
        return self._align(x, d) == self._align(y, d)

    def v_coords(self, u) -> int | float:
        vals = [self.M.n * _vp(c, self.M.p) + i for i, c in enumerate(u) if c]
        return min(vals) if vals else PY_INF

    def v(self, x):
        return x[0] + self.v_coords(x[1])

    def s(self, g):
        if g == PY_INF:
            return self.zero
        if g < 0:
            return (g, self.one[1])
        return (0, self._pi_pow(g))

    def res(self, x):
        M = self.M
        if self.v(x) != 0:
            return 0
        s, u = x
        if s == 0:
            return u[0] % M.p
        d = -s
        m = -(-d // M.n)
        w = kernels.ok_mul(u, self._pi_pow(M.n * m - d), M.red, M.q)
        # π^{nm}/p^m ≡ (-a_0/p)^m mod π
        eps = (-M.E.coeffs[0] // M.p) % M.p
        return (w[0] // M.p ** m) * pow(eps, -m, M.p) % M.p


# --------------------------------------------------------------- vector semantics


def ok_batch_mul(a: np.ndarray, b: np.ndarray, red: np.ndarray, q: int) -> np.ndarray:
    n = a.shape[-1]
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
    prod = np.zeros(shape + (2 * n - 1,), dtype=np.int64)
    for i in range(n):
        ai = a[..., i:i + 1]
        if ai.any():
            prod[..., i:i + n] += ai * b
    for d in range(2 * n - 2, n - 1, -1):
        c = prod[..., d] % q
        prod[..., d - n:d] += c[..., None] * red
    return prod[..., :n] % q


def _is_O_guard(phi: Formula, w: Var) -> bool:
    return (isinstance(phi, Not) and isinstance(phi.body, Rel) and phi.body.name == "lt"
            and phi.body.args == (App("v", (w,), "G"), Const("zero_G", "G")))


def _linear_parts(eq: Eq, w: Var):
    """Match ``L = R + c·w`` (either side, either order); returns (L, R, c) or None."""
    for L, rhs in ((eq.lhs, eq.rhs), (eq.rhs, eq.lhs)):
        if w in term_vars(L):
            continue
        for R, M in _split_add(rhs):
            c = _coefficient(M, w)
            if c is not None and (R is None or w not in term_vars(R)):
                return L, R, c
    return None


def _split_add(t: Term):
    yield None, t
    if isinstance(t, App) and t.fn == "add":
        a, b = t.args
        yield a, b
        yield b, a


def _coefficient(t: Term, w: Var):
    if t == w:
        return Const("one", "K")
    if isinstance(t, App) and t.fn == "mul":
        a, b = t.args
        if b == w and w not in term_vars(a):
            return a
        if a == w and w not in term_vars(b):
            return b
    return None


def match_linear(phi: Formula):
    """Recognise ∃w(w∈O ∧ L = R + c·w) and ∀w(w∈O → ¬ L = R + c·w).

    Returns (positive, L, R, c) or ``None``; ``R`` may be ``None`` (meaning 0).
    """
    if not isinstance(phi, (Exists, Forall)) or phi.var.sort != "K":
        return None
    w, body = phi.var, phi.body
    if isinstance(phi, Exists):
        parts = list(body.parts) if isinstance(body, And) else [body]
        guards = [q for q in parts if _is_O_guard(q, w)]
        core = [q for q in parts if not _is_O_guard(q, w)]
        if len(core) == 1 and isinstance(core[0], Eq) and core[0].lhs.sort == "K":
            m = _linear_parts(core[0], w)
            if m:
                return (True,) + m
        return None
    # universal dual
    if isinstance(body, Implies) and _is_O_guard(body.lhs, w):
        core = body.rhs
    elif isinstance(body, Or) and len(body.parts) == 2 and any(
            isinstance(q, Not) and _is_O_guard(q.body, w) for q in body.parts):
        core = next(q for q in body.parts if not (isinstance(q, Not) and _is_O_guard(q.body, w)))
    else:
        core = body
    if isinstance(core, Not) and isinstance(core.body, Eq) and core.body.lhs.sort == "K":
        m = _linear_parts(core.body, w)
        if m:
            return (False,) + m
    return None


class PadicBackend(Backend):
    def __init__(self, M: PadicModel, linear_rule: bool = True):
        self.M = M
        self.signature = L_VAL_X
        n, q = M.n, M.q
        self.n, self.q, self.p = n, q, M.p
        self.nk = n * M.k
        self.red = np.array(M.red, dtype=np.int64)
        self.linear_rule = linear_rule
        self.s_overflow = False
        pw = np.zeros((self.nk + 1, n), dtype=np.int64)
        pw[0, 0] = 1 % q
        pi = np.zeros(n, dtype=np.int64)
        if n > 1:
            pi[1] = 1
        else:
            pi[0] = self.red[0]
        for e in range(1, self.nk + 1):
            pw[e] = ok_batch_mul(pw[e - 1], pi, self.red, q)
        self.pipow = pw  # π^e for 0 ≤ e < nk; row nk is 0
        self.pipow[self.nk] = 0
        self._wq = q ** np.arange(n, dtype=np.int64)

    # -- sorts
    def elem_ndim(self, sort):
        return 1 if sort == "K" else 0

    def elem_size(self, sort):
        return self.n + 1 if sort == "K" else 1

    def domain(self, sort):
        M = self.M
        if sort == "K":
            total = self.q ** self.n
            codes = np.arange(total, dtype=np.int64)
            out = np.zeros((total, self.n + 1), dtype=np.int64)
            out[:, :self.n] = (codes[:, None] // self._wq[None, :]) % self.q
            return out
        if sort == "G":
            return np.array(list(range(-M.B, M.B + 1)) + [INF], dtype=np.int64)
        if sort == "k":
            return np.arange(self.p, dtype=np.int64)
        raise KeyError(sort)

    def domain_size(self, sort):
        if sort == "K":
            return self.q ** self.n
        if sort == "G":
            return 2 * self.M.B + 2
        return self.p

    # -- helpers on K arrays
    def kval(self, coords: np.ndarray, shift=0) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64)
        out = np.empty(coords.shape[:-1] + (self.n + 1,), dtype=np.int64)
        out[..., :self.n] = coords % self.q
        out[..., self.n] = shift
        return out

    def align(self, x: np.ndarray, d: np.ndarray) -> np.ndarray:
        e = np.clip(x[..., self.n] - d, 0, self.nk)
        return ok_batch_mul(x[..., :self.n], self.pipow[e], self.red, self.q)

    def v_coords(self, u: np.ndarray) -> np.ndarray:
        n, p = self.n, self.p
        vp = np.zeros(u.shape, dtype=np.int64)
        pj = p
        for _ in range(1, self.M.k):
            vp += (u % pj == 0)
            pj *= p
        val = np.where(u != 0, n * vp + np.arange(n), INF)
        return val.min(axis=-1)

    def valuation(self, x: np.ndarray) -> np.ndarray:
        vc = self.v_coords(x[..., :self.n])
        return np.where(vc >= INF, INF, vc + x[..., self.n])

    # -- symbols
    def const(self, name):
        if name == "zero":
            return self.kval(np.zeros(self.n))
        if name == "one":
            return self.kval(self.pipow[0])
        if name in ("zero_k", "zero_G"):
            return np.array(0, dtype=np.int64)
        if name == "one_k":
            return np.array(1 % self.p, dtype=np.int64)
        if name == "inf":
            return np.array(INF, dtype=np.int64)
        raise KeyError(name)

    def func(self, name, args):
        n, q, p = self.n, self.q, self.p
        if name == "add":
            a, b = args
            sa, sb = a[..., n], b[..., n]
            if not sa.any() and not sb.any():
                return self.kval(a[..., :n] + b[..., :n])
            d = np.minimum(sa, sb)
            return self.kval(self.align(a, d) + self.align(b, d), d)
        if name == "mul":
            a, b = args
            return self.kval(ok_batch_mul(a[..., :n], b[..., :n], self.red, q), a[..., n] + b[..., n])
        if name == "add_k":
            return (args[0] + args[1]) % p
        if name == "mul_k":
            return (args[0] * args[1]) % p
        if name == "add_G":
            a, b = args
            return np.where((a >= INF) | (b >= INF), INF, a + b)
        if name == "v":
            return self.valuation(args[0])
        if name == "s":
            return self.section(args[0])
        if name == "res":
            return self.residue(args[0])
        raise KeyError(name)

    def section(self, g: np.ndarray) -> np.ndarray:
        g = np.asarray(g)
        fin = g < INF
        if np.any(fin & (g >= self.nk)):
            self.s_overflow = True
        e = np.where(fin, np.clip(g, 0, self.nk), self.nk)
        coords = self.pipow[e]
        neg = g < 0
        if neg.any():
            coords = np.where(neg[..., None], self.pipow[0], coords)
        return self.kval(coords, np.where(neg, g, 0))

    def residue(self, x: np.ndarray) -> np.ndarray:
        n, p = self.n, self.p
        v = self.valuation(x)
        shift = x[..., n]
        out = np.where((v == 0) & (shift == 0), x[..., 0] % p, 0)
        todo = (v == 0) & (shift < 0)
        if todo.any():
            ops = self.M.ops
            idx = np.argwhere(todo)
            for ix in map(tuple, idx):
                val = x[ix]
                out[ix] = ops.res((int(val[n]), tuple(int(c) for c in val[:n])))
        return out

    def rel(self, name, args):
        if name == "lt":
            return args[0] < args[1]
        raise KeyError(name)

    def eq(self, sort, a, b):
        if sort != "K":
            return a == b
        n = self.n
        sa, sb = a[..., n], b[..., n]
        if not sa.any() and not sb.any():
            return a[..., :n] @ self._wq == b[..., :n] @ self._wq
        d = np.minimum(sa, sb)
        return np.all(self.align(a, d) == self.align(b, d), axis=-1)

    # -- linear witness rule
    def special_cost(self, phi):
        return 1 if self.linear_rule and match_linear(phi) else None

    def special(self, engine: VectorEvaluator, phi, env, level):
        m = match_linear(phi)
        if m is None:
            return None
        positive, L, R, c = m
        n = self.n
        Lv = engine.term(L, env)
        Rv = engine.term(R, env) if R is not None else None
        cv = engine.term(c, env)
        zero_shift = not Lv[..., n].any() and not cv[..., n].any() and (Rv is None or not Rv[..., n].any())
        closed_c = not term_vars(c)
        hit = None
        if zero_shift and closed_c:
            cflat = cv.reshape(-1, n + 1)[0]
            vc = int(self.v_coords(cflat[:n]))
            if vc < INF and vc % n == 0:
                a = vc // n
                if a >= self.M.k:
                    hit = self._congruent(Lv, Rv, self.q)
                else:
                    hit = self._congruent(Lv, Rv, p=self.p ** a)
        if hit is None:
            shifts = [Lv[..., n], cv[..., n]] + ([Rv[..., n]] if Rv is not None else [])
            d = shifts[0]
            for s in shifts[1:]:
                d = np.minimum(d, s)
            diff = self.align(Lv, d)
            if Rv is not None:
                diff = diff - self.align(Rv, d)
            vdiff = self.v_coords(diff % self.q)
            vdiff = np.where(vdiff >= INF, INF, vdiff + d)
            vc = self.valuation(cv)
            hit = vdiff >= np.minimum(vc, d + self.nk)
        return hit if positive else ~hit

    def _congruent(self, Lv, Rv, p: int) -> np.ndarray:
        """L ≡ R modulo p (an integer dividing q), coordinatewise."""
        n = self.n
        if p == 1:
            return np.ones(np.broadcast_shapes(Lv.shape[:-1], (Rv if Rv is not None else Lv).shape[:-1]), bool)
        w = p ** np.arange(n, dtype=np.int64)
        a = (Lv[..., :n] % p) @ w
        b = (Rv[..., :n] % p) @ w if Rv is not None else 0
        return a == b

    # -- conversions; scalar K values are (shift, coords)
    def to_vector(self, sort, values):
        if sort == "K":
            rows = []
            for x in values:
                if isinstance(x, OKElement):
                    rows.append(list(x.coords) + [0])
                else:
                    rows.append(list(x[1]) + [x[0]])
            return np.array(rows, dtype=np.int64).reshape(-1, self.n + 1)
        if sort == "G":
            return np.array([INF if x == PY_INF else x for x in values], dtype=np.int64)
        return np.array(values, dtype=np.int64)

    def from_vector(self, sort, arr):
        arr = np.asarray(arr)
        if sort == "K":
            return [(int(r[self.n]), tuple(int(c) for c in r[:self.n])) for r in arr.reshape(-1, self.n + 1)]
        if sort == "G":
            return [PY_INF if int(x) >= INF else int(x) for x in arr.reshape(-1)]
        return [int(x) for x in arr.reshape(-1)]


# ---------------------------------------------------------------- bounded eval

O_K_CAVEAT = ("K-quantifiers range over O_K/p^k only; verdicts are exact for sentences "
              "whose K-quantifiers are relativised to x∈O and whose witnesses lie in the windows")


@dataclass(frozen=True)
class BoundedVerdict:
    value: bool
    precision: int
    window: int
    caveat: str = O_K_CAVEAT
    warnings: tuple[str, ...] = field(default_factory=tuple)

    def __bool__(self):
        return self.value

    def report(self) -> str:
        lines = [f"verdict: {'true' if self.value else 'false'}",
                 f"precision: k={self.precision}", f"window: [-{self.window}, {self.window}] ∪ {{∞}}",
                 f"caveat: {self.caveat}"]
        lines += [f"warning: {w}" for w in self.warnings]
        return "\n".join(lines)


def bounded_eval(M: PadicModel, phi: Formula, window: int | None = None,
                 budget: int | None = None) -> BoundedVerdict:
    """Truth of ``phi`` under bounded semantics (see :class:`BoundedVerdict`)."""
    from .logic.syntax import check_formula, free_vars
    from .structures.finite import FreeVariableError
    check_formula(phi, M.signature)
    if free_vars(phi):
        raise FreeVariableError("bounded_eval needs a sentence")
    if window is not None and window != M.B:
        M = PadicModel(M.E, M.k, window)
    backend = PadicBackend(M)
    ev = VectorEvaluator(backend) if budget is None else VectorEvaluator(backend, budget=budget)
    value = ev.sentence(phi)
    notes = []
    if backend.s_overflow:
        notes.append(f"s(γ) evaluated at γ ≥ nk={M.n * M.k}, where π^γ ≡ 0 at this precision; "
                     "widen k or shrink the window")
        warnings.warn(notes[-1], RuntimeWarning, stacklevel=2)
    return BoundedVerdict(value, M.k, M.B, warnings=tuple(notes))
