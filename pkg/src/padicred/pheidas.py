"""Truncated p-divisibility: for 0 < n ≤ m with 3m < N,

    n |_p m  ⟺  ∃α ∈ F_p[t]/(t^N):  α^p (t^n − t^m) = t^n t^m (1 − α^{p−1})  and  α^{3p} ≠ 0.

This module builds the witness explicitly, checks the identity, and decides
witness existence independently by exhaustive search.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kernels
from .structures.finite import DEFAULT_BUDGET, BudgetExceeded
from .structures.models import divides_p
from .structures.truncpoly import TruncPoly


class NotDivisible(ValueError):
    pass


@dataclass(frozen=True)
class DivisibilityInstance:
    p: int
    N: int
    n: int
    m: int

    def __post_init__(self):
        if not 0 < self.n <= self.m:
            raise ValueError(f"need 0 < n ≤ m, got n={self.n}, m={self.m}")
        if not 3 * self.m < self.N:
            raise ValueError(f"need 3m < N, got m={self.m}, N={self.N}")

    @property
    def divisible(self) -> bool:
        return divides_p(self.n, self.m, self.p)

    @property
    def s(self) -> int | None:
        """The exponent with m = p^s·n, or ``None``."""
        if not self.divisible:
            return None
        s, q = 0, self.m // self.n
        while q > 1:
            q //= self.p
            s += 1
        return s


def witness_alpha(inst: DivisibilityInstance) -> TruncPoly:
    """α = t^{n p^{s−1}} · (1 + Σ_{j=0}^{s−2} t^{n(p^{s−1} − p^j)})^{−1}; α = 1 when s = 0."""
    s = inst.s
    if s is None:
        raise NotDivisible(f"{inst.n} does not p-divide {inst.m} for p={inst.p}")
    p, N, n = inst.p, inst.N, inst.n
    if s == 0:
        return TruncPoly.one(p, N)
    top = n * p ** (s - 1)
    u = TruncPoly.one(p, N)
    for j in range(s - 1):
        u = u + TruncPoly.monomial(p, N, top - n * p ** j)
    return TruncPoly.monomial(p, N, top) * u.inverse()


def check_identity(inst: DivisibilityInstance, alpha: TruncPoly) -> bool:
    p, N, n, m = inst.p, inst.N, inst.n, inst.m
    if (alpha.p, alpha.N) != (p, N):
        raise ValueError("α lives in a different ring")
    ap1 = alpha ** (p - 1)
    ap = ap1 * alpha
    lhs = ap * (TruncPoly.monomial(p, N, n) - TruncPoly.monomial(p, N, m))
    rhs = TruncPoly.monomial(p, N, n + m) * (TruncPoly.one(p, N) - ap1)
    return lhs == rhs and not (ap ** 3).is_zero()


def brute_force_divp(inst: DivisibilityInstance, budget: int = DEFAULT_BUDGET) -> TruncPoly | None:
    """Lexicographically first α (constant coefficient most significant)
    satisfying the identity, or ``None`` after exhausting all p^N elements."""
    need = inst.p ** inst.N
    if need > budget:
        raise BudgetExceeded(need, budget, f"search over F_{inst.p}[t]/(t^{inst.N})")
    hit = kernels.bf_divp(inst.p, inst.N, inst.n, inst.m)
    return None if hit is None else TruncPoly(inst.p, inst.N, tuple(hit))


@dataclass(frozen=True)
class LemmaRow:
    n: int
    m: int
    divides: bool
    witness_exists: bool
    witness: TruncPoly | None

    @property
    def agrees(self) -> bool:
        return self.divides == self.witness_exists


def admissible_pairs(N: int) -> list[tuple[int, int]]:
    return [(n, m) for m in range(1, N) if 3 * m < N for n in range(1, m + 1)]


def lemma_table(p: int, N: int, budget: int = DEFAULT_BUDGET) -> list[LemmaRow]:
    if p ** N > budget:
        raise BudgetExceeded(p ** N, budget, f"search over F_{p}[t]/(t^{N})")
    rows = []
    for n, m in sorted(admissible_pairs(N)):
        inst = DivisibilityInstance(p, N, n, m)
        a = brute_force_divp(inst, budget)
        rows.append(LemmaRow(n, m, inst.divisible, a is not None, a))
    return rows


def format_table(rows: list[LemmaRow]) -> str:
    out = [f"{'n':>3} {'m':>3} {'n|_p m':>7} {'witness':>8} {'agree':>6}  first witness"]
    for r in rows:
        out.append(f"{r.n:>3} {r.m:>3} {str(r.divides):>7} {str(r.witness_exists):>8} "
                   f"{str(r.agrees):>6}  {r.witness if r.witness is not None else '-'}")
    return "\n".join(out)
