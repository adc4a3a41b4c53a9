"""Elements of the truncated polynomial ring F_p[t]/(t^N)."""

from __future__ import annotations

from dataclasses import dataclass

from .. import kernels


class ModulusMismatch(ValueError):
    pass


@dataclass(frozen=True)
class TruncPoly:
    """Coefficient vector of a class in F_p[t]/(t^N); ``coeffs[i]`` multiplies t^i."""

    p: int
    N: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("truncation order N must be at least 1")
        if len(self.coeffs) != self.N:
            raise ValueError(f"expected {self.N} coefficients, got {len(self.coeffs)}")
        if any(not 0 <= c < self.p for c in self.coeffs):
            raise ValueError(f"coefficients must lie in [0, {self.p})")

    # -- construction
    @classmethod
    def from_coeffs(cls, p: int, N: int, coeffs) -> TruncPoly:
        cs = [int(c) % p for c in list(coeffs)[:N]]
        return cls(p, N, tuple(cs + [0] * (N - len(cs))))

    @classmethod
    def zero(cls, p: int, N: int) -> TruncPoly:
        return cls(p, N, (0,) * N)

    @classmethod
    def one(cls, p: int, N: int) -> TruncPoly:
        return cls.monomial(p, N, 0)

    @classmethod
    def monomial(cls, p: int, N: int, k: int, c: int = 1) -> TruncPoly:
        """c·t^k, which is 0 once k ≥ N."""
        cs = [0] * N
        if k < N:
            cs[k] = c % p
        return cls(p, N, tuple(cs))

    @classmethod
    def t(cls, p: int, N: int) -> TruncPoly:
        return cls.monomial(p, N, 1)

    # -- arithmetic
    def _check(self, other: TruncPoly):
        if not isinstance(other, TruncPoly):
            raise TypeError(f"expected TruncPoly, got {type(other).__name__}")
        if (self.p, self.N) != (other.p, other.N):
            raise ModulusMismatch(f"F_{self.p}[t]/(t^{self.N}) vs F_{other.p}[t]/(t^{other.N})")

    def __add__(self, other: TruncPoly) -> TruncPoly:
        self._check(other)
        return TruncPoly(self.p, self.N, kernels.tp_add(self.coeffs, other.coeffs, self.p))

    def __sub__(self, other: TruncPoly) -> TruncPoly:
        self._check(other)
        return TruncPoly(self.p, self.N, kernels.tp_sub(self.coeffs, other.coeffs, self.p))

    def __neg__(self) -> TruncPoly:
        return TruncPoly(self.p, self.N, tuple((-c) % self.p for c in self.coeffs))

    def __mul__(self, other: TruncPoly) -> TruncPoly:
        self._check(other)
        return TruncPoly(self.p, self.N, kernels.tp_mul(self.coeffs, other.coeffs, self.p))

    def __pow__(self, e: int) -> TruncPoly:
        if e < 0:
            raise ValueError("negative exponent; use inverse()")
        return TruncPoly(self.p, self.N, kernels.tp_pow(self.coeffs, e, self.p))

    def scale(self, c: int) -> TruncPoly:
        return TruncPoly(self.p, self.N, tuple((c * x) % self.p for x in self.coeffs))

    def shift(self, k: int) -> TruncPoly:
        """Multiplication by t^k."""
        return TruncPoly.from_coeffs(self.p, self.N, (0,) * k + self.coeffs[: max(0, self.N - k)])

    # -- queries
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_unit(self) -> bool:
        return self.coeffs[0] != 0

    def valuation(self) -> int | float:
        """t-adic valuation; ``math.inf`` for 0."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return float("inf")

    def inverse(self) -> TruncPoly:
        """Inverse of a unit by the truncated geometric series u^{-1} = c^{-1} Σ (1 - c^{-1}u)^k."""
        if not self.is_unit():
            raise ZeroDivisionError("only units (nonzero constant term) are invertible")
        c_inv = pow(self.coeffs[0], -1, self.p)
        w = TruncPoly.one(self.p, self.N) - self.scale(c_inv)  # valuation ≥ 1, nilpotent
        acc = TruncPoly.one(self.p, self.N)
        term = TruncPoly.one(self.p, self.N)
        for _ in range(self.N - 1):
            term = term * w
            if term.is_zero():
                break
            acc = acc + term
        return acc.scale(c_inv)

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "1" if i == 0 else ("t" if i == 1 else f"t^{i}")
            parts.append(mono if c == 1 else (f"{c}" if i == 0 else f"{c}{mono}"))
        return " + ".join(parts) if parts else "0"


def is_power_of_t(x: TruncPoly) -> bool:
    """Membership of ``x`` in {0, 1, t, ..., t^{N-1}}."""
    nz = [i for i, c in enumerate(x.coeffs) if c]
    return not nz or (len(nz) == 1 and x.coeffs[nz[0]] == 1)


def poly_arith(op: str, a: TruncPoly, b) -> TruncPoly:
    """Dispatcher: ``op`` in {add, sub, mul, pow}; for ``pow`` ``b`` is the exponent."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        return a ** int(b)
    raise ValueError(f"unknown operation {op!r}")
