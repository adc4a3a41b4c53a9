"""The two families of exact finite models: F_p[t]/(t^n) with its set P of
powers of t, and the truncated divisibility structures I_n."""

from __future__ import annotations

import math
from functools import cached_property

import numpy as np

from ..logic.signature import L_PDIV, L_TP
from .finite import INF, FiniteStructure
from .truncpoly import TruncPoly, is_power_of_t
from .vector import Backend, TableBackend


# ------------------------------------------------------------------ F_p[t]/(t^n)


def all_coeff_vectors(p: int, n: int) -> np.ndarray:
    """All p^n coefficient vectors, lexicographic with c_0 most significant."""
    codes = np.arange(p ** n, dtype=np.int64)
    weights = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (codes[:, None] // weights[None, :]) % p


def batch_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Broadcast product of coefficient arrays in F_p[t]/(t^n)."""
    n = a.shape[-1]
    shape = np.broadcast_shapes(a.shape, b.shape)
    out = np.zeros(shape, dtype=np.int64)
    for i in range(n):
        ai = a[..., i:i + 1]
        if not ai.any():
            continue
        out[..., i:] += ai * b[..., :n - i]
    return out % p


class RingBackend(Backend):
    def __init__(self, p: int, n: int):
        self.p, self.n = p, n
        self.signature = L_TP
        self._weights = p ** np.arange(n, dtype=np.int64)
        self._dom = None

    def elem_ndim(self, sort):
        return 1

    def elem_size(self, sort):
        return self.n

    def domain(self, sort):
        if self._dom is None:
            self._dom = all_coeff_vectors(self.p, self.n)
        return self._dom

    def domain_size(self, sort):
        return self.p ** self.n

    def monomial(self, k: int) -> np.ndarray:
        v = np.zeros(self.n, dtype=np.int64)
        if k < self.n:
            v[k] = 1
        return v

    def const(self, name):
        if name == "zero":
            return np.zeros(self.n, dtype=np.int64)
        if name == "one":
            return self.monomial(0)
        if name == "t":
            return self.monomial(1)
        raise KeyError(name)

    def func(self, name, args):
        a, b = args
        if name == "add":
            return (a + b) % self.p
        if name == "mul":
            return batch_mul(a, b, self.p)
        raise KeyError(name)

    def rel(self, name, args):
        if name != "P":
            raise KeyError(name)
        (a,) = args
        nz = np.count_nonzero(a, axis=-1)
        return (nz == 0) | ((nz == 1) & (a.sum(axis=-1) == 1))

    def pack(self, a: np.ndarray) -> np.ndarray:
        return a @ self._weights

    def eq(self, sort, a, b):
        return self.pack(a) == self.pack(b)

    def extension(self, rel):
        if rel != "P":
            return None
        return np.stack([self.monomial(k) for k in range(self.n + 1)])  # t^n = 0 last

    def to_vector(self, sort, values):
        return np.array([list(v.coeffs) for v in values], dtype=np.int64).reshape(-1, self.n)

    def from_vector(self, sort, arr):
        arr = np.asarray(arr).reshape(-1, self.n)
        return [TruncPoly(self.p, self.n, tuple(int(c) for c in row)) for row in arr]


class TruncPolyRingModel(FiniteStructure):
    """F_p[t]/(t^n) as an L_t∪P-structure; ``P`` is {0, 1, t, ..., t^{n-1}}."""

    def __init__(self, p: int, n: int):
        if p < 2 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
            raise ValueError(f"p={p} is not prime")
        if n < 1:
            raise ValueError("n must be at least 1")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "n", n)
        super().__init__(
            signature=L_TP,
            domains=_LazyDomains(lambda: {"R": [TruncPoly(p, n, tuple(int(c) for c in row))
                                                for row in all_coeff_vectors(p, n)]}),
            constants={"zero": TruncPoly.zero(p, n), "one": TruncPoly.one(p, n),
                       "t": TruncPoly.t(p, n)},
            functions={"add": lambda a, b: a + b, "mul": lambda a, b: a * b},
            relations={"P": is_power_of_t},
            name=f"F_{p}[t]/(t^{n})",
        )

    def power_set(self) -> list[TruncPoly]:
        """The interpretation of P: [1, t, ..., t^{n-1}, 0]."""
        return [TruncPoly.monomial(self.p, self.n, k) for k in range(self.n + 1)]

    @cached_property
    def _backend(self):
        return RingBackend(self.p, self.n)

    def vector_backend(self):
        return self._backend

    def element(self, coeffs) -> TruncPoly:
        return TruncPoly.from_coeffs(self.p, self.n, coeffs)


class _LazyDomains(dict):
    """Mapping that materialises its contents on first access."""

    def __init__(self, build):
        super().__init__()
        self._build = build
        self._done = False

    def _force(self):
        if not self._done:
            self._done = True
            self.update(self._build())

    def __getitem__(self, key):
        self._force()
        return super().__getitem__(key)

    def __contains__(self, key):
        self._force()
        return super().__contains__(key)

    def get(self, key, default=None):
        self._force()
        return super().get(key, default)


# ----------------------------------------------------------------------- I_n


def _check_I(n: int, x) -> None:
    if not (x == INF or (isinstance(x, int) and 0 <= x < n)):
        raise ValueError(f"{x!r} is not an element of I_{n}")


def i_oplus(n: int, x, y):
    """Truncated addition on {0, ..., n-1, ∞}."""
    _check_I(n, x)
    _check_I(n, y)
    if x == INF or y == INF:
        return INF
    return x + y if x + y < n else INF


def _is_p_power(q: int, p: int) -> bool:
    while q % p == 0:
        q //= p
    return q == 1


def divides_p(x: int, y: int, p: int) -> bool:
    """x |_p y in ℕ: y = p^s·x for some s ≥ 0 (so 0 |_p 0 holds)."""
    if x == 0:
        return y == 0
    return y % x == 0 and y > 0 and _is_p_power(y // x, p)


def i_divp(n: int, p: int, x, y) -> bool:
    """Bounded p-divisibility of I_n: y = p^s·x with 1 ≤ x and 3x, 3y < n."""
    _check_I(n, x)
    _check_I(n, y)
    if x == INF or y == INF:
        return False
    return x >= 1 and 3 * x < n and 3 * y < n and divides_p(x, y, p)


class IModel(FiniteStructure):
    """I_n over L_{p-div}∪{∞}: elements 0..n-1 and ∞ (``math.inf``)."""

    def __init__(self, n: int, p: int):
        if n < 1:
            raise ValueError("n must be at least 1")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "p", p)
        super().__init__(
            signature=L_PDIV,
            domains={"D": list(range(n)) + [INF]},
            constants={"zero": 0, "one": 1 if n > 1 else INF, "inf": INF},
            functions={"add": lambda x, y: i_oplus(n, x, y)},
            relations={"divp": lambda x, y: i_divp(n, p, x, y)},
            name=f"I_{n} (p={p})",
        )

    @cached_property
    def _backend(self):
        return TableBackend(self)

    def vector_backend(self):
        return self._backend


def power_to_index(x: TruncPoly):
    """t^k ↦ k and 0 ↦ ∞ on P (the t-adic valuation)."""
    if not is_power_of_t(x):
        raise ValueError(f"{x} is not a power of t")
    return x.valuation()
