"""Reference implementations of the hot kernels (no compiled code required).

The compiled module ``padicred._kernels`` mirrors these signatures exactly;
:mod:`padicred.kernels` selects one of the two at import time.
"""

from __future__ import annotations

import numpy as np


def tp_add(a: tuple, b: tuple, p: int) -> tuple:
    return tuple((x + y) % p for x, y in zip(a, b))


def tp_sub(a: tuple, b: tuple, p: int) -> tuple:
    return tuple((x - y) % p for x, y in zip(a, b))


def tp_mul(a: tuple, b: tuple, p: int) -> tuple:
    """Product in F_p[t]/(t^N), N = len(a)."""
    n = len(a)
    out = [0] * n
    for i, x in enumerate(a):
        if x:
            for j in range(n - i):
                y = b[j]
                if y:
                    out[i + j] += x * y
    return tuple(c % p for c in out)


def tp_pow(a: tuple, e: int, p: int) -> tuple:
    n = len(a)
    result = (1,) + (0,) * (n - 1) if n else ()
    base = a
    while e:
        if e & 1:
            result = tp_mul(result, base, p)
        e >>= 1
        if e:
            base = tp_mul(base, base, p)
    return result


def ok_mul(a: tuple, b: tuple, red: tuple, q: int) -> tuple:
    """Product in Z[π]/(q, E(π)) where π^n = Σ red[i]·π^i."""
    n = len(a)
    prod = [0] * (2 * n - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for d in range(2 * n - 2, n - 1, -1):
        c = prod[d] % q
        if c:
            base = d - n
            for i in range(n):
                prod[base + i] += c * red[i]
    return tuple(c % q for c in prod[:n])


def _batch_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[-1]
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
    for i in range(n):
        out[..., i:] += a[..., i:i + 1] * b[..., :n - i]
    return out % p


def _batch_pow(a: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.zeros_like(a)
    result[..., 0] = 1
    base = a
    while e:
        if e & 1:
            result = _batch_mul(result, base, p)
        e >>= 1
        if e:
            base = _batch_mul(base, base, p)
    return result


def bf_divp(p: int, N: int, n: int, m: int, chunk: int = 1 << 15):
    """First α (lexicographic, constant coefficient most significant) with
    α^p(t^n − t^m) = t^{n+m}(1 − α^{p−1}) and α^{3p} ≠ 0 in F_p[t]/(t^N)."""
    total = p ** N
    weights = p ** np.arange(N - 1, -1, -1, dtype=np.int64)
    for lo in range(0, total, chunk):
        codes = np.arange(lo, min(total, lo + chunk), dtype=np.int64)
        alpha = (codes[:, None] // weights[None, :]) % p
        ap1 = _batch_pow(alpha, p - 1, p)
        ap = _batch_mul(ap1, alpha, p)
        a3p = _batch_pow(ap, 3, p)
        lhs = np.zeros_like(alpha)
        if n < N:
            lhs[:, n:] += ap[:, :N - n]
        if m < N:
            lhs[:, m:] -= ap[:, :N - m]
        rhs = np.zeros_like(alpha)
        k = n + m
        if k < N:
            rhs[:, k] = 1
            rhs[:, k:] -= ap1[:, :N - k]
        ok = np.all((lhs - rhs) % p == 0, axis=1) & np.any(a3p != 0, axis=1)
        hit = np.flatnonzero(ok)
        if hit.size:
            return tuple(int(c) for c in alpha[hit[0]])
    return None
