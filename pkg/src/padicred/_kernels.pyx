# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; see ``_kernels_py`` for the reference."""

from libc.stdlib cimport malloc, free
from libc.string cimport memset


def tp_add(tuple a, tuple b, long p):
    cdef Py_ssize_t i, n = len(a)
    return tuple([(<long>a[i] + <long>b[i]) % p for i in range(n)])


def tp_sub(tuple a, tuple b, long p):
    cdef Py_ssize_t i, n = len(a)
    return tuple([((<long>a[i] - <long>b[i]) % p + p) % p for i in range(n)])


cdef void _mul(long *a, long *b, long *out, int n, long p) noexcept nogil:
    cdef int i, j
    cdef long x
    memset(out, 0, n * sizeof(long))
    for i in range(n):
        x = a[i]
        if x:
            for j in range(n - i):
                out[i + j] += x * b[j]
    for i in range(n):
        out[i] %= p


cdef void _pow(long *a, int e, long *out, long *tmp, long *base, int n, long p) noexcept nogil:
    cdef int i
    memset(out, 0, n * sizeof(long))
    out[0] = 1
    for i in range(n):
        base[i] = a[i]
    while e:
        if e & 1:
            _mul(out, base, tmp, n, p)
            for i in range(n):
                out[i] = tmp[i]
        e >>= 1
        if e:
            _mul(base, base, tmp, n, p)
            for i in range(n):
                base[i] = tmp[i]


def tp_mul(tuple a, tuple b, long p):
    cdef int n = len(a), i
    cdef long *buf = <long *> malloc(3 * n * sizeof(long) + 1)
    try:
        for i in range(n):
            buf[i] = a[i]
            buf[n + i] = b[i]
        _mul(buf, buf + n, buf + 2 * n, n, p)
        return tuple([buf[2 * n + i] for i in range(n)])
    finally:
        free(buf)


def tp_pow(tuple a, long e, long p):
    cdef int n = len(a), i
    cdef long *buf = <long *> malloc(4 * n * sizeof(long) + 1)
    try:
        for i in range(n):
            buf[i] = a[i]
        _pow(buf, e, buf + n, buf + 2 * n, buf + 3 * n, n, p)
        return tuple([buf[n + i] for i in range(n)])
    finally:
        free(buf)


def ok_mul(tuple a, tuple b, tuple red, long long q):
    cdef int n = len(a), i, j, d, base
    cdef long long c
    cdef long long *prod = <long long *> malloc((2 * n) * sizeof(long long))
    cdef long long *r = <long long *> malloc((n + 1) * sizeof(long long))
    try:
        memset(prod, 0, 2 * n * sizeof(long long))
        for i in range(n):
            r[i] = (<long long>red[i]) % q
        for i in range(n):
            c = (<long long>a[i]) % q
            if c:
                for j in range(n):
                    prod[i + j] = (prod[i + j] + c * ((<long long>b[j]) % q)) % q
        for d in range(2 * n - 2, n - 1, -1):
            c = prod[d] % q
            if c:
                base = d - n
                for i in range(n):
                    prod[base + i] = (prod[base + i] + c * r[i]) % q
        return tuple([int(((prod[i] % q) + q) % q) for i in range(n)])
    finally:
        free(prod)
        free(r)


def bf_divp(long p, int N, int n, int m, long chunk=0):
    """First α in lexicographic order satisfying the truncated Lemma identity, or None."""
    cdef long *alpha = <long *> malloc(7 * N * sizeof(long) + 1)
    cdef long *ap1 = alpha + N
    cdef long *ap = alpha + 2 * N
    cdef long *a3p = alpha + 3 * N
    cdef long *tmp = alpha + 4 * N
    cdef long *base = alpha + 5 * N
    cdef long *diff = alpha + 6 * N
    cdef int i, k = n + m
    cdef bint ok, nonzero
    try:
        memset(alpha, 0, N * sizeof(long))
        while True:
            with nogil:
                _pow(alpha, p - 1, ap1, tmp, base, N, p)
                _mul(ap1, alpha, ap, N, p)
                _pow(ap, 3, a3p, tmp, base, N, p)
                nonzero = False
                for i in range(N):
                    if a3p[i]:
                        nonzero = True
                        break
                ok = nonzero
                if ok:
                    for i in range(N):
                        diff[i] = 0
                        if i >= n:
                            diff[i] += ap[i - n]
                        if i >= m:
                            diff[i] -= ap[i - m]
                        if i == k:
                            diff[i] -= 1
                        if i >= k:
                            diff[i] += ap1[i - k]
                        if diff[i] % p:
                            ok = False
                            break
            if ok:
                return tuple([alpha[i] for i in range(N)])
            # odometer step: last coefficient varies fastest
            i = N - 1
            while i >= 0:
                alpha[i] += 1
                if alpha[i] < p:
                    break
                alpha[i] = 0
                i -= 1
            if i < 0:
                return None
    finally:
        free(alpha)
