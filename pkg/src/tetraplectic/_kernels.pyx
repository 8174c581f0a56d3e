# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.  Mirrors ``_kernels_py`` exactly."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

NAME = "cython"


cdef inline void _hmul(double a0, double a1, double a2, double a3,
                       double b0, double b1, double b2, double b3,
                       double* out) noexcept nogil:
    out[0] = a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3
    out[1] = a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2
    out[2] = a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1
    out[3] = a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0


def qmatmul(a, b):
    cdef const double[:, :, ::1] A = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[:, :, ::1] B = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t n = A.shape[0], kk = A.shape[1], m = B.shape[1]
    if B.shape[0] != kk:
        raise ValueError("inner dimensions do not agree")
    out = np.zeros((n, m, 4))
    cdef double[:, :, ::1] C = out
    cdef Py_ssize_t i, j, t
    cdef double p[4]
    with nogil:
        for i in range(n):
            for t in range(kk):
                for j in range(m):
                    _hmul(A[i, t, 0], A[i, t, 1], A[i, t, 2], A[i, t, 3],
                          B[t, j, 0], B[t, j, 1], B[t, j, 2], B[t, j, 3], p)
                    C[i, j, 0] += p[0]
                    C[i, j, 1] += p[1]
                    C[i, j, 2] += p[2]
                    C[i, j, 3] += p[3]
    return out


def dieudonne_det(a, double abs_tol):
    m_arr = np.array(a, dtype=np.float64, order="C", copy=True)
    cdef double[:, :, ::1] M = m_arr
    cdef Py_ssize_t n = M.shape[0]
    cdef Py_ssize_t k, r, c, p, q
    cdef double best, mag, det = 1.0, n2, tmp
    cdef double inv[4]
    cdef double mult[4]
    cdef double prod[4]
    with nogil:
        for k in range(n):
            p = k
            best = -1.0
            for r in range(k, n):
                mag = sqrt(M[r, k, 0] * M[r, k, 0] + M[r, k, 1] * M[r, k, 1]
                           + M[r, k, 2] * M[r, k, 2] + M[r, k, 3] * M[r, k, 3])
                if mag > best:
                    best = mag
                    p = r
            if best < abs_tol:
                det = 0.0
                break
            if p != k:
                for c in range(n):
                    for q in range(4):
                        tmp = M[k, c, q]
                        M[k, c, q] = M[p, c, q]
                        M[p, c, q] = tmp
            det *= best
            n2 = best * best
            inv[0] = M[k, k, 0] / n2
            inv[1] = -M[k, k, 1] / n2
            inv[2] = -M[k, k, 2] / n2
            inv[3] = -M[k, k, 3] / n2
            for r in range(k + 1, n):
                _hmul(M[r, k, 0], M[r, k, 1], M[r, k, 2], M[r, k, 3],
                      inv[0], inv[1], inv[2], inv[3], mult)
                for c in range(k, n):
                    _hmul(mult[0], mult[1], mult[2], mult[3],
                          M[k, c, 0], M[k, c, 1], M[k, c, 2], M[k, c, 3], prod)
                    M[r, c, 0] -= prod[0]
                    M[r, c, 1] -= prod[1]
                    M[r, c, 2] -= prod[2]
                    M[r, c, 3] -= prod[3]
    return det


cdef inline long _rank(long* s, int k, int dim, long[:, ::1] binom) noexcept nogil:
    cdef long r = binom[dim, k] - 1
    cdef int t
    for t in range(k):
        r -= binom[dim - 1 - s[t], k - t]
    return r


def ce_differential(int dim, int degree, coeffs, bracket):
    cdef int k = degree
    if k + 1 > 64:
        raise ValueError("degree too large for the compiled CE kernel")
    cdef const double[::1] phi = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef const double[:, :, ::1] C = np.ascontiguousarray(bracket, dtype=np.float64)
    binom_arr = np.zeros((dim + 2, k + 2), dtype=np.int64)
    cdef long[:, ::1] binom = binom_arr
    cdef int a, b
    for a in range(dim + 2):
        binom[a, 0] = 1
        for b in range(1, min(a, k + 1) + 1):
            binom[a, b] = binom[a - 1, b - 1] + (binom[a - 1, b] if b <= a - 1 else 0)
    cdef long n_out = binom[dim, k + 1] if k + 1 <= dim else 0
    out = np.zeros(n_out)
    if n_out == 0 or k == 0:
        return out
    cdef double[::1] res = out
    cdef long s[64]
    cdef long rest[64]
    cdef long merged[64]
    cdef int i, j, t, u, nr, ell, below, pos
    cdef long idx
    cdef bint clash
    cdef double cval, acc, sign, scale = 1.0 / (k + 1)
    for t in range(k + 1):
        s[t] = t
    with nogil:
        for idx in range(n_out):
            acc = 0.0
            for i in range(k + 1):
                for j in range(i + 1, k + 1):
                    sign = 1.0 if (i + j) % 2 else -1.0
                    nr = 0
                    for t in range(k + 1):
                        if t != i and t != j:
                            rest[nr] = s[t]
                            nr += 1
                    for ell in range(dim):
                        cval = C[s[i], s[j], ell]
                        if cval == 0.0:
                            continue
                        clash = False
                        below = 0
                        for t in range(nr):
                            if rest[t] == ell:
                                clash = True
                                break
                            if rest[t] < ell:
                                below += 1
                        if clash:
                            continue
                        pos = 0
                        for t in range(below):
                            merged[pos] = rest[t]
                            pos += 1
                        merged[pos] = ell
                        pos += 1
                        for t in range(below, nr):
                            merged[pos] = rest[t]
                            pos += 1
                        if below % 2:
                            acc -= sign * cval * phi[_rank(merged, k, dim, binom)]
                        else:
                            acc += sign * cval * phi[_rank(merged, k, dim, binom)]
            res[idx] = acc * scale
            # next subset in lex order
            t = k
            while t >= 0 and s[t] == dim - (k + 1) + t:
                t -= 1
            if t < 0:
                break
            s[t] += 1
            for u in range(t + 1, k + 1):
                s[u] = s[u - 1] + 1
    return out
