# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_pykernels`` for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, fmod, sin, asin, sqrt, M_PI

cnp.import_array()

cdef double TWO_PI = 2.0 * M_PI


cdef inline double _circle(double t) nogil:
    t = fmod(t, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    if t >= TWO_PI:
        t = 0.0
    return t


cdef inline double _step(long op, double p, double x) nogil:
    cdef double s
    if op == 0:
        return x
    elif op == 1:
        return p * x * (1.0 - x)
    elif op == 2:
        if x <= 0.5:
            return 2.0 * x
        return 2.0 - 2.0 * x
    elif op == 3:
        return p
    elif op == 4:
        return _circle(p * x)
    elif op == 5:
        return _circle(x + p)
    elif op == 6:
        s = sin(0.5 * M_PI * x)
        return s * s
    elif op == 7:
        if x < 0.0:
            x = 0.0
        elif x > 1.0:
            x = 1.0
        return (2.0 / M_PI) * asin(sqrt(x))
    else:
        # angle lift: no reduction, callers reduce the reported rows
        return p * x


def iterate(const cnp.int64_t[:] ops, const double[:] params, const cnp.uint8_t[:] ends, const double[:] x0):
    cdef Py_ssize_t T = ops.shape[0], K = x0.shape[0]
    cdef Py_ssize_t nsteps = 0, i, k, row
    for i in range(T):
        if ends[i]:
            nsteps += 1
    out_arr = np.empty((nsteps + 1, K), dtype=np.float64)
    cdef double[:, :] out = out_arr
    cdef double x
    with nogil:
        for k in range(K):
            x = x0[k]
            out[0, k] = x
            row = 1
            for i in range(T):
                x = _step(ops[i], params[i], x)
                if ends[i]:
                    out[row, k] = x
                    row += 1
    return out_arr


def ball_hit_index(const double[:, :] traj, const cnp.int64_t[:] group, Py_ssize_t n_groups,
                   const double[:] centers, const double[:] radii, bint circle):
    cdef Py_ssize_t steps = traj.shape[0], K = traj.shape[1], V = centers.shape[0]
    out_arr = np.full((n_groups, V, steps), -1, dtype=np.int64)
    cdef cnp.int64_t[:, :, :] out = out_arr
    cdef Py_ssize_t n, k, v, g
    cdef double d
    with nogil:
        for n in range(steps):
            for k in range(K):
                g = group[k]
                for v in range(V):
                    if out[g, v, n] >= 0:
                        continue
                    d = fabs(traj[n, k] - centers[v])
                    if circle and TWO_PI - d < d:
                        d = TWO_PI - d
                    if d < radii[v]:
                        out[g, v, n] = k
    return out_arr


def track_pairs(const cnp.uint64_t[:] keys_u, const cnp.uint64_t[:] keys_v, int n,
                cnp.int32_t[:, :] first_hit, cnp.int32_t[:, :] last_miss):
    cdef Py_ssize_t U = keys_u.shape[0], V = keys_v.shape[0], i, j
    cdef cnp.uint64_t ku
    with nogil:
        for i in range(U):
            ku = keys_u[i]
            for j in range(V):
                if ku == keys_v[j]:
                    if first_hit[i, j] == 0:
                        first_hit[i, j] = n
                else:
                    last_miss[i, j] = n


def pairwise_distance(const double[:] a, const double[:] b, bint circle):
    cdef Py_ssize_t K = a.shape[0], M = b.shape[0], i, j
    out_arr = np.empty((K, M), dtype=np.float64)
    cdef double[:, :] out = out_arr
    cdef double d
    with nogil:
        for i in range(K):
            for j in range(M):
                d = fabs(a[i] - b[j])
                if circle and TWO_PI - d < d:
                    d = TWO_PI - d
                out[i, j] = d
    return out_arr
