# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend: counter RNG plus the three hot loops.

Must stay draw-for-draw identical to ``kernels.pure`` -- the equivalence is
asserted by tests/test_kernels.py.
"""

from libc.math cimport exp, fabs, floor, lgamma, log, sqrt
from libc.stdint cimport int32_t, int64_t, uint8_t, uint64_t
from libc.stdlib cimport free, malloc

import numpy as np

DEF GOLDEN = 0x9E3779B97F4A7C15
DEF STREAM_SALT = 0xD1B54A32D192ED03


cdef inline uint64_t mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline uint64_t stream_seed_c(uint64_t master, uint64_t sid) nogil:
    return mix64(master + (sid + 1) * <uint64_t>STREAM_SALT)


cdef inline uint64_t raw64(uint64_t seed, uint64_t i) nogil:
    return mix64(seed + (i + 1) * <uint64_t>GOLDEN)


cdef inline double u01(uint64_t seed, uint64_t i) nogil:
    return (raw64(seed, i) >> 11) * (1.0 / 9007199254740992.0)


cdef int64_t poisson_count(uint64_t seed, uint64_t i0, double mean,
                           uint64_t *consumed) nogil:
    """Poisson draw matching rng.poisson_draw: inversion below 10, PTRS above."""
    cdef uint64_t i = i0
    cdef double enlam, prod, slam, loglam, a, b, invalpha, vr, u, v, us
    cdef int64_t k
    if mean <= 0.0:
        consumed[0] = 0
        return 0
    if mean < 10.0:
        enlam = exp(-mean)
        k = 0
        prod = 1.0
        while True:
            prod *= u01(seed, i)
            i += 1
            if prod > enlam:
                k += 1
            else:
                consumed[0] = i - i0
                return k
    slam = sqrt(mean)
    loglam = log(mean)
    b = 0.931 + 2.53 * slam
    a = -0.059 + 0.02483 * b
    invalpha = 1.1239 + 1.1328 / (b - 3.4)
    vr = 0.9277 - 3.6224 / (b - 2.0)
    while True:
        u = u01(seed, i) - 0.5
        v = u01(seed, i + 1)
        i += 2
        us = 0.5 - fabs(u)
        k = <int64_t>floor((2.0 * a / us + b) * u + mean + 0.43)
        if us >= 0.07 and v <= vr:
            consumed[0] = i - i0
            return k
        if k < 0 or (us < 0.013 and v > us):
            continue
        if (log(v) + log(invalpha) - log(a / (us * us) + b)
                <= -mean + k * loglam - lgamma(k + 1.0)):
            consumed[0] = i - i0
            return k


cdef inline Py_ssize_t upper_bound(const double[::1] arr, double x) nogil:
    """First index with arr[i] > x (numpy searchsorted side='right')."""
    cdef Py_ssize_t lo = 0, hi = arr.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    return lo


def contact_final_masks(cum_prob, chan_src, chan_dst, double total_rate, eta0,
                        double t, Py_ssize_t reps, master, sid0, targets):
    cdef double[::1] cum = np.ascontiguousarray(cum_prob, dtype=np.float64)
    cdef int32_t[::1] src = np.ascontiguousarray(chan_src, dtype=np.int32)
    cdef int32_t[::1] dst = np.ascontiguousarray(chan_dst, dtype=np.int32)
    cdef uint8_t[::1] eta = np.ascontiguousarray(eta0, dtype=np.uint8)
    cdef int32_t[::1] tgt = np.ascontiguousarray(targets, dtype=np.int32)
    cdef uint64_t mseed = <uint64_t>(int(master) & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t base = <uint64_t>(int(sid0) & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t n_sites = eta.shape[0], n_targets = tgt.shape[0]
    cdef double mean = total_rate * t
    out_arr = np.zeros(reps, dtype=np.uint64)
    cdef uint64_t[::1] out = out_arr
    cdef uint8_t *state = <uint8_t *>malloc(n_sites)
    if state == NULL:
        raise MemoryError
    cdef Py_ssize_t j, k, c, b
    cdef int64_t n_events
    cdef uint64_t seed, i, used, mask
    cdef int s, d
    try:
        with nogil:
            for j in range(reps):
                seed = stream_seed_c(mseed, base + <uint64_t>j)
                n_events = poisson_count(seed, 0, mean, &used)
                i = used
                for k in range(n_sites):
                    state[k] = eta[k]
                for k in range(n_events):
                    c = upper_bound(cum, u01(seed, i))
                    i += 1
                    s = src[c]
                    d = dst[c]
                    if d == s:
                        state[s] = 0
                    elif state[s]:
                        state[d] = 1
                mask = 0
                for b in range(n_targets):
                    if state[tgt[b]]:
                        mask |= (<uint64_t>1) << b
                out[j] = mask
    finally:
        free(state)
    return out_arr


def sample_reach_masks(adj_start, adj_edge, adj_head, edge_p, sources,
                       targets, Py_ssize_t reps, master, sid0):
    cdef int64_t[::1] astart = np.ascontiguousarray(adj_start, dtype=np.int64)
    cdef int32_t[::1] aedge = np.ascontiguousarray(adj_edge, dtype=np.int32)
    cdef int32_t[::1] ahead = np.ascontiguousarray(adj_head, dtype=np.int32)
    cdef double[::1] p = np.ascontiguousarray(edge_p, dtype=np.float64)
    cdef int32_t[::1] srcs = np.ascontiguousarray(sources, dtype=np.int32)
    cdef int32_t[::1] tgt = np.ascontiguousarray(targets, dtype=np.int32)
    cdef uint64_t mseed = <uint64_t>(int(master) & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t base = <uint64_t>(int(sid0) & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t n_vertices = astart.shape[0] - 1
    cdef Py_ssize_t n_edges = p.shape[0]
    out_arr = np.zeros(reps, dtype=np.uint64)
    cdef uint64_t[::1] out = out_arr
    cdef uint8_t *open_e = <uint8_t *>malloc(n_edges if n_edges else 1)
    cdef uint8_t *seen = <uint8_t *>malloc(n_vertices)
    cdef int32_t *stack = <int32_t *>malloc(n_vertices * sizeof(int32_t))
    if open_e == NULL or seen == NULL or stack == NULL:
        free(open_e); free(seen); free(stack)
        raise MemoryError
    cdef Py_ssize_t j, e, k, b, top
    cdef uint64_t seed, mask
    cdef int32_t v, h
    try:
        with nogil:
            for j in range(reps):
                seed = stream_seed_c(mseed, base + <uint64_t>j)
                for e in range(n_edges):
                    open_e[e] = u01(seed, <uint64_t>e) < p[e]
                for k in range(n_vertices):
                    seen[k] = 0
                top = 0
                for k in range(srcs.shape[0]):
                    v = srcs[k]
                    if not seen[v]:
                        seen[v] = 1
                        stack[top] = v
                        top += 1
                while top:
                    top -= 1
                    v = stack[top]
                    for k in range(astart[v], astart[v + 1]):
                        if open_e[aedge[k]]:
                            h = ahead[k]
                            if not seen[h]:
                                seen[h] = 1
                                stack[top] = h
                                top += 1
                mask = 0
                for b in range(tgt.shape[0]):
                    if seen[tgt[b]]:
                        mask |= (<uint64_t>1) << b
                out[j] = mask
    finally:
        free(open_e)
        free(seen)
        free(stack)
    return out_arr


def chain_visit_counts(mask_r, mask_l, edge_p, c0, steps, burn_in, master, sid):
    cdef uint64_t[::1] mr = np.ascontiguousarray(mask_r, dtype=np.uint64)
    cdef uint64_t[::1] ml = np.ascontiguousarray(mask_l, dtype=np.uint64)
    cdef double[::1] p = np.ascontiguousarray(edge_p, dtype=np.float64)
    cdef uint64_t mseed = <uint64_t>(int(master) & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t the_sid = <uint64_t>(int(sid) & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t seed = stream_seed_c(mseed, the_sid)
    cdef Py_ssize_t n_edges = p.shape[0]
    cdef int64_t n_steps = int(steps), burn = int(burn_in)
    visits_arr = np.zeros(mr.shape[0], dtype=np.uint64)
    cdef uint64_t[::1] visits = visits_arr
    cdef uint64_t c = <uint64_t>(int(c0))
    cdef uint64_t rbits, lbits, mask, i
    cdef int64_t n
    cdef Py_ssize_t k
    with nogil:
        for n in range(1, n_steps + 1):
            i = (<uint64_t>(n - 1)) * 2 * <uint64_t>n_edges
            rbits = 0
            lbits = 0
            for k in range(n_edges):
                if u01(seed, i + k) < p[k]:
                    rbits |= (<uint64_t>1) << k
                if u01(seed, i + n_edges + k) < p[k]:
                    lbits |= (<uint64_t>1) << k
            mask = mr[c]
            c = (c & ~mask) | (rbits & mask)
            mask = ml[c]
            c = (c & ~mask) | (lbits & mask)
            if n > burn:
                visits[c] += 1
    return visits_arr, int(c)
