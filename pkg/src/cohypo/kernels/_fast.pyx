# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernel lane: walk sampling and skip-gram SGD hot loops.

Semantics match cohypo.kernels.py_kernels: same splitmix64 streams, same
alias-draw arithmetic and, for the skip-gram step, scores computed from
pre-step rows with context updates applied in target order.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, log1p

ctypedef unsigned long long u64

cdef double _INV53 = 1.0 / 9007199254740992.0


cdef inline u64 _next(u64* state) noexcept nogil:
    state[0] = state[0] + <u64>0x9E3779B97F4A7C15ULL
    cdef u64 z = state[0]
    z = (z ^ (z >> 30)) * <u64>0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <u64>0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline int _draw(const double* prob, const int* alias, int k, u64* state) noexcept nogil:
    cdef double x = (<double>(_next(state) >> 11) * _INV53) * k
    cdef int idx = <int>x
    if x - idx >= prob[idx]:
        idx = alias[idx]
    return idx


cdef inline double _sigmoid(double s) noexcept nogil:
    cdef double e
    if s >= 0:
        return 1.0 / (1.0 + exp(-s))
    e = exp(s)
    return e / (1.0 + e)


cdef inline double _softplus(double s) noexcept nogil:
    if s >= 0:
        return s + log1p(exp(-s))
    return log1p(exp(s))


def alias_sample_block(const double[::1] prob, const int[::1] alias, seed, Py_ssize_t n):
    out = np.empty(n, dtype=np.int32)
    cdef int[::1] ov = out
    cdef u64 state = <u64>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef int k = <int>prob.shape[0]
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            ov[i] = _draw(&prob[0], &alias[0], k, &state)
    return out


def generate_walks_block(const long long[::1] indptr, const int[::1] indices,
                         const double[::1] node_prob, const int[::1] node_alias,
                         const long long[::1] edge_offsets, const double[::1] edge_prob,
                         const int[::1] edge_alias,
                         const int[::1] starts, const unsigned long long[::1] seeds,
                         int walk_length, int[:, ::1] out, Py_ssize_t row_offset):
    cdef Py_ssize_t wi, n = starts.shape[0]
    cdef u64 state
    cdef int cur, deg, idx, step
    cdef long long base, slot, off
    with nogil:
        for wi in range(n):
            state = seeds[wi]
            cur = starts[wi]
            out[row_offset + wi, 0] = cur

            base = indptr[cur]
            deg = <int>(indptr[cur + 1] - base)
            idx = _draw(&node_prob[base], &node_alias[base], deg, &state)
            slot = base + idx
            cur = indices[slot]
            out[row_offset + wi, 1] = cur

            for step in range(2, walk_length):
                off = edge_offsets[slot]
                base = indptr[cur]
                deg = <int>(indptr[cur + 1] - base)
                idx = _draw(&edge_prob[off], &edge_alias[off], deg, &state)
                slot = base + idx
                cur = indices[slot]
                out[row_offset + wi, step] = cur


def sgns_epoch(const int[:, ::1] walks, double[:, ::1] w_in, double[:, ::1] w_ctx,
               int window, int negatives,
               const double[::1] noise_prob, const int[::1] noise_alias,
               double lr_start, double lr_end,
               long long total_pairs, long long t_start, rng_state):
    cdef Py_ssize_t n_walks = walks.shape[0]
    cdef int length = <int>walks.shape[1]
    cdef int dim = <int>w_in.shape[1]
    cdef int k_noise = <int>noise_prob.shape[0]
    cdef u64 state = <u64>(int(rng_state) & 0xFFFFFFFFFFFFFFFF)
    cdef double denom = <double>(total_pairs - 1 if total_pairs > 1 else 1)
    cdef double lr_span = lr_end - lr_start

    targets_arr = np.empty(negatives + 1, dtype=np.int64)
    scores_arr = np.empty(negatives + 1, dtype=np.float64)
    gcoef_arr = np.empty(negatives + 1, dtype=np.float64)
    grad_arr = np.empty(dim, dtype=np.float64)
    cdef long long[::1] targets = targets_arr
    cdef double[::1] scores = scores_arr
    cdef double[::1] gcoef = gcoef_arr
    cdef double[::1] grad_v = grad_arr

    cdef double loss_sum = 0.0
    cdef long long t = t_start, n_pairs = 0
    cdef Py_ssize_t wk
    cdef int i, j, jlo, jhi, center, pos, n_t, k, d, idx
    cdef long long tgt
    cdef double lr, s, sg, g

    with nogil:
        for wk in range(n_walks):
            for i in range(length):
                center = walks[wk, i]
                jlo = i - window if i > window else 0
                jhi = i + window
                if jhi >= length:
                    jhi = length - 1
                for j in range(jlo, jhi + 1):
                    if j == i:
                        continue
                    pos = walks[wk, j]
                    lr = lr_start + lr_span * (<double>t / denom)
                    t += 1
                    n_pairs += 1

                    targets[0] = pos
                    n_t = 1
                    for k in range(negatives):
                        idx = _draw(&noise_prob[0], &noise_alias[0], k_noise, &state)
                        if idx == pos:
                            continue
                        targets[n_t] = idx
                        n_t += 1

                    # scores from pre-step rows
                    for k in range(n_t):
                        tgt = targets[k]
                        s = 0.0
                        for d in range(dim):
                            s += w_ctx[tgt, d] * w_in[center, d]
                        scores[k] = s
                    loss_sum += _softplus(-scores[0])
                    gcoef[0] = lr * (1.0 - _sigmoid(scores[0]))
                    for k in range(1, n_t):
                        loss_sum += _softplus(scores[k])
                        gcoef[k] = lr * (0.0 - _sigmoid(scores[k]))

                    for d in range(dim):
                        grad_v[d] = 0.0
                    for k in range(n_t):
                        tgt = targets[k]
                        g = gcoef[k]
                        for d in range(dim):
                            grad_v[d] += g * w_ctx[tgt, d]
                    for k in range(n_t):
                        tgt = targets[k]
                        g = gcoef[k]
                        for d in range(dim):
                            w_ctx[tgt, d] += g * w_in[center, d]
                    for d in range(dim):
                        w_in[center, d] += grad_v[d]

    return loss_sum, int(n_pairs), int(state)
