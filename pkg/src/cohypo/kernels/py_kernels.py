"""Pure-numpy kernel lane.

Mirrors the compiled lane's semantics: identical splitmix64 streams, identical
alias-draw arithmetic (walks are bit-exact across lanes), and identical
update ordering for the skip-gram step (scores from pre-step rows, context
updates applied in target order, center row updated last).
"""

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV53 = 1.0 / 9007199254740992.0


def _next(state):
    state = (state + _GAMMA) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return state, z ^ (z >> 31)


def alias_sample_block(prob, alias, seed, n):
    """Draw n alias-table samples from one splitmix64 stream."""
    out = np.empty(n, dtype=np.int32)
    k = prob.size
    state = int(seed) & _MASK
    for i in range(n):
        state, z = _next(state)
        x = ((z >> 11) * _INV53) * k
        idx = int(x)
        if x - idx >= prob[idx]:
            idx = int(alias[idx])
        out[i] = idx
    return out


def generate_walks_block(indptr, indices, node_prob, node_alias,
                         edge_offsets, edge_prob, edge_alias,
                         starts, seeds, walk_length, out, row_offset):
    """Fill out[row_offset + i] with the walk started at starts[i]."""
    for wi in range(len(starts)):
        state = int(seeds[wi]) & _MASK
        cur = int(starts[wi])
        row = out[row_offset + wi]
        row[0] = cur

        base = int(indptr[cur])
        deg = int(indptr[cur + 1]) - base
        state, z = _next(state)
        x = ((z >> 11) * _INV53) * deg
        idx = int(x)
        if x - idx >= node_prob[base + idx]:
            idx = int(node_alias[base + idx])
        slot = base + idx
        cur = int(indices[slot])
        row[1] = cur

        for step in range(2, walk_length):
            off = int(edge_offsets[slot])
            base = int(indptr[cur])
            deg = int(indptr[cur + 1]) - base
            state, z = _next(state)
            x = ((z >> 11) * _INV53) * deg
            idx = int(x)
            if x - idx >= edge_prob[off + idx]:
                idx = int(edge_alias[off + idx])
            slot = base + idx
            cur = int(indices[slot])
            row[step] = cur


def sgns_epoch(walks, w_in, w_ctx, window, negatives,
               noise_prob, noise_alias, lr_start, lr_end,
               total_pairs, t_start, rng_state):
    """One pass over the walk corpus; returns (loss_sum, n_pairs, rng_state).

    Updates w_in / w_ctx in place. The learning rate anneals linearly over
    the whole training run (total_pairs counts all epochs).
    """
    n_walks, length = walks.shape
    state = int(rng_state) & _MASK
    denom = float(max(total_pairs - 1, 1))
    lr_span = lr_end - lr_start
    k_noise = noise_prob.size
    targets = np.empty(negatives + 1, dtype=np.int64)
    labels = np.zeros(negatives + 1, dtype=np.float64)
    labels[0] = 1.0

    loss_sum = 0.0
    t = int(t_start)
    n_pairs = 0
    for wk in range(n_walks):
        walk = walks[wk]
        for i in range(length):
            center = int(walk[i])
            jlo = i - window if i > window else 0
            jhi = i + window
            if jhi >= length:
                jhi = length - 1
            for j in range(jlo, jhi + 1):
                if j == i:
                    continue
                pos = int(walk[j])
                lr = lr_start + lr_span * (t / denom)
                t += 1
                n_pairs += 1

                targets[0] = pos
                n_t = 1
                for _ in range(negatives):
                    state, z = _next(state)
                    x = ((z >> 11) * _INV53) * k_noise
                    idx = int(x)
                    if x - idx >= noise_prob[idx]:
                        idx = int(noise_alias[idx])
                    if idx == pos:
                        continue  # collided with the positive target: skip the draw
                    targets[n_t] = idx
                    n_t += 1

                tg = targets[:n_t]
                lb = labels[:n_t]
                v = w_in[center]
                ctx_rows = w_ctx[tg]          # copies: scores use pre-step rows
                scores = ctx_rows @ v
                sig = _sigmoid(scores)
                loss_sum += _pair_loss(scores)
                g = lr * (lb - sig)
                grad_v = ctx_rows.T @ g
                np.add.at(w_ctx, tg, g[:, None] * v[None, :])
                w_in[center] += grad_v
    return loss_sum, n_pairs, state


def _sigmoid(s):
    out = np.empty_like(s)
    nonneg = s >= 0
    out[nonneg] = 1.0 / (1.0 + np.exp(-s[nonneg]))
    es = np.exp(s[~nonneg])
    out[~nonneg] = es / (1.0 + es)
    return out


def _pair_loss(scores):
    # -log sigma(s_pos) - sum log sigma(-s_neg), evaluated stably
    loss = _softplus_scalar(-float(scores[0]))
    if scores.size > 1:
        loss += float(_softplus(scores[1:]).sum())
    return loss


def _softplus_scalar(x):
    if x >= 0:
        return x + np.log1p(np.exp(-x))
    return float(np.log1p(np.exp(x)))


def _softplus(x):
    out = np.empty_like(x)
    nonneg = x >= 0
    out[nonneg] = x[nonneg] + np.log1p(np.exp(-x[nonneg]))
    out[~nonneg] = np.log1p(np.exp(x[~nonneg]))
    return out
