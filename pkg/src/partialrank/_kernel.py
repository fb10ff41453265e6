"""Compiled evaluation of partitioned-preference log-likelihoods and gradients.

Layout (all int64):

``slots``     utility index of every block member, blocks laid out contiguously
``part_ptr``  block offsets into ``slots`` (len = n_blocks + 1)
``pp_ptr``    offsets of each preference's blocks into ``part_ptr``
``row_ptr``   offsets of each row's preferences into ``pp_ptr``

A row is one observation (e.g. a poset, which may break into several
preferences); its log-likelihood is the sum over its preferences.
"""

import math

import numba
import numpy as np

_NEG_INF = -np.inf
# members with log a above this have u**a == 0 at every node: factor 1, no gradient
_LOG_A_SATURATED = 700.0
# below this 1 - u**a loses all digits; use the -a*log(u) limit
_LOG_A_TINY = -700.0
# running products are folded into log space before they can underflow
_FLUSH_BUDGET = -600.0


@numba.njit(cache=True, nogil=True)
def _suffix_logsumexp(w, slots, part_ptr, p0, p1, out):
    # out[m - p0] = logsumexp of w over blocks m..p1-1
    mx = _NEG_INF
    s = 0.0
    for m in range(p1 - 1, p0 - 1, -1):
        for e in range(part_ptr[m], part_ptr[m + 1]):
            x = w[slots[e]]
            if x == _NEG_INF:
                continue
            if x > mx:
                s = s * math.exp(mx - x) + 1.0
                mx = x
            else:
                s += math.exp(x - mx)
        if mx == _NEG_INF:
            out[m - p0] = _NEG_INF
        else:
            out[m - p0] = mx + math.log(s)


@numba.njit(cache=True, nogil=True, fastmath=True)
def _accumulate_member(a, log_u, P, g, t_row, want_grad):
    Q = log_u.shape[0]
    if want_grad:
        for q in range(Q):
            y = a * log_u[q]
            om = -math.expm1(y)
            P[q] *= om
            tq = y * (1.0 - om) / om
            t_row[q] = tq
            g[q] += tq
    else:
        for q in range(Q):
            P[q] *= -math.expm1(a * log_u[q])


@numba.njit(cache=True, nogil=True)
def evaluate(w, slots, part_ptr, pp_ptr, row_ptr, log_u, qweights,
             row_weight, want_grad, grad, loglik, max_block, max_blocks):
    """Fill ``loglik[r]`` for every row and accumulate ``row_weight[r] * dloglik/dw`` into ``grad``.

    ``log_u`` must be sorted so that its last entry is closest to zero.  With
    ``want_grad`` set, rows whose weight is 0 are skipped and their ``loglik``
    entry is left as NaN.
    """
    Q = log_u.shape[0]
    log_u_top = log_u[Q - 1]
    n_rows = row_ptr.shape[0] - 1
    log_r = np.empty(max_blocks)
    L = np.empty(Q)
    P = np.empty(Q)
    g = np.empty(Q)
    W = np.empty(Q)
    t = np.zeros((max_block, Q))
    for r in range(n_rows):
        rw = row_weight[r]
        if want_grad and rw == 0.0:
            loglik[r] = np.nan
            continue
        total = 0.0
        for k in range(row_ptr[r], row_ptr[r + 1]):
            p0 = pp_ptr[k]
            p1 = pp_ptr[k + 1]
            if p1 - p0 < 2:
                continue
            _suffix_logsumexp(w, slots, part_ptr, p0, p1, log_r)
            for m in range(p0, p1 - 1):
                lr = log_r[m + 1 - p0]
                if lr == _NEG_INF:
                    # everything below has zero weight: the block order is certain
                    continue
                e0 = part_ptr[m]
                e1 = part_ptr[m + 1]
                impossible = False
                for q in range(Q):
                    L[q] = 0.0
                    P[q] = 1.0
                    g[q] = 0.0
                budget = 0.0
                for e in range(e0, e1):
                    row = e - e0
                    la = w[slots[e]] - lr
                    if la == _NEG_INF:
                        impossible = True
                        break
                    if la > _LOG_A_SATURATED:
                        if want_grad:
                            for q in range(Q):
                                t[row, q] = 0.0
                        continue
                    if la < _LOG_A_TINY:
                        for q in range(Q):
                            L[q] += la + math.log(-log_u[q])
                            if want_grad:
                                t[row, q] = -1.0
                                g[q] -= 1.0
                        continue
                    a = math.exp(la)
                    # smallest factor sits at the node closest to u = 1
                    lb = math.log(-math.expm1(a * log_u_top))
                    if budget + lb < _FLUSH_BUDGET:
                        for q in range(Q):
                            L[q] += math.log(P[q])
                            P[q] = 1.0
                        budget = 0.0
                    budget += lb
                    _accumulate_member(a, log_u, P, g, t[row], want_grad)
                if impossible:
                    total = _NEG_INF
                    break
                lmax = _NEG_INF
                for q in range(Q):
                    L[q] += math.log(P[q])
                    if L[q] > lmax:
                        lmax = L[q]
                z = 0.0
                for q in range(Q):
                    W[q] = qweights[q] * math.exp(L[q] - lmax)
                    z += W[q]
                total += lmax + math.log(z)
                if want_grad:
                    for e in range(e0, e1):
                        row = e - e0
                        acc = 0.0
                        for q in range(Q):
                            acc += W[q] * t[row, q]
                        grad[slots[e]] -= rw * acc / z
                    c = 0.0
                    for q in range(Q):
                        c += W[q] * g[q]
                    c = rw * c / z
                    for e in range(e1, part_ptr[p1]):
                        x = w[slots[e]]
                        if x != _NEG_INF:
                            grad[slots[e]] += c * math.exp(x - lr)
            if total == _NEG_INF:
                break
        loglik[r] = total
