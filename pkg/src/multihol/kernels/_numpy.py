"""Pure-numpy fallbacks for the numba kernels."""
import numpy as np

from ..ff_linalg import rref

NAME = "numpy"

_CHUNK = 1 << 20


def mult_table(a_all, c_all, D, pj, pk, p):
    N, n = a_all.shape
    m = c_all.shape[1]
    pm = p ** m
    wa = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    wc = p ** np.arange(m - 1, -1, -1, dtype=np.int64)
    out = np.empty((N, N), dtype=np.int32)
    rows = max(1, _CHUNK // max(N, 1))
    for x0 in range(0, N, rows):
        a1 = a_all[x0:x0 + rows, None, :]
        c1 = c_all[x0:x0 + rows, None, :]
        a2 = a_all[None, :, :]
        c2 = c_all[None, :, :]
        s = a1 + a2
        carry = (s >= p).astype(np.int64)
        c = (c1 + c2 - a1[..., pk] * a2[..., pj] + carry @ D) % p
        out[x0:x0 + rows] = ((s % p) @ wa) * pm + c @ wc
    return out


def circle_table(mult, delta, cadd, pm):
    N = mult.shape[0]
    idx = np.arange(N)
    d = delta[(idx // pm)[:, None], (idx // pm)[None, :]]
    return ((mult // pm) * pm + cadd[mult % pm, d]).astype(np.int32)


def count_hom_failures(theta, mult, delta, cadd, pm):
    theta = np.asarray(theta, dtype=np.int64)
    lhs = theta[mult]
    u = theta[:, None]
    v = theta[None, :]
    w = mult[u, v].astype(np.int64)
    rhs = (w // pm) * pm + cadd[w % pm, delta[u // pm, v // pm]]
    bad = np.argwhere(lhs != rhs)
    if bad.size == 0:
        return 0, -1, -1
    return int(bad.shape[0]), int(bad[0, 0]), int(bad[0, 1])


def count_assoc_failures(table):
    fails = 0
    for x in range(table.shape[0]):
        fails += int(np.count_nonzero(table[table[x]] != table[x][table]))
    return fails


def count_brace_failures(mult, circ, inv):
    fails = 0
    for z in range(mult.shape[0]):
        xz = mult[circ[:, z], inv[z]]
        lhs = circ[mult, z]
        rhs = mult[xz[:, None], circ[None, :, z]]
        fails += int(np.count_nonzero(lhs != rhs))
    return fails


def circle_stats(circ, pm):
    N = circ.shape[0]
    icirc = np.argmax(circ == 0, axis=1)
    comm_mat = circ != circ.T
    center = ~comm_mat.any(axis=1)
    seen = np.zeros(N, dtype=bool)
    seen[0] = True
    xs, ys = np.nonzero(np.triu(comm_mat, 1))
    seen[circ[icirc[circ[ys, xs]], circ[xs, ys]]] = True
    return center, seen


def criterion_scan(L, R, Ts, p):
    hits = []
    for i in range(L.shape[0]):
        prod = np.einsum("rq,jqs->jrs", L[i], Ts) % p
        js = np.nonzero((prod == R[i]).all(axis=(1, 2)))[0]
        hits.extend((i, int(j)) for j in js)
    return np.array(hits, dtype=np.int64).reshape(-1, 2)


def batch_invertible(mats, p):
    k = mats.shape[1]
    return np.array([len(rref(M, p)[1]) == k for M in mats], dtype=bool)


def stabilizer_scan(D, Dp, pj, pk, p, start, stop):
    n, m = D.shape
    weights = p ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
    found = []
    step = max(1, _CHUNK // max(m * m, 1))
    for lo in range(start, stop, step):
        idx = np.arange(lo, min(stop, lo + step), dtype=np.int64)
        A = ((idx[:, None] // weights[None, :]) % p).reshape(-1, n, n)
        Aj, Ak = A[:, pj, :], A[:, pk, :]
        W = Aj[:, :, pj] * Ak[:, :, pk] - Aj[:, :, pk] * Ak[:, :, pj]
        lhs = np.einsum("iq,bqr->bir", D, W) % p
        rhs = np.einsum("bil,lr->bir", A, Dp) % p
        cand = np.nonzero((lhs == rhs).all(axis=(1, 2)))[0]
        if cand.size:
            inv = batch_invertible(A[cand], p)
            found.extend(idx[cand[inv]].tolist())
    return np.array(found, dtype=np.int64)


def regular_closure(gens):
    k, N = gens.shape
    table = np.full((N, N), -1, dtype=np.int32)
    table[0] = np.arange(N)
    have = np.zeros(N, dtype=bool)
    have[0] = True
    queue = [0]
    head = 0
    while head < len(queue):
        h = table[queue[head]]
        head += 1
        for g in gens:
            prod = g[h]
            w = prod[0]
            if have[w]:
                if not np.array_equal(table[w], prod):
                    return False, table
            else:
                table[w] = prod
                have[w] = True
                queue.append(int(w))
    return len(queue) == N, table
