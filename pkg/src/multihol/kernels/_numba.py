"""numba kernels; signatures mirror ``_numpy``."""
import numpy as np
from numba import njit

NAME = "numba"


@njit(cache=True)
def mult_table(a_all, c_all, D, pj, pk, p):
    N, n = a_all.shape
    m = c_all.shape[1]
    pm = 1
    for _ in range(m):
        pm *= p
    out = np.empty((N, N), dtype=np.int32)
    c = np.empty(m, dtype=np.int64)
    for x in range(N):
        for y in range(N):
            for q in range(m):
                c[q] = c_all[x, q] + c_all[y, q] - a_all[x, pk[q]] * a_all[y, pj[q]]
            aidx = 0
            for i in range(n):
                s = a_all[x, i] + a_all[y, i]
                if s >= p:
                    s -= p
                    for q in range(m):
                        c[q] += D[i, q]
                aidx = aidx * p + s
            cidx = 0
            for q in range(m):
                cidx = cidx * p + (c[q] % p)
            out[x, y] = aidx * pm + cidx
    return out


@njit(cache=True)
def count_hom_failures(theta, mult, delta, cadd, pm):
    """Count (x, y) with theta[x y] != theta[x] o theta[y], where
    u o v = u v Delta(u, v) and Delta is tabulated by a-index as a c-index."""
    N = theta.shape[0]
    # split indices once; integer division in the inner loop dominates otherwise
    hi = np.empty(N, dtype=np.int32)
    lo = np.empty(N, dtype=np.int32)
    ai = np.empty(N, dtype=np.int32)
    for w in range(N):
        ai[w] = w // pm
        hi[w] = ai[w] * pm
        lo[w] = w - hi[w]
    th = np.empty(N, dtype=np.int32)
    tha = np.empty(N, dtype=np.int32)
    for y in range(N):
        th[y] = theta[y]
        tha[y] = ai[theta[y]]
    cad = cadd.astype(np.int32)
    fails = 0
    fx = -1
    fy = -1
    for x in range(N):
        u = th[x]
        drow = delta[ai[u]].astype(np.int32)
        mrow = mult[u]
        xrow = mult[x]
        for y in range(N):
            w = mrow[th[y]]
            if th[xrow[y]] != hi[w] + cad[lo[w], drow[tha[y]]]:
                if fails == 0:
                    fx = x
                    fy = y
                fails += 1
    return fails, fx, fy


@njit(cache=True)
def circle_table(mult, delta, cadd, pm):
    N = mult.shape[0]
    hi = np.empty(N, dtype=np.int64)
    lo = np.empty(N, dtype=np.int64)
    ai = np.empty(N, dtype=np.int64)
    for w in range(N):
        ai[w] = w // pm
        hi[w] = ai[w] * pm
        lo[w] = w - hi[w]
    out = np.empty((N, N), dtype=np.int32)
    for x in range(N):
        drow = delta[ai[x]]
        mrow = mult[x]
        for y in range(N):
            w = mrow[y]
            out[x, y] = hi[w] + cadd[lo[w], drow[ai[y]]]
    return out


@njit(cache=True)
def count_assoc_failures(table):
    N = table.shape[0]
    fails = 0
    for x in range(N):
        for y in range(N):
            xy = table[x, y]
            for z in range(N):
                if table[xy, z] != table[x, table[y, z]]:
                    fails += 1
    return fails


@njit(cache=True)
def count_brace_failures(mult, circ, inv):
    """Count (x, y, z) violating (xy) o z = (x o z) z^-1 (y o z)."""
    N = mult.shape[0]
    fails = 0
    for z in range(N):
        iz = inv[z]
        for x in range(N):
            xz = mult[circ[x, z], iz]
            for y in range(N):
                if circ[mult[x, y], z] != mult[xz, circ[y, z]]:
                    fails += 1
    return fails


@njit(cache=True)
def circle_stats(circ, pm):
    """Center mask and the set of commutator values of a group table."""
    N = circ.shape[0]
    icirc = np.empty(N, dtype=np.int64)
    for x in range(N):
        for y in range(N):
            if circ[x, y] == 0:
                icirc[x] = y
                break
    center = np.ones(N, dtype=np.bool_)
    seen = np.zeros(N, dtype=np.bool_)
    seen[0] = True
    for x in range(N):
        for y in range(x + 1, N):
            u = circ[x, y]
            v = circ[y, x]
            if u != v:
                center[x] = False
                center[y] = False
                # [x, y] = (y o x)^-1 o (x o y)
                seen[circ[icirc[v], u]] = True
    return center, seen


@njit(cache=True)
def criterion_scan(L, R, Ts, p):
    """Pairs (i, j) with L[i] @ Ts[j] == R[i] mod p."""
    NA, n, m = L.shape
    NT = Ts.shape[0]
    cap = 1024
    out = np.empty((cap, 2), dtype=np.int64)
    cnt = 0
    for i in range(NA):
        for j in range(NT):
            ok = True
            for r in range(n):
                for s in range(m):
                    acc = 0
                    for q in range(m):
                        acc += L[i, r, q] * Ts[j, q, s]
                    if acc % p != R[i, r, s]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                if cnt == cap:
                    cap *= 2
                    grown = np.empty((cap, 2), dtype=np.int64)
                    grown[:cnt] = out[:cnt]
                    out = grown
                out[cnt, 0] = i
                out[cnt, 1] = j
                cnt += 1
    return out[:cnt]


@njit(cache=True)
def _inv_mod(x, p):
    r = 1
    b = x % p
    e = p - 2
    while e:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


@njit(cache=True)
def _is_invertible(A, p):
    k = A.shape[0]
    M = A.copy()
    for col in range(k):
        piv = -1
        for r in range(col, k):
            if M[r, col] % p != 0:
                piv = r
                break
        if piv < 0:
            return False
        if piv != col:
            for s in range(k):
                t = M[col, s]
                M[col, s] = M[piv, s]
                M[piv, s] = t
        iv = _inv_mod(M[col, col], p)
        for r in range(col + 1, k):
            f = M[r, col] * iv % p
            if f:
                for s in range(col, k):
                    M[r, s] = (M[r, s] - f * M[col, s]) % p
    return True


@njit(cache=True)
def batch_invertible(mats, p):
    out = np.empty(mats.shape[0], dtype=np.bool_)
    for i in range(mats.shape[0]):
        out[i] = _is_invertible(mats[i], p)
    return out


@njit(cache=True)
def stabilizer_scan(D, Dp, pj, pk, p, start, stop):
    """Indices in [start, stop) of invertible n x n A (base-p digits, row-major)
    with A^-1 D wedge(A) == Dp, checked as D wedge(A) == A Dp."""
    n, m = D.shape
    A = np.empty((n, n), dtype=np.int64)
    W = np.empty((m, m), dtype=np.int64)
    AD = np.empty((n, m), dtype=np.int64)
    cap = 64
    out = np.empty(cap, dtype=np.int64)
    cnt = 0
    for idx in range(start, stop):
        t = idx
        for pos in range(n * n - 1, -1, -1):
            A[pos // n, pos % n] = t % p
            t //= p
        for i in range(n):
            for r in range(m):
                acc = 0
                for l in range(n):
                    acc += A[i, l] * Dp[l, r]
                AD[i, r] = acc % p
        for q in range(m):
            j = pj[q]
            k = pk[q]
            for r in range(m):
                s = pj[r]
                u = pk[r]
                W[q, r] = A[j, s] * A[k, u] - A[j, u] * A[k, s]
        ok = True
        for i in range(n):
            for r in range(m):
                acc = 0
                for q in range(m):
                    acc += D[i, q] * W[q, r]
                if acc % p != AD[i, r]:
                    ok = False
                    break
            if not ok:
                break
        if ok and _is_invertible(A, p):
            if cnt == cap:
                cap *= 2
                grown = np.empty(cap, dtype=np.int64)
                grown[:cnt] = out[:cnt]
                out = grown
            out[cnt] = idx
            cnt += 1
    return out[:cnt]


@njit(cache=True)
def regular_closure(gens):
    """Close a set of permutations (left-to-right composition).

    Returns (True, table) with table[w] the unique element sending 0 to w
    when the generated group is regular, else (False, partial table).
    """
    k, N = gens.shape
    table = np.full((N, N), -1, dtype=np.int32)
    have = np.zeros(N, dtype=np.bool_)
    for x in range(N):
        table[0, x] = x
    have[0] = True
    queue = np.empty(N, dtype=np.int64)
    queue[0] = 0
    head = 0
    tail = 1
    prod = np.empty(N, dtype=np.int32)
    while head < tail:
        h = queue[head]
        head += 1
        for g in range(k):
            for x in range(N):
                prod[x] = gens[g, table[h, x]]
            w = prod[0]
            if have[w]:
                for x in range(N):
                    if table[w, x] != prod[x]:
                        return False, table
            else:
                table[w] = prod
                have[w] = True
                queue[tail] = w
                tail += 1
    return tail == N, table
