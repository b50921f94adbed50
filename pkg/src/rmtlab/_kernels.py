"""Hot numeric kernels with two interchangeable backends.

Every kernel exists as a loop implementation compiled by numba and as a
pure-numpy implementation.  The backend is fixed at import time:
setting ``RMTLAB_DISABLE_NUMBA=1`` (or running without numba installed)
selects the numpy path.  Both variants are importable under explicit
names (``*_jit`` / ``*_numpy``) so tests and benchmarks can compare them.
"""

import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_DISABLED = os.environ.get("RMTLAB_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}
USE_NUMBA = numba is not None and not _DISABLED
BACKEND = "numba" if USE_NUMBA else "numpy"

EPS = np.finfo(np.float64).eps
TINY = np.finfo(np.float64).tiny


def _njit(fn):
    if numba is None:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


class ConvergenceError(RuntimeError):
    """Raised when an iterative kernel exceeds its iteration cap."""


# ---------------------------------------------------------------------------
# Householder reduction of a dense symmetric matrix to tridiagonal form
# ---------------------------------------------------------------------------

def _householder_loop(a):
    a = a.copy()
    n = a.shape[0]
    d = np.zeros(n)
    e = np.zeros(n)
    v = np.zeros(n)
    p = np.zeros(n)
    for k in range(n - 2):
        scale = 0.0
        for i in range(k + 1, n):
            scale += abs(a[i, k])
        if scale == 0.0:
            d[k] = a[k, k]
            e[k] = 0.0
            continue
        sigma = 0.0
        for i in range(k + 1, n):
            v[i] = a[i, k] / scale
            sigma += v[i] * v[i]
        norm = math.sqrt(sigma)
        alpha = -norm if v[k + 1] >= 0.0 else norm
        v[k + 1] -= alpha
        vtv = 0.0
        for i in range(k + 1, n):
            vtv += v[i] * v[i]
        beta = 2.0 / vtv
        # p = beta * A_sub v
        for i in range(k + 1, n):
            s = 0.0
            for j in range(k + 1, n):
                s += a[i, j] * v[j]
            p[i] = beta * s
        kk = 0.0
        for i in range(k + 1, n):
            kk += v[i] * p[i]
        kk *= 0.5 * beta
        for i in range(k + 1, n):
            p[i] -= kk * v[i]
        for i in range(k + 1, n):
            vi = v[i]
            pi = p[i]
            for j in range(k + 1, n):
                a[i, j] -= vi * p[j] + pi * v[j]
        d[k] = a[k, k]
        e[k] = alpha * scale
    if n >= 2:
        d[n - 2] = a[n - 2, n - 2]
        e[n - 2] = a[n - 1, n - 2]
    if n >= 1:
        d[n - 1] = a[n - 1, n - 1]
    return d, e


def _householder_numpy(a):
    a = np.array(a, dtype=np.float64, copy=True)
    n = a.shape[0]
    d = np.zeros(n)
    e = np.zeros(n)
    for k in range(n - 2):
        x = a[k + 1:, k]
        scale = np.abs(x).sum()
        if scale == 0.0:
            d[k] = a[k, k]
            continue
        v = x / scale
        sigma = v @ v
        norm = math.sqrt(sigma)
        alpha = -norm if v[0] >= 0.0 else norm
        v[0] -= alpha
        beta = 2.0 / (v @ v)
        sub = a[k + 1:, k + 1:]
        p = beta * (sub @ v)
        p -= (0.5 * beta * (v @ p)) * v
        sub -= np.outer(v, p)
        sub -= np.outer(p, v)
        d[k] = a[k, k]
        e[k] = alpha * scale
    if n >= 2:
        d[n - 2] = a[n - 2, n - 2]
        e[n - 2] = a[n - 1, n - 2]
    if n >= 1:
        d[n - 1] = a[n - 1, n - 1]
    return d, e


# ---------------------------------------------------------------------------
# Implicit-shift QL on a symmetric tridiagonal matrix (eigenvalues only)
# ---------------------------------------------------------------------------
# d: diagonal (length n); e: off-diagonal padded to length n, e[i] couples
# rows i and i+1, e[n-1] unused.  Returns (eigenvalues unsorted, status)
# where status < 0 signals that the iteration cap was hit.

def _tql_loop(d, e, max_iter):
    d = d.copy()
    e = e.copy()
    n = d.shape[0]
    total = 0
    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= EPS * dd or abs(e[m]) < TINY:
                    break
                m += 1
            if m == l:
                break
            total += 1
            if total > max_iter:
                return d, -1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, total


def _tql_numpy(d, e, max_iter):
    # Scalar recurrence; numpy offers nothing to vectorize here, so the
    # fallback runs the same iteration on Python floats.
    d = [float(x) for x in d]
    e = [float(x) for x in e]
    n = len(d)
    eps = float(EPS)
    tiny = float(TINY)
    total = 0
    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd or abs(e[m]) < tiny:
                    break
                m += 1
            if m == l:
                break
            total += 1
            if total > max_iter:
                return np.array(d), -1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.array(d), total


# ---------------------------------------------------------------------------
# LU factorisation with partial pivoting (real or complex)
# ---------------------------------------------------------------------------

def _lu_loop(a):
    a = a.copy()
    n = a.shape[0]
    piv = np.arange(n)
    sign = 1
    for k in range(n):
        best = k
        bestval = abs(a[k, k])
        for i in range(k + 1, n):
            if abs(a[i, k]) > bestval:
                best = i
                bestval = abs(a[i, k])
        if best != k:
            for j in range(n):
                tmp = a[k, j]
                a[k, j] = a[best, j]
                a[best, j] = tmp
            t = piv[k]
            piv[k] = piv[best]
            piv[best] = t
            sign = -sign
        pivot = a[k, k]
        if pivot == 0:
            continue
        for i in range(k + 1, n):
            f = a[i, k] / pivot
            a[i, k] = f
            for j in range(k + 1, n):
                a[i, j] -= f * a[k, j]
    return a, piv, sign


def _lu_numpy(a):
    a = np.array(a, copy=True)
    n = a.shape[0]
    piv = np.arange(n)
    sign = 1
    for k in range(n):
        best = k + int(np.argmax(np.abs(a[k:, k])))
        if best != k:
            a[[k, best]] = a[[best, k]]
            piv[[k, best]] = piv[[best, k]]
            sign = -sign
        pivot = a[k, k]
        if pivot == 0:
            continue
        a[k + 1:, k] /= pivot
        a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    return a, piv, sign


# ---------------------------------------------------------------------------
# Dyson Brownian motion: Euler-Maruyama block integrator with step halving
# ---------------------------------------------------------------------------
# Advances `lam` through the rows of `xi` (standard normals).  Each row is
# one attempted step of size min(dt, t_end - t); if the proposal breaks the
# strict ordering the same normals are reused with the step halved, up to
# `max_halvings` times.  Returns (lam, t, rows_used, status, min_gap) with
# status 0 = ok, 1 = reached t_end, -1 = halvings exhausted.

def _dyson_block_loop(lam, xi, dt, t, t_end, beta, noise_scale, max_halvings):
    lam = lam.copy()
    n = lam.shape[0]
    drift = np.zeros(n)
    prop = np.zeros(n)
    rows = xi.shape[0]
    nn = float(n)
    min_gap = np.inf
    for r in range(rows):
        if t >= t_end:
            return lam, t, r, 1, min_gap
        for i in range(n):
            s = 0.0
            li = lam[i]
            for j in range(n):
                if j != i:
                    s += 1.0 / (li - lam[j])
            drift[i] = -0.25 * beta * li + 0.5 * beta / nn * s
        h = dt
        if t + h > t_end:
            h = t_end - t
        ok = False
        for _ in range(max_halvings + 1):
            sq = noise_scale * math.sqrt(h / nn)
            for i in range(n):
                prop[i] = lam[i] + drift[i] * h + sq * xi[r, i]
            ok = True
            for i in range(n - 1):
                if not prop[i + 1] > prop[i]:
                    ok = False
                    break
            if ok:
                break
            h *= 0.5
        if not ok:
            for i in range(n - 1):
                g = lam[i + 1] - lam[i]
                if g < min_gap:
                    min_gap = g
            return lam, t, r, -1, min_gap
        for i in range(n):
            lam[i] = prop[i]
        t += h
    return lam, t, rows, 0, min_gap


def _dyson_block_numpy(lam, xi, dt, t, t_end, beta, noise_scale, max_halvings):
    lam = np.array(lam, dtype=np.float64, copy=True)
    n = lam.shape[0]
    nn = float(n)
    min_gap = np.inf
    for r in range(xi.shape[0]):
        if t >= t_end:
            return lam, t, r, 1, min_gap
        diff = lam[:, None] - lam[None, :]
        np.fill_diagonal(diff, np.inf)
        drift = -0.25 * beta * lam + 0.5 * beta / nn * (1.0 / diff).sum(axis=1)
        h = min(dt, t_end - t)
        ok = False
        for _ in range(max_halvings + 1):
            prop = lam + drift * h + noise_scale * math.sqrt(h / nn) * xi[r]
            if n < 2 or np.all(np.diff(prop) > 0.0):
                ok = True
                break
            h *= 0.5
        if not ok:
            return lam, t, r, -1, float(np.diff(lam).min())
        lam = prop
        t += h
    return lam, t, xi.shape[0], 0, min_gap


# ---------------------------------------------------------------------------
# Last passage percolation on a weight grid
# ---------------------------------------------------------------------------

def _lpp_loop(w):
    rows, cols = w.shape
    g = np.zeros((rows, cols), dtype=np.int64)
    for i in range(rows):
        for j in range(cols):
            best = 0
            if i > 0:
                best = g[i - 1, j]
            if j > 0 and g[i, j - 1] > best:
                best = g[i, j - 1]
            g[i, j] = w[i, j] + best
    return g[rows - 1, cols - 1]


def _lpp_numpy(w):
    w = np.asarray(w, dtype=np.int64)
    prev = np.zeros(w.shape[1], dtype=np.int64)
    for row in w:
        # G(j) = S(j) + max_{k<=j}(prev(k) - S(k-1)) with S the row prefix sum
        s = np.cumsum(row)
        shifted = np.concatenate(([0], s[:-1]))
        prev = s + np.maximum.accumulate(prev - shifted)
    return prev[-1]


# ---------------------------------------------------------------------------
# Brute-force word enumeration for E tr(Z^k)
# ---------------------------------------------------------------------------
# Walks every closed index word i_1..i_k over [0, n) and tallies, for each
# word, the multiset of undirected-edge multiplicities.  The multiset is
# encoded as a base-(k+1) integer of the multiplicity histogram; the result
# maps code -> number of words (exact int64 counts).

def _word_signatures_loop(n, k):
    base = k + 1
    counts = {}
    word = np.zeros(k, dtype=np.int64)
    edges = np.zeros(k, dtype=np.int64)
    hist = np.zeros(k + 1, dtype=np.int64)
    total = n ** k
    for idx in range(total):
        rem = idx
        for p in range(k):
            word[p] = rem % n
            rem //= n
        for p in range(k):
            a = word[p]
            b = word[(p + 1) % k]
            if a > b:
                a, b = b, a
            edges[p] = a * n + b
        edges.sort()
        for p in range(k + 1):
            hist[p] = 0
        run = 1
        for p in range(1, k):
            if edges[p] == edges[p - 1]:
                run += 1
            else:
                hist[run] += 1
                run = 1
        hist[run] += 1
        code = 0
        for p in range(k, 0, -1):
            code = code * base + hist[p]
        if code in counts:
            counts[code] += 1
        else:
            counts[code] = 1
    codes = np.empty(len(counts), dtype=np.int64)
    vals = np.empty(len(counts), dtype=np.int64)
    i = 0
    for key, val in counts.items():
        codes[i] = key
        vals[i] = val
        i += 1
    return codes, vals


def _word_signatures_numpy(n, k, chunk=1 << 18):
    base = k + 1
    total = n ** k
    tally = {}
    powers = n ** np.arange(k, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        words = (idx[:, None] // powers[None, :]) % n
        nxt = np.roll(words, -1, axis=1)
        lo = np.minimum(words, nxt)
        hi = np.maximum(words, nxt)
        edges = np.sort(lo * n + hi, axis=1)
        hist = np.zeros((idx.size, k + 1), dtype=np.int64)
        run = np.ones(idx.size, dtype=np.int64)
        rows = np.arange(idx.size)
        for p in range(1, k):
            same = edges[:, p] == edges[:, p - 1]
            np.add.at(hist, (rows[~same], run[~same]), 1)
            run = np.where(same, run + 1, 1)
        np.add.at(hist, (rows, run), 1)
        code = np.zeros(idx.size, dtype=np.int64)
        for p in range(k, 0, -1):
            code = code * base + hist[:, p]
        keys, cnt = np.unique(code, return_counts=True)
        for key, c in zip(keys.tolist(), cnt.tolist()):
            tally[key] = tally.get(key, 0) + c
    keys = np.array(sorted(tally), dtype=np.int64)
    return keys, np.array([tally[key] for key in keys.tolist()], dtype=np.int64)


householder_tridiagonal_jit = _njit(_householder_loop)
householder_tridiagonal_numpy = _householder_numpy
tql_jit = _njit(_tql_loop)
tql_numpy = _tql_numpy
lu_jit = _njit(_lu_loop)
lu_numpy = _lu_numpy
dyson_block_jit = _njit(_dyson_block_loop)
dyson_block_numpy = _dyson_block_numpy
lpp_jit = _njit(_lpp_loop)
lpp_numpy = _lpp_numpy
word_signatures_jit = _njit(_word_signatures_loop)
word_signatures_numpy = _word_signatures_numpy

if USE_NUMBA:
    householder_tridiagonal = householder_tridiagonal_jit
    tql = tql_jit
    lu = lu_jit
    dyson_block = dyson_block_jit
    lpp = lpp_jit
    word_signatures = word_signatures_jit
else:
    householder_tridiagonal = householder_tridiagonal_numpy
    tql = tql_numpy
    lu = lu_numpy
    dyson_block = dyson_block_numpy
    lpp = lpp_numpy
    word_signatures = word_signatures_numpy
