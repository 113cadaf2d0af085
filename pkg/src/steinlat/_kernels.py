"""Hot linear-algebra kernels with a numba fast path.

Two interchangeable implementations are provided for each kernel: a
numba ``@njit`` compilation of the loop nest, and the same Python
function running uncompiled as a pure-numpy fallback.  Selection is by
the environment variable ``STEINLAT_NO_NUMBA`` (set to anything truthy
to force the fallback) or automatic when numba is unavailable.

Field elements are packed int16 codes (see galoisring.KField); field
arithmetic is table lookup.  The Smith-form kernel works on int64
matrices mod ell^N.
"""

from __future__ import annotations

import os

import numpy as np

USE_NUMBA = not os.environ.get("STEINLAT_NO_NUMBA")
if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False

if not USE_NUMBA:
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


@njit(cache=True)
def _rref_K(M, add_t, mul_t, inv_t, neg_t):
    """In-place reduced row echelon form over K.  Returns (rank, pivot
    column array)."""
    rows, cols = M.shape
    piv_cols = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        piv = -1
        for i in range(r, rows):
            if M[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                tmp = M[r, j]
                M[r, j] = M[piv, j]
                M[piv, j] = tmp
        inv = inv_t[M[r, c]]
        for j in range(cols):
            M[r, j] = mul_t[inv, M[r, j]]
        for i in range(rows):
            if i != r and M[i, c] != 0:
                f = neg_t[M[i, c]]
                for j in range(cols):
                    M[i, j] = add_t[M[i, j], mul_t[f, M[r, j]]]
        piv_cols[r] = c
        r += 1
    return r, piv_cols[:r]


@njit(cache=True)
def _reduce_rows_K(V, R, piv_cols, add_t, mul_t, neg_t):
    """Reduce each row of V in place against the rref basis R (pivots
    scaled to 1 at piv_cols)."""
    for v in range(V.shape[0]):
        for k in range(R.shape[0]):
            c = piv_cols[k]
            x = V[v, c]
            if x != 0:
                f = neg_t[x]
                for j in range(V.shape[1]):
                    V[v, j] = add_t[V[v, j], mul_t[f, R[k, j]]]


@njit(cache=True)
def _matmul_K(A, B, add_t, mul_t):
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int16)
    for i in range(A.shape[0]):
        for k in range(A.shape[1]):
            a = A[i, k]
            if a != 0:
                for j in range(B.shape[1]):
                    out[i, j] = add_t[out[i, j], mul_t[a, B[k, j]]]
    return out


@njit(cache=True)
def _modinv_int(a, m):
    """Inverse of a mod m (gcd(a, m) = 1) by extended Euclid."""
    old_r, r = a % m, m
    old_s, s = 1, 0
    while r != 0:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_s, s = s, old_s - qt * s
    return old_s % m


@njit(cache=True)
def _snf_mod(A, ell, N):
    """Smith form over Z/ell^N for an int64 matrix.

    Returns (exps, S, T, ok) with S @ A @ T = diag(ell^exps) mod ell^N,
    exps ascending.  ok = False signals a needed pivot with valuation
    >= N (insufficient precision): the remaining submatrix is nonzero
    as far as the ring can see, yet has no usable pivot.
    """
    n = A.shape[0]
    mod = ell ** N
    D = A % mod
    S = np.eye(n, dtype=np.int64)
    T = np.eye(n, dtype=np.int64)
    exps = np.empty(n, dtype=np.int64)
    for k in range(n):
        # minimal-valuation entry in D[k:, k:], least (row, col) on ties
        best_v = N + 1
        bi = -1
        bj = -1
        for i in range(k, n):
            for j in range(k, n):
                x = D[i, j]
                if x == 0:
                    continue
                v = 0
                while x % ell == 0:
                    x //= ell
                    v += 1
                if v < best_v:
                    best_v = v
                    bi = i
                    bj = j
                    if v == 0:
                        break
            if best_v == 0:
                break
        if bi < 0:
            # submatrix is identically 0 mod ell^N
            for kk in range(k, n):
                exps[kk] = N
            return exps, S, T, False
        # move pivot to (k, k)
        if bi != k:
            for j in range(n):
                tmp = D[k, j]
                D[k, j] = D[bi, j]
                D[bi, j] = tmp
                tmp = S[k, j]
                S[k, j] = S[bi, j]
                S[bi, j] = tmp
        if bj != k:
            for i in range(n):
                tmp = D[i, k]
                D[i, k] = D[i, bj]
                D[i, bj] = tmp
                tmp = T[i, k]
                T[i, k] = T[i, bj]
                T[i, bj] = tmp
        v = best_v
        pw = 1
        for _ in range(v):
            pw *= ell
        unit = D[k, k] // pw
        uinv = _modinv_int(unit % mod, mod)
        for j in range(n):
            D[k, j] = D[k, j] * uinv % mod
            S[k, j] = S[k, j] * uinv % mod
        # now D[k, k] = ell^v exactly (mod ell^N)
        for i in range(k + 1, n):
            if D[i, k] != 0:
                f = (D[i, k] // pw) % mod
                for j in range(n):
                    D[i, j] = (D[i, j] - f * D[k, j]) % mod
                    S[i, j] = (S[i, j] - f * S[k, j]) % mod
        for j in range(k + 1, n):
            if D[k, j] != 0:
                f = (D[k, j] // pw) % mod
                for i in range(n):
                    D[i, j] = (D[i, j] - f * D[i, k]) % mod
                    T[i, j] = (T[i, j] - f * T[i, k]) % mod
        exps[k] = v
    return exps, S, T, True


# ---------------------------------------------------------------------------
# thin wrappers (stable API regardless of the backend)


def rref_K(M: np.ndarray, tables) -> tuple[np.ndarray, np.ndarray, int]:
    """Row-reduce a copy of M over K; returns (R, pivot_cols, rank) with
    R trimmed to its nonzero rows."""
    work = np.ascontiguousarray(M, dtype=np.int16).copy()
    rank, piv = _rref_K(work, tables.add_t, tables.mul_t,
                        tables.inv_t, tables.neg_t)
    return work[:rank], piv.copy(), int(rank)


def reduce_rows_K(V: np.ndarray, R: np.ndarray, piv_cols: np.ndarray,
                  tables) -> np.ndarray:
    """Remainders of the rows of V modulo the row space of R."""
    work = np.ascontiguousarray(V, dtype=np.int16).copy()
    if R.shape[0]:
        _reduce_rows_K(work, np.ascontiguousarray(R, dtype=np.int16),
                       np.ascontiguousarray(piv_cols, dtype=np.int64),
                       tables.add_t, tables.mul_t, tables.neg_t)
    return work


def matmul_K(A: np.ndarray, B: np.ndarray, tables) -> np.ndarray:
    return _matmul_K(np.ascontiguousarray(A, dtype=np.int16),
                     np.ascontiguousarray(B, dtype=np.int16),
                     tables.add_t, tables.mul_t)


def snf_mod(A: np.ndarray, ell: int, N: int):
    """(exps, S, T) over Z/ell^N with S A T = diag(ell^exps); raises
    on insufficient precision."""
    exps, S, T, ok = _snf_mod(np.ascontiguousarray(A, dtype=np.int64),
                              ell, N)
    if not ok:
        # all-zero residual is only legitimate if A is genuinely 0 there,
        # which cannot be certified at this precision
        raise PrecisionError(
            f"Smith pivot with valuation >= N = {N}; raise the precision")
    return exps, S, T


class PrecisionError(Exception):
    pass


def nullspace_K(M: np.ndarray, tables) -> np.ndarray:
    """Rows spanning the right nullspace of M over K (small systems)."""
    R, piv, rank = rref_K(M, tables)
    cols = M.shape[1]
    free = [c for c in range(cols) if c not in set(int(p) for p in piv)]
    out = np.zeros((len(free), cols), dtype=np.int16)
    for k, c in enumerate(free):
        out[k, c] = 1
        for r in range(rank):
            # pivot variable = -R[r, c]
            out[k, int(piv[r])] = tables.neg_t[R[r, c]]
    return out
