"""Modular (F_p) elimination kernels.

Two implementations of every kernel live here: a numba ``@njit`` version
and a pure-numpy version.  ``GORHOM_BACKEND=numpy`` forces the numpy path;
otherwise numba is used when it can be imported.  Both paths return
identical results for identical inputs.

All arrays are ``int64`` holding residues in ``[0, p)`` with ``p < 2**31``.
The numba kernels reduce lazily: products are accumulated unreduced while
the running magnitude provably stays below 2**63, and entries are brought
back into ``[0, p)`` only when read as multipliers or when the budget of
accumulations runs out.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None


def _numba_requested() -> bool:
    flag = os.environ.get("GORHOM_BACKEND", "").strip().lower()
    if flag in ("numpy", "python", "off", "0", "none"):
        return False
    return numba is not None


USE_NUMBA = _numba_requested()
BACKEND = "numba" if USE_NUMBA else "numpy"

MAX_PRIME = 2**31

# float64 represents every integer below 2**53 exactly
FLOAT_EXACT = 2**53


def lazy_budget(p: int) -> int:
    """How many unreduced ``+ f*x`` updates an entry in [0, p) can absorb."""
    return max(1, (2**62) // (p * p))


# ---------------------------------------------------------------------------
# numpy implementations


def _inv_mod_py(a: int, p: int) -> int:
    return pow(int(a), -1, int(p))


def rref_numpy(a: np.ndarray, p: int) -> tuple[int, np.ndarray]:
    """Gauss-Jordan in place; first nonzero pivot, rows top-down."""
    m, n = a.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = _inv_mod_py(a[r, c], p)
        a[r, c:] = (a[r, c:] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        idx = np.flatnonzero(col)
        if idx.size:
            a[idx, c:] = (a[idx, c:] - np.outer(col[idx], a[r, c:]) % p) % p
        pivots.append(c)
        r += 1
    return r, np.asarray(pivots, dtype=np.int64)


def insert_rows_numpy(basis, pivots, rank, rows, p, stop):
    """Greedy insertion of ``rows`` into an echelon ``basis``.

    ``basis[:rank]`` is kept fully reduced (zero in every other pivot
    column).  Returns the new rank and a flag per row telling whether the
    row was independent of everything inserted before it.
    """
    flags = np.zeros(rows.shape[0], dtype=np.bool_)
    for t in range(rows.shape[0]):
        if rank >= stop:
            break
        v = rows[t] % p
        if rank:
            coeff = v[pivots[:rank]]
            nzc = np.flatnonzero(coeff)
            if nzc.size:
                v = (v - matmul_modp(coeff[nzc][None, :], basis[nzc], p)[0]) % p
        nz = np.flatnonzero(v)
        if nz.size == 0:
            continue
        c0 = int(nz[0])
        v = (v * _inv_mod_py(v[c0], p)) % p
        if rank:
            col = basis[:rank, c0].copy()
            idx = np.flatnonzero(col)
            if idx.size:
                basis[idx] = (basis[idx] - np.outer(col[idx], v) % p) % p
        basis[rank] = v
        pivots[rank] = c0
        rank += 1
        flags[t] = True
    return rank, flags


# ---------------------------------------------------------------------------
# numba implementations

if numba is not None:

    @numba.njit(cache=True)
    def _inv_mod_nb(a, p):
        t, new_t = 0, 1
        r, new_r = p, a % p
        while new_r != 0:
            q = r // new_r
            t, new_t = new_t, t - q * new_t
            r, new_r = new_r, r - q * new_r
        if t < 0:
            t += p
        return t

    @numba.njit(cache=True)
    def rref_numba(a, p, budget):
        m, n = a.shape
        piv = np.empty(min(m, n), dtype=np.int64)
        r = 0
        pending = 0  # unreduced updates absorbed by every entry so far
        for c in range(n):
            if r == m:
                break
            k = -1
            for i in range(r, m):
                if a[i, c] % p != 0:
                    k = i
                    break
            if k < 0:
                continue
            if k != r:
                for j in range(n):
                    tmp = a[r, j]
                    a[r, j] = a[k, j]
                    a[k, j] = tmp
            for j in range(c, n):
                a[r, j] %= p
            inv = _inv_mod_nb(a[r, c], p)
            for j in range(c, n):
                a[r, j] = (a[r, j] * inv) % p
            if pending + 1 > budget:
                for i in range(m):
                    for j in range(c, n):
                        a[i, j] %= p
                pending = 0
            for i in range(m):
                if i == r:
                    continue
                f = a[i, c] % p
                if f == 0:
                    a[i, c] = 0
                    continue
                g = p - f
                for j in range(c, n):
                    x = a[r, j]
                    if x != 0:
                        a[i, j] += g * x
            pending += 1
            piv[r] = c
            r += 1
        for i in range(m):
            for j in range(n):
                a[i, j] %= p
        return r, piv[:r].copy()

    @numba.njit(cache=True)
    def insert_rows_numba(basis, pivots, rank, rows, p, stop, budget):
        # basis rows are kept semi-reduced: row k vanishes at the pivots of
        # rows inserted before it, so one ordered sweep reduces a vector.
        nrows, n = rows.shape
        flags = np.zeros(nrows, dtype=np.bool_)
        v = np.empty(n, dtype=np.int64)
        for t in range(nrows):
            if rank >= stop:
                break
            for j in range(n):
                v[j] = rows[t, j] % p
            pending = 0
            for k in range(rank):
                c = pivots[k]
                f = v[c] % p
                if f == 0:
                    v[c] = 0
                    continue
                if pending + 1 > budget:
                    for j in range(n):
                        v[j] %= p
                    pending = 0
                g = p - f
                for j in range(c, n):
                    x = basis[k, j]
                    if x != 0:
                        v[j] += g * x
                pending += 1
            c0 = -1
            for j in range(n):
                v[j] %= p
                if c0 < 0 and v[j] != 0:
                    c0 = j
            if c0 < 0:
                continue
            inv = _inv_mod_nb(v[c0], p)
            for j in range(n):
                basis[rank, j] = (v[j] * inv) % p
            pivots[rank] = c0
            rank += 1
            flags[t] = True
        return rank, flags

else:  # pragma: no cover
    rref_numba = None
    insert_rows_numba = None


def rref_modp(a: np.ndarray, p: int) -> tuple[int, np.ndarray]:
    """Reduce ``a`` (int64 residues) to RREF in place; returns (rank, pivots)."""
    if USE_NUMBA:
        r, piv = rref_numba(a, np.int64(p), np.int64(lazy_budget(p)))
        return int(r), piv
    return rref_numpy(a, p)


def insert_rows_modp(basis, pivots, rank, rows, p, stop):
    """Greedy row insertion; see :func:`insert_rows_numpy` for the contract.

    The numba path keeps the basis only semi-reduced; callers that need
    the reduced form run :func:`rref_modp` on the inserted rows.
    """
    if USE_NUMBA:
        r, flags = insert_rows_numba(basis, pivots, np.int64(rank), rows, np.int64(p),
                                     np.int64(stop), np.int64(lazy_budget(p)))
        return int(r), flags
    return insert_rows_numpy(basis, pivots, rank, rows, p, stop)


def matmul_modp(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact product of residue matrices, reduced mod p."""
    n = a.shape[1]
    if n == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    bound = (p - 1) ** 2
    if n * bound < FLOAT_EXACT:
        # float64 BLAS is exact below 2**53
        out = a.astype(np.float64) @ b.astype(np.float64)
        return np.remainder(out, p).astype(np.int64)
    chunk = max(1, (2**62) // max(bound, 1))
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, n, chunk):
        out = (out + (a[:, s:s + chunk] @ b[s:s + chunk]) % p) % p
    return out
