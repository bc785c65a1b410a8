"""Hot inner loops, each with a numba version and a pure-numpy version.

The numba path is used when numba imports and ``MOUFANG_LAB_NUMBA`` is not
set to ``0``.  Both paths must return identical results; the test-suite
runs them against each other and ``benchmarks/bench_kernels.py`` times them.
"""

import numpy as np

from ._config import use_numba

try:
    import numba
except ImportError:  # pragma: no cover - numba is optional
    numba = None


def numba_available() -> bool:
    return numba is not None


def backend() -> str:
    return "numba" if (numba is not None and use_numba()) else "numpy"


# ---------------------------------------------------------------------------
# row reduction mod p


def _rref_numpy(a, p):
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r, c:] = a[r, c:] * inv % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit, c:] = (a[hit, c:] - np.outer(col[hit], a[r, c:])) % p
        pivots.append(c)
        r += 1
    return r, np.asarray(pivots, dtype=np.int64)


def _rref_numba_impl(a, p):
    rows, cols = a.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, cols):
                t = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = t
        # modular inverse by Fermat
        inv = 1
        base = a[r, c]
        e = p - 2
        while e > 0:
            if e & 1:
                inv = inv * base % p
            base = base * base % p
            e >>= 1
        for j in range(c, cols):
            a[r, j] = a[r, j] * inv % p
        for i in range(rows):
            if i == r:
                continue
            f = a[i, c]
            if f == 0:
                continue
            for j in range(c, cols):
                v = (a[i, j] - f * a[r, j]) % p
                a[i, j] = v
        pivots[r] = c
        r += 1
    return r, pivots[:r].copy()


# ---------------------------------------------------------------------------
# group algebra product: (u*v)[g*h] += u[g] v[h]


def _ga_mul_numpy(u, v, table, p):
    out = np.zeros_like(u)
    for g in np.flatnonzero(u):
        np.add.at(out, table[g], u[g] * v)
        out %= p
    return out


def _ga_mul_numba_impl(u, v, table, p):
    n = u.shape[0]
    out = np.zeros(n, dtype=np.int64)
    for g in range(n):
        ug = u[g]
        if ug == 0:
            continue
        for h in range(n):
            vh = v[h]
            if vh != 0:
                k = table[g, h]
                out[k] = (out[k] + ug * vh) % p
    return out


# ---------------------------------------------------------------------------
# Moufang sweep over every triple (x, y, z) of a loop table


def _moufang_numpy(table):
    n = table.shape[0]
    idx = np.arange(n)
    for x in range(n):
        tx = table[x]
        # ((z x) y) x  ==  z ((x y) x)   with y along axis 0, z along axis 1
        zx = table[idx, x]
        lhs1 = table[table[zx[None, :], idx[:, None]], x]
        xyx = table[tx, x]
        rhs1 = table[idx[None, :], xyx[:, None]]
        bad = np.argwhere(lhs1 != rhs1)
        if bad.size:
            y, z = bad[0]
            return 0, x, int(y), int(z)
        # x (y (x z))  ==  (x (y x)) z
        xz = tx
        lhs2 = tx[table[idx[:, None], xz[None, :]]]
        xyx2 = tx[table[idx, x]]
        rhs2 = table[xyx2[:, None], idx[None, :]]
        bad = np.argwhere(lhs2 != rhs2)
        if bad.size:
            y, z = bad[0]
            return 1, x, int(y), int(z)
    return -1, -1, -1, -1


def _moufang_numba_impl(table):
    n = table.shape[0]
    for x in range(n):
        for y in range(n):
            xyx = table[table[x, y], x]
            for z in range(n):
                if table[table[table[z, x], y], x] != table[z, xyx]:
                    return 0, x, y, z
        for y in range(n):
            xyx2 = table[x, table[y, x]]
            for z in range(n):
                if table[x, table[y, table[x, z]]] != table[xyx2, z]:
                    return 1, x, y, z
    return -1, -1, -1, -1


if numba is not None:
    _rref_numba = numba.njit(cache=True)(_rref_numba_impl)
    _ga_mul_numba = numba.njit(cache=True)(_ga_mul_numba_impl)
    _moufang_numba = numba.njit(cache=True)(_moufang_numba_impl)
else:  # pragma: no cover
    _rref_numba = _rref_numba_impl
    _ga_mul_numba = _ga_mul_numba_impl
    _moufang_numba = _moufang_numba_impl


def rref_inplace(a: np.ndarray, p: int):
    """Row-reduce the int64 array ``a`` in place; return (rank, pivot columns)."""
    if a.size == 0:
        return 0, np.zeros(0, dtype=np.int64)
    if backend() == "numba":
        r, piv = _rref_numba(a, p)
        return int(r), piv
    return _rref_numpy(a, p)


def group_algebra_mul(u: np.ndarray, v: np.ndarray, table: np.ndarray, p: int) -> np.ndarray:
    if backend() == "numba":
        return _ga_mul_numba(u, v, table, p)
    return _ga_mul_numpy(u, v, table, p)


def moufang_first_violation(table: np.ndarray):
    """Return (identity_no, x, y, z) of the first failing triple, or identity_no = -1."""
    if backend() == "numba":
        return tuple(int(t) for t in _moufang_numba(table))
    return _moufang_numpy(table)
