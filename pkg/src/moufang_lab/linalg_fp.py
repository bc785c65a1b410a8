"""Dense exact linear algebra over a prime field F_p.

Vectors are rows.  All arrays are ``int64`` with entries reduced into
``[0, p)``.  Row reduction uses leftmost pivots and takes the first row
with a nonzero entry in the pivot column, so results are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels


class ModulusMismatch(ValueError):
    pass


@lru_cache(maxsize=256)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _check_prime(p: int) -> int:
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    return p


def as_fp(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


@dataclass(frozen=True)
class FpMatrix:
    """An immutable matrix over F_p."""

    p: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = _check_prime(self.p)
        arr = np.array(self.entries, dtype=np.int64, ndmin=2) % p
        arr.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def zeros(cls, rows, cols, p):
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, n, p):
        return cls(p, np.eye(n, dtype=np.int64))

    @property
    def shape(self):
        return self.entries.shape

    @property
    def rows(self):
        return self.entries.shape[0]

    @property
    def cols(self):
        return self.entries.shape[1]

    def __eq__(self, other):
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.p, self.entries.shape, self.entries.tobytes()))

    def __matmul__(self, other):
        if not isinstance(other, FpMatrix):
            return NotImplemented
        if other.p != self.p:
            raise ModulusMismatch(f"F_{self.p} @ F_{other.p}")
        return FpMatrix(self.p, matmul(self.entries, other.entries, self.p))


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # int64 is exact as long as inner_dim * p**2 < 2**63
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % p


def matpow(a: np.ndarray, e: int, p: int) -> np.ndarray:
    n = a.shape[0]
    result = np.eye(n, dtype=np.int64)
    base = np.asarray(a, dtype=np.int64) % p
    while e:
        if e & 1:
            result = matmul(result, base, p)
        base = matmul(base, base, p)
        e >>= 1
    return result


def _rref_array(a: np.ndarray, p: int):
    work = np.array(a, dtype=np.int64) % p
    rank, pivots = _kernels.rref_inplace(work, p)
    return work, rank, pivots


def rref(m: FpMatrix) -> tuple[FpMatrix, int]:
    """Reduced row-echelon form and rank."""
    work, rank, _ = _rref_array(m.entries, m.p)
    return FpMatrix(m.p, work), rank


def rank(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return _rref_array(a, p)[1]


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    aug = np.concatenate([np.asarray(a, dtype=np.int64) % p, np.eye(n, dtype=np.int64)], axis=1)
    work, r, piv = _rref_array(aug, p)
    if r < n or piv[n - 1] != n - 1:
        raise ValueError("matrix is singular")
    return work[:, n:].copy()


class Subspace:
    """Subspace of F_p^n held as an RREF basis.

    ``basis`` rows are in reduced row-echelon form, so the coordinates of
    a member ``v`` are simply ``v[pivots]``.
    """

    __slots__ = ("p", "ambient_dim", "basis", "pivots")

    def __init__(self, p: int, ambient_dim: int, basis: np.ndarray, pivots: np.ndarray):
        self.p = p
        self.ambient_dim = ambient_dim
        basis.setflags(write=False)
        pivots.setflags(write=False)
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def span(cls, vectors, p: int, ambient_dim: int | None = None) -> "Subspace":
        p = _check_prime(p)
        v = np.asarray(vectors, dtype=np.int64)
        if v.ndim == 1:
            v = v.reshape(1, -1) if v.size else np.zeros((0, ambient_dim or 0), dtype=np.int64)
        if ambient_dim is None:
            ambient_dim = v.shape[1]
        if v.shape[0] == 0:
            return cls.zero(ambient_dim, p)
        work, r, piv = _rref_array(v, p)
        return cls(p, ambient_dim, work[:r].copy(), piv.copy())

    @classmethod
    def zero(cls, ambient_dim: int, p: int) -> "Subspace":
        return cls(p, ambient_dim, np.zeros((0, ambient_dim), dtype=np.int64), np.zeros(0, dtype=np.int64))

    @classmethod
    def full(cls, ambient_dim: int, p: int) -> "Subspace":
        return cls(p, ambient_dim, np.eye(ambient_dim, dtype=np.int64), np.arange(ambient_dim, dtype=np.int64))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __len__(self):
        return self.dim

    def __repr__(self):
        return f"Subspace(p={self.p}, dim={self.dim}, ambient={self.ambient_dim})"

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.p, self.ambient_dim) == (other.p, other.ambient_dim) and np.array_equal(
            self.basis, other.basis
        )

    def _compatible(self, other: "Subspace"):
        if self.p != other.p:
            raise ModulusMismatch(f"F_{self.p} vs F_{other.p}")
        if self.ambient_dim != other.ambient_dim:
            raise ValueError(f"ambient dimension {self.ambient_dim} vs {other.ambient_dim}")

    def residue(self, vectors) -> np.ndarray:
        """Reduce vectors modulo the subspace (zero rows are exactly the members)."""
        v = np.asarray(vectors, dtype=np.int64) % self.p
        if v.shape[-1] != self.ambient_dim:
            raise ValueError(f"vector length {v.shape[-1]} != ambient dimension {self.ambient_dim}")
        if self.dim == 0:
            return v
        return (v - v[..., self.pivots] @ self.basis) % self.p

    def contains(self, v) -> bool:
        return not self.residue(v).any()

    def contains_all(self, vectors) -> np.ndarray:
        return ~self.residue(vectors).any(axis=-1)

    def coordinates(self, vectors) -> np.ndarray:
        v = np.asarray(vectors, dtype=np.int64) % self.p
        if self.residue(v).any():
            raise ValueError("vector not in subspace")
        return v[..., self.pivots]

    def includes(self, other: "Subspace") -> bool:
        self._compatible(other)
        return other.dim == 0 or bool(self.contains_all(other.basis).all())

    def sum(self, other: "Subspace") -> "Subspace":
        self._compatible(other)
        return Subspace.span(np.vstack([self.basis, other.basis]), self.p, self.ambient_dim)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._compatible(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim, self.p)
        # x S = y T  <=>  (x, y) in ker [S; -T]^T
        stacked = np.vstack([self.basis, (-other.basis) % self.p]).T
        ker = kernel(FpMatrix(self.p, stacked))
        if ker.dim == 0:
            return Subspace.zero(self.ambient_dim, self.p)
        vecs = matmul(ker.basis[:, : self.dim], self.basis, self.p)
        return Subspace.span(vecs, self.p, self.ambient_dim)

    def image(self, matrix: np.ndarray) -> "Subspace":
        """Image under ``v -> matrix @ v`` (column convention)."""
        if self.dim == 0:
            return Subspace.zero(matrix.shape[0], self.p)
        return Subspace.span(matmul(self.basis, np.asarray(matrix).T, self.p), self.p, matrix.shape[0])


def kernel(m: FpMatrix) -> Subspace:
    """Right null space {x : m x = 0}."""
    p, (rows, cols) = m.p, m.shape
    work, r, piv = _rref_array(m.entries, p)
    free = np.setdiff1d(np.arange(cols), piv)
    if free.size == 0:
        return Subspace.zero(cols, p)
    basis = np.zeros((free.size, cols), dtype=np.int64)
    basis[np.arange(free.size), free] = 1
    # x[piv_k] = -sum_f work[k, f] x[f]
    basis[:, piv] = (-work[:r][:, free].T) % p
    return Subspace.span(basis, p, cols)


def contains(s: Subspace, v) -> bool:
    return s.contains(v)


def subspace_sum(s: Subspace, t: Subspace) -> Subspace:
    return s.sum(t)


def intersect(s: Subspace, t: Subspace) -> Subspace:
    return s.intersect(t)
