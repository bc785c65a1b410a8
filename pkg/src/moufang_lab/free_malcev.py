"""Truncated free Malcev algebras M(m) over F_p and their Engel quotients.

Elements of the free anticommutative algebra are dicts {monomial: coefficient}.
A monomial is a leaf ``i`` (generator x_(i+1)) or a pair ``(u, v)`` of
canonical monomials with ``key(u) < key(v)``; swapping factors flips the sign
and equal factors give zero.  The component of multidegree gamma of the
defining ideal is built from substitution instances of the Malcev identity
and its linearization, plus products of lower components with monomials.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations, product
from math import factorial, gcd

import numpy as np

from . import _config, _kernels

Monomial = "int | tuple"


class DegreeCapExceeded(ValueError):
    pass


class EngelBudgetExceeded(ValueError):
    pass


# ---------------------------------------------------------------------------
# monomials


@lru_cache(maxsize=None)
def degree(u) -> int:
    return 1 if isinstance(u, int) else degree(u[0]) + degree(u[1])


@lru_cache(maxsize=None)
def serialize(u) -> str:
    return f"x{u + 1}" if isinstance(u, int) else f"({serialize(u[0])}{serialize(u[1])})"


def key(u):
    return (degree(u), serialize(u))


def multidegree(u, m: int) -> tuple[int, ...]:
    out = [0] * m
    stack = [u]
    while stack:
        t = stack.pop()
        if isinstance(t, int):
            out[t] += 1
        else:
            stack.extend(t)
    return tuple(out)


def canonical_product(u, v) -> tuple[int, object]:
    """(sign, monomial) for u * v with canonical u, v; sign 0 means the product vanishes."""
    if u == v:
        return 0, None
    if key(u) < key(v):
        return 1, (u, v)
    return -1, (v, u)


def canonicalize(t) -> tuple[int, object]:
    """Canonical form of an arbitrary binary tree."""
    if isinstance(t, int):
        return 1, t
    s1, a = canonicalize(t[0])
    s2, b = canonicalize(t[1])
    if s1 == 0 or s2 == 0:
        return 0, None
    s, c = canonical_product(a, b)
    return s * s1 * s2, c


def _check_degree(d: int):
    cap = _config.cap("MAX_DEGREE")
    if d > cap:
        raise DegreeCapExceeded(f"degree {d} exceeds MAX_DEGREE={cap} (raise MOUFANG_LAB_MAX_DEGREE at your own cost)")


@lru_cache(maxsize=None)
def _monomials(gamma: tuple[int, ...]) -> tuple:
    n = sum(gamma)
    if n == 0:
        return ()
    if n == 1:
        return (gamma.index(1),)
    out = []
    for alpha in _sub_degrees(gamma):
        beta = tuple(g - a for g, a in zip(gamma, alpha))
        if sum(alpha) > sum(beta):
            continue
        for u in _monomials(alpha):
            for v in _monomials(beta):
                if key(u) < key(v):
                    out.append((u, v))
    return tuple(sorted(set(out), key=key))


def enumerate_monomials(m: int, gamma) -> list:
    """Canonical monomials of multidegree gamma, sorted by (degree, serialization)."""
    gamma = tuple(int(g) for g in gamma)
    if len(gamma) != m or min(gamma, default=0) < 0:
        raise ValueError(f"multidegree {gamma} does not fit {m} generators")
    _check_degree(sum(gamma))
    return list(_monomials(gamma))


def _sub_degrees(gamma):
    """Nonzero proper alpha <= gamma, componentwise."""
    for alpha in product(*(range(g + 1) for g in gamma)):
        if 0 < sum(alpha) < sum(gamma):
            yield alpha


def multidegrees(m: int, total: int):
    """All multidegrees of the given total degree, in lexicographically decreasing order."""
    if m == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in multidegrees(m - 1, total - first):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# polynomial arithmetic


def mul(f: dict, g: dict, p: int) -> dict:
    out: dict = {}
    for u, a in f.items():
        for v, b in g.items():
            s, w = canonical_product(u, v)
            if s:
                out[w] = (out.get(w, 0) + s * a * b) % p
    return {w: c for w, c in out.items() if c}


def add(*terms, p: int) -> dict:
    """sum of (coefficient, polynomial) pairs."""
    out: dict = {}
    for c, f in terms:
        for w, a in f.items():
            out[w] = (out.get(w, 0) + c * a) % p
    return {w: c for w, c in out.items() if c}


def mono(u) -> dict:
    return {u: 1}


def malcev_g(x, y, z, p: int) -> dict:
    """(xy)(xz) - ((xy)z)x - ((yz)x)x - ((zx)x)y."""
    xy = mul(x, y, p)
    return add(
        (1, mul(xy, mul(x, z, p), p)),
        (-1, mul(mul(xy, z, p), x, p)),
        (-1, mul(mul(mul(y, z, p), x, p), x, p)),
        (-1, mul(mul(mul(z, x, p), x, p), y, p)),
        p=p,
    )


def malcev_f(x1, x2, y, z, p: int) -> dict:
    """Full linearization of malcev_g in x."""
    def half(a, b):
        return add(
            (1, mul(mul(a, y, p), mul(b, z, p), p)),
            (-1, mul(mul(mul(a, y, p), z, p), b, p)),
            (-1, mul(mul(mul(y, z, p), a, p), b, p)),
            (-1, mul(mul(mul(z, a, p), b, p), y, p)),
            p=p,
        )

    return add((1, half(x1, x2)), (1, half(x2, x1)), p=p)


def engel_word(factors, b, p: int) -> dict:
    """a_1(a_2(...(a_k b)...))."""
    acc = b
    for a in reversed(factors):
        acc = mul(a, acc, p)
    return acc


# ---------------------------------------------------------------------------
# Witt numbers


def _mobius(n: int) -> int:
    res, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            res = -res
        k += 1
    return -res if n > 1 else res


def witt_multidegree(gamma) -> int:
    """Dimension of the free Lie algebra in multidegree gamma (necklace formula)."""
    gamma = tuple(gamma)
    n = sum(gamma)
    if n == 0:
        return 0
    g = 0
    for x in gamma:
        g = gcd(g, x)
    total = 0
    for d in range(1, g + 1):
        if g % d == 0:
            mu = _mobius(d)
            if mu:
                coeff = factorial(n // d)
                for x in gamma:
                    coeff //= factorial(x // d)
                total += mu * coeff
    return total // n


def witt_number(m: int, n: int) -> int:
    return sum(_mobius(d) * m ** (n // d) for d in range(1, n + 1) if n % d == 0) // n


# ---------------------------------------------------------------------------
# the engine


class FreeMalcevEngine:
    """Components of M(m) (or M(m)/I with Engel generators of length q = p^n) over F_p."""

    def __init__(self, m: int, p: int = 5, engel_q: int | None = None, shuffle_seed: int | None = None):
        if p <= 3:
            raise ValueError("characteristic must exceed 3")
        if engel_q is not None:
            if factorial(engel_q) > _config.perm_budget():
                raise EngelBudgetExceeded(f"S_{engel_q} exceeds permutation budget {_config.perm_budget()}")
            if engel_q != p:
                raise EngelBudgetExceeded("only q = p (n = 1) Engel generators are supported")
        self.m, self.p, self.q = m, p, engel_q
        self.shuffle_seed = shuffle_seed
        self._ideal: dict[tuple, list[dict]] = {}

    def monomials(self, gamma) -> list:
        return enumerate_monomials(self.m, gamma)

    def _polys_of(self, gamma):
        return [mono(u) for u in _monomials(tuple(gamma))]

    def _generators(self, gamma: tuple) -> list[dict]:
        """Identity instances (and Engel generators) landing in multidegree gamma."""
        p, n = self.p, sum(gamma)
        rows = []
        if n >= 4:
            for a in _sub_degrees(gamma):
                rest = tuple(g - 2 * x for g, x in zip(gamma, a))
                if min(rest) < 0 or sum(rest) < 2:
                    continue
                for b in _sub_degrees(rest):
                    c = tuple(r - x for r, x in zip(rest, b))
                    for x, y, z in product(_monomials(a), _monomials(b), _monomials(c)):
                        rows.append(malcev_g(mono(x), mono(y), mono(z), p))
            for a1 in _sub_degrees(gamma):
                r1 = tuple(g - x for g, x in zip(gamma, a1))
                for a2 in _sub_degrees(r1):
                    r2 = tuple(g - x for g, x in zip(r1, a2))
                    if sum(r2) < 2:
                        continue
                    for b in _sub_degrees(r2):
                        c = tuple(r - x for r, x in zip(r2, b))
                        for x1, x2 in product(_monomials(a1), _monomials(a2)):
                            if key(x1) > key(x2):
                                continue  # f is symmetric in x1, x2
                            for y, z in product(_monomials(b), _monomials(c)):
                                rows.append(malcev_f(mono(x1), mono(x2), mono(y), mono(z), p))
        if self.q is not None and n >= self.q + 1:
            rows.extend(self._engel_generators(gamma))
        return rows

    def _engel_generators(self, gamma: tuple) -> list[dict]:
        """a_1(...(a_q b)) summed over distinct arrangements of a multiset of monomials.

        For q = p the span of these partial symmetrizations equals the span of
        the Engel words a(a(...(a b))) with a ranging over all of M(m): a pure
        power is itself a generator, and any other multiset has multiplicities
        below p, so it is a unit multiple of the full S_q symmetrization.
        """
        p, q, m = self.p, self.q, self.m
        rows = []
        for bdeg in _sub_degrees(gamma):
            rest = tuple(g - b for g, b in zip(gamma, bdeg))
            for split in _splits(rest, q):
                factor_lists = [_monomials(d) for d in split]
                seen = set()
                for choice in product(*factor_lists):
                    ms = tuple(sorted(choice, key=key))
                    if ms in seen:
                        continue
                    seen.add(ms)
                    for b in _monomials(bdeg):
                        total: dict = {}
                        for arr in set(permutations(ms)):
                            total = add((1, total), (1, engel_word([mono(a) for a in arr], mono(b), p)), p=p)
                        rows.append(total)
        return rows

    def ideal(self, gamma) -> list[dict]:
        """Basis of the ideal's component at gamma, as polynomials."""
        gamma = tuple(int(g) for g in gamma)
        if gamma in self._ideal:
            return self._ideal[gamma]
        _check_degree(sum(gamma))
        rows = self._generators(gamma)
        for a in _sub_degrees(gamma):
            lower = self.ideal(a)
            if not lower:
                continue
            rest = tuple(g - x for g, x in zip(gamma, a))
            for r in lower:
                for t in _monomials(rest):
                    rows.append(mul(r, mono(t), self.p))
        basis = self._reduce(gamma, rows)
        self._ideal[gamma] = basis
        return basis

    def _matrix(self, gamma, rows) -> np.ndarray:
        mons = _monomials(gamma)
        index = {u: i for i, u in enumerate(mons)}
        A = np.zeros((len(rows), len(mons)), dtype=np.int64)
        for r, f in enumerate(rows):
            for u, c in f.items():
                A[r, index[u]] = c
        return A

    def _reduce(self, gamma, rows) -> list[dict]:
        mons = _monomials(gamma)
        if not rows or not mons:
            return []
        A = self._matrix(gamma, rows)
        if self.shuffle_seed is not None:
            A = A[np.random.default_rng(self.shuffle_seed).permutation(A.shape[0])]
        r, _ = _kernels.rref_inplace(A, self.p)
        return [{mons[j]: int(c) for j, c in enumerate(row) if c} for row in A[:r]]

    def relation_matrix(self, gamma) -> np.ndarray:
        """Rows spanning the ideal at gamma, in the monomial basis (RREF)."""
        gamma = tuple(gamma)
        return self._matrix(gamma, self.ideal(gamma))

    def dim(self, gamma) -> int:
        gamma = tuple(gamma)
        return len(self.monomials(gamma)) - len(self.ideal(gamma))

    def in_ideal(self, f: dict) -> bool:
        """Membership test for a homogeneous polynomial."""
        if not f:
            return True
        gamma = multidegree(next(iter(f)), self.m)
        rows = self.ideal(gamma)
        A = self._matrix(gamma, rows + [f])
        r0 = len(rows)
        r, _ = _kernels.rref_inplace(A, self.p)
        return r == r0

    def dims(self, max_degree: int) -> dict[tuple, int]:
        _check_degree(max_degree)
        return {g: self.dim(g) for n in range(1, max_degree + 1) for g in multidegrees(self.m, n)}


def _splits(gamma, k):
    """Ordered k-tuples of nonzero multidegrees summing to gamma, up to reordering (sorted)."""
    out = set()

    def rec(rest, parts):
        if len(parts) == k - 1:
            if sum(rest) > 0:
                out.add(tuple(sorted(parts + [rest])))
            return
        for a in _sub_degrees(rest) if sum(rest) > 1 else ():
            rec(tuple(r - x for r, x in zip(rest, a)), parts + [a])

    if k == 1:
        return [tuple(gamma)] if sum(gamma) else []
    rec(tuple(gamma), [])
    return sorted(out)


def malcev_relation_matrix(m: int, gamma, p: int = 5) -> np.ndarray:
    return FreeMalcevEngine(m, p).relation_matrix(tuple(gamma))


def free_malcev_dims(m: int, max_degree: int, p: int = 5) -> dict[tuple, int]:
    return FreeMalcevEngine(m, p).dims(max_degree)


def engel_quotient_dims(m: int, p: int, n: int, max_degree: int) -> dict[tuple, int]:
    return FreeMalcevEngine(m, p, engel_q=p**n).dims(max_degree)


def totals(dims: dict[tuple, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for g, d in dims.items():
        out[sum(g)] = out.get(sum(g), 0) + d
    return out


def pure_engel_monomial(q: int = 5) -> object:
    """x1(x1(...(x1 x2))) with q copies of x1, in canonical form (sign dropped)."""
    t = 1
    for _ in range(q):
        t = (0, t)
    return canonicalize(t)
