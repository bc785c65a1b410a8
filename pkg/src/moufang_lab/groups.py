"""Finite groups on element indices, with the commutator calculus we need.

Elements are integers ``0..n-1`` with ``0`` the identity.  A group is either
table-backed (an explicit Cayley table, at most ``MAX_TABLE_ORDER``
elements) or implicit: a vectorized multiplication callable, used for the
large direct-product-style groups the triality constructions produce.

Commutators follow ``[x, y] = x^-1 y^-1 x y`` throughout the package.
Subgroups are sorted ``int64`` index arrays.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Callable, Sequence

import numpy as np

from . import _config
from .reports import Report, outcome


class InvalidGroup(ValueError):
    pass


class GroupTooLarge(ValueError):
    pass


class FiniteGroup:
    def __init__(self, table, name: str = "", *, validate: bool = True, labels=None):
        table = np.asarray(table, dtype=np.int64)
        n = table.shape[0]
        limit = _config.cap("MAX_TABLE_ORDER")
        if n > limit:
            raise GroupTooLarge(
                f"Cayley table of order {n} exceeds MAX_TABLE_ORDER={limit} "
                f"(set {_config.ENV_PREFIX}MAX_TABLE_ORDER to raise it)"
            )
        if table.shape != (n, n):
            raise InvalidGroup(f"table must be square, got {table.shape}")
        table.setflags(write=False)
        self._table = table
        self._mul_fn = None
        self.order = n
        self.name = name or f"G{n}"
        self.labels = labels
        if validate:
            _check_latin(table)
        self.inverse = np.argmax(table == 0, axis=1).astype(np.int64)
        self.inverse.setflags(write=False)
        self._generators = None
        if validate:
            self._check_associative()

    @classmethod
    def from_multiplication(
        cls,
        order: int,
        mul: Callable[[np.ndarray, np.ndarray], np.ndarray],
        inverse: np.ndarray,
        generators: Sequence[int],
        name: str = "",
        labels=None,
    ) -> "FiniteGroup":
        """A group given by a vectorized product; associativity is the caller's claim."""
        self = cls.__new__(cls)
        self._table = None
        self._mul_fn = mul
        self.order = int(order)
        self.name = name or f"G{order}"
        self.labels = labels
        self.inverse = np.asarray(inverse, dtype=np.int64)
        self.inverse.setflags(write=False)
        self._generators = np.asarray(sorted(set(int(g) for g in generators)), dtype=np.int64)
        if self.closure(self._generators).size != self.order:
            raise InvalidGroup("supplied generators do not generate the group")
        return self

    # -- basic arithmetic -------------------------------------------------

    @property
    def is_table_backed(self) -> bool:
        return self._table is not None

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            limit = _config.cap("MAX_TABLE_ORDER")
            if self.order > limit:
                raise GroupTooLarge(f"{self.name}: order {self.order} > MAX_TABLE_ORDER={limit}")
            idx = np.arange(self.order)
            t = self.mul(idx[:, None], idx[None, :])
            t.setflags(write=False)
            self._table = t
        return self._table

    def mul(self, a, b) -> np.ndarray:
        if self._table is not None:
            return self._table[a, b]
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        return self._mul_fn(a, b)

    def inv(self, a) -> np.ndarray:
        return self.inverse[a]

    def power(self, x, k: int) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if k < 0:
            x, k = self.inv(x), -k
        result = np.zeros_like(x)
        base = x
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def conj(self, x, g) -> np.ndarray:
        """x^g = g^-1 x g."""
        return self.mul(self.mul(self.inv(g), x), g)

    def commutator(self, x, y) -> np.ndarray:
        """[x, y] = x^-1 y^-1 x y, vectorized."""
        return self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"

    # -- structure --------------------------------------------------------

    @property
    def generators(self) -> np.ndarray:
        if self._generators is None:
            self._generators = self._greedy_generators(np.arange(self.order))
        return self._generators

    def _greedy_generators(self, candidates) -> np.ndarray:
        gens: list[int] = []
        members = np.zeros(self.order, dtype=bool)
        members[0] = True
        candidates = np.asarray(candidates, dtype=np.int64)
        while True:
            fresh = candidates[~members[candidates]]
            if fresh.size == 0:
                return np.asarray(gens, dtype=np.int64)
            gens.append(int(fresh[0]))
            members[:] = False
            members[self.closure(gens)] = True

    def closure(self, gens) -> np.ndarray:
        """Subgroup generated by ``gens`` (right-multiplication orbit of 1)."""
        gens = np.unique(np.asarray(gens, dtype=np.int64))
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        gens = gens[gens != 0]
        frontier = np.zeros(1, dtype=np.int64)
        while frontier.size and gens.size:
            cand = np.unique(self.mul(frontier[:, None], gens[None, :]).ravel())
            frontier = cand[~mask[cand]]
            mask[frontier] = True
        return np.flatnonzero(mask)

    def subgroup(self, elements) -> np.ndarray:
        """Subgroup generated by an arbitrary (possibly large) element set."""
        elements = np.unique(np.asarray(elements, dtype=np.int64))
        return self.closure(self._greedy_subgens(elements))

    def _greedy_subgens(self, elements) -> np.ndarray:
        gens: list[int] = []
        members = np.zeros(self.order, dtype=bool)
        members[0] = True
        while True:
            fresh = elements[~members[elements]]
            if fresh.size == 0:
                return np.asarray(gens, dtype=np.int64)
            gens.append(int(fresh[0]))
            members[self.closure(gens)] = True

    def subgroup_generators(self, sub) -> np.ndarray:
        return self._greedy_subgens(np.asarray(sub, dtype=np.int64))

    def is_subgroup(self, elements) -> bool:
        elements = np.unique(np.asarray(elements, dtype=np.int64))
        if elements.size == 0 or elements[0] != 0:
            return False
        return np.array_equal(self.subgroup(elements), elements)

    def is_abelian(self) -> bool:
        g = self.generators
        return bool((self.mul(g[:, None], g[None, :]) == self.mul(g[None, :], g[:, None])).all())

    def element_orders(self) -> np.ndarray:
        x = np.arange(self.order)
        orders = np.ones(self.order, dtype=np.int64)
        cur = x.copy()
        k = 1
        live = cur != 0
        while live.any():
            k += 1
            cur = self.mul(cur, x)
            hit = live & (cur == 0)
            orders[hit] = k
            live &= ~hit
            if k > self.order:  # pragma: no cover - impossible in a group
                raise InvalidGroup("element of order > |G|")
        orders[0] = 1
        return orders

    def _check_associative(self):
        # Light's test against a generating set
        t = self._table
        for s in self.generators:
            if not np.array_equal(t[:, s][t], t[:, t[:, s]]):
                raise InvalidGroup(f"table is not associative (fails at generator {int(s)})")


def _check_latin(table: np.ndarray):
    n = table.shape[0]
    if table.min() < 0 or table.max() >= n:
        raise InvalidGroup("table entries out of range")
    idx = np.arange(n)
    if not (np.array_equal(table[0], idx) and np.array_equal(table[:, 0], idx)):
        raise InvalidGroup("index 0 is not a two-sided identity")
    srt = np.sort(table, axis=1)
    if not (srt == idx).all() or not (np.sort(table, axis=0) == idx[:, None]).all():
        raise InvalidGroup("table is not a Latin square")


# ---------------------------------------------------------------------------
# constructors


def cyclic(n: int) -> FiniteGroup:
    idx = np.arange(n)
    return FiniteGroup((idx[:, None] + idx[None, :]) % n, name=f"C{n}")


def elementary_abelian(p: int, k: int) -> FiniteGroup:
    n = p**k
    idx = np.arange(n)
    digits = np.stack([(idx // p**i) % p for i in range(k)], axis=1)
    s = (digits[:, None, :] + digits[None, :, :]) % p
    table = (s * (p ** np.arange(k))).sum(axis=2)
    return FiniteGroup(table, name=f"C{p}^{k}" if k != 1 else f"C{p}")


def heisenberg(p: int) -> FiniteGroup:
    """Upper unitriangular 3x3 matrices over F_p: (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')."""
    n = p**3
    idx = np.arange(n)
    a, b, c = idx // (p * p), (idx // p) % p, idx % p
    A = (a[:, None] + a[None, :]) % p
    B = (b[:, None] + b[None, :]) % p
    C = (c[:, None] + c[None, :] + a[:, None] * b[None, :]) % p
    labels = list(zip(a.tolist(), b.tolist(), c.tolist()))
    return FiniteGroup(A * p * p + B * p + C, name=f"Heis({p})", labels=labels)


def modular_group(p: int) -> FiniteGroup:
    """<x, y | x^(p^2) = y^p = 1, y^-1 x y = x^(1+p)>, elements x^i y^j at index i*p + j."""
    q = p * p
    n = q * p
    idx = np.arange(n)
    i, j = idx // p, idx % p
    inv_unit = pow(1 + p, -1, q)
    twist = np.array([pow(inv_unit, int(k), q) for k in range(p)])
    # (x^i y^j)(x^k y^l) = x^(i + k (1+p)^-j) y^(j+l)
    I = (i[:, None] + i[None, :] * twist[j][:, None]) % q
    J = (j[:, None] + j[None, :]) % p
    labels = list(zip(i.tolist(), j.tolist()))
    return FiniteGroup(I * p + J, name=f"M({p}^3)", labels=labels)


def symmetric_group(k: int) -> FiniteGroup:
    perms = [tuple(range(k))] + [q for q in itertools.permutations(range(k)) if q != tuple(range(k))]
    index = {q: i for i, q in enumerate(perms)}
    n = len(perms)
    table = np.empty((n, n), dtype=np.int64)
    for a, pa in enumerate(perms):
        for b, pb in enumerate(perms):
            # apply pa first, then pb
            table[a, b] = index[tuple(pb[pa[t]] for t in range(k))]
    return FiniteGroup(table, name=f"S{k}", labels=perms)


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """Pairs (x, y) at index x * |h| + y."""
    n = g.order * h.order
    m = h.order
    name = f"{g.name}x{h.name}"
    if n <= _config.cap("MAX_TABLE_ORDER") and g.is_table_backed and h.is_table_backed:
        idx = np.arange(n)
        x, y = idx // m, idx % m
        table = g.table[x[:, None], x[None, :]] * m + h.table[y[:, None], y[None, :]]
        return FiniteGroup(table, name=name)

    def mul(a, b):
        return g.mul(a // m, b // m) * m + h.mul(a % m, b % m)

    idx = np.arange(n)
    inverse = g.inverse[idx // m] * m + h.inverse[idx % m]
    gens = [int(s) * m for s in g.generators] + [int(t) for t in h.generators]
    return FiniteGroup.from_multiplication(n, mul, inverse, gens, name=name)


def group_from_elements(elements: Sequence, mul: Callable, name: str = "") -> FiniteGroup:
    """Table group from hashable elements; ``elements[0]`` must be the identity."""
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for a, ea in enumerate(elements):
        for b, eb in enumerate(elements):
            table[a, b] = index[mul(ea, eb)]
    return FiniteGroup(table, name=name, labels=list(elements))


# ---------------------------------------------------------------------------
# maps


@dataclass(frozen=True)
class GroupMap:
    domain: FiniteGroup
    images: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.images, dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "images", arr)

    def __call__(self, x):
        return self.images[x]

    def then(self, other: "GroupMap") -> "GroupMap":
        """Apply self first, then other."""
        return GroupMap(self.domain, other.images[self.images])

    def power(self, k: int) -> "GroupMap":
        out = np.arange(self.domain.order)
        for _ in range(k):
            out = self.images[out]
        return GroupMap(self.domain, out)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, np.arange(self.domain.order)))

    def is_bijective(self) -> bool:
        return self.images.shape == (self.domain.order,) and np.array_equal(
            np.sort(self.images), np.arange(self.domain.order)
        )

    def homomorphism_violation(self):
        """First pair (x, y) with f(xy) != f(x) f(y), or None.

        Checked on all pairs when that is within SWEEP_LIMIT, otherwise on
        G x generators, which is equivalent: f(xs) = f(x) f(s) for every s
        in a generating set forces f(xw) = f(x) f(w) for every word w.
        """
        G, f = self.domain, self.images
        n = G.order
        right = np.arange(n) if n * n <= _config.cap("SWEEP_LIMIT") else G.generators
        x = np.arange(n)
        for s in right:
            bad = np.flatnonzero(f[G.mul(x, s)] != G.mul(f[x], f[s]))
            if bad.size:
                return int(bad[0]), int(s)
        return None

    def is_automorphism(self) -> bool:
        return self.is_bijective() and self.homomorphism_violation() is None


# ---------------------------------------------------------------------------
# commutator calculus


def _check_index(G: FiniteGroup, *xs):
    for x in xs:
        if not 0 <= int(x) < G.order:
            raise IndexError(f"element {x} out of range for {G.name}")


def commutator(G: FiniteGroup, x: int, y: int) -> int:
    _check_index(G, x, y)
    return int(G.commutator(x, y))


def _sweep_triples(n: int, seed: int):
    """Yield (x, ys, zs) blocks covering all triples, or a seeded sample."""
    limit = _config.cap("SWEEP_LIMIT")
    if n**3 <= limit:
        idx = np.arange(n)
        ys, zs = np.meshgrid(idx, idx, indexing="ij")
        blocks = ((np.full(n * n, x), ys.ravel(), zs.ravel()) for x in range(n))
        return blocks, n**3, True
    rng = np.random.default_rng(seed)
    k = _config.cap("SAMPLE_SIZE")
    trip = rng.integers(0, n, size=(3, k))
    return iter([(trip[0], trip[1], trip[2])]), k, False


def check_hall_identity(G: FiniteGroup, seed: int = 0) -> Report:
    """[xy, z] = [y, [z, x]] [x, z] [y, z] over all (or sampled) triples."""
    blocks, count, exhaustive = _sweep_triples(G.order, seed)
    witnesses = []
    for x, y, z in blocks:
        lhs = G.commutator(G.mul(x, y), z)
        rhs = G.mul(G.mul(G.commutator(y, G.commutator(z, x)), G.commutator(x, z)), G.commutator(y, z))
        bad = np.flatnonzero(lhs != rhs)
        witnesses.extend((int(x[i]), int(y[i]), int(z[i])) for i in bad[:5])
        if len(witnesses) >= 5:
            break
    return outcome(
        "Hall identity",
        not witnesses,
        ref="[xy,z] = [y,[z,x]][x,z][y,z]",
        witnesses=witnesses,
        triples=count,
        exhaustive=exhaustive,
        seed=seed,
    )


def normal_closure(G: FiniteGroup, S, within=None) -> np.ndarray:
    """Least subgroup containing S that is normalized by ``within`` (default G's generators)."""
    conj_by = G.generators if within is None else np.asarray(within, dtype=np.int64)
    sub = G.subgroup(np.append(np.asarray(S, dtype=np.int64), 0))
    while True:
        gens = G.subgroup_generators(sub)
        if gens.size == 0:
            return sub
        conj = G.conj(gens[:, None], conj_by[None, :]).ravel()
        mask = np.zeros(G.order, dtype=bool)
        mask[sub] = True
        if mask[conj].all():
            return sub
        sub = G.subgroup(np.concatenate([sub, conj]))


def commutator_subgroup(G: FiniteGroup, A, B) -> np.ndarray:
    """[A, B] for A, B normal in G (generators' commutators, then normal closure)."""
    ga = G.subgroup_generators(A)
    gb = G.subgroup_generators(B)
    if ga.size == 0 or gb.size == 0:
        return np.zeros(1, dtype=np.int64)
    comms = G.commutator(ga[:, None], gb[None, :]).ravel()
    return normal_closure(G, comms)


def derived_subgroup(G: FiniteGroup, N) -> np.ndarray:
    """[N, N] as the normal closure inside N of the generators' commutators."""
    gens = G.subgroup_generators(N)
    if gens.size == 0:
        return np.zeros(1, dtype=np.int64)
    comms = G.commutator(gens[:, None], gens[None, :]).ravel()
    return normal_closure(G, comms, within=gens)


def power_subgroup(G: FiniteGroup, N, k: int) -> np.ndarray:
    return G.subgroup(G.power(np.asarray(N, dtype=np.int64), k))


def n_prime(G: FiniteGroup, N, p: int) -> np.ndarray:
    """N' = <[N, N], g^p for g in N>."""
    N = np.unique(np.asarray(N, dtype=np.int64))
    if not G.is_subgroup(N):
        raise ValueError("N is not a subgroup")
    return G.subgroup(np.concatenate([derived_subgroup(G, N), G.power(N, p)]))


def check_power_commutator_congruence(G: FiniteGroup, x: int, y: int, p: int, n: int = 1) -> Report:
    """[x,[x,...[x,y]...]] (p^n-fold) = [x^(p^n), y] modulo N', N = normal closure of y."""
    _check_index(G, x, y)
    q = p**n
    N = normal_closure(G, [y])
    Np = n_prime(G, N, p)
    nested = y
    for _ in range(q):
        nested = int(G.commutator(x, nested))
    direct = int(G.commutator(int(G.power(x, q)), y))
    quotient = int(G.mul(G.inv(direct), nested))
    ok = bool(np.isin(quotient, Np))
    return outcome(
        "power-commutator congruence",
        ok,
        ref="Lemma 4.1",
        witnesses=[] if ok else [(x, y, nested, direct)],
        nested=nested,
        direct=direct,
        N_order=int(N.size),
        N_prime_order=int(Np.size),
    )


def element_order(G: FiniteGroup, x: int) -> int:
    _check_index(G, x)
    k, cur = 1, int(x)
    while cur != 0:
        cur = int(G.mul(cur, x))
        k += 1
    return k


def exponent(G: FiniteGroup) -> int:
    e = 1
    for o in np.unique(G.element_orders()):
        e = e * int(o) // gcd(e, int(o))
    return e


def is_p_group(G: FiniteGroup, p: int) -> bool:
    n = G.order
    while n % p == 0:
        n //= p
    return n == 1
