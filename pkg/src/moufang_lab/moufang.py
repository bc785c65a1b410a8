"""Loops as Cayley tables and the Moufang identities."""

from __future__ import annotations

from math import gcd

import numpy as np

from . import _config, _kernels
from .groups import _check_latin, InvalidGroup
from .reports import Report, outcome


class InvalidLoop(ValueError):
    pass


class NotPowerAssociative(ValueError):
    pass


class Loop:
    """A Latin square with a two-sided identity at index 0."""

    def __init__(self, table, name: str = "", provenance=None):
        table = np.asarray(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise InvalidLoop(f"table must be square, got {table.shape}")
        try:
            _check_latin(table)
        except InvalidGroup as exc:
            raise InvalidLoop(str(exc)) from None
        table.setflags(write=False)
        self.table = table
        self.order = table.shape[0]
        self.name = name or f"L{self.order}"
        # group elements the loop elements came from, if any
        self.provenance = None if provenance is None else np.asarray(provenance, dtype=np.int64)

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"Loop({self.name!r}, order={self.order})"

    def mul(self, a, b):
        return self.table[a, b]

    def relabel(self, perm) -> "Loop":
        """Loop with element i renamed perm[i]; perm must fix 0."""
        perm = np.asarray(perm, dtype=np.int64)
        inv = np.argsort(perm)
        return Loop(perm[self.table[inv[:, None], inv[None, :]]], name=self.name)

    def equals_table(self, other, relabeling=None) -> bool:
        """Exact table equality, optionally after renaming self's elements."""
        other_table = other.table if hasattr(other, "table") else np.asarray(other)
        mine = self if relabeling is None else self.relabel(relabeling)
        return np.array_equal(mine.table, other_table)


def check_moufang(L: Loop, seed: int = 0) -> Report:
    """((zx)y)x = z((xy)x) and x(y(xz)) = (x(yx))z on every triple, or a seeded sample."""
    n = L.order
    t = L.table
    if n**3 <= _config.cap("SWEEP_LIMIT"):
        which, x, y, z = _kernels.moufang_first_violation(np.ascontiguousarray(t))
        witnesses = [] if which < 0 else [{"identity": which + 1, "x": x, "y": y, "z": z}]
        return outcome(
            "Moufang identities",
            which < 0,
            ref="((zx)y)x = z((xy)x), x(y(xz)) = (x(yx))z",
            witnesses=witnesses,
            triples=n**3,
            exhaustive=True,
        )
    rng = np.random.default_rng(seed)
    k = _config.cap("SAMPLE_SIZE")
    x, y, z = rng.integers(0, n, size=(3, k))
    bad1 = t[t[t[z, x], y], x] != t[z, t[t[x, y], x]]
    bad2 = t[x, t[y, t[x, z]]] != t[t[x, t[y, x]], z]
    witnesses = [{"identity": 1, "x": int(x[i]), "y": int(y[i]), "z": int(z[i])} for i in np.flatnonzero(bad1)[:3]]
    witnesses += [{"identity": 2, "x": int(x[i]), "y": int(y[i]), "z": int(z[i])} for i in np.flatnonzero(bad2)[:3]]
    return outcome(
        "Moufang identities",
        not witnesses,
        ref="((zx)y)x = z((xy)x), x(y(xz)) = (x(yx))z",
        witnesses=witnesses,
        triples=k,
        exhaustive=False,
        seed=seed,
    )


def is_associative(L: Loop) -> bool:
    t = L.table
    for s in range(L.order):
        if not np.array_equal(t[:, s][t], t[:, t[:, s]]):
            return False
    return True


def generated_subloop(L: Loop, S) -> Loop:
    """Closure of S under the table; elements keep their relative order."""
    members = _members(L, S)
    index = np.full(L.order, -1, dtype=np.int64)
    index[members] = np.arange(members.size)
    sub = index[L.table[members[:, None], members[None, :]]]
    prov = members if L.provenance is None else L.provenance[members]
    return Loop(sub, name=f"<{sorted(int(s) for s in S)}> in {L.name}", provenance=prov)


def loop_generators(L: Loop) -> list[int]:
    """Greedy generating set in index order."""
    gens: list[int] = []
    covered = np.zeros(L.order, dtype=bool)
    covered[0] = True
    for x in range(L.order):
        if not covered[x]:
            gens.append(x)
            covered[_members(L, gens)] = True
    return gens


def _members(L: Loop, S) -> np.ndarray:
    mask = np.zeros(L.order, dtype=bool)
    mask[0] = True
    mask[np.asarray(list(S), dtype=np.int64)] = True
    while True:
        members = np.flatnonzero(mask)
        prods = L.table[members[:, None], members[None, :]].ravel()
        if mask[prods].all():
            return members
        mask[prods] = True


def loop_exponent(L: Loop) -> int:
    """Least e with x^e = 1 for all x.

    Left-nested and right-nested powers are compared for every element up
    to its order; a disagreement raises with the offending element.
    """
    t = L.table
    x = np.arange(L.order)
    left = x.copy()
    right = x.copy()
    orders = np.zeros(L.order, dtype=np.int64)
    orders[0] = 1
    live = x != 0
    k = 1
    while live.any():
        k += 1
        left = t[left, x]
        right = t[x, right]
        bad = np.flatnonzero(live & (left != right))
        if bad.size:
            raise NotPowerAssociative(
                f"element {int(bad[0])}: left- and right-nested power {k} differ "
                f"({int(left[bad[0]])} vs {int(right[bad[0]])})"
            )
        hit = live & (left == 0)
        orders[hit] = k
        live &= ~hit
        if k > L.order:
            raise NotPowerAssociative("powers never reach the identity")
    e = 1
    for o in np.unique(orders):
        e = e * int(o) // gcd(e, int(o))
    return e
