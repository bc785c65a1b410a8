"""Groups with triality and the Moufang loops they carry.

A triality group is a group G with automorphisms rho, sigma such that
rho^3 = sigma^2 = (rho sigma)^2 = 1 and, with [x, sigma] = x^-1 x^sigma,

    [x, sigma] [x, sigma]^rho [x, sigma]^(rho^2) = 1     for every x in G.

``rho sigma`` means "apply rho first, then sigma" everywhere in this package.
Generated structures are never trusted: each constructor certifies its
output with :func:`verify_triality`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .groups import (
    FiniteGroup,
    GroupMap,
    derived_subgroup,
    direct_product,
)
from .moufang import Loop
from .reports import Report, combine, outcome

REF = "group with triality"


class TrialityError(ValueError):
    pass


@dataclass(frozen=True)
class TrialityGroup:
    G: FiniteGroup
    rho: GroupMap
    sigma: GroupMap
    name: str = ""
    # For doubling constructions: base-group element carried by each element
    # of G (used to compare the extracted loop with the base group).
    base: FiniteGroup | None = field(default=None, compare=False)
    base_coordinate: np.ndarray | None = field(default=None, compare=False, repr=False)

    @classmethod
    def from_permutations(cls, G: FiniteGroup, rho, sigma, name: str = "") -> "TrialityGroup":
        return cls(G, GroupMap(G, rho), GroupMap(G, sigma), name=name or G.name)


def sigma_commutators(G: FiniteGroup, sigma: GroupMap, x=None) -> np.ndarray:
    """[x, sigma] = x^-1 x^sigma, vectorized over x (default: all of G)."""
    x = np.arange(G.order) if x is None else np.asarray(x)
    return G.mul(G.inv(x), sigma.images[x])


def verify_triality(G: FiniteGroup, rho, sigma) -> Report:
    rho = rho if isinstance(rho, GroupMap) else GroupMap(G, rho)
    sigma = sigma if isinstance(sigma, GroupMap) else GroupMap(G, sigma)
    clauses = []
    for label, f in (("rho", rho), ("sigma", sigma)):
        if not f.is_bijective():
            clauses.append(outcome(f"{label} is an automorphism", False, reason="not a bijection"))
            continue
        bad = f.homomorphism_violation()
        clauses.append(
            outcome(f"{label} is an automorphism", bad is None, witnesses=[] if bad is None else [bad])
        )
    if not all(c.passed for c in clauses):
        clauses.append(outcome("triality identity", False, reason="maps are not automorphisms"))
        return combine("triality", clauses, ref=REF)

    def first_moved(f: GroupMap):
        moved = np.flatnonzero(f.images != np.arange(G.order))
        return [] if moved.size == 0 else [int(moved[0])]

    rs = rho.then(sigma)
    for label, f in (("rho^3 = 1", rho.power(3)), ("sigma^2 = 1", sigma.power(2)), ("(rho sigma)^2 = 1", rs.power(2))):
        w = first_moved(f)
        clauses.append(outcome(label, not w, witnesses=w))

    c = sigma_commutators(G, sigma)
    prod = G.mul(G.mul(c, rho.images[c]), rho.images[rho.images[c]])
    bad = np.flatnonzero(prod != 0)
    clauses.append(
        outcome(
            "triality identity",
            bad.size == 0,
            ref="[x,sigma][x,sigma]^rho[x,sigma]^rho^2 = 1",
            witnesses=[int(b) for b in bad[:5]],
            checked=G.order,
        )
    )
    return combine("triality", clauses, ref=REF)


def sigma_commutator_set(T: TrialityGroup) -> np.ndarray:
    """U = {[x, sigma] : x in G}, sorted (so the identity comes first)."""
    return np.unique(sigma_commutators(T.G, T.sigma))


def moufang_from_triality(T: TrialityGroup, check: bool = True) -> Loop:
    """U with a . b = (a^-1)^rho b (a^-1)^(rho^2)."""
    if check:
        rep = verify_triality(T.G, T.rho, T.sigma)
        if not rep.passed:
            raise TrialityError(f"{T.name}: not a group with triality\n{rep}")
    G, r = T.G, T.rho.images
    U = sigma_commutator_set(T)
    index = np.full(G.order, -1, dtype=np.int64)
    index[U] = np.arange(U.size)
    ainv = G.inv(U)
    prod = G.mul(G.mul(r[ainv][:, None], U[None, :]), r[r[ainv]][:, None])
    table = index[prod]
    if (table < 0).any():
        a, b = np.argwhere(table < 0)[0]
        raise TrialityError(f"U is not closed: {int(U[a])} . {int(U[b])} = {int(prod[a, b])} not in U")
    return Loop(table, name=f"U({T.name})", provenance=U)


def loop_to_base(T: TrialityGroup, L: Loop) -> np.ndarray:
    """Base-group label of every loop element (doubling constructions only)."""
    if T.base_coordinate is None or L.provenance is None:
        raise ValueError("no base-group labelling available")
    return T.base_coordinate[L.provenance]


# ---------------------------------------------------------------------------
# test-data generators


def abelian_doubling(A: FiniteGroup) -> TrialityGroup:
    """G = A x A, rho(x, y) = (y^-1, x y^-1), sigma(x, y) = (y, x)."""
    if not A.is_abelian():
        raise ValueError(f"{A.name} is not abelian")
    m = A.order
    G = direct_product(A, A)
    idx = np.arange(G.order)
    x, y = idx // m, idx % m
    yi = A.inv(y)
    rho = A.inv(y) * m + A.mul(x, yi)
    sigma = y * m + x
    T = TrialityGroup.from_permutations(G, rho, sigma, name=f"ab_double({A.name})")
    T = TrialityGroup(T.G, T.rho, T.sigma, T.name, base=A, base_coordinate=x)
    _certify(T)
    return T


def group_doubling(Q: FiniteGroup) -> TrialityGroup:
    """Triality group whose loop is Q itself.

    Q^3 with S_3 permuting coordinates is a group with triality whose
    sigma-commutators are the triples (u, u^-1, 1), multiplying like Q.
    We keep the S_3-invariant subgroup K = {(a, b, c) : abc in Q'} and
    divide by the central diagonal of C = Z(Q) & Q', which leaves |Q|^2
    elements whenever Q has class <= 2.
    """
    n = Q.order
    everything = np.arange(n)
    derived = derived_subgroup(Q, everything)
    gens = Q.generators
    central = everything[(Q.mul(everything[:, None], gens[None, :]) == Q.mul(gens[None, :], everything[:, None])).all(axis=1)]
    C = np.intersect1d(central, derived)
    in_derived = np.zeros(n, dtype=bool)
    in_derived[derived] = True
    # coset representative of c modulo C, and the central part c = rep * z
    rep = Q.mul(everything[:, None], C[None, :]).min(axis=1)
    reps = np.unique(rep)

    a, b, t = np.meshgrid(everything, everything, reps, indexing="ij")
    a, b, t = a.ravel(), b.ravel(), t.ravel()
    keep = in_derived[Q.mul(Q.mul(a, b), t)]
    codes = np.sort(a[keep] * n * n + b[keep] * n + t[keep])
    order = codes.size
    lookup = np.full(n**3, -1, dtype=np.int64)
    lookup[codes] = np.arange(order)
    triples = np.stack([codes // (n * n), (codes // n) % n, codes % n], axis=1)

    def encode(x, y, z):
        r = rep[z]
        zinv = Q.mul(Q.inv(z), r)  # (r^-1 z)^-1, central
        return lookup[Q.mul(x, zinv) * n * n + Q.mul(y, zinv) * n + r]

    def mul(u, v):
        tu, tv = triples[u], triples[v]
        return encode(*(Q.mul(tu[..., k], tv[..., k]) for k in range(3)))

    tx, ty, tz = triples[:, 0], triples[:, 1], triples[:, 2]
    inverse = encode(Q.inv(tx), Q.inv(ty), Q.inv(tz))
    G = FiniteGroup.from_multiplication(
        order, mul, inverse, generators=_candidate_generators(order, mul), name=f"D({Q.name})"
    )
    rho = encode(ty, tz, tx)
    sigma = encode(ty, tx, tz)
    T = TrialityGroup(
        G,
        GroupMap(G, rho),
        GroupMap(G, sigma),
        name=f"double({Q.name})",
        base=Q,
        base_coordinate=tx,
    )
    _certify(T)
    return T


def _candidate_generators(order: int, mul) -> list[int]:
    """Greedy generating set in index order for an implicit group."""
    gens: list[int] = []
    mask = np.zeros(order, dtype=bool)
    mask[0] = True
    while not mask.all():
        gens.append(int(np.flatnonzero(~mask)[0]))
        g = np.asarray(gens, dtype=np.int64)
        mask[:] = False
        mask[0] = True
        frontier = np.zeros(1, dtype=np.int64)
        while frontier.size:
            cand = np.unique(mul(frontier[:, None], g[None, :]).ravel())
            frontier = cand[~mask[cand]]
            mask[frontier] = True
    return gens


def _certify(T: TrialityGroup):
    rep = verify_triality(T.G, T.rho, T.sigma)
    if not rep.passed:
        raise TrialityError(f"{T.name} failed certification\n{rep}")


def trivial_triality() -> TrialityGroup:
    G = FiniteGroup(np.zeros((1, 1), dtype=np.int64), name="1")
    return TrialityGroup.from_permutations(G, [0], [0], name="trivial")
