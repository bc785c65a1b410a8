"""The modular group algebra F_pG, powers of its fundamental ideal, and the
Zassenhaus filtration G_i = {g : 1 - g in omega^i}.

Two routes compute the filtration:

* ``"omega"`` builds omega^i densely inside F_pG (ambient dimension |G|,
  capped by ``MAX_OMEGA_ORDER``) and tests 1 - g for membership;
* ``"lazard"`` runs the group-level recursion
  D_1 = G, D_n = [D_(n-1), G] * D_(ceil(n/p))^p, which needs no algebra.

``method="auto"`` uses omega when the group fits and lazard otherwise; the
tests check the two agree wherever both run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import comb

import numpy as np

from . import _config, _kernels
from .groups import FiniteGroup, commutator_subgroup, power_subgroup
from .linalg_fp import Subspace, is_prime
from .reports import Report, combine, outcome

IDENTITY_DEGREE = 10**9


class FiltrationError(ValueError):
    pass


class GroupAlgebra:
    """F_pG with elements as dense coefficient vectors of length |G|."""

    def __init__(self, G: FiniteGroup, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.G = G
        self.p = int(p)
        self.dim = G.order
        self._omega: list[Subspace] | None = None

    def __repr__(self):
        return f"GroupAlgebra(F_{self.p}[{self.G.name}])"

    def basis_element(self, g) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[g] = 1
        return v

    def one_minus(self, g) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[0] += 1
        v[g] -= 1
        return v % self.p

    def mul(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        if self.G.is_table_backed:
            return _kernels.group_algebra_mul(
                np.ascontiguousarray(u, dtype=np.int64), np.ascontiguousarray(v, dtype=np.int64), self.G.table, self.p
            )
        out = np.zeros(self.dim, dtype=np.int64)
        support = np.flatnonzero(v)
        for g in np.flatnonzero(u):
            np.add.at(out, self.G.mul(g, support), u[g] * v[support])
            out %= self.p
        return out

    def power(self, u: np.ndarray, k: int) -> np.ndarray:
        out = self.basis_element(0)
        for _ in range(k):
            out = self.mul(out, u)
        return out

    def right_translate(self, V: np.ndarray, g: int) -> np.ndarray:
        """Rows v -> v * g."""
        out = np.empty_like(V)
        out[..., self.G.mul(np.arange(self.dim), g)] = V
        return out

    # -- powers of the fundamental ideal ----------------------------------

    def _require_dense(self):
        limit = _config.cap("MAX_OMEGA_ORDER")
        if self.dim > limit:
            raise FiltrationError(
                f"|G| = {self.dim} exceeds MAX_OMEGA_ORDER={limit}; use the lazard route "
                f"or raise {_config.ENV_PREFIX}MAX_OMEGA_ORDER"
            )

    def omega_powers(self) -> list[Subspace]:
        """[omega^1, omega^2, ...] ending at the first zero or repeated power."""
        if self._omega is None:
            self._require_dense()
            n, p = self.dim, self.p
            first = np.zeros((max(n - 1, 0), n), dtype=np.int64)
            first[:, 0] = 1
            first[np.arange(n - 1), np.arange(1, n)] = p - 1
            powers = [Subspace.span(first, p, n)]
            gens = self.G.generators
            while powers[-1].dim:
                # omega^i = span{ v (1 - s) : v in omega^(i-1), s generating G }
                B = powers[-1].basis
                rows = np.concatenate([(B - self.right_translate(B, s)) % p for s in gens])
                nxt = Subspace.span(rows, p, n)
                if nxt.dim == powers[-1].dim:
                    break
                powers.append(nxt)
            self._omega = powers
        return self._omega

    def omega_power(self, i: int) -> Subspace:
        if i < 1:
            raise ValueError("omega power index must be >= 1")
        powers = self.omega_powers()
        # past the end the chain is constant: zero, or the stable power
        return powers[min(i, len(powers)) - 1]


def omega_power(GA: GroupAlgebra, i: int) -> Subspace:
    return GA.omega_power(i)


# ---------------------------------------------------------------------------
# filtration


@dataclass
class Layer:
    """Basis of G_i/G_(i+1): coset representatives and a coordinate map."""

    degree: int
    reps: np.ndarray
    codes: np.ndarray = field(repr=False)  # length |G|; -1 outside G_i
    p: int

    @property
    def dim(self) -> int:
        return int(self.reps.size)

    def coords(self, g) -> np.ndarray:
        code = self.codes[np.asarray(g)]
        if np.any(code < 0):
            raise FiltrationError(f"element outside G_{self.degree}")
        return (code[..., None] // self.p ** np.arange(self.dim)) % self.p


@dataclass
class Filtration:
    G: FiniteGroup
    p: int
    terms: list[np.ndarray]
    method: str
    stable: bool = False
    omega_dims: list[int] | None = None

    def term(self, i: int) -> np.ndarray:
        if i < 1:
            raise ValueError("filtration index must be >= 1")
        return self.terms[min(i, len(self.terms)) - 1]

    @property
    def reaches_trivial(self) -> bool:
        return self.terms[-1].size == 1

    @property
    def top_degree(self) -> int:
        """Largest i with G_i != G_(i+1)."""
        top = 0
        for i in range(1, len(self.terms)):
            if self.terms[i - 1].size != self.terms[i].size:
                top = i
        return top

    @property
    def subgroup_orders(self) -> list[int]:
        return [int(t.size) for t in self.terms]

    @cached_property
    def degree(self) -> np.ndarray:
        deg = np.zeros(self.G.order, dtype=np.int64)
        for i, t in enumerate(self.terms, start=1):
            deg[t] = i
        if self.reaches_trivial:
            deg[0] = IDENTITY_DEGREE
        else:
            deg[self.terms[-1]] = IDENTITY_DEGREE
        return deg

    def quotient_dims(self) -> dict[int, int]:
        out = {}
        for i in range(1, self.top_degree + 1):
            ratio = self.term(i).size // self.term(i + 1).size
            d = 0
            while ratio > 1:
                ratio //= self.p
                d += 1
            out[i] = d
        return out

    @cached_property
    def layers(self) -> dict[int, Layer]:
        return {i: self._layer(i) for i in range(1, self.top_degree + 1)}

    def _layer(self, i: int) -> Layer:
        G, p = self.G, self.p
        Gi, below = self.term(i), self.term(i + 1)
        reps: list[int] = []
        mask = np.zeros(G.order, dtype=bool)
        mask[below] = True
        current = below
        # first-come representatives in index order
        for g in Gi:
            if not mask[g]:
                reps.append(int(g))
                current = G.subgroup(np.concatenate([current, [g]]))
                mask[current] = True
        reps_arr = np.asarray(reps, dtype=np.int64)
        d = reps_arr.size
        codes = np.full(G.order, -1, dtype=np.int64)
        elems = np.zeros(1, dtype=np.int64)
        code_of = np.zeros(1, dtype=np.int64)
        for k, r in enumerate(reps_arr):
            elems = G.mul(elems[:, None], _powers(G, int(r), p)[None, :]).ravel()
            code_of = (code_of[:, None] + np.arange(p)[None, :] * p**k).ravel()
        cosets = G.mul(elems[:, None], below[None, :])
        codes[cosets] = code_of[:, None]
        if (codes[Gi] < 0).any() or cosets.size != Gi.size:
            raise FiltrationError(f"G_{i}/G_{i + 1} is not elementary abelian of rank {d}")
        return Layer(i, reps_arr, codes, p)


def _powers(G: FiniteGroup, g: int, k: int) -> np.ndarray:
    out = np.zeros(k, dtype=np.int64)
    for j in range(1, k):
        out[j] = G.mul(out[j - 1], g)
    return out


def zassenhaus_filtration(GA: GroupAlgebra, method: str = "auto") -> Filtration:
    G, p = GA.G, GA.p
    if method == "auto":
        method = "omega" if G.order <= _config.cap("MAX_OMEGA_ORDER") else "lazard"
    if method == "omega":
        F = _filtration_omega(GA)
    elif method == "lazard":
        F = _filtration_lazard(G, p)
    else:
        raise ValueError(f"unknown method {method!r}")
    return F


def _filtration_omega(GA: GroupAlgebra) -> Filtration:
    G, p, n = GA.G, GA.p, GA.dim
    powers = GA.omega_powers()
    terms = []
    for W in powers:
        # residue of 1 - g is R[0] - R[g] with R the residues of unit vectors
        R = np.eye(n, dtype=np.int64)
        if W.dim:
            R[W.pivots] = (R[W.pivots] - W.basis) % p
        members = np.flatnonzero(~((R[0][None, :] - R) % p).any(axis=1))
        terms.append(members)
    stable = powers[-1].dim > 0
    if not stable:
        terms.append(np.zeros(1, dtype=np.int64))
    return Filtration(G, p, terms, "omega", stable=stable, omega_dims=[W.dim for W in powers])


def _filtration_lazard(G: FiniteGroup, p: int) -> Filtration:
    everything = np.arange(G.order)
    terms = [everything]
    while terms[-1].size > 1:
        n = len(terms) + 1
        comm = commutator_subgroup(G, terms[-1], everything)
        pw = power_subgroup(G, terms[-(-n // p) - 1], p)
        nxt = G.subgroup(np.concatenate([comm, pw]))
        if nxt.size == terms[-1].size:
            closed = G.subgroup(np.concatenate([comm, power_subgroup(G, nxt, p)]))
            if closed.size == nxt.size:
                return Filtration(G, p, terms, "lazard", stable=True)
        terms.append(nxt)
        if len(terms) > G.order + 1:  # pragma: no cover
            raise FiltrationError("filtration failed to stabilize within |G| steps")
    return Filtration(G, p, terms, "lazard")


def check_filtration(F: Filtration) -> Report:
    """[G_i, G_j] in G_(i+j); G_i/G_(i+1) elementary abelian; g in G_i => g^p in G_(ip)."""
    G, p, deg = F.G, F.p, F.degree
    top = F.top_degree
    limit = _config.cap("SWEEP_LIMIT")
    bad_comm = []
    for i in range(1, top + 1):
        for j in range(i, top + 1):
            A, B = F.term(i), F.term(j)
            if A.size * B.size > limit:
                A, B = G.subgroup_generators(A), G.subgroup_generators(B)
            c = G.commutator(A[:, None], B[None, :])
            hit = np.argwhere(deg[c] < i + j)
            if hit.size:
                a, b = hit[0]
                bad_comm.append((i, j, int(A[a]), int(B[b])))
    clauses = [outcome("[G_i, G_j] in G_(i+j)", not bad_comm, witnesses=bad_comm)]

    everything = np.arange(G.order)
    pth = G.power(everything, p)
    d = np.minimum(deg, IDENTITY_DEGREE // p)
    bad_pow = np.flatnonzero(deg[pth] < p * d)
    clauses.append(
        outcome(
            "g in G_i => g^p in G_(ip)",
            bad_pow.size == 0,
            witnesses=[int(x) for x in bad_pow[:5]],
        )
    )
    bad_ab = []
    for i in range(1, top + 1):
        Gi = F.term(i)
        gens = G.subgroup_generators(Gi)
        if (deg[G.commutator(gens[:, None], gens[None, :])] < i + 1).any() or (deg[pth[Gi]] < i + 1).any():
            bad_ab.append(i)
    clauses.append(outcome("G_i/G_(i+1) elementary abelian", not bad_ab, witnesses=bad_ab))
    clauses.append(
        outcome(
            "filtration reaches 1",
            F.reaches_trivial,
            reason="" if F.reaches_trivial else f"stabilizes at order {F.terms[-1].size}",
        )
    )
    return combine("Zassenhaus filtration", clauses, ref="G_i = {g : 1 - g in omega^i}", method=F.method)


# ---------------------------------------------------------------------------
# graded envelope gr F_pG = sum omega^i / omega^(i+1)


class GradedEnvelope:
    """The graded associative algebra of the omega-adic filtration.

    Elements are handled as lifts in F_pG; membership in omega^k decides
    equality in the quotients.  With ``method="omega"`` membership uses the
    dense powers of omega.  With ``method="jennings"`` it uses the basis of
    ordered products (g_1 - 1)^e_1 ... (g_D - 1)^e_D, where g_1..g_D run
    over the layer representatives in increasing degree; the ones of weight
    sum(e_k deg g_k) >= k span omega^k.  Converting a group-basis vector to
    that basis is a Kronecker product of p x p binomial matrices.
    """

    def __init__(self, GA: GroupAlgebra, filtration: Filtration, method: str = "auto"):
        if not filtration.reaches_trivial:
            raise FiltrationError("graded envelope needs a p-group (filtration must reach 1)")
        self.GA = GA
        self.F = filtration
        self.p = GA.p
        if method == "auto":
            method = "omega" if GA.dim <= _config.cap("MAX_OMEGA_ORDER") else "jennings"
        self.method = method
        if method == "jennings":
            self._setup_jennings()
        elif method == "omega":
            GA.omega_powers()
        else:
            raise ValueError(f"unknown method {method!r}")

    def _setup_jennings(self):
        G, p = self.GA.G, self.p
        reps, degs = [], []
        for i, layer in sorted(self.F.layers.items()):
            reps.extend(int(r) for r in layer.reps)
            degs.extend([i] * layer.dim)
        self.reps = np.asarray(reps, dtype=np.int64)
        self.rep_degrees = np.asarray(degs, dtype=np.int64)
        elems = np.zeros(1, dtype=np.int64)
        for r in self.reps:
            elems = G.mul(elems[:, None], _powers(G, int(r), p)[None, :]).ravel()
        if elems.size != G.order or np.unique(elems).size != G.order:
            raise FiltrationError("layer representatives do not give a normal form for G")
        # position of each group element in the mixed-radix exponent grid
        self._position = np.empty(G.order, dtype=np.int64)
        self._position[elems] = np.arange(G.order)
        D = self.reps.size
        self._shape = (p,) * D
        grid = np.indices(self._shape).reshape(D, -1)
        self.weight = (grid * self.rep_degrees[:, None]).sum(axis=0)
        self._pascal = np.array([[comb(a, e) % p for e in range(p)] for a in range(p)], dtype=np.int64)

    def jennings_coordinates(self, v: np.ndarray) -> np.ndarray:
        w = np.zeros(self.GA.dim, dtype=np.int64)
        w[self._position] = v
        w = w.reshape(self._shape)
        for axis in range(w.ndim):
            w = np.moveaxis(np.tensordot(w, self._pascal, axes=([axis], [0])), -1, axis) % self.p
        return w.reshape(-1)

    def in_omega(self, v: np.ndarray, k: int) -> bool:
        v = np.asarray(v, dtype=np.int64) % self.p
        if k <= 0:
            return True
        if self.method == "omega":
            return self.GA.omega_power(k).contains(v) if k <= len(self.GA.omega_powers()) else not v.any()
        w = self.jennings_coordinates(v)
        return not w[self.weight < k].any()

    def component_dims(self) -> dict[int, int]:
        if self.method == "omega":
            dims = [W.dim for W in self.GA.omega_powers()] + [0]
            return {i: dims[i - 1] - dims[i] for i in range(1, len(dims)) if dims[i - 1] - dims[i]}
        counts = np.bincount(self.weight)
        return {i: int(c) for i, c in enumerate(counts) if i >= 1 and c}

    def lift(self, degree: int, coords) -> np.ndarray:
        """Lift of sum_k c_k (g_k G_(i+1)) to sum_k c_k (g_k - 1) in omega^i."""
        layer = self.F.layers[degree]
        v = np.zeros(self.GA.dim, dtype=np.int64)
        for c, g in zip(np.asarray(coords) % self.p, layer.reps):
            if c:
                v[g] += c
                v[0] -= c
        return v % self.p

    def mul(self, u, v):
        return self.GA.mul(u, v)

    def power(self, u, k: int):
        return self.GA.power(u, k)


def graded_envelope(GA: GroupAlgebra, filtration: Filtration, method: str = "auto") -> GradedEnvelope:
    return GradedEnvelope(GA, filtration, method=method)
