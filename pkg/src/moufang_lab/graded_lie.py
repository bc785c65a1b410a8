"""Graded restricted Lie algebras L_p(G) = sum G_i/G_(i+1) and Lie algebras with triality.

Conventions: vectors are coordinate arrays over a fixed basis, linear maps
act on columns (``x^rho`` is ``R @ x``), and ``structure[i, j, k]`` is the
coefficient of e_k in [e_i, e_j].  ``rho sigma`` means rho first, so its
matrix is ``S @ R``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .group_algebra import (
    IDENTITY_DEGREE,
    Filtration,
    FiltrationError,
    GradedEnvelope,
    GroupAlgebra,
    zassenhaus_filtration,
)
from .groups import FiniteGroup
from .linalg_fp import inverse, matmul, matpow
from .reports import Report, combine, outcome, skipped
from .triality import TrialityGroup


class NotAPGroup(ValueError):
    pass


class LieAlgebra:
    def __init__(self, structure, p: int, degrees=None, name: str = ""):
        C = np.asarray(structure, dtype=np.int64) % p
        if C.ndim != 3 or C.shape[0] != C.shape[1] or C.shape[1] != C.shape[2]:
            raise ValueError(f"structure constants must be (d, d, d), got {C.shape}")
        C.setflags(write=False)
        self.structure = C
        self.p = int(p)
        self.dim = C.shape[0]
        self.degrees = None if degrees is None else np.asarray(degrees, dtype=np.int64)
        self.name = name

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r}, dim={self.dim}, p={self.p})"

    def bracket(self, x, y) -> np.ndarray:
        return np.einsum("...i,...j,ijk->...k", np.asarray(x) % self.p, np.asarray(y) % self.p, self.structure) % self.p

    def ad(self, x) -> np.ndarray:
        """Matrix of y -> [x, y]."""
        return np.einsum("i,ijk->kj", np.asarray(x) % self.p, self.structure) % self.p

    def basis(self) -> np.ndarray:
        return np.eye(self.dim, dtype=np.int64)

    def is_abelian(self) -> bool:
        return not self.structure.any()

    def homogeneous_blocks(self) -> dict[int, np.ndarray]:
        """Basis indices per degree; ungraded algebras form a single block of degree 0."""
        if self.degrees is None:
            return {0: np.arange(self.dim)}
        return {int(d): np.flatnonzero(self.degrees == d) for d in np.unique(self.degrees)}

    def check_lie_axioms(self) -> Report:
        C, p = self.structure, self.p
        anti = np.argwhere((C + C.transpose(1, 0, 2)) % p != 0)
        diag = np.flatnonzero(C[np.arange(self.dim), np.arange(self.dim)].any(axis=1))
        t1 = np.einsum("ijk,klm->ijlm", C, C)
        t2 = np.einsum("jlk,kim->ijlm", C, C)
        t3 = np.einsum("lik,kjm->ijlm", C, C)
        jac = np.argwhere(((t1 + t2 + t3) % p).any(axis=-1))
        return combine(
            "Lie algebra axioms",
            [
                outcome("antisymmetry", anti.size == 0 and diag.size == 0, witnesses=[tuple(w[:2]) for w in anti[:3]]),
                outcome("Jacobi identity", jac.size == 0, witnesses=[tuple(w) for w in jac[:3]]),
            ],
        )


    def to_dict(self) -> dict:
        """Structure constants as sparse [i, j, k, coefficient] entries."""
        nz = np.argwhere(self.structure)
        return {
            "p": self.p,
            "dim": self.dim,
            "degrees": None if self.degrees is None else self.degrees.tolist(),
            "bracket": [[int(i), int(j), int(k), int(self.structure[i, j, k])] for i, j, k in nz],
        }


class GradedRestrictedLie(LieAlgebra):
    """L_p(G) with basis e = coset representatives, grouped by degree."""

    def __init__(self, structure, p, degrees, filtration: Filtration, p_map_basis, name=""):
        super().__init__(structure, p, degrees=degrees, name=name)
        self.filtration = filtration
        self.G = filtration.G
        self.p_map_basis = np.asarray(p_map_basis, dtype=np.int64) % p
        self.offsets = {}
        start = 0
        for i, layer in sorted(filtration.layers.items()):
            self.offsets[i] = slice(start, start + layer.dim)
            start += layer.dim

    @property
    def degree_dims(self) -> dict[int, int]:
        return {i: s.stop - s.start for i, s in self.offsets.items() if s.stop > s.start}

    def embed(self, degree: int, coords) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        if degree in self.offsets:
            v[self.offsets[degree]] = coords
        return v % self.p

    def coords_of(self, g, degree: int) -> np.ndarray:
        """Image of g in L_degree (g must lie in G_degree), as a global vector."""
        if self.filtration.degree[g] < degree:
            raise FiltrationError(f"element {g} not in G_{degree}")
        layer = self.filtration.layers.get(degree)
        if layer is None or layer.dim == 0:
            return np.zeros(self.dim, dtype=np.int64)
        return self.embed(degree, layer.coords(g))

    def degree_of(self, x) -> int | None:
        """Degree of a nonzero homogeneous vector; None for zero; raises if inhomogeneous."""
        x = np.asarray(x) % self.p
        degs = np.unique(self.degrees[np.flatnonzero(x)])
        if degs.size == 0:
            return None
        if degs.size > 1:
            raise ValueError("element is not homogeneous")
        return int(degs[0])

    def group_element(self, x) -> int:
        """A representative g in G_i of a homogeneous x in L_i."""
        i = self.degree_of(x)
        if i is None:
            return 0
        layer = self.filtration.layers[i]
        g = np.zeros((), dtype=np.int64)
        for c, r in zip(np.asarray(x)[self.offsets[i]] % self.p, layer.reps):
            if c:
                g = self.G.mul(g, self.G.power(int(r), int(c)))
        return int(g)

    def p_power(self, x) -> np.ndarray:
        """(g G_(i+1))^[p] = g^p G_(ip+1) for homogeneous x."""
        i = self.degree_of(x)
        if i is None:
            return np.zeros(self.dim, dtype=np.int64)
        h = int(self.G.power(self.group_element(x), self.p))
        if self.filtration.degree[h] < i * self.p:
            raise FiltrationError(f"p-th power left G_{i * self.p}")
        return self.coords_of(h, i * self.p)


    def to_dict(self) -> dict:
        """Degree-indexed tensors: bracket blocks L_i x L_j -> L_(i+j) and p-map blocks L_i -> L_(ip)."""
        blocks = {i: s for i, s in self.offsets.items() if s.stop > s.start}
        bracket, pmap = {}, {}
        for i, si in blocks.items():
            for j, sj in blocks.items():
                sk = blocks.get(i + j)
                if sk is not None and self.structure[si, sj, sk].any():
                    bracket[f"{i},{j}"] = self.structure[si, sj, sk].tolist()
            sk = blocks.get(i * self.p)
            if sk is not None and self.p_map_basis[sk, si].any():
                pmap[str(i)] = self.p_map_basis[sk, si].tolist()
        return {
            "p": self.p,
            "group": self.G.name,
            "degree_dims": {str(i): d for i, d in self.degree_dims.items()},
            "bracket": bracket,
            "p_map": pmap,
        }


def build_lp_algebra(G: FiniteGroup, p: int, method: str = "auto", filtration: Filtration | None = None) -> GradedRestrictedLie:
    F = filtration or zassenhaus_filtration(GroupAlgebra(G, p), method=method)
    if not F.reaches_trivial:
        raise NotAPGroup(f"{G.name} is not a {p}-group: the Zassenhaus filtration stops at order {F.terms[-1].size}")
    reps, degrees = [], []
    for i, layer in sorted(F.layers.items()):
        reps.extend(int(r) for r in layer.reps)
        degrees.extend([i] * layer.dim)
    reps = np.asarray(reps, dtype=np.int64)
    degrees = np.asarray(degrees, dtype=np.int64)
    d = reps.size
    shell = GradedRestrictedLie(np.zeros((d, d, d)), p, degrees, F, np.zeros((d, d)), name=f"L_{p}({G.name})")
    C = np.zeros((d, d, d), dtype=np.int64)
    comm = G.commutator(reps[:, None], reps[None, :]) if d else np.zeros((0, 0), dtype=np.int64)
    for a in range(d):
        for b in range(d):
            C[a, b] = shell.coords_of(int(comm[a, b]), int(degrees[a] + degrees[b]))
    P = np.zeros((d, d), dtype=np.int64)
    powers = G.power(reps, p) if d else reps
    for a in range(d):
        P[:, a] = shell.coords_of(int(powers[a]), int(degrees[a]) * p)
    return GradedRestrictedLie(C, p, degrees, F, P, name=shell.name)


# ---------------------------------------------------------------------------
# restricted axioms


def jacobson_element(L: LieAlgebra, a, b) -> np.ndarray:
    """{a, b} = sum_i s_i(a, b), with i s_i the t^(i-1) coefficient of ad(ta + b)^(p-1)(a)."""
    p = L.p
    A, B = L.ad(a), L.ad(b)
    coeffs = [np.asarray(a, dtype=np.int64) % p]  # polynomial in t with vector coefficients
    for _ in range(p - 1):
        nxt = [matmul(B, c, p) for c in coeffs] + [np.zeros(L.dim, dtype=np.int64)]
        for k, c in enumerate(coeffs):
            nxt[k + 1] = (nxt[k + 1] + matmul(A, c, p)) % p
        coeffs = nxt
    total = np.zeros(L.dim, dtype=np.int64)
    for i in range(1, p):
        total = (total + coeffs[i - 1] * pow(i, -1, p)) % p
    return total


def _homogeneous_pairs(L: GradedRestrictedLie, rng, samples: int):
    for i, idx in L.homogeneous_blocks().items():
        basis = np.eye(L.dim, dtype=np.int64)[idx]
        for s in range(len(idx)):
            for t in range(s, len(idx)):
                yield basis[s], basis[t]
        for _ in range(samples if len(idx) > 1 else 0):
            yield rng.integers(0, L.p, L.dim) * np.isin(np.arange(L.dim), idx), rng.integers(0, L.p, L.dim) * np.isin(
                np.arange(L.dim), idx
            )


def verify_restricted_axioms(L: GradedRestrictedLie, envelope: GradedEnvelope | None = None, seed: int = 0, samples: int = 8) -> Report:
    p = L.p
    rng = np.random.default_rng(seed)
    basis = np.eye(L.dim, dtype=np.int64)

    bad = [(a, k) for a in range(L.dim) for k in range(1, p) if not np.array_equal(L.p_power(k * basis[a]), k * L.p_power(basis[a]) % p)]
    c1 = outcome("(ka)^[p] = k^p a^[p]", not bad, witnesses=bad[:3])

    pairs = list(_homogeneous_pairs(L, rng, samples))
    bad = []
    for a, b in pairs:
        disc = (L.p_power(a + b) - L.p_power(a) - L.p_power(b)) % p
        if not np.array_equal(disc, jacobson_element(L, a, b)):
            bad.append((a.tolist(), b.tolist()))
    c2 = outcome("(a+b)^[p] = a^[p] + b^[p] + {a,b} (Jacobson formula)", not bad, witnesses=bad[:3], pairs=len(pairs))

    if envelope is None:
        c2e = skipped("(a+b)^[p] = a^[p] + b^[p] + {a,b} (graded envelope)", "no graded envelope supplied")
    else:
        bad = []
        for a, b in pairs:
            i = L.degree_of(a) or L.degree_of(b)
            if i is None:
                continue
            x = envelope.lift(i, a[L.offsets[i]])
            y = envelope.lift(i, b[L.offsets[i]])
            xp, yp, sp = envelope.power(x, p), envelope.power(y, p), envelope.power((x + y) % p, p)
            top = i * p
            lift = lambda v: envelope.lift(top, v[L.offsets[top]]) if top in L.offsets else np.zeros_like(x)
            disc = (L.p_power(a + b) - L.p_power(a) - L.p_power(b)) % p
            ok = envelope.in_omega((sp - xp - yp - lift(disc)) % p, top + 1)
            ok &= envelope.in_omega((xp - lift(L.p_power(a))) % p, top + 1)
            if not ok:
                bad.append((a.tolist(), b.tolist()))
        c2e = outcome(
            "(a+b)^[p] = a^[p] + b^[p] + {a,b} (graded envelope)",
            not bad,
            witnesses=bad[:3],
            pairs=len(pairs),
            envelope=envelope.method,
        )

    bad = []
    for i, idx in L.homogeneous_blocks().items():
        cands = [basis[k] for k in idx] + [rng.integers(0, p, L.dim) * np.isin(np.arange(L.dim), idx) for _ in range(samples)]
        for a in cands:
            if not np.array_equal(L.ad(L.p_power(a)), matpow(L.ad(a), p, p)):
                bad.append(a.tolist())
    c3 = outcome("[a^[p], b] = ad(a)^p b", not bad, witnesses=bad[:3])
    return combine("restricted Lie axioms", [c1, c2, c2e, c3], ref="Lie p-algebra", seed=seed)


# ---------------------------------------------------------------------------
# triality on Lie algebras


@dataclass
class LieTriality:
    L: LieAlgebra
    rho: np.ndarray
    sigma: np.ndarray
    from_group: bool = False
    name: str = ""
    source: TrialityGroup | None = field(default=None, repr=False)

    def __post_init__(self):
        self.rho = np.asarray(self.rho, dtype=np.int64) % self.L.p
        self.sigma = np.asarray(self.sigma, dtype=np.int64) % self.L.p

    @property
    def p(self) -> int:
        return self.L.p

    @property
    def alpha(self) -> np.ndarray:
        """alpha = 1 + 2 rho."""
        return (np.eye(self.L.dim, dtype=np.int64) + 2 * self.rho) % self.p

    @property
    def rho_inverse(self) -> np.ndarray:
        return inverse(self.rho, self.p)


def _automorphism_clause(label: str, M: np.ndarray, L: LieAlgebra) -> Report:
    p, C = L.p, L.structure
    try:
        inverse(M, p)
    except ValueError:
        return outcome(f"{label} is an automorphism", False, reason="not invertible")
    lhs = np.einsum("mk,ijk->ijm", M, C) % p
    rhs = np.einsum("ai,bj,abm->ijm", M, M, C) % p
    bad = np.argwhere((lhs != rhs).any(axis=-1))
    return outcome(f"{label} is an automorphism", bad.size == 0, witnesses=[tuple(int(t) for t in w) for w in bad[:3]])


def verify_lie_triality(T: LieTriality) -> Report:
    L, p, R, S = T.L, T.p, T.rho, T.sigma
    eye = np.eye(L.dim, dtype=np.int64)
    clauses = [_automorphism_clause("rho", R, L), _automorphism_clause("sigma", S, L)]

    def rel(label, M):
        bad = np.flatnonzero((M % p != eye).any(axis=0))
        return outcome(label, bad.size == 0, witnesses=[int(b) for b in bad[:3]])

    clauses.append(rel("rho^3 = 1", matpow(R, 3, p)))
    clauses.append(rel("sigma^2 = 1", matpow(S, 2, p)))
    clauses.append(rel("(rho sigma)^2 = 1", matpow(matmul(S, R, p), 2, p)))
    # (x^sigma - x) + (x^sigma - x)^rho + (x^sigma - x)^(rho^2) = 0, linear in x
    tri = matmul((eye + R + matmul(R, R, p)) % p, (S - eye) % p, p)
    bad = np.flatnonzero(tri.any(axis=0))
    clauses.append(
        outcome(
            "triality identity",
            bad.size == 0,
            ref="(x^s - x) + (x^s - x)^r + (x^s - x)^r^2 = 0",
            witnesses=[{"basis": int(b), "value": tri[:, b].tolist()} for b in bad[:3]],
        )
    )
    if isinstance(L, GradedRestrictedLie):
        for label, M in (("rho", R), ("sigma", S)):
            moved = [
                a for a in range(L.dim) if not np.array_equal(L.p_power(M[:, a]), matmul(M, L.p_power(eye[a]), p))
            ]
            clauses.append(outcome(f"{label} commutes with [p]", not moved, witnesses=moved[:3]))
    return combine("Lie triality", clauses, ref="Lemma 3.1" if T.from_group else "Lie algebra with triality")


def induce_triality(T: TrialityGroup, p: int, L: GradedRestrictedLie | None = None, method: str = "auto") -> LieTriality:
    """rho, sigma acting on each G_i/G_(i+1)."""
    if L is None:
        L = build_lp_algebra(T.G, p, method=method)
    d = L.dim
    R = np.zeros((d, d), dtype=np.int64)
    S = np.zeros((d, d), dtype=np.int64)
    reps = np.asarray(
        [int(r) for _, layer in sorted(L.filtration.layers.items()) for r in layer.reps], dtype=np.int64
    )
    for a in range(d):
        i = int(L.degrees[a])
        R[:, a] = L.coords_of(int(T.rho.images[reps[a]]), i)
        S[:, a] = L.coords_of(int(T.sigma.images[reps[a]]), i)
    LT = LieTriality(L, R, S, from_group=True, name=f"L_{p}({T.name})", source=T)
    rep = verify_lie_triality(LT)
    if not rep.passed:
        raise ValueError(f"induced triality fails its invariants\n{rep}")
    return LT


def example_4_algebra(p: int, sigma_sign: int = 1) -> tuple[LieTriality, Report]:
    """Nilpotent L = <a, b, c>, [a, b] = c, with the S_3 action of the worked example.

    a^s = -a, b^s = a + b, c^s = sigma_sign * c; a^r = b, b^r = -a - b, c^r = c.
    """
    if p <= 2:
        raise ValueError("needs p > 2")
    if sigma_sign not in (1, -1):
        raise ValueError("sigma_sign must be +1 or -1")
    C = np.zeros((3, 3, 3), dtype=np.int64)
    C[0, 1, 2], C[1, 0, 2] = 1, -1
    L = LieAlgebra(C, p, name="example-4")
    # columns are images of a, b, c
    S = np.array([[-1, 1, 0], [0, 1, 0], [0, 0, sigma_sign]])
    R = np.array([[0, -1, 0], [1, -1, 0], [0, 0, 1]])
    T = LieTriality(L, R, S, from_group=False, name=f"example-4(sign={sigma_sign:+d})")
    rep = verify_lie_triality(T)
    a = np.array([1, 0, 0])
    rep.details["[a, a^rho]"] = L.bracket(a, matmul(T.rho, a, p)).tolist()
    rep.details["sigma_sign"] = sigma_sign
    return T, rep
