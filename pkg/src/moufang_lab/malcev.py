"""Malcev algebras: H = {x : x^sigma = -x} with a * b = [a + 2a^rho, b], and checks on it.

Operators are matrices acting on column vectors; ``ad_star(a)`` is h -> a * h.
With that convention rho^-1 X rho (rho acting on the right) becomes R X R^-1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations
from math import factorial

import numpy as np

from . import _config
from .graded_lie import GradedRestrictedLie, LieAlgebra, LieTriality, verify_lie_triality
from .linalg_fp import FpMatrix, Subspace, inverse, kernel, matmul, matpow
from .reports import Report, combine, outcome, skipped


class MalcevError(ValueError):
    pass


class BudgetExceeded(ValueError):
    pass


class MalcevAlgebra:
    """Anticommutative algebra given by structure constants, optionally graded.

    When built by :func:`extract_h`, ``embedding`` has the basis of H as
    columns (in coordinates of the ambient Lie algebra) and ``ambient`` is
    the LieTriality it came from.
    """

    def __init__(self, structure, p: int, degrees=None, name: str = "", ambient: LieTriality | None = None, embedding=None):
        C = np.asarray(structure, dtype=np.int64) % p
        if C.ndim != 3 or len(set(C.shape)) != 1:
            raise ValueError(f"structure constants must be (d, d, d), got {C.shape}")
        C.setflags(write=False)
        self.structure = C
        self.p = int(p)
        self.dim = C.shape[0]
        self.degrees = None if degrees is None else np.asarray(degrees, dtype=np.int64)
        self.name = name
        self.ambient = ambient
        self.embedding = None if embedding is None else np.asarray(embedding, dtype=np.int64)

    def __repr__(self):
        return f"MalcevAlgebra({self.name!r}, dim={self.dim}, p={self.p})"

    @classmethod
    def from_lie(cls, L: LieAlgebra) -> "MalcevAlgebra":
        return cls(L.structure, L.p, degrees=L.degrees, name=L.name)

    def mul(self, x, y) -> np.ndarray:
        return np.einsum("...i,...j,ijk->...k", np.asarray(x) % self.p, np.asarray(y) % self.p, self.structure) % self.p

    def ad_star(self, a) -> np.ndarray:
        return np.einsum("i,ijk->kj", np.asarray(a) % self.p, self.structure) % self.p

    def is_abelian(self) -> bool:
        return not self.structure.any()

    def homogeneous_blocks(self) -> dict[int, np.ndarray]:
        if self.degrees is None:
            return {0: np.arange(self.dim)}
        return {int(d): np.flatnonzero(self.degrees == d) for d in np.unique(self.degrees)}

    def to_ambient(self, x) -> np.ndarray:
        if self.embedding is None:
            raise MalcevError("no ambient Lie algebra")
        return matmul(self.embedding, np.asarray(x) % self.p, self.p) if np.ndim(x) == 1 else (np.asarray(x) @ self.embedding.T) % self.p


def cross_product_algebra(p: int = 5) -> MalcevAlgebra:
    """e1 * e2 = e3, e2 * e3 = e1, e3 * e1 = e2: simple, so never nilpotent."""
    C = np.zeros((3, 3, 3), dtype=np.int64)
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        C[i, j, k], C[j, i, k] = 1, -1
    return MalcevAlgebra(C, p, name=f"cross-product/F_{p}")


def zero_algebra(p: int = 5) -> MalcevAlgebra:
    return MalcevAlgebra(np.zeros((0, 0, 0), dtype=np.int64), p, name="0")


# ---------------------------------------------------------------------------
# H and the * product


def h_space(T: LieTriality) -> Subspace:
    """ker(sigma + 1), computed blockwise so graded inputs get a homogeneous basis."""
    L, p = T.L, T.p
    M = (T.sigma + np.eye(L.dim, dtype=np.int64)) % p
    vecs = []
    for _, idx in L.homogeneous_blocks().items():
        if idx.size == 0:
            continue
        if M[np.ix_(np.setdiff1d(np.arange(L.dim), idx), idx)].any():
            # sigma mixes degrees: fall back to one block
            return kernel(FpMatrix(p, M))
        K = kernel(FpMatrix(p, M[np.ix_(idx, idx)]))
        for row in K.basis:
            v = np.zeros(L.dim, dtype=np.int64)
            v[idx] = row
            vecs.append(v)
    return Subspace.span(np.asarray(vecs, dtype=np.int64).reshape(-1, L.dim), p, L.dim)


def _h_basis(T: LieTriality, space: Subspace) -> tuple[np.ndarray, np.ndarray | None]:
    """Basis of H as rows, grouped by degree when L is graded."""
    L = T.L
    B = space.basis
    if L.degrees is None or B.shape[0] == 0:
        return B, None
    degs = []
    for row in B:
        d = np.unique(L.degrees[np.flatnonzero(row)])
        degs.append(int(d[0]) if d.size == 1 else -1)
    degs = np.asarray(degs)
    if (degs < 0).any():
        return B, None
    order = np.argsort(degs, kind="stable")
    return B[order], degs[order]


def extract_h(T: LieTriality, require_triality: bool = True) -> MalcevAlgebra:
    p, L = T.p, T.L
    if p in (2, 3):
        raise MalcevError("characteristic 2 or 3")
    if require_triality:
        rep = verify_lie_triality(T)
        if not rep.passed:
            raise MalcevError(f"{T.name} is not a Lie algebra with triality\n{rep}")
    space = h_space(T)
    B, degs = _h_basis(T, space)
    d = B.shape[0]
    coords = Subspace.span(B, p, L.dim) if d else Subspace.zero(L.dim, p)
    # a * b = [a^alpha, b] for basis rows
    alpha_rows = B @ T.alpha.T % p
    prods = L.bracket(alpha_rows[:, None, :], B[None, :, :]).reshape(-1, L.dim) if d else np.zeros((0, L.dim))
    inside = coords.contains_all(prods) if d else np.ones(0, dtype=bool)
    if not inside.all():
        k = int(np.flatnonzero(~inside)[0])
        raise MalcevError(f"H not closed under *: basis pair {divmod(k, d)} leaves H (contradicts H being a Malcev algebra)")
    # coordinates relative to the (possibly reordered) basis B
    if d:
        pivot_coords = coords.coordinates(prods)
        to_B = inverse(coords.coordinates(B).T % p, p)  # columns: B rows in pivot coordinates
        C = (pivot_coords @ to_B.T % p).reshape(d, d, d)
    else:
        C = np.zeros((0, 0, 0), dtype=np.int64)
    return MalcevAlgebra(C, p, degrees=degs, name=f"H({T.name})", ambient=T, embedding=B.T.copy())


def check_star_coherence(H: MalcevAlgebra) -> Report:
    """ad*(a) = ad(a^alpha) on H, for every basis a."""
    T = H.ambient
    if T is None:
        return skipped("ad*(a) = ad(a^alpha)", "no ambient Lie algebra")
    E, p = H.embedding, H.p
    bad = []
    for a in range(H.dim):
        lhs = matmul(E, H.ad_star(np.eye(H.dim, dtype=np.int64)[a]), p)
        rhs = matmul(T.L.ad(matmul(T.alpha, E[:, a], p)), E, p)
        if not np.array_equal(lhs, rhs):
            bad.append(a)
    return outcome("ad*(a) = ad(a^alpha)", not bad, witnesses=bad[:3])


# ---------------------------------------------------------------------------
# identities


def _malcev_tensor(C: np.ndarray, p: int) -> np.ndarray:
    """g[x1, x2, y, z] = (x1 y)(x2 z) - ((x1 y) z) x2 - ((y z) x1) x2 - ((z x1) x2) y."""
    t1 = np.einsum("ack,bel,klm->abcem", C, C, C)
    t2 = np.einsum("ack,kel,lbm->abcem", C, C, C)
    t3 = np.einsum("cek,kal,lbm->abcem", C, C, C)
    t4 = np.einsum("eak,kbl,lcm->abcem", C, C, C)
    return (t1 - t2 - t3 - t4) % p


def check_malcev_identities(M: MalcevAlgebra, seed: int = 0, samples: int = 64) -> Report:
    p, C, d = M.p, M.structure, M.dim
    if p <= 3:
        return skipped("Malcev identities", "characteristic must exceed 3")
    anti = np.argwhere((C + C.transpose(1, 0, 2)) % p != 0)
    diag = np.flatnonzero(C[np.arange(d), np.arange(d)].any(axis=1)) if d else np.zeros(0, dtype=np.int64)
    c1 = outcome(
        "(1) xy = -yx",
        anti.size == 0 and diag.size == 0,
        witnesses=[tuple(int(t) for t in w[:2]) for w in anti[:3]] + [(int(i), int(i)) for i in diag[:3]],
    )
    g = _malcev_tensor(C, p)
    lin = (g + g.transpose(1, 0, 2, 3, 4)) % p
    bad = np.argwhere(lin.any(axis=-1))
    c2 = outcome(
        "(2) full linearization on basis 4-tuples",
        bad.size == 0,
        ref="(xy)(xz) = ((xy)z)x + ((yz)x)x + ((zx)x)y",
        witnesses=[tuple(int(t) for t in w) for w in bad[:3]],
        tuples=d**4,
    )
    idx = np.arange(d)
    diag2 = g[idx, idx]  # x1 = x2 = x
    bad = np.argwhere(diag2.any(axis=-1))
    rng = np.random.default_rng(seed)
    x, y, z = (rng.integers(0, p, (samples, d)) for _ in range(3))
    xy, xz = M.mul(x, y), M.mul(x, z)
    lhs = M.mul(xy, xz)
    rhs = (M.mul(M.mul(xy, z), x) + M.mul(M.mul(M.mul(y, z), x), x) + M.mul(M.mul(M.mul(z, x), x), y)) % p
    sample_bad = np.flatnonzero((lhs != rhs).any(axis=-1)) if d else np.zeros(0, dtype=np.int64)
    c3 = outcome(
        "(2) original form on basis triples",
        bad.size == 0 and sample_bad.size == 0,
        witnesses=[tuple(int(t) for t in w) for w in bad[:3]] + [{"sample": int(s)} for s in sample_bad[:3]],
        tuples=d**3,
        samples=samples,
        seed=seed,
    )
    return combine("Malcev identities", [c1, c2, c3], ref="Malcev algebra")


def _h_products(H: MalcevAlgebra):
    """Ambient vectors of basis elements, their rho images, and all * products."""
    T, p = H.ambient, H.p
    E = H.embedding.T  # rows: basis of H in L
    R = T.rho
    return E, E @ R.T % p, E @ matmul(R, R, p).T % p


def check_bridge_identities(T: LieTriality, H: MalcevAlgebra) -> Report:
    """Four multilinear identities linking * with the Lie bracket, on basis triples of H."""
    L, p, d = T.L, T.p, H.dim
    if H.ambient is None:
        return skipped("bridge identities", "H has no ambient Lie algebra")
    E, Er, Err = _h_products(H)
    br = L.bracket
    ab = br(E[:, None], E[None, :])  # [a, b]
    abc = br(ab[:, :, None], E[None, None, :])  # [[a, b], c]
    star = H.structure  # in H coordinates
    # (a * b) * c in H coordinates, then embedded
    st2 = np.einsum("abk,kcm->abcm", star, star) % p
    st2L = st2 @ E % p

    lemma = (3 * abc - 2 * st2L - st2L.transpose(2, 1, 0, 3) - st2L.transpose(0, 2, 1, 3)) % p
    # (c*b)*a at (a,b,c) is st2L[c,b,a]; (a*c)*b is st2L[a,c,b]
    bad = np.argwhere(lemma.any(axis=-1))
    c1 = outcome(
        "3[[a,b],c] = 2(a*b)*c + (c*b)*a + (a*c)*b",
        bad.size == 0,
        ref="Lemma 3.3",
        witnesses=[tuple(int(t) for t in w) for w in bad[:3]],
    )

    x2y1 = br(Err[:, None], Er[None, :])  # [x^rho^2, y^rho]
    x2y1z = br(x2y1[:, :, None], E[None, None, :])
    eq = (st2L - 2 * x2y1z - abc) % p
    bad = np.argwhere(eq.any(axis=-1))
    c2 = outcome(
        "(x*y)*z = 2[[x^rho^2, y^rho], z] + [[x,y],z]",
        bad.size == 0,
        witnesses=[tuple(int(t) for t in w) for w in bad[:3]],
    )

    e1 = (br(Er[:, None], E[None, :]) - br(E[:, None], Er[None, :])) % p
    e2 = (x2y1 - br(Er[:, None], Err[None, :])) % p
    bad = np.argwhere(e1.any(axis=-1) | e2.any(axis=-1))
    c3 = outcome(
        "[x^rho, y] = [x, y^rho], [x^rho^2, y^rho] = [x^rho, y^rho^2]",
        bad.size == 0,
        witnesses=[tuple(int(t) for t in w) for w in bad[:3]],
    )

    J = (st2L + st2L.transpose(1, 2, 0, 3) + st2L.transpose(2, 0, 1, 3)) % p
    # J(x,y,z) = (x*y)*z + (y*z)*x + (z*x)*y
    bad = np.argwhere(((J - 6 * x2y1z) % p).any(axis=-1))
    c4 = outcome(
        "J(x,y,z) = 6[[x^rho^2, y^rho], z]",
        bad.size == 0,
        witnesses=[tuple(int(t) for t in w) for w in bad[:3]],
    )
    return combine("bridge identities", [c1, c2, c3, c4], ref="Lemma 3.3", triples=d**3)


# ---------------------------------------------------------------------------
# Lemmas 4.3 - 4.6


def check_lemma_4_4(T: LieTriality, H: MalcevAlgebra | None = None) -> Report:
    """[a, a^rho] = 0 on H, via basis elements and the bilinear symmetrization."""
    L, p = T.L, T.p
    B = h_space(T).basis if H is None or H.embedding is None else H.embedding.T
    Br = B @ T.rho.T % p
    diag = np.asarray([L.bracket(B[i], Br[i]) for i in range(B.shape[0])]).reshape(-1, L.dim)
    bad_diag = np.flatnonzero(diag.any(axis=-1))
    pair = (L.bracket(B[:, None], Br[None, :]) + L.bracket(B[None, :], Br[:, None])) % p if B.shape[0] else np.zeros((0, 0, L.dim))
    bad_pair = np.argwhere(pair.any(axis=-1))
    wit = [{"basis": int(i), "a": B[i].tolist(), "[a, a^rho]": diag[i].tolist()} for i in bad_diag[:3]]
    return combine(
        "[a, a^rho] = 0",
        [
            outcome("[a, a^rho] = 0 on basis of H", bad_diag.size == 0, witnesses=wit),
            outcome(
                "[a_i, a_j^rho] + [a_j, a_i^rho] = 0",
                bad_pair.size == 0,
                witnesses=[tuple(int(t) for t in w) for w in bad_pair[:3]],
            ),
        ],
        ref="Lemma 4.4",
        group_provenance=T.from_group,
        dim_h=int(B.shape[0]),
    )


def _partial(rep: Report) -> Report:
    """A passing report with refused clauses is downgraded to skip: nothing unverified passes."""
    refused = [c.check for c in rep.clauses if c.skipped]
    if rep.passed and refused:
        rep.status = "skip"
        rep.reason = "refused: " + "; ".join(refused)
    return rep


def _budget(m: int) -> None:
    limit = _config.perm_budget()
    if factorial(m) > limit:
        raise BudgetExceeded(f"sum over S_{m} has {factorial(m)} terms; permutation budget is {limit}")


def symmetrized_product(ops) -> np.ndarray:
    """sum over pi in S_m of ops[pi(1)] @ ... @ ops[pi(m)] (entries unreduced mod p)."""
    ops = [np.asarray(o, dtype=np.int64) for o in ops]
    n = ops[0].shape[0]
    total = np.zeros((n, n), dtype=np.int64)
    for perm in permutations(range(len(ops))):
        acc = ops[perm[0]]
        for k in perm[1:]:
            acc = acc @ ops[k]
        total += acc
    return total


def _symmetrized_mod(ops, p):
    ops = [np.asarray(o, dtype=np.int64) % p for o in ops]
    n = ops[0].shape[0]
    total = np.zeros((n, n), dtype=np.int64)
    for perm in permutations(range(len(ops))):
        acc = ops[perm[0]]
        for k in perm[1:]:
            acc = acc @ ops[k] % p
        total = (total + acc) % p
    return total


def _homogeneous_samples(M, rng, samples):
    eye = np.eye(M.dim, dtype=np.int64)
    out = [eye[i] for i in range(M.dim)]
    for _, idx in M.homogeneous_blocks().items():
        if idx.size > 1:
            for _ in range(samples):
                v = np.zeros(M.dim, dtype=np.int64)
                v[idx] = rng.integers(0, M.p, idx.size)
                out.append(v)
    return out


def _tuple_sweep(dim: int, m: int, limit: int = 2000):
    """Basis multisets of size m (the symmetrized sum is symmetric in its arguments)."""
    tuples = list(combinations_with_replacement(range(dim), m))
    return tuples if len(tuples) <= limit else None


def check_engel_hypotheses(M: MalcevAlgebra, n: int, seed: int = 0, samples: int = 8) -> Report:
    """(i) ad*(a)^(p^n) = 0 for homogeneous a; (ii) the symmetrized p^n-fold ad* sum vanishes."""
    p = M.p
    q = p**n
    rng = np.random.default_rng(seed)
    cands = _homogeneous_samples(M, rng, samples)
    bad = [v.tolist() for v in cands if matpow(M.ad_star(v), q, p).any()]
    c1 = outcome(f"(i) ad*(a)^{q} = 0 for homogeneous a", not bad, witnesses=bad[:3], checked=len(cands))
    c2 = _symmetrized_clause(f"(ii) sum over S_{q} of ad* products = 0", q, M.dim, lambda t: [M.ad_star(np.eye(M.dim, dtype=np.int64)[i]) for i in t], p, rng)
    return _partial(combine("Engel hypotheses", [c1, c2], ref="Lemma 4.6", n=n, p=p, seed=seed))


def _symmetrized_clause(label, q, dim, ops_for, p, rng, extra=None):
    try:
        _budget(q)
    except BudgetExceeded as exc:
        return skipped(label, str(exc))
    tuples = _tuple_sweep(dim, q)
    exhaustive = tuples is not None
    if not exhaustive:
        tuples = [tuple(sorted(rng.integers(0, dim, q).tolist())) for _ in range(200)]
    bad = []
    for t in tuples:
        S = _symmetrized_mod(ops_for(t), p)
        if extra is not None:
            S = extra(S, t)
        if S.any():
            bad.append(list(t))
    return outcome(label, not bad, witnesses=bad[:3], tuples=len(tuples), exhaustive=exhaustive)


def check_lemma_4_3(T: LieTriality, H: MalcevAlgebra, n: int, seed: int = 0, samples: int = 8) -> Report:
    """ad(a)^(p^n) = 0 on L for homogeneous a in H, and the symmetrized ad sum."""
    L, p = T.L, T.p
    q = p**n
    rng = np.random.default_rng(seed)
    E = H.embedding
    cands = [matmul(E, v, p) for v in _homogeneous_samples(H, rng, samples)]
    bad = [v.tolist() for v in cands if matpow(L.ad(v), q, p).any()]
    c1 = outcome(f"ad(a)^{q} = 0 for homogeneous a in H", not bad, witnesses=bad[:3], checked=len(cands))
    c2 = _symmetrized_clause(f"sum over S_{q} of ad products = 0", q, H.dim, lambda t: [L.ad(E[:, i]) for i in t], p, rng)
    return _partial(combine("ad-Engel conditions on L", [c1, c2], ref="Lemma 4.3", n=n, seed=seed))


def check_lemma_4_5(T: LieTriality, H: MalcevAlgebra, k: int = 1, seed: int = 0, samples: int = 8) -> Report:
    """ad(a^alpha)^(p^k) = ad(a)^(p^k) + 2 rho^-1 ad(a)^(p^k) rho and its linearization."""
    L, p = T.L, T.p
    q = p**k
    pre = check_lemma_4_4(T, H)
    if not pre.passed:
        rep = combine(
            "ad(a^alpha)^(p^k) identity",
            [skipped("(1) matrix identity", "not asserted"), skipped("(2) linearized identity", "not asserted")],
            ref="Lemma 4.5",
            precondition=pre.to_dict(),
        )
        rep.reason = "precondition [a, a^rho] = 0 fails"
        return rep
    R, Rinv, A = T.rho, T.rho_inverse, T.alpha
    conj = lambda X: matmul(matmul(R, X, p), Rinv, p)
    rng = np.random.default_rng(seed)
    E = H.embedding
    cands = [matmul(E, v, p) for v in _homogeneous_samples(H, rng, samples)]
    cands += [matmul(E, rng.integers(0, p, H.dim), p) for _ in range(samples)] if H.dim else []
    bad = []
    for a in cands:
        X = matpow(L.ad(a), q, p)
        if not np.array_equal(matpow(L.ad(matmul(A, a, p)), q, p), (X + 2 * conj(X)) % p):
            bad.append(a.tolist())
    c1 = outcome(f"(1) ad(a^alpha)^{q} = ad(a)^{q} + 2 rho^-1 ad(a)^{q} rho", not bad, witnesses=bad[:3], checked=len(cands))

    def diff(S_alpha, t):
        S = _symmetrized_mod([L.ad(E[:, i]) for i in t], p)
        return (S_alpha - S - 2 * conj(S)) % p

    c2 = _symmetrized_clause(
        f"(2) linearized over S_{q}", q, H.dim, lambda t: [L.ad(matmul(A, E[:, i], p)) for i in t], p, rng, extra=diff
    )
    return _partial(combine("ad(a^alpha)^(p^k) identity", [c1, c2], ref="Lemma 4.5", k=k, seed=seed))


# ---------------------------------------------------------------------------
# subalgebras, generation


def product_space(M: MalcevAlgebra, A: Subspace, B: Subspace) -> Subspace:
    """span{a * b : a in A, b in B}."""
    if A.dim == 0 or B.dim == 0:
        return Subspace.zero(M.dim, M.p)
    prods = np.einsum("ai,bj,ijk->abk", A.basis, B.basis, M.structure) % M.p
    return Subspace.span(prods.reshape(-1, M.dim), M.p, M.dim)


def generated_subalgebra(M: MalcevAlgebra, gens) -> Subspace:
    """Closure of span(gens) under *."""
    V = Subspace.span(np.asarray(gens, dtype=np.int64).reshape(-1, M.dim), M.p, M.dim)
    while True:
        W = V.sum(product_space(M, V, V))
        if W.dim == V.dim:
            return V
        V = W


def lie_generated(L: LieAlgebra, gens) -> Subspace:
    """Lie subalgebra generated by gens: span of left-normed brackets."""
    G = np.asarray(gens, dtype=np.int64).reshape(-1, L.dim) % L.p
    V = Subspace.span(G, L.p, L.dim)
    while True:
        new = L.bracket(V.basis[:, None], G[None, :]).reshape(-1, L.dim) if V.dim and G.size else np.zeros((0, L.dim))
        W = Subspace.span(np.vstack([V.basis, new]), L.p, L.dim) if new.size else V
        if W.dim == V.dim:
            return V
        V = W


def check_lemma_3_4(T: LieTriality, H: MalcevAlgebra, gens) -> Report:
    """If L = <gens, gens^alpha> as a Lie algebra then H = <gens> as a Malcev algebra.

    ``gens`` are given in H coordinates.
    """
    p = T.p
    gens = np.asarray(gens, dtype=np.int64).reshape(-1, H.dim) % p
    amb = gens @ H.embedding.T % p
    lie = lie_generated(T.L, np.vstack([amb, amb @ T.alpha.T % p]))
    if lie.dim < T.L.dim:
        return skipped(
            "H generated by a_1..a_m",
            f"precondition fails: gens and gens^alpha generate a {lie.dim}-dimensional Lie subalgebra of dim {T.L.dim}",
            ref="Lemma 3.4",
        )
    V = generated_subalgebra(H, gens)
    return outcome("H generated by a_1..a_m", V.dim == H.dim, ref="Lemma 3.4", generated_dim=V.dim, dim_h=H.dim)


# ---------------------------------------------------------------------------
# series


def _stabilized(spaces: list[Subspace]) -> bool:
    """True once terms m..2m+1 coincide for some m (then the chain is constant from m on)."""
    k = len(spaces)  # terms 1..k
    m = k
    while m > 1 and spaces[m - 2] == spaces[k - 1]:
        m -= 1
    return k >= 2 * m + 1


@dataclass
class SeriesResult:
    kind: str
    chain: list[Subspace]
    verdict: dict
    report: Report

    @property
    def dims(self) -> list[int]:
        return [s.dim for s in self.chain]


def series(M: MalcevAlgebra, kind: str = "lower_power", max_terms: int = 64) -> SeriesResult:
    """Descending chain of the given kind with its verdict; Kuzmin's containment is always checked."""
    kinds = ("lower_power", "solvable_bracket", "derived")
    if kind not in kinds:
        raise ValueError(f"kind must be one of {kinds}")
    full = Subspace.full(M.dim, M.p)
    zero = Subspace.zero(M.dim, M.p)
    chain: list[Subspace] = [full]
    ideal_ok = True
    if kind == "lower_power":
        while chain[-1].dim and not _stabilized(chain) and len(chain) < max_terms:
            k = len(chain) + 1
            acc = zero
            for i in range(1, k):
                acc = acc.sum(product_space(M, chain[i - 1], chain[k - i - 1]))
            chain.append(acc)
        nilpotent = chain[-1].dim == 0
        # chain[k] is M^(k+1); class = max(1, min k with M^(k+1) = 0)
        cls = max(1, len(chain) - 1) if nilpotent else None
        verdict = {"nilpotent": nilpotent, "class": cls}
    else:
        while chain[-1].dim and len(chain) < max_terms:
            I = chain[-1]
            sq = product_space(M, I, I)
            if kind == "derived":
                nxt = sq
            else:
                nxt = sq.sum(product_space(M, sq, full))
                closed = _ideal_closure(M, nxt)
                ideal_ok &= closed == nxt
                nxt = closed
            if nxt == I:
                break
            chain.append(nxt)
        solvable = chain[-1].dim == 0
        verdict = {"solvable": solvable, "length": len(chain) - 1 if solvable else None}
    dims = [s.dim for s in chain]
    clauses = [outcome("M^[3] in M^2 * M^2", kuzmin_containment(M), ref="Kuzmin")]
    if kind == "solvable_bracket":
        clauses.append(outcome("I^2 + I^2 M is an ideal", ideal_ok))
    rep = combine(f"{kind} series", clauses, ref="series", dims=dims, **verdict)
    return SeriesResult(kind, chain, verdict, rep)


def _ideal_closure(M: MalcevAlgebra, I: Subspace) -> Subspace:
    full = Subspace.full(M.dim, M.p)
    while True:
        J = I.sum(product_space(M, I, full))
        if J.dim == I.dim:
            return I
        I = J


def solvable_bracket_terms(M: MalcevAlgebra, count: int) -> list[Subspace]:
    """M^[0] = M, M^[i+1] = I^2 + I^2 M with I = M^[i]."""
    full = Subspace.full(M.dim, M.p)
    out = [full]
    for _ in range(count):
        I = out[-1]
        sq = product_space(M, I, I)
        out.append(_ideal_closure(M, sq.sum(product_space(M, sq, full))))
    return out


def kuzmin_containment(M: MalcevAlgebra) -> bool:
    full = Subspace.full(M.dim, M.p)
    M2 = product_space(M, full, full)
    return product_space(M, M2, M2).includes(solvable_bracket_terms(M, 3)[3])


def is_nilpotent(M: MalcevAlgebra) -> bool:
    return bool(series(M, "lower_power").verdict["nilpotent"])
