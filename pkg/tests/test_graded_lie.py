import json
import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from moufang_lab.group_algebra import GroupAlgebra, graded_envelope, zassenhaus_filtration
from moufang_lab.graded_lie import (
    LieAlgebra,
    LieTriality,
    NotAPGroup,
    build_lp_algebra,
    example_4_algebra,
    induce_triality,
    jacobson_element,
    verify_lie_triality,
    verify_restricted_axioms,
)
from moufang_lab.groups import cyclic, heisenberg, modular_group, symmetric_group
from moufang_lab.linalg_fp import inverse, matmul, matpow

from conftest import FLEET_NAMES, fleet_lie, fleet_triality


def matrix_lie(mats, p):
    """Lie algebra spanned by matrix units (closed under commutators), with a coordinate map."""
    flat = np.array([m.ravel() for m in mats]) % p
    d = len(mats)
    piv = [int(np.flatnonzero(row)[0]) for row in flat]
    pinv = inverse(flat[:, piv].T, p)

    def coords(m):
        return matmul(pinv, m.ravel()[piv] % p, p)

    C = np.zeros((d, d, d), dtype=np.int64)
    for i, j in itertools.product(range(d), repeat=2):
        C[i, j] = coords(mats[i] @ mats[j] - mats[j] @ mats[i])
    return LieAlgebra(C, p), coords


def gl(n):
    out = []
    for i, j in itertools.product(range(n), repeat=2):
        e = np.zeros((n, n), dtype=np.int64)
        e[i, j] = 1
        out.append(e)
    return out


def strict_upper(n):
    return [m for m in gl(n) if np.flatnonzero(m)[0] // n < np.flatnonzero(m)[0] % n]


@pytest.mark.parametrize("p,n,basis", [(2, 2, gl), (3, 2, gl), (3, 4, strict_upper), (5, 3, gl)])
def test_jacobson_element_against_matrix_powers(p, n, basis):
    """In an associative algebra, (A+B)^p - A^p - B^p is the Jacobson element of A, B."""
    mats = basis(n)
    L, coords = matrix_lie(mats, p)
    assert L.check_lie_axioms().passed
    rng = np.random.default_rng(p * 10 + n)
    for _ in range(10):
        a, b = rng.integers(0, p, L.dim), rng.integers(0, p, L.dim)
        A = sum(int(c) * m for c, m in zip(a, mats))
        B = sum(int(c) * m for c, m in zip(b, mats))
        pw = lambda X: np.linalg.matrix_power(X % p, p) % p
        expected = coords((pw(A + B) - pw(A) - pw(B)) % p)
        assert np.array_equal(jacobson_element(L, a, b), expected)


def test_lie_axiom_failures_detected():
    C = np.zeros((3, 3, 3), dtype=np.int64)
    C[0, 1, 2] = 1  # not antisymmetric
    assert LieAlgebra(C, 5).check_lie_axioms().clause("antisymmetry").failed
    # a random anticommutative product on F_5^3 that breaks Jacobi
    rng = np.random.default_rng(1)
    while True:
        C = rng.integers(0, 5, (3, 3, 3))
        C = (C - C.transpose(1, 0, 2)) % 5
        rep = LieAlgebra(C, 5).check_lie_axioms()
        if rep.failed:
            assert rep.clause("antisymmetry").passed and rep.clause("Jacobi identity").failed
            break


def test_heisenberg_lp():
    L = build_lp_algebra(heisenberg(5), 5)
    assert L.degree_dims == {1: 2, 2: 1}
    assert L.check_lie_axioms().passed
    a, b = L.basis()[0], L.basis()[1]
    assert L.bracket(a, b).tolist() in ([0, 0, 1], [0, 0, 4])
    assert not L.p_map_basis.any()


def test_modular_p_map_nonzero():
    L = build_lp_algebra(modular_group(5), 5)
    assert L.degree_dims == {1: 2, 5: 1}
    assert L.is_abelian()
    deg1 = L.offsets[1]
    assert L.p_map_basis[:, deg1].any()


def test_cyclic_lp():
    L = build_lp_algebra(cyclic(25), 5)
    assert L.degree_dims == {1: 1, 5: 1}
    assert L.p_power(L.basis()[0]).tolist() == [0, 1]


def test_not_a_p_group():
    with pytest.raises(NotAPGroup):
        build_lp_algebra(symmetric_group(3), 3)


@pytest.mark.parametrize("G,p", [(heisenberg(3), 3), (modular_group(5), 5), (heisenberg(5), 5), (cyclic(25), 5)], ids=str)
def test_restricted_axioms_small(G, p):
    GA = GroupAlgebra(G, p)
    F = zassenhaus_filtration(GA)
    L = build_lp_algebra(G, p, filtration=F)
    for method in ("omega", "jennings"):
        rep = verify_restricted_axioms(L, envelope=graded_envelope(GA, F, method=method))
        assert rep.passed, rep


def test_restricted_axioms_without_envelope_skips_clause():
    L = build_lp_algebra(heisenberg(3), 3)
    rep = verify_restricted_axioms(L)
    assert rep.passed
    assert rep.clause("(a+b)^[p] = a^[p] + b^[p] + {a,b} (graded envelope)").skipped


def test_restricted_axiom_violation_detected():
    L = build_lp_algebra(cyclic(25), 5)
    # break the p-map by hand
    L.p_map_basis = np.zeros_like(L.p_map_basis)
    L.p_power = lambda x: np.zeros(L.dim, dtype=np.int64) if not np.asarray(x)[0] % 5 else np.array([0, 2])
    rep = verify_restricted_axioms(L)
    assert rep.failed


@pytest.mark.parametrize("name", FLEET_NAMES)
def test_induced_triality(name):
    LT, _ = fleet_lie(name)
    rep = verify_lie_triality(LT)
    assert rep.passed and rep.ref == "Lemma 3.1"
    p = LT.p
    # adjoint action is compatible: ad(Ra) = R ad(a) R^-1
    R, Ri = LT.rho, LT.rho_inverse
    for a in LT.L.basis():
        assert np.array_equal(LT.L.ad(matmul(R, a, p)), matmul(matmul(R, LT.L.ad(a), p), Ri, p))


def test_to_dict_is_json():
    LT, _ = fleet_lie("double-mod125")
    d = LT.L.to_dict()
    json.dumps(d)
    assert d["p_map"]
    assert d["degree_dims"] == {"1": 4, "5": 2}


def test_example_4_sign_plus():
    T, rep = example_4_algebra(5, 1)
    assert rep.clause("sigma is an automorphism").failed
    assert rep.clause("rho is an automorphism").passed
    assert rep.clause("triality identity").passed
    for lbl in ("rho^3 = 1", "sigma^2 = 1", "(rho sigma)^2 = 1"):
        assert rep.clause(lbl).passed
    assert rep.details["[a, a^rho]"] == [0, 0, 1]


def test_example_4_sign_minus():
    T, rep = example_4_algebra(5, -1)
    assert rep.clause("sigma is an automorphism").passed
    tri = rep.clause("triality identity")
    assert tri.failed
    assert tri.witnesses[0] == {"basis": 2, "value": [0, 0, 4]}


def test_example_4_argument_checks():
    with pytest.raises(ValueError):
        example_4_algebra(2)
    with pytest.raises(ValueError):
        example_4_algebra(5, 0)


def test_induce_rejects_bad_triality():
    T, p = fleet_triality("ab-C5")
    LT = induce_triality(T, p)
    broken = LieTriality(LT.L, LT.rho, (2 * LT.sigma) % p, from_group=True)
    assert verify_lie_triality(broken).failed


@given(st.integers(0, 2**32 - 1))
def test_triality_identity_on_random_vectors(seed):
    LT, _ = fleet_lie("double-heis125")
    p, R, S = LT.p, LT.rho, LT.sigma
    x = np.random.default_rng(seed).integers(0, p, LT.L.dim)
    d = (matmul(S, x, p) - x) % p
    total = (d + matmul(R, d, p) + matmul(matpow(R, 2, p), d, p)) % p
    assert not total.any()
