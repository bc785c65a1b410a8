import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from moufang_lab.group_algebra import (
    FiltrationError,
    GroupAlgebra,
    check_filtration,
    graded_envelope,
    omega_power,
    zassenhaus_filtration,
)
from moufang_lab.groups import (
    cyclic,
    direct_product,
    elementary_abelian,
    heisenberg,
    modular_group,
    symmetric_group,
)

P_GROUPS = [
    (cyclic(5), 5),
    (cyclic(25), 5),
    (elementary_abelian(5, 2), 5),
    (heisenberg(3), 3),
    (heisenberg(5), 5),
    (modular_group(3), 3),
    (modular_group(5), 5),
    (direct_product(heisenberg(3), cyclic(3)), 3),
]


def ids(case):
    return case[0].name


def test_cyclic_omega_dims():
    GA = GroupAlgebra(cyclic(5), 5)
    assert [omega_power(GA, i).dim for i in range(1, 6)] == [4, 3, 2, 1, 0]
    F = zassenhaus_filtration(GA)
    assert F.term(2).tolist() == [0]
    assert F.quotient_dims() == {1: 1}


def test_group_algebra_product_matches_convolution():
    G = heisenberg(3)
    GA = GroupAlgebra(G, 3)
    rng = np.random.default_rng(0)
    u, v = rng.integers(0, 3, 27), rng.integers(0, 3, 27)
    naive = np.zeros(27, dtype=np.int64)
    for g in range(27):
        for h in range(27):
            naive[G.table[g, h]] += u[g] * v[h]
    assert np.array_equal(GA.mul(u, v), naive % 3)


def test_augmentation_ideal_nilpotent_exponent():
    # omega(F_p C_p^k)^(k(p-1)+1) = 0 and nothing earlier
    GA = GroupAlgebra(elementary_abelian(3, 2), 3)
    dims = [W.dim for W in GA.omega_powers()]
    assert dims == [8, 6, 3, 1, 0]


def test_heisenberg_chain():
    F = zassenhaus_filtration(GroupAlgebra(heisenberg(5), 5))
    assert F.subgroup_orders[:3] == [125, 5, 1]
    assert F.term(2).tolist() == [0, 1, 2, 3, 4]  # the center
    assert F.quotient_dims() == {1: 2, 2: 1}


def test_modular_chain():
    F = zassenhaus_filtration(GroupAlgebra(modular_group(5), 5))
    assert {i: d for i, d in F.quotient_dims().items() if d} == {1: 2, 5: 1}
    assert F.quotient_dims()[3] == 0


@pytest.mark.parametrize("case", P_GROUPS, ids=ids)
def test_omega_and_lazard_agree(case):
    G, p = case
    a = zassenhaus_filtration(GroupAlgebra(G, p), method="omega")
    b = zassenhaus_filtration(GroupAlgebra(G, p), method="lazard")
    top = max(len(a.terms), len(b.terms))
    for i in range(1, top + 1):
        assert np.array_equal(a.term(i), b.term(i)), i
    assert check_filtration(a).passed and check_filtration(b).passed


def test_non_p_group_filtration():
    F = zassenhaus_filtration(GroupAlgebra(symmetric_group(3), 3))
    rep = check_filtration(F)
    assert not F.reaches_trivial
    assert rep.clause("filtration reaches 1").failed
    assert rep.clause("[G_i, G_j] in G_(i+j)").passed
    with pytest.raises(FiltrationError):
        graded_envelope(GroupAlgebra(symmetric_group(3), 3), F)


def test_omega_cap(monkeypatch):
    monkeypatch.setenv("MOUFANG_LAB_MAX_OMEGA_ORDER", "10")
    GA = GroupAlgebra(heisenberg(3), 3)
    with pytest.raises(Exception):
        GA.omega_powers()
    assert zassenhaus_filtration(GA).method == "lazard"


def test_bad_method_and_prime():
    with pytest.raises(ValueError):
        GroupAlgebra(cyclic(4), 4)
    with pytest.raises(ValueError):
        zassenhaus_filtration(GroupAlgebra(cyclic(5), 5), method="nope")


@pytest.mark.parametrize("case", P_GROUPS[:7], ids=ids)
def test_jennings_matches_omega_dims(case):
    G, p = case
    GA = GroupAlgebra(G, p)
    F = zassenhaus_filtration(GA)
    a = graded_envelope(GA, F, method="omega")
    b = graded_envelope(GA, F, method="jennings")
    assert a.component_dims() == b.component_dims()


@given(st.sampled_from(P_GROUPS[:7]), st.integers(0, 2**32 - 1))
def test_jennings_membership_matches_omega(case, seed):
    G, p = case
    GA = GroupAlgebra(G, p)
    F = zassenhaus_filtration(GA)
    a = graded_envelope(GA, F, method="omega")
    b = graded_envelope(GA, F, method="jennings")
    rng = np.random.default_rng(seed)
    powers = GA.omega_powers()
    for k in range(1, len(powers) + 2):
        # random member of omega^k, plus a random vector
        W = GA.omega_power(k) if k <= len(powers) else None
        member = (rng.integers(0, p, W.dim) @ W.basis) % p if W is not None and W.dim else np.zeros(G.order, dtype=np.int64)
        if k <= len(powers):
            assert a.in_omega(member, k) and b.in_omega(member, k)
        v = rng.integers(0, p, G.order)
        assert a.in_omega(v, k) == b.in_omega(v, k)


def test_lift_lands_in_right_power():
    GA = GroupAlgebra(heisenberg(5), 5)
    F = zassenhaus_filtration(GA)
    env = graded_envelope(GA, F)
    v = env.lift(2, [1])
    assert env.in_omega(v, 2) and not env.in_omega(v, 3)
