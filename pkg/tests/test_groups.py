import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from moufang_lab.groups import (
    FiniteGroup,
    GroupMap,
    GroupTooLarge,
    InvalidGroup,
    check_hall_identity,
    check_power_commutator_congruence,
    commutator,
    commutator_subgroup,
    cyclic,
    derived_subgroup,
    direct_product,
    element_order,
    elementary_abelian,
    exponent,
    heisenberg,
    is_p_group,
    modular_group,
    n_prime,
    normal_closure,
    symmetric_group,
)

SMALL = [cyclic(5), elementary_abelian(5, 2), heisenberg(3), heisenberg(5), modular_group(5), symmetric_group(3)]


def test_orders_and_exponents():
    assert [G.order for G in SMALL] == [5, 25, 27, 125, 125, 6]
    assert exponent(heisenberg(5)) == 5
    assert exponent(modular_group(5)) == 25
    assert exponent(symmetric_group(3)) == 6


def test_abelian_flags():
    assert cyclic(7).is_abelian() and elementary_abelian(3, 3).is_abelian()
    assert not heisenberg(5).is_abelian() and not modular_group(5).is_abelian()


def test_p_group():
    assert is_p_group(heisenberg(5), 5) and not is_p_group(symmetric_group(3), 3)


def test_rejects_non_latin_and_non_associative():
    with pytest.raises(InvalidGroup):
        FiniteGroup([[0, 1], [1, 1]])
    # loop of order 5 that is not a group
    table = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(InvalidGroup):
        FiniteGroup(table)


def test_table_cap(monkeypatch):
    monkeypatch.setenv("MOUFANG_LAB_MAX_TABLE_ORDER", "10")
    with pytest.raises(GroupTooLarge):
        cyclic(11)


def test_implicit_direct_product_matches_table(monkeypatch):
    G_table = direct_product(heisenberg(3), cyclic(3))
    monkeypatch.setenv("MOUFANG_LAB_MAX_TABLE_ORDER", "40")
    G_impl = direct_product(heisenberg(3), cyclic(3))
    assert not G_impl.is_table_backed
    idx = np.arange(81)
    assert np.array_equal(G_impl.mul(idx[:, None], idx[None, :]), G_table.table)
    assert np.array_equal(G_impl.inverse, G_table.inverse)


def test_commutator_convention():
    G = heisenberg(5)
    # (1,0,0) and (0,1,0) commute to the central (0,0,1)
    x, y = 25, 5
    assert commutator(G, x, y) == 1
    with pytest.raises(IndexError):
        commutator(G, 0, 125)


@given(st.sampled_from(SMALL), st.data())
def test_commutator_identities(G, data):
    x = data.draw(st.integers(0, G.order - 1))
    y = data.draw(st.integers(0, G.order - 1))
    c = int(G.commutator(x, y))
    assert int(G.mul(G.inv(c), 0)) == int(G.commutator(y, x))
    assert int(G.mul(x, y)) == int(G.mul(G.mul(y, x), c))


@pytest.mark.parametrize("G", SMALL, ids=lambda g: g.name)
def test_hall_identity(G):
    rep = check_hall_identity(G)
    assert rep.passed and rep.details["exhaustive"]


def test_hall_identity_sampled(monkeypatch):
    monkeypatch.setenv("MOUFANG_LAB_SWEEP_LIMIT", "100")
    rep = check_hall_identity(heisenberg(5), seed=3)
    assert rep.passed and not rep.details["exhaustive"]


def test_derived_and_center():
    H = heisenberg(5)
    everything = np.arange(H.order)
    D = derived_subgroup(H, everything)
    assert D.tolist() == [0, 1, 2, 3, 4]
    assert np.array_equal(commutator_subgroup(H, everything, everything), D)
    S3 = symmetric_group(3)
    assert derived_subgroup(S3, np.arange(6)).size == 3
    assert normal_closure(S3, [1]).size == 6


def test_n_prime_and_congruence():
    M = modular_group(5)
    Np = n_prime(M, np.arange(M.order), 5)
    assert Np.size == 5  # <x^5>
    for x, y in [(5, 1), (1, 5), (6, 7)]:
        assert check_power_commutator_congruence(M, x, y, 5).passed
    with pytest.raises(ValueError):
        n_prime(M, [0, 1], 5)


def test_element_order():
    M = modular_group(5)
    assert element_order(M, 5) == 25
    assert element_order(M, 1) == 5
    assert np.array_equal(M.element_orders()[[0, 1, 5]], [1, 5, 25])


def test_group_maps():
    G = cyclic(5)
    double = GroupMap(G, (2 * np.arange(5)) % 5)
    assert double.is_automorphism()
    assert double.power(4).is_identity()
    assert double.then(double).images.tolist() == [0, 4, 3, 2, 1]
    bad = GroupMap(G, [0, 1, 1, 1, 1])
    assert not bad.is_bijective()
    shift = GroupMap(G, (np.arange(5) + 1) % 5)
    assert shift.homomorphism_violation() is not None


def test_from_multiplication_rejects_non_generating():
    idx = np.arange(4)
    with pytest.raises(InvalidGroup):
        FiniteGroup.from_multiplication(4, lambda a, b: (a + b) % 4, (-idx) % 4, [2])
