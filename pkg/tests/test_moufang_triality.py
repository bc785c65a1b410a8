import numpy as np
import pytest

from moufang_lab.groups import GroupMap, cyclic, elementary_abelian, heisenberg, symmetric_group
from moufang_lab.moufang import (
    InvalidLoop,
    Loop,
    NotPowerAssociative,
    check_moufang,
    generated_subloop,
    is_associative,
    loop_exponent,
    loop_generators,
)
from moufang_lab.triality import (
    TrialityError,
    TrialityGroup,
    abelian_doubling,
    loop_to_base,
    moufang_from_triality,
    sigma_commutator_set,
    trivial_triality,
    verify_triality,
)

from conftest import fleet_triality

# smallest non-associative loop shape: order 5, every element an involution
ORDER5 = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]


def chein_loop(G):
    """M(G, 2): pairs (g, e) with the Chein doubling product."""
    n, t, inv = G.order, G.table, G.inverse
    table = np.empty((2 * n, 2 * n), dtype=np.int64)
    for g in range(n):
        for h in range(n):
            table[g, h] = t[g, h]
            table[g, n + h] = n + t[h, g]
            table[n + g, h] = n + t[g, inv[h]]
            table[n + g, n + h] = t[inv[h], g]
    return Loop(table, name=f"M({G.name},2)")


def test_groups_are_moufang():
    for G in (cyclic(5), heisenberg(3), symmetric_group(3)):
        L = Loop(G.table)
        assert is_associative(L) and check_moufang(L).passed


def test_chein_loop_is_moufang_not_associative():
    L = chein_loop(symmetric_group(3))
    assert check_moufang(L).passed
    assert not is_associative(L)
    assert loop_exponent(L) == 6


def test_non_moufang_witness_is_real():
    L = Loop(ORDER5)
    rep = check_moufang(L)
    assert rep.failed
    w = rep.witnesses[0]
    t, x, y, z = L.table, w["x"], w["y"], w["z"]
    if w["identity"] == 1:
        assert t[t[t[z, x], y], x] != t[z, t[t[x, y], x]]
    else:
        assert t[x, t[y, t[x, z]]] != t[t[x, t[y, x]], z]


def test_moufang_sampled_agrees(monkeypatch):
    monkeypatch.setenv("MOUFANG_LAB_SWEEP_LIMIT", "10")
    assert check_moufang(chein_loop(symmetric_group(3)), seed=1).passed
    assert not check_moufang(Loop(ORDER5), seed=1).details["exhaustive"]


def test_invalid_loop():
    with pytest.raises(InvalidLoop):
        Loop([[0, 1], [1, 1]])
    with pytest.raises(InvalidLoop):
        Loop(np.zeros((2, 3)))


def test_power_associativity_failure():
    # a loop of order 6 where x(xx) != (xx)x for some x
    table = np.array(
        [
            [0, 1, 2, 3, 4, 5],
            [1, 2, 0, 4, 5, 3],
            [2, 3, 4, 5, 0, 1],
            [3, 4, 5, 0, 1, 2],
            [4, 5, 3, 1, 2, 0],
            [5, 0, 1, 2, 3, 4],
        ]
    )
    L = Loop(table)
    t = table
    x = np.arange(6)
    if (t[x, t[x, x]] != t[t[x, x], x]).any():
        with pytest.raises(NotPowerAssociative):
            loop_exponent(L)
    else:  # pragma: no cover - table above is chosen to be non power-associative
        pytest.fail("fixture loop is power-associative")


def test_subloops_and_generators():
    L = chein_loop(symmetric_group(3))
    gens = loop_generators(L)
    assert generated_subloop(L, gens).order == 12
    sub = generated_subloop(L, [6])
    assert sub.order == 2 and sub.provenance.tolist() == [0, 6]


def test_relabel_roundtrip():
    L = Loop(cyclic(5).table)
    perm = np.array([0, 3, 1, 4, 2])
    M = L.relabel(perm)
    assert M.relabel(np.argsort(perm)).equals_table(L)


@pytest.mark.parametrize("name", ["ab-C5", "ab-C5xC5", "ab-C7", "double-heis125", "double-mod125"])
def test_fleet_triality_and_loop(name):
    T, p = fleet_triality(name)
    assert verify_triality(T.G, T.rho, T.sigma).passed
    U = moufang_from_triality(T)
    assert check_moufang(U).passed
    assert U.order ** 2 == T.G.order
    assert loop_exponent(U) == (25 if "mod" in name else p)
    # the loop carries the base group's multiplication
    lab = loop_to_base(T, U)
    B = T.base
    assert np.array_equal(lab[U.table], B.table[lab[:, None], lab[None, :]])


def test_trivial_triality():
    T = trivial_triality()
    assert verify_triality(T.G, T.rho, T.sigma).passed
    assert moufang_from_triality(T).order == 1


def test_perturbed_sigma_fails():
    T = abelian_doubling(cyclic(5))
    bad = T.sigma.images.copy()
    bad[[1, 2]] = bad[[2, 1]]
    rep = verify_triality(T.G, T.rho, bad)
    assert rep.failed and rep.clause("sigma is an automorphism").failed
    with pytest.raises(TrialityError):
        moufang_from_triality(TrialityGroup(T.G, T.rho, GroupMap(T.G, bad)))


def test_identity_maps_fail_rho_order_only():
    G = cyclic(5)
    ident = np.arange(5)
    rep = verify_triality(G, ident, ident)
    # sigma = 1 makes every sigma-commutator trivial, so only rho^3 = 1 etc. matter
    assert rep.passed


def test_inverse_sigma_breaks_triality_identity():
    # G = C5, rho = 1, sigma = inversion: [x, sigma] = x^-2 and the product is x^-6 != 1
    G = cyclic(5)
    rep = verify_triality(G, np.arange(5), (-np.arange(5)) % 5)
    assert rep.clause("triality identity").failed


def test_abelian_doubling_needs_abelian():
    with pytest.raises(ValueError):
        abelian_doubling(symmetric_group(3))


def test_sigma_commutator_set_sorted():
    T = abelian_doubling(elementary_abelian(5, 2))
    U = sigma_commutator_set(T)
    assert U[0] == 0 and U.size == 25
