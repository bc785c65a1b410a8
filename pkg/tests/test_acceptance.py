"""Acceptance criteria 1-10, one test each, one PASS/FAIL line each.

Run with pytest (the lines are repeated in the terminal summary) or directly:

    python3 tests/test_acceptance.py
"""

import io
import itertools
import json
import sys
from contextlib import redirect_stdout
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE, FLEET_NAMES, fleet_lie, fleet_triality  # noqa: E402

from moufang_lab.cli import main  # noqa: E402
from moufang_lab.free_malcev import (  # noqa: E402
    FreeMalcevEngine,
    engel_quotient_dims,
    free_malcev_dims,
    pure_engel_monomial,
    totals,
    witt_multidegree,
)
from moufang_lab.graded_lie import build_lp_algebra, example_4_algebra, verify_lie_triality, verify_restricted_axioms  # noqa: E402
from moufang_lab.group_algebra import (  # noqa: E402
    GroupAlgebra,
    check_filtration,
    graded_envelope,
    omega_power,
    zassenhaus_filtration,
)
from moufang_lab.groups import cyclic, heisenberg, modular_group  # noqa: E402
from moufang_lab.linalg_fp import matpow  # noqa: E402
from moufang_lab.malcev import (  # noqa: E402
    _symmetrized_mod,
    check_bridge_identities,
    check_engel_hypotheses,
    check_lemma_4_4,
    check_lemma_4_5,
    check_malcev_identities,
    cross_product_algebra,
    series,
)
from moufang_lab.moufang import check_moufang  # noqa: E402
from moufang_lab.pipeline import EXAMPLES, FLEET  # noqa: E402
from moufang_lab.triality import moufang_from_triality, verify_triality  # noqa: E402

BRIDGE = "3[[a,b],c] = 2(a*b)*c + (c*b)*a + (a*c)*b"


def record(k: int, title: str, checks: dict[str, bool]):
    bad = [name for name, ok in checks.items() if not ok]
    ok = not bad
    text = title + ("" if ok else "  [failing: " + "; ".join(bad) + "]")
    ACCEPTANCE[k] = (ok, text)
    print(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {text}")
    assert ok, bad


def _cli(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue()


def _envelope_for(G, p, F):
    return graded_envelope(GroupAlgebra(G, p), F)


def test_criterion_01_triality_to_moufang():
    checks = {}
    for name in FLEET_NAMES:
        T, _ = fleet_triality(name)
        checks[f"{name}: triality"] = verify_triality(T.G, T.rho, T.sigma).passed
        rep = check_moufang(moufang_from_triality(T))
        checks[f"{name}: Moufang, exhaustive"] = rep.passed and rep.details["exhaustive"]
    record(1, "triality groups give Moufang loops (fleet of 5, exhaustive)", checks)


def test_criterion_02_zassenhaus():
    GA = GroupAlgebra(cyclic(5), 5)
    F = zassenhaus_filtration(GA)
    checks = {
        "C5: dim omega^i = 5 - i": [omega_power(GA, i).dim for i in range(1, 6)] == [4, 3, 2, 1, 0],
        "C5: G_2 = 1": F.term(2).tolist() == [0],
    }
    H = heisenberg(5)
    FH = zassenhaus_filtration(GroupAlgebra(H, 5))
    center = np.flatnonzero((H.table == H.table.T).all(axis=1))
    checks["Heis: G > Z > 1"] = FH.subgroup_orders[:3] == [125, 5, 1] and np.array_equal(FH.term(2), center)
    checks["Heis: quotient dims (2, 1)"] = FH.quotient_dims() == {1: 2, 2: 1}
    for name in FLEET_NAMES:
        T, p = fleet_triality(name)
        rep = check_filtration(zassenhaus_filtration(GroupAlgebra(T.G, p)))
        checks[f"{name}: [G_i, G_j] in G_(i+j)"] = rep.clause("[G_i, G_j] in G_(i+j)").passed
    record(2, "Zassenhaus filtration: C5 and Heisenberg chains, commutator containment fleet-wide", checks)


def test_criterion_03_restricted_axioms():
    checks = {}
    for name in FLEET_NAMES:
        LT, _ = fleet_lie(name)
        L = LT.L
        rep = verify_restricted_axioms(L, envelope=_envelope_for(L.G, L.p, L.filtration))
        env_clause = rep.clause("(a+b)^[p] = a^[p] + b^[p] + {a,b} (graded envelope)")
        checks[f"{name}: three axioms"] = rep.passed
        checks[f"{name}: axiom 2 via envelope"] = env_clause.passed
    M = build_lp_algebra(modular_group(5), 5)
    checks["modular 125: p-map nonzero on degree 1"] = bool(M.p_map_basis[:, M.offsets[1]].any())
    record(3, "L_p(G) is a Lie p-algebra fleet-wide; p-map nonzero on L_p(modular 125)_1", checks)


def test_criterion_04_lemma_3_1():
    labels = ["rho is an automorphism", "sigma is an automorphism", "rho^3 = 1", "sigma^2 = 1", "(rho sigma)^2 = 1", "triality identity"]
    checks = {}
    for name in FLEET_NAMES:
        LT, _ = fleet_lie(name)
        rep = verify_lie_triality(LT)
        for lbl in labels:
            checks[f"{name}: {lbl}"] = rep.clause(lbl).passed
    record(4, "induced (rho, sigma) on L_p(G) is a triality, all basis vectors", checks)


def test_criterion_05_malcev_and_bridge():
    checks = {}
    for name in FLEET_NAMES:
        LT, H = fleet_lie(name)  # extract_h raises unless H is closed under *
        checks[f"{name}: H closed under *"] = H.dim > 0
        rep = check_malcev_identities(H)
        checks[f"{name}: (1)"] = rep.clause("(1) xy = -yx").passed
        checks[f"{name}: (2) linearized, all 4-tuples"] = rep.clause("(2) full linearization on basis 4-tuples").passed
        checks[f"{name}: bridge identity"] = check_bridge_identities(LT, H).clause(BRIDGE).passed
    record(5, "H is a Malcev algebra and the bridge identity holds fleet-wide", checks)


def test_criterion_06_lemma_4_4():
    checks = {}
    for name in FLEET_NAMES:
        LT, H = fleet_lie(name)
        checks[f"{name}: [a, a^rho] = 0"] = check_lemma_4_4(LT, H).passed
    for sign in (1, -1):
        T, rep = example_4_algebra(5, sign)
        lem = check_lemma_4_4(T)
        w = lem.clause("[a, a^rho] = 0 on basis of H").witnesses
        checks[f"example {sign:+d}: Lemma 4.4 fails"] = lem.failed
        checks[f"example {sign:+d}: witness [a, a^rho] = c != 0"] = bool(w) and w[0]["[a, a^rho]"] == [0, 0, 1]
        sig, tri = rep.clause("sigma is an automorphism"), rep.clause("triality identity")
        if sign == 1:
            checks["example +1: sigma not an automorphism, identity holds"] = sig.failed and tri.passed
        else:
            checks["example -1: sigma an automorphism, identity fails"] = sig.passed and tri.failed
        others = ["rho is an automorphism", "rho^3 = 1", "sigma^2 = 1", "(rho sigma)^2 = 1"]
        checks[f"example {sign:+d}: remaining clauses pass"] = all(rep.clause(c).passed for c in others)
    record(6, "[a, a^rho] vanishes on group-derived H; the worked example fails it as analysed", checks)


def test_criterion_07_engel_lemmas():
    LT, H = fleet_lie("double-heis125")
    p, q = 5, 5
    eye = np.eye(H.dim, dtype=np.int64)
    ads = [H.ad_star(eye[i]) for i in range(H.dim)]
    checks = {
        "ad*(a)^5 = 0 on homogeneous basis": all(not matpow(A, q, p).any() for A in ads),
        "Engel (i) sampled homogeneous": check_engel_hypotheses(H, 1).clause("(i) ad*(a)^5 = 0 for homogeneous a").passed,
    }
    tuples = list(itertools.product(range(H.dim), repeat=q))
    checks[f"S_5 sum vanishes on all {len(tuples)} basis 5-tuples"] = all(
        not _symmetrized_mod([ads[i] for i in t], p).any() for t in tuples
    )
    rep = check_lemma_4_5(LT, H, 1)
    checks["Lemma 4.5(1), k = 1"] = rep.clauses[0].passed and rep.clauses[0].check.startswith("(1)")
    record(7, "Engel-type lemmas at p^n = 5 on H(double Heis 125)", checks)


def test_criterion_08_series():
    checks = {}
    for name in FLEET_NAMES:
        _, H = fleet_lie(name)
        s = series(H, "lower_power")
        checks[f"{name}: lower power series reaches 0"] = s.verdict["nilpotent"] and s.dims[-1] == 0
        checks[f"{name}: Kuzmin containment"] = s.report.clause("M^[3] in M^2 * M^2").passed
    X = series(cross_product_algebra(5), "lower_power")
    checks["cross product: stabilizes at full dimension"] = X.dims[-1] == 3 and all(d == 3 for d in X.dims) and not X.verdict["nilpotent"]
    record(8, "H nilpotent fleet-wide, Kuzmin holds, simple negative control does not collapse", checks)


def test_criterion_09_free_malcev():
    free2 = free_malcev_dims(2, 6)
    free3 = free_malcev_dims(3, 5)
    tot = totals(free2)
    eng = engel_quotient_dims(2, 5, 1, 6)
    sign, u = pure_engel_monomial(5)
    checks = {
        "m=2 degrees 1-3: 2, 1, 2": [tot[1], tot[2], tot[3]] == [2, 1, 2],
        "dims >= Witt cellwise (m=2 to 6, m=3 to 5)": all(v >= witt_multidegree(g) for d in (free2, free3) for g, v in d.items()),
        "Engel quotient <= free cellwise": all(eng[g] <= free2[g] for g in free2),
        "x1(x1(x1(x1(x1x2)))) = 0 in the quotient": sign != 0 and FreeMalcevEngine(2, 5, engel_q=5).in_ideal({u: 1}),
    }
    record(9, "free Malcev dimensions, Witt bounds, Engel quotient", checks)


def test_criterion_10_pipeline_cli():
    code, out = _cli("--json", "burnside-pipeline", "--builtin", "ab-C5xC5")
    obj = json.loads(out)
    checks = {
        "ab-C5xC5: p^dim H = |U| = 25": obj["p^dim_H"] == obj["|U|"] == 25,
        "ab-C5xC5: all pass": code == 0 and obj["all_pass"],
    }
    for name in FLEET:
        code, out = _cli("--json", "burnside-pipeline", "--builtin", name)
        checks[f"{name}: exit 0"] = code == 0
        if name in EXAMPLES:
            rows = json.loads(out)["verdicts"]
            expected = [r for r in rows if r["expected"] == "fail"]
            checks[f"{name}: expected failure rows reported"] = bool(expected) and all(r["status"] == "fail" for r in expected)
    record(10, "burnside-pipeline: all-pass on C5xC5 doubling, exit 0 on every fleet member", checks)


if __name__ == "__main__":
    failed = 0
    for fn in [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]:
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
