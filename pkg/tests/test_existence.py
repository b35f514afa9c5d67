import copy
import itertools
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from respect_kit import catalog as cat
from respect_kit import exactlin as el
from respect_kit import existence as ex
from respect_kit import fileformat as ff
from respect_kit import liealg as la
from respect_kit import sympoly as sp
from respect_kit.decomp import Decomposition, PreconditionError

from conftest import invertible_matrices, transport


def space(g, text):
    return el.span(ff.parse_vectors(text, g.basis_names), g.dim)


def radical_of(g, phi):
    """Radical of B(x, y) = phi([x, y]), straight from the bracket."""
    n = g.dim
    B = [[el.dot(phi, g.bracket(g.basis_vector(i), g.basis_vector(j))) for j in range(n)] for i in range(n)]
    return el.kernel(B, n)


# dim V = 2 conditions


def test_v2_conditions_l6_10():
    g = cat.load("L6_10")
    V = space(g, "x4,x5")
    assert tuple(ex.v2_conditions(g, V)) == (True, True, True)
    assert ex.bracket_with_all(g, V) == space(g, "x6")
    assert la.derived_algebra(g) == space(g, "x3,x6")


def test_v2_conditions_abelian_fails_c1():
    g = la.abelian(4)
    assert ex.v2_conditions(g, el.coordinate_subspace([0, 1], 4)).c1 is False


def test_v2_conditions_l6_24_0():
    g = cat.load("L6_24(0)")
    c = ex.v2_conditions(g, space(g, "x1,x3"))
    assert c.c1 and not c.c3
    assert ex.bracket_with_all(g, space(g, "x1,x3")) == space(g, "x3,x5,x6") == la.derived_algebra(g)


def test_v2_conditions_errors():
    g = cat.load("L6_10")
    with pytest.raises(PreconditionError):
        ex.v2_conditions(g, space(g, "x4"))
    with pytest.raises(la.NotNilpotent):
        ex.v2_conditions(cat.load("Ex3.6"), space(cat.load("Ex3.6"), "v1,v2"))


def check_H(g, V, H):
    """The defining properties of H, checked without the library's search code."""
    K = ex.bracket_with_all(g, V)
    D = la.derived_algebra(g)
    assert H.dim + V.dim == g.dim and (H + V).is_full()
    assert K <= H and not D <= H
    d = Decomposition(g, H, V)
    assert d.analysis.open_flag


def test_construct_H_l6_10():
    g = cat.load("L6_10")
    V = space(g, "x4,x5")
    H = ex.construct_H_from_V(g, V)
    check_H(g, V, H)
    assert el.contains(H, g.basis_vector("x6")) and not el.contains(H, g.basis_vector("x3"))


def test_construct_H_l6_13():
    g = cat.load("L6_13")
    V = space(g, "x3,x4")
    H = ex.construct_H_from_V(g, V)
    check_H(g, V, H)
    assert space(g, "x5,x6") <= H


def test_construct_H_precondition():
    g = cat.load("L6_24(0)")
    with pytest.raises(PreconditionError):
        ex.construct_H_from_V(g, space(g, "x1,x3"))


def in_new_basis(P, v):
    """Coordinates of v after transport(g, P): solve c P = v."""
    Pinv = el.inverse(P)
    n = len(v)
    return tuple(sum(v[a] * Pinv[a][b] for a in range(n)) for b in range(n))


@settings(max_examples=30)
@given(data=st.data())
def test_construct_H_round_trip(data):
    # a Table 1 algebra, optionally plus R, in a random basis; V is the
    # table's plane moved by central elements so the conditions usually survive
    name = data.draw(st.sampled_from(cat.table1()))
    g0 = cat.load(name)
    extra = data.draw(st.sampled_from([None, la.abelian(1)]))
    g = g0 if extra is None else la.direct_sum(g0, extra)
    n = g.dim
    pad = (Fraction(0),) * (n - g0.dim)
    v1, v2 = (tuple(v) + pad for v in space(g0, cat.entry(name).value("table1_V")).basis)
    Z = la.center(g).basis
    c = [data.draw(st.integers(-1, 1)) for _ in range(2 * len(Z))]
    v1 = el.add(v1, el.combine(c[:len(Z)], Z, n))
    v2 = el.add(v2, el.combine(c[len(Z):], Z, n))
    P = data.draw(invertible_matrices(n))
    h = transport(g, P)
    V = el.span([in_new_basis(P, v1), in_new_basis(P, v2)], n)
    assume(V.dim == 2)
    conds = ex.v2_conditions(h, V)
    # the conditions are basis-free, so the transported plane behaves like the original
    assert conds == ex.v2_conditions(g, el.span([v1, v2], n))
    assume(conds.all())
    check_H(h, V, ex.construct_H_from_V(h, V))


def test_construct_H_round_trip_sweep():
    # deterministic companion of the property test: many hits, every one valid
    rng = np.random.default_rng(7)
    hits = 0
    for name in cat.table1():
        g = cat.load(name)
        for _ in range(40):
            rows = rng.integers(-1, 2, size=(2, g.dim))
            V = el.span([tuple(int(x) for x in r) for r in rows], g.dim)
            if V.dim == 2 and ex.v2_conditions(g, V).all():
                check_H(g, V, ex.construct_H_from_V(g, V))
                hits += 1
    assert hits >= 20


def test_explicit_fallback_complement():
    # the last-resort construction is valid on its own, for every Table 1 row
    for name in cat.table1():
        g = cat.load(name)
        V = space(g, cat.entry(name).value("table1_V"))
        K = ex.bracket_with_all(g, V)
        H = ex._explicit_H(g, V, K, la.derived_algebra(g))
        check_H(g, V, H)


# V inside [g,g]


def test_derna_witness_l6_14_hypotheses_fail():
    g = cat.load("L6_14")
    D = la.derived_algebra(g)
    D3 = la.lower_central_term(g, 3)
    # [g,g] = <x3..x6>, [g,[g,g]] = <x4,x5,x6>: the gap is 1, so no witness is promised
    assert (D.dim, D3.dim) == (4, 3)
    assert ex.derna_witness(g) is None


def test_derna_witness_on_a_sum():
    g = la.direct_sum(cat.load("L6_14"), cat.load("h3"))
    D = la.derived_algebra(g)
    D3 = la.lower_central_term(g, 3)
    assert D.dim - D3.dim == 2 and not la.is_abelian_subspace(g, D)
    V = ex.derna_witness(g)
    assert V is not None and V <= D and (V & D3).is_zero()
    v1, v2 = V.basis
    assert any(g.bracket(v1, v2))
    assert ex.v2_conditions(g, V).all()
    check_H(g, V, ex.construct_H_from_V(g, V))


@pytest.mark.parametrize("name", ["h5", "R3", "h3", "L6_26"])
def test_derna_witness_none(name):
    assert ex.derna_witness(cat.load(name)) is None


# codimension-one abelian ideals


def test_abelian_hyperplane_f4():
    g = cat.load("f4")
    ans = ex.abelian_hyperplane(g)
    assert ans.found and ans.hyperplane == space(g, cat.entry("f4").value("abelian_hyperplane"))


def test_abelian_hyperplane_h5():
    g = cat.load("h5")
    pivots, forms = ex.coordinate_forms(g)
    assert len(forms) == 1
    assert sympy.Matrix(forms[0]).rank() == 4
    ans = ex.abelian_hyperplane(g)
    assert not ans.found and ans.record["reason"] == "rank>=4"


def test_abelian_hyperplane_abelian():
    ans = ex.abelian_hyperplane(la.abelian(3))
    assert ans.found and ans.hyperplane.dim == 2


def test_abelian_hyperplane_perfect():
    sl2 = la.from_relations(["h", "e", "f"], [("h", "e", {"e": 2}), ("h", "f", {"f": -2}), ("e", "f", {"h": 1})])
    with pytest.raises(PreconditionError):
        ex.abelian_hyperplane(sl2)


@pytest.mark.parametrize("name", ["f4", "L5_9", "L6_25", "L4_3+R2", "L6_26", "h5"])
@settings(max_examples=20)
@given(data=st.data())
def test_abelian_hyperplane_invariant_under_basis_change(name, data):
    g = cat.load(name)
    h = transport(g, data.draw(invertible_matrices(g.dim)))
    assert ex.abelian_hyperplane(h).found == ex.abelian_hyperplane(g).found


# pencils


def test_pencil_l6_26():
    g = cat.load("L6_26")
    res = ex.pencil_obstruction(g)
    assert res.status == "OBSTRUCTED"
    assert ex.replay_certificate(g, res.certificate)


def test_pencil_l6_22_m1_pfaffian():
    g = cat.load("L6_22(-1)")
    M = ex.pencil_matrix(g)
    pf = sp.pfaffian(M.principal((0, 1, 2, 3)))
    a, b = M.variables
    assert pf == sp.Poly.var(M.variables, a) ** 2 + sp.Poly.var(M.variables, b) ** 2
    assert sp.quadratic_definiteness(pf) is sp.Definiteness.POSITIVE_DEFINITE
    res = ex.pencil_obstruction(g)
    assert res.status == "OBSTRUCTED"
    (stratum,) = res.certificate.data["strata"]
    assert stratum["generic_rank"] == 4 and stratum["zero_set"]["kind"] == "semidefinite"


def test_pencil_l6_10_not_obstructed():
    g = cat.load("L6_10")
    res = ex.pencil_obstruction(g)
    assert res.status == "NOT_OBSTRUCTED"
    w = res.witness
    D = la.derived_algebra(g)
    psi = [Fraction(x) for x in w["psi"]]
    # psi is given in coordinates on [g,g]'s pivots; extend by zero
    phi = [Fraction(0)] * g.dim
    for p, c in zip(D.pivots, psi):
        phi[p] = c
    R = radical_of(g, phi)
    v1, v2 = (tuple(Fraction(x) for x in w[k]) for k in ("v1", "v2"))
    assert el.contains(R, v1) and el.contains(R, v2)
    assert any(g.bracket(v1, v2))


OBSTRUCTED = ["L5_5+R", "L5_6+R", "L5_9+R", "L6_22(0)", "L6_22(-1)", "L6_23", "L6_24(0)", "L6_24(-1)", "L6_26"]


@pytest.mark.parametrize("name", OBSTRUCTED)
def test_pencil_sampling_oracle(name):
    # every sampled psi != 0 on [g,g] has an abelian radical
    g = cat.load(name)
    assert ex.pencil_obstruction(g).status == "OBSTRUCTED"
    D = la.derived_algebra(g)
    rng = np.random.default_rng(11)
    seen = 0
    for _ in range(200):
        phi = tuple(Fraction(int(x)) for x in rng.integers(-4, 5, size=g.dim))
        if all(el.dot(phi, d) == 0 for d in D.basis):
            continue
        seen += 1
        assert la.is_abelian_subspace(g, radical_of(g, phi))
    # small special functionals, which is where the rank drops live
    for p in D.pivots:
        phi = el.unit_vector(g.dim, p)
        assert la.is_abelian_subspace(g, radical_of(g, phi))
    assert seen > 100


def test_tampered_pencil_certificate_fails_replay():
    g = cat.load("L6_26")
    cert = ex.pencil_obstruction(g).certificate
    assert ex.replay_certificate(g, cert)
    bad = copy.deepcopy(cert.data)
    bad["strata"][0]["pfaffian"] = [[[0, 0, 0], "2"]]
    assert not ex.replay_certificate(g, ex.Certificate(cert.kind, bad))
    bad = copy.deepcopy(cert.data)
    bad["strata"][0]["radical"][0][0] = [[[1, 0, 0], "1"]]
    assert not ex.replay_certificate(g, ex.Certificate(cert.kind, bad))
    # a certificate for one algebra does not replay on another
    assert not ex.replay_certificate(cat.load("L6_10"), cert)


def test_other_certificates_replay_and_reject():
    g = cat.load("L4_3+R2")
    v = ex.v2_decide(g)
    assert v.certificate.kind == "CODIM1_ABELIAN_IDEAL"
    assert ex.replay_certificate(g, v.certificate)
    assert not ex.replay_certificate(cat.load("h5"), ex.Certificate("CODIM1_ABELIAN_IDEAL", {
        "functional": ["1", "0", "0", "0", "0"]}))
    assert not ex.replay_certificate(cat.load("L6_10"), ex.Certificate("DERIVED_DIM_LE_1", {}))
    assert not ex.replay_certificate(cat.load("L6_10"), ex.Certificate(
        "TMAIN_CONDITION_FAIL", {"which": "a", "failed": ["a"]}))


# verdicts


@pytest.mark.parametrize("name", ["L6_10", "L6_13", "L6_14", "L6_21(1)", "L6_24(1)"])
def test_v2_decide_exists_cross_checked(name):
    g = cat.load(name)
    v = ex.v2_decide(g, cross_check=True)
    assert v.status is ex.Status.EXISTS and v.certificate is None
    d = v.witness
    assert d.V.dim == 2 and d.analysis.open_flag
    assert ex.v2_conditions(g, d.V).all()


def test_v2_decide_examples():
    v = ex.v2_decide(cat.load("L5_4+R"))
    assert v.status is ex.Status.NOT_EXISTS and v.certificate.kind == "DERIVED_DIM_LE_1"
    v = ex.v2_decide(cat.load("L6_23"))
    assert v.status is ex.Status.NOT_EXISTS and v.certificate.kind == "PENCIL_ALL_RADICALS_ABELIAN"
    with pytest.raises(la.NotNilpotent):
        ex.v2_decide(cat.load("aff2"))


def test_verdict_exclusivity():
    g = cat.load("L6_10")
    d = ex.v2_decide(g).witness
    cert = ex.Certificate("DERIVED_DIM_LE_1", {})
    with pytest.raises(AssertionError):
        ex.Verdict(ex.Status.EXISTS, witness=d, certificate=cert)
    with pytest.raises(AssertionError):
        ex.Verdict(ex.Status.NOT_EXISTS)
    with pytest.raises(AssertionError):
        ex.Verdict(ex.Status.UNKNOWN, witness=d)
    with pytest.raises(ValueError):
        ex.Certificate("MADE_UP")


# dim H = 3


def test_tmain_table2_all_true():
    for name in cat.table2():
        assert ex.tmain_conditions(cat.load(name)).all(), name


@pytest.mark.parametrize("name, letter", [("L6_19(1)", "d"), ("L6_19(-1)", "d"), ("L6_20", "d"),
                                          ("L6_26", "b"), ("L6_25", "a"), ("L5_8+R", "a")])
def test_tmain_named_failures(name, letter):
    g = cat.load(name)
    conds = ex.tmain_conditions(g)
    assert letter in conds.failed()
    v = ex.h3_decide(g)
    assert v.status is ex.Status.NOT_EXISTS
    assert v.certificate.label == f"TMAIN_CONDITION_FAIL({','.join(conds.failed())})"
    assert ex.replay_certificate(g, v.certificate)


def test_tmain_preconditions():
    with pytest.raises(PreconditionError):
        ex.tmain_conditions(cat.load("h5"))
    with pytest.raises(la.NotNilpotent):
        ex.tmain_conditions(la.direct_sum(cat.load("aff2"), la.abelian(4)))


def test_h3_decide_exists():
    g = cat.load("L6_23")
    v = ex.h3_decide(g)
    assert v.status is ex.Status.EXISTS
    assert v.witness.H.dim == 3 and v.witness.analysis.open_flag


# witness search


def _same_span(rows, target):
    return np.linalg.matrix_rank(np.vstack([rows, target])) == len(target) == np.linalg.matrix_rank(rows)


@pytest.mark.parametrize("name, H, V", [
    ("h3+h3", "x1,y1,z1+z2", "x2,y2,z1-z2"),
    ("Ex3.11", "x1,y1,z+w", "x2,y2,z-w"),
])
def test_known_mutual_witnesses_are_structured_candidates(name, H, V):
    g = cat.load(name)
    Ht = np.array([[int(x) for x in v] for v in ff.parse_vectors(H, g.basis_names)])
    Vt = np.array([[int(x) for x in v] for v in ff.parse_vectors(V, g.basis_names)])
    found = any(
        _same_span(Hs[i], Ht) and _same_span(Vs[i], Vt)
        for Hs, Vs in ex._structured_batches(6, 3, 3) for i in range(len(Hs))
    )
    assert found
    d = Decomposition(g, space(g, H), space(g, V))
    assert d.analysis.open_flag and d.analysis.mutual


@pytest.mark.parametrize("name", ["h3+h3", "Ex3.11"])
def test_mutual_search(name):
    g = cat.load(name)
    res = ex.witness_search(g, 3, 3, mutual=True)
    assert res.decomposition is not None and res.phase == "structured"
    a = res.decomposition.analysis
    assert a.open_flag and a.mutual


def test_filiform_v_subalgebra_dim3_absent():
    g = cat.load("Ex2.7")
    for dimV in (3, 4):
        res = ex.witness_search(g, 6 - dimV, dimV, v_subalgebra=True, budget=10_000)
        assert res.decomposition is None


def test_filiform_v_subalgebra_dim2_respects_bound():
    g = cat.load("Ex2.7")
    res = ex.witness_search(g, 4, 2, v_subalgebra=True, budget=2_000)
    if res.decomposition is not None:
        a = res.decomposition.analysis
        assert a.respects and a.v_is_subalgebra


def test_search_dimension_mismatch():
    with pytest.raises(el.DimensionError):
        ex.witness_search(cat.load("h5"), 3, 3)


def test_seed_determinism(monkeypatch):
    g = cat.load("h5")
    r1 = ex.witness_search(g, 3, 2, structured=False, budget=3000, seed=5)
    r2 = ex.witness_search(g, 3, 2, structured=False, budget=3000, seed=5)
    assert (r1.decomposition, r1.trials) == (r2.decomposition, r2.trials) and r1.seed == 5
    monkeypatch.setenv(ex.SEED_ENV, "99")
    assert ex.default_seed() == 99
    assert ex.witness_search(g, 3, 2, structured=False, budget=10).seed == 99
    monkeypatch.delenv(ex.SEED_ENV)
    assert ex.default_seed() == ex.DEFAULT_SEED


def test_search_is_seed_stable_on_hits():
    g = cat.load("L6_23")
    a = ex.witness_search(g, 3, 3, structured=False, budget=20_000, seed=3)
    b = ex.witness_search(g, 3, 3, structured=False, budget=20_000, seed=3)
    assert a.trials == b.trials and a.decomposition == b.decomposition


def test_field_guard():
    ex.check_field("R")
    with pytest.raises(ex.UnsupportedField, match="L6_22"):
        ex.check_field("C")
