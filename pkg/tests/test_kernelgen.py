from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from sk1lie.chevalley import LatticeChoice, LieAlgebraData, build_chevalley, nilradical, scale
from sk1lie.exactlat import SLocalRing, prime_factors
from sk1lie.kernelgen import (
    SoundnessError,
    _normalize_wedge,
    apply_bracket,
    bracket_kernel,
    bracket_matrix,
    brute_force_span,
    certify,
    generators_all_commuting_basis,
    generators_nilpotent,
    generators_reductive,
    make_certificate,
    span_mod,
    wedge,
    wedge_index,
    wedge_pair,
)

Z = SLocalRing.inverting()
Z6 = SLocalRing.inverting(2, 3)


@settings(max_examples=200)
@given(st.integers(2, 60), st.data())
def test_wedge_index_roundtrip(d, data):
    i = data.draw(st.integers(0, d - 2))
    j = data.draw(st.integers(i + 1, d - 1))
    idx = wedge_index(i, j, d)
    assert 0 <= idx < d * (d - 1) // 2
    assert wedge_pair(idx, d) == (i, j)


def test_wedge_index_bounds():
    with pytest.raises(ValueError):
        wedge_index(2, 2, 4)


@settings(max_examples=100)
@given(
    st.dictionaries(st.integers(0, 5), st.integers(-4, 4), max_size=4),
    st.dictionaries(st.integers(0, 5), st.integers(-4, 4), max_size=4),
)
def test_wedge_antisymmetric(x, y):
    x = {k: Fraction(v) for k, v in x.items() if v}
    y = {k: Fraction(v) for k, v in y.items() if v}
    w1, w2 = wedge(x, y, 6), wedge(y, x, 6)
    assert w1 == {k: -v for k, v in w2.items()}
    assert wedge(x, x, 6) == {}


def _sympy_bracket(data):
    d = data.dim
    nw = d * (d - 1) // 2
    M = [[0] * nw for _ in range(d)]
    for i, j, k, c in data.constants:
        M[k][wedge_index(i, j, d)] = c
    return Matrix(M)


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "G2"])
def test_kernel_rank_vs_sympy(name):
    for lat in ("coroot", "coweight"):
        data = build_chevalley(name, LatticeChoice.parse(lat)).data
        K = bracket_kernel(data)
        M = _sympy_bracket(data)
        assert len(K) == M.shape[1] - M.rank()
        B = bracket_matrix(data)
        for col in K:
            assert all(sum(B[r, t] * x for t, x in col.items()) == 0 for r in range(B.nrows))
            assert not apply_bracket(data, {k: Fraction(x) for k, x in col.items()})


def test_sl2_bracket_is_injective():
    assert bracket_kernel(build_chevalley("A1").data) == []


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3", "B3", "C3"])
def test_reductive_generators_sound(name):
    g = build_chevalley(name)
    certs = generators_reductive(g, Z6)
    B = bracket_matrix(g.data)
    for c in certs:
        # re-check through the matrix form of the bracket, not make_certificate
        v = [0] * B.ncols
        for k, x in c.wedge.items():
            v[k] = x
        col = [sum(B[r, t] * v[t] for t in c.wedge) for r in range(B.nrows)]
        assert all(x == 0 for x in col), c.provenance
        dens = {x.denominator for x in list(c.A.values()) + list(c.B.values())}
        assert all(set(prime_factors(dd)) <= {2, 3} for dd in dens)


def test_make_certificate_rejects_noncommuting():
    g = build_chevalley("A2")
    with pytest.raises(SoundnessError):
        make_certificate(g.data, {g.x(0): Fraction(1)}, {g.x(1): Fraction(1)}, "Fact2-NonRoot")


def test_a2_census():
    rep = certify(build_chevalley("A2").data, generators_reductive(build_chevalley("A2"), Z6), Z6)
    assert rep.census == {
        "Fact1-Cartan": 1,
        "Fact2-NonRoot": 6,
        "Fact4-KernelOfAlpha": 6,
        "L-cong1-CaseI": 12,
        "L-cong2": 1,
    }
    assert rep.equal and rep.verdict == "Equal"


@pytest.mark.parametrize("name", ["G2", "B3", "C3"])
def test_higher_cases_appear(name):
    census = certify(build_chevalley(name).data, generators_reductive(build_chevalley(name), Z6), Z6).census
    assert census.get("L-cong1-CaseII", 0) > 0
    if name == "G2":
        assert census.get("L-cong1-CaseIII", 0) > 0


def _sympy_relative_factors(data, certs, R):
    """Independent route: solve K C = G over Q, then Smith form of C."""
    K = bracket_kernel(data)
    nw = data.dim * (data.dim - 1) // 2
    Km = Matrix([[col.get(t, 0) for col in K] for t in range(nw)])
    gens = {}
    for c in certs:
        w = _normalize_wedge(c, R)
        if w:
            gens[tuple(sorted(w.items()))] = w
    Gm = Matrix([[w.get(t, 0) for w in gens.values()] for t in range(nw)])
    # K has full column rank, so the normal equations give the exact coordinates
    C = (Km.T * Km).inv() * Km.T * Gm
    assert Km * C == Gm
    assert all(x.is_integer for x in C)
    S = smith_normal_form(C, domain=ZZ)
    return sorted(abs(S[i, i]) for i in range(min(S.shape)) if S[i, i])


@pytest.mark.parametrize("name,lat", [("A2", "coroot"), ("A2", "coweight"), ("B2", "coroot")])
def test_certify_vs_sympy_over_z(name, lat):
    g = build_chevalley(name, LatticeChoice.parse(lat))
    certs = generators_reductive(g, Z)
    rep = certify(g.data, certs, Z)
    ours = sorted(f for f in rep.factors if f)
    assert ours == _sympy_relative_factors(g.data, certs, Z)
    assert rep.kernel_rank == rep.span_rank


def test_nilpotent_vs_sympy():
    g = build_chevalley("A3")
    n = nilradical(g)
    certs = generators_nilpotent(n, g, Z)
    rep = certify(n, certs, Z)
    assert sorted(f for f in rep.factors if f) == _sympy_relative_factors(n, certs, Z)
    assert rep.equal and set(rep.factors) == {1}


def test_reductive_over_z_reports_non_units():
    g = build_chevalley("A2")
    rep = certify(g.data, generators_reductive(g, Z), Z)
    assert rep.verdict == "ProperSubmodule"
    assert rep.nonunit_factors == [3, 9]
    assert rep.deficit == 0


def test_certify_invariant_under_generator_order_and_scaling():
    g = build_chevalley("B2")
    certs = generators_reductive(g, Z6)
    base = certify(g.data, certs, Z6)
    rev = certify(g.data, list(reversed(certs)), Z6)
    assert base.factors == rev.factors
    # scaling a generator by a unit of R changes nothing
    c0 = certs[-1]
    sc = make_certificate(g.data, {k: 6 * v for k, v in c0.A.items()}, c0.B, c0.provenance, c0.params)
    assert certify(g.data, certs[:-1] + [sc], Z6).factors == base.factors


def test_certify_detects_missing_generators():
    g = build_chevalley("A2")
    certs = [c for c in generators_reductive(g, Z6) if c.provenance != "L-cong2"]
    rep = certify(g.data, certs, Z6)
    assert rep.deficit == 1 and rep.verdict == "ProperSubmodule"


def test_scaling_by_p_over_local_ring():
    L5 = SLocalRing.local_at(5)
    g = build_chevalley("G2")
    certs = generators_reductive(g, L5)
    rep = certify(g.data, certs, L5)
    s = scale(g.data, 5)
    moved = [make_certificate(s, c.A, c.B, c.provenance, c.params) for c in certs]
    rep5 = certify(s, moved, L5)
    assert rep.verdict == rep5.verdict == "Equal"
    assert rep.factors == rep5.factors


def _certificate_span_mod(data, certs, q):
    ws = []
    for c in certs:
        w = _normalize_wedge(c, Z)
        if w:
            ws.append(w)
    return span_mod(ws, data.dim * (data.dim - 1) // 2, q)


def test_brute_force_heisenberg_mod3():
    g = build_chevalley("A2")
    n = nilradical(g)
    brute = brute_force_span(n, 3)
    cert = _certificate_span_mod(n, generators_nilpotent(n, g, Z), 3)
    assert brute == cert
    assert len(brute) == 2


def test_brute_force_abelian_mod3():
    ab = LieAlgebraData("abelian2", ("a", "b"), ())
    brute = brute_force_span(ab, 3)
    assert brute == _certificate_span_mod(ab, generators_all_commuting_basis(ab), 3) == [[1]]


def test_brute_force_sl2_mod5_is_zero():
    assert brute_force_span(build_chevalley("A1").data, 5) == []


def test_brute_force_guards():
    with pytest.raises(ValueError):
        brute_force_span(build_chevalley("A1").data, 4)
    with pytest.raises(ValueError):
        brute_force_span(build_chevalley("A2").data, 5)


def test_sl2_bracket_determinant():
    assert abs(bracket_matrix(build_chevalley("A1").data).det()) == 4


def test_counterexample_relative_factors():
    from sk1lie.sk1 import build_counterexample

    latt, _, _ = build_counterexample(5)
    rep = certify(latt.data, generators_all_commuting_basis(latt.data), SLocalRing.local_at(5))
    assert rep.factors_rle() == [[1, 30], [0, 1]]
