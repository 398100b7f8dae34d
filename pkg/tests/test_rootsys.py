from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from sk1lie.exactlat import SLocalRing
from sk1lie.rootsys import (
    NoSolutionError,
    RootSystemType,
    build,
    check_decomp_lemma,
    check_directfactor,
    dual_element,
    irreducible_types,
    length_ratio,
    m_coefficients,
    root_lattice_divisors,
    root_string,
    type_a_pair_facts,
)

COUNTS = {
    "A1": 2, "A2": 6, "A3": 12, "A4": 20, "B2": 8, "B3": 18, "B4": 32, "C3": 18, "C4": 32,
    "D4": 24, "D5": 40, "G2": 12, "F4": 48, "E6": 72, "E7": 126, "E8": 240,
}
SMALL = ["A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "G2", "F4"]


@pytest.mark.parametrize("name", sorted(COUNTS))
def test_root_counts(name):
    rs = build(name)
    assert len(rs) == COUNTS[name]
    assert rs.n_positive * 2 == len(rs)


@pytest.mark.parametrize("name", SMALL + ["A1xB2"])
def test_axioms(name):
    rs = build(name)
    idx = range(len(rs))
    for a in idx:
        # reduced: the only multiples of a root that are roots are +-1
        assert not rs.is_root(tuple(2 * c for c in rs.mcoeffs[a]))
        m = rs.mcoeffs[a]
        assert all(c >= 0 for c in m) or all(c <= 0 for c in m)
        assert rs.is_positive(a) == any(c > 0 for c in m)
        assert rs.norm(a) in (2, 4, 6)
        assert rs.pairing(a, a) == 2
        for b in idx:
            # closed under reflections
            assert rs.reflect(a, b) is not None
            if b not in (a, rs.neg(a)):
                prod = rs.pairing(a, b) * rs.pairing(b, a)
                assert prod in (0, 1, 2, 3)
                assert prod == 0 or (rs.pairing(a, b) > 0) == (rs.pairing(b, a) > 0)


@pytest.mark.parametrize("name", SMALL)
def test_positive_order(name):
    rs = build(name)
    keys = [(rs.height(i), tuple(-c for c in rs.mcoeffs[i])) for i in rs.positive]
    assert keys == sorted(keys)
    assert [rs.neg(i) for i in rs.positive] == list(range(rs.n_positive, len(rs)))


@pytest.mark.parametrize("name", SMALL)
def test_coroot_formula(name):
    # H_beta expressed through simple coroots must reproduce beta(H) values
    rs = build(name)
    for b in range(len(rs)):
        coeffs = rs.coroot_in_simple_coroots(b)
        for g in range(len(rs)):
            val = sum(c * rs.pairing(g, s) for c, s in zip(coeffs, rs.simple))
            assert val == rs.pairing(g, b)


def _cartan_up_to_perm(a, b):
    A = a.cartan_matrix().tolist()
    B = b.cartan_matrix().tolist()
    n = len(A)
    return any(all(A[i][j] == B[p[i]][p[j]] for i in range(n) for j in range(n)) for p in permutations(range(n)))


@pytest.mark.parametrize("x,y", [("B2", "C2"), ("A3", "D3")])
def test_aliases(x, y):
    assert _cartan_up_to_perm(build(x), build(y))
    assert len(build(x)) == len(build(y))


def test_type_parsing():
    t = RootSystemType.parse("A1xB2")
    assert t.components == (("A", 1), ("B", 2)) and t.rank == 3 and not t.irreducible
    assert RootSystemType.parse("g2").irreducible
    assert RootSystemType.parse("E8").is_exceptional_large()
    for bad in ["B1", "C1", "D2", "E5", "F3", "G3", "X4", "A0"]:
        with pytest.raises(ValueError):
            RootSystemType.parse(bad)


def test_highest_roots():
    expect = {
        "A2": ((1, 1), (1, 1)),
        "A3": ((1, 1, 1), (1, 1, 1)),
        "B2": ((1, 2), (1, 1)),
        "G2": ((3, 2), (2, 1)),
        "B3": ((1, 2, 2), (1, 1, 1)),
        "C3": ((2, 2, 1), (1, 2, 1)),
    }
    for name, (long_, short_) in expect.items():
        rs = build(name)
        h = rs.highest_roots()
        assert rs.mcoeffs[h["long"]] == long_
        assert rs.mcoeffs[h["short"]] == short_


def test_g2_strings_and_ratio():
    rs = build("G2")
    a1, a2 = rs.simple
    # alpha_1 is the short simple root in this realization
    assert length_ratio(rs, a1, a2) == 3
    s = root_string(rs, a1, a2)
    assert (s.p, s.q) == (0, 3)
    assert m_coefficients(rs, rs.highest_roots()["long"]) == (3, 2)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_root_string_property(name, data):
    rs = build(name)
    a = data.draw(st.integers(0, len(rs) - 1))
    b = data.draw(st.integers(0, len(rs) - 1))
    if b in (a, rs.neg(a)):
        return
    s = root_string(rs, a, b)
    assert s.p - s.q == rs.pairing(b, a)
    assert s.p + s.q <= 3
    step = rs.mcoeffs[a]
    for k in range(-s.p, s.q + 1):
        assert rs.is_root(tuple(x + k * y for x, y in zip(rs.mcoeffs[b], step)))
    assert not rs.is_root(tuple(x + (s.q + 1) * y for x, y in zip(rs.mcoeffs[b], step)))


@pytest.mark.parametrize(
    "name,count", [("A1", 0), ("A2", 4), ("B2", 8), ("G2", 28), ("A3", 24), ("B3", 80), ("C3", 80)]
)
def test_decomp_lemma(name, count):
    rep = check_decomp_lemma(name)
    assert rep.ok and rep.violations == []
    assert rep.tuple_count == count


def test_decomp_highest_short_b3():
    rep = check_decomp_lemma("B3")
    pairs = set(rep.highest["short"])
    expect = {
        ((1, 2, 2), (0, -1, -1)),
        ((1, 1, 2), (0, 0, -1)),
        ((1, 1, 0), (0, 0, 1)),
        ((1, 0, 0), (0, 1, 1)),
    }
    assert expect <= pairs


def test_decomp_rank_guard():
    with pytest.raises(ValueError):
        check_decomp_lemma("A4")


def test_directfactor_census():
    seen3 = set()
    for t in irreducible_types(4):
        rep = check_directfactor(t)
        assert rep.ok, rep
        assert set(rep.pairing_divisors) <= {1, 2, 3}
        if 3 in rep.root_lattice_divisors:
            seen3.add(rep.type)
    assert seen3 == {"G2"}


def test_directfactor_a2_cokernel():
    rep = check_directfactor("A2")
    assert rep.pairing_cokernels == [(3,)]
    rs = build("A2")
    assert root_lattice_divisors(rs, rs.simple[0], rs.simple[1]) == [1, 1]


@pytest.mark.parametrize("l", range(1, 7))
def test_type_a_facts(l):
    facts = type_a_pair_facts(l)
    assert facts and all(facts.values()), facts


def test_dual_element():
    rs = build("A2")
    a1, a2 = rs.simple
    Z = SLocalRing.inverting()
    h = dual_element(rs, [(a1, 1)], Z)
    assert sum(c * rs.pairing(a1, s) for c, s in zip(h, rs.simple)) == 1
    with pytest.raises(NoSolutionError):
        dual_element(rs, [(a1, 1), (a2, 0)], Z)
    h = dual_element(rs, [(a1, 1), (a2, 0)], SLocalRing.inverting(2, 3))
    assert h == (Fraction(2, 3), Fraction(1, 3))
    with pytest.raises(ValueError):
        dual_element(rs, [(a1, 1), (rs.neg(a1), 0)], Z)


def test_large_classical_census():
    rs = build("B9")
    assert len(rs) == 162
    assert sorted({rs.norm(i) for i in range(len(rs))}) == [2, 4]
