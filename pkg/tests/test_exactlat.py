from fractions import Fraction
import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from sk1lie.exactlat import (
    IntMatrix,
    SizeGuardError,
    SLocalRing,
    SpanError,
    hnf,
    invariant_factors,
    kernel_basis,
    rank,
    relative_invariant_factors,
    snf,
    solve_over,
)


def bareiss(rows):
    """Independent fraction-free elimination: returns (rank, det or None)."""
    A = [list(r) for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    prev = 1
    r = 0
    sign = 1
    for c in range(n):
        p = next((i for i in range(r, m) if A[i][c]), None)
        if p is None:
            continue
        if p != r:
            A[r], A[p] = A[p], A[r]
            sign = -sign
        for i in range(r + 1, m):
            for j in range(c + 1, n):
                A[i][j] = (A[i][j] * A[r][c] - A[i][c] * A[r][j]) // prev
            A[i][c] = 0
        prev = A[r][c]
        r += 1
    det = None
    if m == n:
        det = sign * prev if r == n else 0
    return r, det


matrices = st.integers(1, 8).flatmap(
    lambda m: st.integers(1, 8).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)
square = st.integers(1, 7).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)
)


def is_canonical_hnf(H):
    last = -1
    seen_zero = False
    for row in H.rows:
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            seen_zero = True
            continue
        assert not seen_zero, "zero row above a nonzero row"
        p = nz[0]
        assert p > last and row[p] > 0
        last = p
    pivots = [next(j for j, x in enumerate(r) if x) for r in H.rows if any(r)]
    for i, p in enumerate(pivots):
        for k in range(i):
            assert 0 <= H[k, p] < H[i, p]
    return True


def test_hnf_identity():
    I = IntMatrix.identity(3)
    H, U = hnf(I)
    assert H == I and U == I


def test_hnf_example():
    H, U = hnf(IntMatrix([[2, 4], [0, 3]]))
    assert H.tolist() == [[2, 1], [0, 3]]


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_hnf_properties(rows):
    M = IntMatrix(rows)
    H, U = hnf(M)
    assert U @ M == H
    assert abs(U.det()) == 1
    assert is_canonical_hnf(H)
    perm = list(range(M.nrows))
    random.Random(len(rows)).shuffle(perm)
    H2, _ = hnf(IntMatrix([rows[i] for i in perm]))
    assert H2 == H


def test_snf_examples():
    D, U, V = snf(IntMatrix([[2, 0], [0, 3]]))
    assert D.tolist() == [[1, 0], [0, 6]]
    Z = IntMatrix.zeros(2, 3)
    assert snf(Z)[0] == Z


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_properties(rows):
    M = IntMatrix(rows)
    D, U, V = snf(M)
    assert U @ M @ V == D
    assert abs(U.det()) == 1 and abs(V.det()) == 1
    diag = [D[i, i] for i in range(min(D.shape))]
    assert all(D[i, j] == 0 for i in range(D.nrows) for j in range(D.ncols) if i != j)
    assert all(x >= 0 for x in diag)
    nz = [x for x in diag if x]
    assert diag[: len(nz)] == nz, "zeros sort last"
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    # oracle 1: sympy's Smith form
    S = smith_normal_form(Matrix(rows), domain=ZZ)
    theirs = sorted(abs(S[i, i]) for i in range(min(S.shape)) if S[i, i])
    assert sorted(nz) == theirs
    # oracle 2: fraction-free elimination for the rank
    assert len(nz) == bareiss(rows)[0] == rank(M)
    assert invariant_factors(M) == nz


@settings(max_examples=100, deadline=None)
@given(square)
def test_snf_determinant_agrees_with_bareiss(rows):
    M = IntMatrix(rows)
    r, det = bareiss(rows)
    D, _, _ = snf(M)
    prod = 1
    for i in range(M.nrows):
        prod *= D[i, i]
    assert prod == abs(det)
    assert M.det() == det


def test_kernel_examples():
    K = kernel_basis(IntMatrix([[1, 1]]))
    assert K.columns() == [(1, -1)]


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_kernel_properties(rows):
    M = IntMatrix(rows)
    K = kernel_basis(M)
    assert K.nrows == M.ncols
    if K.ncols:
        assert (M @ K).is_zero()
        # saturated: all invariant factors of K are 1
        assert invariant_factors(K) == [1] * K.ncols
    assert rank(M) + K.ncols == M.ncols


def test_relative_factors_examples():
    L = IntMatrix.identity(2)
    assert relative_invariant_factors(L, L) == [1, 1]
    G = IntMatrix([[2, 0], [0, 3]])
    assert relative_invariant_factors(G, L) in ([1, 6], [2, 3])
    # rank deficit is padded with zeros
    assert relative_invariant_factors(IntMatrix([[1], [0]]), L) == [1, 0]


def test_relative_factors_outside_span():
    L = IntMatrix([[1], [0]])
    with pytest.raises(SpanError):
        relative_invariant_factors(IntMatrix([[0], [1]]), L)


def _random_unimodular(n, rng):
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        c = rng.randint(-3, 3)
        for k in range(n):
            U[i][k] += c * U[j][k]
    return IntMatrix(U)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 5), st.integers(0, 10_000))
def test_relative_factors_basis_invariance(n, seed):
    rng = random.Random(seed)
    lattice = IntMatrix([[rng.randint(-4, 4) for _ in range(n)] for _ in range(n + 1)])
    if rank(lattice) < n:
        return
    coeffs = IntMatrix([[rng.randint(-5, 5) for _ in range(n + 1)] for _ in range(n)])
    gens = lattice @ coeffs
    f = relative_invariant_factors(gens, lattice)
    V = _random_unimodular(n, rng)
    W = _random_unimodular(n + 1, rng)
    assert relative_invariant_factors(gens @ W, lattice @ V) == f


def test_solve_over_examples():
    R = SLocalRing.inverting(2, 3)
    assert solve_over(IntMatrix.identity(3), [4, -1, 7], R) == (4, -1, 7)
    A2 = IntMatrix([[2, -1], [-1, 2]])  # values of alpha_1, alpha_2 on H_1, H_2
    x = solve_over(A2, [1, 0], R)
    assert x == (Fraction(2, 3), Fraction(1, 3))
    assert max(v.denominator for v in x) == 3
    assert solve_over(A2, [1, 0], SLocalRing.inverting()) is None


@settings(max_examples=100, deadline=None)
@given(matrices, st.sampled_from(["inv:", "inv:2,3", "local:5", "inv:2,3,5,7"]))
def test_solve_over_solutions_are_valid(rows, ring):
    R = SLocalRing.parse(ring)
    M = IntMatrix(rows)
    rng = random.Random(len(rows) * 31 + len(rows[0]))
    x0 = [rng.randint(-3, 3) for _ in range(M.ncols)]
    b = [sum(a * c for a, c in zip(r, x0)) for r in rows]
    x = solve_over(M, b, R)
    assert x is not None, "an integral solution exists"
    assert all(R.contains(v) for v in x)
    assert [sum(a * v for a, v in zip(r, x)) for r in rows] == b


def test_slocal_ring_units():
    R = SLocalRing.inverting(2, 3)
    assert R.is_unit(12) and R.is_unit(-9) and not R.is_unit(10) and not R.is_unit(0)
    L = SLocalRing.local_at(5)
    assert L.is_unit(7) and not L.is_unit(25)
    assert L.unit_part(50) == 2 and R.unit_part(60) == 12
    assert SLocalRing.parse("local:5") == L
    assert str(SLocalRing.parse("inv:3,2")) == "inv:2,3"
    with pytest.raises(ValueError):
        SLocalRing.parse("inv:4")


def test_intmatrix_immutable():
    M = IntMatrix([[1, 2], [3, 4]])
    with pytest.raises(AttributeError):
        M.nrows = 5
    assert M.shape == (2, 2)
    assert IntMatrix([[10**40, 1]])[0, 0] == 10**40


def test_size_guard(monkeypatch):
    monkeypatch.setenv("SK1LIE_SNF_MAX_ENTRIES", "4")
    with pytest.raises(SizeGuardError):
        snf(IntMatrix([[2, 4, 6], [6, 10, 14], [4, 8, 18]]))
