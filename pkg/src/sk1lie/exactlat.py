"""Exact linear algebra over the integers and over localizations of the integers.

Everything here works on Python integers (arbitrary precision) and
``fractions.Fraction``; no floating point is used anywhere.

Conventions
-----------
* ``hnf`` is row-style: ``H = U @ M`` with positive pivots and the entries
  above each pivot reduced into ``[0, pivot)``.
* ``snf`` returns ``D = U @ M @ V`` with a nonnegative diagonal
  ``d1 | d2 | ...``; zero entries sort last.
* Lattices are given by the *columns* of an ``IntMatrix``.

The dense eliminations use naive pivoting with a bit-size guard
(``SK1LIE_MAX_ENTRY_BITS``) and a working-set cap
(``SK1LIE_SNF_MAX_ENTRIES``).  Large inputs go through a sparse path that
first splits the matrix into connected blocks and then pivots on unit
entries, so the dense kernel only ever sees small remainders.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "IntMatrix",
    "SLocalRing",
    "SizeGuardError",
    "SpanError",
    "hnf",
    "snf",
    "invariant_factors",
    "rank",
    "kernel_basis",
    "relative_invariant_factors",
    "solve_over",
    "chain_from_diagonal",
    "prime_factors",
    "is_prime",
]


class SizeGuardError(RuntimeError):
    """Raised when a dense elimination exceeds its documented size budget."""


class SpanError(ValueError):
    """A generator lies outside the rational span of the reference lattice."""


def _max_entry_bits() -> int:
    return int(os.environ.get("SK1LIE_MAX_ENTRY_BITS", "8192"))


def _max_dense_entries() -> int:
    return int(os.environ.get("SK1LIE_SNF_MAX_ENTRIES", "4000000"))


def _guard_dense(m: int, n: int) -> None:
    cap = _max_dense_entries()
    if m * n > cap:
        raise SizeGuardError(
            f"dense working set {m}x{n} exceeds SK1LIE_SNF_MAX_ENTRIES={cap}"
        )


def _guard_bits(row: Sequence[int]) -> None:
    limit = _max_entry_bits()
    for x in row:
        if x and x.bit_length() > limit:
            raise SizeGuardError(
                f"entry of {x.bit_length()} bits exceeds SK1LIE_MAX_ENTRY_BITS={limit}"
            )


# ---------------------------------------------------------------------------
# IntMatrix
# ---------------------------------------------------------------------------


class IntMatrix:
    """Dense immutable integer matrix with row-major storage."""

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        data = tuple(tuple(_as_int(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        object.__setattr__(self, "_rows", data)
        object.__setattr__(self, "nrows", len(data))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def _trusted(cls, rows: tuple[tuple[int, ...], ...], ncols: int) -> "IntMatrix":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "_rows", rows)
        object.__setattr__(obj, "nrows", len(rows))
        object.__setattr__(obj, "ncols", ncols)
        return obj

    @classmethod
    def zeros(cls, m: int, n: int) -> "IntMatrix":
        return cls._trusted(tuple((0,) * n for _ in range(m)), n)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls._trusted(
            tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int | None = None) -> "IntMatrix":
        if nrows is None:
            if not columns:
                raise ValueError("nrows required for an empty column list")
            nrows = len(columns[0])
        cols = [tuple(_as_int(x) for x in c) for c in columns]
        for c in cols:
            if len(c) != nrows:
                raise ValueError("ragged columns")
        rows = tuple(tuple(c[i] for c in cols) for i in range(nrows))
        return cls._trusted(rows, len(cols))

    @classmethod
    def from_sparse_columns(cls, nrows: int, columns: Sequence[dict[int, int]]) -> "IntMatrix":
        rows = [[0] * len(columns) for _ in range(nrows)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                rows[i][j] = int(v)
        return cls._trusted(tuple(tuple(r) for r in rows), len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    def row(self, i: int) -> tuple[int, ...]:
        return self._rows[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(c) for c in zip(*self._rows)] if self.nrows else [()] * self.ncols

    def sparse_columns(self) -> list[dict[int, int]]:
        cols: list[dict[int, int]] = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self._rows):
            for j, v in enumerate(r):
                if v:
                    cols[j][i] = v
        return cols

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix._trusted(tuple(zip(*self._rows)) if self.nrows else tuple(() for _ in range(self.ncols)), self.nrows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.columns()
        out = []
        for r in self._rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append(tuple(sum(a * c[k] for k, a in nz) for c in ocols))
        return IntMatrix._trusted(tuple(out), other.ncols)

    def __mul__(self, scalar: int) -> "IntMatrix":
        s = _as_int(scalar)
        return IntMatrix._trusted(tuple(tuple(s * x for x in r) for r in self._rows), self.ncols)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.ncols, self._rows))

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self._rows]})"

    def is_zero(self) -> bool:
        return all(not x for r in self._rows for x in r)

    def det(self) -> int:
        """Exact determinant by Bareiss fraction-free elimination."""
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        if n == 0:
            return 1
        a = [list(r) for r in self._rows]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            akk = a[k][k]
            for i in range(k + 1, n):
                aik = a[i][k]
                row_i, row_k = a[i], a[k]
                for j in range(k + 1, n):
                    row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            prev = akk
        return sign * a[n - 1][n - 1]


def _as_int(x) -> int:
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        if x.denominator != 1:
            raise ValueError(f"non-integral entry {x}")
        return x.numerator
    try:
        return int(x.__index__())
    except AttributeError:
        raise TypeError(f"not an integer: {x!r}") from None


# ---------------------------------------------------------------------------
# localizations
# ---------------------------------------------------------------------------


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``|n|`` by trial division (for small inputs)."""
    n = abs(n)
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class SLocalRing:
    """A localization of Z: either a finite set of inverted primes, or Z_(p).

    ``SLocalRing.inverting(2, 3)`` is Z[1/6]; ``SLocalRing.local_at(5)``
    inverts every prime except 5.
    """

    inverted: frozenset[int] = frozenset()
    local_prime: int | None = None

    def __post_init__(self):
        if self.local_prime is not None:
            if self.inverted:
                raise ValueError("give either inverted primes or a local prime")
            if not is_prime(self.local_prime):
                raise ValueError(f"{self.local_prime} is not prime")
        for p in self.inverted:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")

    @classmethod
    def inverting(cls, *primes: int) -> "SLocalRing":
        return cls(inverted=frozenset(primes))

    @classmethod
    def local_at(cls, p: int) -> "SLocalRing":
        return cls(local_prime=p)

    @classmethod
    def parse(cls, text: str) -> "SLocalRing":
        """Parse ``inv:2,3`` / ``inv:`` / ``local:5``."""
        kind, sep, rest = text.strip().partition(":")
        if not sep:
            raise ValueError(f"bad ring descriptor {text!r}")
        if kind == "inv":
            primes = [int(t) for t in rest.split(",") if t.strip()]
            return cls.inverting(*primes)
        if kind == "local":
            return cls.local_at(int(rest))
        raise ValueError(f"bad ring descriptor {text!r}")

    def __str__(self) -> str:
        if self.local_prime is not None:
            return f"local:{self.local_prime}"
        return "inv:" + ",".join(str(p) for p in sorted(self.inverted))

    def is_local(self) -> bool:
        return self.local_prime is not None

    def is_unit(self, n: int) -> bool:
        if n == 0:
            return False
        if self.local_prime is not None:
            return n % self.local_prime != 0
        n = abs(n)
        for p in self.inverted:
            while n % p == 0:
                n //= p
        return n == 1

    def contains(self, x: Fraction | int) -> bool:
        return self.is_unit(Fraction(x).denominator)

    def unit_part(self, n: int) -> int:
        """Largest positive divisor of ``n`` that is a unit of the ring."""
        if n == 0:
            raise ValueError("unit part of zero")
        n = abs(n)
        if self.local_prime is not None:
            p = self.local_prime
            while n % p == 0:
                n //= p
            return n
        u = 1
        for p in self.inverted:
            while n % p == 0:
                n //= p
                u *= p
        return u

    def non_unit_part(self, n: int) -> int:
        return abs(n) // self.unit_part(n)

    def is_unit_rational(self, x: Fraction) -> bool:
        x = Fraction(x)
        return x != 0 and self.is_unit(x.numerator) and self.is_unit(x.denominator)


# ---------------------------------------------------------------------------
# dense kernels on lists of lists
# ---------------------------------------------------------------------------


def _row_sub(a: list[int], b: list[int], q: int) -> None:
    for k, v in enumerate(b):
        if v:
            a[k] -= q * v


def _hnf_lists(A: list[list[int]], ncols: int, U: list[list[int]] | None):
    """In-place row Hermite form; returns pivot column list."""
    m = len(A)
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == m:
            break
        nz = [i for i in range(r, m) if A[i][c]]
        if not nz:
            continue
        while True:
            k = min(nz, key=lambda i: abs(A[i][c]))
            if k != r:
                A[r], A[k] = A[k], A[r]
                if U is not None:
                    U[r], U[k] = U[k], U[r]
            p = A[r][c]
            rest = []
            for i in range(r + 1, m):
                if A[i][c]:
                    q = A[i][c] // p
                    _row_sub(A[i], A[r], q)
                    if U is not None:
                        _row_sub(U[i], U[r], q)
                    if A[i][c]:
                        rest.append(i)
            if not rest:
                break
            nz = [r] + rest
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
            if U is not None:
                U[r] = [-x for x in U[r]]
        p = A[r][c]
        for i in range(r):
            q = A[i][c] // p
            if q:
                _row_sub(A[i], A[r], q)
                if U is not None:
                    _row_sub(U[i], U[r], q)
        _guard_bits(A[r])
        pivots.append(c)
        r += 1
    return pivots


def hnf(M: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form ``H = U @ M`` with ``U`` unimodular."""
    _guard_dense(M.nrows, max(M.ncols, M.nrows))
    A = M.tolist()
    U = [[1 if i == j else 0 for j in range(M.nrows)] for i in range(M.nrows)]
    _hnf_lists(A, M.ncols, U)
    return (
        IntMatrix._trusted(tuple(tuple(r) for r in A), M.ncols),
        IntMatrix._trusted(tuple(tuple(r) for r in U), M.nrows),
    )


def _snf_lists(A: list[list[int]], m: int, n: int, U, V) -> list[int]:
    """In-place Smith reduction; returns the (unsorted) diagonal."""

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def col_sub(dst, src, q):
        for row in A:
            if row[src]:
                row[dst] -= q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] -= q * row[src]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i0, j0 = best
        if i0 != t:
            swap_rows(t, i0)
        if j0 != t:
            swap_cols(t, j0)
        while True:
            p = A[t][t]
            moved = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    _row_sub(A[i], A[t], q)
                    if U is not None:
                        _row_sub(U[i], U[t], q)
                    if A[i][t]:
                        moved = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    col_sub(j, t, q)
                    if A[t][j]:
                        moved = True
            if moved:
                best = None
                for i in range(t, m):
                    v = A[i][t]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, t)
                for j in range(t + 1, n):
                    v = A[t][j]
                    if v and abs(v) < best[0]:
                        best = (abs(v), t, j)
                _, i0, j0 = best
                if i0 != t:
                    swap_rows(t, i0)
                if j0 != t:
                    swap_cols(t, j0)
                continue
            # pivot isolated; enforce divisibility of the trailing block
            bad = None
            for i in range(t + 1, m):
                row = A[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            for k in range(n):
                A[t][k] += A[bad][k]
            if U is not None:
                for k in range(len(U[t])):
                    U[t][k] += U[bad][k]
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        _guard_bits(A[t])
        diag.append(A[t][t])
        t += 1
    return diag


def snf(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``D = U @ M @ V``.

    ``U`` and ``V`` are unimodular, ``D`` is diagonal with nonnegative
    entries forming a divisibility chain, zeros last.
    """
    m, n = M.shape
    _guard_dense(max(m, n), max(m, n))
    A = M.tolist()
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    _snf_lists(A, m, n, U, V)
    return (
        IntMatrix._trusted(tuple(tuple(r) for r in A), n),
        IntMatrix._trusted(tuple(tuple(r) for r in U), m),
        IntMatrix._trusted(tuple(tuple(r) for r in V), n),
    )


def chain_from_diagonal(entries: Iterable[int]) -> list[int]:
    """Invariant factors of a diagonal matrix with the given nonzero entries."""
    vals = [abs(e) for e in entries if e]
    ones = [v for v in vals if v == 1]
    rest = [v for v in vals if v != 1]
    n = len(rest)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = rest[i], rest[j]
            if b % a == 0:
                continue
            g = math.gcd(a, b)
            rest[i], rest[j] = g, a // g * b
    return ones + sorted(rest)


# ---------------------------------------------------------------------------
# sparse machinery
# ---------------------------------------------------------------------------


def _sparse_nonzero_factors(rows: list[dict[int, int]]) -> list[int]:
    """Nonzero invariant factors of a sparse integer matrix given by rows.

    Unit pivots (and pivots dividing their whole row and column) are
    eliminated with Markowitz-style ordering; whatever is left goes to the
    dense Smith kernel.  Each elimination step is a unimodular equivalence
    M ~ [a] (+) M', so the diagonal is collected and re-chained at the end.
    """
    R: dict[int, dict[int, int]] = {i: dict(r) for i, r in enumerate(rows) if r}
    C: dict[int, set[int]] = {}
    for i, r in R.items():
        for j in r:
            C.setdefault(j, set()).add(i)
    diag: list[int] = []

    def eliminate(r: int, c: int) -> None:
        prow = R.pop(r)
        a = prow[c]
        for j in prow:
            C[j].discard(r)
        for k in list(C.get(c, ())):
            row = R[k]
            f = row[c] // a
            for j, v in prow.items():
                nv = row.get(j, 0) - f * v
                if nv:
                    if j not in row:
                        C[j].add(k)
                    row[j] = nv
                elif j in row:
                    del row[j]
                    C[j].discard(k)
            if not row:
                del R[k]
        C.pop(c, None)
        diag.append(abs(a))

    def find_pivot():
        best = None
        for c, rs in C.items():
            if not rs:
                continue
            cc = len(rs) - 1
            for r in rs:
                if abs(R[r][c]) == 1:
                    score = cc * (len(R[r]) - 1)
                    if best is None or score < best[0]:
                        best = (score, r, c)
                        if score == 0:
                            return best
        return best

    while R:
        # fast pass: singleton columns with unit entries
        progressed = False
        for c in [c for c, rs in C.items() if len(rs) == 1]:
            rs = C.get(c)
            if not rs or len(rs) != 1:
                continue
            (r,) = tuple(rs)
            if abs(R[r][c]) == 1:
                eliminate(r, c)
                progressed = True
        if progressed:
            continue
        best = find_pivot()
        if best is not None:
            eliminate(best[1], best[2])
            continue
        # divisor pivots
        found = None
        for c, rs in C.items():
            for r in rs:
                a = R[r][c]
                if all(v % a == 0 for v in R[r].values()) and all(R[k][c] % a == 0 for k in rs):
                    found = (r, c)
                    break
            if found:
                break
        if found:
            eliminate(*found)
            continue
        break

    if R:
        rkeys = sorted(R)
        ckeys = sorted(c for c, rs in C.items() if rs)
        _guard_dense(len(rkeys), len(ckeys))
        cpos = {c: k for k, c in enumerate(ckeys)}
        A = []
        for i in rkeys:
            row = [0] * len(ckeys)
            for j, v in R[i].items():
                row[cpos[j]] = v
            A.append(row)
        diag.extend(_snf_lists(A, len(rkeys), len(ckeys), None, None))
    return chain_from_diagonal(diag)


def _components(vectors: Sequence[dict[int, object]], extra_keys: Iterable[int] = ()) -> list[tuple[list[int], list[int]]]:
    """Group vectors that share coordinates (connected blocks).

    Returns ``(vector indices, coordinate keys)`` per block, in a
    deterministic order (by smallest coordinate).
    """
    parent: dict[int, int] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k in extra_keys:
        parent.setdefault(k, k)
    for v in vectors:
        keys = list(v)
        for k in keys:
            parent.setdefault(k, k)
        for k in keys[1:]:
            a, b = find(keys[0]), find(k)
            if a != b:
                parent[max(a, b)] = min(a, b)
    blocks: dict[int, tuple[list[int], list[int]]] = {}
    for k in sorted(parent):
        blocks.setdefault(find(k), ([], []))[1].append(k)
    empty = []
    for idx, v in enumerate(vectors):
        if not v:
            empty.append(idx)
            continue
        blocks[find(next(iter(v)))][0].append(idx)
    out = [blocks[root] for root in sorted(blocks)]
    if empty:
        out.append((empty, []))
    return out


def _sparse_kernel(ncols: int, columns: Sequence[dict[int, int]]) -> list[dict[int, int]]:
    """Saturated Z-basis of {x : sum_j x_j col_j = 0}, block by block."""
    basis: list[dict[int, int]] = []
    for col_ids, row_keys in _components(columns):
        if not row_keys:
            for j in col_ids:
                basis.append({j: 1})
            continue
        rpos = {r: k for k, r in enumerate(row_keys)}
        A = []
        for j in col_ids:
            row = [0] * len(row_keys)
            for r, v in columns[j].items():
                row[rpos[r]] = v
            A.append(row)
        _guard_dense(len(col_ids), len(col_ids) + len(row_keys))
        U = [[1 if i == j else 0 for j in range(len(col_ids))] for i in range(len(col_ids))]
        piv = _hnf_lists(A, len(row_keys), U)
        for i in range(len(piv), len(col_ids)):
            vec = {col_ids[k]: v for k, v in enumerate(U[i]) if v}
            if vec[min(vec)] < 0:
                vec = {k: -v for k, v in vec.items()}
            basis.append(vec)
    basis.sort(key=lambda v: min(v))
    return basis


def rank(M: IntMatrix) -> int:
    """Exact rank over Q."""
    return len(_sparse_nonzero_factors([dict((j, v) for j, v in enumerate(r) if v) for r in M.rows]))


def invariant_factors(M: IntMatrix) -> list[int]:
    """Nonzero invariant factors of ``M`` (the nonzero SNF diagonal)."""
    return _sparse_nonzero_factors([dict((j, v) for j, v in enumerate(r) if v) for r in M.rows])


def kernel_basis(M: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of ``{x : M x = 0}`` (automatically saturated)."""
    cols = M.sparse_columns()
    basis = _sparse_kernel(M.ncols, cols)
    return IntMatrix.from_sparse_columns(M.ncols, basis)


def _lattice_coordinates(
    lattice: Sequence[dict[int, int]], gens: Sequence[dict[int, Fraction]]
) -> list[dict[int, Fraction]]:
    """Rational coordinates of each generator in the lattice basis.

    Raises SpanError when a generator is not in the Q-span and ValueError
    when the lattice columns are dependent.
    """
    blocks = _components(lattice)
    owner: dict[int, int] = {}
    for b, (_, keys) in enumerate(blocks):
        for k in keys:
            owner[k] = b
    solvers = []
    for col_ids, keys in blocks:
        kpos = {k: i for i, k in enumerate(keys)}
        A = []
        for j in col_ids:
            row = [0] * len(keys)
            for k, v in lattice[j].items():
                row[kpos[k]] = v
            A.append(row)
        U = [[1 if i == j else 0 for j in range(len(col_ids))] for i in range(len(col_ids))]
        piv = _hnf_lists(A, len(keys), U)
        if len(piv) < len(col_ids):
            raise ValueError("lattice columns are linearly dependent")
        solvers.append((col_ids, kpos, A, U, piv))

    coords: list[dict[int, Fraction]] = []
    for gi, g in enumerate(gens):
        pieces: dict[int, dict[int, Fraction]] = {}
        for k, v in g.items():
            if not v:
                continue
            if k not in owner:
                raise SpanError(f"generator {gi} has support outside the lattice (coordinate {k})")
            pieces.setdefault(owner[k], {})[k] = Fraction(v)
        out: dict[int, Fraction] = {}
        for b, piece in pieces.items():
            col_ids, kpos, H, U, piv = solvers[b]
            vec = [Fraction(0)] * len(kpos)
            for k, v in piece.items():
                vec[kpos[k]] = v
            y = []
            for r, c in enumerate(piv):
                s = vec[c]
                if s:
                    yr = s / H[r][c]
                    y.append(yr)
                    for j, hv in enumerate(H[r]):
                        if hv:
                            vec[j] -= yr * hv
                else:
                    y.append(Fraction(0))
            if any(vec):
                raise SpanError(f"generator {gi} is not in the rational span of the lattice")
            for r, yr in enumerate(y):
                if yr:
                    for i, u in enumerate(U[r]):
                        if u:
                            j = col_ids[i]
                            out[j] = out.get(j, 0) + yr * u
        coords.append({j: v for j, v in out.items() if v})
    return coords


def _relative_factors_sparse(
    lattice: Sequence[dict[int, int]], gens: Sequence[dict[int, Fraction]]
) -> list[Fraction | int]:
    coords = _lattice_coordinates(lattice, gens)
    den = 1
    for c in coords:
        for v in c.values():
            den = den * v.denominator // math.gcd(den, v.denominator)
    rows = [{j: int(v * den) for j, v in c.items()} for c in coords]
    nz = _sparse_nonzero_factors(rows)
    out: list[Fraction | int] = []
    for f in nz:
        q = Fraction(f, den)
        out.append(q.numerator if q.denominator == 1 else q)
    out.extend([0] * (len(lattice) - len(nz)))
    return out


def relative_invariant_factors(gens: IntMatrix, lattice: IntMatrix) -> list[int]:
    """Invariant factors of the span of ``gens`` inside the lattice.

    Both arguments hold vectors as columns.  The result has one entry per
    lattice column; missing rank shows up as trailing zeros.  A generator
    outside the rational span raises ``SpanError``.  If a generator is
    rational but not integral over the lattice the factors come back as
    Fractions.
    """
    if gens.nrows != lattice.nrows:
        raise ValueError("generators and lattice live in different ambient spaces")
    lat = lattice.sparse_columns()
    gcols = [{i: Fraction(v) for i, v in c.items()} for c in gens.sparse_columns()]
    return _relative_factors_sparse(lat, gcols)


def solve_over(M: IntMatrix, b: Sequence[int | Fraction], R: SLocalRing) -> tuple[Fraction, ...] | None:
    """Solve ``M x = b`` with every denominator a unit of ``R``.

    Returns ``None`` when no such solution exists.  Among many solutions the
    one with zero free coordinates after Smith reduction is returned.
    """
    if len(b) != M.nrows:
        raise ValueError("right-hand side has the wrong length")
    bq = [Fraction(x) for x in b]
    den = 1
    for x in bq:
        den = den * x.denominator // math.gcd(den, x.denominator)
    if not R.is_unit(den):
        return None
    bi = [int(x * den) for x in bq]
    D, U, V = snf(M)
    ub = [sum(u * x for u, x in zip(row, bi)) for row in U.rows]
    y: list[Fraction] = []
    rk = 0
    for i in range(min(M.nrows, M.ncols)):
        if D[i, i]:
            rk += 1
    for i in range(M.nrows):
        if i < rk:
            yi = Fraction(ub[i], D[i, i] * den)
            if not R.contains(yi):
                return None
            y.append(yi)
        elif ub[i]:
            return None
    y.extend([Fraction(0)] * (M.ncols - rk))
    return tuple(sum((V[i, k] * y[k] for k in range(M.ncols)), Fraction(0)) for i in range(M.ncols))
