"""Reduced root systems in explicit integral coordinates.

Each irreducible family has a fixed realization: A_n in the sum-zero
hyperplane of Z^(n+1); B_n, C_n, D_n in Z^n; G_2 in the sum-zero hyperplane
of Z^3; F_4 and E_6..E_8 in doubled coordinates (so that the half-integer
roots become integral).  Simple roots follow Bourbaki numbering.

The invariant bilinear form is normalized per component so that short
roots have squared length 2.  A Killing form differs from this by a
positive scalar on each component, which cancels in every length ratio
used downstream.

Roots are referred to by index into ``RootSystem.roots``.  Positive roots
come first, sorted by height and then lexicographically (descending
coefficient vector), followed by their negatives in the same order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .exactlat import IntMatrix, SLocalRing, invariant_factors, solve_over

__all__ = [
    "RootSystemType",
    "RootSystem",
    "RootString",
    "NoSolutionError",
    "build",
    "m_coefficients",
    "length_ratio",
    "root_string",
    "check_decomp_lemma",
    "DecompReport",
    "pair_lattice_divisors",
    "root_lattice_divisors",
    "DirectFactorReport",
    "check_directfactor",
    "irreducible_types",
    "dual_element",
    "type_a_pair_facts",
]

_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 3, "G": 2, "F": 4, "E": 6}
_ALIASES = {("C", 2): "B2", ("D", 3): "A3", ("B", 2): "C2"}


class NoSolutionError(ValueError):
    """A pairing system has no solution over the requested ring."""


@dataclass(frozen=True)
class RootSystemType:
    components: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if not self.components:
            raise ValueError("empty root system type")
        for fam, n in self.components:
            if fam not in _MIN_RANK:
                raise ValueError(f"unknown family {fam!r}")
            if fam == "E" and n not in (6, 7, 8):
                raise ValueError(f"E_{n} is not a root system (need 6, 7 or 8)")
            if fam == "F" and n != 4:
                raise ValueError("F only exists in rank 4")
            if fam == "G" and n != 2:
                raise ValueError("G only exists in rank 2")
            if n < _MIN_RANK[fam]:
                raise ValueError(f"{fam}_{n} is not admissible (rank must be >= {_MIN_RANK[fam]})")

    @classmethod
    def parse(cls, text: str) -> "RootSystemType":
        parts = [p for p in re.split(r"[xX+*\s]+", text.strip()) if p]
        comps = []
        for p in parts:
            m = re.fullmatch(r"([A-G])_?(\d+)", p.upper())
            if not m:
                raise ValueError(f"cannot parse root system type {text!r}")
            comps.append((m.group(1), int(m.group(2))))
        return cls(tuple(comps))

    @property
    def rank(self) -> int:
        return sum(n for _, n in self.components)

    @property
    def irreducible(self) -> bool:
        return len(self.components) == 1

    def aliases(self) -> list[str]:
        return [_ALIASES[c] for c in self.components if c in _ALIASES]

    def is_exceptional_large(self) -> bool:
        return any(f == "E" for f, _ in self.components)

    def all_type_a(self) -> bool:
        return all(f == "A" for f, _ in self.components)

    def __str__(self) -> str:
        return "x".join(f"{f}{n}" for f, n in self.components)


@dataclass(frozen=True)
class RootString:
    alpha: int
    beta: int
    p: int
    q: int


# -- realizations ------------------------------------------------------------


def _unit(n, i, scale=1):
    v = [0] * n
    v[i] = scale
    return v


def _realize(fam: str, n: int) -> tuple[list[list[int]], list[list[int]]]:
    """Return (all roots, simple roots) as integer vectors."""
    roots: list[list[int]] = []
    if fam == "A":
        dim = n + 1
        for i in range(dim):
            for j in range(dim):
                if i != j:
                    v = [0] * dim
                    v[i], v[j] = 1, -1
                    roots.append(v)
        simple = []
        for i in range(n):
            v = [0] * dim
            v[i], v[i + 1] = 1, -1
            simple.append(v)
        return roots, simple
    if fam in "BCD":
        for i, j in combinations(range(n), 2):
            for si, sj in product((1, -1), repeat=2):
                v = [0] * n
                v[i], v[j] = si, sj
                roots.append(v)
        if fam == "B":
            roots += [_unit(n, i, s) for i in range(n) for s in (1, -1)]
        if fam == "C":
            roots += [_unit(n, i, 2 * s) for i in range(n) for s in (1, -1)]
        simple = []
        for i in range(n - 1):
            v = [0] * n
            v[i], v[i + 1] = 1, -1
            simple.append(v)
        if fam == "B":
            simple.append(_unit(n, n - 1))
        elif fam == "C":
            simple.append(_unit(n, n - 1, 2))
        else:
            v = [0] * n
            v[n - 2], v[n - 1] = 1, 1
            simple.append(v)
        return roots, simple
    if fam == "G":
        for i in range(3):
            for j in range(3):
                if i != j:
                    v = [0, 0, 0]
                    v[i], v[j] = 1, -1
                    roots.append(v)
        for i in range(3):
            for s in (1, -1):
                v = [-s, -s, -s]
                v[i] = 2 * s
                roots.append(v)
        return roots, [[1, -1, 0], [-2, 1, 1]]
    if fam == "F":
        # doubled coordinates
        for i in range(4):
            roots += [_unit(4, i, 2), _unit(4, i, -2)]
        for i, j in combinations(range(4), 2):
            for si, sj in product((2, -2), repeat=2):
                v = [0] * 4
                v[i], v[j] = si, sj
                roots.append(v)
        roots += [list(s) for s in product((1, -1), repeat=4)]
        return roots, [[0, 2, -2, 0], [0, 0, 2, -2], [0, 0, 0, 2], [1, -1, -1, -1]]
    if fam == "E":
        e8 = []
        for i, j in combinations(range(8), 2):
            for si, sj in product((2, -2), repeat=2):
                v = [0] * 8
                v[i], v[j] = si, sj
                e8.append(v)
        for s in product((1, -1), repeat=8):
            if s.count(-1) % 2 == 0:
                e8.append(list(s))
        simple8 = [
            [1, -1, -1, -1, -1, -1, -1, 1],
            [2, 2, 0, 0, 0, 0, 0, 0],
            [-2, 2, 0, 0, 0, 0, 0, 0],
            [0, -2, 2, 0, 0, 0, 0, 0],
            [0, 0, -2, 2, 0, 0, 0, 0],
            [0, 0, 0, -2, 2, 0, 0, 0],
            [0, 0, 0, 0, -2, 2, 0, 0],
            [0, 0, 0, 0, 0, -2, 2, 0],
        ]
        if n == 8:
            return e8, simple8
        # E_n: the E_8 roots supported on the first n simple roots
        coeffs = _coefficients_in(e8, simple8, [sum(a * a for a in v) for v in simple8])
        keep = [v for v, m in zip(e8, coeffs) if all(c == 0 for c in m[n:])]
        return keep, simple8[:n]
    raise ValueError(fam)


def _solve_rational(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    n = len(A)
    M = [list(map(Fraction, row)) + [Fraction(x)] for row, x in zip(A, b)]
    for c in range(n):
        p = next(i for i in range(c, n) if M[i][c])
        M[c], M[p] = M[p], M[c]
        pv = M[c][c]
        M[c] = [x / pv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return [M[i][n] for i in range(n)]


def _coefficients_in(vectors, simple, _lengths) -> list[tuple[int, ...]]:
    """Integer coefficients of each vector over the simple roots (via the Gram system)."""
    r = len(simple)
    gram = [[sum(a * b for a, b in zip(simple[i], simple[j])) for j in range(r)] for i in range(r)]
    out = []
    for v in vectors:
        rhs = [sum(a * b for a, b in zip(v, s)) for s in simple]
        sol = _solve_rational(gram, rhs)
        if any(x.denominator != 1 for x in sol):
            raise ValueError("vector is not in the root lattice")
        out.append(tuple(int(x) for x in sol))
    return out


# -- the RootSystem object ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class RootSystem:
    """Root data: integer realization plus everything derived from it.

    ``gram`` is the form on the simple roots (integer, short roots of
    squared length 2).  ``coroot_basis`` and ``coweight_basis`` are given in
    coweight coordinates, i.e. a vector ``h`` is recorded by the values
    ``alpha_i(h)`` of the simple roots; in those coordinates the coweight
    lattice is the identity and the coroot lattice is spanned by the
    columns of the Cartan matrix.
    """

    type: RootSystemType
    ambient_dim: int
    roots: tuple[tuple[int, ...], ...]
    mcoeffs: tuple[tuple[int, ...], ...]
    simple: tuple[int, ...]
    positive: tuple[int, ...]
    gram: tuple[tuple[int, ...], ...]
    component_of_simple: tuple[int, ...]
    _index: dict = field(repr=False, compare=False)
    _pairing: tuple = field(repr=False, compare=False)

    @property
    def rank(self) -> int:
        return len(self.simple)

    @property
    def n_positive(self) -> int:
        return len(self.positive)

    def __len__(self) -> int:
        return len(self.roots)

    def index_of(self, mcoeff: Sequence[int]) -> int | None:
        return self._index.get(tuple(mcoeff))

    def find(self, ambient: Sequence[int]) -> int | None:
        try:
            return self.roots.index(tuple(ambient))
        except ValueError:
            return None

    def is_root(self, mcoeff: Sequence[int]) -> bool:
        return tuple(mcoeff) in self._index

    def neg(self, i: int) -> int:
        return self._index[tuple(-c for c in self.mcoeffs[i])]

    def add(self, i: int, j: int) -> int | None:
        """Index of root_i + root_j, or None when the sum is not a root."""
        return self._index.get(tuple(a + b for a, b in zip(self.mcoeffs[i], self.mcoeffs[j])))

    def is_positive(self, i: int) -> bool:
        return i < len(self.positive)

    def height(self, i: int) -> int:
        return sum(self.mcoeffs[i])

    def form(self, x: Sequence[int], y: Sequence[int]) -> int:
        """Invariant form of two vectors given in simple-root coordinates."""
        g = self.gram
        return sum(x[a] * g[a][b] * y[b] for a in range(len(x)) if x[a] for b in range(len(y)) if y[b])

    def norm(self, i: int) -> int:
        m = self.mcoeffs[i]
        return self.form(m, m)

    def pairing(self, beta: int, alpha: int) -> int:
        """<beta, alpha^vee> = beta(H_alpha)."""
        return self._pairing[beta][alpha]

    def cartan_matrix(self) -> IntMatrix:
        """Entry (i, j) = <alpha_i, alpha_j^vee>."""
        return IntMatrix([[self.pairing(a, b) for b in self.simple] for a in self.simple])

    def coroot_coweight_coords(self, alpha: int) -> tuple[int, ...]:
        """H_alpha in coweight coordinates: (alpha_i(H_alpha))_i."""
        return tuple(self.pairing(s, alpha) for s in self.simple)

    @property
    def coroot_basis(self) -> IntMatrix:
        """Columns H_{alpha_i} in coweight coordinates."""
        return IntMatrix.from_columns([self.coroot_coweight_coords(s) for s in self.simple], self.rank)

    @property
    def coweight_basis(self) -> IntMatrix:
        return IntMatrix.identity(self.rank)

    def pairing_table(self) -> IntMatrix:
        return IntMatrix([list(row) for row in self._pairing])

    def coroot_in_simple_coroots(self, beta: int) -> tuple[Fraction, ...]:
        """H_beta = sum_alpha m_{beta alpha} (alpha,alpha)/(beta,beta) H_alpha."""
        nb = self.norm(beta)
        return tuple(
            Fraction(m * self.norm(s), nb) for m, s in zip(self.mcoeffs[beta], self.simple)
        )

    def reflect(self, alpha: int, beta: int) -> int:
        c = self.pairing(beta, alpha)
        m = tuple(b - c * a for a, b in zip(self.mcoeffs[alpha], self.mcoeffs[beta]))
        return self._index[m]

    def highest_roots(self) -> dict[str, int]:
        """Highest long and highest short root of an irreducible system."""
        if not self.type.irreducible:
            raise ValueError("highest roots are defined per irreducible component")
        norms = {self.norm(i) for i in self.positive}
        out = {}
        for label, n in (("long", max(norms)), ("short", min(norms))):
            cands = [i for i in self.positive if self.norm(i) == n]
            out[label] = max(cands, key=lambda i: (self.height(i), self.mcoeffs[i]))
        if len(norms) == 1:
            out["short"] = out["long"]
        return out

    def label(self, i: int) -> str:
        return "(" + ",".join(str(c) for c in self.mcoeffs[i]) + ")"


def build(t: RootSystemType | str) -> RootSystem:
    """Construct the root system of type ``t`` (reducible types allowed)."""
    if isinstance(t, str):
        t = RootSystemType.parse(t)
    all_roots: list[tuple[int, ...]] = []
    all_m: list[tuple[int, ...]] = []
    gram_blocks = []
    comp_of_simple: list[int] = []
    offset_amb = 0
    offset_rank = 0
    total_amb = 0
    total_rank = t.rank
    realized = []
    for fam, n in t.components:
        roots, simple = _realize(fam, n)
        realized.append((fam, n, roots, simple))
        total_amb += len(roots[0])
    for ci, (fam, n, roots, simple) in enumerate(realized):
        dim = len(roots[0])
        dots = [sum(a * a for a in v) for v in roots]
        short = min(dots)
        scale = Fraction(2, short)
        coeffs = _coefficients_in(roots, simple, None)
        r = len(simple)
        g = []
        for i in range(r):
            row = []
            for j in range(r):
                val = scale * sum(a * b for a, b in zip(simple[i], simple[j]))
                if val.denominator != 1:
                    raise AssertionError("non-integral normalized form")
                row.append(int(val))
            g.append(row)
        gram_blocks.append((offset_rank, g))
        for v, m in zip(roots, coeffs):
            if not (all(c >= 0 for c in m) or all(c <= 0 for c in m)):
                raise AssertionError(f"root {v} is neither positive nor negative")
            amb = [0] * total_amb
            amb[offset_amb:offset_amb + dim] = v
            mm = [0] * total_rank
            mm[offset_rank:offset_rank + r] = m
            all_roots.append(tuple(amb))
            all_m.append(tuple(mm))
        comp_of_simple += [ci] * r
        offset_amb += dim
        offset_rank += r
    gram = [[0] * total_rank for _ in range(total_rank)]
    for off, g in gram_blocks:
        for i, row in enumerate(g):
            for j, v in enumerate(row):
                gram[off + i][off + j] = v

    pos = [k for k, m in enumerate(all_m) if any(c > 0 for c in m)]
    pos.sort(key=lambda k: (sum(all_m[k]), tuple(-c for c in all_m[k])))
    amb_of = dict(zip(all_m, all_roots))
    order_m = [all_m[k] for k in pos]
    order_m += [tuple(-c for c in m) for m in order_m]
    roots_t = tuple(amb_of[m] for m in order_m)
    index = {m: i for i, m in enumerate(order_m)}
    npos = len(pos)
    simple_idx = tuple(index[tuple(1 if k == i else 0 for k in range(total_rank))] for i in range(total_rank))

    def form(x, y):
        return sum(x[a] * gram[a][b] * y[b] for a in range(total_rank) if x[a] for b in range(total_rank) if y[b])

    norms = [form(m, m) for m in order_m]
    pairing = []
    for mb in order_m:
        row = []
        for ia, ma in enumerate(order_m):
            val = Fraction(2 * form(mb, ma), norms[ia])
            if val.denominator != 1:
                raise AssertionError("non-integral Cartan pairing")
            row.append(int(val))
        pairing.append(tuple(row))

    return RootSystem(
        type=t,
        ambient_dim=total_amb,
        roots=roots_t,
        mcoeffs=tuple(order_m),
        simple=simple_idx,
        positive=tuple(range(npos)),
        gram=tuple(tuple(r) for r in gram),
        component_of_simple=tuple(comp_of_simple),
        _index=index,
        _pairing=tuple(pairing),
    )


# -- operations -----------------------------------------------------------------


def _root_index(rs: RootSystem, beta) -> int:
    if isinstance(beta, int):
        if not 0 <= beta < len(rs):
            raise ValueError(f"root index {beta} out of range")
        return beta
    idx = rs.index_of(beta)
    if idx is None:
        raise ValueError(f"{tuple(beta)} is not a root")
    return idx


def m_coefficients(rs: RootSystem, beta) -> tuple[int, ...]:
    """Coefficients of ``beta`` over the simple roots.

    ``beta`` may be a root index or an ambient integer vector.
    """
    if isinstance(beta, int):
        return rs.mcoeffs[_root_index(rs, beta)]
    idx = rs.find(beta)
    if idx is None:
        raise ValueError(f"{tuple(beta)} is not a root")
    return rs.mcoeffs[idx]


def length_ratio(rs: RootSystem, beta, alpha) -> Fraction:
    """(alpha,alpha)/(beta,beta), the ratio <H_beta,H_beta>/<H_alpha,H_alpha>."""
    b, a = _root_index(rs, beta), _root_index(rs, alpha)
    return Fraction(rs.norm(a), rs.norm(b))


def root_string(rs: RootSystem, alpha, beta) -> RootString:
    a, b = _root_index(rs, alpha), _root_index(rs, beta)
    if b == a or b == rs.neg(a):
        raise ValueError("root strings need beta != +-alpha")
    ma, mb = rs.mcoeffs[a], rs.mcoeffs[b]

    def walk(sign):
        k = 0
        while rs.is_root(tuple(y + sign * (k + 1) * x for x, y in zip(ma, mb))):
            k += 1
        return k

    p, q = walk(-1), walk(1)
    if p - q != rs.pairing(b, a):
        raise AssertionError("root string length disagrees with the Cartan pairing")
    return RootString(a, b, p, q)


@dataclass
class DecompReport:
    type: str
    tuple_count: int
    violations: list[tuple[int, int, int, int, int]]
    highest: dict[str, list[tuple[tuple[int, ...], tuple[int, ...]]]]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_decomp_lemma(t: RootSystemType | str, positive_only: bool = True) -> DecompReport:
    """Exhaustive check of the five-root decomposition lemma.

    For every ``gamma = a0 + b0 = a1 + b1`` (all five roots positive) at
    least one member of each of the pairs (a0+a1, a0+b1), (b0+a1, b0+b1),
    (a1+a0, a1+b0), (b1+a0, b1+b0) must fail to be a root.  With
    ``positive_only=False`` the roots range over all of Phi.
    """
    if isinstance(t, str):
        t = RootSystemType.parse(t)
    if not t.irreducible or t.rank > 3:
        raise ValueError(
            "the lemma is checked on irreducible systems of rank <= 3; larger cases "
            "reduce to these via the rank-3 subsystem spanned by the four summands"
        )
    rs = build(t)
    pool = rs.positive if positive_only else tuple(range(len(rs)))
    poolset = set(pool)
    decomps: dict[int, list[tuple[int, int]]] = {}
    for a in pool:
        for b in pool:
            g = rs.add(a, b)
            if g is not None and g in poolset:
                decomps.setdefault(g, []).append((a, b))

    def nonroot(x, y):
        return rs.add(x, y) is None

    count = 0
    bad = []
    for g, ds in decomps.items():
        for a0, b0 in ds:
            for a1, b1 in ds:
                count += 1
                conds = (
                    nonroot(a0, a1) or nonroot(a0, b1),
                    nonroot(b0, a1) or nonroot(b0, b1),
                    nonroot(a1, a0) or nonroot(a1, b0),
                    nonroot(b1, a0) or nonroot(b1, b0),
                )
                if not all(conds):
                    bad.append((a0, a1, b0, b1, g))

    highest = {}
    for label, g in rs.highest_roots().items():
        pairs = set()
        for a in range(len(rs)):
            b = rs.index_of(tuple(x - y for x, y in zip(rs.mcoeffs[g], rs.mcoeffs[a])))
            if b is not None:
                pairs.add(tuple(sorted((rs.mcoeffs[a], rs.mcoeffs[b]), reverse=True)))
        highest[label] = sorted(pairs, reverse=True)
    return DecompReport(str(t), count, bad, highest)


def _pair_matrix(rs: RootSystem, roots: Sequence[int]) -> IntMatrix:
    """Rows: the linear forms root(H_{alpha_i}) on the coroot lattice basis."""
    return IntMatrix([[rs.pairing(b, s) for s in rs.simple] for b in roots])


def pair_lattice_divisors(rs: RootSystem, alpha, beta) -> list[int]:
    """Nonzero invariant factors of (alpha, beta): Q^vee -> Z^2."""
    a, b = _root_index(rs, alpha), _root_index(rs, beta)
    return invariant_factors(_pair_matrix(rs, [a, b]))


def root_lattice_divisors(rs: RootSystem, alpha, beta) -> list[int]:
    """Nonzero elementary divisors of Z alpha + Z beta inside the root lattice Q."""
    a, b = _root_index(rs, alpha), _root_index(rs, beta)
    return invariant_factors(IntMatrix([list(rs.mcoeffs[a]), list(rs.mcoeffs[b])]))


def irreducible_types(max_rank: int) -> list[RootSystemType]:
    """All irreducible types of rank <= max_rank, aliases (C2, D3) left out."""
    out = []
    for fam in "ABCDEFG":
        for n in range(_MIN_RANK[fam], max_rank + 1):
            try:
                t = RootSystemType(((fam, n),))
            except ValueError:
                continue
            if (fam, n) in (("C", 2), ("D", 3)):
                continue
            out.append(t)
    return out


@dataclass
class DirectFactorReport:
    type: str
    root_lattice_divisors: list[int]
    pairing_divisors: list[int]
    pairing_cokernels: list[tuple[int, ...]]

    @property
    def ok(self) -> bool:
        allowed = {1, 2, 3}
        if not set(self.root_lattice_divisors) <= allowed or not set(self.pairing_divisors) <= allowed:
            return False
        if 3 in self.root_lattice_divisors and not self.type.startswith("G"):
            return False
        return True


def check_directfactor(t: RootSystemType | str) -> DirectFactorReport:
    """Divisor census over all pairs alpha != +-beta.

    Two views are recorded: elementary divisors of Z alpha + Z beta in Q,
    and invariant factors of the joint pairing map (alpha, beta) on Q^vee
    (whose cokernel is Z/3 for A_2).
    """
    rs = build(t)
    qd: set[int] = set()
    pd: set[int] = set()
    cok: set[tuple[int, ...]] = set()
    for a in range(len(rs)):
        for b in range(len(rs)):
            if b in (a, rs.neg(a)):
                continue
            qd.update(root_lattice_divisors(rs, a, b))
            f = pair_lattice_divisors(rs, a, b)
            pd.update(f)
            cok.add(tuple(x for x in f if x != 1))
    return DirectFactorReport(str(rs.type), sorted(qd), sorted(pd), sorted(cok))


def dual_element(rs: RootSystem, constraints, R: SLocalRing) -> tuple[Fraction, ...]:
    """Some ``h`` in R (x) Q^vee with prescribed values on up to two roots.

    The result is given in simple-coroot coordinates.  Raises
    ``NoSolutionError`` if the pairing system is not solvable over ``R``.
    """
    cons = [(_root_index(rs, r), Fraction(v)) for r, v in constraints]
    if len(cons) > 2:
        raise ValueError("at most two constraints")
    if len(cons) == 2:
        a, b = cons[0][0], cons[1][0]
        if a == b or a == rs.neg(b):
            raise ValueError("constraint roots must not be +- each other")
    M = _pair_matrix(rs, [c[0] for c in cons])
    sol = solve_over(M, [c[1] for c in cons], R)
    if sol is None:
        raise NoSolutionError(
            f"no h over {R} with values {[str(c[1]) for c in cons]} on roots "
            f"{[rs.label(c[0]) for c in cons]}"
        )
    return sol


def type_a_pair_facts(l: int) -> dict[str, bool]:
    """Check the four stated facts about positive roots of A_l on Q^vee.

    Returns a dict fact-name -> holds (facts not applicable to ``l`` are
    omitted).
    """
    rs = build(RootSystemType((("A", l),)))
    out: dict[str, bool] = {}
    pos = rs.positive
    if l == 1:
        out["alpha(Q)=2Z"] = invariant_factors(_pair_matrix(rs, [pos[0]])) == [2]
        return out
    out["alpha(Q)=Z"] = all(invariant_factors(_pair_matrix(rs, [a])) == [1] for a in pos)
    pairs = [(a, b) for a in pos for b in pos if a != b]
    if l == 2:
        out["coker=Z/3"] = all(invariant_factors(_pair_matrix(rs, [a, b])) == [1, 3] for a, b in pairs)
    else:
        out["image>=2Z+2Z"] = all(
            (lambda f: len(f) == 2 and all(2 % d == 0 for d in f))(invariant_factors(_pair_matrix(rs, [a, b])))
            for a, b in pairs
        )
    return out
