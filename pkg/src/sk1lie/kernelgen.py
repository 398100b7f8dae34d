"""Commuting pairs, the bracket kernel on the exterior square, and span certification.

The exterior square has basis ``b_i ^ b_j`` (``i < j``) in lexicographic
order.  A wedge is a sparse vector ``dict[int, Fraction]`` over that basis.

``generators_reductive`` and ``generators_nilpotent`` emit explicit pairs
``(A, B)`` with ``[A, B] = 0``; every pair is checked exactly before it is
returned.  ``certify`` then compares the span of their wedges with the
saturated kernel of the bracket map via relative invariant factors.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .chevalley import ChevalleyAlgebra, LieAlgebraData, Vec, vec_add, vec_scale
from .exactlat import (
    IntMatrix,
    SLocalRing,
    SpanError,
    _relative_factors_sparse,
    _sparse_kernel,
)
from .rootsys import dual_element, root_string

__all__ = [
    "PROVENANCE",
    "SoundnessError",
    "GeneratorCertificate",
    "VerificationReport",
    "wedge_index",
    "wedge_pair",
    "wedge",
    "bracket_columns",
    "bracket_matrix",
    "bracket_kernel",
    "apply_bracket",
    "recipe_ring",
    "make_certificate",
    "generators_reductive",
    "generators_nilpotent",
    "generators_all_commuting_basis",
    "certify",
    "brute_force_span",
    "span_mod",
]

PROVENANCE = (
    "Fact1-Cartan",
    "Fact2-NonRoot",
    "Fact4-KernelOfAlpha",
    "L-cong1-CaseI",
    "L-cong1-CaseII",
    "L-cong1-CaseIII",
    "L-cong2",
    "Nilp-MixedPair",
    "Nilp-SameSign",
    "Basis-Commuting",
    "Product-Cross",
)


class SoundnessError(AssertionError):
    """A generator that was supposed to commute does not."""


# -- exterior square ---------------------------------------------------------------


def wedge_index(i: int, j: int, d: int) -> int:
    """Position of b_i ^ b_j (i < j) in the lexicographic basis."""
    if not 0 <= i < j < d:
        raise ValueError(f"need 0 <= i < j < d, got {i}, {j}, {d}")
    return i * d - i * (i + 1) // 2 + (j - i - 1)


def wedge_pair(idx: int, d: int) -> tuple[int, int]:
    i = 0
    while idx >= d - 1 - i:
        idx -= d - 1 - i
        i += 1
    return i, i + 1 + idx


def wedge(x: Mapping[int, Fraction], y: Mapping[int, Fraction], d: int) -> Vec:
    out: dict[int, Fraction] = {}
    for i, a in x.items():
        for j, b in y.items():
            if i == j:
                continue
            if i < j:
                k, c = wedge_index(i, j, d), a * b
            else:
                k, c = wedge_index(j, i, d), -a * b
            out[k] = out.get(k, 0) + c
    return {k: v for k, v in out.items() if v}


def bracket_columns(data: LieAlgebraData) -> list[dict[int, Fraction]]:
    """Column ``wedge_index(i, j)`` holds the coordinates of [b_i, b_j]."""
    d = data.dim
    cols: list[dict[int, Fraction]] = [{} for _ in range(d * (d - 1) // 2)]
    for i, j, k, c in data.constants:
        cols[wedge_index(i, j, d)][k] = c
    return cols


def _common_denominator(values: Iterable[Fraction]) -> int:
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return den


def bracket_matrix(data: LieAlgebraData) -> IntMatrix:
    """The bracket as a d x d(d-1)/2 integer matrix.

    Rational structure constants are multiplied by their common
    denominator (this does not change the kernel).
    """
    cols = bracket_columns(data)
    den = _common_denominator(c for col in cols for c in col.values())
    return IntMatrix.from_sparse_columns(data.dim, [{k: int(v * den) for k, v in col.items()} for col in cols])


def apply_bracket(data: LieAlgebraData, w: Mapping[int, Fraction]) -> Vec:
    """Image of a wedge under the bracket map."""
    d = data.dim
    out: dict[int, Fraction] = {}
    for idx, c in w.items():
        i, j = wedge_pair(idx, d)
        for k, v in data.bracket_basis(i, j).items():
            out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


def bracket_kernel(data: LieAlgebraData) -> list[dict[int, int]]:
    """Saturated Z-basis of the kernel of the bracket on the exterior square."""
    d = data.dim
    cols = bracket_columns(data)
    den = _common_denominator(c for col in cols for c in col.values())
    icols = [{k: int(v * den) for k, v in col.items()} for col in cols]
    return _sparse_kernel(d * (d - 1) // 2, icols)


# -- certificates ---------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorCertificate:
    A: Vec
    B: Vec
    wedge: Vec
    provenance: str
    params: tuple[str, ...] = ()

    def sort_key(self):
        return (PROVENANCE.index(self.provenance) if self.provenance in PROVENANCE else len(PROVENANCE), self.params)


def make_certificate(data: LieAlgebraData, A: Vec, B: Vec, provenance: str, params: Sequence = ()) -> GeneratorCertificate:
    """Build a certificate, raising SoundnessError unless [A, B] = 0 exactly."""
    A = {k: Fraction(v) for k, v in A.items() if v}
    B = {k: Fraction(v) for k, v in B.items() if v}
    br = data.bracket(A, B)
    if br:
        raise SoundnessError(
            f"{provenance} pair {tuple(map(str, params))} does not commute: "
            + ", ".join(f"{data.labels[k]}:{v}" for k, v in sorted(br.items()))
        )
    return GeneratorCertificate(A, B, wedge(A, B, data.dim), provenance, tuple(str(p) for p in params))


def recipe_ring(R: SLocalRing) -> SLocalRing:
    """Ring over which the explicit recipes are written.

    The recipes divide by 2 and 3.  If those are not units of ``R`` we still
    build them over Z[1/6] (plus whatever ``R`` inverts); ``certify`` then
    clears denominators, so the resulting span is honest over ``R``.
    """
    if R.is_unit(6):
        return R
    if R.is_local():
        return SLocalRing.inverting(2, 3)
    return SLocalRing.inverting(*(set(R.inverted) | {2, 3}))


def _e(i: int, c: Fraction | int = 1) -> Vec:
    return {i: Fraction(c)}


def generators_reductive(g: ChevalleyAlgebra, R: SLocalRing) -> list[GeneratorCertificate]:
    """All explicit commuting pairs for a Chevalley order.

    Families: Cartan pairs; X_a ^ X_b with a + b outside Phi and nonzero;
    h ^ X_a for h in ker(a); the three cases of the first congruence lemma
    for every ordered pair with a + b a root; the (A, B) pair of the second
    congruence lemma for each non-simple positive root.
    """
    Rr = recipe_ring(R)
    rs = g.rs
    d = g.data
    k = g.cartan_rank
    nroots = len(rs)
    certs: list[GeneratorCertificate] = []
    lab = rs.label

    for i in range(k):
        for j in range(i + 1, k):
            certs.append(make_certificate(d, _e(i), _e(j), "Fact1-Cartan", (f"h{i + 1}", f"h{j + 1}")))

    for a in range(nroots):
        for b in range(a + 1, nroots):
            if b != rs.neg(a) and rs.add(a, b) is None:
                certs.append(make_certificate(d, _e(g.x(a)), _e(g.x(b)), "Fact2-NonRoot", (lab(a), lab(b))))

    for a in range(nroots):
        for n, h in enumerate(g.kernel_lattice(a)):
            certs.append(make_certificate(d, h, _e(g.x(a)), "Fact4-KernelOfAlpha", (lab(a), n)))

    for a in range(nroots):
        for b in range(nroots):
            gam = rs.add(a, b)
            if gam is None:
                continue
            nab = g.n(a, b)
            coeffs = dual_element(rs, [(a, -nab), (b, 0)], Rr)
            h = g.coroot_to_cartan(coeffs)
            A = vec_add(_e(g.x(a)), h)
            B = {g.x(b): Fraction(1), g.x(gam): Fraction(1)}
            g1 = rs.add(a, gam)
            case = "L-cong1-CaseI"
            if g1 is not None:
                r1 = Fraction(g.n(a, gam), 2 * nab)
                B = vec_add(B, _e(g.x(g1), r1))
                case = "L-cong1-CaseII"
                g2 = rs.add(a, g1)
                if g2 is not None:
                    r2 = r1 * Fraction(g.n(a, g1), 3 * nab)
                    B = vec_add(B, _e(g.x(g2), r2))
                    case = "L-cong1-CaseIII"
            certs.append(make_certificate(d, A, B, case, (lab(a), lab(b))))

    for gam in range(rs.n_positive):
        if gam in rs.simple:
            continue
        al = next(s for s in rs.simple if (b := rs.add(gam, rs.neg(s))) is not None and rs.is_positive(b))
        be = rs.add(gam, rs.neg(al))
        A, B = _cong2_pair(g, al, be, gam, Rr)
        certs.append(make_certificate(d, A, B, "L-cong2", (lab(al), lab(be))))

    return certs


def _cong2_pair(g: ChevalleyAlgebra, al: int, be: int, gam: int, Rr: SLocalRing) -> tuple[Vec, Vec]:
    rs = g.rs
    N = g.n
    neg = rs.neg

    def shift(x: int, y: int, k: int) -> int | None:
        """Index of x - k*y if it is a root."""
        m = tuple(a - k * b for a, b in zip(rs.mcoeffs[x], rs.mcoeffs[y]))
        return rs.index_of(m)

    def n_multi(x: int, y: int, k: int) -> int:
        """N_{x,-k y}: product of single steps down the y-string, 0 if it leaves Phi."""
        out = 1
        cur = x
        for _ in range(k):
            nxt = shift(cur, y, 1)
            if nxt is None:
                return 0
            out *= N(cur, neg(y))
            cur = nxt
        return out

    A: Vec = {g.x(gam): Fraction(1), g.x(al): Fraction(1), g.x(be): Fraction(1)}
    for x, y in ((al, be), (be, al)):
        ngy = N(gam, neg(y))
        for k, c in ((1, 2), (2, 6), (3, 24)):
            target = shift(x, y, k)
            if target is None:
                continue
            num = n_multi(x, y, k)
            if num:
                A = vec_add(A, _e(g.x(target), Fraction(num, c * ngy**k)))

    nab = N(al, be)
    nag, nbg = N(neg(al), gam), N(neg(be), gam)
    hval = Fraction(-nag * nbg, nab)
    coeffs = dual_element(rs, [(al, hval), (be, -hval)], Rr)
    h = g.coroot_to_cartan(coeffs)
    bma = rs.add(be, neg(al))
    prod_ = N(be, neg(al)) * N(bma, neg(be)) if bma is not None else 0
    ch = Fraction(nab * nab, nag * nbg) * (1 - Fraction(prod_, 2 * nab * nbg))
    A = vec_add(A, h, ch)

    B: Vec = {g.x(neg(gam)): Fraction(1)}
    B = vec_add(B, _e(g.x(neg(al)), Fraction(nbg, N(be, al))))
    B = vec_add(B, _e(g.x(neg(be)), Fraction(nag, nab)))
    B = vec_add(B, h)
    return A, B


def generators_nilpotent(n: LieAlgebraData, g: ChevalleyAlgebra, R: SLocalRing) -> list[GeneratorCertificate]:
    """Commuting pairs for the positive nilradical ``n`` of ``g``.

    For each positive root with several decompositions the mixed pairs of
    the nilpotent equality argument are emitted, together with every
    X_a ^ X_b where a + b is not a root.
    """
    rs = g.rs
    npos = rs.n_positive
    lab = rs.label
    certs: list[GeneratorCertificate] = []

    def nonroot(x, y):
        return rs.add(x, y) is None

    for a in range(npos):
        for b in range(a + 1, npos):
            if nonroot(a, b):
                certs.append(make_certificate(n, _e(a), _e(b), "Fact2-NonRoot", (lab(a), lab(b))))

    for gam in range(npos):
        decs = []
        for a in range(npos):
            b = rs.add(gam, rs.neg(a))
            if b is not None and b < npos and a < b:
                decs.append((a, b))
        if len(decs) < 2:
            continue
        a0, b0 = decs[0]
        n0 = g.n(a0, b0)
        for a, b in decs[1:]:
            if nonroot(a0, a) and nonroot(b0, b):
                pass
            elif nonroot(a0, b) and nonroot(b0, a):
                a, b = b, a
            else:
                raise SoundnessError(f"no admissible ordering of {lab(a)} + {lab(b)} against {lab(a0)} + {lab(b0)}")
            nab = g.n(a, b)
            A = {a: Fraction(1, nab), b0: Fraction(1)}
            B = {b: Fraction(1), a0: Fraction(1, n0)}
            params = (lab(gam), lab(a), lab(b))
            certs.append(make_certificate(n, A, B, "Nilp-MixedPair", params))
            certs.append(make_certificate(n, _e(a), _e(a0), "Nilp-SameSign", params + ("alpha",)))
            certs.append(make_certificate(n, _e(b), _e(b0), "Nilp-SameSign", params + ("beta",)))
    return certs


def generators_all_commuting_basis(data: LieAlgebraData) -> list[GeneratorCertificate]:
    """b_i ^ b_j for every commuting pair of basis vectors."""
    out = []
    for i in range(data.dim):
        for j in range(i + 1, data.dim):
            if not data.bracket_basis(i, j):
                out.append(make_certificate(data, _e(i), _e(j), "Basis-Commuting", (data.labels[i], data.labels[j])))
    return out


# -- certification ---------------------------------------------------------------------


@dataclass
class VerificationReport:
    name: str
    ring: str
    dim: int
    kernel_rank: int
    span_rank: int
    factors: list
    nonunit_factors: list
    census: dict[str, int]
    n_generators: int
    n_distinct: int
    seconds: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def deficit(self) -> int:
        return self.kernel_rank - self.span_rank

    @property
    def equal(self) -> bool:
        return self.deficit == 0 and not self.nonunit_factors

    @property
    def verdict(self) -> str:
        return "Equal" if self.equal else "ProperSubmodule"

    def factors_rle(self) -> list[list]:
        return _rle(self.factors)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "ring": self.ring,
            "dim": self.dim,
            "kernel_rank": self.kernel_rank,
            "span_rank": self.span_rank,
            "rank_deficit": self.deficit,
            "verdict": self.verdict,
            "invariant_factors": [[str(f), c] for f, c in self.factors_rle()],
            "nonunit_factors": [str(f) for f in self.nonunit_factors],
            "census": dict(sorted(self.census.items())),
            "generators": self.n_generators,
            "distinct_wedges": self.n_distinct,
            "seconds": round(self.seconds, 3),
            **self.extra,
        }


def _rle(values: Sequence) -> list[list]:
    out: list[list] = []
    for v in values:
        if out and out[-1][0] == v:
            out[-1][1] += 1
        else:
            out.append([v, 1])
    return out


def _normalize_wedge(c: GeneratorCertificate, R: SLocalRing) -> dict[int, int] | None:
    """Integral primitive-over-R multiple of the certificate's wedge.

    Scaling A and B by their denominators keeps both in the integral
    lattice, so the result is a genuine decomposable commuting wedge there.
    """
    if not c.wedge:
        return None
    da = _common_denominator(c.A.values())
    db = _common_denominator(c.B.values())
    w = {k: v * da * db for k, v in c.wedge.items()}
    if any(v.denominator != 1 for v in w.values()):
        raise AssertionError("wedge of integral vectors is not integral")
    iw = {k: int(v) for k, v in w.items()}
    content = 0
    for v in iw.values():
        content = math.gcd(content, v)
    u = R.unit_part(content)
    iw = {k: v // u for k, v in iw.items()}
    if iw[min(iw)] < 0:
        iw = {k: -v for k, v in iw.items()}
    return iw


def certify(
    data: LieAlgebraData,
    certs: Sequence[GeneratorCertificate],
    R: SLocalRing,
    kernel: Sequence[dict[int, int]] | None = None,
) -> VerificationReport:
    """Compare the R-span of the certificate wedges with the bracket kernel."""
    t0 = time.perf_counter()
    if kernel is None:
        kernel = bracket_kernel(data)
    census = Counter(c.provenance for c in certs)
    seen: dict[tuple, dict[int, int]] = {}
    for c in sorted(certs, key=GeneratorCertificate.sort_key):
        w = _normalize_wedge(c, R)
        if w is None:
            continue
        key = tuple(sorted(w.items()))
        seen.setdefault(key, w)
    gens = [{k: Fraction(v) for k, v in w.items()} for w in seen.values()]
    for w in gens:
        if apply_bracket(data, w):
            raise SoundnessError("a certificate wedge is not in the bracket kernel")
    try:
        factors = _relative_factors_sparse(kernel, gens)
    except SpanError as exc:
        raise SoundnessError(str(exc)) from exc
    span_rank = sum(1 for f in factors if f != 0)
    nonunit = sorted({f for f in factors if f != 0 and not R.is_unit_rational(Fraction(f))}, key=Fraction)
    return VerificationReport(
        name=data.name,
        ring=str(R),
        dim=data.dim,
        kernel_rank=len(kernel),
        span_rank=span_rank,
        factors=list(factors),
        nonunit_factors=nonunit,
        census=dict(census),
        n_generators=len(certs),
        n_distinct=len(gens),
        seconds=time.perf_counter() - t0,
    )


# -- brute force oracle -----------------------------------------------------------------


def _rref_mod(rows: list[list[int]], q: int) -> list[list[int]]:
    rows = [[x % q for x in r] for r in rows if any(x % q for x in r)]
    out: list[list[int]] = []
    if not rows:
        return out
    n = len(rows[0])
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = pow(rows[r][c], -1, q)
        rows[r] = [x * inv % q for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % q for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return [row for row in rows[:r]]


def _nullspace_mod(M: list[list[int]], n: int, q: int) -> list[list[int]]:
    R = _rref_mod(M, q)
    pivots = []
    for row in R:
        pivots.append(next(i for i, x in enumerate(row) if x))
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for row, p in zip(R, pivots):
            v[p] = (-row[f]) % q
        basis.append(v)
    return basis


def span_mod(vectors: Iterable[Mapping[int, Fraction]], n: int, q: int) -> list[list[int]]:
    """Reduced row echelon basis of the span of rational vectors mod q."""
    rows = []
    for v in vectors:
        row = [0] * n
        for k, x in v.items():
            x = Fraction(x)
            if x.denominator % q == 0:
                raise ValueError(f"denominator divisible by {q}")
            row[k] = x.numerator * pow(x.denominator, -1, q) % q
        rows.append(row)
    return _rref_mod(rows, q)


BRUTE_FORCE_BUDGET = 2**13


def brute_force_span(data: LieAlgebraData, q: int) -> list[list[int]]:
    """Span of all x ^ y with [x, y] = 0 over Z/q, by full enumeration of x.

    For fixed x the admissible y form the centralizer, so it is enough to
    wedge x with a basis of that centralizer.  Only prime q is supported.
    """
    from .exactlat import is_prime

    if not is_prime(q):
        raise ValueError("brute_force_span works over prime fields only")
    d = data.dim
    if q**d > BRUTE_FORCE_BUDGET:
        raise ValueError(f"enumeration of (Z/{q})^{d} exceeds the budget of {BRUTE_FORCE_BUDGET} elements")
    for *_, c in data.constants:
        if c.denominator % q == 0:
            raise ValueError(f"structure constants are not defined mod {q}")
    cons = [(i, j, k, c.numerator * pow(c.denominator, -1, q) % q) for i, j, k, c in data.constants]
    nw = d * (d - 1) // 2
    acc: list[list[int]] = []
    for x in product(range(q), repeat=d):
        if not any(x):
            continue
        # ad_x as a d x d matrix: column j = [x, b_j]
        ad = [[0] * d for _ in range(d)]
        for i, j, k, c in cons:
            if x[i]:
                ad[k][j] = (ad[k][j] + x[i] * c) % q
            if x[j]:
                ad[k][i] = (ad[k][i] - x[j] * c) % q
        for y in _nullspace_mod(ad, d, q):
            w = [0] * nw
            for i in range(d):
                if not x[i]:
                    continue
                for j in range(d):
                    if y[j] and i != j:
                        if i < j:
                            w[wedge_index(i, j, d)] += x[i] * y[j]
                        else:
                            w[wedge_index(j, i, d)] -= x[i] * y[j]
            if any(v % q for v in w):
                acc.append(w)
        if len(acc) > 4 * nw:
            acc = _rref_mod(acc, q)
    return _rref_mod(acc, q)
