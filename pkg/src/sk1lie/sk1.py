"""Uniform Lie lattices and the SK_1 criterion.

For a uniform pro-p group with Lie lattice ``L`` the group ``SK_1`` of its
Iwasawa algebra vanishes exactly when every element of the bracket kernel
on the exterior square of ``L`` is a combination of commuting wedges.
``sk1_check`` decides this for the two situations where we have a complete
recipe: congruence algebras ``p^n g_Z`` of Chevalley orders, and 2-step
nilpotent lattices with a one-dimensional kernel of the structure map on
a rank-4 ``V``.  Everything else is reported as ``Unknown``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .chevalley import LatticeChoice, LieAlgebraData, build_chevalley, scale
from .exactlat import IntMatrix, SLocalRing, is_prime, kernel_basis
from .kernelgen import (
    GeneratorCertificate,
    VerificationReport,
    apply_bracket,
    bracket_kernel,
    certify,
    generators_all_commuting_basis,
    generators_reductive,
    make_certificate,
    wedge_index,
)
from .rootsys import RootSystemType

__all__ = [
    "CongruenceOrigin",
    "TwoStepNilpotentPresentation",
    "UniformLieLattice",
    "SK1Verdict",
    "is_powerful",
    "build_congruence_algebra",
    "build_counterexample",
    "relations_table",
    "render_relations_table",
    "relations_table_presentation",
    "sk1_check",
    "h2_torsion_dim",
    "product",
    "product_certificates",
    "FactorialReport",
    "factorial_valuation_bound",
    "plucker",
]


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p in (2, 3):
        raise ValueError("the criterion is only established for p >= 5 (p = 2, 3 excluded)")


def is_powerful(data: LieAlgebraData, p: int) -> bool:
    """True iff every structure constant is divisible by p."""
    if not data.is_integral():
        raise ValueError("powerful is defined for integral structure constants")
    return all(c.numerator % p == 0 for *_, c in data.constants)


@dataclass(frozen=True)
class CongruenceOrigin:
    type: str
    lattice: str
    n: int


@dataclass(frozen=True)
class TwoStepNilpotentPresentation:
    """``L = p^n (V + W)`` with ``[e_i, e_j] = d(e_i ^ e_j)`` and W central.

    ``d`` is a ``w_rank x C(v_rank, 2)`` integer matrix whose columns are
    indexed by pairs ``i < j`` in lexicographic order.
    """

    v_rank: int
    w_rank: int
    d: IntMatrix
    n: int = 1

    def __post_init__(self):
        if self.d.shape != (self.w_rank, self.v_rank * (self.v_rank - 1) // 2):
            raise ValueError("structure map has the wrong shape")

    def algebra(self, p: int, name: str = "two-step") -> LieAlgebraData:
        v, w = self.v_rank, self.w_rank
        a = p**self.n
        consts = []
        for c, (i, j) in enumerate(combinations(range(v), 2)):
            for r in range(w):
                x = self.d[r, c]
                if x:
                    consts.append((i, j, v + r, Fraction(a * x)))
        labels = tuple(f"e{i + 1}" for i in range(v)) + tuple(f"w{r + 1}" for r in range(w))
        meta = (("prime", str(p)), ("origin", f"two-step {v} {self.n}"))
        return LieAlgebraData(name, labels, tuple(consts), meta)

    def d_kernel(self) -> list[tuple[int, ...]]:
        return [tuple(col) for col in kernel_basis(self.d).columns()]

    @classmethod
    def from_algebra(cls, data: LieAlgebraData, v_rank: int, p: int, n: int) -> "TwoStepNilpotentPresentation":
        """Recover the structure map from a 2-step algebra's constants."""
        d = data.dim
        w = d - v_rank
        a = p**n
        cols = list(combinations(range(v_rank), 2))
        pos = {c: k for k, c in enumerate(cols)}
        M = [[0] * len(cols) for _ in range(w)]
        for i, j, k, c in data.constants:
            if j >= v_rank or k < v_rank:
                raise ValueError("constants are not of two-step shape (V x V -> W)")
            q = c / a
            if q.denominator != 1:
                raise ValueError(f"constant {c} is not divisible by p^n = {a}")
            M[k - v_rank][pos[(i, j)]] = int(q)
        return cls(v_rank, w, IntMatrix(M, len(cols)), n)


@dataclass(frozen=True, eq=False)
class UniformLieLattice:
    data: LieAlgebraData
    p: int
    powerful: bool
    origin: CongruenceOrigin | None = None
    presentation: TwoStepNilpotentPresentation | None = None

    @classmethod
    def create(cls, data: LieAlgebraData, p: int, origin=None, presentation=None) -> "UniformLieLattice":
        _check_prime(p)
        if not data.is_integral():
            raise ValueError("a uniform lattice needs integral structure constants")
        return cls(data, p, is_powerful(data, p), origin, presentation)


@dataclass
class SK1Verdict:
    outcome: str  # Vanishes | NonVanishing | Unknown
    p: int
    path: str
    reason: str = ""
    report: VerificationReport | None = None
    witness: dict | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"outcome": self.outcome, "p": self.p, "path": self.path, "reason": self.reason}
        out["report"] = self.report.to_dict() if self.report else None
        out["witness"] = self.witness
        out.update(self.details)
        return out


def build_congruence_algebra(t: RootSystemType | str, lat: LatticeChoice | None, p: int, n: int) -> UniformLieLattice:
    """``p^n g_Z`` for the Chevalley order of type ``t``."""
    _check_prime(p)
    if n < 1:
        raise ValueError("n must be >= 1")
    lat = lat or LatticeChoice.coroot()
    g = build_chevalley(t if not isinstance(t, str) else RootSystemType.parse(t), lat)
    data = scale(g.data, p**n)
    data = data.with_name(
        f"{g.rs.type}/{lat}(p^{n})",
        (("prime", str(p)), ("origin", f"congruence {g.rs.type} {lat} {n}")),
    )
    return UniformLieLattice.create(data, p, CongruenceOrigin(str(g.rs.type), str(lat), n))


def plucker(omega: Sequence[int]) -> int:
    """omega ^ omega / 2 for omega in the exterior square of a rank-4 module.

    Coordinates are ordered (12, 13, 14, 23, 24, 34).
    """
    w12, w13, w14, w23, w24, w34 = omega
    return w12 * w34 - w13 * w24 + w14 * w23


def _decompose_plane(omega: Sequence[int], v: int) -> tuple[list[int], list[int]] | None:
    """Integral a, b with a ^ b = omega, for primitive decomposable omega."""
    pairs = list(combinations(range(v), 2))
    triples = list(combinations(range(v), 3))
    tpos = {t: k for k, t in enumerate(triples)}
    # matrix of x -> x ^ omega, V -> exterior cube
    M = [[0] * v for _ in triples]
    for x in range(v):
        for c, (i, j) in enumerate(pairs):
            if not omega[c] or x in (i, j):
                continue
            t = tuple(sorted((x, i, j)))
            perm = [x, i, j]
            sign = 1
            for a_ in range(3):
                for b_ in range(a_ + 1, 3):
                    if perm[a_] > perm[b_]:
                        sign = -sign
            M[tpos[t]][x] += sign * omega[c]
    K = kernel_basis(IntMatrix(M, v)).columns()
    if len(K) != 2:
        return None
    a, b = list(K[0]), list(K[1])
    ab = [a[i] * b[j] - a[j] * b[i] for i, j in pairs]
    if ab == [-x for x in omega]:
        a = [-x for x in a]
        ab = [-x for x in ab]
    return (a, b) if ab == list(omega) else None


def sk1_check(latt: UniformLieLattice) -> SK1Verdict:
    """Decide the SK_1 criterion where a complete recipe is available."""
    p = latt.p
    if not latt.powerful:
        raise ValueError("sk1_check needs a powerful lattice ([L, L] in pL)")
    R = SLocalRing.local_at(p)
    if latt.origin is not None:
        return _check_congruence(latt, R)
    if latt.presentation is not None:
        return _check_two_step(latt, R)
    return SK1Verdict(
        "Unknown",
        p,
        "none",
        "no decision procedure for this lattice: it is neither a congruence algebra of a "
        "Chevalley order nor a two-step lattice with a rank-1 structure kernel on rank-4 V",
    )


def _check_congruence(latt: UniformLieLattice, R: SLocalRing) -> SK1Verdict:
    o = latt.origin
    p = latt.p
    g = build_chevalley(RootSystemType.parse(o.type), LatticeChoice.parse(o.lattice))
    a = p**o.n
    expected = scale(g.data, a)
    if expected.constants != latt.data.constants or expected.labels != latt.data.labels:
        return SK1Verdict("Unknown", p, "congruence", "constants do not match p^n times the Chevalley order")
    certs = generators_reductive(g, R)
    base = certify(g.data, certs, R)
    # the same coordinate vectors commute in a*g since [aA, aB] = a^2 [A, B]
    moved = [make_certificate(latt.data, c.A, c.B, c.provenance, c.params) for c in certs]
    direct = certify(latt.data, moved, R)
    details = {
        "unscaled_verdict": base.verdict,
        "scaled_verdict": direct.verdict,
        "scaling": a,
    }
    if base.equal and direct.equal:
        return SK1Verdict("Vanishes", p, "congruence", "kernel is spanned by commuting wedges over Z_(p)", direct, None, details)
    return SK1Verdict(
        "NonVanishing" if direct.deficit == 0 and not direct.equal else "Unknown",
        p,
        "congruence",
        "explicit generators do not span the kernel over Z_(p)",
        direct,
        None,
        details,
    )


def _check_two_step(latt: UniformLieLattice, R: SLocalRing) -> SK1Verdict:
    pres = latt.presentation
    p = latt.p
    data = latt.data
    v = pres.v_rank
    K = pres.d_kernel()
    if v != 4 or len(K) != 1:
        return SK1Verdict(
            "Unknown",
            p,
            "two-step",
            f"two-step lattice with V-rank {v} and structure kernel of rank {len(K)}; "
            "the exact decomposability test covers V-rank 4 with a rank-1 kernel only",
        )
    omega = list(K[0])
    pl = plucker(omega)
    d = data.dim
    w = {}
    for c, (i, j) in enumerate(combinations(range(v), 2)):
        if omega[c]:
            w[wedge_index(i, j, d)] = Fraction(omega[c])
    if apply_bracket(data, w):
        raise AssertionError("structure-kernel element is not in the bracket kernel")
    certs = generators_all_commuting_basis(data)
    pn = "p" if pres.n == 1 else f"p^{pres.n}"
    label = " + ".join(
        f"{'' if x == 1 else '-' if x == -1 else str(x) + '*'}{pn}*e{i + 1} ^ {pn}*e{j + 1}"
        for x, (i, j) in zip(omega, combinations(range(v), 2))
        if x
    )
    if pl != 0:
        rep = certify(data, certs, R)
        witness = {
            "wedge": {f"{data.labels[i]}^{data.labels[j]}": str(x) for (i, j), x in _pairs(w, d)},
            "text": label,
            "omega": omega,
            "plucker": pl,
            "in_bracket_kernel": True,
        }
        return SK1Verdict(
            "NonVanishing",
            p,
            "two-step",
            "the structure kernel is spanned by an indecomposable element (omega ^ omega != 0), "
            "so no commuting wedge reaches it",
            rep,
            witness,
        )
    ab = _decompose_plane(omega, v)
    if ab is None:
        return SK1Verdict("Unknown", p, "two-step", "decomposable kernel element without an integral splitting")
    a, b = ab
    A = {i: Fraction(x) for i, x in enumerate(a) if x}
    B = {i: Fraction(x) for i, x in enumerate(b) if x}
    certs.append(make_certificate(data, A, B, "Basis-Commuting", ("a", "b")))
    rep = certify(data, certs, R)
    if rep.equal:
        return SK1Verdict(
            "Vanishes",
            p,
            "two-step",
            "the structure kernel is spanned by a decomposable element a ^ b with [a, b] = 0",
            rep,
            None,
            {"decomposition": {"a": a, "b": b}, "omega": omega},
        )
    return SK1Verdict("Unknown", p, "two-step", "decomposable kernel but the span check failed", rep)


def _pairs(w: dict, d: int):
    from .kernelgen import wedge_pair

    return sorted((wedge_pair(k, d), x) for k, x in w.items())


# -- the counterexample ---------------------------------------------------------------


_V_PAIRS = list(combinations(range(4), 2))


def _counterexample_map() -> IntMatrix:
    """Projection of the exterior square of Z^4 onto the quotient by e12 + e34.

    The quotient basis is the image of (e12, e13, e14, e23, e24); e34 maps to
    -w1.
    """
    M = [[0] * 6 for _ in range(5)]
    for c in range(5):
        M[c][c] = 1
    M[0][5] = -1
    return IntMatrix(M, 6)


def build_counterexample(p: int) -> tuple[UniformLieLattice, TwoStepNilpotentPresentation, str]:
    """The 9-dimensional uniform lattice with a non-decomposable kernel."""
    _check_prime(p)
    pres = TwoStepNilpotentPresentation(4, 5, _counterexample_map(), 1)
    data = pres.algebra(p, name=f"counterexample(p={p})")
    latt = UniformLieLattice.create(data, p, presentation=pres)
    return latt, pres, render_relations_table()


# (i, j) -> (index of y, sign of the exponent of p)
_TABLE = {(1, 2): (1, -1), (1, 3): (1, 1), (1, 4): (2, 1), (2, 3): (3, 1), (2, 4): (4, 1), (3, 4): (5, 1)}


def relations_table() -> dict[tuple[int, int], tuple[int, int]]:
    """The generators-and-relations form: [x_i, x_j] = y_k^(s p)."""
    return dict(_TABLE)


def render_relations_table() -> str:
    lines = ["[x_i,y_j] = 1 for all 1 <= i <= 4, 1 <= j <= 5", "[y_i,y_j] = 1 for all 1 <= i,j <= 5"]
    for (i, j), (k, s) in sorted(_TABLE.items()):
        exp = "-p" if s < 0 else "p"
        lines.append(f"[x_{i},x_{j}] = y_{k}^{{{exp}}}" if s < 0 else f"[x_{i},x_{j}] = y_{k}^{exp}")
    return "\n".join(lines)


def relations_table_presentation(p: int) -> TwoStepNilpotentPresentation:
    """Two-step presentation read off the relations table literally."""
    _check_prime(p)
    M = [[0] * 6 for _ in range(5)]
    for (i, j), (k, s) in _TABLE.items():
        M[k - 1][_V_PAIRS.index((i - 1, j - 1))] = s
    return TwoStepNilpotentPresentation(4, 5, IntMatrix(M, 6), 1)


# -- small formulas -------------------------------------------------------------------


def h2_torsion_dim(d: int) -> int:
    """C(d, 2) - d, the rank of the bracket kernel for semisimple g of dimension d."""
    if d < 3:
        raise ValueError(f"dimension {d} is out of range: a semisimple Lie algebra has dimension >= 3")
    return math.comb(d, 2) - d


def product(a: LieAlgebraData, b: LieAlgebraData) -> LieAlgebraData:
    """Direct sum with componentwise bracket."""
    da = a.dim
    consts = list(a.constants) + [(i + da, j + da, k + da, c) for i, j, k, c in b.constants]
    labels = tuple(f"1.{x}" for x in a.labels) + tuple(f"2.{x}" for x in b.labels)
    return LieAlgebraData(f"{a.name} x {b.name}", labels, tuple(consts))


def product_certificates(
    prod: LieAlgebraData,
    a: LieAlgebraData,
    certs_a: Sequence[GeneratorCertificate],
    certs_b: Sequence[GeneratorCertificate],
) -> list[GeneratorCertificate]:
    """Generators of the product: both factors' generators plus all cross pairs."""
    da = a.dim
    out = []
    for c in certs_a:
        out.append(make_certificate(prod, c.A, c.B, c.provenance, ("1",) + c.params))
    for c in certs_b:
        A = {k + da: v for k, v in c.A.items()}
        B = {k + da: v for k, v in c.B.items()}
        out.append(make_certificate(prod, A, B, c.provenance, ("2",) + c.params))
    for i in range(da):
        for j in range(da, prod.dim):
            out.append(make_certificate(prod, {i: Fraction(1)}, {j: Fraction(1)}, "Product-Cross", (prod.labels[i], prod.labels[j])))
    return out


@dataclass
class FactorialReport:
    p: int
    j_max: int
    checked: int
    violations: list[tuple[int, int]]

    @property
    def ok(self) -> bool:
        return not self.violations


def factorial_valuation_bound(p: int, j_max: int) -> FactorialReport:
    """Check (p-1) v_p((j-1)!) <= j-2 and v_p((j-1)!) <= j-3 for 3 <= j <= j_max."""
    if p == 2 or not is_prime(p):
        raise ValueError("p must be an odd prime")
    if j_max < 3:
        raise ValueError("j_max must be >= 3")
    bad = []
    v = 0  # v_p((j-1)!) maintained incrementally
    for j in range(2, j_max + 1):
        k = j - 1
        while k % p == 0 and k:
            v += 1
            k //= p
        if j >= 3 and ((p - 1) * v > j - 2 or v > j - 3):
            bad.append((j, v))
    return FactorialReport(p, j_max, j_max - 2, bad)
