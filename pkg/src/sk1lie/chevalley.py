"""Chevalley orders of split reductive Lie algebras.

The Cartan part is a lattice ``Q^vee <= L <= P^vee + z``.  Vectors of the
Cartan subalgebra are written in *coweight coordinates* (the values
``alpha_i(h)`` on the simple roots), followed by one coordinate per central
direction.  In these coordinates ``P^vee`` is the standard lattice and
``Q^vee`` is spanned by the columns of the Cartan matrix.

Root vectors satisfy ``[X_a, X_-a] = -H_a``.  The signs of the structure
constants come from the extraspecial-pair construction on the standard
Chevalley basis ``e_a`` (``[e_a, e_-a] = h_a``); we then put
``X_a = e_a`` for positive ``a`` and ``X_a = -e_a`` for negative ``a``,
which turns ``N_{-a,-b} = -N_{ab}`` into ``N_{-a,-b} = N_{ab}``.

Elements are sparse vectors: ``dict[int, Fraction]`` mapping basis index to
coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactlat import IntMatrix, hnf
from .rootsys import RootSystem, RootSystemType, build, root_string

__all__ = [
    "Vec",
    "LieAlgebraData",
    "LatticeChoice",
    "ChevalleyAlgebra",
    "ValidationReport",
    "build_chevalley",
    "nilradical",
    "scale",
    "validate",
    "validate_chevalley",
    "vec_add",
    "vec_scale",
]

Vec = dict  # dict[int, Fraction]


def vec_add(x: Mapping[int, Fraction], y: Mapping[int, Fraction], c: Fraction | int = 1) -> Vec:
    """x + c*y."""
    out = dict(x)
    for k, v in y.items():
        s = out.get(k, 0) + c * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vec_scale(x: Mapping[int, Fraction], c: Fraction | int) -> Vec:
    if not c:
        return {}
    return {k: c * v for k, v in x.items()}


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True, eq=False)
class LieAlgebraData:
    """A Lie algebra given by structure constants on a free module.

    ``constants`` holds ``(i, j, k, c)`` with ``i < j`` (0-based) meaning
    that ``[b_i, b_j]`` has coefficient ``c`` on ``b_k``.  ``meta`` carries
    free-form provenance (prime, origin, ...) used by the file format.
    """

    name: str
    labels: tuple[str, ...]
    constants: tuple[tuple[int, int, int, Fraction], ...]
    meta: tuple[tuple[str, str], ...] = ()
    _table: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        d = len(self.labels)
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        norm = []
        for i, j, k, c in self.constants:
            c = _frac(c)
            if not (0 <= i < j < d and 0 <= k < d):
                raise ValueError(f"bad structure constant index ({i}, {j}, {k}) for dimension {d}")
            if not c:
                continue
            slot = table.setdefault((i, j), {})
            if k in slot:
                raise ValueError(f"duplicate structure constant for ({i}, {j}, {k})")
            slot[k] = c
            norm.append((i, j, k, c))
        object.__setattr__(self, "constants", tuple(sorted(norm)))
        object.__setattr__(self, "_table", table)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def meta_dict(self) -> dict[str, str]:
        return dict(self.meta)

    def bracket_basis(self, i: int, j: int) -> dict[int, Fraction]:
        if i == j:
            return {}
        if i < j:
            return self._table.get((i, j), {})
        return {k: -c for k, c in self._table.get((j, i), {}).items()}

    def bracket(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> Vec:
        out: dict[int, Fraction] = {}
        for i, a in x.items():
            for j, b in y.items():
                if i == j:
                    continue
                for k, c in self.bracket_basis(i, j).items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: v for k, v in out.items() if v}

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for *_, c in self.constants)

    def denominators(self) -> set[int]:
        return {c.denominator for *_, c in self.constants}

    def is_abelian(self) -> bool:
        return not self.constants

    def with_name(self, name: str, meta: Iterable[tuple[str, str]] | None = None) -> "LieAlgebraData":
        return LieAlgebraData(name, self.labels, self.constants, tuple(meta) if meta is not None else self.meta)


def scale(data: LieAlgebraData, a: int) -> LieAlgebraData:
    """The algebra ``a*L`` in the basis ``a*b_i``: all constants times ``a``."""
    if a == 0:
        raise ValueError("scaling by 0 does not give a lattice")
    consts = tuple((i, j, k, c * a) for i, j, k, c in data.constants)
    return LieAlgebraData(f"{data.name}*{a}" if a != 1 else data.name, data.labels, consts, data.meta)


@dataclass
class ValidationReport:
    ok: bool
    checked_triples: int
    violations: list[str]

    def __bool__(self) -> bool:
        return self.ok


def validate(data: LieAlgebraData, max_violations: int = 20) -> ValidationReport:
    """Exact Jacobi identity on all basis triples (antisymmetry is built in)."""
    d = data.dim
    bad: list[str] = []
    count = 0
    # precompute ad-matrices sparsely for speed
    for i in range(d):
        for j in range(i + 1, d):
            bij = data.bracket_basis(i, j)
            for k in range(j + 1, d):
                count += 1
                s: dict[int, Fraction] = {}
                for (u, v, w) in ((i, j, k), (j, k, i), (k, i, j)):
                    inner = bij if (u, v) == (i, j) else data.bracket_basis(u, v)
                    for m, c in inner.items():
                        for t, e in data.bracket_basis(m, w).items():
                            s[t] = s.get(t, 0) + c * e
                if any(s.values()):
                    if len(bad) < max_violations:
                        names = data.labels
                        bad.append(f"Jacobi fails on ({names[i]}, {names[j]}, {names[k]})")
                    else:
                        break
    return ValidationReport(not bad, count, bad)


def lower_central_series_dims(data: LieAlgebraData, max_steps: int = 64) -> list[int]:
    """Ranks over Q of L, [L,L], [L,[L,L]], ... until it stabilizes."""
    from .exactlat import rank as _rank

    d = data.dim
    cur = [{i: Fraction(1)} for i in range(d)]
    dims = [d]
    for _ in range(max_steps):
        nxt = []
        for x in cur:
            for i in range(d):
                v = data.bracket({i: Fraction(1)}, x)
                if v:
                    nxt.append(v)
        if not nxt:
            dims.append(0)
            return dims
        den = 1
        for v in nxt:
            for c in v.values():
                den = den * c.denominator // math.gcd(den, c.denominator)
        M = IntMatrix([[int(v.get(k, 0) * den) for k in range(d)] for v in nxt])
        r = _rank(M)
        if r == dims[-1]:
            dims.append(r)
            return dims
        dims.append(r)
        # keep an echelon basis
        H, _ = hnf(M)
        cur = [{k: Fraction(x) for k, x in enumerate(row) if x} for row in H.rows if any(row)]
    return dims


def is_nilpotent(data: LieAlgebraData) -> bool:
    return lower_central_series_dims(data)[-1] == 0


# -- lattices -----------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeChoice:
    """Which Cartan lattice to use.

    ``kind`` is one of ``coroot``, ``coweight``, ``custom``, ``with_center``
    or ``gl``.  Custom generators are rational vectors in coweight
    coordinates followed by central coordinates.
    """

    kind: str
    generators: tuple[tuple[Fraction, ...], ...] = ()
    base: "LatticeChoice | None" = None
    central: int = 0

    @classmethod
    def coroot(cls) -> "LatticeChoice":
        return cls("coroot")

    @classmethod
    def coweight(cls) -> "LatticeChoice":
        return cls("coweight")

    @classmethod
    def custom(cls, generators: Sequence[Sequence]) -> "LatticeChoice":
        return cls("custom", tuple(tuple(Fraction(x) for x in g) for g in generators))

    @classmethod
    def with_center(cls, base: "LatticeChoice", z: int) -> "LatticeChoice":
        if z < 0:
            raise ValueError("central rank must be nonnegative")
        return cls("with_center", base=base, central=z)

    @classmethod
    def gl(cls, n: int) -> "LatticeChoice":
        """Diagonal integer matrices of gl_n over the A_{n-1} root system."""
        if n < 2:
            raise ValueError("gl_n needs n >= 2")
        return cls("gl", central=n)

    @classmethod
    def parse(cls, text: str) -> "LatticeChoice":
        t = text.strip().lower()
        if t in ("coroot", "q", "qv", "sc", "simply-connected"):
            return cls.coroot()
        if t in ("coweight", "p", "pv", "adjoint"):
            return cls.coweight()
        if t.startswith("gl"):
            return cls.gl(int(t[2:].lstrip(":")))
        for prefix in ("coroot+z", "coweight+z"):
            if t.startswith(prefix):
                base = cls.coroot() if prefix.startswith("coroot") else cls.coweight()
                return cls.with_center(base, int(t[len(prefix):]))
        raise ValueError(f"unknown lattice choice {text!r} (use coroot, coweight, coroot+zN, coweight+zN, glN)")

    def central_rank(self) -> int:
        if self.kind == "with_center":
            return self.base.central_rank() + self.central
        if self.kind == "gl":
            return 1
        return 0

    def __str__(self) -> str:
        if self.kind == "with_center":
            return f"{self.base}+z{self.central}"
        if self.kind == "gl":
            return f"gl{self.central}"
        if self.kind == "custom":
            return "custom(" + ";".join(",".join(str(x) for x in g) for g in self.generators) + ")"
        return self.kind

    def raw_generators(self, rs: RootSystem) -> list[tuple[Fraction, ...]]:
        r = rs.rank
        z = self.central_rank()
        if self.kind == "coroot":
            return [tuple(Fraction(x) for x in rs.coroot_coweight_coords(s)) for s in rs.simple]
        if self.kind == "coweight":
            return [tuple(Fraction(int(i == j)) for j in range(r)) for i in range(r)]
        if self.kind == "custom":
            for g in self.generators:
                if len(g) != r + z:
                    raise ValueError(f"custom generator {g} should have {r} entries")
            return list(self.generators)
        if self.kind == "with_center":
            base = self.base.raw_generators(rs)
            bz = self.base.central_rank()
            pad = [g + (Fraction(0),) * self.central for g in base]
            for c in range(self.central):
                v = [Fraction(0)] * (r + z)
                v[r + bz + c] = Fraction(1)
                pad.append(tuple(v))
            return pad
        if self.kind == "gl":
            n = self.central
            if rs.type.components != (("A", n - 1),):
                raise ValueError(f"gl{n} lattice needs root system A{n - 1}")
            out = []
            for k in range(n):
                v = [Fraction(0)] * n
                # alpha_j = e_j - e_{j+1}
                for j in range(n - 1):
                    v[j] = Fraction(int(j == k) - int(j + 1 == k))
                v[n - 1] = Fraction(1, n)
                out.append(tuple(v))
            return out
        raise ValueError(f"unknown lattice kind {self.kind!r}")


def _rational_inverse(M: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(M)
    A = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c]), None)
        if p is None:
            raise ValueError("singular matrix")
        A[c], A[p] = A[p], A[c]
        pv = A[c][c]
        A[c] = [x / pv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [row[n:] for row in A]


def lattice_basis(rs: RootSystem, lat: LatticeChoice) -> list[tuple[Fraction, ...]]:
    """A basis of the Cartan lattice, after checking admissibility."""
    gens = lat.raw_generators(rs)
    r = rs.rank
    dim = r + lat.central_rank()
    for g in gens:
        if len(g) != dim:
            raise ValueError("lattice generator has the wrong length")
        bad = [x for x in g[:r] if x.denominator != 1]
        if bad:
            raise ValueError(f"lattice not contained in P^vee + z: generator {tuple(map(str, g))} is not integral on the roots")
    den = 1
    for g in gens:
        for x in g:
            den = den * x.denominator // math.gcd(den, x.denominator)
    M = IntMatrix([[int(x * den) for x in g] for g in gens], dim)
    if len(gens) == dim and M.det() != 0:
        # independent generators (simple coroots, E_kk for gl_n) are kept as the basis
        basis = [tuple(g) for g in gens]
    else:
        H, _ = hnf(M)
        basis = [tuple(Fraction(x, den) for x in row) for row in H.rows if any(row)]
    if len(basis) != dim:
        raise ValueError(f"lattice has rank {len(basis)}, expected {dim}")
    inv = _rational_inverse([list(col) for col in zip(*basis)])
    for s in rs.simple:
        hc = list(rs.coroot_coweight_coords(s)) + [0] * (dim - r)
        coords = [sum(row[t] * hc[t] for t in range(dim)) for row in inv]
        if any(c.denominator != 1 for c in coords):
            bad = max(c.denominator for c in coords)
            raise ValueError(f"lattice does not contain Q^vee: H_{rs.label(s)} has denominator {bad}")
    return basis


# -- structure constants ------------------------------------------------------------


def _standard_constants(rs: RootSystem) -> dict[tuple[int, int], int]:
    """N_{ab} for the standard basis (extraspecial pairs positive)."""
    npos = rs.n_positive
    norm = [rs.norm(i) for i in range(len(rs))]
    pos_table: dict[tuple[int, int], int] = {}

    def N(a: int, b: int) -> int:
        s = rs.add(a, b)
        if s is None:
            return 0
        pa, pb = a < npos, b < npos
        if pa and pb:
            return pos_table[(a, b)] if (a, b) in pos_table else -pos_table[(b, a)]
        if not pa and not pb:
            return -N(rs.neg(a), rs.neg(b))
        c = rs.neg(s)
        pc = c < npos
        # a + b + c = 0 and N_ab/(c,c) = N_bc/(a,a) = N_ca/(b,b)
        if pc == pa:
            v = Fraction(norm[c], norm[b]) * N(c, a)
        else:
            v = Fraction(norm[c], norm[a]) * N(b, c)
        if v.denominator != 1:
            raise AssertionError("non-integral structure constant")
        return int(v)

    for xi in range(npos):
        pairs = [(a, rs.add(xi, rs.neg(a))) for a in range(npos)]
        pairs = [(a, b) for a, b in pairs if b is not None and b < npos and a < b]
        if not pairs:
            continue
        a0, b0 = pairs[0]  # a0 minimal in the total order: extraspecial
        p = root_string(rs, a0, b0).p
        pos_table[(a0, b0)] = p + 1
        for g, d in pairs[1:]:
            t1 = Fraction(N(b0, rs.neg(g)) * N(a0, rs.neg(d)), _norm_of_sum(rs, b0, rs.neg(g)))
            t2 = Fraction(N(rs.neg(g), a0) * N(b0, rs.neg(d)), _norm_of_sum(rs, a0, rs.neg(g)))
            v = Fraction(norm[xi], pos_table[(a0, b0)]) * (t1 + t2)
            if v.denominator != 1:
                raise AssertionError("non-integral structure constant")
            pos_table[(g, d)] = int(v)

    out = {}
    for a in range(len(rs)):
        for b in range(len(rs)):
            if rs.add(a, b) is not None:
                out[(a, b)] = N(a, b)
    return out


def _norm_of_sum(rs: RootSystem, a: int, b: int) -> int:
    s = rs.add(a, b)
    return rs.norm(s) if s is not None else 1


@dataclass(frozen=True, eq=False)
class ChevalleyAlgebra:
    """A Chevalley order with basis ``(h_1..h_k, X_a for a in Phi)``.

    ``alpha_values[a]`` lists ``a(h_i)`` for the lattice basis; ``H[a]`` is
    ``H_a`` in the lattice basis; ``N[(a, b)]`` is the structure constant of
    the ``X`` system for every pair with ``a + b`` a root.
    """

    rs: RootSystem
    lattice: LatticeChoice
    cartan_basis: tuple[tuple[Fraction, ...], ...]
    alpha_values: tuple[tuple[int, ...], ...]
    H: tuple[dict, ...]
    N: dict
    data: LieAlgebraData

    @property
    def cartan_rank(self) -> int:
        return len(self.cartan_basis)

    @property
    def dim(self) -> int:
        return self.data.dim

    def x(self, a: int) -> int:
        """Basis index of X_a."""
        return self.cartan_rank + a

    def root_of(self, idx: int) -> int | None:
        k = idx - self.cartan_rank
        return k if k >= 0 else None

    def n(self, a: int, b: int) -> int:
        """N_{ab}, zero when a + b is not a root."""
        return self.N.get((a, b), 0)

    def root_value(self, a: int, h: Mapping[int, Fraction]) -> Fraction:
        """a(h) for h in the Cartan part (basis coordinates)."""
        vals = self.alpha_values[a]
        return sum((c * vals[i] for i, c in h.items()), Fraction(0))

    def coroot_to_cartan(self, coeffs: Sequence[Fraction]) -> Vec:
        """sum_i c_i H_{alpha_i} in basis coordinates."""
        out: dict[int, Fraction] = {}
        for c, s in zip(coeffs, self.rs.simple):
            if c:
                out = vec_add(out, self.H[s], c)
        return out

    def kernel_lattice(self, a: int) -> list[Vec]:
        """Z-basis of ker(a) intersected with the Cartan lattice."""
        from .exactlat import kernel_basis

        K = kernel_basis(IntMatrix([list(self.alpha_values[a])], self.cartan_rank))
        return [{i: Fraction(v) for i, v in enumerate(col) if v} for col in K.columns()]

    @property
    def name(self) -> str:
        return self.data.name


def _root_label(rs: RootSystem, a: int) -> str:
    return "X" + rs.label(a).replace("(", "[").replace(")", "]")


def build_chevalley(rs: RootSystem | RootSystemType | str, lat: LatticeChoice | None = None) -> ChevalleyAlgebra:
    """The Chevalley order on ``rs`` with Cartan lattice ``lat`` (default coroot)."""
    if not isinstance(rs, RootSystem):
        rs = build(rs)
    lat = lat or LatticeChoice.coroot()
    basis = lattice_basis(rs, lat)
    k = len(basis)
    r = rs.rank
    inv = _rational_inverse([list(col) for col in zip(*basis)])

    alpha_values = []
    for a in range(len(rs)):
        m = rs.mcoeffs[a]
        vals = []
        for b in basis:
            v = sum(mi * bi for mi, bi in zip(m, b[:r]))
            if v.denominator != 1:
                raise AssertionError("lattice basis not integral on roots")
            vals.append(int(v))
        alpha_values.append(tuple(vals))

    H = []
    for a in range(len(rs)):
        hc = list(rs.coroot_coweight_coords(a)) + [0] * (k - r)
        coords = [sum(row[t] * hc[t] for t in range(k)) for row in inv]
        if any(c.denominator != 1 for c in coords):
            raise AssertionError("coroot not in the lattice")
        H.append({i: c for i, c in enumerate(coords) if c})

    std = _standard_constants(rs)
    npos = rs.n_positive
    eps = [1 if a < npos else -1 for a in range(len(rs))]
    N = {(a, b): eps[a] * eps[b] * eps[rs.add(a, b)] * v for (a, b), v in std.items()}

    consts = []
    for i in range(k):
        for a in range(len(rs)):
            if alpha_values[a][i]:
                consts.append((i, k + a, k + a, Fraction(alpha_values[a][i])))
    for a in range(len(rs)):
        for b in range(a + 1, len(rs)):
            if b == rs.neg(a):
                for i, c in H[a].items():
                    consts.append((k + a, k + b, i, -c))
            elif (a, b) in N:
                consts.append((k + a, k + b, k + rs.add(a, b), Fraction(N[(a, b)])))

    labels = tuple(f"h{i + 1}" for i in range(k)) + tuple(_root_label(rs, a) for a in range(len(rs)))
    name = f"{rs.type}/{lat}"
    data = LieAlgebraData(name, labels, tuple(consts), (("origin", f"chevalley {rs.type} {lat}"),))
    return ChevalleyAlgebra(rs, lat, tuple(basis), tuple(alpha_values), tuple(H), N, data)


def nilradical(g: ChevalleyAlgebra) -> LieAlgebraData:
    """The span of the positive root vectors with inherited constants."""
    rs = g.rs
    npos = rs.n_positive
    consts = []
    for a in range(npos):
        for b in range(a + 1, npos):
            s = rs.add(a, b)
            if s is not None:
                consts.append((a, b, s, Fraction(g.N[(a, b)])))
    labels = tuple(_root_label(rs, a) for a in range(npos))
    return LieAlgebraData(f"n({rs.type})", labels, tuple(consts), (("origin", f"nilradical {rs.type}"),))


def validate_chevalley(g: ChevalleyAlgebra) -> ValidationReport:
    """Jacobi plus the Chevalley-system identities.

    Checks ``[h, X_a] = a(h) X_a``, ``[X_a, X_-a] = -H_a``, ``a(H_a) = 2``,
    ``|N_ab| = p + 1``, ``N_ab = -N_ba = N_{-a,-b}``, identity a) on lengths
    and identity c) for pairs with ``a - b`` a root.
    """
    rep = validate(g.data)
    bad = list(rep.violations)
    rs = g.rs
    d = g.data
    k = g.cartan_rank
    for a in range(len(rs)):
        if g.root_value(a, g.H[a]) != 2:
            bad.append(f"{rs.label(a)}(H) != 2")
        for i in range(k):
            if d.bracket_basis(i, g.x(a)) != ({g.x(a): Fraction(g.alpha_values[a][i])} if g.alpha_values[a][i] else {}):
                bad.append(f"[h{i + 1}, X{rs.label(a)}] wrong")
        if d.bracket_basis(g.x(a), g.x(rs.neg(a))) != vec_scale(g.H[a], -1):
            bad.append(f"[X{rs.label(a)}, X_-a] != -H")
    for (a, b), n in g.N.items():
        p = root_string(rs, a, b).p
        if abs(n) != p + 1:
            bad.append(f"|N{rs.label(a)}{rs.label(b)}| = {abs(n)} but p + 1 = {p + 1}")
        if g.N[(b, a)] != -n:
            bad.append(f"N not antisymmetric at {rs.label(a)}, {rs.label(b)}")
        if g.N[(rs.neg(a), rs.neg(b))] != n:
            bad.append(f"N_-a,-b != N_ab at {rs.label(a)}, {rs.label(b)}")
        gam = rs.add(a, b)
        lhs = Fraction(rs.norm(a), rs.norm(gam))
        if lhs != Fraction(-g.n(rs.neg(b), gam), g.n(b, a)):
            bad.append(f"identity a) fails at {rs.label(a)}, {rs.label(b)}")
        if rs.add(a, rs.neg(b)) is not None:
            al, be = a, b
            bma, amb = rs.add(be, rs.neg(al)), rs.add(al, rs.neg(be))
            left = Fraction(g.n(be, rs.neg(al)) * g.n(bma, rs.neg(be)), g.n(al, be) * g.n(rs.neg(be), gam))
            right = Fraction(g.n(al, rs.neg(be)) * g.n(amb, rs.neg(al)), g.n(be, al) * g.n(rs.neg(al), gam))
            if left != right:
                bad.append(f"identity c) fails at {rs.label(a)}, {rs.label(b)}")
    return ValidationReport(not bad, rep.checked_triples, bad)
