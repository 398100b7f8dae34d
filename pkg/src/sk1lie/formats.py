"""Plain-text Lie algebra files.

::

    # comments start with '#'
    name A2/coroot(p^1)
    rank 8
    basis h1 h2 X[1,0] X[0,1] ...
    prime 5
    origin congruence A2 coroot 1
    1 3 3 10 1          # i j k numerator denominator, 1-based, i < j

``origin`` is optional and tells ``sk1-check`` how the lattice was made:
``congruence <type> <lattice> <n>`` or ``two-step <v_rank> <n>``.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .chevalley import LieAlgebraData, validate

__all__ = ["FormatError", "dumps", "loads", "read", "write"]

_KEYS = ("name", "rank", "basis", "prime", "origin")


class FormatError(ValueError):
    pass


def dumps(data: LieAlgebraData) -> str:
    lines = [f"name {data.name}", f"rank {data.dim}", "basis " + " ".join(data.labels)]
    for key, value in data.meta:
        lines.append(f"{key} {value}")
    for i, j, k, c in data.constants:
        lines.append(f"{i + 1} {j + 1} {k + 1} {c.numerator} {c.denominator}")
    return "\n".join(lines) + "\n"


def loads(text: str, check: bool = True) -> LieAlgebraData:
    fields: dict[str, str] = {}
    meta: list[tuple[str, str]] = []
    consts = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head in _KEYS:
            if head in fields:
                raise FormatError(f"line {lineno}: duplicate field {head!r}")
            fields[head] = rest.strip()
            if head in ("prime", "origin"):
                meta.append((head, rest.strip()))
            continue
        parts = line.split()
        if len(parts) != 5:
            raise FormatError(f"line {lineno}: expected 'i j k numerator denominator', got {raw!r}")
        try:
            i, j, k, num, den = (int(x) for x in parts)
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer entry in {raw!r}") from None
        if den <= 0:
            raise FormatError(f"line {lineno}: denominator must be positive")
        if not i < j:
            raise FormatError(f"line {lineno}: need i < j")
        consts.append((i - 1, j - 1, k - 1, Fraction(num, den)))
    for key in ("rank",):
        if key not in fields:
            raise FormatError(f"missing field {key!r}")
    try:
        d = int(fields["rank"])
    except ValueError:
        raise FormatError("rank must be an integer") from None
    labels = tuple(fields.get("basis", "").split()) or tuple(f"b{i + 1}" for i in range(d))
    if len(labels) != d:
        raise FormatError(f"basis has {len(labels)} labels but rank is {d}")
    try:
        data = LieAlgebraData(fields.get("name", "unnamed"), labels, tuple(consts), tuple(meta))
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    if check:
        rep = validate(data)
        if not rep.ok:
            raise FormatError("Jacobi identity fails: " + "; ".join(rep.violations[:3]))
    return data


def read(path: str | Path, check: bool = True) -> LieAlgebraData:
    return loads(Path(path).read_text(), check)


def write(data: LieAlgebraData, path: str | Path) -> None:
    Path(path).write_text(dumps(data))
