"""Command line front end: ``sk1lie <command> ...``.

Exit codes: 0 everything as expected, 1 a genuine finding (proper
submodule, nonvanishing), 2 usage or input error, 3 undecided, 4 internal
soundness violation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__
from .chevalley import LatticeChoice, build_chevalley, nilradical, validate_chevalley
from .exactlat import SizeGuardError, SLocalRing
from .formats import FormatError, dumps, read
from .kernelgen import SoundnessError, certify, generators_nilpotent, generators_reductive
from .rootsys import (
    RootSystemType,
    build,
    check_decomp_lemma,
    check_directfactor,
    irreducible_types,
    length_ratio,
    type_a_pair_facts,
)
from .sk1 import (
    CongruenceOrigin,
    TwoStepNilpotentPresentation,
    UniformLieLattice,
    build_congruence_algebra,
    build_counterexample,
    factorial_valuation_bound,
    h2_torsion_dim,
    relations_table_presentation,
    sk1_check,
)

EXIT_OK, EXIT_FINDING, EXIT_USAGE, EXIT_UNKNOWN, EXIT_SOUNDNESS = 0, 1, 2, 3, 4

_STATUS_EXIT = {"ok": EXIT_OK, "finding": EXIT_FINDING, "unknown": EXIT_UNKNOWN, "error": EXIT_SOUNDNESS}
_EXIT_RANK = [EXIT_OK, EXIT_FINDING, EXIT_UNKNOWN, EXIT_SOUNDNESS]

SCHEMA_PATH = Path(__file__).with_name("report_schema.json")


class UsageError(Exception):
    pass


# -- parsing helpers ------------------------------------------------------------------


def _parse_types(text: str, allow_large: bool) -> list[RootSystemType]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            t = RootSystemType.parse(part)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if t.is_exceptional_large() and not allow_large:
            raise UsageError(f"{t} is large (memory and time heavy); pass --allow-large to run it")
        out.append(t)
    if not out:
        raise UsageError("no root system type given")
    return out


def _parse_ring(text: str) -> SLocalRing:
    try:
        return SLocalRing.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _parse_lattice(text: str) -> LatticeChoice:
    try:
        return LatticeChoice.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- tasks (top level so they can run in worker processes) -------------------------------


def _task_roots(t: str) -> dict:
    rs = build(t)
    norms = sorted({rs.norm(i) for i in range(len(rs))})
    ratios = sorted({length_ratio(rs, b, a) for a in range(len(rs)) for b in range(len(rs))})
    g = build_chevalley(rs)
    ntab = []
    for (a, b), n in sorted(g.N.items()):
        if rs.is_positive(a) and rs.is_positive(b) and a < b:
            ntab.append([rs.label(a), rs.label(b), n])
    return {
        "key": str(rs.type),
        "status": "ok",
        "type": str(rs.type),
        "aliases": rs.type.aliases(),
        "rank": rs.rank,
        "n_roots": len(rs),
        "n_positive": rs.n_positive,
        "roots_by_squared_length": {str(n): sum(1 for i in range(len(rs)) if rs.norm(i) == n) for n in norms},
        "cartan_matrix": rs.cartan_matrix().tolist(),
        "positive_roots": [[list(rs.mcoeffs[i]), rs.norm(i)] for i in rs.positive],
        "length_ratios": [str(r) for r in ratios],
        "abs_N_values": sorted({abs(n) for n in g.N.values()}),
        "N_positive": ntab,
    }


def _task_reductive(t: str, lat: str, ring: str) -> dict:
    t0 = time.perf_counter()
    R = SLocalRing.parse(ring)
    key = f"{t}/{lat}/{ring}"
    try:
        g = build_chevalley(RootSystemType.parse(t), LatticeChoice.parse(lat))
        val = validate_chevalley(g)
        certs = generators_reductive(g, R)
        rep = certify(g.data, certs, R)
    except SoundnessError as exc:
        return {"key": key, "status": "error", "error": str(exc)}
    out = rep.to_dict()
    out.update(
        key=key,
        type=t,
        lattice=lat,
        status="ok" if rep.equal and val.ok else ("error" if not val.ok else "finding"),
        validation={"ok": val.ok, "checked_triples": val.checked_triples, "violations": val.violations},
        factors_only_2_3=all(_only_primes(f, (2, 3)) for f in rep.factors if f != 0),
        seconds=round(time.perf_counter() - t0, 3),
    )
    if g.cartan_rank == g.rs.rank:
        out["h2_torsion_dim"] = h2_torsion_dim(g.dim)
    return out


def _task_nilpotent(t: str, ring: str) -> dict:
    t0 = time.perf_counter()
    R = SLocalRing.parse(ring)
    key = f"{t}/{ring}"
    try:
        g = build_chevalley(RootSystemType.parse(t))
        n = nilradical(g)
        rep = certify(n, generators_nilpotent(n, g, R), R)
    except SoundnessError as exc:
        return {"key": key, "status": "error", "error": str(exc)}
    out = rep.to_dict()
    out.update(
        key=key,
        type=t,
        status="ok" if rep.equal else "finding",
        all_factors_one=all(f == 1 for f in rep.factors),
        seconds=round(time.perf_counter() - t0, 3),
    )
    return out


def _only_primes(f, primes) -> bool:
    f = Fraction(f)
    for x in (f.numerator, f.denominator):
        x = abs(x)
        for p in primes:
            while x % p == 0:
                x //= p
        if x != 1:
            return False
    return True


def _verdict_result(key: str, v) -> dict:
    status = {"Vanishes": "ok", "NonVanishing": "finding", "Unknown": "unknown"}[v.outcome]
    out = {"key": key, "status": status}
    out.update(v.to_dict())
    return out


def _run_tasks(fn, args_list, jobs: int) -> list[dict]:
    if jobs > 1 and len(args_list) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(fn, *zip(*args_list)))
    else:
        results = [fn(*a) for a in args_list]
    return sorted(results, key=lambda r: r["key"])


# -- commands -----------------------------------------------------------------------


def cmd_roots(args) -> list[dict]:
    types = _parse_types(args.type, args.allow_large)
    return _run_tasks(_task_roots, [(str(t),) for t in types], args.jobs)


def cmd_verify_reductive(args) -> list[dict]:
    types = _parse_types(args.type, args.allow_large)
    _parse_ring(args.ring)
    lats = [x.strip() for x in args.lattice.split(",") if x.strip()]
    for lat in lats:
        _parse_lattice(lat)
    return _run_tasks(_task_reductive, [(str(t), lat, args.ring) for t in types for lat in lats], args.jobs)


def cmd_verify_nilpotent(args) -> list[dict]:
    types = _parse_types(args.type, args.allow_large)
    _parse_ring(args.ring)
    return _run_tasks(_task_nilpotent, [(str(t), args.ring) for t in types], args.jobs)


def _prime_arg(p: int) -> None:
    try:
        from .sk1 import _check_prime

        _check_prime(p)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_counterexample(args) -> list[dict]:
    _prime_arg(args.p)
    latt, pres, table = build_counterexample(args.p)
    if args.from_table:
        pres = relations_table_presentation(args.p)
        latt = UniformLieLattice.create(pres.algebra(args.p, "relations-table"), args.p, presentation=pres)
    v = sk1_check(latt)
    out = _verdict_result(f"counterexample/p={args.p}" + ("/table" if args.from_table else ""), v)
    out["relations_table"] = table.splitlines()
    out["dim"] = latt.data.dim
    return [out]


def _lattice_from_file(path: str) -> UniformLieLattice:
    try:
        data = read(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except FormatError as exc:
        raise UsageError(f"{path}: {exc}") from None
    meta = data.meta_dict()
    if "prime" not in meta:
        raise UsageError(f"{path}: a 'prime' line is required for sk1-check")
    p = int(meta["prime"])
    _prime_arg(p)
    origin = presentation = None
    words = meta.get("origin", "").split()
    try:
        if words[:1] == ["congruence"] and len(words) == 4:
            origin = CongruenceOrigin(words[1], words[2], int(words[3]))
        elif words[:1] == ["two-step"] and len(words) == 3:
            presentation = TwoStepNilpotentPresentation.from_algebra(data, int(words[1]), p, int(words[2]))
    except ValueError as exc:
        raise UsageError(f"{path}: bad origin line: {exc}") from None
    if not data.is_integral():
        raise UsageError(f"{path}: structure constants must be integers")
    return UniformLieLattice.create(data, p, origin, presentation)


def cmd_sk1_check(args) -> list[dict]:
    latt = _lattice_from_file(args.input)
    if not latt.powerful:
        raise UsageError(f"{args.input}: lattice is not powerful for p = {latt.p}")
    return [_verdict_result(f"sk1-check/{Path(args.input).name}", sk1_check(latt))]


def cmd_lemmas(args) -> list[dict]:
    out = []
    if args.lemma == "decomp":
        for t in ("A1", "A2", "B2", "G2", "A3", "B3", "C3"):
            t0 = time.perf_counter()
            rep = check_decomp_lemma(t)
            out.append(
                {
                    "key": f"decomp/{t}",
                    "status": "ok" if rep.ok else "finding",
                    "tuples": rep.tuple_count,
                    "violations": len(rep.violations),
                    "highest_root_decompositions": {
                        k: [[list(a), list(b)] for a, b in v] for k, v in sorted(rep.highest.items())
                    },
                    "seconds": round(time.perf_counter() - t0, 3),
                }
            )
    elif args.lemma == "directfactor":
        for t in irreducible_types(args.max_rank):
            rep = check_directfactor(t)
            out.append(
                {
                    "key": f"directfactor/{rep.type}",
                    "status": "ok" if rep.ok else "finding",
                    "root_lattice_divisors": rep.root_lattice_divisors,
                    "pairing_divisors": rep.pairing_divisors,
                    "pairing_cokernels": [list(c) for c in rep.pairing_cokernels],
                }
            )
        for l in range(1, args.max_type_a + 1):
            facts = type_a_pair_facts(l)
            out.append(
                {"key": f"directfactor/A{l}-facts", "status": "ok" if all(facts.values()) else "finding", "facts": facts}
            )
    elif args.lemma == "factorial":
        for p in args.p:
            try:
                rep = factorial_valuation_bound(p, args.j_max)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            out.append(
                {
                    "key": f"factorial/p={p}",
                    "status": "ok" if rep.ok else "finding",
                    "j_max": rep.j_max,
                    "checked": rep.checked,
                    "violations": [list(v) for v in rep.violations],
                }
            )
    return out


def cmd_export(args) -> list[dict]:
    _prime_arg(args.p)
    if args.kind == "congruence":
        if not args.type:
            raise UsageError("export congruence needs --type")
        (t,) = _parse_types(args.type, args.allow_large)
        data = build_congruence_algebra(t, _parse_lattice(args.lattice), args.p, args.n).data
    elif args.kind == "counterexample":
        data = build_counterexample(args.p)[0].data
    else:
        pres = relations_table_presentation(args.p)
        data = pres.algebra(args.p, "relations-table")
    text = dumps(data)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return [{"key": f"export/{args.kind}", "status": "ok", "dim": data.dim, "path": args.out or "-"}]


# -- output ---------------------------------------------------------------------------


def _exit_code(results: list[dict]) -> int:
    code = EXIT_OK
    for r in results:
        c = _STATUS_EXIT[r["status"]]
        if _EXIT_RANK.index(c) > _EXIT_RANK.index(code):
            code = c
    return code


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    raise TypeError(f"not serializable: {type(x).__name__}")


def _format_text(doc: dict) -> str:
    lines = [f"sk1lie {doc['version']}  {doc['command']}"]
    for r in doc["results"]:
        head = f"[{r['status']}] {r['key']}"
        if "verdict" in r:
            head += (
                f": {r['verdict']}  kernel rank {r['kernel_rank']}, span rank {r['span_rank']}, "
                f"factors {r['invariant_factors']}"
            )
            if r.get("nonunit_factors"):
                head += f", non-units {r['nonunit_factors']}"
        elif "outcome" in r:
            head += f": {r['outcome']} via {r['path']}"
            if r.get("reason"):
                head += f" ({r['reason']})"
        lines.append(head)
        if r.get("witness"):
            lines.append(f"    witness: {r['witness']['text']}")
        if r.get("report") and isinstance(r["report"], dict):
            rep = r["report"]
            lines.append(
                f"    kernel rank {rep['kernel_rank']}, span rank {rep['span_rank']}, deficit {rep['rank_deficit']}"
            )
        if "n_roots" in r:
            lines.append(
                f"    {r['n_roots']} roots ({r['n_positive']} positive), squared lengths {r['roots_by_squared_length']}, "
                f"length ratios {{{', '.join(r['length_ratios'])}}}, |N| in {r['abs_N_values']}"
            )
        if "tuples" in r:
            lines.append(f"    {r['tuples']} tuples, {r['violations']} violations")
        if "pairing_divisors" in r:
            lines.append(f"    Q-divisors {r['root_lattice_divisors']}, pairing divisors {r['pairing_divisors']}")
        if "error" in r:
            lines.append(f"    {r['error']}")
    lines.append(f"exit code {doc['exit_code']}")
    return "\n".join(lines) + "\n"


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--report", metavar="PATH", help="also write the JSON report to PATH")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for batch runs")
    common.add_argument("--allow-large", action="store_true", help="permit E6, E7, E8")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="sk1lie", description="Exact verification of commuting-wedge spans in Lie lattices")
    parser.add_argument("--version", action="version", version=f"sk1lie {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("roots", parents=[common], help="root system census and structure constants")
    p.add_argument("--type", required=True)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("verify-reductive", parents=[common], help="kernel vs commuting wedges for a Chevalley order")
    p.add_argument("--type", required=True, help="comma separated, e.g. A2,B3")
    p.add_argument("--lattice", default="coroot", help="coroot, coweight, coroot+zN, glN (comma separated)")
    p.add_argument("--ring", default="inv:2,3", help="inv:2,3 or local:5")
    p.set_defaults(func=cmd_verify_reductive)

    p = sub.add_parser("verify-nilpotent", parents=[common], help="same for the positive nilradical")
    p.add_argument("--type", required=True)
    p.add_argument("--ring", default="inv:2,3")
    p.set_defaults(func=cmd_verify_nilpotent)

    p = sub.add_parser("counterexample", parents=[common], help="the 9-dimensional lattice with nonvanishing SK1")
    p.add_argument("-p", type=int, default=5)
    p.add_argument("--from-table", action="store_true", help="use the generators-and-relations table literally")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("sk1-check", parents=[common], help="decide the criterion for a lattice file")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_sk1_check)

    p = sub.add_parser("lemmas", parents=[common], help="exhaustive root-system lemma checks")
    p.add_argument("lemma", choices=("decomp", "directfactor", "factorial"))
    p.add_argument("--max-rank", type=int, default=4)
    p.add_argument("--max-type-a", type=int, default=6)
    p.add_argument("-p", type=int, action="append", help="prime(s) for the factorial bound")
    p.add_argument("--j-max", type=int, default=200)
    p.set_defaults(func=cmd_lemmas)

    p = sub.add_parser("export", parents=[common], help="write an algebra file")
    p.add_argument("kind", choices=("congruence", "counterexample", "table"))
    p.add_argument("--type")
    p.add_argument("--lattice", default="coroot")
    p.add_argument("-p", type=int, default=5)
    p.add_argument("-n", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "lemma", None) == "factorial" and not args.p:
        args.p = [5, 7, 11]
    if args.jobs < 1:
        print("sk1lie: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        results = args.func(args)
    except UsageError as exc:
        print(f"sk1lie: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SizeGuardError as exc:
        print(f"sk1lie: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SoundnessError as exc:
        print(f"sk1lie: soundness violation: {exc}", file=sys.stderr)
        return EXIT_SOUNDNESS
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "format", "report", "verbose")}
    doc = {
        "tool": "sk1lie",
        "version": __version__,
        "command": args.command,
        "config": config,
        "results": results,
        "exit_code": _exit_code(results),
    }
    payload = json.dumps(doc, sort_keys=True, indent=2, default=_jsonable) + "\n"
    if args.report:
        Path(args.report).write_text(payload)
    if args.command != "export" or args.out:
        sys.stdout.write(payload if args.format == "json" else _format_text(doc))
    return doc["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
