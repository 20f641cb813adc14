"""Command-line front end.

Verbs: analyze | capability | pair | epicenter | multiplier | verify.
Exit codes: 0 ok, 1 verification failures, 2 parse error, 3 undetermined
verdict, 4 engine/order cap exceeded.
"""

from __future__ import annotations

import argparse
import itertools
import json
import re
import sys
import time
from dataclasses import dataclass
from math import gcd, lcm

from . import __version__
from .abelian import (AbelianGroupIF, VarietyDescriptor, abelian_groups_up_to,
                      abelian_multiplier, baer_capable, epicenter_strides,
                      polynilpotent_capable)
from .capability import (PairOfGroups, epicenter, is_capable, is_capable_pair,
                         product_epicenter_check, theorem22_zero_map_check,
                         varietal_capability)
from .errors import (CapkitError, EngineUnavailableError, GroupSpecError,
                     OrderCapExceeded)
from .groups import (FiniteGroup, construct_group, direct_product,
                     make_subgroup, subgroup_closure)
from .homology import schur_multiplier

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_PARSE = 2
EXIT_UNDETERMINED = 3
EXIT_CAP = 4

_SUITES = ("products", "pairs", "engines", "classifier")


@dataclass
class Command:
    verb: str
    subject: str = ""
    subgroup: str = ""
    variety: str = "abelian"
    engine: str = "auto"
    max_order: int | None = None
    force: bool = False
    fmt: str = "text"
    output: str | None = None
    timing: bool = False
    suite: str = ""


def _build_parser():
    p = argparse.ArgumentParser(
        prog="capkit",
        description="capability / pair-capability analysis of small finite "
                    "groups")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, subject=True):
        if subject:
            sp.add_argument("subject", help="group spec, e.g. 'cyclic:6' or "
                            "'dihedral:4 x cyclic:3'")
        sp.add_argument("--engine", choices=["auto", "bar", "abelian"],
                        default="auto")
        sp.add_argument("--max-order", type=int, default=None,
                        help="override the engine order cap")
        sp.add_argument("--force", action="store_true",
                        help="raise the homology cap for this run")
        sp.add_argument("--format", dest="fmt", choices=["text", "json"],
                        default="text")
        sp.add_argument("--output", default=None, help="write report to file")
        sp.add_argument("--timing", action="store_true",
                        help="include wall times in JSON (off by default so "
                             "output is byte-deterministic)")

    for verb in ("analyze", "capability", "epicenter", "multiplier"):
        sp = sub.add_parser(verb)
        common(sp)
        sp.add_argument("--variety", default="abelian",
                        help="abelian | N:<c> | PN:<c1,c2,...>")

    sp = sub.add_parser("pair")
    common(sp)
    sp.add_argument("--subgroup", required=True,
                    help="normal subgroup generators, e.g. 'gens:(2,0);(0,2)'"
                         " in product coordinates")

    sp = sub.add_parser("verify")
    sp.add_argument("suite", choices=_SUITES)
    common(sp, subject=False)

    return p


def parse_command(argv) -> Command:
    ns = _build_parser().parse_args(list(argv))
    cmd = Command(verb=ns.verb,
                  subject=getattr(ns, "subject", ""),
                  subgroup=getattr(ns, "subgroup", "") or "",
                  variety=getattr(ns, "variety", "abelian"),
                  engine=ns.engine,
                  max_order=ns.max_order,
                  force=ns.force,
                  fmt=ns.fmt,
                  output=ns.output,
                  timing=ns.timing,
                  suite=getattr(ns, "suite", ""))
    # validate the specs up front so malformed input exits 2, not mid-run
    if cmd.subject:
        _parse_product(cmd.subject, cmd.max_order)
    if cmd.subgroup:
        _parse_subgroup_gens(cmd.subgroup)
    VarietyDescriptor.parse(cmd.variety)
    return cmd


# ---------------------------------------------------------------------------
# spec parsing helpers


def _parse_product(spec: str, max_order=None):
    """(product group, factor list) for a product spec."""
    parts = [p.strip() for p in spec.split(" x ")]
    factors = [construct_group(p, max_order) for p in parts]
    g = factors[0]
    for h in factors[1:]:
        g, _, _ = direct_product(g, h, max_order)
    return g, factors


_GENS_RE = re.compile(r"\(([^()]*)\)")


def _parse_subgroup_gens(text: str):
    """Generator tuples from 'gens:(a,b,...);(c,d,...)'."""
    t = text.strip()
    if not t.startswith("gens:"):
        raise GroupSpecError("subgroup spec must start with 'gens:'")
    body = t[len("gens:"):]
    tuples = _GENS_RE.findall(body)
    if not tuples or _GENS_RE.sub("", body).strip("; "):
        raise GroupSpecError(f"malformed subgroup spec {text!r}")
    out = []
    for tup in tuples:
        try:
            out.append(tuple(int(x) for x in tup.split(",")))
        except ValueError as exc:
            raise GroupSpecError(f"bad generator tuple ({tup})") from exc
    return out

def _resolve_subgroup(g: FiniteGroup, factors, text: str):
    gens = _parse_subgroup_gens(text)
    sizes = [f.order for f in factors]
    idxs = []
    for tup in gens:
        if len(tup) != len(sizes):
            raise GroupSpecError(
                f"generator {tup} has {len(tup)} coordinates; the spec has "
                f"{len(sizes)} factors")
        i = 0
        for c, n in zip(tup, sizes):
            if not 0 <= c < n:
                raise GroupSpecError(
                    f"coordinate {c} out of range for factor of order {n}")
            i = i * n + c
        idxs.append(i)
    return subgroup_closure(g, idxs)


# ---------------------------------------------------------------------------
# report assembly


def _subject_entry(cmd, spec, order, engine, variety, verdict, criterion,
                   epicenter_fs=None, epicenter_gens=None, ms=0.0,
                   extra=None):
    entry = {
        "spec": spec,
        "order": order,
        "engine": engine,
        "variety": variety,
        "epicenter": None if epicenter_fs is None else {
            "invariant_factors": list(epicenter_fs),
            "generators": list(epicenter_gens or []),
        },
        "verdict": verdict,
        "criterion": criterion,
        "ms": round(ms, 3) if cmd.timing else 0,
    }
    if extra:
        entry.update(extra)
    return entry


def _document(cmd: Command, subjects, failures=0):
    return {
        "schema": "capkit/1",
        "command": cmd.verb + (f" {cmd.subject}" if cmd.subject else
                               f" {cmd.suite}" if cmd.suite else ""),
        "subjects": subjects,
        "failures": failures,
        "version": __version__,
    }


def _emit(cmd: Command, doc) -> None:
    if cmd.fmt == "json":
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    else:
        text = _format_text(doc)
    if cmd.output:
        with open(cmd.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _format_text(doc) -> str:
    rows = [("subject", "order", "engine", "variety", "verdict",
             "epicenter", "criterion")]
    for s in doc["subjects"]:
        epi = s.get("epicenter")
        epi_txt = "-" if epi is None else (str(epi["invariant_factors"]) or "[]")
        rows.append((s["spec"], str(s["order"]), s["engine"], s["variety"],
                     str(s["verdict"]), epi_txt, s["criterion"]))
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()
             for r in rows]
    if doc["failures"]:
        lines.append(f"failures: {doc['failures']}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# verb implementations


def _run_capability(cmd: Command):
    g, _ = _parse_product(cmd.subject, cmd.max_order)
    variety = VarietyDescriptor.parse(cmd.variety)
    rep = varietal_capability(g, variety, engine=cmd.engine,
                              cap=cmd.max_order, force=cmd.force,
                              subject=cmd.subject)
    entry = _subject_entry(
        cmd, cmd.subject, g.order, rep.engine, variety.label(),
        rep.verdict.status, rep.verdict.criterion,
        rep.epicenter_factors, rep.epicenter_generators, rep.wall_ms)
    code = EXIT_UNDETERMINED if rep.verdict.status == "undetermined" else EXIT_OK
    return [entry], 0, code


def _run_epicenter(cmd: Command):
    g, _ = _parse_product(cmd.subject, cmd.max_order)
    t0 = time.perf_counter()
    epi = epicenter(g, engine=cmd.engine, cap=cmd.max_order, force=cmd.force)
    ms = (time.perf_counter() - t0) * 1000.0
    from .capability import _epicenter_engine_name, _subgroup_factors
    entry = _subject_entry(
        cmd, cmd.subject, g.order, _epicenter_engine_name(g, cmd.engine),
        "abelian", "capable" if epi.is_trivial else "not_capable",
        f"epicenter order {epi.order}",
        _subgroup_factors(epi),
        [g.labels[m] for m in epi.members if m != 0], ms)
    return [entry], 0, EXIT_OK


def _run_multiplier(cmd: Command):
    g, _ = _parse_product(cmd.subject, cmd.max_order)
    t0 = time.perf_counter()
    if g.is_abelian and cmd.engine in ("auto", "abelian"):
        fs = abelian_multiplier(AbelianGroupIF.from_group(g)).invariant_factors()
        engine = "abelian"
    else:
        fs = schur_multiplier(g, cap=cmd.max_order,
                              force=cmd.force).invariant_factors()
        engine = "homology"
    ms = (time.perf_counter() - t0) * 1000.0
    entry = _subject_entry(
        cmd, cmd.subject, g.order, engine, "abelian", "computed",
        f"multiplier invariant factors {fs}", ms=ms,
        extra={"multiplier": {"invariant_factors": list(fs)}})
    return [entry], 0, EXIT_OK


def _run_pair(cmd: Command):
    g, factors = _parse_product(cmd.subject, cmd.max_order)
    n = _resolve_subgroup(g, factors, cmd.subgroup)
    p = PairOfGroups(g, n)
    rep = is_capable_pair(p, engine=cmd.engine, cap=cmd.max_order,
                          force=cmd.force, subject=cmd.subject)
    entry = _subject_entry(
        cmd, cmd.subject, g.order, rep.engine, "abelian",
        rep.verdict.status, rep.verdict.criterion,
        rep.epicenter_factors, rep.epicenter_generators, rep.wall_ms,
        extra={"subgroup": cmd.subgroup, "subgroup_order": n.order})
    code = EXIT_UNDETERMINED if rep.verdict.status == "undetermined" else EXIT_OK
    return [entry], 0, code


def _run_analyze(cmd: Command):
    entries, _, code = _run_capability(cmd)
    m_entries, _, _ = _run_multiplier(cmd)
    entries[0]["multiplier"] = m_entries[0]["multiplier"]
    return entries, 0, code


# ---------------------------------------------------------------------------
# verification sweeps


_CATALOG = (
    ("cyclic:2", 2), ("cyclic:3", 3), ("cyclic:4", 4), ("cyclic:5", 5),
    ("cyclic:2 x cyclic:2", 4), ("perm:(1 2);(1 2 3)", 6),
    ("dihedral:4", 8), ("quaternion:8", 8),
)


def _verify_products(cmd: Command):
    """Z*(A x B) subset of Z*(A) x Z*(B) over the small-group catalog."""
    limit = cmd.max_order or 24
    subjects, failures, strict = [], 0, 0
    for (sa, na), (sb, nb) in itertools.product(_CATALOG, repeat=2):
        if na * nb > limit:
            continue
        a = construct_group(sa)
        b = construct_group(sb)
        chk = product_epicenter_check(a, b, force=cmd.force)
        zero_map = theorem22_zero_map_check([a, b], force=cmd.force)
        ok = chk.inclusion_holds and (chk.equality_holds or not zero_map)
        failures += 0 if ok else 1
        strict += 1 if chk.strict else 0
        subjects.append(_subject_entry(
            cmd, f"{sa} x {sb}", na * nb, "auto", "abelian",
            "pass" if ok else "FAIL",
            f"inclusion={chk.inclusion_holds} equality={chk.equality_holds} "
            f"strict={chk.strict} coprime={chk.coprime} zero_map={zero_map}"))
    if strict == 0:
        failures += 1
        subjects.append(_subject_entry(
            cmd, "(strict witness)", 0, "auto", "abelian", "FAIL",
            "no strict-inclusion witness found"))
    return subjects, failures, EXIT_OK


def _norm_strides(strides, moduli):
    return tuple(gcd(s, m) for s, m in zip(strides, moduli))


def _verify_pairs(cmd: Command):
    """Pair-product equality for coprime abelian pairs (coordinate form)."""
    limit = cmd.max_order or 100
    groups = [fs for _, fs in abelian_groups_up_to(limit) if fs]
    subjects, failures = [], 0
    checked = 0
    for f1, f2 in itertools.combinations(groups, 2):
        o1, o2 = _prod(f1), _prod(f2)
        if gcd(o1, o2) != 1:
            continue
        checked += 1
        ok = _abelian_pair_product_ok(f1, f2)
        if not ok:
            failures += 1
            subjects.append(_subject_entry(
                cmd, f"{list(f1)} | {list(f2)}", o1 * o2, "abelian",
                "abelian", "FAIL", "pair-product equality violated"))
    subjects.append(_subject_entry(
        cmd, f"coprime abelian pairs <= {limit}", checked, "abelian",
        "abelian", "pass" if failures == 0 else "FAIL",
        f"{checked} coprime pairs checked, {failures} failures"))
    return subjects, failures, EXIT_OK


def _prod(fs):
    n = 1
    for f in fs:
        n *= f
    return n


def _abelian_pair_product_ok(f1, f2):
    """Exterior-center product equality for every diagonal choice of N_i."""
    s1 = _norm_strides(epicenter_strides(f1), f1)
    s2 = _norm_strides(epicenter_strides(f2), f2)
    merged = tuple(f1) + tuple(f2)
    sp = _norm_strides(epicenter_strides(merged), merged)
    # Z^ of the product pair restricted to N1 x N2 must match the product of
    # the factors' exterior centers; with diagonal N = {g : m_i | g_i} both
    # sides are coordinate lattices, compared via lcm with the strides.
    for m1 in itertools.product(*(_divs(n) for n in f1)):
        for m2 in itertools.product(*(_divs(n) for n in f2)):
            m = tuple(m1) + tuple(m2)
            lhs = tuple(lcm(a, b) for a, b in zip(sp, m))
            rhs = (tuple(lcm(a, b) for a, b in zip(s1, m1))
                   + tuple(lcm(a, b) for a, b in zip(s2, m2)))
            if lhs != rhs:
                return False
    return True


def _divs(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def _verify_engines(cmd: Command):
    """Bar engine vs exterior-square engine on small abelian groups."""
    limit = cmd.max_order or 16
    subjects, failures = [], 0
    for order, fs in abelian_groups_up_to(limit):
        spec = f"abelian:[{','.join(map(str, fs))}]" if fs else "cyclic:1"
        g = construct_group(spec)
        bar_m = schur_multiplier(g, force=True).invariant_factors()
        lam_m = abelian_multiplier(AbelianGroupIF(fs)).invariant_factors()
        bar_e = epicenter(g, engine="bar", force=True)
        lam_e = epicenter(g, engine="abelian")
        ok = bar_m == lam_m and bar_e.members == lam_e.members
        failures += 0 if ok else 1
        subjects.append(_subject_entry(
            cmd, spec, order, "both", "abelian", "pass" if ok else "FAIL",
            f"multiplier bar={bar_m} wedge={lam_m}; "
            f"epicenter orders bar={bar_e.order} wedge={lam_e.order}"))
    return subjects, failures, EXIT_OK


def _verify_classifier(cmd: Command):
    """Rule-table sweep: known instances plus nilpotent-class monotonicity."""
    subjects, failures = [], 0
    cases = [
        ((4, 4, 4), "PN:1,2", "capable"),
        ((4, 4), "N:3", "capable"),
        ((4,), "N:2", "not_capable"),
        ((4,), "abelian", "not_capable"),
        ((4, 2), "PN:1,1", "undetermined"),
        ((), "abelian", "capable"),
    ]
    for fs, vtxt, want in cases:
        got = polynilpotent_capable(AbelianGroupIF(fs),
                                    VarietyDescriptor.parse(vtxt)).status
        ok = got == want
        failures += 0 if ok else 1
        subjects.append(_subject_entry(
            cmd, f"{list(fs)} @ {vtxt}", _prod(fs), "classifier", vtxt,
            "pass" if ok else "FAIL", f"got {got}, want {want}"))
    # monotonicity: capable at N:c must stay capable at N:(c-1)
    mono_bad = 0
    for fs in _chains(max_k=4, max_n=12):
        a = AbelianGroupIF(fs)
        for c in range(2, 5):
            hi = polynilpotent_capable(a, VarietyDescriptor.nilpotent(c))
            lo = polynilpotent_capable(a, VarietyDescriptor.nilpotent(c - 1))
            if hi.status == "capable" and lo.status == "not_capable":
                mono_bad += 1
    failures += mono_bad
    subjects.append(_subject_entry(
        cmd, "nilpotent-class monotonicity (k<=4, n<=12)", 0, "classifier",
        "N:c", "pass" if mono_bad == 0 else "FAIL",
        f"{mono_bad} monotonicity violations"))
    return subjects, failures, EXIT_OK


def _chains(max_k, max_n):
    """Invariant-factor chains with at most max_k entries, each <= max_n."""
    out = []

    def rec(prefix, top):
        if prefix:
            out.append(tuple(prefix))
        if len(prefix) == max_k:
            return
        for n in range(2, top + 1):
            if not prefix or prefix[-1] % n == 0:
                rec(prefix + [n], n)

    rec([], max_n)
    return out


_VERB_RUNNERS = {
    "analyze": _run_analyze,
    "capability": _run_capability,
    "epicenter": _run_epicenter,
    "multiplier": _run_multiplier,
    "pair": _run_pair,
}

_SUITE_RUNNERS = {
    "products": _verify_products,
    "pairs": _verify_pairs,
    "engines": _verify_engines,
    "classifier": _verify_classifier,
}


def run(cmd: Command):
    """Execute a parsed command; returns (report document, exit code)."""
    if cmd.verb == "verify":
        subjects, failures, code = _SUITE_RUNNERS[cmd.suite](cmd)
        doc = _document(cmd, subjects, failures)
        return doc, (EXIT_FAILURES if failures else code)
    subjects, failures, code = _VERB_RUNNERS[cmd.verb](cmd)
    return _document(cmd, subjects, failures), code


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cmd = parse_command(argv)
    except GroupSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SystemExit as exc:  # argparse
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        doc, code = run(cmd)
    except (OrderCapExceeded, EngineUnavailableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except GroupSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    _emit(cmd, doc)
    return code


if __name__ == "__main__":
    sys.exit(main())
