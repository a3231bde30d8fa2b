"""Command-line surface: classify, verify, params, subgroup-lattice.

Exit codes: 0 success, 1 verification mismatch, 2 invalid input or
resource cap.  All numeric output is exact integer arithmetic; identical
invocations produce byte-identical stdout.  HGSPQ_CAP (or --cap)
overrides the subgroup-enumeration cap; --deep raises it to the extended
tier default.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from .arith import (
    ClassificationError,
    ResourceLimitError,
    UniqueStructureRegime,
    is_prime,
    pq_parameters,
)
from .cyclic import (
    cyclic_hgs_counts,
    cyclic_iso_classes,
    enumerate_ell_subgroups,
    enumerate_transitive_cyclic,
    parametrized_counts,
    sigma1,
    sigma2,
)
from .holomorph import build_cyclic_holomorph, build_metab_holomorph
from .metab import enumerate_table1, metab_hgs_counts, metab_iso_classes
from .oracle import all_subgroups, direct_hgs_count, transitive_classes
from .permgrp import REL_AUT_CAP, has_regular_normal_subgroup
from .report import build_report, byott_count, render

DEFAULT_CAP = 2000
DEEP_CAP = 10**4


def _resolve_cap(args) -> int:
    if getattr(args, "cap", None):
        return args.cap
    env = os.environ.get("HGSPQ_CAP")
    if env:
        return int(env)
    return DEEP_CAP if getattr(args, "deep", False) else DEFAULT_CAP


def _write_out(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".hgspq-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _validate_pq(p: int, q: int) -> None:
    if not (is_prime(p) and is_prime(q)) or q < 3 or p <= q:
        raise ValueError(f"need odd primes p > q >= 3, got p={p}, q={q}")


def _cmd_classify(args) -> int:
    _validate_pq(args.p, args.q)
    report = build_report(args.p, args.q, realize_cap=DEEP_CAP)
    if args.type != "both":
        if args.type == "cyclic":
            report.metabelian = []
            report.both_types = []
        else:
            report.cyclic = []
            report.both_types = []
    _write_out(render(report, args.format), args.out)
    return 0


def _cmd_params(args) -> int:
    _validate_pq(args.p, args.q)
    try:
        params = pq_parameters(args.p, args.q)
        obj = {
            "p": args.p,
            "q": args.q,
            "regime": "generic",
            "e0": params.e0,
            "s": params.s,
            "ell": list(params.ell),
            "e": list(params.e),
            "f": list(params.f),
            "hol_cyclic_order": args.p * args.q * (args.p - 1) * (args.q - 1),
            "hol_metab_order": params.s * args.p**2 * args.q ** (1 + params.e0),
        }
    except UniqueStructureRegime:
        obj = {"p": args.p, "q": args.q, "regime": "unique"}
    if args.format == "json":
        _write_out(json.dumps(obj, indent=2) + "\n", args.out)
    else:
        _write_out("".join(f"{k} = {v}\n" for k, v in obj.items()), args.out)
    return 0


def _verify_cyclic(params, cap: int, lines: list[str]) -> bool:
    group, model = build_cyclic_holomorph(params)
    descs = enumerate_transitive_cyclic(params, model, realize_cap=cap)
    classes = cyclic_hgs_counts(cyclic_iso_classes(descs, params), params)
    aut_n = (params.p - 1) * (params.q - 1)
    side = [
        (frozenset(d.group.element_set() for d in ci.members), ci) for ci in classes
    ]
    return _diff_against_oracle(group, side, aut_n, cap, lines, "cyclic")


def _verify_metab(params, cap: int, lines: list[str]) -> bool:
    group, model = build_metab_holomorph(params)
    table = enumerate_table1(params, model, realize_cap=cap)
    classes = metab_hgs_counts(metab_iso_classes(table, params), params)
    aut_n = params.p * (params.p - 1)
    by_set: dict[frozenset, object] = {}
    for ci in classes:
        key = frozenset(d.group.element_set() for d in ci.members)
        by_set[key] = ci
    side = list(by_set.items())
    return _diff_against_oracle(group, side, aut_n, cap, lines, "metabelian")


def _diff_against_oracle(group, side, aut_n: int, cap: int, lines: list[str], label: str) -> bool:
    lattice = all_subgroups(group, cap=cap)
    oracle = transitive_classes(lattice)
    ok = True
    oracle_partition = {frozenset(c.member_sets): c for c in oracle}
    enum_partition = dict(side)
    enum_groups = set().union(*enum_partition) if enum_partition else set()
    oracle_groups = set().union(*oracle_partition) if oracle_partition else set()
    if enum_groups != oracle_groups:
        ok = False
        lines.append(
            f"{label}: transitive subgroup sets differ "
            f"(enumerated {len(enum_groups)}, oracle {len(oracle_groups)}, "
            f"only-enumerated {len(enum_groups - oracle_groups)}, "
            f"only-oracle {len(oracle_groups - enum_groups)})"
        )
    if set(oracle_partition) != set(enum_partition):
        ok = False
        lines.append(
            f"{label}: class partitions differ "
            f"(enumerated {len(enum_partition)} classes, oracle {len(oracle_partition)})"
        )
    for key in sorted(set(oracle_partition) & set(enum_partition), key=_partition_key):
        ocls = oracle_partition[key]
        ecls = enum_partition[key]
        name = ecls.structure_label
        if ocls.member_count != ecls.n_groups:
            ok = False
            lines.append(f"{label}/{name}: #groups oracle {ocls.member_count} != {ecls.n_groups}")
        if ocls.rel_aut_order is not None:
            if ocls.rel_aut_order != ecls.rel_aut_order:
                ok = False
                lines.append(
                    f"{label}/{name}: |Aut(M,M')| oracle {ocls.rel_aut_order} "
                    f"!= closed form {ecls.rel_aut_order}"
                )
            direct = direct_hgs_count(ocls, aut_n)
            if direct != ecls.n_hgs:
                ok = False
                lines.append(f"{label}/{name}: #HGS oracle {direct} != {ecls.n_hgs}")
        acg = has_regular_normal_subgroup(ocls.representative)
        if acg != ecls.acg:
            ok = False
            lines.append(f"{label}/{name}: acg oracle {acg} != {ecls.acg}")
    lines.append(
        f"{label}: oracle {sum(c.member_count for c in oracle)} transitive subgroups "
        f"in {len(oracle)} classes"
    )
    return ok


def _partition_key(key: frozenset) -> tuple:
    sets = sorted(tuple(sorted(p.image for p in s)) for s in key)
    return (len(sets[0]), sets[0] if sets else ())


def _cmd_verify(args) -> int:
    _validate_pq(args.p, args.q)
    cap = _resolve_cap(args)
    try:
        params = pq_parameters(args.p, args.q)
    except UniqueStructureRegime:
        _write_out(
            f"p={args.p} q={args.q}: unique-structure regime, nothing to verify\n",
            args.out,
        )
        return 0
    hol_cyc = args.p * args.q * (args.p - 1) * (args.q - 1)
    hol_met = params.s * args.p**2 * args.q ** (1 + params.e0)
    needed = []
    if args.type in ("cyclic", "both"):
        needed.append(("cyclic", hol_cyc))
    if args.type in ("metabelian", "both"):
        needed.append(("metabelian", hol_met))
    for name, order in needed:
        if order > cap:
            sys.stderr.write(
                f"{name} holomorph order {order} exceeds cap {cap}"
                f"{'' if args.deep else ' (pass --deep)'}\n"
            )
            return 2
    lines: list[str] = []
    ok = True
    for name, _ in needed:
        if name == "cyclic":
            ok &= _verify_cyclic(params, cap, lines)
        else:
            ok &= _verify_metab(params, cap, lines)
    # formula-vs-enumeration sigma ledger: warnings only, never failure
    report = build_report(args.p, args.q, realize_cap=DEEP_CAP)
    for d in report.discrepancies:
        sys.stderr.write(
            f"WARN {d['site']}: paper {d['paper_value']} vs computed {d['computed_value']}\n"
        )
    lines.append("verify: OK" if ok else "verify: MISMATCH")
    _write_out("\n".join(lines) + "\n", args.out)
    return 0 if ok else 1


def _cmd_subgroup_lattice(args) -> int:
    ell, e, f = args.ell, args.e, args.f
    if not is_prime(ell):
        raise ValueError(f"--ell must be prime, got {ell}")
    cap = args.cap or int(os.environ.get("HGSPQ_CAP", "0")) or 4096
    descs = enumerate_ell_subgroups(e, f, ell, cap=cap)
    brute = len(descs)
    kinds = {"I": 0, "II": 0, "III": 0}
    for d in descs:
        kinds[d.kind] += 1
    s1c, s1d = sigma1(e, f, ell)
    s2c, s2d = sigma2(e, f, ell)
    t1 = (e + 1) * (f + 1)
    closed = t1 + s1c + s2c
    direct = t1 + s1d + s2d
    raw = parametrized_counts(e, f, ell)
    verdict = "match" if brute == closed == direct else "MISMATCH"
    out = [
        f"subgroups of C_{ell**e} x C_{ell**f}",
        f"brute-force count: {brute}",
        f"paper closed form: {t1}+{s1c}+{s2c} = {closed}",
        f"paper direct sums: {t1}+{s1d}+{s2d} = {direct}",
        f"by kind (attached): I={kinds['I']} II={kinds['II']} III={kinds['III']}",
        f"parametrized tuples: I={raw['I']} II={raw['II']} III={raw['III']}",
        f"verdict: {verdict}",
    ]
    _write_out("\n".join(out) + "\n", args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hgspq",
        description="Classify and count Hopf-Galois structures on separable "
        "field extensions of degree pq (p > q odd primes).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, with_type=True):
        sp.add_argument("--p", type=int, required=True, help="the larger odd prime")
        sp.add_argument("--q", type=int, required=True, help="the smaller odd prime")
        if with_type:
            sp.add_argument(
                "--type", choices=("cyclic", "metabelian", "both"), default="both"
            )
        sp.add_argument("--out", help="write output atomically to this path")

    sp = sub.add_parser("classify", help="enumerate isomorphism classes and HGS counts")
    add_common(sp)
    sp.add_argument("--format", choices=("table", "json", "csv"), default="table")
    sp.set_defaults(func=_cmd_classify)

    sp = sub.add_parser("verify", help="check the classification against the oracle")
    add_common(sp)
    sp.add_argument("--deep", action="store_true", help="extended oracle tier")
    sp.add_argument("--cap", type=int, help="subgroup-enumeration cap override")
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("params", help="show the (p, q) parameterization")
    add_common(sp, with_type=False)
    sp.add_argument("--format", choices=("table", "json"), default="table")
    sp.set_defaults(func=_cmd_params)

    sp = sub.add_parser(
        "subgroup-lattice", help="compare subgroup-count formulas for C_{l^e} x C_{l^f}"
    )
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--e", type=int, required=True)
    sp.add_argument("--f", type=int, required=True)
    sp.add_argument("--cap", type=int)
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_subgroup_lattice)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ResourceLimitError, ClassificationError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
