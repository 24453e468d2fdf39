"""Command-line front end. JSON is the machine interface; text is rendered from it."""

import argparse
import json
import sys
import time
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import constructions as cons
from .boolfn import (
    classify_plateaued,
    degree,
    dual_of_bent,
    is_balanced,
    linear_structures,
    parse_function,
    to_anf,
    walsh_transform,
)
from .codes import (
    MAX_ENUM_K,
    code_from_dset,
    code_from_rows,
    contains_rm1,
    design_code,
    dual,
    dual_weight_distribution,
    hull_dimension,
    support_design,
    weight_distribution,
)
from .equivalence import (
    MAX_AUT_M,
    MAX_SEARCH_M,
    EaWitness,
    aut_dset_code,
    automorphism_order,
    ea_invariants,
    exhaustive_affine_equivalence,
    verify_ea_witness,
)
from .errors import DomainError, ParseError, SizeGuardError
from .gf2 import Gf2Matrix
from .incidence import (
    IncidenceStructure,
    bitstring,
    check_dsdp,
    check_tsdp,
    design_check,
    intersection_profile,
    is_simple,
    is_symmetric,
    two_rank,
)
from .kernels import BACKEND

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


@dataclass
class Report:
    command: str
    inputs: dict
    results: dict
    verdicts: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)

    def to_dict(self, timing=True):
        out = {"command": self.command, "inputs": self.inputs, "results": self.results, "verdicts": self.verdicts}
        if timing:
            out["timing"] = self.timing
        return out

    def to_json(self, timing=True):
        return json.dumps(self.to_dict(timing), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        return cls(d["command"], d["inputs"], d["results"], d.get("verdicts", {}), d.get("timing", {}))


class UsageError(Exception):
    pass


def _fn_dict(f):
    return {"anf": str(to_anf(f)), "hex": f.to_hex(), "m": f.m}


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_design(path):
    text = _read(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"design file is not JSON: {exc}") from None
    if isinstance(data, dict) and "results" in data and "design" in data.get("results", {}):
        data = data["results"]["design"]
    return IncidenceStructure.from_dict(data)


def _guard(value, limit, what):
    if value > limit:
        raise SizeGuardError(f"{what} {value} exceeds the limit {limit}")


def _guard_flag(args, name, hard):
    val = getattr(args, name)
    if val > hard:
        raise UsageError(f"--{name.replace('_', '-')} cannot exceed the built-in limit {hard}")
    return val


def cmd_analyze(args):
    f = parse_function(args.fn, args.m)
    w = walsh_transform(f).values
    prof = classify_plateaued(f)
    deg = degree(f)
    res = {
        "function": _fn_dict(f),
        "degree": deg,
        "weight": f.weight,
        "balanced": is_balanced(f),
        "constant": bool(f.table.min() == f.table.max()),
        "walsh": {
            "max_abs": int(np.abs(w).max()),
            "values": {str(k): v for k, v in sorted(Counter(int(x) for x in w).items())},
        },
        "plateaued": None,
        "linear_structures": [bitstring(a, f.m) for a in linear_structures(f)],
        "dual": None,
    }
    if prof is not None:
        res["plateaued"] = {"r": prof.r, "support_size": len(prof.support), "amplitude": prof.amplitude}
        if prof.is_bent:
            res["dual"] = _fn_dict(dual_of_bent(f))
    verdicts = {"plateaued": prof is not None, "bent": bool(prof and prof.is_bent)}
    return Report("analyze", {"fn": args.fn, "m": f.m}, res, verdicts), EXIT_OK


BUILDERS = {
    "addition": cons.addition_design,
    "addition-bent": cons.addition_design_bent,
    "translation": cons.translation_design,
    "quasi-symmetric": cons.quasi_symmetric_design,
    "polarization": cons.polarization_design,
}


def cmd_build(args):
    max_m = _guard_flag(args, "max_build_m", cons.MAX_BUILD_M)
    inputs = {"construction": args.construction}
    if args.construction == "lcd":
        if not args.matrix:
            raise UsageError("lcd needs --matrix")
        C = code_from_rows(Gf2Matrix.parse(_read(args.matrix)))
        _guard(C.k, 12, "code dimension")
        rep = cons.lcd_design(C)
        inputs["matrix"] = C.to_text()
    else:
        if not args.f:
            raise UsageError(f"{args.construction} needs --f")
        f = parse_function(args.f)
        _guard(f.m, max_m, "m")
        inputs["f"] = _fn_dict(f)
        if args.construction == "sum-pair":
            if not args.g:
                raise UsageError("sum-pair needs --g (the second bent function)")
            g = parse_function(args.g, f.m)
            inputs["g"] = _fn_dict(g)
            rep = cons.sum_pair_design(f, g)
        else:
            rep = BUILDERS[args.construction](f)
    res = rep.to_dict()
    res["design"] = rep.design.to_dict()
    if args.out:
        Path(args.out).write_text(rep.design.to_json() + "\n")
    return Report("build", inputs, res, {"matches_expected": rep.matches}), EXIT_OK


CHECKS = ("2design", "tsdp", "dsdp", "rank", "simple", "intersections", "symmetric")


def cmd_verify(args):
    D = _load_design(args.design)
    checks = [c.strip() for c in args.check.split(",") if c.strip()]
    bad = [c for c in checks if c not in CHECKS]
    if bad:
        raise UsageError(f"unknown check(s) {', '.join(bad)}; choose from {', '.join(CHECKS)}")
    m = D.m or max(D.points + [1]).bit_length()
    res, verdicts = {"v": D.v, "b": D.b}, {}
    code = EXIT_OK
    for c in checks:
        if c == "2design":
            v = design_check(D)
            res[c] = {"params": v.params.to_dict() if v.params else None, "reason": v.reason,
                      "pair": [bitstring(x, m) for x in v.pair] if v.pair else None}
            verdicts[c] = v.ok
            if not v.ok:
                code = EXIT_DOMAIN
        elif c == "tsdp":
            v = check_tsdp(D)
            res[c] = v.to_dict(m)
            verdicts[c] = v.holds
        elif c == "dsdp":
            v = check_dsdp(D)
            res[c] = v.to_dict(m)
            verdicts[c] = v.holds
        elif c == "rank":
            res[c] = two_rank(D)
        elif c == "simple":
            verdicts[c] = is_simple(D)
        elif c == "intersections":
            prof = intersection_profile(D)
            res[c] = {"values": list(prof.values), "counts": [list(p) for p in prof.counts]}
            verdicts["quasi_symmetric"] = prof.is_quasi_symmetric
        elif c == "symmetric":
            verdicts[c] = is_symmetric(D)
    return Report("verify", {"design": str(args.design), "checks": checks}, res, verdicts), code


def _code_source(args):
    given = [x for x in (args.design, args.matrix, args.dset) if x]
    if len(given) != 1:
        raise UsageError("give exactly one of --design, --matrix, --dset")
    if args.design:
        D = _load_design(args.design)
        return design_code(D), {"design": str(args.design)}, D.m
    if args.matrix:
        return code_from_rows(Gf2Matrix.parse(_read(args.matrix))), {"matrix": str(args.matrix)}, None
    f = parse_function(args.dset)
    return code_from_dset(f), {"dset": _fn_dict(f)}, f.m


def cmd_code(args):
    max_k = _guard_flag(args, "max_enum_k", MAX_ENUM_K)
    C, inputs, m = _code_source(args)
    inputs["action"] = args.action
    res = {"n": C.n, "k": C.k}
    verdicts = {}
    if args.action == "info":
        res["generator"] = C.to_text()
    elif args.action == "weights":
        _guard(C.k, max_k, "code dimension")
        wd = weight_distribution(C)
        dwd = dual_weight_distribution(C)
        res["weights"] = {str(k): v for k, v in wd.nonzero().items()}
        res["enumerator"] = str(wd)
        res["dual_weights"] = {str(k): v for k, v in dwd.nonzero().items()}
    elif args.action == "dual":
        D = dual(C)
        res["dual"] = {"n": D.n, "k": D.k, "generator": D.to_text()}
    elif args.action == "lcd":
        h = hull_dimension(C)
        res["hull_dimension"] = h
        verdicts["lcd"] = h == 0
    elif args.action == "support-design":
        if args.weight is None:
            raise UsageError("support-design needs --weight")
        _guard(C.k, max_k, "code dimension")
        S = support_design(C, args.weight)
        v = design_check(S)
        res["weight"] = args.weight
        res["params"] = v.params.to_dict() if v.params else None
        res["design"] = S.to_dict()
        verdicts["2design"] = v.ok
    elif args.action == "rm1":
        mm = args.m or m
        if mm is None:
            raise UsageError("rm1 needs --m for a bare matrix")
        verdicts["contains_rm1"] = contains_rm1(C, mm)
    return Report("code", inputs, res, verdicts), EXIT_OK


def cmd_aut(args):
    max_m = _guard_flag(args, "max_aut_m", MAX_AUT_M)
    f = parse_function(args.f)
    inputs = {"f": _fn_dict(f), "target": "dset" if args.dset else "code"}
    if args.dset:
        _guard(f.m, min(max_m, MAX_SEARCH_M), "m")
        res = {"dset_code_order": aut_dset_code(f)}
    else:
        _guard(f.m, max_m, "m")
        a = automorphism_order(f, collect=args.list > 0)
        res = a.to_dict()
        if args.list > 0:
            res["pairs"] = [{"A": [format(r, "x") for r in rows], "p": format(p, "x")} for rows, p in a.witnesses[: args.list]]
    return Report("aut", inputs, res), EXIT_OK


def cmd_equiv(args):
    f = parse_function(args.f)
    g = parse_function(args.g, f.m)
    inputs = {"f": _fn_dict(f), "g": _fn_dict(g)}
    res, verdicts = {}, {}
    if args.witness:
        text = _read(args.witness) if Path(args.witness).exists() else args.witness
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"witness is not JSON: {exc}") from None
        w = EaWitness.from_dict(data)
        inputs["witness"] = w.to_dict()
        verdicts["witness"] = verify_ea_witness(f, g, w)
    elif args.exhaustive:
        sigma = exhaustive_affine_equivalence(f, g)
        res["affine_map"] = sigma.to_dict() if sigma else None
        verdicts["affine_equivalent"] = sigma is not None
    else:
        fi, gi = ea_invariants(f), ea_invariants(g)
        names = ("degree", "walsh_abs", "autocorrelation_abs")
        res["differing_invariants"] = [n for n, a, b in zip(names, fi, gi) if a != b]
        verdicts["invariants_agree"] = fi == gi
    return Report("equiv", inputs, res, verdicts), EXIT_OK


def cmd_examples(args):
    from . import suite

    only = [k.strip() for k in args.only.split(",")] if args.only else None
    if only:
        unknown = [k for k in only if k not in suite.KEYS]
        if unknown:
            raise UsageError(f"unknown group(s) {', '.join(unknown)}; choose from {', '.join(suite.KEYS)}")
    results = suite.run_all(only, {"field": args.field})
    rows = [r.to_dict() for r in results]
    timing = {r["key"]: r.pop("seconds") for r in rows}
    ok = all(r["passed"] for r in rows)
    rep = Report("examples", {"only": only, "field": args.field, "backend": BACKEND}, {"criteria": rows}, {"all_passed": ok}, timing)
    return rep, EXIT_OK if ok else EXIT_DOMAIN


def _render_value(v, indent):
    pad = "  " * indent
    if isinstance(v, dict):
        lines = []
        for k, x in v.items():
            if isinstance(x, (dict, list)) and x and not _flat(x):
                lines.append(f"{pad}{k}:")
                lines.extend(_render_value(x, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(x)}")
        return lines
    if isinstance(v, list):
        lines = []
        for x in v:
            sub = _render_value(x, indent + 1)
            lines.append(f"{pad}-" + (" " + sub[0].strip() if sub else ""))
            lines.extend(sub[1:])
        return lines
    if isinstance(v, str) and "\n" in v:
        return [pad + ln for ln in v.rstrip("\n").splitlines()]
    return [pad + _inline(v)]


def _flat(x):
    vals = x.values() if isinstance(x, dict) else x
    return all(not isinstance(y, (dict, list)) for y in vals) and len(x) <= 16 and not any(
        isinstance(y, str) and "\n" in y for y in vals
    )


def _inline(x):
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, dict):
        return ", ".join(f"{k}={_inline(v)}" for k, v in x.items())
    if isinstance(x, list):
        return "[" + ", ".join(_inline(y) for y in x) + "]"
    return str(x)


def render_text(d):
    """Plain-text view of a report dict."""
    if d["command"] == "examples":
        lines = []
        for c in d["results"]["criteria"]:
            sec = d.get("timing", {}).get(c["key"])
            t = f"{sec:7.2f}s" if sec is not None else ""
            lines.append(f"{'PASS' if c['passed'] else 'FAIL'}  {c['key']:<22}{t} / {c['budget']:g}s  {c['title']}")
            for ch in c["checks"]:
                if not ch["ok"]:
                    lines.append(f"      failed: {ch['name']}  {ch['detail'].splitlines()[-1] if ch['detail'] else ''}")
        lines.append("all passed" if d["verdicts"]["all_passed"] else "some criteria failed")
        return "\n".join(lines)
    lines = [f"{d['command']}"]
    for part in ("inputs", "results", "verdicts"):
        if d.get(part):
            lines.append(f"{part}:")
            lines.extend(_render_value(d[part], 1))
    return "\n".join(lines)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    out = common.add_mutually_exclusive_group()
    out.add_argument("--json", dest="fmt", action="store_const", const="json", help="emit JSON")
    out.add_argument("--text", dest="fmt", action="store_const", const="text", help="emit text (default)")
    common.add_argument("--no-timing", action="store_true", help="omit the timing field from JSON")

    p = argparse.ArgumentParser(prog="bentdesign", description="Designs and codes from bent and plateaued functions.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="spectral profile of a function")
    a.add_argument("fn", help="ANF such as x1*x2+x3 or a truth table m:<hex>")
    a.add_argument("--m", type=int, help="number of variables for ANF input")

    b = sub.add_parser("build", parents=[common], help="build a design")
    b.add_argument("--construction", required=True, choices=sorted(BUILDERS) + ["sum-pair", "lcd"])
    b.add_argument("--f", help="function for the construction")
    b.add_argument("--g", help="second bent function for sum-pair")
    b.add_argument("--matrix", help="generator matrix file for lcd")
    b.add_argument("--out", help="also write the design JSON here")
    b.add_argument("--max-build-m", type=int, default=cons.MAX_BUILD_M)

    v = sub.add_parser("verify", parents=[common], help="check a design JSON file")
    v.add_argument("--design", required=True)
    v.add_argument("--check", default="2design", help=f"comma list from {','.join(CHECKS)}")

    c = sub.add_parser("code", parents=[common], help="linear code of a design, matrix or support set")
    c.add_argument("action", choices=["info", "weights", "dual", "lcd", "support-design", "rm1"])
    c.add_argument("--design")
    c.add_argument("--matrix")
    c.add_argument("--dset", help="function whose support gives the code coordinates")
    c.add_argument("--weight", type=int)
    c.add_argument("--m", type=int)
    c.add_argument("--max-enum-k", type=int, default=MAX_ENUM_K)

    u = sub.add_parser("aut", parents=[common], help="automorphism counts")
    u.add_argument("--f", required=True)
    grp = u.add_mutually_exclusive_group()
    grp.add_argument("--code", action="store_true", help="order of Aut(f), equal to that of the design code (default)")
    grp.add_argument("--dset", action="store_true", help="affine permutations fixing f")
    u.add_argument("--list", type=int, default=0, help="also list the first N (A, p) pairs")
    u.add_argument("--max-aut-m", type=int, default=MAX_AUT_M)

    e = sub.add_parser("equiv", parents=[common], help="EA-equivalence tools")
    e.add_argument("--f", required=True)
    e.add_argument("--g", required=True)
    grp = e.add_mutually_exclusive_group()
    grp.add_argument("--exhaustive", action="store_true", help=f"search affine maps (m <= {MAX_SEARCH_M})")
    grp.add_argument("--witness", help="witness JSON text or file")

    x = sub.add_parser("examples", parents=[common], help="run the regression suite")
    x.add_argument("--only", help="comma list of group keys")
    x.add_argument("--field", default="gf2^4/13", help="field used by the trace-pair group")
    return p


COMMANDS = {
    "analyze": cmd_analyze,
    "build": cmd_build,
    "verify": cmd_verify,
    "code": cmd_code,
    "aut": cmd_aut,
    "equiv": cmd_equiv,
    "examples": cmd_examples,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = args.fmt or "text"
    t0 = time.perf_counter()
    try:
        rep, code = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except (DomainError, ParseError) as exc:
        code = EXIT_GUARD if isinstance(exc, SizeGuardError) else EXIT_DOMAIN
        kind = type(exc).__name__
        if fmt == "json":
            print(json.dumps({"command": args.command, "error": {"type": kind, "message": str(exc)}}, sort_keys=True))
        print(f"error: {exc}", file=sys.stderr)
        return code
    if not rep.timing:
        rep.timing = {"seconds": round(time.perf_counter() - t0, 3)}
    if fmt == "json":
        print(rep.to_json(timing=not args.no_timing))
    else:
        print(render_text(rep.to_dict()))
    return code


if __name__ == "__main__":
    sys.exit(main())
