"""Command line driver.

Every command prints one JSON certificate on stdout::

    {"command": ..., "inputs": ..., "result": ..., "assumptions": [...], "version": ...}

Exit status is 0 on success, 2 when a verification rejects its input
and 1 for usage errors, malformed input and exceeded caps.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import __version__
from .errors import LimitError, WicksError
from .extension import ExtensionPlan, build_extension, verify_extension
from .forms import (
    VARIANT_KEYS,
    CommutatorForm,
    match_commutator,
    synthesize,
    synthesize_seeded,
    verify_form,
)
from .genus import GenusCaps, brute_force_genus
from .oracle import BoundConstants, GroupOracle, Presentation, bound_constants, free_group
from .surface import build_surface_graph, enumerate_wicks_forms, is_wicks_form
from .thin import GeodesicPolygon, check_polygon, delta_scan
from .words import format_word, parse_word

SCHEMA = "wicksforms-certificate/1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2, which we reserve
        raise UsageError(message)


def _oracle(args) -> GroupOracle:
    if getattr(args, "group", None):
        try:
            return GroupOracle(Presentation.load(args.group))
        except OSError as exc:
            raise UsageError(f"cannot read group file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"group file is not valid JSON: {exc}") from None
    o = free_group("ab")
    o.default_group = True
    return o


def _constants(o: GroupOracle, args, n: int = 1) -> BoundConstants:
    delta = getattr(args, "delta", None)
    return bound_constants(o, n=n, delta=delta, radius=getattr(args, "radius", 4) or 4)


def _assumptions(o: GroupOracle, c: BoundConstants | None = None) -> list[str]:
    out = list(o.assumptions)
    if getattr(o, "default_group", False):
        out.append("default-group=free-on-ab")
    if c is not None:
        out.extend(c.notes)
    return out


def _cert(command: str, inputs: dict, result, assumptions: list[str]) -> dict:
    return {"command": command, "inputs": inputs, "result": result, "assumptions": assumptions, "version": SCHEMA}


# -- commands ----------------------------------------------------------------------


def cmd_wicks(args):
    if args.action == "check":
        w = parse_word(args.word)
        out = {"is_wicks_form": is_wicks_form(w)}
        try:
            g = build_surface_graph(w)
            out.update(genus=g.genus, v=g.v, e=g.e)
        except WicksError:
            pass
        return _cert("wicks check", {"word": args.word}, out, []), 0
    forms = enumerate_wicks_forms(args.genus, args.max_len)
    result = {"count": len(forms), "forms": [str(f) for f in forms]}
    return _cert("wicks enumerate", {"genus": args.genus, "max_len": args.max_len}, result, []), 0


def cmd_surface(args):
    g = build_surface_graph(parse_word(args.word))
    return _cert("surface", {"word": args.word}, g.to_dict(), []), 0


def cmd_genus(args):
    o = _oracle(args)
    caps = GenusCaps(max_k=args.max_k, commutator_cap=args.commutator_cap, conjugator_cap=args.conjugator_cap)
    res = brute_force_genus(o, [parse_word(w) for w in args.words], caps)
    return _cert("genus", {"group": args.group, "words": args.words}, res.to_dict(), _assumptions(o)), 0


def cmd_conjugate(args):
    o = _oracle(args)
    c = None if args.M is not None else _constants(o, args)
    M = args.M if c is None else c.M
    h1, h2 = parse_word(args.h1), parse_word(args.h2)
    w = o.conjugacy_search(h1, h2, M)
    result = {"conjugator": None if w is None else format_word(w), "bound": o.conjugacy_bound(h1, h2, M)}
    return _cert("conjugate", {"group": args.group, "h1": args.h1, "h2": args.h2}, result, _assumptions(o, c)), 0


def cmd_delta(args):
    o = _oracle(args)
    scan = delta_scan(o, args.radius, detail=True)
    result = {"delta": scan.delta, "radius": scan.radius, "pairs": scan.pairs,
              "witness": None if scan.witness is None else
              {"w": scan.witness[0], "z": scan.witness[1], "overlap": scan.witness[2]}}
    assumptions = _assumptions(o) + [f"delta-estimate-radius={args.radius}"]
    return _cert("delta", {"group": args.group, "radius": args.radius}, result, assumptions), 0


def cmd_subdivide(args):
    o = _oracle(args)
    c = _constants(o, args)
    p = GeodesicPolygon([parse_word(s) for s in args.sides], o)
    p.validate()
    rep = check_polygon(p, c.delta)
    return _cert("subdivide", {"group": args.group, "sides": args.sides}, rep.to_dict(),
                 _assumptions(o, c)), (0 if rep.ok else 2)


def cmd_extend(args):
    o = _oracle(args)
    try:
        plan = ExtensionPlan.load(args.plan)
    except OSError as exc:
        raise UsageError(f"cannot read plan file: {exc}") from None
    c = _constants(o, args, n=args.n)
    g = build_extension(plan, o)
    ver, report = verify_extension(plan, g, o, args.n, c)
    result = {"verified": ver.ok, "clauses": ver.to_list(), "report": report.to_dict() if report else None}
    return _cert("extend", {"group": args.group, "plan": plan.to_dict(), "n": args.n}, result,
                 _assumptions(o, c)), (0 if ver.ok else 2)


def _form_result(form: CommutatorForm, o: GroupOracle, strict: bool) -> dict:
    chk = verify_form(form, o, strict=strict)
    out = form.to_dict()
    out["verified"] = chk.ok
    out["clauses"] = chk.to_list()
    return out


def _parse_seeds(text: str) -> dict[str, str]:
    seeds = {}
    for part in text.split(","):
        if "=" not in part:
            raise UsageError(f"seed entries look like name=word, got {part!r}")
        k, v = part.split("=", 1)
        seeds[k.strip()] = parse_word(v.strip())
    return seeds


def cmd_forms(args):
    o = _oracle(args)
    c = _constants(o, args)
    if args.action == "match":
        form = match_commutator(parse_word(args.word), o, c, strict=args.strict)
        result = _form_result(form, o, args.strict)
        inputs = {"group": args.group, "word": args.word}
    elif args.action == "synth":
        if args.variant is None or args.seed is None:
            raise UsageError("forms synth needs --variant and --seed")
        if "=" in args.seed:
            seeds = _parse_seeds(args.seed)
            h, form = synthesize(args.variant, seeds, o, c)
        else:
            try:
                h, form, seeds = synthesize_seeded(args.variant, o, c, int(args.seed))
            except ValueError:
                raise UsageError(f"--seed must be an integer or name=word pairs, got {args.seed!r}") from None
        result = _form_result(form, o, args.strict)
        result["seeds"] = {k: format_word(v) for k, v in seeds.items()}
        inputs = {"group": args.group, "variant": args.variant, "seed": args.seed}
    else:
        try:
            with open(args.form) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read form file: {exc}") from None
        data = data.get("result", data)
        variant = int(data["variant"])
        comp = {k: parse_word(v) for k, v in data["components"].items() if k in VARIANT_KEYS.get(variant, ())}
        form = CommutatorForm(variant, comp, parse_word(data.get("R", "1")), parse_word(data["F"]), c,
                              parse_word(data.get("h", "1")))
        result = _form_result(form, o, args.strict)
        inputs = {"group": args.group, "form": args.form}
    code = 0 if result["verified"] else 2
    return _cert(f"forms {args.action}", inputs, result, _assumptions(o, c)), code


# -- parser ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wicksforms", description="Wicks forms, genus and commutator forms over groups.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def group_opt(sp):
        sp.add_argument("--group", help="presentation JSON file (default: free group on a, b)")

    sp = sub.add_parser("wicks", help="recognise or enumerate Wicks forms")
    wsub = sp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = wsub.add_parser("check")
    c.add_argument("word")
    e = wsub.add_parser("enumerate")
    e.add_argument("--genus", type=int, required=True)
    e.add_argument("--max-len", type=int, default=None)
    sp.set_defaults(func=cmd_wicks)

    sp = sub.add_parser("surface", help="surface graph of an orientable quadratic word")
    sp.add_argument("word")
    sp.set_defaults(func=cmd_surface)

    sp = sub.add_parser("genus", help="brute-force genus of a tuple of elements")
    group_opt(sp)
    sp.add_argument("words", nargs="+")
    sp.add_argument("--max-k", type=int, default=2)
    sp.add_argument("--commutator-cap", type=int, default=None)
    sp.add_argument("--conjugator-cap", type=int, default=None)
    sp.set_defaults(func=cmd_genus)

    sp = sub.add_parser("conjugate", help="bounded conjugator search")
    group_opt(sp)
    sp.add_argument("h1")
    sp.add_argument("h2")
    sp.add_argument("--M", type=int, default=None, help="ball count constant (default: from delta)")
    sp.add_argument("--delta", type=int, default=None)
    sp.set_defaults(func=cmd_conjugate)

    sp = sub.add_parser("delta", help="thin-triangle constant over a ball")
    group_opt(sp)
    sp.add_argument("--radius", type=int, default=4)
    sp.set_defaults(func=cmd_delta)

    sp = sub.add_parser("subdivide", help="subdivide a geodesic polygon and check companions")
    group_opt(sp)
    sp.add_argument("sides", nargs="+", help="sides g0 g1 ... gn")
    sp.add_argument("--delta", type=int, default=None)
    sp.add_argument("--radius", type=int, default=4)
    sp.set_defaults(func=cmd_subdivide)

    sp = sub.add_parser("extend", help="verify an extension plan")
    group_opt(sp)
    sp.add_argument("--plan", required=True)
    sp.add_argument("--n", type=int, required=True, help="target genus")
    sp.add_argument("--delta", type=int, default=None)
    sp.set_defaults(func=cmd_extend)

    sp = sub.add_parser("forms", help="commutator forms: match, synth, verify")
    fsub = sp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("match", "synth", "verify"):
        f = fsub.add_parser(name)
        group_opt(f)
        f.add_argument("--delta", type=int, default=None)
        f.add_argument("--strict", action="store_true", help="shape 2: xi1 conjugate to xi2^-1")
        if name == "match":
            f.add_argument("word")
        elif name == "synth":
            f.add_argument("--variant", type=int, choices=(1, 2, 3, 4))
            f.add_argument("--seed", help="integer seed or name=word,... seeds")
        else:
            f.add_argument("--form", required=True, help="form JSON (a synth or match certificate)")
    sp.set_defaults(func=cmd_forms)
    return p


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cert, code = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except LimitError as exc:
        print(f"limit exceeded: {exc}", file=sys.stderr)
        return 1
    except WicksError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyError as exc:
        print(f"error: missing field {exc}", file=sys.stderr)
        return 1
    json.dump(cert, out, sort_keys=True)
    out.write("\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
