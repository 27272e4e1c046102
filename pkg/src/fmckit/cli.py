"""``fmckit`` command line: every subcommand prints one JSON document.

Exit codes: 0 success, 2 malformed input, 3 the computation reports an
obstruction (the obstruction document is still printed).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import autgroups, blowup, chow, cones, fibrations, stablemaps
from .exact import IndexSubset, Permutation

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_OBSTRUCTED = 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        _emit({"error": message}, pretty=False)
        raise SystemExit(EXIT_INPUT)


def _emit(doc, pretty: bool) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2 if pretty else None, ensure_ascii=True)
    sys.stdout.write(text + "\n")


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected comma separated integers, got {text!r}") from None


def _load_json(text: str | None, path: str | None):
    if path:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    elif text is None:
        text = sys.stdin.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON: {e}") from None


def _frac(x) -> str:
    return str(x)


# -- subcommands --------------------------------------------------------------


def cmd_picard(a):
    print(f"note: {blowup.PICARD_ASSUMPTION}", file=sys.stderr)
    return EXIT_OK, {"picard": blowup.picard_number(a.base_rho, a.base_dim, a.n)}


def cmd_schedule(a):
    if a.style == "symmetric":
        s = blowup.symmetric_schedule(a.n, a.base_dim)
    else:
        s = blowup.recursive_schedule(a.n)
    doc = s.to_json()
    doc["count"] = len(s)
    return EXIT_OK, doc


def cmd_chow(a):
    coeffs = _ints(a.a)
    if not coeffs:
        raise InputError("--a needs at least one coefficient")
    D = chow.SquareFreeClass.divisor(coeffs)
    doc = {"a": coeffs, "square": (D * D).to_json(), "top_power": chow.sf_integrate(D ** len(coeffs))}
    v = chow.pencil_classify_product(coeffs)
    if isinstance(v, chow.NotAPencil):
        doc.update(verdict="not-a-pencil", reason=v.reason)
        return EXIT_OBSTRUCTED, doc
    doc.update(verdict="factors-through", j=v.j, degree=v.degree)
    return EXIT_OK, doc


def cmd_cones(a):
    p = cones.preset(a.model)
    L = p.lattices
    if a.decompose is not None:
        if p.name != "P13":
            raise InputError("--decompose is only available for P13")
        m = _ints(a.m or "")
        res = cones.mori_decompose_p13(a.decompose, m)
        if isinstance(res, cones.Rejected):
            return EXIT_OBSTRUCTED, {"verdict": "rejected", "index": res.index}
        return EXIT_OK, {"verdict": "decomposed", "coefficients": list(res.as_vector())}
    if a.fano:
        rep = cones.fano_test(L, p.classes["-K"], p.cones["mori"])
        return EXIT_OK, {
            "fano": rep.is_fano,
            "table": [{"ray": list(r), "pairing": v} for r, v in rep.table],
        }
    c = p.cones[a.cone]
    if a.contains:
        v = _ints(a.contains)
        if len(v) != L.rank:
            raise InputError(f"class needs {L.rank} coordinates")
        res = cones.contains(c, v, L)
        if isinstance(res, cones.Yes):
            return EXIT_OK, {
                "verdict": "yes",
                "generators": [list(g) for g in c.generators],
                "coefficients": [_frac(x) for x in res.coefficients],
            }
        return EXIT_OBSTRUCTED, {
            "verdict": "no",
            "functional": list(res.functional),
            "dual_class": list(res.dual_class) if res.dual_class else None,
        }
    return EXIT_OK, {"model": p.name, "cone": a.cone, **cones.extremal_rays(c).to_json()}


def cmd_stablemap(a):
    doc = _load_json(a.tree, a.in_path)
    try:
        t = stablemaps.StableMapTree.from_json(doc)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed tree: {e}") from None
    problems = stablemaps.validate(t)
    if a.op == "validate":
        out = {"ok": not problems, "violations": [v.__dict__ for v in problems]}
        return (EXIT_OK if not problems else EXIT_OBSTRUCTED), out
    if problems:
        raise InputError("invalid tree: " + ", ".join(v.kind for v in problems))
    if a.op == "canonicalize":
        return EXIT_OK, stablemaps.canonicalize(t).to_json()
    if a.op == "evaluate":
        if a.label is None:
            raise InputError("--label is required")
        try:
            return EXIT_OK, {"label": a.label, "value": stablemaps.evaluate(t, a.label).to_json()}
        except KeyError as e:
            raise InputError(str(e)) from None
    if a.op == "forget":
        try:
            return EXIT_OK, stablemaps.forget(t, _ints(a.labels or "")).to_json()
        except KeyError as e:
            raise InputError(str(e)) from None
    if a.op == "forget-map":
        return EXIT_OK, stablemaps.forget_map(t).to_json()
    if a.op == "act-sym":
        return EXIT_OK, stablemaps.act_sym(t, Permutation(tuple(_ints(a.perm or "")))).to_json()
    m = _ints(a.mobius or "")
    if len(m) != 4:
        raise InputError("--mobius needs four integers a,b,c,d")
    return EXIT_OK, stablemaps.act_target(t, stablemaps.MobiusMap(*m)).to_json()


def cmd_pencils(a):
    if a.classify:
        m_part = tuple(_ints(a.m_part)) if a.m_part else None
        sig = fibrations.PicSignature(m_part, tuple(_ints(a.a or "")))
        res = fibrations.classify_pencil(sig)
        if isinstance(res, fibrations.NonModular):
            return EXIT_OBSTRUCTED, {"verdict": "non-modular", "reason": res.reason}
        return EXIT_OK, {"verdict": "modular", "pencil": res.to_json(),
                         "multiplicity": fibrations.signature_multiplicity(sig)}
    ps = fibrations.modular_pencils(a.n)
    return EXIT_OK, {"n": a.n, "count": len(ps), "pencils": [p.to_json() for p in ps]}


def cmd_factor(a):
    if a.genus is not None:
        res = fibrations.factor_curve_product(a.genus, a.n, a.r, _ints(a.chosen or ""))
        if isinstance(res, fibrations.Unsupported):
            return EXIT_OBSTRUCTED, {"verdict": "unsupported", "reason": res.reason}
        if isinstance(res, fibrations.NotDominant):
            return EXIT_OBSTRUCTED, {"verdict": "not-dominant", "repeated": list(res.repeated)}
        return EXIT_OK, {"verdict": "factors", **res.to_json()}
    if a.product is not None:
        docs = _load_json(a.product, None)
        if not isinstance(docs, list):
            raise InputError("--product expects a JSON list of descriptors")
        comps = [fibrations.descriptor_from_json(d, a.n) for d in docs]
        return EXIT_OK, {"verdict": "factors", **fibrations.factor_product(a.n, comps).to_json()}
    if a.I is None or a.J is None or a.r is None:
        raise InputError("need --r, --I and --J (or --product, or --genus)")
    res = fibrations.factor_forgetful(a.n, a.r, IndexSubset.of(a.n, _ints(a.I)), IndexSubset.of(a.n, _ints(a.J)))
    if isinstance(res, fibrations.Obstructed):
        return EXIT_OBSTRUCTED, {"verdict": "obstructed"}
    return EXIT_OK, {"verdict": "factors", "forget": list(res.forgotten.members), "target_r": res.r}


def cmd_aut(a):
    space = autgroups.space_from_json(_load_json(a.space, None))
    res = autgroups.aut_connected(space) if a.connected else autgroups.aut_structure(space)
    if isinstance(res, autgroups.Unsupported):
        return EXIT_OBSTRUCTED, {"verdict": "unsupported", "reason": res.reason}
    doc = {}
    if isinstance(res, autgroups.Conjectural):
        doc["conjectural"] = True
        res = res.structure
    doc["structure"] = str(res)
    if a.order:
        o = autgroups.group_order(res)
        doc["order"] = o if isinstance(o, int) else ("infinite" if isinstance(o, autgroups.Infinite) else None)
    if a.tree:
        doc["tree"] = autgroups.to_json(res)
    return EXIT_OK, doc


def cmd_bruteforce_diag(a):
    res = autgroups.diagonal_stabilizer(a.n, a.r, workers=a.workers)
    return EXIT_OK, {"n": a.n, "r": a.r, "order": res.order, "verdict": type(res.verdict).__name__}


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fmckit", description=__doc__.splitlines()[0])
    p.add_argument("--pretty", action="store_true", help="indent the JSON output")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, module, help_text):
        s = sub.add_parser(name, help=help_text, description=f"{help_text} (implemented in fmckit.{module})")
        s.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS, help="indent the JSON output")
        s.set_defaults(func=fn)
        return s

    s = add("picard", cmd_picard, "blowup", "Picard number of X[n]")
    s.add_argument("--base-rho", type=int, required=True)
    s.add_argument("--base-dim", type=int, required=True)
    s.add_argument("--n", type=int, required=True)

    s = add("schedule", cmd_schedule, "blowup", "order of diagonal blow-ups producing X[n]")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--style", choices=["symmetric", "recursive"], default="symmetric")
    s.add_argument("--base-dim", type=int, default=1)

    s = add("chow", cmd_chow, "chow", "square and pencil test for a_1 h_1 + ... + a_n h_n on (P^1)^n")
    s.add_argument("--a", required=True, help="comma separated coefficients")

    s = add("cones", cmd_cones, "cones", "cones, membership certificates and Fano test for the presets")
    s.add_argument("--model", choices=["P13", "DP6"], required=True)
    s.add_argument("--cone", choices=["mori", "mori_minimal", "nef", "effective"], default="mori")
    s.add_argument("--contains", help="class coordinates, comma separated")
    s.add_argument("--fano", action="store_true")
    s.add_argument("--decompose", type=int, metavar="D", help="degree d of d L - sum m_i R_i")
    s.add_argument("--m", help="multiplicities m_1,m_2,m_3")

    s = add("stablemap", cmd_stablemap, "stablemaps", "operations on a stable map tree given as JSON")
    s.add_argument("--op", required=True, choices=[
        "validate", "canonicalize", "evaluate", "forget", "forget-map", "act-sym", "act-target"])
    s.add_argument("--tree", help="tree JSON (default: read standard input)")
    s.add_argument("--in", dest="in_path", help="read the tree from a file")
    s.add_argument("--label", type=int)
    s.add_argument("--labels", help="labels to forget")
    s.add_argument("--perm", help="images of 1..n")
    s.add_argument("--mobius", help="matrix entries a,b,c,d")

    s = add("pencils", cmd_pencils, "fibrations", "modular pencils of P^1[n], or classify a Picard signature")
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--classify", action="store_true")
    s.add_argument("--m-part", help="surviving 4-set of the forgetful part")
    s.add_argument("--a", help="coefficients a_1..a_n")

    s = add("factor", cmd_factor, "fibrations", "factor morphisms through forgetful maps or projections")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=int)
    s.add_argument("--I")
    s.add_argument("--J")
    s.add_argument("--product", help="JSON list of descriptors")
    s.add_argument("--genus", type=int)
    s.add_argument("--chosen", help="indices of the projections (curve case)")

    s = add("aut", cmd_aut, "autgroups", "automorphism group of a space given as JSON")
    s.add_argument("--space", required=True)
    s.add_argument("--connected", action="store_true", help="identity component only")
    s.add_argument("--order", action="store_true")
    s.add_argument("--tree", action="store_true", help="include the expression tree")

    s = add("bruteforce-diag", cmd_bruteforce_diag, "autgroups",
            "tuples in S_n^r permuting the diagonals of (C_1 x ... x C_r)^n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--workers", type=int, default=1)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        code, doc = args.func(args)
    except (InputError, ValueError, KeyError, TypeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        _emit({"error": str(e)}, pretty=False)
        return EXIT_INPUT
    _emit(doc, args.pretty)
    return code


if __name__ == "__main__":
    sys.exit(main())
