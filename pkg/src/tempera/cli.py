"""Command line front end: `tempera <command> ...`."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .symbols import Catalog, TemperaError
from .multiseg import (M_star, M_star_pipeline, RTensor, format_lincomb, multisegment_to_json,
                       parse_element, parse_segment)
from .jordan import (Reducibility, deform_down, deform_up, delta_b_reduces,
                     point_reduces, segment_irreducible, triple_from_json, triple_to_json, validate_triple)
from .tempered import (TemperedParam, decompose, goldberg_length, is_generic, param_from_json,
                       param_to_json, params_equivalent, tempered_triple_from_json,
                       triple_to_param, validate_tempered_triple)
from .jacquet import (Case1, Case2a, Case2bI, chain_from_json,
                      check_lemma_even, check_lemma_main, check_lemma_odd2, check_tempered_mult,
                      mu_star_bound, pi_delta_case, replay)
from . import generate

DEFAULT_MAX_TERMS = 10 ** 6


class _Exit(Exception):
    def __init__(self, code: int):
        self.code = code


# ---- loading ---------------------------------------------------------------------------

def _read_json(path: str):
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as e:
        raise TemperaError("cannot read %s: %s" % (path, e.strerror or e)) from None
    except json.JSONDecodeError as e:
        raise TemperaError("%s is not valid JSON: %s" % (path, e)) from None


def _catalog(args, obj=None, implicit: bool = False) -> Catalog:
    if getattr(args, "catalog", None):
        return Catalog.load(args.catalog)
    if isinstance(obj, dict) and "catalog" in obj:
        return Catalog.from_dict(obj["catalog"])
    if implicit:
        return Catalog(implicit=True)
    return generate.default_catalog()


def _load(args, path: str):
    obj = _read_json(path)
    return obj, _catalog(args, obj)


def _triple_or_chain(obj, cat: Catalog) -> tuple:
    """Accept a chain ({"base", "steps"}) or a triple ({"cusp", "jord", "eps"})."""
    if isinstance(obj, dict) and "base" in obj:
        ch = chain_from_json(obj, cat)
        return replay(ch), ch
    if isinstance(obj, dict) and "triple" in obj:
        obj = obj["triple"]
    return triple_from_json(obj, cat), None


def _param(obj, cat: Catalog) -> TemperedParam:
    if not isinstance(obj, dict):
        raise TemperaError("expected a JSON object")
    if "core" in obj:
        return param_from_json(obj, cat)
    t = tempered_triple_from_json(obj, cat)
    return triple_to_param(t)


def _emit(args, text_lines, payload) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for line in text_lines:
            print(line)


def _terms_json(e) -> list:
    out = []
    for k, c in e.sorted_items():
        if isinstance(e, RTensor):
            out.append({"coef": c, "left": multisegment_to_json(k[0]), "right": multisegment_to_json(k[1])})
        else:
            out.append({"coef": c, "gl": multisegment_to_json(k[0]), "classical": str(k[1])})
    return out


def _guard(args, n: int) -> None:
    if n > args.max_terms:
        raise TemperaError("expansion has %d terms, above --max-terms %d" % (n, args.max_terms))


# ---- commands ---------------------------------------------------------------------------

def cmd_mstar(args) -> int:
    cat = _catalog(args, implicit=True)
    x = parse_element(args.expr, cat)
    e = M_star_pipeline(x) if args.pipeline else M_star(x)
    _guard(args, len(e))
    _emit(args, format_lincomb(e), {"terms": _terms_json(e)})
    return 0


def cmd_mu_bound(args) -> int:
    obj, cat = _load(args, args.chain)
    ch = chain_from_json(obj, cat)
    e = mu_star_bound(ch, depth=args.depth, filter=args.filter, max_terms=args.max_terms)
    _emit(args, format_lincomb(e), {"terms": _terms_json(e), "filtered": args.filter})
    return 0


def cmd_validate_triple(args) -> int:
    obj, cat = _load(args, args.file)
    if isinstance(obj, dict) and "base" in obj:
        raise TemperaError("this is a chain; use validate-chain")
    t = tempered_triple_from_json(obj, cat)
    bad = validate_tempered_triple(t, check_admissible=args.admissible)
    _emit(args, bad or ["valid"], {"violations": bad})
    if bad:
        raise _Exit(1)
    return 0


def cmd_validate_chain(args) -> int:
    obj, cat = _load(args, args.chain)
    ch = chain_from_json(obj, cat)
    t = replay(ch)
    bad = validate_triple(t, check_admissible=True)
    _emit(args, bad or ["valid %s" % t], {"violations": bad, "triple": triple_to_json(t)})
    if bad:
        raise _Exit(1)
    return 0


def _case_lines(case) -> tuple:
    if isinstance(case, Case1):
        return ["Case1 a=%d witness=%s" % (case.a, case.witness_seg)], \
            {"case": "Case1", "a": case.a, "witness": str(case.witness_seg)}
    if isinstance(case, Case2a):
        return ["Case2a witness=%s" % (case.witness_seg,)], {"case": "Case2a", "witness": str(case.witness_seg)}
    if isinstance(case, Case2bI):
        sb = str(case.seg_b) if case.seg_b is not None else "1"
        return ["Case2bI a=%d seg_b=%s seg_a=%s" % (case.a, sb, case.seg_a)], \
            {"case": "Case2bI", "a": case.a, "seg_b": sb, "seg_a": str(case.seg_a)}
    return ["Case2bII tau_label=%+d" % case.tau_label], {"case": "Case2bII", "tau_label": case.tau_label}


def cmd_pi_delta(args) -> int:
    obj, cat = _load(args, args.file)
    t, _ = _triple_or_chain(obj, cat)
    case = pi_delta_case(t, cat.rho(args.rho), args.b, args.sign)
    lines, payload = _case_lines(case)
    _emit(args, lines, payload)
    return 0


def cmd_decompose(args) -> int:
    obj, cat = _load(args, args.file)
    if not isinstance(obj, dict) or "deltas" not in obj:
        raise TemperaError("decompose input needs 'deltas' and a 'triple' or 'chain'")
    if "chain" in obj:
        t = replay(chain_from_json(obj["chain"], cat))
    else:
        t = triple_from_json(obj.get("triple"), cat)
    bad = validate_triple(t)
    if bad:
        raise TemperaError("invalid triple: " + "; ".join(bad))
    try:
        deltas = [(cat.rho(e["rho"]), int(e["b"])) for e in obj["deltas"]]
    except (KeyError, TypeError, ValueError):
        raise TemperaError("deltas must be a list of {rho, b}") from None
    parts = decompose(deltas, t)
    assert len(parts) == goldberg_length(deltas, t)
    lines = ["constituents %d" % len(parts)]
    for p in parts:
        sv = " ".join("%s%s(%s,%d)" % ("+" if j > 0 else "-", "d", d[0].id, d[1])
                      for d, j in p.e_core.signed_deltas)
        lines.append(sv or "(irreducible)")
    _emit(args, lines, {"constituents": [param_to_json(p) for p in parts]})
    return 0


def cmd_deform(args) -> int:
    obj, cat = _load(args, args.file)
    t, _ = _triple_or_chain(obj, cat)
    rho = cat.rho(args.rho)
    if args.down:
        out = deform_down(t, rho, args.down[0], args.down[1])
    else:
        out = deform_up(t, rho, args.up[0], args.up[1])
    _emit(args, [str(out)], triple_to_json(out))
    return 0


def _exponent(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise TemperaError("cannot read exponent %r" % text) from None


def cmd_reduces(args) -> int:
    obj, cat = _load(args, args.file)
    t, _ = _triple_or_chain(obj, cat)
    if args.segment:
        seg = parse_segment(args.segment, cat)
        r = segment_irreducible(t, seg)
        _emit(args, [r.value], {"result": r.value})
        return 1 if r is Reducibility.IRREDUCIBLE else 0
    rho = cat.rho(args.rho)
    if args.b is not None:
        ok = delta_b_reduces(t, rho, args.b)
        word = "Reduces" if ok else "Irreducible"
        _emit(args, [word], {"result": word})
        return 0 if ok else 1
    r = point_reduces(t, rho, _exponent(args.alpha))
    _emit(args, [r.value], {"result": r.value})
    return 0 if r is Reducibility.REDUCES else 1


def cmd_equiv(args) -> int:
    o1, cat = _load(args, args.file1)
    o2 = _read_json(args.file2)
    p, q = _param(o1, cat), _param(o2, cat)
    for x in (p, q):
        bad = x.validate()
        if bad:
            raise TemperaError("invalid parameter: " + "; ".join(bad))
    same = params_equivalent(p, q)
    _emit(args, ["equivalent" if same else "not equivalent"], {"equivalent": same})
    return 0 if same else 1


def cmd_generic(args) -> int:
    obj, cat = _load(args, args.file)
    p = _param(obj, cat)
    bad = p.validate()
    if bad:
        raise TemperaError("invalid parameter: " + "; ".join(bad))
    g = is_generic(p)
    _emit(args, ["generic" if g else "not generic"], {"generic": g})
    return 0 if g else 1


_LEMMAS = {
    "def-main": check_lemma_main,
    "def-even": check_lemma_even,
    "def-odd2": check_lemma_odd2,
}


def cmd_check_lemma(args) -> int:
    which = args.lemma
    if args.chains:
        cat = _catalog(args, _read_json(args.chains[0]))
        items = []
        for path in args.chains:
            ch = chain_from_json(_read_json(path), cat)
            if which == "pr-def-t":
                if not args.delta:
                    raise TemperaError("pr-def-t needs --delta RHO:B (repeatable)")
                items.append((ch, [_delta_arg(cat, d) for d in args.delta]))
            else:
                if args.rho is None or args.b is None:
                    raise TemperaError("%s needs --rho and --b" % which)
                items.append((ch, (cat.rho(args.rho), args.b)))
    else:
        cat = _catalog(args)
        items = generate.random_lemma_instances(which, cat, args.count, generate.rng_from_env())
    reports = []
    for ch, inst in items:
        if which == "pr-def-t":
            reports.append(check_tempered_mult(ch, inst, max_terms=args.max_terms))
        else:
            reports.append(_LEMMAS[which](ch, inst[0], inst[1], max_terms=args.max_terms))
    failed = sum(1 for r in reports if not r.ok)
    lines = []
    for r in reports:
        lines.extend(r.lines())
    lines.append("%s: %d instances, %d failed" % (which, len(reports), failed))
    payload = {"lemma": which, "instances": [
        {"instance": r.instance, "terms": len(r.matches), "multiplicity": r.total,
         "expected": r.expected, "ok": r.ok} for r in reports], "failed": failed}
    _emit(args, lines, payload)
    return 1 if failed or not reports else 0


def _delta_arg(cat: Catalog, text: str) -> tuple:
    try:
        rid, b = text.rsplit(":", 1)
        return cat.rho(rid), int(b)
    except ValueError:
        raise TemperaError("--delta expects RHO:B, got %r" % text) from None


# ---- parser -------------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, top: bool) -> None:
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    p.add_argument("--catalog", metavar="FILE", default=d(None), help="symbol catalog (JSON)")
    p.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")
    p.add_argument("--max-terms", type=int, metavar="N", default=d(DEFAULT_MAX_TERMS),
                   help="abort expansions larger than N terms")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tempera", description="Jacquet-module bookkeeping for "
                                 "square integrable and tempered representations of classical groups.")
    _common(ap, True)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        p = sub.add_parser(name, help=help)
        _common(p, False)
        p.set_defaults(fn=fn)
        return p

    p = add("mstar", cmd_mstar, "expand M* of a multisegment expression")
    p.add_argument("expr")
    p.add_argument("--pipeline", action="store_true", help="use the composite-map pipeline")

    p = add("mu-bound", cmd_mu_bound, "upper bound for mu* along a construction chain")
    p.add_argument("chain")
    p.add_argument("--filter", action="store_true", help="apply the square-integrability filters")
    p.add_argument("--depth", type=int, default=None)

    p = add("validate-triple", cmd_validate_triple, "validate a (tempered) triple")
    p.add_argument("file")
    p.add_argument("--admissible", action="store_true", help="also require a reduction to the cuspidal")

    p = add("validate-chain", cmd_validate_chain, "replay and validate a construction chain")
    p.add_argument("chain")

    p = add("pi-delta", cmd_pi_delta, "which case defines pi_delta")
    p.add_argument("file")
    p.add_argument("--rho", required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)

    p = add("decompose", cmd_decompose, "constituents of d_1 x ... x d_k x| pi")
    p.add_argument("file")

    p = add("deform", cmd_deform, "deform a Jordan block down or up")
    p.add_argument("file")
    p.add_argument("--rho", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--down", nargs=2, type=int, metavar=("A", "K"))
    g.add_argument("--up", nargs=2, type=int, metavar=("A_LOW", "A"))

    p = add("reduces", cmd_reduces, "reducibility of nu^alpha rho x| pi, d(rho,b) x| pi or a segment")
    p.add_argument("file")
    p.add_argument("--rho")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--alpha")
    g.add_argument("--b", type=int)
    g.add_argument("--segment")

    p = add("equiv", cmd_equiv, "are two tempered parameters equivalent")
    p.add_argument("file1")
    p.add_argument("file2")

    p = add("generic", cmd_generic, "genericity of a tempered parameter")
    p.add_argument("file")

    p = add("check-lemma", cmd_check_lemma, "multiplicity table for a lemma")
    p.add_argument("lemma", choices=("def-main", "def-even", "def-odd2", "pr-def-t"))
    p.add_argument("chains", nargs="*")
    p.add_argument("--rho")
    p.add_argument("--b", type=int)
    p.add_argument("--delta", action="append", metavar="RHO:B")
    p.add_argument("--count", type=int, default=100, help="random instances when no chain is given")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "reduces" and args.segment is None and args.rho is None:
        ap.error("reduces needs --rho with --alpha or --b")
    try:
        return args.fn(args)
    except _Exit as e:
        return e.code
    except TemperaError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
