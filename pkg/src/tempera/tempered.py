"""Tempered representations: e-tempered parameters, tempered triples and the bijection."""

from __future__ import annotations

from collections import Counter
from itertools import product
from typing import Iterable

from .symbols import Catalog, ClassicalCuspidal, GLCuspidal, TemperaError, j1_satisfied
from .jordan import (AdmissibleTriple, EpsilonMap, JordanBlocks, delta_b_reduces, potentials,
                     singleton_defined, triple_from_json, triple_to_json, validate_triple, canonical)

# A unitarizable essentially square integrable symbol d(rho, a) is the pair (rho, a).


def _dsym(rho: GLCuspidal, a: int) -> tuple:
    if a < 1:
        raise TemperaError("d(%s,%d): a must be positive" % (rho.id, a))
    return (rho, int(a))


def dual_sym(d: tuple) -> tuple:
    rho, a = d
    return (rho.dual, a)


def _sym_key(d: tuple) -> tuple:
    return (d[0].id, d[1])


def sym_str(d: tuple) -> str:
    rho, a = d
    return "d(%s,%d)" % (rho.id, a)


def is_selfdual_sym(d: tuple) -> bool:
    return d[0].selfdual


class ETemperedParam:
    """pi_{j_1 d_1, ..., j_n d_n}: a square integrable core and signed reducing deltas."""

    __slots__ = ("core", "signed_deltas")

    def __init__(self, core: AdmissibleTriple, signed_deltas: Iterable = ()):
        self.core = core
        sd = []
        for (rho, b), j in signed_deltas:
            if j not in (1, -1):
                raise TemperaError("delta sign must be +1 or -1")
            sd.append((_dsym(rho, b), j))
        self.signed_deltas = tuple(sorted(sd, key=lambda x: (_sym_key(x[0]), x[1])))

    def deltas(self) -> list:
        return [d for d, _ in self.signed_deltas]

    def validate(self) -> list:
        out = []
        seen = set()
        for d, _ in self.signed_deltas:
            if d in seen:
                out.append("delta %s listed twice" % sym_str(d))
            seen.add(d)
            if not delta_b_reduces(self.core, d[0], d[1]):
                out.append("%s x| pi is irreducible" % sym_str(d))
        return out


class TemperedParam:
    """gamma_1 x ... x gamma_m x| pi_{j_1 d_1,...}."""

    __slots__ = ("gammas", "e_core")

    def __init__(self, gammas: Iterable, e_core: ETemperedParam):
        self.gammas = tuple(sorted((_dsym(r, a) for r, a in gammas), key=_sym_key))
        self.e_core = e_core

    @property
    def core(self) -> AdmissibleTriple:
        return self.e_core.core

    def validate(self) -> list:
        out = validate_triple(self.core)
        if out:
            return out
        out = self.e_core.validate()
        ds = set(self.e_core.deltas())
        for g in self.gammas:
            rho, a = g
            if g in ds:
                continue
            if not rho.has_dual():
                out.append("dual of %s unknown" % rho.id)
            elif rho.selfdual and delta_b_reduces(self.core, rho, a):
                out.append("gamma %s is neither irreducible over pi nor one of the deltas" % sym_str(g))
        return out

    def __str__(self):
        g = " x ".join(sym_str(x) for x in self.gammas)
        d = ",".join("%s%s" % ("+" if j > 0 else "-", sym_str(x)) for x, j in self.e_core.signed_deltas)
        core = "%s[%s]" % (self.core, d) if d else str(self.core)
        return "%s x| %s" % (g, core) if g else core


class TemperedTriple:
    """(Jord multiset, cuspidal, eps) for a tempered representation.

    eps.single is keyed (rho, a); pairs are keyed ((rho1, a1), (rho2, a2)).
    """

    __slots__ = ("jord", "cusp", "single", "pair")

    def __init__(self, jord: Counter, cusp: ClassicalCuspidal, single: dict | None = None,
                 pair: dict | None = None):
        self.jord = Counter({k: v for k, v in jord.items() if v > 0})
        self.cusp = cusp
        self.single = dict(single or {})
        p = {}
        for (d1, d2), v in (pair or {}).items():
            if _sym_key(d1) > _sym_key(d2):
                d1, d2 = d2, d1
            p[(d1, d2)] = v
        self.pair = p

    def key(self) -> tuple:
        return (self.cusp.id,
                tuple(sorted((_sym_key(d), m) for d, m in self.jord.items())),
                tuple(sorted((_sym_key(d), v) for d, v in self.single.items())),
                tuple(sorted((_sym_key(a), _sym_key(b), v) for (a, b), v in self.pair.items())))

    def __eq__(self, other):
        return isinstance(other, TemperedTriple) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __str__(self):
        parts = []
        for d, m in sorted(self.jord.items(), key=lambda kv: _sym_key(kv[0])):
            s = self.single.get(d)
            tag = "" if s is None else ("+" if s > 0 else "-")
            parts.append("%s%s%s" % (sym_str(d), "^%d" % m if m > 1 else "", tag))
        return "T(%s; %s)" % (self.cusp.id, " ".join(parts))


def goldberg_length(deltas: Iterable, t: AdmissibleTriple) -> int:
    red = {(rho, b) for rho, b in deltas if delta_b_reduces(t, rho, b)}
    return 2 ** len(red)


def decompose(deltas: Iterable, t: AdmissibleTriple) -> list:
    """Irreducible constituents of d_1 x ... x d_k x| pi, one per sign vector on the
    distinct reducing deltas; the remaining factors become gammas."""
    deltas = [(rho, int(b)) for rho, b in deltas]
    red = sorted({d for d in deltas if delta_b_reduces(t, *d)}, key=_sym_key)
    gam = list(deltas)
    for d in red:
        gam.remove(d)
    out = []
    for signs in product((1, -1), repeat=len(red)):
        out.append(TemperedParam(gam, ETemperedParam(t, zip(red, signs))))
    return out


def jord_of_tempered(p: TemperedParam) -> Counter:
    out = Counter()
    for g in p.gammas:
        out[g] += 1
        out[dual_sym(g)] += 1
    for d in p.e_core.deltas():
        out[d] += 2
    for rho, a in p.core.jord.pairs():
        out[(rho, a)] += 1
    return out


def eps_of_tempered(p: TemperedParam) -> tuple:
    """(single, pair) sign data; pairs are stored against the anchor of each symbol."""
    single = {d: j for d, j in p.e_core.signed_deltas}
    core = p.core
    pot = potentials(core)
    pair = {}
    for rho, bs in core.jord.items():
        if singleton_defined(core.cusp, rho, bs[0]):
            for a in bs:
                single[(rho, a)] = pot[(rho, a)]
        else:
            anchor = bs[-1]
            for a in bs[:-1]:
                pair[((rho, a), (rho, anchor))] = pot[(rho, a)] * pot[(rho, anchor)]
    return single, pair


def param_to_triple(p: TemperedParam) -> TemperedTriple:
    bad = p.validate()
    if bad:
        raise TemperaError("invalid tempered parameter: " + "; ".join(bad))
    single, pair = eps_of_tempered(p)
    return TemperedTriple(jord_of_tempered(p), p.core.cusp, single, pair)


def _core_of(t: TemperedTriple) -> AdmissibleTriple:
    blocks, single, pair = {}, {}, {}
    for (rho, a), m in t.jord.items():
        if rho.selfdual and m % 2 == 1:
            blocks.setdefault(rho, []).append(a)
    for (rho, a), v in t.single.items():
        if t.jord.get((rho, a), 0) % 2 == 1:
            single[(rho, a)] = v
    for ((r1, a1), (r2, a2)), v in t.pair.items():
        if r1 == r2:
            pair[(r1, a1, a2)] = v
    return AdmissibleTriple(JordanBlocks(blocks), t.cusp, EpsilonMap(single, pair))


def validate_tempered_triple(t: TemperedTriple, check_admissible: bool = False) -> list:
    out = []
    for d, m in sorted(t.jord.items(), key=lambda kv: _sym_key(kv[0])):
        rho, a = d
        if a < 1:
            out.append("1: %s has nonpositive size" % sym_str(d))
            continue
        if not rho.has_dual():
            out.append("1(a): dual of %s unknown" % rho.id)
        elif t.jord.get(dual_sym(d), 0) != m:
            out.append("1(a): Jord is not selfdual at %s" % sym_str(d))
        if rho.selfdual and not j1_satisfied(rho, a) and m % 2:
            out.append("1(b): %s fails (J1) but has odd multiplicity" % sym_str(d))
    for d in sorted(t.single, key=_sym_key):
        rho, a = d
        m = t.jord.get(d, 0)
        if m == 0:
            out.append("3: eps on %s outside Jord" % sym_str(d))
        elif not rho.selfdual or not j1_satisfied(rho, a):
            out.append("3: eps on %s which is not selfdual with (J1)" % sym_str(d))
        elif m % 2 == 1 and not singleton_defined(t.cusp, rho, a):
            out.append("3(b): eps defined on odd-multiplicity %s with cuspidal blocks" % sym_str(d))
    for d, m in sorted(t.jord.items(), key=lambda kv: _sym_key(kv[0])):
        rho, a = d
        if not rho.selfdual or not j1_satisfied(rho, a) or d in t.single:
            continue
        if m % 2 == 0:
            out.append("3(a): eps missing on even-multiplicity %s" % sym_str(d))
        elif singleton_defined(t.cusp, rho, a):
            out.append("3(b): eps missing on %s" % sym_str(d))
    for (d1, d2) in sorted(t.pair, key=lambda k: (_sym_key(k[0]), _sym_key(k[1]))):
        if d1[0] != d2[0]:
            out.append("3(c): pairwise eps across distinct symbols %s, %s" % (sym_str(d1), sym_str(d2)))
        elif d1 == d2:
            out.append("3(c): pairwise eps on %s with itself" % sym_str(d1))
        elif t.jord.get(d1, 0) % 2 == 0 or t.jord.get(d2, 0) % 2 == 0:
            out.append("3(c): pairwise eps on %s, %s needs odd multiplicities" % (sym_str(d1), sym_str(d2)))
    if out:
        return out
    for v in validate_triple(_core_of(t), check_admissible=check_admissible):
        out.append("4: " + v)
    return out


def triple_to_param(t: TemperedTriple) -> TemperedParam:
    bad = validate_tempered_triple(t)
    if bad:
        raise TemperaError("invalid tempered triple: " + "; ".join(bad))
    gammas, deltas = [], []
    for d, m in sorted(t.jord.items(), key=lambda kv: _sym_key(kv[0])):
        rho, a = d
        if not rho.selfdual:
            if rho.id < rho.dual.id:
                gammas += [d] * m
        elif not j1_satisfied(rho, a):
            gammas += [d] * (m // 2)
        elif m % 2 == 0:
            deltas.append((d, t.single[d]))
            gammas += [d] * (m // 2 - 1)
        else:
            gammas += [d] * (m // 2)
    core = canonical(_core_of(t))
    return TemperedParam(gammas, ETemperedParam(core, deltas))


def _gamma_multiset(p: TemperedParam) -> Counter:
    c = Counter()
    for g in p.gammas:
        c[_sym_key(g)] += 1
        c[_sym_key(dual_sym(g))] += 1
    return c


def params_equivalent(p: TemperedParam, q: TemperedParam) -> bool:
    if _gamma_multiset(p) != _gamma_multiset(q):
        return False
    if canonical(p.core) != canonical(q.core):
        return False
    sp = {(_sym_key(d), j) for d, j in p.e_core.signed_deltas}
    sq = {(_sym_key(d), j) for d, j in q.e_core.signed_deltas}
    return sp == sq


def is_generic(p: TemperedParam) -> bool:
    cusp = p.core.cusp
    if cusp.generic is None:
        raise TemperaError("genericity data missing for %s" % cusp.id)
    if not cusp.generic:
        return False
    if any(j != 1 for _, j in p.e_core.signed_deltas):
        return False
    pot = potentials(p.core)
    for rho, bs in p.core.jord.items():
        vals = [pot[(rho, a)] for a in bs]
        if singleton_defined(p.core.cusp, rho, bs[0]):
            if any(v != 1 for v in vals):
                return False
        elif len(set(vals)) > 1:
            return False
    return True


# ---- JSON -------------------------------------------------------------------------

def param_to_json(p: TemperedParam) -> dict:
    return {
        "core": triple_to_json(p.core),
        "deltas": [{"rho": d[0].id, "b": d[1], "sign": j} for d, j in p.e_core.signed_deltas],
        "gammas": [{"rho": g[0].id, "a": g[1]} for g in p.gammas],
    }


def param_from_json(d: dict, cat: Catalog) -> TemperedParam:
    try:
        core = triple_from_json(d["core"], cat)
        deltas = [((cat.rho(e["rho"]), int(e["b"])), int(e.get("sign", 1))) for e in d.get("deltas", [])]
        gammas = [(cat.rho(e["rho"]), int(e["a"])) for e in d.get("gammas", [])]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, TemperaError):
            raise
        raise TemperaError("malformed parameter JSON: %s" % exc) from None
    return TemperedParam(gammas, ETemperedParam(core, deltas))


def tempered_triple_to_json(t: TemperedTriple) -> dict:
    jord = []
    for d, m in sorted(t.jord.items(), key=lambda kv: _sym_key(kv[0])):
        e = {"rho": d[0].id, "a": d[1]}
        if m != 1:
            e["mult"] = m
        jord.append(e)
    eps = [{"rho": d[0].id, "a": d[1], "sign": v} for d, v in sorted(t.single.items(), key=lambda kv: _sym_key(kv[0]))]
    for (d1, d2), v in sorted(t.pair.items(), key=lambda kv: (_sym_key(kv[0][0]), _sym_key(kv[0][1]))):
        e = {"rho": d1[0].id, "a": d1[1], "b": d2[1], "rel": v}
        if d2[0] != d1[0]:
            e["rho_b"] = d2[0].id
        eps.append(e)
    return {"cusp": t.cusp.id, "jord": jord, "eps": eps}


def tempered_triple_from_json(d: dict, cat: Catalog) -> TemperedTriple:
    if not isinstance(d, dict):
        raise TemperaError("triple must be a JSON object")
    try:
        cusp = cat.cusp(d["cusp"])
        jord = Counter()
        for e in d.get("jord", []):
            jord[(cat.rho(e["rho"]), int(e["a"]))] += int(e.get("mult", 1))
        single, pair = {}, {}
        for e in d.get("eps", []):
            r = cat.rho(e["rho"])
            if "b" in e:
                r2 = cat.rho(e.get("rho_b", e["rho"]))
                pair[((r, int(e["a"])), (r2, int(e["b"])))] = int(e["rel"])
            else:
                single[(r, int(e["a"]))] = int(e["sign"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, TemperaError):
            raise
        raise TemperaError("malformed triple JSON: %s" % exc) from None
    for v in list(single.values()) + list(pair.values()):
        if v not in (1, -1):
            raise TemperaError("signs must be +1 or -1")
    return TemperedTriple(jord, cusp, single, pair)
