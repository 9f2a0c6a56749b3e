"""Construction chains and the computable upper bound for Jacquet modules.

The bound is never an exact decomposition. Each chain step is an embedding
pi -> d(seg) x| pi', so mu*(pi) <= M*(d(seg)) x| mu*(pi'), and the Jordan
filter only drops terms that cannot occur in a square integrable pi.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple, Union

from .symbols import Catalog, ClassicalCuspidal, GLCuspidal, HalfInt, Parity, TemperaError
from .multiseg import (ONE, LabeledDelta, Multisegment, RSElement, Segment, delta, gl_support, induce,
                       ms, mu_star_action, rs_unit, segment, supp)
from .jordan import (AdmissibleTriple, Reducibility, add_pair, cuspidal_triple, deform_down,
                     deform_up, delta_b_reduces, eps_pair, eps_single, point_reduces, potentials,
                     reduction_path, singleton_defined)


class AddPair(NamedTuple):
    rho: GLCuspidal
    a_minus: int
    a: int
    sign: int | None = None

    def segment(self) -> Segment:
        if self.a_minus == 0:
            return segment(self.rho, HalfInt(1), HalfInt(self.a - 1))
        return segment(self.rho, HalfInt(1 - self.a_minus), HalfInt(self.a - 1))

    def apply(self, t: AdmissibleTriple) -> AdmissibleTriple:
        return add_pair(t, self.rho, self.a_minus, self.a, self.sign)

    def __str__(self):
        s = "" if self.sign is None else ",%+d" % self.sign
        return "add_pair(%s,%d,%d%s)" % (self.rho.id, self.a_minus, self.a, s)


class DeformUp(NamedTuple):
    rho: GLCuspidal
    a_low: int
    a: int

    def segment(self) -> Segment:
        return segment(self.rho, HalfInt(self.a_low + 1), HalfInt(self.a - 1))

    def apply(self, t: AdmissibleTriple) -> AdmissibleTriple:
        return deform_up(t, self.rho, self.a_low, self.a)

    def __str__(self):
        return "deform_up(%s,%d,%d)" % (self.rho.id, self.a_low, self.a)


Step = Union[AddPair, DeformUp]


class ConstructionChain:
    __slots__ = ("base", "steps")

    def __init__(self, base: ClassicalCuspidal, steps=()):
        self.base = base
        self.steps = tuple(steps)

    def prefix(self, n: int) -> "ConstructionChain":
        return ConstructionChain(self.base, self.steps[:n])

    def extend(self, step: Step) -> "ConstructionChain":
        return ConstructionChain(self.base, self.steps + (step,))

    def __len__(self):
        return len(self.steps)

    def __str__(self):
        return "%s: %s" % (self.base.id, " ; ".join(map(str, self.steps)) or "(cuspidal)")


def replay_all(chain: ConstructionChain) -> list:
    """Triples after each prefix, starting with the cuspidal one."""
    t = cuspidal_triple(chain.base)
    out = [t]
    for i, st in enumerate(chain.steps):
        try:
            t = st.apply(t)
        except TemperaError as e:
            raise TemperaError("step %d (%s): %s" % (i, st, e)) from None
        out.append(t)
    return out


def replay(chain: ConstructionChain) -> AdmissibleTriple:
    return replay_all(chain)[-1]


def partial_cuspidal_support(chain: ConstructionChain) -> ClassicalCuspidal:
    return chain.base


def chain_of_triple(t: AdmissibleTriple) -> ConstructionChain:
    """A chain replaying to t, read off a reduction path."""
    path = reduction_path(t)
    if path is None:
        raise TemperaError("triple %s does not reduce to its cuspidal support" % t)
    steps = []
    cur = t
    for kind, seg, lower in path:
        rho = seg.rho
        if kind == "deform":
            a = seg.hi.twice_value + 1
            steps.append(DeformUp(rho, a - 2, a))
        elif kind == "pair":
            a_minus, a = 1 - seg.lo.twice_value, seg.hi.twice_value + 1
            steps.append(AddPair(rho, a_minus, a, _pair_sign(cur, lower, rho, a)))
        else:
            steps.append(AddPair(rho, 0, seg.hi.twice_value + 1, 1))
        cur = lower
    return ConstructionChain(t.cusp, reversed(steps))


def _pair_sign(upper: AdmissibleTriple, lower: AdmissibleTriple, rho: GLCuspidal, a: int) -> int:
    pot = potentials(upper)
    if singleton_defined(upper.cusp, rho, a):
        return pot[(rho, a)]
    rest = lower.blocks(rho)
    return pot[(rho, a)] * pot[(rho, rest[-1])] if rest else 1


# ---- the bound -------------------------------------------------------------------------

def _gl_survives(m: Multisegment, t: AdmissibleTriple) -> bool:
    if not m:
        return True
    for s in m:
        if not s.rho.selfdual:
            return True
        if s.hi.twice_value + 1 in t.blocks(s.rho):
            return True
    return False


def jordan_filter(e: RSElement, t: AdmissibleTriple) -> RSElement:
    """Drop terms none of whose possible leading exponents x has (rho, 2x+1) in Jord(t).

    A leading cuspidal of an irreducible subquotient of d(D_1) x ... x d(D_k)
    is the top end of some D_i, so a term is kept as soon as one top end passes.
    """
    return RSElement((k, c) for k, c in e.items() if _gl_survives(k[0], t))


def _exponent_sum_positive(m: Multisegment) -> bool:
    pts = gl_support(m)
    if not pts:
        return True
    rhos = {r for _, r in pts}
    if all(r.dim is not None for r in rhos):
        return sum(x.twice_value * r.dim * n for (x, r), n in pts.items()) > 0
    if len(rhos) == 1:
        return sum(x.twice_value * n for (x, r), n in pts.items()) > 0
    return any(x.twice_value > 0 for x, _ in pts)


def casselman_filter(e: RSElement) -> RSElement:
    """Drop terms whose GL part has non-positive central exponent.

    Square integrable representations only have Jacquet terms theta (x) sigma
    with e(theta) > 0; when dimensions are unknown and several symbols mix,
    only terms with no positive exponent at all are dropped.
    """
    return RSElement((k, c) for k, c in e.items() if _exponent_sum_positive(k[0]))


def square_integrable_filter(e: RSElement, t: AdmissibleTriple) -> RSElement:
    return casselman_filter(jordan_filter(e, t))


def _guard(e: RSElement, max_terms: int | None) -> None:
    if max_terms is not None and len(e) > max_terms:
        raise TemperaError("expansion exceeded %d terms" % max_terms)


def mu_star_bound(chain: ConstructionChain, depth: int | None = None, filter: bool = False,
                  max_terms: int | None = None, within: Counter | None = None) -> RSElement:
    """Upper bound for mu*(pi) along the chain.

    filter applies the Jordan-block and central-exponent exclusions at every
    stage. within restricts to terms whose GL support lies inside the given
    multiset of points; supports add under the action, so this is exact for
    questions about supports inside it.
    """
    if depth is None:
        depth = len(chain)
    if not 0 <= depth <= len(chain):
        raise TemperaError("depth %d outside 0..%d" % (depth, len(chain)))
    triples = replay_all(chain.prefix(depth))
    bound = rs_unit(triples[0])
    for st, prev, cur in zip(chain.steps[:depth], triples, triples[1:]):
        seg = st.segment()
        bound = mu_star_action(seg, bound, within)
        # the degree-zero part of mu*(pi) is 1 (x) pi itself
        whole = (ONE, induce(ms(seg), prev))
        c = bound.pop(whole, 0)
        if c != 1:
            raise TemperaError("degree-zero part of the bound has coefficient %d" % c)
        bound[(ONE, cur)] = 1
        if filter:
            bound = square_integrable_filter(bound, cur)
        _guard(bound, max_terms)
    return bound


def triple_bound(t: AdmissibleTriple, filter: bool = True, max_terms: int | None = None,
                 within: Counter | None = None) -> RSElement:
    return mu_star_bound(chain_of_triple(t), filter=filter, max_terms=max_terms, within=within)


def multiplicity(term: tuple, e: RSElement) -> int:
    return e.get(term, 0)


def terms_with_support(e: RSElement, target: Counter) -> list:
    return sorted(((k, c) for k, c in e.items() if supp(k[0]) == target), key=lambda kv: str(kv[0]))


# ---- the pi_delta dispatcher ------------------------------------------------------------

@dataclass(frozen=True)
class Case1:
    a: int
    witness_seg: Segment

    name = "Case1"


@dataclass(frozen=True)
class Case2a:
    witness_seg: Segment

    name = "Case2a"


@dataclass(frozen=True)
class Case2bI:
    a: int
    seg_b: Segment | None
    seg_a: Segment

    name = "Case2bI"


@dataclass(frozen=True)
class Case2bII:
    tau_label: int

    name = "Case2bII"


PiDeltaCase = Union[Case1, Case2a, Case2bI, Case2bII]


def pi_delta_case(t: AdmissibleTriple, rho: GLCuspidal, b: int, sign: int = 1) -> PiDeltaCase:
    if not delta_b_reduces(t, rho, b):
        raise TemperaError("d(%s,%d) x| pi does not reduce" % (rho.id, b))
    J = t.blocks(rho)
    low = [a for a in J if a <= b]
    top = HalfInt(b - 1)
    if low:
        a = max(low)
        return Case1(a, segment(rho, HalfInt(a + 1), top))
    if b % 2 == 0:
        return Case2a(segment(rho, HalfInt(1), top))
    if J:
        a = min(J)
        return Case2bI(a, segment(rho, HalfInt(2), top), segment(rho, HalfInt(2), HalfInt(a - 1)))
    if t.cusp.blocks(rho):
        raise TemperaError("inconsistent data: Jord_%s(pi) is empty but the cuspidal has blocks" % rho.id)
    return Case2bII(sign)


def lemma_support(t: AdmissibleTriple, rho: GLCuspidal, b: int) -> Counter:
    """Support prescribed for theta by the lemma governing (t, rho, b), computed pointwise."""
    J = t.blocks(rho)
    low = [a for a in J if a <= b]
    out = Counter()
    if low:
        start = HalfInt(max(low) + 1)
    elif b % 2 == 0:
        start = HalfInt(1)
    elif J:
        start = HalfInt(2)
        x = start
        while x.twice_value <= min(J) - 1:
            out[(x, rho)] += 1
            x = x + 1
    else:
        start = HalfInt(2)
    x = start
    while x.twice_value <= b - 1:
        out[(x, rho)] += 2
        x = x + 1
    return out


def case_support(case: PiDeltaCase) -> Counter:
    if isinstance(case, (Case1, Case2a)):
        return supp(ms(case.witness_seg, case.witness_seg))
    if isinstance(case, Case2bI):
        return supp(ms(case.seg_a, case.seg_b, case.seg_b))
    return Counter()


# ---- lemma replication ---------------------------------------------------------------------

@dataclass
class LemmaReport:
    lemma: str
    instance: str
    support: Counter
    matches: list
    expected: int

    @property
    def total(self) -> int:
        return sum(c for _, c in self.matches)

    @property
    def ok(self) -> bool:
        if self.expected == 1:
            return len(self.matches) == 1 and self.matches[0][1] == 1
        return self.total == self.expected

    def lines(self) -> list:
        out = ["%s %s" % (self.lemma, self.instance)]
        for k, c in self.matches:
            out.append("  %d  %s (x) %s" % (c, k[0], k[1]))
        out.append("  terms=%d multiplicity=%d expected=%d %s"
                   % (len(self.matches), self.total, self.expected, "ok" if self.ok else "FAIL"))
        return out


def _apply_deltas(segs, e: RSElement, max_terms: int | None, within: Counter | None = None) -> RSElement:
    for s in reversed(segs):
        e = mu_star_action(s, e, within)
        _guard(e, max_terms)
    return e


def check_lemma_main(chain: ConstructionChain, rho: GLCuspidal, b: int,
                     max_terms: int | None = None) -> LemmaReport:
    t = replay(chain)
    case = pi_delta_case(t, rho, b)
    if not isinstance(case, Case1):
        raise TemperaError("instance is not covered by the Jord-meets-[1,b] case")
    target = case_support(case)
    e = _apply_deltas([delta(rho, b)], mu_star_bound(chain, filter=True, max_terms=max_terms, within=target),
                      max_terms, target)
    return LemmaReport("def-main", "%s | d(%s,%d)" % (t, rho.id, b), target, terms_with_support(e, target), 1)


def check_lemma_even(chain: ConstructionChain, rho: GLCuspidal, b: int,
                     max_terms: int | None = None) -> LemmaReport:
    t = replay(chain)
    case = pi_delta_case(t, rho, b)
    if not isinstance(case, Case2a):
        raise TemperaError("instance is not covered by the even case")
    target = case_support(case)
    e = _apply_deltas([delta(rho, b)], mu_star_bound(chain, filter=True, max_terms=max_terms, within=target),
                      max_terms, target)
    return LemmaReport("def-even", "%s | d(%s,%d)" % (t, rho.id, b), target, terms_with_support(e, target), 1)


def check_lemma_odd2(chain: ConstructionChain, rho: GLCuspidal, b: int,
                     max_terms: int | None = None) -> LemmaReport:
    t = replay(chain)
    case = pi_delta_case(t, rho, b)
    if not isinstance(case, Case2bI):
        raise TemperaError("instance is not covered by the odd case with Jord nonempty")
    a = case.a
    lower = deform_down(t, rho, a, (a - 1) // 2)
    target = case_support(case)
    inner = triple_bound(lower, filter=True, max_terms=max_terms, within=target)
    e = _apply_deltas([delta(rho, b), case.seg_a], inner, max_terms, target)
    return LemmaReport("def-odd2", "%s | d(%s,%d)" % (t, rho.id, b), target, terms_with_support(e, target), 1)


def check_tempered_mult(chain: ConstructionChain, deltas, max_terms: int | None = None) -> LemmaReport:
    """Multiplicity of d_1 (x) tau in d_1 x ... x d_n x| pi with a_1 maximal."""
    t = replay(chain)
    ds = sorted({(r, int(b)) for r, b in deltas}, key=lambda d: (-d[1], d[0].id))
    if not ds:
        raise TemperaError("need at least one delta")
    for r, b in ds:
        if not delta_b_reduces(t, r, b):
            raise TemperaError("d(%s,%d) x| pi does not reduce" % (r.id, b))
    segs = [delta(r, b) for r, b in ds]
    target = supp(segs[0])
    e = _apply_deltas(segs, mu_star_bound(chain, filter=True, max_terms=max_terms, within=target), max_terms, target)
    name = " x ".join("d(%s,%d)" % (r.id, b) for r, b in ds)
    return LemmaReport("pr-def-t", "%s | %s" % (t, name), target, terms_with_support(e, target), 2)


# ---- eps criteria -----------------------------------------------------------------------

PLUS = "Plus"
MINUS_OR_ABSENT = "MinusOrAbsent"


def segment_evidence(chain: ConstructionChain, seg: Segment) -> bool:
    """Whether the filtered bound has a term d(seg) (x) sigma, i.e. a term whose GL
    support is that of seg (the segment's points are distinct, so any product
    with this support has d(seg) as a subquotient)."""
    target = supp(seg)
    bound = mu_star_bound(chain, filter=True, within=target)
    return any(gl_support(k[0]) == target for k in bound)


def eps_criterion_pair(chain: ConstructionChain, rho: GLCuspidal, a_minus: int, a: int) -> str:
    t = replay(chain)
    J = t.blocks(rho)
    if a_minus not in J or a not in J or a_minus >= a or any(a_minus < x < a for x in J):
        raise TemperaError("(%s,%d),(%s,%d) are not neighbours in Jord" % (rho.id, a_minus, rho.id, a))
    seg = segment(rho, HalfInt(a_minus + 1), HalfInt(a - 1))
    return PLUS if segment_evidence(chain, seg) else MINUS_OR_ABSENT


def eps_criterion_min_even(chain: ConstructionChain, rho: GLCuspidal) -> str:
    t = replay(chain)
    if not rho.selfdual or rho.parity is not Parity.EVEN or not t.blocks(rho):
        raise TemperaError("Jord_%s has no even blocks" % rho.id)
    a = t.blocks(rho)[0]
    seg = segment(rho, HalfInt(1), HalfInt(a - 1))
    return PLUS if segment_evidence(chain, seg) else MINUS_OR_ABSENT


def tau_label(chain: ConstructionChain, rho: GLCuspidal) -> LabeledDelta:
    """Follow d([nu rho, nu^k rho]_{tau_i}; cusp) through the steps touching rho.

    A pair added on an empty rho, or above the current maximum, embeds pi into
    a segment times the previous representation whose top piece carries the
    pair's sign; deformations of the top block move k and keep the label.
    """
    if chain.base.blocks(rho):
        raise TemperaError("Jord_%s of the cuspidal support is nonempty" % rho.id)
    label, k = None, None
    triples = replay_all(chain)
    for st, prev in zip(chain.steps, triples):
        if st.rho != rho:
            continue
        J = prev.blocks(rho)
        if isinstance(st, AddPair):
            if not J or st.a > J[-1]:
                label, k = st.sign, (st.a - 1) // 2
        elif J and st.a_low == J[-1]:
            k = (st.a - 1) // 2
    if label is None:
        raise TemperaError("Jord_%s is empty" % rho.id)
    return LabeledDelta(rho, k, chain.base, label)


def eps_criterion_max_odd(chain: ConstructionChain, rho: GLCuspidal) -> int:
    t = replay(chain)
    if not t.blocks(rho):
        raise TemperaError("Jord_%s is empty" % rho.id)
    lab = tau_label(chain, rho)
    if lab.k != (t.blocks(rho)[-1] - 1) // 2:
        raise TemperaError("label tracking lost the top block of %s" % rho.id)
    return lab.sign


@dataclass
class CriterionCheck:
    kind: str
    where: str
    criterion: object
    stored: int
    agree: bool


def cross_check(chain: ConstructionChain) -> list:
    """Compare every applicable criterion with the replayed sign data.

    Plus must come with stored sign +1 and MinusOrAbsent with -1.
    """
    t = replay(chain)
    out = []
    for rho, bs in t.jord.items():
        for lo, hi in zip(bs, bs[1:]):
            c = eps_criterion_pair(chain, rho, lo, hi)
            s = eps_pair(t, rho, lo, hi)
            out.append(CriterionCheck("pair", "%s:%d,%d" % (rho.id, lo, hi), c, s, (c == PLUS) == (s == 1)))
        if rho.parity is Parity.EVEN:
            c = eps_criterion_min_even(chain, rho)
            s = eps_single(t, rho, bs[0])
            out.append(CriterionCheck("min_even", "%s:%d" % (rho.id, bs[0]), c, s, (c == PLUS) == (s == 1)))
        elif not chain.base.blocks(rho):
            c = eps_criterion_max_odd(chain, rho)
            s = eps_single(t, rho, bs[-1])
            out.append(CriterionCheck("max_odd", "%s:%d" % (rho.id, bs[-1]), c, s, c == s))
    return out


# ---- JSON ----------------------------------------------------------------------------------

def step_to_json(st: Step) -> dict:
    if isinstance(st, AddPair):
        d = {"op": "add_pair", "rho": st.rho.id, "a_minus": st.a_minus, "a": st.a}
        if st.sign is not None:
            d["sign"] = st.sign
        return d
    return {"op": "deform_up", "rho": st.rho.id, "a_low": st.a_low, "a": st.a}


def step_from_json(d: dict, cat: Catalog) -> Step:
    try:
        op = d["op"]
        rho = cat.rho(d["rho"])
        if op == "add_pair":
            s = d.get("sign")
            return AddPair(rho, int(d["a_minus"]), int(d["a"]), None if s is None else int(s))
        if op == "deform_up":
            return DeformUp(rho, int(d["a_low"]), int(d["a"]))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, TemperaError):
            raise
        raise TemperaError("malformed step %r" % (d,)) from None
    raise TemperaError("unknown step op %r" % (op,))


def chain_to_json(c: ConstructionChain) -> dict:
    return {"base": c.base.id, "steps": [step_to_json(s) for s in c.steps]}


def chain_from_json(d: dict, cat: Catalog) -> ConstructionChain:
    if not isinstance(d, dict) or "base" not in d:
        raise TemperaError("chain must be an object with a 'base' field")
    steps = d.get("steps", [])
    if not isinstance(steps, list):
        raise TemperaError("chain steps must be a list")
    return ConstructionChain(cat.cusp(d["base"]), [step_from_json(s, cat) for s in steps])
