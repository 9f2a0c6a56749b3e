"""One test per acceptance criterion; each records a single PASS/FAIL line."""

import random
import time
from collections import Counter, defaultdict
from fractions import Fraction as F
from itertools import combinations_with_replacement

import oracles
from helpers import RED, record, reducibility_matrix
from tempera.generate import (
    all_chains, default_catalog, possible_steps, random_chain, random_lemma_instances,
    random_param, reducing_deltas,
)
from tempera.jacquet import (
    AddPair, Case1, Case2a, Case2bI, Case2bII, ConstructionChain, check_lemma_even,
    check_lemma_main, check_lemma_odd2, check_tempered_mult, cross_check, pi_delta_case,
    replay,
)
from tempera.jordan import (
    add_pair, delta_b_reduces, deform_down, deform_up, eps_pair, eps_single, point_reduces,
    remove_pair, validate_triple,
)
from tempera.multiseg import (
    M_star, M_star_closed_terms, M_star_pipeline, Multisegment, Segment, _M_star_pipeline_terms,
    check_dual_segment, delta, m_star, segment, supp,
)
from tempera.symbols import GLCuspidal, HalfInt
from tempera.tempered import (
    decompose, goldberg_length, param_to_triple, params_equivalent, triple_to_param,
    validate_tempered_triple,
)

CAT = default_catalog()
SEED = 20240601


# ---- 1 ----------------------------------------------------------------------------

def test_hopf_axioms():
    sym = {"r": GLCuspidal("r", parity="odd"), "s": GLCuspidal("s", parity="even")}
    memo = {}

    def D(m):
        # package m_star, read back into plain tuples once per multisegment
        d = memo.get(m)
        if d is None:
            pk = Multisegment(Segment(sym[i], HalfInt(lo), HalfInt(hi)) for i, lo, hi in m)
            d = memo[m] = {(oracles.mseg(*((s.rho.id, s.lo.twice_value, s.hi.twice_value) for s in a)),
                            oracles.mseg(*((s.rho.id, s.lo.twice_value, s.hi.twice_value) for s in b))): c
                           for (a, b), c in m_star(pk).items()}
        return d

    t0 = time.perf_counter()
    sweep = oracles.multisegments_up_to(["r", "s"], range(-1, 2), 6)
    bad_co = bad_mult = 0
    for m in sweep:
        left, right = defaultdict(int), defaultdict(int)
        for (a, b), c in D(m).items():
            for (a1, a2), c1 in D(a).items():
                left[(a1, a2, b)] += c * c1
            for (b1, b2), c2 in D(b).items():
                right[(a, b1, b2)] += c * c2
        bad_co += left != right
        for k in range(1, len(m)):
            prod = defaultdict(int)
            for (a1, b1), c1 in D(m[:k]).items():
                for (a2, b2), c2 in D(m[k:]).items():
                    prod[(oracles.mul(a1, a2), oracles.mul(b1, b2))] += c1 * c2
            bad_mult += prod != D(m)
    dt = time.perf_counter() - t0
    ok = bad_co == 0 and bad_mult == 0 and dt < 10
    record(1, ok, "%d multisegments (support <= 6, 2 symbols, lo in {-1/2,0,1/2}); "
           "coassoc failures %d, morphism failures %d; %.1fs" % (len(sweep), bad_co, bad_mult, dt))
    assert ok


# ---- 2 ----------------------------------------------------------------------------

def test_M_star_consistency():
    rho = GLCuspidal("r", parity="odd")
    checked = bad = 0
    for n in range(5):
        for lo2 in range(-5, 6):
            s = Segment(rho, HalfInt(lo2), HalfInt(lo2 + 2 * n))
            want = (n + 2) * (n + 3) // 2
            ok = (M_star_pipeline(s) == M_star(s)
                  and len(M_star_closed_terms(s)) == want
                  and len(_M_star_pipeline_terms(s)) == want
                  and sum(M_star(s).values()) == want)
            checked += 1
            bad += not ok
    record(2, bad == 0, "%d segments (length <= 5, |lo| <= 5/2): %d disagreements" % (checked, bad))
    assert bad == 0


# ---- 3 ----------------------------------------------------------------------------

def test_goldberg_count():
    r1, r2, c = CAT.rho("r1"), CAT.rho("r2"), CAT.rho("c")
    bases = [replay(ConstructionChain(CAT.cusp("s0"), [AddPair(r1, 1, 3, 1)])),
             replay(ConstructionChain(CAT.cusp("s1"))),
             replay(ConstructionChain(CAT.cusp("s2"), [AddPair(r2, 2, 4, -1)]))]
    patterns = bad = 0
    for t in bases:
        red = reducing_deltas(t, CAT)[:3]
        irr = [d for d in [(r1, 1), (r1, 3), (r2, 2), (c, 2)] if not delta_b_reduces(t, *d)][:2]
        pool = red + irr
        for k in range(5):
            for ds in combinations_with_replacement(pool, k):
                patterns += 1
                l = len({d for d in ds if d in red})
                out = decompose(list(ds), t)
                signs = {tuple(j for _, j in p.e_core.signed_deltas) for p in out}
                ok = (len(out) == 2 ** l == goldberg_length(ds, t) and len(signs) == len(out)
                      and all(len(p.gammas) == k - l for p in out))
                bad += not ok
    record(3, bad == 0, "%d delta patterns (k <= 4, with repeats) over %d base triples: %d wrong counts"
           % (patterns, len(bases), bad))
    assert bad == 0


# ---- 4 ----------------------------------------------------------------------------

def _triples_one_symbol(cusp, rho, max_block=9):
    """Every triple reachable from the cuspidal one by steps on rho alone."""
    seen = {}
    todo = [replay(ConstructionChain(cusp))]
    while todo:
        t = todo.pop()
        if t in seen:
            continue
        seen[t] = True
        for st in possible_steps(t, CAT, max_block):
            if st.rho == rho:
                todo.append(st.apply(t))
    return list(seen)


def _support_equation(t, rho, b, case) -> bool:
    zero = Counter({(HalfInt(0), rho): 1})

    def both(seg):
        return supp(seg) + supp(check_dual_segment(seg)) if seg is not None else Counter()

    J = t.blocks(rho)
    target = supp(delta(rho, b))
    if isinstance(case, Case1):
        return (case.a == max(a for a in J if a <= b)
                and target == both(case.witness_seg) + supp(delta(rho, case.a)))
    if isinstance(case, Case2a):
        return b % 2 == 0 and not any(a <= b for a in J) and target == both(case.witness_seg)
    if isinstance(case, Case2bI):
        return (case.a == min(J) and target == both(case.seg_b) + zero
                and supp(delta(rho, case.a)) == both(case.seg_a) + zero)
    return not J and not t.cusp.blocks(rho) and b % 2 == 1 and target == both(segment(rho, 1, (b - 1) // 2)) + zero


def test_pi_delta_totality():
    triples = []
    for cid in sorted(CAT.classical):
        for rid in ("r1", "r2", "r3"):
            triples.extend(_triples_one_symbol(CAT.cusp(cid), CAT.rho(rid)))
    rng = random.Random(SEED)
    triples.extend(replay(random_chain(rng, CAT)) for _ in range(300))
    checked = bad = 0
    for t in triples:
        for rho in (CAT.rho("r1"), CAT.rho("r2"), CAT.rho("r3")):
            J = t.blocks(rho)
            for b in range(1, 10):
                if not delta_b_reduces(t, rho, b):
                    continue
                checked += 1
                conds = [any(a <= b for a in J), not any(a <= b for a in J) and b % 2 == 0,
                         not any(a <= b for a in J) and b % 2 == 1 and bool(J),
                         not J and b % 2 == 1]
                case = pi_delta_case(t, rho, b)
                kinds = (Case1, Case2a, Case2bI, Case2bII)
                ok = sum(conds) == 1 and isinstance(case, kinds[conds.index(True)])
                bad += not (ok and _support_equation(t, rho, b, case))
    record(4, bad == 0, "%d (triple, rho, b) instances over %d triples: %d failures" % (checked, len(triples), bad))
    assert bad == 0


# ---- 5 ----------------------------------------------------------------------------

def test_multiplicity_replication():
    t0 = time.perf_counter()
    rng = random.Random(SEED)
    checks = {"def-main": check_lemma_main, "def-even": check_lemma_even, "def-odd2": check_lemma_odd2}
    summary, bad = [], 0
    for name in ("def-main", "def-even", "def-odd2", "pr-def-t"):
        inst = random_lemma_instances(name, CAT, 120, rng)
        if name == "pr-def-t":
            reps = [check_tempered_mult(ch, ds) for ch, ds in inst]
        else:
            reps = [checks[name](ch, rho, b) for ch, (rho, b) in inst]
        fails = sum(not r.ok for r in reps)
        bad += fails + (len(reps) < 100)
        summary.append("%s %d/%d" % (name, len(reps) - fails, len(reps)))
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < 60
    record(5, ok, "%s; %.1fs" % (", ".join(summary), dt))
    assert ok


# ---- 6 ----------------------------------------------------------------------------

def _eps_view(t, skip):
    """All singleton and pairwise sign values not involving the block `skip`."""
    view = {}
    for rho, bs in t.jord.items():
        for a in bs:
            if (rho, a) != skip:
                view[(rho.id, a)] = eps_single(t, rho, a)
        for a in bs:
            for b in bs:
                if a < b and skip not in ((rho, a), (rho, b)):
                    view[(rho.id, a, b)] = eps_pair(t, rho, a, b)
    return view


def test_deformation_calculus():
    rng = random.Random(SEED)
    n_triples = n_deform = n_pairs = bad = 0
    while n_triples < 1000:
        t = replay(random_chain(rng, CAT))
        n_triples += 1
        for rho, bs in t.jord.items():
            others = {r: b for r, b in t.jord.items() if r != rho}
            for a in bs:
                for k in range(1, a):
                    try:
                        d = deform_down(t, rho, a, k)
                    except Exception:
                        continue
                    n_deform += 1
                    low = a - 2 * k
                    ok = (deform_up(d, rho, low, a) == t and d.cusp == t.cusp
                          and {r: b for r, b in d.jord.items() if r != rho} == others
                          and _eps_view(d, (rho, low)) == _eps_view(t, (rho, a))
                          and eps_single(d, rho, low) == eps_single(t, rho, a)
                          and all(eps_pair(d, rho, low, c) == eps_pair(t, rho, a, c) for c in bs if c != a))
                    bad += not ok
        for st in possible_steps(t, CAT):
            if isinstance(st, AddPair):
                n_pairs += 1
                u = add_pair(t, st.rho, st.a_minus, st.a, st.sign)
                bad += remove_pair(u, st.rho, st.a_minus, st.a) != t
                bad += _eps_view(u, None) != {**_eps_view(u, None), **_eps_view(t, None)}
    record(6, bad == 0, "%d triples: %d deformations, %d pair additions, %d failures"
           % (n_triples, n_deform, n_pairs, bad))
    assert bad == 0


# ---- 7 ----------------------------------------------------------------------------

def test_criteria_cross_validation():
    t0 = time.perf_counter()
    tally = Counter()
    chains = 0
    for cid in sorted(CAT.classical):
        for ch in all_chains(CAT, 4, 5, cid):
            chains += 1
            for r in cross_check(ch):
                tally[(r.kind, "agree" if r.agree else ("unsound" if r.stored == 1 else "imprecise"))] += 1
    mism = sum(v for (k, s), v in tally.items() if s != "agree")
    unsound = sum(v for (k, s), v in tally.items() if s == "unsound")
    parts = ["%s %d/%d" % (k, tally[(k, "agree")], sum(v for (kk, _), v in tally.items() if kk == k))
             for k in ("pair", "min_even", "max_odd")]
    record(7, mism == 0, "%d chains (length <= 4, blocks <= 5): agree %s; mismatches %d "
           "(stored -1 but criterion says Plus %d, stored +1 missed %d); %.1fs"
           % (chains, ", ".join(parts), mism, mism - unsound, unsound, time.perf_counter() - t0))
    assert unsound == 0
    assert mism == 0


# ---- 8 ----------------------------------------------------------------------------

def test_tempered_bijection():
    rng = random.Random(SEED)
    n = bad = 0
    for _ in range(600):
        p = random_param(rng, CAT)
        n += 1
        t = param_to_triple(p)
        back = triple_to_param(t)
        ok = (validate_tempered_triple(t) == [] and params_equivalent(back, p)
              and param_to_triple(back) == t and validate_triple(back.core) == [])
        bad += not ok
    record(8, bad == 0, "%d random parameters: %d round-trip or validation failures" % (n, bad))
    assert bad == 0


# ---- 9 ----------------------------------------------------------------------------

def test_reducibility_table():
    rows = reducibility_matrix(CAT)
    cases = Counter(r[0] for r in rows)
    wrong = [r for r in rows if point_reduces(r[1], CAT.rho(r[2]), r[3]) is not r[4]]
    asym = [r for r in rows if point_reduces(r[1], CAT.rho(r[2]), r[3])
            is not point_reduces(r[1], CAT.rho(r[2]), -F(r[3]))]
    rng = random.Random(SEED)
    sym_checked = 0
    for _ in range(200):
        t = replay(random_chain(rng, CAT))
        for rid in ("r1", "r2", "r3", "c"):
            for tw in range(0, 13):
                sym_checked += 1
                if point_reduces(t, CAT.rho(rid), F(tw, 2)) is not point_reduces(t, CAT.rho(rid), F(-tw, 2)):
                    asym.append((t, rid, tw))
    covered = set(cases) | ({"i"} if not asym else set())
    ok = (len(rows) >= 20 and not wrong and not asym
          and covered == {"i", "ii", "iii", "iv", "v", "vi", "vii"}
          and any(r[4] is RED for r in rows))
    record(9, ok, "%d fixtures covering cases %s; %d wrong; symmetry checked on %d extra points, %d failures"
           % (len(rows), ",".join(c for c in ("i", "ii", "iii", "iv", "v", "vi", "vii") if c in covered), len(wrong), sym_checked, len(asym)))
    assert ok
