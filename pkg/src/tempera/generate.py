"""Random instances: chains, triples and tempered parameters over a small catalog."""

from __future__ import annotations

import os
import random

from .symbols import Catalog, Parity, TemperaError, j1_satisfied
from .jordan import AdmissibleTriple, delta_b_reduces
from .jacquet import AddPair, Case1, Case2a, Case2bI, ConstructionChain, DeformUp, pi_delta_case, replay
from .tempered import ETemperedParam, TemperedParam

MAX_BLOCK = 9
MAX_STEPS = 4

DEFAULT_CATALOG = {
    "gl": [
        {"id": "r1", "selfdual": True, "parity": "odd"},
        {"id": "r2", "selfdual": True, "parity": "even"},
        {"id": "r3", "selfdual": True, "parity": "odd"},
        {"id": "c", "selfdual": False},
        {"id": "cv", "selfdual": False},
    ],
    "dual_pairs": [["c", "cv"]],
    "classical": [
        {"id": "s0", "jord": {}, "generic": True},
        {"id": "s1", "jord": {"r1": [1, 3], "r2": [2]}, "generic": False},
        {"id": "s2", "jord": {"r3": [1]}, "generic": True},
    ],
}


def default_catalog() -> Catalog:
    return Catalog.from_dict(DEFAULT_CATALOG)


def rng_from_env(default: int = 0) -> random.Random:
    raw = os.environ.get("TEMPERA_SEED")
    if raw is None:
        return random.Random(default)
    try:
        return random.Random(int(raw))
    except ValueError:
        raise TemperaError("TEMPERA_SEED must be an integer, got %r" % raw) from None


def _selfdual(cat: Catalog) -> list:
    return [cat.gl[k] for k in sorted(cat.gl) if cat.gl[k].selfdual]


def possible_steps(t: AdmissibleTriple, cat: Catalog, max_block: int = MAX_BLOCK) -> list:
    out = []
    for rho in _selfdual(cat):
        J = t.blocks(rho)
        sizes = [a for a in range(1, max_block + 1) if j1_satisfied(rho, a)]
        for a in sizes:
            lows = [x for x in sizes if x < a]
            if rho.parity is Parity.EVEN:
                lows = [0] + lows
            for am in lows:
                if any(am <= b <= a for b in J):
                    continue
                signs = (1,) if am == 0 else (1, -1)
                out.extend(AddPair(rho, am, a, s) for s in signs)
        for lo in J:
            for a in range(lo + 2, max_block + 1, 2):
                if any(lo < b <= a for b in J):
                    break
                out.append(DeformUp(rho, lo, a))
    return out


def random_chain(rng: random.Random, cat: Catalog, length: int | None = None,
                 max_block: int = MAX_BLOCK, base: str | None = None) -> ConstructionChain:
    cusp = cat.cusp(base) if base else cat.classical[rng.choice(sorted(cat.classical))]
    chain = ConstructionChain(cusp)
    n = rng.randint(0, MAX_STEPS) if length is None else length
    for _ in range(n):
        opts = possible_steps(replay(chain), cat, max_block)
        if not opts:
            break
        chain = chain.extend(rng.choice(opts))
    return chain


def all_chains(cat: Catalog, max_len: int, max_block: int, base: str):
    """Every chain over cat from base with at most max_len steps (depth-first)."""
    start = ConstructionChain(cat.cusp(base))
    stack = [start]
    while stack:
        ch = stack.pop()
        yield ch
        if len(ch) < max_len:
            for st in reversed(possible_steps(replay(ch), cat, max_block)):
                stack.append(ch.extend(st))


def reducing_deltas(t: AdmissibleTriple, cat: Catalog, max_block: int = MAX_BLOCK) -> list:
    return [(rho, b) for rho in _selfdual(cat) for b in range(1, max_block + 1)
            if delta_b_reduces(t, rho, b)]


def random_param(rng: random.Random, cat: Catalog, max_block: int = MAX_BLOCK) -> TemperedParam:
    core = replay(random_chain(rng, cat, rng.randint(0, 3), max_block))
    red = reducing_deltas(core, cat, max_block)
    deltas = rng.sample(red, rng.randint(0, min(3, len(red))))
    signed = [(d, rng.choice((1, -1))) for d in deltas]
    pool = list(deltas)
    for rho in sorted(cat.gl.values()):
        for a in range(1, max_block + 1):
            if not rho.selfdual or not delta_b_reduces(core, rho, a):
                if rho.has_dual():
                    pool.append((rho, a))
    gammas = [rng.choice(pool) for _ in range(rng.randint(0, 3))] if pool else []
    return TemperedParam(gammas, ETemperedParam(core, signed))


LEMMA_CASES = {"def-main": Case1, "def-even": Case2a, "def-odd2": Case2bI}


def random_lemma_instances(which: str, cat: Catalog, count: int, rng: random.Random) -> list:
    """(chain, instance) pairs: instance is (rho, b) for the lemmas, a delta list for pr-def-t."""
    if which != "pr-def-t" and which not in LEMMA_CASES:
        raise TemperaError("unknown lemma %r" % which)
    out, tries = [], 0
    while len(out) < count and tries < 200 * count:
        tries += 1
        ch = random_chain(rng, cat)
        t = replay(ch)
        red = reducing_deltas(t, cat)
        if which == "pr-def-t":
            if red:
                out.append((ch, rng.sample(red, rng.randint(1, min(3, len(red))))))
            continue
        fits = [d for d in red if isinstance(pi_delta_case(t, *d), LEMMA_CASES[which])]
        if fits:
            out.append((ch, rng.choice(fits)))
    return out
