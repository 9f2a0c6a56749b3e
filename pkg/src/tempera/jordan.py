"""Jordan blocks, partially defined sign functions, reducibility, pair addition and deformation."""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .symbols import (ClassicalCuspidal, GLCuspidal, HalfInt, Parity, TemperaError,
                      Catalog, j1_satisfied, require_parity)
from .multiseg import Segment, segment


class JordanBlocks:
    """Immutable map rho -> sorted tuple of positive integers."""

    __slots__ = ("_b",)

    def __init__(self, blocks: Mapping[GLCuspidal, Iterable[int]] | None = None):
        b = {}
        for rho, bs in (blocks or {}).items():
            t = tuple(sorted(set(int(a) for a in bs)))
            if t:
                b[rho] = t
        self._b = b

    def get(self, rho: GLCuspidal) -> tuple:
        return self._b.get(rho, ())

    def __contains__(self, item) -> bool:
        rho, a = item
        return a in self._b.get(rho, ())

    def rhos(self) -> list:
        return sorted(self._b)

    def items(self) -> Iterator:
        for rho in self.rhos():
            yield rho, self._b[rho]

    def pairs(self) -> Iterator:
        for rho, bs in self.items():
            for a in bs:
                yield rho, a

    def size(self) -> int:
        return sum(len(v) for v in self._b.values())

    def replace(self, rho: GLCuspidal, blocks: Iterable[int]) -> "JordanBlocks":
        d = dict(self._b)
        d[rho] = tuple(blocks)
        return JordanBlocks(d)

    def neighbor_below(self, rho: GLCuspidal, a: int) -> int | None:
        """a_-: the largest block of rho below a, if any."""
        below = [b for b in self.get(rho) if b < a]
        return max(below) if below else None

    def key(self) -> tuple:
        return tuple((rho.id, bs) for rho, bs in self.items())

    def __eq__(self, other):
        return isinstance(other, JordanBlocks) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __str__(self):
        return "{" + "; ".join("%s:%s" % (r.id, ",".join(map(str, bs))) for r, bs in self.items()) + "}"

    __repr__ = __str__


def singleton_defined(cusp: ClassicalCuspidal, rho: GLCuspidal, a: int) -> bool:
    return a % 2 == 0 or not cusp.blocks(rho)


class EpsilonMap:
    """Raw sign data: singleton values and pairwise values on blocks of one symbol.

    Triples produced by the operations here carry canonical data: singletons
    where the domain rule allows them, otherwise pairwise signs against the
    largest block of that symbol (the anchor).
    """

    __slots__ = ("single", "pair")

    def __init__(self, single: Mapping | None = None, pair: Mapping | None = None):
        self.single = dict(single or {})
        p = {}
        for (rho, a, b), s in (pair or {}).items():
            if a == b:
                raise TemperaError("pairwise sign needs two different blocks")
            if a > b:
                a, b = b, a
            p[(rho, a, b)] = s
        self.pair = p
        for s in list(self.single.values()) + list(self.pair.values()):
            if s not in (1, -1):
                raise TemperaError("signs must be +1 or -1, got %r" % (s,))

    def key(self) -> tuple:
        s = tuple(sorted((r.id, a, v) for (r, a), v in self.single.items()))
        p = tuple(sorted((r.id, a, b, v) for (r, a, b), v in self.pair.items()))
        return s, p


class Reducibility(enum.Enum):
    REDUCES = "Reduces"
    IRREDUCIBLE = "Irreducible"
    UNKNOWN = "Unknown"


class AdmissibleTriple:
    """(Jord, cuspidal support, eps) parameter of a square integrable representation."""

    __slots__ = ("jord", "cusp", "eps")

    def __init__(self, jord: JordanBlocks, cusp: ClassicalCuspidal, eps: EpsilonMap | None = None):
        self.jord = jord
        self.cusp = cusp
        self.eps = eps if eps is not None else EpsilonMap()

    def key(self) -> tuple:
        return (self.cusp.id, self.jord.key(), self.eps.key())

    def __eq__(self, other):
        return isinstance(other, AdmissibleTriple) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __lt__(self, other):
        return self.key() < other.key()

    def blocks(self, rho: GLCuspidal) -> tuple:
        return self.jord.get(rho)

    def __str__(self):
        parts = []
        pot = _potentials_or_none(self)
        for rho, bs in self.jord.items():
            rel = not singleton_defined(self.cusp, rho, bs[0])
            if pot is None:
                parts.append("%s:%s" % (rho.id, ",".join(map(str, bs))))
                continue
            signs = ",".join("%d%s" % (a, "+" if pot[(rho, a)] > 0 else "-") for a in bs)
            parts.append("%s:%s%s" % (rho.id, signs, " rel" if rel else ""))
        return "pi(%s%s)" % (self.cusp.id, "".join("; " + p for p in parts))

    __repr__ = __str__


# ---- sign potentials --------------------------------------------------------

def _potentials(t: AdmissibleTriple) -> tuple:
    """Return (pot, violations). pot maps (rho, a) to a sign; for symbols without
    singleton values the signs are relative, normalized to +1 on the largest block."""
    pot, bad = {}, []
    for rho, bs in t.jord.items():
        if not rho.selfdual:
            continue
        if singleton_defined(t.cusp, rho, bs[0]):
            for a in bs:
                v = t.eps.single.get((rho, a))
                if v is None:
                    bad.append("missing singleton eps on (%s,%d)" % (rho.id, a))
                else:
                    pot[(rho, a)] = v
            for (r, a, b), v in t.eps.pair.items():
                if r == rho and (r, a) in pot and (r, b) in pot and pot[(r, a)] * pot[(r, b)] != v:
                    bad.append("pairwise eps on (%s,%d),(%s,%d) disagrees with singleton quotient"
                               % (rho.id, a, rho.id, b))
            continue
        anchor = bs[-1]
        local = {anchor: 1}
        edges = [(a, b, v) for (r, a, b), v in t.eps.pair.items() if r == rho]
        changed = True
        while changed:
            changed = False
            for a, b, v in edges:
                if a in local and b not in local:
                    local[b] = local[a] * v
                    changed = True
                elif b in local and a not in local:
                    local[a] = local[b] * v
                    changed = True
        for a, b, v in edges:
            if a in local and b in local and local[a] * local[b] != v:
                bad.append("pairwise eps on %s violates the cocycle rule at (%d,%d)" % (rho.id, a, b))
        for a in bs:
            if a not in local:
                bad.append("pairwise eps does not reach (%s,%d)" % (rho.id, a))
            else:
                pot[(rho, a)] = local[a]
    return pot, bad


def _potentials_or_none(t: AdmissibleTriple):
    try:
        pot, bad = _potentials(t)
    except Exception:
        return None
    return None if bad else pot


def potentials(t: AdmissibleTriple) -> dict:
    pot, bad = _potentials(t)
    if bad:
        raise TemperaError("; ".join(bad))
    return pot


def _from_potentials(jord: JordanBlocks, cusp: ClassicalCuspidal, pot: Mapping) -> AdmissibleTriple:
    single, pair = {}, {}
    for rho, bs in jord.items():
        if singleton_defined(cusp, rho, bs[0]):
            for a in bs:
                single[(rho, a)] = pot[(rho, a)]
        else:
            anchor = bs[-1]
            for a in bs[:-1]:
                pair[(rho, a, anchor)] = pot[(rho, a)] * pot[(rho, anchor)]
    return AdmissibleTriple(jord, cusp, EpsilonMap(single, pair))


def canonical(t: AdmissibleTriple) -> AdmissibleTriple:
    return _from_potentials(t.jord, t.cusp, potentials(t))


def eps_single(t: AdmissibleTriple, rho: GLCuspidal, a: int) -> int | None:
    if (rho, a) not in t.jord or not singleton_defined(t.cusp, rho, a):
        return None
    return t.eps.single.get((rho, a))


def eps_pair(t: AdmissibleTriple, rho: GLCuspidal, a: int, b: int) -> int | None:
    """eps((rho,a),(rho,b)) = eps(a) eps(b)^{-1}, derived from whatever data is stored."""
    if (rho, a) not in t.jord or (rho, b) not in t.jord or a == b:
        return None
    pot, bad = _potentials(t)
    if (rho, a) not in pot or (rho, b) not in pot:
        return None
    return pot[(rho, a)] * pot[(rho, b)]


def cuspidal_triple(cusp: ClassicalCuspidal) -> AdmissibleTriple:
    """The parameter of the cuspidal itself.

    Unless the catalog supplies signs, adjacent cuspidal blocks get opposite
    signs and the smallest even block gets -1: a cuspidal has no proper
    Jacquet module, so every embedding criterion must fail.
    """
    jord = JordanBlocks(cusp.jord_cusp)
    pot = {}
    for rho, bs in jord.items():
        if cusp.eps:
            for a in bs:
                if (rho, a) not in cusp.eps:
                    raise TemperaError("cuspidal %s lacks a sign on (%s,%d)" % (cusp.id, rho.id, a))
                pot[(rho, a)] = cusp.eps[(rho, a)]
            continue
        s = -1 if bs[0] % 2 == 0 else 1
        for a in bs:
            pot[(rho, a)] = s
            s = -s
    return _from_potentials(jord, cusp, pot)


# ---- predicates ---------------------------------------------------------------

def delta_b_reduces(t: AdmissibleTriple, rho: GLCuspidal, b: int) -> bool:
    if not rho.selfdual:
        return False
    return j1_satisfied(rho, b) and b not in t.blocks(rho)


def point_reduces(t: AdmissibleTriple, rho: GLCuspidal, alpha) -> Reducibility:
    """Reducibility of nu^alpha rho x| pi; alpha may be any rational."""
    if not isinstance(alpha, HalfInt):
        try:
            f = Fraction(str(alpha)) if not isinstance(alpha, (int, Fraction)) else Fraction(alpha)
        except (ValueError, ZeroDivisionError):
            raise TemperaError("cannot read exponent %r" % (alpha,)) from None
        if (2 * f).denominator != 1:
            return Reducibility.IRREDUCIBLE
        alpha = HalfInt(int(2 * f))
    alpha = abs(alpha)
    if not rho.selfdual:
        return Reducibility.IRREDUCIBLE
    require_parity(rho)
    J = t.blocks(rho)
    if alpha == 0:
        odd = rho.parity is Parity.ODD
        return Reducibility.REDUCES if odd and 1 not in J else Reducibility.IRREDUCIBLE
    if alpha.twice_value == 1:
        if j1_satisfied(rho, 2) and 2 not in J:
            return Reducibility.REDUCES
        if 2 in J:
            s = eps_single(t, rho, 2)
            if s is None:
                raise TemperaError("epsilon undefined on (%s,2)" % rho.id)
            return Reducibility.REDUCES if s == 1 else Reducibility.IRREDUCIBLE
        return Reducibility.IRREDUCIBLE
    a = alpha.twice_value - 1
    if a not in J:
        return Reducibility.IRREDUCIBLE
    if a + 2 not in J:
        return Reducibility.REDUCES
    v = eps_pair(t, rho, a, a + 2)
    if v is None:
        raise TemperaError("epsilon undefined on (%s,%d),(%s,%d)" % (rho.id, a, rho.id, a + 2))
    return Reducibility.REDUCES if v == 1 else Reducibility.IRREDUCIBLE


def segment_irreducible(t: AdmissibleTriple, seg: Segment | None) -> Reducibility:
    if seg is None:
        return Reducibility.IRREDUCIBLE
    for p in seg.points():
        if point_reduces(t, seg.rho, p) is Reducibility.REDUCES:
            return Reducibility.UNKNOWN
    return Reducibility.IRREDUCIBLE


# ---- Jordan transfer ----------------------------------------------------------

def jord_transfer(jp: JordanBlocks, rho: GLCuspidal, x, y) -> JordanBlocks:
    """Jord(pi) for a square integrable pi inside d([nu^y rho, nu^x rho]) x| pi'."""
    x, y = HalfInt.of(x), HalfInt.of(y)
    if not rho.selfdual:
        raise TemperaError("Jordan transfer needs a selfdual symbol")
    require_parity(rho)
    d = x.twice_value - y.twice_value
    if d < 0 or d % 2:
        raise TemperaError("need x - y a nonnegative integer")
    integral = rho.parity is Parity.ODD
    if x.is_integer != integral:
        raise TemperaError("parity mismatch: x, y must be %s for %s"
                           % ("integers" if integral else "half-odd", rho.id))
    J = set(jp.get(rho))
    top = x.twice_value + 1
    if y > 0:
        low = y.twice_value - 1
        if y >= 1:
            if low not in J:
                raise TemperaError("missing block (%s,%d)" % (rho.id, low))
            J.discard(low)
        if top in J:
            raise TemperaError("block (%s,%d) already present" % (rho.id, top))
        J.add(top)
    else:
        low = -y.twice_value + 1
        if top == low:
            raise TemperaError("blocks (%s,%d) would be repeated" % (rho.id, top))
        for c in (top, low):
            if c in J:
                raise TemperaError("block (%s,%d) already present" % (rho.id, c))
        J.update((top, low))
    return jp.replace(rho, sorted(J))


# ---- pairs ----------------------------------------------------------------------

def _check_rho(t: AdmissibleTriple, rho: GLCuspidal) -> None:
    if not rho.selfdual:
        raise TemperaError("Jordan blocks need a selfdual symbol, got %s" % rho.id)
    require_parity(rho)


def add_pair(t: AdmissibleTriple, rho: GLCuspidal, a_minus: int, a: int,
             new_sign: int | None = None) -> AdmissibleTriple:
    """Adjoin (rho,a_minus),(rho,a) as for a subrepresentation of
    d([nu^{-(a_minus-1)/2} rho, nu^{(a-1)/2} rho]) x| pi'.

    a_minus = 0 (even symbols only) adjoins the single block a, the
    subrepresentation of d([nu^{1/2} rho, nu^{(a-1)/2} rho]) x| pi', whose sign
    is forced to +1. For symbols without singleton signs, new_sign is the sign
    of the new pair relative to the existing blocks.
    """
    _check_rho(t, rho)
    if a - a_minus <= 0 or (a - a_minus) % 2:
        raise TemperaError("need a - a_minus a positive even integer")
    if not j1_satisfied(rho, a):
        raise TemperaError("(%s,%d) violates (J1)" % (rho.id, a))
    if a_minus == 0:
        if rho.parity is not Parity.EVEN:
            raise TemperaError("a_minus = 0 is only allowed for even-parity symbols")
    elif a_minus < 0 or not j1_satisfied(rho, a_minus):
        raise TemperaError("(%s,%d) violates (J1)" % (rho.id, a_minus))
    J = t.blocks(rho)
    hit = [b for b in J if a_minus <= b <= a]
    if hit:
        raise TemperaError("Jord_%s meets [%d,%d] at %s" % (rho.id, a_minus, a, hit))
    pot = potentials(t)
    if a_minus == 0:
        if new_sign not in (None, 1):
            raise TemperaError("a block added with a_minus = 0 has sign +1")
        pot[(rho, a)] = 1
        return _from_potentials(t.jord.replace(rho, sorted(J + (a,))), t.cusp, pot)
    if new_sign is None:
        if singleton_defined(t.cusp, rho, a) or J:
            raise TemperaError("new_sign required for (%s,%d),(%s,%d)" % (rho.id, a_minus, rho.id, a))
        new_sign = 1
    if new_sign not in (1, -1):
        raise TemperaError("new_sign must be +1 or -1")
    if singleton_defined(t.cusp, rho, a):
        s = new_sign
    else:
        s = new_sign * pot[(rho, J[-1])] if J else 1
    pot[(rho, a_minus)] = s
    pot[(rho, a)] = s
    return _from_potentials(t.jord.replace(rho, sorted(J + (a_minus, a))), t.cusp, pot)


def remove_pair(t: AdmissibleTriple, rho: GLCuspidal, a_minus: int, a: int) -> AdmissibleTriple:
    _check_rho(t, rho)
    J = t.blocks(rho)
    if not J:
        raise TemperaError("no Jordan blocks on %s" % rho.id)
    if a not in J:
        raise TemperaError("block (%s,%d) absent" % (rho.id, a))
    pot = potentials(t)
    if a_minus == 0:
        if rho.parity is not Parity.EVEN or a != J[0]:
            raise TemperaError("a_minus = 0 needs an even symbol and a = min Jord")
        if pot[(rho, a)] != 1:
            raise TemperaError("sign of (%s,%d) is not +1" % (rho.id, a))
        del pot[(rho, a)]
        return _from_potentials(t.jord.replace(rho, J[1:]), t.cusp, pot)
    if a_minus not in J:
        raise TemperaError("block (%s,%d) absent" % (rho.id, a_minus))
    if a_minus >= a or any(a_minus < b < a for b in J):
        raise TemperaError("(%s,%d),(%s,%d) are not neighbours" % (rho.id, a_minus, rho.id, a))
    if pot[(rho, a)] != pot[(rho, a_minus)]:
        raise TemperaError("eps differs on (%s,%d),(%s,%d)" % (rho.id, a_minus, rho.id, a))
    del pot[(rho, a)]
    del pot[(rho, a_minus)]
    return _from_potentials(t.jord.replace(rho, [b for b in J if b not in (a, a_minus)]), t.cusp, pot)


# ---- deformation ------------------------------------------------------------------

def _floor(rho: GLCuspidal) -> int:
    return 2 if rho.parity is Parity.EVEN else 1


def deform_down(t: AdmissibleTriple, rho: GLCuspidal, a: int, k: int) -> AdmissibleTriple:
    _check_rho(t, rho)
    J = t.blocks(rho)
    if a not in J:
        raise TemperaError("block (%s,%d) absent" % (rho.id, a))
    if a < 3:
        raise TemperaError("deformation needs a >= 3")
    if k < 1:
        raise TemperaError("deformation needs k >= 1")
    low = a - 2 * k
    if low < _floor(rho):
        raise TemperaError("a - 2k = %d is below the smallest block of its parity" % low)
    hit = [b for b in J if low <= b <= a - 2]
    if hit:
        raise TemperaError("gap condition fails: Jord_%s meets [%d,%d] at %s" % (rho.id, low, a - 2, hit))
    pot = potentials(t)
    pot[(rho, low)] = pot.pop((rho, a))
    return _from_potentials(t.jord.replace(rho, sorted([b for b in J if b != a] + [low])), t.cusp, pot)


def deform_up(t: AdmissibleTriple, rho: GLCuspidal, a_low: int, a: int) -> AdmissibleTriple:
    _check_rho(t, rho)
    J = t.blocks(rho)
    if a_low not in J:
        raise TemperaError("block (%s,%d) absent" % (rho.id, a_low))
    if a <= a_low or (a - a_low) % 2:
        raise TemperaError("target %d must exceed %d by a positive even integer" % (a, a_low))
    hit = [b for b in J if a_low < b <= a]
    if hit:
        raise TemperaError("Jord_%s meets (%d,%d] at %s" % (rho.id, a_low, a, hit))
    pot = potentials(t)
    pot[(rho, a)] = pot.pop((rho, a_low))
    return _from_potentials(t.jord.replace(rho, sorted([b for b in J if b != a_low] + [a])), t.cusp, pot)


def deform_segment(rho: GLCuspidal, a_low: int, a: int) -> Segment:
    return segment(rho, HalfInt(a_low + 1), HalfInt(a - 1))


def pair_segment(rho: GLCuspidal, a_minus: int, a: int) -> Segment:
    return segment(rho, HalfInt(1 - a_minus), HalfInt(a - 1))


# ---- reduction to the cuspidal support ---------------------------------------------

def reduction_moves(t: AdmissibleTriple) -> list:
    """All one-step embeddings pi -> d(seg) x| pi' known from the sign data.

    Each entry is (kind, seg, pi'). Kinds: 'deform' (a -> a-2 across an empty
    gap), 'pair' (neighbours with equal signs), 'half' (smallest even block
    with sign +1).
    """
    out = []
    pot = potentials(t)
    for rho, bs in t.jord.items():
        for a in bs:
            if a >= 3 and a - 2 >= _floor(rho) and a - 2 not in bs:
                out.append(("deform", deform_segment(rho, a - 2, a), deform_down(t, rho, a, 1)))
        for lo, hi in zip(bs, bs[1:]):
            if pot[(rho, lo)] == pot[(rho, hi)]:
                out.append(("pair", pair_segment(rho, lo, hi), remove_pair(t, rho, lo, hi)))
        if rho.parity is Parity.EVEN and pot[(rho, bs[0])] == 1:
            out.append(("half", segment(rho, HalfInt(1), HalfInt(bs[0] - 1)), remove_pair(t, rho, 0, bs[0])))
    return out


def reduction_path(t: AdmissibleTriple, _memo: dict | None = None) -> list | None:
    """A sequence of moves from t down to its cuspidal triple, or None if stuck."""
    memo = {} if _memo is None else _memo
    t = canonical(t)
    target = cuspidal_triple(t.cusp)
    return _path(t, target, memo)


def _path(t, target, memo):
    if t == target:
        return []
    k = t.key()
    if k in memo:
        return memo[k]
    memo[k] = None
    for mv in reduction_moves(t):
        rest = _path(mv[2], target, memo)
        if rest is not None:
            memo[k] = [mv] + rest
            return memo[k]
    return None


# ---- validation ----------------------------------------------------------------------

def validate_triple(t: AdmissibleTriple, check_admissible: bool = False) -> list:
    """Parity, domain and coherence violations; with check_admissible also
    require a reduction path to the cuspidal triple."""
    out = []
    for rho, bs in t.jord.items():
        if not rho.selfdual:
            out.append("Jordan block on non-selfdual symbol %s" % rho.id)
            continue
        for a in bs:
            if a < 1:
                out.append("block (%s,%d) is not positive" % (rho.id, a))
            elif not j1_satisfied(rho, a):
                out.append("block (%s,%d) violates (J1) parity" % (rho.id, a))
    for (rho, a), v in sorted(t.eps.single.items(), key=lambda kv: (kv[0][0].id, kv[0][1])):
        if (rho, a) not in t.jord:
            out.append("singleton eps on (%s,%d) outside Jord" % (rho.id, a))
        elif not singleton_defined(t.cusp, rho, a):
            out.append("singleton eps on odd block with cuspidal blocks: (%s,%d)" % (rho.id, a))
    for (rho, a, b) in sorted(t.eps.pair, key=lambda k: (k[0].id, k[1], k[2])):
        if (rho, a) not in t.jord or (rho, b) not in t.jord:
            out.append("pairwise eps on (%s,%d),(%s,%d) outside Jord" % (rho.id, a, rho.id, b))
    if out:
        return out
    pot, bad = _potentials(t)
    out.extend(bad)
    if not out and check_admissible and reduction_path(t) is None:
        out.append("not reducible to its cuspidal support %s" % t.cusp.id)
    return out


def is_admissible(t: AdmissibleTriple) -> bool:
    return not validate_triple(t, check_admissible=True)


# ---- JSON -------------------------------------------------------------------------------

def triple_to_json(t: AdmissibleTriple) -> dict:
    jord = [{"rho": r.id, "a": a} for r, a in t.jord.pairs()]
    eps = [{"rho": r.id, "a": a, "sign": v}
           for (r, a), v in sorted(t.eps.single.items(), key=lambda kv: (kv[0][0].id, kv[0][1]))]
    eps += [{"rho": r.id, "a": a, "b": b, "rel": v}
            for (r, a, b), v in sorted(t.eps.pair.items(), key=lambda kv: (kv[0][0].id, kv[0][1], kv[0][2]))]
    return {"cusp": t.cusp.id, "jord": jord, "eps": eps}


def triple_from_json(d: dict, cat: Catalog) -> AdmissibleTriple:
    if not isinstance(d, dict):
        raise TemperaError("triple must be a JSON object")
    try:
        cusp = cat.cusp(d["cusp"])
        blocks = {}
        for e in d.get("jord", []):
            blocks.setdefault(cat.rho(e["rho"]), []).append(int(e["a"]))
        for r, bs in blocks.items():
            if len(set(bs)) != len(bs):
                raise TemperaError("repeated Jordan block on %s" % r.id)
        single, pair = {}, {}
        for e in d.get("eps", []):
            r = cat.rho(e["rho"])
            if "b" in e:
                pair[(r, int(e["a"]), int(e["b"]))] = int(e["rel"])
            else:
                single[(r, int(e["a"]))] = int(e["sign"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, TemperaError):
            raise
        raise TemperaError("malformed triple JSON: %s" % exc) from None
    return AdmissibleTriple(JordanBlocks(blocks), cusp, EpsilonMap(single, pair))
