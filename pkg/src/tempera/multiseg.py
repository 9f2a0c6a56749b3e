"""The ring R in the multisegment basis: products, duals, m*, M* and the action on classical terms."""

from __future__ import annotations

import re
from functools import lru_cache
from collections import Counter
from typing import Iterable, Iterator, NamedTuple

from .symbols import GLCuspidal, HalfInt, TemperaError, Catalog


class Segment(NamedTuple):
    """[nu^lo rho, nu^hi rho]; never empty (the empty segment is the unit of R)."""

    rho: GLCuspidal
    lo: HalfInt
    hi: HalfInt

    @property
    def length(self) -> int:
        return (self.hi.twice_value - self.lo.twice_value) // 2 + 1

    def points(self) -> Iterator[HalfInt]:
        t = self.lo.twice_value
        while t <= self.hi.twice_value:
            yield HalfInt(t)
            t += 2

    def is_centered(self) -> bool:
        return self.lo.twice_value == -self.hi.twice_value

    def sort_key(self):
        return (self.rho.id, self.lo.twice_value, self.hi.twice_value)

    def __str__(self):
        return "d(%s;%s..%s)" % (self.rho.id, self.lo, self.hi)


def segment(rho: GLCuspidal, lo, hi) -> Segment | None:
    """Build [nu^lo rho, nu^hi rho]; returns None for the empty segment (hi = lo - 1)."""
    lo, hi = HalfInt.of(lo), HalfInt.of(hi)
    d = hi.twice_value - lo.twice_value
    if d % 2:
        raise TemperaError("segment ends %s, %s differ by a non-integer" % (lo, hi))
    if d == -2:
        return None
    if d < -2:
        raise TemperaError("segment [%s, %s] has negative length" % (lo, hi))
    return Segment(rho, lo, hi)


def delta(rho: GLCuspidal, a: int) -> Segment:
    """delta(rho, a) in normal form: [nu^{-(a-1)/2} rho, nu^{(a-1)/2} rho]."""
    if a < 1:
        raise TemperaError("delta(rho, a) needs a >= 1")
    return Segment(rho, HalfInt(1 - a), HalfInt(a - 1))


def centered_size(seg: Segment) -> int:
    if not seg.is_centered():
        raise TemperaError("%s is not of the form delta(rho, a)" % (seg,))
    return seg.length


class Multisegment(tuple):
    """Canonically sorted multiset of segments; the empty one is 1."""

    # no __slots__: the instance dict caches the hash, which dominates dict-heavy expansions

    def __new__(cls, segs: Iterable[Segment] = ()):
        return tuple.__new__(cls, sorted(segs, key=Segment.sort_key))

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = self._hash = tuple.__hash__(self)
            return h

    def __eq__(self, other):
        if self is other:
            return True
        return tuple.__eq__(self, other)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __mul__(self, other: "Multisegment") -> "Multisegment":
        if not other:
            return self
        if not self:
            return other
        return Multisegment(tuple.__add__(self, other))

    def degree(self) -> int:
        return sum(s.length for s in self)

    def __str__(self):
        if not self:
            return "1"
        return "*".join(str(s) for s in self)

    def __repr__(self):
        return "Multisegment(%s)" % str(self)


ONE = Multisegment()


def ms(*segs: Segment | None) -> Multisegment:
    return Multisegment(s for s in segs if s is not None)


class LinComb(dict):
    """Sparse Z-linear combination: key -> nonzero integer coefficient."""

    def add(self, key, c: int = 1) -> None:
        v = self.get(key, 0) + c
        if v:
            self[key] = v
        else:
            self.pop(key, None)

    def __add__(self, other):
        out = type(self)(self)
        for k, c in other.items():
            out.add(k, c)
        return out

    def __sub__(self, other):
        out = type(self)(self)
        for k, c in other.items():
            out.add(k, -c)
        return out

    def scaled(self, c: int):
        if c == 0:
            return type(self)()
        return type(self)((k, c * v) for k, v in self.items())

    def coefficient_sum(self) -> int:
        return sum(self.values())

    def sorted_items(self):
        return sorted(self.items(), key=lambda kv: render_key(kv[0]))


class RElement(LinComb):
    """Element of R, keyed by Multisegment."""

    @classmethod
    def basis(cls, m: Multisegment) -> "RElement":
        return cls({m: 1})


class RTensor(LinComb):
    """Element of R (x) R, keyed by (Multisegment, Multisegment)."""


class RSElement(LinComb):
    """Element of R (x) R(S), keyed by (Multisegment, classical term)."""


def as_element(x) -> RElement:
    if isinstance(x, RElement):
        return x
    if isinstance(x, Multisegment):
        return RElement.basis(x)
    if isinstance(x, Segment):
        return RElement.basis(Multisegment((x,)))
    if isinstance(x, dict):
        return RElement(x)
    raise TemperaError("expected an element of R, got %r" % (x,))


def times(x, y) -> RElement:
    x, y = as_element(x), as_element(y)
    out = RElement()
    for m1, c1 in x.items():
        for m2, c2 in y.items():
            out.add(m1 * m2, c1 * c2)
    return out


def tensor_times(u: RTensor, v: RTensor) -> RTensor:
    """Componentwise product in R (x) R."""
    out = RTensor()
    for (a1, b1), c1 in u.items():
        for (a2, b2), c2 in v.items():
            out.add((a1 * a2, b1 * b2), c1 * c2)
    return out


# ---- duals -------------------------------------------------------------

def check_dual_segment(s: Segment) -> Segment:
    return Segment(s.rho.dual, -s.hi, -s.lo)


def check_dual(m: Multisegment) -> Multisegment:
    return Multisegment(check_dual_segment(s) for s in m)


# ---- comultiplications --------------------------------------------------

def _m_star_segment_terms(s: Segment) -> list:
    out = []
    x, y = s.lo.twice_value, s.hi.twice_value
    for i in range(x - 2, y + 1, 2):
        left = segment(s.rho, HalfInt(i + 2), s.hi)
        right = segment(s.rho, s.lo, HalfInt(i))
        out.append((ms(left), ms(right)))
    return out


def _multiplicative(m: Multisegment, per_segment) -> RTensor:
    acc = RTensor({(ONE, ONE): 1})
    for s in m:
        t = RTensor()
        for k in per_segment(s):
            t.add(k, 1)
        acc = tensor_times(acc, t)
    return acc


def m_star(x) -> RTensor:
    """The comultiplication m* extended multiplicatively."""
    out = RTensor()
    for m, c in as_element(x).items():
        for k, v in _multiplicative(m, _m_star_segment_terms).items():
            out.add(k, c * v)
    return out


def _M_star_pipeline_terms(s: Segment) -> list:
    # (m (x) 1) o (check (x) m*) o kappa o m*
    out = []
    for a, b in _m_star_segment_terms(s):
        bd = check_dual(b)
        for a1, a2 in _multiplicative(a, _m_star_segment_terms).items():
            for _ in range(a2):
                out.append((bd * a1[0], a1[1]))
    return out


def M_star_closed_terms(s: Segment) -> list:
    """Uncollected double-sum closed form, one entry per index pair (i, j)."""
    rd = s.rho.dual
    x, y = s.lo.twice_value, s.hi.twice_value
    out = []
    for i in range(x - 2, y + 1, 2):
        for j in range(i, y + 1, 2):
            g1 = segment(rd, HalfInt(-i), HalfInt(-x))
            g2 = segment(s.rho, HalfInt(j + 2), s.hi)
            cl = segment(s.rho, HalfInt(i + 2), HalfInt(j))
            out.append((ms(g1, g2), ms(cl)))
    return out


def M_star_pipeline(x) -> RTensor:
    """M* computed literally as (m (x) 1) o (check (x) m*) o kappa o m*."""
    out = RTensor()
    for m, c in as_element(x).items():
        for k, v in _multiplicative(m, _M_star_pipeline_terms).items():
            out.add(k, c * v)
    return out


def M_star(x) -> RTensor:
    """M* via the closed double sum on each segment, extended multiplicatively."""
    out = RTensor()
    for m, c in as_element(x).items():
        for k, v in _multiplicative(m, M_star_closed_terms).items():
            out.add(k, c * v)
    return out


def M_star_GL(s: Segment) -> RElement:
    if not s.rho.selfdual:
        raise TemperaError("M*_GL needs a selfdual symbol, got %s" % s.rho.id)
    x, y = s.lo.twice_value, s.hi.twice_value
    out = RElement()
    for i in range(x - 2, y + 1, 2):
        g1 = segment(s.rho, HalfInt(-i), HalfInt(-x))
        g2 = segment(s.rho, HalfInt(i + 2), s.hi)
        out.add(ms(g1, g2), 1)
    return out


# ---- classical terms ----------------------------------------------------

class Opaque:
    """A named classical term with no further structure."""

    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __eq__(self, other):
        return isinstance(other, Opaque) and other.name == self.name

    def __hash__(self):
        return hash(("opaque", self.name))

    def __str__(self):
        return self.name

    __repr__ = __str__


class Tau:
    """Constituent tau_{sign} of rho x| sigma for a reducing pair (rho, sigma)."""

    __slots__ = ("rho", "cusp", "sign")

    def __init__(self, rho, cusp, sign: int):
        self.rho, self.cusp, self.sign = rho, cusp, sign

    def _key(self):
        return (self.rho.id, self.cusp.id, self.sign)

    def __eq__(self, other):
        return isinstance(other, Tau) and other._key() == self._key()

    def __hash__(self):
        return hash(("tau",) + self._key())

    def __str__(self):
        return "tau%+d(%s;%s)" % (self.sign, self.rho.id, self.cusp.id)

    __repr__ = __str__


class LabeledDelta:
    """Unique subrepresentation of d([nu rho, nu^k rho]) x| tau_{sign}."""

    __slots__ = ("rho", "k", "cusp", "sign")

    def __init__(self, rho, k: int, cusp, sign: int):
        self.rho, self.k, self.cusp, self.sign = rho, k, cusp, sign

    def _key(self):
        return (self.rho.id, self.k, self.cusp.id, self.sign)

    def __eq__(self, other):
        return isinstance(other, LabeledDelta) and other._key() == self._key()

    def __hash__(self):
        return hash(("lab",) + self._key())

    def __str__(self):
        return "d([nu %s..nu^%d %s]_tau%+d;%s)" % (self.rho.id, self.k, self.rho.id, self.sign, self.cusp.id)

    __repr__ = __str__


class Induced:
    """Formal, unevaluated induced term gl x| inner."""

    __slots__ = ("gl", "inner")

    def __init__(self, gl: Multisegment, inner):
        self.gl, self.inner = gl, inner

    def __eq__(self, other):
        return isinstance(other, Induced) and other.gl == self.gl and other.inner == self.inner

    def __hash__(self):
        return hash(("ind", self.gl, self.inner))

    def __str__(self):
        return "%s x| %s" % (self.gl, self.inner)

    __repr__ = __str__


def induce(gl: Multisegment, inner):
    if not gl:
        return inner
    if isinstance(inner, Induced):
        return Induced(gl * inner.gl, inner.inner)
    return Induced(gl, inner)


def classical_rank(term) -> int:
    """GL-degree carried by a classical slot on top of its innermost symbol."""
    if isinstance(term, Induced):
        return term.gl.degree() + classical_rank(term.inner)
    if isinstance(term, Tau):
        return 1
    if isinstance(term, LabeledDelta):
        return term.k + 1
    return 0


def rs_unit(sigma) -> RSElement:
    return RSElement({(ONE, sigma): 1})


_M_STAR_CACHE: dict = {}


def _M_star_segment_items(s: Segment) -> tuple:
    # keyed by object identity: symbols from different catalogs may share ids;
    # the cached value holds a reference to s.rho, so the id stays unique
    key = (id(s.rho), s.lo.twice_value, s.hi.twice_value)
    hit = _M_STAR_CACHE.get(key)
    if hit is None or hit[0] is not s.rho:
        hit = (s.rho, tuple(M_star(Multisegment((s,))).items()))
        if len(_M_STAR_CACHE) > 4096:
            _M_STAR_CACHE.clear()
        _M_STAR_CACHE[key] = hit
    return hit[1]


def fits_within(c: Counter, target: Counter) -> bool:
    return all(target.get(p, 0) >= n for p, n in c.items())


def mu_star_action(x, s: RSElement, within: Counter | None = None) -> RSElement:
    """M*(x) x| s, with classical slots kept as formal induced terms.

    With `within`, only terms whose GL support is contained in it are produced.
    """
    out = RSElement()
    items = _M_star_segment_items(x) if isinstance(x, Segment) else tuple(M_star(x).items())
    right = list(s.items())
    if within is not None:
        items = [(k, c) for k, c in items if fits_within(gl_support(k[0]), within)]
        right = [(k, c) for k, c in right if fits_within(gl_support(k[0]), within)]
    for (a, b), c1 in items:
        sa = gl_support(a) if within is not None else None
        for (g, sigma), c2 in right:
            if within is not None and not fits_within(sa + gl_support(g), within):
                continue
            out.add((a * g, induce(b, sigma)), c1 * c2)
    return out


def supp(m) -> Counter:
    """Multiset of points (exponent, symbol) covered by the segments."""
    if isinstance(m, Segment):
        m = (m,)
    out = Counter()
    for s in m:
        for p in s.points():
            out[(p, s.rho)] += 1
    return out


@lru_cache(maxsize=200000)
def gl_support(m: Multisegment) -> Counter:
    """Cached supp for multisegments; treat the result as read-only."""
    return supp(m)


# ---- text syntax ----------------------------------------------------------

_SEG_RE = re.compile(r"^d\(\s*([^;()\s]+)\s*;\s*([-+0-9/]+)\s*\.\.\s*([-+0-9/]+)\s*\)$")


def render_key(k) -> str:
    if isinstance(k, tuple) and not isinstance(k, Multisegment) and len(k) == 2:
        return "%s (x) %s" % (k[0], k[1])
    return str(k)


def parse_segment(text: str, cat: Catalog) -> Segment | None:
    m = _SEG_RE.match(text.strip())
    if not m:
        raise TemperaError("cannot parse segment %r (expected d(rho;lo..hi))" % text)
    return segment(cat.rho(m.group(1)), HalfInt.of(m.group(2)), HalfInt.of(m.group(3)))


def parse_multisegment(text: str, cat: Catalog) -> Multisegment:
    text = text.strip()
    if text in ("", "1"):
        return ONE
    return ms(*(parse_segment(p, cat) for p in _split_top(text, "*")))


def _split_top(text: str, sep: str) -> list:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def parse_element(text: str, cat: Catalog) -> RElement:
    """Sum of optionally scaled multisegments, e.g. '2 d(r;0..1) + d(r;0..0)*d(r;1..1)'."""
    out = RElement()
    for part in _split_top(text, "+"):
        part = part.strip()
        if not part:
            raise TemperaError("empty summand in %r" % text)
        mm = re.match(r"^(-?\d+)\s+(.*)$", part)
        c = 1
        if mm and not part.startswith("d("):
            c, part = int(mm.group(1)), mm.group(2)
        out.add(parse_multisegment(part, cat), c)
    return out


def format_lincomb(e: LinComb) -> list:
    lines = []
    for k, c in e.sorted_items():
        lines.append("%d %s" % (c, render_key(k)))
    return lines


def multisegment_to_json(m: Multisegment) -> list:
    return [{"rho": s.rho.id, "lo": str(s.lo), "hi": str(s.hi)} for s in m]


def multisegment_from_json(d: list, cat: Catalog) -> Multisegment:
    try:
        return ms(*(segment(cat.rho(e["rho"]), HalfInt.of(e["lo"]), HalfInt.of(e["hi"])) for e in d))
    except (KeyError, TypeError):
        raise TemperaError("bad multisegment JSON %r" % (d,)) from None
