"""Ground alphabet: half-integers, GL cuspidal symbols, classical cuspidal symbols."""

from __future__ import annotations

import enum
import json
from fractions import Fraction
from typing import Iterable, Mapping


class TemperaError(ValueError):
    """Raised on malformed input or a violated precondition."""


class HalfInt:
    """An element of (1/2)Z, stored as twice its value."""

    __slots__ = ("_t", "_h")

    def __init__(self, twice_value: int):
        self._t = int(twice_value)
        self._h = None

    @classmethod
    def of(cls, x) -> "HalfInt":
        if isinstance(x, HalfInt):
            return x
        if isinstance(x, bool):
            raise TemperaError("not a half-integer: %r" % (x,))
        if isinstance(x, int):
            return cls(2 * x)
        if isinstance(x, Fraction):
            if x.denominator not in (1, 2):
                raise TemperaError("not a half-integer: %s" % x)
            return cls(int(2 * x))
        if isinstance(x, str):
            try:
                return cls.of(Fraction(x.strip()))
            except (ValueError, ZeroDivisionError):
                raise TemperaError("cannot parse half-integer %r" % x) from None
        if isinstance(x, float):
            if (2 * x) != int(2 * x):
                raise TemperaError("not a half-integer: %r" % x)
            return cls(int(2 * x))
        raise TemperaError("cannot make a half-integer from %r" % (x,))

    @property
    def twice_value(self) -> int:
        return self._t

    @property
    def is_integer(self) -> bool:
        return self._t % 2 == 0

    @property
    def is_half_odd(self) -> bool:
        return self._t % 2 == 1

    def to_fraction(self) -> Fraction:
        return Fraction(self._t, 2)

    def __int__(self) -> int:
        if self._t % 2:
            raise TemperaError("%s is not an integer" % self)
        return self._t // 2

    def __float__(self) -> float:
        return self._t / 2

    @staticmethod
    def _twice(other):
        if isinstance(other, HalfInt):
            return other._t
        if isinstance(other, int) and not isinstance(other, bool):
            return 2 * other
        return None

    def __add__(self, other):
        t = self._twice(other)
        if t is None:
            return NotImplemented
        return HalfInt(self._t + t)

    __radd__ = __add__

    def __sub__(self, other):
        t = self._twice(other)
        if t is None:
            return NotImplemented
        return HalfInt(self._t - t)

    def __rsub__(self, other):
        t = self._twice(other)
        if t is None:
            return NotImplemented
        return HalfInt(t - self._t)

    def __neg__(self):
        return HalfInt(-self._t)

    def __abs__(self):
        return HalfInt(abs(self._t))

    def __eq__(self, other):
        if type(other) is HalfInt:
            return self._t == other._t
        t = self._twice(other)
        if t is None:
            if isinstance(other, Fraction):
                return self.to_fraction() == other
            return NotImplemented
        return self._t == t

    def __hash__(self):
        # must agree with the hash of the equal int or Fraction
        h = self._h
        if h is None:
            t = self._t
            h = self._h = hash(t // 2) if t % 2 == 0 else hash(Fraction(t, 2))
        return h

    def __lt__(self, other):
        t = self._twice(other)
        if t is None:
            return NotImplemented
        return self._t < t

    def __le__(self, other):
        t = self._twice(other)
        if t is None:
            return NotImplemented
        return self._t <= t

    def __gt__(self, other):
        t = self._twice(other)
        if t is None:
            return NotImplemented
        return self._t > t

    def __ge__(self, other):
        t = self._twice(other)
        if t is None:
            return NotImplemented
        return self._t >= t

    def __str__(self):
        if self._t % 2 == 0:
            return str(self._t // 2)
        return "%d/2" % self._t

    def __repr__(self):
        return "HalfInt(%s)" % self


def half(x) -> HalfInt:
    return HalfInt.of(x)


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"


class GLCuspidal:
    """Formal cuspidal symbol rho of a general linear group.

    Symbols compare and hash by id. A non-selfdual symbol may be linked to a
    dual partner with `link_duals`.
    """

    __slots__ = ("id", "selfdual", "parity", "dim", "_dual", "_h")

    def __init__(self, id: str, selfdual: bool = True, parity: Parity | str | None = None,
                 dim: int | None = None):
        if not id or not isinstance(id, str):
            raise TemperaError("symbol id must be a nonempty string")
        if isinstance(parity, str):
            try:
                parity = Parity(parity.lower())
            except ValueError:
                raise TemperaError("unknown parity %r" % parity) from None
        if dim is not None and dim < 1:
            raise TemperaError("dim must be positive")
        self.id = id
        self._h = hash(("rho", id))
        self.selfdual = bool(selfdual)
        self.parity = parity
        self.dim = dim
        self._dual = self if self.selfdual else None

    @property
    def dual(self) -> "GLCuspidal":
        if self._dual is None:
            raise TemperaError("dual symbol unknown for %s" % self.id)
        return self._dual

    def has_dual(self) -> bool:
        return self._dual is not None

    def __eq__(self, other):
        if other is self:
            return True
        if isinstance(other, GLCuspidal):
            return self.id == other.id
        return NotImplemented

    def __hash__(self):
        # must agree with the hash of the equal int or Fraction
        h = self._h
        if h is None:
            t = self._t
            h = self._h = hash(t // 2) if t % 2 == 0 else hash(Fraction(t, 2))
        return h

    def __lt__(self, other):
        return self.id < other.id

    def __repr__(self):
        return "GLCuspidal(%r)" % self.id

    def __str__(self):
        return self.id


def link_duals(r1: GLCuspidal, r2: GLCuspidal) -> None:
    if r1.selfdual or r2.selfdual:
        raise TemperaError("only non-selfdual symbols take a dual partner")
    if r1 == r2:
        raise TemperaError("a non-selfdual symbol cannot be its own dual")
    r1._dual = r2
    r2._dual = r1


class ClassicalCuspidal:
    """Formal cuspidal symbol of a classical group with its Jordan data."""

    __slots__ = ("id", "jord_cusp", "generic", "eps")

    def __init__(self, id: str, jord_cusp: Mapping[GLCuspidal, Iterable[int]] | None = None,
                 generic: bool | None = None, eps: Mapping | None = None):
        self.id = id
        jc = {}
        for rho, blocks in (jord_cusp or {}).items():
            bs = frozenset(int(a) for a in blocks)
            if not bs:
                continue
            if not rho.selfdual:
                raise TemperaError("cuspidal Jordan blocks need a selfdual symbol, got %s" % rho.id)
            for a in bs:
                if a < 1 or not j1_satisfied(rho, a):
                    raise TemperaError("block (%s,%d) of %s violates (J1)" % (rho.id, a, id))
            jc[rho] = bs
        self.jord_cusp = jc
        self.generic = generic
        # optional explicit signs on the cuspidal blocks: {(rho, a): +-1}
        self.eps = dict(eps) if eps else None

    def blocks(self, rho: GLCuspidal) -> frozenset:
        return self.jord_cusp.get(rho, frozenset())

    def __eq__(self, other):
        if isinstance(other, ClassicalCuspidal):
            return self.id == other.id
        return NotImplemented

    def __hash__(self):
        return hash(("sigma", self.id))

    def __lt__(self, other):
        return self.id < other.id

    def __repr__(self):
        return "ClassicalCuspidal(%r)" % self.id

    def __str__(self):
        return self.id


def _need_selfdual(rho: GLCuspidal) -> None:
    if not rho.selfdual:
        raise TemperaError("parity undefined for non-selfdual symbol %s" % rho.id)
    if rho.parity is None:
        raise TemperaError("parity unknown for %s" % rho.id)


def require_parity(rho: GLCuspidal) -> Parity:
    _need_selfdual(rho)
    return rho.parity


def j1_satisfied(rho: GLCuspidal, a: int) -> bool:
    _need_selfdual(rho)
    if rho.parity is Parity.EVEN:
        return a % 2 == 0
    return a % 2 == 1


def a_max(pc: ClassicalCuspidal, rho: GLCuspidal) -> int:
    _need_selfdual(rho)
    bs = pc.blocks(rho)
    if bs:
        return max(bs)
    if rho.parity is Parity.EVEN:
        return 0
    return -1


def cuspidal_reducibility_exponent(pc: ClassicalCuspidal, rho: GLCuspidal) -> HalfInt:
    return HalfInt(1 + a_max(pc, rho))


class Catalog:
    """Symbols loaded from one JSON document.

    With implicit=True, unknown GL ids resolve to fresh selfdual symbols of
    unknown parity (enough for M* and products, not for Jordan blocks).
    """

    def __init__(self, gl: Iterable[GLCuspidal] = (), classical: Iterable[ClassicalCuspidal] = (),
                 implicit: bool = False):
        self.implicit = implicit
        self.gl = {}
        self.classical = {}
        for r in gl:
            self.add_gl(r)
        for c in classical:
            self.add_classical(c)

    def add_gl(self, r: GLCuspidal) -> GLCuspidal:
        if r.id in self.gl:
            raise TemperaError("duplicate symbol id %s" % r.id)
        self.gl[r.id] = r
        return r

    def add_classical(self, c: ClassicalCuspidal) -> ClassicalCuspidal:
        if c.id in self.classical:
            raise TemperaError("duplicate classical id %s" % c.id)
        self.classical[c.id] = c
        return c

    def rho(self, rid: str) -> GLCuspidal:
        if not isinstance(rid, str):
            raise TemperaError("symbol id must be a string, got %r" % (rid,))
        try:
            return self.gl[rid]
        except KeyError:
            if self.implicit:
                return self.add_gl(GLCuspidal(rid))
            raise TemperaError("unknown GL symbol %r" % rid) from None

    def cusp(self, cid: str) -> ClassicalCuspidal:
        try:
            return self.classical[cid]
        except KeyError:
            raise TemperaError("unknown classical symbol %r" % cid) from None

    @classmethod
    def from_dict(cls, d: dict) -> "Catalog":
        if not isinstance(d, dict):
            raise TemperaError("catalog must be a JSON object")
        cat = cls()
        for e in d.get("gl", []):
            try:
                r = GLCuspidal(e["id"], bool(e.get("selfdual", True)), e.get("parity"), e.get("dim"))
            except (KeyError, TypeError):
                raise TemperaError("bad gl entry %r" % (e,)) from None
            if r.selfdual and r.parity is None:
                raise TemperaError("selfdual symbol %s needs a parity" % r.id)
            cat.add_gl(r)
        pairs = list(d.get("dual_pairs", []))
        for e in d.get("gl", []):
            if "dual" in e:
                pairs.append([e["id"], e["dual"]])
        seen = set()
        for p in pairs:
            if len(p) != 2:
                raise TemperaError("dual pair must have two ids: %r" % (p,))
            a, b = cat.rho(p[0]), cat.rho(p[1])
            key = frozenset((a.id, b.id))
            if key in seen:
                continue
            if a.has_dual() or b.has_dual():
                raise TemperaError("dual pairs must form an involution (%s, %s)" % (a.id, b.id))
            link_duals(a, b)
            seen.add(key)
        for e in d.get("classical", []):
            try:
                cid = e["id"]
                jord = {cat.rho(k): v for k, v in e.get("jord", {}).items()}
                eps = None
                if "eps" in e:
                    eps = {(cat.rho(x["rho"]), int(x["a"])): int(x["sign"]) for x in e["eps"]}
                c = ClassicalCuspidal(cid, jord, e.get("generic"), eps)
            except (KeyError, TypeError, AttributeError):
                raise TemperaError("bad classical entry %r" % (e,)) from None
            cat.add_classical(c)
        return cat

    @classmethod
    def load(cls, path: str) -> "Catalog":
        try:
            with open(path) as f:
                d = json.load(f)
        except OSError as e:
            raise TemperaError("cannot read catalog %s: %s" % (path, e)) from None
        except json.JSONDecodeError as e:
            raise TemperaError("catalog %s is not valid JSON: %s" % (path, e)) from None
        return cls.from_dict(d)

    def to_dict(self) -> dict:
        gl = []
        pairs = []
        for rid in sorted(self.gl):
            r = self.gl[rid]
            e = {"id": r.id, "selfdual": r.selfdual}
            if r.parity is not None:
                e["parity"] = r.parity.value
            if r.dim is not None:
                e["dim"] = r.dim
            gl.append(e)
            if not r.selfdual and r.has_dual() and r.id < r.dual.id:
                pairs.append([r.id, r.dual.id])
        cl = []
        for cid in sorted(self.classical):
            c = self.classical[cid]
            e = {"id": c.id, "jord": {r.id: sorted(bs) for r, bs in sorted(c.jord_cusp.items())}}
            if c.generic is not None:
                e["generic"] = c.generic
            if c.eps:
                e["eps"] = [{"rho": r.id, "a": a, "sign": s} for (r, a), s in sorted(c.eps.items())]
            cl.append(e)
        out = {"gl": gl, "classical": cl}
        if pairs:
            out["dual_pairs"] = pairs
        return out
