"""Reference computations written without the package's data types.

A segment is a triple (symbol_id, 2*lo, 2*hi); a multisegment is a sorted
tuple of such triples. Tensors are Counters keyed by pairs of multisegments.
Symbols are assumed selfdual here, so the dual of a segment only negates.
"""

from collections import Counter
from itertools import product


def mseg(*segs):
    return tuple(sorted(s for s in segs if s is not None))


def seg(sym, lo2, hi2):
    if hi2 == lo2 - 2:
        return None
    assert hi2 >= lo2 and (hi2 - lo2) % 2 == 0
    return (sym, lo2, hi2)


def mul(a, b):
    return tuple(sorted(a + b))


def dual(m):
    return mseg(*((s, -h, -l) for s, l, h in m))


def m_star_seg(s):
    sym, x, y = s
    out = Counter()
    # cut after each point, including the two trivial cuts
    for cut in range(x - 2, y + 1, 2):
        out[(mseg(seg(sym, cut + 2, y)), mseg(seg(sym, x, cut)))] += 1
    return out


def tmul(u, v):
    out = Counter()
    for (a1, b1), c1 in u.items():
        for (a2, b2), c2 in v.items():
            out[(mul(a1, a2), mul(b1, b2))] += c1 * c2
    return out


def extend(per_seg, m):
    acc = Counter({((), ()): 1})
    for s in m:
        acc = tmul(acc, per_seg(s))
    return acc


def m_star(m):
    return extend(m_star_seg, m)


def M_star_seg(s):
    # (m (x) 1) o (dual (x) m*) o swap o m*
    out = Counter()
    for (left, right), c in m_star_seg(s).items():
        for (l1, l2), c2 in m_star(left).items():
            out[(mul(dual(right), l1), l2)] += c * c2
    return out


def M_star(m):
    return extend(M_star_seg, m)


def all_segments(symbols, lo2_range, max_len):
    for sym in symbols:
        for lo2 in lo2_range:
            for k in range(max_len):
                yield (sym, lo2, lo2 + 2 * k)


def multisegments_up_to(symbols, lo2_range, total):
    """Every multisegment over the given segments with total support <= total."""
    segs = sorted(all_segments(symbols, lo2_range, total))
    out = [()]

    def grow(start, cur, size):
        for i in range(start, len(segs)):
            n = (segs[i][2] - segs[i][1]) // 2 + 1
            if size + n <= total:
                nxt = cur + (segs[i],)
                out.append(nxt)
                grow(i, nxt, size + n)

    grow(0, (), 0)
    return out


def expand_product(x, y):
    """Term-by-term product of two dict-valued ring elements."""
    out = Counter()
    for (m1, c1), (m2, c2) in product(x.items(), y.items()):
        out[mul(m1, m2)] += c1 * c2
    return Counter({k: v for k, v in out.items() if v})
