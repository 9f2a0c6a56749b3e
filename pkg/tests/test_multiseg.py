from collections import Counter
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from tempera.multiseg import (
    ONE, Induced, Multisegment, Opaque, RElement, RSElement, RTensor, Segment,
    check_dual, delta, m_star, M_star, M_star_closed_terms, M_star_GL,
    M_star_pipeline, ms, mu_star_action, parse_element, rs_unit, segment, supp,
    times,
)
from tempera.symbols import Catalog, GLCuspidal, HalfInt, TemperaError

R = GLCuspidal("r", parity="odd")
S = GLCuspidal("s", parity="even")


def raw(m):
    return tuple(sorted((s.rho.id, s.lo.twice_value, s.hi.twice_value) for s in m))


def raw_tensor(t):
    return Counter({(raw(a), raw(b)): c for (a, b), c in t.items()})


def to_pkg(m):
    sym = {"r": R, "s": S}
    return Multisegment(Segment(sym[i], HalfInt(l), HalfInt(h)) for i, l, h in m)


seg_st = st.builds(
    lambda rho, lo2, n: Segment(rho, HalfInt(lo2), HalfInt(lo2 + 2 * n)),
    st.sampled_from([R, S]), st.integers(-4, 4), st.integers(0, 2))
mseg_st = st.lists(seg_st, max_size=3).map(Multisegment)
elem_st = st.dictionaries(mseg_st, st.integers(-3, 3).filter(bool), max_size=3).map(RElement)


def test_times_examples():
    m = ms(delta(R, 3))
    assert times(ONE, m) == RElement({m: 1})
    d2 = delta(R, 2)
    assert times(d2, d2) == RElement({Multisegment((d2, d2)): 1})


@given(elem_st, elem_st, elem_st)
def test_times_distributes(a, b, c):
    lhs = times(a + b, c)
    expected = oracles.expand_product(
        {raw(m): v for m, v in a.items()}, {raw(m): v for m, v in c.items()})
    expected.update({k: v for k, v in oracles.expand_product(
        {raw(m): v for m, v in b.items()}, {raw(m): v for m, v in c.items()}).items()})
    expected = Counter({k: v for k, v in expected.items() if v})
    assert lhs == times(a, c) + times(b, c)
    assert Counter({raw(m): v for m, v in lhs.items()}) == expected


def test_check_dual_examples():
    assert check_dual(ms(delta(R, 4))) == ms(delta(R, 4))
    assert check_dual(ms(segment(R, 1, 2))) == ms(segment(R, -2, -1))


def test_check_dual_non_selfdual():
    c, cv = GLCuspidal("c", selfdual=False), GLCuspidal("cv", selfdual=False)
    with pytest.raises(TemperaError, match="dual symbol unknown"):
        check_dual(ms(segment(c, 0, 1)))
    from tempera.symbols import link_duals
    link_duals(c, cv)
    assert check_dual(ms(segment(c, 0, 1))) == ms(segment(cv, -1, 0))


@given(mseg_st)
def test_check_dual_involution(m):
    assert check_dual(check_dual(m)) == m


def test_m_star_two_point_segment():
    s = segment(R, 0, 1)
    assert m_star(s) == RTensor({
        (ms(s), ONE): 1,
        (ms(segment(R, 1, 1)), ms(segment(R, 0, 0))): 1,
        (ONE, ms(s)): 1,
    })
    assert m_star(ONE) == RTensor({(ONE, ONE): 1})


@given(mseg_st, mseg_st)
def test_m_star_multiplicative(x, y):
    from tempera.multiseg import tensor_times
    assert m_star(x * y) == tensor_times(m_star(x), m_star(y))


@given(mseg_st)
def test_m_star_matches_oracle(m):
    assert raw_tensor(m_star(m)) == oracles.m_star(raw(m))


def test_M_star_point():
    p = segment(R, F(3, 2), F(3, 2))
    assert M_star(p) == RTensor({
        (ms(p), ONE): 1, (ms(segment(R, F(-3, 2), F(-3, 2))), ONE): 1, (ONE, ms(p)): 1,
    })
    assert M_star(ONE) == RTensor({(ONE, ONE): 1})


def test_M_star_delta2():
    d2 = delta(R, 2)
    h, mh = segment(R, F(1, 2), F(1, 2)), segment(R, F(-1, 2), F(-1, 2))
    expected = RTensor({
        (ms(d2), ONE): 2,
        (ms(h), ms(mh)): 1,
        (ms(h), ms(h)): 1,
        (ms(h, h), ONE): 1,
        (ONE, ms(d2)): 1,
    })
    assert M_star(d2) == expected
    assert M_star_pipeline(d2) == expected


@pytest.mark.parametrize("n", range(5))
def test_M_star_closed_term_count(n):
    s = segment(R, F(-1, 2), F(-1, 2) + n)
    assert len(M_star_closed_terms(s)) == (n + 2) * (n + 3) // 2


@given(mseg_st)
@settings(max_examples=60)
def test_M_star_matches_oracle(m):
    assert raw_tensor(M_star(m)) == oracles.M_star(raw(m))


@given(mseg_st)
@settings(max_examples=60)
def test_coefficients_positive(m):
    assert all(c > 0 for c in m_star(m).values())
    assert all(c > 0 for c in M_star(m).values())


def test_M_star_GL_examples():
    p = segment(R, 1, 1)
    assert M_star_GL(p) == RElement({ms(p): 1, ms(segment(R, -1, -1)): 1})
    s = segment(R, 1, 2)
    assert M_star_GL(s) == RElement({
        ms(s): 1, ms(segment(R, -1, -1), segment(R, 2, 2)): 1, ms(segment(R, -2, -1)): 1,
    })
    with pytest.raises(TemperaError):
        M_star_GL(segment(GLCuspidal("c", selfdual=False), 0, 0))


@given(seg_st)
def test_M_star_GL_is_projection(s):
    proj = RElement()
    for (a, b), c in M_star(s).items():
        if b == ONE:
            proj.add(a, c)
    assert M_star_GL(s) == proj


def test_mu_star_action_examples():
    pi = Opaque("pi")
    unit = rs_unit(pi)
    assert mu_star_action(ONE, unit) == unit
    p, mp = segment(R, 2, 2), segment(R, -2, -2)
    assert mu_star_action(p, unit) == RSElement({
        (ms(p), pi): 1, (ms(mp), pi): 1, (ONE, Induced(ms(p), pi)): 1,
    })


@given(mseg_st)
@settings(max_examples=40)
def test_mu_star_action_degree(m):
    unit = rs_unit(Opaque("pi"))
    for (g, sigma), _ in mu_star_action(m, unit).items():
        rank = sigma.gl.degree() if isinstance(sigma, Induced) else 0
        assert g.degree() + rank == m.degree()


def test_supp_examples():
    assert supp(segment(R, 0, 1)) == Counter({(HalfInt(0), R): 1, (HalfInt(2), R): 1})
    d2 = delta(R, 2)
    assert supp(ms(d2, d2)) == Counter({(HalfInt(-1), R): 2, (HalfInt(1), R): 2})


@given(mseg_st, mseg_st)
def test_supp_additive(x, y):
    assert supp(x * y) == supp(x) + supp(y)


def test_parse_element():
    cat = Catalog([R])
    e = parse_element("d(r;-1/2..1/2)", cat)
    assert e == RElement({ms(delta(R, 2)): 1})


def test_hopf_sweep_matches_oracle_small():
    for m in oracles.multisegments_up_to(["r", "s"], range(-2, 3), 3):
        assert raw_tensor(m_star(to_pkg(m))) == oracles.m_star(m)
