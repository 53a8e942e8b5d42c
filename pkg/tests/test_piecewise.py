from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from gdof.piecewise import PiecewiseLinear, argmax_segments, pl_max, pl_min

fracs = st.fractions(min_value=0, max_value=6, max_denominator=12)
lines = st.tuples(
    st.fractions(min_value=-3, max_value=3, max_denominator=6),
    st.fractions(min_value=-3, max_value=3, max_denominator=6),
)


def _pl(slope, intercept):
    return PiecewiseLinear.linear(slope, intercept)


def test_splice_and_evaluate():
    f = PiecewiseLinear.splice([(0, _pl(-1, 1)), (Fraction(1, 2), _pl(1, 0))])
    assert f(0) == 1 and f(Fraction(1, 2)) == Fraction(1, 2) and f(2) == 2
    assert f.breakpoints() == (Fraction(1, 2),)


def test_simplify_merges_equal_pieces():
    f = PiecewiseLinear.splice([(0, _pl(1, 0)), (1, _pl(1, 0))])
    assert f.breakpoints() == ()


@given(st.lists(lines, min_size=1, max_size=5), fracs)
def test_min_max_are_pointwise(ls, x):
    fs = [_pl(*l) for l in ls]
    assert pl_min(fs)(x) == min(f(x) for f in fs)
    assert pl_max(fs)(x) == max(f(x) for f in fs)


@given(lines, lines, fracs)
def test_add_is_pointwise(a, b, x):
    assert _pl(*a).add(_pl(*b))(x) == _pl(*a)(x) + _pl(*b)(x)


@given(st.lists(lines, min_size=2, max_size=4), fracs)
def test_argmax_segments_cover_and_pick_maximizers(ls, x):
    named = {f"f{k}": _pl(*l) for k, l in enumerate(ls)}
    segs = argmax_segments(named)
    assert segs[0].lo == 0 and segs[-1].hi is None
    for a, b in zip(segs, segs[1:]):
        assert a.hi == b.lo
    seg = next(s for s in segs if s.lo <= x and (s.hi is None or x < s.hi))
    best = max(f(x) for f in named.values())
    assert all(named[n](x) == best for n in seg.active)
