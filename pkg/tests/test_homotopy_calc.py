import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torusalg import category_a as ca
from torusalg import homotopy_calc as hc
from torusalg import monoidal as mo
from torusalg import samples
from torusalg.category_a import GradedVS, Mor
from torusalg.errors import MalformedInput, WindowTooSmall

seeds = st.integers(0, 10**6)
W = (-10, 10)

exprs = st.recursive(
    st.one_of(st.just(hc.S0()), st.builds(hc.Sigma, st.integers(1, 9)), st.builds(hc.Orbit, st.integers(1, 12))),
    lambda inner: st.one_of(st.builds(hc.Susp, st.integers(-3, 3), inner), st.builds(hc.Wedge, inner, inner)),
    max_leaves=4,
)


@given(exprs)
def test_spectrum_expressions_round_trip(e):
    assert hc.parse_spectrum(str(e)) == e


@pytest.mark.parametrize("text", ["Sigma(0)", "Wedge(S0)", "Susp(x, S0)", "Foo(1)", "S0 S0", "Orbit(3"])
def test_bad_expressions(text):
    with pytest.raises(MalformedInput):
        hc.parse_spectrum(text)


@given(exprs)
def test_pi_A_counts_cells(e):
    def cells(e):
        if e.kind == "S0":
            return 0
        if e.kind == "Sigma":
            return 1
        if e.kind == "Orbit":
            return len(hc.divisors(e.n))
        if e.kind == "Susp":
            return cells(e.args[0])
        return cells(e.args[0]) + cells(e.args[1])

    torsion = sum(len(s.comp(n).module.torsion()) for s in hc.pi_A_summands(e) for n in s.indices())
    assert torsion == cells(e)


def test_ext_from_a_cell_to_the_unit():
    g = hc.ext1(ca.sigma(2), ca.unit(), W)
    assert g.at(1) == (0, {2: 1}, 0)
    assert all(g.at(d) == (0, {}, 0) for d in range(-10, 11) if d != 1)


def test_maps_from_a_cell():
    t = hc.maps_table(hc.Sigma(3), hc.S0(), (-4, 4))
    assert t.total().at(0) == (0, {3: 1}, 0)
    assert sum(t.total().finite_dim(d) for d in range(-4, 5)) == 1


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_ext_is_additive(seed):
    rng = random.Random(seed)
    a, b, y = (samples.random_small(rng, 3) for _ in range(3))
    s = ca.validate(ca.direct_sum(a, b))
    assert hc.ext1(s, y, W) == hc.ext1(a, y, W) + hc.ext1(b, y, W)
    assert hc.ext1(y, s, W) == hc.ext1(y, a, W) + hc.ext1(y, b, W)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_resolutions_are_exact_and_padding_is_harmless(seed):
    rng = random.Random(seed)
    x, y = samples.random_object(rng), samples.random_small(rng, 3)
    res = hc.inj_resolve(y, W)
    assert hc.verify_exact(res).ok
    padded = hc.pad(res, GradedVS((rng.randint(-2, 2),)), {rng.randint(1, 4): (rng.randint(-4, 4),)})
    assert hc.verify_exact(padded).ok
    assert hc.ext1(x, y, W, res=padded) == hc.ext1(x, y, W)


def test_window_too_small_suggests_a_window():
    x = ca.validate(ca.make_obj(GradedVS(), {2: (ca.GMod.of(torsion=[(9, 3)]), [])}, (ca.GMod(), [])))
    with pytest.raises(WindowTooSmall) as exc:
        hc.inj_resolve(x, (-4, 4))
    assert exc.value.suggested == (-4, 9)


def test_lifting_probes():
    i = ca.hom_group(ca.unit(), ca.sphere({1: 1}), (0, 0), with_basis=True).basis[0][0]
    res = hc.inj_resolve(ca.validate(ca.direct_sum(ca.unit(), ca.sigma(1))), W)
    for term in (res.I0, res.I1):
        assert all(hc.extends(i, term, d) for d in range(-3, 4))


def test_lifting_fails_along_a_non_monomorphism():
    s = ca.sigma(1)
    zero = Mor.zero(s, ca.zero_object(), 0)
    hull = hc.InjObj(GradedVS(), {1: (-1,)})
    assert not hc.extends(zero, hull, 0)


def test_adams_table_render_and_json():
    t = hc.maps_table(hc.S0(), hc.S0(), (-2, 2))
    text = t.render()
    assert "<all n>" in text
    assert t.to_json()["total"]["global"] == {"0": 1}


@settings(max_examples=15, deadline=None)
@given(exprs, exprs)
def test_maps_table_is_additive(a, b):
    w = (-3, 3)
    y = hc.S0()
    whole = hc.maps_table(hc.Wedge(a, b), y, w).total()
    assert whole == hc.maps_table(a, y, w).total() + hc.maps_table(b, y, w).total()


def test_homotopy_of_a_cell_is_nonzero():
    # R(sigma_n) = pi_*: one Q in degree 1 at n
    R = mo.r_functor(ca.sigma(4), (-3, 3))
    assert [R.finite_dim(d) for d in range(-3, 4)] == [0, 0, 0, 0, 1, 0, 0]
