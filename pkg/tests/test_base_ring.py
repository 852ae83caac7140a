from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torusalg import base_ring as br
from torusalg.errors import MalformedInput

rats = st.fractions(min_value=-3, max_value=3, max_denominator=4)
seqs = st.builds(
    br.TailSeq.make,
    st.dictionaries(st.integers(1, 5), rats, max_size=3),
    rats,
)
of_elems = st.builds(br.OFElem.make, st.dictionaries(st.integers(0, 3), seqs, max_size=3))
loc_elems = st.builds(
    lambda pos, neg: br.LocElem.make({**pos, **neg}),
    st.dictionaries(st.integers(0, 3), seqs, max_size=2),
    st.dictionaries(st.integers(-3, -1),
                    st.builds(br.TailSeq.make, st.dictionaries(st.integers(1, 5), rats, max_size=2)),
                    max_size=2),
)


@given(of_elems, of_elems)
def test_of_mul_commutes(a, b):
    assert a * b == b * a


@settings(max_examples=40)
@given(of_elems, of_elems, of_elems)
def test_of_mul_associates_and_distributes(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(of_elems)
def test_one_is_unit(a):
    assert a * br.one() == a


@given(st.frozensets(st.integers(1, 6), max_size=4))
def test_idempotents(phi):
    e, f = br.idempotent(phi), br.idempotent(phi, cofinite=True)
    assert e * e == e
    assert f * f == f
    assert e + f == br.one()
    assert (e * f).is_zero()


@given(loc_elems, loc_elems)
def test_localized_mul_commutes(a, b):
    assert a * b == b * a


@given(st.integers(1, 9))
def test_c_n_inverse(n):
    prod = br.localize_elem(br.c_n(n)) * br.c_n_inverse(n)
    assert prod == br.localize_elem(br.idempotent([n]))


def test_euler_class_is_product_of_components():
    c = br.euler_class()
    assert c.component(4) == {1: Fraction(1)}
    assert (c * br.idempotent([2])).component(2) == {1: Fraction(1)}
    assert (c * br.idempotent([2])).component(3) == {}


@given(of_elems)
def test_of_json_round_trip(a):
    assert br.OFElem.from_json(a.to_json()) == a


@given(loc_elems)
def test_loc_json_round_trip(a):
    assert br.LocElem.from_json(a.to_json()) == a


def test_positive_degree_needs_finite_support():
    with pytest.raises(MalformedInput):
        br.LocElem.make({-1: br.TailSeq.make({}, 1)})


def test_of_has_no_poles():
    with pytest.raises(MalformedInput):
        br.OFElem.make({-1: br.TailSeq.make({1: 1})})


def test_bad_json():
    with pytest.raises(MalformedInput):
        br.OFElem.from_json({"slices": [{"k": 0}, {"k": 0}]})
    with pytest.raises(MalformedInput):
        br.OFElem.from_json({"nope": 1})


def test_tailseq_drops_entries_equal_to_tail():
    s = br.TailSeq.make({1: 2, 2: 5}, 5)
    assert s.exceptions == ((1, Fraction(2)),)
    assert s[2] == 5 and s[100] == 5
