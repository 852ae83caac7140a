import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torusalg import category_a as ca
from torusalg import dg_layer as dg
from torusalg import samples
from torusalg.category_a import TAIL, Mor
from torusalg.errors import MalformedInput

seeds = st.integers(0, 10**6)


def _basis_map(x, y):
    return ca.hom_group(x, y, (0, 0), with_basis=True).basis[0][0]


def test_cone_of_sphere_inclusion():
    f = _basis_map(ca.unit(), ca.sphere({1: 1}))
    c = dg.cone(dg.DGMor(dg.DGObj(ca.unit()), dg.DGObj(ca.sphere({1: 1})), f))
    assert dg.homology(c.obj).equals(ca.sigma(1, 1))


def test_cone_of_identity_is_acyclic():
    x = ca.sphere({2: -1, 3: 1})
    c = dg.cone(dg.DGMor.identity(dg.DGObj(x)))
    assert dg.homology(c.obj).pruned().is_zero()


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_cone_homology_is_coker_plus_shifted_kernel(seed):
    rng = random.Random(seed)
    x, y = samples.random_small(rng, 3), samples.random_small(rng, 3)
    f = samples.random_map(rng, x, y)
    H = dg.homology(dg.cone(dg.DGMor(dg.DGObj(x), dg.DGObj(y), f)).obj)
    k, _ = ca.kernel(f)
    c, _ = ca.cokernel(f)
    want = ca.validate(ca.direct_sum(k.shift(1), c))  # same summand order as the cone
    assert H.equals(want)


def test_quasi_iso_verdicts():
    x = dg.DGObj(ca.sphere({1: 2}))
    assert dg.quasi_iso(dg.DGMor.identity(x), (-6, 6)).iso
    f = _basis_map(ca.unit(), ca.sphere({1: 1}))
    v = dg.quasi_iso(dg.DGMor(dg.DGObj(ca.unit()), dg.DGObj(ca.sphere({1: 1})), f), (-6, 6))
    assert not v.iso
    assert v.obstruction == (1, 2)


def test_flat_resolution_of_torsion():
    for k in (1, 2, 3):
        x = ca.validate(ca.make_obj(ca.GradedVS(), {2: (ca.GMod.of(torsion=[(3, k)]), [])},
                                    (ca.GMod(), [])))
        P = dg.flat_resolution(x)
        assert all(not c.module.torsion() for c in [P.carrier.comp(n) for n in P.carrier.indices() + [TAIL]])
        assert dg.homology(P).equals(x)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_flat_resolution_has_same_homology(seed):
    x = samples.random_object(random.Random(seed))
    assert dg.homology(dg.flat_resolution(x)).equals(x)


def test_tensor_square_of_a_cell():
    for n in (1, 4):
        s = dg.DGObj(ca.sigma(n))
        _, rep = dg.derived_tensor(s, s)
        # one Q from the tensor product, one from Tor shifted up by one
        assert rep.homology.equals(ca.validate(ca.direct_sum(ca.sigma(n, 0), ca.sigma(n, 1))))
        assert rep.ok


def test_tensor_of_cells_at_different_places_vanishes():
    _, rep = dg.derived_tensor(dg.DGObj(ca.sigma(2)), dg.DGObj(ca.sigma(3)))
    assert rep.homology.pruned().is_zero()


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_kunneth_random(seed):
    rng = random.Random(seed)
    _, rep = dg.derived_tensor(samples.random_dg(rng), samples.random_dg(rng))
    assert rep.ok


def test_hom_complex_of_formal_objects_is_hom():
    x, y = dg.DGObj(ca.unit()), dg.DGObj(ca.sphere({1: 1}))
    hc = dg.hom_complex(x, y, (-3, 3))
    assert hc.homology == hc.chains
    assert hc.homology[0] == 1


def test_hom_complex_into_acyclic_cone_is_acyclic():
    x = dg.DGObj(ca.unit())
    c = dg.cone(dg.DGMor.identity(x)).obj
    hc = dg.hom_complex(x, c, (-3, 3))
    assert all(v == 0 for v in hc.homology.values())
    assert any(hc.chains.values())


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_dg_braiding_squares_to_identity(seed):
    rng = random.Random(seed)
    x, y = samples.random_dg(rng), samples.random_dg(rng)
    b, back = dg.braiding_dg(x, y), dg.braiding_dg(y, x)
    assert (back.f @ b.f).equals(Mor.identity(b.src.carrier))


def test_shift_sign():
    c = dg.cone(dg.DGMor.identity(dg.DGObj(ca.unit()))).obj
    s = c.shift(1)
    assert s.d.scale(-1).equals(ca.reframe(c.d, s.carrier, s.carrier, -1))
    assert c.shift(2).d.equals(ca.reframe(c.d, c.shift(2).carrier, c.shift(2).carrier, -1))


def test_bad_differential():
    x = ca.validate(ca.direct_sum(ca.unit(), ca.unit().shift(1)))
    with pytest.raises(MalformedInput):
        dg.DGObj(x, Mor.identity(x))


def test_non_chain_map_rejected():
    c = dg.cone(dg.DGMor.identity(dg.DGObj(ca.unit()))).obj
    f = ca.Mor.zero(c.carrier, c.carrier, 0)
    # a projection onto one summand does not commute with d
    _, inj, proj = ca.sum_injections([ca.unit().shift(1), ca.unit()])
    p = ca.reframe(inj[0] @ proj[0], c.carrier, c.carrier, 0)
    assert dg.DGMor(c, c, f)
    with pytest.raises(MalformedInput):
        dg.DGMor(c, c, p)
