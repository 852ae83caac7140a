import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torusalg import category_a as ca
from torusalg import samples
from torusalg.category_a import TAIL, GradedVS, Mor
from torusalg.errors import MalformedInput, NotEffective, NotInA
from torusalg.pid_modules import GMod

seeds = st.integers(0, 10**6)
W = (-6, 6)


def test_endomorphisms_of_unit():
    g = ca.hom_group(ca.unit(), ca.unit(), W)
    assert [g.at(d) for d in (-1, 0, 1)] == [(0, {}, 0), (1, {}, 0), (0, {}, 0)]


def test_maps_into_and_out_of_a_cell():
    s = ca.sigma(2)
    assert ca.hom_group(s, s, W).at(0) == (0, {2: 1}, 0)
    assert ca.hom_group(ca.unit(), s, W).at(1) == (0, {2: 1}, 0)
    assert all(ca.hom_group(s, ca.unit(), W).at(d) == (0, {}, 0) for d in range(-6, 7))


def test_sphere_has_a_pole_where_nu_is_positive():
    x = ca.sphere({3: 2})
    assert x.comp(3).module == GMod.of([4])
    assert x.comp(1).module == GMod.of([0])


def test_validate_rejects_torsion_tail_and_bad_rank():
    with pytest.raises(NotInA):
        ca.validate(ca.make_obj(GradedVS(), {}, (GMod.of(torsion=[(0, 1)]), [])))
    with pytest.raises(NotInA):
        ca.validate(ca.make_obj(GradedVS((0,)), {1: (GMod(), [[]])}, (GMod.of([0]), [[1]])))
    with pytest.raises(NotInA):
        # tail generator c^{-1}-divisible: beta^{-1} has a pole
        ca.validate(ca.make_obj(GradedVS((0,)), {}, (GMod.of([-2]), [[1]])))


def test_tail_beta_with_poles_is_malformed():
    with pytest.raises(MalformedInput):
        ca.make_obj(GradedVS((0,)), {}, (GMod.of([2]), [[1]]))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_json_round_trip(seed):
    x = samples.random_object(random.Random(seed))
    y = ca.obj_from_json(ca.obj_to_json(x))
    assert y.equals(x)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_hom_is_additive(seed):
    rng = random.Random(seed)
    a, b, y = (samples.random_small(rng, 3) for _ in range(3))
    s = ca.validate(ca.direct_sum(a, b))
    assert ca.hom_group(s, y, W) == ca.hom_group(a, y, W) + ca.hom_group(b, y, W)
    assert ca.hom_group(y, s, W) == ca.hom_group(y, a, W) + ca.hom_group(y, b, W)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_sum_injections_and_projections(seed):
    rng = random.Random(seed)
    a, b = samples.random_small(rng, 3), samples.random_small(rng, 3)
    s, inj, proj = ca.sum_injections([a, b])
    assert (proj[0] @ inj[0]).equals(Mor.identity(a))
    assert (proj[1] @ inj[1]).equals(Mor.identity(b))
    assert (proj[1] @ inj[0]).is_zero()
    assert (inj[0] @ proj[0] + inj[1] @ proj[1]).equals(Mor.identity(s))


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_kernel_and_cokernel_compose_to_zero(seed):
    rng = random.Random(seed)
    x, y = samples.random_small(rng, 3), samples.random_small(rng, 3)
    f = samples.random_map(rng, x, y)
    k, i = ca.kernel(f)
    c, p = ca.cokernel(f)
    assert (f @ i).is_zero()
    assert (p @ f).is_zero()
    assert ca.in_A(k) and ca.in_A(c)


def test_cokernel_of_sphere_inclusion():
    f = ca.hom_group(ca.unit(), ca.sphere({1: 1}), (0, 0), with_basis=True).basis[0][0]
    c, _ = ca.cokernel(f)
    assert c.equals(ca.sigma(1, 1))


def test_colimit_and_limit_of_a_single_arrow():
    x, y = ca.unit(), ca.sphere({1: 1})
    f = ca.hom_group(x, y, (0, 0), with_basis=True).basis[0][0]
    col, legs = ca.colimit([x, y], [(0, 1, f)])
    assert col.equals(y)
    lim, legs = ca.limit([x, y], [(0, 1, f)])
    assert lim.equals(x)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_composition_is_associative(seed):
    rng = random.Random(seed)
    a, b, c, d = (samples.random_small(rng, 2) for _ in range(4))
    f, g, h = samples.random_map(rng, a, b), samples.random_map(rng, b, c), samples.random_map(rng, c, d)
    assert ((h @ g) @ f).equals(h @ (g @ f))


def test_gamma_h_kills_the_pure_vertex_part():
    # nub zero everywhere except the tail: nothing of A maps in
    U = GradedVS((0,))
    x = ca.make_obj(U, {1: (GMod(), [[]])}, (GMod.of([-2]), [[1]]))
    g, _ = ca.gamma_h(x)
    assert g.pruned().is_zero()


def test_gamma_h_keeps_torsion():
    x = ca.make_obj(GradedVS((0,)), {2: (GMod.of(torsion=[(3, 1)]), [[0]])}, (GMod.of([-2]), [[1]]))
    g, counit = ca.gamma_h(x)
    assert g.equals(ca.sigma(2, 2))


def test_gamma_h_refuses_free_kernel():
    x = ca.make_obj(GradedVS(), {1: (GMod.of([0]), [])}, (GMod(), []))
    with pytest.raises(NotEffective):
        ca.gamma_h(x)


def test_morphism_json_round_trip():
    x, y = ca.unit(), ca.sphere({1: 1, 2: 2})
    f = ca.hom_group(x, y, (0, 0), with_basis=True).basis[0][0]
    g = ca.mor_from_json(ca.mor_to_json(f), x, y)
    assert g.equals(f)


def test_bad_json_reports_locus():
    with pytest.raises(MalformedInput) as exc:
        ca.obj_from_json({"vertex": [[0, 1]], "tail": {"module": {"free": [0]}, "beta": [["c"]]}})
    assert "tail.beta" in str(exc.value)


def test_cgvs_tail_pattern():
    g = ca.hom_group(ca.unit(), ca.sphere({1: 1}), W)
    assert g.component_dim(1, 0) == 0 and g.component_dim(TAIL, 0) == 0
    assert g.at(0) == (1, {}, 0)
