import random

from hypothesis import given, settings
from hypothesis import strategies as st

from torusalg import category_a as ca
from torusalg import monoidal as mo
from torusalg import samples
from torusalg.category_a import GradedVS, Mor

seeds = st.integers(0, 10**6)
nus = st.dictionaries(st.integers(1, 5), st.integers(-2, 2), max_size=3)


@given(nus, nus)
def test_spheres_multiply(nu, mu):
    total = {n: nu.get(n, 0) + mu.get(n, 0) for n in set(nu) | set(mu)}
    assert mo.tensor(ca.sphere(nu), ca.sphere(mu)).equals(ca.sphere(total))


@given(nus, nus)
def test_function_object_of_spheres(nu, mu):
    diff = {n: mu.get(n, 0) - nu.get(n, 0) for n in set(nu) | set(mu)}
    assert mo.function_obj(ca.sphere(nu), ca.sphere(mu)).equals(ca.sphere(diff))


def test_cells():
    assert mo.tensor(ca.sigma(2), ca.sigma(3)).pruned().is_zero()
    assert mo.tensor(ca.sigma(2), ca.sigma(2)).equals(ca.sigma(2, 1))
    assert mo.tensor(ca.sphere({2: 1}), ca.sigma(2)).equals(ca.sigma(2, 2))
    assert mo.dual(ca.sigma(4)).pruned().is_zero()


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_unit_and_associativity(seed):
    rng = random.Random(seed)
    x, y, z = (samples.random_small(rng, 3) for _ in range(3))
    lu, ru = mo.left_unitor(x), mo.right_unitor(x)
    assert lu.is_iso() and ru.is_iso()
    assert (mo.invert(lu) @ lu).equals(Mor.identity(lu.src))
    a = mo.associator(x, y, z)
    assert a.is_iso()
    assert a.src.equals(mo.tensor(mo.tensor(x, y), z))


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_braiding_is_an_involution(seed):
    rng = random.Random(seed)
    x, y = samples.random_small(rng, 3), samples.random_small(rng, 3)
    b = mo.braiding(x, y)
    assert (mo.braiding(y, x) @ b).equals(Mor.identity(b.src))


def test_koszul_sign_on_odd_vertices():
    x = ca.unit().shift(1)
    b = mo.braiding(x, x)
    assert b.phi == [[-1]]
    assert mo.braiding(ca.unit(), ca.unit()).phi == [[1]]


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_tensor_is_natural(seed):
    rng = random.Random(seed)
    x, y, z = (samples.random_small(rng, 2) for _ in range(3))
    f, g = samples.random_map(rng, x, y), samples.random_map(rng, y, z)
    w = samples.random_small(rng, 2)
    idw = Mor.identity(w)
    lhs = mo.tensor_mor(g @ f, idw)
    rhs = mo.tensor_mor(g, idw) @ mo.tensor_mor(f, idw)
    assert lhs.equals(rhs)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_tensor_hom_adjunction(seed):
    rng = random.Random(seed)
    x, y, z = (samples.random_small(rng, 3) for _ in range(3))
    assert mo.check_tensor_hom(x, y, z, (-5, 5)).ok


@given(nus)
def test_spheres_are_dualizable(nu):
    w = mo.is_dualizable(ca.sphere(nu))
    assert isinstance(w, mo.DualityWitness)
    assert w.exact()
    assert all(mo.canonical_map_probes(ca.sphere(nu)).values())


def test_free_objects_are_dualizable():
    w = mo.is_dualizable(ca.lk(GradedVS((0, 1, 3))))
    assert isinstance(w, mo.DualityWitness) and w.exact()


def test_torsion_is_refused_with_locus():
    r = mo.is_dualizable(ca.sigma(3, 2))
    assert isinstance(r, mo.Refusal)
    assert (r.component, r.degree) == (3, 3)
    assert not r.probes["x"]


def test_vector_space_actions():
    K = GradedVS((2,))
    x = ca.sphere({1: 1})
    assert mo.tensor_vector_space(x, K).equals(x.shift(2))
    assert mo.cotensor(x, K).equals(x.shift(-2))
    R = mo.r_functor(ca.unit(), (-3, 3))
    assert [R.finite_dim(d) for d in range(-3, 4)] == [0, 0, 0, 1, 0, 0, 0]
