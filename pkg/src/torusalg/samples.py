"""Random effective objects for property checks and demos."""
from __future__ import annotations

import random

from . import category_a as ca
from .category_a import EffObj, EffObjHat, GradedVS
from .dg_layer import DGMor, DGObj, cone
from .pid_modules import GMod


def random_nu(rng: random.Random, max_n: int = 4, max_abs: int = 2) -> dict[int, int]:
    support = rng.sample(range(1, max_n + 1), rng.randint(0, min(3, max_n)))
    return {n: rng.choice([v for v in range(-max_abs, max_abs + 1) if v]) for n in support}


def random_summand(rng: random.Random, max_n: int = 4) -> EffObj:
    kind = rng.choice(["sphere", "sphere", "sigma", "lk"])
    k = rng.randint(-2, 2)
    if kind == "sphere":
        return ca.sphere(random_nu(rng, max_n), k)
    if kind == "sigma":
        return ca.sigma(rng.randint(1, max_n), k)
    return ca.lk(GradedVS((k,)))


def random_object(rng: random.Random, max_summands: int = 2, max_n: int = 4) -> EffObj:
    parts = [random_summand(rng, max_n) for _ in range(rng.randint(1, max_summands))]
    return ca.validate(ca.direct_sum(*parts)) if len(parts) > 1 else parts[0]


def random_small(rng: random.Random, max_n: int = 3) -> EffObj:
    """A single summand; keeps tensor products and function objects small."""
    return random_summand(rng, max_n)


def random_map(rng: random.Random, x: EffObj, y: EffObj, degree: int = 0) -> ca.Mor:
    """A random integer combination of a hom basis; zero when the group is."""
    basis = ca.hom_group(x, y, (degree, degree), with_basis=True).basis[degree]
    f = ca.Mor.zero(x, y, degree)
    for b in basis:
        f = f + b.scale(rng.randint(-2, 2))
    return f


def random_hat(rng: random.Random, max_n: int = 4) -> EffObjHat:
    """An object of the larger category, usually outside A.

    Either a nub is dropped at one component (beta stops being onto there) or
    the tail generators are multiplied by c (beta stops being invertible over
    Q[c]).
    """
    x = random_object(rng, 2, max_n)
    kind = rng.choice(["drop", "lift", "keep"])
    if kind == "drop" and len(x.vertex):
        n = rng.randint(1, max_n)
        old = x.comp(n)
        tors = old.module.torsion_indices()
        mod = GMod.of(torsion=[(old.module.deg(i), old.module.order(i)) for i in tors])
        exc = dict(x.exc)
        exc[n] = ca.Component.make(mod, [[0] * len(mod) for _ in x.vertex.degrees], x.vertex)
        return EffObjHat(x.vertex, exc, x.tail)
    if kind == "lift" and len(x.vertex):
        t = x.tail
        mod = t.module.shift(-2)
        tail = ca.Component.make(mod, t.beta, x.vertex)
        return EffObjHat(x.vertex, x.exc, tail)
    return ca.inclusion_hat(x)


def random_dg(rng: random.Random, max_n: int = 3) -> DGObj:
    """Either a formal object or the cone of a random map."""
    if rng.random() < 0.4:
        return DGObj(random_small(rng, max_n))
    x, y = random_small(rng, max_n), random_small(rng, max_n)
    return cone(DGMor(DGObj(x), DGObj(y), random_map(rng, x, y))).obj
