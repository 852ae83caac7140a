"""Small named check bundles run by `torusalg demo`."""
from __future__ import annotations

import random

from . import category_a as ca
from . import dg_layer as dg
from . import diagram_sa as ds
from . import homotopy_calc as hc
from . import monoidal as mo
from .samples import random_nu


def _cofibre(rng):
    S, S1, Sm = ca.unit(), ca.sphere({1: 1}), ca.sphere({1: -1})
    f = ca.hom_group(S, S1, (0, 0), with_basis=True).basis[0][0]
    g = ca.hom_group(Sm, S, (0, 0), with_basis=True).basis[0][0]
    h1 = dg.homology(dg.cone(dg.DGMor(dg.DGObj(S), dg.DGObj(S1), f)).obj)
    h2 = dg.homology(dg.cone(dg.DGMor(dg.DGObj(Sm), dg.DGObj(S), g)).obj)
    return [
        ("cone(S0 -> S^nu1) = Σσ1 in A", h1.equals(ca.sigma(1, 1))),
        ("cone(S^-nu1 -> S0) = Σ^-1 σ1 in A", h2.equals(ca.sigma(1, -1))),
        ("cone(S0 -> S^nu1) as diagrams", ds.verify_cofibre(ds.l_star_mor(f), ds.cells_ka(1, 1)).ok),
        ("cone(S^-nu1 -> S0) as diagrams", ds.verify_cofibre(ds.l_star_mor(g), ds.cells_ka(1, -1)).ok),
    ]


def _duals(rng):
    out = []
    for _ in range(5):
        nu = random_nu(rng)
        x = ca.sphere(nu)
        neg = ca.sphere({n: -v for n, v in nu.items()})
        out.append((f"dual(S^{nu}) = S^-nu", mo.dual(x).equals(neg)))
        out.append((f"dual(dual(S^{nu})) = S^nu", mo.dual(mo.dual(x)).equals(x)))
    n = rng.randint(1, 5)
    out.append((f"sigma_{n} is refused", isinstance(mo.is_dualizable(ca.sigma(n)), mo.Refusal)))
    return out


def _kunneth(rng):
    out = []
    for n in (1, 2, 3):
        s = dg.DGObj(ca.sigma(n))
        _, rep = dg.derived_tensor(s, s)
        out.append((f"Kunneth exact for sigma_{n} (x) sigma_{n}", rep.ok))
        want = ca.validate(ca.direct_sum(ca.sigma(n, 1), ca.sigma(n, 0)))
        out.append((f"H(sigma_{n} (x)^L sigma_{n}) = Q<2> + Q<1>", rep.homology.equals(want)))
    return out


def _adams(rng):
    t = hc.maps_table(hc.S0(), hc.S0(), (-4, 4))
    g0, e0, tail0 = t.total().at(0)
    g1, e1, tail1 = t.total().at(1)
    return [
        ("[S0,S0]_0 = Q", (g0, e0, tail0) == (1, {}, 0)),
        ("[S0,S0]_1 = one Q at every n", (g1, e1, tail1) == (0, {}, 1)),
    ]


SUITES = {"cofibre": _cofibre, "duals": _duals, "kunneth": _kunneth, "adams": _adams}


def run(suite: str, rng: random.Random | None = None) -> list[tuple[str, bool]]:
    return SUITES[suite](rng or random.Random(0))
