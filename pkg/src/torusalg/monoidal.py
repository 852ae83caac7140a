"""Tensor products, function objects, duals and the Ch(Q)-module structure."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from . import pid_modules as pm
from .category_a import (TAIL, CGVS, Component, EffObj, EffObjHat, GradedVS, Mor, hom_group,
                         lk, sphere, validate, unit)
from .pid_modules import GMap, GMod


def _sign(a: int, b: int) -> int:
    return -1 if (a % 2 and b % 2) else 1


def tensor_vs(U: GradedVS, V: GradedVS) -> tuple[GradedVS, dict[tuple[int, int], int]]:
    """U ⊗ V with basis sorted by degree; pos[(i, j)] is the index of u_i ⊗ v_j."""
    pairs = [(i, j) for i in range(len(U)) for j in range(len(V))]
    order = sorted(pairs, key=lambda p: U.degrees[p[0]] + V.degrees[p[1]])
    W = GradedVS(tuple(U.degrees[i] + V.degrees[j] for i, j in order))
    return W, {p: k for k, p in enumerate(order)}


def _kron_component(cx: Component, cy: Component, U: GradedVS, V: GradedVS,
                    W: GradedVS, pos) -> Component:
    mod = pm.tensor_module(cx.module, cy.module)
    ny = len(cy.module)
    beta = linalg.zeros(len(W), len(mod))
    for i in range(len(U)):
        for j in range(len(V)):
            r = pos[(i, j)]
            for a in range(len(cx.module)):
                x = cx.beta[i][a]
                if not x:
                    continue
                for b in range(ny):
                    if cy.beta[j][b]:
                        beta[r][a * ny + b] = x * cy.beta[j][b]
    return Component.make(mod, beta, W)


def tensor(x: EffObjHat, y: EffObjHat) -> EffObj:
    W, pos = tensor_vs(x.vertex, y.vertex)
    idx = sorted(set(x.exc) | set(y.exc))
    exc = {n: _kron_component(x.comp(n), y.comp(n), x.vertex, y.vertex, W, pos) for n in idx}
    tail = _kron_component(x.tail, y.tail, x.vertex, y.vertex, W, pos)
    return validate(EffObjHat(W, exc, tail))


def tensor_mor(f: Mor, g: Mor, src: EffObj | None = None, tgt: EffObj | None = None) -> Mor:
    """f ⊗ g with (f ⊗ g)(a ⊗ b) = (-1)^{|g||a|} f(a) ⊗ g(b)."""
    src = src or tensor(f.src, g.src)
    tgt = tgt or tensor(f.tgt, g.tgt)
    _, ps = tensor_vs(f.src.vertex, g.src.vertex)
    _, pt = tensor_vs(f.tgt.vertex, g.tgt.vertex)
    phi = linalg.zeros(len(tgt.vertex), len(src.vertex))
    for (i, j), c in ps.items():
        s = _sign(g.degree, f.src.vertex.degrees[i])
        for i2 in range(len(f.tgt.vertex)):
            a = f.phi[i2][i]
            if not a:
                continue
            for j2 in range(len(g.tgt.vertex)):
                b = g.phi[j2][j]
                if b:
                    phi[pt[(i2, j2)]][c] += s * a * b
    idx = sorted(set(src.exc) | set(tgt.exc))
    theta = {n: pm.tensor_maps(f.at(n), g.at(n)) for n in idx}
    return Mor(src, tgt, f.degree + g.degree, phi, theta, pm.tensor_maps(f.theta_tail, g.theta_tail), check=False)


def _perm_mor(src: EffObj, tgt: EffObj, vmap, cmap) -> Mor:
    """Degree-0 morphism sending basis vectors to signed basis vectors.

    vmap(k) -> (index, sign) on vertices; cmap(n, k) -> (index, sign) on generators.
    """
    phi = linalg.zeros(len(tgt.vertex), len(src.vertex))
    for k in range(len(src.vertex)):
        i, s = vmap(k)
        phi[i][k] = Fraction(s)
    theta = {}
    for n in sorted(set(src.exc) | set(tgt.exc)) + [TAIL]:
        ms, mt = src.comp(n).module, tgt.comp(n).module
        mat = linalg.zeros(len(mt), len(ms))
        for k in range(len(ms)):
            i, s = cmap(n, k)
            mat[i][k] = Fraction(s)
        theta[n] = GMap(ms, mt, 0, mat, check=False)
    tail = theta.pop(TAIL)
    return Mor(src, tgt, 0, phi, theta, tail, check=False)


def braiding(x: EffObj, y: EffObj) -> Mor:
    """x ⊗ y -> y ⊗ x with the Koszul sign."""
    xy, yx = tensor(x, y), tensor(y, x)
    _, pxy = tensor_vs(x.vertex, y.vertex)
    _, pyx = tensor_vs(y.vertex, x.vertex)
    inv = {k: p for p, k in pxy.items()}

    def vmap(k):
        i, j = inv[k]
        return pyx[(j, i)], _sign(x.vertex.degrees[i], y.vertex.degrees[j])

    def cmap(n, k):
        mx, my = x.comp(n).module, y.comp(n).module
        a, b = divmod(k, len(my))
        return b * len(mx) + a, _sign(mx.deg(a), my.deg(b))

    return _perm_mor(xy, yx, vmap, cmap)


def associator(x: EffObj, y: EffObj, z: EffObj) -> Mor:
    """(x ⊗ y) ⊗ z -> x ⊗ (y ⊗ z)."""
    xy = tensor(x, y)
    src, tgt = tensor(xy, z), tensor(x, tensor(y, z))
    _, p_xy = tensor_vs(x.vertex, y.vertex)
    _, p_l = tensor_vs(xy.vertex, z.vertex)
    _, p_yz = tensor_vs(y.vertex, z.vertex)
    yz_vertex = tensor_vs(y.vertex, z.vertex)[0]
    _, p_r = tensor_vs(x.vertex, yz_vertex)
    inv_xy = {k: p for p, k in p_xy.items()}
    inv_l = {k: p for p, k in p_l.items()}

    def vmap(k):
        a, c = inv_l[k]
        i, j = inv_xy[a]
        return p_r[(i, p_yz[(j, c)])], 1

    def cmap(n, k):
        nx, ny, nz = (len(o.comp(n).module) for o in (x, y, z))
        ab, c = divmod(k, nz)
        a, b = divmod(ab, ny)
        return a * ny * nz + b * nz + c, 1

    return _perm_mor(src, tgt, vmap, cmap)


def left_unitor(x: EffObj) -> Mor:
    """S⁰ ⊗ x -> x."""
    src = tensor(unit(), x)
    _, p = tensor_vs(unit().vertex, x.vertex)
    inv = {k: q[1] for q, k in p.items()}
    return _perm_mor(src, x, lambda k: (inv[k], 1), lambda n, k: (k, 1))


def right_unitor(x: EffObj) -> Mor:
    """x ⊗ S⁰ -> x."""
    src = tensor(x, unit())
    _, p = tensor_vs(x.vertex, unit().vertex)
    inv = {k: q[0] for q, k in p.items()}
    return _perm_mor(src, x, lambda k: (inv[k], 1), lambda n, k: (k, 1))


def invert(f: Mor) -> Mor:
    """Inverse of an isomorphism."""
    phi = linalg.inverse(f.phi) if f.phi else []
    theta = {}
    for n in f.indices() + [TAIL]:
        th = f.at(n)
        theta[n] = GMap(th.tgt, th.src, -th.degree, linalg.inverse(th.mat) if th.mat else [], check=False)
    tail = theta.pop(TAIL)
    return Mor(f.tgt, f.src, -f.degree, phi, theta, tail, check=False)


# --------------------------------------------------------------------------
# function objects


def hom_vs(U: GradedVS, V: GradedVS) -> tuple[GradedVS, dict[tuple[int, int], int]]:
    """Hom(U, V); pos[(i, j)] indexes the map u_j -> v_i."""
    pairs = [(i, j) for j in range(len(U)) for i in range(len(V))]
    order = sorted(pairs, key=lambda p: V.degrees[p[0]] - U.degrees[p[1]])
    W = GradedVS(tuple(V.degrees[i] - U.degrees[j] for i, j in order))
    return W, {p: k for k, p in enumerate(order)}


def _free_inverse(c: Component, nvertex: int) -> dict[int, list[Fraction]]:
    """Rows of beta^{-1} indexed by free generator: U -> free part of N."""
    free = c.free_columns()
    if not free:
        return {}
    inv = linalg.inverse([[c.beta[u][j] for j in free] for u in range(nvertex)])
    return {j: inv[a] for a, j in enumerate(free)}


def function_obj(x: EffObj, y: EffObj) -> EffObj:
    """Internal Hom F(x, y)."""
    x = validate(x)
    W, pos = hom_vs(x.vertex, y.vertex)

    def comp(n):
        cx, cy = x.comp(n), y.comp(n)
        hm = pm.hom_module(cx.module, cy.module)
        binv = _free_inverse(cx, len(x.vertex))
        beta = linalg.zeros(len(W), len(hm.module))
        for p, (j, i, _) in enumerate(hm.pairs):
            if hm.module.order(p) or j not in binv:
                continue
            for i2 in range(len(y.vertex)):
                b = cy.beta[i2][i]
                if not b:
                    continue
                for u, v in enumerate(binv[j]):
                    if v:
                        beta[pos[(i2, u)]][p] += b * v
        return Component.make(hm.module, beta, W)

    idx = sorted(set(x.exc) | set(y.exc))
    return validate(EffObjHat(W, {n: comp(n) for n in idx}, comp(TAIL)))


def evaluation(x: EffObj, y: EffObj) -> Mor:
    """F(x, y) ⊗ x -> y."""
    F = function_obj(x, y)
    src = tensor(F, x)
    _, pv = tensor_vs(F.vertex, x.vertex)
    _, ph = hom_vs(x.vertex, y.vertex)
    phi = linalg.zeros(len(y.vertex), len(src.vertex))
    for (i, j), k in ph.items():
        phi[i][pv[(k, j)]] = Fraction(1)
    theta = {}
    for n in sorted(set(src.exc) | set(y.exc)) + [TAIL]:
        mx, my = x.comp(n).module, y.comp(n).module
        hm = pm.hom_module(mx, my)
        ms = src.comp(n).module
        mat = linalg.zeros(len(my), len(ms))
        for p, (j, i, _) in enumerate(hm.pairs):
            mat[i][p * len(mx) + j] = Fraction(1)
        theta[n] = GMap(ms, my, 0, mat, check=False)
    tail = theta.pop(TAIL)
    return Mor(src, y, 0, phi, theta, tail, check=False)


def dual(x: EffObj) -> EffObj:
    return function_obj(x, unit())


def canonical_dual_map(x: EffObj, b: EffObj) -> Mor:
    """F(x, S⁰) ⊗ b -> F(x, b), adjoint to (ev ⊗ 1) after a braiding."""
    D = dual(x)
    src = tensor(D, b)
    tgt = function_obj(x, b)
    _, pv = tensor_vs(D.vertex, b.vertex)
    _, pd = hom_vs(x.vertex, unit().vertex)
    _, pt = hom_vs(x.vertex, b.vertex)
    phi = linalg.zeros(len(tgt.vertex), len(src.vertex))
    for (_, j), k in pd.items():
        for v in range(len(b.vertex)):
            phi[pt[(v, j)]][pv[(k, v)]] = Fraction(1)
    theta = {}
    for n in sorted(set(src.exc) | set(tgt.exc)) + [TAIL]:
        mx, mb = x.comp(n).module, b.comp(n).module
        hd = pm.hom_module(mx, unit().comp(n).module)
        ht = pm.hom_module(mx, mb)
        lookup = {(j, i): p for p, (j, i, _) in enumerate(ht.pairs)}
        ms, mt = src.comp(n).module, tgt.comp(n).module
        mat = linalg.zeros(len(mt), len(ms))
        for p, (j, _, e) in enumerate(hd.pairs):
            for v in range(len(mb)):
                q = lookup.get((j, v))
                if q is not None and ht.pairs[q][2] == 0 and e == 0:
                    mat[q][p * len(mb) + v] = Fraction(1)
        theta[n] = GMap(ms, mt, 0, mat, check=False)
    tail = theta.pop(TAIL)
    return Mor(src, tgt, 0, phi, theta, tail, check=False)


# --------------------------------------------------------------------------
# dualizability


@dataclass
class DualityWitness:
    dual: EffObj
    coevaluation: Mor
    evaluation: Mor
    residues: tuple[Mor, Mor]
    window: tuple[int, int]

    def exact(self) -> bool:
        return all(r.is_zero() for r in self.residues)


@dataclass
class Refusal:
    reason: str
    component: object = None
    degree: int | None = None
    probes: dict = field(default_factory=dict)


def _triangle_left(x: EffObj, D: EffObj, coev: Mor, ev: Mor) -> Mor:
    """x -> S⁰⊗x -> (x⊗D)⊗x -> x⊗(D⊗x) -> x⊗S⁰ -> x."""
    idx = Mor.identity(x)
    a = tensor_mor(coev, idx)
    b = associator(x, D, x)
    c = tensor_mor(idx, ev)
    return right_unitor(x) @ c @ b @ a @ invert(left_unitor(x))


def _triangle_right(x: EffObj, D: EffObj, coev: Mor, ev: Mor) -> Mor:
    """D -> D⊗S⁰ -> D⊗(x⊗D) -> (D⊗x)⊗D -> S⁰⊗D -> D."""
    idd = Mor.identity(D)
    a = tensor_mor(idd, coev)
    b = invert(associator(D, x, D))
    c = tensor_mor(ev, idd)
    return left_unitor(D) @ c @ b @ a @ invert(right_unitor(D))


def probe_family(x: EffObj) -> dict[str, EffObj]:
    from .category_a import sigma
    return {"S0": unit(), "S^nu1": sphere({1: 1}), "sigma1": sigma(1), "sigma2": sigma(2), "x": x}


def canonical_map_probes(x: EffObj) -> dict[str, bool]:
    return {k: canonical_dual_map(x, b).is_iso() for k, b in probe_family(x).items()}


def is_dualizable(x: EffObj) -> DualityWitness | Refusal:
    x = validate(x)
    D = dual(x)
    ev = evaluation(x, unit())
    degs = list(x.vertex.degrees) + [d for c in [x.tail, *x.exc.values()] for d, _ in c.module.gens]
    window = (min(degs, default=0), max(degs, default=0))
    xD = tensor(x, D)
    basis = hom_group(unit(), xD, (0, 0), with_basis=True).basis[0]
    ident = Mor.identity(x)
    idx = ident.indices()
    target = ident.vector(idx)
    cols = [_triangle_left(x, D, b, ev).vector(idx) for b in basis]
    sol = linalg.solve(linalg.transpose(cols, len(target)) if cols else [[] for _ in target],
                       target, len(cols)) if target else []
    if sol is None or (not cols and any(target)):
        probes = canonical_map_probes(x)
        bad = next((n for n in x.indices() + [TAIL] if x.comp(n).module.torsion()), None)
        deg = None
        if bad is not None:
            deg = x.comp(bad).module.torsion()[0][0]
        return Refusal("no coevaluation satisfies the triangle identity; "
                       + ("torsion has no dual: F(x, S0) is zero there but F(x, x) is not"
                          if bad is not None else "canonical map is not an isomorphism"),
                       component=bad, degree=deg, probes=probes)
    coev = Mor.zero(unit(), xD, 0)
    for a, b in zip(sol, basis):
        if a:
            coev = coev + b.scale(a)
    r1 = _triangle_left(x, D, coev, ev) - ident
    r2 = _triangle_right(x, D, coev, ev) - Mor.identity(D)
    return DualityWitness(D, coev, ev, (r1, r2), window)


# --------------------------------------------------------------------------
# tensor-hom adjunction


@dataclass
class AdjunctionReport:
    window: tuple[int, int]
    left: CGVS      # Hom(x ⊗ y, z)
    right: CGVS     # Hom(x, F(y, z))
    bijective: dict[int, bool]

    @property
    def ok(self) -> bool:
        return self.left == self.right and all(self.bijective.values())


def uncurry(f: Mor, y: EffObj, z: EffObj) -> Mor:
    """x -> F(y, z) to x ⊗ y -> z."""
    ev = evaluation(y, z)
    return ev @ tensor_mor(f, Mor.identity(y), tgt=ev.src)


def check_tensor_hom(x: EffObj, y: EffObj, z: EffObj, window=(-6, 6)) -> AdjunctionReport:
    xy = tensor(x, y)
    F = function_obj(y, z)
    left = hom_group(xy, z, window, with_basis=True)
    right = hom_group(x, F, window, with_basis=True)
    bij = {}
    for d in range(window[0], window[1] + 1):
        imgs = [uncurry(f, y, z) for f in right.basis[d]]
        idx = sorted(set(xy.exc) | set(z.exc))
        vecs = [g.vector(idx) for g in imgs]
        lvecs = [g.vector(idx) for g in left.basis[d]]
        r = linalg.rank(vecs) if vecs else 0
        bij[d] = (r == len(imgs) == len(lvecs)
                  and (not lvecs or linalg.rank(lvecs + vecs) == len(lvecs)))
    left.basis = right.basis = None
    return AdjunctionReport(tuple(window), left, right, bij)


# --------------------------------------------------------------------------
# Ch(Q)-module structure


def r_functor(x: EffObj, window=(-10, 10)) -> CGVS:
    """R x = Hom(S⁰, x) degreewise."""
    return hom_group(unit(), x, window)


def l_functor(K: GradedVS) -> EffObj:
    return lk(K)


def graded_hom_dim(K: GradedVS, dims: dict[int, int], d: int) -> int:
    """dim of degree-d linear maps K -> V where dim V_e = dims[e]."""
    return sum(n * dims.get(e + d, 0) for e, n in K.items())


def tensor_vector_space(x: EffObj, K: GradedVS) -> EffObj:
    """x ⊗ K, the Ch(Q)-tensoring."""
    return tensor(x, lk(K))


def cotensor(x: EffObj, K: GradedVS) -> EffObj:
    """F(lk K, x), the Ch(Q)-cotensoring."""
    return function_obj(lk(K), x)
