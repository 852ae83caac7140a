"""Differential graded objects: homology, cones, quasi-isomorphisms, hom complexes
and the derived tensor product."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import category_a as ca
from . import linalg
from . import pid_modules as pm
from .category_a import TAIL, Component, EffObj, EffObjHat, GradedVS, Mor
from .errors import MalformedInput, NotInA
from .monoidal import tensor, tensor_mor, braiding
from .pid_modules import GMap, GMod


class DGObj:
    """An object with a square-zero self map of degree -1."""

    def __init__(self, carrier: EffObjHat, d: Mor | None = None, check: bool = True):
        self.carrier = carrier
        self.d = d if d is not None else Mor.zero(carrier, carrier, -1)
        if check:
            self.check()

    def check(self) -> None:
        if self.d.degree != -1 or self.d.src is not self.carrier and not self.d.src.equals(self.carrier):
            raise MalformedInput("differential must be a degree -1 self map")
        self.d.check()
        if not (self.d @ self.d).is_zero():
            raise MalformedInput("differential does not square to zero")

    @classmethod
    def formal(cls, x: EffObjHat) -> "DGObj":
        return cls(x)

    def shift(self, k: int = 1) -> "DGObj":
        """Σ^k with differential (-1)^k d."""
        c = self.carrier.shift(k)
        d = ca.reframe(self.d, c, c, -1)
        return DGObj(c, d.scale(-1) if k % 2 else d)

    def __repr__(self) -> str:
        return f"DGObj({ca.describe(self.carrier)})"


@dataclass
class DGMor:
    src: DGObj
    tgt: DGObj
    f: Mor

    def __post_init__(self):
        self.f.check()
        lhs = self.tgt.d @ self.f
        rhs = self.f @ self.src.d
        if not (lhs - (rhs.scale(-1) if self.f.degree % 2 else rhs)).is_zero():
            raise MalformedInput("not a chain map")

    @classmethod
    def identity(cls, x: DGObj) -> "DGMor":
        return cls(x, x, Mor.identity(x.carrier))


# --------------------------------------------------------------------------
# homology


def homology_data(x: DGObj) -> tuple[EffObj, Mor, Mor]:
    """H(x) with the cycle inclusion Z -> x and the projection Z -> H."""
    Z, incl = ca.kernel(x.d)
    dz = ca.factor_through(x.d, incl)
    try:
        H, proj = ca.cokernel(dz)
    except NotInA as exc:  # localization is exact, so this is a bug trap
        raise AssertionError(f"homology left A: {exc}") from exc
    return H, incl, proj


def homology(x: DGObj) -> EffObj:
    return homology_data(x)[0]


def induced_map(f: DGMor) -> Mor:
    """H(f): H(src) -> H(tgt)."""
    Hs, zs, ps = homology_data(f.src)
    Ht, zt, pt = homology_data(f.tgt)
    # lift generators of H(src) to cycles, push forward, factor through Z(tgt)
    fz = ca.factor_through(f.f @ zs, zt)
    g = pt @ fz
    sec = _section(ps)
    return g @ sec


def _section(p: Mor) -> Mor:
    """A (non-natural) right inverse of an epimorphism of degree 0."""
    src, tgt = p.src, p.tgt
    cols = []
    for col in range(len(tgt.vertex)):
        e = [Fraction(int(i == col)) for i in range(len(tgt.vertex))]
        sol = linalg.solve(p.phi, e, len(src.vertex))
        cols.append(sol)
    phi = linalg.transpose(cols, len(src.vertex)) if cols else linalg.zeros(len(src.vertex), 0)
    theta = {}
    for n in p.indices() + [TAIL]:
        th = p.at(n)
        m = linalg.zeros(len(th.src), len(th.tgt))
        for j, (dj, _) in enumerate(th.tgt.gens):
            unknowns = th.src.basis(dj)
            rows = th.tgt.basis(dj)
            sysm = [[th.mat[i][l] for l in unknowns] for i in rows]
            rhs = [Fraction(int(i == j)) for i in rows]
            sol = linalg.solve(sysm, rhs, len(unknowns))
            for l, v in zip(unknowns, sol or []):
                m[l][j] = v
        theta[n] = GMap(th.tgt, th.src, 0, m, check=False)
    tail = theta.pop(TAIL)
    return Mor(tgt, src, 0, phi, theta, tail, check=False)


# --------------------------------------------------------------------------
# cones


@dataclass
class Cone:
    obj: DGObj
    incl: Mor      # tgt -> cone
    proj: Mor      # cone -> Σ src


def suspend(x: DGObj, k: int = 1) -> DGObj:
    return x.shift(k)


def cone(f: DGMor) -> Cone:
    """ΣX ⊕ Y with d(x, y) = (-dx, f x + dy)."""
    if f.f.degree != 0:
        raise MalformedInput("cone expects a degree-0 chain map")
    sx = suspend(f.src)
    y = f.tgt
    fs = ca.reframe(f.f, sx.carrier, y.carrier, -1)
    d = ca.block_mor([sx.carrier, y.carrier], [sx.carrier, y.carrier],
                     {(0, 0): sx.d, (1, 0): fs, (1, 1): y.d}, degree=-1)
    obj = DGObj(d.src, ca.reframe(d, d.src, d.src, -1))
    _, inj, proj = ca.sum_injections([sx.carrier, y.carrier])
    inc = ca.reframe(inj[1], y.carrier, obj.carrier, 0)
    pr = ca.reframe(proj[0], obj.carrier, sx.carrier, 0)
    return Cone(obj, inc, pr)


def is_zero_in_window(x: EffObjHat, window) -> list[tuple[object, int]]:
    """Loci (component, degree) in the window where x is nonzero."""
    out = []
    for d in range(window[0], window[1] + 1):
        if x.vertex.dim(d):
            out.append(("vertex", d))
        for n in x.indices() + [TAIL]:
            if x.comp(n).module.dim(d):
                out.append((n, d))
    return out


@dataclass
class QuasiIsoVerdict:
    window: tuple[int, int]
    iso: bool
    degrees: dict[int, bool] = field(default_factory=dict)
    obstruction: tuple | None = None

    def __bool__(self) -> bool:
        return self.iso


def quasi_iso(f: DGMor, window=(-10, 10)) -> QuasiIsoVerdict:
    """H(f) is an isomorphism in the window iff the cone is acyclic in the window
    and one degree beyond (long exact sequence)."""
    H = homology(cone(f).obj)
    loci = is_zero_in_window(H, (window[0], window[1] + 1))
    bad = {d for _, d in loci}
    degs = {d: d not in bad and d + 1 not in bad for d in range(window[0], window[1] + 1)}
    obst = None
    if loci:
        c, d = loci[0]
        obst = (c, d)
    return QuasiIsoVerdict(tuple(window), all(degs.values()), degs, obst)


# --------------------------------------------------------------------------
# hom complexes


@dataclass
class HomComplex:
    window: tuple[int, int]
    chains: dict[int, int]
    differential: dict[int, linalg.Matrix]   # degree n -> matrix C_n -> C_{n-1}
    homology: dict[int, int]


def hom_complex(x: DGObj, y: DGObj, window=(-6, 6)) -> HomComplex:
    """Graded maps with D f = d_y f + (-1)^(n+1) f d_x."""
    lo, hi = window[0] - 1, window[1] + 1
    g = ca.hom_group(x.carrier, y.carrier, (lo, hi), with_basis=True)
    idx = sorted(set(x.carrier.exc) | set(y.carrier.exc))
    vec = {d: [b.vector(idx) for b in g.basis[d]] for d in range(lo, hi + 1)}
    D = {}
    for n in range(lo + 1, hi + 1):
        rows = len(vec[n - 1])
        tgt = linalg.transpose(vec[n - 1], len(vec[n - 1][0])) if rows else []
        cols = []
        for b in g.basis[n]:
            img = y.d @ b
            sec = b @ x.d
            img = img - sec if n % 2 == 0 else img + sec
            v = img.vector(idx)
            if rows:
                sol = linalg.solve(tgt, v, rows)
                if sol is None:
                    raise AssertionError("hom complex differential left the hom space")
            else:
                if any(v):
                    raise AssertionError("hom complex differential left the hom space")
                sol = []
            cols.append(sol)
        D[n] = linalg.transpose(cols, rows) if cols else linalg.zeros(rows, 0)
    H = {}
    for n in range(window[0], window[1] + 1):
        dim = len(vec[n])
        rk_out = linalg.rank(D[n]) if dim and D[n] and D[n][0] else 0
        rk_in = linalg.rank(D[n + 1]) if D.get(n + 1) and D[n + 1][0] else 0
        H[n] = dim - rk_out - rk_in
    return HomComplex(tuple(window), {n: len(vec[n]) for n in range(window[0], window[1] + 1)},
                      {n: D[n] for n in range(window[0], window[1] + 1)}, H)


def r_complex(x: DGObj, window=(-6, 6)) -> HomComplex:
    return hom_complex(DGObj(ca.unit()), x, window)


# --------------------------------------------------------------------------
# tensor and derived tensor


def tensor_dg(x: DGObj, y: DGObj) -> DGObj:
    """d(a ⊗ b) = da ⊗ b + (-1)^|a| a ⊗ db."""
    xy = tensor(x.carrier, y.carrier)
    d = tensor_mor(x.d, Mor.identity(y.carrier), xy, xy) + tensor_mor(Mor.identity(x.carrier), y.d, xy, xy)
    return DGObj(xy, d)


def braiding_dg(x: DGObj, y: DGObj) -> DGMor:
    b = braiding(x.carrier, y.carrier)
    return DGMor(tensor_dg(x, y), tensor_dg(y, x), b)


def flat_resolution(x: EffObj) -> DGObj:
    """A DG object with free components quasi-isomorphic to x.

    Each torsion summand Q[c]/c^k<a> at component n is replaced by
    Q[c]<a-2k+1> -> Q[c]<a> (multiplication by c^k), glued to a contractible
    vertex pair so that the structure map stays an isomorphism after
    inverting c.
    """
    x = ca.validate(x)
    pieces = []
    free_part = {}
    for n in x.indices() + [TAIL]:
        c = x.comp(n)
        free = c.free_columns()
        mod = GMod(tuple(c.module.gens[j] for j in free))
        beta = [[c.beta[u][j] for j in free] for u in range(len(x.vertex))]
        free_part[n] = Component.make(mod, beta, x.vertex)
        for a, k in c.module.torsion():
            pieces.append((n, a, k))
    base = EffObjHat(x.vertex, {n: v for n, v in free_part.items() if n != TAIL}, free_part[TAIL])
    parts = [DGObj(ca.validate(base))]
    for n, a, k in pieces:
        U = GradedVS((a - 2 * k, a - 2 * k + 1))
        gen = GMod.of([a, a - 2 * k + 1])
        other = GMod.of([a - 2 * k, a - 2 * k + 1])
        comp_n = Component.make(gen, [[Fraction(1), 0], [0, Fraction(1)]], U)
        tail = Component.make(other, linalg.identity(2), U)
        obj = ca.validate(EffObjHat(U, {n: comp_n}, tail))
        sq = [[Fraction(0), Fraction(1)], [Fraction(0), Fraction(0)]]
        dn = GMap(gen, gen, -1, sq, check=False)  # y -> c^k x
        dt = GMap(other, other, -1, sq, check=False)
        d = Mor(obj, obj, -1, sq, {n: dn}, dt)
        parts.append(DGObj(obj, d))
    out = parts[0]
    for p in parts[1:]:
        out = dg_sum(out, p)
    return out


def dg_sum(x: DGObj, y: DGObj) -> DGObj:
    s, inj, proj = ca.sum_injections([x.carrier, y.carrier])
    d = inj[0] @ x.d @ proj[0] + inj[1] @ y.d @ proj[1]
    s = ca.validate(s) if not isinstance(s, EffObj) else s
    return DGObj(s, ca.reframe(d, s, s, -1))


@dataclass
class KunnethReport:
    window: tuple[int, int]
    tensor_part: dict        # component -> H(x) ⊗ H(y) module
    tor_part: dict           # component -> Σ Tor(H x, H y)
    homology: EffObj
    exact: dict[int, bool]

    @property
    def ok(self) -> bool:
        return all(self.exact.values())


def derived_tensor(x: DGObj, y: DGObj, window=(-10, 10)) -> tuple[DGObj, KunnethReport]:
    """x ⊗^L y, using x ≃ H(x) and a free resolution of H(x)."""
    Hx = homology(x)
    Hy = homology(y)
    P = flat_resolution(Hx)
    L = tensor_dg(P, y)
    HL = homology(L)
    idx = sorted(set(Hx.exc) | set(Hy.exc) | set(HL.exc))
    tp, tr, ok = {}, {}, {}
    for n in idx + [TAIL]:
        a, b = Hx.comp(n).module, Hy.comp(n).module
        tp[n] = pm.comp_tensor(a, b)
        tr[n] = pm.comp_tor(a, b).shift(1)
    for d in range(window[0], window[1] + 1):
        good = True
        for n in idx + [TAIL]:
            if HL.comp(n).module.dim(d) != tp[n].dim(d) + tr[n].dim(d):
                good = False
        if HL.vertex.dim(d) != sum(Hx.vertex.dim(e) * Hy.vertex.dim(d - e)
                                   for e in set(Hx.vertex.degrees)):
            good = False
        ok[d] = good
    return L, KunnethReport(tuple(window), tp, tr, HL, ok)
