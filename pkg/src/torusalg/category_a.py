"""Effective objects and morphisms of the abelian model and of its hat-extension.

An object is a vertex U (finite graded vector space), finitely many
exceptional components n -> (N_n, beta_n) and one tail component used at every
other index. beta_n is stored in Laurent coordinates: entry (u, j) is the
coefficient of c^m u in beta(g_j), with m = (deg u - deg g_j) / 2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg
from . import pid_modules as pm
from .errors import MalformedInput, NotEffective, NotInA
from .pid_modules import GMap, GMod, Matrix, forced_exponent

TAIL = "tail"


# --------------------------------------------------------------------------
# graded vector spaces


@dataclass(frozen=True)
class GradedVS:
    """Finite graded Q-vector space; one degree per basis vector, sorted."""

    degrees: tuple[int, ...] = ()

    @classmethod
    def of(cls, spec: Mapping[int, int] | Iterable[tuple[int, int]] = ()) -> "GradedVS":
        items = spec.items() if isinstance(spec, Mapping) else spec
        degs = []
        for d, n in items:
            if n < 0:
                raise MalformedInput(f"negative dimension {n} in degree {d}")
            degs.extend([int(d)] * int(n))
        return cls(tuple(sorted(degs)))

    @classmethod
    def basis(cls, degrees: Iterable[int]) -> "GradedVS":
        return cls(tuple(sorted(degrees)))

    def __len__(self) -> int:
        return len(self.degrees)

    def dim(self, d: int) -> int:
        return self.degrees.count(d)

    def indices(self, d: int) -> list[int]:
        return [i for i, e in enumerate(self.degrees) if e == d]

    def shift(self, k: int) -> "GradedVS":
        return GradedVS(tuple(d + k for d in self.degrees))

    def items(self) -> list[tuple[int, int]]:
        out: dict[int, int] = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return sorted(out.items())

    def to_json(self) -> list:
        return [[d, n] for d, n in self.items()]

    def __str__(self) -> str:
        return " + ".join(f"Q<{d}>" if n == 1 else f"Q^{n}<{d}>" for d, n in self.items()) or "0"


def vs_hom_variables(u: GradedVS, v: GradedVS, d: int) -> list[tuple[int, int]]:
    """Positions (i, j) of a degree-d linear map u -> v (rows index v)."""
    return [(i, j) for j, a in enumerate(u.degrees) for i, b in enumerate(v.degrees) if b == a + d]


def laurent_ok(u_deg: int, g_deg: int) -> bool:
    return (u_deg - g_deg) % 2 == 0


# --------------------------------------------------------------------------
# components and objects


@dataclass(frozen=True)
class Component:
    module: GMod
    beta: tuple[tuple[Fraction, ...], ...]   # rows = vertex basis, columns = module generators

    @classmethod
    def make(cls, module: GMod, beta: Sequence[Sequence], vertex: GradedVS) -> "Component":
        rows = len(vertex)
        if len(beta) != rows or any(len(r) != len(module) for r in beta):
            raise MalformedInput(f"beta has shape {len(beta)}x{len(beta[0]) if beta else 0}, "
                                 f"expected {rows}x{len(module)}")
        b = []
        for i, r in enumerate(beta):
            row = []
            for j, x in enumerate(r):
                x = Fraction(x)
                if x and not laurent_ok(vertex.degrees[i], module.deg(j)):
                    raise MalformedInput(f"beta[{i}][{j}] joins degrees of different parity")
                if x and module.order(j):
                    raise MalformedInput(f"beta[{i}][{j}] is nonzero on a torsion generator")
                row.append(x)
            b.append(tuple(row))
        return cls(module, tuple(b))

    def beta_matrix(self) -> Matrix:
        return [list(r) for r in self.beta]

    def free_columns(self) -> list[int]:
        return self.module.free_indices()

    def key(self, vertex: GradedVS) -> tuple:
        """Isomorphism invariant over the identity of the vertex."""
        free = self.free_columns()
        cols = [[self.beta[u][j] for u in range(len(vertex))] for j in free]
        degs = [self.module.deg(j) for j in free]
        flags = []
        kernel_incr = []
        prev_null = {0: 0, 1: 0}
        for e in sorted(set(degs), reverse=True):
            p = e % 2
            sel = [c for c, d in zip(cols, degs) if d >= e and d % 2 == p]
            span = linalg.row_space(sel, len(vertex))
            flags.append((e, tuple(tuple(r) for r in span)))
            null = len(sel) - len(span)
            if null > prev_null[p]:
                kernel_incr.extend([e] * (null - prev_null[p]))
                prev_null[p] = null
        return (tuple(self.module.torsion()), tuple(sorted(kernel_incr)), tuple(flags))


def _check_tail(tail: Component, vertex: GradedVS) -> None:
    for u, row in enumerate(tail.beta):
        for j, x in enumerate(row):
            if x and forced_exponent(vertex.degrees[u], tail.module.deg(j)) < 0:
                raise MalformedInput("tail beta must have non-negative c-powers "
                                     "(E^{-1}O_F has no poles at all but finitely many n)", "tail.beta")


class EffObjHat:
    """Effective object of the hat category (no isomorphism condition)."""

    def __init__(self, vertex: GradedVS, exc: Mapping[int, Component], tail: Component):
        for n in exc:
            if int(n) < 1:
                raise MalformedInput(f"component index must be >= 1, got {n}")
        _check_tail(tail, vertex)
        self.vertex = vertex
        self.tail = tail
        self.exc = {int(n): c for n, c in sorted(exc.items())}

    def comp(self, n) -> Component:
        if n == TAIL:
            return self.tail
        return self.exc.get(n, self.tail)

    def indices(self) -> list[int]:
        return sorted(self.exc)

    def pruned(self):
        tk = self.tail.key(self.vertex)
        exc = {n: c for n, c in self.exc.items() if c.key(self.vertex) != tk}
        return type(self)(self.vertex, exc, self.tail)

    def key(self) -> tuple:
        tk = self.tail.key(self.vertex)
        exc = tuple((n, k) for n, c in self.exc.items() if (k := c.key(self.vertex)) != tk)
        return (self.vertex.degrees, exc, tk)

    def equals(self, other: "EffObjHat") -> bool:
        return self.key() == other.key()

    def shift(self, k: int):
        v = self.vertex.shift(k)
        return type(self)(v, {n: Component(c.module.shift(k), c.beta) for n, c in self.exc.items()},
                          Component(self.tail.module.shift(k), self.tail.beta))

    def is_zero(self) -> bool:
        return (not len(self.vertex) and self.tail.module.is_zero()
                and all(c.module.is_zero() for c in self.exc.values()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({describe(self)})"


class EffObj(EffObjHat):
    """Effective object certified to lie in A."""


def describe(x: EffObjHat) -> str:
    parts = [f"U={x.vertex}"]
    for n, c in x.exc.items():
        parts.append(f"n={n}: {c.module}")
    parts.append(f"tail: {x.tail.module}")
    return "; ".join(parts)


def make_obj(vertex: GradedVS, exc: Mapping[int, tuple[GMod, Sequence]], tail: tuple[GMod, Sequence]) -> EffObjHat:
    return EffObjHat(vertex, {n: Component.make(m, b, vertex) for n, (m, b) in exc.items()},
                     Component.make(tail[0], tail[1], vertex))


def validate(x: EffObjHat) -> EffObj:
    """Certify that inverting Euler classes makes beta an isomorphism."""
    U = x.vertex
    for n, c in list(x.exc.items()) + [(TAIL, x.tail)]:
        free = c.free_columns()
        for p in (0, 1):
            cols = [j for j in free if c.module.deg(j) % 2 == p]
            rows = [u for u, d in enumerate(U.degrees) if d % 2 == p]
            sub = [[c.beta[u][j] for j in cols] for u in rows]
            r = linalg.rank(sub) if rows and cols else 0
            if r != len(rows) or r != len(cols):
                locus = (U.degrees[rows[0]] if rows else c.module.deg(cols[0]))
                raise NotInA(f"component {n}: localized beta has rank {r} in parity {p} "
                             f"but source rank {len(cols)} and target rank {len(rows)}",
                             component=n, degree=locus)
        if n == TAIL:
            if c.module.torsion():
                raise NotInA("tail component has torsion (a product of torsion modules is not "
                             "Euler-torsion)", component=TAIL)
            inv = linalg.inverse([[c.beta[u][j] for j in free] for u in range(len(U))]) if free else []
            for a, j in enumerate(free):
                for u in range(len(U)):
                    if inv[a][u] and forced_exponent(c.module.deg(j), U.degrees[u]) < 0:
                        raise NotInA("tail beta is not invertible over Q[c]; the object would have "
                                     "infinitely many poles", component=TAIL, degree=U.degrees[u])
    return EffObj(x.vertex, x.exc, x.tail)


def in_A(x: EffObjHat) -> bool:
    try:
        validate(x)
        return True
    except NotInA:
        return False


# --------------------------------------------------------------------------
# standard objects


def sphere(nu: Mapping[int, int] | None = None, k: int = 0) -> EffObj:
    """Algebraic sphere S^nu shifted by k."""
    nu = {int(n): int(v) for n, v in (nu or {}).items() if v}
    U = GradedVS((k,))
    exc = {n: (GMod.of([2 * v + k]), [[1]]) for n, v in nu.items()}
    return validate(make_obj(U, exc, (GMod.of([k]), [[1]])))


def unit() -> EffObj:
    return sphere()


def sigma(n: int, k: int = 0) -> EffObj:
    """The cell with a single Q in factor n, degree 1 + k."""
    if n < 1:
        raise MalformedInput("sigma needs n >= 1")
    return validate(make_obj(GradedVS(), {n: (GMod.of(torsion=[(1 + k, 1)]), [])}, (GMod(), [])))


def lk(K: GradedVS) -> EffObj:
    """O_F ⊗ K -> E^{-1}O_F ⊗ K."""
    mod = GMod.of(K.degrees)
    return validate(make_obj(K, {}, (mod, linalg.identity(len(K)))))


def zero_object() -> EffObj:
    return validate(make_obj(GradedVS(), {}, (GMod(), [])))


# --------------------------------------------------------------------------
# morphisms


class Mor:
    """A morphism (theta, phi) of some degree between effective objects."""

    def __init__(self, src: EffObjHat, tgt: EffObjHat, degree: int, phi: Matrix,
                 theta: Mapping, theta_tail: GMap, check: bool = True):
        self.src = src
        self.tgt = tgt
        self.degree = degree
        self.phi = [list(r) for r in phi]
        if len(self.phi) != len(tgt.vertex) or any(len(r) != len(src.vertex) for r in self.phi):
            if any(any(r) for r in self.phi):
                raise MalformedInput("vertex matrix has the wrong shape")
            self.phi = linalg.zeros(len(tgt.vertex), len(src.vertex))
        self.theta = dict(theta)
        self.theta_tail = theta_tail
        for n in self.indices():
            self.theta.setdefault(n, theta_tail)
        if check:
            self.check()

    def indices(self) -> list[int]:
        return sorted(set(self.src.exc) | set(self.tgt.exc))

    def at(self, n) -> GMap:
        if n == TAIL:
            return self.theta_tail
        return self.theta.get(n, self.theta_tail)

    def components(self) -> list:
        return self.indices() + [TAIL]

    def residue(self, n) -> Matrix:
        """beta' theta - (1 ⊗ phi) beta on component n (Laurent coordinates)."""
        cs, ct = self.src.comp(n), self.tgt.comp(n)
        th = self.at(n)
        left = linalg.matmul(ct.beta_matrix(), th.mat, inner=len(ct.module), cols=len(cs.module))
        right = linalg.matmul(self.phi, cs.beta_matrix(), inner=len(self.src.vertex), cols=len(cs.module))
        return [[a - b for a, b in zip(r, s)] for r, s in zip(left, right)]

    def check(self) -> None:
        for d, row in zip(self.tgt.vertex.degrees, self.phi):
            for d0, x in zip(self.src.vertex.degrees, row):
                if x and d != d0 + self.degree:
                    raise MalformedInput("vertex map is not homogeneous of the stated degree")
        for n in self.components():
            th = self.at(n)
            if th.src != self.src.comp(n).module or th.tgt != self.tgt.comp(n).module:
                raise MalformedInput(f"theta at {n} has the wrong source or target")
            if th.degree != self.degree:
                raise MalformedInput(f"theta at {n} has degree {th.degree}, expected {self.degree}")
            th.check()
            if any(any(r) for r in self.residue(n)):
                raise MalformedInput(f"compatibility square fails at component {n}")

    @classmethod
    def zero(cls, x: EffObjHat, y: EffObjHat, degree: int = 0) -> "Mor":
        idx = set(x.exc) | set(y.exc)
        return cls(x, y, degree, linalg.zeros(len(y.vertex), len(x.vertex)),
                   {n: GMap.zero(x.comp(n).module, y.comp(n).module, degree) for n in idx},
                   GMap.zero(x.tail.module, y.tail.module, degree), check=False)

    @classmethod
    def identity(cls, x: EffObjHat) -> "Mor":
        return cls(x, x, 0, linalg.identity(len(x.vertex)),
                   {n: GMap.identity(c.module) for n, c in x.exc.items()},
                   GMap.identity(x.tail.module), check=False)

    def __matmul__(self, other: "Mor") -> "Mor":
        """self ∘ other"""
        idx = set(other.indices()) | set(self.indices())
        phi = linalg.matmul(self.phi, other.phi, inner=len(self.src.vertex), cols=len(other.src.vertex))
        return Mor(other.src, self.tgt, self.degree + other.degree, phi,
                   {n: self.at(n) @ other.at(n) for n in idx}, self.theta_tail @ other.theta_tail,
                   check=False)

    def _combine(self, other: "Mor", a, b) -> "Mor":
        idx = set(self.indices()) | set(other.indices())
        phi = [[a * x + b * y for x, y in zip(r, s)] for r, s in zip(self.phi, other.phi)]
        return Mor(self.src, self.tgt, self.degree, phi,
                   {n: self.at(n).scale(a) + other.at(n).scale(b) for n in idx},
                   self.theta_tail.scale(a) + other.theta_tail.scale(b), check=False)

    def __add__(self, other: "Mor") -> "Mor":
        return self._combine(other, 1, 1)

    def __sub__(self, other: "Mor") -> "Mor":
        return self._combine(other, 1, -1)

    def scale(self, q) -> "Mor":
        return self._combine(self, Fraction(q), 0)

    def is_zero(self) -> bool:
        return (not any(any(r) for r in self.phi)
                and all(self.at(n).is_zero() for n in self.components()))

    def equals(self, other: "Mor") -> bool:
        return (self - other).is_zero()

    def is_iso(self) -> bool:
        if len(self.src.vertex) != len(self.tgt.vertex):
            return False
        if self.phi and linalg.rank(self.phi) != len(self.phi):
            return False
        return all(pm.is_iso(self.at(n)) for n in self.components())

    def vector(self, indices: Sequence) -> list[Fraction]:
        """Flattened coordinates, for linear algebra over families of morphisms."""
        out = [x for r in self.phi for x in r]
        for n in list(indices) + [TAIL]:
            out.extend(x for r in self.at(n).mat for x in r)
        return out

    def __repr__(self) -> str:
        return f"Mor(deg {self.degree}, phi={self.phi})"


# --------------------------------------------------------------------------
# component-graded report


@dataclass
class CGVS:
    """Graded vector space spread over components.

    In each degree the space is global ⊕ (⊕ over listed n of exceptional[n])
    ⊕ (one copy of tail for every other component). `global_` may be
    negative when it records a finite codimension correction (Ext reports).
    """

    window: tuple[int, int]
    global_: dict[int, int] = field(default_factory=dict)
    exceptional: dict[int, dict[int, int]] = field(default_factory=dict)
    tail: dict[int, int] = field(default_factory=dict)
    basis: dict[int, list] | None = None

    def normalize(self) -> "CGVS":
        self.global_ = {d: v for d, v in self.global_.items() if v}
        self.tail = {d: v for d, v in self.tail.items() if v}
        exc = {}
        for n, dims in self.exceptional.items():
            dims = {d: v for d, v in dims.items() if v}
            if dims != self.tail:
                exc[n] = dims
        self.exceptional = dict(sorted(exc.items()))
        return self

    def degrees(self) -> range:
        return range(self.window[0], self.window[1] + 1)

    def at(self, d: int) -> tuple[int, dict[int, int], int]:
        return (self.global_.get(d, 0),
                {n: dims.get(d, 0) for n, dims in self.exceptional.items() if dims.get(d, 0) != self.tail.get(d, 0)},
                self.tail.get(d, 0))

    def component_dim(self, n, d: int) -> int:
        if n == TAIL:
            return self.tail.get(d, 0)
        return self.exceptional.get(n, self.tail).get(d, 0)

    def finite_dim(self, d: int) -> int:
        """Dimension in degree d when the tail vanishes there."""
        g, exc, t = self.at(d)
        if t:
            raise ValueError(f"degree {d} is infinite dimensional (tail pattern {t})")
        return g + sum(exc.values())

    def signature(self) -> tuple:
        return (self.window, tuple(sorted(self.global_.items())),
                tuple((n, tuple(sorted(v.items()))) for n, v in sorted(self.exceptional.items())),
                tuple(sorted(self.tail.items())))

    def __eq__(self, other) -> bool:
        return isinstance(other, CGVS) and self.signature() == other.signature()

    def __add__(self, other: "CGVS") -> "CGVS":
        w = (min(self.window[0], other.window[0]), max(self.window[1], other.window[1]))
        g = {d: self.global_.get(d, 0) + other.global_.get(d, 0) for d in range(w[0], w[1] + 1)}
        t = {d: self.tail.get(d, 0) + other.tail.get(d, 0) for d in range(w[0], w[1] + 1)}
        exc = {}
        for n in set(self.exceptional) | set(other.exceptional):
            exc[n] = {d: self.component_dim(n, d) + other.component_dim(n, d) for d in range(w[0], w[1] + 1)}
        return CGVS(w, g, exc, t).normalize()

    def shift(self, k: int) -> "CGVS":
        return CGVS((self.window[0] + k, self.window[1] + k),
                    {d + k: v for d, v in self.global_.items()},
                    {n: {d + k: v for d, v in dims.items()} for n, dims in self.exceptional.items()},
                    {d + k: v for d, v in self.tail.items()}).normalize()

    def render_degree(self, d: int) -> str:
        g, exc, t = self.at(d)
        parts = []
        if g:
            parts.append(f"Q^{g}" if g > 0 else f"-Q^{-g}")
        for n, v in exc.items():
            if v:
                parts.append(f"Q^{v}<n={n}>")
        if t:
            parts.append(f"Q^{t} <all n>" if not exc else f"Q^{t} <all other n>")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"window": list(self.window),
                "global": {str(d): v for d, v in sorted(self.global_.items())},
                "exceptional": {str(n): {str(d): v for d, v in sorted(dims.items())}
                                for n, dims in self.exceptional.items()},
                "tail": {str(d): v for d, v in sorted(self.tail.items())}}


# --------------------------------------------------------------------------
# fibered linear systems: one set of global unknowns shared by all components


@dataclass
class FiberedSolution:
    nglobal: int
    global_basis: Matrix
    local_kernels: dict                  # component -> basis of local solutions with zero globals
    systems: dict                        # component -> (A_global, A_local)

    def lift(self, comp, g: Sequence[Fraction]) -> list[Fraction]:
        ag, al = self.systems[comp]
        nloc = len(al[0]) if al else 0
        rhs = [-sum((a * x for a, x in zip(row, g)), Fraction(0)) for row in ag]
        sol = linalg.solve(al, rhs, nloc)
        if sol is None:
            raise AssertionError("global solution does not lift")
        return sol


def fibered_solve(nglobal: int, systems: Mapping) -> FiberedSolution:
    """Solve A_g x + A_n y_n = 0 for all components n simultaneously.

    systems[n] = (A_g, A_n, n_local). Returns the global solution space (the
    intersection of per-component projections) and the per-component kernels.
    """
    gspan = linalg.identity(nglobal)
    kernels = {}
    stored = {}
    for comp, (ag, al, nloc) in systems.items():
        rows = [list(a) + list(b) for a, b in zip(ag, al)]
        null = linalg.nullspace(rows, nglobal + nloc)
        proj = linalg.row_space([v[:nglobal] for v in null], nglobal)
        gspan = linalg.intersect(gspan, proj, nglobal) if gspan else []
        lrows = [list(b) for b in al]
        kernels[comp] = linalg.nullspace(lrows, nloc) if lrows else linalg.identity(nloc)
        stored[comp] = ([list(a) for a in ag], lrows if lrows else [])
    return FiberedSolution(nglobal, gspan, kernels, stored)


# --------------------------------------------------------------------------
# Hom groups


def _hom_system(x: EffObjHat, y: EffObjHat, d: int, n, phi_vars):
    cs, ct = x.comp(n), y.comp(n)
    tvars = pm.hom_variables(cs.module, ct.module, d)
    U, V = x.vertex, y.vertex
    ag, al = [], []
    for up in range(len(V)):
        for j in range(len(cs.module)):
            if not laurent_ok(V.degrees[up], cs.module.deg(j) + d):
                continue
            rowg = [Fraction(0)] * len(phi_vars)
            for a, (i, u) in enumerate(phi_vars):
                if i == up:
                    rowg[a] = -cs.beta[u][j]
            rowl = [Fraction(0)] * len(tvars)
            for b, (i, jj) in enumerate(tvars):
                if jj == j:
                    rowl[b] = ct.beta[up][i]
            if any(rowg) or any(rowl):
                ag.append(rowg)
                al.append(rowl)
    return ag, al, tvars


def hom_degree(x: EffObjHat, y: EffObjHat, d: int, with_basis: bool = True):
    """Degree-d maps x -> y: (global dim, {n: local dim}, tail local dim, basis)."""
    phi_vars = vs_hom_variables(x.vertex, y.vertex, d)
    comps = sorted(set(x.exc) | set(y.exc)) + [TAIL]
    systems, tvars = {}, {}
    for n in comps:
        ag, al, tv = _hom_system(x, y, d, n, phi_vars)
        systems[n] = (ag, al, len(tv))
        tvars[n] = tv
    sol = fibered_solve(len(phi_vars), systems)
    basis = None
    if with_basis:
        basis = []

        def build(gvec, locals_):
            phi = linalg.zeros(len(y.vertex), len(x.vertex))
            for a, (i, u) in enumerate(phi_vars):
                phi[i][u] = gvec[a]
            th = {}
            for n in comps:
                cs, ct = x.comp(n), y.comp(n)
                mat = linalg.zeros(len(ct.module), len(cs.module))
                for b, (i, j) in enumerate(tvars[n]):
                    mat[i][j] = locals_[n][b]
                th[n] = GMap(cs.module, ct.module, d, mat, check=False)
            tail = th.pop(TAIL)
            return Mor(x, y, d, phi, th, tail, check=False)

        for g in sol.global_basis:
            basis.append(build(g, {n: sol.lift(n, g) for n in comps}))
        for n in comps[:-1]:
            for v in sol.local_kernels[n]:
                locs = {m: [Fraction(0)] * len(tvars[m]) for m in comps}
                locs[n] = v
                basis.append(build([Fraction(0)] * len(phi_vars), locs))
    exc = {n: len(sol.local_kernels[n]) for n in comps[:-1]}
    return len(sol.global_basis), exc, len(sol.local_kernels[TAIL]), basis


def hom_group(x: EffObjHat, y: EffObjHat, window: tuple[int, int] = (-10, 10),
              with_basis: bool = False) -> CGVS:
    out = CGVS(tuple(window), basis={} if with_basis else None)
    for d in range(window[0], window[1] + 1):
        g, exc, t, basis = hom_degree(x, y, d, with_basis)
        out.global_[d] = g
        for n, v in exc.items():
            out.exceptional.setdefault(n, {})[d] = v
        out.tail[d] = t
        if with_basis:
            out.basis[d] = basis
    for n in list(out.exceptional):
        out.exceptional[n] = {d: v for d, v in out.exceptional[n].items()}
    return out.normalize()


# --------------------------------------------------------------------------
# sums, kernels, cokernels, (co)limits


def _block_diag(mats: Sequence[Matrix], shapes: Sequence[tuple[int, int]]) -> Matrix:
    rows = sum(r for r, _ in shapes)
    cols = sum(c for _, c in shapes)
    out = linalg.zeros(rows, cols)
    ro = co = 0
    for m, (r, c) in zip(mats, shapes):
        for i in range(r):
            for j in range(c):
                out[ro + i][co + j] = m[i][j]
        ro += r
        co += c
    return out


def direct_sum(*objs: EffObjHat) -> EffObjHat:
    order = _vertex_order(objs)
    degs = [d for o in objs for d in o.vertex.degrees]
    U = GradedVS(tuple(degs[i] for i in order))
    idx = sorted(set().union(*[set(o.exc) for o in objs])) if objs else []

    def comp(n):
        cs = [o.comp(n) for o in objs]
        mod = GMod(tuple(g for c in cs for g in c.module.gens))
        beta = _block_diag([c.beta_matrix() for c in cs], [(len(o.vertex), len(c.module)) for o, c in zip(objs, cs)])
        beta = [beta[i] for i in order]
        return Component.make(mod, beta, U)

    cls = EffObj if all(isinstance(o, EffObj) for o in objs) else EffObjHat
    return cls(U, {n: comp(n) for n in idx}, comp(TAIL))


def _vertex_order(objs: Sequence[EffObjHat]) -> list[int]:
    """Permutation sorting the concatenated vertex bases by degree (stable)."""
    degs = [d for o in objs for d in o.vertex.degrees]
    return sorted(range(len(degs)), key=lambda i: degs[i])


def sum_injections(objs: Sequence[EffObjHat]) -> tuple[EffObjHat, list[Mor], list[Mor]]:
    s = direct_sum(*objs)
    order = _vertex_order(objs)
    pos = {old: new for new, old in enumerate(order)}
    inj, proj = [], []
    voff = 0
    for k, o in enumerate(objs):
        phi_i = linalg.zeros(len(s.vertex), len(o.vertex))
        for a in range(len(o.vertex)):
            phi_i[pos[voff + a]][a] = Fraction(1)
        th_i, th_p = {}, {}
        for n in sorted(set(s.exc)) + [TAIL]:
            goff = sum(len(objs[m].comp(n).module) for m in range(k))
            mod = o.comp(n).module
            smod = s.comp(n).module
            mi = linalg.zeros(len(smod), len(mod))
            for a in range(len(mod)):
                mi[goff + a][a] = Fraction(1)
            th_i[n] = GMap(mod, smod, 0, mi, check=False)
            th_p[n] = GMap(smod, mod, 0, linalg.transpose(mi, len(mod)) if mi else linalg.zeros(len(mod), len(smod)), check=False)
        ti, tp = th_i.pop(TAIL), th_p.pop(TAIL)
        inj.append(Mor(o, s, 0, phi_i, th_i, ti, check=False))
        proj.append(Mor(s, o, 0, linalg.transpose(phi_i, len(o.vertex)) if phi_i else linalg.zeros(len(o.vertex), 0), th_p, tp, check=False))
        voff += len(o.vertex)
    return s, inj, proj


def _vs_kernel(phi: Matrix, U: GradedVS, V: GradedVS, d: int) -> tuple[GradedVS, Matrix]:
    """Kernel of a degree-d linear map U -> V: (space, inclusion matrix U x k)."""
    cols, degs = [], []
    for e, _ in U.items():
        src = U.indices(e)
        tgt = V.indices(e + d)
        sub = [[phi[i][j] for j in src] for i in tgt]
        for v in (linalg.nullspace(sub, len(src)) if tgt else linalg.identity(len(src))):
            full = [Fraction(0)] * len(U)
            for j, x in zip(src, v):
                full[j] = x
            cols.append(full)
            degs.append(e)
    return GradedVS(tuple(degs)), (linalg.transpose(cols, len(U)) if cols else [[] for _ in range(len(U))])


def _vs_cokernel(phi: Matrix, U: GradedVS, V: GradedVS, d: int) -> tuple[GradedVS, Matrix]:
    """Cokernel of U -> V: (quotient space, projection matrix q x |V|)."""
    prows, degs = [], []
    for e, _ in V.items():
        tgt = V.indices(e)
        src = U.indices(e - d)
        img = [[phi[i][j] for i in tgt] for j in src]
        span = linalg.row_space(img, len(tgt)) if img else []
        piv = set()
        for r in span:
            piv.add(next(k for k, x in enumerate(r) if x))
        comp = [k for k in range(len(tgt)) if k not in piv]
        # basis of V_e: span rows followed by complement unit vectors
        basis = [list(r) for r in span] + [[Fraction(int(k == c)) for k in range(len(tgt))] for c in comp]
        if not comp:
            continue
        inv = linalg.inverse(linalg.transpose(basis, len(tgt)))
        for a in range(len(span), len(basis)):
            row = [Fraction(0)] * len(V)
            for k, t in enumerate(tgt):
                row[t] = inv[a][k]
            prows.append(row)
            degs.append(e)
    return GradedVS(tuple(degs)), prows


def _express(basis_cols: Matrix, vec: Sequence[Fraction], nrows: int) -> list[Fraction]:
    k = len(basis_cols[0]) if basis_cols and basis_cols[0] else 0
    sol = linalg.solve(basis_cols, list(vec), k)
    if sol is None:
        raise AssertionError("vector outside the subspace")
    return sol


def kernel_hat(f: Mor) -> tuple[EffObjHat, Mor]:
    """Kernel in the hat category, with its inclusion."""
    x = f.src
    K, incl = _vs_kernel(f.phi, x.vertex, f.tgt.vertex, f.degree)
    comps, thetas = {}, {}
    for n in f.indices() + [TAIL]:
        km, ki = pm.kernel(f.at(n))
        bi = linalg.matmul(x.comp(n).beta_matrix(), ki.mat, inner=len(x.comp(n).module), cols=len(km))
        beta = linalg.zeros(len(K), len(km))
        for j in range(len(km)):
            col = [bi[u][j] for u in range(len(x.vertex))]
            if any(col):
                z = _express(incl, col, len(x.vertex))
                for a in range(len(K)):
                    beta[a][j] = z[a]
        comps[n] = Component.make(km, beta, K)
        thetas[n] = ki
    tail = comps.pop(TAIL)
    obj = EffObjHat(K, comps, tail)
    th_tail = thetas.pop(TAIL)
    return obj, Mor(obj, x, 0, incl, thetas, th_tail, check=False)


def kernel(f: Mor) -> tuple[EffObj, Mor]:
    k, incl = kernel_hat(f)
    k = validate(k)
    incl.src = k
    return k, incl


def cokernel(f: Mor) -> tuple[EffObj, Mor]:
    y = f.tgt
    C, pr = _vs_cokernel(f.phi, f.src.vertex, y.vertex, f.degree)
    comps, thetas = {}, {}
    for n in f.indices() + [TAIL]:
        cm, proj, sec = pm.cokernel_with_section(f.at(n))
        b = linalg.matmul(y.comp(n).beta_matrix(), sec, inner=len(y.comp(n).module), cols=len(cm))
        beta = linalg.matmul(pr, b, inner=len(y.vertex), cols=len(cm)) if pr else []
        for j in cm.torsion_indices():
            for a in range(len(C)):
                if beta[a][j]:
                    raise AssertionError("torsion class with nonzero beta")
        comps[n] = Component.make(cm, beta if beta else [], C)
        thetas[n] = proj
    tail = comps.pop(TAIL)
    obj = validate(EffObjHat(C, comps, tail))
    th_tail = thetas.pop(TAIL)
    return obj, Mor(y, obj, 0, pr if pr else [], thetas, th_tail, check=False)


def block_mor(src_objs: Sequence[EffObjHat], tgt_objs: Sequence[EffObjHat],
              blocks: Mapping[tuple[int, int], Mor], degree: int = 0) -> Mor:
    """Morphism ⊕src -> ⊕tgt assembled from blocks (tgt index, src index)."""
    S, sinj, sproj = sum_injections(src_objs)
    T, tinj, tproj = sum_injections(tgt_objs)
    total = Mor.zero(S, T, degree)
    for (a, b), m in blocks.items():
        total = total + (tinj[a] @ m @ sproj[b])
    return total


def colimit(objects: Sequence[EffObj], arrows: Sequence[tuple[int, int, Mor]]) -> tuple[EffObj, list[Mor]]:
    """Colimit of a finite diagram; returns the object and the cocone maps."""
    S, inj, _ = sum_injections(objects)
    if not arrows:
        return validate(S), inj
    A_objs = [f.src for _, _, f in arrows]
    blocks = {}
    for k, (s, t, f) in enumerate(arrows):
        blocks[(t, k)] = blocks.get((t, k), Mor.zero(f.src, objects[t])) + f
        blocks[(s, k)] = blocks.get((s, k), Mor.zero(f.src, objects[s])) - Mor.identity(f.src)
    g = block_mor(A_objs, list(objects), blocks)
    C, proj = cokernel(g)
    _, tinj, _ = sum_injections(list(objects))
    return C, [proj @ i for i in tinj]


def limit(objects: Sequence[EffObj], arrows: Sequence[tuple[int, int, Mor]]) -> tuple[EffObj, list[Mor]]:
    """Limit of a finite diagram: limit in the hat category, then gamma_h."""
    S, _, proj = sum_injections(objects)
    if not arrows:
        return gamma_h(S)[0], proj
    T_objs = [f.tgt for _, _, f in arrows]
    blocks = {}
    for k, (s, t, f) in enumerate(arrows):
        blocks[(k, s)] = blocks.get((k, s), Mor.zero(objects[s], f.tgt)) + f
        blocks[(k, t)] = blocks.get((k, t), Mor.zero(objects[t], f.tgt)) - Mor.identity(f.tgt)
    g = block_mor(list(objects), T_objs, blocks)
    K, incl = kernel_hat(g)
    L, counit = gamma_h(K)
    _, _, sproj = sum_injections(list(objects))
    return L, [p @ incl @ counit for p in sproj]


# --------------------------------------------------------------------------
# the coreflection


def laurent_to_free(mat: Matrix, row_degrees: Sequence[int], col_module: GMod) -> GMap:
    """View a Laurent-coordinate map N -> Laurent ⊗ W as a map into a free module.

    Poles are absorbed by shifting W's generators up far enough.
    """
    pole = 0
    for i, r in enumerate(mat):
        for j, x in enumerate(r):
            if x:
                pole = max(pole, -forced_exponent(row_degrees[i], col_module.deg(j)))
    tgt = GMod.of([d + 2 * pole for d in row_degrees])
    return GMap(col_module, tgt, 0, mat, check=False)


def gamma_h(x: EffObjHat) -> tuple[EffObj, Mor]:
    """Right adjoint to the inclusion of A; returns (object, counit)."""
    U = x.vertex
    comps = list(x.exc.items()) + [(TAIL, x.tail)]
    for n, c in comps:
        free = c.free_columns()
        if free and linalg.rank([[c.beta[u][j] for j in free] for u in range(len(U))]) < len(free):
            raise NotEffective(f"component {n}: beta has a free kernel, so the coreflection is "
                               "not finitely describable")
        if n == TAIL and c.module.torsion():
            raise NotEffective("tail torsion: the coreflection is not finitely describable")
    # largest graded subspace V' of U reachable at every component
    vcols, vdeg = [], []
    for e, _ in U.items():
        cur = [[Fraction(int(k == i)) for k in range(len(U))] for i in U.indices(e)]
        for n, c in comps:
            if not cur:
                break
            if n == TAIL:
                sel = [j for j in c.free_columns() if c.module.deg(j) >= e and (c.module.deg(j) - e) % 2 == 0]
            else:
                sel = c.free_columns()
            span = [[c.beta[u][j] for u in range(len(U))] for j in sel]
            cur = linalg.intersect(cur, linalg.row_space(span, len(U)), len(U)) if span else []
        for v in cur:
            vcols.append(v)
            vdeg.append(e)
    V = GradedVS(tuple(vdeg))
    B = linalg.transpose(vcols, len(U)) if vcols else [[] for _ in range(len(U))]
    # projection onto a complement of V' (per degree) to cut out the preimage
    Cq, pr = _vs_cokernel(B, V, U, 0)
    new, thetas = {}, {}
    for n, c in comps:
        if pr:
            pb = linalg.matmul(pr, c.beta_matrix(), inner=len(U), cols=len(c.module))
            km, ki = pm.kernel(laurent_to_free(pb, Cq.degrees, c.module))
        else:
            km, ki = c.module, GMap.identity(c.module)
        bi = linalg.matmul(c.beta_matrix(), ki.mat, inner=len(c.module), cols=len(km))
        beta = linalg.zeros(len(V), len(km))
        for j in range(len(km)):
            col = [bi[u][j] for u in range(len(U))]
            if any(col):
                z = _express(B, col, len(U))
                for a in range(len(V)):
                    beta[a][j] = z[a]
        new[n] = Component.make(km, beta, V)
        thetas[n] = ki
    tail = new.pop(TAIL)
    try:
        obj = validate(EffObjHat(V, new, tail))
    except NotInA as exc:
        raise NotEffective(f"coreflection left the effective class: {exc}") from exc
    th_tail = thetas.pop(TAIL)
    return obj, Mor(obj, x, 0, B if vcols else [[] for _ in range(len(U))], thetas, th_tail, check=False)


def inclusion_hat(x: EffObj) -> EffObjHat:
    """j*: forget the certification."""
    return EffObjHat(x.vertex, x.exc, x.tail)


# --------------------------------------------------------------------------
# JSON


def _ordered(module: GMod) -> list[int]:
    # the column order GMod.to_json writes: free by degree, then torsion by (degree, order)
    return (sorted(module.free_indices(), key=lambda i: module.deg(i))
            + sorted(module.torsion_indices(), key=lambda i: module.gens[i]))


def component_to_json(c: Component, vertex: GradedVS) -> dict:
    order = _ordered(c.module)
    return {"module": c.module.to_json(),
            "beta": [[pm.format_mono(c.beta[u][j], forced_exponent(vertex.degrees[u], c.module.deg(j)))
                      for j in order] for u in range(len(vertex))]}


def component_from_json(data: dict, vertex: GradedVS, locus: str) -> Component:
    if not isinstance(data, dict) or "module" not in data:
        raise MalformedInput("component needs 'module'", locus)
    mod = GMod.from_json(data["module"])
    raw = data.get("beta", [])
    if len(raw) != len(vertex) or any(len(r) != len(mod) for r in raw):
        raise MalformedInput(f"beta must be {len(vertex)}x{len(mod)}", locus)
    beta = [[pm.parse_mono(str(s), forced_exponent(vertex.degrees[u], mod.deg(j)), f"{locus}.beta[{u}][{j}]")
             for j, s in enumerate(r)] for u, r in enumerate(raw)]
    return Component.make(mod, beta, vertex)


def obj_to_json(x: EffObjHat) -> dict:
    return {"vertex": x.vertex.to_json(),
            "tail": component_to_json(x.tail, x.vertex),
            "exc": {str(n): component_to_json(c, x.vertex) for n, c in x.exc.items()}}


def vertex_from_json(data) -> GradedVS:
    try:
        return GradedVS.of([(int(d), int(n)) for d, n in data])
    except (TypeError, ValueError) as exc:
        raise MalformedInput(f"bad vertex: {exc}", "vertex") from exc


def obj_from_json(data: dict, certify: bool = True) -> EffObjHat:
    if not isinstance(data, dict) or "vertex" not in data or "tail" not in data:
        raise MalformedInput("object needs 'vertex' and 'tail'")
    U = vertex_from_json(data["vertex"])
    tail = component_from_json(data["tail"], U, "tail")
    exc = {}
    for n, c in data.get("exc", {}).items():
        try:
            k = int(n)
        except ValueError as e:
            raise MalformedInput(f"bad component index {n!r}", "exc") from e
        exc[k] = component_from_json(c, U, f"exc.{n}")
    x = EffObjHat(U, exc, tail)
    return validate(x) if certify else x


def mor_to_json(f: Mor) -> dict:
    def comp(n):
        th = f.at(n)
        so, to = _ordered(th.src), _ordered(th.tgt)
        return [[pm.format_mono(th.mat[i][j], forced_exponent(th.tgt.deg(i), th.src.deg(j) + f.degree))
                 for j in so] for i in to]
    return {"degree": f.degree,
            "vertex": [[str(x) for x in r] for r in f.phi],
            "tail": comp(TAIL),
            "exc": {str(n): comp(n) for n in f.indices()}}


def mor_from_json(data: dict, src: EffObjHat, tgt: EffObjHat) -> Mor:
    try:
        d = int(data.get("degree", 0))
        phi = [[Fraction(str(x)) for x in r] for r in data.get("vertex", [])]
    except (TypeError, ValueError) as exc:
        raise MalformedInput(f"bad morphism: {exc}") from exc
    if not phi:
        phi = linalg.zeros(len(tgt.vertex), len(src.vertex))

    def comp(raw, n, locus):
        s, t = src.comp(n).module, tgt.comp(n).module
        so, to = _ordered(s), _ordered(t)
        mat = linalg.zeros(len(t), len(s))
        if raw is None:
            return GMap(s, t, d, mat, check=False)
        if len(raw) != len(t) or any(len(r) != len(s) for r in raw):
            raise MalformedInput(f"matrix must be {len(t)}x{len(s)}", locus)
        for a, r in enumerate(raw):
            for b, e in enumerate(r):
                i, j = to[a], so[b]
                mat[i][j] = pm.parse_mono(str(e), forced_exponent(t.deg(i), s.deg(j) + d), f"{locus}[{a}][{b}]")
        return GMap(s, t, d, mat)

    exc = data.get("exc", {})
    idx = set(src.exc) | set(tgt.exc) | {int(n) for n in exc}
    theta = {n: comp(exc.get(str(n)), n, f"exc.{n}") for n in idx}
    return Mor(src, tgt, d, phi, theta, comp(data.get("tail"), TAIL, "tail"))


def factor_through(g: Mor, incl: Mor) -> Mor:
    """h with incl ∘ h = g, for a monomorphism incl."""
    k = incl.src
    deg = g.degree - incl.degree
    cols = []
    for col in range(len(g.src.vertex)):
        target = [g.phi[i][col] for i in range(len(g.tgt.vertex))]
        if not any(target):
            cols.append([Fraction(0)] * len(k.vertex))
            continue
        sol = linalg.solve(incl.phi, target, len(k.vertex))
        if sol is None:
            raise ValueError("vertex map does not factor")
        cols.append(sol)
    phi = linalg.transpose(cols, len(k.vertex)) if cols else linalg.zeros(len(k.vertex), 0)
    idx = sorted(set(g.indices()) | set(incl.indices()))
    theta = {n: pm.factor_through(g.at(n), incl.at(n)) for n in idx}
    return Mor(g.src, k, deg, phi, theta, pm.factor_through(g.theta_tail, incl.theta_tail), check=False)


def reframe(f: Mor, src: EffObjHat, tgt: EffObjHat, degree: int) -> Mor:
    """Same matrices, new (shifted) source/target and degree."""
    idx = sorted(set(src.exc) | set(tgt.exc) | set(f.theta))
    theta = {n: GMap(src.comp(n).module, tgt.comp(n).module, degree, f.at(n).mat, check=False) for n in idx}
    tail = GMap(src.tail.module, tgt.tail.module, degree, f.theta_tail.mat, check=False)
    return Mor(src, tgt, degree, f.phi, theta, tail, check=False)
