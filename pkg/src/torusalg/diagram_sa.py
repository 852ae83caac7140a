"""Diagrams a -> b <- c over O_F -> E^{-1}O_F <- Q at chain level.

Leg a is a complex of effective O_F-modules (one module per exceptional
component plus a tail), leg b is Laurent-free over E^{-1}O_F with a finite basis
per component, leg c is a complex of finite graded vector spaces. alpha and
gamma are stored in Laurent coordinates, as structure maps are.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import category_a as ca
from . import linalg
from . import pid_modules as pm
from .category_a import TAIL, Component, EffObjHat, GradedVS, Mor
from .dg_layer import DGObj
from .errors import MalformedInput, NotEffective
from .pid_modules import GMap, GMod, forced_exponent

Matrix = linalg.Matrix


def _laurent_check(mat: Matrix, rows: Sequence[int], cols: Sequence[int], degree: int,
                   what: str, nonneg: bool) -> None:
    for i, r in enumerate(mat):
        for j, x in enumerate(r):
            if not x:
                continue
            m = forced_exponent(rows[i], cols[j] + degree)
            if m is None:
                raise MalformedInput(f"{what}[{i}][{j}] joins degrees of different parity")
            if nonneg and m < 0:
                raise MalformedInput(f"{what}[{i}][{j}] has a pole on the uniform part")


def _mul(a: Matrix, b: Matrix, inner: int, cols: int) -> Matrix:
    return linalg.matmul(a, b, inner=inner, cols=cols)


def _is_zero(m: Matrix) -> bool:
    return not any(any(r) for r in m)


@dataclass
class DiagComp:
    a: GMod
    da: GMap
    b: tuple[int, ...]
    db: Matrix
    alpha: Matrix       # rows b, cols a generators
    gamma: Matrix       # rows b, cols c basis


class DiagObj:
    def __init__(self, c: GradedVS, dc: Matrix, exc: dict, tail: DiagComp, check: bool = True):
        self.c = c
        self.dc = [list(r) for r in dc] if dc else linalg.zeros(len(c), len(c))
        self.exc = dict(sorted(exc.items()))
        self.tail = tail
        if check:
            self.check()

    def comp(self, n) -> DiagComp:
        if n == TAIL:
            return self.tail
        return self.exc.get(n, self.tail)

    def indices(self) -> list[int]:
        return sorted(self.exc)

    def check(self) -> None:
        C = self.c.degrees
        _laurent_check(self.dc, C, C, -1, "dc", False)
        for i, r in enumerate(self.dc):
            for j, x in enumerate(r):
                if x and C[i] != C[j] - 1:
                    raise MalformedInput("dc is not of degree -1")
        if not _is_zero(_mul(self.dc, self.dc, len(C), len(C))):
            raise MalformedInput("dc does not square to zero")
        for n in self.indices() + [TAIL]:
            k = self.comp(n)
            tail = n == TAIL
            A = [d for d, _ in k.a.gens]
            if k.da.degree != -1 or not (k.da @ k.da).is_zero():
                raise MalformedInput(f"leg a at {n}: differential must have degree -1 and square to zero")
            _laurent_check(k.db, k.b, k.b, -1, f"db[{n}]", tail)
            _laurent_check(k.alpha, k.b, A, 0, f"alpha[{n}]", tail)
            _laurent_check(k.gamma, k.b, C, 0, f"gamma[{n}]", tail)
            for j in k.a.torsion_indices():
                if any(k.alpha[i][j] for i in range(len(k.b))):
                    raise MalformedInput(f"alpha[{n}] is nonzero on torsion")
            nb = len(k.b)
            if not _is_zero(_mul(k.db, k.db, nb, nb)):
                raise MalformedInput(f"db[{n}] does not square to zero")
            lhs = _mul(k.db, k.alpha, nb, len(A))
            rhs = _mul(k.alpha, k.da.mat, len(A), len(A))
            if lhs != rhs:
                raise MalformedInput(f"alpha[{n}] is not a chain map")
            lhs = _mul(k.db, k.gamma, nb, len(C))
            rhs = _mul(k.gamma, self.dc, len(C), len(C))
            if lhs != rhs:
                raise MalformedInput(f"gamma[{n}] is not a chain map")

    def __repr__(self) -> str:
        parts = [f"c={self.c}"]
        for n in self.indices() + [TAIL]:
            k = self.comp(n)
            parts.append(f"{n}: a={k.a}, b={len(k.b)}")
        return "DiagObj(" + "; ".join(parts) + ")"


@dataclass
class DiagMor:
    src: DiagObj
    tgt: DiagObj
    x: dict             # component -> GMap on leg a
    y: dict             # component -> Laurent matrix on leg b
    z: Matrix           # leg c

    def xa(self, n) -> GMap:
        return self.x.get(n, self.x[TAIL])

    def yb(self, n) -> Matrix:
        return self.y.get(n, self.y[TAIL])

    def components(self) -> list:
        return sorted(set(self.src.exc) | set(self.tgt.exc)) + [TAIL]

    def check(self) -> None:
        S, T = self.src, self.tgt
        nc, mc = len(S.c), len(T.c)
        if _mul(T.dc, self.z, mc, nc) != _mul(self.z, S.dc, nc, nc):
            raise MalformedInput("leg c map is not a chain map")
        for n in self.components():
            s, t = S.comp(n), T.comp(n)
            x, y = self.xa(n), self.yb(n)
            x.check()
            if not ((t.da @ x) - (x @ s.da)).is_zero():
                raise MalformedInput(f"leg a map at {n} is not a chain map")
            nb, mb = len(s.b), len(t.b)
            if _mul(t.db, y, mb, nb) != _mul(y, s.db, nb, nb):
                raise MalformedInput(f"leg b map at {n} is not a chain map")
            if _mul(t.alpha, x.mat, len(t.a), len(s.a)) != _mul(y, s.alpha, nb, len(s.a)):
                raise MalformedInput(f"alpha square at {n} does not commute")
            if _mul(t.gamma, self.z, mc, nc) != _mul(y, s.gamma, nb, nc):
                raise MalformedInput(f"gamma square at {n} does not commute")


# --------------------------------------------------------------------------
# l*, Gamma_v, Gamma


def l_star(x: DGObj | EffObjHat) -> DiagObj:
    """(N, beta, E^{-1}O_F ⊗ U, id, U) with differentials carried along."""
    if not isinstance(x, DGObj):
        x = DGObj(x)
    X, d = x.carrier, x.d
    U = X.vertex.degrees
    comps = {}
    for n in X.indices() + [TAIL]:
        c = X.comp(n)
        comps[n] = DiagComp(c.module, d.at(n), U, [list(r) for r in d.phi], c.beta_matrix(),
                            linalg.identity(len(U)))
    tail = comps.pop(TAIL)
    return DiagObj(X.vertex, d.phi, comps, tail)


def l_star_mor(f: Mor) -> DiagMor:
    src, tgt = l_star(f.src), l_star(f.tgt)
    x = {n: f.at(n) for n in f.indices() + [TAIL]}
    y = {n: [list(r) for r in f.phi] for n in f.indices() + [TAIL]}
    return DiagMor(src, tgt, x, y, [list(r) for r in f.phi])


def _parity_complement(gamma: Matrix, bdeg: Sequence[int], ncols: int) -> tuple[list[int], Matrix]:
    """A complement of im(gamma) in Laurent ⊗ b: (degrees, projection rows)."""
    prows, degs = [], []
    for p in (0, 1):
        rows = [i for i, d in enumerate(bdeg) if d % 2 == p]
        if not rows:
            continue
        img = [[gamma[i][j] for i in rows] for j in range(ncols)]
        span = linalg.row_space(img, len(rows)) if img else []
        piv = {next(k for k, v in enumerate(r) if v) for r in span}
        comp = [k for k in range(len(rows)) if k not in piv]
        if not comp:
            continue
        basis = [list(r) for r in span] + [[Fraction(int(k == c)) for k in range(len(rows))] for c in comp]
        inv = linalg.inverse(linalg.transpose(basis, len(rows)))
        for a, c in zip(range(len(span), len(basis)), comp):
            # project onto the complement vector, rescaled into Laurent coordinates
            row = [Fraction(0)] * len(bdeg)
            for k, i in enumerate(rows):
                row[i] = inv[a][k]
            prows.append(row)
            degs.append(bdeg[rows[c]])
    return degs, prows


def gamma_v(D: DiagObj) -> DGObj:
    """Pullback of a -> b <- c: P = {x : alpha(x) in im gamma}, delta = gamma^{-1} alpha."""
    C = D.c
    comps, incls = {}, {}
    for n in D.indices() + [TAIL]:
        k = D.comp(n)
        if len(C) and linalg.rank(k.gamma) < len(C):
            raise NotEffective(f"gamma is not injective at component {n}; the pullback is not effective")
        qdeg, pr = _parity_complement(k.gamma, k.b, len(C))
        if pr:
            pa = _mul(pr, k.alpha, len(k.b), len(k.a))
            km, ki = pm.kernel(ca.laurent_to_free(pa, qdeg, k.a))
        else:
            km, ki = k.a, GMap.identity(k.a)
        ai = _mul(k.alpha, ki.mat, len(k.a), len(km))
        delta = linalg.zeros(len(C), len(km))
        for j in range(len(km)):
            col = [ai[i][j] for i in range(len(k.b))]
            if any(col):
                z = linalg.solve(k.gamma, col, len(C))
                if z is None:
                    raise AssertionError("pullback element outside im gamma")
                for a in range(len(C)):
                    delta[a][j] = z[a]
        comps[n] = Component.make(km, delta, C)
        incls[n] = ki
    tail = comps.pop(TAIL)
    try:
        P = EffObjHat(C, comps, tail)
    except MalformedInput as exc:
        raise NotEffective(f"pullback leaves the effective class: {exc}") from exc
    # differential: restrict d_a through the inclusions, d_c on the vertex
    theta = {}
    for n in D.indices() + [TAIL]:
        k = D.comp(n)
        theta[n] = pm.factor_through(k.da @ incls[n], incls[n])
    t = theta.pop(TAIL)
    d = Mor(P, P, -1, D.dc, theta, t)
    return DGObj(P, d)


def gamma_h_dg(x: DGObj) -> DGObj:
    G, counit = ca.gamma_h(x.carrier)
    d = ca.factor_through(x.d @ counit, counit)
    return DGObj(G, ca.reframe(d, G, G, -1))


def gamma(D: DiagObj) -> DGObj:
    return gamma_h_dg(gamma_v(D))


# --------------------------------------------------------------------------
# cells


def cells_ka(n, k: int = 0) -> DiagObj:
    """l* of sigma(n, k), or of the shifted unit when n == 'unit'."""
    if n == "unit":
        return l_star(ca.unit().shift(k))
    return l_star(ca.sigma(int(n), k))


# --------------------------------------------------------------------------
# cones and homology invariants


def _block(a: Matrix, b: Matrix, c: Matrix, d: Matrix, r1, c1, r2, c2) -> Matrix:
    out = linalg.zeros(r1 + r2, c1 + c2)
    for i in range(r1):
        for j in range(c1):
            out[i][j] = a[i][j]
        for j in range(c2):
            out[i][c1 + j] = b[i][j]
    for i in range(r2):
        for j in range(c1):
            out[r1 + i][j] = c[i][j]
        for j in range(c2):
            out[r1 + i][c1 + j] = d[i][j]
    return out


def diag_cone(f: DiagMor) -> DiagObj:
    """Legwise mapping cone: Σsrc ⊕ tgt with d = [[-d, 0], [f, d]]."""
    S, T = f.src, f.tgt
    ns, nt = len(S.c), len(T.c)
    C = GradedVS(tuple(d + 1 for d in S.c.degrees) + T.c.degrees)
    neg = lambda m: [[-x for x in r] for r in m]
    dc = _block(neg(S.dc), linalg.zeros(ns, nt), f.z, T.dc, ns, ns, nt, nt)
    comps = {}
    for n in f.components():
        s, t = S.comp(n), T.comp(n)
        sa, ta = len(s.a), len(t.a)
        a = GMod(tuple((d + 1, k) for d, k in s.a.gens) + t.a.gens)
        da = GMap(a, a, -1, _block(neg(s.da.mat), linalg.zeros(sa, ta), f.xa(n).mat, t.da.mat, sa, sa, ta, ta),
                  check=False)
        sb, tb = len(s.b), len(t.b)
        b = tuple(d + 1 for d in s.b) + t.b
        db = _block(neg(s.db), linalg.zeros(sb, tb), f.yb(n), t.db, sb, sb, tb, tb)
        alpha = _block(s.alpha, linalg.zeros(sb, ta), linalg.zeros(tb, sa), t.alpha, sb, sa, tb, ta)
        gam = _block(s.gamma, linalg.zeros(sb, nt), linalg.zeros(tb, ns), t.gamma, sb, ns, tb, nt)
        comps[n] = DiagComp(a, da, b, db, alpha, gam)
    tail = comps.pop(TAIL)
    # the c-leg basis is positional here; keep it that way for the matrices
    return DiagObj(C, dc, comps, tail)


def _laurent_homology_ranks(bdeg: Sequence[int], db: Matrix) -> tuple[int, int]:
    out = []
    for p in (0, 1):
        src = [i for i, d in enumerate(bdeg) if d % 2 == p]
        tgt = [i for i, d in enumerate(bdeg) if d % 2 != p]
        out_rk = linalg.rank([[db[i][j] for j in src] for i in tgt]) if src and tgt else 0
        in_rk = linalg.rank([[db[i][j] for j in tgt] for i in src]) if src and tgt else 0
        out.append(len(src) - out_rk - in_rk)
    return tuple(out)


def _vs_homology(C: GradedVS, dc: Matrix, window) -> dict[int, int]:
    out = {}
    for e in range(window[0], window[1] + 1):
        here = [i for i, d in enumerate(C.degrees) if d == e]
        down = [i for i, d in enumerate(C.degrees) if d == e - 1]
        up = [i for i, d in enumerate(C.degrees) if d == e + 1]
        r_out = linalg.rank([[dc[i][j] for j in here] for i in down]) if here and down else 0
        r_in = linalg.rank([[dc[i][j] for j in up] for i in here]) if here and up else 0
        h = len(here) - r_out - r_in
        if h:
            out[e] = h
    return out


def _module_homology_key(k: DiagComp, window) -> tuple:
    H, _, _ = pm.homology(k.da)
    return tuple((e, H.dim(e)) for e in range(window[0], window[1] + 1) if H.dim(e))


@dataclass
class LegInvariants:
    a: dict
    b: dict
    c: dict

    def key(self) -> tuple:
        def prune(d):
            t = d[TAIL]
            return tuple(sorted((n, v) for n, v in d.items() if n != TAIL and v != t)) + ((TAIL, t),)
        return (prune(self.a), prune(self.b), tuple(sorted(self.c.items())))


def homology_invariants(D: DiagObj, window=(-10, 10), indices: Sequence[int] = ()) -> LegInvariants:
    comps = sorted(set(D.indices()) | set(indices)) + [TAIL]
    a = {n: _module_homology_key(D.comp(n), window) for n in comps}
    b = {n: _laurent_homology_ranks(D.comp(n).b, D.comp(n).db) for n in comps}
    return LegInvariants(a, b, _vs_homology(D.c, D.dc, window))


@dataclass
class CofibreVerdict:
    window: tuple[int, int]
    ok: bool
    mismatches: list = field(default_factory=list)


def verify_cofibre(f: DiagMor, expected: DiagObj, window=(-10, 10)) -> CofibreVerdict:
    """Compare the legwise homology of cone(f) with that of `expected`."""
    cone = diag_cone(f)
    idx = sorted(set(cone.indices()) | set(expected.indices()))
    got = homology_invariants(cone, window, idx)
    want = homology_invariants(expected, window, idx)
    mism = []
    for leg in ("a", "b"):
        g, w = getattr(got, leg), getattr(want, leg)
        for n in idx + [TAIL]:
            if g[n] != w[n]:
                mism.append((leg, n, g[n], w[n]))
    if got.c != want.c:
        mism.append(("c", None, got.c, want.c))
    return CofibreVerdict(tuple(window), not mism, mism)


@dataclass
class LegVerdict:
    window: tuple[int, int]
    legs: dict            # 'a' | 'b' | 'c' -> bool
    obstruction: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.legs.values())


def objectwise_we(f: DiagMor, window=(-10, 10)) -> LegVerdict:
    """Quasi-isomorphism verdict on each leg (acyclic cone, one degree of slack)."""
    cone = diag_cone(f)
    w = (window[0], window[1] + 1)
    inv = homology_invariants(cone, w)
    legs, obst = {}, {}
    bad_a = [(n, v[0][0]) for n, v in inv.a.items() if v]
    legs["a"] = not bad_a
    if bad_a:
        obst["a"] = bad_a[0]
    bad_b = [n for n, v in inv.b.items() if any(v)]
    legs["b"] = not bad_b
    if bad_b:
        obst["b"] = bad_b[0]
    legs["c"] = not inv.c
    if inv.c:
        obst["c"] = min(inv.c)
    return LegVerdict(tuple(window), legs, obst)


# --------------------------------------------------------------------------
# Hom groups of diagrams (graded, differentials ignored)


def diag_hom_degree(D: DiagObj, E: DiagObj, d: int) -> tuple[int, dict, int]:
    zvars = ca.vs_hom_variables(D.c, E.c, d)
    comps = sorted(set(D.exc) | set(E.exc)) + [TAIL]
    systems = {}
    for n in comps:
        s, t = D.comp(n), E.comp(n)
        xvars = pm.hom_variables(s.a, t.a, d)
        yvars = []
        for j, bj in enumerate(s.b):
            for i, bi in enumerate(t.b):
                m = forced_exponent(bi, bj + d)
                if m is None or (n == TAIL and m < 0):
                    continue
                yvars.append((i, j))
        nloc = len(xvars) + len(yvars)
        ag, al = [], []
        # alpha' x - y alpha = 0 at (i, a-gen j)
        for i in range(len(t.b)):
            for j in range(len(s.a)):
                rg = [Fraction(0)] * len(zvars)
                rl = [Fraction(0)] * nloc
                for k, (p, q) in enumerate(xvars):
                    if q == j:
                        rl[k] += t.alpha[i][p]
                for k, (p, q) in enumerate(yvars):
                    if p == i:
                        rl[len(xvars) + k] -= s.alpha[q][j]
                if any(rl):
                    ag.append(rg)
                    al.append(rl)
        # gamma' z - y gamma = 0 at (i, c-basis j)
        for i in range(len(t.b)):
            for j in range(len(D.c)):
                rg = [Fraction(0)] * len(zvars)
                rl = [Fraction(0)] * nloc
                for k, (p, q) in enumerate(zvars):
                    if q == j:
                        rg[k] += t.gamma[i][p]
                for k, (p, q) in enumerate(yvars):
                    if p == i:
                        rl[len(xvars) + k] -= s.gamma[q][j]
                if any(rg) or any(rl):
                    ag.append(rg)
                    al.append(rl)
        systems[n] = (ag, al, nloc)
    sol = ca.fibered_solve(len(zvars), systems)
    return len(sol.global_basis), {n: len(sol.local_kernels[n]) for n in comps[:-1]}, len(sol.local_kernels[TAIL])


def diag_hom(D: DiagObj, E: DiagObj, window=(-6, 6)) -> ca.CGVS:
    out = ca.CGVS(tuple(window))
    for d in range(window[0], window[1] + 1):
        g, exc, t = diag_hom_degree(D, E, d)
        out.global_[d] = g
        for n, v in exc.items():
            out.exceptional.setdefault(n, {})[d] = v
        out.tail[d] = t
    return out.normalize()


# --------------------------------------------------------------------------
# JSON


def _lm(mat: Matrix, rows, cols, degree=0) -> list:
    return [[pm.format_mono(mat[i][j], forced_exponent(rows[i], cols[j] + degree)) for j in range(len(cols))]
            for i in range(len(rows))]


def _pm(raw, rows, cols, degree, locus) -> Matrix:
    if len(raw) != len(rows) or any(len(r) != len(cols) for r in raw):
        raise MalformedInput(f"matrix must be {len(rows)}x{len(cols)}", locus)
    return [[pm.parse_mono(str(s), forced_exponent(rows[i], cols[j] + degree), f"{locus}[{i}][{j}]")
             for j, s in enumerate(r)] for i, r in enumerate(raw)]


def diag_to_json(D: DiagObj) -> dict:
    C = D.c.degrees

    def leg(f):
        out = {"tail": f(D.tail)}
        if D.exc:
            out["exc"] = {str(n): f(k) for n, k in D.exc.items()}
        return out

    def amod(k):
        A = [d for d, _ in k.a.gens]
        return {"gens": [list(g) for g in k.a.gens], "d": _lm(k.da.mat, A, A, -1)}

    return {"a": leg(amod),
            "b": leg(lambda k: {"basis": list(k.b), "d": _lm(k.db, k.b, k.b, -1)}),
            "c": {"basis": list(C), "d": _lm(D.dc, C, C, -1)},
            "alpha": leg(lambda k: _lm(k.alpha, k.b, [d for d, _ in k.a.gens])),
            "gamma": leg(lambda k: _lm(k.gamma, k.b, C))}


def diag_from_json(data: dict) -> DiagObj:
    try:
        C = GradedVS(tuple(int(d) for d in data["c"]["basis"]))
        dc = _pm(data["c"].get("d", [[0] * len(C)] * len(C)), C.degrees, C.degrees, -1, "c.d")
        keys = {TAIL} | {int(n) for n in data["a"].get("exc", {})}

        def get(leg, n):
            block = data[leg]
            return block["tail"] if n == TAIL else block.get("exc", {}).get(str(n), block["tail"])

        comps = {}
        for n in keys:
            am = get("a", n)
            a = GMod(tuple((int(d), int(k)) for d, k in am["gens"]))
            A = [d for d, _ in a.gens]
            da = GMap(a, a, -1, _pm(am["d"], A, A, -1, f"a.{n}.d"))
            bm = get("b", n)
            b = tuple(int(d) for d in bm["basis"])
            db = _pm(bm["d"], b, b, -1, f"b.{n}.d")
            alpha = _pm(get("alpha", n), b, A, 0, f"alpha.{n}")
            gam = _pm(get("gamma", n), b, C.degrees, 0, f"gamma.{n}")
            comps[n] = DiagComp(a, da, b, db, alpha, gam)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, MalformedInput):
            raise
        raise MalformedInput(f"bad diagram: {exc}") from exc
    tail = comps.pop(TAIL)
    return DiagObj(C, dc, comps, tail)
