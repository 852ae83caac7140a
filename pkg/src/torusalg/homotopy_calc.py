"""Homotopy calculations: pi_A of standard spectra, injective resolutions, Ext
and tables of maps via the Adams short exact sequence.

Injective objects are sums of e(V) = (E^{-1}O_F ⊗ V, V, id) and divisible torsion
pieces T = (Q[c,c^-1] w / Q[c] w in one factor, 0, 0). A piece is recorded by
the degree of w; its nonzero elements c^{-j} w (j >= 1) sit in degrees
deg w + 2j. Maps into or between pieces use the same Laurent coordinates as
structure maps, with everything of non-negative c-power discarded.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from . import category_a as ca
from . import linalg
from .category_a import TAIL, CGVS, EffObj, GradedVS, Mor
from .errors import MalformedInput, NotEffective, WindowTooSmall
from .pid_modules import GMod

# --------------------------------------------------------------------------
# spectra


@dataclass(frozen=True)
class SpectrumExpr:
    kind: str                      # S0 | Sigma | Orbit | Susp | Wedge
    n: int = 0
    args: tuple = ()

    def __str__(self) -> str:
        if self.kind == "S0":
            return "S0"
        if self.kind in ("Sigma", "Orbit"):
            return f"{self.kind}({self.n})"
        if self.kind == "Susp":
            return f"Susp({self.n}, {self.args[0]})"
        return f"Wedge({self.args[0]}, {self.args[1]})"


def S0() -> SpectrumExpr:
    return SpectrumExpr("S0")


def Sigma(n: int) -> SpectrumExpr:
    if n < 1:
        raise MalformedInput(f"Sigma needs n >= 1, got {n}")
    return SpectrumExpr("Sigma", n)


def Orbit(n: int) -> SpectrumExpr:
    if n < 1:
        raise MalformedInput(f"Orbit needs n >= 1, got {n}")
    return SpectrumExpr("Orbit", n)


def Susp(k: int, e: SpectrumExpr) -> SpectrumExpr:
    return SpectrumExpr("Susp", k, (e,))


def Wedge(a: SpectrumExpr, b: SpectrumExpr) -> SpectrumExpr:
    return SpectrumExpr("Wedge", 0, (a, b))


_TOKEN = re.compile(r"\s*(-?\d+|[A-Za-z0-9_]+|[(),])")


def parse_spectrum(text: str) -> SpectrumExpr:
    """Parse e.g. 'Wedge(Susp(2, Sigma(3)), Orbit(6))'."""
    toks, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise MalformedInput(f"unexpected character at position {pos}", text)
        toks.append(m.group(1))
        pos = m.end()
    i = 0

    def expect(t):
        nonlocal i
        if i >= len(toks) or toks[i] != t:
            raise MalformedInput(f"expected {t!r} at token {i}", text)
        i += 1

    def integer():
        nonlocal i
        if i >= len(toks) or not re.fullmatch(r"-?\d+", toks[i]):
            raise MalformedInput(f"expected an integer at token {i}", text)
        i += 1
        return int(toks[i - 1])

    def expr():
        nonlocal i
        if i >= len(toks):
            raise MalformedInput("unexpected end of expression", text)
        head = toks[i]
        i += 1
        if head == "S0":
            return S0()
        expect("(")
        if head in ("Sigma", "Orbit"):
            n = integer()
            expect(")")
            return Sigma(n) if head == "Sigma" else Orbit(n)
        if head == "Susp":
            k = integer()
            expect(",")
            e = expr()
            expect(")")
            return Susp(k, e)
        if head == "Wedge":
            a = expr()
            expect(",")
            b = expr()
            expect(")")
            return Wedge(a, b)
        raise MalformedInput(f"unknown constructor {head!r}", text)

    e = expr()
    if i != len(toks):
        raise MalformedInput(f"trailing input at token {i}", text)
    return e


def divisors(n: int) -> list[int]:
    return [m for m in range(1, n + 1) if n % m == 0]


def pi_A_summands(e: SpectrumExpr) -> list[EffObj]:
    """pi_A as a list of indecomposable summands."""
    if e.kind == "S0":
        return [ca.unit()]
    if e.kind == "Sigma":
        return [ca.sigma(e.n)]
    if e.kind == "Orbit":
        return [ca.sigma(m) for m in divisors(e.n)]
    if e.kind == "Susp":
        return [s.shift(e.n) for s in pi_A_summands(e.args[0])]
    return pi_A_summands(e.args[0]) + pi_A_summands(e.args[1])


def pi_A(e: SpectrumExpr) -> EffObj:
    parts = pi_A_summands(e)
    return ca.validate(ca.direct_sum(*parts)) if len(parts) != 1 else parts[0]


# --------------------------------------------------------------------------
# injective objects and resolutions


def piece_degrees(w: int, e: int, order: int = 0) -> int | None:
    """j with c^{-j} w in degree e, if such a nonzero element exists."""
    if (e - w) % 2:
        return None
    j = (e - w) // 2
    if j < 1 or (order and j > order):
        return None
    return j


@dataclass
class InjObj:
    vertex: GradedVS                              # e(V) part
    pieces: dict = field(default_factory=dict)    # component -> tuple of w-degrees

    def at(self, n) -> tuple[int, ...]:
        if n == TAIL:
            return self.pieces.get(TAIL, ())
        return self.pieces.get(n, self.pieces.get(TAIL, ()))

    def indices(self) -> list[int]:
        return sorted(k for k in self.pieces if k != TAIL)

    def is_zero(self) -> bool:
        return not len(self.vertex) and not any(self.pieces.values())

    def describe(self) -> str:
        parts = []
        if len(self.vertex):
            parts.append(f"e({self.vertex})")
        for n in self.indices() + [TAIL]:
            ws = self.at(n)
            if ws and (n == TAIL or ws != self.at(TAIL)):
                where = "every other n" if n == TAIL and self.indices() else ("every n" if n == TAIL else f"n={n}")
                parts.append(" + ".join(f"T<{w + 2}>" for w in ws) + f" [{where}]")
        return " + ".join(parts) or "0"


@dataclass
class InjRes:
    """0 -> x -> I0 -> I1 -> 0 with all maps in Laurent coordinates.

    emb_vertex: U -> V0; emb[n]: N_n -> pieces0 (the part into Laurent ⊗ V0 is
    forced to be (1 ⊗ emb_vertex) beta). psi_vertex: V0 -> V1;
    L[n]: Laurent ⊗ V0 -> pieces1; P[n]: pieces0 -> pieces1.
    """

    obj: EffObj
    I0: InjObj
    I1: InjObj
    emb_vertex: linalg.Matrix
    emb: dict
    psi_vertex: linalg.Matrix
    L: dict
    P: dict
    window: tuple[int, int] = (-10, 10)

    def components(self) -> list:
        return sorted(set(self.obj.exc) | set(self.I0.indices()) | set(self.I1.indices())) + [TAIL]

    def length(self) -> int:
        return 2


def _get(d: dict, n):
    return d[n] if n in d else d[TAIL]


def _check_window(x: EffObj, window) -> None:
    lo, hi = window
    need_lo, need_hi = lo, hi
    for n in x.indices() + [TAIL]:
        for d, k in x.comp(n).module.torsion():
            need_lo = min(need_lo, d - 2 * (k - 1))
            need_hi = max(need_hi, d)
    if (need_lo, need_hi) != (lo, hi):
        raise WindowTooSmall(f"torsion lies outside the window {lo}:{hi}", (need_lo, need_hi))


def inj_resolve(x: EffObj, window=(-10, 10)) -> InjRes:
    """The standard two-term injective resolution."""
    x = ca.validate(x)
    _check_window(x, window)
    U = x.vertex
    p0, p1, emb, L, P = {}, {}, {}, {}, {}
    for n in x.indices() + [TAIL]:
        c = x.comp(n)
        mod = c.module
        free = c.free_columns()
        tors = mod.torsion_indices()
        p0[n] = tuple(mod.deg(i) - 2 * mod.order(i) for i in tors)
        p1[n] = tuple(mod.deg(j) for j in free) + tuple(mod.deg(i) for i in tors)
        e = linalg.zeros(len(tors), len(mod))
        for t, i in enumerate(tors):
            e[t][i] = Fraction(1)
        emb[n] = e
        binv = linalg.inverse([[c.beta[u][j] for j in free] for u in range(len(U))]) if free else []
        Ln = linalg.zeros(len(p1[n]), len(U))
        for a in range(len(free)):
            Ln[a] = list(binv[a])
        L[n] = Ln
        Pn = linalg.zeros(len(p1[n]), len(tors))
        for t in range(len(tors)):
            Pn[len(free) + t][t] = Fraction(1)
        P[n] = Pn
    res = InjRes(x, InjObj(U, p0), InjObj(GradedVS(), p1), linalg.identity(len(U)), emb,
                 [], L, P, tuple(window))
    return res


def pad(res: InjRes, vertex: GradedVS = GradedVS(), pieces: Mapping | None = None) -> InjRes:
    """Add J -> J (identity) to both terms; gives another valid resolution."""
    pieces = dict(pieces or {})
    V0, V1 = res.I0.vertex, res.I1.vertex
    # padded vertices are indexed positionally (old basis first), not by degree
    nV0 = GradedVS(V0.degrees + vertex.degrees)
    nV1 = GradedVS(V1.degrees + vertex.degrees)
    ev = [list(r) for r in res.emb_vertex] + [[Fraction(0)] * len(res.obj.vertex) for _ in vertex.degrees]
    pv = linalg.zeros(len(nV1), len(nV0))
    for i, r in enumerate(res.psi_vertex):
        for j, v in enumerate(r):
            pv[i][j] = v
    for k in range(len(vertex)):
        pv[len(V1) + k][len(V0) + k] = Fraction(1)
    comps = sorted(set(res.components()) - {TAIL} | {k for k in pieces if k != TAIL}) + [TAIL]
    p0, p1, emb, L, P = {}, {}, {}, {}, {}
    for n in comps:
        extra = tuple(pieces.get(n, pieces.get(TAIL, ())) if n != TAIL else pieces.get(TAIL, ()))
        a0, a1 = res.I0.at(n), res.I1.at(n)
        p0[n], p1[n] = a0 + extra, a1 + extra
        en = _get(res.emb, n) if n in res.emb or TAIL in res.emb else []
        ncols = len(res.obj.comp(n).module)
        emb[n] = [list(r) for r in en] + [[Fraction(0)] * ncols for _ in extra]
        Ln = linalg.zeros(len(p1[n]), len(nV0))
        for i, r in enumerate(_get(res.L, n)):
            for j, v in enumerate(r):
                Ln[i][j] = v
        L[n] = Ln
        Pn = linalg.zeros(len(p1[n]), len(p0[n]))
        for i, r in enumerate(_get(res.P, n)):
            for j, v in enumerate(r):
                Pn[i][j] = v
        for k in range(len(extra)):
            Pn[len(a1) + k][len(a0) + k] = Fraction(1)
        P[n] = Pn
    out = InjRes(res.obj, InjObj(nV0, p0), InjObj(nV1, p1), ev, emb, pv, L, P, res.window)
    return out


# --------------------------------------------------------------------------
# degreewise checks


def _laurent_basis(V: GradedVS, e: int) -> list[int]:
    return [u for u, d in enumerate(V.degrees) if (d - e) % 2 == 0]


def _piece_basis(ws: tuple[int, ...], e: int) -> list[int]:
    return [p for p, w in enumerate(ws) if piece_degrees(w, e) is not None]


@dataclass
class ExactnessReport:
    window: tuple[int, int]
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_exact(res: InjRes, window=None) -> ExactnessReport:
    """Degreewise ranks of 0 -> x -> I0 -> I1 -> 0 over the window."""
    window = window or res.window
    rep = ExactnessReport(tuple(window))
    x = res.obj
    V0, V1 = res.I0.vertex, res.I1.vertex
    for e in range(window[0], window[1] + 1):
        # vertex
        a = [u for u, d in enumerate(x.vertex.degrees) if d == e]
        b = [u for u, d in enumerate(V0.degrees) if d == e]
        c = [u for u, d in enumerate(V1.degrees) if d == e]
        emb = [[res.emb_vertex[i][j] for j in a] for i in b]
        psi = [[res.psi_vertex[i][j] for j in b] for i in c] if c else []
        if not _short_exact(emb, psi, len(a), len(b), len(c)):
            rep.failures.append(("vertex", e))
        for n in res.components():
            comp = x.comp(n)
            mod = comp.module
            src = mod.basis(e)
            lb0 = _laurent_basis(V0, e)
            pb0 = _piece_basis(res.I0.at(n), e)
            lb1 = _laurent_basis(V1, e)
            pb1 = _piece_basis(res.I1.at(n), e)
            evb = linalg.matmul(res.emb_vertex, comp.beta_matrix(), inner=len(x.vertex), cols=len(mod)) \
                if len(V0) else []
            en = _get(res.emb, n)
            emb = [[evb[u][i] for i in src] for u in lb0] + [[en[p][i] for i in src] for p in pb0]
            Ln, Pn = _get(res.L, n), _get(res.P, n)
            psi = [[res.psi_vertex[v][u] for u in lb0] + [Fraction(0)] * len(pb0) for v in lb1]
            psi += [[Ln[p][u] for u in lb0] + [Pn[p][q] for q in pb0] for p in pb1]
            if not _short_exact(emb, psi, len(src), len(lb0) + len(pb0), len(lb1) + len(pb1)):
                rep.failures.append((n, e))
    return rep


def _short_exact(f, g, da, db, dc) -> bool:
    if da + dc != db:
        return False
    rf = linalg.rank(f) if da and db else 0
    rg = linalg.rank(g) if db and dc else 0
    if rf != da or rg != dc:
        return False
    if da and db and dc:
        if any(any(r) for r in linalg.matmul(g, f, inner=db, cols=da)):
            return False
    return True


# --------------------------------------------------------------------------
# Ext


def _piece_vars(mod: GMod, ws: tuple[int, ...], d: int) -> list[tuple[int, int, int]]:
    """Degree-d maps from mod into the pieces: (piece, generator, j)."""
    out = []
    for g, (a, k) in enumerate(mod.gens):
        for p, w in enumerate(ws):
            j = piece_degrees(w, a + d, k)
            if j is not None:
                out.append((p, g, j))
    return out


def ext1(x: EffObj, y: EffObj, window=(-10, 10), res: InjRes | None = None) -> CGVS:
    """coker(Hom(x, I0) -> Hom(x, I1)) degreewise."""
    res = res or inj_resolve(y, window)
    out = CGVS(tuple(window))
    comps = sorted(set(res.components()) - {TAIL} | set(x.exc)) + [TAIL]
    V0, V1 = res.I0.vertex, res.I1.vertex
    for d in range(window[0], window[1] + 1):
        phi0 = ca.vs_hom_variables(x.vertex, V0, d)
        phi1 = ca.vs_hom_variables(x.vertex, V1, d)
        # coordinates of the finite part: phi1, then piece vars per exceptional n
        blocks, offs, total = {}, {}, len(phi1)
        for n in comps:
            blocks[n] = (_piece_vars(x.comp(n).module, res.I1.at(n), d),
                         _piece_vars(x.comp(n).module, res.I0.at(n), d))
            if n != TAIL:
                offs[n] = total
                total += len(blocks[n][0])
        pos1 = {v: k for k, v in enumerate(phi1)}
        images, local_rank = [], {}
        # images of the hull parts
        for n in comps:
            v1, v0 = blocks[n]
            idx1 = {(p, g): k for k, (p, g, _) in enumerate(v1)}
            Pn = _get(res.P, n)
            vecs = []
            for (q, g, _) in v0:
                vec = [Fraction(0)] * len(v1)
                for p in range(len(res.I1.at(n))):
                    if Pn[p][q] and (p, g) in idx1:
                        vec[idx1[(p, g)]] += Pn[p][q]
                vecs.append(vec)
            local_rank[n] = linalg.rank(vecs) if vecs and v1 else 0
            if n != TAIL:
                for vec in vecs:
                    full = [Fraction(0)] * total
                    full[offs[n]:offs[n] + len(v1)] = vec
                    images.append(full)
        # images of vertex maps into e(V0)
        for (i, j) in phi0:
            phi = linalg.zeros(len(V0), len(x.vertex))
            phi[i][j] = Fraction(1)
            full = [Fraction(0)] * total
            for (a, b) in phi1:
                full[pos1[(a, b)]] = sum((res.psi_vertex[a][k] * phi[k][b] for k in range(len(V0))), Fraction(0))
            for n in comps:
                v1, _ = blocks[n]
                comp = x.comp(n)
                Ln = _get(res.L, n)
                vals = []
                for (p, g, _) in v1:
                    s = Fraction(0)
                    if Ln[p][i]:
                        s = Ln[p][i] * comp.beta[j][g] if len(x.vertex) else Fraction(0)
                    vals.append(s)
                if n == TAIL:
                    if any(vals):
                        raise NotEffective("vertex maps reach every component; Ext is not a finite pattern")
                    continue
                full[offs[n]:offs[n] + len(v1)] = vals
            images.append(full)
        rk = linalg.rank(images) if images and total else 0
        out.global_[d] = len(phi1) - (rk - sum(local_rank[n] for n in comps if n != TAIL))
        for n in comps:
            dim = len(blocks[n][0]) - local_rank[n]
            if n == TAIL:
                out.tail[d] = dim
            else:
                out.exceptional.setdefault(n, {})[d] = dim
    return out.normalize()


# --------------------------------------------------------------------------
# injectivity probes


def extends(i: Mor, res_term: InjObj, d: int) -> bool:
    """Every degree-d map A -> I extends along the monomorphism i: A -> B."""
    A, B = i.src, i.tgt
    # vertex part: maps U_A -> V extend along the injective vertex map
    for (a, b) in ca.vs_hom_variables(A.vertex, res_term.vertex, d):
        unknowns = ca.vs_hom_variables(B.vertex, res_term.vertex, d)
        target = linalg.zeros(len(res_term.vertex), len(A.vertex))
        target[a][b] = Fraction(1)
        if not _solve_ext(unknowns, lambda g: linalg.matmul(g, i.phi, inner=len(B.vertex), cols=len(A.vertex)),
                          target, len(res_term.vertex), len(B.vertex)):
            return False
    comps = sorted(set(i.indices()) | set(res_term.indices())) + [TAIL]
    for n in comps:
        ws = res_term.at(n)
        ma, mb = A.comp(n).module, B.comp(n).module
        th = i.at(n)
        va = _piece_vars(ma, ws, d)
        vb = _piece_vars(mb, ws, d)
        ia = {(p, g): k for k, (p, g, _) in enumerate(va)}
        # matrix of g |-> g ∘ theta in piece coordinates
        cols = []
        for (p, gb, _) in vb:
            col = [Fraction(0)] * len(va)
            for ga in range(len(ma)):
                if th.mat[gb][ga] and (p, ga) in ia:
                    col[ia[(p, ga)]] += th.mat[gb][ga]
            cols.append(col)
        M = linalg.transpose(cols, len(va)) if cols else [[] for _ in va]
        for k in range(len(va)):
            e = [Fraction(int(t == k)) for t in range(len(va))]
            if linalg.solve(M, e, len(vb)) is None:
                return False
    return True


def _solve_ext(unknowns, compose, target, rows, cols) -> bool:
    vecs = []
    for (a, b) in unknowns:
        g = linalg.zeros(rows, cols)
        g[a][b] = Fraction(1)
        vecs.append([x for r in compose(g) for x in r])
    flat = [x for r in target for x in r]
    M = linalg.transpose(vecs, len(flat)) if vecs else [[] for _ in flat]
    return linalg.solve(M, flat, len(vecs)) is not None


# --------------------------------------------------------------------------
# Adams tables


@dataclass
class AdamsTable:
    window: tuple[int, int]
    hom: CGVS
    ext: CGVS

    def total(self) -> CGVS:
        return self.hom + self.ext

    def rows(self) -> list[tuple[int, str, str, str]]:
        t = self.total()
        return [(d, self.hom.render_degree(d), self.ext.render_degree(d), t.render_degree(d))
                for d in range(self.window[0], self.window[1] + 1)]

    def render(self) -> str:
        lines = [f"{'deg':>4} | {'Hom':<24} | {'Ext':<24} | Total"]
        for d, h, e, t in self.rows():
            lines.append(f"{d:>4} | {h:<24} | {e:<24} | {t}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {"window": list(self.window), "hom": self.hom.to_json(), "ext": self.ext.to_json(),
                "total": self.total().to_json()}


def maps_table(x: SpectrumExpr, y: SpectrumExpr, window=(-10, 10)) -> AdamsTable:
    """[X, Y]_d = Hom(pi X, pi Y)_d ⊕ Ext(pi ΣX, pi Y)_d (the sequence splits)."""
    px, py = pi_A(x), pi_A(y)
    hom = ca.hom_group(px, py, window)
    ext = ext1(pi_A(Susp(1, x)), py, window)
    return AdamsTable(tuple(window), hom, ext)
