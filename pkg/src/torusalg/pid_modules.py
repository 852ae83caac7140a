"""Finitely generated graded modules over Q[c], deg c = -2.

A module is a direct sum of cyclic pieces Q[c]<d> (order 0) or
Q[c]/(c^k)<d> (order k). A homogeneous map between two such sums is a
rational matrix: entry (i, j) is the coefficient q in f(g_j) = sum q c^m h_i,
the exponent m being forced by the degrees. Entries whose forced exponent is
negative, fractional, or at least the order of the target piece are zero.
Multiplication by c acts as the identity on these coordinates, which is why
nearly everything reduces to linear algebra over Q.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .errors import MalformedInput

Cyclic = tuple[int, int]  # (generator degree, order); order 0 means free


def forced_exponent(target_deg: int, elem_deg: int) -> int | None:
    """c-power m with deg(c^m g) = elem_deg for g in target_deg, if integral."""
    diff = target_deg - elem_deg
    if diff % 2:
        return None
    return diff // 2


@dataclass(frozen=True)
class GMod:
    """Graded Q[c]-module given as a tuple of cyclic summands."""

    gens: tuple[Cyclic, ...] = ()

    @classmethod
    def of(cls, free: Iterable[int] = (), torsion: Iterable[tuple[int, int]] = ()) -> "GMod":
        gens = [(int(d), 0) for d in free]
        for d, k in torsion:
            if k < 1:
                raise MalformedInput(f"torsion order must be >= 1, got {k}")
            gens.append((int(d), int(k)))
        return cls(tuple(gens))

    def __len__(self) -> int:
        return len(self.gens)

    def deg(self, i: int) -> int:
        return self.gens[i][0]

    def order(self, i: int) -> int:
        return self.gens[i][1]

    def allowed(self, i: int, e: int) -> int | None:
        """Exponent m such that c^m g_i is a nonzero basis element of degree e."""
        d, k = self.gens[i]
        m = forced_exponent(d, e)
        if m is None or m < 0 or (k and m >= k):
            return None
        return m

    def basis(self, e: int) -> list[int]:
        return [i for i in range(len(self.gens)) if self.allowed(i, e) is not None]

    def dim(self, e: int) -> int:
        return len(self.basis(e))

    def free_degrees(self) -> list[int]:
        return sorted(d for d, k in self.gens if k == 0)

    def free_indices(self) -> list[int]:
        return [i for i, (_, k) in enumerate(self.gens) if k == 0]

    def torsion_indices(self) -> list[int]:
        return [i for i, (_, k) in enumerate(self.gens) if k]

    def torsion(self) -> list[tuple[int, int]]:
        return sorted((d, k) for d, k in self.gens if k)

    def key(self) -> tuple:
        """Isomorphism invariant: the sorted multiset of cyclic summands."""
        return (tuple(self.free_degrees()), tuple(self.torsion()))

    def is_zero(self) -> bool:
        return not self.gens

    def is_torsion(self) -> bool:
        return all(k for _, k in self.gens)

    def shift(self, s: int) -> "GMod":
        return GMod(tuple((d + s, k) for d, k in self.gens))

    def __add__(self, other: "GMod") -> "GMod":
        return GMod(self.gens + other.gens)

    def degree_span(self) -> tuple[int, int] | None:
        """Range of degrees where the torsion part is nonzero, plus free tops."""
        if not self.gens:
            return None
        lo = min(d - 2 * (k - 1) if k else d for d, k in self.gens)
        hi = max(d for d, _ in self.gens)
        return lo, hi

    def to_json(self) -> dict:
        return {"free": self.free_degrees(), "torsion": [list(t) for t in self.torsion()]}

    @classmethod
    def from_json(cls, data: dict) -> "GMod":
        try:
            return cls.of(data.get("free", []), [tuple(t) for t in data.get("torsion", [])])
        except (TypeError, ValueError) as exc:
            raise MalformedInput(f"bad module: {exc}") from exc

    def __str__(self) -> str:
        parts = [f"Q[c]<{d}>" if not k else (f"Q<{d}>" if k == 1 else f"Q[c]/c^{k}<{d}>")
                 for d, k in sorted(self.gens, key=lambda g: (g[1], g[0]))]
        return " + ".join(parts) if parts else "0"


def canonical(m: GMod) -> GMod:
    return GMod(tuple(sorted(m.gens, key=lambda g: (g[1], g[0]))))


class GMap:
    """Homogeneous Q[c]-linear map src -> tgt of a fixed degree."""

    __slots__ = ("src", "tgt", "degree", "mat")

    def __init__(self, src: GMod, tgt: GMod, degree: int, mat: Sequence[Sequence[Fraction]] | None = None,
                 check: bool = True):
        self.src = src
        self.tgt = tgt
        self.degree = degree
        if mat is None:
            mat = linalg.zeros(len(tgt), len(src))
        self.mat = [list(r) for r in mat]
        self._truncate()
        if check:
            self.check()

    def _truncate(self) -> None:
        for j, (s, _) in enumerate(self.src.gens):
            e = s + self.degree
            for i in range(len(self.tgt)):
                if self.mat[i][j] and self.tgt.allowed(i, e) is None:
                    self.mat[i][j] = Fraction(0)

    def check(self) -> None:
        for j, (s, k) in enumerate(self.src.gens):
            if not k:
                continue
            for i, (t, kt) in enumerate(self.tgt.gens):
                if self.mat[i][j]:
                    m = forced_exponent(t, s + self.degree)
                    if kt == 0 or m + k < kt:
                        raise MalformedInput(
                            f"map not well defined: torsion generator {j} (order {k}) "
                            f"sent to a non-torsion-killed element of summand {i}")

    @classmethod
    def zero(cls, src: GMod, tgt: GMod, degree: int = 0) -> "GMap":
        return cls(src, tgt, degree, check=False)

    @classmethod
    def identity(cls, m: GMod) -> "GMap":
        return cls(m, m, 0, linalg.identity(len(m)), check=False)

    def __matmul__(self, other: "GMap") -> "GMap":
        """Composition self ∘ other."""
        if other.tgt != self.src:
            raise ValueError("composition of incompatible maps")
        prod = linalg.matmul(self.mat, other.mat, inner=len(self.src), cols=len(other.src))
        return GMap(other.src, self.tgt, self.degree + other.degree, prod, check=False)

    def __add__(self, other: "GMap") -> "GMap":
        assert self.src == other.src and self.tgt == other.tgt and self.degree == other.degree
        return GMap(self.src, self.tgt, self.degree,
                    [[a + b for a, b in zip(r, s)] for r, s in zip(self.mat, other.mat)], check=False)

    def scale(self, q) -> "GMap":
        q = Fraction(q)
        return GMap(self.src, self.tgt, self.degree, [[q * a for a in r] for r in self.mat], check=False)

    def __neg__(self) -> "GMap":
        return self.scale(-1)

    def __sub__(self, other: "GMap") -> "GMap":
        return self + (-other)

    def __eq__(self, other) -> bool:
        return (isinstance(other, GMap) and self.src == other.src and self.tgt == other.tgt
                and self.degree == other.degree and self.mat == other.mat)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.mat)

    def apply(self, vec: Sequence[Fraction], e: int) -> list[Fraction]:
        """Image of an element of degree e given by coefficients on src generators."""
        out = [Fraction(0)] * len(self.tgt)
        for j, x in enumerate(vec):
            if x:
                for i in range(len(self.tgt)):
                    if self.mat[i][j]:
                        out[i] += self.mat[i][j] * x
        te = e + self.degree
        return [v if self.tgt.allowed(i, te) is not None else Fraction(0) for i, v in enumerate(out)]

    def matrix_in_degree(self, e: int) -> Matrix:
        """The Q-linear map src_e -> tgt_{e+degree} in the standard bases."""
        sb = self.src.basis(e)
        tb = self.tgt.basis(e + self.degree)
        return [[self.mat[i][j] for j in sb] for i in tb]

    def to_json(self) -> dict:
        return {"src": self.src.to_json(), "tgt": self.tgt.to_json(), "degree": self.degree,
                "matrix": [[format_mono(self.mat[i][j], forced_exponent(self.tgt.deg(i),
                                                                      self.src.deg(j) + self.degree))
                            for j in range(len(self.src))] for i in range(len(self.tgt))]}

    def __repr__(self) -> str:
        return f"GMap({self.src} -> {self.tgt}, deg {self.degree}, {self.mat})"


Matrix = linalg.Matrix


# --------------------------------------------------------------------------
# polynomial strings


_TERM = re.compile(r"\s*([+-]?)\s*([0-9]+(?:/[0-9]+)?)?\s*(c(?:\^(-?[0-9]+))?)?\s*")


def parse_poly(s: str) -> dict[int, Fraction]:
    """Parse strings such as '3c^2-1/2c' into {exponent: coefficient}."""
    s = s.strip()
    if not s:
        raise MalformedInput("empty polynomial")
    out: dict[int, Fraction] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise MalformedInput(f"cannot parse polynomial {s!r} at position {pos}")
        sign = -1 if m.group(1) == "-" else 1
        coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        exp = 0 if m.group(3) is None else int(m.group(4) or 1)
        out[exp] = out.get(exp, Fraction(0)) + sign * coef
        pos = m.end()
    return {k: v for k, v in out.items() if v}


def format_mono(q: Fraction, exp: int | None) -> str:
    if not q:
        return "0"
    coef = str(q) if q.denominator != 1 else str(q.numerator)
    if not exp:
        return coef
    if coef == "1":
        coef = ""
    elif coef == "-1":
        coef = "-"
    return f"{coef}c" if exp == 1 else f"{coef}c^{exp}"


def parse_mono(s: str, expected_exp: int | None, locus: str) -> Fraction:
    poly = parse_poly(s)
    if not poly:
        return Fraction(0)
    if len(poly) > 1 or expected_exp is None or list(poly)[0] != expected_exp:
        raise MalformedInput(f"entry {s!r} is inconsistent with the grading "
                             f"(expected a multiple of c^{expected_exp})", locus)
    return poly[expected_exp]


# --------------------------------------------------------------------------
# Smith normal form over the graded PID


@dataclass
class Presentation:
    """coker of a homogeneous matrix between free modules.

    gens: degrees of the free generators; rel_degrees: degree of each relation;
    rel: matrix (rows = gens, columns = relations) of coefficients with forced
    c-powers.
    """

    gens: list[int]
    rel_degrees: list[int]
    rel: Matrix

    def __post_init__(self):
        if len(self.rel) != len(self.gens) or any(len(r) != len(self.rel_degrees) for r in self.rel):
            raise MalformedInput("relation matrix has the wrong shape")
        for i, g in enumerate(self.gens):
            for j, r in enumerate(self.rel_degrees):
                if self.rel[i][j]:
                    m = forced_exponent(g, r)
                    if m is None or m < 0:
                        raise MalformedInput(f"relation {j} entry {i} is inconsistent with the grading",
                                             f"rel[{i}][{j}]")

    @classmethod
    def from_polys(cls, gens: list[int], rel_degrees: list[int], rel: list[list[str]]) -> "Presentation":
        mat = []
        for i, g in enumerate(gens):
            row = []
            for j, r in enumerate(rel_degrees):
                m = forced_exponent(g, r)
                row.append(parse_mono(rel[i][j], m if m is not None and m >= 0 else None, f"rel[{i}][{j}]"))
            mat.append(row)
        return cls(list(gens), list(rel_degrees), mat)

    @classmethod
    def of_module(cls, m: GMod) -> "Presentation":
        """Standard presentation of a cyclic sum: torsion relations only."""
        rels = [(i, d - 2 * k) for i, (d, k) in enumerate(m.gens) if k]
        mat = linalg.zeros(len(m), len(rels))
        for j, (i, _) in enumerate(rels):
            mat[i][j] = Fraction(1)
        return cls([d for d, _ in m.gens], [r for _, r in rels], mat)


@dataclass
class SmithResult:
    rank: int
    row_degrees: list[int]       # degrees of the new free basis (rows)
    col_degrees: list[int]       # degrees of the new relation basis (columns)
    pivots: list[tuple[Fraction, int]]  # (coefficient, c-exponent) on the diagonal
    P: Matrix                    # new coordinates = P @ old coordinates
    Pinv: Matrix                 # new basis vectors as columns in old coordinates
    Q: Matrix                    # new relation basis as columns in old relation coordinates


def smith(gens: Sequence[int], rel_degrees: Sequence[int], rel: Sequence[Sequence[Fraction]],
          track_cols: bool = False) -> SmithResult:
    """Graded Smith normal form of a homogeneous matrix over Q[c]."""
    a = linalg.copy(rel)
    r, s = len(gens), len(rel_degrees)
    rd = list(gens)
    cd = list(rel_degrees)
    P = linalg.identity(r)
    Pinv = linalg.identity(r)
    Q = linalg.identity(s) if track_cols else []
    pivots: list[tuple[Fraction, int]] = []
    k = 0
    while k < min(r, s):
        best = None
        for i in range(k, r):
            for j in range(k, s):
                if a[i][j]:
                    m = (rd[i] - cd[j]) // 2
                    if best is None or m < best[0]:
                        best = (m, i, j)
        if best is None:
            break
        m, pi, pj = best
        if pi != k:
            a[k], a[pi] = a[pi], a[k]
            P[k], P[pi] = P[pi], P[k]
            for row in Pinv:
                row[k], row[pi] = row[pi], row[k]
            rd[k], rd[pi] = rd[pi], rd[k]
        if pj != k:
            for row in a:
                row[k], row[pj] = row[pj], row[k]
            if track_cols:
                for row in Q:
                    row[k], row[pj] = row[pj], row[k]
            cd[k], cd[pj] = cd[pj], cd[k]
        p = a[k][k]
        for i in range(r):
            if i != k and a[i][k]:
                t = a[i][k] / p
                ai, ak = a[i], a[k]
                for j in range(k, s):
                    if ak[j]:
                        ai[j] -= t * ak[j]
                Pi, Pk = P[i], P[k]
                for j in range(r):
                    if Pk[j]:
                        Pi[j] -= t * Pk[j]
                for row in Pinv:
                    if row[i]:
                        row[k] += t * row[i]
        for j in range(k + 1, s):
            if a[k][j]:
                t = a[k][j] / p
                for i in range(r):
                    if a[i][k]:
                        a[i][j] -= t * a[i][k]
                if track_cols:
                    for row in Q:
                        if row[k]:
                            row[j] -= t * row[k]
        pivots.append((p, m))
        k += 1
    return SmithResult(k, rd, cd, pivots, P, Pinv, Q)


@dataclass
class Canonicalized:
    module: GMod
    to_canon: Matrix    # rows = canonical generators, columns = original free generators
    from_canon: Matrix  # rows = original free generators, columns = canonical generators
    src_degrees: list[int]


def canonicalize(p: Presentation) -> Canonicalized:
    """Decompose coker(p) into cyclic summands, with change-of-basis data."""
    res = smith(p.gens, p.rel_degrees, p.rel)
    keep: list[tuple[int, Cyclic]] = []
    for i, d in enumerate(res.row_degrees):
        if i < res.rank:
            m = res.pivots[i][1]
            if m == 0:
                continue
            keep.append((i, (d, m)))
        else:
            keep.append((i, (d, 0)))
    keep.sort(key=lambda t: (t[1][1], t[1][0]))
    module = GMod(tuple(c for _, c in keep))
    to_canon = [list(res.P[i]) for i, _ in keep]
    from_canon = [[res.Pinv[r][i] for i, _ in keep] for r in range(len(p.gens))]
    return Canonicalized(module, to_canon, from_canon, list(p.gens))


def smith_canonicalize(p: Presentation) -> GMod:
    return canonicalize(p).module


# --------------------------------------------------------------------------
# kernels, cokernels, lifting


def _lift_matrix(m: Matrix, src: GMod, tgt: GMod, degree: int) -> GMap:
    return GMap(src, tgt, degree, m, check=False)


def cokernel(f: GMap) -> tuple[GMod, GMap]:
    """coker f with the projection tgt -> coker."""
    c, proj, _ = cokernel_with_section(f)
    return c, proj


def cokernel_with_section(f: GMap) -> tuple[GMod, GMap, Matrix]:
    """As `cokernel`, plus representatives of the cokernel generators in tgt.

    The third value has rows = tgt generators, columns = coker generators.
    """
    tgt = f.tgt
    rel_deg = [d + f.degree for d, _ in f.src.gens]
    cols = [[f.mat[i][j] for i in range(len(tgt))] for j in range(len(f.src))]
    for i, (d, k) in enumerate(tgt.gens):
        if k:
            rel_deg.append(d - 2 * k)
            v = [Fraction(0)] * len(tgt)
            v[i] = Fraction(1)
            cols.append(v)
    rel = linalg.transpose(cols, len(tgt)) if cols else [[] for _ in range(len(tgt))]
    can = canonicalize(Presentation([d for d, _ in tgt.gens], rel_deg, rel))
    proj = GMap(tgt, can.module, 0, can.to_canon, check=False)
    return can.module, proj, can.from_canon


def kernel(f: GMap) -> tuple[GMod, GMap]:
    """ker f with the inclusion ker -> src."""
    src, tgt = f.src, f.tgt
    ns = len(src)
    # Phi = [f | torsion relations of tgt] between free modules
    col_deg = [d for d, _ in src.gens]
    cols = [[f.mat[i][j] for i in range(len(tgt))] for j in range(ns)]
    for i, (d, k) in enumerate(tgt.gens):
        if k:
            col_deg.append(d - 2 * k - f.degree)
            v = [Fraction(0)] * len(tgt)
            v[i] = Fraction(1)
            cols.append(v)
    row_deg = [d - f.degree for d, _ in tgt.gens]
    rel = linalg.transpose(cols, len(tgt)) if cols else [[] for _ in range(len(tgt))]
    res = smith(row_deg, col_deg, rel, track_cols=True)
    kgens: list[int] = []
    kvecs: list[list[Fraction]] = []
    for j in range(res.rank, len(col_deg)):
        kgens.append(res.col_degrees[j])
        kvecs.append([res.Q[t][j] for t in range(ns)])
    # relations: torsion relations of src expressed in the kernel basis
    rel_deg, zcols = [], []
    for j, (d, k) in enumerate(src.gens):
        if not k:
            continue
        target = [Fraction(0)] * ns
        target[j] = Fraction(1)
        rdeg = d - 2 * k
        unknowns = [l for l, kd in enumerate(kgens)
                    if (m := forced_exponent(kd, rdeg)) is not None and m >= 0]
        sysm = [[kvecs[l][t] for l in unknowns] for t in range(ns)]
        sol = linalg.solve(sysm, target, len(unknowns))
        if sol is None:
            raise AssertionError("torsion relation not in kernel lattice")
        z = [Fraction(0)] * len(kgens)
        for l, v in zip(unknowns, sol):
            z[l] = v
        rel_deg.append(rdeg)
        zcols.append(z)
    rel = linalg.transpose(zcols, len(kgens)) if zcols else [[] for _ in range(len(kgens))]
    can = canonicalize(Presentation(kgens, rel_deg, rel))
    kv = linalg.transpose(kvecs, ns) if kvecs else [[] for _ in range(ns)]
    incl = linalg.matmul(kv, can.from_canon, inner=len(kgens), cols=len(can.module))
    return can.module, GMap(can.module, src, 0, incl, check=False)


def image(f: GMap) -> tuple[GMod, GMap]:
    """im f with its inclusion into tgt."""
    c, proj = cokernel(f)
    return kernel(proj)


def factor_through(g: GMap, incl: GMap) -> GMap:
    """h with incl ∘ h = g, for incl injective; raises if g does not factor."""
    k = incl.src
    deg = g.degree - incl.degree
    mat = linalg.zeros(len(k), len(g.src))
    for j, (s, _) in enumerate(g.src.gens):
        e = s + deg
        unknowns = k.basis(e)
        rows = g.tgt.basis(e + incl.degree)
        sysm = [[incl.mat[i][l] for l in unknowns] for i in rows]
        rhs = [g.mat[i][j] for i in rows]
        sol = linalg.solve(sysm, rhs, len(unknowns))
        if sol is None:
            raise ValueError("map does not factor through the given inclusion")
        for l, v in zip(unknowns, sol):
            mat[l][j] = v
    return GMap(g.src, k, deg, mat, check=False)


def comp_ker_coker(f: GMap) -> tuple[GMod, GMod, GMap, GMap]:
    k, incl = kernel(f)
    c, proj = cokernel(f)
    return k, c, incl, proj


def homology(d: GMap) -> tuple[GMod, GMap, GMap]:
    """H of a square-zero self map d of degree -1.

    Returns (H, cycles inclusion Z -> M, projection Z -> H) where Z = ker d.
    """
    z, incl = kernel(d)
    dz = factor_through(d, incl)
    h, proj = cokernel(dz)
    return h, incl, proj


def is_iso(f: GMap) -> bool:
    k, _ = kernel(f)
    c, _ = cokernel(f)
    return k.is_zero() and c.is_zero()


# --------------------------------------------------------------------------
# Hom, tensor, Tor, localization


def hom_variables(m: GMod, n: GMod, d: int) -> list[tuple[int, int]]:
    """Matrix positions (i, j) that may be nonzero in a degree-d map m -> n."""
    out = []
    for j, (s, k) in enumerate(m.gens):
        for i, (t, kt) in enumerate(n.gens):
            e = forced_exponent(t, s + d)
            if e is None or e < 0 or (kt and e >= kt):
                continue
            if k and (kt == 0 or e + k < kt):
                continue
            out.append((i, j))
    return out


def hom_space(m: GMod, n: GMod, d: int) -> list[GMap]:
    """Q-basis of degree-d homomorphisms m -> n."""
    out = []
    for i, j in hom_variables(m, n, d):
        mat = linalg.zeros(len(n), len(m))
        mat[i][j] = Fraction(1)
        out.append(GMap(m, n, d, mat, check=False))
    return out


@dataclass(frozen=True)
class HomModule:
    module: GMod
    pairs: tuple[tuple[int, int, int], ...]  # (source gen j, target gen i, c-power of generator map)

    def generator_map(self, p: int, src: GMod, tgt: GMod) -> GMap:
        j, i, e = self.pairs[p]
        mat = linalg.zeros(len(tgt), len(src))
        mat[i][j] = Fraction(1)
        return GMap(src, tgt, self.module.deg(p), mat, check=False)


def hom_module(m: GMod, n: GMod) -> HomModule:
    """Graded Hom_{Q[c]}(m, n) as a cyclic sum; one summand per pair of summands."""
    gens, pairs = [], []
    for j, (a, kj) in enumerate(m.gens):
        for i, (b, ki) in enumerate(n.gens):
            if kj and not ki:
                continue
            if not kj:
                e, order = 0, ki
            else:
                e, order = max(0, ki - kj), min(ki, kj)
            gens.append((b - a - 2 * e, order))
            pairs.append((j, i, e))
    return HomModule(GMod(tuple(gens)), tuple(pairs))


def comp_hom(m: GMod, n: GMod) -> GMod:
    return canonical(hom_module(m, n).module)


def tensor_module(m: GMod, n: GMod) -> GMod:
    """m ⊗ n with summands indexed by pairs (i, j) in lexicographic order."""
    gens = []
    for a, ka in m.gens:
        for b, kb in n.gens:
            if ka and kb:
                k = min(ka, kb)
            else:
                k = ka or kb
            gens.append((a + b, k))
    return GMod(tuple(gens))


def comp_tensor(m: GMod, n: GMod) -> GMod:
    return canonical(tensor_module(m, n))


def comp_tor(m: GMod, n: GMod) -> GMod:
    gens = []
    for a, ka in m.gens:
        for b, kb in n.gens:
            if ka and kb:
                gens.append((a + b - 2 * max(ka, kb), min(ka, kb)))
    return canonical(GMod(tuple(gens)))


def tensor_maps(f: GMap, g: GMap, koszul: bool = True) -> GMap:
    """f ⊗ g on the lexicographic tensor bases, with (f⊗g)(x⊗y) = ±f(x)⊗g(y)."""
    src = tensor_module(f.src, g.src)
    tgt = tensor_module(f.tgt, g.tgt)
    ns2, nt2 = len(g.src), len(g.tgt)
    mat = linalg.zeros(len(tgt), len(src))
    for j1, (a, _) in enumerate(f.src.gens):
        sign = -1 if (koszul and g.degree % 2 and a % 2) else 1
        for i1 in range(len(f.tgt)):
            x = f.mat[i1][j1]
            if not x:
                continue
            for j2 in range(ns2):
                for i2 in range(nt2):
                    y = g.mat[i2][j2]
                    if y:
                        mat[i1 * nt2 + i2][j1 * ns2 + j2] += sign * x * y
    return GMap(src, tgt, f.degree + g.degree, mat, check=False)


def comp_localize(m: GMod) -> list[int]:
    """Shifts of the Laurent-free summands of c^{-1} m (torsion dies)."""
    return m.free_degrees()


def direct_sum_maps(fs: Sequence[GMap], src: GMod, tgt: GMod, degree: int,
                    src_offsets: Sequence[int], tgt_offsets: Sequence[int]) -> GMap:
    mat = linalg.zeros(len(tgt), len(src))
    for f, so, to in zip(fs, src_offsets, tgt_offsets):
        for i in range(len(f.tgt)):
            for j in range(len(f.src)):
                if f.mat[i][j]:
                    mat[to + i][so + j] = f.mat[i][j]
    return GMap(src, tgt, degree, mat, check=False)
