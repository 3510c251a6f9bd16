"""Finite abstract simplicial complexes and their rational cohomology.

Simplices are stored as strictly increasing tuples of vertex indices, so the
global vertex order fixes every orientation.  The coboundary of a d-cochain
evaluated on a (d+1)-simplex ``(v0, ..., v_{d+1})`` picks up the sign
``(-1)**i`` from the face that omits ``v_i``.

Relative cochains of a pair (K, A) are the cochains vanishing on A, i.e.
coordinates on the simplices of K that are not in A.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .errors import InputError
from .qlinalg import (
    RationalMatrix,
    hstack,
    image_basis,
    is_exact_at,
    kernel_basis,
    rank,
    rref,
    solve_matrix,
)

GradedDims = tuple[int, ...]
Simplex = tuple[int, ...]


@dataclass(frozen=True)
class SimplicialComplex:
    vertices: tuple[str, ...]
    simplices: tuple[tuple[Simplex, ...], ...]

    @property
    def dim(self) -> int:
        """Top simplex dimension; -1 for the empty complex."""
        return len(self.simplices) - 1

    def __len__(self) -> int:
        return sum(len(s) for s in self.simplices)

    def n_simplices(self, d: int) -> int:
        return len(self.simplices[d]) if 0 <= d < len(self.simplices) else 0

    def simplices_of(self, d: int) -> tuple[Simplex, ...]:
        return self.simplices[d] if 0 <= d < len(self.simplices) else ()

    @cached_property
    def _index(self) -> dict[Simplex, int]:
        return {s: i for layer in self.simplices for i, s in enumerate(layer)}

    @cached_property
    def _vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def index_of(self, s: Simplex) -> int:
        return self._index[s]

    def vertex_index(self, v: str) -> int:
        try:
            return self._vertex_index[v]
        except KeyError:
            raise InputError(f"unknown vertex {v!r}") from None

    def named(self, s: Simplex) -> tuple[str, ...]:
        return tuple(self.vertices[i] for i in s)

    def named_simplices(self) -> set[frozenset[str]]:
        return {frozenset(self.named(s)) for layer in self.simplices for s in layer}

    def contains_named(self, names: Iterable[str]) -> bool:
        try:
            s = tuple(sorted(self._vertex_index[v] for v in names))
        except KeyError:
            return False
        return s in self._index

    def facets(self) -> list[tuple[str, ...]]:
        """Maximal simplices, by vertex name."""
        cofaced = set()
        for layer in self.simplices[1:]:
            for s in layer:
                for f in combinations(s, len(s) - 1):
                    cofaced.add(f)
        return [self.named(s) for layer in self.simplices for s in layer if s not in cofaced]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(layer) for d, layer in enumerate(self.simplices))


def closure(facets: Iterable[Sequence[str]], vertices: Optional[Sequence[str]] = None) -> SimplicialComplex:
    """Smallest complex containing ``facets``.

    Vertex order is ``vertices`` when given (every listed vertex becomes a
    0-simplex), otherwise order of first appearance.
    """
    facets = [tuple(f) for f in facets]
    order = list(vertices) if vertices is not None else []
    if len(set(order)) != len(order):
        raise InputError("duplicate vertex in vertex list")
    seen = set(order)
    for f in facets:
        if not f:
            raise InputError("empty facet")
        if len(set(f)) != len(f):
            raise InputError(f"facet {f} repeats a vertex")
        for v in f:
            if v not in seen:
                if vertices is not None:
                    raise InputError(f"facet {f} uses unlisted vertex {v!r}")
                seen.add(v)
                order.append(v)
    idx = {v: i for i, v in enumerate(order)}
    layers: dict[int, set[Simplex]] = {}
    for i in range(len(order)):
        layers.setdefault(0, set()).add((i,))
    for f in facets:
        s = tuple(sorted(idx[v] for v in f))
        for k in range(1, len(s) + 1):
            bucket = layers.setdefault(k - 1, set())
            for face in combinations(s, k):
                bucket.add(face)
    top = max(layers) if layers else -1
    simplices = tuple(tuple(sorted(layers.get(d, ()))) for d in range(top + 1))
    return SimplicialComplex(tuple(str(v) for v in order), simplices)


def empty_complex() -> SimplicialComplex:
    return SimplicialComplex((), ())


def _from_named(names: Iterable[frozenset[str]], order: Sequence[str]) -> SimplicialComplex:
    """Complex from an already face-closed set of named simplices, keeping ``order``."""
    names = list(names)
    used = set().union(*names) if names else set()
    verts = tuple(v for v in order if v in used)
    idx = {v: i for i, v in enumerate(verts)}
    layers: dict[int, list[Simplex]] = {}
    for s in names:
        t = tuple(sorted(idx[v] for v in s))
        layers.setdefault(len(t) - 1, []).append(t)
    top = max(layers) if layers else -1
    return SimplicialComplex(verts, tuple(tuple(sorted(layers.get(d, []))) for d in range(top + 1)))


def is_subcomplex(a: SimplicialComplex, k: SimplicialComplex) -> bool:
    return all(k.contains_named(a.named(s)) for layer in a.simplices for s in layer)


def full_subcomplex(k: SimplicialComplex, keep: Iterable[str]) -> SimplicialComplex:
    keep = set(keep)
    names = [frozenset(k.named(s)) for layer in k.simplices for s in layer]
    return _from_named([s for s in names if s <= keep], k.vertices)


def vertex_link(k: SimplicialComplex, v: str) -> SimplicialComplex:
    """All simplices missing ``v`` whose join with ``v`` is in ``k``."""
    vi = k.vertex_index(v)
    out = set()
    for layer in k.simplices[1:]:
        for s in layer:
            if vi in s:
                out.add(frozenset(k.vertices[i] for i in s if i != vi))
    return _from_named(out, k.vertices)


def closed_star(k: SimplicialComplex, v: str) -> SimplicialComplex:
    vi = k.vertex_index(v)
    out = set()
    for layer in k.simplices:
        for s in layer:
            if vi in s:
                for r in range(1, len(s) + 1):
                    for f in combinations(s, r):
                        out.add(frozenset(k.named(f)))
    return _from_named(out, k.vertices)


def cone(base: SimplicialComplex, apex: str) -> SimplicialComplex:
    if apex in base.vertices:
        raise InputError(f"apex {apex!r} already a vertex of the base")
    names = {frozenset([apex])}
    for layer in base.simplices:
        for s in layer:
            n = frozenset(base.named(s))
            names.add(n)
            names.add(n | {apex})
    return _from_named(names, (apex,) + base.vertices)


def deleted_complex(k: SimplicialComplex, v: str) -> SimplicialComplex:
    """Full subcomplex on every vertex except ``v``."""
    k.vertex_index(v)
    return full_subcomplex(k, [w for w in k.vertices if w != v])


def pseudomanifold_defects(k: SimplicialComplex, dim: int) -> list[tuple[str, ...]]:
    """Simplices violating purity in ``dim`` or the two-cofacet rule; empty list means OK."""
    bad: list[tuple[str, ...]] = []
    if k.dim != dim:
        return [f for f in k.facets()]
    for f in k.facets():
        if len(f) != dim + 1:
            bad.append(f)
    if dim == 0:
        return bad
    count = {s: 0 for s in k.simplices_of(dim - 1)}
    for s in k.simplices_of(dim):
        for f in combinations(s, dim):
            count[f] += 1
    bad.extend(k.named(s) for s, c in count.items() if c != 2)
    return bad


def coboundary_matrix(k: SimplicialComplex, deg: int) -> RationalMatrix:
    """Matrix of the coboundary C^deg -> C^(deg+1)."""
    if deg < 0:
        return RationalMatrix.zeros(k.n_simplices(0), 0)
    return _coboundary(k, deg, k.simplices_of(deg), k.simplices_of(deg + 1))


def _coboundary(k: SimplicialComplex, deg: int, src: Sequence[Simplex], dst: Sequence[Simplex]) -> RationalMatrix:
    col = {s: j for j, s in enumerate(src)}
    data = [[0] * len(src) for _ in dst]
    for r, s in enumerate(dst):
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            j = col.get(face)
            if j is not None:
                data[r][j] = -1 if i % 2 else 1
    return RationalMatrix.from_rows(data, cols=len(src))


class CochainComplex:
    """Cochains of ``k`` vanishing on ``excluded``, with cohomology bases.

    For each degree we keep cocycle representatives ``reps[d]`` (columns)
    whose classes form a basis of H^d, and :meth:`classify` turns cocycles
    into coordinates in that basis.
    """

    def __init__(self, k: SimplicialComplex, excluded: frozenset = frozenset()):
        self.k = k
        self.basis = [tuple(s for s in k.simplices_of(d) if s not in excluded) for d in range(k.dim + 1)]
        top = k.dim
        self.delta = [
            _coboundary(k, d, self.basis[d], self.basis[d + 1] if d + 1 <= top else ())
            for d in range(top + 1)
        ]
        self._reps: dict[int, RationalMatrix] = {}
        self._frame: dict[int, tuple[RationalMatrix, int]] = {}

    def size(self, d: int) -> int:
        return len(self.basis[d]) if 0 <= d <= self.k.dim else 0

    def _boundaries(self, d: int) -> RationalMatrix:
        if d == 0 or d > self.k.dim:
            return RationalMatrix.zeros(self.size(d), 0)
        return image_basis(self.delta[d - 1]).basis

    def _build(self, d: int) -> None:
        if d in self._reps:
            return
        if d < 0 or d > self.k.dim:
            self._reps[d] = RationalMatrix.zeros(0, 0)
            self._frame[d] = (RationalMatrix.zeros(0, 0), 0)
            return
        b = self._boundaries(d)
        z = kernel_basis(self.delta[d]).basis
        both = hstack(b, z)
        _, piv = rref(both)
        extra = [j - b.cols for j in piv if j >= b.cols]
        reps = RationalMatrix.from_columns([z.column(j) for j in extra], self.size(d))
        self._reps[d] = reps
        self._frame[d] = (hstack(b, reps), b.cols)

    def reps(self, d: int) -> RationalMatrix:
        self._build(d)
        return self._reps[d]

    def dim_h(self, d: int) -> int:
        return self.reps(d).cols

    def classify(self, d: int, cocycles: RationalMatrix) -> RationalMatrix:
        """Coordinates in the H^d basis of the classes of the given cocycle columns."""
        self._build(d)
        frame, nb = self._frame[d]
        if cocycles.cols == 0 or frame.cols == 0:
            return RationalMatrix.zeros(self.dim_h(d), cocycles.cols)
        x = solve_matrix(frame, cocycles)
        if x is None:
            raise InputError("vectors are not cocycles")
        return x.submatrix(range(nb, frame.cols), range(x.cols))

    def dims(self) -> GradedDims:
        return tuple(self.dim_h(d) for d in range(self.k.dim + 1))


def cohomology_dims(k: SimplicialComplex) -> GradedDims:
    """Betti numbers over Q, degrees 0..dim."""
    out = []
    prev_rank = 0
    for d in range(k.dim + 1):
        delta = coboundary_matrix(k, d)
        r = rank(delta)
        out.append(k.n_simplices(d) - r - prev_rank)
        prev_rank = r
    return tuple(out)


def _excluded(k: SimplicialComplex, a: SimplicialComplex) -> frozenset:
    if not is_subcomplex(a, k):
        raise InputError("second complex is not a subcomplex")
    return frozenset(tuple(sorted(k.vertex_index(v) for v in a.named(s))) for layer in a.simplices for s in layer)


@dataclass(frozen=True)
class RelativeCohomology:
    """H^*(K, A) together with the three maps of the pair sequence in each degree."""

    dims: GradedDims
    dims_k: GradedDims
    dims_a: GradedDims
    to_absolute: tuple[RationalMatrix, ...]   # H^d(K,A) -> H^d(K)
    restriction: tuple[RationalMatrix, ...]   # H^d(K)   -> H^d(A)
    connecting: tuple[RationalMatrix, ...]    # H^d(A)   -> H^{d+1}(K,A)


def relative_cohomology(k: SimplicialComplex, a: SimplicialComplex) -> RelativeCohomology:
    excl = _excluded(k, a)
    rel = CochainComplex(k, excl)
    ab = CochainComplex(k)
    sub = CochainComplex(a)
    top = k.dim
    to_abs, restrict, conn = [], [], []
    for d in range(top + 1):
        # extend relative representatives by zero on A
        rr = rel.reps(d)
        pos = [ab.basis[d].index(s) for s in rel.basis[d]]
        ext = [[Fraction(0)] * rr.cols for _ in ab.basis[d]]
        for i, p in enumerate(pos):
            for j in range(rr.cols):
                ext[p][j] = rr[i, j]
        to_abs.append(ab.classify(d, RationalMatrix.from_rows(ext, cols=rr.cols)))

        # restrict absolute representatives to A
        ar = ab.reps(d)
        a_simplices = sub.basis[d] if d <= a.dim else ()
        loc = {s: i for i, s in enumerate(ab.basis[d])}
        rows = []
        for s in a_simplices:
            ks = tuple(sorted(k.vertex_index(v) for v in a.named(s)))
            rows.append(list(ar.row(loc[ks])))
        restrict.append(sub.classify(d, RationalMatrix.from_rows(rows, cols=ar.cols)))

        # connecting map: extend an A-cocycle by zero to K, apply delta, read off on K \ A
        if d <= a.dim:
            sr = sub.reps(d)
            kd = k.simplices_of(d)
            kloc = {s: i for i, s in enumerate(kd)}
            ext = [[Fraction(0)] * sr.cols for _ in kd]
            for i, s in enumerate(sub.basis[d]):
                ks = tuple(sorted(k.vertex_index(v) for v in a.named(s)))
                for j in range(sr.cols):
                    ext[kloc[ks]][j] = sr[i, j]
            full = coboundary_matrix(k, d) @ RationalMatrix.from_rows(ext, cols=sr.cols)
            nxt = k.simplices_of(d + 1)
            nloc = {s: i for i, s in enumerate(nxt)}
            rows = [list(full.row(nloc[s])) for s in rel.basis[d + 1]] if d + 1 <= top else []
            cocyc = RationalMatrix.from_rows(rows, cols=sr.cols)
            conn.append(rel.classify(d + 1, cocyc) if d + 1 <= top else RationalMatrix.zeros(0, sr.cols))
        else:
            conn.append(RationalMatrix.zeros(rel.dim_h(d + 1), 0))
    return RelativeCohomology(
        dims=rel.dims(),
        dims_k=ab.dims(),
        dims_a=tuple(sub.dim_h(d) if d <= a.dim else 0 for d in range(top + 1)),
        to_absolute=tuple(to_abs),
        restriction=tuple(restrict),
        connecting=tuple(conn),
    )


@dataclass(frozen=True)
class PairLES:
    """Long exact sequence H^d(K,A) -> H^d(K) -> H^d(A) -> H^{d+1}(K,A) -> ..."""

    degrees: range
    terms: tuple[tuple[str, int], ...]
    maps: tuple[RationalMatrix, ...]
    cohomology: RelativeCohomology = field(repr=False)

    def joints_exact(self) -> list[bool]:
        return les_exactness(self.maps, [d for _, d in self.terms])

    def is_exact(self) -> bool:
        return all(self.joints_exact())


def les_exactness(maps: Sequence[RationalMatrix], dims: Sequence[int]) -> list[bool]:
    """Exactness at every term of ``0 -> T0 -> T1 -> ... -> Tlast -> 0``."""
    out = []
    for i, d in enumerate(dims):
        f = maps[i - 1] if i > 0 else RationalMatrix.zeros(d, 0)
        g = maps[i] if i < len(maps) else RationalMatrix.zeros(0, d)
        out.append(is_exact_at(f, g))
    return out


def pair_les(k: SimplicialComplex, a: SimplicialComplex) -> PairLES:
    rc = relative_cohomology(k, a)
    terms, maps = [], []
    for d in range(k.dim + 1):
        terms += [(f"H^{d}(K,A)", rc.dims[d]), (f"H^{d}(K)", rc.dims_k[d]), (f"H^{d}(A)", rc.dims_a[d])]
        maps += [rc.to_absolute[d], rc.restriction[d]]
        if d < k.dim:
            maps.append(rc.connecting[d])
    return PairLES(range(k.dim + 1), tuple(terms), tuple(maps), rc)


def link_connecting_map(k: SimplicialComplex, v: str, deg: int) -> RationalMatrix:
    """Connecting map H^deg(lk v) -> H^{deg+1}(K, K - v).

    By excision H^*(K, K - v) = H^*(st v, lk v); a link cocycle is extended by
    zero over the star and its coboundary read off on the simplices through v,
    which are exactly the relative cochains of (K, deleted_complex(K, v)).
    """
    link = vertex_link(k, v)
    rest = deleted_complex(k, v)
    rel = CochainComplex(k, _excluded(k, rest))
    lk = CochainComplex(link)
    if deg > link.dim or deg < 0:
        return RationalMatrix.zeros(rel.dim_h(deg + 1), 0)
    reps = lk.reps(deg)
    kd = k.simplices_of(deg)
    kloc = {s: i for i, s in enumerate(kd)}
    ext = [[Fraction(0)] * reps.cols for _ in kd]
    for i, s in enumerate(lk.basis[deg]):
        ks = tuple(sorted(k.vertex_index(w) for w in link.named(s)))
        for j in range(reps.cols):
            ext[kloc[ks]][j] = reps[i, j]
    full = coboundary_matrix(k, deg) @ RationalMatrix.from_rows(ext, cols=reps.cols)
    if deg + 1 > k.dim:
        return RationalMatrix.zeros(0, reps.cols)
    nloc = {s: i for i, s in enumerate(k.simplices_of(deg + 1))}
    rows = [list(full.row(nloc[s])) for s in rel.basis[deg + 1]]
    return rel.classify(deg + 1, RationalMatrix.from_rows(rows, cols=reps.cols))
