"""Spaces with one isolated singular point and their cohomology package.

A package holds the long exact sequence

    ... -> H^k_c(c°L) -a_k-> H^k_c(Y°) -b_k-> H^k(Y°) -c_k-> H^{k+1}_c(c°L) -> ...

for k = 0..2n, plus the Betti numbers of Y and of the link L.  The compact
support groups of Y° agree with H^k(Y) only for k > 0, so the degree-0
slot of the middle column carries H^0(Y); every identification of this kind
is written into ``CohomologyPackage.notes``.

Two ways in: a triangulation (``assemble_package_simplicial``), where the
sequence is the pair sequence of (Y, Y - y) and carries honest matrices, or
a rank document (``assemble_package_ranks``) giving Betti numbers and map
ranks, which are expanded to block matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .errors import ConsistencyError, InputError, ValidationError
from .qlinalg import RationalMatrix, is_exact_at, rank
from .simplicial import (
    GradedDims,
    SimplicialComplex,
    closed_star,
    cohomology_dims,
    cone,
    deleted_complex,
    link_connecting_map,
    pair_les,
    pseudomanifold_defects,
    vertex_link,
)

SIMPLICIAL = "simplicial"
RANK_MODE = "rank-mode"


@dataclass(frozen=True)
class StratifiedSpace:
    complex: SimplicialComplex
    singular_vertex: str
    half_dim: int
    link: SimplicialComplex
    notes: tuple[str, ...] = ()


def _is_rational_sphere(dims: GradedDims, d: int) -> bool:
    return tuple(dims) == tuple([1] + [0] * (d - 1) + [1]) if d > 0 else tuple(dims) == (2,)


def build_stratified(k: SimplicialComplex, y: str, n: int) -> StratifiedSpace:
    """Validate ``(k, y, n)`` as a simple stratified space.

    The link of ``y`` must be a nonempty (2n-1)-pseudomanifold, the closed
    star must be the cone on it, and every other vertex must look smooth
    (its link a pseudomanifold with the rational cohomology of a sphere).
    Whether the smooth part is an honest PL manifold is not checked.
    """
    if n < 1:
        raise ValidationError(f"half dimension must be >= 1, got {n}")
    if k.dim != 2 * n:
        raise ValidationError(f"complex has dimension {k.dim}, expected 2n = {2 * n}")
    k.vertex_index(y)
    link = vertex_link(k, y)
    if link.dim < 0:
        raise ValidationError(f"link of {y!r} is empty", offending=[(y,)])
    defects = pseudomanifold_defects(link, 2 * n - 1)
    if defects:
        raise ValidationError(
            f"link of {y!r} is not a {2 * n - 1}-pseudomanifold", offending=defects
        )
    if closed_star(k, y).named_simplices() != cone(link, y).named_simplices():
        raise ValidationError(f"closed star of {y!r} is not the cone on its link")
    others = []
    for v in k.vertices:
        if v == y:
            continue
        lk = vertex_link(k, v)
        if pseudomanifold_defects(lk, 2 * n - 1) or not _is_rational_sphere(cohomology_dims(lk), 2 * n - 1):
            others.append((v,))
    if others:
        raise ValidationError(
            "only one singular vertex is supported; these vertices are also singular",
            offending=others,
        )
    notes = (
        "manifold condition on Y - y checked only through vertex links (rational homology spheres)",
    )
    return StratifiedSpace(k, y, n, link, notes)


@dataclass(frozen=True)
class CohomologyPackage:
    n: int
    dims_Y: GradedDims
    dims_Yo: GradedDims
    dims_Yo_c: GradedDims
    dims_cone_c: GradedDims
    dims_L: GradedDims
    a: tuple[RationalMatrix, ...]
    b: tuple[RationalMatrix, ...]
    c: tuple[RationalMatrix, ...]
    # H^{n-1}(L) -> H^n_c(c°L) and H^n(L) -> H^{n+1}_c(c°L)
    link_to_cone: tuple[RationalMatrix, RationalMatrix]
    provenance: str
    notes: tuple[str, ...] = field(default=())

    @property
    def top(self) -> int:
        return 2 * self.n

    @property
    def dims_mid(self) -> GradedDims:
        """Middle column of the sequence: H^0(Y), then H^k_c(Y°) for k > 0."""
        return (self.dims_Y[0],) + tuple(self.dims_Yo_c[1:])

    def cone_dim(self, k: int) -> int:
        return self.dims_cone_c[k] if 0 <= k <= self.top else 0

    def sequence(self) -> tuple[list[tuple[str, int]], list[RationalMatrix]]:
        terms, maps = [], []
        for k in range(self.top + 1):
            terms += [
                (cone_label(k), self.dims_cone_c[k]),
                (mid_label(k), self.dims_mid[k]),
                (yo_label(k), self.dims_Yo[k]),
            ]
            maps += [self.a[k], self.b[k], self.c[k]]
        terms.append((cone_label(self.top + 1), 0))
        return terms, maps

    def failing_joints(self) -> list[str]:
        """Labels of terms where the sequence is not exact (empty when exact)."""
        return list(self._failing_joints)

    @cached_property
    def _failing_joints(self) -> tuple[str, ...]:
        terms, maps = self.sequence()
        bad = []
        for i, (label, d) in enumerate(terms):
            f = maps[i - 1] if i > 0 else RationalMatrix.zeros(d, 0)
            g = maps[i] if i < len(maps) else RationalMatrix.zeros(0, d)
            if not is_exact_at(f, g):
                bad.append(label)
        return tuple(bad)


def cone_label(k: int) -> str:
    return f"H^{k}_c(c^oL)"


def mid_label(k: int) -> str:
    return "H^0(Y)" if k == 0 else f"H^{k}_c(Y^o)"


def yo_label(k: int) -> str:
    return f"H^{k}(Y^o)"


def _pad(dims: Sequence[int], length: int) -> GradedDims:
    dims = tuple(dims)[:length]
    return dims + (0,) * (length - len(dims))


def _cone_from_link(dims_L: GradedDims, n: int) -> GradedDims:
    # H^k_c(c°L) = reduced H^{k-1}(L); an all-zero document gives the zero package
    return (0, max(dims_L[0] - 1, 0)) + tuple(dims_L[1:2 * n])


def _check_shapes(pkg: CohomologyPackage) -> None:
    terms, maps = pkg.sequence()
    for i, m in enumerate(maps):
        want = (terms[i + 1][1], terms[i][1])
        if m.shape != want:
            raise InputError(f"map {terms[i][0]} -> {terms[i + 1][0]} has shape {m.shape}, expected {want}")


def assemble_package_simplicial(s: StratifiedSpace) -> CohomologyPackage:
    """Package from the pair sequence of (Y, Y1), Y1 the complex without y."""
    y, n = s.singular_vertex, s.half_dim
    top = 2 * n
    y1 = deleted_complex(s.complex, y)
    les = pair_les(s.complex, y1)
    if not les.is_exact():
        raise ConsistencyError("pair sequence of (Y, Y - y) is not exact")
    rc = les.cohomology
    dims_L = _pad(cohomology_dims(s.link), top)
    dims_Y = _pad(rc.dims_k, top + 1)
    dims_Yo = _pad(rc.dims_a, top + 1)
    cone_dims = _pad(rc.dims, top + 1)
    if dims_Yo != _pad(cohomology_dims(y1), top + 1):
        raise ConsistencyError("H^*(Y - y) from the pair sequence disagrees with a direct computation")
    if cone_dims != _cone_from_link(dims_L, n):
        raise ConsistencyError(
            f"H^*(Y, Y - y) = {cone_dims} does not match the shifted link cohomology {_cone_from_link(dims_L, n)}"
        )
    dims_Yo_c = (dims_Y[0] - 1,) + dims_Y[1:]
    c_maps = list(rc.connecting) + [RationalMatrix.zeros(0, dims_Yo[top])]
    pkg = CohomologyPackage(
        n=n,
        dims_Y=dims_Y,
        dims_Yo=dims_Yo,
        dims_Yo_c=dims_Yo_c,
        dims_cone_c=cone_dims,
        dims_L=dims_L,
        a=tuple(rc.to_absolute),
        b=tuple(rc.restriction),
        c=tuple(c_maps[: top + 1]),
        link_to_cone=(
            link_connecting_map(s.complex, y, n - 1),
            link_connecting_map(s.complex, y, n),
        ),
        provenance=SIMPLICIAL,
        notes=s.notes + (
            "H^k_c(c^oL) realized as H^k(Y, Y - y) (excision onto the closed star of y)",
            "H^k_c(Y^o) identified with H^k(Y) for k > 0; H^0_c(Y^o) = H^0(Y) - 1",
            f"H^1_c(c^oL) is reduced H^0(L): {cone_dims[1]} (unreduced would be {dims_L[0]})",
        ),
    )
    _check_shapes(pkg)
    bad = pkg.failing_joints()
    if bad:
        raise ConsistencyError(f"assembled sequence not exact at {', '.join(bad)}")
    return pkg


def canonical_sequence_maps(dims: Sequence[int], ranks: Sequence[int]) -> list[RationalMatrix]:
    """Block matrices realizing an exact sequence with the given term dims and map ranks.

    Term j is split as (outgoing part of size ranks[j], incoming image of
    size ranks[j-1]); map j sends the outgoing part of term j identically
    onto the incoming block of term j+1, so im(map j) = ker(map j+1).
    """
    maps = []
    for j, r in enumerate(ranks):
        src, dst = dims[j], dims[j + 1]
        out_next = ranks[j + 1] if j + 1 < len(ranks) else 0
        data = [[0] * src for _ in range(dst)]
        for i in range(r):
            data[out_next + i][i] = 1
        maps.append(RationalMatrix.from_rows(data, cols=src))
    return maps


def _int_list(doc: dict, key: str, length: int) -> GradedDims:
    if key not in doc:
        raise InputError(f"missing field {key!r}")
    val = doc[key]
    if not isinstance(val, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in val):
        raise InputError(f"{key!r} must be a list of integers")
    if len(val) != length:
        raise InputError(f"{key!r} has {len(val)} degrees, expected {length}")
    if any(x < 0 for x in val):
        raise InputError(f"{key!r} has a negative entry")
    return tuple(val)


def assemble_package_ranks(doc: dict) -> CohomologyPackage:
    """Package from a rank-mode document (already parsed JSON)."""
    if not isinstance(doc, dict):
        raise InputError("rank document must be a JSON object")
    if str(doc.get("format_version")) != "1":
        raise InputError(f"unsupported format_version {doc.get('format_version')!r}")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError("'n' must be an integer >= 1")
    top = 2 * n
    dims_Y = _int_list(doc, "dims_Y", top + 1)
    dims_Yo = _int_list(doc, "dims_Yo", top + 1)
    dims_Yo_c = _int_list(doc, "dims_Yo_c", top + 1)
    dims_L = _int_list(doc, "dims_L", top)
    cone_dims = _cone_from_link(dims_L, n)
    mid = (dims_Y[0],) + dims_Yo_c[1:]

    terms: list[tuple[str, int]] = []
    for k in range(top + 1):
        terms += [(cone_label(k), cone_dims[k]), (mid_label(k), mid[k]), (yo_label(k), dims_Yo[k])]
    terms.append((cone_label(top + 1), 0))

    maps_doc = doc.get("maps")
    if not isinstance(maps_doc, dict) or not ({"ranks", "matrices"} & set(maps_doc)):
        raise InputError("'maps' must contain 'ranks' or 'matrices'")
    if "ranks" in maps_doc:
        triples = maps_doc["ranks"]
        if not isinstance(triples, list) or len(triples) != top + 1:
            raise InputError(f"'maps.ranks' needs one (a, b, c) triple for each degree 0..{top}")
        flat: list[int] = []
        for k, t in enumerate(triples):
            if not (isinstance(t, list) and len(t) == 3 and all(isinstance(x, int) and x >= 0 for x in t)):
                raise InputError(f"rank triple for degree {k} must be three non-negative integers")
            flat += t
        for j, r in enumerate(flat):
            bound = min(terms[j][1], terms[j + 1][1])
            if r > bound:
                raise InputError(f"rank {r} of map {terms[j][0]} -> {terms[j + 1][0]} exceeds {bound}")
        bad = [
            label for j, (label, d) in enumerate(terms)
            if (flat[j - 1] if j > 0 else 0) + (flat[j] if j < len(flat) else 0) != d
        ]
        if bad:
            raise InputError(
                f"ranks violate exactness; first failing joint {bad[0]} (all failing: {', '.join(bad)})"
            )
        maps = canonical_sequence_maps([d for _, d in terms], flat)
        how = "map ranks expanded to canonical block matrices"
    else:
        mats = maps_doc["matrices"]
        maps = []
        for k in range(top + 1):
            for key in ("a", "b", "c"):
                try:
                    raw = mats[key][k]
                except (KeyError, IndexError, TypeError):
                    raise InputError(f"missing matrix {key}_{k}") from None
                j = len(maps)
                maps.append(RationalMatrix.from_pairs(raw, rows=terms[j + 1][1], cols=terms[j][1]))
        how = "explicit matrices supplied"
    link_maps = (
        canonical_surjection(cone_dims[n], dims_L[n - 1]),
        canonical_surjection(cone_dims[n + 1], dims_L[n]),
    )
    notes = [
        how,
        "H^k_c(c^oL) taken as reduced H^{k-1}(L)",
        f"H^1_c(c^oL) is reduced H^0(L): {cone_dims[1]} (unreduced would be {dims_L[0]})",
        "degree-0 middle term is H^0(Y); H^k_c(Y^o) used for k > 0",
    ]
    differ = [k for k in range(1, top + 1) if dims_Yo_c[k] != dims_Y[k]]
    if differ:
        notes.append(
            f"supplied H^k_c(Y^o) differs from H^k(Y) in degrees {differ}; "
            "the S0 table uses H^k_c(Y^o) above the middle"
        )
    pkg = CohomologyPackage(
        n=n,
        dims_Y=dims_Y,
        dims_Yo=dims_Yo,
        dims_Yo_c=dims_Yo_c,
        dims_cone_c=cone_dims,
        dims_L=dims_L,
        a=tuple(maps[0::3]),
        b=tuple(maps[1::3]),
        c=tuple(maps[2::3]),
        link_to_cone=link_maps,
        provenance=RANK_MODE,
        notes=tuple(notes),
    )
    _check_shapes(pkg)
    bad = pkg.failing_joints()
    if bad:
        raise InputError(f"sequence not exact; first failing joint {bad[0]} (all failing: {', '.join(bad)})")
    return pkg


def canonical_surjection(rows: int, cols: int) -> RationalMatrix:
    """[I | 0] of shape rows x cols (rows <= cols); drops trailing coordinates."""
    if rows > cols:
        raise InputError(f"no surjection from dimension {cols} onto {rows}")
    return RationalMatrix.from_rows([[int(i == j) for j in range(cols)] for i in range(rows)], cols=cols)


def package_to_rank_document(pkg: CohomologyPackage) -> dict:
    """Rank-mode document carrying the same dims and map ranks as ``pkg``."""
    return {
        "format_version": "1",
        "n": pkg.n,
        "dims_Y": list(pkg.dims_Y),
        "dims_Yo": list(pkg.dims_Yo),
        "dims_Yo_c": list(pkg.dims_Yo_c),
        "dims_L": list(pkg.dims_L),
        "maps": {"ranks": [[rank(pkg.a[k]), rank(pkg.b[k]), rank(pkg.c[k])] for k in range(pkg.top + 1)]},
    }


@dataclass(frozen=True)
class SupportCheckReport:
    support_ok: tuple[bool, ...]
    cosupport_ok: tuple[bool, ...]
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return all(self.support_ok) and all(self.cosupport_ok)

    def to_dict(self) -> dict:
        return {"support_ok": list(self.support_ok), "cosupport_ok": list(self.cosupport_ok), "notes": list(self.notes)}

    @classmethod
    def from_dict(cls, d: dict) -> "SupportCheckReport":
        return cls(tuple(d["support_ok"]), tuple(d["cosupport_ok"]), tuple(d.get("notes", ())))


def support_cosupport_check(pkg: CohomologyPackage, s0_table: Sequence[int]) -> SupportCheckReport:
    """Degreewise consequences of the support and cosupport conditions.

    Cosupport forces H^i(S0) = H^i(Y°) for i < n; support forces
    H^i(S0) = H^i_c(Y°) for i > n.  Degrees where a condition says nothing
    are reported as passing.
    """
    n, top = pkg.n, pkg.top
    if len(s0_table) != top + 1:
        raise InputError(f"S0 table must have {top + 1} degrees")
    cos = tuple(s0_table[i] == pkg.dims_Yo[i] if i < n else True for i in range(top + 1))
    sup = tuple(s0_table[i] == pkg.dims_Yo_c[i] if i > n else True for i in range(top + 1))
    notes = []
    differ = [i for i in range(n + 1, top + 1) if pkg.dims_Yo_c[i] != pkg.dims_Y[i]]
    if differ:
        notes.append(f"H^i(Y) differs from H^i_c(Y^o) in degrees {differ}; compared against H^i_c(Y^o)")
    return SupportCheckReport(sup, cos, tuple(notes))
