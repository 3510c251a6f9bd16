"""Cohomology tables for S₀, intersection cohomology and ℚ, plus their checks.

In the middle degree n the S₀ group sits in two short exact sequences

    0 -> K₀ -> H^n(Y;S₀) -> H^n(Y°) -> 0
    0 -> H^n_c(Y°) -> H^n(Y;S₀) -> C₀ -> 0

with K₀ = im a_n and C₀ = im c_n.  Off the middle, S₀ and IC both agree
with H^*(Y°) below n and with H^*_c(Y°) above n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import ConsistencyError, InputError
from .qlinalg import (
    RationalMatrix,
    corestriction,
    extend_to_basis,
    image_basis,
    inverse,
    is_exact_at,
    rank,
    vstack,
)
from .simplicial import GradedDims
from .stratified import (
    CohomologyPackage,
    SupportCheckReport,
    support_cosupport_check,
)


def _off_middle(pkg: CohomologyPackage, i: int) -> int:
    return pkg.dims_Yo[i] if i < pkg.n else pkg.dims_Yo_c[i]


def compute_S0(pkg: CohomologyPackage) -> GradedDims:
    n = pkg.n
    k0, c0 = rank(pkg.a[n]), rank(pkg.c[n])
    mid = k0 + pkg.dims_Yo[n]
    if mid != pkg.dims_Yo_c[n] + c0:
        raise ConsistencyError(
            f"middle S0 dimension disagrees: K0 + H^n(Y^o) = {mid}, "
            f"H^n_c(Y^o) + C0 = {pkg.dims_Yo_c[n] + c0}"
        )
    return tuple(mid if i == n else _off_middle(pkg, i) for i in range(pkg.top + 1))


def compute_IC(pkg: CohomologyPackage) -> GradedDims:
    n = pkg.n
    return tuple(rank(pkg.b[n]) if i == n else _off_middle(pkg, i) for i in range(pkg.top + 1))


def compute_Q(pkg: CohomologyPackage) -> GradedDims:
    return tuple(pkg.dims_Y)


def check_poincare(dims: Sequence[int], n: int) -> bool:
    if len(dims) != 2 * n + 1:
        raise InputError(f"table has {len(dims)} degrees, expected {2 * n + 1}")
    return all(dims[i] == dims[2 * n - i] for i in range(2 * n + 1))


@dataclass(frozen=True)
class MiddleMaps:
    """Degree-n model V = K₀ ⊕ H^n(Y°) of H^n(Y;S₀) and the maps through it."""

    K0: RationalMatrix   # basis of im a_n inside H^n_c(Y°)
    C0: RationalMatrix   # basis of im c_n inside H^{n+1}_c(c°L)
    c: RationalMatrix    # H^n_c(Y°) -> V
    d: RationalMatrix    # V -> H^n(Y°)
    e: RationalMatrix    # H^n(Y°) -> C₀, corestriction of c_n

    @property
    def V_dim(self) -> int:
        return self.d.cols


def middle_maps(pkg: CohomologyPackage) -> MiddleMaps:
    n = pkg.n
    a_n, b_n, c_n = pkg.a[n], pkg.b[n], pkg.c[n]
    k0 = image_basis(a_n)
    c0 = image_basis(c_n)
    yo = pkg.dims_Yo[n]
    # coordinates along K₀ in a basis [K₀ | complement] of H^n_c(Y°)
    coords = inverse(extend_to_basis(k0.basis))
    proj = coords.submatrix(range(k0.dim), range(coords.cols))
    c = vstack(proj, b_n)
    d = RationalMatrix.from_rows(
        [[0] * k0.dim + [int(i == j) for j in range(yo)] for i in range(yo)], cols=k0.dim + yo
    )
    return MiddleMaps(k0.basis, c0.basis, c, d, corestriction(c_n, c0))


def middle_maps_check(pkg: CohomologyPackage, mm: Optional[MiddleMaps] = None) -> tuple[bool, bool]:
    """(c injective, d surjective) for the degree-n maps through H^n(Y;S₀)."""
    n = pkg.n
    mm = mm or middle_maps(pkg)
    if mm.d @ mm.c != pkg.b[n]:
        raise ConsistencyError("d o c does not recover H^n_c(Y^o) -> H^n(Y^o)")
    return rank(mm.c) == pkg.dims_Yo_c[n], rank(mm.d) == pkg.dims_Yo[n]


def _ses_ok(f: RationalMatrix, g: RationalMatrix) -> bool:
    """0 -> A --f--> B --g--> C -> 0 is exact."""
    return (
        is_exact_at(RationalMatrix.zeros(f.cols, 0), f)
        and is_exact_at(f, g)
        and is_exact_at(g, RationalMatrix.zeros(0, g.rows))
    )


def ses_checks(pkg: CohomologyPackage, mm: Optional[MiddleMaps] = None) -> tuple[bool, bool]:
    """Exactness of the K₀ sequence and of the C₀ sequence in the V model."""
    mm = mm or middle_maps(pkg)
    k0_into_v = mm.c @ mm.K0
    return _ses_ok(k0_into_v, mm.d), _ses_ok(mm.c, mm.e @ mm.d)


@dataclass(frozen=True)
class StringyHomology:
    """Homological reading of the S₀ table; ranks over ℚ match degreewise."""

    dims: GradedDims
    n: int
    middle_from_Y: int    # H_n(Y), i.e. dim H^n_c(Y°)
    middle_from_Yo: int   # H_n(Y - y)
    K0_dim: int
    C0_dim: int

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "middle": {
                "H_n(Y)": self.middle_from_Y,
                "H_n(Y-y)": self.middle_from_Yo,
                "K0": self.K0_dim,
                "C0": self.C0_dim,
            },
        }


@dataclass(frozen=True)
class CohomologyReport:
    n: int
    table_S0: GradedDims
    table_IC: GradedDims
    table_Q: GradedDims
    table_Yo: GradedDims
    table_Yo_c: GradedDims
    K0_dim: int
    C0_dim: int
    exact_ok: bool
    ses_a_ok: bool
    ses_b_ok: bool
    middle_injection_ok: bool
    middle_surjection_ok: bool
    poincare_ok_S0: bool
    poincare_ok_IC: bool
    poincare_ok_Q: bool
    support_report: SupportCheckReport
    provenance: str
    notes: tuple[str, ...] = field(default=())

    def off_middle_agree(self) -> bool:
        return all(s == i for d, (s, i) in enumerate(zip(self.table_S0, self.table_IC)) if d != self.n)

    def to_dict(self) -> dict:
        return {
            "format_version": "1",
            "n": self.n,
            "tables": {
                "S0": list(self.table_S0),
                "IC": list(self.table_IC),
                "Q": list(self.table_Q),
                "Yo": list(self.table_Yo),
                "Yo_c": list(self.table_Yo_c),
            },
            "K0_dim": self.K0_dim,
            "C0_dim": self.C0_dim,
            "checks": {
                "exact": self.exact_ok,
                "ses_a": self.ses_a_ok,
                "ses_b": self.ses_b_ok,
                "middle_injection": self.middle_injection_ok,
                "middle_surjection": self.middle_surjection_ok,
                "poincare_S0": self.poincare_ok_S0,
                "poincare_IC": self.poincare_ok_IC,
                "poincare_Q": self.poincare_ok_Q,
            },
            "support": self.support_report.to_dict(),
            "provenance": self.provenance,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CohomologyReport":
        t, ch = d["tables"], d["checks"]
        return cls(
            n=d["n"],
            table_S0=tuple(t["S0"]),
            table_IC=tuple(t["IC"]),
            table_Q=tuple(t["Q"]),
            table_Yo=tuple(t["Yo"]),
            table_Yo_c=tuple(t["Yo_c"]),
            K0_dim=d["K0_dim"],
            C0_dim=d["C0_dim"],
            exact_ok=ch["exact"],
            ses_a_ok=ch["ses_a"],
            ses_b_ok=ch["ses_b"],
            middle_injection_ok=ch["middle_injection"],
            middle_surjection_ok=ch["middle_surjection"],
            poincare_ok_S0=ch["poincare_S0"],
            poincare_ok_IC=ch["poincare_IC"],
            poincare_ok_Q=ch["poincare_Q"],
            support_report=SupportCheckReport.from_dict(d["support"]),
            provenance=d["provenance"],
            notes=tuple(d["notes"]),
        )


def build_report(pkg: CohomologyPackage) -> CohomologyReport:
    n = pkg.n
    s0 = compute_S0(pkg)
    ic = compute_IC(pkg)
    q = compute_Q(pkg)
    k0, c0 = rank(pkg.a[n]), rank(pkg.c[n])
    mm = middle_maps(pkg)
    ses_a, ses_b = ses_checks(pkg, mm)
    inj, surj = middle_maps_check(pkg, mm)
    if ses_a and s0[n] != k0 + pkg.dims_Yo[n]:
        raise ConsistencyError("S0 middle entry does not match the K0 sequence")
    if ses_b and s0[n] != pkg.dims_Yo_c[n] + c0:
        raise ConsistencyError("S0 middle entry does not match the C0 sequence")
    notes = pkg.notes + (
        f"IC middle degree taken as rank of H^{n}_c(Y^o) -> H^{n}(Y^o)",
        "rational homology and cohomology dimensions identified degreewise",
    )
    return CohomologyReport(
        n=n,
        table_S0=s0,
        table_IC=ic,
        table_Q=q,
        table_Yo=tuple(pkg.dims_Yo),
        table_Yo_c=tuple(pkg.dims_Yo_c),
        K0_dim=k0,
        C0_dim=c0,
        exact_ok=not pkg.failing_joints(),
        ses_a_ok=ses_a,
        ses_b_ok=ses_b,
        middle_injection_ok=inj,
        middle_surjection_ok=surj,
        poincare_ok_S0=check_poincare(s0, n),
        poincare_ok_IC=check_poincare(ic, n),
        poincare_ok_Q=check_poincare(q, n),
        support_report=support_cosupport_check(pkg, s0),
        provenance=pkg.provenance,
        notes=notes,
    )


def compute_SH(report: CohomologyReport) -> StringyHomology:
    n = report.n
    return StringyHomology(
        dims=tuple(report.table_S0),
        n=n,
        middle_from_Y=report.table_Yo_c[n],
        middle_from_Yo=report.table_Yo[n],
        K0_dim=report.K0_dim,
        C0_dim=report.C0_dim,
    )


# -- several nodes -----------------------------------------------------------


@dataclass(frozen=True)
class MultiNodeData:
    """Direct-sum data for r isolated singular points.

    alpha2: ⊕_b H^{n-1}(L_b) -> H^n_c(Y°);  gamma1: H^n(Y°) -> ⊕_b H^n(L_b).
    """

    n: int
    node_link_dims: tuple[GradedDims, ...]
    dims_Y: GradedDims
    dims_Yo: GradedDims
    dims_Yo_c: GradedDims
    alpha2: RationalMatrix
    gamma1: RationalMatrix
    dims_L_sum: Optional[GradedDims] = None

    @property
    def summed_link_dims(self) -> GradedDims:
        return tuple(sum(col) for col in zip(*self.node_link_dims))


@dataclass(frozen=True)
class ObstructionReport:
    alpha2_is_zero: bool
    gamma1_is_zero: bool
    c_injective: bool
    d_surjective: bool
    alpha2_rank: int
    gamma1_rank: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def multinode_obstruction(data: MultiNodeData) -> ObstructionReport:
    """Whether the supplied α₂ and γ₁ vanish, as injectivity of c and surjectivity of d need."""
    n, top = data.n, 2 * data.n
    if not data.node_link_dims:
        raise InputError("at least one node is required")
    for i, dl in enumerate(data.node_link_dims):
        if len(dl) != top:
            raise InputError(f"node {i} link dims have {len(dl)} degrees, expected {top}")
    total = data.summed_link_dims
    if data.dims_L_sum is not None and tuple(data.dims_L_sum) != total:
        raise InputError(f"direct-sum link dims {tuple(data.dims_L_sum)} differ from the per-node sum {total}")
    want_a = (data.dims_Yo_c[n], total[n - 1])
    want_g = (total[n], data.dims_Yo[n])
    if data.alpha2.shape != want_a:
        raise InputError(f"alpha2 has shape {data.alpha2.shape}, expected {want_a}")
    if data.gamma1.shape != want_g:
        raise InputError(f"gamma1 has shape {data.gamma1.shape}, expected {want_g}")
    a0, g0 = data.alpha2.is_zero(), data.gamma1.is_zero()
    return ObstructionReport(a0, g0, a0, g0, rank(data.alpha2), rank(data.gamma1))


def rank_block(rows: int, cols: int, r: int) -> RationalMatrix:
    if r > min(rows, cols) or r < 0:
        raise InputError(f"rank {r} impossible for a {rows}x{cols} matrix")
    return RationalMatrix.from_rows([[int(i == j and i < r) for j in range(cols)] for i in range(rows)], cols=cols)


def embed_single_node(pkg: CohomologyPackage) -> MultiNodeData:
    """One-node instance of the multi-node data.

    The ranks are the defects of the two middle maps: dim H^n_c(Y°) minus
    rank c and dim H^n(Y°) minus rank d, read off the S₀ middle entry.
    """
    n = pkg.n
    s0 = compute_S0(pkg)
    k0, c0 = rank(pkg.a[n]), rank(pkg.c[n])
    ra = pkg.dims_Yo_c[n] - s0[n] + c0
    rg = pkg.dims_Yo[n] - s0[n] + k0
    dl = tuple(pkg.dims_L)
    return MultiNodeData(
        n=n,
        node_link_dims=(dl,),
        dims_Y=tuple(pkg.dims_Y),
        dims_Yo=tuple(pkg.dims_Yo),
        dims_Yo_c=tuple(pkg.dims_Yo_c),
        alpha2=rank_block(pkg.dims_Yo_c[n], dl[n - 1], ra),
        gamma1=rank_block(dl[n], pkg.dims_Yo[n], rg),
        dims_L_sum=dl,
    )


def multinode_from_document(doc: dict) -> MultiNodeData:
    """Parse the ``multinode`` block of a rank document."""
    n = doc.get("n")
    if not isinstance(n, int) or n < 1:
        raise InputError("'n' must be an integer >= 1")
    block = doc.get("multinode")
    if not isinstance(block, dict):
        raise InputError("missing 'multinode' block")
    try:
        nodes = tuple(tuple(int(x) for x in dl) for dl in block["node_link_dims"])
        dims = {k: tuple(int(x) for x in doc[k]) for k in ("dims_Y", "dims_Yo", "dims_Yo_c")}
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed multinode data: {exc}") from None
    for k, v in dims.items():
        if len(v) != 2 * n + 1:
            raise InputError(f"{k!r} has {len(v)} degrees, expected {2 * n + 1}")
    total = tuple(sum(c) for c in zip(*nodes)) if nodes else ()
    if len(total) != 2 * n:
        raise InputError("node link dims must have 2n degrees each")
    shapes = {"alpha2": (dims["dims_Yo_c"][n], total[n - 1]), "gamma1": (total[n], dims["dims_Yo"][n])}
    mats = {}
    for key, (r, c) in shapes.items():
        given = block.get(key)
        if isinstance(given, dict) and "rank" in given:
            mats[key] = rank_block(r, c, int(given["rank"]))
        elif isinstance(given, dict) and "matrix" in given:
            mats[key] = RationalMatrix.from_pairs(given["matrix"], rows=r, cols=c)
        else:
            raise InputError(f"{key!r} needs a 'rank' or a 'matrix'")
    dsum = block.get("dims_L_sum")
    return MultiNodeData(
        n=n,
        node_link_dims=nodes,
        dims_Y=dims["dims_Y"],
        dims_Yo=dims["dims_Yo"],
        dims_Yo_c=dims["dims_Yo_c"],
        alpha2=mats["alpha2"],
        gamma1=mats["gamma1"],
        dims_L_sum=tuple(dsum) if dsum is not None else None,
    )

