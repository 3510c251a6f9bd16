"""Zig-zag objects at the level of linear algebra.

A zig-zag object is a four-term sequence

    left --alpha--> K --beta--> C --gamma--> right

exact at K and at C.  ``left`` and ``right`` stand for H^{n-1} and H^n of the
link (the local system is always the constant sheaf, so it is only a label).
Duality reverses the sequence and transposes the maps; self-duality is
decided by finding an isomorphism onto the dual.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import ConsistencyError, InputError
from .qlinalg import (
    RationalMatrix,
    corestriction,
    extend_to_basis,
    hstack,
    image_basis,
    inverse,
    is_exact_at,
    is_invertible,
    kernel_basis,
    rank,
)
from .stratified import CohomologyPackage

# integer combinations of the solution basis tried before building an
# isomorphism directly
PROBES = 32
SEARCH_BUDGET = 200


@dataclass(frozen=True)
class ZigZagObject:
    left_dim: int
    K_dim: int
    C_dim: int
    right_dim: int
    alpha: RationalMatrix
    beta: RationalMatrix
    gamma: RationalMatrix
    local_system: str = "Q"

    def __post_init__(self):
        want = {
            "alpha": (self.K_dim, self.left_dim),
            "beta": (self.C_dim, self.K_dim),
            "gamma": (self.right_dim, self.C_dim),
        }
        for name, shape in want.items():
            if getattr(self, name).shape != shape:
                raise InputError(f"{name} has shape {getattr(self, name).shape}, expected {shape}")

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return (self.left_dim, self.K_dim, self.C_dim, self.right_dim)

    @property
    def maps(self) -> tuple[RationalMatrix, RationalMatrix, RationalMatrix]:
        return (self.alpha, self.beta, self.gamma)

    def to_dict(self) -> dict:
        return {
            "dims": {"left": self.left_dim, "K": self.K_dim, "C": self.C_dim, "right": self.right_dim},
            "alpha": self.alpha.to_pairs(),
            "beta": self.beta.to_pairs(),
            "gamma": self.gamma.to_pairs(),
            "local_system": self.local_system,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ZigZagObject":
        dims = d["dims"]
        left, k, c, right = dims["left"], dims["K"], dims["C"], dims["right"]
        return cls(
            left, k, c, right,
            RationalMatrix.from_pairs(d["alpha"], rows=k, cols=left),
            RationalMatrix.from_pairs(d["beta"], rows=c, cols=k),
            RationalMatrix.from_pairs(d["gamma"], rows=right, cols=c),
            d.get("local_system", "Q"),
        )


def zero_object() -> ZigZagObject:
    z = RationalMatrix.zeros(0, 0)
    return ZigZagObject(0, 0, 0, 0, z, z, z)


def check_zigzag_exact(z: ZigZagObject) -> bool:
    return is_exact_at(z.alpha, z.beta) and is_exact_at(z.beta, z.gamma)


def make_theta0(pkg: CohomologyPackage) -> ZigZagObject:
    """Θ₀ of a package: K₀ = im a_n, C₀ = im c_n, beta = 0.

    alpha is H^{n-1}(L) -> H^n_c(c°L) -> K₀ (onto) and gamma is the
    inclusion C₀ -> H^{n+1}_c(c°L) ≅ H^n(L).
    """
    n = pkg.n
    a_n, c_n = pkg.a[n], pkg.c[n]
    to_cone_n, to_cone_n1 = pkg.link_to_cone
    k0 = image_basis(a_n)
    c0 = image_basis(c_n)
    alpha = corestriction(a_n, k0) @ to_cone_n
    if not is_invertible(to_cone_n1):
        raise ConsistencyError("H^n(L) -> H^{n+1}_c(c^oL) is not an isomorphism")
    gamma = inverse(to_cone_n1) @ c0.basis
    z = ZigZagObject(
        pkg.dims_L[n - 1], k0.dim, c0.dim, pkg.dims_L[n],
        alpha, RationalMatrix.zeros(c0.dim, k0.dim), gamma,
    )
    if rank(alpha) != z.K_dim or rank(gamma) != z.C_dim or not check_zigzag_exact(z):
        raise ConsistencyError("Θ₀ built from the package is not exact")
    return z


def dualize(z: ZigZagObject) -> ZigZagObject:
    return ZigZagObject(
        z.right_dim, z.C_dim, z.K_dim, z.left_dim,
        z.gamma.T, z.beta.T, z.alpha.T,
        local_system=z.local_system[:-1] if z.local_system.endswith("*") else z.local_system + "*",
    )


@dataclass(frozen=True)
class ZigZagMorphism:
    """Four vertical maps ``source -> target``; the three squares commute."""

    source: ZigZagObject
    target: ZigZagObject
    map_left: RationalMatrix
    map_K: RationalMatrix
    map_C: RationalMatrix
    map_right: RationalMatrix

    def __post_init__(self):
        s, t = self.source.dims, self.target.dims
        for m, i in zip(self.verticals, range(4)):
            if m.shape != (t[i], s[i]):
                raise InputError(f"vertical map {i} has shape {m.shape}, expected {(t[i], s[i])}")
        if not self.commutes():
            raise InputError("squares do not commute")

    @property
    def verticals(self) -> tuple[RationalMatrix, ...]:
        return (self.map_left, self.map_K, self.map_C, self.map_right)

    def commutes(self) -> bool:
        v = self.verticals
        return all(
            g @ v[i] == v[i + 1] @ f
            for i, (f, g) in enumerate(zip(self.source.maps, self.target.maps))
        )

    def is_isomorphism(self) -> bool:
        return all(is_invertible(m) for m in self.verticals)


def identity_morphism(z: ZigZagObject) -> ZigZagMorphism:
    return ZigZagMorphism(z, z, *(RationalMatrix.identity(d) for d in z.dims))


def compose(m1: ZigZagMorphism, m2: ZigZagMorphism) -> ZigZagMorphism:
    """``m1`` followed by ``m2``."""
    if m1.target.dims != m2.source.dims or m1.target.maps != m2.source.maps:
        raise InputError("morphisms do not chain: target of the first is not the source of the second")
    return ZigZagMorphism(
        m1.source, m2.target,
        *(b @ a for a, b in zip(m1.verticals, m2.verticals)),
    )


@dataclass(frozen=True)
class DualityWitness:
    kappa: RationalMatrix
    lam: RationalMatrix
    nu: RationalMatrix
    xi: RationalMatrix
    method: str = "search"

    def as_morphism(self, z: ZigZagObject) -> ZigZagMorphism:
        return ZigZagMorphism(z, dualize(z), self.kappa, self.lam, self.nu, self.xi)

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa.to_pairs(),
            "lambda": self.lam.to_pairs(),
            "nu": self.nu.to_pairs(),
            "xi": self.xi.to_pairs(),
            "method": self.method,
        }


def verify_witness(z: ZigZagObject, w: DualityWitness) -> bool:
    """Invertible verticals and exactly commuting squares into ``dualize(z)``."""
    d = dualize(z)
    verts = (w.kappa, w.lam, w.nu, w.xi)
    if any(m.shape != (d.dims[i], z.dims[i]) for i, m in enumerate(verts)):
        return False
    if not all(is_invertible(m) for m in verts):
        return False
    return all(g @ verts[i] == verts[i + 1] @ f for i, (f, g) in enumerate(zip(z.maps, d.maps)))


def duality_mismatch(z: ZigZagObject) -> list[str]:
    """Dimension equalities that a self-duality isomorphism would need but which fail."""
    out = []
    if z.left_dim != z.right_dim:
        out.append(f"left/right ({z.left_dim} vs {z.right_dim})")
    if z.K_dim != z.C_dim:
        out.append(f"K/C ({z.K_dim} vs {z.C_dim})")
    return out


def _commuting_system(z: ZigZagObject, d: ZigZagObject) -> tuple[RationalMatrix, list[tuple[int, int]]]:
    """Coefficient matrix of the three square equations in the vertical entries.

    Unknowns are the row-major entries of the four verticals, concatenated.
    """
    shapes = [(d.dims[i], z.dims[i]) for i in range(4)]
    offsets = list(itertools.accumulate([0] + [r * c for r, c in shapes]))
    rows: list[list] = []
    # square i:  g_i V_i - V_{i+1} f_i = 0
    for i, (f, g) in enumerate(zip(z.maps, d.maps)):
        (r0, c0), (r1, _) = shapes[i], shapes[i + 1]
        for p in range(g.rows):
            for q in range(f.cols):
                eq = [0] * offsets[-1]
                for s in range(r0):
                    coef = g[p, s]
                    if coef:
                        eq[offsets[i] + s * c0 + q] += coef
                for t in range(f.rows):
                    coef = f[t, q]
                    if coef:
                        eq[offsets[i + 1] + p * shapes[i + 1][1] + t] -= coef
                rows.append(eq)
    return RationalMatrix.from_rows(rows, cols=offsets[-1]), shapes


def _unpack(vec, shapes) -> tuple[RationalMatrix, ...]:
    out, pos = [], 0
    for r, c in shapes:
        out.append(RationalMatrix(r, c, vec[pos:pos + r * c]))
        pos += r * c
    return tuple(out)


def _adapted_basis(z: ZigZagObject) -> list[RationalMatrix]:
    """Bases in which every map of ``z`` is a canonical 0/1 block matrix.

    left: [outgoing | ker alpha], K and C: [outgoing | incoming image],
    right: [incoming image | complement].
    """
    alpha, beta, gamma = z.maps
    ker_a = kernel_basis(alpha).basis
    full = extend_to_basis(ker_a)
    u0 = full.submatrix(range(full.rows), range(ker_a.cols, full.cols))
    bases = [hstack(u0, ker_a)]
    incoming = alpha @ u0
    for f in (beta, gamma):
        full = extend_to_basis(incoming)
        u = full.submatrix(range(full.rows), range(incoming.cols, full.cols))
        bases.append(hstack(u, incoming))
        incoming = f @ u
    full = extend_to_basis(incoming)
    bases.append(full)
    return bases


def _constructive_witness(z: ZigZagObject, d: ZigZagObject) -> tuple[RationalMatrix, ...]:
    pz, pd = _adapted_basis(z), _adapted_basis(d)
    return tuple(q @ inverse(p) for p, q in zip(pz, pd))


def find_duality_witness(z: ZigZagObject) -> Optional[DualityWitness]:
    """An isomorphism ``z -> dualize(z)``, or ``None`` when none exists.

    Exact sequences of this shape are classified up to isomorphism by their
    dimensions and the rank of beta, and dualizing keeps that rank, so an
    isomorphism exists exactly when left = right and K = C.  When it does,
    the commuting equations are solved and the solution space is searched in
    a fixed order (basis vectors, then integer combinations with
    coefficients in -2..2); if the search budget runs out, an isomorphism is
    assembled from adapted bases.  Every returned witness is re-verified.
    """
    if not check_zigzag_exact(z):
        raise InputError("zig-zag object is not exact")
    if duality_mismatch(z):
        return None
    d = dualize(z)
    system, shapes = _commuting_system(z, d)
    sol = kernel_basis(system).basis.columns()

    def attempt(vec, method):
        # points of the solution space commute by construction; invertibility
        # is the filter, and the full check runs once on the winner
        verts = _unpack(vec, shapes)
        if not all(is_invertible(m) for m in verts):
            return None
        w = DualityWitness(*verts, method=method)
        if not verify_witness(z, w):
            raise ConsistencyError("solution of the commuting equations failed to verify")
        return w

    if not sol:
        # every vertical is 0x0
        w = attempt([0] * system.cols, "trivial")
        if w is not None:
            return w
    for v in sol:
        w = attempt(v, "basis")
        if w is not None:
            return w
    def combine(coeffs):
        vec = [Fraction(0)] * system.cols
        for c, v in zip(coeffs, sol):
            if c:
                for j, x in enumerate(v):
                    if x:
                        vec[j] += c * x
        return vec

    # seeded probe first: lexicographic runs start near constant matrices,
    # which are rarely invertible
    probe = random.Random(0)
    for _ in range(PROBES if sol else 0):
        w = attempt(combine([probe.randint(-2, 2) for _ in sol]), "probe")
        if w is not None:
            return w
    tried = 0
    for coeffs in itertools.product(range(-2, 3), repeat=len(sol)):
        if tried >= SEARCH_BUDGET:
            break
        if not any(coeffs):
            continue
        tried += 1
        w = attempt(combine(coeffs), "combination")
        if w is not None:
            return w
    w = DualityWitness(*_constructive_witness(z, d), method="adapted-basis")
    if not verify_witness(z, w):
        raise ConsistencyError("adapted-basis isomorphism failed to verify")
    return w
