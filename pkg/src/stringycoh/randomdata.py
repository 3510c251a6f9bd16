"""Random valid inputs: self-dual rank documents and exact zig-zag objects."""

from __future__ import annotations

import random
from typing import Optional

from .qlinalg import RationalMatrix, inverse
from .stratified import canonical_sequence_maps
from .zigzag import ZigZagObject


def random_rank_document(rng: random.Random, n: Optional[int] = None, max_rank: int = 3) -> dict:
    """A rank document for a connected Y whose sequence is exact and whose data is dual.

    Ranks are drawn per degree: A_k = rank a_k, B_k = rank b_k, C_k = rank c_k,
    with B symmetric and A_k = C_{2n-k}, so that the link dims and the
    Y° tables are Poincaré dual.
    """
    n = n if n is not None else rng.randint(1, 3)
    top = 2 * n
    B = [0] * (top + 1)
    A = [0] * (top + 1)
    Cc = [0] * (top + 1)
    B[0] = 1
    A[top] = 1
    for k in range(1, n + 1):
        B[k] = B[top - k] = rng.randint(0, max_rank)
    for k in range(1, top):
        A[k] = rng.randint(0, max_rank)
    for k in range(1, top):
        Cc[k] = A[top - k]
    cone = [(Cc[k - 1] if k else 0) + A[k] for k in range(top + 1)]
    mid = [A[k] + B[k] for k in range(top + 1)]
    yo = [B[k] + Cc[k] for k in range(top + 1)]
    dims_L = [cone[1] + 1] + [cone[k + 1] for k in range(1, top)]
    dims_Yo_c = [mid[0] - 1] + mid[1:]
    return {
        "format_version": "1",
        "n": n,
        "dims_Y": mid[:],
        "dims_Yo": yo,
        "dims_Yo_c": dims_Yo_c,
        "dims_L": dims_L,
        "maps": {"ranks": [[A[k], B[k], Cc[k]] for k in range(top + 1)]},
    }


def _unimodular(rng: random.Random, d: int) -> RationalMatrix:
    """Product of random unit lower and upper triangular integer matrices."""
    lo = [[1 if i == j else (rng.randint(-2, 2) if i > j else 0) for j in range(d)] for i in range(d)]
    up = [[1 if i == j else (rng.randint(-2, 2) if i < j else 0) for j in range(d)] for i in range(d)]
    return RationalMatrix.from_rows(lo, cols=d) @ RationalMatrix.from_rows(up, cols=d)


def random_exact_zigzag(rng: random.Random, max_dim: int = 5) -> ZigZagObject:
    """Exact left -> K -> C -> right with dims <= max_dim, in a scrambled basis."""
    k = rng.randint(0, max_dim)
    c = rng.randint(0, max_dim)
    rb = rng.randint(0, min(k, c))
    left = rng.randint(k - rb, max_dim)
    right = rng.randint(c - rb, max_dim)
    dims = [left, k, c, right]
    ranks = [k - rb, rb, c - rb]
    canon = canonical_sequence_maps(dims, ranks)
    bases = [_unimodular(rng, d) for d in dims]
    maps = [bases[j + 1] @ canon[j] @ inverse(bases[j]) for j in range(3)]
    return ZigZagObject(left, k, c, right, *maps)
