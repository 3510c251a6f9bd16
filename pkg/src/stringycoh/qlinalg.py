"""Exact linear algebra over the rationals.

Everything here works on :class:`RationalMatrix`, a small immutable dense
matrix of :class:`fractions.Fraction` entries.  Elimination always pivots on
the first nonzero entry in column order, so kernels, images and solutions
are reproducible run to run.  Empty matrices (0 x m, m x 0) are ordinary
values and stand for maps to or from the zero space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

from .errors import InputError

Rational = Fraction


_SMALL = {i: Fraction(i) for i in range(-4, 5)}


def _q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if type(x) is int:
        return _SMALL[x] if x in _SMALL else Fraction(x)
    if isinstance(x, (tuple, list)) and len(x) == 2:
        return Fraction(int(x[0]), int(x[1]))
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass int, Fraction or (num, den)")
    return Fraction(x)


class RationalMatrix:
    """Dense rows x cols matrix of exact rationals, stored row-major."""

    __slots__ = ("rows", "cols", "entries", "_rank")

    def __init__(self, rows: int, cols: int, entries: Iterable = ()):
        small = _SMALL
        entries = tuple(
            x if type(x) is Fraction else small[x] if type(x) is int and x in small else _q(x)
            for x in entries
        )
        if rows < 0 or cols < 0:
            raise InputError(f"negative matrix shape {rows}x{cols}")
        if len(entries) != rows * cols:
            raise InputError(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}"
            )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_rank", None)

    def __setattr__(self, name, value):
        raise AttributeError("RationalMatrix is immutable")

    @classmethod
    def _raw(cls, rows: int, cols: int, entries: tuple) -> "RationalMatrix":
        # entries already a tuple of Fractions of the right length
        m = object.__new__(cls)
        object.__setattr__(m, "rows", rows)
        object.__setattr__(m, "cols", cols)
        object.__setattr__(m, "entries", entries)
        object.__setattr__(m, "_rank", None)
        return m

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "RationalMatrix":
        """Build from nested lists.  ``cols`` is required when ``rows`` is empty."""
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise InputError("cols must be given for a matrix with no rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise InputError("ragged rows")
        return cls(len(rows), cols, (x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "RationalMatrix":
        columns = [list(c) for c in columns]
        for c in columns:
            if len(c) != rows:
                raise InputError("column length does not match row count")
        return cls(rows, len(columns), (columns[j][i] for i in range(rows) for j in range(len(columns))))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        if rows < 0 or cols < 0:
            raise InputError(f"negative matrix shape {rows}x{cols}")
        return cls._raw(rows, cols, (_SMALL[0],) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        if n < 0:
            raise InputError(f"negative matrix shape {n}x{n}")
        entries = [_SMALL[0]] * (n * n)
        entries[::n + 1] = [_SMALL[1]] * n
        return cls._raw(n, n, tuple(entries))

    # -- access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.entries)

    # -- arithmetic ---------------------------------------------------------

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise InputError(f"cannot multiply {self.shape} by {other.shape}")
        n, p = self.cols, other.cols
        b_rows = [other.row(k) for k in range(n)]
        out = []
        for i in range(self.rows):
            acc = [Fraction(0)] * p
            for k, a in enumerate(self.row(i)):
                if a:
                    bk = b_rows[k]
                    for j in range(p):
                        if bk[j]:
                            acc[j] += a * bk[j]
            out.extend(acc)
        return RationalMatrix._raw(self.rows, p, tuple(out))

    def apply(self, v: Sequence) -> list[Fraction]:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise InputError(f"vector of length {len(v)} does not fit {self.shape}")
        v = [_q(x) for x in v]
        return [sum((a * x for a, x in zip(self.row(i), v) if a and x), Fraction(0))
                for i in range(self.rows)]

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise InputError(f"cannot add {self.shape} and {other.shape}")
        return RationalMatrix._raw(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise InputError(f"cannot subtract {self.shape} and {other.shape}")
        return RationalMatrix._raw(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scale(self, c) -> "RationalMatrix":
        c = _q(c)
        return RationalMatrix(self.rows, self.cols, (c * a for a in self.entries))

    def transpose(self) -> "RationalMatrix":
        e, c = self.entries, self.cols
        return RationalMatrix._raw(c, self.rows, tuple(x for j in range(c) for x in e[j::c]))

    @property
    def T(self) -> "RationalMatrix":
        return self.transpose()

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "RationalMatrix":
        row_idx, col_idx = list(row_idx), list(col_idx)
        for i in row_idx:
            if not 0 <= i < self.rows:
                raise IndexError(i)
        for j in col_idx:
            if not 0 <= j < self.cols:
                raise IndexError(j)
        e, c = self.entries, self.cols
        return RationalMatrix._raw(len(row_idx), len(col_idx), tuple(e[i * c + j] for i in row_idx for j in col_idx))

    # -- equality / display -------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"RationalMatrix({self.rows}x{self.cols}: [{body}])"

    def to_pairs(self) -> list[list[list[int]]]:
        """Rows of ``[num, den]`` pairs, the JSON wire form."""
        return [[[x.numerator, x.denominator] for x in self.row(i)] for i in range(self.rows)]

    @classmethod
    def from_pairs(cls, data, rows: Optional[int] = None, cols: Optional[int] = None) -> "RationalMatrix":
        """Inverse of :meth:`to_pairs`; entries may also be plain integers."""
        try:
            parsed = [[_q(x) for x in r] for r in data]
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad matrix entry: {exc}") from None
        if cols is None and parsed:
            cols = len(parsed[0])
        m = cls.from_rows(parsed, cols=cols if cols is not None else 0)
        if rows is not None and m.rows != rows:
            raise InputError(f"expected {rows} rows, got {m.rows}")
        return m


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^ambient_dim spanned by the (independent) columns of ``basis``."""

    ambient_dim: int
    basis: RationalMatrix

    def __post_init__(self):
        if self.basis.rows != self.ambient_dim:
            raise InputError("basis vectors have the wrong length")

    @property
    def dim(self) -> int:
        return self.basis.cols

    def vectors(self) -> list[tuple[Fraction, ...]]:
        return self.basis.columns()

    def contains(self, v: Sequence) -> bool:
        return solve(self.basis, v) is not None

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.vectors())


# -- elimination kernels ------------------------------------------------------


def _rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Gauss-Jordan in place; returns (nonzero reduced rows, pivot columns)."""
    m = len(rows)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pr = rows[r]
        inv = 1 / pr[c]
        if inv != 1:
            for j in range(c, ncols):
                if pr[j]:
                    pr[j] *= inv
        nz = [j for j in range(c + 1, ncols) if pr[j]]
        for i in range(m):
            if i != r:
                f = rows[i][c]
                if f:
                    ri = rows[i]
                    ri[c] = Fraction(0)
                    for j in nz:
                        ri[j] -= f * pr[j]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def _integer_rows(m: RationalMatrix) -> list[list[int]]:
    out = []
    for i in range(m.rows):
        row = m.row(i)
        den = 1
        for x in row:
            if x.denominator != 1:
                den = lcm(den, x.denominator)
        if den == 1:
            out.append([x.numerator for x in row])
        else:
            out.append([int(x * den) for x in row])
    return out


def _echelon_rank(rows: list[list[int]], ncols: int) -> int:
    """Fraction-free forward elimination; each updated row is divided by its content."""
    m = len(rows)
    r = 0
    for c in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pr = rows[r]
        a = pr[c]
        nz = [j for j in range(c + 1, ncols) if pr[j]]
        for i in range(r + 1, m):
            ri = rows[i]
            b = ri[c]
            if not b:
                continue
            g = gcd(a, b)
            ra, rb = a // g, b // g
            ri[c] = 0
            if ra != 1:
                for j in range(c + 1, ncols):
                    if ri[j]:
                        ri[j] *= ra
            for j in nz:
                ri[j] -= rb * pr[j]
            content = reduce(gcd, ri, 0)
            if content > 1:
                rows[i] = [x // content for x in ri]
        r += 1
    return r


# -- public operations -------------------------------------------------------


def rank(m: RationalMatrix) -> int:
    """Dimension of the column space; 0 for any empty matrix."""
    if m.rows == 0 or m.cols == 0:
        return 0
    if m._rank is None:
        # immutable, so the result can be kept; eliminate along the shorter side
        t = m.transpose() if m.rows > m.cols else m
        object.__setattr__(m, "_rank", _echelon_rank(_integer_rows(t), t.cols))
    return m._rank


def rref(m: RationalMatrix) -> tuple[RationalMatrix, list[int]]:
    """Reduced row echelon form (zero rows dropped) and the pivot columns."""
    rows, piv = _rref(m.to_rows(), m.cols)
    return RationalMatrix.from_rows(rows, cols=m.cols), piv


def kernel_basis(m: RationalMatrix) -> Subspace:
    """Null space of ``m`` with the standard free-variable basis."""
    rows, piv = _rref(m.to_rows(), m.cols)
    pivset = set(piv)
    free = [j for j in range(m.cols) if j not in pivset]
    vecs = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for r, pc in enumerate(piv):
            v[pc] = -rows[r][f]
        vecs.append(v)
    return Subspace(m.cols, RationalMatrix.from_columns(vecs, m.cols))


def image_basis(m: RationalMatrix) -> Subspace:
    """Column space of ``m``, spanned by the pivot columns of ``m`` itself."""
    _, piv = _rref(m.to_rows(), m.cols)
    return Subspace(m.rows, RationalMatrix.from_columns([m.column(j) for j in piv], m.rows))


def solve(m: RationalMatrix, b: Sequence) -> Optional[list[Fraction]]:
    """Some ``x`` with ``m x = b``, or ``None`` when ``b`` is outside the image."""
    if len(b) != m.rows:
        raise InputError(f"right-hand side has length {len(b)}, matrix has {m.rows} rows")
    b = [_q(x) for x in b]
    aug = [list(m.row(i)) + [b[i]] for i in range(m.rows)]
    rows, piv = _rref(aug, m.cols + 1)
    if piv and piv[-1] == m.cols:
        return None
    x = [Fraction(0)] * m.cols
    for r, pc in enumerate(piv):
        x[pc] = rows[r][m.cols]
    return x


def solve_matrix(m: RationalMatrix, b: RationalMatrix) -> Optional[RationalMatrix]:
    """Solve ``m X = b`` column by column; ``None`` if any column is unsolvable."""
    if b.rows != m.rows:
        raise InputError(f"right-hand side has {b.rows} rows, matrix has {m.rows}")
    n = m.cols
    aug = [list(m.row(i)) + list(b.row(i)) for i in range(m.rows)]
    rows, piv = _rref(aug, n + b.cols)
    if any(pc >= n for pc in piv):
        return None
    out = [[Fraction(0)] * b.cols for _ in range(n)]
    for r, pc in enumerate(piv):
        out[pc] = rows[r][n:]
    return RationalMatrix.from_rows(out, cols=b.cols)


def transpose(m: RationalMatrix) -> RationalMatrix:
    return m.transpose()


def is_exact_at(f: RationalMatrix, g: RationalMatrix) -> bool:
    """True iff image(f) = kernel(g) for ``A --f--> B --g--> C``."""
    if f.rows != g.cols:
        raise InputError(f"maps do not compose: f is {f.shape}, g is {g.shape}")
    if f.cols and g.rows and not (g @ f).is_zero():
        return False
    return rank(f) == g.cols - rank(g)


def is_invertible(m: RationalMatrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def inverse(m: RationalMatrix) -> RationalMatrix:
    if m.rows != m.cols:
        raise InputError(f"non-square matrix {m.shape} has no inverse")
    n = m.rows
    zero, one = _SMALL[0], _SMALL[1]
    aug = [list(m.row(i)) + [one if i == j else zero for j in range(n)] for i in range(n)]
    rows, piv = _rref(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise InputError("matrix is singular")
    return RationalMatrix.from_rows([r[n:] for r in rows], cols=n)


def hstack(*ms: RationalMatrix) -> RationalMatrix:
    rows = {m.rows for m in ms}
    if len(rows) > 1:
        raise InputError("hstack needs equal row counts")
    r = rows.pop() if rows else 0
    return RationalMatrix._raw(r, sum(m.cols for m in ms), tuple(x for i in range(r) for m in ms for x in m.row(i)))


def vstack(*ms: RationalMatrix) -> RationalMatrix:
    cols = {m.cols for m in ms}
    if len(cols) > 1:
        raise InputError("vstack needs equal column counts")
    c = cols.pop() if cols else 0
    return RationalMatrix._raw(sum(m.rows for m in ms), c, tuple(x for m in ms for x in m.entries))


def extend_to_basis(sub: RationalMatrix) -> RationalMatrix:
    """Append standard basis vectors to independent columns until square."""
    n = sub.rows
    if rank(sub) != sub.cols:
        raise InputError("columns to extend are not independent")
    # pivots of [sub | I] past the first block pick the standard vectors to add
    _, piv = _rref(hstack(sub, RationalMatrix.identity(n)).to_rows(), sub.cols + n)
    extra = [j - sub.cols for j in piv if j >= sub.cols]
    ident = RationalMatrix.identity(n)
    return hstack(sub, ident.submatrix(range(n), extra))


def corestriction(m: RationalMatrix, onto: Subspace) -> RationalMatrix:
    """Matrix of ``m`` viewed as a map into ``onto`` (coordinates in its basis)."""
    x = solve_matrix(onto.basis, m)
    if x is None:
        raise InputError("map does not land in the given subspace")
    return x
