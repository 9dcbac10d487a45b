"""Exact dense linear algebra over the rationals and prime fields.

Rational matrices are stored as lists of gmpy2.mpq rows; prime-field
matrices as numpy int64 arrays reduced mod p.  All algorithms are exact;
no floating point is used anywhere.
"""

from __future__ import annotations

import numpy as np
from gmpy2 import mpq

from .errors import FieldMismatch, HyperfinError

_RANK_PRIMES = (2147483647, 2305843009213693951, 1000000007)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Field:
    """Descriptor of an exact field: the rationals or F_p."""

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None:
            if not _is_prime(p):
                raise HyperfinError(f"{p} is not prime")
            if p > 46337:
                raise HyperfinError("prime fields supported up to p=46337")
        self.p = p

    @property
    def is_prime(self) -> bool:
        return self.p is not None

    @property
    def name(self) -> str:
        return "Q" if self.p is None else f"F{self.p}"

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return f"Field({self.name})"

    def of(self, value):
        """Coerce an int, string ('a/b' over Q) or field element."""
        if self.is_prime:
            if isinstance(value, str):
                value = int(value)
            return int(value) % self.p
        if isinstance(value, str):
            return mpq(value)
        return mpq(value)

    def to_str(self, value) -> str:
        return str(value)

    def zero(self):
        return 0 if self.is_prime else mpq(0)

    def one(self):
        return 1 if self.is_prime else mpq(1)

    def inv(self, value):
        if self.is_prime:
            v = int(value) % self.p
            if v == 0:
                raise ZeroDivisionError("inverse of zero")
            return pow(v, self.p - 2, self.p)
        if value == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / mpq(value)

    def neg(self, value):
        return (-int(value)) % self.p if self.is_prime else -value

    def elements(self):
        """Iterate all field elements (prime fields only)."""
        if not self.is_prime:
            raise HyperfinError("cannot enumerate the rationals")
        return range(self.p)


QQ = Field()


def parse_field(name: str) -> Field:
    name = name.strip()
    if name == "Q":
        return QQ
    if name.startswith("F"):
        return Field(int(name[1:]))
    raise HyperfinError(f"unknown field descriptor {name!r}")


class Matrix:
    """Immutable-by-convention exact matrix over a :class:`Field`."""

    __slots__ = ("field", "nrows", "ncols", "data")

    def __init__(self, field: Field, nrows: int, ncols: int, data):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.data = data

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zeros(field: Field, nrows: int, ncols: int) -> "Matrix":
        if field.is_prime:
            return Matrix(field, nrows, ncols, np.zeros((nrows, ncols), dtype=np.int64))
        z = mpq(0)
        return Matrix(field, nrows, ncols, [[z] * ncols for _ in range(nrows)])

    @staticmethod
    def identity(field: Field, n: int) -> "Matrix":
        m = Matrix.zeros(field, n, n)
        one = field.one()
        for i in range(n):
            m._set(i, i, one)
        return m

    @staticmethod
    def from_rows(field: Field, rows, nrows: int | None = None, ncols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        r = len(rows) if nrows is None else nrows
        c = (len(rows[0]) if rows else 0) if ncols is None else ncols
        m = Matrix.zeros(field, r, c)
        for i, row in enumerate(rows):
            if len(row) != c:
                raise HyperfinError("ragged rows")
            for j, v in enumerate(row):
                m._set(i, j, field.of(v))
        return m

    @staticmethod
    def column(field: Field, entries) -> "Matrix":
        return Matrix.from_rows(field, [[e] for e in entries], ncols=1)

    # -- element access (internal) --------------------------------------

    def _get(self, i, j):
        if self.field.is_prime:
            return int(self.data[i, j])
        return self.data[i][j]

    def _set(self, i, j, v):
        if self.field.is_prime:
            self.data[i, j] = int(v) % self.field.p
        else:
            self.data[i][j] = v

    def entry(self, i, j):
        return self._get(i, j)

    def rows(self):
        if self.field.is_prime:
            return [[int(v) for v in row] for row in self.data]
        return [list(row) for row in self.data]

    def copy(self) -> "Matrix":
        if self.field.is_prime:
            return Matrix(self.field, self.nrows, self.ncols, self.data.copy())
        return Matrix(self.field, self.nrows, self.ncols, [list(r) for r in self.data])

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __repr__(self):
        return f"Matrix({self.field.name}, {self.nrows}x{self.ncols})"

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.field != other.field or self.shape != other.shape:
            return False
        if self.field.is_prime:
            return bool(np.array_equal(self.data, other.data))
        return all(a == b for ra, rb in zip(self.data, other.data) for a, b in zip(ra, rb))

    __hash__ = None

    def is_zero(self) -> bool:
        if self.field.is_prime:
            return not self.data.any()
        return all(not v for row in self.data for v in row)

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: "Matrix"):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field.name} vs {other.field.name}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise HyperfinError("shape mismatch in add")
        if self.field.is_prime:
            return Matrix(self.field, self.nrows, self.ncols, (self.data + other.data) % self.field.p)
        out = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)]
        return Matrix(self.field, self.nrows, self.ncols, out)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise HyperfinError("shape mismatch in sub")
        if self.field.is_prime:
            return Matrix(self.field, self.nrows, self.ncols, (self.data - other.data) % self.field.p)
        out = [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)]
        return Matrix(self.field, self.nrows, self.ncols, out)

    def __neg__(self) -> "Matrix":
        if self.field.is_prime:
            return Matrix(self.field, self.nrows, self.ncols, (-self.data) % self.field.p)
        return Matrix(self.field, self.nrows, self.ncols, [[-v for v in row] for row in self.data])

    def scale(self, c) -> "Matrix":
        c = self.field.of(c)
        if self.field.is_prime:
            return Matrix(self.field, self.nrows, self.ncols, (self.data * int(c)) % self.field.p)
        return Matrix(self.field, self.nrows, self.ncols, [[c * v for v in row] for row in self.data])

    def __mul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise HyperfinError(f"shape mismatch in mul: {self.shape} * {other.shape}")
        if self.field.is_prime:
            # int64 is safe: p <= 46337, inner dim <= ~2000
            prod = (self.data @ other.data) % self.field.p
            return Matrix(self.field, self.nrows, other.ncols, prod)
        out = [[mpq(0)] * other.ncols for _ in range(self.nrows)]
        bdata = other.data
        for i, row in enumerate(self.data):
            oi = out[i]
            for k, a in enumerate(row):
                if a:
                    bk = bdata[k]
                    for j, b in enumerate(bk):
                        if b:
                            oi[j] = oi[j] + a * b
        return Matrix(self.field, self.nrows, other.ncols, out)

    def transpose(self) -> "Matrix":
        if self.field.is_prime:
            return Matrix(self.field, self.ncols, self.nrows, self.data.T.copy())
        out = [[self.data[i][j] for i in range(self.nrows)] for j in range(self.ncols)]
        return Matrix(self.field, self.ncols, self.nrows, out)

    # -- block operations -------------------------------------------------

    @staticmethod
    def hstack(mats) -> "Matrix":
        mats = list(mats)
        if not mats:
            raise HyperfinError("hstack of nothing")
        f = mats[0].field
        r = mats[0].nrows
        for m in mats:
            if m.field != f or m.nrows != r:
                raise HyperfinError("hstack mismatch")
        c = sum(m.ncols for m in mats)
        if f.is_prime:
            return Matrix(f, r, c, np.hstack([m.data for m in mats]) if c else np.zeros((r, 0), dtype=np.int64))
        out = [sum((m.data[i] for m in mats), []) for i in range(r)]
        return Matrix(f, r, c, out)

    @staticmethod
    def vstack(mats) -> "Matrix":
        return Matrix.hstack([m.transpose() for m in mats]).transpose()

    @staticmethod
    def block_diag(mats) -> "Matrix":
        mats = list(mats)
        if not mats:
            raise HyperfinError("block_diag of nothing")
        f = mats[0].field
        r = sum(m.nrows for m in mats)
        c = sum(m.ncols for m in mats)
        out = Matrix.zeros(f, r, c)
        i0 = j0 = 0
        for m in mats:
            if m.field != f:
                raise FieldMismatch("block_diag mixes fields")
            if f.is_prime:
                out.data[i0:i0 + m.nrows, j0:j0 + m.ncols] = m.data
            else:
                for i in range(m.nrows):
                    row = out.data[i0 + i]
                    src = m.data[i]
                    row[j0:j0 + m.ncols] = src
            i0 += m.nrows
            j0 += m.ncols
        return out

    def submatrix(self, row_idx, col_idx) -> "Matrix":
        row_idx = list(row_idx)
        col_idx = list(col_idx)
        if self.field.is_prime:
            if row_idx and col_idx:
                d = self.data[np.ix_(row_idx, col_idx)].copy()
            else:
                d = np.zeros((len(row_idx), len(col_idx)), dtype=np.int64)
            return Matrix(self.field, len(row_idx), len(col_idx), d)
        out = [[self.data[i][j] for j in col_idx] for i in row_idx]
        return Matrix(self.field, len(row_idx), len(col_idx), out)

    def columns(self, col_idx) -> "Matrix":
        return self.submatrix(range(self.nrows), col_idx)

    def column_vector(self, j) -> "Matrix":
        return self.columns([j])

    # -- elimination -------------------------------------------------------

    def rref(self):
        """Reduced row echelon form; returns (R, pivot_columns)."""
        return _rref(self)

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> "Matrix":
        """Basis of the right nullspace, as columns of a matrix."""
        R, pivots = self.rref()
        return _nullspace_from_rref(self.field, R, pivots, self.ncols)

    def solve(self, rhs: "Matrix"):
        """A particular X with self * X = rhs, or None if inconsistent."""
        return Echelon(self).solve(rhs)

    def inv(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise HyperfinError("inverse of non-square matrix")
        x = self.solve(Matrix.identity(self.field, self.nrows))
        if x is None or self.rank() != self.nrows:
            raise HyperfinError("matrix is singular")
        return x

    def rank_mod_prime(self) -> int:
        """For rational matrices: a lower bound on rank via reduction mod a
        large prime (exact equality holds unless the prime divides relevant
        minors; full-rank answers are certificates)."""
        if self.field.is_prime:
            return self.rank()
        for q in _RANK_PRIMES:
            red = _reduce_mod(self, q)
            if red is not None:
                return _numpy_rank_mod(red, q)
        return self.rank()

    def has_full_column_rank(self) -> bool:
        if self.ncols == 0:
            return True
        if self.field.is_prime:
            return self.rank() == self.ncols
        if self.rank_mod_prime() == self.ncols:
            return True
        return self.rank() == self.ncols


def _reduce_mod(m: Matrix, q: int):
    out = np.zeros((m.nrows, m.ncols), dtype=object)
    for i, row in enumerate(m.data):
        for j, v in enumerate(row):
            num = int(v.numerator)
            den = int(v.denominator)
            if den % q == 0:
                return None
            out[i, j] = (num * pow(den, q - 2, q)) % q
    return out


def _numpy_rank_mod(data, q: int) -> int:
    rows = [list(r) for r in data]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    rank = 0
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if rows[i][c] % q:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c] % q, q - 2, q)
        rows[r] = [(v * inv) % q for v in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] % q:
                f = rows[i][c] % q
                rows[i] = [(a - f * b) % q for a, b in zip(rows[i], rows[r])]
        r += 1
        rank += 1
        if r == nrows:
            break
    return rank


def _nullspace_from_rref(field, R: Matrix, pivots, ncols: int) -> Matrix:
    free = [j for j in range(ncols) if j not in set(pivots)]
    ns = Matrix.zeros(field, ncols, len(free))
    if not free:
        return ns
    if field.is_prime:
        p = field.p
        ns.data[free, range(len(free))] = 1
        if pivots:
            ns.data[list(pivots), :] = (-R.data[np.ix_(range(len(pivots)), free)]) % p
        return ns
    one = field.one()
    for k, j in enumerate(free):
        ns._set(j, k, one)
        for r, pc in enumerate(pivots):
            v = R._get(r, j)
            if v:
                ns._set(pc, k, field.neg(v))
    return ns


def _rref(m: Matrix):
    if m.field.is_prime:
        return _rref_mod(m)
    return _rref_q(m)


def _rref_mod(m: Matrix):
    p = m.field.p
    a = m.data % p
    a = a.copy()
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        pv = int(a[r, c])
        if pv != 1:
            a[r, c:] = (a[r, c:] * pow(pv, p - 2, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            # rows at or below r are zero left of c, and pivot row r is zero
            # left of c as well, so earlier columns are unaffected
            a[mask, c:] = (a[mask, c:] - col[mask, None] * a[r, c:][None, :]) % p
        pivots.append(c)
        r += 1
    return Matrix(m.field, nrows, ncols, a), pivots


def _rref_q(m: Matrix):
    rows = [list(r) for r in m.data]
    nrows = len(rows)
    ncols = m.ncols
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        if pv != 1:
            inv = 1 / pv
            rows[r] = [v * inv if v else v for v in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            if i == r:
                continue
            f = rows[i][c]
            if f:
                ri = rows[i]
                for j in range(c, ncols):
                    pj = prow[j]
                    if pj:
                        ri[j] = ri[j] - f * pj
        pivots.append(c)
        r += 1
    return Matrix(m.field, nrows, ncols, rows), pivots


class Echelon:
    """Factored elimination of A, reusable for many solves.

    Stores R = E*A in rref together with the row transform E, so that
    A x = b is solved by consistency-checking E b against the pivot rows.
    """

    def __init__(self, a: Matrix):
        self.a = a
        aug = Matrix.hstack([a, Matrix.identity(a.field, a.nrows)]) if a.nrows else a.copy()
        R, pivots = _rref(aug) if a.nrows else (a.copy(), [])
        self.pivots = [c for c in pivots if c < a.ncols]
        self.rank = len(self.pivots)
        self.R = R.submatrix(range(a.nrows), range(a.ncols)) if a.nrows else a.copy()
        self.E = R.submatrix(range(a.nrows), range(a.ncols, a.ncols + a.nrows)) if a.nrows else Matrix.identity(a.field, 0)

    def solve(self, rhs: Matrix):
        """A particular X with A X = rhs, or None."""
        if rhs.nrows != self.a.nrows:
            raise HyperfinError("rhs row mismatch")
        c = self.E * rhs
        field = self.a.field
        x = Matrix.zeros(field, self.a.ncols, rhs.ncols)
        if field.is_prime:
            # rows beyond rank must vanish
            if c.data[self.rank:].any():
                return None
            if self.pivots:
                x.data[self.pivots, :] = c.data[:self.rank, :]
            return x
        for i in range(self.rank, self.a.nrows):
            for j in range(rhs.ncols):
                if c._get(i, j):
                    return None
        for r, pc in enumerate(self.pivots):
            # pivot row has free columns too; particular solution sets them 0
            for j in range(rhs.ncols):
                v = c._get(r, j)
                if v:
                    x._set(pc, j, v)
        return x

    def nullspace(self) -> Matrix:
        return _nullspace_from_rref(self.a.field, self.R, self.pivots,
                                    self.a.ncols)


def intersect_columns(a: Matrix, b: Matrix) -> Matrix:
    """Basis (columns) of the intersection of two column spans."""
    if a.ncols == 0 or b.ncols == 0:
        return Matrix.zeros(a.field, a.nrows, 0)
    joint = Matrix.hstack([a, -b])
    ns = joint.nullspace()
    coeff_a = ns.submatrix(range(a.ncols), range(ns.ncols))
    inter = a * coeff_a
    return column_span_basis(inter)


def column_span_basis(m: Matrix) -> Matrix:
    """Subset of columns of m forming a basis of its column span."""
    _, pivots = m.rref()
    return m.columns(pivots)


def preimage_columns(f: Matrix, space: Matrix) -> Matrix:
    """Basis of f^{-1}(span(space)) as columns."""
    if space.ncols == 0:
        return f.nullspace()
    joint = Matrix.hstack([f, -space])
    ns = joint.nullspace()
    pre = ns.submatrix(range(f.ncols), range(ns.ncols))
    return column_span_basis(pre)
