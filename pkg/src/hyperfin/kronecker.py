"""Matrix-level modules over the 2-Kronecker quiver (two arrows 2 -> 1).

A module is a pair of d1 x d2 matrices (A, B) over an exact field, the
two structure maps V2 -> V1.  Orientation is fixed so that projectives
have dimension vectors (1,0) and (2,1), preprojectives (n+1,n), regulars
(m,m), postinjectives (n,n+1).
"""

from __future__ import annotations

import hashlib
import json

import sympy

from .errors import FieldMismatch, HyperfinError, NotInjective, ReduciblePolynomial
from .linalg import Echelon, Field, Matrix, column_span_basis, parse_field

INF = "inf"


class IsoClass:
    """Isomorphism class of an indecomposable: Preproj(n), Postinj(n), or
    Regular(point, m) where point is a monic irreducible polynomial
    (ascending coefficient tuple) or the symbol at infinity."""

    __slots__ = ("kind", "n", "point", "length")

    PREPROJ = "preproj"
    REGULAR = "regular"
    POSTINJ = "postinj"

    def __init__(self, kind, n=None, point=None, length=None):
        self.kind = kind
        self.n = n
        self.point = point
        self.length = length

    @staticmethod
    def preproj(n: int) -> "IsoClass":
        if n < 0:
            raise HyperfinError("preproj index must be >= 0")
        return IsoClass(IsoClass.PREPROJ, n=n)

    @staticmethod
    def postinj(n: int) -> "IsoClass":
        if n < 0:
            raise HyperfinError("postinj index must be >= 0")
        return IsoClass(IsoClass.POSTINJ, n=n)

    @staticmethod
    def regular(point, length: int) -> "IsoClass":
        """point: INF, a scalar (degree-1 point x - lambda), or an ascending
        monic coefficient tuple (c0, ..., c_{d-1}, 1)."""
        if length < 1:
            raise HyperfinError("regular length must be >= 1")
        if point != INF and not isinstance(point, tuple):
            point = (point, 1)  # x - lambda stored as (-lambda, 1) by caller; scalar means lambda
        return IsoClass(IsoClass.REGULAR, point=point, length=length)

    @property
    def degree(self) -> int:
        if self.kind != IsoClass.REGULAR:
            raise HyperfinError("degree only defined for regular classes")
        return 1 if self.point == INF else len(self.point) - 1

    def dim_vector(self):
        if self.kind == IsoClass.PREPROJ:
            return (self.n + 1, self.n)
        if self.kind == IsoClass.POSTINJ:
            return (self.n, self.n + 1)
        d = self.degree * self.length
        return (d, d)

    @property
    def dim(self) -> int:
        a, b = self.dim_vector()
        return a + b

    def _key(self):
        if self.kind == IsoClass.PREPROJ:
            return (0, self.n)
        if self.kind == IsoClass.REGULAR:
            if self.point == INF:
                pt = (1, ())
            else:
                pt = (0, tuple(str(c) for c in self.point))
            return (1, self.degree, pt, self.length)
        return (2, self.n)

    def sort_key(self):
        return self._key()

    def __eq__(self, other):
        return isinstance(other, IsoClass) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.kind == IsoClass.PREPROJ:
            return f"Preproj({self.n})"
        if self.kind == IsoClass.POSTINJ:
            return f"Postinj({self.n})"
        pt = "inf" if self.point == INF else "+".join(
            f"{c}x^{i}" for i, c in enumerate(self.point) if c)
        return f"Regular({pt}, {self.length})"

    def to_json(self):
        if self.kind == IsoClass.PREPROJ:
            return {"class": "preproj", "n": self.n}
        if self.kind == IsoClass.POSTINJ:
            return {"class": "postinj", "n": self.n}
        pt = "inf" if self.point == INF else [str(c) for c in self.point]
        return {"class": "regular", "point": pt, "length": self.length}

    @staticmethod
    def from_json(obj, field: Field) -> "IsoClass":
        kind = obj["class"]
        if kind == "preproj":
            return IsoClass.preproj(int(obj["n"]))
        if kind == "postinj":
            return IsoClass.postinj(int(obj["n"]))
        pt = obj["point"]
        if pt == "inf":
            return IsoClass(IsoClass.REGULAR, point=INF, length=int(obj["length"]))
        coeffs = tuple(field.of(c) for c in pt)
        return IsoClass(IsoClass.REGULAR, point=coeffs, length=int(obj["length"]))


def point_from_scalar(field: Field, lam) -> tuple:
    """Degree-1 regular point x - lambda as an ascending coefficient tuple."""
    return (field.neg(field.of(lam)), field.one())


def _is_irreducible(field: Field, coeffs) -> bool:
    if len(coeffs) < 2:
        return False
    if coeffs[-1] != field.one():
        return False
    if len(coeffs) == 2:
        return True
    x = sympy.Symbol("x")
    desc = list(reversed([int(c) if field.is_prime else sympy.Rational(str(c))
                          for c in coeffs]))
    if field.is_prime:
        poly = sympy.Poly(desc, x, modulus=field.p)
    else:
        poly = sympy.Poly(desc, x, domain="QQ")
    return poly.is_irreducible


class KroneckerModule:
    """A pair of equal-shape matrices over an exact field."""

    __slots__ = ("field", "A", "B")

    def __init__(self, field: Field, A: Matrix, B: Matrix):
        if A.field != field or B.field != field:
            raise FieldMismatch("structure maps over a different field")
        if A.shape != B.shape:
            raise HyperfinError(f"shape mismatch: A {A.shape}, B {B.shape}")
        self.field = field
        self.A = A
        self.B = B

    @property
    def d1(self) -> int:
        return self.A.nrows

    @property
    def d2(self) -> int:
        return self.A.ncols

    @property
    def dim_vector(self):
        return (self.d1, self.d2)

    @property
    def dim(self) -> int:
        return self.d1 + self.d2

    def __repr__(self):
        return f"KroneckerModule({self.field.name}, dims={self.dim_vector})"

    def __eq__(self, other):
        if not isinstance(other, KroneckerModule):
            return NotImplemented
        return self.field == other.field and self.A == other.A and self.B == other.B

    __hash__ = None

    def to_json(self):
        return {
            "field": self.field.name,
            "dims": [self.d1, self.d2],
            "A": [[self.field.to_str(v) for v in row] for row in self.A.rows()],
            "B": [[self.field.to_str(v) for v in row] for row in self.B.rows()],
        }

    @staticmethod
    def from_json(obj) -> "KroneckerModule":
        field = parse_field(obj["field"])
        d1, d2 = (int(v) for v in obj["dims"])
        a = Matrix.from_rows(field, obj["A"], nrows=d1, ncols=d2)
        b = Matrix.from_rows(field, obj["B"], nrows=d1, ncols=d2)
        return KroneckerModule(field, a, b)

    def fingerprint(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def zero_module(field: Field) -> KroneckerModule:
    z = Matrix.zeros(field, 0, 0)
    return KroneckerModule(field, z, z)


def canonical(field: Field, cls: IsoClass) -> KroneckerModule:
    """Canonical model of an isomorphism class."""
    if cls.kind == IsoClass.PREPROJ:
        n = cls.n
        a = Matrix.zeros(field, n + 1, n)
        b = Matrix.zeros(field, n + 1, n)
        one = field.one()
        for i in range(n):
            a._set(i, i, one)
            b._set(i + 1, i, one)
        return KroneckerModule(field, a, b)
    if cls.kind == IsoClass.POSTINJ:
        n = cls.n
        a = Matrix.zeros(field, n, n + 1)
        b = Matrix.zeros(field, n, n + 1)
        one = field.one()
        for i in range(n):
            a._set(i, i, one)
            b._set(i, i + 1, one)
        return KroneckerModule(field, a, b)
    m = cls.length
    if cls.point == INF:
        a = Matrix.zeros(field, m, m)
        one = field.one()
        for i in range(m - 1):
            a._set(i + 1, i, one)
        return KroneckerModule(field, a, Matrix.identity(field, m))
    coeffs = cls.point
    if not _is_irreducible(field, coeffs):
        raise ReduciblePolynomial(f"point {coeffs} is not monic irreducible")
    d = cls.degree
    n = m * d
    # multiplication by x on k[x]/(pi^m) in the basis x^a pi^b,
    # index a + d*b with a < d, b < m
    b_mat = Matrix.zeros(field, n, n)
    one = field.one()
    for bb in range(m):
        for a in range(d - 1):
            b_mat._set(bb * d + a + 1, bb * d + a, one)
        col = bb * d + d - 1
        # x * x^{d-1} pi^b = pi^{b+1} - sum_a c_a x^a pi^b
        if bb + 1 < m:
            b_mat._set((bb + 1) * d, col, one)
        for a in range(d):
            c = coeffs[a]
            if c:
                b_mat._set(bb * d + a, col, field.neg(c))
    return KroneckerModule(field, Matrix.identity(field, n), b_mat)


def direct_sum(*mods) -> KroneckerModule:
    mods = [m for m in mods if m.dim > 0] or list(mods[:1]) if mods else []
    if not mods:
        raise HyperfinError("direct_sum of nothing; use zero_module")
    field = mods[0].field
    for m in mods:
        if m.field != field:
            raise FieldMismatch("direct_sum mixes fields")
    if len(mods) == 1:
        return mods[0]
    a = Matrix.block_diag([m.A for m in mods])
    b = Matrix.block_diag([m.B for m in mods])
    return KroneckerModule(field, a, b)


class Morphism:
    """Intertwining pair (f1, f2): f1 A_src = A_tgt f2 and same for B.

    The constructor checks the equations exactly unless check=False is
    passed by a caller that guarantees them structurally.
    """

    __slots__ = ("source", "target", "f1", "f2")

    def __init__(self, source: KroneckerModule, target: KroneckerModule,
                 f1: Matrix, f2: Matrix, check: bool = True):
        if source.field != target.field:
            raise FieldMismatch("morphism between different fields")
        if f1.shape != (target.d1, source.d1) or f2.shape != (target.d2, source.d2):
            raise HyperfinError(
                f"component shapes {f1.shape}, {f2.shape} do not fit "
                f"{source.dim_vector} -> {target.dim_vector}")
        if check:
            if f1 * source.A != target.A * f2 or f1 * source.B != target.B * f2:
                raise HyperfinError("matrices do not intertwine")
        self.source = source
        self.target = target
        self.f1 = f1
        self.f2 = f2

    @staticmethod
    def identity(m: KroneckerModule) -> "Morphism":
        f = m.field
        return Morphism(m, m, Matrix.identity(f, m.d1), Matrix.identity(f, m.d2),
                        check=False)

    @staticmethod
    def zero(source: KroneckerModule, target: KroneckerModule) -> "Morphism":
        f = source.field
        return Morphism(source, target, Matrix.zeros(f, target.d1, source.d1),
                        Matrix.zeros(f, target.d2, source.d2), check=False)

    def compose(self, other: "Morphism") -> "Morphism":
        """self after other (other first)."""
        if other.target is not self.source and other.target.dim_vector != self.source.dim_vector:
            raise HyperfinError("composition shape mismatch")
        return Morphism(other.source, self.target,
                        self.f1 * other.f1, self.f2 * other.f2, check=False)

    def __add__(self, other: "Morphism") -> "Morphism":
        return Morphism(self.source, self.target,
                        self.f1 + other.f1, self.f2 + other.f2, check=False)

    def scale(self, c) -> "Morphism":
        return Morphism(self.source, self.target,
                        self.f1.scale(c), self.f2.scale(c), check=False)

    def is_zero(self) -> bool:
        return self.f1.is_zero() and self.f2.is_zero()

    def is_injective(self) -> bool:
        return self.f1.has_full_column_rank() and self.f2.has_full_column_rank()

    def is_surjective(self) -> bool:
        return (self.f1.transpose().has_full_column_rank()
                and self.f2.transpose().has_full_column_rank())

    def is_isomorphism(self) -> bool:
        return (self.source.dim_vector == self.target.dim_vector
                and self.is_injective())

    def inverse(self) -> "Morphism":
        if not self.is_isomorphism():
            raise HyperfinError("morphism is not invertible")
        return Morphism(self.target, self.source, self.f1.inv(), self.f2.inv(),
                        check=False)

    def check_intertwining(self) -> bool:
        return (self.f1 * self.source.A == self.target.A * self.f2
                and self.f1 * self.source.B == self.target.B * self.f2)

    def to_json(self):
        f = self.source.field
        return {
            "source_dims": list(self.source.dim_vector),
            "target_dims": list(self.target.dim_vector),
            "f1": [[f.to_str(v) for v in row] for row in self.f1.rows()],
            "f2": [[f.to_str(v) for v in row] for row in self.f2.rows()],
        }

    def __repr__(self):
        return f"Morphism({self.source.dim_vector} -> {self.target.dim_vector})"


def morphism_direct_sum(parts) -> Morphism:
    parts = list(parts)
    if not parts:
        raise HyperfinError("direct sum of no morphisms")
    src = direct_sum(*[p.source for p in parts]) if len(parts) > 1 else parts[0].source
    tgt = direct_sum(*[p.target for p in parts]) if len(parts) > 1 else parts[0].target
    f1 = Matrix.block_diag([p.f1 for p in parts])
    f2 = Matrix.block_diag([p.f2 for p in parts])
    return Morphism(src, tgt, f1, f2, check=False)


def submodule_from_embedding(phi: Morphism) -> KroneckerModule:
    """Image of an injective morphism with the restricted structure maps."""
    if not phi.is_injective():
        raise NotInjective("embedding has a kernel")
    m = phi.target
    w1 = column_span_basis(phi.f1)
    w2 = column_span_basis(phi.f2)
    ech = Echelon(w1)
    a = ech.solve(m.A * w2)
    b = ech.solve(m.B * w2)
    if a is None or b is None:
        raise HyperfinError("image not closed under structure maps")
    return KroneckerModule(m.field, a, b)
