"""Homological linear algebra over Kronecker modules: Hom bases,
kernels, images, cokernels, pullbacks, split tests and injective lifts.

Hom spaces are nullspaces of the flattened intertwining equations.  The
vec convention is column-major throughout: vec(AXB) = (B^T kron A) vec(X).
"""

from __future__ import annotations

import random

import numpy as np

from .errors import FieldMismatch, HyperfinError, NoLift, TargetMismatch
from .kronecker import KroneckerModule, Morphism
from .linalg import Echelon, Matrix, column_span_basis


def kron(a: Matrix, b: Matrix) -> Matrix:
    if a.field != b.field:
        raise FieldMismatch("kron mixes fields")
    f = a.field
    if f.is_prime:
        return Matrix(f, a.nrows * b.nrows, a.ncols * b.ncols,
                      np.kron(a.data, b.data) % f.p)
    out = Matrix.zeros(f, a.nrows * b.nrows, a.ncols * b.ncols)
    for i in range(a.nrows):
        for j in range(a.ncols):
            v = a.data[i][j]
            if not v:
                continue
            for k in range(b.nrows):
                row = out.data[i * b.nrows + k]
                brow = b.data[k]
                for l in range(b.ncols):
                    if brow[l]:
                        row[j * b.ncols + l] = v * brow[l]
    return out


def mat_to_vec(m: Matrix) -> Matrix:
    """Column-major flattening into a column vector."""
    f = m.field
    if f.is_prime:
        return Matrix(f, m.nrows * m.ncols, 1,
                      m.data.T.reshape(-1, 1).copy())
    out = [[m.data[i][j]] for j in range(m.ncols) for i in range(m.nrows)]
    return Matrix(f, m.nrows * m.ncols, 1, out)


def vec_to_mat(v: Matrix, nrows: int, ncols: int) -> Matrix:
    f = v.field
    if f.is_prime:
        return Matrix(f, nrows, ncols,
                      v.data.reshape(ncols, nrows).T.copy() % f.p)
    out = Matrix.zeros(f, nrows, ncols)
    for j in range(ncols):
        for i in range(nrows):
            out.data[i][j] = v.data[j * nrows + i][0]
    return out


def hom_system(m: KroneckerModule, n: KroneckerModule) -> Matrix:
    """Coefficient matrix of the intertwining equations in the unknowns
    (vec f1, vec f2)."""
    if m.field != n.field:
        raise FieldMismatch("hom between different fields")
    f = m.field
    i1 = Matrix.identity(f, n.d1)
    i2 = Matrix.identity(f, m.d2)
    # f1 A_m = A_n f2  <=>  (A_m^T kron I_{n1}) vec f1 - (I_{m2} kron A_n) vec f2 = 0
    rows_a = Matrix.hstack([kron(m.A.transpose(), i1), -kron(i2, n.A)])
    rows_b = Matrix.hstack([kron(m.B.transpose(), i1), -kron(i2, n.B)])
    return Matrix.vstack([rows_a, rows_b])


def _unpack_hom(m, n, col: Matrix) -> Morphism:
    k1 = n.d1 * m.d1
    f1 = vec_to_mat(col.submatrix(range(k1), [0]), n.d1, m.d1)
    f2 = vec_to_mat(col.submatrix(range(k1, col.nrows), [0]), n.d2, m.d2)
    return Morphism(m, n, f1, f2)


def hom_basis(m: KroneckerModule, n: KroneckerModule) -> list:
    sys = hom_system(m, n)
    ns = sys.nullspace()
    return [_unpack_hom(m, n, ns.column_vector(j)) for j in range(ns.ncols)]


def hom_dim(m: KroneckerModule, n: KroneckerModule) -> int:
    sys = hom_system(m, n)
    return sys.ncols - sys.rank()


def euler_pairing(m: KroneckerModule, n: KroneckerModule) -> int:
    x, y = m.dim_vector, n.dim_vector
    return x[0] * y[0] + x[1] * y[1] - 2 * x[1] * y[0]


def ext_dim(m: KroneckerModule, n: KroneckerModule) -> int:
    e = hom_dim(m, n) - euler_pairing(m, n)
    if e < 0:
        raise HyperfinError("negative Ext dimension; solver bug")
    return e


def kernel(f: Morphism):
    """(K, inclusion K -> source)."""
    src = f.source
    k1 = f.f1.nullspace()
    k2 = f.f2.nullspace()
    ech = Echelon(k1)
    a = ech.solve(src.A * k2)
    b = ech.solve(src.B * k2)
    if a is None or b is None:
        raise HyperfinError("kernel not closed under structure maps")
    k = KroneckerModule(src.field, a, b)
    return k, Morphism(k, src, k1, k2, check=False)


def image(f: Morphism):
    """(I, epi source -> I, mono I -> target) with mono . epi = f."""
    tgt = f.target
    w1 = column_span_basis(f.f1)
    w2 = column_span_basis(f.f2)
    e1 = Echelon(w1)
    e2 = Echelon(w2)
    a = e1.solve(tgt.A * w2)
    b = e1.solve(tgt.B * w2)
    if a is None or b is None:
        raise HyperfinError("image not closed under structure maps")
    img = KroneckerModule(tgt.field, a, b)
    epi1 = e1.solve(f.f1)
    epi2 = e2.solve(f.f2)
    return img, Morphism(f.source, img, epi1, epi2, check=False), \
        Morphism(img, tgt, w1, w2, check=False)


def quotient_projection(w: Matrix):
    """(projection pi: k^n -> k^q, section s) for the quotient by span(w);
    pi s = id and ker pi = span(w)."""
    f = w.field
    n = w.nrows
    aug = Matrix.hstack([w, Matrix.identity(f, n)])
    _, pivots = aug.rref()
    wcols = [c for c in pivots if c < w.ncols]
    ecols = [c - w.ncols for c in pivots if c >= w.ncols]
    basis = Matrix.hstack([w.columns(wcols),
                           Matrix.identity(f, n).columns(ecols)])
    binv = basis.inv()
    proj = binv.submatrix(range(len(wcols), n), range(n))
    section = Matrix.identity(f, n).columns(ecols)
    return proj, section


def cokernel(f: Morphism):
    """(C, projection target -> C)."""
    tgt = f.target
    p1, s1 = quotient_projection(column_span_basis(f.f1))
    p2, s2 = quotient_projection(column_span_basis(f.f2))
    a = p1 * tgt.A * s2
    b = p1 * tgt.B * s2
    c = KroneckerModule(tgt.field, a, b)
    return c, Morphism(tgt, c, p1, p2)


def pullback(f: Morphism, g: Morphism):
    """(E, E -> f.source, E -> g.source) for legs with a common target."""
    if f.target.dim_vector != g.target.dim_vector or f.target.A != g.target.A \
            or f.target.B != g.target.B:
        raise TargetMismatch("pullback legs must share a target")
    x, y = f.source, g.source
    n1 = Matrix.hstack([f.f1, -g.f1]).nullspace()
    n2 = Matrix.hstack([f.f2, -g.f2]).nullspace()
    big_a = Matrix.block_diag([x.A, y.A])
    big_b = Matrix.block_diag([x.B, y.B])
    ech = Echelon(n1)
    a = ech.solve(big_a * n2)
    b = ech.solve(big_b * n2)
    if a is None or b is None:
        raise HyperfinError("pullback not closed under structure maps")
    e = KroneckerModule(x.field, a, b)
    px = Morphism(e, x, n1.submatrix(range(x.d1), range(n1.ncols)),
                  n2.submatrix(range(x.d2), range(n2.ncols)), check=False)
    py = Morphism(e, y, n1.submatrix(range(x.d1, n1.nrows), range(n1.ncols)),
                  n2.submatrix(range(x.d2, n2.nrows), range(n2.ncols)), check=False)
    return e, px, py


class ShortExactSequence:
    """0 -> left -(iota)-> middle -(pi)-> right -> 0, checked exactly."""

    __slots__ = ("iota", "pi")

    def __init__(self, iota: Morphism, pi: Morphism):
        if iota.target.dim_vector != pi.source.dim_vector:
            raise HyperfinError("sequence middle mismatch")
        if not iota.is_injective():
            raise HyperfinError("left map not injective")
        if not pi.is_surjective():
            raise HyperfinError("right map not surjective")
        if iota.source.dim + pi.target.dim != iota.target.dim:
            raise HyperfinError("dimensions not additive")
        if not (pi.compose(iota).is_zero()):
            raise HyperfinError("composition pi . iota nonzero")
        self.iota = iota
        self.pi = pi

    @property
    def left(self):
        return self.iota.source

    @property
    def middle(self):
        return self.iota.target

    @property
    def right(self):
        return self.pi.target


def ses_from_epi(pi: Morphism) -> ShortExactSequence:
    _, incl = kernel(pi)
    return ShortExactSequence(incl, pi)


def _solve_constrained_hom(src: KroneckerModule, tgt: KroneckerModule,
                           constraints):
    """A morphism src -> tgt satisfying linear constraints, or None.

    Each constraint is (l1, r1, rhs1, l2, r2, rhs2) imposing
    l_i * f_i * r_i = rhs_i componentwise; any l/r may be None for the
    identity.
    """
    f = src.field
    sys = hom_system(src, tgt)
    rows = [sys]
    rhs = [Matrix.zeros(f, sys.nrows, 1)]
    k1 = tgt.d1 * src.d1
    k2 = tgt.d2 * src.d2

    def piece(l, r, nrows_f, ncols_f):
        l = l if l is not None else Matrix.identity(f, nrows_f)
        r = r if r is not None else Matrix.identity(f, ncols_f)
        return kron(r.transpose(), l)

    for l1, r1, v1, l2, r2, v2 in constraints:
        c1 = piece(l1, r1, tgt.d1, src.d1)
        c2 = piece(l2, r2, tgt.d2, src.d2)
        rows.append(Matrix.hstack([c1, Matrix.zeros(f, c1.nrows, k2)]))
        rows.append(Matrix.hstack([Matrix.zeros(f, c2.nrows, k1), c2]))
        rhs.extend([mat_to_vec(v1), mat_to_vec(v2)])
    big = Matrix.vstack(rows)
    b = Matrix.vstack(rhs)
    sol = big.solve(b)
    if sol is None:
        return None
    return _unpack_hom(src, tgt, sol)


def is_split(s: ShortExactSequence):
    """A section of pi if one exists, else None."""
    f = s.right.field
    id1 = Matrix.identity(f, s.right.d1)
    id2 = Matrix.identity(f, s.right.d2)
    return _solve_constrained_hom(
        s.right, s.middle,
        [(s.pi.f1, None, id1, s.pi.f2, None, id2)])


def lift_through_injective(f: Morphism, iota: Morphism) -> Morphism:
    """fbar: iota.target -> f.target with fbar . iota = f."""
    if f.source.dim_vector != iota.source.dim_vector:
        raise HyperfinError("lift sources differ")
    lift = _solve_constrained_hom(
        iota.target, f.target,
        [(None, iota.f1, f.f1, None, iota.f2, f.f2)])
    if lift is None:
        raise NoLift("no extension; target is not injective enough")
    return lift


def _try_invertible(cands):
    for m in cands:
        if m.is_isomorphism():
            return m
    return None


def iso_test(m: KroneckerModule, n: KroneckerModule):
    """An invertible intertwiner m -> n, or None."""
    if m.field != n.field:
        raise FieldMismatch("iso test between fields")
    if m.dim_vector != n.dim_vector:
        return None
    if m.A == n.A and m.B == n.B:
        return Morphism.identity(m)
    basis = hom_basis(m, n)
    if not basis:
        return None
    total = basis[0]
    for b in basis[1:]:
        total = total + b
    found = _try_invertible([total])
    if found is not None:
        return found
    rng = random.Random(0)
    lo, hi = (0, m.field.p - 1) if m.field.is_prime else (-4, 4)
    for _ in range(8):
        cand = basis[0].scale(rng.randint(lo, hi))
        for b in basis[1:]:
            cand = cand + b.scale(rng.randint(lo, hi))
        found = _try_invertible([cand])
        if found is not None:
            return found
    if m.field.is_prime and m.field.p ** len(basis) <= 4096:
        from itertools import product
        for coeffs in product(range(m.field.p), repeat=len(basis)):
            cand = basis[0].scale(coeffs[0])
            for b, c in zip(basis[1:], coeffs[1:]):
                cand = cand + b.scale(c)
            found = _try_invertible([cand])
            if found is not None:
                return found
        return None
    # deterministic fallback: compare canonical decompositions
    from . import pencil
    dm = pencil.decompose(m)
    dn = pencil.decompose(n)
    if sorted(c.sort_key() for c in dm.summands) != \
            sorted(c.sort_key() for c in dn.summands):
        return None
    return dn.change_of_basis.compose(dm.change_of_basis.inverse())
