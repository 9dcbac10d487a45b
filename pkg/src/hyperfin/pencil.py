"""Ground-truth decomposition of Kronecker modules into indecomposables.

Strategy: peel split-epi quotients onto minimal preprojectives and
split-mono copies of minimal postinjectives (found by nullspace
staircases), then split the remaining regular pencil by the generalized
kernel chain at infinity and a primary cyclic decomposition of the
induced k[x]-operator on the finite part.
"""

from __future__ import annotations

import random
import warnings

import sympy

from .errors import HyperfinError, SearchExhausted
from .kronecker import (INF, IsoClass, KroneckerModule, Morphism, canonical,
                        direct_sum, zero_module)
from .linalg import Echelon, Field, Matrix, column_span_basis, intersect_columns, \
    preimage_columns

_X = sympy.Symbol("x")


class Decomposition:
    """Multiset of iso classes plus an invertible intertwiner from the
    direct sum of their canonical models to the input module."""

    __slots__ = ("summands", "change_of_basis")

    def __init__(self, summands, change_of_basis: Morphism):
        self.summands = list(summands)
        self.change_of_basis = change_of_basis

    def multiset(self):
        out = {}
        for c in self.summands:
            out[c] = out.get(c, 0) + 1
        return out

    def to_json(self):
        groups = []
        seen = []
        for c in self.summands:
            for g in groups:
                if g["_cls"] == c:
                    g["mult"] += 1
                    break
            else:
                groups.append({"_cls": c, "class": c.to_json(), "mult": 1})
        for g in groups:
            del g["_cls"]
        return {"summands": groups, "basis_change": self.change_of_basis.to_json()}


def canonical_sum(field: Field, classes) -> KroneckerModule:
    classes = list(classes)
    if not classes:
        return zero_module(field)
    return direct_sum(*[canonical(field, c) for c in classes])


# -- staircase detection of minimal singular blocks ------------------------

def _min_chain(a: Matrix, b: Matrix, max_k: int):
    """Minimal k with a nonzero chain v_1..v_{k+1} satisfying
    b v_1 = 0, a v_i = b v_{i+1}, a v_{k+1} = 0; returns (k, [v_i]) or None.

    This is the smallest postinjective index of the module (a, b).
    """
    field = a.field
    t = b.nullspace()
    towers = [t]
    ker_a = a.nullspace()
    prev_dim = -1
    k = 0
    while True:
        meet = intersect_columns(t, ker_a)
        if meet.ncols:
            x = meet.column_vector(0)
            chain = [x]
            for i in range(k - 1, -1, -1):
                ti = towers[i]
                rhs = b * chain[0]
                sol = Echelon(a * ti).solve(rhs)
                if sol is None:
                    raise HyperfinError("staircase walk-back failed")
                chain.insert(0, ti * sol)
            return k, chain
        if t.ncols == prev_dim or k >= max_k:
            return None
        prev_dim = t.ncols
        t = preimage_columns(b, a * t)
        towers.append(t)
        k += 1


# -- constrained chain solving (sections and retractions) ------------------

def _chain_solve(a: Matrix, b: Matrix, c: Matrix, rhs_cols, n: int) -> Matrix:
    """Columns u_1..u_n with a u_{i+1} = b u_i and c u_i = rhs_i.

    Existence must be guaranteed by the caller (split situation); raises
    on inconsistency.  One echelon factorization of [a; c] is reused for
    every step.
    """
    field = a.field
    m = a.ncols
    ech1 = Echelon(c)
    p = ech1.solve(rhs_cols[0])
    if p is None:
        raise HyperfinError("chain start inconsistent")
    k = ech1.nullspace()
    if n == 1:
        return p
    f = Matrix.vstack([a, c])
    ech = Echelon(f)
    n0 = ech.nullspace()
    defrows = list(range(ech.rank, f.nrows))
    edef = ech.E.submatrix(defrows, range(f.nrows))
    parts = [(p, k)]
    q = c.nrows
    for i in range(1, n):
        rhs0 = Matrix.vstack([b * p, rhs_cols[i]])
        r = Matrix.vstack([b * k, Matrix.zeros(field, q, k.ncols)])
        cond = Echelon(edef * r)
        cpart = cond.solve(-(edef * rhs0))
        if cpart is None:
            raise HyperfinError("chain step inconsistent")
        cdirs = cond.nullspace()
        p = ech.solve(rhs0 + r * cpart)
        if p is None:
            raise HyperfinError("chain step solve failed")
        pieces = [n0]
        if cdirs.ncols:
            extra = ech.solve(r * cdirs)
            if extra is None:
                raise HyperfinError("chain direction solve failed")
            pieces.append(extra)
        k = column_span_basis(Matrix.hstack(pieces))
        parts.append((p, k))
    # backward pass: pick u_n, then resolve predecessors inside their sets
    us = [None] * n
    us[n - 1] = parts[n - 1][0]
    for i in range(n - 2, -1, -1):
        pi, ki = parts[i]
        rhs = a * us[i + 1] - b * pi
        if ki.ncols:
            sol = Echelon(b * ki).solve(rhs)
            if sol is None:
                raise HyperfinError("chain backward solve failed")
            us[i] = pi + ki * sol
        else:
            if not rhs.is_zero():
                raise HyperfinError("chain backward inconsistent")
            us[i] = pi
    return Matrix.hstack(us)


# -- peeling singular summands ----------------------------------------------

def _peel_preproj(m: KroneckerModule):
    """(IsoClass, section Morphism, kernel module, kernel inclusion) for a
    minimal preprojective quotient, or None."""
    if m.d1 == 0:
        return None
    found = _min_chain(m.A.transpose(), m.B.transpose(), m.d1 - 1)
    if found is None:
        return None
    n, chain = found
    field = m.field
    f1 = Matrix.hstack(chain).transpose()
    f2 = Matrix.hstack([m.A.transpose() * v for v in chain[:n]]).transpose() \
        if n else Matrix.zeros(field, 0, m.d2)
    pn = canonical(field, IsoClass.preproj(n))
    f = Morphism(m, pn, f1, f2)
    if not f.is_surjective():
        raise HyperfinError("minimal preprojective quotient not surjective")
    if n == 0:
        w = Echelon(f1).solve(Matrix.identity(field, 1))
        if w is None:
            raise HyperfinError("no section onto simple projective")
        sec = Morphism(pn, m, w, Matrix.zeros(field, m.d2, 0), check=False)
    else:
        targets = [Matrix.identity(field, n).column_vector(i) for i in range(n)]
        s2 = _chain_solve(m.A, m.B, f2, targets, n)
        cols = [m.A * s2.column_vector(0)]
        for i in range(n):
            cols.append(m.B * s2.column_vector(i))
        sec = Morphism(pn, m, Matrix.hstack(cols), s2, check=False)
    from .homalg import kernel
    ker, incl = kernel(f)
    return IsoClass.preproj(n), sec, ker, incl


def _peel_postinj(m: KroneckerModule):
    """(IsoClass, embedding Morphism, complement module, inclusion) for a
    minimal postinjective summand, or None."""
    if m.d2 == 0:
        return None
    found = _min_chain(m.A, m.B, m.d2 - 1)
    if found is None:
        return None
    k, chain = found
    field = m.field
    g2 = Matrix.hstack(chain)
    g1 = Matrix.hstack([m.A * v for v in chain[:k]]) \
        if k else Matrix.zeros(field, m.d1, 0)
    qk = canonical(field, IsoClass.postinj(k))
    g = Morphism(qk, m, g1, g2)
    if not g.is_injective():
        raise HyperfinError("minimal postinjective map not injective")
    if k == 0:
        t = Echelon(g2.transpose()).solve(Matrix.identity(field, 1))
        if t is None:
            raise HyperfinError("no retraction off simple injective")
        r = Morphism(m, qk, Matrix.zeros(field, 0, m.d1), t.transpose(),
                     check=False)
    else:
        targets = [Matrix.identity(field, k).column_vector(i) for i in range(k)]
        sigma = _chain_solve(m.A.transpose(), m.B.transpose(),
                             g1.transpose(), targets, k)
        r1 = sigma.transpose()
        rows = [r1.submatrix([i], range(m.d1)) * m.A for i in range(k)]
        rows.append(r1.submatrix([k - 1], range(m.d1)) * m.B)
        r = Morphism(m, qk, r1, Matrix.vstack(rows), check=False)
    comp = r.compose(g)
    if comp.f1 != Matrix.identity(field, qk.d1) or \
            comp.f2 != Matrix.identity(field, qk.d2):
        raise HyperfinError("retraction does not split the embedding")
    from .homalg import kernel
    ker, incl = kernel(r)
    return IsoClass.postinj(k), g, ker, incl


# -- polynomial helpers ------------------------------------------------------

def _to_sympy_poly(field: Field, coeffs):
    desc = list(reversed([int(v) if field.is_prime else sympy.Rational(str(v))
                          for v in coeffs]))
    if field.is_prime:
        return sympy.Poly(desc, _X, modulus=field.p)
    return sympy.Poly(desc, _X, domain="QQ")


def _from_sympy_poly(field: Field, poly) -> tuple:
    coeffs = list(reversed(poly.all_coeffs()))
    out = tuple(field.of(int(c) if field.is_prime else str(sympy.Rational(c)))
                for c in coeffs)
    # normalize to monic
    lead = out[-1]
    if lead != field.one():
        inv = field.inv(lead)
        if field.is_prime:
            out = tuple((v * inv) % field.p for v in out)
        else:
            out = tuple(v * inv for v in out)
    return out


def _poly_of_matrix(cmat: Matrix, coeffs) -> Matrix:
    """Horner evaluation of an ascending-coefficient polynomial at cmat."""
    field = cmat.field
    n = cmat.nrows
    acc = Matrix.identity(field, n).scale(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = acc * cmat
        if c:
            acc = acc + Matrix.identity(field, n).scale(c)
    return acc


def _local_minpoly(cmat: Matrix, v: Matrix) -> tuple:
    """Monic minimal polynomial of the vector v under cmat (ascending)."""
    field = cmat.field
    n = cmat.nrows
    vecs = [v]
    cur = v
    for _ in range(n):
        cur = cmat * cur
        vecs.append(cur)
    krylov = Matrix.hstack(vecs)
    _, pivots = krylov.rref()
    j = next(c for c in range(krylov.ncols) if c not in pivots)
    sol = Echelon(krylov.columns(range(j))).solve(vecs[j])
    if sol is None:
        raise HyperfinError("Krylov dependence solve failed")
    coeffs = [field.neg(sol._get(i, 0)) for i in range(j)]
    coeffs.append(field.one())
    return tuple(coeffs)


def _min_poly(cmat: Matrix) -> tuple:
    """Monic minimal polynomial of a square matrix (ascending coeffs)."""
    field = cmat.field
    n = cmat.nrows
    if n == 0:
        return (field.one(),)
    m_poly = None
    m_eval = None
    for i in range(n):
        e = Matrix.identity(field, n).column_vector(i)
        if m_eval is not None and (m_eval * e).is_zero():
            continue
        loc = _local_minpoly(cmat, e)
        if m_poly is None:
            m_poly = loc
        else:
            a = _to_sympy_poly(field, m_poly)
            b = _to_sympy_poly(field, loc)
            m_poly = _from_sympy_poly(field, sympy.lcm(a, b))
        m_eval = _poly_of_matrix(cmat, m_poly)
        if m_eval.is_zero():
            return m_poly
    raise HyperfinError("minimal polynomial search did not terminate")


def _factor_poly(field: Field, coeffs):
    """[(ascending monic irreducible factor, multiplicity)]."""
    poly = _to_sympy_poly(field, coeffs)
    with warnings.catch_warnings():
        # sympy's internal factor ordering compares modular integers
        warnings.simplefilter("ignore")
        _, factors = sympy.factor_list(poly)
    return [(_from_sympy_poly(field, f), int(e)) for f, e in factors]


# -- primary cyclic decomposition -------------------------------------------

def _orbit(cmat, nmat, v: Matrix, height: int, deg: int):
    """Vectors c^a n^b v for b < height, a < deg, in canonical basis order."""
    cols = []
    w = v
    for b in range(height):
        cur = w
        for a in range(deg):
            cols.append(cur)
            if a + 1 < deg:
                cur = cmat * cur
        if b + 1 < height:
            w = nmat * w
    return cols


def _cyclic_generators(cmat: Matrix, nmat: Matrix, deg: int, e: int, rng):
    """Greedy primary cyclic decomposition of ker nmat^e under the operator
    cmat, where nmat = pi(cmat) for an irreducible pi of degree deg.

    Returns a list of (generator vector, height), tallest first.
    """
    field = cmat.field
    dim = cmat.nrows
    kers = [Matrix.zeros(field, dim, 0)]
    power = Matrix.identity(field, dim)
    for _ in range(e):
        power = power * nmat
        kers.append(power.nullspace())
    gens = []
    span = Matrix.zeros(field, dim, 0)

    def try_vec(v, h):
        nonlocal span
        if v.is_zero():
            return False
        cols = _orbit(cmat, nmat, v, h, deg)
        cand = Matrix.hstack([span] + cols) if span.ncols else Matrix.hstack(cols)
        if cand.rank() == span.ncols + h * deg:
            span = column_span_basis(cand)
            gens.append((v, h))
            return True
        return False

    for h in range(e, 0, -1):
        layer = (kers[h].ncols - kers[h - 1].ncols) // deg
        need = layer - sum(1 for _, hh in gens if hh > h)
        basis = kers[h]
        for _ in range(need):
            placed = False
            for j in range(basis.ncols):
                if try_vec(basis.column_vector(j), h):
                    placed = True
                    break
            if not placed:
                for _ in range(64):
                    lo, hi = (0, field.p - 1) if field.is_prime else (-8, 8)
                    combo = Matrix.zeros(field, dim, 1)
                    for j in range(basis.ncols):
                        c = rng.randint(lo, hi)
                        if c:
                            combo = combo + basis.column_vector(j).scale(c)
                    if try_vec(combo, h):
                        placed = True
                        break
            if not placed:
                raise SearchExhausted("no cyclic generator found at height "
                                      f"{h}")
    return gens


def _split_regular(m: KroneckerModule):
    """Summand blocks of a regular pencil: [(IsoClass, f1 cols, f2 cols)]."""
    field = m.field
    if m.d1 != m.d2:
        raise HyperfinError("regular part is not square")
    d = m.d2
    if d == 0:
        return []
    rng = random.Random(0)
    # generalized kernel at infinity and its complement
    kb = m.A.nullspace()
    while True:
        nxt = preimage_columns(m.A, m.B * kb)
        if nxt.ncols == kb.ncols:
            break
        kb = nxt
    ib = Matrix.identity(field, d)
    while True:
        nxt = preimage_columns(m.B, m.A * ib)
        if nxt.ncols == ib.ncols:
            break
        ib = nxt
    if kb.ncols + ib.ncols != d or \
            Matrix.hstack([kb, ib]).rank() != d:
        raise HyperfinError("infinite/finite split failed; pencil not regular")
    parts = []
    if kb.ncols:
        bk = Echelon(m.B * kb)
        dmat = bk.solve(m.A * kb)
        if dmat is None:
            raise HyperfinError("operator at infinity not defined")
        e = 0
        power = Matrix.identity(field, kb.ncols)
        while not power.is_zero():
            power = power * dmat
            e += 1
            if e > kb.ncols:
                raise HyperfinError("operator at infinity not nilpotent")
        gens = _cyclic_generators(dmat, dmat, 1, e, rng)
        for v, h in gens:
            f2 = Matrix.hstack([kb * c for c in _orbit(dmat, dmat, v, h, 1)])
            f1 = m.B * f2
            parts.append((IsoClass.regular(INF, h), f1, f2))
    if ib.ncols:
        ai = Echelon(m.A * ib)
        cop = ai.solve(m.B * ib)
        if cop is None:
            raise HyperfinError("finite-part operator not defined")
        mp = _min_poly(cop)
        for pi, e in _factor_poly(field, mp):
            deg = len(pi) - 1
            nmat = _poly_of_matrix(cop, pi)
            gens = _cyclic_generators(cop, nmat, deg, e, rng)
            for v, h in gens:
                f2 = Matrix.hstack([ib * c for c in _orbit(cop, nmat, v, h, deg)])
                f1 = m.A * f2
                parts.append((IsoClass.regular(pi, h), f1, f2))
    return parts


# -- full decomposition -------------------------------------------------------

def _split(m: KroneckerModule):
    """[(IsoClass, f1 cols, f2 cols)] in the coordinates of m."""
    if m.dim == 0:
        return []
    peel = _peel_preproj(m)
    if peel is None:
        peel = _peel_postinj(m)
    if peel is not None:
        cls, emb, ker, incl = peel
        parts = [(cls, emb.f1, emb.f2)]
        for c, f1, f2 in _split(ker):
            parts.append((c, incl.f1 * f1, incl.f2 * f2))
        return parts
    return _split_regular(m)


def decompose(m: KroneckerModule) -> Decomposition:
    parts = sorted(_split(m), key=lambda p: p[0].sort_key())
    classes = [p[0] for p in parts]
    src = canonical_sum(m.field, classes)
    if parts:
        f1 = Matrix.hstack([p[1] for p in parts])
        f2 = Matrix.hstack([p[2] for p in parts])
    else:
        f1 = Matrix.zeros(m.field, m.d1, 0)
        f2 = Matrix.zeros(m.field, m.d2, 0)
    cob = Morphism(src, m, f1, f2)
    if not cob.is_isomorphism():
        raise HyperfinError("assembled basis change is not invertible")
    return Decomposition(classes, cob)


def verify_decomposition(m: KroneckerModule, d: Decomposition) -> bool:
    try:
        src = canonical_sum(m.field, d.summands)
        cob = d.change_of_basis
        if cob.source.dim_vector != src.dim_vector or \
                cob.target.dim_vector != m.dim_vector:
            return False
        probe = Morphism(src, m, cob.f1, cob.f2)  # rechecks intertwining
        return probe.is_isomorphism()
    except HyperfinError:
        return False
