"""Lattice-level calculus for quivers of arbitrary rank: Euler matrices,
radical vectors, Coxeter matrices, tube dimension-vector arithmetic, and
the defect minus-two identities of the weighted rank-two types.

Everything here is exact integer or rational arithmetic on dimension
vectors; no representation matrices are involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import sympy

from . import k0
from .errors import CyclicQuiver, HyperfinError, KOutOfRange, NotTame


@dataclass(frozen=True)
class QuiverSpec:
    """Finite quiver with 1-indexed vertices and an arrow multiset."""

    vertices: int
    arrows: tuple

    def __post_init__(self):
        if self.vertices < 1:
            raise HyperfinError("quiver needs at least one vertex")
        object.__setattr__(self, "arrows",
                           tuple((int(i), int(j)) for i, j in self.arrows))
        for i, j in self.arrows:
            if not (1 <= i <= self.vertices and 1 <= j <= self.vertices):
                raise HyperfinError(f"arrow ({i},{j}) out of range")
        self._check_acyclic()

    def _check_acyclic(self):
        adj = {v: [] for v in range(1, self.vertices + 1)}
        indeg = {v: 0 for v in adj}
        for i, j in self.arrows:
            adj[i].append(j)
            indeg[j] += 1
        queue = [v for v in adj if indeg[v] == 0]
        seen = 0
        while queue:
            v = queue.pop()
            seen += 1
            for w in adj[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
        if seen != self.vertices:
            raise CyclicQuiver("quiver has an oriented cycle")

    def to_json(self):
        return {"vertices": self.vertices, "arrows": [list(a) for a in self.arrows]}

    @staticmethod
    def from_json(obj) -> "QuiverSpec":
        return QuiverSpec(int(obj["vertices"]),
                          tuple((a[0], a[1]) for a in obj["arrows"]))


@dataclass(frozen=True)
class TubeSpec:
    """A tube given by the dimension vectors of its regular simples in
    translate order, together with the common endomorphism dimension e."""

    rank: int
    e: int
    simples: tuple

    def __post_init__(self):
        object.__setattr__(self, "simples",
                           tuple(tuple(int(c) for c in s) for s in self.simples))
        if self.rank < 1 or len(self.simples) != self.rank:
            raise HyperfinError("tube rank must match the number of simples")
        if self.e < 1:
            raise HyperfinError("endomorphism dimension e must be positive")
        total = [sum(col) for col in zip(*self.simples)]
        if not any(total):
            raise HyperfinError("tube simples sum to zero")

    def to_json(self):
        return {"rank": self.rank, "e": self.e,
                "simples": [list(s) for s in self.simples]}

    @staticmethod
    def from_json(obj) -> "TubeSpec":
        return TubeSpec(int(obj["rank"]), int(obj["e"]),
                        tuple(tuple(s) for s in obj["simples"]))


def euler_from_quiver(q: QuiverSpec):
    """Integer matrix E with <x,y> = x E y^T for the path algebra of q."""
    n = q.vertices
    e = [[0] * n for _ in range(n)]
    for v in range(n):
        e[v][v] = 1
    for i, j in q.arrows:
        e[i - 1][j - 1] -= 1
    return e


def euler_apply(e, x, y) -> int:
    n = len(e)
    return sum(x[i] * e[i][j] * y[j] for i in range(n) for j in range(n))


def quadratic_apply(e, x) -> int:
    return euler_apply(e, x, x)


def _symmetrized(e):
    n = len(e)
    return sympy.Matrix(n, n, lambda i, j: e[i][j] + e[j][i])


def radical_vector(e):
    """Minimal positive integer generator of the radical of the Euler
    quadratic form; requires the tame shape (semidefinite, 1-dim radical)."""
    s = _symmetrized(e)
    null = s.nullspace()
    if len(null) != 1:
        raise NotTame(f"radical has dimension {len(null)}, expected 1")
    if not s.is_positive_semidefinite:
        raise NotTame("Euler quadratic form is not positive semidefinite")
    v = null[0]
    denoms = [sympy.Rational(c).q for c in v]
    lcm = 1
    for d in denoms:
        lcm = lcm * d // gcd(lcm, d)
    ints = [int(c * lcm) for c in v]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    if all(c <= 0 for c in ints):
        ints = [-c for c in ints]
    if any(c < 1 for c in ints):
        raise NotTame(f"radical generator {ints} is not positive")
    return tuple(ints)


def coxeter_matrix(e):
    """Coxeter matrix -E^{-T} E, computed over the rationals and asserted
    integral."""
    m = sympy.Matrix(e)
    c = -(m.T.inv()) * m
    out = []
    for i in range(c.rows):
        row = []
        for j in range(c.cols):
            v = c[i, j]
            if sympy.Rational(v).q != 1:
                raise HyperfinError("Coxeter matrix is not integral")
            row.append(int(v))
        out.append(row)
    return out


def coxeter_apply(c, x):
    return tuple(sum(c[i][j] * x[j] for j in range(len(x))) for i in range(len(c)))


def tube_euler_table(t: TubeSpec, e):
    """Pairwise Euler pairings of the tube simples and whether they match
    the diagonal e / subdiagonal -e / zero pattern.

    Returns (table, pattern_ok, rank_one_exempt): rank-1 tubes are exempt
    because the diagonal and subdiagonal positions coincide and the two
    contributions cancel.
    """
    m = t.rank
    table = [[euler_apply(e, t.simples[i], t.simples[j]) for j in range(m)]
             for i in range(m)]
    if m == 1:
        return table, table[0][0] == 0, True
    ok = True
    for i in range(m):
        for j in range(m):
            if i == j:
                want = t.e
            elif i % m == (j + 1) % m:
                want = -t.e
            else:
                want = 0
            if table[i][j] != want:
                ok = False
    return table, ok, False


def reg_indec_dimv(t: TubeSpec, i: int, length: int):
    """Dimension vector of the length-l regular indecomposable with socle
    the i-th simple (1-indexed, cyclic)."""
    if length < 1:
        raise HyperfinError("regular length must be >= 1")
    n = len(t.simples[0])
    out = [0] * n
    for j in range(i - 1, i - 1 + length):
        s = t.simples[j % t.rank]
        for v in range(n):
            out[v] += s[v]
    return tuple(out)


def tube_growth_factor(t: TubeSpec, h) -> int:
    """The factor g_T with sum of simples = g_T * h; raises if the sum is
    not a multiple of h."""
    total = reg_indec_dimv(t, 1, t.rank)
    ratios = {c // hv for c, hv in zip(total, h) if hv}
    if len(ratios) != 1 or any(c != hv * next(iter(ratios))
                               for c, hv in zip(total, h)):
        raise HyperfinError("sum of tube simples is not a multiple of h")
    return next(iter(ratios))


def defect2_identities(tag, k: int):
    """Evaluate the defect minus-two cokernel identity for the weighted
    rank-two types and check the result equals h with defect 0.

    Type (1,4): (4k, 2k-1) - 2*(2k-1, k-1) for k > 1.
    Type (4,1): (2k+1, 4k) - 2*(k, 2k-1) for k >= 1.
    """
    t = k0.get_type(tag)
    if t.tag == (1, 4):
        if k <= 1:
            raise KOutOfRange("type (1,4) identity requires k > 1")
        big = (4 * k, 2 * k - 1)
        small = (2 * k - 1, k - 1)
    elif t.tag == (4, 1):
        if k < 1:
            raise KOutOfRange("type (4,1) identity requires k >= 1")
        big = (2 * k + 1, 4 * k)
        small = (k, 2 * k - 1)
    else:
        raise HyperfinError("defect minus-two identities exist for types "
                            "(1,4) and (4,1) only")
    lhs = (big[0] - 2 * small[0], big[1] - 2 * small[1])
    ok = lhs == t.h and k0.defect(t, lhs) == 0
    return lhs, ok


# Built-in data for the four-subspace algebra: five vertices, arrows from
# each of the four outer vertices into the center.
FOUR_SUBSPACE_QUIVER = QuiverSpec(5, ((1, 5), (2, 5), (3, 5), (4, 5)))

FOUR_SUBSPACE_TUBES = (
    TubeSpec(2, 1, ((1, 1, 0, 0, 1), (0, 0, 1, 1, 1))),
    TubeSpec(2, 1, ((1, 0, 1, 0, 1), (0, 1, 0, 1, 1))),
    TubeSpec(2, 1, ((1, 0, 0, 1, 1), (0, 1, 1, 0, 1))),
)
