"""Integer lattice calculus on the Grothendieck group of the three
rank-two tame bimodule types: Euler form, quadratic form, Coxeter
transformation, defect and radical data.

Vectors are plain pairs of Python ints (arbitrary precision).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import HyperfinError, NonIntegralDefect, ZeroVector

Vec = tuple[int, int]


class K0Class(Enum):
    PREPROJECTIVE = "preprojective"
    REGULAR = "regular"
    POSTINJECTIVE = "postinjective"


@dataclass(frozen=True)
class RankTwoType:
    """Lattice data of one rank-two tame bimodule type.

    euler_matrix encodes <x,y> = x E y^T; h is the minimal positive
    radical vector, r the defect normalizer (defect = <h,->/r), g the
    Coxeter shift constant, weights the endomorphism-ring dimensions,
    q_inj the maximal total dimension of an indecomposable injective and
    h_dim the weighted entry sum of h.
    """

    tag: tuple[int, int]
    euler_matrix: tuple[tuple[int, int], tuple[int, int]]
    h: Vec
    r: int
    g: int
    weights: tuple[int, int]
    q_inj: int
    h_dim: int

    def __str__(self):
        return f"({self.tag[0]},{self.tag[1]})"


TYPE_22 = RankTwoType(
    tag=(2, 2), euler_matrix=((1, 0), (-2, 1)),
    h=(1, 1), r=1, g=2, weights=(1, 1), q_inj=3, h_dim=2,
)
TYPE_14 = RankTwoType(
    tag=(1, 4), euler_matrix=((1, 0), (-4, 4)),
    h=(2, 1), r=2, g=1, weights=(1, 4), q_inj=5, h_dim=6,
)
TYPE_41 = RankTwoType(
    tag=(4, 1), euler_matrix=((4, 0), (-4, 1)),
    h=(1, 2), r=2, g=1, weights=(4, 1), q_inj=8, h_dim=6,
)

TYPES = {t.tag: t for t in (TYPE_22, TYPE_14, TYPE_41)}

# Explicit Coxeter matrices, kept as an independent cross-check of the
# closed formula x + g*h*defect(x).
COXETER_MATRICES = {
    (2, 2): ((-1, 2), (-2, 3)),
    (1, 4): ((-1, 4), (-1, 3)),
    (4, 1): ((-1, 1), (-4, 3)),
}


def get_type(tag) -> RankTwoType:
    tag = tuple(tag)
    if tag not in TYPES:
        raise HyperfinError(f"unknown rank-two type {tag}; expected (2,2), (1,4) or (4,1)")
    return TYPES[tag]


def euler_form(t: RankTwoType, x: Vec, y: Vec) -> int:
    e = t.euler_matrix
    return (x[0] * e[0][0] + x[1] * e[1][0]) * y[0] + (x[0] * e[0][1] + x[1] * e[1][1]) * y[1]


def quadratic_form(t: RankTwoType, x: Vec) -> int:
    return euler_form(t, x, x)


def defect(t: RankTwoType, x: Vec) -> int:
    v = euler_form(t, t.h, x)
    if v % t.r:
        raise NonIntegralDefect(f"<h,{x}> = {v} not divisible by r = {t.r}")
    return v // t.r


def coxeter(t: RankTwoType, x: Vec) -> Vec:
    d = defect(t, x)
    return (x[0] + t.g * t.h[0] * d, x[1] + t.g * t.h[1] * d)


def coxeter_inv(t: RankTwoType, x: Vec) -> Vec:
    d = defect(t, x)
    return (x[0] - t.g * t.h[0] * d, x[1] - t.g * t.h[1] * d)


def coxeter_matrix_apply(t: RankTwoType, x: Vec) -> Vec:
    """Coxeter via the stored explicit matrix (test oracle for coxeter)."""
    c = COXETER_MATRICES[t.tag]
    return (c[0][0] * x[0] + c[0][1] * x[1], c[1][0] * x[0] + c[1][1] * x[1])


def classify_k0(t: RankTwoType, x: Vec) -> K0Class:
    if x == (0, 0):
        raise ZeroVector("cannot classify the zero vector")
    d = defect(t, x)
    if d < 0:
        return K0Class.PREPROJECTIVE
    if d > 0:
        return K0Class.POSTINJECTIVE
    return K0Class.REGULAR


def _validate_tables():
    for t in TYPES.values():
        if quadratic_form(t, t.h) != 0:
            raise HyperfinError(f"type {t.tag}: q(h) != 0")
        if defect(t, t.h) != 0:
            raise HyperfinError(f"type {t.tag}: defect(h) != 0")
        if coxeter(t, t.h) != t.h:
            raise HyperfinError(f"type {t.tag}: c(h) != h")
        if min(t.h) < 1 or 1 not in t.h:
            raise HyperfinError(f"type {t.tag}: h not minimal positive")
        for x in ((1, 0), (0, 1), (1, 1), (2, -3), (5, 7)):
            if coxeter(t, x) != coxeter_matrix_apply(t, x):
                raise HyperfinError(f"type {t.tag}: Coxeter formula/matrix mismatch at {x}")


_validate_tables()
