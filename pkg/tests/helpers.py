"""Shared generators for randomized tests."""

from hyperfin.kronecker import (INF, IsoClass, KroneckerModule,
                                point_from_scalar)
from hyperfin.linalg import Matrix


def rand_matrix(field, nrows, ncols, rng):
    if field.is_prime:
        draw = lambda: rng.randrange(field.p)
    else:
        draw = lambda: rng.randint(-4, 4)
    return Matrix.from_rows(field, [[draw() for _ in range(ncols)]
                                    for _ in range(nrows)],
                            nrows=nrows, ncols=ncols)


def rand_invertible(field, n, rng):
    while True:
        m = rand_matrix(field, n, n, rng)
        if m.rank() == n:
            return m


def conjugate(mod, rng):
    """A module isomorphic to mod with scrambled bases."""
    s = rand_invertible(mod.field, mod.d1, rng)
    t = rand_invertible(mod.field, mod.d2, rng)
    ti = t.inv()
    return KroneckerModule(mod.field, s * mod.A * ti, s * mod.B * ti)


def rand_irreducible_point(field, degree, rng):
    """Ascending coefficient tuple of a monic irreducible of the given
    degree over a prime field."""
    from hyperfin.kronecker import _is_irreducible
    while True:
        coeffs = tuple(field.of(rng.randrange(field.p))
                       for _ in range(degree)) + (field.one(),)
        if _is_irreducible(field, coeffs):
            return coeffs


def rand_isoclass(field, max_dim, rng):
    """A random iso class of total dimension at most max_dim (>= 2)."""
    while True:
        kind = rng.randrange(4)
        if kind == 0:
            n = rng.randrange(0, max(1, (max_dim - 1) // 2) + 1)
            cls = IsoClass.preproj(n)
        elif kind == 1:
            n = rng.randrange(0, max(1, (max_dim - 1) // 2) + 1)
            cls = IsoClass.postinj(n)
        elif kind == 2:
            length = rng.randrange(1, max(1, max_dim // 2) + 1)
            if rng.randrange(4) == 0:
                cls = IsoClass.regular(INF, length)
            else:
                lam = rng.randrange(field.p) if field.is_prime else rng.randint(-2, 2)
                cls = IsoClass.regular(point_from_scalar(field, lam), length)
        else:
            if not field.is_prime or max_dim < 4:
                continue
            degree = rng.choice([2, 3])
            if 2 * degree > max_dim:
                continue
            length = rng.randrange(1, max_dim // (2 * degree) + 1)
            cls = IsoClass.regular(rand_irreducible_point(field, degree, rng),
                                   length)
        if cls.dim <= max_dim:
            return cls


def rand_multiset(field, total_dim, rng, min_classes=1):
    """Random list of iso classes with total dimension <= total_dim."""
    out = []
    budget = total_dim
    while budget >= 1 and (len(out) < min_classes or rng.random() < 0.7):
        cls = rand_isoclass(field, max(budget, 1), rng)
        if cls.dim > budget:
            break
        out.append(cls)
        budget -= cls.dim
    if not out:
        out.append(IsoClass.preproj(0))
    return out


def span_key(m):
    """Canonical key for the column span of a matrix (rref rows)."""
    r, pivots = m.transpose().rref()
    rows = [tuple(row) for row in r.rows()[:len(pivots)]]
    return tuple(sorted(rows))
