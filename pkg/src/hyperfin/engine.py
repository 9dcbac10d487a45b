"""Certified large-submodule decompositions with bounded summands.

For a module X and a rational epsilon in (0,1) the engine produces a
submodule Y of dimension at least (1-epsilon) dim X together with an
explicit embedded direct-sum decomposition of Y into summands of
dimension at most 2L, where L = max(ceil(6/epsilon), 8).

Construction routes (all exact, mostly coordinate bookkeeping):
  preprojective P[n]: repeatedly quotient onto a regular layer R_0[t]
    by coordinate truncation; the codimension-one preprojective trim of
    that layer pulls back to a coordinate block, so each iteration
    splits off a P[t-1] block and loses exactly one dimension.
  regular R_pi[m]: the span of 1, x, ..., x^{md-2} inside k[x]/(pi^m) is
    a copy of P[md-1] of codimension one; recurse.
  postinjective Q[n]: the kernel of the last V2 coordinate is a copy of
    R_0[n] of codimension one; recurse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import pencil
from .errors import CertificateInvalid, EpsilonOutOfRange, HyperfinError
from .kronecker import (INF, IsoClass, KroneckerModule, Morphism, canonical,
                        point_from_scalar)
from .linalg import Field, Matrix

Q_INJ = 3
G_SHIFT = 2
H_DIM = 2


@dataclass(frozen=True)
class EpsilonParams:
    epsilon: Fraction
    q: int
    g: int
    h_dim: int
    L: int
    summand_bound: int


def parse_epsilon(text) -> Fraction:
    if isinstance(text, Fraction):
        eps = text
    else:
        eps = Fraction(str(text))
    if not 0 < eps < 1:
        raise EpsilonOutOfRange(f"epsilon {eps} outside (0,1)")
    return eps


def params_for(epsilon) -> EpsilonParams:
    eps = parse_epsilon(epsilon)
    L = max(math.ceil(Fraction(2 * Q_INJ) / eps), 2 * G_SHIFT * H_DIM)
    return EpsilonParams(epsilon=eps, q=Q_INJ, g=G_SHIFT, h_dim=H_DIM,
                         L=L, summand_bound=2 * L)


def build_preproj_tower(field: Field, n: int) -> KroneckerModule:
    return canonical(field, IsoClass.preproj(n))


# -- canonical-model detection ----------------------------------------------

def detect_canonical(m: KroneckerModule):
    """The IsoClass when m literally equals a recognizable canonical model,
    else None."""
    d1, d2 = m.dim_vector
    field = m.field
    if d1 == d2 + 1:
        cls = IsoClass.preproj(d2)
        if m == canonical(field, cls):
            return cls
        return None
    if d2 == d1 + 1:
        cls = IsoClass.postinj(d1)
        if m == canonical(field, cls):
            return cls
        return None
    if d1 != d2 or d1 == 0:
        return None
    ident = Matrix.identity(field, d1)
    if m.A == ident:
        lam = m.B.entry(0, 0)
        cls = IsoClass.regular(point_from_scalar(field, lam), d1)
        if m == canonical(field, cls):
            return cls
        return None
    if m.B == ident:
        cls = IsoClass.regular(INF, d1)
        if m == canonical(field, cls):
            return cls
    return None


# -- explicit constructions on canonical models ------------------------------

def _selection(field: Field, nrows: int, cols) -> Matrix:
    out = Matrix.zeros(field, nrows, len(cols))
    one = field.one()
    for k, j in enumerate(cols):
        out._set(j, k, one)
    return out


def epi_to_regular(field: Field, n: int, m: int, lam=0):
    """Explicit epimorphism P[n] -> R_lam[m] (0 < m <= n) with its kernel
    decomposition.  The map sends the a-th coordinate to x^{a-1} mod
    (x-lam)^m; for lam = 0 it is plain truncation and the kernel is the
    coordinate tail, a canonical P[n-m]."""
    if not 0 < m <= n:
        raise HyperfinError("need 0 < m <= n")
    src = canonical(field, IsoClass.preproj(n))
    cls = IsoClass.regular(point_from_scalar(field, lam), m)
    tgt = canonical(field, cls)
    cols2 = []
    v = Matrix.identity(field, m).column_vector(0)
    for _ in range(n):
        cols2.append(v)
        v = tgt.B * v
    f2 = Matrix.hstack(cols2)
    f1 = Matrix.hstack([cols2[0]] + [tgt.B * c for c in cols2])
    phi = Morphism(src, tgt, f1, f2)
    if not phi.is_surjective():
        raise HyperfinError("constructed map is not surjective")
    from .homalg import kernel
    ker, incl = kernel(phi)
    kdec = pencil.decompose(ker)
    return phi, kdec


def _preproj_trim_of_regular(field: Field, cls: IsoClass) -> Morphism:
    """Embedding of canonical P[md-1] into canonical R_point[m] whose image
    has codimension (0,1)."""
    tgt = canonical(field, cls)
    d = tgt.d1
    if cls.point == INF:
        # reversal embedding: V2 basis e_{m-1},...,e_1; V1 full reversal
        f2 = _selection(field, d, [d - 1 - a for a in range(1, d)])
        f1 = _selection(field, d, [d - a for a in range(1, d + 1)])
    else:
        # Krylov embedding: V2 basis 1, x, ..., x^{md-2}; V1 adds x^{md-1}
        kry = []
        v = Matrix.identity(field, d).column_vector(0)
        for _ in range(d):
            kry.append(v)
            v = tgt.B * v
        f1 = Matrix.hstack(kry)
        f2 = Matrix.hstack(kry[:d - 1]) if d > 1 else Matrix.zeros(field, d, 0)
    src = canonical(field, IsoClass.preproj(d - 1))
    emb = Morphism(src, tgt, f1, f2)
    if not emb.is_injective():
        raise HyperfinError("regular trim embedding not injective")
    return emb


def _regular_trim_of_postinj(field: Field, n: int) -> Morphism:
    """Embedding of canonical R_0[n] into canonical Q[n] whose image has
    codimension (0,1): the coordinate-reversed kernel of the last V2
    coordinate."""
    src = canonical(field, IsoClass.regular(point_from_scalar(field, 0), n))
    tgt = canonical(field, IsoClass.postinj(n))
    f1 = _selection(field, n, [n - b for b in range(1, n + 1)])
    f2 = _selection(field, n + 1, [n - b for b in range(1, n + 1)])
    return Morphism(src, tgt, f1, f2)


def pp_submodule_of_regular(r: KroneckerModule, cls: IsoClass = None):
    """(U, inclusion) with U preprojective of codimension at most 3 in the
    regular module r."""
    field = r.field
    if cls is None:
        cls = detect_canonical(r)
    if cls is not None and cls.kind == IsoClass.REGULAR:
        emb = _preproj_trim_of_regular(field, cls)
        return emb.source, emb
    dec = pencil.decompose(r)
    embs = []
    for c in dec.summands:
        if c.kind != IsoClass.REGULAR:
            raise HyperfinError("module is not regular")
        embs.append(_preproj_trim_of_regular(field, c))
    from .kronecker import morphism_direct_sum
    block = morphism_direct_sum(embs)
    incl = dec.change_of_basis.compose(block)
    return block.source, incl


# -- piece expansion ----------------------------------------------------------

def _expand_preproj(field: Field, n: int, L: int):
    """Coordinate-block pieces of canonical P[n]: [(IsoClass, f1, f2)] plus
    the iteration count."""
    if 2 * n + 1 <= L:
        p = canonical(field, IsoClass.preproj(n))
        return [(IsoClass.preproj(n),
                 Matrix.identity(field, p.d1), Matrix.identity(field, p.d2))], 0
    pieces = []
    off = 0
    cur = n
    iters = 0
    t = L // 2
    while 2 * cur + 1 > L:
        # split off the trimmed layer P[t-1] at the current offset; the
        # quotient onto R_0[t] drops exactly the coordinate off+t of V2
        pieces.append((IsoClass.preproj(t - 1),
                       _selection(field, n + 1, range(off, off + t)),
                       _selection(field, n, range(off, off + t - 1))))
        off += t
        cur -= t
        iters += 1
    pieces.append((IsoClass.preproj(cur),
                   _selection(field, n + 1, range(off, n + 1)),
                   _selection(field, n, range(off, n))))
    return pieces, iters


def _expand_regular(field: Field, cls: IsoClass, L: int):
    dim = cls.dim
    if dim <= 2 * L:
        mod = canonical(field, cls)
        return [(cls, Matrix.identity(field, mod.d1),
                 Matrix.identity(field, mod.d2))], 0
    emb = _preproj_trim_of_regular(field, cls)
    inner, iters = _expand_preproj(field, emb.source.d2, L)
    pieces = [(c, emb.f1 * b1, emb.f2 * b2) for c, b1, b2 in inner]
    return pieces, iters + 1


def _expand_postinj(field: Field, n: int, L: int):
    dim = 2 * n + 1
    if dim <= 2 * L:
        mod = canonical(field, IsoClass.postinj(n))
        return [(IsoClass.postinj(n), Matrix.identity(field, mod.d1),
                 Matrix.identity(field, mod.d2))], 0
    emb = _regular_trim_of_postinj(field, n)
    inner, iters = _expand_regular(
        field, IsoClass.regular(point_from_scalar(field, 0), n), L)
    pieces = [(c, emb.f1 * b1, emb.f2 * b2) for c, b1, b2 in inner]
    return pieces, iters + 1


def _expand(field: Field, cls: IsoClass, L: int):
    if cls.kind == IsoClass.PREPROJ:
        return _expand_preproj(field, cls.n, L)
    if cls.kind == IsoClass.REGULAR:
        return _expand_regular(field, cls, L)
    return _expand_postinj(field, cls.n, L)


# -- certificates -------------------------------------------------------------

class Certificate:
    """Embedded bounded-summand decomposition of a large submodule."""

    __slots__ = ("input_fingerprint", "params", "summands", "embedding",
                 "iterations")

    def __init__(self, input_fingerprint: str, params: EpsilonParams,
                 summands, embedding: Morphism, iterations: int):
        self.input_fingerprint = input_fingerprint
        self.params = params
        self.summands = list(summands)
        self.embedding = embedding
        self.iterations = iterations
        self._validate()

    def _validate(self):
        if not self.embedding.check_intertwining():
            raise CertificateInvalid("embedding does not intertwine")
        if not self.embedding.is_injective():
            raise CertificateInvalid("embedding is not injective")
        if self.dim_y < math.ceil((1 - self.params.epsilon) * self.dim_x):
            raise CertificateInvalid(
                f"dim Y = {self.dim_y} below (1-eps) bound for "
                f"dim X = {self.dim_x}")
        for mod, _ in self.summands:
            if mod.dim > self.params.summand_bound:
                raise CertificateInvalid(
                    f"summand of dimension {mod.dim} exceeds bound "
                    f"{self.params.summand_bound}")
        if sum(m.dim for m, _ in self.summands) != self.dim_y:
            raise CertificateInvalid("summand dimensions do not add up")

    @property
    def epsilon(self) -> Fraction:
        return self.params.epsilon

    @property
    def dim_x(self) -> int:
        return self.embedding.target.dim

    @property
    def dim_y(self) -> int:
        return self.embedding.source.dim

    def max_summand_dim(self) -> int:
        return max((m.dim for m, _ in self.summands), default=0)

    def to_json(self):
        field = self.embedding.source.field
        summands = []
        for mod, cls in self.summands:
            entry = {"dims": list(mod.dim_vector)}
            entry["class"] = cls.to_json() if cls is not None else "unclassified"
            summands.append(entry)
        return {
            "epsilon": str(self.params.epsilon),
            "L": str(self.params.L),
            "fingerprint": self.input_fingerprint,
            "dimX": self.dim_x,
            "dimY": self.dim_y,
            "summands": summands,
            "embedding": {
                "f1": [[field.to_str(v) for v in row]
                       for row in self.embedding.f1.rows()],
                "f2": [[field.to_str(v) for v in row]
                       for row in self.embedding.f2.rows()],
            },
            "iterations": self.iterations,
            "checks": {"constructed": True},
        }

    @staticmethod
    def from_json(obj, target: KroneckerModule) -> "Certificate":
        field = target.field
        params = params_for(obj["epsilon"])
        if params.L != int(obj["L"]):
            raise CertificateInvalid("stored L inconsistent with epsilon")
        summands = []
        for entry in obj["summands"]:
            if entry["class"] == "unclassified":
                raise CertificateInvalid(
                    "cannot rebuild an unclassified summand from JSON")
            cls = IsoClass.from_json(entry["class"], field)
            mod = canonical(field, cls)
            if list(mod.dim_vector) != list(entry["dims"]):
                raise CertificateInvalid("summand dims mismatch its class")
            summands.append((mod, cls))
        src = pencil.canonical_sum(field, [c for _, c in summands])
        f1 = Matrix.from_rows(field, obj["embedding"]["f1"],
                              nrows=target.d1, ncols=src.d1)
        f2 = Matrix.from_rows(field, obj["embedding"]["f2"],
                              nrows=target.d2, ncols=src.d2)
        emb = Morphism(src, target, f1, f2)
        return Certificate(obj["fingerprint"], params, summands, emb,
                           int(obj["iterations"]))


def _certify(x: KroneckerModule, epsilon, allowed_kinds=None) -> Certificate:
    params = params_for(epsilon)
    field = x.field
    det = detect_canonical(x)
    if x.dim == 0:
        groups = []
    elif det is not None:
        groups = [(det, Matrix.identity(field, x.d1),
                   Matrix.identity(field, x.d2))]
    else:
        dec = pencil.decompose(x)
        groups = []
        o1 = o2 = 0
        for cls in dec.summands:
            a, b = cls.dim_vector()
            groups.append((cls,
                           dec.change_of_basis.f1.columns(range(o1, o1 + a)),
                           dec.change_of_basis.f2.columns(range(o2, o2 + b))))
            o1 += a
            o2 += b
    if allowed_kinds is not None:
        for cls, _, _ in groups:
            if cls.kind not in allowed_kinds:
                raise HyperfinError(
                    f"summand {cls!r} outside the allowed classes")
    pieces = []
    iters = 0
    for cls, g1, g2 in groups:
        inner, it = _expand(field, cls, params.L)
        iters += it
        for c, b1, b2 in inner:
            pieces.append((c, g1 * b1, g2 * b2))
    summands = [(canonical(field, c), c) for c, _, _ in pieces]
    src = pencil.canonical_sum(field, [c for c, _, _ in pieces])
    if pieces:
        f1 = Matrix.hstack([b1 for _, b1, _ in pieces])
        f2 = Matrix.hstack([b2 for _, _, b2 in pieces])
    else:
        f1 = Matrix.zeros(field, x.d1, 0)
        f2 = Matrix.zeros(field, x.d2, 0)
    emb = Morphism(src, x, f1, f2, check=False)
    return Certificate(x.fingerprint(), params, summands, emb, iters)


def decompose_preprojective(x: KroneckerModule, epsilon) -> Certificate:
    cert = _certify(x, epsilon, allowed_kinds={IsoClass.PREPROJ})
    dim_x = x.dim
    eps = cert.params.epsilon
    if cert.iterations > dim_x * eps / Q_INJ:
        raise CertificateInvalid("iteration count exceeds dim X eps / q")
    return cert


def decompose_regular(x: KroneckerModule, epsilon) -> Certificate:
    return _certify(x, epsilon, allowed_kinds={IsoClass.REGULAR})


def decompose_postinjective(x: KroneckerModule, epsilon) -> Certificate:
    return _certify(x, epsilon, allowed_kinds={IsoClass.POSTINJ})


def hyperfinite_decompose(m: KroneckerModule, epsilon) -> Certificate:
    return _certify(m, epsilon)


def verify_certificate(m: KroneckerModule, cert: Certificate) -> dict:
    """Independent re-check of every certificate claim."""
    report = {}
    params = params_for(cert.params.epsilon)
    report["params"] = (params == cert.params)
    report["fingerprint"] = (cert.input_fingerprint == m.fingerprint())
    emb = cert.embedding
    report["target"] = (emb.target.dim_vector == m.dim_vector
                        and emb.target.A == m.A and emb.target.B == m.B)
    report["intertwining"] = emb.check_intertwining()
    report["injective"] = emb.is_injective()
    dim_x = m.dim
    dim_y = emb.source.dim
    report["dimension"] = dim_y >= math.ceil((1 - params.epsilon) * dim_x)
    report["summand_dims"] = (
        sum(mod.dim for mod, _ in cert.summands) == dim_y
        and all(mod.dim <= params.summand_bound for mod, _ in cert.summands))
    classes_ok = True
    for mod, cls in cert.summands:
        if cls is None:
            continue
        if mod == canonical(m.field, cls):
            continue
        dec = pencil.decompose(mod)
        if dec.summands != [cls]:
            classes_ok = False
            break
    report["classes"] = classes_ok
    report["pass"] = all(report.values())
    return report
