import json
import math
import random
from fractions import Fraction

import pytest

from hyperfin import engine, pencil
from hyperfin.errors import CertificateInvalid, EpsilonOutOfRange, HyperfinError
from hyperfin.kronecker import (INF, IsoClass, Morphism, canonical,
                                point_from_scalar, zero_module)
from hyperfin.linalg import QQ, Field

from helpers import conjugate

F5 = Field(5)


def test_params():
    p = engine.params_for("1/4")
    assert p.L == 24 and p.summand_bound == 48
    assert engine.params_for("1/2").L == 12
    assert engine.params_for(Fraction(1, 10)).L == 60
    # the floor from the lattice constants kicks in for large epsilon
    assert engine.params_for("9/10").L == 8
    for bad in ("0", "1", "-1/2", "5/4"):
        with pytest.raises(EpsilonOutOfRange):
            engine.params_for(bad)


def test_detect_canonical():
    cases = [IsoClass.preproj(6), IsoClass.postinj(3),
             IsoClass.regular(point_from_scalar(F5, 2), 4),
             IsoClass.regular(INF, 3)]
    for cls in cases:
        assert engine.detect_canonical(canonical(F5, cls)) == cls
    rng = random.Random(1)
    scrambled = conjugate(canonical(F5, IsoClass.preproj(6)), rng)
    assert engine.detect_canonical(scrambled) is None


def test_small_input_kept_whole():
    x = canonical(QQ, IsoClass.preproj(5))
    cert = engine.decompose_preprojective(x, "1/2")
    assert cert.dim_y == x.dim and cert.iterations == 0
    assert len(cert.summands) == 1


def test_preprojective_certificate_bounds():
    x = canonical(F5, IsoClass.preproj(50))
    cert = engine.decompose_preprojective(x, "1/2")
    p = cert.params
    assert cert.dim_y >= math.ceil(x.dim / 2)
    assert cert.max_summand_dim() <= p.summand_bound
    assert cert.iterations <= x.dim * Fraction(1, 2) / 3
    assert engine.verify_certificate(x, cert)["pass"]
    # each iteration costs exactly one dimension
    assert x.dim - cert.dim_y == cert.iterations


def test_preprojective_telescope_bookkeeping():
    x = canonical(QQ, IsoClass.preproj(40))
    cert = engine.decompose_preprojective(x, "1/4")
    total = [0, 0]
    for mod, _ in cert.summands:
        total[0] += mod.d1
        total[1] += mod.d2
    loss = (x.d1 - total[0], x.d2 - total[1])
    # per-iteration error is at most (1,2) entrywise
    assert 0 <= loss[0] <= cert.iterations
    assert 0 <= loss[1] <= 2 * cert.iterations


def test_preprojective_rejects_other_classes():
    with pytest.raises(HyperfinError):
        engine.decompose_preprojective(canonical(F5, IsoClass.postinj(30)), "1/4")


def test_scrambled_input_goes_through_oracle():
    rng = random.Random(4)
    x = conjugate(canonical(F5, IsoClass.preproj(30)), rng)
    cert = engine.decompose_preprojective(x, "1/2")
    assert engine.verify_certificate(x, cert)["pass"]


def test_epi_to_regular():
    phi, kdec = engine.epi_to_regular(F5, 12, 5, lam=0)
    assert phi.is_surjective()
    assert kdec.summands == [IsoClass.preproj(7)]
    phi2, kdec2 = engine.epi_to_regular(F5, 9, 4, lam=2)
    assert phi2.is_surjective()
    assert kdec2.summands == [IsoClass.preproj(5)]
    with pytest.raises(HyperfinError):
        engine.epi_to_regular(F5, 3, 5)


def test_pp_submodule_of_regular():
    for cls in [IsoClass.regular(point_from_scalar(F5, 0), 1),
                IsoClass.regular(point_from_scalar(F5, 2), 8),
                IsoClass.regular(INF, 6),
                IsoClass.regular((F5.of(2), F5.of(0), F5.of(1)), 4)]:
        r = canonical(F5, cls)
        u, incl = engine.pp_submodule_of_regular(r)
        assert incl.is_injective()
        assert r.dim - u.dim <= 3
        for s in pencil.decompose(u).summands:
            assert s.kind == IsoClass.PREPROJ
    # codim <= 3 holds for all small lengths
    for m in range(1, 21):
        r = canonical(F5, IsoClass.regular(point_from_scalar(F5, 0), m))
        u, _ = engine.pp_submodule_of_regular(r)
        assert r.dim - u.dim <= 3


def test_regular_certificate():
    r = canonical(F5, IsoClass.regular(point_from_scalar(F5, 0), 100))
    cert = engine.decompose_regular(r, "1/4")
    assert cert.dim_y >= 150
    assert engine.verify_certificate(r, cert)["pass"]
    with pytest.raises(HyperfinError):
        engine.decompose_regular(canonical(F5, IsoClass.preproj(3)), "1/4")


def test_postinjective_certificate():
    q = canonical(F5, IsoClass.postinj(80))
    cert = engine.decompose_postinjective(q, "1/4")
    assert engine.verify_certificate(q, cert)["pass"]
    # the trimmed kernel contributes no postinjective summands
    assert all(cls.kind != IsoClass.POSTINJ for _, cls in cert.summands)
    tiny = canonical(F5, IsoClass.postinj(0))
    cert0 = engine.decompose_postinjective(tiny, "1/2")
    assert cert0.dim_y == 1


def test_hyperfinite_decompose_mixed():
    rng = random.Random(5)
    classes = [IsoClass.preproj(15), IsoClass.regular(point_from_scalar(F5, 1), 10),
               IsoClass.postinj(12)]
    x = conjugate(pencil.canonical_sum(F5, classes), rng)
    cert = engine.hyperfinite_decompose(x, "1/4")
    report = engine.verify_certificate(x, cert)
    assert report["pass"], report
    assert cert.dim_y >= math.ceil(x.dim * 3 / 4)


def test_zero_module_certificate():
    cert = engine.hyperfinite_decompose(zero_module(F5), "1/2")
    assert cert.dim_x == 0 and cert.dim_y == 0 and cert.summands == []


def test_certificate_json_roundtrip():
    x = canonical(F5, IsoClass.preproj(30))
    cert = engine.decompose_preprojective(x, "1/2")
    obj = json.loads(json.dumps(cert.to_json()))
    back = engine.Certificate.from_json(obj, x)
    assert engine.verify_certificate(x, back)["pass"]
    obj2 = dict(obj)
    obj2["L"] = "99"
    with pytest.raises(CertificateInvalid):
        engine.Certificate.from_json(obj2, x)


def _forged(cert, **overrides):
    forged = engine.Certificate.__new__(engine.Certificate)
    forged.input_fingerprint = overrides.get("input_fingerprint",
                                             cert.input_fingerprint)
    forged.params = overrides.get("params", cert.params)
    forged.summands = overrides.get("summands", cert.summands)
    forged.embedding = overrides.get("embedding", cert.embedding)
    forged.iterations = overrides.get("iterations", cert.iterations)
    return forged


def test_verify_rejects_tampering():
    x = canonical(F5, IsoClass.preproj(30))
    cert = engine.decompose_preprojective(x, "1/2")
    assert engine.verify_certificate(x, cert)["pass"]

    # wrong fingerprint
    bad = _forged(cert, input_fingerprint="0" * 64)
    assert not engine.verify_certificate(x, bad)["pass"]

    # dependent embedding column
    emb = cert.embedding
    cols = list(range(emb.f1.ncols))
    cols[1] = 0
    dep = Morphism(emb.source, emb.target, emb.f1.columns(cols),
                   emb.f2, check=False)
    bad = _forged(cert, embedding=dep)
    report = engine.verify_certificate(x, bad)
    assert not report["injective"] and not report["pass"]

    # oversized summand claim
    big = canonical(F5, IsoClass.preproj(40))
    bad = _forged(cert, summands=[(big, IsoClass.preproj(40))])
    assert not engine.verify_certificate(x, bad)["summand_dims"]

    # misclassified summand
    mod, _ = cert.summands[0]
    lies = [(mod, IsoClass.postinj(mod.d2))] + cert.summands[1:]
    bad = _forged(cert, summands=lies)
    assert not engine.verify_certificate(x, bad)["classes"]
