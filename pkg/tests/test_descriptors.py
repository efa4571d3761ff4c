import numpy as np
import pytest

from localtriple.field import LocalFieldCtx
from localtriple.descriptors import DescriptorError, parse_complex, parse_descriptor, parse_unit_char

CTX = LocalFieldCtx(3, 14)
CTX5 = LocalFieldCtx(5, 12)


def test_parse_complex_forms():
    assert parse_complex("1") == 1.0
    assert parse_complex("-1") == -1.0
    assert parse_complex("i") == 1j
    assert parse_complex("-i") == -1j
    assert parse_complex("0.5+0.25i") == 0.5 + 0.25j
    assert parse_complex("0.5-0.25i") == 0.5 - 0.25j
    assert parse_complex("exp(0.5)") == pytest.approx(np.exp(0.5j))
    assert parse_complex("exp(-1/2)") == pytest.approx(np.exp(-0.5j))
    with pytest.raises(DescriptorError):
        parse_complex("banana")


def test_parse_special():
    rep = parse_descriptor(CTX, "special(exp(0))")
    assert rep.kind == "special" and rep.params[0] == 1.0


def test_parse_ps():
    rep = parse_descriptor(CTX, "ps(1,1,exp(0.5);1,1,exp(-0.5))")
    assert rep.kind == "ps_ramified" and rep.c == 2
    mu1, mu2 = rep.params
    assert mu1.level == mu2.level == 1
    assert mu1.omega == pytest.approx(np.exp(0.5j))


def test_parse_sc_variants():
    rep = parse_descriptor(CTX, "sc(3,w0,42)")
    assert rep.kind == "supercuspidal" and rep.params == (3, rep.params[1], 42)
    assert rep.params[1].level == 0 and rep.params[1].omega == 1.0
    rep2 = parse_descriptor(CTX, "sc(2, u1.1*exp(0.5), 7)")
    assert rep2.params[1].level == 1
    rep3 = parse_descriptor(CTX, "sc(2, unit:k=1,j=1;pi=0.5,0.8660254037844387, 7)")
    assert rep3.params[1].level == 1
    assert rep3.params[1].omega == pytest.approx(np.exp(1j * np.pi / 3))


def test_parse_one_and_unram():
    rep = parse_descriptor(CTX, "one(1,1,exp(0.2);exp(0.7))")
    assert rep.kind == "one_ramified" and rep.c == 1
    rep = parse_descriptor(CTX, "unram(exp(1),exp(-1))")
    assert rep.kind == "unramified"
    rep = parse_descriptor(CTX, "unram(1,1,tau=7/64)")
    z1, z2 = rep.params
    assert abs(z1) == pytest.approx(3 ** (-7 / 64))
    assert abs(z2) == pytest.approx(3 ** (7 / 64))


def test_parse_rejections():
    with pytest.raises(DescriptorError):
        parse_descriptor(CTX, "unknown(1)")
    with pytest.raises(DescriptorError):
        parse_descriptor(CTX, "special(1")
    with pytest.raises(ValueError):
        parse_descriptor(CTX, "unram(2,1)")  # non-unitary without tau escape
    with pytest.raises(ValueError):
        parse_descriptor(CTX, "ps(0,0,1;1,1,1)")  # level constraint
    with pytest.raises(DescriptorError):
        parse_descriptor(CTX, "ps(1,1,exp(0.5))")


def test_parse_unit_char_grammar():
    chi = parse_unit_char(CTX5, "unit:k=2,j=3;pi=0,1")
    assert chi.level == 2 and chi.omega == 1j
    assert parse_unit_char(CTX5, "w0").level == 0
    w = parse_unit_char(CTX5, "w0*exp(0.25)")
    assert w.level == 0 and w.omega == pytest.approx(np.exp(0.25j))
    with pytest.raises(DescriptorError):
        parse_unit_char(CTX5, "garbage")


def test_parse_sc_colon_grammar():
    rep = parse_descriptor(CTX, "sc:c=3,w=w0,seed=42")
    assert rep.kind == "supercuspidal" and rep.c == 3 and rep.params[2] == 42
    rep2 = parse_descriptor(CTX, "sc:c=2,w=u1.1*exp(0.4),seed=7")
    assert rep2.params[1].level == 1
    with pytest.raises(DescriptorError):
        parse_descriptor(CTX, "sc:c=x,w=w0,seed=1")
