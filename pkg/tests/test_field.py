import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localtriple.field import (
    LocalFieldCtx,
    PrecisionError,
    Shell,
    shell_integral_additive,
    shell_integral_mult,
)
from localtriple.characters import make_char, psi_value

CTX = LocalFieldCtx(3, 12)


def test_context_validation():
    with pytest.raises(ValueError):
        LocalFieldCtx(4, 8)
    with pytest.raises(ValueError):
        LocalFieldCtx(2, 8)
    with pytest.raises(ValueError):
        LocalFieldCtx(3, 0)
    assert LocalFieldCtx(5, 8).q == 5


def test_mul_valuation_additivity():
    x = CTX.elem(1, 1)
    y = CTX.elem(2, 2)
    z = x * y
    assert z.n == 3 and z.u == 2


def test_mul_inverse():
    x = CTX.elem(0, 7)
    assert (x * x.inv()).u == 1


def test_mul_modular():
    # 4 * 7 = 28 = 1 mod 9
    z = CTX.elem(0, 4) * CTX.elem(0, 7)
    assert z.n == 0 and z.unit_mod(2) == 1


def test_zero_absorbs():
    assert (CTX.zero() * CTX.elem(2, 5)).is_zero
    with pytest.raises(ZeroDivisionError):
        CTX.zero().valuation


def test_addition_and_cancellation():
    a = CTX.elem(0, 1)
    b = CTX.elem(0, 2)
    s = a + b  # 1 + 2 = 3 = pi * 1
    assert s.n == 1 and s.unit_mod(4) == 1
    assert (a + (-a)).is_zero
    t = CTX.elem(2, 5) + CTX.elem(0, 1)
    assert t.n == 0


def test_from_int():
    x = CTX.from_int(18)  # 2 * 3^2
    assert x.n == 2 and x.unit_mod(1) == 2
    assert CTX.from_int(0).is_zero


def test_precision_tracking():
    a = CTX.elem(0, 1)
    b = CTX.elem(0, 3**10 - 1)  # a + b cancels to depth 10
    s = a + b
    assert s.prec == CTX.L - s.n
    with pytest.raises(PrecisionError):
        s.unit_mod(CTX.L)


def test_shell_measure_minus_one():
    # additive measure of {v(m) = -1} at p = 3 is q - 1 = 2
    val = shell_integral_additive(lambda x: 1.0, -1, 1, CTX)
    assert val == pytest.approx(2.0)


def test_vol_O_is_one():
    total = sum(shell_integral_additive(lambda x: 1.0, n, 1, CTX).real for n in range(25))
    assert total == pytest.approx(1.0, abs=1e-10)


def test_psi_shell_sum():
    # sum of e^{2 pi i u / 3} over u != 0 is -1
    val = shell_integral_additive(psi_value, -1, 1, CTX)
    assert val == pytest.approx(-1.0, abs=1e-12)


def test_mult_shell_trivial_and_orthogonality():
    assert shell_integral_mult(lambda x: 1.0, 3, 2, CTX) == pytest.approx(1.0)
    for lvl, idx in [(1, 1), (2, 1), (2, 2)]:
        chi = make_char(CTX, lvl, idx)
        for r in (lvl, lvl + 1):
            val = shell_integral_mult(chi, 0, r, CTX)
            assert abs(val) < 1e-12, (lvl, idx, r)


def test_mult_psi_gauss_value():
    # avg over units of psi(m alpha) with v(m) = -1 equals -1/(q-1)
    m = CTX.elem(-1, 1)
    val = shell_integral_mult(lambda a: psi_value(m * a), 0, 1, CTX)
    assert val == pytest.approx(-0.5, abs=1e-12)


def test_additive_mult_consistency():
    m = CTX.elem(-2, 5)
    f = lambda a: psi_value(m * a)
    for n in (-1, 0, 1):
        add = shell_integral_additive(f, n, 2, CTX)
        mult = shell_integral_mult(f, n, 2, CTX)
        assert add == pytest.approx(3.0 ** (-n) * (1 - 1 / 3) * mult, abs=1e-12)


def test_exactness_in_resolution():
    m = CTX.elem(-1, 2)
    f = lambda a: psi_value(m * a)
    v1 = shell_integral_mult(f, 0, 1, CTX)
    v2 = shell_integral_mult(f, 0, 2, CTX)
    v3 = shell_integral_mult(f, 0, 3, CTX)
    assert v1 == pytest.approx(v2, abs=1e-13) and v2 == pytest.approx(v3, abs=1e-13)


def test_shell_class_count():
    sh = Shell(CTX, 0, 3)
    assert sh.class_count == 2 * 9 == len(sh.unit_reps())
    with pytest.raises(PrecisionError):
        Shell(CTX, 0, CTX.L + 1)


units = st.integers(min_value=1, max_value=3**6 - 1).filter(lambda u: u % 3 != 0)
vals = st.integers(min_value=-6, max_value=6)


@settings(max_examples=60, deadline=None)
@given(vals, units, vals, units, vals, units)
def test_mul_associative_commutative(n1, u1, n2, u2, n3, u3):
    x, y, z = CTX.elem(n1, u1), CTX.elem(n2, u2), CTX.elem(n3, u3)
    a = (x * y) * z
    b = x * (y * z)
    assert a.n == b.n and a.u == b.u
    c, d = x * y, y * x
    assert c.n == d.n and c.u == d.u


@settings(max_examples=40, deadline=None)
@given(vals, units, vals, units)
def test_add_commutes_and_distributes(n1, u1, n2, u2):
    x, y = CTX.elem(n1, u1), CTX.elem(n2, u2)
    s1, s2 = x + y, y + x
    assert s1.is_zero == s2.is_zero
    if not s1.is_zero:
        assert s1.n == s2.n and s1.unit_mod(min(s1.prec, s2.prec)) == s2.unit_mod(min(s1.prec, s2.prec))
    z = CTX.elem(1, 2)
    lhs = z * (x + y)
    rhs = z * x + z * y
    assert lhs.is_zero == rhs.is_zero
    if not lhs.is_zero:
        r = min(lhs.prec, rhs.prec, 6)
        assert lhs.n == rhs.n and lhs.unit_mod(r) == rhs.unit_mod(r)
