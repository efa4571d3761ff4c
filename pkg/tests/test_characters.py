import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localtriple.field import LocalFieldCtx, unit_reps
from localtriple.characters import (
    TRIVIAL_KEY,
    canonical_key,
    char_eval,
    fourier_on_shell,
    gamma_coeff,
    gauss_sum,
    key_inv,
    key_level,
    key_mul,
    keys_of_level_at_most,
    make_char,
    psi_shell_coeffs,
    psi_value,
    unit_char_values,
    unramified_char,
)

CTX = LocalFieldCtx(3, 12)
CTX5 = LocalFieldCtx(5, 10)


def test_char_eval_unramified_power():
    chi = unramified_char(CTX, np.exp(0.31j))
    assert char_eval(chi, CTX.elem(2, 5)) == pytest.approx(np.exp(0.62j))


def test_char_eval_legendre():
    chi = make_char(CTX, 1, 1)  # the quadratic character mod 3
    assert char_eval(chi, CTX.elem(0, 2)) == pytest.approx(-1.0)
    assert char_eval(chi, CTX.one()) == pytest.approx(1.0)


def test_char_eval_rejects_zero():
    with pytest.raises(ZeroDivisionError):
        char_eval(unramified_char(CTX, 1.0), CTX.zero())


def test_canonical_key_levels():
    p = 3
    # index p^{r-1} * j at resolution r restricts to level 1
    assert canonical_key(p, 3, 9) == (1, 1)
    assert canonical_key(p, 3, 3) == (2, 1)
    assert canonical_key(p, 3, 1) == (3, 1)
    assert canonical_key(p, 3, 0) == TRIVIAL_KEY
    for r in (1, 2, 3):
        keys = keys_of_level_at_most(p, r)
        assert len(set(keys)) == len(keys) == 2 * 3 ** (r - 1)


def test_key_algebra():
    p = 5
    a, b = (2, 3), (1, 2)
    ab = key_mul(p, a, b)
    assert key_mul(p, ab, key_inv(p, b)) == a
    assert key_mul(p, a, key_inv(p, a)) == TRIVIAL_KEY
    assert key_level(key_mul(p, (2, 1), (2, 19))) <= 2


@settings(max_examples=100, deadline=None)
@given(
    st.integers(min_value=0, max_value=2),
    st.integers(min_value=0, max_value=17),
    st.integers(min_value=1, max_value=3**4 - 1).filter(lambda u: u % 3),
    st.integers(min_value=1, max_value=3**4 - 1).filter(lambda u: u % 3),
)
def test_char_multiplicativity(lvl, idx, u1, u2):
    key = canonical_key(3, max(lvl, 1), idx)
    chi = make_char(CTX, key[0], key[1], np.exp(0.17j))
    x, y = CTX.elem(0, u1), CTX.elem(1, u2)
    assert char_eval(chi, x * y) == pytest.approx(char_eval(chi, x) * char_eval(chi, y), abs=1e-12)


def test_fourier_roundtrip_exact():
    rng = np.random.default_rng(5)
    for ctx, r in ((CTX, 3), (CTX5, 2)):
        reps = unit_reps(ctx, r)
        vals = rng.normal(size=len(reps)) + 1j * rng.normal(size=len(reps))
        coeffs = fourier_on_shell(ctx, vals, r, tol=0.0)
        rec = sum(c * unit_char_values(ctx, key, r) for key, c in coeffs.items())
        assert np.abs(rec - vals).max() < 1e-10


def test_fourier_single_basis():
    key = (2, 1)
    vals = unit_char_values(CTX, key, 2)
    coeffs = fourier_on_shell(CTX, vals, 2)
    assert set(coeffs) == {key} and coeffs[key] == pytest.approx(1.0)


def test_fourier_zero_function():
    assert fourier_on_shell(CTX, np.zeros(2, complex), 1) == {}


def test_fourier_psi_level_support():
    # psi(pi^{-1} u) on the unit shell has components at levels <= 1
    coeffs = psi_shell_coeffs(CTX, -1, 1, 0)
    assert {k[0] for k in coeffs} <= {0, 1}
    assert coeffs[TRIVIAL_KEY] == pytest.approx(-0.5)
    # level-2 psi factor: only level-2 components, no trivial part
    coeffs2 = psi_shell_coeffs(CTX, -2, 1, 0)
    assert {k[0] for k in coeffs2} == {2}


def test_gauss_sum_quadratic():
    chi = make_char(CTX, 1, 1)
    assert gauss_sum(chi, 1) == pytest.approx(1j * np.sqrt(3) / 3, abs=1e-12)


def test_gauss_sum_level_mismatch():
    chi = make_char(CTX, 1, 1)
    assert abs(gauss_sum(chi, 2)) < 1e-12


def test_gauss_sum_ramanujan():
    assert gauss_sum(unramified_char(CTX, 1.0), 1) == pytest.approx(-1.0 / 3, abs=1e-12)


def test_gauss_sum_rejects_k0():
    with pytest.raises(ValueError):
        gauss_sum(unramified_char(CTX, 1.0), 0)


@pytest.mark.parametrize("ctx,level,idx", [(CTX, 1, 1), (CTX, 2, 1), (CTX5, 1, 2), (CTX5, 2, 3)])
def test_gauss_modulus_identity(ctx, level, idx):
    # |sum_u chi(u) e(u/p^k)|^2 = p^k for primitive chi: translate to the
    # normalized integral |g|^2 = p^k / p^{2k} * ... i.e. |integral| = p^{-k/2} (1 - 1/p) * p^{k/2} ...
    chi = make_char(ctx, level, idx)
    g = gauss_sum(chi, level)
    classical = g * ctx.p**level  # integral = classical sum / p^k
    assert abs(classical) ** 2 == pytest.approx(float(ctx.p**level), rel=1e-10)


def test_gamma_coeff_rules():
    assert gamma_coeff(CTX, TRIVIAL_KEY, 3) == 1.0
    assert gamma_coeff(CTX, TRIVIAL_KEY, -1) == pytest.approx(-0.5)
    assert gamma_coeff(CTX, TRIVIAL_KEY, -2) == 0
    assert gamma_coeff(CTX, (1, 1), 0) == 0
    assert gamma_coeff(CTX, (1, 1), -2) == 0
    # |gamma| at the level match is p^{k/2} / phi(p^k)
    assert abs(gamma_coeff(CTX, (2, 1), -2)) == pytest.approx(3.0 / 6.0, rel=1e-9)
    assert gamma_coeff(CTX, (1, 1), None) == 0
    assert gamma_coeff(CTX, TRIVIAL_KEY, None) == 1.0


def test_psi_value_levels():
    assert psi_value(CTX.elem(0, 2)) == 1.0
    assert psi_value(CTX.elem(-1, 1)) == pytest.approx(np.exp(2j * np.pi / 3))
    x = CTX.elem(-2, 4)
    assert psi_value(x) == pytest.approx(np.exp(2j * np.pi * 4 / 9))


def test_nontempered_slot_allowed():
    chi = unramified_char(CTX, 3 ** (-7 / 64))
    assert not chi.is_unitary()
    assert char_eval(chi, CTX.elem(1, 1)) == pytest.approx(3 ** (-7 / 64))
