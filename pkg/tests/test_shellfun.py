import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localtriple.field import LocalFieldCtx, unit_reps
from localtriple.characters import TRIVIAL_KEY, keys_of_level_at_most, psi_value
from localtriple.shellfun import ShellFunction

CTX = LocalFieldCtx(3, 12)


def random_shellfun(rng, max_level=2, n_comp=4):
    f = ShellFunction(CTX)
    keys = keys_of_level_at_most(3, max_level)
    for _ in range(n_comp):
        key = keys[rng.integers(0, len(keys))]
        f.add_to(int(rng.integers(-3, 4)), key, complex(rng.normal(), rng.normal()))
    return f


def test_basis_orthonormal():
    f = ShellFunction.basis(CTX, (1, 1), 2)
    g = ShellFunction.basis(CTX, (1, 1), 3)
    h = ShellFunction.basis(CTX, TRIVIAL_KEY, 2)
    assert f.norm_sq() == pytest.approx(1.0)
    assert f.pairing(g) == 0 and f.pairing(h) == 0
    assert f.pairing(f) == pytest.approx(1.0)


def test_pairing_matches_shell_average():
    rng = np.random.default_rng(3)
    f, g = random_shellfun(rng), random_shellfun(rng)
    # <f, g> = sum over shells of avg over units of f conj(g)
    acc = 0j
    for n in range(-4, 5):
        reps = unit_reps(CTX, 3)
        vals = np.array(
            [f.evaluate(CTX.elem(n, int(u))) * np.conj(g.evaluate(CTX.elem(n, int(u)))) for u in reps]
        )
        acc += vals.mean()
    assert acc == pytest.approx(f.pairing(g), abs=1e-12)


def test_dilate_is_translation():
    f = ShellFunction.basis(CTX, (1, 1), 0)
    a = CTX.elem(2, 2)
    g = f.dilate(a)
    x = CTX.elem(-2, 5)
    assert g.evaluate(x) == pytest.approx(f.evaluate(a * x))
    assert g.shells() == [-2]


def test_multiply_psi_pointwise():
    rng = np.random.default_rng(11)
    f = random_shellfun(rng)
    b = CTX.elem(-3, 5)
    g = f.multiply_psi(b)
    for n in f.shells():
        for u in (1, 2, 5, 8):
            x = CTX.elem(n, u)
            assert g.evaluate(x) == pytest.approx(psi_value(b * x) * f.evaluate(x), abs=1e-10)


def test_multiply_psi_trivial_when_integral():
    f = ShellFunction.basis(CTX, (1, 1), 1)
    g = f.multiply_psi(CTX.elem(0, 2))  # v(b x) = 1 >= 0 on the support
    assert g.coeffs == f.coeffs


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_norm_preserved_by_dilation_and_psi(seed):
    rng = np.random.default_rng(seed)
    f = random_shellfun(rng)
    nf = f.norm_sq()
    assert f.dilate(CTX.elem(1, 7)).norm_sq() == pytest.approx(nf, rel=1e-10)
    assert f.multiply_psi(CTX.elem(-4, 4)).norm_sq() == pytest.approx(nf, rel=1e-10)
