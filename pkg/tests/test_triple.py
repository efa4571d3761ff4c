"""Triple integral: oracle equivalence, structure of the shell sum, and an
independent pointwise-enumeration integrator on small configurations."""

import numpy as np
import pytest

from localtriple.field import LocalFieldCtx, unit_reps
from localtriple.characters import MultChar, key_inv, make_char, unramified_char
from localtriple.matcoef import (
    CosetPoint,
    MatrixCoefficient,
    make_one_ramified,
    make_ps_ramified,
    make_special,
    make_supercuspidal,
    make_unramified,
)
from localtriple.triple import (
    brute_force_integral,
    closed_form_integral,
    contribution_table,
    coset_weights,
    epsilon_sign_assert,
)

CTX = LocalFieldCtx(3, 16)
Q = 3


def ps3(ctx, phase=0.3):
    return make_ps_ramified(
        ctx, make_char(ctx, 1, 1, np.exp(1j * phase)), make_char(ctx, 1, 1, np.exp(-1j * phase))
    )


def test_weights_sum_structure():
    w = coset_weights(CTX, 3)
    assert w[0] == pytest.approx(3 / 4)
    assert float(w[3]) == pytest.approx(1 / (4 * 9))
    assert float(w[1]) == pytest.approx(2 / (4 * 3))


def test_unram_theta2_value_427():
    rep = make_unramified(CTX, 1j, -1j)
    res = brute_force_integral(rep, rep, ps3(CTX))
    assert res.closed_form == pytest.approx(4 / 27)
    assert res.abs_error < 1e-12
    assert res.A == pytest.approx(-1 / 3) and res.B == pytest.approx(-1 / 3)


def test_special_times_special_427():
    rep = make_special(CTX, 1.0)
    res = brute_force_integral(rep, rep, ps3(CTX))
    assert res.brute_force == pytest.approx(4 / 27, abs=1e-12)


def test_type1_squared_closed_form():
    w0 = unramified_char(CTX, 1.0)
    r1 = make_supercuspidal(CTX, 2, w0, seed=1)
    r2 = make_supercuspidal(CTX, 2, w0, seed=2)
    r3 = make_supercuspidal(CTX, 4, w0, seed=3)
    res = brute_force_integral(r1, r2, r3)
    q, c3 = Q, 4
    want = q**2 / ((q - 1) ** 2 * (q + 1) * q ** (c3 - 1))
    assert res.closed_form == pytest.approx(want)
    assert res.abs_error < 1e-12


def test_type3_A_zero_form():
    mu = make_char(CTX, 1, 1, np.exp(0.2j))
    r1 = make_one_ramified(CTX, np.exp(0.5j), mu)
    r2 = make_one_ramified(CTX, np.exp(-0.5j), mu.inv())
    r3 = make_supercuspidal(CTX, 2, unramified_char(CTX, 1.0), seed=5)
    res = brute_force_integral(r1, r2, r3)
    assert res.closed_form == pytest.approx(1 / ((Q + 1) * Q))
    assert res.abs_error < 1e-12


def test_admissibility_errors():
    w0 = unramified_char(CTX, 1.0)
    sc2 = make_supercuspidal(CTX, 2, w0, seed=1)
    sp = make_special(CTX, 1.0)
    with pytest.raises(ValueError, match="c3 >= 2"):
        brute_force_integral(sc2, sc2, make_supercuspidal(CTX, 3, w0))
    with pytest.raises(ValueError, match="central"):
        brute_force_integral(make_special(CTX, 1j), sp, make_supercuspidal(CTX, 2, w0))
    with pytest.raises(ValueError, match="Type 1"):
        brute_force_integral(sp, sp, make_one_ramified(CTX, 1.0, make_char(CTX, 1, 1)))
    # the documented c1 = c2 = 0, c3 = 1 gap cannot even be expressed: pi_3
    # of level 1 is never Type 1, and the kind check reports it
    with pytest.raises(ValueError, match="k1 = k2"):
        brute_force_integral(sp, sp, make_ps_ramified(CTX, make_char(CTX, 2, 1), make_char(CTX, 1, 1, -1.0)))


def test_contribution_rows_reproduce_table_products():
    # the four-row table: (i=c3, ball), (i=c3, -1), (i=c3-1, ball), (i=c3-1, -1)
    rep = make_special(CTX, 1.0)
    r3 = ps3(CTX)
    res = brute_force_integral(rep, rep, r3)
    rows = {(r["i"], r["vm"]): r["value"] for r in contribution_table(res)}
    q, c3 = Q, 2
    A = B = -1 / q
    A_c = 1 / ((q + 1) * q ** (c3 - 1))
    A_cm1 = (q - 1) / ((q + 1) * q ** (c3 - 1))
    assert rows[(c3, "ball")] == pytest.approx(A_c * 1 * 1 * 1)
    assert rows[(c3, -1)] == pytest.approx(A_c * (q - 1) * A * (-1 / (q - 1)))
    assert rows[(c3 - 1, "ball")] == pytest.approx(A_cm1 * B * (-1 / (q - 1)))
    assert rows[(c3 - 1, -1)] == pytest.approx(A_cm1 * (q - 1) * A * B * (1 / (q - 1) ** 2))
    assert sum(rows.values()) == pytest.approx(res.brute_force)


def test_seed_invariance():
    w0 = unramified_char(CTX, 1.0)
    sp = make_special(CTX, -1.0)
    one = make_one_ramified(CTX, np.exp(0.7j), make_char(CTX, 1, 1, np.exp(-0.7j)))
    w3 = MultChar(CTX, key_inv(3, one.central_char.key), 1.0 / (sp.central_char.omega * one.central_char.omega))
    r1 = brute_force_integral(sp, one, make_supercuspidal(CTX, 3, w3, seed=1))
    r2 = brute_force_integral(sp, one, make_supercuspidal(CTX, 3, w3, seed=2))
    assert abs(r1.brute_force - r2.brute_force) < 1e-12
    assert r1.abs_error < 1e-12 and r2.abs_error < 1e-12


def test_integral_real_positive_and_epsilon():
    rep = make_unramified(CTX, np.exp(0.4j), np.exp(-0.4j))
    res = brute_force_integral(rep, rep, ps3(CTX))
    assert abs(res.brute_force.imag) < 1e-10
    assert res.brute_force.real > 0
    assert epsilon_sign_assert(res)


def test_closed_form_exact_rational_path():
    w0 = unramified_char(CTX, 1.0)
    r1 = make_supercuspidal(CTX, 2, w0, seed=1)
    r3 = make_supercuspidal(CTX, 4, w0, seed=3)
    v = closed_form_integral(r1, r1, r3)
    # Fraction path: (1 + 1/2)^2 / (4 * 27) exactly
    assert v == complex(float((1 + 0.5) ** 2) / 108)


# ----------------------------------------------------------------------
# independent pointwise integrator

def pointwise_integral(rep1, rep2, rep3) -> complex:
    """Literal enumeration of the shell sum: unit classes at resolution c3,
    explicit m-shells in [-c3-2, -1] plus the ball {v(m) >= 0}."""
    ctx = rep1.ctx
    c3 = rep3.c
    q = float(ctx.q)
    M1 = MatrixCoefficient(rep1, "plain", c3)
    M2 = MatrixCoefficient(rep2, "twisted", c3)
    M3 = MatrixCoefficient(rep3, "plain", c3)
    weights = [float(w) for w in coset_weights(ctx, c3)]
    r = max(c3, 1)
    units = unit_reps(ctx, r)
    total = 0j
    for i in range(c3 + 1):
        for va in range(-c3 - 2, c3 + 3):
            for ua in units:
                a = ctx.elem(va, int(ua))
                acc = 0j
                for s in range(-c3 - 2, 0):
                    for um in units:
                        pt = CosetPoint(a, ctx.elem(s, int(um)), i)
                        val = M1.value(pt) * M2.value(pt) * M3.value(pt)
                        acc += q ** (-s) * (1 - 1 / q) * val / len(units)
                pt0 = CosetPoint(a, ctx.zero(), i)
                acc += M1.value(pt0) * M2.value(pt0) * M3.value(pt0)
                total += weights[i] * q**va * acc / len(units)
    return total


@pytest.mark.parametrize("case", ["special_one_ps", "sc_mix"])
def test_pointwise_enumeration_agrees(case):
    from localtriple.acceptance import third_rep

    if case == "special_one_ps":
        r1 = make_special(CTX, -1.0)
        r2 = make_special(CTX, np.exp(0.25j))
        w12 = r1.central_char.mul(r2.central_char)
        w3 = MultChar(CTX, key_inv(3, w12.key), 1.0 / w12.omega)
        r3 = third_rep(CTX, "ps", 2, w3)
    else:
        r1 = make_supercuspidal(CTX, 2, unramified_char(CTX, 1.0), seed=4)
        r2 = make_unramified(CTX, np.exp(1j), np.exp(-1j))
        r3 = third_rep(CTX, "sc", 4, unramified_char(CTX, 1.0), seed=6)
    res = brute_force_integral(r1, r2, r3)
    pw = pointwise_integral(r1, r2, r3)
    assert pw == pytest.approx(res.brute_force, abs=5e-9)
    assert pw == pytest.approx(res.closed_form, abs=5e-9)
