"""Whittaker newform tables for induced representations of GL(2).

For a newform W and x_i = (1 0; pi^i 1) the table entry T^(i) is the shell
function alpha -> W(diag(alpha,1) x_i).  Tables are built from the explicit
case formulas (ramified principal series, one-ramified, special, spherical)
and cross-checked against the defining integral

    W(g) = integral phi(omega n(m) g) psi(m) dm

evaluated through the Iwasawa coset classification of the matrix
(pi^i 1; -alpha - m pi^i, -m), which is also exposed on its own.

All u- and m-integrals are finite: each valuation shell is enumerated at
the exact resolution of the integrand, and shells outside a provable window
vanish because an additive character of level ell integrates to zero over
any ball of radius pi^rho with rho < ell on which the rest of the
integrand is constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .characters import MultChar, fourier_on_shell, psi_value, psi_values_on_units, unit_char_values
from .field import FieldElem, LocalFieldCtx, PrecisionError, unit_reps
from .shellfun import ShellFunction

__all__ = [
    "IwasawaCoset",
    "iwasawa_classify",
    "InducedVector",
    "raw_whittaker",
    "WhittakerTable",
    "whittaker_table_ps_ramified",
    "whittaker_table_one_ramified",
    "whittaker_table_special",
    "whittaker_table_spherical",
]

TAIL_SHELLS = 48  # truncation of the q^{-n/2}-decaying table tails


# ----------------------------------------------------------------------
# Iwasawa coset classification of (pi^i 1; -alpha-m pi^i, -m)

@dataclass
class IwasawaCoset:
    """Case tag, lower exponent k and Borel data for one coset membership."""

    case: str  # one of 1i,1ii,2i,2ii,3i,3ii,3iii
    k: int
    b1: FieldElem
    b2: FieldElem  # upper-right of the Borel part (reconstruction only)
    b4: FieldElem
    alpha: FieldElem
    m: FieldElem
    i: int
    c: int

    def matrix(self) -> tuple[FieldElem, FieldElem, FieldElem, FieldElem]:
        ctx = self.alpha.ctx
        pi_i = ctx.uniformizer(self.i)
        return (pi_i, ctx.one(), -(self.alpha + self.m * pi_i), -self.m)

    def reconstruct(self) -> tuple[FieldElem, FieldElem, FieldElem, FieldElem]:
        """Multiply the decomposition back; must reproduce matrix()."""
        ctx = self.alpha.ctx
        one, zero = ctx.one(), ctx.zero()
        alpha, m, i, k = self.alpha, self.m, self.i, self.k
        B = (self.b1, self.b2, zero, self.b4)
        if self.k == 0:
            s = alpha + m * ctx.uniformizer(i)
            X = (one, zero, one, one)
            N = (one, m * s.inv() - one if not m.is_zero else -one, zero, one)
            return _mat_mul(_mat_mul(B, X), N)
        if self.k == self.c:
            y = alpha * m.inv() + ctx.uniformizer(i)
            X = (one, zero, y, one)
            return _mat_mul(B, X)
        s = alpha + m * ctx.uniformizer(i)
        X = (one, zero, ctx.uniformizer(k), one)
        u = s * (m * ctx.uniformizer(k)).inv()
        D = (u, zero, zero, one)
        return _mat_mul(_mat_mul(B, X), D)


def _mat_mul(A, B):
    a, b, c, d = A
    e, f, g, h = B
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _depth_plus_one(w: FieldElem) -> int:
    """j with w in -1 + pi^j O^* exactly; large when w = -1 in the model."""
    s = w + w.ctx.one()
    if s.is_zero:
        return w.ctx.L
    return s.n


def iwasawa_classify(alpha: FieldElem, m: FieldElem, i: int, c: int) -> IwasawaCoset:
    """Locate (pi^i 1; -alpha-m pi^i, -m) in B (1 0; pi^k 1) K_1(pi^c)."""
    if alpha.is_zero:
        raise ZeroDivisionError("alpha must be nonzero")
    if not 0 <= i <= c:
        raise ValueError(f"i must lie in [0, {c}]")
    ctx = alpha.ctx

    if m.is_zero:
        case, k = ("1i", 0) if i == 0 else ("1ii", 0)
    else:
        d = m.n - alpha.n
        if i == 0:
            if d != 0:
                case, k = "1i", 0
            else:
                j = _depth_plus_one(m * alpha.inv())
                if j == 0:
                    case, k = "1i", 0
                elif j < c:
                    case, k = "3i", j
                else:
                    case, k = "2i", c
        elif i < c:
            if d >= 0:
                case, k = "1ii", 0
            elif -i < d < 0:
                case, k = "3ii", -d
            elif d == -i:
                j = _depth_plus_one(m * alpha.inv() * ctx.uniformizer(i))
                if j == 0:
                    case, k = "3iii", i
                elif j < c - i:
                    case, k = "3i", i + j
                else:
                    case, k = "2i", c
            else:
                case, k = "3iii", i
        else:  # i == c
            if d >= 0:
                case, k = "1ii", 0
            elif d > -c:
                case, k = "3ii", -d
            else:
                case, k = "2ii", c

    one, zero = ctx.one(), ctx.zero()
    if k == 0:
        s = alpha + m * ctx.uniformizer(i)
        b1 = -(alpha * s.inv())
        b2 = ctx.uniformizer(i) + alpha * s.inv()
        b4 = -s
    elif k == c:
        b1 = -(alpha * m.inv())
        b2 = one
        b4 = -m
    else:
        s = alpha + m * ctx.uniformizer(i)
        b1 = -(alpha * ctx.uniformizer(k) * s.inv())
        b2 = one
        b4 = -m
    return IwasawaCoset(case, k, b1, b2, b4, alpha, m, i, c)


# ----------------------------------------------------------------------
# induced-model vectors and the raw Whittaker integral

@dataclass
class InducedVector:
    """K_1(pi^c)-invariant element of the induced model pi(mu1, mu2).

    coset_coeffs[k] is the value on the coset B (1 0; pi^k 1) K_1(pi^c);
    the section transforms by mu1(b1) mu2(b4) |b1/b4|^{1/2} on the left.
    """

    mu1: MultChar
    mu2: MultChar
    c: int
    coset_coeffs: dict[int, complex]

    def value_at(self, coset: IwasawaCoset) -> complex:
        base = self.coset_coeffs.get(coset.k, 0j)
        if not base:
            return 0j
        b1, b4 = coset.b1, coset.b4
        q = float(b1.ctx.q)
        return base * self.mu1(b1) * self.mu2(b4) * q ** (-(b1.n - b4.n) / 2.0)


def raw_whittaker(vec: InducedVector, alpha: FieldElem, i: int, check_boundary: bool = True) -> complex:
    """W(diag(alpha,1) x_i) = integral phi(omega n(m) diag(alpha,1) x_i) psi(-m) dm.

    The psi(-m) sign makes W(n(x) g) = psi(x) W(g), which is the
    equivariance the matrix-coefficient pairing assumes.
    """
    ctx = alpha.ctx
    q = float(ctx.q)
    c = vec.c

    def integrand(m: FieldElem) -> complex:
        coset = iwasawa_classify(alpha, m, i, c)
        val = vec.value_at(coset)
        return val * psi_value(-m) if val else 0j

    t_lo = -(c + 2)
    ball = max(0, alpha.n - i) + c + 3
    total = 0j
    for t in range(t_lo, ball):
        r = max(c + 1, -t, 1)
        reps = unit_reps(ctx, r)
        vals = [integrand(ctx.elem(t, int(u))) for u in reps]
        total += q ** (-t) * (1 - 1 / q) * complex(np.mean(vals))
    stab = integrand(ctx.elem(ball, 1))
    if check_boundary:
        for t in (t_lo - 2, t_lo - 1):
            r = max(c + 1, -t, 1)
            reps = unit_reps(ctx, r)
            edge = q ** (-t) * (1 - 1 / q) * complex(np.mean([integrand(ctx.elem(t, int(u))) for u in reps]))
            if abs(edge) > 1e-9:
                raise ArithmeticError(f"raw oracle m-shell {t} does not vanish: {edge}")
        alt = integrand(ctx.elem(ball + 1, 1))
        if abs(stab - alt) > 1e-9 or abs(stab - integrand(ctx.zero())) > 1e-9:
            raise ArithmeticError("raw oracle ball value did not stabilize")
    return total + q ** (-ball) * stab


# ----------------------------------------------------------------------
# tables

@dataclass
class WhittakerTable:
    """T^(i)(alpha) = W(diag(alpha,1) x_i) as shell functions, 0 <= i <= c."""

    ctx: LocalFieldCtx
    c: int
    kind: str
    tables: dict[int, ShellFunction]
    normalized: bool

    def T(self, i: int) -> ShellFunction:
        return self.tables[min(max(i, 0), self.c)]

    def norm_sq(self) -> float:
        return self.tables[self.c].norm_sq()

    def max_level(self) -> int:
        return max(t.max_level() for t in self.tables.values())


def _store_shell(out: ShellFunction, ctx: LocalFieldCtx, n: int, values: np.ndarray, r: int, tol: float = 1e-14) -> None:
    for key, coef in fourier_on_shell(ctx, values, r, tol=tol).items():
        out.add_to(n, key, coef)


def _char_on_units(chi: MultChar, r: int, negate: bool = False) -> np.ndarray:
    vals = chi.eval_units(r)
    if negate:
        p = chi.ctx.p
        mod = p ** max(chi.level, 1)
        sign = chi(chi.ctx.elem(0, (-1) % mod if chi.level else -1)) if chi.level else 1.0
        vals = vals * sign
    return vals


def whittaker_table_ps_ramified(mu1: MultChar, mu2: MultChar, scan_pad: int = 0) -> WhittakerTable:
    """Both-ramified principal series pi(mu1, mu2); normalized so that
    T^(c) is the indicator of the unit shell."""
    ctx = mu1.ctx
    k1, k2 = mu1.level, mu2.level
    if k1 < 1 or k2 < 1:
        raise ValueError("both characters must be ramified")
    c = k1 + k2
    q = float(ctx.q)
    p = ctx.p

    # C = int_{O^*} mu1(-pi^{k2}) mu2(-pi^{-k2} u) psi(-pi^{-k2} u) du
    r = max(k2, 1)
    u_vals = _char_on_units(mu2, r, negate=True) * psi_values_on_units(ctx, -k2, -1, r)
    C = (
        mu1.omega**k2
        * _sign_at_minus_one(mu1)
        * mu2.omega ** (-k2)
        * (1 - 1 / q)
        * complex(u_vals.mean())
    )
    if abs(C) < 1e-12:
        raise ArithmeticError("degenerate unit pairing: |C| = 0")
    Cinv = 1.0 / C

    # cases (ii)/(iii) can spread to v(alpha) -> +infinity with q^{-n/2}
    # decay, so the scan continues well past the bounded-support region
    n_lo, n_hi = -(2 * c + 4) - scan_pad, max(2 * c + 4, 40) + scan_pad
    tables: dict[int, ShellFunction] = {}
    for i in range(c + 1):
        out = ShellFunction(ctx)
        for n in range(n_lo, n_hi + 1):
            if i < k2:
                vals, r_a = _ps_case_i(ctx, mu1, mu2, i, k1, k2, n, scan_pad)
            elif i > k2:
                vals, r_a = _ps_case_ii(ctx, mu1, mu2, i, k1, k2, n, scan_pad)
            else:
                vals, r_a = _ps_case_iii(ctx, mu1, mu2, k1, k2, n, scan_pad)
            if vals is None:
                continue
            _store_shell(out, ctx, n, Cinv * vals, r_a)
        tables[i] = out.prune()
    table = WhittakerTable(ctx, c, "ps_ramified", tables, normalized=True)
    top = tables[c]
    if abs(top.component(0) - 1.0) > 1e-9 or abs(top.norm_sq() - 1.0) > 1e-9:
        raise ArithmeticError("ps_ramified normalization check failed")
    return table


def _sign_at_minus_one(chi: MultChar) -> complex:
    if chi.level == 0:
        return 1.0 + 0j
    return chi(chi.ctx.elem(0, -1))


def _ps_case_i(ctx, mu1, mu2, i, k1, k2, n, pad):
    """i < k2: integral over u in O^* of
    mu1(-pi^i/u) mu2(x) psi(x) q^{n/2-i} q^{2i-k2-n} du, x = alpha pi^{-i}(1-pi^{k2-i}u)."""
    q, p = float(ctx.q), ctx.p
    ell_u = max(0, 2 * i - k2 - n)
    rho_u = max(k1, i)
    if ell_u > rho_u:
        return None, 0
    r_u = max(rho_u, ell_u, 1) + pad
    r_a = max(k2, i - n, 1) + pad
    U = unit_reps(ctx, r_u)
    A = unit_reps(ctx, r_a)
    mod_a = p**r_a
    # mu1(-pi^i / u): scalar in alpha
    mu1_u = np.array([mu1(ctx.elem(i, int(-pow(int(u), -1, p**ctx.L)))) for u in U])
    acc = np.zeros(len(A), dtype=np.complex128)
    x_val = n - i
    for u, m1 in zip(U, mu1_u):
        w = (1 - p ** (k2 - i) * int(u)) % p**ctx.L  # unit of (1 - pi^{k2-i} u)
        xu = (A * w) % mod_a  # unit classes of x = alpha pi^{-i} (1 - ...)
        term = mu2.omega**x_val * unit_char_values(ctx, mu2.key, r_a)[_unit_index(ctx, r_a)[xu]]
        if x_val < 0:
            ell = -x_val
            if ell > r_a:
                raise PrecisionError("case-i psi level exceeds alpha resolution")
            mod = p**ell
            term = term * np.exp(2j * np.pi * (xu % mod) / mod)
        acc += m1 * term
    vals = (1 - 1 / q) * acc / len(U) * q ** (n / 2.0 - i) * q ** (2 * i - k2 - n)
    return vals, r_a


@lru_cache(maxsize=None)
def _unit_index_cached(p: int, r: int) -> np.ndarray:
    mod = p**r
    idx = np.full(mod, -1, dtype=np.int64)
    reps = np.arange(mod, dtype=np.int64)
    reps = reps[reps % p != 0]
    idx[reps] = np.arange(len(reps))
    idx.setflags(write=False)
    return idx


def _unit_index(ctx: LocalFieldCtx, r: int) -> np.ndarray:
    return _unit_index_cached(ctx.p, r)


def _ps_case_ii(ctx, mu1, mu2, i, k1, k2, n, pad):
    """k2 < i <= c: integral over u in O^* of
    mu1(-pi^{k2}/(1+u pi^{i-k2})) mu2(-pi^{-k2} alpha u) q^{-n/2} psi(-pi^{-k2} alpha u) du."""
    q, p = float(ctx.q), ctx.p
    ell_u = max(0, k2 - n)
    rho_u = max(k2, max(0, k1 - (i - k2)))
    if ell_u > rho_u:
        return None, 0
    r_u = max(rho_u, ell_u, 1) + pad
    r_a = max(k2, k2 - n, 1) + pad
    U = unit_reps(ctx, r_u)
    A = unit_reps(ctx, r_a)
    mod_a = p**r_a
    big = p**ctx.L
    acc = np.zeros(len(A), dtype=np.complex128)
    mu2_units = unit_char_values(ctx, mu2.key, r_a)
    uidx = _unit_index(ctx, r_a)
    x_val = n - k2
    for u in U:
        denom = (1 + int(u) * p ** (i - k2)) % big
        m1 = mu1(ctx.elem(k2, -pow(denom, -1, big)))
        xu = (A * ((-int(u)) % mod_a)) % mod_a  # unit of -pi^{-k2} alpha u
        term = mu2.omega**x_val * mu2_units[uidx[xu]]
        if x_val < 0:
            mod = p ** (-x_val)
            term = term * np.exp(2j * np.pi * (xu % mod) / mod)
        acc += m1 * term
    vals = (1 - 1 / q) * acc / len(U) * q ** (-n / 2.0)
    return vals, r_a


def _ps_case_iii(ctx, mu1, mu2, k1, k2, n, pad):
    """i = k2: integral over v(u) <= -k2, u not in pi^{-k2}(-1+pi O), of
    mu1(-pi^{k2}/(1+u pi^{k2})) mu2(-alpha u) |pi^{k2}/(alpha u (1+u pi^{k2}))|^{1/2}
    psi(-alpha u) q^{-n} du."""
    q, p = float(ctx.q), ctx.p
    rho = max(k1, k2)
    big = p**ctx.L
    # u-shells below t = -n-rho vanish: psi(-alpha u) has level -(n+t) > rho
    # there while the rest of the integrand is constant on res-rho balls.
    t_lo = -n - rho
    if t_lo > -k2:
        return None, 0
    r_a = max(k2, rho, 1) + pad
    A = unit_reps(ctx, r_a)
    mod_a = p**r_a
    mu2_units = unit_char_values(ctx, mu2.key, r_a)
    uidx = _unit_index(ctx, r_a)
    acc = np.zeros(len(A), dtype=np.complex128)
    for t in range(t_lo, -k2 + 1):
        ell = -(n + t)
        r_u = max(rho, 1) + pad
        U = unit_reps(ctx, r_u)
        shell_acc = np.zeros(len(A), dtype=np.complex128)
        for w in U:
            w = int(w)
            if t == -k2:
                if (w + 1) % p == 0:  # excluded: u in pi^{-k2}(-1+pi O)
                    continue
                s_val, s_unit = 0, (1 + w) % big
            else:
                s_val, s_unit = t + k2, (w + p ** (-(t + k2))) % big
            # mu1(-pi^{k2}/(1 + u pi^{k2})), with 1+u pi^{k2} = pi^{s_val} s_unit
            m1 = mu1(ctx.elem(k2 - s_val, -pow(s_unit, -1, big)))
            # |pi^{k2}/(alpha u (1+u pi^{k2}))|^{1/2}
            half = q ** (-(k2 - n - t - s_val) / 2.0)
            xu = (A * ((-w) % mod_a)) % mod_a  # unit classes of -alpha u
            term = mu2.omega ** (n + t) * mu2_units[uidx[xu]]
            if ell > 0:
                mod = p**ell
                term = term * np.exp(2j * np.pi * (xu % mod) / mod)
            shell_acc += m1 * half * term
        acc += q ** (-t) * (1 - 1 / q) * shell_acc / len(U)
    return acc * q ** (-n), r_a


def whittaker_table_one_ramified(mu1_omega: complex, mu2: MultChar, scan_pad: int = 0, tail: int = 40) -> WhittakerTable:
    """pi(mu1, mu2) with mu1 unramified (value mu1_omega at pi) and mu2 of
    level k >= 1.  Unnormalized, as in the source formulas."""
    ctx = mu2.ctx
    k = mu2.level
    if k < 1:
        raise ValueError("mu2 must be ramified")
    if abs(abs(mu1_omega) - 1.0) > 1e-9:
        raise ValueError("mu1 must be unitary")
    q, p = float(ctx.q), ctx.p
    tables: dict[int, ShellFunction] = {}

    # W^(k)(alpha) = q^{-n/2} mu1(pi)^{n+k} q^{-k} G on v(alpha) >= 0
    r = max(k, 1)
    G = q**k * (1 - 1 / q) * complex(
        (_char_on_units(mu2, r, negate=True) * mu2.omega ** (-k) * psi_values_on_units(ctx, -k, -1, r)).mean()
    )
    top = ShellFunction(ctx)
    for n in range(0, tail + 1):
        top.add_to(n, (0, 0), q ** (-n / 2.0) * mu1_omega ** (n + k) * q ** (-k) * G)
    tables[k] = top

    for i in range(k):
        out = ShellFunction(ctx)
        for n in range(-(2 * k + 4) - scan_pad, tail + 1):
            ell_u = max(0, 2 * i - k - n)
            if ell_u > i:
                continue
            r_u = max(i, ell_u, 1) + scan_pad
            r_a = max(k, i - n, 1) + scan_pad
            U = np.arange(p**r_u, dtype=np.int64)  # u ranges over all of O
            A = unit_reps(ctx, r_a)
            mod_a = p**r_a
            big = p**ctx.L
            mu2_units = unit_char_values(ctx, mu2.key, r_a)
            uidx = _unit_index(ctx, r_a)
            acc = np.zeros(len(A), dtype=np.complex128)
            x_val = n - i
            for u in U:
                w = (1 - p ** (k - i) * int(u)) % big
                xu = (A * (w % mod_a)) % mod_a
                term = mu2.omega**x_val * mu2_units[uidx[xu]]
                if x_val < 0:
                    mod = p ** (-x_val)
                    term = term * np.exp(2j * np.pi * (xu % mod) / mod)
                acc += term
            vals = mu1_omega**i * acc / len(U) * q ** (-n / 2.0 - k + i)
            _store_shell(out, ctx, n, vals, r_a)
        tables[i] = out.prune()
    return WhittakerTable(ctx, k, "one_ramified", tables, normalized=False)


def whittaker_table_spherical(ctx: LocalFieldCtx, z1: complex, z2: complex, tail: int = TAIL_SHELLS) -> WhittakerTable:
    """Spherical newform values W(diag(pi^n,1)) = q^{-n/2} h_n(z1,z2), n >= 0."""
    q = float(ctx.q)
    out = ShellFunction(ctx)
    h_prev = 1.0 + 0j
    z2_pow = 1.0 + 0j
    for n in range(tail + 1):
        if n:
            z2_pow *= z2
            h_prev = z1 * h_prev + z2_pow
        out.add_to(n, (0, 0), q ** (-n / 2.0) * h_prev)
    return WhittakerTable(ctx, 0, "spherical", {0: out}, normalized=False)


def whittaker_table_special(ctx: LocalFieldCtx, z: complex, tail: int = 30) -> WhittakerTable:
    """Special unramified sigma(chi |.|^{1/2}, chi |.|^{-1/2}), chi(pi) = z.

    T^(1)(pi^n) = (z/q)^n on n >= 0 (closed form); T^(0) is computed from
    the defining integral on the subrepresentation of the induced model,
    located by matching T^(1), and extended by its geometric tail.
    """
    if abs(abs(z) - 1.0) > 1e-9:
        raise ValueError("special representation needs |chi(pi)| = 1")
    q = float(ctx.q)
    c = 1

    top = ShellFunction(ctx)
    for n in range(tail + 1):
        top.add_to(n, (0, 0), (z / q) ** n)

    mu1 = MultChar(ctx, (0, 0), z * q**-0.5)
    mu2 = MultChar(ctx, (0, 0), z * q**0.5)
    v0 = InducedVector(mu1, mu2, c, {0: 1.0 + 0j})
    v1 = InducedVector(mu1, mu2, c, {1: 1.0 + 0j})

    w0 = [raw_whittaker(v0, ctx.elem(n, 1), 1) for n in range(3)]
    w1 = [raw_whittaker(v1, ctx.elem(n, 1), 1) for n in range(3)]
    # solve (w1[1] + y w0[1]) / (w1[0] + y w0[0]) = z/q for y
    target = z / q
    y = (target * w1[0] - w1[1]) / (w0[1] - target * w0[0])
    kappa = w1[0] + y * w0[0]  # raw value of T^(1) at alpha = 1
    if abs(kappa) < 1e-12:
        raise ArithmeticError("special newform fit degenerated")
    newform = InducedVector(mu1, mu2, c, {0: y / kappa, 1: 1.0 / kappa})
    for n in (2, -1, -2):
        got = raw_whittaker(newform, ctx.elem(n, 1), 1)
        want = (z / q) ** n if n >= 0 else 0.0
        if abs(got - want) > 1e-8:
            raise ArithmeticError(f"special newform fit failed at shell {n}: {got} vs {want}")

    lo, probe_hi = -6, 8
    out = ShellFunction(ctx)
    per_shell: dict[int, dict] = {}
    for n in range(lo, probe_hi + 1):
        r = 2
        reps = unit_reps(ctx, r)
        vals = np.array([raw_whittaker(newform, ctx.elem(n, int(u)), 0, check_boundary=False) for u in reps])
        coeffs = fourier_on_shell(ctx, vals, r)
        per_shell[n] = coeffs
        for key, coef in coeffs.items():
            out.add_to(n, key, coef)
    # geometric extension of the tail per character component
    keys = set(per_shell[probe_hi]) | set(per_shell[probe_hi - 1]) | set(per_shell[probe_hi - 2])
    for key in keys:
        v3 = [per_shell[probe_hi - 2 + j].get(key, 0j) for j in range(3)]
        if abs(v3[1]) < 1e-14 or abs(v3[0]) < 1e-14:
            if any(abs(v) > 1e-12 for v in v3):
                raise ArithmeticError("special T^(0) tail is not geometric")
            continue
        ratio = v3[2] / v3[1]
        if abs(ratio - v3[1] / v3[0]) > 1e-8 or abs(ratio) > 1.0 / q + 1e-6:
            raise ArithmeticError("special T^(0) tail is not geometric")
        coef = v3[2]
        for n in range(probe_hi + 1, tail + 1):
            coef = coef * ratio
            out.add_to(n, key, coef)
    return WhittakerTable(ctx, c, "special", {0: out.prune(), 1: top}, normalized=False)
