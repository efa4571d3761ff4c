"""Unitary characters of F^* and the unramified additive character psi.

Multiplicative characters of the unit group O^* at resolution r are the
characters of the cyclic group (Z/p^r)^*.  A fixed primitive root g (chosen
mod p^2, hence primitive mod every p^r for odd p) indexes them: the
character with key (k, j) sends g^t to e(j t / phi(p^k)) and has level
exactly k.  Keys are always stored in canonical form, i.e. at their exact
level, so that k = 0 is the trivial character on units, k = 1 characters
have j not divisible by p^0 * ... (j != 0), and k >= 2 characters have
p-free index j.

The additive character is psi(x) = e(frac(x)): trivial on O, of level
max(0, -v(x)) on units, where e(t) = exp(2 pi i t).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .field import FieldElem, LocalFieldCtx, PrecisionError, unit_reps

__all__ = [
    "CharKey",
    "MultChar",
    "TRIVIAL_KEY",
    "char_eval",
    "fourier_on_shell",
    "gauss_sum",
    "gamma_coeff",
    "psi_value",
    "psi_values_on_units",
    "psi_shell_coeffs",
    "unit_char_values",
    "key_level",
    "key_mul",
    "key_inv",
    "keys_of_level_at_most",
    "primitive_root",
    "euler_phi_pk",
]

CharKey = tuple[int, int]  # (exact level k, index j modulo phi(p^k))
TRIVIAL_KEY: CharKey = (0, 0)


def euler_phi_pk(p: int, k: int) -> int:
    return 1 if k == 0 else (p - 1) * p ** (k - 1)


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    """Smallest primitive root mod p^2; a generator of (Z/p^r)^* for every r."""
    phi = p - 1
    fac = []
    m = phi
    d = 2
    while d * d <= m:
        if m % d == 0:
            fac.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        fac.append(m)
    for g in range(2, p):
        if all(pow(g, phi // f, p) != 1 for f in fac):
            # primitive mod p; ensure also primitive mod p^2
            if pow(g, phi, p * p) != 1:
                return g
            return g + p
    raise ValueError(f"no primitive root found for {p}")


@lru_cache(maxsize=None)
def _dlog_table(p: int, r: int) -> np.ndarray:
    """dlog[u] = t with g^t = u mod p^r (and -1 at non-units)."""
    mod = p**r
    g = primitive_root(p)
    phi = euler_phi_pk(p, r)
    table = np.full(mod, -1, dtype=np.int64)
    x = 1
    for t in range(phi):
        table[x] = t
        x = (x * g) % mod
    table.setflags(write=False)
    return table


def dlog(ctx: LocalFieldCtx, r: int) -> np.ndarray:
    if r > ctx.L:
        raise PrecisionError(f"resolution {r} exceeds working precision {ctx.L}")
    return _dlog_table(ctx.p, r)


# ----------------------------------------------------------------------
# character keys

def canonical_key(p: int, r: int, j: int) -> CharKey:
    """Reduce an index j modulo phi(p^r) to its exact level."""
    phi = euler_phi_pk(p, r)
    j %= phi
    if j == 0:
        return TRIVIAL_KEY
    if r == 1:
        return (1, j)
    v = 0
    while j % p == 0 and v < r - 1:
        j //= p
        v += 1
    k = r - v
    if k == 1:
        return (1, j % (p - 1)) if j % (p - 1) else TRIVIAL_KEY
    return (k, j)


def key_level(key: CharKey) -> int:
    return key[0]


def _lift_index(p: int, key: CharKey, r: int) -> int:
    """Index of the character at resolution r >= level."""
    k, j = key
    if k > r:
        raise ValueError("cannot restrict a character below its level")
    return j * p ** (r - k)


def key_mul(p: int, a: CharKey, b: CharKey) -> CharKey:
    r = max(a[0], b[0], 1)
    return canonical_key(p, r, _lift_index(p, a, r) + _lift_index(p, b, r))


def key_inv(p: int, a: CharKey) -> CharKey:
    return canonical_key(p, max(a[0], 1), -_lift_index(p, a, max(a[0], 1)))


def keys_of_level_at_most(p: int, r: int) -> list[CharKey]:
    return [canonical_key(p, max(r, 1), j) for j in range(euler_phi_pk(p, max(r, 1)))] if r >= 1 else [TRIVIAL_KEY]


@lru_cache(maxsize=None)
def _unit_char_values(p: int, key: CharKey, r: int) -> np.ndarray:
    """chi(u) over unit_reps(p^r) in ascending-residue order."""
    k, j = key
    if k == 0:
        n = euler_phi_pk(p, r)
        return np.ones(n, dtype=np.complex128)
    mod_k = p**k
    phi_k = euler_phi_pk(p, k)
    reps = np.arange(p**r, dtype=np.int64)
    reps = reps[reps % p != 0]
    t = _dlog_table(p, k)[reps % mod_k]
    vals = np.exp(2j * np.pi * (j * t % phi_k) / phi_k)
    vals.setflags(write=False)
    return vals


def unit_char_values(ctx: LocalFieldCtx, key: CharKey, r: int) -> np.ndarray:
    if key[0] > r:
        raise ValueError(f"character of level {key[0]} not defined at resolution {r}")
    return _unit_char_values(ctx.p, key, r)


def char_value_at_unit(ctx: LocalFieldCtx, key: CharKey, u: int) -> complex:
    k, j = key
    if k == 0:
        return 1.0 + 0j
    phi_k = euler_phi_pk(ctx.p, k)
    t = int(dlog(ctx, k)[u % ctx.p**k])
    if t < 0:
        raise ValueError("character evaluated at a non-unit")
    return complex(np.exp(2j * np.pi * (j * t % phi_k) / phi_k))


# ----------------------------------------------------------------------
# characters of F^*

@dataclass(frozen=True)
class MultChar:
    """Unitary character of F^*: unit-group key plus the value at pi.

    omega may have |omega| != 1 only for the non-tempered unramified Satake
    slot; constructors enforce unitarity elsewhere.
    """

    ctx: LocalFieldCtx
    key: CharKey
    omega: complex = 1.0 + 0j

    @property
    def level(self) -> int:
        return self.key[0]

    def __call__(self, x: FieldElem) -> complex:
        return char_eval(self, x)

    def eval_units(self, r: int) -> np.ndarray:
        return unit_char_values(self.ctx, self.key, r)

    def mul(self, other: "MultChar") -> "MultChar":
        return MultChar(self.ctx, key_mul(self.ctx.p, self.key, other.key), self.omega * other.omega)

    def inv(self) -> "MultChar":
        return MultChar(self.ctx, key_inv(self.ctx.p, self.key), 1.0 / self.omega)

    def restrict_units(self) -> "MultChar":
        return MultChar(self.ctx, self.key, 1.0 + 0j)

    def is_unitary(self, tol: float = 1e-9) -> bool:
        return abs(abs(self.omega) - 1.0) <= tol


def make_char(ctx: LocalFieldCtx, level: int, index: int, omega: complex = 1.0 + 0j) -> MultChar:
    if level < 0:
        raise ValueError("level must be >= 0")
    if level == 0:
        return MultChar(ctx, TRIVIAL_KEY, omega)
    key = canonical_key(ctx.p, level, index)
    if key[0] != level:
        raise ValueError(f"index {index} does not give a character of exact level {level}")
    return MultChar(ctx, key, omega)


def unramified_char(ctx: LocalFieldCtx, omega: complex) -> MultChar:
    return MultChar(ctx, TRIVIAL_KEY, omega)


def char_eval(chi: MultChar, x: FieldElem) -> complex:
    """chi(pi^n u) = omega^n * (unit-group character at u)."""
    if x.is_zero:
        raise ZeroDivisionError("character evaluated at zero")
    if chi.level > x.prec:
        raise PrecisionError(f"character level {chi.level} exceeds element precision {x.prec}")
    val = chi.omega ** x.n if x.n else 1.0 + 0j
    if chi.level:
        val *= char_value_at_unit(chi.ctx, chi.key, x.u)
    return complex(val)


# ----------------------------------------------------------------------
# additive character

def psi_value(x: FieldElem) -> complex:
    """psi(x) = e(p-adic fractional part of x); unramified: trivial on O."""
    if x.is_zero or x.n >= 0:
        return 1.0 + 0j
    ell = -x.n
    mod = x.ctx.p**ell
    return complex(np.exp(2j * np.pi * (x.unit_mod(ell) % mod) / mod))


def psi_values_on_units(ctx: LocalFieldCtx, coef_n: int, coef_u: int, r: int) -> np.ndarray:
    """psi(c * u) over unit classes u mod p^r, where c = pi^coef_n * coef_u.

    The level of the result as a function of u is max(0, -coef_n); r must be
    at least that for the values to be well defined per class.
    """
    ell = -coef_n
    reps = unit_reps(ctx, r)
    if ell <= 0:
        return np.ones(len(reps), dtype=np.complex128)
    if ell > r:
        raise PrecisionError(f"psi factor of level {ell} needs resolution >= {ell}, got {r}")
    mod = ctx.p**ell
    return np.exp(2j * np.pi * ((coef_u % mod) * (reps % mod) % mod) / mod)


# ----------------------------------------------------------------------
# finite Fourier analysis on a shell

def fourier_on_shell(ctx: LocalFieldCtx, values: np.ndarray, r: int, tol: float = 1e-13) -> dict[CharKey, complex]:
    """Decompose values (over unit_reps(ctx, r)) as sum_nu c_nu * nu.

    Returns canonical-key coefficients with |c| > tol.  Exact for functions
    that are genuinely locally constant at resolution r: the unit group at
    resolution r is cyclic, so this is a single DFT along the discrete log.
    """
    reps = unit_reps(ctx, r)
    values = np.asarray(values, dtype=np.complex128)
    if values.shape != reps.shape:
        raise ValueError("values must be aligned with unit_reps(ctx, r)")
    phi = len(reps)
    order = np.argsort(dlog(ctx, r)[reps])  # reorder as g^0, g^1, ...
    coeffs = np.fft.fft(values[order]) / phi
    out: dict[CharKey, complex] = {}
    for j in np.nonzero(np.abs(coeffs) > tol)[0]:
        key = canonical_key(ctx.p, r, int(j))
        out[key] = out.get(key, 0.0) + complex(coeffs[j])
    return out


def eval_char_sum(ctx: LocalFieldCtx, coeffs: dict[CharKey, complex], u: int) -> complex:
    return sum(c * char_value_at_unit(ctx, key, u) for key, c in coeffs.items())


# ----------------------------------------------------------------------
# Gauss sums and the gamma coefficients of the spectral machine

def gauss_sum(chi: MultChar, k: int | None = None) -> complex:
    """integral_{O^*} chi(u) psi(pi^-k u) du, additive measure vol(O^*)=1-1/p.

    k defaults to the level of chi (the only pairing with a nonzero value
    for primitive chi); k = 0 is rejected as degenerate.
    """
    k = chi.level if k is None else k
    if k < 1:
        raise ValueError("gauss_sum needs k >= 1; the k = 0 case is a plain measure")
    ctx = chi.ctx
    r = max(chi.level, k, 1)
    reps = unit_reps(ctx, r)
    vals = chi.eval_units(r) * psi_values_on_units(ctx, -k, 1, r)
    return complex((1.0 - 1.0 / ctx.p) * vals.mean()) if len(reps) else 0j


@lru_cache(maxsize=None)
def _gamma_coeff_cached(p: int, key: CharKey, ell: int) -> complex:
    if ell >= 0:
        return 1.0 + 0j if key == TRIVIAL_KEY else 0j
    lvl = key[0]
    if key == TRIVIAL_KEY:
        return complex(-1.0 / (p - 1)) if ell == -1 else 0j
    if lvl != -ell:
        return 0j
    ctx = LocalFieldCtx(p, max(lvl + 1, 2))
    r = lvl
    vals = unit_char_values(ctx, key, r) * psi_values_on_units(ctx, ell, 1, r)
    return complex(vals.mean())


def gamma_coeff(ctx: LocalFieldCtx, key: CharKey, ell: int | None) -> complex:
    """avg_{O^*, d^*} chi_key(w) psi(pi^ell w): the shell transform kernel.

    ell = None means psi absent (m = 0), i.e. the ell -> +infinity limit.
    Exact special cases: 1 for (trivial, ell >= 0), -1/(q-1) for
    (trivial, -1), 0 off the level match; the level match is a normalized
    Gauss sum of modulus q^{-level/2}.
    """
    if ell is None:
        return 1.0 + 0j if key == TRIVIAL_KEY else 0j
    return _gamma_coeff_cached(ctx.p, key, ell)


def psi_shell_coeffs(ctx: LocalFieldCtx, coef_n: int, coef_u: int, shell_n: int) -> dict[CharKey, complex]:
    """Character decomposition on {v(x)=shell_n} of x -> psi(c x), c = pi^coef_n coef_u.

    Level ell = -(coef_n + shell_n); for ell <= 0 the function is constant 1.
    The spectrum sits at level exactly ell, plus the trivial character when
    ell = 1 (Ramanujan term).
    """
    ell = -(coef_n + shell_n)
    if ell <= 0:
        return {TRIVIAL_KEY: 1.0 + 0j}
    vals = psi_values_on_units(ctx, -ell, coef_u, ell)
    return fourier_on_shell(ctx, vals, ell)
