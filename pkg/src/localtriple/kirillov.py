"""Synthetic Kirillov-model engine for supercuspidal representations.

The model realizes a level-c supercuspidal on compactly supported shell
functions.  The Borel subgroup acts by dilation, psi-multiplication and the
central character; the Weyl element acts componentwise by

    omega . ind_{nu,n} = C_{nu w0^-1} z0^-n ind_{nu^-1 w0, -n + n_{nu^-1}},

with z0 = w(pi), w0 = w|units, n_nu = min(-c, -2 level(nu)) and unit
constants C_nu subject to C_nu C_{nu^-1 w0^-1} = w0(-1) z0^{n_nu}.  Those
relations (forced by omega^2 = -1) are the only constraints; the remaining
freedom is filled deterministically from the seed, one draw per
{nu, nu^-1 w0^-1} orbit, independent of evaluation order.

Lower-triangular unipotents act through the fixed Bruhat route
(1 0; x 1) = -omega (1 -x; 0 1) omega, and composite actions only ever use
this route.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .characters import (
    CharKey,
    MultChar,
    char_value_at_unit,
    key_inv,
    key_mul,
)
from .field import FieldElem, LocalFieldCtx, PrecisionError
from .shellfun import ShellFunction

__all__ = ["SupercuspidalData", "act_borel", "act_omega", "act_lower", "act_lower_power"]

_MASK = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def _mix(*xs: int) -> int:
    acc = 0x12345678DEADBEEF
    for x in xs:
        acc = _splitmix64(acc ^ (x & _MASK))
    return acc


@dataclass
class SupercuspidalData:
    """One synthetic supercuspidal: level c >= 2, central character, seeded C-constants."""

    ctx: LocalFieldCtx
    c: int
    w: MultChar  # central character, level <= 1, |w(pi)| = 1
    seed: int = 1
    resolution: int = 0  # cap on character levels the engine will produce
    _c_cache: dict[CharKey, complex] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.c < 2:
            raise ValueError("supercuspidal level must be >= 2")
        if self.w.level > 1:
            raise ValueError("central character must be unramified or of level 1")
        if abs(abs(self.w.omega) - 1.0) > 1e-9:
            raise ValueError("central character must be unitary")
        if not self.resolution:
            self.resolution = min(self.c + 4, self.ctx.L - 1)
        if self.resolution > self.ctx.L - 1:
            raise PrecisionError("engine resolution exceeds field precision")
        p = self.ctx.p
        w0 = self.w.key
        self.w0_at_minus1 = (
            complex(char_value_at_unit(self.ctx, w0, (-1) % p ** max(w0[0], 1))) if w0[0] else 1.0 + 0j
        )

    @property
    def z0(self) -> complex:
        return self.w.omega

    @property
    def w0_key(self) -> CharKey:
        return self.w.key

    def n_of(self, key: CharKey) -> int:
        """Support exponent n_nu = min(-c, -2 level): the level-i statement for odd p."""
        return min(-self.c, -2 * key[0])

    def C(self, key: CharKey) -> complex:
        if key[0] > self.resolution:
            raise PrecisionError(
                f"character level {key[0]} beyond engine resolution {self.resolution}"
            )
        got = self._c_cache.get(key)
        if got is not None:
            return got
        p = self.ctx.p
        partner = key_mul(p, key_inv(p, key), key_inv(p, self.w0_key))
        rel = self.w0_at_minus1 * self.z0 ** self.n_of(key)
        if partner == key:
            bit = _mix(self.seed, 0x5E1F, key[0], key[1]) & 1
            val = (1.0 if bit else -1.0) * complex(np.sqrt(rel))
            self._c_cache[key] = val
            return val
        rep = min(key, partner)
        h = _mix(self.seed, rep[0], rep[1])
        c_rep = complex(np.exp(2j * np.pi * (h / float(1 << 64))))
        self._c_cache[rep] = c_rep
        other = rel / c_rep  # n and rel are shared within the orbit
        self._c_cache[partner if rep == key else key] = other
        return c_rep if rep == key else other

    def newform(self, shell: int = 0) -> ShellFunction:
        return ShellFunction.newform(self.ctx, shell)


def act_omega(f: ShellFunction, data: SupercuspidalData) -> ShellFunction:
    p = data.ctx.p
    w0 = data.w0_key
    w0_inv = key_inv(p, w0)
    out = ShellFunction(data.ctx)
    for (n, key), c in f.coeffs.items():
        k_inv = key_inv(p, key)
        out_key = key_mul(p, k_inv, w0)
        coeff = data.C(key_mul(p, key, w0_inv)) * data.z0 ** (-n)
        out.add_to(-n + data.n_of(k_inv), out_key, c * coeff)
    return out


def act_borel(
    f: ShellFunction, a1: FieldElem, m: FieldElem, a2: FieldElem, data: SupercuspidalData
) -> ShellFunction:
    """pi((a1 m; 0 a2)) f: x -> w(a2) psi(m x / a2) f(a1 x / a2)."""
    out = f.dilate(a1 * a2.inv())
    if not m.is_zero:
        out = out.multiply_psi(m * a2.inv(), max_level=data.resolution)
    scale = data.w(a2)
    return out.scale(scale) if scale != 1.0 else out


def act_lower_power(f: ShellFunction, j: int, data: SupercuspidalData) -> ShellFunction:
    """pi((1 0; pi^j 1)) f via the fixed route -omega (1 -pi^j; 0 1) omega.

    Every lower-triangular action in the package goes through this one
    factorization; the C-constants do not promise consistency across
    different Bruhat routes (and tests confirm they do not deliver it),
    so no other route is ever mixed in.  j may be negative.
    """
    g = act_omega(f, data)
    g = g.multiply_psi(-data.ctx.uniformizer(j), max_level=data.resolution)
    g = act_omega(g, data)
    return g.scale(data.w0_at_minus1).prune(1e-16)


def act_lower(f: ShellFunction, i: int, data: SupercuspidalData) -> ShellFunction:
    """pi((1 0; pi^i 1)) f for i >= 0 (the integral-domain cosets)."""
    if i < 0:
        raise ValueError("act_lower needs a nonnegative power of the uniformizer")
    return act_lower_power(f, i, data)
