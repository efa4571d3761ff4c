"""Finite-precision model of a p-adic field with odd prime residue field.

A nonzero element is stored as x = pi^n * u where n is the valuation and the
unit u is tracked modulo p^L.  Additive cancellation reduces the resolution
to which the unit class of the result is known; the `prec` attribute records
it and downstream character evaluations assert against it.

Measure normalizations used throughout the package:
    vol(O, dm) = 1          additive measure of the ring of integers,
    vol(O^*, d^*x) = 1      multiplicative measure of the units,
so the shell {v(x) = n} has additive measure p^-n (1 - 1/p) and
multiplicative measure 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "LocalFieldCtx",
    "FieldElem",
    "Shell",
    "PrecisionError",
    "shell_integral_additive",
    "shell_integral_mult",
]


class PrecisionError(ArithmeticError):
    """A computation needs unit classes at a finer resolution than available."""


def _is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    return all(p % d for d in range(3, int(p**0.5) + 1, 2))


@dataclass(frozen=True)
class LocalFieldCtx:
    """Residue characteristic p (odd prime, q = p) and working precision L."""

    p: int
    L: int = 16

    def __post_init__(self):
        if not _is_odd_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.L < 1:
            raise ValueError("precision L must be >= 1")

    @property
    def q(self) -> int:
        return self.p

    def modulus(self, r: int | None = None) -> int:
        r = self.L if r is None else r
        if r > self.L:
            raise PrecisionError(f"resolution {r} exceeds working precision {self.L}")
        return self.p**r

    # ------------------------------------------------------------------
    # element constructors

    def elem(self, n: int, u: int = 1, prec: int | None = None) -> "FieldElem":
        prec = self.L if prec is None else min(prec, self.L)
        if prec < 1:
            raise PrecisionError("unit class lost to cancellation")
        u %= self.modulus()
        if u % self.p == 0:
            raise ValueError("unit part must be coprime to p")
        return FieldElem(self, n, u, prec)

    def zero(self) -> "FieldElem":
        return FieldElem(self, 0, 0, self.L, is_zero=True)

    def one(self) -> "FieldElem":
        return self.elem(0, 1)

    def uniformizer(self, n: int = 1) -> "FieldElem":
        return self.elem(n, 1)

    def from_int(self, a: int) -> "FieldElem":
        """Exact image of a rational integer (valuation capped by L)."""
        if a == 0:
            return self.zero()
        n = 0
        while a % self.p == 0 and n < self.L:
            a //= self.p
            n += 1
        return self.elem(n, a)


@dataclass(frozen=True)
class FieldElem:
    """pi^n * u with u invertible mod p^prec; the zero element is flagged."""

    ctx: LocalFieldCtx
    n: int
    u: int
    prec: int
    is_zero: bool = False

    @property
    def valuation(self) -> int:
        if self.is_zero:
            raise ZeroDivisionError("zero element has valuation +infinity")
        return self.n

    def unit_mod(self, r: int) -> int:
        if self.is_zero:
            raise ZeroDivisionError("zero element has no unit part")
        if r > self.prec:
            raise PrecisionError(f"unit class known mod p^{self.prec}, asked for p^{r}")
        return self.u % self.ctx.p**r

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        if self.is_zero or other.is_zero:
            return self.ctx.zero()
        return FieldElem(
            self.ctx,
            self.n + other.n,
            (self.u * other.u) % self.ctx.modulus(),
            min(self.prec, other.prec),
        )

    def inv(self) -> "FieldElem":
        if self.is_zero:
            raise ZeroDivisionError("inverting zero")
        return FieldElem(self.ctx, -self.n, pow(self.u, -1, self.ctx.modulus()), self.prec)

    def __neg__(self) -> "FieldElem":
        if self.is_zero:
            return self
        return FieldElem(self.ctx, self.n, (-self.u) % self.ctx.modulus(), self.prec)

    def __add__(self, other: "FieldElem") -> "FieldElem":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        lo, hi = (self, other) if self.n <= other.n else (other, self)
        d = hi.n - lo.n
        prec = min(lo.prec, hi.prec)
        if d >= prec:
            # the higher-valuation summand is invisible at this resolution
            return FieldElem(self.ctx, lo.n, lo.u, prec)
        p = self.ctx.p
        s = (lo.u + hi.u * p**d) % p**self.ctx.L
        if s % p**prec == 0:
            # exact cancellation within the finite model
            return self.ctx.zero()
        j = 0
        while s % p == 0:
            s //= p
            j += 1
        return FieldElem(self.ctx, lo.n + j, s % p**self.ctx.L, prec - j)

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        return self + (-other)

    def scale_by_power(self, k: int) -> "FieldElem":
        """Multiply by pi^k."""
        if self.is_zero:
            return self
        return FieldElem(self.ctx, self.n + k, self.u, self.prec)

    def __repr__(self) -> str:  # pragma: no cover
        if self.is_zero:
            return "0"
        return f"pi^{self.n}*{self.u}"


@dataclass(frozen=True)
class Shell:
    """Valuation shell {v(x) = n} resolved into unit classes modulo p^r."""

    ctx: LocalFieldCtx
    n: int
    r: int

    def __post_init__(self):
        if not 1 <= self.r <= self.ctx.L:
            raise PrecisionError(f"resolution {self.r} outside [1, {self.ctx.L}]")

    def unit_reps(self) -> np.ndarray:
        return unit_reps(self.ctx, self.r)

    def elems(self):
        return [self.ctx.elem(self.n, int(u), prec=self.ctx.L) for u in self.unit_reps()]

    @property
    def class_count(self) -> int:
        p = self.ctx.p
        return (p - 1) * p ** (self.r - 1)

    @property
    def additive_measure(self) -> float:
        p = self.ctx.p
        return float(p) ** (-self.n) * (1.0 - 1.0 / p)


_UNIT_REPS_CACHE: dict[tuple[int, int], np.ndarray] = {}


def unit_reps(ctx: LocalFieldCtx, r: int) -> np.ndarray:
    """Unit residues modulo p^r in ascending order."""
    key = (ctx.p, r)
    out = _UNIT_REPS_CACHE.get(key)
    if out is None:
        a = np.arange(ctx.p**r, dtype=np.int64)
        out = a[a % ctx.p != 0]
        out.setflags(write=False)
        _UNIT_REPS_CACHE[key] = out
    return out


def shell_integral_mult(f, n: int, r: int, ctx: LocalFieldCtx) -> complex:
    """Average of f over the unit classes of {v(x)=n}; d^*x with vol(O^*)=1.

    f is called with FieldElem arguments and must be locally constant at
    resolution <= r on the shell.
    """
    shell = Shell(ctx, n, r)
    vals = [f(x) for x in shell.elems()]
    return complex(np.mean(vals))


def shell_integral_additive(f, n: int, r: int, ctx: LocalFieldCtx) -> complex:
    """Integral of f over {v(x)=n} for the additive measure with vol(O)=1."""
    shell = Shell(ctx, n, r)
    return shell.additive_measure * shell_integral_mult(f, n, r, ctx)
