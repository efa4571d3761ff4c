"""Shell functions: finite combinations of characters on valuation shells.

A shell function is sum_{(nu, n)} c * ind_{nu,n} where ind_{nu,n}(u pi^n) =
nu(u) on the shell {v(x) = n} and 0 elsewhere.  These are orthonormal for
the multiplicative pairing <f, g> = integral f conj(g) d^*x with
vol(O^*) = 1, which makes norms and pairings plain coefficient sums.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .characters import (
    CharKey,
    TRIVIAL_KEY,
    char_value_at_unit,
    key_inv,
    key_mul,
    psi_shell_coeffs,
)
from .field import FieldElem, LocalFieldCtx, PrecisionError

__all__ = ["ShellFunction"]

Component = tuple[int, CharKey]  # (shell n, canonical character key)


@dataclass
class ShellFunction:
    ctx: LocalFieldCtx
    coeffs: dict[Component, complex] = field(default_factory=dict)

    # -- construction --------------------------------------------------

    @classmethod
    def basis(cls, ctx: LocalFieldCtx, key: CharKey, n: int, c: complex = 1.0) -> "ShellFunction":
        return cls(ctx, {(n, key): complex(c)})

    @classmethod
    def newform(cls, ctx: LocalFieldCtx, n: int = 0) -> "ShellFunction":
        """ind_{1,n}: trivial character on the shell v(x) = n."""
        return cls.basis(ctx, TRIVIAL_KEY, n)

    def copy(self) -> "ShellFunction":
        return ShellFunction(self.ctx, dict(self.coeffs))

    # -- linear structure ----------------------------------------------

    def add_to(self, n: int, key: CharKey, c: complex, tol: float = 0.0) -> None:
        if c == 0:
            return
        comp = (n, key)
        v = self.coeffs.get(comp, 0j) + c
        if tol and abs(v) <= tol:
            self.coeffs.pop(comp, None)
        else:
            self.coeffs[comp] = v

    def __add__(self, other: "ShellFunction") -> "ShellFunction":
        out = self.copy()
        for (n, key), c in other.coeffs.items():
            out.add_to(n, key, c)
        return out

    def scale(self, c: complex) -> "ShellFunction":
        return ShellFunction(self.ctx, {comp: v * c for comp, v in self.coeffs.items()})

    def prune(self, tol: float = 1e-14) -> "ShellFunction":
        self.coeffs = {comp: v for comp, v in self.coeffs.items() if abs(v) > tol}
        return self

    # -- geometry ------------------------------------------------------

    def shells(self) -> list[int]:
        return sorted({n for n, _ in self.coeffs})

    def max_level(self) -> int:
        return max((key[0] for _, key in self.coeffs), default=0)

    def norm_sq(self) -> float:
        return sum(abs(v) ** 2 for v in self.coeffs.values())

    def pairing(self, other: "ShellFunction") -> complex:
        """<self, other> = integral self * conj(other) d^*x."""
        if len(self.coeffs) <= len(other.coeffs):
            return sum((v * other.coeffs[comp].conjugate() for comp, v in self.coeffs.items() if comp in other.coeffs), 0j)
        return sum((self.coeffs[comp] * v.conjugate() for comp, v in other.coeffs.items() if comp in self.coeffs), 0j)

    def component(self, n: int, key: CharKey = TRIVIAL_KEY) -> complex:
        return self.coeffs.get((n, key), 0j)

    def evaluate(self, x: FieldElem) -> complex:
        if x.is_zero:
            return 0j
        acc = 0j
        for (n, key), c in self.coeffs.items():
            if n == x.n:
                acc += c * char_value_at_unit(self.ctx, key, x.unit_mod(max(key[0], 1)) if key[0] else 1)
        return acc

    # -- model operations ----------------------------------------------

    def dilate(self, a: FieldElem) -> "ShellFunction":
        """x -> f(a x): shifts shells by -v(a) and twists by the unit of a."""
        if a.is_zero:
            raise ZeroDivisionError("dilation by zero")
        out = ShellFunction(self.ctx)
        for (n, key), c in self.coeffs.items():
            tw = char_value_at_unit(self.ctx, key, a.unit_mod(max(key[0], 1))) if key[0] else 1.0
            out.add_to(n - a.n, key, c * tw)
        return out

    def multiply_psi(self, b: FieldElem, max_level: int | None = None) -> "ShellFunction":
        """x -> psi(b x) f(x), expanded back into shell components.

        On a shell n the factor psi(b x) has level ell = -(v(b)+n); its
        character spectrum (level-ell characters plus a Ramanujan term at
        ell = 1) is convolved onto the components of f.
        """
        if b.is_zero:
            return self.copy()
        out = ShellFunction(self.ctx)
        cache: dict[int, dict[CharKey, complex]] = {}
        for (n, key), c in self.coeffs.items():
            ell = -(b.n + n)
            if max_level is not None and ell > max_level:
                raise PrecisionError(f"psi factor of level {ell} exceeds cap {max_level}")
            if ell not in cache:
                cache[ell] = psi_shell_coeffs(self.ctx, b.n, b.unit_mod(max(ell, 1)) if ell >= 1 else 1, n)
            for pkey, pc in cache[ell].items():
                out.add_to(n, key_mul(self.ctx.p, key, pkey), c * pc)
        return out.prune(1e-16)

    def conj_chars(self) -> "ShellFunction":
        """Coefficient-wise data of conj(f): conj coefficients on inverse characters."""
        out = ShellFunction(self.ctx)
        for (n, key), c in self.coeffs.items():
            out.add_to(n, key_inv(self.ctx.p, key), c.conjugate())
        return out
