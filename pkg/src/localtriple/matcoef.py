"""Normalized matrix coefficients on coset representatives.

Every representation kind is reduced to a family of Kirillov-model tables
V^(i)(y) = W(diag(y,1) x_i a), where a = diag(pi^{-(c3-c2)}, 1) for the
twisted role and a = 1 for the plain one.  The coefficient at the point
(a m; 0 1) x_i then has the uniform spectral form

    Phi = (1/N) sum_{t, mu} conj(S2[t]) V^(i)[v(a)+t, mu]
                 mu(u_a) conj(mu)(u_m) gamma(mu, v(m)+t),

with S2 = V^(c3) (which has only level-0 components), N = <S2, S2> and
gamma the unit-shell transform kernel from `characters`.  This makes the
coefficient exact: all sums are finite and the m-dependence is analytic in
the shell data.

Macdonald's formula for unramified representations and the double-coset
value table for special representations are implemented independently and
used both as spec'd operations and as cross-checks of the spectral route.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


from .characters import (
    CharKey,
    TRIVIAL_KEY,
    MultChar,
    char_value_at_unit,
    gamma_coeff,
    key_inv,
    key_mul,
    unramified_char,
)
from .field import FieldElem, LocalFieldCtx
from .kirillov import SupercuspidalData, act_lower_power
from .shellfun import ShellFunction
from .whittaker import (
    WhittakerTable,
    whittaker_table_one_ramified,
    whittaker_table_ps_ramified,
    whittaker_table_special,
    whittaker_table_spherical,
)

__all__ = [
    "RepDescriptor",
    "CosetPoint",
    "MatrixCoefficient",
    "make_unramified",
    "make_special",
    "make_ps_ramified",
    "make_one_ramified",
    "make_supercuspidal",
    "phi_unramified",
    "phi_special",
    "phi_whittaker",
    "phi_supercuspidal",
    "macdonald_value",
    "whittaker_raw_oracle",
    "newform_vector",
    "extract_A",
    "extract_B",
    "table_A",
    "table_B",
]


# ----------------------------------------------------------------------
# representation descriptors

@dataclass(frozen=True)
class RepDescriptor:
    """One of the five kinds: unramified(z1,z2), special(z), ps_ramified,
    one_ramified, supercuspidal, with its level and central character."""

    ctx: LocalFieldCtx
    kind: str
    params: tuple

    @property
    def c(self) -> int:
        if self.kind == "unramified":
            return 0
        if self.kind == "special":
            return 1
        if self.kind == "ps_ramified":
            mu1, mu2 = self.params
            return mu1.level + mu2.level
        if self.kind == "one_ramified":
            return self.params[1].level
        return self.params[0]  # supercuspidal: (c, w, seed)

    @property
    def central_char(self) -> MultChar:
        if self.kind == "unramified":
            z1, z2 = self.params
            return unramified_char(self.ctx, z1 * z2)
        if self.kind == "special":
            (z,) = self.params
            return unramified_char(self.ctx, z * z)
        if self.kind == "ps_ramified":
            mu1, mu2 = self.params
            return mu1.mul(mu2)
        if self.kind == "one_ramified":
            z1, mu2 = self.params
            return MultChar(self.ctx, mu2.key, z1 * mu2.omega)
        return self.params[1]

    @property
    def type_class(self) -> str:
        """Type 1 / Type 2 / Type 3 bucket of the local-integral tables."""
        if self.kind in ("supercuspidal", "ps_ramified"):
            return "type1"
        if self.kind in ("unramified", "special"):
            return "type2"
        return "type3"

    def cache_token(self) -> tuple:
        def enc(x):
            if isinstance(x, MultChar):
                return ("chi", x.key, round(x.omega.real, 12), round(x.omega.imag, 12))
            if isinstance(x, complex):
                return (round(x.real, 12), round(x.imag, 12))
            return x

        return (self.ctx.p, self.ctx.L, self.kind) + tuple(enc(x) for x in self.params)


def make_unramified(ctx: LocalFieldCtx, z1: complex, z2: complex, tau: float | None = None) -> RepDescriptor:
    z1, z2 = complex(z1), complex(z2)
    if abs(abs(z1 * z2) - 1.0) > 1e-9:
        raise ValueError("central character chi1 chi2 must be unitary")
    if tau is None:
        if abs(abs(z1) - 1.0) > 1e-9 or abs(abs(z2) - 1.0) > 1e-9:
            raise ValueError("non-unitary Satake values need the explicit tau= escape")
    else:
        if not 0 < tau < 0.5:
            raise ValueError("tau must lie in (0, 1/2)")
        scale = float(ctx.q) ** (-tau)
        if abs(abs(z1) - 1.0) < 1e-12 and abs(abs(z2) - 1.0) < 1e-12:
            z1, z2 = z1 * scale, z2 / scale  # phases given, moduli from tau
        elif abs(abs(z1) - scale) > 1e-9 or abs(abs(z2) - 1.0 / scale) > 1e-9:
            raise ValueError("Satake moduli do not match the declared tau")
    return RepDescriptor(ctx, "unramified", (z1, z2))


def make_special(ctx: LocalFieldCtx, z: complex) -> RepDescriptor:
    if abs(abs(z) - 1.0) > 1e-9:
        raise ValueError("special representation needs a unitary chi")
    return RepDescriptor(ctx, "special", (complex(z),))


def make_ps_ramified(ctx: LocalFieldCtx, mu1: MultChar, mu2: MultChar) -> RepDescriptor:
    if mu1.level < 1 or mu2.level < 1:
        raise ValueError("ps_ramified needs both characters ramified")
    if not (mu1.is_unitary() and mu2.is_unitary()):
        raise ValueError("characters must be unitary")
    return RepDescriptor(ctx, "ps_ramified", (mu1, mu2))


def make_one_ramified(ctx: LocalFieldCtx, z1: complex, mu2: MultChar) -> RepDescriptor:
    if mu2.level < 1:
        raise ValueError("one_ramified needs mu2 ramified")
    if abs(abs(complex(z1)) - 1.0) > 1e-9 or not mu2.is_unitary():
        raise ValueError("characters must be unitary")
    return RepDescriptor(ctx, "one_ramified", (complex(z1), mu2))


def make_supercuspidal(ctx: LocalFieldCtx, c: int, w: MultChar, seed: int = 1) -> RepDescriptor:
    if c < 2:
        raise ValueError("synthetic supercuspidal needs level >= 2")
    if w.level > 1 or not w.is_unitary():
        raise ValueError("central character must be unitary of level <= 1")
    return RepDescriptor(ctx, "supercuspidal", (c, w, int(seed)))


@dataclass(frozen=True)
class CosetPoint:
    """(a m; 0 1)(1 0; pi^i 1): the coset grid of the local integral."""

    a: FieldElem
    m: FieldElem
    i: int


# ----------------------------------------------------------------------
# whittaker-table / engine access with caching

_TABLE_CACHE: dict[tuple, WhittakerTable] = {}
_ENGINE_CACHE: dict[tuple, SupercuspidalData] = {}


def rep_whittaker_table(rep: RepDescriptor) -> WhittakerTable:
    token = rep.cache_token()
    tab = _TABLE_CACHE.get(token)
    if tab is None:
        if rep.kind == "unramified":
            tab = whittaker_table_spherical(rep.ctx, *rep.params)
        elif rep.kind == "special":
            tab = whittaker_table_special(rep.ctx, *rep.params)
        elif rep.kind == "ps_ramified":
            tab = whittaker_table_ps_ramified(*rep.params)
        elif rep.kind == "one_ramified":
            tab = whittaker_table_one_ramified(*rep.params)
        else:
            raise ValueError("supercuspidal kind uses the Kirillov engine")
        _TABLE_CACHE[token] = tab
    return tab


def rep_engine(rep: RepDescriptor, resolution: int) -> SupercuspidalData:
    c, w, seed = rep.params
    token = rep.cache_token() + (resolution,)
    eng = _ENGINE_CACHE.get(token)
    if eng is None:
        eng = SupercuspidalData(rep.ctx, c, w, seed, resolution=resolution)
        _ENGINE_CACHE[token] = eng
    return eng


# ----------------------------------------------------------------------
# the spectral coefficient

class MatrixCoefficient:
    """Phi for one representation and role on the coset grid of level c3.

    role: "plain" for Phi_1 / Phi_3, "twisted" for Phi_2 (conjugated by
    a([N]) = diag(pi^{-(c3 - c)}, 1)).
    """

    def __init__(self, rep: RepDescriptor, role: str, c3: int):
        if role not in ("plain", "twisted"):
            raise ValueError("role must be 'plain' or 'twisted'")
        self.rep = rep
        self.role = role
        self.c3 = c3
        self.ctx = rep.ctx
        self.e = (c3 - rep.c) if role == "twisted" else 0
        if self.e < 0:
            raise ValueError("twisted role needs c3 >= level of the representation")
        self._v_cache: dict[int, ShellFunction] = {}
        self._shell_maps: dict[int, dict[int, list[tuple[CharKey, complex]]]] = {}
        self._f_cache: dict[tuple, dict[CharKey, complex]] = {}
        if rep.kind == "supercuspidal":
            self.engine = rep_engine(rep, resolution=min(rep.c + self.e + 3, rep.ctx.L - 1))
        else:
            self.table = rep_whittaker_table(rep)
        s2 = self.V(c3)
        for (n, key) in s2.coeffs:
            if key != TRIVIAL_KEY:
                raise ArithmeticError("newform table is not level 0 in alpha")
        self.s2_items = sorted((n, c) for (n, _), c in s2.coeffs.items())
        self.norm = s2.norm_sq()
        if self.norm < 1e-12:
            raise ArithmeticError("degenerate newform norm")

    # -- table assembly -------------------------------------------------

    def V(self, i: int) -> ShellFunction:
        i = min(max(i, 0), self.c3)
        got = self._v_cache.get(i)
        if got is None:
            got = self._build_v(i)
            self._v_cache[i] = got
            if got.max_level() > self.c3:
                raise ArithmeticError("table level exceeds c3: K_1-invariance violated")
        return got

    def _build_v(self, i: int) -> ShellFunction:
        rep, ctx, e = self.rep, self.ctx, self.e
        if rep.kind == "supercuspidal":
            # the whole family V^(i) = pi(a_v) pi((1 0; pi^{i-e} 1)) f goes
            # through the single fixed Bruhat route, also for i < e
            eng = self.engine
            if i - e >= rep.c:
                f = eng.newform(0)
            else:
                f = act_lower_power(eng.newform(0), i - e, eng)
            return f.dilate(ctx.uniformizer(-e)) if e else f
        if i >= e:
            f = self.table.T(i - e)
            return f.dilate(ctx.uniformizer(-e)) if e else f
        # induced, i < e: psi-twisted dilation of T^(0)
        w = rep.central_char
        beta = ctx.uniformizer(-i) - ctx.uniformizer(e - 2 * i)
        f = self.table.T(0).dilate(ctx.uniformizer(e - 2 * i))
        f = f.multiply_psi(beta, max_level=ctx.L - 1)
        return f.scale(w.omega ** (i - e)).prune(1e-16)

    def _shell_map(self, i: int) -> dict[int, list[tuple[CharKey, complex]]]:
        got = self._shell_maps.get(i)
        if got is None:
            got = {}
            for (n, key), c in self.V(i).coeffs.items():
                got.setdefault(n, []).append((key, c))
            self._shell_maps[i] = got
        return got

    # -- spectral evaluation ---------------------------------------------

    def f_factor(self, i: int, va: int, s: int | None) -> dict[CharKey, complex]:
        """F(mu) = (1/N) sum_t conj(S2[t]) V^(i)[va+t, mu] gamma(mu, s+t)."""
        token = (min(max(i, 0), self.c3), va, s)
        got = self._f_cache.get(token)
        if got is not None:
            return got
        shell_map = self._shell_map(token[0])
        out: dict[CharKey, complex] = {}
        for t, s2c in self.s2_items:
            row = shell_map.get(va + t)
            if not row:
                continue
            s2cc = s2c.conjugate()
            for key, c in row:
                g = gamma_coeff(self.ctx, key, None if s is None else s + t)
                if g:
                    out[key] = out.get(key, 0j) + s2cc * c * g
        for key in list(out):
            out[key] /= self.norm
            if abs(out[key]) < 1e-17:
                del out[key]
        self._f_cache[token] = out
        return out

    def value(self, point: CosetPoint) -> complex:
        """Normalized coefficient Phi((a m; 0 1)(1 0; pi^i 1))."""
        a, m = point.a, point.m
        if a.is_zero:
            raise ZeroDivisionError("a must be invertible")
        s = None if m.is_zero else m.n
        F = self.f_factor(point.i, a.n, s)
        acc = 0j
        for key, c in F.items():
            v = c
            if key != TRIVIAL_KEY:
                v *= char_value_at_unit(self.ctx, key, a.unit_mod(key[0]))
                v *= char_value_at_unit(self.ctx, key, m.unit_mod(key[0])).conjugate()
            acc += v
        return acc

    def integrate_over_m_shell(self, i: int, va: int, ua: int, s: int) -> complex:
        """integral over {v(m)=s} of Phi(a m; ...) dm at fixed a (additive dm)."""
        q = float(self.ctx.q)
        F = self.f_factor(i, va, s)
        return q ** (-s) * (1 - 1 / q) * F.get(TRIVIAL_KEY, 0j)

    def level_mass(self, i: int, va: int, s: int | None) -> dict[int, float]:
        """Squared mass per character level of a -> Phi at fixed (i, shells)."""
        out: dict[int, float] = {}
        for key, c in self.f_factor(i, va, s).items():
            out[key[0]] = out.get(key[0], 0.0) + abs(c) ** 2
        return out

    def support_shells(self, i: int) -> list[int]:
        return sorted(self._shell_map(i).keys())


# ----------------------------------------------------------------------
# Macdonald (unramified) and the special-representation value table

def macdonald_value(ctx: LocalFieldCtx | int, z1: complex, z2: complex, n: int) -> complex:
    """Phi(diag(pi^n, 1)) for the normalized spherical coefficient, n >= 0."""
    if n < 0:
        raise ValueError("reduce to n >= 0 first")
    q = float(ctx if isinstance(ctx, int) else ctx.q)
    if abs(z1 - z2) < 1e-9:
        z = z1
        return q ** (-n / 2.0) * z**n * ((n + 1) - (n - 1) / q) / (1 + 1 / q)
    num = z1**n * (z1 - z2 / q) - z2**n * (z2 - z1 / q)
    return q ** (-n / 2.0) / (1 + 1 / q) * num / (z1 - z2)


def _point_matrix(point: CosetPoint) -> tuple[FieldElem, FieldElem, FieldElem, FieldElem]:
    ctx = point.a.ctx
    s = point.a + point.m * ctx.uniformizer(point.i)
    return (s, point.m, ctx.uniformizer(point.i), ctx.one())


def phi_unramified(rep: RepDescriptor, point: CosetPoint) -> complex:
    """Bi-K-invariant coefficient via Cartan reduction and Macdonald's formula."""
    if rep.kind != "unramified":
        raise ValueError("phi_unramified needs an unramified descriptor")
    z1, z2 = rep.params
    g = _point_matrix(point)
    vals = [x.n for x in g if not x.is_zero]
    n1 = min(vals)
    n2 = point.a.n - n1  # v(det) = v(a)
    w = rep.central_char.omega
    return w**n1 * macdonald_value(rep.ctx, z1, z2, n2 - n1)


_IWAHORI_CELLS = ("s_n w", "s_n", "w s_n w", "w s_n")


def iwahori_cell(point: CosetPoint) -> tuple[str, int, int]:
    """Locate the point in an Iwahori double coset: (word type, n, center power).

    After factoring pi^smin the reduction mod pi decides the cell: lower-left
    unit -> s_n w; else lower-right unit -> s_n; else upper-left unit ->
    w s_n w; else -> w s_n, where s_n = diag(pi^n, 1) and w = (0 1; -1 0).
    """
    g11, g12, g21, g22 = _point_matrix(point)
    vals = [x.n for x in (g11, g12, g21, g22) if not x.is_zero]
    smin = min(vals)
    n = point.a.n - 2 * smin
    if n < 0:
        raise ArithmeticError("normalized determinant valuation must be >= 0")

    def unit_at(x: FieldElem) -> bool:
        return (not x.is_zero) and x.n == smin

    if unit_at(g21):
        word = "s_n w"
    elif unit_at(g22):
        word = "s_n"
    elif unit_at(g11):
        word = "w s_n w"
    else:
        word = "w s_n"
    return word, n, smin


def phi_special(rep: RepDescriptor, point: CosetPoint) -> complex:
    """Coefficient of the special representation from its double-coset table."""
    if rep.kind != "special":
        raise ValueError("phi_special needs a special descriptor")
    (z,) = rep.params
    q = float(rep.ctx.q)
    word, n, smin = iwahori_cell(point)
    if n == 0:
        base = {"s_n": 1.0 + 0j, "w s_n w": 1.0 + 0j, "s_n w": -1.0 / q, "w s_n": -1.0 / q}[word]
    else:
        zn = z**n
        base = {
            "s_n": zn * q**-n,
            "w s_n": -zn * q ** (1 - n),
            "s_n w": -zn * q ** (-1 - n),
            "w s_n w": zn * q**-n,
        }[word]
    return (z * z) ** smin * base


# ----------------------------------------------------------------------
# A/B values

_MC_CACHE: dict[tuple, MatrixCoefficient] = {}


def coefficient(rep: RepDescriptor, role: str, c3: int) -> MatrixCoefficient:
    token = rep.cache_token() + (role, c3)
    mc = _MC_CACHE.get(token)
    if mc is None:
        mc = MatrixCoefficient(rep, role, c3)
        _MC_CACHE[token] = mc
    return mc


def phi_whittaker(rep: RepDescriptor, role: str, point: CosetPoint, c3: int) -> complex:
    """Coefficient of an induced-type representation through its tables."""
    if rep.kind not in ("ps_ramified", "one_ramified", "special", "unramified"):
        raise ValueError("phi_whittaker needs an induced-type descriptor")
    return coefficient(rep, "twisted" if role == "phi2" else "plain", c3).value(point)


def phi_supercuspidal(rep: RepDescriptor, role: str, point: CosetPoint, c3: int) -> complex:
    """Coefficient of a synthetic supercuspidal through the Kirillov engine."""
    if rep.kind != "supercuspidal":
        raise ValueError("phi_supercuspidal needs a supercuspidal descriptor")
    return coefficient(rep, "twisted" if role == "phi2" else "plain", c3).value(point)


def newform_vector(rep: RepDescriptor):
    """Induced-model newform of an induced-type representation.

    ps_ramified is supported on the coset with k = level(mu2); one_ramified
    and special on the identity coset (the special combination also needs
    the k = 0 coset, fitted inside the table builder and reused here).
    """
    from .whittaker import InducedVector

    ctx = rep.ctx
    if rep.kind == "ps_ramified":
        mu1, mu2 = rep.params
        return InducedVector(mu1, mu2, rep.c, {mu2.level: 1.0})
    if rep.kind == "one_ramified":
        z1, mu2 = rep.params
        return InducedVector(unramified_char(ctx, z1), mu2, rep.c, {rep.c: 1.0})
    raise ValueError("the defining-integral oracle covers ps_ramified and one_ramified newforms")


def whittaker_raw_oracle(rep: RepDescriptor, alpha: FieldElem, i: int) -> complex:
    """W(diag(alpha,1) x_i) from the defining integral, normalized like the
    closed-form tables (an independent check of them)."""
    from .whittaker import raw_whittaker

    vec = newform_vector(rep)
    value = raw_whittaker(vec, alpha, i, check_boundary=False)
    if rep.kind == "ps_ramified":
        return value / raw_whittaker(vec, rep.ctx.one(), rep.c, check_boundary=False)
    # one_ramified tables are unnormalized; match their scale at alpha = 1
    scale = rep_whittaker_table(rep).tables[rep.c].component(0)
    return value / raw_whittaker(vec, rep.ctx.one(), rep.c, check_boundary=False) * scale


def extract_A(rep: RepDescriptor, c3: int) -> complex:
    """A = Phi_1((1 pi^-1; 0 1)) computed through the spectral route."""
    ctx = rep.ctx
    if c3 < 2 * max(rep.c, 1):
        raise ValueError("extract_A needs c3 >= 2 max(c1, c2, 1)")
    mc = MatrixCoefficient(rep, "plain", c3)
    return mc.value(CosetPoint(ctx.one(), ctx.uniformizer(-1), c3))


def extract_B(rep: RepDescriptor, c3: int) -> complex:
    """B = Phi_2((1 0; pi^{c3-1} 1)) computed through the spectral route."""
    ctx = rep.ctx
    if c3 < 2 * max(rep.c, 1):
        raise ValueError("extract_B needs c3 >= 2 max(c1, c2, 1)")
    mc = MatrixCoefficient(rep, "twisted", c3)
    return mc.value(CosetPoint(ctx.one(), ctx.zero(), c3 - 1))


def table_A(rep: RepDescriptor) -> complex | Fraction:
    """The closed A-value table: exact rationals where the table is rational."""
    q = rep.ctx.q
    if rep.type_class == "type1":
        return Fraction(-1, q - 1)
    if rep.kind == "special":
        return Fraction(-1, q)
    if rep.kind == "unramified":
        z1, z2 = rep.params
        r = z1 / z2
        return (r + 1 / r + 1 - 1.0 / q) / (q + 1)
    return Fraction(0)  # type 3


def table_B(rep: RepDescriptor) -> complex | Fraction:
    return table_A(rep)
