"""Text grammar for representation and character descriptors.

Representations:
    unram(z1,z2)            unramified pi(chi1, chi2), |z| = 1
    unram(z1,z2,tau=7/64)   non-tempered Satake slot: phases z, moduli q^-tau
    special(z)              special sigma(chi|.|^1/2, chi|.|^-1/2), chi(pi) = z
    ps(k1,j1,z1;k2,j2,z2)   pi(mu1, mu2), mu of level k, unit index j, mu(pi) = z
    one(k,j,z;z_unram)      pi(mu1, mu2), mu1 unramified with mu1(pi) = z_unram
    sc(c,w,seed)            synthetic supercuspidal of level c

Complex values: `exp(t)` for e^{it}, or `a+bi` / `a-bi` / `i` / plain reals.
Characters (central characters and the standalone grammar of the character
module): `w0` is the trivial character; `unit:k=<level>,j=<index>` with an
optional `;pi=<re>,<im>` tail; `u<k>.<j>` optionally followed by
`*<complex>` is accepted as a compact alias inside sc(...).
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .characters import MultChar, make_char, unramified_char
from .field import LocalFieldCtx
from .matcoef import (
    RepDescriptor,
    make_one_ramified,
    make_ps_ramified,
    make_special,
    make_supercuspidal,
    make_unramified,
)

__all__ = ["parse_complex", "parse_unit_char", "parse_descriptor", "parse_sc_colon", "DescriptorError"]


class DescriptorError(ValueError):
    def __init__(self, text: str, pos: int, message: str):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.pos = pos


_NUM = r"[-+]?\d+(?:\.\d+)?(?:/\d+)?"


def _to_float(tok: str) -> float:
    if "/" in tok:
        return float(Fraction(tok))
    return float(tok)


def parse_complex(tok: str, where: str = "") -> complex:
    tok = tok.strip()
    m = re.fullmatch(r"exp\((" + _NUM + r")\)", tok)
    if m:
        return complex(math.cos(_to_float(m.group(1))), math.sin(_to_float(m.group(1))))
    m = re.fullmatch(r"(" + _NUM + r")?\s*([-+])\s*(\d+(?:\.\d+)?)?i", tok)
    if m:
        re_part = _to_float(m.group(1)) if m.group(1) else 0.0
        im_part = _to_float(m.group(3)) if m.group(3) else 1.0
        return complex(re_part, im_part if m.group(2) == "+" else -im_part)
    if tok == "i":
        return 1j
    if tok == "-i":
        return -1j
    m = re.fullmatch(_NUM, tok)
    if m:
        return complex(_to_float(tok), 0.0)
    raise DescriptorError(where or tok, 0, f"cannot parse complex value {tok!r}")


def parse_unit_char(ctx: LocalFieldCtx, tok: str) -> MultChar:
    """`w0`, `unit:k=...,j=...[;pi=re,im]` or compact `u<k>.<j>[*<z>]`."""
    tok = tok.strip()
    if tok == "w0":
        return unramified_char(ctx, 1.0)
    m = re.fullmatch(r"unit:k=(\d+),j=(\d+)(?:;pi=(" + _NUM + r"),(" + _NUM + r"))?", tok)
    if m:
        k, j = int(m.group(1)), int(m.group(2))
        omega = complex(_to_float(m.group(3)), _to_float(m.group(4))) if m.group(3) else 1.0 + 0j
        return make_char(ctx, k, j, omega)
    m = re.fullmatch(r"u(\d+)\.(\d+)(?:\*(.+))?", tok)
    if m:
        omega = parse_complex(m.group(3), tok) if m.group(3) else 1.0 + 0j
        return make_char(ctx, int(m.group(1)), int(m.group(2)), omega)
    m = re.fullmatch(r"w0\*(.+)", tok)
    if m:
        return unramified_char(ctx, parse_complex(m.group(1), tok))
    raise DescriptorError(tok, 0, "cannot parse character descriptor")


def parse_descriptor(ctx: LocalFieldCtx, text: str) -> RepDescriptor:
    text = text.strip()
    if text.startswith("sc:"):
        return parse_sc_colon(ctx, text)
    m = re.fullmatch(r"(\w+)\((.*)\)", text)
    if not m:
        raise DescriptorError(text, 0, "expected kind(...)")
    kind, body = m.group(1), m.group(2)

    if kind == "unram":
        parts = [p.strip() for p in body.split(",")]
        tau = None
        if parts and parts[-1].startswith("tau="):
            tau = float(Fraction(parts[-1][4:]))
            parts = parts[:-1]
        if len(parts) != 2:
            raise DescriptorError(text, len(kind) + 1, "unram needs two Satake values")
        return make_unramified(ctx, parse_complex(parts[0], text), parse_complex(parts[1], text), tau=tau)

    if kind == "special":
        return make_special(ctx, parse_complex(body, text))

    if kind == "ps":
        halves = body.split(";")
        if len(halves) != 2:
            raise DescriptorError(text, len(kind) + 1, "ps needs two ;-separated characters")
        mus = []
        for half in halves:
            parts = [p.strip() for p in half.split(",")]
            if len(parts) != 3:
                raise DescriptorError(text, text.find(half), "each ps character is k,j,z")
            mus.append(make_char(ctx, int(parts[0]), int(parts[1]), parse_complex(parts[2], text)))
        return make_ps_ramified(ctx, *mus)

    if kind == "one":
        halves = body.split(";")
        if len(halves) != 2:
            raise DescriptorError(text, len(kind) + 1, "one needs `k,j,z;z_unram`")
        parts = [p.strip() for p in halves[0].split(",")]
        if len(parts) != 3:
            raise DescriptorError(text, len(kind) + 1, "the ramified character is k,j,z")
        mu2 = make_char(ctx, int(parts[0]), int(parts[1]), parse_complex(parts[2], text))
        return make_one_ramified(ctx, parse_complex(halves[1], text), mu2)

    if kind == "sc":
        m = re.fullmatch(r"(\d+)\s*,(.*),\s*(\d+)", body)
        if not m:
            raise DescriptorError(text, len(kind) + 1, "sc needs (c, w, seed)")
        w = parse_unit_char(ctx, m.group(2))
        return make_supercuspidal(ctx, int(m.group(1)), w, int(m.group(3)))

    raise DescriptorError(text, 0, f"unknown representation kind {kind!r}")


def parse_sc_colon(ctx: LocalFieldCtx, text: str) -> RepDescriptor:
    """Colon grammar of the Kirillov module: sc:c=<level>,w=<char>,seed=<u64>."""
    m = re.fullmatch(r"sc:c=(\d+),w=(.+),seed=(\d+)", text.strip())
    if not m:
        raise DescriptorError(text, 0, "expected sc:c=<level>,w=<char>,seed=<u64>")
    return make_supercuspidal(ctx, int(m.group(1)), parse_unit_char(ctx, m.group(2)), int(m.group(3)))
