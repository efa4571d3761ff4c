"""FastAPI service exposing the toolkit.

Representation tables and Kirillov engines are cached inside the core
package per descriptor, so a long-running service amortizes table
construction across requests.  The CLI talks to this app in-process by
default; `localtriple serve` runs it under uvicorn.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import __version__
from ..acceptance import run_suite
from ..descriptors import DescriptorError, parse_descriptor, parse_unit_char
from ..field import LocalFieldCtx, unit_reps
from ..hecke import (
    AmplifierSpec,
    SphericalEigendata,
    amplifier_exponents,
    synthetic_amplifier_check,
    verify_hecke_identities,
)
from ..kirillov import SupercuspidalData, act_borel, act_lower, act_omega
from ..matcoef import CosetPoint, MatrixCoefficient
from ..shellfun import ShellFunction
from ..triple import brute_force_integral, epsilon_sign_assert
from .models import (
    AmplifierRequest,
    AmplifierResponse,
    CheckReport,
    ComplexValue,
    ContributionRow,
    CriterionResult,
    HeckeCheckRequest,
    KirillovCheckRequest,
    LocalIntegralRequest,
    LocalIntegralResponse,
    MatcoefRequest,
    TableResponse,
    VerifyRequest,
    VerifyResponse,
    WhittakerRequest,
)

app = FastAPI(title="localtriple", version=__version__)


def _ctx(p: int, precision: int = 16) -> LocalFieldCtx:
    try:
        return LocalFieldCtx(p, precision)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


def _parse(ctx, text: str):
    try:
        return parse_descriptor(ctx, text)
    except (DescriptorError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/local-integral", response_model=LocalIntegralResponse)
def local_integral(req: LocalIntegralRequest) -> LocalIntegralResponse:
    ctx = _ctx(req.p, req.precision)
    reps = [_parse(ctx, t) for t in (req.rep1, req.rep2, req.rep3)]
    try:
        res = brute_force_integral(*reps)
    except (ValueError, ArithmeticError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    if res.abs_error > req.tol:
        raise HTTPException(
            status_code=500, detail=f"oracle disagreement {res.abs_error:.3e} exceeds tol {req.tol}"
        )
    return LocalIntegralResponse(
        version=__version__,
        p=req.p,
        reps=[req.rep1, req.rep2, req.rep3],
        A=ComplexValue.of(res.A),
        B=ComplexValue.of(res.B),
        closed_form=ComplexValue.of(res.closed_form),
        brute_force=ComplexValue.of(res.brute_force),
        abs_error=res.abs_error,
        contributions=[
            ContributionRow(i=i, value=ComplexValue.of(v), abs=abs(v))
            for i, v in enumerate(res.contributions)
        ],
        epsilon_sign=epsilon_sign_assert(res),
    )


@app.post("/whittaker", response_model=TableResponse)
def whittaker(req: WhittakerRequest) -> TableResponse:
    ctx = _ctx(req.p, req.precision)
    rep = _parse(ctx, req.rep)
    mc = MatrixCoefficient(rep, "plain", max(2 * max(rep.c, 1), 2))
    rows: list[list[float]] = []
    for i in range(rep.c + 1):
        tab = mc.V(i)
        r = req.resolution or max(tab.max_level(), 1)
        reps_r = unit_reps(ctx, r)
        for n in tab.shells():
            for u in reps_r:
                val = tab.evaluate(ctx.elem(n, int(u)))
                rows.append([float(i), float(n), float(u), val.real, val.imag])
    return TableResponse(version=__version__, columns=["i", "n", "unit_class", "re", "im"], rows=rows)


@app.post("/matcoef", response_model=TableResponse)
def matcoef(req: MatcoefRequest) -> TableResponse:
    ctx = _ctx(req.p, req.precision)
    rep = _parse(ctx, req.rep)
    role = "twisted" if req.role == "phi2" else "plain"
    try:
        mc = MatrixCoefficient(rep, role, req.c3)
    except (ValueError, ArithmeticError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    reps_r = unit_reps(ctx, req.resolution)
    rows: list[list[float]] = []
    for i in range(req.c3 + 1):
        for va in range(req.va_min, req.va_max + 1):
            for ua in reps_r:
                a = ctx.elem(va, int(ua))
                for vm in range(req.vm_min, req.vm_max + 1):
                    for um in reps_r:
                        val = mc.value(CosetPoint(a, ctx.elem(vm, int(um)), i))
                        rows.append([float(i), float(va), float(ua), float(vm), float(um), val.real, val.imag])
    return TableResponse(
        version=__version__, columns=["i", "v(a)", "unit(a)", "v(m)", "unit(m)", "re", "im"], rows=rows
    )


@app.post("/kirillov-check", response_model=CheckReport)
def kirillov_check(req: KirillovCheckRequest) -> CheckReport:
    ctx = _ctx(req.p)
    w = parse_unit_char(ctx, req.w)
    try:
        data = SupercuspidalData(ctx, req.c, w, req.seed, resolution=min(req.c + 5, ctx.L - 1))
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    rng = np.random.default_rng(req.seed)
    checks: dict[str, float | bool | str] = {}
    worst_sq = worst_norm = 0.0
    for _ in range(req.samples):
        f = ShellFunction(ctx)
        for _ in range(4):
            lvl = int(rng.integers(0, req.c + 1))
            keys = [k for k in _level_keys(ctx, lvl)]
            key = keys[int(rng.integers(0, len(keys)))]
            f.add_to(int(rng.integers(-req.c, req.c + 1)), key, complex(rng.normal(), rng.normal()))
        nf = f.norm_sq()
        if nf < 1e-12:
            continue
        g = act_omega(act_omega(f, data), data)
        dev = sum(abs(g.coeffs.get(comp, 0j) - data.w0_at_minus1 * val) ** 2 for comp, val in f.coeffs.items())
        worst_sq = max(worst_sq, dev / nf)
        for image in (act_omega(f, data), act_lower(f, 1, data), act_borel(f, ctx.elem(1, 2), ctx.elem(-1, 1), ctx.one(), data)):
            worst_norm = max(worst_norm, abs(image.norm_sq() - nf) / nf)
    checks["omega_squared_dev"] = float(worst_sq)
    checks["unitarity_dev"] = float(worst_norm)
    # support/level profile of pi((1 0; pi^i 1)) ind_{1,k}
    profile_ok = True
    for k in (0, 1, 2):
        f = ShellFunction.newform(ctx, k)
        for i in range(0, req.c + k + 1):
            g = act_lower(f, i, data)
            shells = g.shells()
            levels = {key[0] for (_, key) in g.coeffs}
            if i >= req.c + k:
                ok = shells == [k] and levels == {0}
            elif i == req.c + k - 1:
                ok = shells == [k] and levels == {0, 1}
                ok = ok and abs(g.component(k) + 1.0 / (req.p - 1)) < req.tol
            else:
                ok = shells == [min(k, 2 * i - req.c - k)] and levels == {req.c + k - i}
            profile_ok = profile_ok and ok
    checks["support_profile"] = profile_ok
    passed = bool(worst_sq < req.tol and worst_norm < req.tol and profile_ok)
    return CheckReport(version=__version__, passed=passed, checks=checks)


def _level_keys(ctx, lvl):
    from ..characters import keys_of_level_at_most

    return [k for k in keys_of_level_at_most(ctx.p, max(lvl, 1)) if k[0] == lvl] or [(0, 0)]


@app.post("/hecke-check", response_model=CheckReport)
def hecke_check(req: HeckeCheckRequest) -> CheckReport:
    rng = np.random.default_rng(req.seed)
    worst = 0.0
    for _ in range(req.samples):
        q = int(rng.choice(req.qs))
        th, wph = rng.uniform(0, 2 * np.pi, 2)
        e = SphericalEigendata(q, np.exp(1j * (th + wph / 2)), np.exp(1j * (-th + wph / 2)))
        res = verify_hecke_identities(e, req.tol)
        worst = max(worst, max(v for k, v in res.items() if k != "passed"))
    return CheckReport(
        version=__version__,
        passed=bool(worst <= req.tol),
        checks={"identities_max_dev": float(worst), "samples": float(req.samples)},
    )


@app.post("/amplifier", response_model=AmplifierResponse)
def amplifier(req: AmplifierRequest) -> AmplifierResponse:
    try:
        alpha = Fraction(req.alpha)
        b, delta = amplifier_exponents(alpha)
    except (ValueError, ZeroDivisionError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    synthetic = None
    if req.N:
        rng = np.random.default_rng(req.seed)

        def eig_for(l):
            th, wph = rng.uniform(0, 2 * np.pi, 2)
            return SphericalEigendata(l, np.exp(1j * (th + wph / 2)), np.exp(1j * (-th + wph / 2)))

        spec = AmplifierSpec.build(req.N, eig_for, alpha)
        synthetic = {k: (bool(v) if isinstance(v, (bool, np.bool_)) else float(v)) for k, v in synthetic_amplifier_check(spec).items()}
    return AmplifierResponse(
        version=__version__,
        alpha=str(alpha),
        b=str(b),
        b_decimal=float(b),
        delta=str(delta),
        delta_decimal=float(delta),
        delta_exceeds_1_24=delta > Fraction(1, 24),
        synthetic=synthetic,
    )


@app.post("/verify", response_model=VerifyResponse)
def verify(req: VerifyRequest) -> VerifyResponse:
    results = run_suite(req.suite)
    return VerifyResponse(
        version=__version__,
        passed=bool(all(r["passed"] for r in results)),
        criteria=[CriterionResult(id=str(r["id"]), passed=bool(r["passed"]), detail=r["detail"]) for r in results],
    )
