"""Pydantic request/response models of the computation service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class ComplexValue(BaseModel):
    re: float
    im: float

    @classmethod
    def of(cls, z: complex) -> "ComplexValue":
        return cls(re=float(z.real), im=float(z.imag))


class LocalIntegralRequest(BaseModel):
    p: int = Field(ge=3, description="odd prime residue characteristic")
    rep1: str
    rep2: str
    rep3: str
    precision: int = Field(default=16, ge=8, le=24)
    tol: float = 1e-8
    threads: int = Field(default=1, ge=1, le=16)


class ContributionRow(BaseModel):
    i: int
    value: ComplexValue
    abs: float


class LocalIntegralResponse(BaseModel):
    version: str
    p: int
    reps: list[str]
    A: ComplexValue
    B: ComplexValue
    closed_form: ComplexValue
    brute_force: ComplexValue
    abs_error: float
    contributions: list[ContributionRow]
    epsilon_sign: bool


class WhittakerRequest(BaseModel):
    p: int = Field(ge=3)
    rep: str
    precision: int = Field(default=16, ge=8, le=24)
    resolution: int | None = Field(default=None, description="unit-class resolution of the emitted rows")


class TableResponse(BaseModel):
    version: str
    columns: list[str]
    rows: list[list[float]]


class MatcoefRequest(BaseModel):
    p: int = Field(ge=3)
    rep: str
    role: str = Field(default="phi1", pattern="^phi[123]$")
    c3: int = Field(ge=2)
    precision: int = Field(default=16, ge=8, le=24)
    resolution: int = Field(default=1, ge=1, le=4, description="unit-class resolution of the grid")
    va_min: int = -3
    va_max: int = 3
    vm_min: int = -3
    vm_max: int = 1


class KirillovCheckRequest(BaseModel):
    p: int = Field(ge=3)
    c: int = Field(default=2, ge=2)
    w: str = "w0"
    seed: int = 1
    samples: int = Field(default=25, ge=1, le=200)
    tol: float = 1e-10


class CheckReport(BaseModel):
    version: str
    passed: bool
    checks: dict[str, float | bool | str]


class HeckeCheckRequest(BaseModel):
    qs: list[int] = [3, 5]
    samples: int = Field(default=200, ge=1, le=5000)
    tol: float = 1e-12
    seed: int = 2024


class AmplifierRequest(BaseModel):
    alpha: str = "7/64"
    N: int | None = Field(default=None, description="run the synthetic amplifier at this conductor norm")
    seed: int = 1


class AmplifierResponse(BaseModel):
    version: str
    alpha: str
    b: str
    b_decimal: float
    delta: str
    delta_decimal: float
    delta_exceeds_1_24: bool
    synthetic: dict[str, float | int | bool] | None = None


class VerifyRequest(BaseModel):
    suite: str = Field(default="all", pattern="^(all|triple|tables|hecke)$")


class CriterionResult(BaseModel):
    id: str
    passed: bool
    detail: str


class VerifyResponse(BaseModel):
    version: str
    passed: bool
    criteria: list[CriterionResult]
