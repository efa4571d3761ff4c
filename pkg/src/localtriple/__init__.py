"""localtriple: local triple product integrals for GL(2) over p-adic fields.

Core layout:
    field        finite model of the local field, shells and measures
    characters   unit-group characters, psi, Gauss sums, Fourier analysis
    shellfun     shell functions (the Kirillov-model state)
    kirillov     synthetic supercuspidal engine
    whittaker    newform tables, coset classifier, raw-integral oracle
    matcoef      matrix coefficients for all representation kinds
    triple       the local triple product integral and its closed form
    hecke        Hecke eigenvalue algebra and amplifier exponents
    service      FastAPI wrapper (pydantic models)
    cli          thin client over the service
"""

__version__ = "0.1.0"
