"""Uniformity norms U^2 and U^3, multiplicative derivatives, and the 3/4-term
progression counting forms with their generalized von Neumann checks.

Norm definitions:

    ||f||_{U2}^4 = E_n |E_x f(x+n) conj(f(x))|^2 = sum_xi |hat f(xi)|^4
    ||f||_{U3}^8 = E_n ||T^n f conj(f)||_{U2}^4

Counting forms:

    Lambda_k(f_0,...,f_{k-1}) = E_{x,r} prod_j f_j(x + j r)

For k = 3 the spectral evaluation Lambda_3 = sum_c hat f_0(c) hat f_1(-2c)
hat f_2(c) is used; it is cross-checked against the naive double loop in the
test suite before anything relies on it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .cyclic import CyclicFunction
from .errors import ContractViolationError, PostconditionError

IMAG_RESIDUE_TOL = 1e-9

U3_BLOCK_ROWS = 256


@dataclass(frozen=True)
class NormReport:
    norm_kind: str  # "U2_direct" | "U2_spectral" | "U3"
    value: float
    modulus: int
    elapsed: float

    def as_dict(self) -> dict:
        return {
            "norm_kind": self.norm_kind,
            "value": self.value,
            "modulus": self.modulus,
            "elapsed": self.elapsed,
        }


@dataclass(frozen=True)
class CountingFormResult:
    k: int
    value: complex
    method: str  # "naive" | "spectral"
    modulus: int

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "value_re": float(self.value.real),
            "value_im": float(self.value.imag),
            "method": self.method,
            "modulus": self.modulus,
        }


@dataclass(frozen=True)
class GvnReport:
    k: int
    lhs: float
    rhs: float
    holds: bool
    operand_norms: tuple

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
            "operand_norms": list(self.operand_norms),
        }


def _real_norm_power(value: complex, what: str) -> float:
    """Discard imaginary residue below tolerance; larger residue is a bug."""
    if abs(value.imag) > IMAG_RESIDUE_TOL * max(1.0, abs(value.real)):
        raise PostconditionError(f"{what}: imaginary residue {value.imag!r} too large")
    return max(float(value.real), 0.0)


def derivative(f: CyclicFunction, h: int) -> CyclicFunction:
    """Multiplicative derivative (T^h f)(x) * conj(f(x))."""
    return CyclicFunction(f.modulus, np.roll(f.values, -int(h)) * np.conj(f.values))


def _u2_fourth_power_spectral(values: np.ndarray) -> float:
    coef = np.fft.fft(values) / values.shape[0]
    return float(np.sum(np.abs(coef) ** 4))


def u2_norm(f: CyclicFunction, method: str = "spectral") -> NormReport:
    """Gowers U^2 norm, by the defining correlation average or via the spectrum."""
    t0 = time.perf_counter()
    N = f.modulus
    if method == "direct":
        vals = f.values
        acc = 0.0
        for n in range(N):
            c = np.vdot(vals, np.roll(vals, -n)) / N
            acc += abs(c) ** 2
        fourth = acc / N
        kind = "U2_direct"
    elif method == "spectral":
        fourth = _u2_fourth_power_spectral(f.values)
        kind = "U2_spectral"
    else:
        raise ContractViolationError(f"unknown u2 method {method!r}")
    return NormReport(kind, fourth ** 0.25, N, time.perf_counter() - t0)


def u3_norm(f: CyclicFunction) -> NormReport:
    """Gowers U^3 norm: eighth root of E_n ||T^n f conj(f)||_{U2}^4.

    The inner U^2 norms are evaluated spectrally, in blocks of derivative rows,
    for a total cost of O(N^2 log N). The n-average uses numpy's pairwise
    summation, so the reduction order is fixed.
    """
    t0 = time.perf_counter()
    N = f.modulus
    vals = f.values
    conj = np.conj(vals)
    base = np.arange(N)
    block_powers = []
    for start in range(0, N, U3_BLOCK_ROWS):
        ns = np.arange(start, min(start + U3_BLOCK_ROWS, N))
        rows = vals[(base[None, :] + ns[:, None]) % N] * conj[None, :]
        coef = np.fft.fft(rows, axis=1) / N
        block_powers.append(np.sum(np.abs(coef) ** 4, axis=1))
    eighth = float(np.mean(np.concatenate(block_powers)))
    return NormReport("U3", eighth ** 0.125, N, time.perf_counter() - t0)


def uniformity_norm(f: CyclicFunction, order: int) -> float:
    """U^2 or U^3 value (spectral path), as a plain float."""
    if order == 2:
        return u2_norm(f, "spectral").value
    if order == 3:
        return u3_norm(f).value
    raise ContractViolationError("only U^2 and U^3 are supported")


def _check_operands(fs) -> int:
    if not fs:
        raise ContractViolationError("no operands")
    N = fs[0].modulus
    for g in fs:
        if g.modulus != N:
            raise ContractViolationError("operands must share a modulus")
    return N


def ap_form(fs, method: str = "naive") -> CountingFormResult:
    """k-term progression counting form E_{x,r} prod_j f_j(x + j r), k = 3 or 4."""
    k = len(fs)
    if k not in (3, 4):
        raise ContractViolationError("k must be 3 or 4")
    N = _check_operands(fs)
    if method == "naive":
        acc = np.zeros(N, dtype=np.complex128)
        prod = np.empty(N, dtype=np.complex128)
        for r in range(N):
            np.copyto(prod, fs[0].values)
            for j in range(1, k):
                prod *= np.roll(fs[j].values, -j * r)
            acc[r] = prod.sum()
        value = complex(acc.sum() / (N * N))
    elif method == "spectral":
        if k != 3:
            raise ContractViolationError("spectral evaluation is only valid for k=3")
        c0 = np.fft.fft(fs[0].values) / N
        c1 = np.fft.fft(fs[1].values) / N
        c2 = np.fft.fft(fs[2].values) / N
        idx = (-2 * np.arange(N)) % N
        value = complex(np.sum(c0 * c1[idx] * c2))
    else:
        raise ContractViolationError(f"unknown ap_form method {method!r}")
    return CountingFormResult(k, value, method, N)


def verify_gvn(fs) -> GvnReport:
    """Check |Lambda_k| <= min_j ||f_j|| in U^(k-1), for operands bounded by 1."""
    k = len(fs)
    if k not in (3, 4):
        raise ContractViolationError("k must be 3 or 4")
    for g in fs:
        if g.max_abs() > 1.0 + 1e-12:
            raise ContractViolationError(
                "operands must be bounded in magnitude by 1"
            )
    method = "spectral" if k == 3 else "naive"
    lhs = abs(ap_form(fs, method).value)
    norms = tuple(uniformity_norm(g, k - 1) for g in fs)
    rhs = min(norms)
    return GvnReport(k, lhs, rhs, lhs <= rhs + 1e-9, norms)
