"""Functions on Z/NZ, the mean-normalized Fourier transform, shifts, and
interval embeddings.

The transform convention is fixed throughout the toolkit:

    hat f(xi) = (1/N) sum_x f(x) exp(-2 pi i x xi / N)

so that hat f(0) is the mean of f and Parseval reads
sum_xi |hat f(xi)|^2 = (1/N) sum_x |f(x)|^2.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError
from .reporting import check_le, require

PARSEVAL_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class CyclicFunction:
    """A complex-valued function on Z/NZ, indexed by residue 0..N-1.

    Values are stored read-only; all operations return new objects, so
    instances can be shared freely across threads.
    """

    modulus: int
    values: np.ndarray

    def __post_init__(self):
        if self.modulus < 1:
            raise ContractViolationError("modulus must be a positive integer")
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != (self.modulus,):
            raise ContractViolationError(
                f"expected {self.modulus} values, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals.view(np.float64))):
            raise ContractViolationError("values must be finite (no NaN/inf)")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if self.modulus else 0.0


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Fourier coefficients under the mean-normalized transform."""

    modulus: int
    coefficients: np.ndarray

    def __post_init__(self):
        if self.modulus < 1:
            raise ContractViolationError("modulus must be a positive integer")
        coef = np.asarray(self.coefficients, dtype=np.complex128)
        if coef.shape != (self.modulus,):
            raise ContractViolationError(
                f"expected {self.modulus} coefficients, got shape {coef.shape}"
            )
        if not np.all(np.isfinite(coef.view(np.float64))):
            raise ContractViolationError("coefficients must be finite")
        coef = coef.copy()
        coef.flags.writeable = False
        object.__setattr__(self, "coefficients", coef)


@dataclass(frozen=True)
class IntervalEmbedding:
    """Recipe for placing values on [1, L] inside Z/MZ with zero padding.

    padding_factor >= 2k guarantees that any k-term progression supported on
    the embedded window with |common difference| < L lifts to a genuine
    integer progression (no wraparound).
    """

    interval_length: int
    ambient_modulus: int
    padding_factor: int = 2

    def __post_init__(self):
        if self.interval_length < 1:
            raise ContractViolationError("interval_length must be >= 1")
        if self.padding_factor < 2:
            raise ContractViolationError("padding_factor must be >= 2")
        if self.ambient_modulus < self.padding_factor * self.interval_length:
            raise ContractViolationError(
                "ambient_modulus must be >= padding_factor * interval_length"
            )

    @classmethod
    def for_counting(cls, interval_length: int, k: int) -> "IntervalEmbedding":
        """Embedding sized for counting k-term progressions without wraparound."""
        return cls(interval_length, 2 * k * interval_length, 2 * k)


def dft(f: CyclicFunction) -> Spectrum:
    """Mean-normalized discrete Fourier transform, O(N log N) for any N."""
    coef = np.fft.fft(f.values) / f.modulus
    spectrum = Spectrum(f.modulus, coef)
    power_x = float(np.mean(np.abs(f.values) ** 2))
    power_xi = float(np.sum(np.abs(coef) ** 2))
    scale = max(power_x, 1.0)
    require(check_le("parseval", abs(power_xi - power_x), PARSEVAL_RTOL * scale))
    return spectrum


def idft(s: Spectrum) -> CyclicFunction:
    """Inverse transform: f(x) = sum_xi hat f(xi) exp(2 pi i x xi / N)."""
    vals = np.fft.ifft(s.coefficients) * s.modulus
    return CyclicFunction(s.modulus, vals)


def shift(f: CyclicFunction, r: int) -> CyclicFunction:
    """(T^r f)(x) = f(x + r mod N)."""
    return CyclicFunction(f.modulus, np.roll(f.values, -int(r)))


def embed_interval(values, emb: IntervalEmbedding) -> CyclicFunction:
    """Place values given on positions 1..L at residues 1..L of Z/MZ."""
    vals = np.asarray(values, dtype=np.complex128)
    if vals.shape != (emb.interval_length,):
        raise ContractViolationError(
            f"expected {emb.interval_length} interval values, got {vals.shape}"
        )
    if emb.ambient_modulus < 2 * emb.interval_length:
        raise ContractViolationError("ambient modulus smaller than twice the window")
    out = np.zeros(emb.ambient_modulus, dtype=np.complex128)
    out[1 : emb.interval_length + 1] = vals
    return CyclicFunction(emb.ambient_modulus, out)


def mean(f: CyclicFunction) -> complex:
    return complex(np.mean(f.values))


def l2_norm(f: CyclicFunction) -> float:
    """(E_x |f(x)|^2)^(1/2)."""
    return float(np.sqrt(np.mean(np.abs(f.values) ** 2)))


def _require_same_modulus(f: CyclicFunction, g: CyclicFunction):
    if f.modulus != g.modulus:
        raise ContractViolationError(
            f"mismatched moduli: {f.modulus} vs {g.modulus}"
        )


def pointwise_mul(f: CyclicFunction, g: CyclicFunction) -> CyclicFunction:
    _require_same_modulus(f, g)
    return CyclicFunction(f.modulus, f.values * g.values)


def conjugate(f: CyclicFunction) -> CyclicFunction:
    return CyclicFunction(f.modulus, np.conj(f.values))


def sub(f: CyclicFunction, g: CyclicFunction) -> CyclicFunction:
    _require_same_modulus(f, g)
    return CyclicFunction(f.modulus, f.values - g.values)


def add(f: CyclicFunction, g: CyclicFunction) -> CyclicFunction:
    _require_same_modulus(f, g)
    return CyclicFunction(f.modulus, f.values + g.values)


def scale(f: CyclicFunction, c: complex) -> CyclicFunction:
    return CyclicFunction(f.modulus, f.values * c)


def indicator(members, modulus: int) -> CyclicFunction:
    """0/1 function on Z/NZ from an iterable of residues."""
    vals = np.zeros(modulus, dtype=np.complex128)
    idx = np.asarray(sorted(int(m) % modulus for m in members), dtype=np.int64)
    if idx.size:
        vals[idx] = 1.0
    return CyclicFunction(modulus, vals)


def write_function_csv(f: CyclicFunction, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "re", "im"])
        for i, v in enumerate(f.values):
            writer.writerow([i, repr(float(v.real)), repr(float(v.imag))])


def read_function_csv(path) -> CyclicFunction:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["index", "re", "im"]:
            raise ContractViolationError(f"bad CyclicFunction CSV header: {header}")
        rows = [(int(r[0]), float(r[1]), float(r[2])) for r in reader]
    rows.sort()
    vals = np.array([re + 1j * im for _, re, im in rows], dtype=np.complex128)
    return CyclicFunction(len(rows), vals)


def write_spectrum_csv(s: Spectrum, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["freq", "re", "im"])
        for i, v in enumerate(s.coefficients):
            writer.writerow([i, repr(float(v.real)), repr(float(v.imag))])


def read_spectrum_csv(path) -> Spectrum:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["freq", "re", "im"]:
            raise ContractViolationError(f"bad Spectrum CSV header: {header}")
        rows = [(int(r[0]), float(r[1]), float(r[2])) for r in reader]
    rows.sort()
    coef = np.array([re + 1j * im for _, re, im in rows], dtype=np.complex128)
    return Spectrum(len(rows), coef)
