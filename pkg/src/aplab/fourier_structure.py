"""Fourier-side structure machinery: large spectra, threshold (weak) and
kernel-based (strong) decompositions, Bohr-set Fejer kernels, Dirichlet
progression partitioning, the density-increment step, and the structured
3-term counting chain.

Every decomposition carries runtime-verified bounds; a failed bound raises
PostconditionError rather than returning silently.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .cyclic import (
    CyclicFunction,
    Spectrum,
    add,
    dft,
    idft,
    l2_norm,
    mean,
    sub,
)
from .errors import (
    ContractViolationError,
    IncrementNotFoundError,
    PostconditionError,
    ScaleExhaustedError,
)
from .gowers import ap_form, u2_norm
from .primes import next_prime
from .reporting import BoundCheck, check_le, require

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GrowthFunction:
    """Float-safe strictly increasing growth function; overflow saturates to inf."""

    fn: object
    description: str

    def __call__(self, x: float) -> float:
        if not math.isfinite(x):
            return math.inf
        try:
            y = float(self.fn(x))
        except OverflowError:
            return math.inf
        return y if math.isfinite(y) else math.inf

    @classmethod
    def exponential(cls, base: float = 2.0) -> "GrowthFunction":
        if base < 2:
            raise ContractViolationError("exponential growth needs base >= 2")
        return cls(lambda n: base ** n, f"exp:base={base}")

    @classmethod
    def polynomial(cls, power: float = 2.0) -> "GrowthFunction":
        if power < 1:
            raise ContractViolationError("polynomial growth needs power >= 1")
        return cls(lambda n: max(n, 1.0) ** power + 1.0, f"poly:power={power}")

    @classmethod
    def from_menu(cls, text: str) -> "GrowthFunction":
        kind, _, arg = text.partition(":")
        if kind == "exp":
            return cls.exponential(float(arg) if arg else 2.0)
        if kind == "poly":
            return cls.polynomial(float(arg) if arg else 2.0)
        raise ContractViolationError(f"unknown growth menu entry {text!r}")


@dataclass(frozen=True, eq=False)
class LargeSpectrum:
    modulus: int
    threshold: float
    frequencies: np.ndarray

    def __post_init__(self):
        freqs = np.asarray(self.frequencies, dtype=np.int64)
        object.__setattr__(self, "frequencies", freqs)
        if self.threshold < 0:
            raise ContractViolationError("threshold must be nonnegative")


def large_spectrum(f: CyclicFunction, threshold: float) -> LargeSpectrum:
    """Frequencies xi with |hat f(xi)| >= threshold; size bounded by Plancherel."""
    if threshold <= 0:
        raise ContractViolationError("threshold must be positive")
    coef = dft(f).coefficients
    freqs = np.flatnonzero(np.abs(coef) >= threshold)
    power = float(np.mean(np.abs(f.values) ** 2))
    require(
        check_le(
            "large_spectrum_count",
            len(freqs) * threshold ** 2,
            power * (1 + 1e-9),
            1e-12,
        )
    )
    return LargeSpectrum(f.modulus, threshold, freqs)


@dataclass(frozen=True, eq=False)
class WeakDecomposition:
    structured: CyclicFunction
    pseudorandom: CyclicFunction
    threshold: float
    phase_count: int
    verified_bounds: tuple


def weak_decompose(f: CyclicFunction, lam: float) -> WeakDecomposition:
    """Split f into the Fourier restriction above lam^2 plus a U^2-small rest.

    Threshold bookkeeping: restricting at lam^2 gives at most lam^-4 phases and
    honestly guarantees ||f_U||_{U2} <= lam (norm-first convention).
    """
    if not 0 < lam < 1:
        raise ContractViolationError("lambda must lie in (0,1)")
    if f.max_abs() > 1 + 1e-12:
        raise ContractViolationError("f must be bounded in magnitude by 1")
    coef = dft(f).coefficients
    mask = np.abs(coef) >= lam ** 2
    structured = idft(Spectrum(f.modulus, np.where(mask, coef, 0.0)))
    pseudorandom = sub(f, structured)
    phase_count = int(mask.sum())
    checks = (
        check_le("phase_count", phase_count, lam ** -4 * (1 + 1e-9), 1e-9),
        check_le("u2_of_fU", u2_norm(pseudorandom, "spectral").value, lam, 1e-9),
        check_le(
            "reassembly_l2",
            l2_norm(sub(f, add(structured, pseudorandom))),
            1e-9,
        ),
    )
    require(*checks)
    return WeakDecomposition(structured, pseudorandom, lam, phase_count, checks)


@dataclass(frozen=True, eq=False)
class FejerKernel:
    """Nonnegative mean-one kernel whose transform is close to 1 on targets."""

    modulus: int
    values: np.ndarray
    spectrum_targets: LargeSpectrum
    epsilon: float
    bohr_width: float
    bohr_size: int
    verified_bounds: tuple

    @property
    def is_identity(self) -> bool:
        return self.bohr_size == 1

    @property
    def is_flat(self) -> bool:
        return self.bohr_size == self.modulus


def fejer_kernel(spec: LargeSpectrum, eps: float) -> FejerKernel:
    """Bohr-set autocorrelation kernel.

    B = {x : |e(2 pi i x xi / N) - 1| <= eps/2 for all xi in spec}; K is the
    autocorrelation of 1_B normalized to mean one, so hat K = |hat 1_B|^2 /
    (|B|/N)^2.  B always contains 0; B = {0} degenerates to the identity
    kernel N*delta_0 (hat K = 1 everywhere), which is logged as a warning.
    """
    if not 0 <= eps < 1:
        raise ContractViolationError("kernel epsilon must lie in [0,1)")
    N = spec.modulus
    targets = [int(x) for x in spec.frequencies if int(x) % N != 0]
    b_mask = np.ones(N, dtype=bool)
    x = np.arange(N, dtype=np.int64)
    for xi in targets:
        r = (x * xi) % N
        d = np.minimum(r, N - r).astype(np.float64) / N
        b_mask &= 2.0 * np.sin(np.pi * d) <= eps / 2.0
        if int(b_mask.sum()) == 1:
            break
    size = int(b_mask.sum())
    if size == 1:
        logger.warning(
            "Bohr set degenerated to {0} at N=%d (|targets|=%d, eps=%.3g); "
            "kernel is the identity",
            N,
            len(targets),
            eps,
        )
        counts = np.zeros(N, dtype=np.float64)
        counts[0] = 1.0
    else:
        bf = np.fft.fft(b_mask.astype(np.float64))
        counts = np.rint(np.fft.ifft(bf * np.conj(bf)).real)
        counts[counts < 0] = 0.0
    values = counts * (N / float(size) ** 2)
    khat = np.fft.fft(values).real / N
    target_min = float(np.min(khat[spec.frequencies])) if len(spec.frequencies) else 1.0
    checks = (
        check_le("kernel_min", -float(values.min()), 0.0),
        check_le("kernel_mean", abs(float(values.mean()) - 1.0), 1e-9),
        check_le("kernel_hat_min", -float(khat.min()), 0.0, 1e-9),
        check_le("kernel_hat_max", float(khat.max()), 1.0, 1e-9),
        check_le("kernel_hat_targets", 1.0 - eps, target_min, 1e-9),
    )
    require(*checks)
    return FejerKernel(
        modulus=N,
        values=values,
        spectrum_targets=spec,
        epsilon=eps,
        bohr_width=eps / 2.0,
        bohr_size=size,
        verified_bounds=checks,
    )


def convolve_with_kernel(f: CyclicFunction, kernel: FejerKernel) -> CyclicFunction:
    """(f * K)(x) = E_y f(y) K(x - y); identity and flat kernels short-circuit."""
    if f.modulus != kernel.modulus:
        raise ContractViolationError("function and kernel moduli differ")
    if kernel.is_identity:
        return f
    if kernel.is_flat:
        return CyclicFunction(
            f.modulus, np.full(f.modulus, mean(f), dtype=np.complex128)
        )
    out = np.fft.ifft(np.fft.fft(f.values) * np.fft.fft(kernel.values)) / f.modulus
    return CyclicFunction(f.modulus, out)


@dataclass(frozen=True, eq=False)
class StrongDecomposition:
    structured: CyclicFunction  # f restricted to the coarse kernel scale
    small: CyclicFunction
    pseudorandom: CyclicFunction
    complexity: int  # T = size of the large spectrum at the coarse threshold
    growth_record: str
    epsilon: float
    scale_index: int
    coarse_threshold: float
    fine_threshold: float
    verified_bounds: tuple

    def bounds_dict(self) -> dict:
        return {c.name: c.as_dict() for c in self.verified_bounds}


def _clip_real_unit(f: CyclicFunction) -> CyclicFunction:
    """Remove fp dust from a convolution of [0,1] data with a nonneg kernel."""
    vals = f.values.real
    if vals.min() < -1e-9 or vals.max() > 1 + 1e-9:
        raise PostconditionError("convolution left the unit range by more than dust")
    return CyclicFunction(f.modulus, np.clip(vals, 0.0, 1.0))


def _validate_unit_interval(f: CyclicFunction):
    vals = f.values
    if np.max(np.abs(vals.imag)) > 1e-12:
        raise ContractViolationError("f must be real-valued")
    if vals.real.min() < -1e-12 or vals.real.max() > 1 + 1e-12:
        raise ContractViolationError("f must take values in [0,1]")


def strong_decompose(
    f: CyclicFunction, eps: float, growth: GrowthFunction
) -> StrongDecomposition:
    """Three-part split f = structured + small + pseudorandom.

    Scales N_1 = M, N_{m+1} = F(G(N_m))^4 with G(n) = max(n^2, ceil(1/eps) n);
    the pigeonhole picks the first m <= M^2 whose spectral annulus
    [1/N_{m+2}, 1/N_m] has mass at most 2/M^2, and the two Fejer kernels sit
    at thresholds 1/N_m (precision eps) and 1/N_{m+1} (precision
    min(eps, 8/F(T)^2), chosen so that the verified U^2 bound closes).  Scale
    values saturate to inf in floating point; thresholds below the smallest
    positive double collapse to 0, which yields the identity kernel and an
    honest (degenerate) decomposition, logged by fejer_kernel.
    """
    M = round(1.0 / eps)
    if M < 2 or abs(eps - 1.0 / M) > 1e-12:
        raise ContractViolationError("eps must equal 1/M for an integer M >= 2")
    _validate_unit_interval(f)
    N = f.modulus
    coef = dft(f).coefficients
    mags = np.abs(coef)
    power2 = mags ** 2

    big_g = lambda n: max(n * n, math.ceil(1.0 / eps) * n)
    scales = [float(M)]
    for _ in range(M * M + 1):
        prev = scales[-1]
        nxt = growth(big_g(prev))
        if math.isfinite(nxt):
            try:
                nxt = nxt ** 4
            except OverflowError:
                nxt = math.inf
        if math.isfinite(nxt) and nxt <= prev:
            raise ContractViolationError("growth function is not increasing fast enough")
        scales.append(nxt)
    thresholds = [1.0 / s if math.isfinite(s) else 0.0 for s in scales]

    chosen = None
    chosen_mass = None
    for m in range(1, M * M + 1):
        t_lo, t_hi = thresholds[m + 1], thresholds[m - 1]
        mass = float(np.sum(power2[(mags >= t_lo) & (mags <= t_hi)]))
        if mass <= 2.0 / (M * M):
            chosen, chosen_mass = m, mass
            break
    if chosen is None:
        raise PostconditionError("annulus pigeonhole found no admissible scale")

    t_coarse = thresholds[chosen - 1]
    t_fine = thresholds[chosen]
    spec_coarse = LargeSpectrum(N, t_coarse, np.flatnonzero(mags >= t_coarse))
    spec_fine = LargeSpectrum(N, t_fine, np.flatnonzero(mags >= t_fine))
    T = int(len(spec_coarse.frequencies))
    f_of_t = growth(float(T))
    u2_cap = 4.0 / f_of_t if math.isfinite(f_of_t) else 0.0
    eps_fine = min(eps, 8.0 / f_of_t ** 2) if math.isfinite(f_of_t) else 0.0

    coarse_kernel = fejer_kernel(spec_coarse, eps)
    fine_kernel = fejer_kernel(spec_fine, eps_fine)
    coarse = _clip_real_unit(convolve_with_kernel(f, coarse_kernel))
    fine = _clip_real_unit(convolve_with_kernel(f, fine_kernel))
    f_s = sub(fine, coarse)
    f_u = sub(f, fine)

    reassembled = add(add(coarse, f_s), f_u)
    mean_delta = abs(mean(coarse) - mean(f))
    checks = (
        check_le("reassembly_l2", l2_norm(sub(f, reassembled)), 1e-9),
        check_le("annulus_mass", chosen_mass, 2.0 / (M * M), 1e-12),
        check_le("fUperp_min", -float(coarse.values.real.min()), 0.0, 1e-9),
        check_le("fUperp_max", float(coarse.values.real.max()), 1.0, 1e-9),
        check_le("mean_delta", mean_delta, 1e-9),
        check_le("fU_magnitude", f_u.max_abs(), 1.0, 1e-9),
        check_le("u2_of_fU", u2_norm(f_u, "spectral").value, u2_cap, 1e-10),
        check_le("l2_of_fS", l2_norm(f_s), 4.0 * eps),
    )
    require(*checks)
    return StrongDecomposition(
        structured=coarse,
        small=f_s,
        pseudorandom=f_u,
        complexity=T,
        growth_record=growth.description,
        epsilon=eps,
        scale_index=chosen,
        coarse_threshold=t_coarse,
        fine_threshold=t_fine,
        verified_bounds=checks,
    )


@dataclass(frozen=True)
class Progression:
    """Arithmetic progression start, start+difference, ..., length terms."""

    start: int
    difference: int
    length: int

    def elements(self) -> np.ndarray:
        return self.start + self.difference * np.arange(self.length, dtype=np.int64)


def dirichlet_partition(
    interval_length: int, xi: int, modulus: int, eta: float
) -> list[Progression]:
    """Partition [1, L] into progressions on which x -> xi x / N is nearly constant.

    A Dirichlet step 1 <= s <= ceil(sqrt(N)) minimizing ||xi s / N|| is found by
    exact search; each residue class mod s is chopped so the phase fluctuates
    by at most eta^2/100 per piece (verified).  Rejects scales with
    eta * sqrt(N) < 4, where pieces could not reach useful length.
    """
    L, N = int(interval_length), int(modulus)
    if not 1 <= L <= N // 2:
        raise ContractViolationError("need 1 <= L <= N/2")
    if not 0 < eta <= 1:
        raise ContractViolationError("eta must lie in (0,1]")
    if eta * math.sqrt(N) < 4:
        raise ScaleExhaustedError(
            f"interval too short to subdivide usefully: eta*sqrt(N) = "
            f"{eta * math.sqrt(N):.3f} < 4"
        )
    xi = int(xi) % N
    if xi == 0:
        return [Progression(1, 1, L)]
    root = math.isqrt(N - 1) + 1
    s_arr = np.arange(1, root + 1, dtype=np.int64)
    r = (s_arr * xi) % N
    dist = np.minimum(r, N - r).astype(np.float64) / N
    pos = int(np.argmin(dist))
    s, step = int(s_arr[pos]), float(dist[pos])
    require(check_le("dirichlet_step", step, 1.0 / root, 1e-12))
    budget = eta * eta / 100.0
    if step == 0.0:
        cap = L
    else:
        cap = max(1, math.floor(eta * eta / (200.0 * math.pi * step)))
    pieces = []
    for a in range(1, min(s, L) + 1):
        count = (L - a) // s + 1
        offset = 0
        while offset < count:
            size = min(cap, count - offset)
            piece = Progression(a + offset * s, s, size)
            fluctuation = (size - 1) * step
            require(check_le("piece_fluctuation", fluctuation, budget, 1e-12))
            pieces.append(piece)
            offset += size
    require(check_le("cover", abs(sum(p.length for p in pieces) - L), 0.0))
    return pieces


@dataclass(frozen=True)
class PseudorandomCertificate:
    u2_value: float
    threshold: float
    modulus: int

    def as_dict(self) -> dict:
        return {
            "kind": "pseudorandom",
            "u2_value": self.u2_value,
            "threshold": self.threshold,
            "modulus": self.modulus,
        }


@dataclass(frozen=True)
class ProgressionCertificate:
    start: int
    difference: int
    length: int
    measured_density: float
    baseline_density: float

    @property
    def gain(self) -> float:
        return self.measured_density - self.baseline_density

    def elements(self) -> np.ndarray:
        return Progression(self.start, self.difference, self.length).elements()

    def as_dict(self) -> dict:
        return {
            "kind": "progression",
            "start": self.start,
            "difference": self.difference,
            "length": self.length,
            "measured_density": self.measured_density,
            "baseline_density": self.baseline_density,
            "gain": self.gain,
        }


GAIN_FACTOR = 400.0  # relaxed density-gain constant: certificates need eta^2/400


def density_increment_step(values, eta: float):
    """One dichotomy step for f on [1, L] with values in [0, 1].

    Embeds f - mean(f) into Z/NZ for the smallest prime N >= 3L.  Returns a
    PseudorandomCertificate when the centered U^2 norm is at most eta;
    otherwise partitions [1, L] along the largest spectral frequency and
    returns the longest progression whose recounted density gain reaches
    eta^2/400.
    """
    vals = np.asarray(values, dtype=np.float64)
    if vals.ndim != 1 or vals.size < 1:
        raise ContractViolationError("values must be a nonempty 1-d array")
    if vals.min() < -1e-12 or vals.max() > 1 + 1e-12:
        raise ContractViolationError("values must lie in [0,1]")
    if not 0 < eta < 1:
        raise ContractViolationError("eta must lie in (0,1)")
    L = int(vals.size)
    mu = float(vals.mean())
    N = next_prime(3 * L)
    centered = np.zeros(N, dtype=np.complex128)
    centered[1 : L + 1] = vals - mu
    g = CyclicFunction(N, centered)
    u2 = u2_norm(g, "spectral").value
    if u2 <= eta:
        return PseudorandomCertificate(u2_value=u2, threshold=eta, modulus=N)
    coef = dft(g).coefficients
    xi = int(np.argmax(np.abs(coef)))
    pieces = dirichlet_partition(L, xi, N, eta)
    threshold = eta * eta / GAIN_FACTOR
    best = None
    for piece in pieces:
        density = float(vals[piece.elements() - 1].mean())
        if density - mu >= threshold:
            if best is None or (piece.length, -piece.start) > (
                best[0].length,
                -best[0].start,
            ):
                best = (piece, density)
    if best is None:
        raise IncrementNotFoundError(
            f"no piece gained eta^2/{GAIN_FACTOR:.0f} = {threshold:.3g} "
            f"over baseline {mu:.6f} (constant-bookkeeping failure)"
        )
    piece, density = best
    recount = math.fsum(float(vals[e - 1]) for e in piece.elements()) / piece.length
    if abs(recount - density) > 1e-12 or recount - mu < threshold:
        raise PostconditionError("progression certificate failed its recount")
    return ProgressionCertificate(
        start=int(piece.start),
        difference=int(piece.difference),
        length=int(piece.length),
        measured_density=recount,
        baseline_density=mu,
    )


@dataclass(frozen=True)
class RothResult:
    ap3_count_lower_bound: float
    actual_count: int
    iterations: tuple
    final_modulus: int
    final_interval_length: int
    final_density: float
    density_trace: tuple
    iteration_cap: int

    def as_dict(self) -> dict:
        return {
            "ap3_count_lower_bound": self.ap3_count_lower_bound,
            "actual_count": self.actual_count,
            "iterations": [c.as_dict() for c in self.iterations],
            "final_modulus": self.final_modulus,
            "final_interval_length": self.final_interval_length,
            "final_density": self.final_density,
            "density_trace": list(self.density_trace),
            "iteration_cap": self.iteration_cap,
        }


def roth_iterate(members, interval_length: int, delta: float, eta: float = 0.05):
    """Density-increment iteration for a set A inside [1, L].

    Runs density_increment_step until a pseudorandom certificate appears, then
    counts 3-term progressions of the embedded indicator spectrally and checks
    the count against the (mean^3 - 3 eta) M^2 lower bound.  Scale exhaustion
    surfaces as ScaleExhaustedError carrying the iteration trace.
    """
    L = int(interval_length)
    idx = np.asarray(sorted(set(int(m) for m in members)), dtype=np.int64)
    if idx.size and (idx[0] < 1 or idx[-1] > L):
        raise ContractViolationError("members must lie in [1, L]")
    if idx.size < delta * L - 1e-9:
        raise ContractViolationError("|A| < delta * L")
    vals = np.zeros(L, dtype=np.float64)
    vals[idx - 1] = 1.0
    cap = math.ceil(GAIN_FACTOR * (1.0 - delta) / (eta * eta))
    certificates: list = []
    densities = [float(vals.mean())]
    for _ in range(cap + 1):
        try:
            cert = density_increment_step(vals, eta)
        except ScaleExhaustedError as exc:
            raise ScaleExhaustedError(
                f"{exc} after {len(certificates)} increments; "
                f"density trace {densities}"
            ) from exc
        if isinstance(cert, PseudorandomCertificate):
            certificates.append(cert)
            M = cert.modulus
            emb = np.zeros(M, dtype=np.complex128)
            emb[1 : vals.size + 1] = vals
            f = CyclicFunction(M, emb)
            form = ap_form([f, f, f], "spectral").value.real
            actual = int(round(form * M * M))
            mean_m = float(vals.sum()) / M
            lower = (mean_m ** 3 - 3.0 * eta) * M * M
            require(check_le("ap3_lower_bound", lower, float(actual), 1e-6))
            return RothResult(
                ap3_count_lower_bound=lower,
                actual_count=actual,
                iterations=tuple(certificates),
                final_modulus=M,
                final_interval_length=int(vals.size),
                final_density=densities[-1],
                density_trace=tuple(densities),
                iteration_cap=cap,
            )
        certificates.append(cert)
        vals = vals[cert.elements() - 1]
        densities.append(float(vals.mean()))
        if densities[-1] < densities[-2] + eta * eta / GAIN_FACTOR - 1e-12:
            raise PostconditionError("density failed to increase by eta^2/400")
    raise PostconditionError("iteration cap exceeded despite the density ceiling")


@dataclass(frozen=True)
class ChainReport:
    links: tuple
    almost_period_density: float
    member_count: int
    structured_mean: float
    final_form: float
    decomposition: StrongDecomposition

    @property
    def all_links_hold(self) -> bool:
        return all(c.passed for c in self.links)

    def as_dict(self) -> dict:
        return {
            "links": [c.as_dict() for c in self.links],
            "almost_period_density": self.almost_period_density,
            "member_count": self.member_count,
            "structured_mean": self.structured_mean,
            "final_form": self.final_form,
            "all_links_hold": self.all_links_hold,
        }


def structured_count_chain(
    f: CyclicFunction, eps: float, growth: GrowthFunction
) -> ChainReport:
    """Numerically check the chain from a strong decomposition to a 3-term count.

    Enumerates the almost-period set {n : ||T^n f_struct - f_struct||_L2 <= eps},
    verifies the per-member lower bound mean^3 - 3 eps, then follows the
    averaged chain through the small and pseudorandom parts via Cauchy-Schwarz
    and the generalized von Neumann inequality.  Failed links are recorded in
    the report, never raised.
    """
    dec = strong_decompose(f, eps, growth)
    w = dec.structured.values.real
    N = f.modulus
    mean_w = float(w.mean())
    diffs = np.empty(N, dtype=np.float64)
    triples = np.empty(N, dtype=np.float64)
    for n in range(N):
        shifted = np.roll(w, -n)
        diffs[n] = math.sqrt(float(np.mean((shifted - w) ** 2)))
        triples[n] = float(np.mean(w * shifted * np.roll(w, -2 * n)))
    members = np.flatnonzero(diffs <= eps)
    density = members.size / N
    per_member_min = float(triples[members].min())
    avg_structured = ap_form([dec.structured] * 3, "spectral").value.real
    fine = add(dec.structured, dec.small)
    avg_fine = ap_form([fine] * 3, "spectral").value.real
    total = ap_form([f] * 3, "spectral").value.real
    fs_l2 = l2_norm(dec.small)
    fu_u2 = u2_norm(dec.pseudorandom, "spectral").value
    links = (
        check_le(
            "per_member_lower",
            mean_w ** 3 - 3.0 * eps,
            per_member_min,
            1e-9,
        ),
        check_le(
            "averaged_lower",
            density * (mean_w ** 3 - 3.0 * eps),
            avg_structured,
            1e-9,
        ),
        check_le(
            "small_part_transfer",
            avg_structured - 3.0 * fs_l2,
            avg_fine,
            1e-9,
        ),
        check_le(
            "von_neumann_transfer",
            avg_fine - 3.0 * fu_u2,
            total,
            1e-9,
        ),
        check_le(
            "full_chain",
            density * (mean_w ** 3 - 3.0 * eps) - 3.0 * fs_l2 - 3.0 * fu_u2,
            total,
            3e-9,
        ),
    )
    return ChainReport(
        links=links,
        almost_period_density=density,
        member_count=int(members.size),
        structured_mean=mean_w,
        final_form=total,
        decomposition=dec,
    )
