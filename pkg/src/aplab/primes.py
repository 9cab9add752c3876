"""Von Mangoldt weights, the W-trick renormalization, progression averages
over the weighted primes, and Fourier-bias diagnostics.

Lambda(n) = log p when n = p^j, else 0.  The W-tricked weight is

    Lambda_{W,b}(n) = (phi(W) / W) * Lambda(W n + b),   gcd(b, W) = 1,

with W the product of all primes strictly below the cutoff w.  The phi(W)/W
factor is the mean-one normalization: the prime number theorem in arithmetic
progressions makes the asymptotic average of these weights equal to 1.
Finite-N averages here are regression baselines around that limiting value;
the window truncation convention is documented on prime_ap_average.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .cyclic import CyclicFunction, IntervalEmbedding, embed_interval, dft
from .errors import ContractViolationError, SieveCapacityError

DEFAULT_SIEVE_CAPACITY = 300_000_000


@dataclass(frozen=True, eq=False)
class SieveTable:
    """Smallest-prime-factor table for 2..limit."""

    limit: int
    smallest_prime_factor: np.ndarray


def build_sieve(limit: int) -> SieveTable:
    if limit < 2:
        raise ContractViolationError("sieve limit must be >= 2")
    if limit > DEFAULT_SIEVE_CAPACITY:
        raise SieveCapacityError(f"sieve limit {limit} exceeds capacity")
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = np.flatnonzero(spf[2:] == 0) + 2
    spf[rest] = rest
    return SieveTable(limit, spf)


def von_mangoldt(n: int, table: SieveTable) -> float:
    """log p if n is a power of the prime p, else 0."""
    if n < 2 or n > table.limit:
        raise ContractViolationError(f"n={n} outside sieve range [2, {table.limit}]")
    p = int(table.smallest_prime_factor[n])
    m = n
    while m % p == 0:
        m //= p
    return float(np.log(float(p))) if m == 1 else 0.0


def mangoldt_array(table: SieveTable, upto: int | None = None) -> np.ndarray:
    """Vectorized Lambda(n) for 0 <= n <= upto (indices 0,1 are zero)."""
    upto = table.limit if upto is None else upto
    if upto > table.limit:
        raise ContractViolationError("requested range exceeds the sieve table")
    lam = np.zeros(upto + 1, dtype=np.float64)
    idx = np.arange(upto + 1)
    primes = np.flatnonzero(table.smallest_prime_factor[: upto + 1] == idx)
    primes = primes[primes >= 2]
    lam[primes] = np.log(primes.astype(np.float64))
    for p in primes[primes <= math.isqrt(upto)]:
        v = int(p) * int(p)
        while v <= upto:
            lam[v] = np.log(float(p))
            v *= int(p)
    return lam


def primes_below(limit: int) -> np.ndarray:
    """All primes < limit via a plain boolean sieve."""
    if limit <= 2:
        return np.array([], dtype=np.int64)
    mask = np.ones(limit, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit - 1) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.int64)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime >= n (deterministic Miller-Rabin, valid far past 2^64)."""
    c = max(int(n), 2)
    while not is_prime(c):
        c += 1
    return c


def primorial_below(w: int) -> int:
    """W = product of all primes < w; empty product is 1."""
    return int(np.prod(primes_below(w), initial=1))


def euler_phi_of_primorial(w: int) -> int:
    return int(np.prod(primes_below(w) - 1, initial=1))


@dataclass(frozen=True, eq=False)
class MangoldtWeights:
    """values[n] = (phi(W)/W) * Lambda(W n + b) for 1 <= n <= N; values[0] = 0."""

    N: int
    w: int
    W: int
    b: int
    values: np.ndarray

    @property
    def mean(self) -> float:
        return float(np.mean(self.values[1:]))


def mangoldt_weights(
    N: int, w: int, b: int = 1, capacity: int = DEFAULT_SIEVE_CAPACITY
) -> MangoldtWeights:
    """Exact W-tricked von Mangoldt weights on 1..N.

    Primality along the progression {W n + b} is resolved by sieving the
    residue class directly (stride arithmetic on n), so memory stays O(N)
    even when W N is large; prime powers are patched in separately.
    """
    if N < 1:
        raise ContractViolationError("N must be >= 1")
    W = primorial_below(w)
    phi = euler_phi_of_primorial(w)
    b = int(b)
    if math.gcd(b, W) != 1:
        raise ContractViolationError(f"b={b} is not coprime to W={W}")
    if not (1 <= b < max(W, 2)):
        raise ContractViolationError(f"b={b} outside [1, W)")
    hi = W * N + b
    if hi > capacity:
        raise SieveCapacityError(f"W*N+b = {hi} exceeds sieve capacity {capacity}")
    base = primes_below(math.isqrt(hi) + 1)
    candidate_prime = np.ones(N + 1, dtype=bool)
    candidate_prime[0] = False
    for p in base.tolist():
        if W % p == 0:
            continue
        n0 = (-b * pow(W, -1, p)) % p
        if n0 == 0:
            n0 = p
        candidate_prime[n0::p] = False
    # a candidate equal to a base prime itself was wrongly struck
    for p in base.tolist():
        if p > b and (p - b) % W == 0:
            n = (p - b) // W
            if 1 <= n <= N:
                candidate_prime[n] = True
    scale = phi / W
    values = np.zeros(N + 1, dtype=np.float64)
    hits = np.flatnonzero(candidate_prime)
    values[hits] = scale * np.log(W * hits.astype(np.float64) + b)
    for p in base.tolist():
        v = p * p
        while v <= hi:
            if (v - b) % W == 0:
                n = (v - b) // W
                if 1 <= n <= N:
                    values[n] = scale * np.log(float(p))
            v *= p
    return MangoldtWeights(N=N, w=w, W=W, b=b, values=values)


@dataclass(frozen=True)
class ApAverageResult:
    k: int
    N: int
    w: int
    b: int
    value: float
    method: str
    pair_count: int
    elapsed: float

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "N": self.N,
            "w": self.w,
            "b": self.b,
            "average": self.value,
            "method": self.method,
            "pair_count": self.pair_count,
            "runtime": self.elapsed,
        }


def _ap_sum_naive(weights: np.ndarray, k: int) -> tuple[float, int]:
    """Sum of prod_j weight(n + j d) over d >= 1, n >= 1, n+(k-1)d <= len."""
    L = weights.shape[0] - 1  # weights[0] is padding
    total = 0.0
    pairs = 0
    for d in range(1, (L - 1) // (k - 1) + 1):
        top = L - (k - 1) * d
        prod = weights[1 : top + 1].copy()
        for j in range(1, k):
            prod *= weights[1 + j * d : top + j * d + 1]
        total += float(prod.sum())
        pairs += top
    return total, pairs


def _ap_sum_spectral_3(weights: np.ndarray) -> tuple[float, int]:
    """Same sum as the naive k=3 path, via the padded cyclic identity."""
    L = weights.shape[0] - 1
    emb = IntervalEmbedding.for_counting(L, 3)
    f = embed_interval(weights[1:], emb)
    M = emb.ambient_modulus
    coef = dft(f).coefficients
    idx = (-2 * np.arange(M)) % M
    cyclic_total = complex(np.sum(coef * coef[idx] * coef)) * M * M
    zero_step = float(np.sum(weights.astype(np.float64) ** 3))
    total = (cyclic_total.real - zero_step) / 2.0
    pairs = sum(L - 2 * d for d in range(1, (L - 1) // 2 + 1))
    return total, pairs


def prime_ap_average(
    k: int,
    N: int,
    w: int,
    b: int = 1,
    method: str = "auto",
    capacity: int = DEFAULT_SIEVE_CAPACITY,
) -> ApAverageResult:
    """Average of Lambda_{W,b} products over k-term progressions.

    The average runs over every integer progression with positive common
    difference contained in the truncation window [1, kN]; constant weight 1
    therefore gives exactly 1.  k=3 admits the spectral path (padded cyclic
    counting); k=4 is evaluated by the blocked naive loop.
    """
    if k not in (3, 4):
        raise ContractViolationError("k must be 3 or 4")
    t0 = time.perf_counter()
    weights = mangoldt_weights(k * N, w, b, capacity=capacity)
    if method == "auto":
        method = "spectral" if k == 3 else "naive"
    if method == "spectral":
        if k != 3:
            raise ContractViolationError("spectral path is only valid for k=3")
        total, pairs = _ap_sum_spectral_3(weights.values)
    elif method == "naive":
        total, pairs = _ap_sum_naive(weights.values, k)
    else:
        raise ContractViolationError(f"unknown method {method!r}")
    return ApAverageResult(
        k=k,
        N=N,
        w=w,
        b=b,
        value=total / pairs,
        method=method,
        pair_count=pairs,
        elapsed=time.perf_counter() - t0,
    )


@dataclass(frozen=True)
class BiasReport:
    N: int
    w: int
    b: int
    window_modulus: int
    max_nonzero_coeff: float
    argmax: int
    profile: tuple

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "w": self.w,
            "b": self.b,
            "window_modulus": self.window_modulus,
            "max_nonzero_coeff": self.max_nonzero_coeff,
            "argmax": self.argmax,
            "profile": [[int(f), float(m)] for f, m in self.profile],
        }


def fourier_bias(weights: MangoldtWeights) -> BiasReport:
    """Largest nonzero-frequency coefficient of Lambda_{W,b} - 1 on a padded window."""
    N = weights.N
    emb = IntervalEmbedding(N, 2 * N, 2)
    f = embed_interval(weights.values[1:] - 1.0, emb)
    mags = np.abs(dft(f).coefficients)
    mags[0] = 0.0
    order = np.argsort(-mags, kind="stable")[:20]
    profile = tuple((int(xi), float(mags[xi])) for xi in order)
    top = int(order[0])
    return BiasReport(
        N=N,
        w=weights.w,
        b=weights.b,
        window_modulus=emb.ambient_modulus,
        max_nonzero_coeff=float(mags[top]),
        argmax=top,
        profile=profile,
    )


def bias_sweep(N: int, w_values, b: int = 1) -> list[BiasReport]:
    """Bias reports across small-prime cutoffs; the trend is reported, not asserted."""
    return [fourier_bias(mangoldt_weights(N, w, b)) for w in w_values]
