"""Fixture generators: structured, pseudorandom, and hybrid sets and functions
with known uniformity-norm behaviour.

Set kinds (generate_set):
    random              {n <= L} kept with independent probability delta
    linear_quasi        {n : frac(alpha n) <= delta}
    quadratic_quasi     {n : frac(alpha n^2) <= delta}
    bracket_quadratic   {n : frac(floor(alpha n) * beta * n) <= delta}
    random_subset_of    inner set thinned with independent probability delta_prime

Function kinds (generate_function):
    quadratic_phase     x -> exp(2 pi i xi x^2 / N)
    polynomial_phase    x -> exp(2 pi i P(x) / N), integer coefficients c0..c9
    skew_shift          n -> exp(2 pi i y_n), (x,y) -> (x+alpha, y+x) on the torus

Irrational parameters are held in double precision; fractional parts are
reliable for lengths up to about 1e7.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cyclic import CyclicFunction
from .errors import ContractViolationError

SET_KINDS = {
    "random",
    "linear_quasi",
    "quadratic_quasi",
    "bracket_quadratic",
    "random_subset_of",
}
FUNCTION_KINDS = {"quadratic_phase", "polynomial_phase", "skew_shift"}


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    params: dict = field(default_factory=dict)
    seed: int | None = None
    inner: "GeneratorSpec | None" = None

    def __post_init__(self):
        if self.kind not in SET_KINDS | FUNCTION_KINDS:
            raise ContractViolationError(f"unknown generator kind {self.kind!r}")

    def describe(self) -> str:
        parts = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        s = f"{self.kind}:{parts}" if parts else self.kind
        if self.seed is not None:
            s += f"@seed={self.seed}"
        if self.inner is not None:
            s += "/" + self.inner.describe()
        return s


def parse_spec(text: str, seed: int | None = None) -> GeneratorSpec:
    """Parse the CLI syntax `kind:key=value,...`; `/` nests an inner spec."""
    head, _, rest = text.partition("/")
    kind, _, params_text = head.partition(":")
    kind = kind.strip()
    params: dict = {}
    if params_text:
        for item in params_text.split(","):
            key, _, raw = item.partition("=")
            if not _:
                raise ContractViolationError(f"bad generator parameter {item!r}")
            key = key.strip()
            raw = raw.strip()
            params[key] = int(raw) if key == "seed" else float(raw)
    spec_seed = int(params.pop("seed")) if "seed" in params else seed
    inner = parse_spec(rest, seed=seed) if rest else None
    return GeneratorSpec(kind=kind, params=params, seed=spec_seed, inner=inner)


_REQUIRED = object()


def _get(params: dict, key: str, default=_REQUIRED):
    if key in params:
        return params[key]
    if default is _REQUIRED:
        raise ContractViolationError(f"missing generator parameter {key!r}")
    return default


def _check_unit(value: float, name: str) -> float:
    value = float(value)
    if not 0.0 < value <= 1.0:
        raise ContractViolationError(f"{name} must lie in (0, 1]")
    return value


def _require_seed(spec: GeneratorSpec) -> int:
    if spec.seed is None:
        raise ContractViolationError(f"kind {spec.kind!r} requires a seed")
    return int(spec.seed)


def generate_set(spec: GeneratorSpec, length: int) -> np.ndarray:
    """Members of the set inside [1, length], as a sorted integer array."""
    if length < 1:
        raise ContractViolationError("length must be >= 1")
    if spec.kind not in SET_KINDS:
        raise ContractViolationError(f"{spec.kind!r} does not generate sets")
    n = np.arange(1, length + 1, dtype=np.int64)
    if spec.kind == "random":
        delta = _check_unit(_get(spec.params, "delta"), "delta")
        rng = np.random.default_rng(_require_seed(spec))
        keep = rng.random(length) < delta
        return n[keep]
    if spec.kind == "linear_quasi":
        alpha = float(_get(spec.params, "alpha"))
        delta = _check_unit(_get(spec.params, "delta"), "delta")
        return n[np.mod(alpha * n, 1.0) <= delta]
    if spec.kind == "quadratic_quasi":
        alpha = float(_get(spec.params, "alpha"))
        delta = _check_unit(_get(spec.params, "delta"), "delta")
        return n[np.mod(alpha * n.astype(np.float64) ** 2, 1.0) <= delta]
    if spec.kind == "bracket_quadratic":
        alpha = float(_get(spec.params, "alpha", np.sqrt(2.0)))
        beta = float(_get(spec.params, "beta", np.sqrt(3.0)))
        delta = _check_unit(_get(spec.params, "delta"), "delta")
        vals = np.floor(alpha * n) * beta * n.astype(np.float64)
        return n[np.mod(vals, 1.0) <= delta]
    # random_subset_of: thin the inner set
    if spec.inner is None:
        raise ContractViolationError("random_subset_of requires an inner spec")
    delta_prime = _check_unit(_get(spec.params, "delta_prime"), "delta_prime")
    base = generate_set(spec.inner, length)
    rng = np.random.default_rng(_require_seed(spec))
    return base[rng.random(base.size) < delta_prime]


def generate_function(spec: GeneratorSpec, modulus: int) -> CyclicFunction:
    """Unimodular fixture function on Z/NZ."""
    if modulus < 1:
        raise ContractViolationError("modulus must be >= 1")
    if spec.kind not in FUNCTION_KINDS:
        raise ContractViolationError(f"{spec.kind!r} does not generate functions")
    x = np.arange(modulus, dtype=np.int64)
    if spec.kind == "quadratic_phase":
        xi = int(_get(spec.params, "xi"))
        phase = (x * x % modulus) * (xi % modulus) % modulus
        return CyclicFunction(modulus, np.exp(2j * np.pi * phase / modulus))
    if spec.kind == "polynomial_phase":
        coeffs = [
            int(spec.params[f"c{d}"]) for d in range(10) if f"c{d}" in spec.params
        ]
        degrees = [d for d in range(10) if f"c{d}" in spec.params]
        if not degrees:
            raise ContractViolationError("polynomial_phase needs coefficients c0..c9")
        phase = np.zeros(modulus, dtype=np.int64)
        for d, c in zip(degrees, coeffs):
            term = np.ones(modulus, dtype=np.int64)
            for _ in range(d):
                term = term * x % modulus
            phase = (phase + (c % modulus) * term) % modulus
        return CyclicFunction(modulus, np.exp(2j * np.pi * phase / modulus))
    # skew_shift orbit sample
    alpha = float(_get(spec.params, "alpha"))
    x0 = float(_get(spec.params, "x0", 0.0)) % 1.0
    y0 = float(_get(spec.params, "y0", 0.0)) % 1.0
    xs = np.mod(x0 + alpha * np.arange(modulus, dtype=np.float64), 1.0)
    ys = np.empty(modulus, dtype=np.float64)
    ys[0] = y0
    if modulus > 1:
        ys[1:] = y0 + np.cumsum(xs[:-1])
    ys = np.mod(ys, 1.0)
    return CyclicFunction(modulus, np.exp(2j * np.pi * ys))
