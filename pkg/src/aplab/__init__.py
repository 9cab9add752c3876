"""aplab: uniformity norms, structure-vs-randomness decompositions, and
arithmetic-progression counting at desk scale, with runtime-verified bounds."""

__version__ = "0.1.0"

from .cyclic import (
    CyclicFunction,
    IntervalEmbedding,
    Spectrum,
    conjugate,
    dft,
    embed_interval,
    idft,
    indicator,
    l2_norm,
    mean,
    pointwise_mul,
    scale,
    shift,
    sub,
)
from .errors import (
    ContractViolationError,
    DichotomyFailedError,
    IncrementNotFoundError,
    PostconditionError,
    ScaleExhaustedError,
    SieveCapacityError,
)
from .fourier_structure import (
    FejerKernel,
    GrowthFunction,
    LargeSpectrum,
    ProgressionCertificate,
    PseudorandomCertificate,
    StrongDecomposition,
    WeakDecomposition,
    density_increment_step,
    dirichlet_partition,
    fejer_kernel,
    large_spectrum,
    roth_iterate,
    strong_decompose,
    structured_count_chain,
    weak_decompose,
)
from .generators import GeneratorSpec, generate_function, generate_set, parse_spec
from .gowers import (
    CountingFormResult,
    NormReport,
    ap_form,
    derivative,
    u2_norm,
    u3_norm,
    verify_gvn,
)
from .graph_regularity import (
    EdgeFunction,
    GraphDecomposition,
    TriFunction,
    VertexPartition,
    box2_norm,
    box3_norm,
    box_dichotomy,
    cayley_3hypergraph,
    cayley_tripartite,
    conditional_expectation,
    strong_regularize,
    triangle_form,
    triangle_removal,
    weak_regularize,
)
from .primes import (
    MangoldtWeights,
    SieveTable,
    build_sieve,
    fourier_bias,
    mangoldt_weights,
    next_prime,
    prime_ap_average,
    von_mangoldt,
)
