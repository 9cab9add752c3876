"""Weighted-graph machinery: box norms, the randomized structure dichotomy,
weak and strong regularity by energy increment, triangle counting and removal,
and the Cayley constructions tying progression counts to (hyper)graph counts.

Partitions of the vertex set play the role of finite sigma-algebras; the
conditional expectation E(f | P x P) replaces each entry by its cell-pair
mean, and the energy ||E(f | P x P)||_{L2}^2 drives the increment arguments.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ContractViolationError,
    DichotomyFailedError,
    PostconditionError,
)
from .fourier_structure import GrowthFunction
from .reporting import BoundCheck, check_le, require

logger = logging.getLogger(__name__)

MAX_VERTICES = 4096


@dataclass(frozen=True, eq=False)
class EdgeFunction:
    """Weighted graph: a |V| x |V| real matrix with entries in [-1, 1].

    Indicator graphs may be stored as boolean matrices; weighted graphs use
    float64.
    """

    vertex_count: int
    values: np.ndarray

    def __post_init__(self):
        if not 1 <= self.vertex_count <= MAX_VERTICES:
            raise ContractViolationError(
                f"vertex_count must lie in [1, {MAX_VERTICES}]"
            )
        vals = np.asarray(self.values)
        if vals.dtype != np.bool_:
            vals = vals.astype(np.float64)
            if not np.all(np.isfinite(vals)):
                raise ContractViolationError("entries must be finite")
            if np.max(np.abs(vals)) > 1 + 1e-12:
                raise ContractViolationError("entries must have magnitude <= 1")
        if vals.shape != (self.vertex_count, self.vertex_count):
            raise ContractViolationError("values must be a square |V| x |V| array")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def is_indicator(self) -> bool:
        return self.values.dtype == np.bool_

    def as_float(self) -> np.ndarray:
        return self.values.astype(np.float64) if self.is_indicator else self.values


@dataclass(frozen=True, eq=False)
class TriFunction:
    """3-uniform weights on V^3 with entries in [0, 1]; symmetric when it
    represents an (unordered) hypergraph."""

    vertex_count: int
    values: np.ndarray
    hypergraph: bool = False

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.dtype != np.bool_:
            vals = vals.astype(np.float64)
            if vals.min() < 0 or vals.max() > 1:
                raise ContractViolationError("entries must lie in [0, 1]")
        V = self.vertex_count
        if vals.shape != (V, V, V):
            raise ContractViolationError("values must have shape |V|^3")
        if self.hypergraph:
            for perm in ((0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
                if not np.array_equal(vals, np.transpose(vals, perm)):
                    raise ContractViolationError(
                        "hypergraph weights must be symmetric under permutations"
                    )
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def as_float(self) -> np.ndarray:
        return (
            self.values.astype(np.float64)
            if self.values.dtype == np.bool_
            else self.values
        )


@dataclass(frozen=True, eq=False)
class VertexPartition:
    """Partition of the vertex set into nonempty cells labeled 0..cells-1."""

    vertex_count: int
    cell_assignment: np.ndarray

    def __post_init__(self):
        lab = np.asarray(self.cell_assignment, dtype=np.int64)
        if lab.shape != (self.vertex_count,):
            raise ContractViolationError("one cell id per vertex required")
        counts = np.bincount(lab)
        if lab.min() < 0 or np.any(counts == 0):
            raise ContractViolationError("cells must be 0..c-1 and nonempty")
        lab = lab.copy()
        lab.flags.writeable = False
        object.__setattr__(self, "cell_assignment", lab)

    @property
    def cell_count(self) -> int:
        return int(self.cell_assignment.max()) + 1

    @classmethod
    def trivial(cls, vertex_count: int) -> "VertexPartition":
        return cls(vertex_count, np.zeros(vertex_count, dtype=np.int64))

    def cell_sizes(self) -> np.ndarray:
        return np.bincount(self.cell_assignment)

    def refine_by_sets(self, a_mask: np.ndarray, b_mask: np.ndarray) -> "VertexPartition":
        """Common refinement with {A, A^c} and {B, B^c}."""
        key = (
            self.cell_assignment * 4
            + a_mask.astype(np.int64) * 2
            + b_mask.astype(np.int64)
        )
        _, labels = np.unique(key, return_inverse=True)
        return VertexPartition(self.vertex_count, labels)


def box2_norm(f: EdgeFunction) -> float:
    """|| f ||_{box2} = (E_{x,y,x',y'} f(x,y) f(x,y') f(x',y) f(x',y'))^(1/4),
    contracted as the mean square of the row-correlation matrix, O(|V|^3)."""
    vals = f.as_float()
    V = f.vertex_count
    corr = vals @ vals.T / V
    fourth = float(np.mean(corr ** 2))
    return max(fourth, 0.0) ** 0.25


def triangle_form(f: EdgeFunction, g: EdgeFunction, h: EdgeFunction) -> float:
    """E_{x,y,z} f(x,y) g(y,z) h(z,x) by matrix contraction."""
    if not f.vertex_count == g.vertex_count == h.vertex_count:
        raise ContractViolationError("operands must share a vertex set")
    V = f.vertex_count
    return float(np.trace(f.as_float() @ g.as_float() @ h.as_float())) / V ** 3


def triangle_count(f: EdgeFunction) -> int:
    """Exact triangle count of a 0/1 symmetric graph (trace(M^3)/6)."""
    m = (f.as_float() > 0.5).astype(np.int64)
    if not np.array_equal(m, m.T):
        raise ContractViolationError("triangle_count expects a symmetric 0/1 graph")
    return int(np.trace(m @ m @ m)) // 6


@dataclass(frozen=True, eq=False)
class DichotomyResult:
    set_a: np.ndarray
    set_b: np.ndarray
    correlation: float
    attempts: int


def box_dichotomy(f: EdgeFunction, eta: float, seed: int) -> DichotomyResult:
    """Extract vertex sets A, B with |E f(x,y) 1_A(x) 1_B(y)| >= eta^4 / 4.

    Scans for a pair (x', y') whose fourfold average reaches eta^4 (pigeonhole
    over the box-norm identity), splits the induced weights by sign, and
    rounds the resulting [0,1] weights to sets with the seeded generator,
    retrying until the realized correlation clears eta^4 / 4.
    """
    vals = f.as_float()
    if np.max(np.abs(vals)) > 1 + 1e-12:
        raise ContractViolationError("f must be bounded by 1")
    norm = box2_norm(f)
    if norm < eta:
        raise ContractViolationError(
            f"box2 norm {norm:.6g} below the requested eta {eta:.6g}"
        )
    V = f.vertex_count
    quad = vals * ((vals @ vals.T) @ vals) / V ** 2
    flat = int(np.argmax(quad))
    x_star, y_star = divmod(flat, V)
    if quad[x_star, y_star] < eta ** 4 - 1e-12:
        raise PostconditionError("pigeonhole pair fell below eta^4")
    u = vals[:, y_star]
    v = vals[x_star, :]
    best_corr = 0.0
    best_pair = None
    for a_part in (np.maximum(u, 0.0), np.maximum(-u, 0.0)):
        for b_part in (np.maximum(v, 0.0), np.maximum(-v, 0.0)):
            corr = abs(float(a_part @ vals @ b_part) / V ** 2)
            if corr > best_corr:
                best_corr = corr
                best_pair = (a_part, b_part)
    if best_pair is None or best_corr < eta ** 4 / 4 - 1e-12:
        raise PostconditionError("sign splitting lost the eta^4/4 correlation")
    a_w, b_w = best_pair
    rng = np.random.default_rng(seed)
    target = eta ** 4 / 4
    for attempt in range(1, 65):
        a_mask = rng.random(V) < a_w
        b_mask = rng.random(V) < b_w
        corr = float(a_mask.astype(np.float64) @ vals @ b_mask.astype(np.float64))
        corr /= V ** 2
        if abs(corr) >= target:
            return DichotomyResult(a_mask, b_mask, corr, attempt)
    raise DichotomyFailedError(
        f"rounding missed the eta^4/4 = {target:.3g} correlation in 64 attempts"
    )


def conditional_expectation(
    f: EdgeFunction, partition: VertexPartition
) -> tuple[EdgeFunction, np.ndarray, np.ndarray]:
    """E(f | P x P): cell-pair means expanded back to the matrix.

    Returns (projection, block_means, cell_sizes)."""
    vals = f.as_float()
    lab = partition.cell_assignment
    c = partition.cell_count
    ind = np.zeros((c, f.vertex_count))
    ind[lab, np.arange(f.vertex_count)] = 1.0
    sums = ind @ vals @ ind.T
    sizes = partition.cell_sizes()
    means = sums / np.outer(sizes, sizes)
    return EdgeFunction(f.vertex_count, means[lab][:, lab]), means, sizes


def partition_energy(f: EdgeFunction, partition: VertexPartition) -> float:
    """||E(f | P x P)||_{L2}^2."""
    _, means, sizes = conditional_expectation(f, partition)
    weights = np.outer(sizes, sizes) / f.vertex_count ** 2
    return float(np.sum(weights * means ** 2))


@dataclass(frozen=True, eq=False)
class WeakRegularityResult:
    partition: VertexPartition
    structured: EdgeFunction
    pseudorandom: EdgeFunction
    iterations: int
    energies: tuple
    verified_bounds: tuple


def weak_regularize(f: EdgeFunction, eps: float, seed: int) -> WeakRegularityResult:
    """Energy-increment loop: refine until ||f - E(f|P x P)||_{box2} <= eps.

    Each refinement lifts the energy by at least eps^8/16 (checked), so the
    loop runs at most ceil(16/eps^8) times and uses at most 32/eps^8 sets.
    """
    if not 0 < eps < 1:
        raise ContractViolationError("eps must lie in (0,1)")
    vals = f.as_float()
    if vals.min() < 0 or vals.max() > 1:
        raise ContractViolationError("weak_regularize expects values in [0,1]")
    partition = VertexPartition.trivial(f.vertex_count)
    structured, _, _ = conditional_expectation(f, partition)
    energies = [partition_energy(f, partition)]
    checks = []
    max_iter = math.ceil(16.0 / eps ** 8) + 1
    iteration = 0
    while True:
        residual = EdgeFunction(f.vertex_count, vals - structured.as_float())
        if box2_norm(residual) <= eps:
            break
        iteration += 1
        if iteration > max_iter:
            raise PostconditionError("energy increment exceeded its iteration bound")
        found = box_dichotomy(residual, eps, seed + iteration)
        partition = partition.refine_by_sets(found.set_a, found.set_b)
        structured, _, _ = conditional_expectation(f, partition)
        energies.append(partition_energy(f, partition))
        gain_check = check_le(
            f"energy_gain_{iteration}",
            eps ** 8 / 16.0,
            energies[-1] - energies[-2],
            1e-10,
        )
        checks.append(gain_check)
        require(gain_check)
    residual = EdgeFunction(f.vertex_count, vals - structured.as_float())
    final = (
        check_le("fU_box2", box2_norm(residual), eps),
        check_le("set_count", 2 * iteration, 32.0 / eps ** 8, 1e-9),
    )
    require(*final)
    return WeakRegularityResult(
        partition=partition,
        structured=structured,
        pseudorandom=residual,
        iterations=iteration,
        energies=tuple(energies),
        verified_bounds=tuple(checks) + final,
    )


@dataclass(frozen=True, eq=False)
class GraphDecomposition:
    structured: EdgeFunction
    small: EdgeFunction
    pseudorandom: EdgeFunction
    partition: VertexPartition
    fine_partition: VertexPartition
    complexity: int
    epsilon: float
    growth_record: str
    energies: tuple
    verified_bounds: tuple

    def bounds_dict(self) -> dict:
        return {c.name: c.as_dict() for c in self.verified_bounds}


class _RefinementSequence:
    """Greedy dichotomy refinements with a frozen (constant) virtual tail.

    Materializes partitions P_0 subset P_1 subset ... while the residual box
    norm stays positive; once the residual vanishes (or a refinement adds no
    cells, which only happens at fp-dust correlations) the sequence is frozen
    and all later indices reuse the final state.
    """

    def __init__(self, f: EdgeFunction, seed: int):
        self.f = f
        self.vals = f.as_float()
        self.seed = seed
        self.partitions = [VertexPartition.trivial(f.vertex_count)]
        proj, _, _ = conditional_expectation(f, self.partitions[0])
        self.projections = [proj]
        self.energies = [partition_energy(f, self.partitions[0])]
        self.residual_norms = [
            box2_norm(EdgeFunction(f.vertex_count, self.vals - proj.as_float()))
        ]
        self.frozen = False

    @property
    def last(self) -> int:
        return len(self.partitions) - 1

    def _step(self):
        j = self.last
        rho = self.residual_norms[j]
        if rho <= 1e-12:
            self.frozen = True
            return
        residual = EdgeFunction(
            self.f.vertex_count, self.vals - self.projections[j].as_float()
        )
        found = box_dichotomy(residual, rho, self.seed + 7919 * (j + 1))
        refined = self.partitions[j].refine_by_sets(found.set_a, found.set_b)
        if refined.cell_count == self.partitions[j].cell_count:
            logger.warning("refinement added no cells at step %d; freezing", j)
            self.frozen = True
            return
        proj, _, _ = conditional_expectation(self.f, refined)
        energy = partition_energy(self.f, refined)
        require(
            check_le(
                f"energy_monotone_{j + 1}",
                self.energies[j],
                energy,
                1e-9,
            )
        )
        self.partitions.append(refined)
        self.projections.append(proj)
        self.energies.append(energy)
        self.residual_norms.append(
            box2_norm(EdgeFunction(self.f.vertex_count, self.vals - proj.as_float()))
        )

    def ensure(self, index: float) -> int:
        """Materialize up to index (or the frozen tail); return the real index."""
        while not self.frozen and self.last < index:
            before = self.last
            self._step()
            if self.last == before:
                break
        return min(int(index) if math.isfinite(index) else self.last, self.last)

    def energy_at(self, index: float) -> float:
        return self.energies[self.ensure(index)]


def strong_regularize(
    f: EdgeFunction, eps: float, growth: GrowthFunction, seed: int
) -> GraphDecomposition:
    """Strong regularity decomposition f = structured + small + pseudorandom.

    Builds the greedy refinement sequence and applies the double pigeonhole:
    the first n whose energy window [n, n + F(2n)^4] rises by at most eps^2,
    and inside it the first n' whose residual box norm is at most 4/F(2n).
    All returned bounds are verified on the realized sequence, so the greedy
    search (in place of exact energy maximization) never weakens a contract.
    """
    if not 0 < eps < 1:
        raise ContractViolationError("eps must lie in (0,1)")
    vals = f.as_float()
    if vals.min() < 0 or vals.max() > 1:
        raise ContractViolationError("strong_regularize expects values in [0,1]")
    seq = _RefinementSequence(f, seed)
    n = -1
    while True:
        n += 1
        seq.ensure(n)
        if n > seq.last:
            # frozen before reaching n; the scan must have succeeded at n = last
            raise PostconditionError("pigeonhole scan ran past the frozen sequence")
        f2n = growth(2.0 * n)
        window = f2n ** 4 if math.isfinite(f2n) else math.inf
        hi = n + window + 1 if math.isfinite(window) else math.inf
        seq.ensure(hi)
        e_n = seq.energy_at(n)
        e_hi = seq.energy_at(hi)
        if e_hi > e_n + eps * eps + 1e-12:
            continue
        cap = 4.0 / f2n if math.isfinite(f2n) else 0.0
        top = min(seq.last, n + window)
        n_prime = None
        for j in range(n, int(top) + 1):
            if seq.residual_norms[j] <= cap + 1e-10:
                n_prime = j
                break
        if n_prime is None:
            continue
        coarse_idx = n
        coarse = seq.projections[coarse_idx]
        fine = seq.projections[n_prime]
        f_s = EdgeFunction(f.vertex_count, fine.as_float() - coarse.as_float())
        f_u = EdgeFunction(f.vertex_count, vals - fine.as_float())
        T = 2 * n
        fs_l2 = float(np.sqrt(np.mean(f_s.as_float() ** 2)))
        checks = (
            check_le(
                "reassembly",
                float(
                    np.sqrt(
                        np.mean(
                            (
                                vals
                                - coarse.as_float()
                                - f_s.as_float()
                                - f_u.as_float()
                            )
                            ** 2
                        )
                    )
                ),
                1e-9,
            ),
            check_le("structured_min", -float(coarse.as_float().min()), 0.0, 1e-12),
            check_le("structured_max", float(coarse.as_float().max()), 1.0, 1e-12),
            check_le("fine_min", -float(fine.as_float().min()), 0.0, 1e-12),
            check_le("fine_max", float(fine.as_float().max()), 1.0, 1e-12),
            check_le("box2_of_fU", seq.residual_norms[n_prime], cap, 1e-10),
            check_le("l2_of_fS", fs_l2, 4.0 * eps, 1e-12),
            check_le(
                "window_rise",
                seq.energies[n_prime] - seq.energies[coarse_idx],
                eps * eps,
                1e-10,
            ),
        )
        require(*checks)
        return GraphDecomposition(
            structured=coarse,
            small=f_s,
            pseudorandom=f_u,
            partition=seq.partitions[coarse_idx],
            fine_partition=seq.partitions[n_prime],
            complexity=T,
            epsilon=eps,
            growth_record=growth.description,
            energies=tuple(seq.energies),
            verified_bounds=checks,
        )


def ap_pair_count(members, modulus: int, k: int) -> int:
    """#{(a, d) in (Z/NZ)^2 : a, a+d, ..., a+(k-1)d all in A}, exact."""
    mask = np.zeros(modulus, dtype=bool)
    for m in members:
        mask[int(m) % modulus] = True
    total = 0
    for d in range(modulus):
        hit = mask.copy()
        for j in range(1, k):
            hit &= np.roll(mask, -j * d)
        total += int(hit.sum())
    return total


@dataclass(frozen=True, eq=False)
class CayleyTriangleGraph:
    graph: EdgeFunction
    modulus: int
    triangle_count: int
    ap_pair_count: int


def cayley_tripartite(members, modulus: int) -> CayleyTriangleGraph:
    """Tripartite graph on 3N vertices whose triangles encode 3-term progressions.

    Parts X, Y, Z are copies of Z/NZ with edges (y,z): y+2z in A,
    (x,z): -x+z in A, (x,y): -2x-y in A; every progression pair (a,d) with
    a, a+d, a+2d in A lifts to exactly N triangles.  The correspondence is
    verified against brute force for N <= 60.
    """
    N = int(modulus)
    if 3 * N > MAX_VERTICES:
        raise ContractViolationError("3N exceeds the vertex cap")
    in_a = np.zeros(N, dtype=bool)
    for m in members:
        in_a[int(m) % N] = True
    adj = np.zeros((3 * N, 3 * N), dtype=bool)
    i = np.arange(N)
    # (y, z) with y + 2z in A
    block_yz = in_a[(i[:, None] + 2 * i[None, :]) % N]
    adj[N : 2 * N, 2 * N :] = block_yz
    adj[2 * N :, N : 2 * N] = block_yz.T
    # (x, z) with -x + z in A
    block_xz = in_a[(-i[:, None] + i[None, :]) % N]
    adj[:N, 2 * N :] = block_xz
    adj[2 * N :, :N] = block_xz.T
    # (x, y) with -2x - y in A
    block_xy = in_a[(-2 * i[:, None] - i[None, :]) % N]
    adj[:N, N : 2 * N] = block_xy
    adj[N : 2 * N, :N] = block_xy.T
    graph = EdgeFunction(3 * N, adj)
    triangles = triangle_count(graph)
    pairs = ap_pair_count(members, N, 3)
    if N <= 60:
        require(check_le("cayley_triangle_identity", abs(triangles - N * pairs), 0.0))
    return CayleyTriangleGraph(graph, N, triangles, pairs)


@dataclass(frozen=True, eq=False)
class RemovalReport:
    edges_removed: int
    removal_constant: float
    triangles_before: int
    triangles_after: int
    complexity: int
    epsilon: float
    delta: float
    certified_input_form: float
    certificate_threshold: float
    certificate_applicable: bool
    certificate_holds: bool

    def as_dict(self) -> dict:
        return {
            "edges_removed": self.edges_removed,
            "C": self.removal_constant,
            "triangles_before": self.triangles_before,
            "triangles_after": self.triangles_after,
            "T": self.complexity,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "certified_input_form": self.certified_input_form,
            "certificate_threshold": self.certificate_threshold,
            "certificate_applicable": self.certificate_applicable,
            "certificate_holds": self.certificate_holds,
        }


def triangle_removal(
    graph: EdgeFunction, delta: float, seed: int
) -> tuple[EdgeFunction, int, RemovalReport]:
    """Rule-based edge removal driven by a strong regularity decomposition.

    Parameters follow the removal argument: eps = delta^2/100 and
    F(n) = ceil(100 * 2^(3n) / delta^6).  Edges are deleted when they touch a
    small cell (size below delta |V| / 2^T), cross a cell pair on which the
    small part has mean square at least eps^2/delta, or cross a pair whose
    structured value is below delta.  If triangles survive, the report records
    the claim that the input triangle form is at least delta^6 / (2 * 2^(3T)).
    """
    if not 0 < delta < 1:
        raise ContractViolationError("delta must lie in (0,1)")
    vals = graph.as_float()
    if not np.array_equal(vals, vals.T) or not np.all(
        (vals == 0.0) | (vals == 1.0)
    ):
        raise ContractViolationError("triangle_removal expects a symmetric 0/1 graph")
    V = graph.vertex_count
    eps = delta * delta / 100.0
    growth = GrowthFunction(
        lambda n: math.ceil(100.0 * 2.0 ** (3.0 * n) / delta ** 6),
        f"removal:delta={delta}",
    )
    dec = strong_regularize(graph, eps, growth, seed)
    lab = dec.partition.cell_assignment
    sizes = dec.partition.cell_sizes()
    c = dec.partition.cell_count
    T = dec.complexity
    two_t = 2.0 ** T if T < 1024 else math.inf
    small_cell = sizes < (delta * V / two_t if math.isfinite(two_t) else 0.0)

    ind = np.zeros((c, V))
    ind[lab, np.arange(V)] = 1.0
    pair_sizes = np.outer(sizes, sizes)
    fs2_means = ind @ (dec.small.as_float() ** 2) @ ind.T / pair_sizes
    _, structured_means, _ = conditional_expectation(graph, dec.partition)

    bad_pair = (fs2_means >= eps * eps / delta) | (structured_means < delta)
    remove = bad_pair[lab][:, lab]
    remove |= small_cell[lab][:, None] | small_cell[lab][None, :]

    kept = vals.astype(bool) & ~remove
    kept &= kept.T  # removal rules are symmetric already; keep the matrix exact
    after = EdgeFunction(V, kept)
    removed_edges = int((vals.astype(bool) & ~kept).sum()) // 2
    before = triangle_count(graph)
    surviving = triangle_count(after)
    form = triangle_form(graph, graph, graph)
    threshold = (
        delta ** 6 / (2.0 * two_t) if math.isfinite(two_t) else 0.0
    )
    applicable = surviving > 0
    holds = (not applicable) or form >= threshold
    report = RemovalReport(
        edges_removed=removed_edges,
        removal_constant=9.0 * removed_edges / (delta * V * V),
        triangles_before=before,
        triangles_after=surviving,
        complexity=T,
        epsilon=eps,
        delta=delta,
        certified_input_form=form,
        certificate_threshold=threshold,
        certificate_applicable=applicable,
        certificate_holds=holds,
    )
    require(
        check_le("removal_only_deletes", float(np.sum(kept & ~vals.astype(bool))), 0.0)
    )
    return after, removed_edges, report


def box3_norm(f: TriFunction) -> float:
    """Octahedron-average norm: eighth root of the mean over
    (x,x',y,y',z,z') of the eight-fold product.

    Contracted slice-pair by slice-pair: for each (x, x') the inner sum is a
    box2-style fourth moment of the sliced product, giving O(|V|^5) total work
    (the five-index intermediate admits nothing cheaper without fast matrix
    multiplication).
    """
    vals = f.as_float()
    V = f.vertex_count
    total = 0.0
    for x in range(V):
        for xp in range(x, V):
            a = vals[x] * vals[xp]
            gram = a @ a.T
            contrib = float(np.sum(gram ** 2))
            total += contrib if x == xp else 2.0 * contrib
    return (total / V ** 6) ** 0.125


@dataclass(frozen=True, eq=False)
class CayleyTetrahedronHypergraph:
    hypergraph: TriFunction
    modulus: int
    tetrahedron_count: int
    ap_pair_count: int


def cayley_3hypergraph(members, modulus: int) -> CayleyTetrahedronHypergraph:
    """4-partite 3-uniform hypergraph on 4N vertices whose tetrahedra encode
    4-term progressions; each progression pair (a, d) lifts to N^2 tetrahedra
    (fiber size verified against brute force for N <= 20).

    Edge families on parts X, Y, Z, W (copies of Z/NZ):
        (y,z,w): y+2z+3w in A      (x,z,w): -x+z+2w in A
        (x,y,w): -2x-y+w in A      (x,y,z): -3x-2y-z in A
    """
    N = int(modulus)
    V = 4 * N
    if V > 320:
        raise ContractViolationError("4N hypergraph limited to N <= 80")
    in_a = np.zeros(N, dtype=bool)
    for m in members:
        in_a[int(m) % N] = True
    i = np.arange(N)
    e_yzw = in_a[(i[:, None, None] + 2 * i[None, :, None] + 3 * i[None, None, :]) % N]
    e_xzw = in_a[(-i[:, None, None] + i[None, :, None] + 2 * i[None, None, :]) % N]
    e_xyw = in_a[(-2 * i[:, None, None] - i[None, :, None] + i[None, None, :]) % N]
    e_xyz = in_a[(-3 * i[:, None, None] - 2 * i[None, :, None] - i[None, None, :]) % N]

    tensor = np.zeros((V, V, V), dtype=bool)

    def _place(block, parts):
        # one unordered triple family -> all six ordered placements
        for perm in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
            p = tuple(parts[j] for j in perm)
            view = np.transpose(block, axes=perm)
            tensor[
                p[0] * N : (p[0] + 1) * N,
                p[1] * N : (p[1] + 1) * N,
                p[2] * N : (p[2] + 1) * N,
            ] |= view

    _place(e_yzw, (1, 2, 3))
    _place(e_xzw, (0, 2, 3))
    _place(e_xyw, (0, 1, 3))
    _place(e_xyz, (0, 1, 2))
    tri = TriFunction(V, tensor, hypergraph=True)

    # tetrahedron count read off the built tensor, one part per coordinate
    t_yzw = tri.values[N : 2 * N, 2 * N : 3 * N, 3 * N :]
    t_xzw = tri.values[:N, 2 * N : 3 * N, 3 * N :]
    t_xyw = tri.values[:N, N : 2 * N, 3 * N :]
    t_xyz = tri.values[:N, N : 2 * N, 2 * N : 3 * N]
    count = int(
        np.einsum(
            "yzw,xzw,xyw,xyz->",
            t_yzw.astype(np.int64),
            t_xzw.astype(np.int64),
            t_xyw.astype(np.int64),
            t_xyz.astype(np.int64),
        )
    )
    pairs = ap_pair_count(members, N, 4)
    if N <= 20:
        require(
            check_le("cayley_tetra_identity", abs(count - N * N * pairs), 0.0)
        )
    return CayleyTetrahedronHypergraph(tri, N, count, pairs)
