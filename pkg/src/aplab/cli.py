"""Batch driver: every pipeline as a subcommand with seeded determinism,
key=value config files, and machine-readable JSON reports.

Identical config + seed produces byte-identical reports once timings are
masked with --no-timings.  The exit code is 0 only if every runtime-verified
inequality in the report's ledger passed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .cyclic import (
    CyclicFunction,
    indicator,
    read_function_csv,
    write_function_csv,
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
    GrowthFunction,
    roth_iterate,
    strong_decompose,
    weak_decompose,
)
from .generators import FUNCTION_KINDS, generate_function, generate_set, parse_spec
from .gowers import ap_form, u2_norm, u3_norm
from .graph_regularity import (
    EdgeFunction,
    box2_norm,
    cayley_tripartite,
    strong_regularize,
    triangle_count,
    triangle_removal,
    weak_regularize,
)
from .primes import bias_sweep, fourier_bias, mangoldt_weights, prime_ap_average

ENV_SEED = "APLAB_SEED"
_TIMING_KEYS = {"elapsed", "runtime", "timings", "wall_clock"}


def _strip_timings(obj):
    if isinstance(obj, dict):
        return {
            k: (0.0 if k in _TIMING_KEYS else _strip_timings(v))
            for k, v in obj.items()
        }
    if isinstance(obj, list):
        return [_strip_timings(v) for v in obj]
    return obj


def _emit(obj, args, stream=sys.stdout):
    if args.no_timings:
        obj = _strip_timings(obj)
    stream.write(json.dumps(obj, sort_keys=True) + "\n")


def _load_set(args) -> np.ndarray:
    if args.set_file:
        with open(args.set_file) as fh:
            return np.array(sorted({int(line) for line in fh if line.strip()}))
    if args.gen:
        spec = parse_spec(args.gen, seed=args.seed)
        return generate_set(spec, args.N if args.L is None else args.L)
    raise ContractViolationError("need --set-file or --gen")


def _load_function(args) -> CyclicFunction:
    if args.function_file:
        return read_function_csv(args.function_file)
    if args.gen:
        spec = parse_spec(args.gen, seed=args.seed)
        if spec.kind in FUNCTION_KINDS:
            return generate_function(spec, args.N)
        members = generate_set(spec, args.N)
        return indicator(members, args.N)
    raise ContractViolationError("need --function-file or --gen")


def _load_graph(args) -> EdgeFunction:
    if args.graph_file:
        edges = []
        hi = 0
        with open(args.graph_file) as fh:
            for line in fh:
                parts = line.split()
                if not parts:
                    continue
                u, v = int(parts[0]), int(parts[1])
                w = float(parts[2]) if len(parts) > 2 else 1.0
                edges.append((u, v, w))
                hi = max(hi, u, v)
        V = args.vertices or hi + 1
        vals = np.zeros((V, V))
        for u, v, w in edges:
            vals[u, v] = w
            vals[v, u] = w
        return EdgeFunction(V, vals)
    raise ContractViolationError("need --graph-file")


def _growth(args) -> GrowthFunction:
    return GrowthFunction.from_menu(args.growth)


def _cmd_norms(args):
    lines = []
    ledger = []
    if args.graph_file:
        g = _load_graph(args)
        t0 = time.perf_counter()
        value = box2_norm(g)
        lines.append(
            {
                "norm_kind": "box2",
                "value": value,
                "modulus": g.vertex_count,
                "elapsed": time.perf_counter() - t0,
            }
        )
    else:
        f = _load_function(args)
        wanted = args.norm or ["u2", "u3"]
        for kind in wanted:
            if kind == "u2":
                lines.append(u2_norm(f, "spectral").as_dict())
            elif kind == "u2-direct":
                lines.append(u2_norm(f, "direct").as_dict())
            elif kind == "u3":
                lines.append(u3_norm(f).as_dict())
            else:
                raise ContractViolationError(f"unknown norm {kind!r}")
    return {"norm_lines": lines}, ledger, []


def _cmd_count_aps(args):
    members = _load_set(args)
    f = indicator(members, args.N)
    results = {}
    ledger = []
    methods = ["naive", "spectral"] if args.method == "both" else [args.method]
    for m in methods:
        if m == "spectral" and args.k != 3:
            raise ContractViolationError("spectral counting requires k=3")
        t0 = time.perf_counter()
        res = ap_form([f] * args.k, m)
        results[m] = res.as_dict()
        results[m]["elapsed"] = time.perf_counter() - t0
    if len(methods) == 2:
        from .reporting import check_le

        diff = abs(
            complex(results["naive"]["value_re"], results["naive"]["value_im"])
            - complex(
                results["spectral"]["value_re"], results["spectral"]["value_im"]
            )
        )
        scale = max(abs(results["naive"]["value_re"]), 1e-30)
        ledger.append(check_le("naive_vs_spectral", diff, 1e-8 * scale, 1e-12))
    return results, ledger, []


def _cmd_decompose(args):
    members = _load_set(args)
    f = indicator(members, args.N)
    artifacts = []
    if args.mode == "weak":
        dec = weak_decompose(f, args.lam)
        results = {
            "mode": "weak",
            "threshold": dec.threshold,
            "phase_count": dec.phase_count,
            "bounds": {c.name: c.as_dict() for c in dec.verified_bounds},
        }
        parts = {"structured": dec.structured, "pseudorandom": dec.pseudorandom}
        ledger = list(dec.verified_bounds)
    else:
        dec = strong_decompose(f, args.epsilon, _growth(args))
        results = {
            "mode": "strong",
            "T": dec.complexity,
            "epsilon": dec.epsilon,
            "growth": dec.growth_record,
            "scale_index": dec.scale_index,
            "bounds": dec.bounds_dict(),
        }
        parts = {
            "fU_perp": dec.structured,
            "fS": dec.small,
            "fU": dec.pseudorandom,
        }
        ledger = list(dec.verified_bounds)
    refs = {}
    if args.out:
        for name, part in parts.items():
            path = f"{args.out}.{name}.csv"
            write_function_csv(part, path)
            refs[name] = path
            artifacts.append(path)
    results["component_files"] = refs or None
    return results, ledger, artifacts


def _cmd_roth(args):
    members = _load_set(args)
    L = args.L if args.L is not None else args.N
    result = roth_iterate(members, L, args.delta, eta=args.eta)
    from .reporting import check_le

    ledger = [
        check_le(
            "ap3_lower_bound",
            result.ap3_count_lower_bound,
            float(result.actual_count),
            1e-6,
        ),
        check_le("iteration_cap", len(result.iterations) - 1, result.iteration_cap),
    ]
    return result.as_dict(), ledger, []


def _cmd_regularity(args):
    ledger = []
    artifacts = []
    if args.cayley:
        members = _load_set(args)
        cay = cayley_tripartite(members, args.N)
        results = {
            "mode": "cayley",
            "modulus": cay.modulus,
            "triangle_count": cay.triangle_count,
            "ap_pair_count": cay.ap_pair_count,
        }
        from .reporting import check_le

        if args.oracle:
            brute = _brute_force_triangles(cay.graph)
            results["oracle_triangle_count"] = brute
            ledger.append(
                check_le("oracle_match", abs(brute - cay.triangle_count), 0.0)
            )
        ledger.append(
            check_le(
                "triangle_ap_identity",
                abs(cay.triangle_count - cay.modulus * cay.ap_pair_count),
                0.0,
            )
        )
        graph = cay.graph
    else:
        graph = _load_graph(args)
        results = {"vertices": graph.vertex_count}
    if args.mode == "weak":
        reg = weak_regularize(graph, args.epsilon, args.seed)
        results.update(
            {
                "mode": "weak",
                "cells": reg.partition.cell_count,
                "iterations": reg.iterations,
                "energies": list(reg.energies),
                "bounds": {c.name: c.as_dict() for c in reg.verified_bounds},
            }
        )
        ledger.extend(reg.verified_bounds)
        partition = reg.partition
    elif args.mode == "strong":
        dec = strong_regularize(graph, args.epsilon, _growth(args), args.seed)
        results.update(
            {
                "mode": "strong",
                "T": dec.complexity,
                "cells": dec.partition.cell_count,
                "energies": list(dec.energies),
                "bounds": dec.bounds_dict(),
            }
        )
        ledger.extend(dec.verified_bounds)
        partition = dec.partition
    elif args.mode == "removal":
        after, removed, report = triangle_removal(graph, args.delta, args.seed)
        results.update({"mode": "removal", "report": report.as_dict()})
        from .reporting import check_le

        ledger.append(
            check_le(
                "certificate",
                report.certificate_threshold if report.certificate_applicable else 0.0,
                report.certified_input_form if report.certificate_applicable else 0.0,
                1e-12,
            )
        )
        if args.oracle:
            results["oracle_triangles_after"] = _brute_force_triangles(after)
            ledger.append(
                check_le(
                    "oracle_match",
                    abs(results["oracle_triangles_after"] - report.triangles_after),
                    0.0,
                )
            )
        partition = None
    else:
        partition = None
        results.setdefault("mode", "cayley")
    if partition is not None and args.out:
        path = f"{args.out}.partition.csv"
        with open(path, "w") as fh:
            fh.write("vertex,cell\n")
            for v, cell in enumerate(partition.cell_assignment):
                fh.write(f"{v},{int(cell)}\n")
        artifacts.append(path)
        results["partition_file"] = path
    return results, ledger, artifacts


def _brute_force_triangles(graph: EdgeFunction) -> int:
    vals = graph.as_float() > 0.5
    V = graph.vertex_count
    total = 0
    for a in range(V):
        for b in range(a + 1, V):
            if vals[a, b]:
                total += int(np.sum(vals[a] & vals[b][: V] & (np.arange(V) > b)))
    return total


def _cmd_primes(args):
    from .reporting import check_le

    ledger = []
    if args.task == "mean":
        t0 = time.perf_counter()
        weights = mangoldt_weights(args.N, args.w, args.b)
        results = {
            "task": "mean",
            "N": args.N,
            "w": args.w,
            "b": args.b,
            "W": weights.W,
            "mean": weights.mean,
            "runtime": time.perf_counter() - t0,
        }
    elif args.task == "average":
        res = prime_ap_average(args.k, args.N, args.w, args.b)
        results = res.as_dict()
        results["task"] = "average"
    elif args.task == "bias":
        weights = mangoldt_weights(args.N, args.w, args.b)
        results = {"task": "bias", **fourier_bias(weights).as_dict()}
    elif args.task == "trend":
        reports = bias_sweep(args.N, [2, 3, 5, 7], args.b)
        results = {
            "task": "trend",
            "N": args.N,
            "b": args.b,
            "biases": [r.as_dict() for r in reports],
            "monotone_decreasing": all(
                reports[i].max_nonzero_coeff >= reports[i + 1].max_nonzero_coeff
                for i in range(len(reports) - 1)
            ),
        }
    else:
        raise ContractViolationError(f"unknown primes task {args.task!r}")
    return results, ledger, []


def _cmd_generate(args):
    members = _load_set(args)
    out = "\n".join(str(int(m)) for m in members)
    return {"raw": out}, [], []


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aplab",
        description="uniformity norms, structure decompositions, and progression counts",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--no-timings", action="store_true")
        p.add_argument("--config", type=str, default=None)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--gen", type=str, default=None)
        p.add_argument("--N", type=int, default=None)
        p.add_argument("--L", type=int, default=None)
        p.add_argument("--set-file", dest="set_file", type=str, default=None)

    p = sub.add_parser("norms", help="U2/U3/box2 norms of a generated or loaded object")
    common(p)
    p.add_argument("--function-file", dest="function_file", type=str, default=None)
    p.add_argument("--graph-file", dest="graph_file", type=str, default=None)
    p.add_argument("--vertices", type=int, default=None)
    p.add_argument("--norm", action="append", default=None)
    p.set_defaults(handler=_cmd_norms)

    p = sub.add_parser("count-aps", help="3/4-term progression counting forms")
    common(p)
    p.add_argument("--k", type=int, default=3, choices=(3, 4))
    p.add_argument(
        "--method", type=str, default="both", choices=("naive", "spectral", "both")
    )
    p.set_defaults(handler=_cmd_count_aps)

    p = sub.add_parser("decompose", help="weak/strong Fourier decomposition")
    common(p)
    p.add_argument("--mode", type=str, default="strong", choices=("weak", "strong"))
    p.add_argument("--lam", type=float, default=0.25)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--growth", type=str, default="exp:2")
    p.set_defaults(handler=_cmd_decompose)

    p = sub.add_parser("roth", help="density-increment pipeline")
    common(p)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--eta", type=float, default=0.05)
    p.set_defaults(handler=_cmd_roth)

    p = sub.add_parser("regularity", help="graph regularity, removal, Cayley counts")
    common(p)
    p.add_argument(
        "--mode",
        type=str,
        default="strong",
        choices=("weak", "strong", "removal", "cayley"),
    )
    p.add_argument("--graph-file", dest="graph_file", type=str, default=None)
    p.add_argument("--vertices", type=int, default=None)
    p.add_argument("--cayley", action="store_true")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--epsilon", type=float, default=0.2)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--growth", type=str, default="poly:1")
    p.set_defaults(handler=_cmd_regularity)

    p = sub.add_parser("primes", help="W-tricked von Mangoldt averages and bias")
    common(p)
    p.add_argument(
        "--task",
        type=str,
        default="average",
        choices=("average", "bias", "mean", "trend"),
    )
    p.add_argument("--k", type=int, default=3, choices=(3, 4))
    p.add_argument("--w", type=int, default=7)
    p.add_argument("--b", type=int, default=1)
    p.set_defaults(handler=_cmd_primes)

    p = sub.add_parser("generate", help="emit fixture sets, one integer per line")
    common(p)
    p.set_defaults(handler=_cmd_generate)

    return parser


_KNOWN_KEYS = {
    "seed",
    "out",
    "no_timings",
    "config",
    "threads",
    "gen",
    "N",
    "L",
    "set_file",
    "function_file",
    "graph_file",
    "vertices",
    "norm",
    "k",
    "method",
    "mode",
    "lam",
    "epsilon",
    "growth",
    "delta",
    "eta",
    "cayley",
    "oracle",
    "task",
    "w",
    "b",
}


def _apply_config_file(args):
    if not args.config:
        return
    with open(args.config) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in _KNOWN_KEYS:
                raise ContractViolationError(f"unknown config key {key!r}")
            if not hasattr(args, key):
                continue
            current = getattr(args, key)
            if isinstance(current, bool):
                setattr(args, key, value.strip().lower() in ("1", "true", "yes"))
            elif isinstance(current, int):
                setattr(args, key, int(value))
            elif isinstance(current, float):
                setattr(args, key, float(value))
            else:
                setattr(args, key, value.strip())


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config_file(args)
        if args.seed is None:
            args.seed = int(os.environ.get(ENV_SEED, "0"))
        t0 = time.perf_counter()
        results, ledger, artifacts = args.handler(args)
        elapsed = time.perf_counter() - t0
    except (
        ContractViolationError,
        PostconditionError,
        ScaleExhaustedError,
        IncrementNotFoundError,
        DichotomyFailedError,
        SieveCapacityError,
        FileNotFoundError,
    ) as exc:
        err = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        sys.stdout.write(json.dumps(err, sort_keys=True) + "\n")
        return 2

    if args.command == "generate":
        sys.stdout.write(results["raw"] + "\n")
        return 0

    config_echo = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("handler",) and v is not None
    }
    if args.command == "norms":
        for line in results["norm_lines"]:
            _emit(line, args)
        return 0

    report = {
        "config": config_echo,
        "results": results,
        "ledger": [c.as_dict() for c in ledger],
        "timings": {"wall_clock": elapsed},
        "artifacts": artifacts,
    }
    if args.out:
        path = f"{args.out}.json"
        payload = _strip_timings(report) if args.no_timings else report
        with open(path, "w") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2)
            fh.write("\n")
    _emit(report, args)
    return 0 if all(c.passed for c in ledger) else 1


if __name__ == "__main__":
    sys.exit(main())
