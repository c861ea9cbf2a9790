"""Command line front end: ``holocode tiling | analyze | verify``.

Exit codes: 0 ok, 1 bad input, 2 invalid geometry, 3 resource ceiling,
4 search guard.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from holocode import __version__
from holocode.errors import GeometryError, ResourceLimitError, SchemaError, SearchLimitError
from holocode.holocode import (
    HolographicCode,
    central_charge_fit,
    check_rt,
    correlation_histogram,
    entropy_curve,
)
from holocode.stabilizer import (
    StabilizerCode,
    code_distance,
    five_qubit_code,
    quantum_hamming_bound,
    singleton_bound,
    three_qutrit_code,
    three_qutrit_encode,
    three_qutrit_marginal_entropy,
    three_qutrit_recover,
)
from holocode.svg import dimer_svg, tiling_svg
from holocode.tensor import encoding_tensor, is_block_perfect, is_perfect
from holocode.tiling import Inflation, TilingGraph, TilingSpec, generate

EXIT_OK, EXIT_INPUT, EXIT_GEOMETRY, EXIT_RESOURCE, EXIT_SEARCH = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


def _write_text(path: str, text: str, outputs: dict) -> None:
    data = text.encode("utf-8")
    Path(path).write_bytes(data)
    outputs[path] = hashlib.sha256(data).hexdigest()


def _csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([f"{v:.12f}" if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _manifest(args, argv, params: dict, outputs: dict, started: float, results: dict) -> dict:
    return {
        "command": ["holocode", *argv],
        "subcommand": args.command,
        "parameters": params,
        "seed": args.seed,
        "threads": args.threads,
        "version": __version__,
        "numpy": np.__version__,
        "outputs": outputs,
        "results": results,
        "wall_clock_seconds": round(time.time() - started, 3),
    }


# ----------------------------------------------------------------------


def cmd_tiling(args, out) -> dict:
    try:
        inflation = Inflation(args.inflation)
    except ValueError as exc:
        raise InputError(f"unknown inflation {args.inflation!r}") from exc
    if args.layers < 0:
        raise InputError("layers must be non-negative")
    spec = TilingSpec(args.n, args.k, inflation, args.layers)
    graph = generate(spec)
    outputs: dict = {}
    if args.out:
        _write_text(args.out, graph.to_json() + "\n", outputs)
    if args.svg:
        _write_text(args.svg, tiling_svg(graph), outputs)
    print(f"tiling {{{args.n},{args.k}}} {inflation.value} layers={args.layers}", file=out)
    print(f"tiles={graph.n_tiles} edges={len(graph.edges)} boundary={graph.n_boundary}", file=out)
    return {"params": spec.to_dict(), "outputs": outputs, "results": {
        "tiles": graph.n_tiles, "edges": len(graph.edges), "boundary": graph.n_boundary}}


def _load_tiling(path: str) -> TilingGraph:
    try:
        return TilingGraph.from_json(Path(path).read_text())
    except FileNotFoundError as exc:
        raise InputError(f"no such tiling file: {path}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, GeometryError):
            raise
        raise InputError(f"malformed tiling file {path}: {exc}") from exc


def cmd_analyze(args, out) -> dict:
    graph = _load_tiling(args.tiling)
    spec = args.input
    if spec == "random":
        spec = f"random:{args.seed}"
    try:
        code = HolographicCode.build(graph, spec)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    state = code.state
    outputs: dict = {}
    results: dict = {"boundary": graph.n_boundary, "tiles": graph.n_tiles, "dimers": len(state.dimers)}
    print(f"boundary={graph.n_boundary} tiles={graph.n_tiles} input={spec}", file=out)
    if args.entropy_curve:
        rows = entropy_curve(code)
        _write_text(args.entropy_curve, _csv_text(["length", "mean_entropy_nats", "stddev", "n_intervals"], rows), outputs)
    if args.histogram or args.fit_slope:
        hist = correlation_histogram(code)
        if args.histogram:
            _write_text(args.histogram, _csv_text(["distance", "count"], hist.rows()), outputs)
        results["histogram_slope"] = hist.slope
        slope = "undefined" if hist.slope is None else f"{hist.slope:.4f}"
        print(f"histogram slope={slope}", file=out)
    if args.dimer_json:
        _write_text(args.dimer_json, json.dumps(state.to_json()) + "\n", outputs)
    if args.dimer_svg:
        _write_text(args.dimer_svg, dimer_svg(state), outputs)
    if args.fit_c:
        try:
            c = central_charge_fit(code, min_layers=args.min_layers)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        results["central_charge"] = c
        print(f"central charge c={c:.4f}", file=out)
    if args.check_rt:
        report = check_rt(code, with_residuals=not args.no_residuals)
        results["rt"] = {
            "intervals": report.n_intervals,
            "violations": report.violations,
            "corrected": report.corrected,
            "unexplained": report.unexplained,
            "gap_histogram": {str(k): v for k, v in report.gap_histogram.items()},
        }
        verdict = "PASS" if report.violations == 0 else "FAIL"
        print(
            f"RT bound {verdict}: {report.violations} violations of S <= |cut| log 2 over "
            f"{report.n_intervals} intervals; {report.corrected} with residual correction "
            f"({report.unexplained} unexplained)",
            file=out,
        )
        if report.violations:
            results["exit"] = EXIT_INPUT
    return {"params": {"tiling": graph.spec.to_dict(), "input": spec}, "outputs": outputs, "results": results}


def _load_code(name: str) -> StabilizerCode:
    if name == "five_qubit":
        return five_qubit_code()
    if name == "three_qutrit":
        return three_qutrit_code()
    try:
        return StabilizerCode.load(name)
    except FileNotFoundError as exc:
        raise InputError(f"no such code file: {name}") from exc


def cmd_verify(args, out) -> dict:
    code = _load_code(args.code)
    results: dict = {"name": code.name, "n": code.n, "k": code.k, "dimension": code.dimension}
    print(f"code {code.name}: [[{code.n},{code.k}]] dimension {code.dimension}", file=out)
    distance = None
    if args.distance or args.bounds:
        distance = code_distance(code)
        results["distance"] = distance
        print(f"distance d={distance}", file=out)
    if args.bounds:
        holds, lhs, rhs = quantum_hamming_bound(code.n, code.k, distance, code.dimension)
        single = singleton_bound(code.n, code.k, distance)
        srhs = 2 * (distance - 1) + code.k
        print("bound      lhs  rhs  holds  saturated", file=out)
        print(f"hamming  {lhs:5d} {rhs:4d}  {str(holds):5s}  {str(lhs == rhs)}", file=out)
        print(f"singleton{code.n:5d} {srhs:4d}  {str(single):5s}  {str(code.n == srhs)}", file=out)
        results["hamming"] = {"lhs": lhs, "rhs": rhs, "holds": holds}
        results["singleton"] = {"n": code.n, "rhs": srhs, "holds": single}
    if args.perfect:
        t = encoding_tensor(code)
        perfect = is_perfect(t)
        block = is_block_perfect(t)
        results["perfect"] = perfect
        results["block_perfect"] = block
        print(f"perfect={str(perfect).lower()} block_perfect={str(block).lower()}", file=out)
    if code.name == "three_qutrit" and code.dimension == 3:
        rng = np.random.default_rng(args.seed)
        worst = 1.0
        for _ in range(args.samples):
            v = rng.normal(size=3) + 1j * rng.normal(size=3)
            v /= np.linalg.norm(v)
            state = three_qutrit_encode(v)
            for kept in ((0, 1), (1, 2), (0, 2)):
                rec = three_qutrit_recover(state, kept)
                worst = min(worst, abs(np.vdot(v, rec)) ** 2)
        entropy = three_qutrit_marginal_entropy(three_qutrit_encode([1, 0, 0]), [0])
        results["single_site_entropy"] = entropy
        results["min_recovery_fidelity"] = worst
        print(f"single-site entropy={entropy:.12f} (log 3={math.log(3):.12f})", file=out)
        print(f"recovery fidelity min over {args.samples} states={worst:.12f}", file=out)
    return {"params": {"code": args.code}, "outputs": {}, "results": results}


# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="holocode", description="Holographic pentagon code toolkit")
    parser.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    parser.add_argument("--threads", type=int, default=1, help="worker cap (computations are sequential)")
    parser.add_argument("--manifest", help="write a run manifest JSON here")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tiling", help="generate a hyperbolic tiling")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--inflation", default="vertex", help="vertex or edge")
    p.add_argument("--layers", type=int, default=3)
    p.add_argument("--out")
    p.add_argument("--svg")

    p = sub.add_parser("analyze", help="boundary observables of the pentagon code")
    p.add_argument("--tiling", required=True)
    p.add_argument("--input", default="all-zero", help="all-zero, all-one, random or random:SEED")
    p.add_argument("--entropy-curve")
    p.add_argument("--histogram")
    p.add_argument("--fit-slope", action="store_true")
    p.add_argument("--fit-c", action="store_true")
    p.add_argument("--min-layers", type=int, default=4)
    p.add_argument("--check-rt", action="store_true")
    p.add_argument("--no-residuals", action="store_true", help="skip the greedy residual analysis")
    p.add_argument("--dimer-json")
    p.add_argument("--dimer-svg")

    p = sub.add_parser("verify", help="stabilizer code checks")
    p.add_argument("--code", required=True, help="five_qubit, three_qutrit or a JSON file")
    p.add_argument("--distance", action="store_true")
    p.add_argument("--bounds", action="store_true")
    p.add_argument("--perfect", action="store_true")
    p.add_argument("--samples", type=int, default=100)
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if args.threads < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    started = time.time()
    handler = {"tiling": cmd_tiling, "analyze": cmd_analyze, "verify": cmd_verify}[args.command]
    try:
        record = handler(args, out)
    except SearchLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEARCH
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except (InputError, SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.manifest:
        manifest = _manifest(args, argv, record["params"], record["outputs"], started, record["results"])
        Path(args.manifest).write_text(json.dumps(manifest, indent=2, sort_keys=True, default=float) + "\n")
    return record["results"].get("exit", EXIT_OK)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
