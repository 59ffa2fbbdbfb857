"""Command-line interface.

Every subcommand prints one JSON document ``{"status", "payload",
"diagnostics"}`` on stdout and repeats the diagnostics on stderr.  The exit
code is 0 exactly when the status is ``ok``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import exactla as la
from .components import (_algebra, ambient_dimension, component_dimension,
                         enumerate_components, is_component, is_nonempty)
from .ideals import export, generators_for_component, generators_relative, split_to_ambient
from .moduli import parse_weight, reduce_by_weight
from .polynomial import parse_polynomial
from .quiver import (Algebra, QuiverError, algebra_to_json, is_node, parse_algebra,
                     parse_vertex_map, split_context, split_dimvec, split_node)
from .verify import sampling
from .verify.checks import (achievable_rank_oracle, batch_jacobian_codim, batch_membership,
                            containment_test, maximal_rank_sequences)
from .verify.sampling import SampleConfig, compile_generators, schwartz_zippel_bound
from .verify import suites

FORMATS = ("plain", "macaulay2", "singular", "json")
SUITES = ("membership", "codim", "containment", "oracle", "endo", "semistable")


@dataclass
class CommandResult:
    status: str
    payload: object = None
    diagnostics: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.status not in ("ok", "error"):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == "error" and not self.diagnostics:
            raise ValueError("an error result needs a diagnostic")

    def to_json(self) -> dict:
        return {"status": self.status, "payload": self.payload, "diagnostics": list(self.diagnostics)}


def ok(payload, diagnostics: Sequence[str] = ()) -> CommandResult:
    return CommandResult("ok", payload, list(diagnostics))


def error(message: str) -> CommandResult:
    return CommandResult("error", None, [message])


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# input helpers


def load_algebra(path: str) -> Algebra:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    return parse_algebra(text)


def _dims(text: str | None, A: Algebra, what: str = "--dim") -> dict[str, int]:
    if text is None:
        raise UsageError(f"{what} is required")
    vs = A.quiver.vertices
    if ":" not in text and len(vs) == 1:
        # a bare number is accepted when there is only one vertex
        text = f"{vs[0]}:{text.strip()}"
    out = parse_vertex_map(text, A.quiver)
    for v, n in out.items():
        if n < 0:
            raise UsageError(f"{what}: negative value at {v!r}")
    return out


def _ranks(text: str | None, A: Algebra, d: dict[str, int], what: str = "--rank") -> dict[str, int]:
    r = _dims(text, A, what)
    for v in A.quiver.vertices:
        if r[v] > d[v]:
            raise UsageError(f"{what}: rank {r[v]} at {v!r} exceeds dimension {d[v]}")
    return r


def default_seed() -> int:
    env = os.environ.get("QRV_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"QRV_SEED is not an integer: {env!r}") from None


def _config(args) -> SampleConfig:
    seed = args.seed if args.seed is not None else default_seed()
    return SampleConfig(la.GF(args.prime), seed, args.trials)


def load_extra(path: str, A: Algebra, x: str, d: dict[str, int], r: int):
    """Polynomials from a JSON file: a list of strings, or
    ``{"variables": "ambient" | "split", "polynomials": [...]}``."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"malformed JSON in {path}: {e}") from None
    side = "ambient"
    if isinstance(doc, dict):
        unknown = set(doc) - {"variables", "polynomials"}
        if unknown:
            raise UsageError(f"unknown keys in {path}: {sorted(unknown)}")
        side = doc.get("variables", "ambient")
        doc = doc.get("polynomials", [])
    if side not in ("ambient", "split") or not isinstance(doc, list):
        raise UsageError(f"{path}: expected a list of polynomial strings")
    polys = [parse_polynomial(s) for s in doc]
    if side == "split":
        ctx = split_context(A, x, d, r)
        polys = [split_to_ambient(p, ctx) for p in polys]
    return polys


def load_generators(path: str):
    """One polynomial per line; blank lines and ``#`` comments are skipped."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    return [parse_polynomial(s) for s in lines if s.strip() and not s.lstrip().startswith("#")]


# ---------------------------------------------------------------------------
# commands


def cmd_nodes(args) -> CommandResult:
    A = load_algebra(args.file)
    return ok({"nodes": [{"vertex": v, "is_node": is_node(A, v)} for v in A.quiver.vertices]})


def cmd_split(args) -> CommandResult:
    A = load_algebra(args.file)
    A.quiver.check_vertex(args.vertex)
    Ax, xt, xh = split_node(A, args.vertex)
    payload = {"algebra": algebra_to_json(Ax), "x_t": xt, "x_h": xh}
    if args.dim is not None or args.rank is not None:
        d = _dims(args.dim, A)
        if args.rank is None:
            raise UsageError("--rank is required with --dim")
        try:
            r = int(args.rank)
        except ValueError:
            raise UsageError(f"--rank must be an integer for split, got {args.rank!r}") from None
        split_d = split_dimvec(d, args.vertex, r, xt, xh)
        payload["dim"] = {v: split_d[v] for v in Ax.quiver.vertices}
    return ok(payload)


def cmd_components(args) -> CommandResult:
    A = load_algebra(args.file)
    d = _dims(args.dim, A)
    recs = enumerate_components(A, d)
    return ok({"d": d, "ambient_dimension": ambient_dimension(A.quiver, d),
               "components": [c.to_json() for c in recs]})


def cmd_ideal(args) -> CommandResult:
    A = load_algebra(args.file)
    d = _dims(args.dim, A)
    if args.extra is not None:
        if args.vertex is None:
            raise UsageError("--extra needs --vertex")
        A.quiver.check_vertex(args.vertex)
        try:
            r = int(args.rank)
        except (TypeError, ValueError):
            raise UsageError("--rank must be a single integer with --extra") from None
        P = load_extra(args.extra, A, args.vertex, d, r)
        G = generators_relative(A, args.vertex, d, r, P)
    else:
        r = _ranks(args.rank, A, d)
        if not is_nonempty(_algebra(A), d, r):
            raise UsageError(f"C_r is empty for r={r}")
        G = generators_for_component(A, d, r)
    payload = {"format": args.format, "count": len(G)}
    if args.format == "json":
        payload["generators"] = G.to_json()
    else:
        payload["text"] = export(G, args.format, A.quiver, d)
    return ok(payload)


def cmd_reduce(args) -> CommandResult:
    A = load_algebra(args.file)
    if args.theta is None:
        raise UsageError("--theta is required")
    theta = parse_weight(args.theta, A.quiver)
    return ok({"theta": theta, "algebra": algebra_to_json(reduce_by_weight(A, theta))})


def cmd_verify(args) -> CommandResult:
    A = load_algebra(args.file)
    cfg = _config(args)
    suite = args.suite
    d = _dims(args.dim, A)
    q = A.quiver
    instance = {"file": os.path.basename(args.file), "d": d}
    diags: list[str] = []

    if suite in ("membership", "codim", "containment"):
        rad = _algebra(A)
        r = _ranks(args.rank, A, d)
        instance["r"] = r
        if not is_nonempty(rad, d, r):
            raise UsageError(f"C_r is empty for r={r}")
        p = cfg.field.characteristic
        if suite == "membership":
            polys = load_generators(args.generators) if args.generators else \
                generators_for_component(rad, d, r).polynomials()
            compiled = compile_generators(polys, q, d, p)
            X = _sample_parallel(rad, d, r, cfg, args.jobs)
            good = batch_membership(X, compiled)
            bad = np.flatnonzero(~good).tolist()
            verdict = not bad
            bound = schwartz_zippel_bound(compiled.degree, d, p, cfg.trials) if verdict else 0.0
            report = _report("membership", instance, cfg, verdict, bound, bad[:10])
            report["generators"] = compiled.count
        elif suite == "codim":
            G = generators_for_component(rad, d, r)
            X = _sample_parallel(rad, d, r, cfg, args.jobs)
            codims = batch_jacobian_codim(G, q, d, X, p)
            amb = ambient_dimension(q, d)
            expected = component_dimension(q, d, r)
            bad = np.flatnonzero(amb - codims != expected).tolist()
            report = _report("codim", instance, cfg, not bad, 0.0, bad[:10])
            report["expected_dimension"] = expected
            report["observed_dimensions"] = sorted(set((amb - codims).tolist()))
        else:
            if args.rank2 is not None:
                r2 = _ranks(args.rank2, A, d, "--rank2")
                instance["r2"] = r2
                v = containment_test(rad, d, r, r2, cfg)
                report = _report("containment", instance, cfg, v.value, v.error_bound, [])
            else:
                maximal = [dict(m) for m in maximal_rank_sequences(rad, d, cfg)]
                comps = [c.r for c in enumerate_components(rad, d)]
                agree = sorted(map(_key, maximal)) == sorted(map(_key, comps))
                report = _report("containment", instance, cfg, agree, 0.0,
                                 [] if agree else [{"maximal": maximal, "components": comps}])
                report["maximal"] = maximal
                report["rank_vector_checked"] = is_component(rad, d, r)
    elif suite == "oracle":
        sizes = [int(s) for s in args.field_sizes.split(",")]
        parts = [achievable_rank_oracle(A, d, s) for s in sizes]
        agree = all(p.agreement for p in parts)
        counter = [{"q": s, "rank_vectors": [list(c) for c in p.counterexamples]}
                   for s, p in zip(sizes, parts) if not p.agreement]
        report = _report("oracle", instance, cfg, agree, 0.0, counter)
        report["achievable"] = {str(s): sorted(list(a) for a in p.achievable)
                                for s, p in zip(sizes, parts)}
        report["predicted"] = sorted(list(a) for a in parts[0].predicted) if parts else []
    elif suite == "endo":
        if args.vertex is None:
            raise UsageError("--vertex is required for the endo suite")
        try:
            r = int(args.rank)
        except (TypeError, ValueError):
            raise UsageError("--rank must be a single integer for the endo suite") from None
        instance.update({"vertex": args.vertex, "r": r})
        rows = suites.endomorphism_additivity(A, d, args.vertex, r, cfg.seed, cfg.trials, args.jobs)
        bad = [row for row in rows if not row["ok"]]
        report = _report("endo", instance, cfg, not bad, 0.0, bad[:10])
        report["expected_difference"] = r * (d[args.vertex] - r)
        report["skipped"] = sum(1 for row in rows if row.get("skipped"))
    elif suite == "semistable":
        if args.theta is None:
            raise UsageError("--theta is required for the semistable suite")
        theta = parse_weight(args.theta, q)
        instance["theta"] = theta
        summary = suites.semistable_suite(A, d, theta, args.field_size)
        report = _report("semistable", instance, cfg, summary["ok"], 0.0, summary["failures"][:10])
        report["semistable_count"] = summary["semistable"]
        report["representations"] = summary["total"]
    else:  # argparse guards this
        raise UsageError(f"unknown suite {suite!r}")
    if report["verdict"] != "pass":
        diags.append(f"{suite} suite failed")
        return CommandResult("error", report, diags)
    return ok(report, diags)


def _key(r: dict) -> tuple:
    return tuple(sorted(r.items()))


def _report(test: str, instance: dict, cfg: SampleConfig, verdict: bool, bound: float,
            counterexamples: list) -> dict:
    return {"test": test, "instance": instance, "trials": cfg.trials, "seed": cfg.seed,
            "verdict": "pass" if verdict else "fail", "error_bound": bound,
            "counterexamples": counterexamples}


def _sample_block_task(args):
    A, d, r, p, seed, b = args
    return sampling.sample_blocks(A, d, r, p, seed, [b])


def _sample_parallel(A, d, r, cfg: SampleConfig, jobs: int) -> np.ndarray:
    """Same points as :func:`sampling.sample_batch`, blocks spread over ``jobs`` processes."""
    nblocks = -(-cfg.trials // sampling.BLOCK)
    if jobs <= 1 or nblocks == 1:
        return sampling.sample_batch(A, d, r, cfg)
    p = cfg.field.characteristic
    tasks = [(A, d, r, p, cfg.seed, b) for b in range(nblocks)]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        parts = list(ex.map(_sample_block_task, tasks))
    return np.concatenate(parts)[:cfg.trials]


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qrv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nodes", help="list vertices with their node status")
    p.add_argument("file")

    p = sub.add_parser("split", help="split a node into a source and a sink")
    p.add_argument("file")
    p.add_argument("--vertex", required=True)
    p.add_argument("--dim")
    p.add_argument("--rank")

    p = sub.add_parser("components", help="irreducible components of a radical square zero algebra")
    p.add_argument("file")
    p.add_argument("--dim", required=True)

    p = sub.add_parser("ideal", help="generators of the ideal of C_r")
    p.add_argument("file")
    p.add_argument("--dim", required=True)
    p.add_argument("--rank", required=True)
    p.add_argument("--format", choices=FORMATS, default="plain")
    p.add_argument("--extra", help="JSON file of polynomials cutting out the split-side variety "
                   "(taken on trust) to saturate")
    p.add_argument("--vertex")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("file")
    p.add_argument("--dim", required=True)
    p.add_argument("--rank")
    p.add_argument("--rank2", help="second rank vector for a single containment test")
    p.add_argument("--suite", choices=SUITES, default="membership")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--prime", type=int, default=la.DEFAULT_PRIME)
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--generators", help="plain-format generator file for the membership suite")
    p.add_argument("--vertex")
    p.add_argument("--theta")
    p.add_argument("--field-sizes", default="2,3", help="oracle field sizes")
    p.add_argument("--field-size", type=int, default=2, help="semistable suite field size")

    p = sub.add_parser("reduce", help="delete the arrows forced to vanish by a weight")
    p.add_argument("file")
    p.add_argument("--theta", required=True)
    return parser


COMMANDS = {
    "nodes": cmd_nodes, "split": cmd_split, "components": cmd_components,
    "ideal": cmd_ideal, "verify": cmd_verify, "reduce": cmd_reduce,
}


def run(argv: Sequence[str] | None = None) -> CommandResult:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "trials", 1) < 1:
            raise UsageError("--trials must be positive")
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be positive")
        return COMMANDS[args.command](args)
    except (QuiverError, UsageError, ValueError, sampling.SamplingError) as e:
        return error(str(e))


def main(argv: Sequence[str] | None = None) -> int:
    result = run(argv)
    sys.stdout.write(json.dumps(result.to_json(), indent=2) + "\n")
    for line in result.diagnostics:
        sys.stderr.write(line + "\n")
    return 0 if result.status == "ok" else 1


if __name__ == "__main__":
    sys.exit(main())
