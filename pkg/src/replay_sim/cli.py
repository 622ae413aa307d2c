"""``replay-sim`` command line: derive-efg, generate, synth, classify, chain, report, all."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .analysis import (
    ClassificationRecord,
    cross_sectional,
    generate_chain_suites,
    longitudinal,
    replicate,
)
from .classifier import Category, ChainClassifier
from .efg import derive_efg
from .errors import ReplaySimError
from .evolution import (
    VersionChain,
    load_chain,
    load_mapping,
    parse_mutation_script,
    save_mapping,
    mutate,
)
from .generator import (
    GenerationParams,
    TestSuite,
    generate_all_length2,
    generate_random,
    load_suite,
    load_suites,
    save_suite,
)
from .model import dump_json, load_gui_model, read_json, save_gui_model
from .prng import derive_seed
from .report import emit_report

EXIT_OK, EXIT_ERROR, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _seed_list(text: str) -> list[int]:
    seeds = _int_list(text)
    if not seeds or any(s < 0 or s >= 1 << 64 for s in seeds):
        raise argparse.ArgumentTypeError("seeds must be integers in [0, 2**64)")
    return seeds


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lenient", action="store_true", help="ignore unknown keys in model files")
    common.add_argument("--workers", type=_positive, default=1, help="worker processes (output is identical for any value)")

    parser = argparse.ArgumentParser(
        prog="replay-sim",
        description="Simulate long-term GUI test-case replayability over versioned GUI models.",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("derive-efg", parents=[common], help="write the event-flow graph of a model")
    p.add_argument("model")
    p.add_argument("-o", "--output", help="output file (default: stdout)")

    p = sub.add_parser("generate", parents=[common], help="generate a test suite for a model")
    p.add_argument("model")
    p.add_argument("--length2-all", action="store_true", help="all valid length-2 cases (one per EFG edge)")
    p.add_argument("--random", type=_int_list, default=[], metavar="N,N,...", help="random walk lengths")
    p.add_argument("--count", type=_nonnegative, default=10_000, help="random cases per length")
    p.add_argument("--seed", type=_seed_list, help="64-bit seed, required with --random")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("synth", parents=[common], help="apply a mutation script to a model")
    p.add_argument("model")
    p.add_argument("--script", required=True)
    p.add_argument("--label", help="version label of the new model (overrides the script)")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("-m", "--mapping", required=True, help="where to write the ground-truth mapping")

    p = sub.add_parser("classify", parents=[common], help="classify a suite on the next version")
    p.add_argument("--old", required=True)
    p.add_argument("--new", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--suite", required=True)
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("chain", parents=[common], help="classify a suite on every later version")
    p.add_argument("--manifest", required=True)
    p.add_argument("--suite", required=True)
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("report", parents=[common], help="cross-sectional or longitudinal report")
    p.add_argument("--mode", choices=("cross", "long"), required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--suites", required=True, help="directory holding suite files")
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    p.add_argument("--all-targets", action="store_true", help="longitudinal: report every later version")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("all", parents=[common], help="generate, classify and report for a whole chain")
    p.add_argument("--manifest", required=True)
    p.add_argument("--seed", type=_seed_list, required=True, help="one seed per replication, e.g. 1,2,3")
    p.add_argument("--random", type=_int_list, default=[3, 4, 5], metavar="N,N,...")
    p.add_argument("--count", type=_nonnegative, default=10_000)
    p.add_argument("--no-length2", action="store_true", help="skip exhaustive length-2 suites")
    p.add_argument("-o", "--output", required=True, help="output directory")
    return parser


def _strict(args) -> bool:
    return not (args.lenient or os.environ.get("REPLAY_SIM_STRICT") == "0")


def _check_distinct(output, *inputs) -> None:
    out = Path(output).resolve()
    for i in inputs:
        if i is not None and Path(i).resolve() == out:
            raise UsageError(f"output {output} would overwrite input {i}; choose another path")


def _write_text(path, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ReplaySimError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _write_records(path, records) -> None:
    _write_text(
        path, "".join(json.dumps(r.to_dict(), sort_keys=True) + "\n" for r in records)
    )


def _records(chain: VersionChain, suite: TestSuite, workers: int):
    origin = chain.index_of(suite.origin_version)
    cases = suite.cases()
    matrix = ChainClassifier(chain).classify(cases, origin, workers)
    targets = chain.labels[origin + 1 :]
    out = []
    for tc, row in zip(cases, matrix):
        for target, cat in zip(targets, row):
            out.append(ClassificationRecord(tc.case_id, tc.origin_version, target, tc.length, Category(cat)))
    return out


def cmd_derive_efg(args) -> None:
    if args.output:
        _check_distinct(args.output, args.model)
    graph = derive_efg(load_gui_model(args.model, strict=_strict(args)))
    text = dump_json(graph.to_dict())
    if args.output:
        _write_text(args.output, text)
    else:
        sys.stdout.write(text)


def cmd_generate(args) -> None:
    if args.random and not args.seed:
        raise UsageError("--random needs an explicit --seed (no implicit entropy)")
    if args.seed and len(args.seed) != 1:
        raise UsageError("generate takes a single --seed")
    if not args.random and not args.length2_all:
        raise UsageError("nothing to generate: pass --length2-all and/or --random N,N,...")
    if any(n < 2 for n in args.random):
        raise UsageError("random lengths must be >= 2")
    _check_distinct(args.output, args.model)
    graph = derive_efg(load_gui_model(args.model, strict=_strict(args)))
    suite = TestSuite(graph.version_label)
    if args.length2_all:
        suite = suite.merged(generate_all_length2(graph))
    for n in sorted(set(args.random)):
        if n == 2 and args.length2_all:
            raise UsageError("length 2 is already covered by --length2-all")
        suite = suite.merged(generate_random(graph, n, args.count, derive_seed(args.seed[0], graph.version_label, n)))
    save_suite(suite, args.output)


def cmd_synth(args) -> None:
    _check_distinct(args.output, args.model, args.script)
    _check_distinct(args.mapping, args.model, args.script, args.output)
    model = load_gui_model(args.model, strict=_strict(args))
    ops, label = parse_mutation_script(read_json(args.script))
    label = args.label or label
    if not label:
        raise UsageError("new version label missing: pass --label or set new_label in the script")
    new, mapping = mutate(model, ops, label)
    save_gui_model(new, args.output)
    save_mapping(mapping, args.mapping)


def cmd_classify(args) -> None:
    _check_distinct(args.output, args.old, args.new, args.map, args.suite)
    strict = _strict(args)
    old = load_gui_model(args.old, strict=strict)
    new = load_gui_model(args.new, strict=strict)
    chain = VersionChain([old, new], [load_mapping(args.map, old, new)])
    _write_records(args.output, _records(chain, load_suite(args.suite), args.workers))


def cmd_chain(args) -> None:
    _check_distinct(args.output, args.manifest, args.suite)
    chain = load_chain(args.manifest, strict=_strict(args))
    _write_records(args.output, _records(chain, load_suite(args.suite), args.workers))


def cmd_report(args) -> None:
    _check_distinct(args.output, args.manifest)
    chain = load_chain(args.manifest, strict=_strict(args))
    folder = Path(args.suites)
    if not folder.is_dir():
        raise ReplaySimError(f"suite directory {folder} does not exist")
    suites = load_suites(sorted(folder.glob("*.json")))
    if args.mode == "cross":
        dists = cross_sectional(chain, suites, workers=args.workers)
    else:
        dists = longitudinal(chain, suites, workers=args.workers, all_targets=args.all_targets)
    emit_report(dists, args.format, args.output, title=f"{args.mode} replayability")


def cmd_all(args) -> None:
    chain = load_chain(args.manifest, strict=_strict(args))
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    params = GenerationParams(
        length2_all=not args.no_length2, random_lengths=tuple(sorted(set(args.random))), count=args.count
    )
    if 2 in params.random_lengths and params.length2_all:
        raise UsageError("length 2 is already covered by the exhaustive suite; use --no-length2")
    suite_dir = out / "suites" / f"seed-{args.seed[0]}"
    suite_dir.mkdir(parents=True, exist_ok=True)
    for label, suite in generate_chain_suites(chain, params, args.seed[0]).items():
        save_suite(suite, suite_dir / f"{label}.json")
    for mode in ("cross", "long"):
        rep = replicate(chain, params, args.seed, mode=mode, workers=args.workers)
        for seed, run in zip(rep.seeds, rep.per_seed):
            emit_report(run, "csv", out / f"{mode}_seed{seed}.csv")
        emit_report(rep.mean, "csv", out / f"{mode}.csv")
        emit_report(rep.mean, "svg", out / f"{mode}.svg", title=f"{mode} replayability (mean of {len(args.seed)} runs)")


COMMANDS = {
    "derive-efg": cmd_derive_efg,
    "generate": cmd_generate,
    "synth": cmd_synth,
    "classify": cmd_classify,
    "chain": cmd_chain,
    "report": cmd_report,
    "all": cmd_all,
}


def run(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"replay-sim {args.command}: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ReplaySimError, ValueError) as exc:
        print(f"replay-sim {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def main() -> None:
    sys.exit(run())
