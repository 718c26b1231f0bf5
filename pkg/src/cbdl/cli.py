"""Command-line entry point: ``cbdl {classify,entail,sat,oracle-check,dump-graph}``."""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from .engine import InvariantViolation, Limits, ResourceLimitExceeded
from .frontend import ParseError, load_ontology, parse_query
from .reasoner import classify, run_entailment
from .structure import StrategyKind
from .symbols import SymbolError

EXIT_OK, EXIT_INPUT, EXIT_ABORT, EXIT_INVARIANT = 0, 1, 2, 3


class _InputError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--strategy", choices=[k.value for k in StrategyKind], default="cautious")
    common.add_argument("--trace", action="store_true", help="log every inference to stderr")
    common.add_argument("--seed", type=int, default=None, help="shuffle the work queue with this seed")
    common.add_argument("--max-clauses", type=int, default=Limits.max_clauses)
    common.add_argument("--timeout-secs", type=float, default=Limits.timeout_secs)

    p = argparse.ArgumentParser(prog="cbdl", description="Consequence-based ALCHIQ reasoner")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="compute all atomic subsumptions")
    c.add_argument("input")
    c.add_argument("--out", help="result file (default: stdout)")
    c.add_argument("--jobs", type=int, default=None,
                   help="one saturation per concept, spread over this many processes")

    e = sub.add_parser("entail", parents=[common], help="decide one subsumption")
    e.add_argument("input")
    e.add_argument("--query", required=True, help='e.g. "A SubClassOf B"')

    s = sub.add_parser("sat", parents=[common], help="decide satisfiability of a concept")
    s.add_argument("input")
    s.add_argument("--query", required=True, help='"A" or "A SubClassOf Bottom"')

    o = sub.add_parser("oracle-check", parents=[common],
                       help="compare classification with the ELH completion oracle")
    o.add_argument("input", nargs="?", help="ELH ontology (default: random samples)")
    o.add_argument("--samples", type=int, default=200)

    g = sub.add_parser("dump-graph", parents=[common], help="write the saturated context graph")
    g.add_argument("input")
    g.add_argument("--query", help="graph of one entailment run instead of classification")
    g.add_argument("--out", required=True, help="output base path; writes BASE.dot and BASE.txt")
    return p


def _load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc}") from None
    return load_ontology(text)


def _trace_sink(ontology):
    def sink(rec):
        print(rec.format(ontology.symbols), file=sys.stderr)
    return sink


def _run(args) -> int:
    limits = Limits(args.max_clauses, args.timeout_secs)
    strategy = StrategyKind(args.strategy)

    if args.command == "oracle-check":
        return _oracle_check(args, strategy, limits)

    ontology = _load(args.input)
    trace = _trace_sink(ontology) if args.trace else False

    if args.command == "classify":
        result = classify(ontology, strategy, limits=limits, seed=args.seed,
                          jobs=args.jobs, trace=trace)
        text = result.to_text()
        if args.out:
            try:
                Path(args.out).write_text(text, encoding="utf-8")
            except OSError as exc:
                raise _InputError(f"cannot write {args.out}: {exc}") from None
        else:
            sys.stdout.write(text)
        print(f"classified in {result.stats['wall_time']:.3f} s", file=sys.stderr)
        return EXIT_OK

    if args.command in ("entail", "sat"):
        query = parse_query(args.query, ontology.symbols)
        if args.command == "sat" and query.head:
            raise _InputError("sat expects a concept name or 'A SubClassOf Bottom'")
        run = run_entailment(ontology, query, strategy, limits=limits, seed=args.seed, trace=trace)
        if args.command == "entail":
            print("ENTAILED" if run.entailed else "NOT ENTAILED")
        else:
            print("UNSATISFIABLE" if run.entailed else "SATISFIABLE")
        return EXIT_OK

    # dump-graph
    if args.query:
        d = run_entailment(ontology, args.query, strategy, limits=limits, seed=args.seed,
                           trace=trace).structure
    else:
        d = classify(ontology, strategy, limits=limits, seed=args.seed, trace=trace).structure
    base = Path(args.out)
    try:
        base.with_suffix(".dot").write_text(d.to_dot(ontology.symbols), encoding="utf-8")
        base.with_suffix(".txt").write_text(d.to_text(ontology.symbols), encoding="utf-8")
    except OSError as exc:
        raise _InputError(f"cannot write {base}: {exc}") from None
    return EXIT_OK


def _oracle_check(args, strategy, limits) -> int:
    from .elh import elh_classify, is_elh, random_elh

    if args.input:
        ontology = _load(args.input)
        if not is_elh(ontology):
            raise _InputError(f"{args.input} is not an ELH ontology")
        samples = [(args.input, ontology)]
    else:
        rng = random.Random(args.seed if args.seed is not None else 0)
        samples = [(f"sample {i}", load_ontology(random_elh(rng))) for i in range(args.samples)]
    disagreements = 0
    for name, ontology in samples:
        expected = elh_classify(ontology)
        got = classify(ontology, strategy, limits=limits)
        if set(got.subsumptions) != expected or got.unsatisfiable:
            disagreements += 1
            diff = sorted(set(got.subsumptions) ^ expected)
            print(f"{name}: engine and oracle disagree on {diff}", file=sys.stderr)
    print(f"checked {len(samples)} ontologies, {disagreements} disagreements")
    return EXIT_INVARIANT if disagreements else EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _run(args)
    except (ParseError, SymbolError, _InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitExceeded as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return EXIT_ABORT
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
