"""
Command-line referee: solve, verify, oracle, reduce, gen and bench.

Exit codes: 0 for a witness or a passing check, 1 for NONE or a violation,
2 for any input error.
"""
import argparse
import json
import logging
import sys
from typing import List, Optional

from ..config import DEFAULTS, configure_logging
from ..logic.bench import bench_fpt, format_bench_csv, unsat_free_family
from ..logic.forbidden_reduction import reduce_forbidden1_to_dense, reduce_perfect_to_forbidden1
from ..logic.fpt import run_free_fpt
from ..logic.free_completion import complete_with_free, completion_stages
from ..logic.generators import gen_front_tied_smti, gen_random_1in3, gen_random_restrictions, gen_random_smti
from ..logic.oracle import iter_stable_matchings
from ..logic.sat_reduction import reduce_sat_to_ssmti_free
from ..logic.serialization import (
    identity_roles,
    parse_formula,
    parse_instance,
    parse_matching,
    read_text,
    serialize_formula,
    serialize_instance,
    serialize_matching,
    write_registry,
    write_text,
)
from ..logic.solvers import solve_restricted, solve_weak
from ..logic.stability import StabilityLevel, blocking_report, verify_stable
from ..models.errors import SmtiError
from ..models.restrictions import RestrictedEdgeSets, validate_restrictions

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NONE = 1
EXIT_INPUT = 2
LEVELS = ("weak", "strong", "super")


class InputError(SmtiError):
    """A flag combination the command cannot serve."""


def _edges_json(edges):
    return [[i + 1, j + 1] for i, j in sorted(edges)]


def _emit(args, text: str) -> None:
    write_text(getattr(args, "out", "-") or "-", text)


# solve ----------------------------------------------------------------------


def _cmd_solve(args) -> int:
    instance, restricted = parse_instance(read_text(args.instance))
    level = StabilityLevel.parse(args.level)
    calls = None
    if args.count_calls and not args.fpt_free:
        raise InputError("--count-calls only applies with --fpt-free")
    if args.fpt_free:
        if restricted.forbidden or restricted.forced:
            if not args.combine_restrictions:
                raise InputError("--fpt-free with forbidden or forced edges needs --combine-restrictions")
        outcome = run_free_fpt(
            instance,
            restricted.free,
            level,
            parallel=args.parallel,
            forbidden=restricted.forbidden,
            forced=restricted.forced,
            batch_size=DEFAULTS.fpt_batch_size,
        )
        matching, calls = outcome.matching, outcome.subproblem_calls
    elif level is StabilityLevel.WEAK:
        validate_restrictions(instance, restricted)
        if restricted.forbidden or restricted.forced:
            matching = solve_restricted(instance, restricted, level)
        else:
            matching = solve_weak(instance)
    else:
        if restricted.free:
            raise InputError(f"free edges at the {args.level} level need --fpt-free")
        matching = solve_restricted(instance, restricted, level)

    if args.json:
        payload = {
            "command": "solve",
            "level": level.name.lower(),
            "status": "witness" if matching is not None else "none",
            "matching": _edges_json(matching.edges) if matching is not None else None,
            "subproblem_calls": calls,
        }
        _emit(args, json.dumps(payload, indent=2) + "\n")
    else:
        text = "" if calls is None or not args.count_calls else f"# subproblem calls: {calls}\n"
        text += serialize_matching(matching) if matching is not None else "NONE\n"
        _emit(args, text)
    return EXIT_OK if matching is not None else EXIT_NONE


# verify ---------------------------------------------------------------------


def _cmd_verify(args) -> int:
    instance, restricted = parse_instance(read_text(args.instance))
    matching = parse_matching(read_text(args.matching), instance)
    level = StabilityLevel.parse(args.level)
    result = verify_stable(instance, restricted, matching, level)
    if args.json:
        report = blocking_report(instance, matching)
        payload = {
            "command": "verify",
            "level": level.name.lower(),
            "ok": result.ok,
            "violations": [{"kind": v.kind.value, "edges": _edges_json(v.edges)} for v in result.violations],
            "blocking": {name: _edges_json(report.at(StabilityLevel.parse(name))) for name in LEVELS},
        }
        _emit(args, json.dumps(payload, indent=2) + "\n")
    else:
        _emit(args, "OK\n" if result.ok else "".join(f"{reason}\n" for reason in result.reasons()))
    return EXIT_OK if result.ok else EXIT_NONE


# oracle ---------------------------------------------------------------------


def _cmd_oracle(args) -> int:
    instance, restricted = parse_instance(read_text(args.instance))
    level = StabilityLevel.parse(args.level)
    if args.perfect and level is not StabilityLevel.WEAK:
        raise InputError("--perfect is only defined for the weak level")
    validate_restrictions(instance, restricted)
    witness = next(iter_stable_matchings(instance, restricted, level, perfect=args.perfect), None)
    _emit(args, serialize_matching(witness) if witness is not None else "NONE\n")
    return EXIT_OK if witness is not None else EXIT_NONE


# reduce ---------------------------------------------------------------------


def _cmd_reduce(args) -> int:
    if args.kind == "sat-free":
        reduction = reduce_sat_to_ssmti_free(parse_formula(read_text(args.input)))
        instance, restricted = reduction.instance, reduction.restricted
        roles, stages = reduction.roles, reduction.stages
    else:
        source, source_restricted = parse_instance(read_text(args.input))
        if args.kind == "forbidden1":
            if not source_restricted.is_empty:
                logger.warning("Restricted edges of the source are ignored by the forbidden-edge construction")
            reduction = reduce_perfect_to_forbidden1(source)
            instance, restricted = reduction.instance, reduction.restricted
            roles, stages = reduction.roles, reduction.stages
        elif args.kind == "dense":
            instance = reduce_forbidden1_to_dense(source, source_restricted)
            restricted = RestrictedEdgeSets()
            roles, stages = identity_roles(instance), {e: "original" for e in instance.edges}
        else:
            instance, restricted = complete_with_free(source, source_restricted)
            roles, stages = identity_roles(instance), completion_stages(source, instance)
    write_text(args.out, serialize_instance(instance, restricted))
    if args.registry:
        write_registry(args.registry, roles, stages)
    return EXIT_OK


# gen ------------------------------------------------------------------------


def _cmd_gen(args) -> int:
    if args.kind == "1in3":
        _emit(args, serialize_formula(gen_random_1in3(args.vars, seed=args.seed)))
        return EXIT_OK
    if args.front_tied:
        if args.men != args.women:
            raise InputError("--front-tied needs as many men as women")
        instance = gen_front_tied_smti(args.men, args.density, args.ties, seed=args.seed)
    else:
        instance = gen_random_smti(args.men, args.women, args.density, args.ties, seed=args.seed)
    restricted = None
    if args.forbidden_prob or args.forced_prob or args.free_prob:
        restricted = gen_random_restrictions(
            instance, args.forbidden_prob, args.forced_prob, args.free_prob, seed=args.seed
        )
    _emit(args, serialize_instance(instance, restricted))
    return EXIT_OK


# bench ----------------------------------------------------------------------


def _cmd_bench(args) -> int:
    if args.k_min < 0 or args.k_max < args.k_min:
        raise InputError(f"empty k range {args.k_min}..{args.k_max}")
    rows = bench_fpt(
        lambda k: unsat_free_family(k, args.block),
        range(args.k_min, args.k_max + 1),
        StabilityLevel.parse(args.level),
        parallel=args.parallel,
    )
    _emit(args, format_bench_csv(rows))
    return EXIT_OK


# parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smti-restricted",
        description="Stable marriage with ties and forbidden, forced and free edges.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="find a stable matching or report NONE")
    solve.add_argument("--level", choices=LEVELS, required=True)
    solve.add_argument("--instance", required=True, help="instance file, '-' for stdin")
    solve.add_argument("--fpt-free", action="store_true", help="enumerate subsets of the free edges")
    solve.add_argument("--count-calls", action="store_true", help="print the number of subset subproblems")
    solve.add_argument("--parallel", action="store_true", help="solve subset subproblems on a thread pool")
    solve.add_argument(
        "--combine-restrictions",
        action="store_true",
        help="pass forbidden and forced edges into every subset subproblem",
    )
    solve.add_argument("--json", action="store_true")
    solve.add_argument("--out", default="-")
    solve.set_defaults(handler=_cmd_solve)

    verify = sub.add_parser("verify", help="check a matching against an instance")
    verify.add_argument("--level", choices=LEVELS, required=True)
    verify.add_argument("--instance", required=True)
    verify.add_argument("--matching", required=True)
    verify.add_argument("--json", action="store_true")
    verify.add_argument("--out", default="-")
    verify.set_defaults(handler=_cmd_verify)

    oracle = sub.add_parser("oracle", help="first stable matching by exhaustive enumeration")
    oracle.add_argument("--level", choices=LEVELS, required=True)
    oracle.add_argument("--instance", required=True)
    oracle.add_argument("--perfect", action="store_true", help="only perfect matchings (weak level)")
    oracle.add_argument("--out", default="-")
    oracle.set_defaults(handler=_cmd_oracle)

    reduce = sub.add_parser("reduce", help="build a reduction instance")
    reduce.add_argument("kind", choices=("forbidden1", "dense", "sat-free", "complete-free"))
    reduce.add_argument("--in", dest="input", required=True)
    reduce.add_argument("--out", required=True)
    reduce.add_argument("--registry", help="write the vertex-role and edge-stage map here")
    reduce.set_defaults(handler=_cmd_reduce)

    gen = sub.add_parser("gen", help="generate a seeded random instance or formula")
    gen.add_argument("kind", choices=("smti", "1in3"))
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--men", type=int, default=4)
    gen.add_argument("--women", type=int, default=4)
    gen.add_argument("--density", type=float, default=DEFAULTS.edge_density)
    gen.add_argument("--ties", type=float, default=DEFAULTS.tie_probability)
    gen.add_argument("--front-tied", action="store_true", help="length-two ties at the front of men's lists only")
    gen.add_argument("--forbidden-prob", type=float, default=0.0)
    gen.add_argument("--forced-prob", type=float, default=0.0)
    gen.add_argument("--free-prob", type=float, default=0.0)
    gen.add_argument("--vars", type=int, default=3, help="variable count for 1in3")
    gen.add_argument("--out", default="-")
    gen.set_defaults(handler=_cmd_gen)

    bench = sub.add_parser("bench", help="subproblem counts of the free-edge solver as CSV")
    bench.add_argument("--level", choices=("strong", "super"), default="strong")
    bench.add_argument("--k-min", type=int, default=0)
    bench.add_argument("--k-max", type=int, default=DEFAULTS.bench_k_max)
    bench.add_argument("--block", type=int, default=4)
    bench.add_argument("--parallel", action="store_true")
    bench.add_argument("--out", default="-")
    bench.set_defaults(handler=_cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    configure_logging(args.verbose)
    try:
        return args.handler(args)
    except SmtiError as e:
        logger.debug("Input error", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
