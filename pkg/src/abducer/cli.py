"""Command line entry point.

Exit status: 0 on success, 1 when a resource limit was reached (or when
``--verify`` finds a mismatch), 2 on input errors.
"""

from __future__ import annotations

import argparse
import sys
import time
from contextlib import ExitStack
from typing import List, Optional, Sequence, TextIO

from .implicates import entails_set, extract, minimize, render_all
from .oracle import UniverseTooLarge, oracle_implicates
from .ordering import Ordering, OrderingError
from .parser import ParseError, Problem, parse
from .saturation import (
    Limits,
    Mode,
    SaturationConfig,
    Status,
    combine_pipeline,
    parse_filter,
    saturate,
)
from .terms import Clause

EXIT_OK, EXIT_LIMIT, EXIT_INPUT = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="abducer", description="Generate ground flat implicates over abducible constants.")
    p.add_argument("--abduce", metavar="FILE", required=True, help="problem file")
    p.add_argument("--mode", choices=["sa", "sar", "pipeline"], default="pipeline")
    p.add_argument("--filter", default="none", help="none | positive | negative | maxlits=K")
    p.add_argument("--oracle", action="store_true", help="use the brute-force reference (ground inputs only)")
    p.add_argument("--verify", action="store_true", help="cross-check the result with the reference (ground inputs only)")
    p.add_argument("--max-len", type=int, default=4, help="longest implicate enumerated by the reference")
    p.add_argument("--oracle-bound", type=int, default=32, help="largest subterm universe for the reference")
    p.add_argument("--trace", metavar="FILE", help="write the derivation event log here")
    p.add_argument("--max-clauses", type=int, default=Limits.max_clauses)
    p.add_argument("--max-weight", type=int, default=Limits.max_weight)
    p.add_argument("--max-iters", type=int, default=Limits.max_iterations)
    p.add_argument("--prime", dest="prime", action="store_true", default=True, help="minimize the output (default)")
    p.add_argument("--no-prime", dest="prime", action="store_false")
    p.add_argument("--time", action="store_true", help="append the elapsed time to the status line")
    return p


def _solve(problem: Problem, ordering: Ordering, args: argparse.Namespace, trace: Optional[TextIO]):
    clauses = problem.clauses
    abd = problem.abducibles
    preds = problem.predicates
    limits = Limits(args.max_clauses, args.max_weight, args.max_iters)
    user_filter = parse_filter(args.filter)
    if args.mode == "pipeline":
        res = combine_pipeline(clauses, ordering, abd, preds, limits, trace, extra_filter=user_filter)
        stored = len(res.first.clauses) + len(res.second.clauses)
        return res.implicates, res.status, stored
    cfg = SaturationConfig(Mode(args.mode), user_filter, limits)
    res = saturate(clauses, ordering, abd, preds, cfg, trace)
    return extract(res.clauses), res.status, len(res.clauses)


def run(argv: Optional[Sequence[str]] = None, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        with open(args.abduce, encoding="utf-8") as fh:
            problem = parse(fh.read())
        ordering = Ordering(problem.ordering_config())
        parse_filter(args.filter)
        Limits(args.max_clauses, args.max_weight, args.max_iters)
    except (OSError, ParseError, OrderingError, ValueError) as e:
        err.write(f"error: {e}\n")
        return EXIT_INPUT
    if (args.oracle or args.verify) and not problem.ground:
        if args.oracle:
            err.write("error: the reference only handles ground clauses\n")
            return EXIT_INPUT

    lines: List[str] = []
    code = EXIT_OK
    if args.oracle:
        try:
            impls = oracle_implicates(
                [Clause(c) for c in problem.clauses], problem.abducibles, args.max_len, problem.predicates, args.oracle_bound
            )
        except UniverseTooLarge as e:
            err.write(f"error: {e}\n")
            return EXIT_INPUT
        lines.extend(render_all(impls, ordering))
        status = f"# status: {Status.SATURATED.value}, clauses=0"
    else:
        with ExitStack() as stack:
            trace = stack.enter_context(open(args.trace, "w", encoding="utf-8")) if args.trace else None
            impls, st, stored = _solve(problem, ordering, args, trace)
        if args.prime:
            impls = minimize(impls, ordering)
        lines.extend(render_all(impls, ordering))
        status = f"# status: {st.value}, clauses={stored}"
        if st is Status.LIMIT:
            code = EXIT_LIMIT
        if args.verify:
            if not problem.ground:
                lines.append("# verify: skipped, input is not ground")
            else:
                try:
                    ref = oracle_implicates(
                        [Clause(c) for c in problem.clauses],
                        problem.abducibles,
                        args.max_len,
                        problem.predicates,
                        args.oracle_bound,
                    )
                except UniverseTooLarge as e:
                    lines.append(f"# verify: skipped, {e}")
                else:
                    # the reference lists every prime implicate, the result may be a smaller equivalent set
                    ok = all(entails_set(impls, r) for r in ref) and all(entails_set(ref, c) for c in impls)
                    lines.append("# verify: ok" if ok else "# verify: mismatch")
                    if not ok:
                        code = EXIT_LIMIT
    if args.time:
        status += f", time={time.perf_counter() - start:.3f}s"
    for line in lines:
        out.write(line + "\n")
    out.write(status + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
