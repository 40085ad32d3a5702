"""Command line entry point: gen, solve, verify, bench, analyze, audit.

Exit codes: 0 success (verify: feasible), 1 infeasible or violations found,
2 usage or parse errors. All randomness is seeded; bench output is
byte-identical across runs unless --timing is given.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from .audits import ADVISORY_CLAIMS, CONTRACTUAL_CLAIMS, audit_instance
from .baselines import coffman_graham_labels, coffman_graham_schedule, list_schedule
from .generators import (
    KINDS,
    BadSpec,
    GeneratorSpec,
    corpus_id,
    generate,
    standard_corpus,
    _STANDARD,
)
from .laminar import (
    BadEps,
    BadHorizon,
    assign_levels,
    best_offset,
    build_laminar,
    default_depth_max,
    pad_to_power_of_two,
)
from .model import Instance, Schedule, longest_chain, validate_schedule
from .oracle import EXACT_CAP, TooLarge, optimal_makespan, optimal_schedule
from .qptas import GuessConfig, InfeasibleHorizon, insert_discarded, solve
from .textio import (
    ParseError,
    emit_instance,
    emit_schedule,
    parse_instance,
    parse_schedule,
)

AUDIT_COLUMNS = ("claim", "instance", "population", "violations", "observed", "bound")
BENCH_COLUMNS = (
    "instance",
    "algorithm",
    "makespan",
    "opt",
    "ratio",
    "discards",
    "wall_ms",
    "error",
)


class CliError(Exception):
    """Usage-level failure; main() maps it to exit code 2."""


def _read_instance(path: str) -> Instance:
    return parse_instance(Path(path).read_text())


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _parse_eps(value: str) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise CliError(f"bad eps {value!r}; use forms like 1, 1/2, 0.25") from None


def _corpus_dir(path: str) -> list[tuple[str, Instance]]:
    base = Path(path)
    if not base.is_dir():
        raise CliError(f"{path} is not a directory")
    files = sorted(base.glob("*.inst"))
    if not files:
        raise CliError(f"no .inst files under {path}")
    return [(f.stem, parse_instance(f.read_text())) for f in files]


def _cmd_gen(args) -> int:
    if args.corpus:
        if args.corpus != "standard":
            raise CliError(f"unknown corpus {args.corpus!r}")
        if not args.outdir:
            raise CliError("--corpus needs --outdir")
        out = Path(args.outdir)
        out.mkdir(parents=True, exist_ok=True)
        for spec in _STANDARD:
            (out / f"{corpus_id(spec)}.inst").write_text(emit_instance(generate(spec)))
        print(f"wrote {len(_STANDARD)} instances to {out}")
        return 0
    if not args.kind:
        raise CliError("either --corpus or --kind is required")
    spec = GeneratorSpec(
        kind=args.kind,
        n=args.n,
        m=args.m,
        seed=args.seed,
        layers=args.layers,
        width=args.width,
        edge_prob=args.edge_prob,
        depth=args.depth,
    )
    _write(args.output, emit_instance(generate(spec)))
    return 0


def _auto_horizon(inst: Instance) -> int:
    # Oracle optimum when the instance is desk-sized, otherwise the classic
    # lower bound; discards at a too-small horizon are repaired afterwards.
    if inst.n <= EXACT_CAP:
        return optimal_makespan(inst)
    return max(math.ceil(inst.n / inst.m), longest_chain(inst))


def _solve_qptas(inst: Instance, args) -> tuple[Schedule, int, int]:
    eps = _parse_eps(args.eps)
    if args.horizon == "auto":
        T = _auto_horizon(inst)
    else:
        try:
            T = int(args.horizon)
        except ValueError:
            raise CliError(f"bad horizon {args.horizon!r}; use 'auto' or an integer") from None
    if args.mode == "exhaustive":
        kmax = inst.n if args.kmax is None else args.kmax
        cfg = GuessConfig(
            k_max=kmax,
            partition_mode="exhaustive",
            depth_max=args.depth_max or 1,
            eps=eps,
            exhaustive_job_guessing=True,
        )
        result = solve(inst, T, cfg)
        sched = insert_discarded(inst, result.schedule, result.discarded)
        return sched, len(result.discarded), result.stats.guesses_explored
    padded, tstar = pad_to_power_of_two(inst, T)
    cfg = GuessConfig(
        k_max=args.kmax or 0,
        partition_mode="laminar",
        depth_max=args.depth_max or default_depth_max(padded.n, padded.m, eps),
        eps=eps,
        seed=args.seed,
    )
    result = solve(padded, tstar, cfg)
    sched = insert_discarded(padded, result.schedule, result.discarded)
    # Drop the padding jobs; the declared horizon keeps the accounting
    # (tstar plus one slot per discarded job).
    trimmed = Schedule(
        start={j: t for j, t in sched.start.items() if j < inst.n},
        horizon=sched.horizon,
    )
    return trimmed, len(result.discarded), result.stats.guesses_explored


def _cmd_solve(args) -> int:
    inst = _read_instance(args.input)
    discards = 0
    explored = 0
    if args.alg == "exact":
        sched = optimal_schedule(inst)
    elif args.alg == "ls":
        if args.order == "id":
            order = list(range(inst.n))
        elif args.order == "random":
            order = list(range(inst.n))
            random.Random(args.seed).shuffle(order)
        else:
            labels = coffman_graham_labels(inst)
            order = sorted(range(inst.n), key=lambda j: -labels[j])
        sched = list_schedule(inst, order)
    elif args.alg == "cg":
        sched = coffman_graham_schedule(inst)
    else:
        sched, discards, explored = _solve_qptas(inst, args)
    _write(args.output, emit_schedule(sched))
    print(f"makespan={sched.horizon} discarded={discards} explored={explored}")
    return 0


def _cmd_verify(args) -> int:
    inst = _read_instance(args.input)
    sched = parse_schedule(Path(args.schedule).read_text())
    report = validate_schedule(inst, sched)
    for v in report.violations:
        print(f"violation {v.kind}: {' '.join(map(str, v.detail))}")
    if not report.complete and not args.partial:
        missing = [j for j in range(inst.n) if j not in sched.start]
        print(f"incomplete: {len(missing)} job(s) unscheduled")
        return 1
    if not report.feasible:
        return 1
    print(f"ok makespan={report.makespan}")
    return 0


def _bench_one(cid: str, inst: Instance, alg: str, eps: Fraction, timing: bool):
    row = {c: "" for c in BENCH_COLUMNS}
    row["instance"] = cid
    row["algorithm"] = alg
    began = time.perf_counter()
    try:
        discards = 0
        if alg == "exact":
            sched = optimal_schedule(inst)
            mk = sched.makespan()
        elif alg == "ls":
            mk = list_schedule(inst, range(inst.n)).makespan()
        elif alg == "cg":
            mk = coffman_graham_schedule(inst).makespan()
        elif alg == "qptas":
            T = _auto_horizon(inst)
            padded, tstar = pad_to_power_of_two(inst, T)
            cfg = GuessConfig(
                k_max=0,
                partition_mode="laminar",
                depth_max=default_depth_max(padded.n, padded.m, eps),
                eps=eps,
            )
            result = solve(padded, tstar, cfg)
            sched = insert_discarded(padded, result.schedule, result.discarded)
            discards = len(result.discarded)
            mk = sched.horizon
        else:
            raise CliError(f"unknown algorithm {alg!r}")
        row["makespan"] = str(mk)
        row["discards"] = str(discards)
        if inst.n <= EXACT_CAP:
            opt = optimal_makespan(inst)
            row["opt"] = str(opt)
            row["ratio"] = f"{mk / opt:.6f}"
    except (CliError, ValueError, RuntimeError) as exc:
        row["error"] = str(exc)
    if timing:
        row["wall_ms"] = f"{(time.perf_counter() - began) * 1000:.3f}"
    return row


def _cmd_bench(args) -> int:
    corpus = _corpus_dir(args.input)
    algs = sorted(set(args.alg.split(",")))
    eps = _parse_eps(args.eps)
    rows = [
        _bench_one(cid, inst, alg, eps, args.timing)
        for cid, inst in corpus
        for alg in algs
    ]
    rows.sort(key=lambda r: (r["instance"], r["algorithm"]))
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    _write(args.output, buf.getvalue())
    return 0


def _cmd_analyze(args) -> int:
    if args.what != "levels":
        raise CliError(f"unknown analysis {args.what!r}")
    inst = _read_instance(args.input)
    eps = _parse_eps(args.eps)
    T = optimal_makespan(inst)
    padded, tstar = pad_to_power_of_two(inst, T)
    opt = optimal_schedule(padded)
    fam = build_laminar(tstar, padded.n, eps)
    assign = assign_levels(padded, opt, fam, eps)
    a, count = best_offset(assign, padded.m, eps, tstar)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["level", "start", "end", "guess", "top"])
    for level in range(fam.level_count()):
        per_guess = assign.guess.get(level, {})
        per_top = assign.top.get(level, {})
        for key in sorted(set(per_guess) | set(per_top)):
            writer.writerow(
                [
                    level,
                    key[0],
                    key[1],
                    " ".join(map(str, sorted(per_guess.get(key, ())))),
                    " ".join(map(str, sorted(per_top.get(key, ())))),
                ]
            )
    _write(args.output, buf.getvalue())
    print(f"offset={a} bucket={count} horizon={tstar} padded_jobs={padded.n}", file=sys.stderr)
    return 0


def _cmd_audit(args) -> int:
    corpus = _corpus_dir(args.input)
    eps = _parse_eps(args.eps)
    claims = CONTRACTUAL_CLAIMS + ADVISORY_CLAIMS + (
        "recursion-depth",
        "recursion-depth-analysis",
    )
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=AUDIT_COLUMNS, lineterminator="\n")
    writer.writeheader()
    counted = set(CONTRACTUAL_CLAIMS + ADVISORY_CLAIMS)
    failed = 0
    for cid, inst in corpus:
        try:
            reports = audit_instance(inst, eps=eps)
        except (ValueError, TooLarge) as exc:
            print(f"skipping {cid}: {exc}", file=sys.stderr)
            continue
        for claim in claims:
            rep = reports[claim]
            failed += rep.violations if claim in counted else 0
            writer.writerow(
                {
                    "claim": claim,
                    "instance": cid,
                    "population": rep.population,
                    "violations": rep.violations,
                    "observed": f"{rep.worst:.6f}",
                    "bound": f"{rep.bound:.6f}",
                }
            )
    _write(args.output, buf.getvalue())
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="precsched")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate instances")
    gen.add_argument("--kind", choices=KINDS)
    gen.add_argument("--n", type=int, default=0)
    gen.add_argument("--m", type=int, default=1)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--layers", type=int, default=0)
    gen.add_argument("--width", type=int, default=0)
    gen.add_argument("--edge-prob", type=float, default=1.0)
    gen.add_argument("--depth", type=int, default=0)
    gen.add_argument("--output")
    gen.add_argument("--corpus", help="write a named corpus (standard)")
    gen.add_argument("--outdir")
    gen.set_defaults(func=_cmd_gen)

    slv = sub.add_parser("solve", help="schedule one instance")
    slv.add_argument("--input", required=True)
    slv.add_argument("--output")
    slv.add_argument("--alg", choices=("exact", "ls", "cg", "qptas"), required=True)
    slv.add_argument("--order", choices=("id", "random", "cg"), default="id")
    slv.add_argument("--seed", type=int, default=0)
    slv.add_argument("--eps", default="1")
    slv.add_argument("--kmax", type=int)
    slv.add_argument("--depth-max", type=int)
    slv.add_argument("--mode", choices=("laminar", "exhaustive"), default="laminar")
    slv.add_argument("--horizon", default="auto")
    slv.set_defaults(func=_cmd_solve)

    ver = sub.add_parser("verify", help="check a schedule against an instance")
    ver.add_argument("--input", required=True)
    ver.add_argument("--schedule", required=True)
    ver.add_argument("--partial", action="store_true")
    ver.set_defaults(func=_cmd_verify)

    ben = sub.add_parser("bench", help="run algorithms over a corpus directory")
    ben.add_argument("--input", required=True)
    ben.add_argument("--output")
    ben.add_argument("--alg", default="exact,ls,cg,qptas")
    ben.add_argument("--eps", default="1")
    ben.add_argument("--timing", action="store_true")
    ben.set_defaults(func=_cmd_bench)

    ana = sub.add_parser("analyze", help="analysis tables")
    ana.add_argument("what", choices=("levels",))
    ana.add_argument("--input", required=True)
    ana.add_argument("--output")
    ana.add_argument("--eps", default="1")
    ana.set_defaults(func=_cmd_analyze)

    aud = sub.add_parser("audit", help="run the empirical auditors over a corpus")
    aud.add_argument("--input", required=True)
    aud.add_argument("--output")
    aud.add_argument("--eps", default="1")
    aud.set_defaults(func=_cmd_audit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, CliError, BadSpec, BadEps, BadHorizon, TooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InfeasibleHorizon as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
