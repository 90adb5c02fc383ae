"""Command line entry point: ``ordersched <command> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .exact_k import DEFAULT_MAX_K, solve_exact_k
from .harness import GenConfig, generate, load_bench_config, reduce_prec_special, rows_to_csv, run_bench
from .model import Schedule, evaluate_original, parse_instance, serialize_instance
from .oracle import SearchGuard, brute_force_original, brute_force_os
from .prec import parse_prec, solve_any_k
from .relaxation import OsSchedule, evaluate_os, glue
from .transform import DEFAULT_BETA, gen_tightness, tightness_ratio, transform


def _read_instance(path):
    return parse_instance(Path(path).read_text())


def _emit(doc, out):
    text = json.dumps(doc, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def cmd_generate(args):
    cfg = GenConfig(n_jobs=args.jobs, n_families=args.families,
                    setup_cost_factor=args.setup_factor, prob_per_family=args.prob,
                    distribution=args.dist, weight_mode=args.weights, seed=args.seed)
    text = serialize_instance(generate(cfg), indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)


def cmd_solve(args):
    instance = _read_instance(args.input)
    glued = glue(instance)
    guard = SearchGuard(max_items=args.max_items)
    doc = {"algo": args.algo}
    if args.algo == "exact-k":
        os, lb = solve_exact_k(glued, max_k=args.max_k)
        schedule = transform(instance, glued, os, args.beta)
        doc.update(beta=args.beta, os_cost=lb, os_schedule=os.to_json()["order"])
    elif args.algo == "sidney":
        schedule, _ = solve_any_k(instance, args.beta)
        doc.update(beta=args.beta)
    elif args.algo == "brute":
        schedule, _ = brute_force_original(instance, guard)
    else:
        os, total = brute_force_os(glued, guard)
        doc.update(os_cost=total, order=os.to_json()["order"])
        _emit(doc, args.out)
        return
    total, per_job = evaluate_original(instance, schedule)
    doc.update(order=list(schedule.order), total=total, jobs=per_job)
    _emit(doc, args.out)


def cmd_evaluate(args):
    instance = _read_instance(args.input)
    schedule = Schedule.from_json(json.loads(Path(args.schedule).read_text()))
    total, per_job = evaluate_original(instance, schedule)
    _emit({"total": total, "jobs": per_job}, args.out)


def cmd_transform(args):
    instance = _read_instance(args.input)
    glued = glue(instance)
    os = OsSchedule.from_json(json.loads(Path(args.os_schedule).read_text()))
    os_cost, _ = evaluate_os(glued, os)
    schedule = transform(instance, glued, os, args.beta)
    total, per_job = evaluate_original(instance, schedule)
    _emit({"order": list(schedule.order), "total": total, "jobs": per_job,
           "os_cost": os_cost, "beta": args.beta}, args.out)


def cmd_bench(args):
    spec = load_bench_config(json.loads(Path(args.config).read_text()))
    rows = run_bench(**spec)
    text = rows_to_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def cmd_tightness(args):
    orig, relaxed, ratio = tightness_ratio(args.m, args.eps, args.beta)
    doc = {"m": args.m, "eps": args.eps, "beta": args.beta, "original_cost": orig,
           "os_cost": relaxed, "ratio": ratio, "bound": 1 + args.beta}
    if args.instance_out:
        instance, os = gen_tightness(args.m, args.eps, args.beta)
        Path(args.instance_out).write_text(serialize_instance(instance, indent=2) + "\n")
        if args.os_out:
            Path(args.os_out).write_text(json.dumps(os.to_json(), indent=2) + "\n")
    _emit(doc, None)


def cmd_reduce(args):
    prec = parse_prec(Path(args.prec).read_text())
    text = serialize_instance(reduce_prec_special(prec), indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ordersched",
        description="Single-machine order scheduling with family setup times.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="random instance")
    p.add_argument("--jobs", type=int, default=1000)
    p.add_argument("--families", type=int, default=5)
    p.add_argument("--setup-factor", type=float, default=5.0)
    p.add_argument("--prob", type=float, default=0.3)
    p.add_argument("--dist", choices=["normal", "lognormal", "uniform", "weibull"],
                   default="normal")
    p.add_argument("--weights", choices=["unit", "uniform"], default="unit")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="solve an instance")
    p.add_argument("--input", required=True)
    p.add_argument("--algo", choices=["exact-k", "sidney", "brute", "brute-os"],
                   default="exact-k")
    p.add_argument("--beta", type=float, default=DEFAULT_BETA)
    p.add_argument("--max-k", type=int, default=DEFAULT_MAX_K)
    p.add_argument("--max-items", type=int, default=9, help="oracle size limit")
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("evaluate", help="original-model cost of a schedule")
    p.add_argument("--input", required=True)
    p.add_argument("--schedule", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("transform", help="batch a one-time-setup schedule")
    p.add_argument("--input", required=True)
    p.add_argument("--os-schedule", required=True)
    p.add_argument("--beta", type=float, default=DEFAULT_BETA)
    p.add_argument("--out")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("bench", help="benchmark sweep to CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("tightness", help="measured ratio on the worst-case construction")
    p.add_argument("--m", type=int, default=10000)
    p.add_argument("--eps", type=float, default=1e-6)
    p.add_argument("--beta", type=float, default=DEFAULT_BETA)
    p.add_argument("--instance-out")
    p.add_argument("--os-out")
    p.set_defaults(func=cmd_tightness)

    p = sub.add_parser("reduce", help="order-scheduling instance from a bipartite prec instance")
    p.add_argument("--prec", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
