"""Command-line front door: instance generation, strategy runs, the oracle,
error reports, prediction learning, and the benchmark harness."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import factory, learner
from .errormetrics import hop_distance
from .graphcore import load_instance
from .oracle import DEFAULT_CAP, CapExceeded, opt_brute_force
from .strategies import StrategyConfig, randomized_gamma, run_combined


class ConfigError(ValueError):
    pass


_MODE_BY_FLAG = {
    "baseline": "baseline",
    "tradeoff": "tradeoff",
    "error-sensitive": "error_sensitive",
}

CSV_COLUMNS = [
    "instance", "strategy", "gamma", "seed", "queries", "opt", "ratio",
    "ratio_decimal", "k_h", "k_sharp", "consistency_ok", "robustness_ok",
    "error_bound_ok", "runtime_ms", "status",
]


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--format", choices=["csv", "json"], default="json")
    parser.add_argument("--oracle-cap", type=int, default=DEFAULT_CAP)


def _cmd_gen(args) -> int:
    if args.family == "tradeoff-cycle":
        graph = factory.gen_tradeoff_cycle(args.beta, args.adversarial)
    elif args.family == "path-parallel":
        graph = factory.gen_path_parallel(args.n)
    elif args.family == "triangle-chain":
        graph = factory.gen_triangle_chain(args.n)
    elif args.family == "vc-flip":
        graph = factory.gen_vc_flip(args.n, args.variant)
    elif args.family == "random":
        graph = factory.gen_random(
            args.vertices, args.extra_edges, args.overlap, args.error_rate, args.seed
        )
    else:
        raise ConfigError(f"unknown family {args.family!r}")
    if args.out:
        graph.save(args.out)
    else:
        print(graph.to_json())
    return 0


def _cmd_run(args) -> int:
    graph = load_instance(args.instance)
    gamma = Fraction(args.gamma)
    mode = _MODE_BY_FLAG[args.alg]
    if mode != "baseline" and gamma != int(gamma):
        outcome = randomized_gamma(
            graph, gamma, seed=args.seed, mode=mode,
            oracle_cap=args.oracle_cap, instance_label=args.instance,
        )
    else:
        config = StrategyConfig(gamma=int(gamma) if mode != "baseline" else 2, mode=mode, seed=args.seed)
        outcome = run_combined(
            graph, config, oracle_cap=args.oracle_cap,
            instance_label=args.instance, seed=args.seed,
        )
    body = {
        "report": outcome.report.to_dict(),
        "transcript": json.loads(outcome.run.transcript.to_json()),
    }
    text = json.dumps(body, indent=2)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)
    return 0 if outcome.report.bounds_hold() else 1


def _cmd_opt(args) -> int:
    graph = load_instance(args.instance)
    source = "truth" if args.values == "truth" else "predictions"
    result = opt_brute_force(graph, source, cap=args.oracle_cap, collect_all=args.all)
    body = {
        "size": result.size,
        "one_optimal_set": sorted(result.one_optimal_set),
    }
    if args.all:
        body["all_optimal_sets"] = [sorted(s) for s in result.all_optimal_sets]
    print(json.dumps(body, indent=2))
    return 0


def _cmd_error(args) -> int:
    graph = load_instance(args.instance)
    report = hop_distance(graph)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["edge", "jo", "oj"])
        for eid in sorted(report.jo):
            writer.writerow([eid, report.jo[eid], report.oj[eid]])
        writer.writerow(["total", report.k_h, report.k_h])
        sys.stdout.write(buf.getvalue())
    else:
        print(
            json.dumps(
                {
                    "jo": {str(k): v for k, v in sorted(report.jo.items())},
                    "oj": {str(k): v for k, v in sorted(report.oj.items())},
                    "k_h": report.k_h,
                    "k_sharp": report.k_sharp,
                },
                indent=2,
            )
        )
    return 0


def _cmd_learn(args) -> int:
    graph = load_instance(args.instance)
    with open(args.dist, "r", encoding="utf-8") as fh:
        sampler = learner.RealizationSampler.from_json(graph, fh.read(), seed=args.seed)
    learned = learner.erm_train(graph, sampler, args.samples)
    text = learner.predictions_to_json(learned)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)
    return 0


def _bench_instances(job, oracle_cap):
    family = job.get("family")
    params = dict(job.get("params", {}))
    seeds = job.get("seeds", [0])
    if family == "random":
        for seed in seeds:
            label = f"random[{params.get('vertices', 5)}v+{params.get('extra_edges', 3)}e,s={seed}]"
            yield label, factory.gen_random(
                params.get("vertices", 5),
                params.get("extra_edges", 3),
                params.get("overlap_density", 0.8),
                params.get("error_rate", 0),
                seed,
            )
    elif family == "tradeoff-cycle":
        yield f"tradeoff-cycle[beta={params['beta']},adv={params.get('adversarial', False)}]", factory.gen_tradeoff_cycle(params["beta"], params.get("adversarial", False))
    elif family == "path-parallel":
        yield f"path-parallel[n={params['n']}]", factory.gen_path_parallel(params["n"])
    elif family == "triangle-chain":
        yield f"triangle-chain[n={params['n']}]", factory.gen_triangle_chain(params["n"])
    elif family == "vc-flip":
        yield f"vc-flip[n={params['n']},{params.get('variant', 'ex2')}]", factory.gen_vc_flip(params["n"], params.get("variant", "ex2"))
    elif family == "file":
        yield params["path"], load_instance(params["path"])
    else:
        raise ConfigError(f"unknown family {family!r}")


def _cmd_bench(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        config = json.load(fh)
    jobs = config.get("jobs", [])
    if not jobs:
        raise ConfigError("config lists no jobs")
    oracle_cap = config.get("oracle_cap", args.oracle_cap)
    rows = []
    all_ok = True
    for job in jobs:
        strategies = job.get("strategies", [])
        if not strategies:
            raise ConfigError("job lists no strategies")
        for label, graph in _bench_instances(job, oracle_cap):
            for strat in strategies:
                alg = strat.get("alg")
                if alg not in _MODE_BY_FLAG:
                    raise ConfigError(f"unknown strategy {alg!r}")
                mode = _MODE_BY_FLAG[alg]
                gamma = Fraction(str(strat.get("gamma", 2)))
                seed = int(strat.get("seed", 0))
                try:
                    if mode != "baseline" and gamma != int(gamma):
                        outcome = randomized_gamma(
                            graph, gamma, seed=seed, mode=mode,
                            oracle_cap=oracle_cap, instance_label=label,
                        )
                    else:
                        outcome = run_combined(
                            graph,
                            StrategyConfig(gamma=int(gamma) if mode != "baseline" else 2, mode=mode, seed=seed),
                            oracle_cap=oracle_cap,
                            instance_label=label,
                            seed=seed,
                        )
                except CapExceeded as exc:
                    rows.append({"instance": label, "strategy": mode, "status": f"skipped: {exc}"})
                    continue
                record = outcome.report.to_dict()
                record["status"] = "ok" if outcome.report.bounds_hold() else "bound-violated"
                if record["status"] != "ok":
                    all_ok = False
                rows.append(record)
    _write_bench_output(rows, args)
    return 0 if all_ok else 1


def _write_bench_output(rows, args) -> None:
    json_text = json.dumps(rows, indent=2)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: row.get(k, "") for k in CSV_COLUMNS})
    csv_text = buf.getvalue()
    if args.out:
        with open(args.out + ".json", "w", encoding="utf-8") as fh:
            fh.write(json_text + "\n")
        with open(args.out + ".csv", "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    sys.stdout.write(csv_text if args.format == "csv" else json_text + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mstquery")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("--family", required=True, choices=sorted(factory.FAMILIES))
    p.add_argument("--out")
    p.add_argument("--beta", type=int, default=2)
    p.add_argument("--adversarial", action="store_true")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--variant", choices=["ex1", "ex2"], default="ex2")
    p.add_argument("--vertices", type=int, default=5)
    p.add_argument("--extra-edges", type=int, default=3)
    p.add_argument("--overlap", type=float, default=0.8)
    p.add_argument("--error-rate", type=float, default=0.0)
    _common(p)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("run", help="run one strategy on an instance")
    p.add_argument("--alg", required=True, choices=sorted(_MODE_BY_FLAG))
    p.add_argument("--gamma", default="2")
    p.add_argument("--instance", required=True)
    p.add_argument("--report")
    _common(p)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("opt", help="brute-force verification optimum")
    p.add_argument("--instance", required=True)
    p.add_argument("--values", choices=["truth", "pred"], default="truth")
    p.add_argument("--all", action="store_true")
    _common(p)
    p.set_defaults(func=_cmd_opt)

    p = sub.add_parser("error", help="hop-distance report")
    p.add_argument("--instance", required=True)
    _common(p)
    p.set_defaults(func=_cmd_error)

    p = sub.add_parser("learn", help="train predictions by empirical risk minimization")
    p.add_argument("--instance", required=True)
    p.add_argument("--dist", required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--out")
    _common(p)
    p.set_defaults(func=_cmd_learn)

    p = sub.add_parser("bench", help="run a benchmark config and check every bound")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="basename for .csv/.json report files")
    _common(p)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, CapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
