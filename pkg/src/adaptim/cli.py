"""Experiment driver CLI.

Subcommands: prepare, run-im, run-mintss, bounds-plot, counterexample,
tune, selftest. Every output CSV row carries the hash of a run manifest
(inputs, parameters, tool version) so reruns are verifiable; wall-clock
columns are the only non-deterministic fields.
"""

import argparse
import csv
import io
import json
import os
import sys
import time

import numpy as np

from . import __version__, bounds, graph, mintss, policies, rrsets, tuner
from .exact import exact_expected_spread
from .util import derive_seed, sha256_hex
from .worlds import expected_spread_mc, sample_world, spread

SPEC_REVISION = "1"


def _manifest_hash(payload):
    return sha256_hex(json.dumps(payload, sort_keys=True).encode())[:16]


def _make_manifest(args, graph_path, g, extra=None):
    payload = {
        "graph": os.path.basename(graph_path) if graph_path else None,
        "graph_hash": g.graph_hash() if g is not None else None,
        "master_seed": getattr(args, "seed", None),
        "spec_revision": SPEC_REVISION,
        "tool_version": __version__,
    }
    payload.update(extra or {})
    return payload, _manifest_hash(payload)


def _load_graph(path):
    with open(path) as fh:
        g, _ = graph.load_edge_list(fh.read())
    return g


def _write_csv(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(r)
    data = buf.getvalue()
    if path == "-":
        sys.stdout.write(data)
    else:
        with open(path, "w") as fh:
            fh.write(data)


def _int_list(text):
    return [int(x) for x in text.split(",") if x]


def _float_list(text):
    return [float(x) for x in text.split(",") if x]


def _apply_config_file(args, parser):
    """Flat key=value config file; explicit flags win."""
    if not getattr(args, "config", None):
        return args
    overrides = {}
    with open(args.config) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, val = line.partition("=")
            overrides[key.strip().replace("-", "_")] = val.strip()
    sub = getattr(args, "_parser", parser)
    actions = {a.dest: a for a in list(parser._actions) + list(sub._actions)}
    for key, val in overrides.items():
        act = actions.get(key)
        if act is None or not hasattr(args, key):
            continue
        if getattr(args, key) != act.default:
            continue  # flag was given explicitly
        if isinstance(act.default, bool):
            setattr(args, key, val.lower() in ("1", "true", "yes"))
        elif act.type is not None:
            setattr(args, key, act.type(val))
        else:
            setattr(args, key, val)
    return args


def worker_count():
    env = os.environ.get("ADAPTIM_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# -- subcommands -----------------------------------------------------------


def cmd_prepare(args):
    with open(args.graph) as fh:
        g, label_map = graph.load_edge_list(fh.read())
    if args.weighted_cascade:
        g = graph.assign_weighted_cascade(g)
    with open(args.out, "w") as fh:
        fh.write(graph.write_edge_list(g))
    with open(args.out + ".labels", "w") as fh:
        fh.write(graph.write_label_map(label_map))
    print(f"wrote {args.out}: n={g.n} m={g.m} hash={g.graph_hash()[:16]}")
    return 0


def cmd_run_im(args):
    g = _load_graph(args.graph)
    _, mhash = _make_manifest(args, args.graph, g, {
        "cmd": "run-im", "k_list": args.k_list, "batch": args.batch,
        "regen": args.regen, "epsilon": args.epsilon, "worlds": args.worlds,
        "rr_count": args.rr_count,
    })
    rows = []
    for k in _int_list(args.k_list):
        t0 = time.perf_counter()
        na = policies.PolicySpec(kind="non-adaptive", k=k, epsilon=args.epsilon,
                                 rr_count=args.rr_count)
        na_rep = policies.evaluate(g, na, args.worlds, args.seed)
        na_time = time.perf_counter() - t0

        t0 = time.perf_counter()
        ga = policies.PolicySpec(kind="adaptive", k=k, batch_size=min(args.batch, k),
                                 regen=args.regen, epsilon=args.epsilon,
                                 rr_count=args.rr_count)
        ga_rep = policies.evaluate(g, ga, args.worlds, args.seed,
                                   baseline_f_avg=na_rep.f_avg)
        ga_time = time.perf_counter() - t0

        base = [mhash, os.path.basename(args.graph)]
        rows.append(base + ["non-adaptive", k, k, "none", args.epsilon,
                            f"{na_rep.f_avg:.6f}", f"{na_rep.stderr:.6f}",
                            f"{na_rep.seeds_used_avg:.2f}", "0", "",
                            f"{na_time:.3f}"])
        rows.append(base + ["adaptive", k, min(args.batch, k), args.regen, args.epsilon,
                            f"{ga_rep.f_avg:.6f}", f"{ga_rep.stderr:.6f}",
                            f"{ga_rep.seeds_used_avg:.2f}",
                            f"{ga_rep.rr_regens_avg:.2f}",
                            f"{ga_rep.adaptivity_gain:.6f}",
                            f"{ga_time:.3f}"])
    _write_csv(args.out, ["manifest", "graph", "policy", "k", "b", "regen", "epsilon",
                          "f_avg", "stderr", "seeds_used_avg", "rr_regens_avg",
                          "adaptivity_gain", "wall_time"], rows)
    return 0


def cmd_run_mintss(args):
    g = _load_graph(args.graph)
    _, mhash = _make_manifest(args, args.graph, g, {
        "cmd": "run-mintss", "q_fractions": args.q_fractions,
        "batch_list": args.batch_list, "epsilon": args.epsilon,
        "worlds": args.worlds, "rr_count": args.rr_count, "beta": args.beta,
    })
    rows = []
    for qf in _float_list(args.q_fractions):
        q = max(1.0, qf * g.n)
        spec = mintss.MintssSpec(Q=q, beta=args.beta, epsilon=args.epsilon,
                                 rr_count=args.rr_count)
        t0 = time.perf_counter()
        na = mintss.evaluate_mintss(g, spec, args.worlds, args.seed, policy="non-adaptive")
        na_time = time.perf_counter() - t0
        base = [mhash, os.path.basename(args.graph)]
        rows.append(base + ["non-adaptive", qf, f"{q:.1f}", 0,
                            f"{na.c_avg:.4f}", f"{na.stderr:.4f}",
                            f"{na.hit_rate:.4f}",
                            f"{float(np.mean(na.per_world_shortfall)):.4f}",
                            f"{na_time:.3f}"])
        for b in _int_list(args.batch_list):
            bspec = mintss.MintssSpec(Q=q, beta=args.beta, batch_size=b,
                                      epsilon=args.epsilon, rr_count=args.rr_count)
            t0 = time.perf_counter()
            ad = mintss.evaluate_mintss(g, bspec, args.worlds, args.seed, policy="adaptive")
            ad_time = time.perf_counter() - t0
            rows.append(base + [f"adaptive", qf, f"{q:.1f}", b,
                                f"{ad.c_avg:.4f}", f"{ad.stderr:.4f}",
                                f"{ad.hit_rate:.4f}",
                                f"{float(np.mean(ad.per_world_shortfall)):.4f}",
                                f"{ad_time:.3f}"])
    _write_csv(args.out, ["manifest", "graph", "policy", "q_fraction", "Q", "b",
                          "c_avg", "stderr", "hit_rate", "mean_shortfall",
                          "wall_time"], rows)
    return 0


def cmd_bounds_plot(args):
    lo, hi, steps = [float(x) for x in args.q_range.split(":")]
    if hi <= lo or steps < 1:
        raise SystemExit("invalid --q-range lo:hi:steps")
    qs = np.geomspace(lo, hi, int(steps))
    params = bounds.BoundParams(alpha=args.alpha, epsilon=args.bound_epsilon,
                                beta_GA=args.beta_ga, beta_GNA=args.beta_gna)
    _, mhash = _make_manifest(args, None, None, {"cmd": "bounds-plot", "q_range": args.q_range})
    rows = [[mhash, f"{q:.6f}", f"{ga:.6f}", f"{gna:.6f}"]
            for q, ga, gna in bounds.emit_bound_curves(qs, params)]
    _write_csv(args.out, ["manifest", "Q", "n_ga_over_oa", "n_gna_over_oa"], rows)
    return 0


def cmd_counterexample(args):
    res = bounds.theorem3_counterexample(args.p)
    print(json.dumps(res, indent=2))
    return 0 if res["violates_submodularity"] else 1


def cmd_tune(args):
    g = _load_graph(args.graph)
    stats = graph.depth_bound(g)
    t_max = max(stats.diffusion_depth_bound, 1)
    space = tuner.ConfigSpace(args.complexity, s_max=args.s_max, t_max=t_max)
    budget = tuner.TunerBudget(max_evaluations=args.evals,
                               train_instances=args.train_instances,
                               test_instances=args.test_instances)
    objective = (
        tuner.Objective(problem="im", k=args.k)
        if args.problem == "im"
        else tuner.Objective(problem="mintss", Q=args.q)
    )
    train = [tuner.Instance(derive_seed(args.seed, 1000 + i)) for i in range(budget.train_instances)]
    test = [tuner.Instance(derive_seed(args.seed, 2_000_000 + i)) for i in range(budget.test_instances)]

    def eval_fn(config, instance_id):
        return tuner.evaluate_config(g, config, objective, [train[instance_id]],
                                     args.horizon, args.seed,
                                     rr_count=args.rr_count, epsilon=args.epsilon)

    result = tuner.tune(space, eval_fn, budget, strategy=args.strategy, seed=args.seed,
                        num_instances=len(train))
    row = tuner.report_policy(g, result.best, objective, args.horizon, test, args.seed,
                              rr_count=args.rr_count, epsilon=args.epsilon)
    _, mhash = _make_manifest(args, args.graph, g, {"cmd": "tune", "problem": args.problem})
    _write_csv(args.out, ["manifest", "T", "shortfall", "seeds", "objective", "pairs"],
               [[mhash, row["T"], f"{row['shortfall']:.4f}", f"{row['seeds']:.4f}",
                 f"{row['objective']:.4f}",
                 ";".join(f"{s},{t}" for s, t in row["pairs"])]])
    if args.log:
        with open(args.log, "w") as fh:
            for i, rec in enumerate(result.history):
                fh.write(json.dumps({
                    "iteration": i,
                    "config": list(rec.config.flat()),
                    "objective": rec.objective,
                    "incumbent": rec.incumbent if rec.incumbent != float("inf") else None,
                }) + "\n")
    return 0


def cmd_selftest(args):
    """Small-instance oracle checks, end to end."""
    failures = []

    def check(name, ok):
        print(f"{'PASS' if ok else 'FAIL'} {name}")
        if not ok:
            failures.append(name)

    g, _ = graph.load_edge_list("0 1 0.5\n1 2 0.5\n0 2 0.3\n")
    w = sample_world(g, 7)
    check("diffusion deterministic", spread(w, [0]) == spread(sample_world(g, 7), [0]))

    est = expected_spread_mc(g, [0], None, 4000, 11)
    exact = exact_expected_spread(g, [0])
    check("mc matches enumeration", abs(est.mean - exact) <= 4 * max(est.stderr, 1e-9))

    idx = rrsets.build_index(g, 4000, 3)
    check("rr transpose", idx.check_transpose())
    check("rr estimate near truth", abs(rrsets.estimate_spread(idx, [0]) - exact) < 0.4)

    res = bounds.theorem3_counterexample(0.5)
    check("counterexample", res["violates_submodularity"] and res["sigma_S"] == 2.5)

    if args.graph:
        try:
            _load_graph(args.graph)
            check("graph ingestion", True)
        except (graph.GraphFormatError, ValueError) as e:
            print(f"FAIL graph ingestion: {e}")
            failures.append("graph ingestion")

    print(f"{'OK' if not failures else 'FAILED'}: {len(failures)} failure(s)")
    return 0 if not failures else 1


def build_parser():
    ap = argparse.ArgumentParser(prog="adaptim")
    ap.add_argument("--config", help="flat key=value config file; flags win")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("prepare", help="ingest an edge list, optionally assign weighted-cascade probabilities")
    p.add_argument("graph")
    p.add_argument("--weighted-cascade", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_prepare, _parser=p)

    p = sub.add_parser("run-im", help="IM sweep: adaptive vs non-adaptive over k")
    p.add_argument("graph")
    p.add_argument("--k-list", default="1,10,20,50,100")
    p.add_argument("--batch", type=int, default=1)
    p.add_argument("--regen", choices=["full", "lazy"], default="lazy")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--worlds", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rr-count", type=int, default=None)
    p.add_argument("--out", default="-")
    p.set_defaults(fn=cmd_run_im, _parser=p)

    p = sub.add_parser("run-mintss", help="MINTSS sweep over target fractions and batch sizes")
    p.add_argument("graph")
    p.add_argument("--q-fractions", default="0.05,0.1,0.2,0.3")
    p.add_argument("--batch-list", default="1,10,50,100")
    p.add_argument("--epsilon", type=float, default=0.2)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--worlds", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rr-count", type=int, default=None)
    p.add_argument("--out", default="-")
    p.set_defaults(fn=cmd_run_mintss, _parser=p)

    p = sub.add_parser("bounds-plot", help="tabulate the adaptive vs non-adaptive seed-count bound curves")
    p.add_argument("--q-range", default="10:1000:50", help="lo:hi:steps (geometric)")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--bound-epsilon", type=float, default=0.0)
    p.add_argument("--beta-ga", type=float, default=3.0)
    p.add_argument("--beta-gna", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(fn=cmd_bounds_plot, _parser=p)

    p = sub.add_parser("counterexample", help="check the incomplete-diffusion submodularity counterexample")
    p.add_argument("--p", type=float, default=0.5)
    p.set_defaults(fn=cmd_counterexample, _parser=p)

    p = sub.add_parser("tune", help="SMBO search for a bounded-horizon intervention schedule")
    p.add_argument("graph")
    p.add_argument("--problem", choices=["im", "mintss"], default="mintss")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--q", type=float, default=10.0)
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--complexity", type=int, default=1)
    p.add_argument("--s-max", type=int, default=100)
    p.add_argument("--evals", type=int, default=500)
    p.add_argument("--train-instances", type=int, default=1000)
    p.add_argument("--test-instances", type=int, default=50)
    p.add_argument("--strategy", choices=["smbo", "random-search"], default="smbo")
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--rr-count", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.add_argument("--log", default=None)
    p.set_defaults(fn=cmd_tune, _parser=p)

    p = sub.add_parser("selftest", help="run the small-instance oracle suite")
    p.add_argument("--graph", default=None)
    p.set_defaults(fn=cmd_selftest, _parser=p)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    args = _apply_config_file(args, ap)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
