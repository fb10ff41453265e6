"""Command line entry point: ``partialrank <subcommand> [options]``.

Every command writes ``config.json`` (the resolved options, including the
seed) next to its outputs.  Exit status is 0 on success, 2 for invalid
input and 3 for numerical failures.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import io
from .exceptions import NumericalError, ValidationError
from .experiments import (
    MetricsReport,
    bar_chart_svg,
    kendall_tau,
    loglog_slope,
    mixture_trial,
    parse_trim,
    scaling_trial,
    single_evaluation,
    single_mnl_trial,
)
from .likelihood import PreferenceBatch, exact_partial_log_prob, numgrb_log_likelihood_and_grad
from .models import FreeUtilityModel, LinearUtilityModel, MixtureModel, match_components, softmax_mse
from .netform.choice import fit_network_mixture, parse_components
from .netform.evaluation import precision_at_k, sample_negatives
from .netform.growth import GrowthConfig, grow_network
from .netform.ingest import events_from_edges
from .netform.linear import fit_linear_choice, linear_scorer
from .poset import build_partial_ranking, decompose
from .quadrature import QuadratureRule
from .simulate import simulate_rankings
from .training import OptimizerConfig, em_fit, fit_single_mnl

log = logging.getLogger("partialrank")

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3

COMMON_DEFAULTS = {
    "seed": 0, "out": "out", "quad_nodes": 128, "lr": 0.5, "steps": 200, "k": 3,
    "em_iters": 20, "trim": None, "config": None,
}

COMMAND_DEFAULTS = {
    "simulate-rankings": {"n_items": 20, "n_rankings": 5000, "p": 0.25, "k": 1},
    "simulate-network": {"r": 0.5, "p": 0.5, "alpha": 1.0, "nodes": 1000, "edge_prob": 0.005},
    "fit-mnl": {"data": None, "truth": None, "n_items": 20, "n_rankings": 5000, "p": 0.25,
                "seeds": 1},
    "fit-mixture": {"data": None, "truth": None, "n_items": 20, "n_rankings": 5000, "p": 0.5,
                    "seeds": 1, "init": "cluster", "m_steps": 50},
    "fit-netform": {"edges": None, "events": None, "components": "ua,pa,ua-fof,pa-fof",
                    "model": "mixture", "features": "log_degree,has_degree", "naive": False,
                    "r": 0.5, "p": 0.5, "seeds": 1, "m_steps": 50, "alpha0": 0.5,
                    "node_features": None, "start": None, "end": None, "window": None,
                    "em_iters": 30},
    "bench-scaling": {"grid": "50,100,200,400", "n_rankings": 100, "p": 0.25, "steps": 5,
                      "stability_n": 1000},
    "eval-linkpred": {"checkpoint": None, "edges": None, "events": None, "ks": "1,3,5",
                      "negatives": None, "node_features": None, "svg": False},
    "oracle-check": {"instances": 100, "max_items": 7},
}


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("common")
    g.add_argument("--seed", type=int, help="root seed (default 0)")
    g.add_argument("--config", help="JSON file of option values; command-line flags win")
    g.add_argument("--out", help="output directory (default ./out)")
    g.add_argument("--quad-nodes", type=int, dest="quad_nodes", help="Gauss-Legendre nodes (default 128)")
    g.add_argument("--lr", type=float, help="AdaGrad learning rate (default 0.5)")
    g.add_argument("--steps", type=int, help="optimizer steps (default 200)")
    g.add_argument("--k", type=int, help="mixture components")
    g.add_argument("--em-iters", type=int, dest="em_iters", help="EM rounds")
    g.add_argument("--trim", help="drop the worst rows from the aggregate, e.g. 10of50")
    g.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="partialrank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate-rankings", help="sample posets from a (mixture of) MNL")
    p.add_argument("--n-items", type=int, dest="n_items")
    p.add_argument("--n-rankings", type=int, dest="n_rankings")
    p.add_argument("--p", type=float, help="probability of keeping each pairwise comparison")

    p = sub.add_parser("simulate-network", help="grow a synthetic network from the UA/PA mixture")
    p.add_argument("--r", type=float, help="probability of the global candidate set")
    p.add_argument("--p", type=float, help="probability of uniform attachment")
    p.add_argument("--alpha", type=float)
    p.add_argument("--nodes", type=int)
    p.add_argument("--edge-prob", type=float, dest="edge_prob")

    for name, text in (("fit-mnl", "fit a single MNL"), ("fit-mixture", "fit a mixture of MNL by EM")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--data", help="rankings JSONL; omitted = simulate one dataset per seed")
        p.add_argument("--truth", help="ground-truth model JSON for scoring")
        p.add_argument("--n-items", type=int, dest="n_items")
        p.add_argument("--n-rankings", type=int, dest="n_rankings")
        p.add_argument("--p", type=float)
        p.add_argument("--seeds", type=int, help="number of simulated trials")
        if name == "fit-mixture":
            p.add_argument("--init", choices=["cluster", "random"])
            p.add_argument("--m-steps", type=int, dest="m_steps")

    p = sub.add_parser("fit-netform", help="fit attachment mixtures or linear choice models")
    p.add_argument("--edges", help="edge list CSV (src,dst[,timestamp])")
    p.add_argument("--events", help="event JSONL; omitted = ingest from --edges or simulate")
    p.add_argument("--components", help="comma list of ua,pa,ua-fof,pa-fof")
    p.add_argument("--model", choices=["mixture", "linear"])
    p.add_argument("--features", help="feature columns for --model linear")
    p.add_argument("--naive", action="store_const", const=True, help="independent top-one likelihood")
    p.add_argument("--r", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--seeds", type=int)
    p.add_argument("--m-steps", type=int, dest="m_steps")
    p.add_argument("--alpha0", type=float)
    p.add_argument("--node-features", dest="node_features")
    p.add_argument("--start", type=int, help="ingestion: first timestamp of the event period")
    p.add_argument("--end", type=int, help="ingestion: end of the event period (exclusive)")
    p.add_argument("--window", type=int, help="ingestion: tier width in timestamp units")

    p = sub.add_parser("bench-scaling", help="runtime against the number of items")
    p.add_argument("--grid", help="comma list of item counts")
    p.add_argument("--n-rankings", type=int, dest="n_rankings")
    p.add_argument("--p", type=float)
    p.add_argument("--stability-n", type=int, dest="stability_n")

    p = sub.add_parser("eval-linkpred", help="precision@k of a checkpoint on events with negatives")
    p.add_argument("--checkpoint")
    p.add_argument("--edges")
    p.add_argument("--events")
    p.add_argument("--ks")
    p.add_argument("--negatives", type=int, help="sample this many negatives when events lack them")
    p.add_argument("--node-features", dest="node_features")
    p.add_argument("--svg", action="store_const", const=True, help="also write a bar chart")

    p = sub.add_parser("oracle-check", help="compare the integral likelihood with brute force")
    p.add_argument("--instances", type=int)
    p.add_argument("--max-items", type=int, dest="max_items")

    for action in sub.choices.values():
        _common(action)
    return parser


def resolve(args: argparse.Namespace) -> dict:
    """Merge built-in defaults, the ``--config`` file and explicit flags (in rising priority)."""
    cfg = dict(COMMON_DEFAULTS)
    cfg.update(COMMAND_DEFAULTS[args.command])
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise ValidationError("config must be a JSON object")
        unknown = set(loaded) - set(cfg) - {"command"}
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        cfg.update({k: v for k, v in loaded.items() if k != "command"})
    for k, v in vars(args).items():
        if v is not None and k not in ("command", "verbose"):
            cfg[k] = v
    cfg["command"] = args.command
    return cfg


def trial_seeds(root: int, count: int) -> list:
    """Independent per-trial seeds derived from the root seed and the trial counter."""
    return [int(np.random.SeedSequence([int(root), i]).generate_state(1)[0]) for i in range(count)]


def _quad(cfg) -> QuadratureRule:
    return QuadratureRule(int(cfg["quad_nodes"]))


def _opt(cfg, steps=None) -> OptimizerConfig:
    return OptimizerConfig(learning_rate=float(cfg["lr"]), max_steps=int(steps or cfg["steps"]))


def _outdir(cfg) -> Path:
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    io.write_json(out / "config.json", cfg)
    return out


def _write_report(out: Path, report: MetricsReport, trim=None) -> dict:
    cols, rows = report.table()
    io.write_csv(out / "metrics.csv", cols, rows)
    agg = report.aggregate(trim)
    io.write_json(out / "summary.json", agg)
    return agg


def _truth_utilities(path, k):
    doc = io.read_checkpoint(path)
    model = io.checkpoint_model(doc)
    if isinstance(model, MixtureModel):
        return np.stack([c.params for c in model.components])
    return np.atleast_2d(model.params)


# -- commands ---------------------------------------------------------------


def cmd_simulate_rankings(cfg) -> int:
    out = _outdir(cfg)
    k = int(cfg["k"])
    sample = simulate_rankings(int(cfg["n_items"]), int(cfg["n_rankings"]), float(cfg["p"]),
                               n_components=k, seed=int(cfg["seed"]))
    io.write_rankings(out / "rankings.jsonl", sample.rankings,
                      [{"component": int(c)} for c in sample.labels])
    if k == 1:
        io.write_checkpoint(out / "truth.json", "free", {"params": sample.utilities[0].tolist()},
                            cfg["seed"], cfg)
    else:
        mix = MixtureModel(sample.weights, [FreeUtilityModel(u) for u in sample.utilities])
        d = mix.to_dict()
        io.write_checkpoint(out / "truth.json", "mixture", {k_: v for k_, v in d.items() if k_ != "kind"},
                            cfg["seed"], cfg)
    print(f"wrote {len(sample.rankings)} rankings to {out / 'rankings.jsonl'}")
    return EXIT_OK


def cmd_simulate_network(cfg) -> int:
    out = _outdir(cfg)
    gcfg = GrowthConfig(r=float(cfg["r"]), p=float(cfg["p"]), alpha=float(cfg["alpha"]),
                        init_nodes=int(cfg["nodes"]), init_edge_prob=float(cfg["edge_prob"]),
                        seed=int(cfg["seed"]))
    g, events = grow_network(gcfg)
    io.write_edges(out / "edges.csv", g)
    io.write_events(out / "events.jsonl", events)
    io.write_json(out / "growth.json", gcfg.to_dict())
    print(f"wrote {g.n_edges} seed edges and {len(events)} events to {out}")
    return EXIT_OK


def cmd_fit_mnl(cfg) -> int:
    out = _outdir(cfg)
    quad, opt = _quad(cfg), _opt(cfg)
    report = MetricsReport(metric="mse" if cfg["truth"] or not cfg["data"] else "loss")
    if cfg["data"]:
        rankings = io.read_rankings(cfg["data"])
        n_items = 1 + max((max(r.items) for r in rankings if r.items), default=-1)
        truth = _truth_utilities(cfg["truth"], 1)[0] if cfg["truth"] else None
        if truth is not None:
            n_items = max(n_items, truth.size)
        start = time.perf_counter()
        fit = fit_single_mnl(PreferenceBatch.from_rankings(rankings, n_items), None, opt, quad)
        ms = 1000.0 * (time.perf_counter() - start)
        row = {"seed": cfg["seed"], "loss": fit.loss_trace[-1], "steps": len(fit.loss_trace) - 1,
               "converged": fit.converged, "ms": ms}
        if truth is not None:
            row["mse"] = softmax_mse(fit.model.params, truth)
            row["tau"] = kendall_tau(fit.model.params, truth)
        report.add(**row)
        io.write_checkpoint(out / "checkpoint.json", "free", {"params": fit.model.params.tolist()},
                            cfg["seed"], cfg)
        io.write_csv(out / "trace.csv", ["iteration", "loss"], list(enumerate(fit.loss_trace)))
    else:
        for s in trial_seeds(int(cfg["seed"]), int(cfg["seeds"])):
            report.add(**single_mnl_trial(int(cfg["n_items"]), int(cfg["n_rankings"]), float(cfg["p"]),
                                          s, quad, opt))
    agg = _write_report(out, report, cfg["trim"])
    print(json.dumps(agg))
    return EXIT_OK


def cmd_fit_mixture(cfg) -> int:
    out = _outdir(cfg)
    quad, opt = _quad(cfg), _opt(cfg)
    k, B = int(cfg["k"]), int(cfg["em_iters"])
    report = MetricsReport(metric="mse" if cfg["truth"] or not cfg["data"] else "loglik")
    if cfg["data"]:
        rankings = io.read_rankings(cfg["data"])
        n_items = 1 + max((max(r.items) for r in rankings if r.items), default=-1)
        truth = _truth_utilities(cfg["truth"], k) if cfg["truth"] else None
        if truth is not None:
            n_items = max(n_items, truth.shape[1])
        res = em_fit(rankings, k, B, opt, quad, int(cfg["seed"]), init=cfg["init"],
                     m_steps=int(cfg["m_steps"]), n_items=n_items)
        row = {"seed": cfg["seed"], "loglik": res.state.loglik_trace[-1], "degenerate": res.degenerate,
               "inexact_m_steps": res.inexact_m_steps}
        if truth is not None:
            _, row["mse"] = match_components([c.params for c in res.mixture.components], truth)
        report.add(**row)
        d = res.mixture.to_dict()
        io.write_checkpoint(out / "checkpoint.json", "mixture", {k_: v for k_, v in d.items() if k_ != "kind"},
                            cfg["seed"], cfg)
        io.write_trace(out / "trace.csv", [{**r, "loss": -r["loglik"]} for r in res.trace_rows], k)
    else:
        for s in trial_seeds(int(cfg["seed"]), int(cfg["seeds"])):
            report.add(**mixture_trial(int(cfg["n_items"]), int(cfg["n_rankings"]), float(cfg["p"]), k, s,
                                       init=cfg["init"], B=B, m_steps=int(cfg["m_steps"]), quad=quad,
                                       opt=opt))
    agg = _write_report(out, report, cfg["trim"])
    print(json.dumps(agg))
    return EXIT_OK


def _load_graph_events(cfg):
    """Seed graph and events from files, ingestion, or (neither given) nothing."""
    if not cfg["edges"]:
        return None, None
    events = io.read_events(cfg["events"]) if cfg.get("events") else None
    mentioned = set()
    for ev in events or ():
        mentioned.add(ev.source)
        mentioned.update(ev.chosen)
        mentioned.update(ev.negatives or ())
    edges, labels = io.read_edges(cfg["edges"], mentioned)
    feats = io.read_node_features(cfg["node_features"], labels) if cfg.get("node_features") else None
    if events is not None:
        return io.graph_from_edges(edges, len(labels), feats, labels), events
    if cfg.get("window") is None or cfg.get("start") is None:
        raise ValidationError("give --events, or --start/--window to ingest events from timestamps")
    if any(t is None for _, _, t in edges):
        raise ValidationError("ingestion needs a timestamp on every edge")
    end = cfg["end"] if cfg.get("end") is not None else max(t for _, _, t in edges) + 1
    return events_from_edges(edges, len(labels), cfg["start"], end, cfg["window"], features=feats)


def cmd_fit_netform(cfg) -> int:
    out = _outdir(cfg)
    quad, opt = _quad(cfg), _opt(cfg)
    report = MetricsReport(metric="alpha")
    g, events = _load_graph_events(cfg)
    if cfg["model"] == "linear":
        if g is None:
            raise ValidationError("--model linear needs --edges")
        features = [f for f in cfg["features"].split(",") if f]
        fit = fit_linear_choice(g, events, features, opt, quad)
        row = {"seed": cfg["seed"], "loss": fit.loss_trace[-1], "steps": len(fit.loss_trace) - 1}
        row.update({f"coef_{n}": float(c) for n, c in zip(fit.model.feature_names, fit.model.coeffs)})
        report.add(**row)
        io.write_checkpoint(out / "checkpoint.json", "linear",
                            {"coeffs": dict(zip(features, fit.model.coeffs.tolist())), "constant": False},
                            cfg["seed"], cfg)
        io.write_csv(out / "trace.csv", ["iteration", "loss"], list(enumerate(fit.loss_trace)))
        _write_report(out, report)
        print(json.dumps(row))
        return EXIT_OK

    specs = parse_components(cfg["components"])
    datasets = []
    if g is not None:
        datasets.append((cfg["seed"], g, events, None))
    else:
        for s in trial_seeds(int(cfg["seed"]), int(cfg["seeds"])):
            gcfg = GrowthConfig(r=float(cfg["r"]), p=float(cfg["p"]), seed=s)
            g_s, ev_s = grow_network(gcfg)
            datasets.append((s, g_s, ev_s, gcfg))
    last = None
    for s, g_s, ev_s, gcfg in datasets:
        start = time.perf_counter()
        res = fit_network_mixture(ev_s, g_s, specs, B=int(cfg["em_iters"]), m_steps=int(cfg["m_steps"]),
                                  alpha0=float(cfg["alpha0"]), opt=opt, quad=quad, naive=bool(cfg["naive"]))
        row = {"seed": s, "alpha": res.alpha, "loglik": res.loglik_trace[-1], "degenerate": res.degenerate,
               "ms": 1000.0 * (time.perf_counter() - start)}
        row.update({f"w_{sp.name}": float(w) for sp, w in zip(specs, res.weights)})
        if gcfg is not None:
            row.update({f"true_{n}": float(w) for n, w in
                        zip(("ua", "pa", "ua-fof", "pa-fof"), gcfg.component_weights)})
        report.add(**row)
        last = res
    bindings = {}
    for r, sp in enumerate(specs):
        if sp.has_parameter:
            bindings.setdefault(sp.binding, []).append([r, sp.binding])
    io.write_checkpoint(out / "checkpoint.json", "netform",
                        {"weights": last.weights.tolist(), "components": [sp.name for sp in specs],
                         "shared_bindings": bindings, "params": last.params}, cfg["seed"], cfg)
    io.write_trace(out / "trace.csv", [{**r, "loss": -r["loglik"]} for r in last.trace_rows], len(specs))
    agg = _write_report(out, report, cfg["trim"])
    print(json.dumps(agg))
    return EXIT_OK


def cmd_bench_scaling(cfg) -> int:
    out = _outdir(cfg)
    quad = _quad(cfg)
    grid = [int(x) for x in str(cfg["grid"]).split(",") if x]
    if len(grid) < 2:
        raise ValidationError("the grid needs at least two sizes")
    report = MetricsReport(metric="ms")
    scaling_trial(min(grid), 10, float(cfg["p"]), int(cfg["seed"]), quad, 1)  # warm caches
    for n_items in grid:
        report.add(**scaling_trial(n_items, int(cfg["n_rankings"]), float(cfg["p"]), int(cfg["seed"]),
                                   quad, int(cfg["steps"])))
    agg = _write_report(out, report)
    agg["loglog_slope"] = loglog_slope([r["N"] for r in report.rows], [r["ms"] for r in report.rows])
    if cfg["stability_n"]:
        stab = single_evaluation(int(cfg["stability_n"]), float(cfg["p"]), int(cfg["seed"]), quad)
        agg["stability"] = stab
        if not stab["finite"]:
            raise NumericalError(f"non-finite evaluation at N={cfg['stability_n']}")
    io.write_json(out / "summary.json", agg)
    print(json.dumps(agg))
    return EXIT_OK


def _scorer(doc, g):
    kind = doc["kind"]
    if kind == "oracle":
        return lambda ev, cand: np.isin(cand, ev.chosen).astype(float)
    if kind == "uniform":
        return lambda ev, cand: np.zeros(len(cand))
    if kind == "linear":
        coeffs = doc.get("coeffs", {})
        model = LinearUtilityModel(tuple(coeffs), list(coeffs.values()), doc.get("constant", False))
        return linear_scorer(model, g)
    if kind == "free":
        table = np.asarray(doc["params"], dtype=float)
        if table.size != g.n_nodes:
            raise ValidationError("free checkpoint needs one utility per node")
        return lambda ev, cand: table[cand]
    if kind == "netform":
        alpha = float(doc.get("params", {}).get("alpha", 1.0))
        d = g.in_degree().astype(float)
        table = np.where(d > 0, alpha * np.log(np.where(d > 0, d, 1.0)), -np.inf)
        return lambda ev, cand: table[cand]
    raise ValidationError(f"cannot score with checkpoint kind {kind!r}")


def cmd_eval_linkpred(cfg) -> int:
    out = _outdir(cfg)
    if not cfg["checkpoint"] or not cfg["edges"] or not cfg["events"]:
        raise ValidationError("eval-linkpred needs --checkpoint, --edges and --events")
    g, events = _load_graph_events(cfg)
    if any(ev.negatives is None for ev in events):
        if cfg["negatives"] is None:
            raise ValidationError("events lack negative samples; pass --negatives COUNT")
        events = sample_negatives(g, events, int(cfg["negatives"]), int(cfg["seed"]))
        io.write_events(out / "events_with_negatives.jsonl", events)
    ks = [int(k) for k in str(cfg["ks"]).split(",") if k]
    prec = precision_at_k(_scorer(io.read_checkpoint(cfg["checkpoint"]), g), events, ks)
    io.write_csv(out / "precision.csv", ["k", "precision"], [[k, prec[k]] for k in ks])
    if cfg["svg"]:
        (out / "precision.svg").write_text(
            bar_chart_svg([f"@{k}" for k in ks], [prec[k] for k in ks], "precision@k"), encoding="utf-8")
    print(json.dumps({str(k): v for k, v in prec.items()}))
    return EXIT_OK


def cmd_oracle_check(cfg) -> int:
    out = _outdir(cfg)
    rng = np.random.default_rng(int(cfg["seed"]))
    quad = _quad(cfg)
    report = MetricsReport(metric="rel_gap")
    for j in range(int(cfg["instances"])):
        n = int(rng.integers(2, int(cfg["max_items"]) + 1))
        order = rng.permutation(n)
        hi, lo = np.triu_indices(n, 1)
        keep = rng.random(hi.size) < 0.4
        pr = build_partial_ranking(range(n), zip(order[hi[keep]].tolist(), order[lo[keep]].tolist()))
        w = rng.uniform(-2, 2, n)
        exact = exact_partial_log_prob(pr, w)
        approx, _ = numgrb_log_likelihood_and_grad(pr, w, quad)
        blocks = decompose(pr)
        report.add(instance=j, n_items=n, exact=exact, numgrb=approx,
                   rel_gap=float(np.expm1(approx - exact)), upper_bound=bool(approx >= exact - 1e-9),
                   n_blocks=sum(b.M for b in blocks))
    agg = _write_report(out, report)
    agg["all_upper_bound"] = all(r["upper_bound"] for r in report.rows)
    io.write_json(out / "summary.json", agg)
    print(json.dumps(agg))
    return EXIT_OK if agg["all_upper_bound"] else EXIT_NUMERICAL


COMMANDS = {
    "simulate-rankings": cmd_simulate_rankings,
    "simulate-network": cmd_simulate_network,
    "fit-mnl": cmd_fit_mnl,
    "fit-mixture": cmd_fit_mixture,
    "fit-netform": cmd_fit_netform,
    "bench-scaling": cmd_bench_scaling,
    "eval-linkpred": cmd_eval_linkpred,
    "oracle-check": cmd_oracle_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve(args)
        if cfg["trim"] is not None:
            parse_trim(cfg["trim"])
        return COMMANDS[args.command](cfg)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
