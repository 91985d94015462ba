"""
Command-line entry point.

Subcommands: generate, select, train, evaluate, pipeline. Options may also
come from a flat ``key=value`` file given with ``--config``; flags on the
command line take precedence. Every written file gets a line in
``manifest.txt`` next to it recording the resolved configuration.
"""
import argparse
import json
import os
import sys
from dataclasses import asdict, replace

import numpy as np

from . import ard, evaluation, mlp, pca, sof, synthdata

CYLINDER_DEFAULT_ROUTE = "sof"
GEAR_DEFAULT_ROUTE = "time256"


def _int_list(text):
    try:
        return tuple(int(t) for t in str(text).split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _add_common(p):
    p.add_argument("--config", help="flat key=value file; flags override it")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--n-hidden", type=int, default=None)
    p.add_argument("--ard-cycles", type=int, default=None)
    p.add_argument("--ard-iters", type=int, default=None)
    p.add_argument("--alpha-init", type=float, default=None)
    p.add_argument("--ard-rank", choices=(ard.RANK_VARIANCE, ard.RANK_MAGNITUDE), default=None)
    p.add_argument("--cold-start", action="store_true", default=None,
                   help="restart ARD weights from the initial draw every cycle")


def _add_generator(p):
    p.add_argument("--severity-gain", type=float, default=None)
    p.add_argument("--noise-std", type=float, default=None)
    p.add_argument("--revs-per-class", type=int, default=None)
    p.add_argument("--mesh-order", type=int, default=None)


def build_parser():
    parser = argparse.ArgumentParser(prog="ardpca", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic dataset CSV")
    g.add_argument("--dataset", choices=("cylinder", "gear"), default=None)
    g.add_argument("--out", default=None)
    _add_common(g)
    _add_generator(g)

    s = sub.add_parser("select", help="reduce a dataset to k inputs")
    s.add_argument("--in", dest="inp", default=None)
    s.add_argument("--out", default=None)
    s.add_argument("--method", choices=("pca", "ard", "sof"), default=None)
    s.add_argument("--k", default=None)
    s.add_argument("--route", choices=evaluation.ROUTES + ("none",), default=None)
    s.add_argument("--model-out", default=None,
                   help="also write the fitted PCA model or ARD state CSV")
    _add_common(s)

    t = sub.add_parser("train", help="train a classifier MLP on a dataset")
    t.add_argument("--in", dest="inp", default=None)
    t.add_argument("--out", default=None)
    t.add_argument("--alpha", type=float, default=None)
    t.add_argument("--iters", type=int, default=None)
    _add_common(t)

    e = sub.add_parser("evaluate", help="score a trained network on a dataset")
    e.add_argument("--net", default=None)
    e.add_argument("--in", dest="inp", default=None)
    e.add_argument("--out", default=None)
    _add_common(e)

    pl = sub.add_parser("pipeline", help="full PCA versus ARD comparison")
    pl.add_argument("--dataset", default=None, help="cylinder, gear or a dataset CSV path")
    pl.add_argument("--route", choices=evaluation.ROUTES, default=None)
    pl.add_argument("--method", choices=("pca", "ard", "both"), default=None)
    pl.add_argument("--k", default=None)
    pl.add_argument("--seeds", default=None)
    pl.add_argument("--data-seed", type=int, default=None)
    pl.add_argument("--train-frac", type=float, default=None)
    pl.add_argument("--out-dir", default=None)
    pl.add_argument("--per-k-ard", action="store_true", default=None,
                    help="re-run ARD on the survivors for each smaller k")
    _add_common(pl)
    _add_generator(pl)
    return parser


def read_config(path):
    """Parse a flat ``key=value`` file; '#' starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def resolve(args, parser, sub_parser_name):
    """Merge config-file values under command-line flags."""
    values = {k: v for k, v in vars(args).items() if v is not None}
    if args.config:
        known = set(vars(args))
        for key, raw in read_config(args.config).items():
            if key == "in":
                key = "inp"
            if key not in known:
                raise ValueError(f"unknown config key {key!r}")
            if key not in values:
                values[key] = _coerce(parser, sub_parser_name, key, raw)
    return values


def _coerce(parser, sub_name, key, raw):
    sub = parser._subparsers._group_actions[0].choices[sub_name]
    for action in sub._actions:
        if action.dest == key:
            if isinstance(action, argparse._StoreTrueAction):
                return raw.lower() in ("1", "true", "yes", "on")
            if action.type is not None:
                return action.type(raw)
            if action.choices and raw not in action.choices:
                raise ValueError(f"invalid value {raw!r} for {key}")
            return raw
    return raw


def _parse_k(values, default=None):
    raw = values.get("k", default)
    if raw is None:
        raise ValueError("invalid k: --k is required")
    try:
        ks = _int_list(raw)
    except argparse.ArgumentTypeError:
        raise ValueError(f"invalid k: {raw!r}") from None
    if not ks or min(ks) < 1:
        raise ValueError(f"invalid k: {raw!r}")
    return ks


def _ard_options(values):
    opts = ard.ArdOptions()
    changes = {}
    if "ard_cycles" in values:
        changes["cycles"] = values["ard_cycles"]
    if "ard_iters" in values:
        changes["iters_per_cycle"] = values["ard_iters"]
    if "alpha_init" in values:
        changes["alpha_init"] = values["alpha_init"]
    if "ard_rank" in values:
        changes["rank_by"] = values["ard_rank"]
    if values.get("cold_start"):
        changes["warm_start"] = False
    return replace(opts, **changes)


def _gear_params(values):
    mapping = {"severity_gain": "severity_gain", "noise_std": "noise_std",
               "revs_per_class": "revs_per_class", "mesh_order": "mesh_order"}
    return replace(synthdata.GearGenParams(),
                   **{f: values[k] for k, f in mapping.items() if k in values})


def _cylinder_params(values):
    changes = {"noise_std": values["noise_std"]} if "noise_std" in values else {}
    return replace(synthdata.CylinderGenParams(), **changes)


def write_manifest(path, config):
    """Record (or replace) the configuration line for `path`."""
    directory = os.path.dirname(os.path.abspath(path))
    manifest = os.path.join(directory, "manifest.txt")
    name = os.path.basename(path)
    entries = {}
    if os.path.exists(manifest):
        with open(manifest) as fh:
            for line in fh:
                if "\t" in line:
                    key, rest = line.rstrip("\n").split("\t", 1)
                    entries[key] = rest
    entries[name] = json.dumps(config, sort_keys=True, default=_jsonable)
    with open(manifest, "w") as fh:
        for key in sorted(entries):
            fh.write(f"{key}\t{entries[key]}\n")


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if hasattr(obj, "__dataclass_fields__"):
        return asdict(obj)
    return str(obj)


def _require(values, *keys):
    for key in keys:
        if key not in values:
            flag = "--in" if key == "inp" else "--" + key.replace("_", "-")
            raise ValueError(f"missing required option {flag}")


def cmd_generate(values):
    _require(values, "dataset", "out")
    seed = values.get("seed", 0)
    if values["dataset"] == "gear":
        params = _gear_params(values)
        ds = synthdata.generate_gear(params, seed)
    else:
        params = _cylinder_params(values)
        ds = synthdata.generate_cylinder(params, seed)
    synthdata.save_csv(ds, values["out"])
    write_manifest(values["out"], {"command": "generate", "dataset": values["dataset"],
                                   "seed": seed, "params": params})


def _route_for(ds, values):
    route = values.get("route")
    if route is None:
        return "none"
    return route


def cmd_select(values):
    _require(values, "inp", "out", "method")
    ks = _parse_k(values)
    if len(ks) != 1:
        raise ValueError("invalid k: select takes a single k")
    k = ks[0]
    ds = synthdata.load_csv(values["inp"])
    route = _route_for(ds, values)
    x = ds.inputs if route in ("none", "sof") else evaluation.route_transform(ds.inputs, route)
    if k > x.shape[1]:
        raise ValueError(f"invalid k: {k} exceeds input dimension {x.shape[1]}")
    method = values["method"]
    seed = values.get("seed", 0)
    model_out = values.get("model_out")
    if method == "sof" or route == "sof":
        healthy, damaged = sof.split_populations(x, ds.labels)
        n_keep = k if method == "sof" else min(sof.DEFAULT_K, x.shape[1])
        cols = sof.rank_by_sof(healthy, damaged, n_keep).selected
        x = x[:, cols]
    if method == "pca":
        model = pca.fit_pca(x, k)
        out = pca.project(model, x)
        if model_out:
            pca.save_pca_csv(model, model_out)
    elif method == "ard":
        stats = evaluation.normalize_fit(x)
        xn = evaluation.normalize_apply(x, *stats)
        kind = mlp.LINEAR if ds.n_labels == 1 else mlp.LOGISTIC
        layout = mlp.Layout(x.shape[1], values.get("n_hidden", 8), ds.n_labels, kind)
        _, state = ard.ard_train(xn, ds.labels, layout, _ard_options(values), seed)
        out = ard.select_inputs(x, state.relevance, k)
        if model_out:
            ard.save_ard_csv(state, model_out)
    else:
        out = x
    result = ds.with_inputs(out, f"{ds.name}-{method}{k}")
    synthdata.save_csv(result, values["out"])
    config = {"command": "select", "in": values["inp"], "method": method, "k": k,
              "route": route, "seed": seed, "ard": _ard_options(values)}
    write_manifest(values["out"], config)
    if model_out:
        write_manifest(model_out, config)


def cmd_train(values):
    _require(values, "inp", "out")
    ds = synthdata.load_csv(values["inp"])
    seed = values.get("seed", 0)
    stats = evaluation.normalize_fit(ds.inputs)
    x = evaluation.normalize_apply(ds.inputs, *stats)
    kind = mlp.LINEAR if ds.n_labels == 1 else mlp.LOGISTIC
    layout = mlp.Layout(ds.d, values.get("n_hidden", 8), ds.n_labels, kind)
    alpha = values.get("alpha", 0.01)
    iters = values.get("iters", 200)
    net = evaluation.train_classifier(x, ds.labels, layout, alpha, iters, seed)
    # fold the input standardisation into the first layer so the saved
    # network consumes raw inputs
    scale = np.where(stats[1] < 1e-12, 1.0, stats[1])
    w1 = net.w1 / scale[:, None]
    b1 = net.b1 - (stats[0] / scale) @ net.w1
    net = replace(net, w1=w1, b1=b1)
    mlp.save_network_csv(net, values["out"])
    write_manifest(values["out"], {"command": "train", "in": values["inp"], "seed": seed,
                                   "alpha": alpha, "iters": iters, "layout": layout})


def cmd_evaluate(values):
    _require(values, "net", "inp", "out")
    net = mlp.load_network_csv(values["net"])
    ds = synthdata.load_csv(values["inp"])
    task = evaluation.task_for(ds)
    pred = evaluation.classify(mlp.forward(net, ds.inputs), task)
    c = evaluation.confusion(pred, ds.labels, task)
    with open(values["out"], "w") as fh:
        fh.write("accuracy,tp,tn,fp,fn,misgraded,total\n")
        fh.write(f"{c.accuracy:.4f},{c.tp},{c.tn},{c.fp},{c.fn},{c.misgraded},{c.total}\n")
    write_manifest(values["out"], {"command": "evaluate", "net": values["net"],
                                   "in": values["inp"]})


def pipeline_config(values):
    dataset = values.get("dataset", "gear")
    default_route = CYLINDER_DEFAULT_ROUTE if dataset == "cylinder" else GEAR_DEFAULT_ROUTE
    method = values.get("method", "both")
    methods = evaluation.METHODS if method == "both" else (method,)
    changes = dict(
        dataset=dataset,
        route=values.get("route", default_route),
        methods=methods,
        k_list=_parse_k(values, "3,5,7,10"),
        ard=_ard_options(values),
        gear=_gear_params(values),
        cylinder=_cylinder_params(values),
    )
    if "seeds" in values:
        changes["seeds"] = _int_list(values["seeds"])
    for key in ("data_seed", "train_frac", "n_hidden"):
        if key in values:
            changes[key] = values[key]
    if values.get("per_k_ard"):
        changes["ard_per_k"] = True
    return evaluation.PipelineConfig(**changes)


def cmd_pipeline(values):
    cfg = pipeline_config(values)
    out_dir = values.get("out_dir", "results")
    os.makedirs(out_dir, exist_ok=True)
    reports = evaluation.run_pipeline(cfg)
    stem = f"{os.path.basename(cfg.dataset).removesuffix('.csv')}_{cfg.route}"
    table = os.path.join(out_dir, f"table_{stem}.csv")
    detail = os.path.join(out_dir, f"reports_{stem}.csv")
    chart = os.path.join(out_dir, f"trend_{stem}.svg")
    evaluation.write_table_csv(reports, table)
    evaluation.write_reports_csv(reports, detail)
    evaluation.write_svg(reports, chart, title=f"{cfg.dataset} / {cfg.route}")
    config = {"command": "pipeline", **asdict(cfg)}
    for path in (table, detail, chart):
        write_manifest(path, config)
    for k, p, a in evaluation.table_rows(reports):
        print(f"k={k:<3d} pca={'' if p is None else f'{p:.2f}'} "
              f"ard={'' if a is None else f'{a:.2f}'}")


COMMANDS = {
    "generate": cmd_generate,
    "select": cmd_select,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "pipeline": cmd_pipeline,
}


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) if exc.code in (0, None) else 2
    try:
        values = resolve(args, parser, args.command)
        if "k" in values:
            _parse_k(values)
        for key in ("out", "model_out"):
            parent = os.path.dirname(values.get(key) or "")
            if parent:
                os.makedirs(parent, exist_ok=True)
        COMMANDS[args.command](values)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"ardpca {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())
