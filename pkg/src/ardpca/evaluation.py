"""
Classification accounting and the multi-seed comparison harness.

One pipeline run takes a dataset through a preprocessing route, fits an
input-selection scheme (PCA or ARD) on the training split only, trains a
classifier MLP on the k selected inputs and scores it on the test split,
for every k and seed.
"""
from dataclasses import dataclass, field, replace

import numpy as np

from . import ard as ard_mod
from . import mlp
from . import pca as pca_mod
from . import sof as sof_mod
from . import synthdata
from .features import feature_matrix
from .scg import ScgOptions, minimize
from .signal import decimate, dft_magnitude

ROUTES = ("sof", "time256", "time64", "freq", "features62")
METHODS = ("pca", "ard")
MULTILABEL = "multilabel"
GRADED = "graded"
GRADES = np.array(synthdata.SEVERITIES)


@dataclass(frozen=True)
class ConfusionCounts:
    """
    Decision counts. ``misgraded`` holds faulty examples assigned the wrong
    nonzero severity, which are neither false positives nor false negatives.
    """
    tp: int = 0
    tn: int = 0
    fp: int = 0
    fn: int = 0
    misgraded: int = 0

    @property
    def total(self):
        return self.tp + self.tn + self.fp + self.fn + self.misgraded

    @property
    def accuracy(self):
        return 100.0 * (self.tp + self.tn) / self.total if self.total else 0.0

    def __add__(self, other):
        return ConfusionCounts(self.tp + other.tp, self.tn + other.tn, self.fp + other.fp,
                               self.fn + other.fn, self.misgraded + other.misgraded)


@dataclass(frozen=True)
class EvalReport:
    method: str
    preprocessing: str
    k: int
    accuracies: tuple
    confusion: ConfusionCounts

    @property
    def mean_accuracy(self):
        return float(np.mean(self.accuracies))


# -- normalisation, splitting, decisions ----------------------------------

def normalize_fit(train):
    x = np.asarray(train, dtype=float)
    if x.shape[0] < 2:
        raise ValueError("insufficient samples")
    return x.mean(axis=0), x.std(axis=0, ddof=1)


def normalize_apply(data, means, stds):
    """Standardise with training statistics; near-constant columns are only centred."""
    scale = np.where(stds < 1e-12, 1.0, stds)
    return (np.asarray(data, dtype=float) - means) / scale


def split(ds, train_frac=2 / 3, seed=0):
    """
    Stratified train/test split on the label pattern, deterministic in seed.

    Every pattern contributes ``round(train_frac * count)`` rows to training,
    clipped so both parts receive at least one row.
    """
    if not 0 < train_frac < 1:
        raise ValueError("train_frac must lie strictly between 0 and 1")
    rng = np.random.default_rng(seed)
    patterns, inverse = np.unique(ds.labels, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).ravel()
    train_idx, test_idx = [], []
    for p in range(len(patterns)):
        rows = np.flatnonzero(inverse == p)
        if rows.size < 2:
            raise ValueError(f"cannot stratify: label pattern {patterns[p]} has "
                             f"{rows.size} example")
        rows = rng.permutation(rows)
        n_train = min(max(int(round(train_frac * rows.size)), 1), rows.size - 1)
        train_idx.extend(rows[:n_train])
        test_idx.extend(rows[n_train:])
    return ds.subset(np.sort(train_idx)), ds.subset(np.sort(test_idx))


def task_for(ds):
    return GRADED if ds.n_labels == 1 else MULTILABEL


def classify(outputs, task):
    """Threshold logistic outputs at 0.5, or snap graded outputs to {0, 0.5, 1}."""
    y = np.asarray(outputs, dtype=float)
    if task == MULTILABEL:
        return (y >= 0.5).astype(float)
    if task == GRADED:
        dist = np.abs(y[..., None] - GRADES)
        # argmin over reversed grades resolves ties toward the larger value
        pick = len(GRADES) - 1 - np.argmin(dist[..., ::-1], axis=-1)
        return GRADES[pick]
    raise ValueError(f"unknown task {task!r}")


def confusion(pred, truth, task):
    pred = np.asarray(pred, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if pred.shape != truth.shape:
        raise ValueError(f"shape mismatch: {pred.shape} vs {truth.shape}")
    if task == MULTILABEL:
        return ConfusionCounts(
            tp=int(np.sum((truth == 1) & (pred == 1))),
            tn=int(np.sum((truth == 0) & (pred == 0))),
            fp=int(np.sum((truth == 0) & (pred == 1))),
            fn=int(np.sum((truth == 1) & (pred == 0))))
    if task == GRADED:
        t, p = truth.ravel(), pred.ravel()
        faulty = t > 0
        return ConfusionCounts(
            tp=int(np.sum(faulty & (p == t))),
            tn=int(np.sum(~faulty & (p == 0))),
            fp=int(np.sum(~faulty & (p > 0))),
            fn=int(np.sum(faulty & (p == 0))),
            misgraded=int(np.sum(faulty & (p > 0) & (p != t))))
    raise ValueError(f"unknown task {task!r}")


# -- preprocessing routes -------------------------------------------------

def route_transform(inputs, route):
    """Per-example transform of a route; stateless, so safe before splitting."""
    x = np.asarray(inputs, dtype=float)
    if route == "sof":
        return x
    if route == "time256":
        return decimate(x, 256)
    if route == "time64":
        return decimate(x, 64)
    if route == "freq":
        return dft_magnitude(decimate(x, 256))
    if route == "features62":
        return feature_matrix(x)
    raise ValueError(f"unknown route {route!r}")


# -- pipeline -------------------------------------------------------------

@dataclass(frozen=True)
class PipelineConfig:
    dataset: str = "gear"
    route: str = "time256"
    methods: tuple = METHODS
    k_list: tuple = (3, 5, 7, 10)
    seeds: tuple = (1, 2, 3, 4, 5)
    data_seed: int = 0
    train_frac: float = 2 / 3
    sof_k: int = sof_mod.DEFAULT_K
    n_hidden: int = 8
    clf_alpha: float = 0.01
    clf_iters: int = 200
    ard: ard_mod.ArdOptions = field(default_factory=ard_mod.ArdOptions)
    ard_per_k: bool = False
    gear: synthdata.GearGenParams = field(default_factory=synthdata.GearGenParams)
    cylinder: synthdata.CylinderGenParams = field(default_factory=synthdata.CylinderGenParams)

    def __post_init__(self):
        if self.route not in ROUTES:
            raise ValueError(f"unknown route {self.route!r}")
        if not self.seeds:
            raise ValueError("at least one seed is required")
        if not self.k_list or min(self.k_list) < 1:
            raise ValueError("invalid k: values must be positive integers")
        if any(m not in METHODS for m in self.methods):
            raise ValueError(f"unknown method in {self.methods!r}")


def load_dataset(cfg):
    if cfg.dataset == "gear":
        return synthdata.generate_gear(cfg.gear, cfg.data_seed)
    if cfg.dataset == "cylinder":
        return synthdata.generate_cylinder(cfg.cylinder, cfg.data_seed)
    return synthdata.load_csv(cfg.dataset)


@dataclass
class Selectors:
    """
    Everything fitted on the training split for one seed.

    PCA sees the raw (SOF-selected) inputs; ARD sees them standardised with
    ``norm``.
    """
    norm: tuple = None
    sof_columns: np.ndarray = None
    pca: pca_mod.PcaModel = None
    ard_orderings: dict = None  # k -> ordering
    ard_state: ard_mod.ArdState = None


def _layout(n_in, cfg, ds):
    kind = mlp.LINEAR if task_for(ds) == GRADED else mlp.LOGISTIC
    return mlp.Layout(n_in, cfg.n_hidden, ds.n_labels, kind)


def fit_selectors(train, cfg, seed):
    """Fit SOF, PCA, ARD and their normalisation on training data only."""
    x = train.inputs
    sel = Selectors()
    if cfg.route == "sof":
        healthy, damaged = sof_mod.split_populations(x, train.labels)
        sel.sof_columns = sof_mod.rank_by_sof(healthy, damaged, min(cfg.sof_k, x.shape[1])).selected
        x = x[:, sel.sof_columns]
    k_max = max(cfg.k_list)
    if k_max > x.shape[1]:
        raise ValueError(f"invalid k: {k_max} exceeds input dimension {x.shape[1]}")
    if "pca" in cfg.methods:
        sel.pca = pca_mod.fit_pca(x, k_max)
    if "ard" in cfg.methods:
        sel.norm = normalize_fit(x)
        sel.ard_orderings, sel.ard_state = _fit_ard(normalize_apply(x, *sel.norm),
                                                    train, cfg, seed)
    return sel


def _fit_ard(x, train, cfg, seed):
    ks = sorted(set(cfg.k_list), reverse=True)
    net, state = ard_mod.ard_train(x, train.labels, _layout(x.shape[1], cfg, train),
                                   cfg.ard, seed)
    if not cfg.ard_per_k:
        return {k: state.relevance[:k] for k in ks}, state
    # repeated elimination: retrain on the survivors before each smaller k
    orderings = {}
    kept = state.relevance[:ks[0]]
    orderings[ks[0]] = kept
    for k in ks[1:]:
        _, sub = ard_mod.ard_train(x[:, kept], train.labels,
                                   _layout(kept.size, cfg, train), cfg.ard, seed)
        kept = kept[sub.relevance[:k]]
        orderings[k] = kept
    return orderings, state


def selected_inputs(sel, inputs, method, k):
    x = np.asarray(inputs, dtype=float)
    if sel.sof_columns is not None:
        x = x[:, sel.sof_columns]
    if method == "pca":
        return pca_mod.project(sel.pca.truncate(k), x)
    return ard_mod.select_inputs(normalize_apply(x, *sel.norm), sel.ard_orderings[k], k)


def train_classifier(x, labels, layout, alpha, iters, seed):
    net = mlp.init_network(layout, seed)
    alphas = np.full(layout.n_groups, alpha)

    def objective(w):
        return mlp.regularized_error_grad(mlp.unpack(layout, w), x, labels, alphas)

    w, _ = minimize(objective, net.params, ScgOptions(max_iters=iters))
    return mlp.unpack(layout, w)


def run_seed(train, test, cfg, seed):
    """
    Predictions for every (method, k) cell of one seed.

    Returns (selectors, {(method, k): (predictions, truth)}).
    """
    sel = fit_selectors(train, cfg, seed)
    task = task_for(train)
    out = {}
    for method in cfg.methods:
        for k in cfg.k_list:
            xtr = selected_inputs(sel, train.inputs, method, k)
            xte = selected_inputs(sel, test.inputs, method, k)
            stats = normalize_fit(xtr)
            xtr, xte = normalize_apply(xtr, *stats), normalize_apply(xte, *stats)
            net = train_classifier(xtr, train.labels, _layout(k, cfg, train),
                                   cfg.clf_alpha, cfg.clf_iters, seed * 1000 + k)
            out[method, k] = (classify(mlp.forward(net, xte), task), test.labels)
    return sel, out


def run_pipeline(cfg, ds=None):
    """
    Multi-seed comparison for one route.

    Returns one `EvalReport` per (method, k), methods in `cfg.methods` order
    and k ascending.
    """
    ds = ds if ds is not None else load_dataset(cfg)
    routed = ds.with_inputs(route_transform(ds.inputs, cfg.route))
    task = task_for(ds)
    accs = {}
    conf = {}
    for seed in cfg.seeds:
        train, test = split(routed, cfg.train_frac, seed)
        try:
            _, cells = run_seed(train, test, cfg, seed)
        except Exception as exc:
            raise RuntimeError(f"route {cfg.route}, seed {seed}: {exc}") from exc
        for key, (pred, truth) in cells.items():
            c = confusion(pred, truth, task)
            accs.setdefault(key, []).append(c.accuracy)
            conf[key] = conf.get(key, ConfusionCounts()) + c
    return [EvalReport(m, cfg.route, k, tuple(accs[m, k]), conf[m, k])
            for m in cfg.methods for k in sorted(cfg.k_list)]


# -- output ---------------------------------------------------------------

def table_rows(reports):
    """Rows of (k, PCA mean, ARD mean) in the layout of the comparison tables."""
    by = {(r.method, r.k): r.mean_accuracy for r in reports}
    ks = sorted({r.k for r in reports})
    return [(k, by.get(("pca", k)), by.get(("ard", k))) for k in ks]


def _fmt(v):
    return "" if v is None else f"{v:.2f}"


def write_table_csv(reports, path):
    with open(path, "w") as fh:
        fh.write("Number of inputs,PCA Classification,ARD Classification\n")
        for k, p, a in table_rows(reports):
            fh.write(f"{k},{_fmt(p)},{_fmt(a)}\n")


def write_reports_csv(reports, path):
    """Long format: one row per (method, k) with per-seed accuracies and counts."""
    n_seeds = max(len(r.accuracies) for r in reports)
    seeds = ",".join(f"seed{i + 1}" for i in range(n_seeds))
    with open(path, "w") as fh:
        fh.write(f"method,route,k,mean,{seeds},tp,tn,fp,fn,misgraded\n")
        for r in reports:
            accs = ",".join(f"{a:.4f}" for a in r.accuracies)
            c = r.confusion
            fh.write(f"{r.method},{r.preprocessing},{r.k},{r.mean_accuracy:.4f},{accs},"
                     f"{c.tp},{c.tn},{c.fp},{c.fn},{c.misgraded}\n")


def write_svg(reports, path, title=""):
    """Accuracy against number of inputs, one polyline per method."""
    width, height, pad = 480, 320, 50
    rows = table_rows(reports)
    ks = [r[0] for r in rows]
    kmin, kmax = min(ks), max(ks)
    span = max(kmax - kmin, 1)

    def px(k):
        return pad + (k - kmin) / span * (width - 2 * pad)

    def py(acc):
        return height - pad - acc / 100.0 * (height - 2 * pad)

    colors = {"pca": "#1f77b4", "ard": "#d62728"}
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
    ]
    for acc in range(0, 101, 20):
        parts.append(f'<text x="{pad - 6}" y="{py(acc) + 4:.1f}" text-anchor="end" '
                     f'font-size="10">{acc}</text>')
    for k in ks:
        parts.append(f'<text x="{px(k):.1f}" y="{height - pad + 16}" text-anchor="middle" '
                     f'font-size="10">{k}</text>')
    parts.append(f'<text x="{width / 2:.1f}" y="{height - 12}" text-anchor="middle" '
                 f'font-size="11">Number of inputs</text>')
    for i, (col, method) in enumerate(((1, "pca"), (2, "ard"))):
        pts = [(px(r[0]), py(r[col])) for r in rows if r[col] is not None]
        if not pts:
            continue
        coords = " ".join(f"{x:.1f},{y:.1f}" for x, y in pts)
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{colors[method]}" '
                     f'stroke-width="2"/>')
        for x, y in pts:
            parts.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="3" fill="{colors[method]}"/>')
        parts.append(f'<text x="{width - pad - 40}" y="{pad + 14 * i}" font-size="11" '
                     f'fill="{colors[method]}">{method.upper()}</text>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")
