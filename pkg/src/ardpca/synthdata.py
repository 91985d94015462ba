"""
Synthetic stand-ins for the two fault-identification datasets and the
dataset CSV format.

Cylinder examples are pseudo modal-property vectors labelled with a
three-substructure fault pattern in {0,1}^3. Gear examples are single
revolutions of a synchronously sampled mesh vibration labelled with a graded
fault identity in {0, 0.5, 1}.

CSV layout: a header line ``#name,D,L,seed`` followed by one example per
line, D inputs then L labels.
"""
import itertools
from dataclasses import dataclass, field

import numpy as np

SEVERITIES = (0.0, 0.5, 1.0)
FAULT_PATTERNS = tuple(itertools.product((0, 1), repeat=3))


@dataclass(frozen=True)
class Dataset:
    inputs: np.ndarray
    labels: np.ndarray
    name: str = "dataset"
    seed: int = 0

    def __post_init__(self):
        x = np.asarray(self.inputs, dtype=float)
        y = np.asarray(self.labels, dtype=float)
        if y.ndim == 1:
            y = y[:, None]
        if x.ndim != 2 or y.ndim != 2 or x.shape[0] != y.shape[0]:
            raise ValueError("inputs and labels must be 2-D with matching rows")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ValueError("dataset contains non-finite values")
        if "," in self.name or "\n" in self.name:
            raise ValueError("dataset name may not contain commas or newlines")
        object.__setattr__(self, "inputs", x)
        object.__setattr__(self, "labels", y)

    @property
    def n(self):
        return self.inputs.shape[0]

    @property
    def d(self):
        return self.inputs.shape[1]

    @property
    def n_labels(self):
        return self.labels.shape[1]

    def subset(self, rows):
        return Dataset(self.inputs[rows], self.labels[rows], self.name, self.seed)

    def with_inputs(self, inputs, name=None):
        return Dataset(inputs, self.labels, name or self.name, self.seed)


@dataclass(frozen=True)
class GearGenParams:
    revs_per_class: int = 100
    points_per_rev: int = 1024
    mesh_order: int = 29
    noise_std: float = 0.6
    severity_gain: float = 1.5
    harmonic_amps: tuple = (0.25, 1.0, 0.7)
    harmonic_phases: tuple = (0.3, 1.9, 4.1)
    pulse_center: float = 0.37
    pulse_width: float = 0.05
    load_jitter: float = 0.01
    timing_jitter: float = 0.002

    def __post_init__(self):
        n = self.points_per_rev
        if self.revs_per_class < 1 or n < 8 or n & (n - 1):
            raise ValueError("points_per_rev must be a power of two >= 8")
        if self.mesh_order < 1 or self.noise_std < 0 or self.severity_gain < 0:
            raise ValueError("invalid gear generator parameters")
        if len(self.harmonic_amps) != len(self.harmonic_phases):
            raise ValueError("one phase per harmonic amplitude")


@dataclass(frozen=True)
class CylinderGenParams:
    n_examples: int = 264
    n_properties: int = 200
    band_width: int = 12
    band_starts: tuple = (20, 95, 160)
    fault_shift: float = 1.3
    noise_std: float = 0.2
    n_nuisance: int = 4
    nuisance_std: float = 0.3
    hole_range: tuple = (10.0, 15.0)

    def __post_init__(self):
        if self.n_examples < len(FAULT_PATTERNS):
            raise ValueError("need at least one example per fault pattern")
        if any(s < 0 or s + self.band_width > self.n_properties for s in self.band_starts):
            raise ValueError("signature band outside the property vector")
        if len(self.band_starts) != 3:
            raise ValueError("one signature band per substructure")


def tooth_pulse(t, center, width):
    """Periodic Gaussian pulse of unit height, once per revolution."""
    d = (t - center + 0.5) % 1.0 - 0.5
    return np.exp(-0.5 * (d / width) ** 2)


def gear_revolution(params, severity, rng):
    """
    One revolution of the mesh signal::

        x(t) = L * sum_h A_h sin(2 pi h m t + phi_h) * (1 + s G g(t)) + noise

    with ``L`` a per-revolution load factor around 1. The sampling grid of
    each revolution is offset by a random fraction of a revolution
    (trigger and speed jitter), shifting carrier and pulse together.
    """
    n = params.points_per_rev
    t = np.arange(n) / n + params.timing_jitter * rng.standard_normal()
    carrier = sum(a * np.sin(2 * np.pi * h * params.mesh_order * t + ph)
                  for h, (a, ph) in enumerate(zip(params.harmonic_amps,
                                                  params.harmonic_phases), start=1))
    load = 1.0 + params.load_jitter * rng.standard_normal()
    g = tooth_pulse(t, params.pulse_center, params.pulse_width)
    x = load * carrier * (1.0 + severity * params.severity_gain * g)
    return x + params.noise_std * rng.standard_normal(n)


def generate_gear(params=None, seed=0):
    """`revs_per_class` revolutions for each severity 0, 0.5 and 1."""
    params = params or GearGenParams()
    rng = np.random.default_rng(seed)
    rows, labels = [], []
    for s in SEVERITIES:
        for _ in range(params.revs_per_class):
            rows.append(gear_revolution(params, s, rng))
            labels.append(s)
    return Dataset(np.array(rows), np.array(labels)[:, None], "gear", seed)


def cylinder_baseline(n_properties):
    """Deterministic healthy modal-property vector (rising, mildly wavy)."""
    i = np.arange(n_properties)
    return 10.0 + 0.25 * i + 2.0 * np.sin(0.37 * i)


def cylinder_signature(params, substructure):
    """Negative shift profile over the substructure's index band."""
    sig = np.zeros(params.n_properties)
    start = params.band_starts[substructure]
    w = params.band_width
    profile = 0.5 + 0.5 * np.sin(np.pi * (np.arange(w) + 0.5) / w)
    sig[start:start + w] = -params.fault_shift * profile
    return sig


def generate_cylinder(params=None, seed=0):
    """
    Fault-pattern examples cycled over all eight patterns of {0,1}^3.

    Each example is baseline + sum over faulty substructures of a signature
    scaled by the hole size, plus low-rank nuisance variation (boundary
    conditions) and independent measurement noise.
    """
    params = params or CylinderGenParams()
    rng = np.random.default_rng(seed)
    d = params.n_properties
    base = cylinder_baseline(d)
    sigs = np.array([cylinder_signature(params, j) for j in range(3)])
    # smooth nuisance loadings shared by every example
    grid = np.linspace(0.0, 1.0, d)
    loadings = np.array([np.cos(np.pi * (f + 1) * grid + f) for f in range(params.n_nuisance)])
    lo, hi = params.hole_range

    rows, labels = [], []
    for i in range(params.n_examples):
        pattern = np.array(FAULT_PATTERNS[i % len(FAULT_PATTERNS)], dtype=float)
        holes = rng.uniform(lo, hi, 3) / hi
        x = base + (pattern * holes) @ sigs
        if params.n_nuisance:
            x = x + params.nuisance_std * rng.standard_normal(params.n_nuisance) @ loadings
        x = x + params.noise_std * rng.standard_normal(d)
        rows.append(x)
        labels.append(pattern)
    return Dataset(np.array(rows), np.array(labels), "cylinder", seed)


def signature_bands(params=None):
    params = params or CylinderGenParams()
    return np.concatenate([np.arange(s, s + params.band_width) for s in params.band_starts])


def relevance_problem(seed, n=200, n_relevant=5, n_noise=5, noise_std=0.1,
                      coefficients=(1.0, 0.8, 0.6, 0.4, 0.2)):
    """
    Regression data whose target depends linearly on the first
    `n_relevant` inputs only; the remaining inputs are independent noise.
    """
    rng = np.random.default_rng(seed)
    coef = np.resize(np.asarray(coefficients, dtype=float), n_relevant)
    x = rng.standard_normal((n, n_relevant + n_noise))
    y = x[:, :n_relevant] @ coef + noise_std * rng.standard_normal(n)
    return Dataset(x, y[:, None], "relevance", seed)


def save_csv(ds, path):
    with open(path, "w") as fh:
        fh.write(f"#{ds.name},{ds.d},{ds.n_labels},{ds.seed}\n")
        for x, y in zip(ds.inputs, ds.labels):
            fh.write(",".join(f"{v:.17g}" for v in np.concatenate([x, y])) + "\n")


def load_csv(path):
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ValueError("line 1: missing '#name,D,L,seed' header")
    head = lines[0][1:].split(",")
    if len(head) != 4:
        raise ValueError("line 1: header must have 4 fields: name,D,L,seed")
    try:
        name, d, n_labels, seed = head[0], int(head[1]), int(head[2]), int(head[3])
    except ValueError:
        raise ValueError("line 1: D, L and seed must be integers") from None
    width = d + n_labels
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        tokens = line.split(",")
        if len(tokens) != width:
            raise ValueError(f"line {lineno}: expected {width} fields, found {len(tokens)}")
        try:
            row = [float(t) for t in tokens]
        except ValueError:
            raise ValueError(f"line {lineno}: malformed number") from None
        if not np.all(np.isfinite(row)):
            raise ValueError(f"line {lineno}: non-finite value")
        rows.append(row)
    if not rows:
        raise ValueError("line 2: no examples")
    data = np.array(rows)
    return Dataset(data[:, :d], data[:, d:], name, seed)
