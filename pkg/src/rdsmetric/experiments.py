"""Experiment runners behind the ``rds-metric`` subcommands.

Each runner takes a resolved parameter dict and an output directory, writes
CSV/JSON/SVG artifacts and returns a JSON-serialisable summary.  Every CSV
starts with a ``# config:`` line holding the resolved parameters; worker
counts are never recorded, so outputs are byte-identical for any
``workers``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from rdsmetric.ensemble import PathEnsemble, fmt17
from rdsmetric.errors import ConfigError
from rdsmetric.estimators import DistanceMatrix, MetricConfig, distance_matrix, metric_L, metric_matrix
from rdsmetric.heatmap import emit_heatmap
from rdsmetric.independence import HsicConfig, c_k_hat, minmax_normalize, shift_hsic
from rdsmetric.kernels import Kernel
from rdsmetric.simulate import (
    ArSpec,
    LogisticRotationSpec,
    RotationSpec,
    mix_ensembles,
    simulate_ar,
    simulate_logistic_rotation,
    simulate_rotation,
)
from rdsmetric.ucr import groups_manifest, load_ucr, make_ensemble_groups

THETAS = [(1 / 3, "1/3"), (1 / 4, "1/4"), (math.pi / 3, "pi/3")]
ALPHA_MODS = [1.0, 0.9, 0.3]


def parameter_grid():
    """The nine ``(|alpha|, theta, label)`` systems; ``|alpha|`` varies fastest."""
    return [(a, th, f"a{a:g}_t{name}") for th, name in THETAS for a in ALPHA_MODS]


DEFAULTS = {
    "simulate": {
        "generator": "rotation",
        "alpha_mod": 1.0,
        "theta": 0.25,
        "sigma": 0.1,
        "c": 0.01,
        "x0": 0.9,
        "A": None,
        "Sigma": None,
        "n_paths": 10,
        "t_len": 21,
        "seed": 0,
        "stream": 0,
    },
    "metric": {
        "ensembles": None,
        "m": 1,
        "variant": "l",
        "enumeration": "exact",
        "budget": 100000,
        "mc_seed": 0,
        "epsilon": None,
        "time_indices": None,
        "gamma": 0.5,
        "cost_ceiling": 1e8,
    },
    "distmat": {
        "ensembles": None,
        "labels": None,
        "m": 1,
        "variant": "l",
        "enumeration": "exact",
        "budget": 100000,
        "mc_seed": 0,
        "epsilon": None,
        "time_indices": None,
        "gamma": 0.5,
        "cost_ceiling": 1e8,
    },
    "rotation-grid": {
        "T": 20,
        "z0": 0.9,
        "gamma": 0.5,
        "seed": 0,
        "enumeration": "exact",
        "panels": [
            {"sigma": s, "n_paths": n, "variant": v, "m": m}
            for s, n in ((0.0, 1), (0.1, 1), (0.1, 10), (0.5, 10))
            for v, m in (("l", 1), ("l_tilde", 2))
        ],
    },
    "indep-curve": {
        "n_paths": 20,
        "T": 20,
        "sigma": 0.1,
        "c": 0.01,
        "x0": 0.9,
        "x_params": [0.3, 1 / 3],
        "y_params": [0.9, 1 / 4],
        "n_phi": 16,
        "phi_max": math.pi / 4,
        "highlight_phi": 0.35,
        "head": 10,
        "tail": 15,
        "m": 1,
        "gamma": 0.5,
        "seed": 0,
    },
    "indep-grid9": {
        "n_paths": 10,
        "T": 10,
        "sigma": 0.1,
        "c": 0.01,
        "x0": 0.9,
        "n_phi": 16,
        "phi_max": math.pi / 4,
        "head": 5,
        "tail": 7,
        "m": 1,
        "gamma": 0.5,
        "seed": 0,
    },
    "ucr-distmat": {
        "dataset": None,
        "n_paths": 50,
        "n_pairs": 5,
        "skip": 1,
        "variants": ["L", "A"],
        "m": 1,
        "gamma": 0.5,
        "enumeration": "exact",
        "seed": 0,
    },
}


# -- shared helpers ----------------------------------------------------------------


def as_complex(v) -> complex:
    """Accept a number, ``[re, im]`` or a Python complex literal string."""
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ConfigError(f"complex value must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, str):
        try:
            return complex(v.replace(" ", ""))
        except ValueError:
            raise ConfigError(f"cannot parse complex value {v!r}") from None
    return complex(v)


def _jsonable(params: dict) -> dict:
    return json.loads(json.dumps(params, sort_keys=True, default=str))


def _csv_text(header, rows, config) -> str:
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(_jsonable(config), sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt17(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def write_matrix_csv(path, labels, values, config) -> Path:
    path = Path(path)
    path.write_text(DistanceMatrix(labels, values).to_csv(comment=_jsonable(config)))
    return path


def _pmap(fn, items, workers):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _metric_config(p) -> MetricConfig:
    return MetricConfig(
        m=int(p.get("m", 1)),
        time_indices=p.get("time_indices"),
        epsilon=p.get("epsilon"),
        enumeration=p.get("enumeration", "exact"),
        budget=int(p.get("budget", 100000)),
        mc_seed=int(p.get("mc_seed", 0)),
        variant=p.get("variant", "l"),
        kernel=Kernel(gamma=float(p.get("gamma", 0.5))),
        cost_ceiling=float(p.get("cost_ceiling", 1e8)),
    )


def _tag(v) -> str:
    return f"{v:g}".replace(".", "p")


def cluster_summary(dm: DistanceMatrix, classes) -> dict:
    """Within/between-class mean distances per class and leave-one-out 1-NN accuracy."""
    d = dm.values
    classes = list(classes)
    n = len(classes)
    per_class = {}
    for c in dict.fromkeys(classes):
        inside = [i for i in range(n) if classes[i] == c]
        outside = [i for i in range(n) if classes[i] != c]
        within = [d[i, j] for i in inside for j in inside if i != j]
        between = [d[i, j] for i in inside for j in outside]
        per_class[c] = {
            "within_mean": float(np.mean(within)) if within else None,
            "between_mean": float(np.mean(between)) if between else None,
        }
    correct = 0
    for i in range(n):
        row = d[i].copy()
        row[i] = np.inf
        correct += classes[int(np.argmin(row))] == classes[i]
    return {"per_class": per_class, "one_nn_accuracy": correct / n if n > 1 else None, "n_items": n}


# -- runners -------------------------------------------------------------------------


def run_simulate(p: dict, out: Path, workers: int = 1) -> dict:
    gen = p["generator"]
    if gen == "rotation":
        spec = RotationSpec(float(p["alpha_mod"]), float(p["theta"]), float(p["sigma"]), as_complex(p["x0"]))
        ens = simulate_rotation(spec, int(p["n_paths"]), int(p["t_len"]), int(p["seed"]), int(p["stream"]))
    elif gen == "logistic_rotation":
        spec = LogisticRotationSpec(
            float(p["alpha_mod"]), float(p["theta"]), float(p["sigma"]), float(p["c"]), as_complex(p["x0"])
        )
        ens = simulate_logistic_rotation(spec, int(p["n_paths"]), int(p["t_len"]), int(p["seed"]), int(p["stream"]))
    elif gen == "ar":
        if p["A"] is None or p["Sigma"] is None:
            raise ConfigError("the ar generator needs A and Sigma")
        x0 = p["x0"] if isinstance(p["x0"], list) else [p["x0"]]
        ens = simulate_ar(ArSpec(p["A"], p["Sigma"], x0), int(p["n_paths"]), int(p["t_len"]), int(p["seed"]), int(p["stream"]))
    else:
        raise ConfigError(f"unknown generator {gen!r}; expected rotation, logistic_rotation or ar")
    path = out / "ensemble.csv"
    ens.to_csv(path)
    return {"ensemble": str(path), "n_paths": ens.n_paths, "t_len": ens.t_len, "dim": ens.dim}


def _load_ensembles(paths):
    if not paths:
        raise ConfigError("'ensembles' must list ensemble CSV files")
    return [PathEnsemble.from_csv(path) for path in paths]


def run_metric(p: dict, out: Path, workers: int = 1) -> dict:
    ens = _load_ensembles(p["ensembles"])
    if len(ens) != 2:
        raise ConfigError(f"'metric' compares exactly two ensembles, got {len(ens)}")
    cfg = _metric_config(p)
    value = metric_L(ens[0], ens[1], cfg)
    doc = {"config": _jsonable(p), "result": value.to_dict()}
    (out / "metric.json").write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    return doc["result"]


def run_distmat(p: dict, out: Path, workers: int = 1) -> dict:
    ens = _load_ensembles(p["ensembles"])
    labels = p.get("labels") or [Path(x).stem for x in p["ensembles"]]
    if len(labels) != len(ens):
        raise ConfigError(f"{len(labels)} labels for {len(ens)} ensembles")
    dm = distance_matrix(ens, _metric_config(p), labels=labels, workers=workers)
    dm.config = _jsonable(p)
    dm.to_csv(out / "distmat.csv", comment=_jsonable(p))
    dm.to_json(out / "distmat.json")
    emit_heatmap(dm, out / "distmat.svg", title="1 - L")
    return {"distmat": str(out / "distmat.csv"), "n": len(ens)}


def rotation_ensembles(sigma, n_paths, T, seed, z0=0.9):
    """The nine grid systems; all share one noise stream (common sample space)."""
    return [
        simulate_rotation(RotationSpec(a, th, sigma, z0), n_paths, T + 1, seed)
        for a, th, _ in parameter_grid()
    ]


def run_rotation_grid(p: dict, out: Path, workers: int = 1) -> dict:
    labels = [lab for _, _, lab in parameter_grid()]
    z0 = as_complex(p["z0"])
    summary = {"labels": labels, "panels": []}
    for panel in p["panels"]:
        unknown = set(panel) - {"sigma", "n_paths", "variant", "m"}
        if unknown:
            raise ConfigError(f"unknown panel keys {sorted(unknown)}")
        sigma = float(panel["sigma"])
        n_paths = int(panel["n_paths"])
        variant = panel.get("variant", "l")
        m = int(panel.get("m", 1))
        cfg = _metric_config({**p, "m": m, "variant": variant})
        ens = rotation_ensembles(sigma, n_paths, int(p["T"]), int(p["seed"]), z0)
        raw, sim = metric_matrix(ens, cfg, workers=workers)
        name = "Lt" if variant == "l_tilde" else "L"
        tag = f"sigma{_tag(sigma)}_N{n_paths}_{name}{m}"
        panel_cfg = {**p, "panel": panel}
        write_matrix_csv(out / f"rotation_{tag}.csv", labels, sim, panel_cfg)
        write_matrix_csv(out / f"rotation_{tag}_raw.csv", labels, raw.real, panel_cfg)
        emit_heatmap(sim, out / f"rotation_{tag}.svg", labels=labels,
                     title=f"{name}_{m}: sigma={sigma:g}, N_s={n_paths}", annotate=True)
        off = sim - np.diag(np.diag(sim))
        summary["panels"].append({
            "tag": tag,
            "sigma": sigma,
            "n_paths": n_paths,
            "variant": variant,
            "m": m,
            "rows_max_on_diagonal": bool(np.all(np.argmax(sim, axis=1) == np.arange(len(labels)))),
            "max_off_diagonal": float(off.max()),
        })
    return summary


def _phi_grid(p):
    n_phi = int(p["n_phi"])
    if n_phi < 2:
        raise ConfigError("n_phi must be at least 2")
    phi_max = float(p["phi_max"])
    if not 0 < phi_max <= math.pi / 4 + 1e-12:
        raise ConfigError(f"phi_max must lie in (0, pi/4], got {phi_max}")
    return np.linspace(0.0, phi_max, n_phi)


def sweep_phi(X, Y, phis, p, workers=1):
    """``(phi, shift_hsic, c_k_hat, 1 - L)`` rows over the mixing angles."""
    kernel = Kernel(gamma=float(p["gamma"]))
    hcfg = HsicConfig(head=int(p["head"]), tail=int(p["tail"]))
    mcfg = MetricConfig(m=int(p["m"]), kernel=kernel)

    def cell(phi):
        a, b = mix_ensembles(X, Y, float(phi))
        return (
            float(phi),
            shift_hsic(a, b, hcfg, kernel),
            c_k_hat(a, b, hcfg, kernel),
            1.0 - metric_L(a, b, mcfg).L,
        )

    return _pmap(cell, list(phis), workers)


def _curve_rows(rows):
    cols = list(zip(*rows))
    norms = [minmax_normalize(c) for c in cols[1:]]
    return [list(r) + [n[k] for n in norms] for k, r in enumerate(rows)]


CURVE_HEADER = [
    "phi", "shift_hsic", "c_k_hat", "one_minus_L",
    "shift_hsic_norm", "c_k_hat_norm", "one_minus_L_norm",
]


def independence_pair(p, seed):
    """Independent X and Y ensembles (distinct noise streams)."""
    t_len = int(p["T"]) + 1
    x0 = as_complex(p["x0"])
    xa, xt = p["x_params"]
    ya, yt = p["y_params"]
    sigma, c, n = float(p["sigma"]), float(p["c"]), int(p["n_paths"])
    X = simulate_logistic_rotation(LogisticRotationSpec(float(xa), float(xt), sigma, c, x0), n, t_len, seed, stream=0)
    Y = simulate_logistic_rotation(LogisticRotationSpec(float(ya), float(yt), sigma, c, x0), n, t_len, seed, stream=1)
    return X, Y


def run_independence_curve(p: dict, out: Path, workers: int = 1) -> dict:
    X, Y = independence_pair(p, int(p["seed"]))
    phis = _phi_grid(p)
    rows = _curve_rows(sweep_phi(X, Y, phis, p, workers))
    (out / "independence_curve.csv").write_text(_csv_text(CURVE_HEADER, rows, p))
    hp = float(p["highlight_phi"])
    xh, yh = mix_ensembles(X, Y, hp)
    X.to_csv(out / "sample_X.csv")
    Y.to_csv(out / "sample_Y.csv")
    xh.to_csv(out / f"sample_X_phi{_tag(hp)}.csv")
    yh.to_csv(out / f"sample_Y_phi{_tag(hp)}.csv")
    return {"curve": str(out / "independence_curve.csv"), "rows": [dict(zip(CURVE_HEADER, r)) for r in rows]}


def run_independence_grid9(p: dict, out: Path, workers: int = 1) -> dict:
    t_len = int(p["T"]) + 1
    x0 = as_complex(p["x0"])
    sigma, c, n, seed = float(p["sigma"]), float(p["c"]), int(p["n_paths"]), int(p["seed"])
    systems = parameter_grid()
    # left copies on streams 0..8, right copies on 9..17: the i == j panels pair independent samples
    left = [simulate_logistic_rotation(LogisticRotationSpec(a, th, sigma, c, x0), n, t_len, seed, stream=i)
            for i, (a, th, _) in enumerate(systems)]
    right = [simulate_logistic_rotation(LogisticRotationSpec(a, th, sigma, c, x0), n, t_len, seed, stream=9 + j)
             for j, (a, th, _) in enumerate(systems)]
    phis = _phi_grid(p)
    pairs = [(i, j) for i in range(9) for j in range(9)]
    results = _pmap(lambda ij: sweep_phi(left[ij[0]], right[ij[1]], phis, p, 1), pairs, workers)
    files = []
    for (i, j), rows in zip(pairs, results):
        path = out / f"panel_{i}_{j}.csv"
        cfg = {**p, "i": i, "j": j, "system_i": systems[i][2], "system_j": systems[j][2]}
        path.write_text(_csv_text(CURVE_HEADER, _curve_rows(rows), cfg))
        files.append(path.name)
    return {"panels": files, "systems": [lab for _, _, lab in systems]}


def run_ucr_distmat(p: dict, out: Path, workers: int = 1) -> dict:
    if not p.get("dataset"):
        raise ConfigError("ucr-distmat needs 'dataset' (path to a UCR TSV/CSV file)")
    data = load_ucr(p["dataset"]).skipped(int(p["skip"]))
    groups = make_ensemble_groups(data, int(p["n_paths"]), int(p["n_pairs"]), int(p["seed"]))
    (out / "groups_manifest.json").write_text(groups_manifest(groups) + "\n")
    # series carry no shared initial state, so every stored index is a sample
    cfg = _metric_config({**p, "variant": "l", "time_indices": list(range(data.length))})
    summary = {"dataset": str(p["dataset"]), "n_classes": len(groups), "series_length": data.length}
    variants = [v.upper() for v in p["variants"]]
    for variant in variants:
        if variant == "L":
            ens = [e for g in groups for e in g.ensembles]
            labels = [f"{g.class_label}_{k}" for g in groups for k in range(len(g.ensembles))]
            classes = [g.class_label for g in groups for _ in g.ensembles]
        elif variant == "A":
            rows = [r for g in groups for part in g.source_rows for r in part]
            ens = [PathEnsemble(data.values[r][None, :, None], meta={"row": r}) for r in rows]
            labels = [f"{data.labels[r]}_r{r}" for r in rows]
            classes = [data.labels[r] for r in rows]
        else:
            raise ConfigError(f"unknown ucr variant {variant!r}; expected L or A")
        dm = distance_matrix(ens, cfg, labels=labels, workers=workers)
        dm.config = _jsonable(p)
        dm.to_csv(out / f"distmat_{variant}.csv", comment=_jsonable({**p, "variant": variant}))
        emit_heatmap(dm, out / f"distmat_{variant}.svg", title=f"1 - {variant}_{cfg.m}")
        summary[variant] = {"shape": list(dm.values.shape), **cluster_summary(dm, classes)}
    (out / "summary.json").write_text(json.dumps(summary, indent=1, sort_keys=True) + "\n")
    return summary


RUNNERS = {
    "simulate": run_simulate,
    "metric": run_metric,
    "distmat": run_distmat,
    "rotation-grid": run_rotation_grid,
    "indep-curve": run_independence_curve,
    "indep-grid9": run_independence_grid9,
    "ucr-distmat": run_ucr_distmat,
}
