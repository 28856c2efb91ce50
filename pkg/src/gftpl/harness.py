"""Experiment harness: declarative JSON configs, seeded runs, traces, summaries.

A config names an environment, an adversary process, an algorithm, horizons
and seeds.  ``run_experiment`` executes every (horizon, seed) cell, writes one
trace CSV per cell plus a summary JSON, and returns the summary structure.
All randomness flows from the per-run seed; reruns reproduce traces
byte-for-byte (summaries additionally carry wall-clock runtimes).
"""
from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import adversaries
from .contextual import (
    ContextualEnvironment,
    or_of_features_policies,
    q_extension,
    run_transductive_ftpl,
    verify_separator,
)
from .engine import analyze_trace, run_ftpl_explicit, run_oracle_ftpl, run_oracle_ftpl_signed
from .environments import (
    ItemPricingEnvironment,
    LevelAuctionEnvironment,
    MultiUnitEnvironment,
    SispaEnvironment,
    VcgReserveEnvironment,
    bidding_translation,
    capped_additive_valuation,
    item_pricing_translation,
    level_translation,
    multi_unit_translation,
    unit_demand_valuation,
    vcg_translation,
)
from .errors import ConfigError
from .perturbation import (
    POSITIVE_UNIFORM,
    PerturbationDistribution,
    eta_for_uniform,
    nu_for_transductive,
    uniform_for_horizon,
)
from .translation import check_admissibility, pseudo_complexity, rows_matrix, verify_implementability

TRACE_COLUMNS = ["t", "action_id", "adversary_id", "payoff", "cum_payoff",
                 "best_in_hindsight_cum", "cum_regret"]

# desk-scale caps; configs beyond these enumerate too much to be useful
MAX_ACTIONS = 20000
MAX_HORIZON = 200000


def _need(cfg: dict, path: str, key: str, types):
    if key not in cfg:
        raise ConfigError(f"{path}.{key}", "missing required field")
    value = cfg[key]
    if types is not None and not isinstance(value, types):
        raise ConfigError(f"{path}.{key}", f"expected {types}, got {type(value).__name__}")
    return value


def _build_valuation(cfg: dict, k: int, m: int, path: str):
    kind = cfg.get("kind", "table")
    if kind == "unit-demand":
        return unit_demand_valuation(_need(cfg, path, "per_item", list), k)
    if kind == "capped-additive":
        return capped_additive_valuation(_need(cfg, path, "per_item", list), k,
                                         cfg.get("cap", 1.0))
    if kind == "table":
        table = _need(cfg, path, "table", dict)
        return {int(mask): float(v) for mask, v in table.items()}
    raise ConfigError(f"{path}.kind", f"unknown valuation kind {kind!r}")


def build_environment(cfg: dict, path: str = "environment"):
    """Instantiate the configured environment and its translation spec."""
    kind = _need(cfg, path, "kind", str)
    if kind == "vcg":
        n, m = _need(cfg, path, "n", int), _need(cfg, path, "m", int)
        env = VcgReserveEnvironment(n, m, cfg.get("units", 1))
        spec = vcg_translation(n, m)
    elif kind == "item-pricing":
        k, m = _need(cfg, path, "k", int), _need(cfg, path, "m", int)
        env = ItemPricingEnvironment(k, m, cfg.get("max_bidders", 1), cfg.get("supply"))
        spec = item_pricing_translation(k, m)
    elif kind == "level":
        n, s, m = _need(cfg, path, "n", int), _need(cfg, path, "s", int), _need(cfg, path, "m", int)
        env = LevelAuctionEnvironment(n, s, m)
        spec = level_translation(n, s, m)
    elif kind == "multi-unit":
        n, units = _need(cfg, path, "n", int), _need(cfg, path, "units", int)
        env = MultiUnitEnvironment(n, units)
        spec = multi_unit_translation(n, units)
    elif kind == "sispa":
        k, m = _need(cfg, path, "k", int), _need(cfg, path, "m", int)
        valuation = _build_valuation(_need(cfg, path, "valuation", dict), k, m,
                                     f"{path}.valuation")
        env = SispaEnvironment(valuation, k, m)
        spec = bidding_translation(valuation, k, m)
    else:
        raise ConfigError(f"{path}.kind", f"unknown environment kind {kind!r}")
    if len(env.actions) > MAX_ACTIONS:
        raise ConfigError(path, f"{len(env.actions)} actions exceeds the desk-scale cap {MAX_ACTIONS}")
    return env, spec


def _convert_action(kind: str, raw):
    """JSON-friendly adversary action -> the environment's native tuple form."""
    if kind in ("vcg", "level", "sispa"):
        return tuple(float(v) for v in raw)
    if kind == "multi-unit":
        return tuple(tuple(float(x) for x in ms) for ms in raw)
    if kind == "item-pricing":
        out = []
        for bidder in raw:
            tag = bidder[0]
            if tag == "sm":
                out.append(("sm", int(bidder[1]), float(bidder[2])))
            elif tag == "ud":
                out.append(("ud", tuple(float(v) for v in bidder[1])))
            else:
                raise ConfigError("adversary.support", f"unknown bidder tag {tag!r}")
        return tuple(out)
    raise ConfigError("adversary.support", f"no converter for environment {kind!r}")


def _adversary_config(cfg: dict, env_kind: str, horizon: int, path: str = "adversary"):
    kind = _need(cfg, path, "kind", str)
    out = dict(cfg)
    out.setdefault("length", horizon)
    if out["length"] < horizon:
        raise ConfigError(f"{path}.length", "shorter than the horizon")
    if kind in ("iid", "sticky"):
        support = _need(cfg, path, "support", list)
        out["support"] = [_convert_action(env_kind, a) for a in support]
        _need(cfg, path, "probs", list)
        if kind == "sticky":
            _need(cfg, path, "rho", (int, float))
    elif kind == "scripted":
        if "script" in cfg:
            out["script"] = [_convert_action(env_kind, a) for a in cfg["script"]]
        else:
            _need(cfg, path, "script_seed", int)
    else:
        raise ConfigError(f"{path}.kind", f"unknown adversary kind {kind!r}")
    return out


def load_config(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def validate_config(config: dict) -> dict:
    """Surface-level validation with field paths; returns the config unchanged."""
    for key in ("environment", "adversary", "algorithm", "horizon", "seeds"):
        if key not in config:
            raise ConfigError(key, "missing required field")
    horizons = config["horizon"]
    if isinstance(horizons, int):
        horizons = [horizons]
    if (not isinstance(horizons, list) or not horizons
            or any(not isinstance(t, int) or t < 1 or t > MAX_HORIZON for t in horizons)):
        raise ConfigError("horizon", f"expected int or list of ints in [1, {MAX_HORIZON}]")
    seeds = config["seeds"]
    if not isinstance(seeds, list) or not all(isinstance(s, int) for s in seeds):
        raise ConfigError("seeds", "expected a list of integers")
    algo = config["algorithm"].get("kind")
    if algo not in ("explicit", "oracle", "oracle-mir", "signed", "contextual-transductive"):
        raise ConfigError("algorithm.kind", f"unknown algorithm {algo!r}")
    return config


def _distribution_for(config, report, horizon, epsilon):
    dist_cfg = config.get("distribution", {"auto": True})
    if dist_cfg.get("auto", False) or "kind" not in dist_cfg:
        return uniform_for_horizon(report.kappa, report.delta, horizon, epsilon)
    return PerturbationDistribution(dist_cfg["kind"], float(dist_cfg["scale"]))


def _theoretical_bound(algorithm, env, report, num_columns, horizon, epsilon, dist,
                       num_contexts=None, num_base_actions=None):
    """Explicit-constant regret bound matching the algorithm, in raw payoff units."""
    scale = env.payoff_scale
    if algorithm in ("explicit", "oracle", "oracle-mir"):
        eta = 1.0 / dist.scale
        rho = min(1.0, eta * (1.0 + 2.0 * epsilon) / report.delta)
        stability = 2.0 * horizon * num_columns * report.kappa * rho
        perturbation = num_columns / eta
        return scale * (stability + perturbation + epsilon * horizon)
    # signed / transductive runs with symmetric noise on [-nu, nu]
    nu = dist.scale
    stability = horizon * num_columns * report.kappa * (1.0 + 2.0 * epsilon) / (nu * report.delta)
    perturbation = 2.0 * nu * math.sqrt(2.0 * num_columns * num_contexts * math.log(num_base_actions))
    return scale * (stability + perturbation + epsilon * horizon)


def write_trace_csv(path, trace, env, sequence):
    """Trace CSV with running best-in-hindsight and regret columns."""
    cum_best = np.zeros(len(env.actions))
    cum_pay = 0.0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_COLUMNS)
        for t, (rnd, y) in enumerate(zip(trace.rounds, sequence), start=1):
            cum_best = cum_best + env.payoff_vector(y)
            cum_pay += rnd.payoff
            best = float(cum_best.max())
            writer.writerow([t, rnd.action, rnd.adversary, repr(rnd.payoff),
                             repr(cum_pay), repr(best), repr(best - cum_pay)])


def summary_from_trace(path, c_factor: float = 1.0) -> dict:
    """Recover the trace-derivable summary fields from a written CSV."""
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        return {"regret": 0.0, "c_regret": 0.0, "switch_fraction": 0.0}
    last = rows[-1]
    cum_pay = float(last["cum_payoff"])
    best = float(last["best_in_hindsight_cum"])
    switches = sum(1 for a, b in zip(rows, rows[1:]) if a["action_id"] != b["action_id"])
    return {
        "regret": best - cum_pay,
        "c_regret": c_factor * best - cum_pay,
        # the virtual post-horizon switch is not recoverable from the CSV
        "switch_fraction": switches / len(rows),
    }


def _transductive_pieces(config, base_env, base_spec):
    algo = config["algorithm"]
    policy_class = or_of_features_policies(
        _need(algo, "algorithm", "features", int),
        [_convert_action(config["environment"]["kind"], a) for a in algo["actions_if_one"]],
        [_convert_action(config["environment"]["kind"], a) for a in algo["actions_if_zero"]],
    )
    ok, pair = verify_separator(policy_class, policy_class.contexts)
    if not ok:
        raise ConfigError("algorithm", f"context universe fails to separate policies {pair}")
    return policy_class


def _run_one(config, env, spec, report, horizon, seed, out_dir, env_kind):
    started = time.perf_counter()
    algo = config["algorithm"]["kind"]
    epsilon = 1.0 / math.sqrt(horizon)
    c_factor = float(config.get("c_factor", 1.0))

    adv_cfg = _adversary_config(config["adversary"], env_kind, horizon)
    sequence = adversaries.generate(adv_cfg, [seed, 0], env=env)[:horizon]

    if algo == "contextual-transductive":
        policy_class = _transductive_pieces(config, env, spec)
        contexts = policy_class.contexts
        ctx_rng = np.random.default_rng([seed, 3])
        ctx_seq = [contexts[int(i)] for i in ctx_rng.integers(len(contexts), size=horizon)]
        paired = list(zip(ctx_seq, sequence))
        nu = config["algorithm"].get("nu") or nu_for_transductive(
            horizon, report.kappa, report.delta, spec.num_columns,
            len(contexts), len(env.actions), epsilon)
        trace = run_transductive_ftpl(policy_class, env, spec, contexts, nu, paired, [seed, 1])
        run_env = ContextualEnvironment(env, policy_class)
        run_spec = q_extension(spec, contexts, policy_class)
        run_seq = paired
        dist = PerturbationDistribution("symmetric-uniform", nu)
        bound = _theoretical_bound(algo, env, report, spec.num_columns, horizon, epsilon,
                                   dist, num_contexts=len(contexts),
                                   num_base_actions=len(env.actions))
    else:
        dist = _distribution_for(config, report, horizon, epsilon)
        run_env, run_spec, run_seq = env, spec, sequence
        if algo == "explicit":
            gamma = rows_matrix(spec, env.actions)
            trace = run_ftpl_explicit(env, gamma, dist, epsilon, sequence, [seed, 1])
        elif algo == "oracle":
            trace = run_oracle_ftpl(env, spec, dist, sequence, [seed, 1])
        elif algo == "oracle-mir":
            if env_kind != "multi-unit":
                raise ConfigError("algorithm.kind", "oracle-mir only applies to multi-unit")
            trace = run_oracle_ftpl(env, spec, dist, sequence, [seed, 1],
                                    action_subset=env.mir_action_indices())
        else:  # signed
            trace = run_oracle_ftpl_signed(env, spec, dist, sequence, [seed, 1])
        bound = _theoretical_bound(algo, env, report, spec.num_columns, horizon, epsilon, dist)

    analysis = analyze_trace(trace, run_env, run_seq, run_spec, c_factor=c_factor)
    trace_path = Path(out_dir) / f"trace_T{horizon}_seed{seed}.csv"
    write_trace_csv(trace_path, trace, run_env, run_seq)
    record = {
        "regret": analysis["regret"],
        "c_regret": analysis["c_regret"],
        "stability_term": analysis["stability_term"],
        "perturbation_term": analysis["perturbation_term"],
        "epsilon_term": analysis["error_term"],
        "switch_fraction": analysis["switch_count"] / max(1, horizon),
        "bound": bound,
        "seed": seed,
        "runtime_ms": (time.perf_counter() - started) * 1000.0,
        "horizon": horizon,
        "trace": trace_path.name,
    }
    return record


def run_experiment(config: dict, out_dir, seeds=None, jobs: int = 1) -> dict:
    """Run every (horizon, seed) cell of the config; write traces and summary.json."""
    validate_config(config)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    env_kind = config["environment"]["kind"]
    env, spec = build_environment(config["environment"])
    report = check_admissibility(rows_matrix(spec, env.actions))

    horizons = config["horizon"]
    if isinstance(horizons, int):
        horizons = [horizons]
    seeds = list(config["seeds"] if seeds is None else seeds)

    cells = [(t, s) for t in horizons for s in seeds]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(
                lambda cell: _run_one(config, env, spec, report, cell[0], cell[1],
                                      out_dir, env_kind), cells))
    else:
        records = [_run_one(config, env, spec, report, t, s, out_dir, env_kind)
                   for t, s in cells]

    summary = {"records": records}
    mean_by_horizon = {t: float(np.mean([r["regret"] for r in records if r["horizon"] == t]))
                       for t in horizons}
    summary["mean_regret"] = {str(t): v for t, v in mean_by_horizon.items()}
    if len(horizons) > 1:
        lo, hi = min(horizons), max(horizons)
        if mean_by_horizon[lo] != 0:
            summary["regret_ratio"] = mean_by_horizon[hi] / mean_by_horizon[lo]
    with open(out_dir / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=2)
    return summary


def emit_regret_curve(trace_paths, out_path):
    """Cumulative-regret curves (one faint line per trace, bold mean) as SVG/PDF."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    trace_paths = list(trace_paths)
    if not trace_paths:
        raise ConfigError("traces", "need at least one trace file")
    curves = []
    for path in trace_paths:
        with open(path) as fh:
            rows = list(csv.DictReader(fh))
        curves.append(np.array([float(r["cum_regret"]) for r in rows]))

    fig, ax = plt.subplots(figsize=(7, 4.5))
    horizon = max(len(c) for c in curves)
    for c in curves:
        ax.plot(range(1, len(c) + 1), c, color="steelblue", alpha=0.35, linewidth=0.9)
    full = [c for c in curves if len(c) == horizon]
    if full:
        ax.plot(range(1, horizon + 1), np.mean(full, axis=0), color="navy", linewidth=2.2,
                label=f"mean of {len(full)} runs")
        ax.legend()
    ax.set_xlim(0, horizon)
    ax.set_ylim(bottom=min(0.0, min(float(c.min()) for c in curves)))
    ax.set_xlabel("round")
    ax.set_ylabel("cumulative regret")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return out_path


# expected admissibility constants per environment kind, for `verify`
def _expected_constants(cfg: dict):
    kind = cfg["kind"]
    if kind in ("vcg", "item-pricing"):
        return 2, 1.0, "=="
    if kind == "level":
        return cfg["m"] + 1, 1.0 / cfg["m"], "=="
    if kind == "multi-unit":
        return cfg["units"] + 1, 1.0 / cfg["units"], "=="
    if kind == "sispa":
        return cfg["m"] + 1, 1.0 / cfg["m"], "<="
    return None


def verify_environment(config: dict):
    """Run the invariant suite for the configured environment; (name, ok, detail) rows."""
    validate_config(config)
    env, spec = build_environment(config["environment"])
    results = []

    ok, dev = verify_implementability(spec, env)
    results.append(("implementability-identity", ok, f"max deviation {dev:.3g}"))
    if spec.negative_datasets is not None:
        results.append(("negative-implementability", ok, "checked alongside the identity"))

    report = check_admissibility(rows_matrix(spec, env.actions))
    expected = _expected_constants(config["environment"])
    if expected is not None:
        kappa, delta, mode = expected
        if mode == "==":
            good = report.rows_distinct and report.kappa == kappa and abs(report.delta - delta) < 1e-12
        else:
            good = report.rows_distinct and report.kappa <= kappa and report.delta >= delta - 1e-12
        results.append(("admissibility-constants", good,
                        f"got ({report.kappa}, {report.delta:.4g}), expected ({kappa}, {delta:.4g}) {mode}"))

    w = pseudo_complexity(spec)
    m = config["environment"].get("m", 2)
    cap = {"vcg": 2 * m * (m - 1) + m, "item-pricing": 2 * m * (m - 1) + m,
           "level": 1.0, "multi-unit": 1.0, "sispa": float(m)}[config["environment"]["kind"]]
    results.append(("pseudo-complexity", w <= cap + 1e-9, f"W = {w:.4g} <= {cap:.4g}"))

    horizon = min(30, config["horizon"] if isinstance(config["horizon"], int)
                  else min(config["horizon"]))
    rng = np.random.default_rng(0)
    seq = [env.random_adversary_action(rng) for _ in range(horizon)]
    dist = uniform_for_horizon(report.kappa, report.delta, horizon)
    t1 = run_oracle_ftpl(env, spec, dist, seq, [0, 1])
    t2 = run_oracle_ftpl(env, spec, dist, seq, [0, 1])
    results.append(("determinism", t1.rounds == t2.rounds, f"{horizon}-round double run"))
    return results
