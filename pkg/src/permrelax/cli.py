"""Command line entry points.

Four subcommands: `verify` runs a named property suite and reports one
pass/fail line per check, `qap` solves a matching instance from a text
file and emits a JSON report, `curves` tabulates the closed-form
one-parameter objectives with their located minima, and `shuffle`
sweeps penalty weights on a synthetic shuffled-regression task.

Output goes to stdout unless --out is given; files are written
atomically (temp file in the target directory, then rename).  CSV
output is deterministic apart from the single leading '#' comment
carrying the generation time.  Set PERMRELAX_THREADS to allow that
many worker threads for independent runs (default 1).
"""

import json
import math
import os
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import click
import numpy as np

from .closed_form import (
    TwoLayerTeacher,
    example1_F,
    example2_F,
    example3_F,
    grid_local_minima,
)
from .exceptions import OptimizationError, TooLargeError
from .optimizer import run
from .qap import (
    brute_force_oracle,
    default_config,
    default_lam,
    instance_objective,
    read_instance,
    solve_convex_relaxed,
    solve_penalized,
)
from .core import permutation_to_matrix
from .shuffle import default_config as shuffle_default_config
from .shuffle import generate_task, shuffle_objective
from .verify import SUITES, run_suite

_CURVE_POINTS = 401
_DEFAULT_LAMBDAS = {1: (0.25, 1.0, 2.0), 2: (1.8, 1.9, 2.0), 3: (0.0, 0.4)}


def _max_workers():
    raw = os.environ.get("PERMRELAX_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _parallel_map(fn, items):
    items = list(items)
    workers = min(_max_workers(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _csv_text(columns, rows):
    lines = ["# generated " + time.strftime("%Y-%m-%dT%H:%M:%S")]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(row.get(c)) for c in columns))
    return "\n".join(lines) + "\n"


def _json_ready(value):
    """Plain python types only; NaN becomes null."""
    if isinstance(value, dict):
        return {k: _json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_ready(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_json_ready(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        f = float(value)
        return None if math.isnan(f) else f
    return value


def _json_text(payload):
    return json.dumps(_json_ready(payload), indent=2, sort_keys=True) + "\n"


def _write_atomic(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".permrelax-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text, out):
    if out:
        _write_atomic(out, text)
        click.echo(f"wrote {out}")
    else:
        click.echo(text, nl=False)


@click.group()
def main():
    """Permutation relaxation toolkit."""


@main.command()
@click.argument("suite", type=click.Choice(SUITES))
@click.option("--seed", type=int, default=0, show_default=True)
def verify(suite, seed):
    """Run one property suite; exit 1 if any check fails."""
    checks = run_suite(suite, seed=seed)
    failed = 0
    for name, passed, detail in checks:
        tag = "PASS" if passed else "FAIL"
        click.echo(f"[{tag}] {name} ({detail})")
        failed += 0 if passed else 1
    if failed:
        click.echo(f"{failed} of {len(checks)} checks failed")
        sys.exit(1)
    click.echo(f"all {len(checks)} checks passed")


@main.command()
@click.argument("instance_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--lambda", "lambdas", multiple=True, type=float,
              help="penalty weight; repeatable (default: 0.1 * spectral scale)")
@click.option("--seed", "seeds", multiple=True, type=int,
              help="restart seed; repeatable (default: 0)")
@click.option("--restarts", type=int, default=8, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False))
def qap(instance_file, lambdas, seeds, restarts, out):
    """Solve a matching instance; emit a JSON report.

    The report carries the convex-relaxed matrix, the rounded
    permutation from the penalized solve for every lambda/seed pair,
    and the exhaustive optimum when the instance is small enough.
    """
    try:
        inst = read_instance(instance_file)
    except (ValueError, IndexError) as exc:
        raise click.UsageError(f"cannot parse {instance_file}: {exc}")
    lambdas = tuple(lambdas) if lambdas else (default_lam(inst),)
    seeds = tuple(seeds) if seeds else (0,)

    relaxed = solve_convex_relaxed(inst)
    report = {
        "instance": {"n": inst.n, "kind": inst.kind},
        "convex_relaxed": {
            "matrix": relaxed,
            "objective": instance_objective(inst, relaxed),
        },
    }
    try:
        oracle_perm, oracle_val = brute_force_oracle(inst)
        report["oracle"] = {"permutation": oracle_perm, "objective": oracle_val}
    except TooLargeError as exc:
        report["oracle"] = {"skipped": True, "note": str(exc)}

    def solve(pair):
        lam, seed = pair
        perm = solve_penalized(
            inst, lam=lam, cfg=default_config(inst, seed=seed), restarts=restarts
        )
        return {
            "lambda": lam,
            "seed": seed,
            "permutation": perm,
            "objective": instance_objective(inst, permutation_to_matrix(perm)),
        }

    pairs = [(lam, seed) for lam in lambdas for seed in seeds]
    runs = _parallel_map(solve, pairs)
    report["penalized"] = runs
    best = min(runs, key=lambda r: (r["objective"], tuple(r["permutation"])))
    report["best"] = {
        "permutation": best["permutation"],
        "objective": best["objective"],
    }
    _emit(_json_text(report), out)


def _curve_function(example, lam, teacher):
    if example == 1:
        return lambda q: example1_F(q, lam)
    if example == 2:
        return lambda q: example2_F(q, lam)
    return lambda p: example3_F(p, teacher, lam)


def _endpoint_label(x):
    if abs(x) < 1e-7:
        return "0"
    if abs(x - 1.0) < 1e-7:
        return "1"
    return "interior"


def _rounds_to(x):
    if abs(x - 0.5) < 1e-12:
        return "tie"
    return "0" if x < 0.5 else "1"


@main.command()
@click.option("--example", type=click.IntRange(1, 3), required=True,
              help="which closed-form objective family to tabulate")
@click.option("--lambda", "lambdas", multiple=True, type=float,
              help="penalty weight; repeatable (defaults depend on the example)")
@click.option("--m", "m", type=float, default=None,
              help="teacher shift for example 3 (default 0)")
@click.option("--out", type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(("csv", "json")),
              default="csv", show_default=True)
def curves(example, lambdas, m, out, fmt):
    """Tabulate a one-parameter objective and locate its minima.

    For each lambda the output holds the located local minima
    (labelled interior/0/1, with the endpoint each one rounds to and
    whether it is the global minimum for that lambda) followed by
    uniform samples of the curve on [0, 1].
    """
    if m is not None and example != 3:
        raise click.UsageError("--m only applies to --example 3")
    lambdas = tuple(lambdas) if lambdas else _DEFAULT_LAMBDAS[example]
    teacher = TwoLayerTeacher(m=m or 0.0) if example == 3 else None

    grid = np.linspace(0.0, 1.0, _CURVE_POINTS)
    minima_rows = []
    curve_rows = []
    json_curves = []
    json_minima = []
    for lam in lambdas:
        f = _curve_function(example, lam, teacher)
        located = grid_local_minima(f, 0.0, 1.0)
        best = min(v for _, v in located)
        for x, v in located:
            entry = {
                "lambda": lam,
                "parameter": x,
                "value": v,
                "label": _endpoint_label(x),
                "rounds_to": _rounds_to(x),
                "global": bool(v <= best + 1e-12),
            }
            minima_rows.append({"section": "minimum", **entry})
            json_minima.append(entry)
        samples = [(float(x), float(f(float(x)))) for x in grid]
        curve_rows.extend(
            {"section": "curve", "lambda": lam, "parameter": x, "value": v}
            for x, v in samples
        )
        json_curves.append({"lambda": lam, "samples": samples})

    if fmt == "json":
        payload = {
            "example": example,
            "lambdas": list(lambdas),
            "minima": json_minima,
            "curves": json_curves,
        }
        if example == 3:
            payload["m"] = teacher.m
        _emit(_json_text(payload), out)
        return
    columns = (
        "section", "lambda", "parameter", "value", "label", "rounds_to", "global",
    )
    _emit(_csv_text(columns, minima_rows + curve_rows), out)


@main.command()
@click.option("--n", type=int, default=16, show_default=True)
@click.option("--samples", type=int, default=None,
              help="training rows (default 20*n)")
@click.option("--noise", type=float, default=0.0, show_default=True)
@click.option("--lambda", "lambdas", multiple=True, type=float,
              help="penalty weight; repeatable (default: tuned to the task)")
@click.option("--seed", "seeds", multiple=True, type=int,
              help="task and run seed; repeatable (default: 0)")
@click.option("--out", type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(("csv", "json")),
              default="csv", show_default=True)
def shuffle(n, samples, noise, lambdas, seeds, out, fmt):
    """Sweep penalty weights on a synthetic shuffled-regression task.

    One optimizer run per (seed, lambda); the sweep section reports
    final losses, penalty, and whether the hidden permutation was
    recovered, and the trace section logs the recorded iterations.
    """
    if samples is None:
        samples = 20 * n
    seeds = tuple(seeds) if seeds else (0,)

    def solve(pair):
        seed, lam = pair
        task, dataset = generate_task(n, samples, noise, seed)
        problem = shuffle_objective(task, dataset)
        cfg = shuffle_default_config(problem, seed=seed)
        lam = cfg.lam if lam is None else lam
        entry = {"seed": seed, "lambda": lam}
        try:
            result = run(problem, replace(cfg, lam=lam))
        except OptimizationError as exc:
            entry.update(
                relaxed_loss=float("nan"),
                rounded_loss=float("nan"),
                penalty=float("nan"),
                recovered=False,
                failed=True,
                trace=exc.trace,
            )
            return entry
        perm = result.rounded[0]
        entry.update(
            relaxed_loss=problem.loss(result.final_weights, result.relaxed_matrices),
            rounded_loss=problem.loss(
                result.final_weights, [permutation_to_matrix(perm)]
            ),
            penalty=result.final_penalty,
            recovered=bool(np.array_equal(perm, task.p_star)),
            failed=False,
            trace=result.trace,
        )
        return entry

    pairs = [(seed, lam) for seed in seeds
             for lam in (lambdas if lambdas else (None,))]
    entries = _parallel_map(solve, pairs)

    if fmt == "json":
        payload = {
            "n": n,
            "samples": samples,
            "noise": noise,
            "runs": [
                {
                    "seed": e["seed"],
                    "lambda": e["lambda"],
                    "relaxed_loss": e["relaxed_loss"],
                    "rounded_loss": e["rounded_loss"],
                    "penalty": e["penalty"],
                    "recovered": e["recovered"],
                    "failed": e["failed"],
                    "trace": [
                        {
                            "iteration": t.iteration,
                            "loss": t.loss,
                            "penalty": t.penalty,
                            "constraint_violation": t.constraint_violation,
                            "rounding_gap": t.rounding_gap,
                            "argmax_matches_lap": t.argmax_matches_lap,
                        }
                        for t in e["trace"]
                    ],
                }
                for e in entries
            ],
        }
        _emit(_json_text(payload), out)
        return

    columns = (
        "section", "seed", "lambda",
        "relaxed_loss", "rounded_loss", "penalty", "recovered",
        "iteration", "loss", "constraint_violation", "rounding_gap",
        "argmax_matches_lap",
    )
    rows = []
    for e in entries:
        rows.append({
            "section": "sweep",
            "seed": e["seed"],
            "lambda": e["lambda"],
            "relaxed_loss": e["relaxed_loss"],
            "rounded_loss": e["rounded_loss"],
            "penalty": e["penalty"],
            "recovered": e["recovered"],
        })
    for e in entries:
        for t in e["trace"]:
            rows.append({
                "section": "trace",
                "seed": e["seed"],
                "lambda": e["lambda"],
                "iteration": t.iteration,
                "loss": t.loss,
                "penalty": t.penalty,
                "constraint_violation": t.constraint_violation,
                "rounding_gap": t.rounding_gap,
                "argmax_matches_lap": t.argmax_matches_lap,
            })
    _emit(_csv_text(columns, rows), out)


if __name__ == "__main__":
    main()
