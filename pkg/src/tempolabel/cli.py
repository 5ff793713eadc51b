"""Command-line surface tying the modules together.

Subcommands: infer-habit, soft-labels, evaluate, simulate, detect,
histogram. Everything reads CSV/JSON and writes CSV/JSON; outputs embed the
effective configuration so reruns are traceable. Exit codes: 0 success,
2 usage or parse error, 3 numeric degeneracy.
"""

from __future__ import annotations

import functools
import sys
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path

import click
import numpy as np

from . import __version__
from .catalog import DEFAULT_PERIODS, CategoryCatalog
from .errors import ConfigError, DegenerateModelError, InputError
from .evaluation import (
    EvalWindowSpec,
    boundary_mse,
    metrics_report,
    mse,
    soft_confusion,
)
from .hmm import HmmParams, fit_emissions, viterbi
from .inference import AnnotationSet, SwitchModel, category_posterior, habit_posterior
from .ingest import (
    read_annotations_csv,
    read_json,
    read_label_csv,
    read_sensor_csv,
    write_json,
    write_label_csv,
    write_table_csv,
)
from .labels import LabelSeries, padded_window, soft_label
from .simulate import (
    DEFAULT_N_SWEEP,
    DEFAULT_RESOLUTIONS,
    SimConfig,
    run_error_rate_experiment,
    run_f1_experiment,
    run_mse_experiment,
)

EXIT_USAGE = 2
EXIT_DEGENERATE = 3


def _guard(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (InputError, ConfigError) as exc:  # ParseError subclasses InputError
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_USAGE)
        except DegenerateModelError as exc:
            click.echo(f"numeric degeneracy: {exc}", err=True)
            sys.exit(EXIT_DEGENERATE)

    return wrapper


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p.strip()) for p in text.split(",") if p.strip())
    except ValueError:
        raise ConfigError(f"expected a comma-separated list of integers, got {text!r}")


def _parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(p.strip()) for p in text.split(",") if p.strip())
    except ValueError:
        raise ConfigError(f"expected a comma-separated list of numbers, got {text!r}")


def _catalog_from(text: str) -> CategoryCatalog:
    return CategoryCatalog.from_periods(_parse_int_list(text))


@dataclass(frozen=True)
class RunConfig:
    """Validated bundle of the knobs shared by the annotation commands."""

    catalog: CategoryCatalog
    model: SwitchModel
    boundary_halfwidth: int = 15
    seed: int = 0

    @classmethod
    def build(cls, catalog_spec: str, delta: float, boundary_halfwidth: int = 15, seed: int = 0):
        if boundary_halfwidth <= 0:
            raise ConfigError("boundary window must be positive")
        return cls(
            catalog=_catalog_from(catalog_spec),
            model=SwitchModel(delta=delta),
            boundary_halfwidth=boundary_halfwidth,
            seed=seed,
        )

    def describe(self) -> dict:
        return {
            "delta": self.model.delta,
            "catalog": list(self.catalog.periods),
        }


_CATALOG_OPT = click.option(
    "--catalog",
    "catalog_spec",
    default=",".join(str(p) for p in DEFAULT_PERIODS),
    show_default=True,
    help="Category periods in minutes, coarsest first.",
)
_DELTA_OPT = click.option(
    "--delta", default=0.1, show_default=True, help="Habit switch probability."
)


def _group_by_annotator(records):
    """Evidence per annotator, file order, start then end per event."""
    grouped: dict[str, list] = defaultdict(list)
    for rec in records:
        grouped[rec.annotator_id].append(rec)
    evidence = {}
    for annotator_id, recs in grouped.items():
        stamps = []
        for rec in recs:
            stamps.append(rec.start)
            stamps.append(rec.end)
        evidence[annotator_id] = (recs, AnnotationSet.from_timestamps(annotator_id, stamps))
    return evidence


@click.group()
@click.version_option(version=__version__, prog_name="tempolabel")
def main():
    """Annotation time-resolution inference, soft labels, and evaluation."""


@main.command("infer-habit")
@click.argument("annotations_csv", type=click.Path(exists=True, dir_okay=False))
@_DELTA_OPT
@_CATALOG_OPT
@click.option("--annotator", default=None, help="Only report this annotator.")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@_guard
def infer_habit_cmd(annotations_csv, delta, catalog_spec, annotator, out):
    """Infer each annotator's habitual time resolution from a diary CSV."""
    run = RunConfig.build(catalog_spec, delta)
    records = read_annotations_csv(annotations_csv)
    evidence = _group_by_annotator(records)
    if annotator is not None:
        evidence = {k: v for k, v in evidence.items() if k == annotator}
        if not evidence:
            click.echo(f"warning: no rows for annotator {annotator!r}", err=True)
    report = {"config": run.describe(), "annotators": []}
    for annotator_id in sorted(evidence):
        _, ann_set = evidence[annotator_id]
        habit = habit_posterior(ann_set, run.catalog, run.model)
        rows = category_posterior(ann_set, run.catalog, run.model, habit=habit)
        report["annotators"].append(
            {
                "annotator_id": annotator_id,
                "n_annotations": len(ann_set),
                "habit": habit.to_dict(),
                "annotations": rows.to_dict()["annotations"],
            }
        )
    write_json(out, report)
    click.echo(f"wrote {out} ({len(report['annotators'])} annotators)")


@main.command("soft-labels")
@click.argument("annotations_csv", type=click.Path(exists=True, dir_okay=False))
@_DELTA_OPT
@_CATALOG_OPT
@click.option("--pad", default=15, show_default=True, help="Extra minutes of window padding.")
@click.option("--out", type=click.Path(file_okay=False), required=True)
@_guard
def soft_labels_cmd(annotations_csv, delta, catalog_spec, pad, out):
    """Write one soft-label series CSV per annotated event."""
    run = RunConfig.build(catalog_spec, delta)
    records = read_annotations_csv(annotations_csv)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = 0
    for annotator_id, (recs, ann_set) in sorted(_group_by_annotator(records).items()):
        habit = habit_posterior(ann_set, run.catalog, run.model)
        rows = category_posterior(ann_set, run.catalog, run.model, habit=habit)
        for k, rec in enumerate(recs):
            cat_s = rows.map_category(2 * k)
            cat_e = rows.map_category(2 * k + 1)
            event = rec.to_event()
            series = soft_label(event, cat_s, cat_e, padded_window(event, cat_s, cat_e, pad))
            config = {
                "annotator_id": annotator_id,
                "date": rec.date,
                "event_kind": rec.event_kind,
                "delta": run.model.delta,
                "catalog": ",".join(str(p) for p in run.catalog.periods),
                "start_period": cat_s.period_minutes,
                "end_period": cat_e.period_minutes,
            }
            path = out_dir / f"softlabel_{annotator_id}_{k:03d}.csv"
            write_label_csv(path, series, config)
            written += 1
    click.echo(f"wrote {written} label series to {out_dir}")


def _binary_boundaries(series: LabelSeries) -> list[tuple[int, int]]:
    """(start, end) pairs of the 1-runs of a binary series."""
    vals = series.values.astype(int)
    edges = np.diff(np.concatenate(([0], vals, [0])))
    starts = np.flatnonzero(edges == 1) + series.window_start
    ends = np.flatnonzero(edges == -1) + series.window_start
    return list(zip(starts.tolist(), ends.tolist()))


@main.command("evaluate")
@click.option("--labels", "labels_csv", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option(
    "--predictions", "predictions_csv", type=click.Path(exists=True, dir_okay=False), required=True
)
@click.option("--boundary-window", default=15, show_default=True, help="Half-width in minutes.")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--csv", "csv_out", type=click.Path(dir_okay=False), default=None)
@_guard
def evaluate_cmd(labels_csv, predictions_csv, boundary_window, out, csv_out):
    """Score a prediction series against a (possibly soft) label series."""
    reference = read_label_csv(labels_csv)
    prediction = read_label_csv(predictions_csv)
    window_spec = EvalWindowSpec(mode="boundary", boundary_halfwidth_minutes=boundary_window)
    hard_ref = LabelSeries(reference.window_start, (reference.values >= 0.5).astype(float))
    hard_pred = LabelSeries(prediction.window_start, (prediction.values >= 0.5).astype(float))
    payload = {
        "config": {
            "labels": str(labels_csv),
            "predictions": str(predictions_csv),
            "boundary_window": window_spec.boundary_halfwidth_minutes,
            "n_slots": len(reference),
        },
        "hard": metrics_report(soft_confusion(hard_ref, hard_pred)),
        "soft": metrics_report(soft_confusion(reference, prediction)),
        "mse_full": mse(reference, prediction),
    }
    if reference.is_binary():
        events = _binary_boundaries(reference)
        if events:
            payload["mse_boundary"] = boundary_mse(
                reference,
                prediction,
                events,
                halfwidth=window_spec.boundary_halfwidth_minutes,
            )
    write_json(out, payload)
    if csv_out:
        rows = _flatten_metrics(payload)
        write_table_csv(csv_out, rows)
    click.echo(f"wrote {out}")


def _flatten_metrics(payload: dict) -> list[dict]:
    rows = []
    config = {"boundary_window": payload["config"]["boundary_window"]}
    for kind in ("hard", "soft"):
        block = payload[kind]
        for entry, value in block["confusion"].items():
            if entry == "degenerate":
                continue
            rows.append({"metric": f"{kind}_{entry}", "value": float(value), **config})
        for metric in ("precision", "recall", "f1"):
            rows.append({"metric": f"{kind}_{metric}", "value": float(block[metric]), **config})
    rows.append({"metric": "mse_full", "value": float(payload["mse_full"]), **config})
    if "mse_boundary" in payload:
        rows.append({"metric": "mse_boundary", "value": float(payload["mse_boundary"]), **config})
    return rows


@main.command("simulate")
@click.option("--seed", default=0, show_default=True)
@click.option("--events", default=200, show_default=True, help="Events per sweep point.")
@click.option("--trials", default=300, show_default=True, help="Trials per error-rate point.")
@click.option(
    "--resolutions",
    default=",".join(str(r) for r in DEFAULT_RESOLUTIONS),
    show_default=True,
)
@click.option("--biases", default="0,0.5", show_default=True)
@click.option(
    "--n-sweep",
    default=",".join(str(n) for n in DEFAULT_N_SWEEP),
    show_default=True,
    help="Annotation counts for the error-rate experiment.",
)
@_DELTA_OPT
@_CATALOG_OPT
@click.option(
    "--experiment",
    type=click.Choice(["all", "mse", "f1", "error-rate"]),
    default="all",
    show_default=True,
)
@click.option("--out", type=click.Path(file_okay=False), required=True)
@_guard
def simulate_cmd(
    seed, events, trials, resolutions, biases, n_sweep, delta, catalog_spec, experiment, out
):
    """Run the synthetic experiments and write their tables as CSV."""
    run = RunConfig.build(catalog_spec, delta, seed=seed)
    catalog = run.catalog
    res_list = _parse_int_list(resolutions)
    bias_list = _parse_float_list(biases)
    n_list = _parse_int_list(n_sweep)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    base = SimConfig(seed=seed, n_events=events, delta=delta)
    shared = {
        "seed": seed,
        "delta": delta,
        "catalog": ",".join(str(p) for p in catalog.periods),
        "tool_version": __version__,
    }
    if experiment in ("all", "mse"):
        table = run_mse_experiment(base, resolutions=res_list, catalog=catalog)
        write_table_csv(out_dir / "mse.csv", table, {**shared, "n_events": events})
        click.echo(f"wrote {out_dir / 'mse.csv'}")
    if experiment in ("all", "f1"):
        table = run_f1_experiment(
            base, resolutions=res_list, bias_fractions=bias_list, catalog=catalog
        )
        write_table_csv(out_dir / "f1.csv", table, {**shared, "n_events": events})
        click.echo(f"wrote {out_dir / 'f1.csv'}")
    if experiment in ("all", "error-rate"):
        table = run_error_rate_experiment(
            seed=seed, n_values=n_list, trials=trials, delta=delta, catalog=catalog
        )
        write_table_csv(out_dir / "error_rate.csv", table, {**shared, "trials": trials})
        click.echo(f"wrote {out_dir / 'error_rate.csv'}")


@main.command("detect")
@click.argument("sensor_csv", type=click.Path(exists=True, dir_okay=False))
@click.option("--params", "params_json", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--fit", "fit_first", is_flag=True, help="Refine parameters by EM before decoding.")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@_guard
def detect_cmd(sensor_csv, params_json, fit_first, out):
    """Decode on/off event predictions from a sensor series with an HMM."""
    series = read_sensor_csv(sensor_csv)
    params = HmmParams.from_dict(read_json(params_json))
    if fit_first:
        fit = fit_emissions(series, params)
        if fit.degenerate:
            click.echo("warning: degenerate fit (states collapsed); decoding anyway", err=True)
        params = fit.params
    decoded = viterbi(params, series)
    write_label_csv(
        out,
        decoded,
        {"params": str(params_json), "fit": fit_first, "n_slots": len(decoded)},
    )
    click.echo(f"wrote {out}")


@main.command("histogram")
@click.argument("annotations_csv", type=click.Path(exists=True, dir_okay=False))
@_CATALOG_OPT
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@_guard
def histogram_cmd(annotations_csv, catalog_spec, out):
    """Per-annotator counts of the coarsest category containing each minute."""
    catalog = _catalog_from(catalog_spec)
    records = read_annotations_csv(annotations_csv)
    counts: dict[tuple[str, int], int] = {}
    annotators = sorted({rec.annotator_id for rec in records})
    for annotator_id in annotators:
        for cat in catalog:
            counts[(annotator_id, cat.period_minutes)] = 0
    for rec in records:
        for stamp in (rec.start, rec.end):
            cat = catalog.coarsest_containing(stamp % 60)
            counts[(rec.annotator_id, cat.period_minutes)] += 1
    rows = [
        {
            "annotator_id": annotator_id,
            "period_minutes": period,
            "count": counts[(annotator_id, period)],
        }
        for annotator_id in annotators
        for period in catalog.periods
    ]
    write_table_csv(out, rows, {"catalog": ",".join(str(p) for p in catalog.periods)})
    click.echo(f"wrote {out}")


if __name__ == "__main__":
    main()
