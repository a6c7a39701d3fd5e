"""Command-line front end: run scenarios from config files, verify the
acceptance suite, list scenarios, and render static plots.

Exit codes: 0 success, 1 execution/validation error, 2 bound-check failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__, acceptance, scenarios
from .errors import ConfigError, IntegrationAccuracyError, ValidationError


def _parse_set_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        raise ConfigError(f"override value {text!r} is not valid JSON "
                          "(numbers, true/false)") from None


def _apply_overrides(raw: dict, overrides: list[str]) -> dict:
    out = json.loads(json.dumps(raw))   # deep copy, JSON types only
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key, _, value = item.partition("=")
        value = _parse_set_value(value)
        parts = key.split(".")
        if len(parts) == 1:
            out.setdefault("params", {})[parts[0]] = value
        elif len(parts) == 2 and parts[0] in ("params", "grid", "output"):
            out.setdefault(parts[0], {})[parts[1]] = value
        else:
            raise ConfigError(f"override key {key!r} must be bare (a parameter) or "
                              "one of params.*, grid.*, output.*")
    return out


def _write_series(path: Path, columns: list[str], series: dict) -> None:
    n = len(series[columns[0]]) if columns else 0
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for i in range(n):
            writer.writerow([f"{float(series[c][i]):.17g}" for c in columns])


def _read_series(path: Path) -> tuple[list[str], dict]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"series file {path} is empty") from None
        rows = list(reader)
    if not header or not rows:
        raise ValidationError(f"series file {path} has no data rows")
    data = {c: [] for c in header}
    for row in rows:
        if len(row) != len(header):
            raise ValidationError(f"series file {path} has a ragged row: {row}")
        for c, cell in zip(header, row):
            data[c].append(float(cell))
    return header, data


def _default_panels(columns: list[str]) -> list[list[str]]:
    have = set(columns)
    if {"lhs", "U_M", "margin"} <= have:
        return [["lhs", "U_M"], ["margin"]]
    if {"dVar", "L_v", "margin"} <= have:
        return [["dVar", "L_v"], ["margin"]]
    rest = [c for c in columns if c != columns[0]]
    return [rest] if rest else [[columns[0]]]


def render_plot(series_path: Path, out_path: Path, spec: str | None = None) -> None:
    """Static line plot of a series file: one panel per ';'-separated column
    group in `spec`, default value+bound over margin."""
    import matplotlib
    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "infocost"   # reproducible element ids
    import matplotlib.pyplot as plt

    header, data = _read_series(series_path)
    x_col = header[0]
    if spec:
        panels = [[c.strip() for c in group.split(",") if c.strip()]
                  for group in spec.split(";") if group.strip()]
        for group in panels:
            for c in group:
                if c not in data:
                    raise ValidationError(f"unknown series column {c!r} in plot spec")
    else:
        panels = _default_panels(header)
    fig, axes = plt.subplots(len(panels), 1, figsize=(7, 3 * len(panels)),
                             sharex=True, squeeze=False)
    for ax, group in zip(axes[:, 0], panels):
        for col in group:
            ax.plot(data[x_col], data[col], label=col)
        ax.set_ylabel(", ".join(group))
        ax.legend(loc="best", fontsize="small")
        ax.grid(True, alpha=0.3)
    axes[-1, 0].set_xlabel(x_col)
    fig.tight_layout()
    fig.savefig(out_path, format="svg", metadata={"Date": None})
    plt.close(fig)


def cmd_run(args) -> int:
    with open(args.config) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {args.config} is not valid JSON: {exc}") from None
    raw = _apply_overrides(raw, args.set or [])
    if args.grid_points is not None:
        raw.setdefault("grid", {})["n_points"] = args.grid_points
    config = scenarios.ScenarioConfig.from_dict(raw)
    report = scenarios.run_scenario(config)

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    series_path = outdir / "series.csv"
    report_path = outdir / "report.json"
    _write_series(series_path, report.series_columns, report.series)
    artifacts = {"series": str(series_path), "report": str(report_path)}
    doc = report.to_dict()
    doc["tool_version"] = __version__
    doc["config"] = raw
    if config.output.get("plot"):
        plot_path = outdir / "plot.svg"
        render_plot(series_path, plot_path)
        artifacts["plot"] = str(plot_path)
    doc["artifacts"] = artifacts
    with open(report_path, "w", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")

    for check in report.checks:
        print(check.line())
    print(f"wrote {series_path} and {report_path}")
    return 0 if report.passed else 2


def cmd_verify(args) -> int:
    suite = args.suite
    if suite == "all":
        ids = list(acceptance.ACCEPTANCE_CHECKS)
    elif suite in acceptance.ACCEPTANCE_CHECKS:
        ids = [suite]
    else:
        print(f"unknown acceptance check {suite!r}; available: "
              f"all, {', '.join(acceptance.ACCEPTANCE_CHECKS)}", file=sys.stderr)
        return 1
    results = acceptance.run_acceptance(ids)
    width = max(len(r.check_id) for r in results)
    print(f"{'check':<{width}}  status  runtime")
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.check_id:<{width}}  {status}    {r.runtime:6.2f}s  {r.detail}")
    n_fail = sum(not r.passed for r in results)
    print(f"{len(results) - n_fail}/{len(results)} checks passed")
    return 0 if n_fail == 0 else 2


def cmd_list(_args) -> int:
    for name, spec in scenarios.SCENARIOS.items():
        print(f"{name}: {spec.description}")
        print(f"  params: {spec.params}")
        if spec.grid is not None:
            print(f"  grid:   {spec.grid}")
    return 0


def cmd_plot(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    target = out / "plot.svg"
    render_plot(Path(args.series), target, args.spec)
    print(f"wrote {target}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="infocost",
        description="Maximum-entropy reference states and information-cost bounds "
                    "for few-level quantum systems")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario from a config file")
    p_run.add_argument("--config", required=True, help="JSON config path")
    p_run.add_argument("--out", default="infocost-out", help="output directory")
    p_run.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config entry (bare keys go to params)")
    p_run.add_argument("--grid-points", type=int, default=None,
                       help="shortcut for grid.n_points")
    p_run.set_defaults(fn=cmd_run)

    p_verify = sub.add_parser("verify", help="run acceptance checks")
    p_verify.add_argument("suite", nargs="?", default="all",
                          help="'all' or a single check id")
    p_verify.set_defaults(fn=cmd_verify)

    p_list = sub.add_parser("list", help="list scenarios and default parameters")
    p_list.set_defaults(fn=cmd_list)

    p_plot = sub.add_parser("plot", help="render an SVG plot from a series file")
    p_plot.add_argument("series", help="series.csv path")
    p_plot.add_argument("--out", default="infocost-out", help="output directory")
    p_plot.add_argument("--spec", default=None,
                        help="panel spec, e.g. 'dVar,L_v;margin'")
    p_plot.set_defaults(fn=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, ValidationError, IntegrationAccuracyError,
            FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
