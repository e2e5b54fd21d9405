"""Command-line entry point: generate / evaluate / report / survey.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import socket
import sys
from pathlib import Path

import click

from .config import SurveySettings, load_config
from .errors import AgrisynthError
from .experiment import (
    aggregate_metrics,
    evaluate_dataset,
    generate_dataset,
    read_records_csv,
    render_report,
    run_experiment,
)
from .methods import Method

_METHOD_FLAGS = {
    "text": Method.TEXT_TO_IMAGE,
    "variation": Method.IMAGE_VARIATION,
    "text_to_image": Method.TEXT_TO_IMAGE,
    "image_variation": Method.IMAGE_VARIATION,
}


@click.group()
@click.version_option(package_name="agrisynth")
def cli():
    """Synthetic crop-image generation, quality scoring, and realism surveys."""


@cli.command()
@click.option("--config", "config_path", required=True, help="Path to the YAML config file.")
@click.option(
    "--method",
    "method_flag",
    type=click.Choice(sorted(_METHOD_FLAGS)),
    default=None,
    help="Generate with one method only (default: all configured).",
)
@click.option("--category", "category", default=None, help="Restrict to one category.")
@click.option(
    "--out",
    "out_dir",
    default=None,
    help="Dataset root to write PNGs to (default: {output_dir}/images).",
)
def generate(config_path, method_flag, category, out_dir):
    """Run only the generation stage, populating the cache and dataset dir."""
    cfg = load_config(config_path).require_experiment()
    methods = (_METHOD_FLAGS[method_flag],) if method_flag else None
    categories = [category] if category else None
    if categories and not any(c.name == category for c in cfg.categories):
        raise click.UsageError(f"unknown category: {category}")
    results = generate_dataset(
        cfg,
        dataset_root=Path(out_dir) if out_dir else None,
        methods=methods,
        categories=categories,
    )
    total = sum(len(paths) for paths in results.values())
    click.echo(f"generated {total} images across {len(results)} (category, method) sets")


@cli.command()
@click.option("--config", "config_path", required=True, help="Path to the YAML config file.")
@click.option("--out", "out_dir", default=None, help="Report directory (default: output_dir).")
@click.option(
    "--dataset",
    "dataset_root",
    default=None,
    help="Dataset root to score (default: {output_dir}/images).",
)
@click.option(
    "--full",
    is_flag=True,
    help="Generate anything missing first, then evaluate (full pipeline).",
)
def evaluate(config_path, out_dir, dataset_root, full):
    """Score the dataset against ground truth and write the report files."""
    cfg = load_config(config_path).require_experiment()
    if out_dir:
        cfg.output_dir = Path(out_dir)
    if full:
        report = run_experiment(cfg)
    else:
        report = evaluate_dataset(
            cfg, dataset_root=Path(dataset_root) if dataset_root else None
        )
    click.echo(f"scored {len(report.records)} images; reports in {cfg.output_dir}")
    for metric, change in sorted(report.summary.percent_changes.items()):
        click.echo(f"  {metric}: variation vs text {change:+.2f}%")


@cli.command()
@click.option("--records", "records_path", required=True, help="records.csv from a previous run.")
@click.option("--out", "out_dir", required=True, help="Directory for the regenerated report.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
def report(records_path, out_dir, fmt):
    """Re-aggregate an existing records file into summary artifacts."""
    records = read_records_csv(records_path)
    table = aggregate_metrics(records)
    written = render_report(table, records, fmt, Path(out_dir))
    click.echo(f"wrote {', '.join(str(p) for p in written)}")


@cli.group()
def survey():
    """Serve or aggregate the blinded realism survey."""


def _survey_settings(config_path) -> SurveySettings:
    if config_path is None:
        return SurveySettings()
    return load_config(config_path).survey


@survey.command()
@click.option("--config", "config_path", default=None, help="Optional YAML config file.")
@click.option("--pool", "pool_path", default=None, help="Pool manifest JSON.")
@click.option("--port", type=int, default=None, help="Port (0 picks an ephemeral one).")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--seed", type=int, default=None, help="Base seed for session shuffles.")
@click.option("--admin", is_flag=True, default=None, help="Enable GET /api/results.")
@click.option("--store", "store_path", default=None, help="Ratings ndjson file.")
@click.option("--static", "static_dir", default=None, help="Survey UI asset directory.")
def serve(config_path, pool_path, port, host, seed, admin, store_path, static_dir):
    """Start the survey HTTP service."""
    import uvicorn

    from .survey import RatingsStore, create_app, load_pool

    settings = _survey_settings(config_path)
    pool_file = Path(pool_path) if pool_path else settings.pool
    if pool_file is None:
        raise click.UsageError("a pool manifest is required (--pool or config survey.pool)")
    pool = load_pool(pool_file)
    store = RatingsStore(Path(store_path) if store_path else settings.store)
    app = create_app(
        pool,
        store,
        base_seed=seed if seed is not None else settings.seed,
        admin=admin if admin is not None else settings.admin,
        static_dir=Path(static_dir) if static_dir else settings.static_dir,
    )

    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((host, port if port is not None else settings.port))
    except OSError as exc:
        raise AgrisynthError(f"cannot bind survey port: {exc}") from exc
    bound_port = sock.getsockname()[1]
    click.echo(f"survey service listening on http://{host}:{bound_port}", nl=True)
    sys.stdout.flush()
    server = uvicorn.Server(uvicorn.Config(app, log_level="warning"))
    server.run(sockets=[sock])


@survey.command()
@click.option("--config", "config_path", default=None, help="Optional YAML config file.")
@click.option("--pool", "pool_path", default=None, help="Pool manifest JSON.")
@click.option("--store", "store_path", default=None, help="Ratings ndjson file.")
def aggregate(config_path, pool_path, store_path):
    """Print mean rating and count per (category, source) as CSV."""
    from .survey import aggregate_ratings, load_pool

    settings = _survey_settings(config_path)
    pool_file = Path(pool_path) if pool_path else settings.pool
    if pool_file is None:
        raise click.UsageError("a pool manifest is required (--pool or config survey.pool)")
    store_file = Path(store_path) if store_path else settings.store
    pool = load_pool(pool_file)
    table = aggregate_ratings(store_file, pool)
    click.echo("category,source,mean,n")
    for (category, source), cell in sorted(
        table.items(), key=lambda kv: (kv[0][0], kv[0][1].value)
    ):
        click.echo(f"{category},{source.value},{cell['mean']!r},{cell['n']}")


def main():
    try:
        cli.main(standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(1)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except AgrisynthError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    except KeyboardInterrupt:
        click.echo("interrupted; partial results flushed", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
