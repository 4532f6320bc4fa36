"""Command-line front door: simulate, recompute, stats, export, serve."""
from __future__ import annotations

import json
from datetime import date
from pathlib import Path

import click

from .recompute import recompute_all
from .scoring import ScoringConfig
from .simulate import SimParams, default_catalog, simulate
from .stats import compute_stats, export_scores
from .store import EventStore


def _load_cfg(config: str | None) -> ScoringConfig:
    return ScoringConfig.from_file(config) if config else ScoringConfig()


@click.group()
@click.option("--data-dir", default="./data", show_default=True, help="Store directory.")
@click.option("--config", default=None, type=click.Path(exists=True), help="Scoring config (YAML).")
@click.option("--seed", default=0, show_default=True, type=int)
@click.pass_context
def main(ctx: click.Context, data_dir: str, config: str | None, seed: int) -> None:
    ctx.ensure_object(dict)
    ctx.obj["store"] = EventStore(data_dir)
    ctx.obj["cfg"] = _load_cfg(config)
    ctx.obj["seed"] = seed


@main.command()
@click.option("--students", required=True, type=int)
@click.option("--days", required=True, type=int)
@click.option("--videos", default=0, type=int, help="Generate a catalog of this size if none exists.")
@click.option("--start", default="2026-01-05", show_default=True, help="First day of the cohort.")
@click.option("--session-prob", default=0.5, show_default=True, type=float)
@click.option(
    "--mix",
    default=None,
    help='Behavior weights as JSON, e.g. \'{"linear": 1.0, "reviser": 0.5}\'.',
)
@click.pass_context
def simulate_cmd(ctx, students, days, videos, start, session_prob, mix):
    """Generate a synthetic cohort's event logs."""
    store: EventStore = ctx.obj["store"]
    if videos and not store.load_catalog():
        store.save_catalog(default_catalog(videos, seed=ctx.obj["seed"]))
    try:
        params = SimParams(
            students=students,
            days=days,
            seed=ctx.obj["seed"],
            start=date.fromisoformat(start),
            session_prob=session_prob,
            **({"mix": json.loads(mix)} if mix else {}),
        )
    except ValueError as exc:
        raise click.BadParameter(str(exc))
    count = simulate(store, params)
    click.echo(f"wrote {count} events for {students} students over {days} days")


main.add_command(simulate_cmd, name="simulate")


@main.command()
@click.option("--as-of", required=True, help="Recompute snapshot date (YYYY-MM-DD).")
@click.pass_context
def recompute(ctx, as_of):
    """Recompute every video's score snapshot from its log."""
    results = recompute_all(ctx.obj["store"], ctx.obj["cfg"], date.fromisoformat(as_of))
    ok = sum(1 for p in results.values() if p is not None)
    failed = sorted(v for v, p in results.items() if p is None)
    click.echo(f"recomputed {ok}/{len(results)} videos as of {as_of}")
    if failed:
        click.echo(f"failed: {', '.join(failed)}", err=True)
        raise SystemExit(1)


@main.command()
@click.option("--json", "as_json", is_flag=True, help="Emit the report as JSON.")
@click.pass_context
def stats(ctx, as_json):
    """Cohort usage statistics over the stored logs."""
    report = compute_stats(ctx.obj["store"])
    if as_json:
        click.echo(json.dumps(report.to_wire(), indent=2))
        return
    click.echo(f"distinct_sessions:        {report.distinct_sessions}")
    click.echo(f"hours_streamed:           {report.hours_streamed:.2f}")
    click.echo(f"mean_videos_per_session:  {report.mean_videos_per_session:.2f}")
    click.echo(f"mean_seconds_per_session: {report.mean_seconds_per_session:.1f}")
    click.echo(f"mean_fraction_viewed:     {report.mean_fraction_viewed:.3f}")
    click.echo(f"stddev_fraction_viewed:   {report.stddev_fraction_viewed:.3f}")


@main.command()
@click.argument("video_id")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--which", type=click.Choice(["raw", "normalized"]), default="normalized", show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.pass_context
def export(ctx, video_id, fmt, which, out):
    """Export a video's latest snapshot scores to a file."""
    path = export_scores(ctx.obj["store"], video_id, fmt, which, out)
    click.echo(f"wrote {path}")


@main.command()
@click.option("--port", default=8080, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--tz", default="UTC", show_default=True, help="Reporting zone for the midnight recompute.")
@click.option("--ui-dir", default=None, type=click.Path(), help="Static UI assets to serve at /.")
@click.pass_context
def serve(ctx, port, host, tz, ui_dir):
    """Run the HTTP service with the midnight recompute scheduler."""
    import uvicorn

    from .recompute import MidnightScheduler
    from .service import create_app

    store: EventStore = ctx.obj["store"]
    cfg: ScoringConfig = ctx.obj["cfg"]
    if tz != cfg.tz:
        from dataclasses import replace

        cfg = replace(cfg, tz=tz)
    app = create_app(store, cfg, ui_dir=Path(ui_dir) if ui_dir else None)
    scheduler = MidnightScheduler(store, cfg, tz=tz)
    scheduler.start()
    try:
        uvicorn.run(app, host=host, port=port)
    finally:
        scheduler.stop()


if __name__ == "__main__":
    main()
