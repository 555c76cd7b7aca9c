"""Command-line interface for hitcurve."""

import logging
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path

import click
from pydantic import ValidationError

from hitcurve import __version__
from hitcurve.config import EvalSettings, RunConfig
from hitcurve.data import PartitionTable, read_grouped_counts, read_scores
from hitcurve.errors import DegenerateDataError, HitCurveError, MalformedInput
from hitcurve.quasiconcave import QuasiConcaveModel
from hitcurve.report import (
    curves_report,
    diff_report,
    inflate_report,
    metrics_report,
    quasi_report,
    rank_report,
    render,
    scenario_report,
    study_report,
)
from hitcurve.simulation import BinormalScenario, replicate_study, scenario_grid

EXIT_INPUT = 2
EXIT_DEGENERATE = 3


@contextmanager
def _exit_codes() -> Iterator[None]:
    """Turn library errors into an error message and an exit code."""
    try:
        yield
    except DegenerateDataError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(EXIT_DEGENERATE)
    except (HitCurveError, ValidationError) as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(EXIT_INPUT)


def _split(text: str, kind: type, name: str) -> list:
    try:
        return [kind(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(f"expected a comma-separated list, got {text!r}", param_hint=name)


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        click.echo(text, nl=False)
    else:
        output.write_text(text)


def _settings(ctx: click.Context) -> EvalSettings:
    return ctx.obj["settings"]


def _load_table(config: RunConfig, score_col: str | None, grouped: bool) -> PartitionTable:
    assert config.input is not None
    if grouped:
        return read_grouped_counts(config.input)
    data = read_scores(config.input, config.label_col, [score_col] if score_col else None)
    if score_col is None:
        names = list(data.columns) + list(data.problems)
        if len(names) != 1:
            raise MalformedInput(f"several score columns ({', '.join(names)}); pick --score-col")
        score_col = names[0]
    return PartitionTable.from_arrays(data.column(score_col), data.labels)


input_option = click.option(
    "--input",
    "input_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="CSV file with a header",
)
label_option = click.option("--label-col", help="Name of the 0/1 label column")
se_option = click.option("--se", "se_methods", help="SE methods: asymptotic,pboot,npboot")
bootstrap_option = click.option("--bootstrap", type=int, help="Bootstrap replicates B")
seed_option = click.option("--seed", type=int, help="Random seed")
format_option = click.option(
    "--format", "output_format", type=click.Choice(["json", "csv"]), help="Output format"
)
output_option = click.option(
    "--output", type=click.Path(dir_okay=False, path_type=Path), help="Write output here"
)


@click.group()
@click.version_option(version=__version__)
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False, path_type=Path),
    help="YAML file with default settings",
)
@click.option("--verbose", is_flag=True, help="Log debug messages to stderr")
@click.pass_context
def main(ctx: click.Context, config_path: Path | None, verbose: bool) -> None:
    """hitcurve - AUC and average precision for diagnostic scores."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s [%(levelname)s] %(message)s",
        handlers=[logging.StreamHandler()],
        force=True,
    )
    ctx.ensure_object(dict)
    with _exit_codes():
        ctx.obj["settings"] = (
            EvalSettings.load(config_path) if config_path is not None else EvalSettings()
        )


@main.command()
@input_option
@label_option
@click.option("--score-col", help="Score column (needed when the file has several)")
@click.option("--grouped", is_flag=True, help="Input has columns score,cases,controls")
@se_option
@bootstrap_option
@seed_option
@format_option
@output_option
@click.pass_context
def metrics(
    ctx: click.Context,
    input_path: Path,
    label_col: str | None,
    score_col: str | None,
    grouped: bool,
    se_methods: str | None,
    bootstrap: int | None,
    seed: int | None,
    output_format: str | None,
    output: Path | None,
) -> None:
    """AUC (exact and paper modes), AP, prevalence, beta_hat and SEs."""
    with _exit_codes():
        config = RunConfig.from_settings(
            "metrics",
            _settings(ctx),
            input=input_path,
            label_col=label_col,
            score_cols=[score_col] if score_col else None,
            se_methods=se_methods,
            bootstrap=bootstrap,
            seed=seed,
            output_format=output_format,
            output=output,
        )
        table = _load_table(config, score_col, grouped)
        _emit(render(metrics_report(table, config), config.output_format), config.output)


@main.command()
@input_option
@label_option
@click.option("--score-cols", help="Comma-separated score columns (default: all)")
@se_option
@bootstrap_option
@seed_option
@format_option
@output_option
@click.pass_context
def rank(
    ctx: click.Context,
    input_path: Path,
    label_col: str | None,
    score_cols: str | None,
    se_methods: str | None,
    bootstrap: int | None,
    seed: int | None,
    output_format: str | None,
    output: Path | None,
) -> None:
    """Rank score columns (biomarkers) by AP, then AUC, then name."""
    with _exit_codes():
        config = RunConfig.from_settings(
            "rank",
            _settings(ctx),
            input=input_path,
            label_col=label_col,
            score_cols=_split(score_cols, str, "--score-cols") if score_cols else None,
            se_methods=se_methods,
            bootstrap=bootstrap,
            seed=seed,
            output_format=output_format,
            output=output,
        )
        assert config.input is not None
        data = read_scores(config.input, config.label_col, config.score_cols)
        _emit(render(rank_report(data, config), config.output_format), config.output)


@main.command()
@input_option
@label_option
@click.option("--score-col", help="Score column (needed when the file has several)")
@click.option("--grouped", is_flag=True, help="Input has columns score,cases,controls")
@format_option
@output_option
@click.pass_context
def curves(
    ctx: click.Context,
    input_path: Path,
    label_col: str | None,
    score_col: str | None,
    grouped: bool,
    output_format: str | None,
    output: Path | None,
) -> None:
    """Export hit, ROC and PR curve points (CSV columns kind,x,y)."""
    with _exit_codes():
        config = RunConfig.from_settings(
            "curves",
            _settings(ctx),
            input=input_path,
            label_col=label_col,
            se_methods=[],
            output_format=output_format or "csv",
            output=output,
        )
        table = _load_table(config, score_col, grouped)
        _emit(render(curves_report(table, config), config.output_format), config.output)


@main.command()
@click.option("--alpha", type=float, required=True, help="Change point (stamina)")
@click.option("--beta", type=float, required=True, help="Initial true positive rate (momentum)")
@click.option("--pi", type=float, required=True, help="Prevalence")
@format_option
@output_option
@click.pass_context
def quasi(
    ctx: click.Context,
    alpha: float,
    beta: float,
    pi: float,
    output_format: str | None,
    output: Path | None,
) -> None:
    """Closed-form AUC and AP of the two-segment hit-curve model."""
    with _exit_codes():
        model = QuasiConcaveModel(alpha=alpha, beta=beta, pi=pi)
        fmt = output_format or _settings(ctx).output_format
        _emit(render(quasi_report(model), fmt), output)


@main.command()
@click.option("--n", "n", type=int, required=True, help="Subjects per dataset")
@click.option("--pi", "pis", required=True, help="Prevalence (comma list for a grid)")
@click.option("--delta", "deltas", required=True, help="Class separation (comma list for a grid)")
@click.option("--replicates", "R", type=int, default=1, show_default=True, help="Datasets R")
@seed_option
@format_option
@output_option
@click.pass_context
def simulate(
    ctx: click.Context,
    n: int,
    pis: str,
    deltas: str,
    R: int,
    seed: int | None,
    output_format: str | None,
    output: Path | None,
) -> None:
    """Simulate binormal scores and report AP, AUC and beta_hat."""
    with _exit_codes():
        settings = _settings(ctx)
        seed = settings.seed if seed is None else seed
        fmt = output_format or settings.output_format
        pi_list = _split(pis, float, "--pi")
        delta_list = _split(deltas, float, "--delta")
        if R >= 2:
            if len(pi_list) != 1 or len(delta_list) != 1:
                raise MalformedInput("--replicates needs a single --pi and --delta")
            scenario = BinormalScenario(n=n, pi=pi_list[0], delta=delta_list[0], seed=seed)
            report = study_report(replicate_study(scenario, R))
        else:
            report = scenario_report(scenario_grid(n, pi_list, delta_list, seed), seed)
        _emit(render(report, fmt), output)


@main.command()
@input_option
@label_option
@click.option("--score-cols", help="Comma-separated score columns (default: all)")
@click.option("--inflate", "factors", default="1,10,100", show_default=True, help="Factors m")
@format_option
@output_option
@click.pass_context
def inflate(
    ctx: click.Context,
    input_path: Path,
    label_col: str | None,
    score_cols: str | None,
    factors: str,
    output_format: str | None,
    output: Path | None,
) -> None:
    """AP and exact AUC after replicating every control m-fold."""
    with _exit_codes():
        config = RunConfig.from_settings(
            "inflate",
            _settings(ctx),
            input=input_path,
            label_col=label_col,
            score_cols=_split(score_cols, str, "--score-cols") if score_cols else None,
            se_methods=[],
            inflate=_split(factors, int, "--inflate"),
            output_format=output_format,
            output=output,
        )
        assert config.input is not None
        data = read_scores(config.input, config.label_col, config.score_cols)
        _emit(render(inflate_report(data, config), config.output_format), config.output)


@main.command(name="diff-se")
@click.option("--se1", type=float, required=True, help="Standard error of the first estimate")
@click.option("--se2", type=float, required=True, help="Standard error of the second estimate")
@click.option("--rho", "rhos", default="0.5,0.7,0.9", show_default=True, help="Correlations")
@click.option("--ap1", type=float, help="First estimate (adds a z test)")
@click.option("--ap2", type=float, help="Second estimate (adds a z test)")
@format_option
@output_option
@click.pass_context
def diff_se(
    ctx: click.Context,
    se1: float,
    se2: float,
    rhos: str,
    ap1: float | None,
    ap2: float | None,
    output_format: str | None,
    output: Path | None,
) -> None:
    """Standard error of a paired difference for a range of correlations."""
    with _exit_codes():
        fmt = output_format or _settings(ctx).output_format
        report = diff_report(se1, se2, _split(rhos, float, "--rho"), ap1, ap2)
        _emit(render(report, fmt), output)


if __name__ == "__main__":
    main()
