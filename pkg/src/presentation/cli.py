"""
CLI Application for pllvi.

This module provides the ``pllvi`` command group: dataset generation, the
max-entropy prior, training, evaluation and candidate co-occurrence.

Exit codes: 0 on success, 2 on invalid input or configuration, 3 on a
numeric failure during training, 1 on anything else.
"""

import functools
import json
import sys
import time
import traceback
from pathlib import Path
from typing import Any, Callable, Optional, Tuple

import click
import pydantic
from colorama import Fore, Style, init

# Initialize colorama
init(autoreset=True)

# Add project root to path
project_root = Path(__file__).parent.parent.parent
sys.path.insert(0, str(project_root))

from src.application.config import AppConfig
from src.application.container import get_container
from src.application.dto import METHODS, RunConfig
from src.application.exceptions import (
    ConfigurationException,
    DatasetLoadException,
    TrainingDivergedException,
    UnknownMethodException,
)
from src.domain.exceptions import (
    DomainViolationException,
    InfeasibleBoundsException,
    InvalidParameterException,
    MissingLabelsException,
    NonFiniteGradientException,
    NumericOverflowException,
    ShapeMismatchException,
)
from src.infrastructure.checkpoints import CheckpointError
from src.infrastructure.datasets import PLLFormatError
from src.presentation.validation import InputValidator, ValidationError

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3

VALIDATION_ERRORS: Tuple[type, ...] = (
    pydantic.ValidationError,
    ValidationError,
    ConfigurationException,
    PLLFormatError,
    DatasetLoadException,
    UnknownMethodException,
    CheckpointError,
    InvalidParameterException,
    ShapeMismatchException,
    MissingLabelsException,
    InfeasibleBoundsException,
)

NUMERIC_ERRORS: Tuple[type, ...] = (
    TrainingDivergedException,
    NumericOverflowException,
    NonFiniteGradientException,
    DomainViolationException,
)


def exit_code_for(error: BaseException) -> int:
    """Map an exception to the process exit code."""
    if isinstance(error, VALIDATION_ERRORS):
        return EXIT_VALIDATION
    if isinstance(error, NUMERIC_ERRORS):
        return EXIT_NUMERIC
    return EXIT_FAILURE


def handle_errors(command: Callable[..., Any]) -> Callable[..., Any]:
    """Print errors in red on stderr and exit with the mapped code."""

    @functools.wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return command(*args, **kwargs)
        except click.exceptions.Exit:
            raise
        except Exception as e:
            code = exit_code_for(e)
            label = {EXIT_VALIDATION: "INVALID INPUT", EXIT_NUMERIC: "NUMERIC FAILURE"}.get(code, "ERROR")
            click.echo(f"{Fore.RED}{label}: {str(e)}{Style.RESET_ALL}", err=True)
            ctx = click.get_current_context(silent=True)
            if ctx is not None and getattr(ctx.obj, "verbose", False):
                click.echo(traceback.format_exc(), err=True)
            sys.exit(code)

    return wrapper


# CLI context class
class CLIContext:
    """Context object for sharing state between commands."""

    def __init__(self) -> None:
        self.config = AppConfig()
        self.container = get_container(self.config)
        self.verbose = False

    def run_config(self, config_path: Optional[str], seed: Optional[int]) -> RunConfig:
        """Load ``--config`` and apply ``--seed``."""
        if config_path is not None:
            InputValidator.validate_file_path(config_path, {".json"})
        return RunConfig.load(config_path).with_seed(seed)

    def out_dir(self, out: Optional[str]) -> Path:
        """Resolve ``--out``, defaulting to the configured output directory."""
        return InputValidator.validate_output_directory(out or str(self.config.get_output_directory()))


def common_options(command: Callable[..., Any]) -> Callable[..., Any]:
    """Attach ``--config``, ``--seed`` and ``--out``."""
    command = click.option("--out", "-o", "out", default=None, help="Output directory (default: $PLLVI_OUTPUT_DIR)")(command)
    command = click.option("--seed", "-s", type=int, default=None, help="Master seed (overrides the config)")(command)
    command = click.option("--config", "-c", "config_path", default=None, help="JSON run configuration")(command)
    return command


def _success(message: str) -> None:
    click.echo(f"\n{Fore.GREEN}{message}{Style.RESET_ALL}")


@click.group()
@click.option('--verbose', '-v', is_flag=True, help='Enable verbose output')
@click.pass_context
@handle_errors
def cli(ctx: click.Context, verbose: bool) -> None:
    """
    pllvi - variational partial-label learning on the desk.

    Generate candidate-label datasets, train the Dirichlet/CVAE learner and
    evaluate it against baselines over repeated splits.
    """
    ctx.obj = CLIContext()
    ctx.obj.verbose = verbose
    ctx.obj.container.ensure_ready()


@cli.command()
@common_options
@click.option('--from-file', 'source', default=None, help='Labelled .pll file used instead of blobs')
@click.option('--n', 'n', type=int, default=2000, show_default=True, help='Blob instances')
@click.option('--k', 'k', type=int, default=5, show_default=True, help='Classes')
@click.option('--d', 'd', type=int, default=2, show_default=True, help='Feature dimension')
@click.option('--separation', type=float, default=5.0, show_default=True, help='Blob mean radius')
@click.option('--strategy', type=click.Choice(['instance_dependent', 'longtail_mix']), default=None,
              help='Candidate strategy (overrides the config)')
@click.option('--permutation', default=None, help='Class ranks for longtail_mix, e.g. "3,0,4,1,2"')
@click.option('--clean', is_flag=True, help='Keep singleton candidate sets')
@click.pass_context
@handle_errors
def generate(ctx, config_path, seed, out, source, n, k, d, separation, strategy, permutation, clean):
    """
    Generate a partial-label dataset.

    Examples:

        pllvi generate --n 2000 --k 5 --seed 1 --out runs/blobs

        pllvi generate --from-file digits.pll --strategy instance_dependent
    """
    run_config = ctx.obj.run_config(config_path, seed)
    overrides = {}
    if strategy is not None:
        overrides["strategy"] = strategy
    parsed = InputValidator.parse_int_list(permutation, "permutation")
    if parsed is not None:
        overrides["permutation"] = parsed
    spec = run_config.generation
    if overrides:
        spec = spec.model_validate({**spec.model_dump(), **overrides})
    if source is not None:
        source = str(InputValidator.validate_dataset_path(source))

    use_case = ctx.obj.container.generate_data_use_case()
    result = use_case.execute(
        str(ctx.obj.out_dir(out)),
        spec,
        seed=run_config.train.seed,
        source=source,
        n=n,
        k=k,
        d=d,
        separation=separation,
        clean=clean,
    )

    summary = result["summary"]
    _success("Dataset generated")
    click.echo(f"  File:            {result['dataset_path']}")
    click.echo(f"  Instances:       {summary['n']} (d={summary['d']}, k={summary['k']})")
    click.echo(f"  Avg. candidates: {summary['mean_candidates']:.3f}")
    click.echo(f"  Singleton share: {summary['singleton_share']:.3f}")
    if result["permutation"] is not None:
        click.echo(f"  Permutation:     {result['permutation']}")


@cli.command()
@common_options
@click.argument('dataset')
@click.option('--delta', type=float, default=None, help='Lift exponent (overrides train.delta)')
@click.pass_context
@handle_errors
def prior(ctx, config_path, seed, out, dataset, delta):
    """
    Print the max-entropy prior of DATASET as JSON.

    The output holds pi, alpha_pi and the classes whose lower or upper
    bound is binding.
    """
    run_config = ctx.obj.run_config(config_path, seed)
    if delta is not None:
        run_config = RunConfig.model_validate(
            {**run_config.model_dump(), "train": {**run_config.train.model_dump(), "delta": delta}}
        )
    path = InputValidator.validate_dataset_path(dataset)
    out_dir = str(ctx.obj.out_dir(out)) if out is not None else None

    result = ctx.obj.container.solve_prior_use_case().execute(str(path), run_config.train.delta, out_dir)
    click.echo(json.dumps(result, indent=2))


@cli.command()
@common_options
@click.argument('dataset')
@click.option('--epochs', type=int, default=None, help='Main epochs T (overrides the config)')
@click.option('--warmup-epochs', type=int, default=None, help='Warm-up epochs T_w (overrides the config)')
@click.option('--objective', type=click.Choice(['vipll', 'ablation']), default=None, help='Training objective')
@click.pass_context
@handle_errors
def train(ctx, config_path, seed, out, dataset, epochs, warmup_epochs, objective):
    """
    Train on DATASET and write model.json and metrics.csv.

    Examples:

        pllvi train runs/blobs/blobs-k5-d2-longtail_mix.pll --epochs 200 --out runs/train
    """
    run_config = ctx.obj.run_config(config_path, seed)
    overrides = {"T": epochs, "T_w": warmup_epochs, "objective": objective}
    overrides = {key: value for key, value in overrides.items() if value is not None}
    if "checkpoint_every" not in run_config.train.model_fields_set and ctx.obj.config.checkpoint_every:
        overrides["checkpoint_every"] = ctx.obj.config.checkpoint_every
    train_config = run_config.train.model_validate({**run_config.train.model_dump(), **overrides})
    path = InputValidator.validate_dataset_path(dataset)

    start = time.time()
    result = ctx.obj.container.train_model_use_case().execute(str(path), train_config, str(ctx.obj.out_dir(out)))
    elapsed = time.time() - start

    _success("Training finished")
    click.echo(f"  Model:     {result['model_path']}")
    click.echo(f"  Metrics:   {result['metrics_path']}")
    click.echo(f"  Objective: {result['final_total']:.4f}")
    if "train_accuracy" in result:
        click.echo(f"  Train acc: {result['train_accuracy']:.4f}")
    click.echo(f"  Time:      {elapsed:.1f}s")


@cli.command(name="eval")
@common_options
@click.argument('dataset')
@click.option('--method', '-m', 'methods', multiple=True,
              help=f'Method to run (repeatable): {", ".join(METHODS)}')
@click.option('--seeds', 'n_seeds', type=int, default=None, help='Repeated splits (overrides the config)')
@click.option('--model', 'model_path', default=None, help='Score a saved model instead of running the protocol')
@click.pass_context
@handle_errors
def evaluate(ctx, config_path, seed, out, dataset, methods, n_seeds, model_path):
    """
    Evaluate methods on DATASET and write report.json.

    Examples:

        pllvi eval data.pll -m vipll -m vipll_ablation -m plknn --seed 7

        pllvi eval test.pll --model runs/train/model.json
    """
    path = InputValidator.validate_dataset_path(dataset)
    out_dir = str(ctx.obj.out_dir(out))
    use_case = ctx.obj.container.evaluate_use_case()

    if model_path is not None:
        model = InputValidator.validate_model_path(model_path)
        result = use_case.execute_model(str(model), str(path), out_dir)
        _success("Model evaluated")
        click.echo(f"  Accuracy: {result['accuracy']:.4f} on {result['n']} instances")
        return

    run_config = ctx.obj.run_config(config_path, seed)
    if n_seeds is not None:
        experiment = run_config.experiment.model_validate({**run_config.experiment.model_dump(), "n_seeds": n_seeds})
        run_config = run_config.model_copy(update={"experiment": experiment})

    report = use_case.execute_experiment(str(path), run_config, out_dir, methods=list(methods) or None)

    _success("Evaluation finished")
    click.echo(f"  {'Method':<16} {'Accuracy':<20} {'Not sig. worse'}")
    click.echo("  " + "-" * 52)
    for run in report["runs"]:
        flag = run["not_significantly_worse"]
        marker = f"{Fore.GREEN}yes{Style.RESET_ALL}" if flag else "no"
        click.echo(f"  {run['method']:<16} {run['mean']:.4f} +- {run['std']:.4f}     {marker}")
    if report["ablation_inferior"] is not None:
        click.echo(f"  Ablation inferior: {report['ablation_inferior']}")
    click.echo(f"  Report: {Path(out_dir) / 'report.json'}")


@cli.command()
@common_options
@click.argument('dataset')
@click.option('--permutation', default=None, help='Class ranks used to order the column-sum profile')
@click.pass_context
@handle_errors
def cooc(ctx, config_path, seed, out, dataset, permutation):
    """
    Write the candidate co-occurrence matrix of DATASET to cooc.csv.
    """
    path = InputValidator.validate_dataset_path(dataset)
    ranks = InputValidator.parse_int_list(permutation, "permutation")
    result = ctx.obj.container.cooccurrence_use_case().execute(str(path), str(ctx.obj.out_dir(out)), ranks)

    _success("Co-occurrence written")
    click.echo(f"  Counts:     {result['cooc_path']}")
    click.echo(f"  Normalized: {result['normalized_path']}")
    click.echo(f"  Rank profile: {result['rank_profile']}")


def main() -> None:
    """Main entry point for the CLI application."""
    cli()


if __name__ == '__main__':
    main()
