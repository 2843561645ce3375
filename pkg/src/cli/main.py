"""
Command-Line Interface
Subcommands: train-step1, gen-ext-labels, train-step3, evaluate, sweep,
complexity, retention, llr-hist. Exit codes: 2 for configuration errors,
3 for missing archives, 1 for any other failure.
"""

import logging
import sys
from dataclasses import asdict
from functools import wraps
from pathlib import Path
from typing import Optional

import click
import pandas as pd

from ..config.experiment import load_experiment_config
from ..utils.exceptions import ConfigError, MissingArchiveError
from ..utils.logging_config import setup_logging
from .complexity import DEFAULT_ETAS, ComplexityQuery, complexity_split, complexity_table
from .runner import ExperimentRunner

logger = logging.getLogger(__name__)

EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_MISSING_ARCHIVE = 3


def _parse_floats(text: str) -> list:
    try:
        return [float(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise ConfigError(f"Expected a comma-separated list of numbers, got '{text}'") from None


def guarded(command):
    """Map failures to exit codes with a one-line diagnostic"""
    @wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except ConfigError as e:
            click.echo(f"config error: {e}", err=True)
            sys.exit(EXIT_CONFIG)
        except MissingArchiveError as e:
            click.echo(f"missing archive: {e}", err=True)
            sys.exit(EXIT_MISSING_ARCHIVE)
        except Exception as e:
            logger.error(f"Command failed: {e}")
            click.echo(f"error: {type(e).__name__}: {e}", err=True)
            sys.exit(EXIT_FAILURE)
    return wrapper


def make_runner(ctx: click.Context) -> ExperimentRunner:
    options = ctx.obj
    overrides = {}
    if options['seed'] is not None:
        overrides.setdefault('system', {})['seed'] = options['seed']
    if options['threads'] is not None:
        overrides.setdefault('system', {})['threads'] = options['threads']
    config = load_experiment_config(options['config'], overrides)
    return ExperimentRunner(config, out_dir=options['out_dir'], progress=options['progress'])


@click.group()
@click.option('--config', 'config_path', type=click.Path(path_type=Path), default=None,
              help='Experiment YAML file')
@click.option('--seed', type=int, default=None, help='Override system.seed')
@click.option('--out-dir', type=click.Path(path_type=Path), default=None, help='Result directory')
@click.option('--threads', type=int, default=None, help='Worker threads')
@click.option('--archive', type=click.Path(path_type=Path), default=None,
              help='Weight archive to write (training) or to evaluate with')
@click.option('--verbose', '-v', is_flag=True, help='Enable debug logging')
@click.option('--progress/--no-progress', default=False, help='Show progress bars')
@click.pass_context
def cli(ctx, config_path, seed, out_dir, threads, archive, verbose, progress):
    """GEPNet turbo receiver laboratory"""
    setup_logging(verbose=verbose)
    ctx.obj = {'config': config_path, 'seed': seed, 'out_dir': out_dir, 'threads': threads,
               'archive': archive, 'progress': progress}


@cli.command('train-step1')
@click.option('--ia0', is_flag=True, help='Train the I_A = 0 baseline instead')
@click.pass_context
@guarded
def train_step1(ctx, ia0):
    """Train the APP-head model"""
    runner = make_runner(ctx)
    path = runner.train_step1(ctx.obj['archive'], zero_only=ia0)
    runner.write_manifest('train-step1', {'archive': str(path)})
    click.echo(f"Saved {path}")


@cli.command('gen-ext-labels')
@click.option('--labels', type=click.Path(path_type=Path), default=None, help='Label dataset to write')
@click.pass_context
@guarded
def gen_ext_labels(ctx, labels):
    """Label fresh samples with masked APP inferences"""
    runner = make_runner(ctx)
    path = runner.generate_labels(ctx.obj['archive'], labels)
    runner.write_manifest('gen-ext-labels', {'labels': str(path)})
    click.echo(f"Saved {path}")


@cli.command('train-step3')
@click.option('--labels', type=click.Path(path_type=Path), default=None, help='Label dataset to read')
@click.option('--init', 'init_archive', type=click.Path(path_type=Path), default=None,
              help='APP archive used for initialization')
@click.pass_context
@guarded
def train_step3(ctx, labels, init_archive):
    """Train the EXT-head model from the APP weights"""
    runner = make_runner(ctx)
    path = runner.train_step3(labels, init_archive, ctx.obj['archive'])
    runner.write_manifest('train-step3', {'archive': str(path)})
    click.echo(f"Saved {path}")


def _evaluate(ctx, runner: ExperimentRunner, command: str, snr_points: Optional[list],
              iterations: Optional[int]):
    frame = runner.evaluate(snr_points=snr_points, iterations=iterations,
                            archive_override=ctx.obj['archive'])
    path = runner.write_results(frame)
    runner.write_manifest(command, {'results': str(path)})
    click.echo(frame.to_string(index=False))


@cli.command()
@click.option('--snr', type=float, default=None, help='SNR point in dB (default: first configured)')
@click.option('--iterations', type=int, default=None, help='Turbo iterations')
@click.pass_context
@guarded
def evaluate(ctx, snr, iterations):
    """Simulate one SNR point"""
    runner = make_runner(ctx)
    points = [snr] if snr is not None else [runner.config.snr_points[0]]
    _evaluate(ctx, runner, 'evaluate', points, iterations)


@cli.command()
@click.option('--iterations', type=int, default=None, help='Turbo iterations')
@click.pass_context
@guarded
def sweep(ctx, iterations):
    """Simulate every configured SNR point"""
    _evaluate(ctx, make_runner(ctx), 'sweep', None, iterations)


@cli.command()
@click.option('--algorithm', default='gepnet', help='mmse-pic, ep, dep or gepnet')
@click.option('--n', 'n_rows', type=int, default=8)
@click.option('--k', 'n_cols', type=int, default=8)
@click.option('--m', 'levels', type=int, default=4)
@click.option('--t', 'layers', type=int, default=5)
@click.option('--i', 'iterations', type=int, default=2)
@click.option('--nu', type=int, default=8)
@click.option('--nh1', type=int, default=64)
@click.option('--nh2', type=int, default=32)
@click.option('--l', 'rounds', type=int, default=2)
@click.option('--eta', type=float, default=1.0)
@click.option('--table', is_flag=True, help='Every algorithm plus a GEPNet eta sweep')
@click.option('--etas', default=','.join(str(e) for e in DEFAULT_ETAS), help='Etas for --table')
@click.pass_context
@guarded
def complexity(ctx, algorithm, n_rows, n_cols, levels, layers, iterations, nu, nh1, nh2,
               rounds, eta, table, etas):
    """Real-valued multiplication counts"""
    query = ComplexityQuery(algorithm=algorithm, N=n_rows, K=n_cols, M=levels, T=layers,
                            I=iterations, n_u=nu, n_h1=nh1, n_h2=nh2, L=rounds, eta=eta)
    if table:
        frame = pd.DataFrame(complexity_table(query, _parse_floats(etas)))
    else:
        frame = pd.DataFrame([{**asdict(query), **complexity_split(query)}])
    if ctx.obj['out_dir'] is not None:
        path = Path(ctx.obj['out_dir']) / 'complexity.csv'
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, lineterminator='\n')
    click.echo(frame.to_string(index=False))


@cli.command()
@click.option('--alphas', default='0,0.5,1,2,4', help='Comma-separated pruning factors')
@click.option('--trials', type=int, default=200, help='Channel draws per SNR point')
@click.pass_context
@guarded
def retention(ctx, alphas, trials):
    """Retained-edge fraction per pruning factor and layer"""
    runner = make_runner(ctx)
    frame = runner.retention(_parse_floats(alphas), trials)
    path = runner.write_table(frame, 'retention.csv')
    runner.write_manifest('retention', {'retention': str(path)})
    click.echo(frame.groupby(['snr_db', 'alpha'])['retention'].mean().to_string())


@cli.command('llr-hist')
@click.option('--ia', type=float, default=0.5, help='Mutual information of the synthetic priors')
@click.option('--samples', type=int, default=2000)
@click.option('--bins', type=int, default=60)
@click.pass_context
@guarded
def llr_hist(ctx, ia, samples, bins):
    """Histograms of prior, APP (prior-subtracted), EXT and label LLRs"""
    runner = make_runner(ctx)
    frame = runner.llr_histograms(ia, samples, bins)
    path = runner.write_table(frame, f'llr_hist_ia{ia:g}.csv')
    runner.write_manifest('llr-hist', {'histograms': str(path)})
    click.echo(frame.groupby('source')['count'].sum().to_string())


def main(argv=None):
    cli.main(args=argv, prog_name='gepnet-lab')


if __name__ == '__main__':
    main()
