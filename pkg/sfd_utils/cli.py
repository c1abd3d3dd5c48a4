# Copyright (c) 2026 sfd-utils developers, All rights reserved.
#
# This file is part of sfd-utils. sfd-utils provides space-filling
# designs, surrogate models and a benchmark harness for computer
# experiments.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

import click
import logging
import os

from datetime import datetime, timezone

from sfd_utils.bench import (
    MARS_TRUTH,
    ExperimentConfig,
    cv_table,
    kfold_cv,
    load_dataset,
    run_comparison,
    summarize,
    write_aggregates
)
from sfd_utils.designs import (
    CriterionParams,
    GENERATOR_KINDS,
    GeneratorSpec,
    bin_to_grid,
    ccd_augment,
    generate
)
from sfd_utils.surrogates import SURROGATE_KINDS, SurrogateSpec, fit, predict
from sfd_utils.utils import (
    echo_frame,
    get_config,
    get_logger,
    handle_errors,
    load_model,
    load_space,
    new_manifest,
    points_frame,
    process_shared_options,
    read_points,
    read_table,
    save_model,
    write_frame,
    write_manifest
)

shared_options = [
    click.option(
        '-C',
        '--config',
        type=click.Path(exists=True),
        help='sfd-utils config file to use. Default: '
             '~/.config/sfd_utils/config.yaml'
    ),
    click.option(
        '--no-color',
        is_flag=True,
        help='Remove ANSI color and styling from output.'
    ),
    click.option(
        '--debug',
        '--verbose',
        'log_level',
        flag_value=logging.DEBUG,
        help='Display debug level logging to console.'
    ),
    click.option(
        '--quiet',
        'log_level',
        flag_value=logging.WARNING,
        help='Disable console output.'
    )
]


def add_options(options):
    def _add_options(func):
        for option in reversed(options):
            func = option(func)
        return func
    return _add_options


def print_license(ctx, param, value):
    if not value or ctx.resilient_parsing:
        return
    click.echo('GPLv3+')
    ctx.exit()


def _now():
    return datetime.now(timezone.utc).isoformat()


def _finish(command, config, seed, started, out_path, outputs=None,
            inputs=None):
    """
    Write the manifest for a single file output next to it.
    """
    out_dir = os.path.dirname(os.path.abspath(out_path))
    name = os.path.basename(out_path)
    manifest = new_manifest(
        command, config, seed, started, _now(), outputs or [name],
        inputs=inputs
    )
    return write_manifest(out_dir, manifest, name=name + '.manifest.json')


@click.group()
@click.version_option()
@click.option(
    '--license',
    is_flag=True,
    callback=print_license,
    expose_value=False,
    is_eager=True,
    help='Show license information.'
)
@click.pass_context
def main(context):
    """
    The command line interface provides computer experiment utilities.

    This includes generating space-filling designs, fitting and
    evaluating surrogates and running design comparison benchmarks.
    """
    if context.obj is None:
        context.obj = {}


@click.command()
@click.option(
    '--space',
    type=click.Path(exists=True),
    required=True,
    help='YAML file with bounds, constraints and optional levels.'
)
@click.option(
    '--kind',
    type=click.Choice(GENERATOR_KINDS),
    required=True,
    help='Design generator.'
)
@click.option(
    '--n',
    'size',
    type=click.INT,
    help='Number of points before augmentation.'
)
@click.option(
    '--levels',
    type=click.STRING,
    help='Grid levels, one value for all factors or comma separated.'
)
@click.option(
    '--seed',
    type=click.INT,
    help='Generator seed.'
)
@click.option(
    '--augment-ccd',
    is_flag=True,
    help='Append the feasible central composite design points.'
)
@click.option(
    '--bin-to-grid',
    'binned',
    is_flag=True,
    help='Snap points onto the discrete levels of the space.'
)
@click.option(
    '--out',
    type=click.Path(dir_okay=False),
    required=True,
    help='Design CSV to write.'
)
@add_options(shared_options)
@click.pass_context
def design(
    context,
    space,
    kind,
    size,
    levels,
    seed,
    augment_ccd,
    binned,
    out,
    **kwargs
):
    """
    Generate a design in the space described by `space`.
    """
    context.obj['seed'] = seed
    process_shared_options(context.obj, kwargs)
    config_data = get_config(context.obj)
    logger = get_logger(config_data.log_level)
    started = _now()

    with handle_errors(config_data.log_level, config_data.no_color):
        design_space = load_space(space)
        grid_levels = None
        if kind == 'grid' and levels:
            grid_levels = [int(value) for value in levels.split(',')]
        generator = GeneratorSpec(
            kind,
            size=size,
            params=CriterionParams(
                anneal=config_data.anneal, **(config_data.criterion or {})
            ),
            seed=config_data.seed,
            levels=grid_levels
        )
        result = generate(generator, design_space)

        if augment_ccd:
            result, report = ccd_augment(result, design_space)
            logger.info(
                'Added {0} of {1} CCD points'.format(
                    report.n_a, report.requested_aug
                )
            )
        if binned:
            result = bin_to_grid(result, design_space, seed=config_data.seed)

        write_frame(points_frame(result.natural_points, result.tags), out)
        _finish(
            'design', context.obj, config_data.seed, started, out,
            inputs=[space]
        )

    logger.info(
        '{0} design with {1} points written to {2}'.format(
            kind, result.n, out
        )
    )


@click.command(name='fit')
@click.option(
    '--data',
    type=click.Path(exists=True),
    required=True,
    help='Training CSV with x1..xd and y, or the HPC column layout.'
)
@click.option(
    '--kind',
    type=click.Choice(SURROGATE_KINDS),
    required=True,
    help='Surrogate to fit.'
)
@click.option(
    '--space',
    type=click.Path(exists=True),
    help='Space file; defaults to the observed ranges of the data.'
)
@click.option(
    '--seed',
    type=click.INT,
    help='Seed for hyperparameter restarts.'
)
@click.option(
    '--model-out',
    type=click.Path(dir_okay=False),
    required=True,
    help='Model file to write.'
)
@add_options(shared_options)
@click.pass_context
def fit_model(context, data, kind, space, seed, model_out, **kwargs):
    """
    Fit a surrogate to a dataset and save the model.
    """
    context.obj['seed'] = seed
    process_shared_options(context.obj, kwargs)
    config_data = get_config(context.obj)
    logger = get_logger(config_data.log_level)
    started = _now()

    with handle_errors(config_data.log_level, config_data.no_color):
        dataset = load_dataset(data, load_space(space) if space else None)
        spec = SurrogateSpec.from_options(kind, config_data.surrogate)
        model = fit(dataset, spec, seed=config_data.seed)
        save_model(model, model_out)
        _finish(
            'fit', context.obj, config_data.seed, started, model_out,
            inputs=[data, space]
        )

    logger.info(
        '{0} model on {1} points written to {2}'.format(
            kind, dataset.n, model_out
        )
    )


@click.command(name='predict')
@click.option(
    '--model',
    type=click.Path(exists=True),
    required=True,
    help='Model file written by fit.'
)
@click.option(
    '--points',
    type=click.Path(exists=True),
    required=True,
    help='CSV of query points with x1..xd columns.'
)
@click.option(
    '--out',
    type=click.Path(dir_okay=False),
    required=True,
    help='Prediction CSV to write.'
)
@add_options(shared_options)
@click.pass_context
def predict_points(context, model, points, out, **kwargs):
    """
    Predict a saved model at the given points.
    """
    process_shared_options(context.obj, kwargs)
    config_data = get_config(context.obj)
    logger = get_logger(config_data.log_level)
    started = _now()

    with handle_errors(config_data.log_level, config_data.no_color):
        fitted = load_model(model)
        queries = read_points(points, fitted.space.dim)
        values = predict(fitted, queries)
        write_frame(points_frame(queries, responses=values), out)
        _finish(
            'predict', context.obj, None, started, out,
            inputs=[model, points]
        )

    logger.info('{0} predictions written to {1}'.format(len(values), out))


@click.command()
@click.option(
    '--out-dir',
    type=click.Path(file_okay=False),
    required=True,
    help='Directory for records, summaries and the manifest.'
)
@click.option(
    '--test-function',
    type=click.Choice(ExperimentConfig.test_function_kinds),
    help='Truth surface to compare designs on.'
)
@click.option(
    '--seed',
    type=click.INT,
    help='Global seed all components derive from.'
)
@click.option(
    '--replications',
    type=click.INT,
    help='Replications B per design cell.'
)
@click.option(
    '--paper-scale',
    is_flag=True,
    help='Use the published test set sizes, replication counts and '
    'uncapped annealing budget.'
)
@click.option(
    '--jobs',
    type=click.IntRange(min=1),
    default=1,
    help='Worker processes for the design grid.'
)
@click.option(
    '--no-headers',
    is_flag=True,
    help='Do not print headers in text output',
    default=False
)
@add_options(shared_options)
@click.pass_context
def bench(
    context,
    out_dir,
    test_function,
    seed,
    replications,
    paper_scale,
    jobs,
    no_headers,
    **kwargs
):
    """
    Run the grid versus space-filling design comparison.
    """
    context.obj['test_function'] = test_function
    context.obj['seed'] = seed
    context.obj['replications'] = replications
    process_shared_options(context.obj, kwargs)
    config_data = get_config(context.obj)
    logger = get_logger(config_data.log_level)
    started = _now()

    with handle_errors(config_data.log_level, config_data.no_color):
        experiment = ExperimentConfig.from_config(
            config_data, paper_scale=paper_scale
        )
        os.makedirs(out_dir, exist_ok=True)
        report = run_comparison(experiment, jobs=jobs)
        outputs = report.write(out_dir)

        manifest_config = config_data._asdict()
        manifest_config['paper_scale'] = paper_scale
        inputs = [experiment.dataset] \
            if experiment.test_function == MARS_TRUTH else []
        write_manifest(
            out_dir,
            new_manifest(
                'bench', manifest_config, experiment.seed, started, _now(),
                outputs, inputs=inputs
            )
        )

    logger.info('Bench outputs written to {0}'.format(out_dir))
    if config_data.log_level < logging.WARNING:
        echo_frame(
            read_table(os.path.join(out_dir, 'best.csv')),
            config_data.no_color,
            no_headers
        )


@click.command()
@click.option(
    '--data',
    type=click.Path(exists=True),
    required=True,
    help='Dataset CSV with x1..xd and y, or the HPC column layout.'
)
@click.option(
    '--k',
    type=click.INT,
    help='Number of folds.'
)
@click.option(
    '--space',
    type=click.Path(exists=True),
    help='Space file; defaults to the observed ranges of the data.'
)
@click.option(
    '--seed',
    type=click.INT,
    help='Seed for the fold shuffle.'
)
@click.option(
    '--out',
    type=click.Path(dir_okay=False),
    required=True,
    help='Cross validation table to write.'
)
@click.option(
    '--no-headers',
    is_flag=True,
    help='Do not print headers in text output',
    default=False
)
@add_options(shared_options)
@click.pass_context
def cv(context, data, k, space, seed, out, no_headers, **kwargs):
    """
    K-fold cross validate every configured surrogate on a dataset.
    """
    context.obj['k'] = k
    context.obj['seed'] = seed
    process_shared_options(context.obj, kwargs)
    config_data = get_config(context.obj)
    get_logger(config_data.log_level)
    started = _now()

    with handle_errors(config_data.log_level, config_data.no_color):
        dataset = load_dataset(data, load_space(space) if space else None)
        results = kfold_cv(
            dataset,
            config_data.k,
            [kind for kind in config_data.surrogates if kind != 'oracle'],
            config_data.seed,
            surrogate_options=config_data.surrogate
        )
        table = cv_table(results)
        write_frame(table, out)
        _finish(
            'cv', context.obj, config_data.seed, started, out,
            inputs=[data, space]
        )

    echo_frame(table, config_data.no_color, no_headers)


@click.command()
@click.option(
    '--in',
    'records',
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help='records.csv written by bench.'
)
@click.option(
    '--out-dir',
    type=click.Path(file_okay=False),
    help='Directory for the tables. Default: next to the records.'
)
@click.option(
    '--no-headers',
    is_flag=True,
    help='Do not print headers in text output',
    default=False
)
@add_options(shared_options)
@click.pass_context
def report(context, records, out_dir, no_headers, **kwargs):
    """
    Re-aggregate existing bench records into the summary tables.
    """
    process_shared_options(context.obj, kwargs)
    config_data = get_config(context.obj)
    logger = get_logger(config_data.log_level)
    started = _now()
    out_dir = out_dir or os.path.dirname(os.path.abspath(records))

    with handle_errors(config_data.log_level, config_data.no_color):
        frame = read_table(records)
        metrics = [m for m in ('rmse', 'mape') if m in frame.columns]
        summary = summarize(frame, metrics)
        os.makedirs(out_dir, exist_ok=True)
        outputs = write_aggregates(summary, out_dir)
        write_manifest(
            out_dir,
            new_manifest(
                'report', {'records': records}, None, started, _now(),
                outputs, inputs=[records]
            )
        )

    logger.info('Summary tables written to {0}'.format(out_dir))
    if config_data.log_level < logging.WARNING:
        echo_frame(summary, config_data.no_color, no_headers)


main.add_command(design)
main.add_command(fit_model)
main.add_command(predict_points)
main.add_command(bench)
main.add_command(cv)
main.add_command(report)
