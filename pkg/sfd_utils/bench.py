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

import logging
import math
import multiprocessing
import os
import time
import warnings

import numpy as np
import pandas as pd

from collections import namedtuple

from sfd_utils.core import (
    Dataset,
    Design,
    DesignSpace,
    SFD_GENERATORS,
    metric_record,
    mape_details,
    rmse,
    to_unit_cube
)
from sfd_utils.designs import (
    CriterionParams,
    GeneratorSpec,
    bin_to_grid,
    ccd_augment,
    ccd_count,
    constrain_subset,
    gen_grid
)
from sfd_utils.exceptions import (
    BudgetWarning,
    ConfigurationError,
    DegenerateMetricError,
    InfeasibleRegionError,
    SFDUtilsException,
    SFDUtilsWarning
)
from sfd_utils.functions import hpc_space, test_functions
from sfd_utils.surrogates import (
    SURROGATE_KINDS,
    SurrogateSpec,
    fit,
    fit_mars,
    minimum_points,
    predict,
    predict_with_extrapolation
)
from sfd_utils.utils import derive_seed, point_columns, write_frame

log = logging.getLogger('sfd_utils.bench')

MARS_TRUTH = 'dataset_mars_truth'
SELF_TEST_KIND = 'oracle'
BOREHOLE_GRID_LEVELS = 3

borehole_sizes = list(range(500, 2001, 100))
hpc_sizes = list(range(100, 2701, 200))
hpc_columns = ['Frequency', 'No. of Threads', 'File Size', 'Record Size']
hpc_response = 'PVM'

paper_scale_settings = {
    'colville': {
        'n_g': 10000, 'replications': 30, 'surrogate_replications': {}
    },
    'friedman': {
        'n_g': 10000, 'replications': 30, 'surrogate_replications': {}
    },
    'borehole': {
        'n_g': 5000, 'replications': 60,
        'surrogate_replications': {'lshep': 180}
    }
}

record_columns = [
    'design', 'surrogate', 'budget', 'replication', 'rmse', 'mape',
    'failed', 'n_excluded', 'extrapolation_rate'
]
timing_columns = ['design', 'surrogate', 'budget', 'replication',
                  'wall_time_s']

truth_surface = namedtuple('truth_surface', ['kind', 'space', 'evaluator'])


class ModelTruth(object):
    """
    Truth evaluator backed by a fitted surrogate.
    """
    def __init__(self, model):
        self.model = model

    def __call__(self, natural_points):
        return predict(self.model, natural_points)


class ExperimentConfig(object):
    """
    Settings of one design versus surrogate comparison.
    """
    test_function_kinds = ('colville', 'friedman', 'borehole', MARS_TRUTH)

    def __init__(
        self,
        test_function='colville',
        grid_levels=(3, 4, 5, 6, 7),
        sfd_kinds=('maximin_lhd', 'maxpro', 'maxent', 'uniform'),
        surrogates=SURROGATE_KINDS,
        n_g=2000,
        replications=10,
        seed=0,
        metrics=('rmse', 'mape'),
        sfd_sizes=None,
        augment_ccd=True,
        criterion=None,
        surrogate_options=None,
        surrogate_replications=None,
        dataset=None,
        mode=None,
        k=10
    ):
        self.test_function = test_function
        self.grid_levels = [int(level) for level in grid_levels]
        self.sfd_kinds = list(sfd_kinds)
        self.surrogates = list(surrogates)
        self.n_g = int(n_g)
        self.replications = int(replications)
        self.seed = int(seed)
        self.metrics = list(metrics)
        self.sfd_sizes = None if sfd_sizes is None else \
            [int(size) for size in sfd_sizes]
        self.augment_ccd = bool(augment_ccd)
        self.criterion = criterion or CriterionParams()
        self.surrogate_options = surrogate_options or {}
        self.surrogate_replications = dict(surrogate_replications or {})
        self.dataset = dataset
        self.mode = mode
        self.k = int(k)
        self._validate()

    @property
    def augments(self):
        """
        Borehole designs only get CCD points when Delaunay is fitted.
        """
        if self.test_function == 'borehole':
            return self.augment_ccd and 'delaunay' in self.surrogates
        return self.augment_ccd

    def _validate(self):
        if self.test_function not in self.test_function_kinds:
            raise ConfigurationError(
                'Unknown test function {0!r}.'.format(self.test_function)
            )
        if self.replications < 1:
            raise ConfigurationError('Replications B must be >= 1.')
        if self.n_g < 100:
            raise ConfigurationError('Test set size n_g must be >= 100.')
        if self.seed < 0:
            raise ConfigurationError('Seed must be non-negative.')

        unknown = [k for k in self.sfd_kinds if k not in SFD_GENERATORS]
        if unknown:
            raise ConfigurationError(
                'Unknown SFD kinds: {0}'.format(', '.join(unknown))
            )

        allowed = SURROGATE_KINDS + (SELF_TEST_KIND,)
        unknown = [k for k in self.surrogates if k not in allowed]
        unknown += [
            k for k in self.surrogate_replications if k not in allowed
        ]
        if unknown:
            raise ConfigurationError(
                'Unknown surrogate kinds: {0}'.format(', '.join(unknown))
            )

        unknown = [m for m in self.metrics if m not in ('rmse', 'mape')]
        if unknown or not self.metrics:
            raise ConfigurationError('Metrics must be rmse and/or mape.')

        if self.test_function == MARS_TRUTH and not self.dataset:
            raise ConfigurationError(
                'The dataset_mars_truth protocol needs a dataset path.'
            )

    @classmethod
    def from_config(cls, config, paper_scale=False):
        """
        Build from a resolved bench_config namedtuple.
        """
        n_g = config.n_g
        replications = config.replications
        surrogate_replications = dict(config.surrogate_replications or {})
        anneal = dict(config.anneal or {})
        if paper_scale:
            settings = paper_scale_settings.get(config.test_function)
            if settings is None:
                raise ConfigurationError(
                    'No published settings for {0}.'.format(
                        config.test_function
                    )
                )
            n_g = settings['n_g']
            replications = settings['replications']
            surrogate_replications.update(settings['surrogate_replications'])
            anneal['max_iterations'] = None

        criterion = CriterionParams(
            anneal=anneal, **(config.criterion or {})
        )
        return cls(
            test_function=config.test_function,
            grid_levels=config.grid_levels,
            sfd_kinds=config.sfd_kinds,
            surrogates=config.surrogates,
            n_g=n_g,
            replications=replications,
            seed=config.seed,
            metrics=config.metrics,
            sfd_sizes=config.sfd_sizes,
            augment_ccd=config.augment_ccd,
            criterion=criterion,
            surrogate_options=config.surrogate,
            surrogate_replications=surrogate_replications,
            dataset=config.dataset,
            mode=config.mode,
            k=config.k
        )

    def replications_for(self, kind):
        return int(self.surrogate_replications.get(kind, self.replications))

    @property
    def max_replications(self):
        return max(self.replications_for(kind) for kind in self.surrogates)


class ExperimentReport(object):
    """
    Metric records of a comparison run plus their aggregates.
    """
    def __init__(self, records, metrics=('rmse', 'mape')):
        self.records = list(records)
        self.metrics = list(metrics)

    def frame(self):
        """
        Records without wall times, in run order.
        """
        rows = [
            [
                record.design_name, record.surrogate_name, record.budget,
                record.replication, record.rmse, record.mape, record.failed,
                record.n_excluded, record.extrapolation_rate
            ]
            for record in self.records
        ]
        return pd.DataFrame(rows, columns=record_columns)

    def timings(self):
        rows = [
            [
                record.design_name, record.surrogate_name, record.budget,
                record.replication, record.wall_time_s
            ]
            for record in self.records
        ]
        return pd.DataFrame(rows, columns=timing_columns)

    def summary(self):
        return summarize(self.frame(), self.metrics)

    def write(self, out_dir):
        """
        Write records, timings and every aggregate table.

        Returns the written file names.
        """
        written = ['records.csv', 'timings.csv']
        write_frame(self.frame(), os.path.join(out_dir, 'records.csv'))
        write_frame(self.timings(), os.path.join(out_dir, 'timings.csv'))
        return written + write_aggregates(self.summary(), out_dir)


def summarize(frame, metrics=('rmse', 'mape')):
    """
    Mean, standard error and counts per (design, surrogate, budget).

    Failed records count as failures and stay out of the means.
    """
    rows = []
    failed = frame['failed'].astype(bool)
    for (design, surrogate, budget), group in frame.groupby(
        ['design', 'surrogate', 'budget'], sort=True
    ):
        group_failed = failed.loc[group.index]
        ok = group[~group_failed]
        for metric in metrics:
            values = ok[metric].dropna().to_numpy(dtype=float)
            count = len(values)
            mean = float(values.mean()) if count else np.nan
            if count > 1:
                se = float(values.std(ddof=1) / math.sqrt(count))
            else:
                se = 0.0 if count else np.nan
            rows.append([
                design, surrogate, int(budget), metric, mean, se, count,
                int(group_failed.sum())
            ])

    return pd.DataFrame(
        rows,
        columns=['design', 'surrogate', 'budget', 'metric', 'mean', 'se',
                 'count', 'failures']
    )


def plot_data(summary, metric):
    """
    Error against budget, one column per surrogate/design pair.
    """
    cells = summary[summary['metric'] == metric].copy()
    cells['series'] = cells['surrogate'] + '/' + cells['design']
    table = cells.pivot_table(
        index='budget', columns='series', values='mean', aggfunc='first'
    )
    table = table.reindex(sorted(table.columns), axis=1)
    table.columns.name = None
    return table.reset_index()


def _design_type(design):
    return 'gbd' if design == 'grid' else 'sfd'


def budget_comparison(summary):
    """
    Budget the stronger design type needs to match the weaker one.

    The weaker type (GBD or best SFD per budget) is held at its largest
    budget; the stronger type reports its smallest budget reaching the
    same or lower mean error.
    """
    rows = []
    for metric in sorted(summary['metric'].unique()):
        for surrogate in sorted(summary['surrogate'].unique()):
            cells = summary[
                (summary['metric'] == metric) &
                (summary['surrogate'] == surrogate) &
                summary['mean'].notna()
            ]
            best = {}
            for design_type in ('gbd', 'sfd'):
                typed = cells[cells['design'].map(_design_type) == design_type]
                if typed.empty:
                    break
                typed = typed.sort_values(['budget', 'mean', 'design'])
                best[design_type] = typed.groupby('budget').first()
            if len(best) < 2:
                continue

            finals = {
                design_type: table.iloc[-1] for design_type, table in
                best.items()
            }
            weaker = 'gbd' if finals['gbd']['mean'] > finals['sfd']['mean'] \
                else 'sfd'
            stronger = 'sfd' if weaker == 'gbd' else 'gbd'
            target = finals[weaker]['mean']
            reached = best[stronger][best[stronger]['mean'] <= target]

            stronger_budget = np.nan
            stronger_design = ''
            if not reached.empty:
                stronger_budget = int(reached.index[0])
                stronger_design = reached.iloc[0]['design']

            rows.append([
                metric, surrogate, weaker, finals[weaker]['design'],
                int(best[weaker].index[-1]), target, stronger,
                stronger_design, stronger_budget
            ])

    return pd.DataFrame(
        rows,
        columns=['metric', 'surrogate', 'weaker', 'weaker_design',
                 'weaker_budget', 'weaker_mean', 'stronger',
                 'stronger_design', 'stronger_budget']
    )


def best_combinations(summary):
    """
    Lowest mean error cell per metric at each type's largest budget.
    """
    rows = []
    for metric in sorted(summary['metric'].unique()):
        cells = summary[
            (summary['metric'] == metric) & summary['mean'].notna()
        ].copy()
        if cells.empty:
            continue

        cells['design_type'] = cells['design'].map(_design_type)
        largest = cells.groupby('design_type')['budget'].transform('max')
        final = cells[cells['budget'] == largest]
        winner = final.sort_values(['mean', 'surrogate', 'design']).iloc[0]
        rows.append([
            metric, winner['surrogate'], winner['design_type'],
            winner['design'], int(winner['budget']), winner['mean']
        ])

    return pd.DataFrame(
        rows,
        columns=['metric', 'surrogate', 'design_type', 'design', 'budget',
                 'mean']
    )


def write_aggregates(summary, out_dir):
    """
    Write summary, plot data, budget and best-combination tables.
    """
    written = ['summary.csv']
    write_frame(summary, os.path.join(out_dir, 'summary.csv'))

    for metric in sorted(summary['metric'].unique()):
        name = 'plotdata_{0}.csv'.format(metric)
        write_frame(plot_data(summary, metric), os.path.join(out_dir, name))
        written.append(name)

    write_frame(budget_comparison(summary),
                os.path.join(out_dir, 'budgets.csv'))
    write_frame(best_combinations(summary), os.path.join(out_dir, 'best.csv'))
    return written + ['budgets.csv', 'best.csv']


def draw_test_points(space, n_g, seed):
    """
    Uniform feasible test points.

    Discrete spaces sample feasible grid cells with replacement;
    continuous spaces reject and redraw infeasible uniform points.
    """
    rng = np.random.default_rng(seed)
    if space.is_discrete:
        cells = space.grid_cells()
        return cells[rng.integers(len(cells), size=n_g)]

    kept = []
    found = 0
    for attempt in range(1000):
        draws = space.lower + rng.random((n_g, space.dim)) * space.width
        draws = draws[space.feasible_mask(draws)]
        kept.append(draws)
        found += len(draws)
        if found >= n_g:
            return np.vstack(kept)[:n_g]

    raise InfeasibleRegionError('Unable to draw feasible test points.')


_context = {}


def _init_worker(context):
    _context.clear()
    _context.update(context)


def _build_design(job):
    config = _context['config']
    space = _context['space']
    if job['design'] == 'grid':
        if job.get('level') is None:
            return _context['gbd']
        return gen_grid(space, job['level'])

    n_a = ccd_count(space) if config.augments else 0
    generator = GeneratorSpec(
        job['design'],
        job['budget'] - n_a,
        config.criterion,
        job['seed']
    )
    design = constrain_subset(generator, space, generator.size)
    if config.augments:
        design, report = ccd_augment(design, space)
        log.debug('Augmented %s with %d CCD points', job['design'],
                  report.n_a)
    if _context.get('binned'):
        design = bin_to_grid(design, space, seed=job['seed'])
    return design


def _score(kind, data, job, replication_seed):
    config = _context['config']
    truth = _context['truth']
    test_points = _context['test_points']
    test_values = _context['test_values']

    spec = SurrogateSpec.from_options(kind, config.surrogate_options)
    started = time.perf_counter()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter('always', SFDUtilsWarning)
        model = fit(
            data, spec, seed=replication_seed, truth=truth.evaluator
        )
        values, extrapolated, _ = predict_with_extrapolation(
            model, test_points
        )
    elapsed = time.perf_counter() - started
    if caught:
        log.debug('%s on %s/%d raised %d warnings', kind, job['design'],
                  job['budget'], len(caught))

    error = rmse(test_values, values)
    try:
        percentage, excluded = mape_details(test_values, values)
    except DegenerateMetricError:
        percentage, excluded = np.nan, len(test_values)
    return error, percentage, excluded, float(extrapolated.mean()), elapsed


def _run_job(job):
    """
    Build one design, fit each due surrogate and score it.

    A design that cannot be built fails every surrogate of the job.
    """
    config = _context['config']
    truth = _context['truth']
    started = time.perf_counter()
    data = None
    budget = job['budget']
    try:
        design = _build_design(job)
        data = Dataset(design, truth.evaluator(design.natural_points))
        budget = design.n
    except SFDUtilsException as failure:
        log.warning(
            '%s design failed at budget %d replication %d: %s: %s',
            job['design'], budget, job['replication'],
            type(failure).__name__, failure
        )
    design_time = time.perf_counter() - started
    log.info(
        '%s design, budget %d, replication %d built in %.2fs',
        job['design'], budget, job['replication'], design_time
    )

    records = []
    for kind in config.surrogates:
        copies = config.replications_for(kind)
        if job['replication'] >= copies:
            continue

        error = percentage = rate = np.nan
        excluded = 0
        elapsed = 0.0
        failed = True
        if data is not None:
            seed = derive_seed(
                config.seed, 'fit', job['design'], budget,
                job['replication'], kind
            )
            try:
                error, percentage, excluded, rate, elapsed = _score(
                    kind, data, job, seed
                )
                failed = False
            except Exception as failure:
                log.warning(
                    '%s failed on %s/%d replication %d: %s: %s',
                    kind, job['design'], budget, job['replication'],
                    type(failure).__name__, failure
                )

        log.info('%s on %s/%d: rmse %.6g mape %.6g (%.2fs)', kind,
                 job['design'], budget, error, percentage, elapsed)

        # A grid design is fitted once and stands for every replication.
        replications = range(copies) if job['design'] == 'grid' else \
            [job['replication']]
        for replication in replications:
            records.append(metric_record(
                design_name=job['design'],
                surrogate_name=kind,
                budget=budget,
                replication=replication,
                rmse=error,
                mape=percentage,
                wall_time_s=elapsed + design_time,
                failed=failed,
                n_excluded=excluded,
                extrapolation_rate=rate
            ))
    return records


def _execute(context, job_list, jobs):
    if jobs > 1:
        with multiprocessing.Pool(
            jobs, initializer=_init_worker, initargs=(context,)
        ) as pool:
            results = pool.map(_run_job, job_list, chunksize=1)
    else:
        _init_worker(context)
        results = [_run_job(job) for job in job_list]

    records = [record for batch in results for record in batch]
    return ExperimentReport(records, metrics=context['config'].metrics)


def _sfd_jobs(config, budgets):
    job_list = []
    for budget in budgets:
        for kind in config.sfd_kinds:
            for replication in range(config.max_replications):
                job_list.append({
                    'design': kind,
                    'budget': budget,
                    'replication': replication,
                    'seed': derive_seed(
                        config.seed, 'design', kind, budget, replication
                    )
                })
    return job_list


def _context_for(config, truth, space, test_points):
    return {
        'config': config,
        'truth': truth,
        'space': space,
        'test_points': test_points,
        'test_values': np.asarray(truth.evaluator(test_points), dtype=float)
    }


def run_comparison(config, jobs=1, truth=None):
    """
    Run the GBD versus SFD comparison on an analytic truth.

    Each grid level gives a GBD of size N_g; every SFD kind is built at
    N_g - n_a points and CCD augmented back to N_g. Borehole uses one
    3^8 grid as a reference and the configured SFD sizes.
    """
    if config.test_function == MARS_TRUTH:
        data = load_hpc_dataset(config.dataset, mode=config.mode)
        return mars_truth_experiment(data, config, jobs=jobs)

    function, space_factory = test_functions[config.test_function]
    space = space_factory()
    truth = truth or truth_surface('analytic', space, function)
    test_points = draw_test_points(
        space, config.n_g, derive_seed(config.seed, 'test')
    )

    job_list = []
    if config.test_function == 'borehole':
        job_list.append({
            'design': 'grid', 'level': BOREHOLE_GRID_LEVELS,
            'budget': BOREHOLE_GRID_LEVELS ** space.dim,
            'replication': 0, 'seed': None
        })
        job_list.extend(_sfd_jobs(config, config.sfd_sizes or borehole_sizes))
    else:
        budgets = []
        for level in config.grid_levels:
            size = gen_grid(space, level).n
            budgets.append(size)
            job_list.append({
                'design': 'grid', 'level': level, 'budget': size,
                'replication': 0, 'seed': None
            })
        job_list.extend(_sfd_jobs(config, budgets))

    log.info('Running %d design jobs for %s', len(job_list),
             config.test_function)
    context = _context_for(config, truth, space, test_points)
    return _execute(context, job_list, jobs)


def mars_truth_experiment(data, config, jobs=1):
    """
    Score designs against a MARS fit of a real dataset.

    The dataset itself is the GBD. SFDs are generated, CCD augmented
    and binned to the feasible grid; sizes above the grid cardinality
    are capped.
    """
    space = data.space
    spec = SurrogateSpec.from_options('mars', config.surrogate_options)
    model = fit_mars(data, spec)
    truth = truth_surface('fitted', space, ModelTruth(model))

    cardinality = len(space.grid_cells())
    budgets = []
    for size in config.sfd_sizes or hpc_sizes:
        if size > cardinality:
            warnings.warn(
                'SFD size {0} capped at the {1} feasible grid cells.'.format(
                    size, cardinality
                ),
                BudgetWarning
            )
            size = cardinality
        if size not in budgets:
            budgets.append(size)

    test_points = draw_test_points(
        space, config.n_g, derive_seed(config.seed, 'test')
    )
    gbd = Design(space, data.design.points, 'grid')
    job_list = [{
        'design': 'grid', 'level': None, 'budget': gbd.n,
        'replication': 0, 'seed': None
    }]
    job_list.extend(_sfd_jobs(config, budgets))

    context = _context_for(config, truth, space, test_points)
    context['gbd'] = gbd
    context['binned'] = True
    return _execute(context, job_list, jobs)


def kfold_cv(data, k, kinds, seed, surrogate_options=None):
    """
    Fold averaged RMSE and MAPE per surrogate kind.

    Folds come from a seeded shuffle; k = n uses the identity split.
    Kinds whose minimum size exceeds a training fold are skipped. A kind
    whose fit fails on any fold reports NaN for both metrics.
    """
    n = data.n
    if k < 2 or n < k:
        raise ConfigurationError(
            'Cross validation needs 2 <= k <= n, got k={0}, n={1}.'.format(
                k, n
            )
        )

    if k == n:
        order = np.arange(n)
    else:
        order = np.random.default_rng(
            derive_seed(seed, 'cv')
        ).permutation(n)
    folds = np.array_split(order, k)

    smallest_train = n - max(len(fold) for fold in folds)

    results = {}
    for kind in kinds:
        if smallest_train < minimum_points(kind, data.space.dim):
            warnings.warn(
                '{0} skipped: training folds hold {1} points.'.format(
                    kind, smallest_train
                ),
                BudgetWarning
            )
            continue

        spec = SurrogateSpec.from_options(kind, surrogate_options)
        try:
            results[kind] = _fold_scores(
                kind, spec, folds, order, data, seed
            )
        except SFDUtilsException as failure:
            log.warning(
                '%s CV failed: %s: %s', kind, type(failure).__name__, failure
            )
            results[kind] = (np.nan, np.nan)
            continue
        log.info('%s CV: rmse %.6g mape %.6g', kind, *results[kind])

    return results


def _fold_scores(kind, spec, folds, order, data, seed):
    points = np.asarray(data.design.points)
    natural = data.design.natural_points
    responses = np.asarray(data.responses)

    errors, percentages = [], []
    for index, fold in enumerate(folds):
        train = np.setdiff1d(order, fold)
        design = Design(data.space, points[train], 'data')
        model = fit(
            Dataset(design, responses[train]),
            spec,
            seed=derive_seed(seed, 'cv', kind, index)
        )
        with warnings.catch_warnings():
            warnings.simplefilter('ignore', SFDUtilsWarning)
            predicted = predict(model, natural[fold])

        errors.append(rmse(responses[fold], predicted))
        try:
            percentages.append(mape_details(responses[fold], predicted)[0])
        except DegenerateMetricError:
            pass

    return (
        float(np.mean(errors)),
        float(np.mean(percentages)) if percentages else np.nan
    )


def cv_table(results):
    """
    One row per metric, one column per surrogate kind.
    """
    kinds = list(results)
    return pd.DataFrame(
        [
            ['MAPE'] + [results[kind][1] for kind in kinds],
            ['RMSE'] + [results[kind][0] for kind in kinds]
        ],
        columns=['metric'] + kinds
    )


def load_hpc_dataset(path, mode=None):
    """
    Read HPC variability data laid out as Frequency, No. of Threads,
    File Size, Record Size and PVM columns.

    File and record sizes above 14 are taken as raw KB values and
    log2 transformed. Discrete levels are the observed values.
    """
    frame = pd.read_csv(path)
    missing = [c for c in hpc_columns + [hpc_response]
               if c not in frame.columns]
    if missing:
        raise ConfigurationError(
            '{0} is missing columns: {1}'.format(path, ', '.join(missing))
        )

    if mode is not None:
        if 'Mode' not in frame.columns:
            raise ConfigurationError(
                '{0} has no Mode column to filter on.'.format(path)
            )
        frame = frame[frame['Mode'].astype(str) == str(mode)]

    natural = frame[hpc_columns].to_numpy(dtype=float)
    sizes = natural[:, 2:]
    if np.any(sizes > 14):
        log.info('Raw KB sizes detected in %s, applying log2', path)
        natural[:, 2:] = np.log2(sizes)

    levels = [np.unique(column) for column in natural.T]
    space = hpc_space(levels)
    design = Design(space, to_unit_cube(space, natural), 'grid')
    return Dataset(design, frame[hpc_response].to_numpy(dtype=float))


def load_dataset(path, space=None):
    """
    Dataset from an x1..xd,y CSV or the HPC column layout.

    Without a space, bounds are the observed ranges of each column.
    """
    frame = pd.read_csv(path)
    if all(column in frame.columns for column in hpc_columns):
        return load_hpc_dataset(path)

    columns = point_columns(frame)
    if not columns or 'y' not in frame.columns:
        raise ConfigurationError(
            '{0} must have columns x1..xd and y.'.format(path)
        )

    natural = frame[columns].to_numpy(dtype=float)
    if space is None:
        low = natural.min(axis=0)
        high = natural.max(axis=0)
        flat = high <= low
        high = np.where(flat, low + 1.0, high)
        space = DesignSpace(np.column_stack([low, high]))

    design = Design(space, to_unit_cube(space, natural), 'data')
    return Dataset(design, frame['y'].to_numpy(dtype=float))
