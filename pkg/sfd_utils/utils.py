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
import hashlib
import json
import logging
import os
import sys
import tempfile
import yaml

import numpy as np
import pandas as pd

from collections import ChainMap, namedtuple
from contextlib import contextmanager, suppress

from sfd_utils import __version__
from sfd_utils.core import DesignSpace
from sfd_utils.designs import DESK_MAX_ITERATIONS, default_anneal
from sfd_utils.exceptions import ConfigurationError, SFDUtilsException
from sfd_utils.surrogates import FittedSurrogate

default_config = os.path.expanduser('~/.config/sfd_utils/config.yaml')
float_format = '%.12g'

defaults = {
    'anneal': dict(default_anneal, max_iterations=DESK_MAX_ITERATIONS),
    'augment_ccd': True,
    'config': default_config,
    'criterion': {},
    'dataset': None,
    'grid_levels': [3, 4, 5, 6, 7],
    'k': 10,
    'log_level': logging.INFO,
    'metrics': ['rmse', 'mape'],
    'mode': None,
    'n_g': 2000,
    'no_color': False,
    'replications': 10,
    'seed': 0,
    'sfd_kinds': ['maximin_lhd', 'maxpro', 'maxent', 'uniform'],
    'sfd_sizes': None,
    'surrogate': {},
    'surrogate_replications': {},
    'surrogates': ['rsm', 'mars', 'lshep', 'delaunay', 'gp'],
    'test_function': 'colville'
}

bench_config = namedtuple(
    'bench_config',
    sorted(defaults)
)

run_manifest = namedtuple(
    'run_manifest',
    [
        'command',
        'config_hash',
        'seed',
        'tool_version',
        'started',
        'finished',
        'outputs',
        'inputs'
    ]
)


def _read_yaml(path):
    try:
        with open(path) as config_file:
            return yaml.safe_load(config_file) or {}
    except yaml.YAMLError as error:
        raise ConfigurationError(
            'Unable to parse {0}: {1}'.format(path, error)
        )


def get_config(cli_context):
    """
    Process sfd-utils run config.

    Use ChainMap to build config values based on
    command line args, config and defaults.
    """
    config_path = cli_context.get('config') or default_config

    config_values = {}
    if config_path == default_config:
        with suppress(Exception):
            config_values = _read_yaml(config_path)
    else:
        config_values = _read_yaml(config_path)

    if not isinstance(config_values, dict):
        raise ConfigurationError(
            'Config file {0} must hold a mapping.'.format(config_path)
        )

    unknown = set(config_values) - set(defaults)
    if unknown:
        raise ConfigurationError(
            'Unknown config keys in {0}: {1}'.format(
                config_path, ', '.join(sorted(unknown))
            )
        )

    cli_values = {
        key: value for key, value in cli_context.items()
        if value is not None and key in defaults
    }
    data = ChainMap(cli_values, config_values, defaults)
    anneal = dict(defaults['anneal'])
    anneal.update(config_values.get('anneal') or {})
    anneal.update(cli_values.get('anneal') or {})
    data = data.new_child({'anneal': anneal})

    return bench_config(**{key: data[key] for key in defaults})


def config_hash(config):
    """
    Content hash of a resolved config or an argument mapping.
    """
    if hasattr(config, '_asdict'):
        config = config._asdict()
    payload = json.dumps(config, sort_keys=True, default=str)
    return hashlib.sha256(payload.encode('utf-8')).hexdigest()


def derive_seed(seed, *path):
    """
    Child seed from a global seed and a component path.

    Stable across processes and runs, so parallel schedules do not
    change results.
    """
    key = '/'.join([str(int(seed))] + [str(part) for part in path])
    digest = hashlib.sha256(key.encode('utf-8')).digest()
    return int.from_bytes(digest[:8], 'big')


def get_file_hash(path):
    """
    Calculate sha256 of a file read in blocks.
    """
    file_hash = hashlib.sha256()
    with open(path, 'rb') as f:
        for byte_block in iter(lambda: f.read(4096), b''):
            file_hash.update(byte_block)

    return file_hash


def load_space(path):
    """
    Build a DesignSpace from a YAML space file.
    """
    return DesignSpace.from_dict(_read_yaml(path))


def echo_style(message, no_color, fg='green'):
    if no_color:
        click.echo(message)
    else:
        click.secho(message, fg=fg)


@contextmanager
def handle_errors(log_level, no_color):
    """
    Context manager to handle exceptions and echo error msg.
    """
    try:
        yield
    except Exception as error:
        if log_level == logging.DEBUG:
            raise

        echo_style(
            "{}: {}".format(type(error).__name__, error),
            no_color,
            fg='red'
        )
        sys.exit(1)


def style_string(message, no_color, fg='yellow'):
    """
    Add color style to string if no_color is False.
    """
    if no_color:
        return message
    else:
        return click.style(message, fg=fg)


def echo_frame(frame, no_color, no_headers=False):
    """
    Echoes a data frame to terminal as a text table.
    """
    values = [
        [_format_cell(value) for value in row]
        for row in frame.itertuples(index=False)
    ]
    click.echo(
        style_string(
            _get_text_table(values, list(frame.columns), no_headers),
            no_color,
            fg='green'
        )
    )


def _format_cell(value):
    if isinstance(value, (float, np.floating)):
        return float_format % value
    return value


def _get_text_table(data, headers, no_headers=False):
    widths = _get_text_column_widths(headers, data)

    table = ""
    if no_headers is False:
        table = _get_headersline(headers, widths) + "\n"
        table += _get_separatorline(widths) + "\n"
    for item in data:
        table += _get_dataline(item, widths)
        table += "\n"
    return table


def _get_headersline(headers, widths):
    """
    Function to get the headers line for text output formatting
    """
    line = ""
    for idx, value in enumerate(headers):
        line += _padright(widths[idx], str(value))
        line += " "
    return line


def _get_separatorline(widths):
    """
    Function to get the separator line for text output formatting
    """
    return " ".join("-" * width for width in widths) + " "


def _get_dataline(data, widths):
    """
    Function to get the a line with data for text output formatting
    """
    line = ""
    for idx, s in enumerate(data):
        line += _padright(widths[idx], str(s))
        line += " "
    return line


def _padright(width, s):
    """
    Function to get a right padded string of width s
    """
    fmt = "{0:<%ds}" % width
    return fmt.format(s)


def _get_text_column_widths(headers, values):
    """
    Function to get the column with required for text formatting
    """
    widths = [len(str(header)) for header in headers]

    for value in values:
        for idx, val in enumerate(value):
            widths[idx] = max(widths[idx], len(str(val)))
    return widths


def get_logger(log_level):
    """
    Return console logger at provided log level.

    Library modules log to children of this logger.
    """
    logger = logging.getLogger('sfd_utils')
    logger.setLevel(log_level)

    if not logger.handlers:
        console_handler = logging.StreamHandler()
        console_handler.setFormatter(logging.Formatter('%(message)s'))
        logger.addHandler(console_handler)

    for handler in logger.handlers:
        handler.setLevel(log_level)
    return logger


def point_columns(frame):
    """
    Ordered x1..xd columns of a point table.
    """
    columns = [
        column for column in frame.columns
        if column.startswith('x') and column[1:].isdigit()
    ]
    return sorted(columns, key=lambda column: int(column[1:]))


def read_table(path):
    return pd.read_csv(path)


def read_points(path, dim=None):
    """
    Natural-scale points from a CSV with x1..xd columns.
    """
    frame = read_table(path)
    columns = point_columns(frame)
    if not columns or (dim is not None and len(columns) != dim):
        raise ConfigurationError(
            '{0} must have columns x1..x{1}.'.format(path, dim or 'd')
        )
    return frame[columns].to_numpy(dtype=float)


def points_frame(natural_points, tags=None, responses=None):
    natural_points = np.atleast_2d(natural_points)
    frame = pd.DataFrame(
        natural_points,
        columns=['x{0}'.format(i + 1) for i in range(natural_points.shape[1])]
    )
    if responses is not None:
        frame['y'] = responses
    if tags is not None:
        frame['tag'] = list(tags)
    return frame


def write_frame(frame, path):
    """
    Write a CSV with the fixed float format used by all outputs.
    """
    frame.to_csv(path, index=False, float_format=float_format)
    return path


def save_model(model, path):
    with open(path, 'w') as model_file:
        json.dump(model.to_dict(), model_file, indent=1)
    return path


def load_model(path):
    try:
        with open(path) as model_file:
            data = json.load(model_file)
    except ValueError as error:
        raise SFDUtilsException(
            'Unable to read model file {0}: {1}'.format(path, error)
        )
    return FittedSurrogate.from_dict(data)


def write_manifest(out_dir, manifest, name='manifest.json'):
    """
    Atomically write the run manifest after checking listed outputs exist.
    """
    missing = [
        output for output in manifest.outputs
        if not os.path.exists(os.path.join(out_dir, output))
    ]
    if missing:
        raise SFDUtilsException(
            'Outputs missing from {0}: {1}'.format(out_dir, ', '.join(missing))
        )

    path = os.path.join(out_dir, name)
    handle, temp_path = tempfile.mkstemp(dir=out_dir, suffix='.tmp')
    with os.fdopen(handle, 'w') as manifest_file:
        json.dump(manifest._asdict(), manifest_file, indent=2, default=str)
    os.replace(temp_path, path)
    return path


def new_manifest(command, config, seed, started, finished, outputs,
                 inputs=None):
    """
    Manifest for a run; inputs maps each input file to its sha256.
    """
    return run_manifest(
        command=command,
        config_hash=config_hash(config) if config is not None else None,
        seed=seed,
        tool_version=__version__,
        started=started,
        finished=finished,
        outputs=list(outputs),
        inputs={
            path: get_file_hash(path).hexdigest()
            for path in (inputs or []) if path
        }
    )


def process_shared_options(context_obj, kwargs):
    """
    Update context with values for shared options.
    """
    context_obj['config'] = kwargs['config']
    context_obj['no_color'] = kwargs['no_color']
    context_obj['log_level'] = kwargs['log_level']
