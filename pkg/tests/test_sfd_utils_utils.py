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

import json
import logging
import os

import numpy as np
import pandas as pd
import pytest

from sfd_utils.core import Dataset, Design, DesignSpace
from sfd_utils.designs import DESK_MAX_ITERATIONS, default_anneal
from sfd_utils.exceptions import (
    ConfigurationError,
    ModelFormatError,
    SFDUtilsException
)
from sfd_utils.surrogates import fit_delaunay
from sfd_utils.utils import (
    config_hash,
    default_config,
    derive_seed,
    echo_frame,
    get_config,
    get_file_hash,
    get_logger,
    load_model,
    load_space,
    new_manifest,
    points_frame,
    read_points,
    save_model,
    write_frame,
    write_manifest
)


def test_get_config_defaults():
    config = get_config({'config': default_config})
    assert config.test_function == 'colville'
    assert config.grid_levels == [3, 4, 5, 6, 7]
    assert config.seed == 0


def test_get_config_anneal_matches_library(tmp_path):
    config = get_config({'config': default_config})
    for key, value in default_anneal.items():
        if key != 'max_iterations':
            assert config.anneal[key] == value
    assert config.anneal['max_iterations'] == DESK_MAX_ITERATIONS

    path = tmp_path / 'run.yaml'
    path.write_text('anneal:\n  cooling_rate: 0.9\n')
    config = get_config({'config': str(path)})
    assert config.anneal['cooling_rate'] == 0.9
    assert config.anneal['iterations_per_point'] == 10000
    assert config.anneal['max_iterations'] == DESK_MAX_ITERATIONS


def test_get_config_layering(tmp_path):
    path = tmp_path / 'run.yaml'
    path.write_text('seed: 4\nreplications: 3\nn_g: 500\n')
    config = get_config({'config': str(path), 'seed': 9, 'n_g': None})
    assert config.seed == 9
    assert config.replications == 3
    assert config.n_g == 500


@pytest.mark.parametrize(
    "content",
    ['colour: red\n', '- 1\n- 2\n', 'seed: [1\n'],
    ids=['unknown-key', 'not-mapping', 'bad-yaml']
)
def test_get_config_invalid(tmp_path, content):
    path = tmp_path / 'run.yaml'
    path.write_text(content)
    with pytest.raises(ConfigurationError):
        get_config({'config': str(path)})


def test_config_hash_stable():
    first = config_hash({'b': 1, 'a': [1, 2]})
    second = config_hash({'a': [1, 2], 'b': 1})
    assert first == second
    assert first != config_hash({'a': [1, 2], 'b': 2})


def test_derive_seed():
    assert derive_seed(0, 'design', 'maxpro', 54, 0) == \
        derive_seed(0, 'design', 'maxpro', 54, 0)
    assert derive_seed(0, 'test') != derive_seed(1, 'test')
    assert 0 <= derive_seed(3, 'cv') < 2 ** 64


def test_get_file_hash(tmp_path):
    path = tmp_path / 'file.txt'
    path.write_text('design')
    digest = get_file_hash(str(path)).hexdigest()
    assert len(digest) == 64
    assert digest == get_file_hash(str(path)).hexdigest()


def test_load_space():
    space = load_space('tests/data/space_hpc.yaml')
    assert space.dim == 4
    assert space.is_discrete
    assert space.names[0] == 'frequency'


def test_points_round_trip(tmp_path):
    path = str(tmp_path / 'points.csv')
    natural = np.array([[1.5, 2.0], [0.25, 3.0]])
    write_frame(points_frame(natural, tags=['sfd', 'augmented']), path)
    assert np.allclose(read_points(path, 2), natural)
    assert pd.read_csv(path)['tag'].tolist() == ['sfd', 'augmented']


def test_read_points_wrong_width(tmp_path):
    path = str(tmp_path / 'points.csv')
    write_frame(points_frame(np.zeros((2, 3))), path)
    with pytest.raises(ConfigurationError):
        read_points(path, 2)


def test_save_and_load_model(tmp_path):
    space = DesignSpace.unit_cube(1)
    data = Dataset(Design(space, [[0.0], [1.0]], 'grid'), [0.0, 10.0])
    path = str(tmp_path / 'model.json')
    save_model(fit_delaunay(data), path)

    model = load_model(path)
    assert model.kind == 'delaunay'
    with open(path) as model_file:
        assert json.load(model_file)['format'] == 'sfd-utils-model'


def test_load_model_invalid(tmp_path):
    path = tmp_path / 'model.json'
    path.write_text('not json')
    with pytest.raises(SFDUtilsException):
        load_model(str(path))

    path.write_text('{"format": "other"}')
    with pytest.raises(ModelFormatError):
        load_model(str(path))


def test_write_manifest(tmp_path):
    out_dir = str(tmp_path)
    write_frame(pd.DataFrame({'a': [1.0]}), os.path.join(out_dir, 'a.csv'))
    records = os.path.join(out_dir, 'records.csv')
    write_frame(pd.DataFrame({'rmse': [0.5]}), records)
    manifest = new_manifest(
        'report', {'records': 'a.csv'}, 0, 'start', 'end', ['a.csv'],
        inputs=[records, None]
    )
    path = write_manifest(out_dir, manifest)

    with open(path) as manifest_file:
        data = json.load(manifest_file)
    assert data['command'] == 'report'
    assert data['outputs'] == ['a.csv']
    assert data['config_hash'] == config_hash({'records': 'a.csv'})
    assert data['inputs'] == {
        records: get_file_hash(records).hexdigest()
    }


def test_write_manifest_missing_output(tmp_path):
    manifest = new_manifest('bench', None, 0, 'start', 'end', ['gone.csv'])
    with pytest.raises(SFDUtilsException):
        write_manifest(str(tmp_path), manifest)


def test_echo_frame(capsys):
    echo_frame(
        pd.DataFrame({'metric': ['RMSE'], 'gp': [0.123456789012345]}),
        no_color=True
    )
    out, _ = capsys.readouterr()
    lines = out.splitlines()
    assert lines[0].split() == ['metric', 'gp']
    assert set(lines[1].strip()) == {'-', ' '}
    assert lines[2].split() == ['RMSE', '0.123456789012']


def test_get_logger_single_handler():
    logger = get_logger(logging.DEBUG)
    logger = get_logger(logging.WARNING)
    assert len(logger.handlers) == 1
    assert logger.level == logging.WARNING
