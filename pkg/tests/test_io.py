import os

import numpy as np
import pytest

from blind_deconv.experiments._io import (config_hash, format_value, read_csv, read_manifest,
                                          run_tasks, summarize, write_csv, write_manifest)


def test_format_value():
    assert format_value(True) == '1'
    assert format_value(np.bool_(False)) == '0'
    assert format_value(0.1 + 0.2) == '0.3'
    assert format_value(np.float64(1e-12)) == '1e-12'
    assert format_value(7) == '7'
    assert format_value('snr_db') == 'snr_db'


def test_csv_has_header_and_lf_endings(tmp_path):
    filename = str(tmp_path / 'table.csv')
    write_csv(filename, ['K', 'err_X', 'success'], [[4, 0.25, True], [8, 1.5, False]])
    with open(filename, 'rb') as f:
        content = f.read()
    assert content == b'K,err_X,success\n4,0.25,1\n8,1.5,0\n'
    header, rows = read_csv(filename)
    assert header == ['K', 'err_X', 'success']
    assert rows == [['4', '0.25', '1'], ['8', '1.5', '0']]


def test_summarize():
    stats = summarize([1, 2, 3, 4])
    assert stats['mean'] == 2.5
    assert stats['median'] == 2.5
    assert stats['p90'] == pytest.approx(3.7)
    assert stats['stderr'] == pytest.approx(np.std([1, 2, 3, 4], ddof=1) / 2)


def test_summarize_degenerate_samples():
    assert summarize([0.5])['stderr'] == 0.0
    assert np.isnan(summarize([])['mean'])


def test_manifest(tmp_path):
    out = str(tmp_path)
    text = '[run]\nseed = 3\n'
    artifacts = [os.path.join(out, 'b.csv'), os.path.join(out, 'a.pgm')]
    filename = write_manifest(out, 'phase-diagram', 3, text, artifacts, '0.1.0')
    manifest = read_manifest(filename)
    assert manifest['tool'] == 'blind_deconv'
    assert manifest['command'] == 'phase-diagram'
    assert manifest['seed'] == '3'
    assert manifest['version'] == '0.1.0'
    assert manifest['artifacts'] == 'a.pgm,b.csv'
    assert manifest['config_sha256'] == config_hash(text)
    with open(os.path.join(out, manifest['config'])) as f:
        assert f.read() == text


@pytest.mark.parametrize('threads', [1, 2])
def test_run_tasks_returns_results_sorted_by_key(threads):
    tasks = [((2, 0), (2, 3)), ((0, 1), (3, 2)), ((1, 0), (5, 1))]
    assert run_tasks(pow, tasks, threads) == [((0, 1), 9), ((1, 0), 5), ((2, 0), 8)]
