"""
Artifact writers and the deterministic trial fan-out
shared by the experiment modules
"""
import csv
import hashlib
import logging
import os

import numpy as np
from joblib import Parallel, delayed

logger = logging.getLogger(__name__)

MANIFEST_NAME = 'manifest.txt'


def format_value(value):
    """
    Render a CSV field; floats use '{:.10g}' so that files are
    byte-identical across runs with the same inputs
    """
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return '{:.10g}'.format(float(value))
    return str(value)


def write_csv(filename, header, rows):
    """
    Write a header and rows as CSV with LF line endings
    """
    with open(filename, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    logger.info('Wrote {}'.format(filename))
    return filename


def read_csv(filename):
    with open(filename, newline='') as f:
        reader = csv.reader(f)
        header = next(reader)
        return header, [row for row in reader]


def summarize(values):
    """
    mean, median, 90th percentile and standard error of a sample
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return {'mean': float('nan'), 'median': float('nan'), 'p90': float('nan'),
                'stderr': float('nan')}
    stderr = float(np.std(values, ddof=1) / np.sqrt(values.size)) if values.size > 1 else 0.0
    return {'mean': float(np.mean(values)), 'median': float(np.median(values)),
            'p90': float(np.percentile(values, 90)), 'stderr': stderr}


SUMMARY_FIELDS = ['mean', 'median', 'p90', 'stderr']


def config_hash(config_text):
    return hashlib.sha256(config_text.encode('utf-8')).hexdigest()


def write_manifest(out_dir, command, seed, config_text, artifacts, version):
    """
    Manifest with everything needed to re-run a command

    The canonical configuration is written next to it as config.ini.
    """
    config_file = os.path.join(out_dir, 'config.ini')
    with open(config_file, 'w') as f:
        f.write(config_text)
    lines = ['tool=blind_deconv',
             'version={}'.format(version),
             'command={}'.format(command),
             'seed={}'.format(seed),
             'config=config.ini',
             'config_sha256={}'.format(config_hash(config_text)),
             'artifacts={}'.format(','.join(sorted(os.path.basename(a) for a in artifacts)))]
    filename = os.path.join(out_dir, MANIFEST_NAME)
    with open(filename, 'w') as f:
        f.write('\n'.join(lines) + '\n')
    logger.info('Wrote manifest {}'.format(filename))
    return filename


def read_manifest(filename):
    with open(filename) as f:
        return dict(line.rstrip('\n').split('=', 1) for line in f if '=' in line)


def run_tasks(fn, tasks, threads=1):
    """
    Map fn over (key, args) tasks and return [(key, result)] sorted by key

    With threads > 1 the tasks run in joblib worker processes; since
    every task derives its random stream from its key, results do not
    depend on the number of workers.
    """
    tasks = list(tasks)
    if threads is None or threads <= 1 or len(tasks) <= 1:
        results = [(key, fn(*args)) for key, args in tasks]
    else:
        values = Parallel(n_jobs=threads)(delayed(fn)(*args) for _, args in tasks)
        results = [(key, value) for (key, _), value in zip(tasks, values)]
    return sorted(results, key=lambda item: item[0])
