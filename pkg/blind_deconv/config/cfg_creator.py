"""
Run configuration: defaults, parsing of key=value files with sections,
canonical serialization and command-line overrides
"""
import configparser
import logging
import os
from dataclasses import dataclass, field

from .._helpers import ConfigError
from ..solver import SolverOptions
from ..subspace import BASIS_KINDS

logger = logging.getLogger(__name__)

TEMPLATE = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'run_config_template.ini')

COMMANDS = ('deconvolve', 'phase-diagram', 'noise-sweep', 'oversample', 'channel', 'deblur',
            'theory-check')

# section -> [(key, type, default)]
SCHEMA = {
    'run': [
        ('command', 'str', 'deconvolve'),
        ('seed', 'int', 0),
        ('threads', 'int', 0),
        ('trace', 'bool', False),
    ],
    'dimensions': [
        ('L', 'int', 512),
        ('K', 'int', 25),
        ('N', 'int', 25),
        ('K_values', 'ints', (25, 50, 75, 100, 125, 150, 175, 200)),
        ('N_values', 'ints', (25, 50, 75, 100, 125, 150, 175, 200)),
        ('L_values', 'ints', ()),
    ],
    'bases': [
        ('B_kind', 'str', 'identity-first'),
        ('C_kind', 'str', 'gaussian-code'),
    ],
    'solver': [
        ('rank', 'int', 2),
        ('penalty_init', 'float', 10.0),
        ('penalty_growth', 'float', 10.0),
        ('residual_improvement', 'float', 0.25),
        ('inner_tolerance', 'float', 1e-8),
        ('max_outer_iters', 'int', 50),
        ('max_inner_iters', 'int', 1000),
        ('lbfgs_memory', 'int', 10),
        ('rank_deficiency_tol', 'float', 1e-3),
        ('equality_tol', 'float', 1e-6),
        ('slack_tol', 'float', 0.05),
        ('hinge_tol', 'float', 1e-2),
        ('max_penalty', 'float', 1e12),
    ],
    'experiment': [
        ('trials', 'int', 25),
        ('publication_trials', 'int', 100),
        ('success_threshold', 'float', 0.02),
        ('snr_db', 'float', 20.0),
        ('snr_list', 'floats', (10.0, 20.0, 30.0, 40.0, 50.0)),
        ('delta', 'float', 0.0),
        ('planted', 'bool', True),
        ('input', 'str', ''),
        ('delay_support', 'ints', ()),
        ('image', 'str', ''),
        ('image_size', 'int', 64),
        ('kernel_size', 'int', 3),
        ('wavelet_support', 'str', 'oracle'),
        ('wavelet_count', 'int', 0),
        ('energy_fraction', 'float', 0.999),
        ('observe', 'str', 'image'),
        ('theory_seeds', 'int', 50),
        ('theory_gram_seeds', 'int', 20),
        ('theory_golfing_seeds', 'int', 50),
        ('mc_samples', 'int', 100000),
        ('alpha', 'float', 1.0),
        ('max_retries', 'int', 500),
    ],
    'output': [
        ('out', 'str', 'results'),
        ('formats', 'strs', ('csv', 'pgm')),
    ],
}

CHOICES = {
    ('run', 'command'): COMMANDS,
    ('bases', 'B_kind'): BASIS_KINDS,
    ('bases', 'C_kind'): BASIS_KINDS,
    ('experiment', 'wavelet_support'): ('oracle', 'top-N-of-blurred'),
    ('experiment', 'observe'): ('image', 'model'),
}


def _parse_value(kind, text):
    text = text.strip()
    if kind == 'str':
        return text
    if kind == 'int':
        return int(text)
    if kind == 'float':
        return float(text)
    if kind == 'bool':
        lowered = text.lower()
        if lowered in ('1', 'true', 'yes', 'on'):
            return True
        if lowered in ('0', 'false', 'no', 'off'):
            return False
        raise ValueError('not a boolean: {}'.format(text))
    items = [item.strip() for item in text.split(',') if item.strip()]
    if kind == 'ints':
        return tuple(int(item) for item in items)
    if kind == 'floats':
        return tuple(float(item) for item in items)
    if kind == 'strs':
        return tuple(items)
    raise ValueError('unknown type {}'.format(kind))


def _format_value(kind, value):
    if kind == 'bool':
        return 'true' if value else 'false'
    if kind == 'float':
        return repr(float(value))
    if kind in ('ints', 'floats', 'strs'):
        fmt = repr if kind == 'floats' else str
        return ','.join(fmt(float(v) if kind == 'floats' else v) for v in value)
    return str(value)


@dataclass
class RunConfig:
    """
    Typed configuration, one dict per section
    """
    sections: dict = field(default_factory=lambda: {
        section: {key: default for key, _, default in keys} for section, keys in SCHEMA.items()})

    def __getitem__(self, section):
        return self.sections[section]

    def get(self, section, key):
        return self.sections[section][key]

    def set(self, section, key, value):
        kinds = {k: kind for k, kind, _ in SCHEMA[section]}
        if key not in kinds:
            raise ConfigError('unknown key {} in section [{}]'.format(key, section))
        if isinstance(value, str) and kinds[key] != 'str':
            value = _parse_value(kinds[key], value)
        self.sections[section][key] = value

    @property
    def command(self):
        return self.sections['run']['command']

    @property
    def seed(self):
        return self.sections['run']['seed']

    @property
    def threads(self):
        threads = self.sections['run']['threads']
        return threads if threads > 0 else (os.cpu_count() or 1)

    def solver_options(self):
        try:
            return SolverOptions(**self.sections['solver'])
        except ValueError as err:
            raise ConfigError('invalid [solver] section: {}'.format(err))


def _line_numbers(text):
    """
    (section, key) -> 1-based line number, and section -> header line
    """
    keys, headers = {}, {}
    section = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped[0] in '#;':
            continue
        if stripped.startswith('[') and stripped.endswith(']'):
            section = stripped[1:-1].strip()
            headers[section] = lineno
        elif section is not None:
            for sep in ('=', ':'):
                if sep in stripped:
                    keys[(section, stripped.split(sep, 1)[0].strip())] = lineno
                    break
    return keys, headers


def parse_config(text):
    """
    RunConfig from the text of a configuration file

    Missing keys keep their defaults. Malformed lines, unknown
    sections or keys and invalid values raise ConfigError with the
    offending line number.
    """
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.MissingSectionHeaderError as err:
        raise ConfigError('missing section header', err.lineno)
    except configparser.ParsingError as err:
        raise ConfigError('cannot parse {!r}'.format(err.errors[0][1]), err.errors[0][0])
    except (configparser.DuplicateSectionError, configparser.DuplicateOptionError) as err:
        raise ConfigError(err.message.split(': ', 1)[-1], err.lineno)
    keys, headers = _line_numbers(text)
    cfg = RunConfig()
    for section in parser.sections():
        if section not in SCHEMA:
            raise ConfigError('unknown section [{}]'.format(section), headers.get(section))
        kinds = {key: kind for key, kind, _ in SCHEMA[section]}
        for key, raw in parser.items(section):
            lineno = keys.get((section, key))
            if key not in kinds:
                raise ConfigError('unknown key {} in section [{}]'.format(key, section), lineno)
            try:
                value = _parse_value(kinds[key], raw)
            except ValueError:
                raise ConfigError('invalid {} value {!r} for {}'.format(kinds[key], raw, key),
                                  lineno)
            choices = CHOICES.get((section, key))
            if choices is not None and value not in choices:
                raise ConfigError('{} must be one of {}'.format(key, ', '.join(choices)), lineno)
            cfg.sections[section][key] = value
    return cfg


def load_config(cfg_file=None):
    """
    RunConfig from a file, or the defaults when no file is given
    """
    if cfg_file is None:
        return RunConfig()
    logger.info('Using configuration file: {}'.format(cfg_file))
    with open(cfg_file) as f:
        return parse_config(f.read())


def serialize_config(cfg):
    """
    Canonical text form: every section and key in fixed order
    """
    lines = []
    for section, keys in SCHEMA.items():
        lines.append('[{}]'.format(section))
        for key, kind, _ in keys:
            lines.append('{} = {}'.format(key, _format_value(kind, cfg.sections[section][key])))
        lines.append('')
    return '\n'.join(lines)


def apply_overrides(cfg, **overrides):
    """
    Command-line values win over file values; None means not given
    """
    targets = {'command': 'run', 'seed': 'run', 'threads': 'run', 'trace': 'run', 'out': 'output'}
    for key, value in overrides.items():
        if value is None:
            continue
        cfg.sections[targets[key]][key] = value
    return cfg


def write_config(cfg, cfg_file):
    """
    Write the canonical form of a configuration to file
    """
    logger.info('Writing configuration to {}'.format(cfg_file))
    with open(cfg_file, 'w') as f:
        f.write(serialize_config(cfg))
    return cfg_file
