import pytest

from blind_deconv._helpers import ConfigError
from blind_deconv.config import cfg_creator
from blind_deconv.config.cfg_creator import (RunConfig, apply_overrides, load_config,
                                             parse_config, serialize_config, write_config)
from blind_deconv.solver import SolverOptions


def test_template_holds_the_defaults():
    assert load_config(cfg_creator.TEMPLATE).sections == RunConfig().sections
    assert load_config().sections == RunConfig().sections


def test_defaults():
    cfg = RunConfig()
    assert cfg.command == 'deconvolve'
    assert cfg.seed == 0
    assert cfg.get('dimensions', 'L') == 512
    assert cfg.get('experiment', 'success_threshold') == 0.02
    assert cfg.get('output', 'formats') == ('csv', 'pgm')
    assert cfg.solver_options() == SolverOptions()


def test_canonical_form_round_trips():
    cfg = parse_config('[dimensions]\nK_values = 4, 8\n[experiment]\nsnr_list = 10, inf\n')
    text = serialize_config(cfg)
    assert 'K_values = 4,8\n' in text
    assert 'snr_list = 10.0,inf\n' in text
    assert parse_config(text).sections == cfg.sections
    assert serialize_config(parse_config(text)) == text


def test_missing_keys_keep_defaults():
    cfg = parse_config('[run]\nseed = 9\n\n[solver]\nrank = 3\n')
    assert cfg.seed == 9
    assert cfg.get('solver', 'rank') == 3
    assert cfg.get('run', 'command') == 'deconvolve'
    assert cfg.get('solver', 'penalty_init') == 10.0


def test_values_are_typed():
    cfg = parse_config('[run]\ntrace = yes\n[experiment]\nsnr_db = inf\ndelay_support = 0,3,7\n')
    assert cfg.get('run', 'trace') is True
    assert cfg.get('experiment', 'snr_db') == float('inf')
    assert cfg.get('experiment', 'delay_support') == (0, 3, 7)


@pytest.mark.parametrize('text, lineno', [
    ('[run]\nseed = 1\nthis line is bad\n', 3),
    ('seed = 1\n', 1),
    ('[run]\nseed = 1\nbogus = 2\n', 3),
    ('[run]\nseed = abc\n', 2),
    ('[run]\n# comment\ntrace = maybe\n', 3),
    ('[bases]\nB_kind = wavelets\n', 2),
    ('[plots]\nwidth = 1\n', 1),
    ('[run]\nseed = 1\nseed = 2\n', 3),
])
def test_errors_carry_line_numbers(text, lineno):
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert err.value.lineno == lineno
    assert str(err.value).startswith('line {}:'.format(lineno))


def test_overrides_win_over_file_values():
    cfg = parse_config('[run]\nseed = 1\nthreads = 4\n[output]\nout = a\n')
    apply_overrides(cfg, command='channel', seed=5, threads=None, trace=True, out='b')
    assert cfg.command == 'channel'
    assert cfg.seed == 5
    assert cfg.get('run', 'threads') == 4
    assert cfg.get('run', 'trace') is True
    assert cfg.get('output', 'out') == 'b'


def test_threads():
    cfg = RunConfig()
    assert cfg.threads >= 1
    cfg.set('run', 'threads', '3')
    assert cfg.threads == 3


def test_set_parses_strings():
    cfg = RunConfig()
    cfg.set('dimensions', 'K_values', '4,8')
    cfg.set('experiment', 'input', 'y.txt')
    assert cfg.get('dimensions', 'K_values') == (4, 8)
    assert cfg.get('experiment', 'input') == 'y.txt'
    with pytest.raises(ConfigError):
        cfg.set('run', 'colour', 'red')


def test_invalid_solver_section():
    cfg = parse_config('[solver]\nrank = 0\n')
    with pytest.raises(ConfigError):
        cfg.solver_options()


def test_write_config(tmp_path):
    cfg = parse_config('[run]\nseed = 12\n')
    filename = str(tmp_path / 'run.ini')
    write_config(cfg, filename)
    assert load_config(filename).sections == cfg.sections
    with open(filename) as f:
        assert f.read() == serialize_config(cfg)
