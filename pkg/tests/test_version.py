import os

import pytest

import blind_deconv
from blind_deconv import _version


def pieces(tag='1.2', distance=3, dirty=False):
    return {'closest-tag': tag, 'distance': distance, 'short': 'abc1234',
            'long': 'abc1234' + '0' * 33, 'dirty': dirty, 'error': None, 'date': None}


def test_package_version_is_set():
    assert isinstance(blind_deconv.__version__, str)
    assert blind_deconv.__version__


def test_get_versions_keys():
    versions = _version.get_versions()
    assert set(versions) == {'version', 'full-revisionid', 'dirty', 'error', 'date'}


def test_config_points_at_this_package():
    cfg = _version.get_config()
    assert cfg.versionfile_source == 'blind_deconv/_version.py'
    assert cfg.parentdir_prefix == 'blind_deconv-'
    assert cfg.tag_prefix == 'v'


@pytest.mark.parametrize('kwargs, expected', [
    ({}, '1.2+3.gabc1234'),
    ({'distance': 0}, '1.2'),
    ({'dirty': True}, '1.2+3.gabc1234.dirty'),
    ({'tag': None}, '0+untagged.3.gabc1234'),
])
def test_render_pep440(kwargs, expected):
    assert _version.render(pieces(**kwargs), 'pep440')['version'] == expected


def test_unexpanded_keywords_are_skipped():
    with pytest.raises(_version.NotThisMethod):
        _version.git_versions_from_keywords(_version.get_keywords(), 'v', False)


def test_version_from_release_directory(tmp_path):
    root = tmp_path / 'blind_deconv-0.3.1'
    os.makedirs(str(root))
    assert _version.versions_from_parentdir('blind_deconv-', str(root), False)['version'] == '0.3.1'
