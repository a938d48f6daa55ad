# Create __version__ attribute from the versioneer information
from ._version import get_versions

try:
    __version__ = get_versions()['version']
except Exception:
    __version__ = '--'
del get_versions
